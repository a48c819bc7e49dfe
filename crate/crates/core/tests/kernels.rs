mod common;

use common::*;
use gcore::hafnian::reference::{hafnian_enumerate, loop_hafnian_enumerate, permanent_expand};
use gcore::hafnian::{build_reduced_matrix, hafnian, loop_hafnian, permanent, t_integral, ReducedMatrixSpec};
use gcore::{CMatrix, FockIndex, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn block_embedding(b: &CMatrix) -> CMatrix {
    let k = b.rows();
    CMatrix::from_fn(2 * k, 2 * k, |i, j| match (i < k, j < k) {
        (true, false) => b[(i, j - k)],
        (false, true) => b[(j, i - k)],
        _ => C64::new(0.0, 0.0),
    })
}

#[test]
fn permanent_is_hafnian_of_block_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 1..=5 {
        for _ in 0..5 {
            let b = CMatrix::from_fn(k, k, |_, _| random_c64(&mut rng, 1.0));
            let p = permanent(&b).unwrap();
            assert!(rel_err(permanent_expand(&b).unwrap(), p) < 1e-12);
            assert!(rel_err(hafnian(&block_embedding(&b)).unwrap(), p) < 1e-10);
        }
    }
}

#[test]
fn hafnian_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for r in [0, 2, 4, 6, 8, 10] {
        let a = random_symmetric(&mut rng, r);
        assert!(rel_err(hafnian(&a).unwrap(), hafnian_enumerate(&a).unwrap()) < 1e-10);
    }
}

#[test]
fn t_integral_matches_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = 2;
    let v = random_symmetric(&mut rng, 2 * m);
    let d: Vec<C64> = (0..2 * m).map(|_| random_c64(&mut rng, 1.0)).collect();
    for (p, q) in [([2, 0], [1, 1]), ([0, 1], [3, 0]), ([1, 1], [1, 1]), ([0, 0], [0, 4])] {
        let spec = ReducedMatrixSpec { v: v.clone(), d: d.clone(), p: FockIndex::new(p.to_vec()), q: FockIndex::new(q.to_vec()) };
        let exps: Vec<u32> = p.iter().chain(&q).copied().collect();
        let total: u32 = exps.iter().sum();
        let sign = if total.is_multiple_of(2) { 1.0 } else { -1.0 };
        let expected = taylor::derivative(&v, &d, &exps) * sign;
        assert!((t_integral(&spec).unwrap() - expected).norm() < 1e-9 * expected.norm().max(1.0));
    }
}

#[test]
fn large_loop_hafnian_is_finite_and_consistent() {
    // all-ones 2n×2n: the number of partitions into pairs and singletons
    // (telephone numbers)
    let ones = CMatrix::from_fn(12, 12, |_, _| C64::new(1.0, 0.0));
    assert!((loop_hafnian(&ones).unwrap().re - 140152.0).abs() < 1e-6);
    let mut zero_diag = ones.clone();
    for i in 0..12 {
        zero_diag[(i, i)] = C64::new(0.0, 0.0);
    }
    // (12 − 1)!! perfect matchings
    assert!((hafnian(&zero_diag).unwrap().re - 10395.0).abs() < 1e-7);
}

fn symmetric_strategy() -> impl Strategy<Value = (CMatrix, Vec<usize>)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(vals, perm)| {
                let mut a = CMatrix::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        let (re, im) = vals[i * n + j];
                        a[(i, j)] = C64::new(re, im);
                        a[(j, i)] = C64::new(re, im);
                    }
                }
                (a, perm)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loop_hafnian_permutation_invariant((a, perm) in symmetric_strategy()) {
        let n = a.rows();
        let permuted = CMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let x = loop_hafnian(&a).unwrap();
        let y = loop_hafnian(&permuted).unwrap();
        prop_assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0));
        prop_assert!((x - loop_hafnian_enumerate(&a).unwrap()).norm() <= 1e-10 * x.norm().max(1.0));
    }

    #[test]
    fn reduced_matrix_ordering_irrelevant(seed in 0u64..1000, p0 in 0u32..3, p1 in 0u32..3, q0 in 0u32..3, q1 in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_symmetric(&mut rng, 4);
        let d: Vec<C64> = (0..4).map(|_| random_c64(&mut rng, 1.0)).collect();
        let spec = ReducedMatrixSpec { v, d, p: FockIndex::new(vec![p0, p1]), q: FockIndex::new(vec![q0, q1]) };
        let a = build_reduced_matrix(&spec).unwrap();
        let n = a.rows();
        let reversed = CMatrix::from_fn(n, n, |i, j| a[(n - 1 - i, n - 1 - j)]);
        let x = loop_hafnian(&a).unwrap();
        prop_assert!((x - loop_hafnian(&reversed).unwrap()).norm() <= 1e-10 * x.norm().max(1.0));
    }
}
