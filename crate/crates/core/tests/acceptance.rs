//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gcore::density::{core_density, fock_density, DensityQuery};
use gcore::hafnian::reference::{loop_hafnian_enumerate, permanent_expand};
use gcore::hafnian::{build_reduced_matrix, hafnian, loop_hafnian, permanent, t_integral, ReducedMatrixSpec};
use gcore::ipag::ipag_exclusion_witness;
use gcore::oracle::{oracle_density, simulate, DEFAULT_CUTOFF};
use gcore::{CMatrix, Circuit, CircuitOp, CoreState, DensityEvaluator, FockIndex, LadderEvent, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn kernel_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut count = 0;
    for r in 1..=10 {
        for _ in 0..52 {
            let a = random_symmetric(&mut rng, r);
            let fast = loop_hafnian(&a).unwrap();
            let slow = loop_hafnian_enumerate(&a).unwrap();
            worst = worst.max((fast - slow).norm() / slow.norm());
            count += 1;
        }
    }
    let mut worst_perm = 0.0f64;
    for k in 1..=5 {
        for _ in 0..10 {
            let b = CMatrix::from_fn(k, k, |_, _| random_c64(&mut rng, 1.0));
            let reference = permanent_expand(&b).unwrap();
            let embedded = CMatrix::from_fn(2 * k, 2 * k, |i, j| match (i < k, j < k) {
                (true, false) => b[(i, j - k)],
                (false, true) => b[(j, i - k)],
                _ => C64::new(0.0, 0.0),
            });
            for value in [permanent(&b).unwrap(), hafnian(&embedded).unwrap()] {
                worst_perm = worst_perm.max((value - reference).norm() / reference.norm());
            }
        }
    }
    outcome(
        worst <= 1e-10 && worst_perm <= 1e-10,
        format!("{count} loop hafnians, max rel err {worst:.2e}; permanent embedding max rel err {worst_perm:.2e}"),
    )
}

fn reduced_matrix_construction() -> Outcome {
    // distinct tags make entry equality a symbolic check
    let v = CMatrix::from_fn(4, 4, |i, j| C64::new((10 * (i.min(j) + 1) + i.max(j) + 1) as f64, 0.0));
    let d: Vec<C64> = (1..=4).map(|k| C64::new(0.0, k as f64)).collect();
    let spec = ReducedMatrixSpec { v: v.clone(), d: d.clone(), p: FockIndex::new(vec![2, 0]), q: FockIndex::new(vec![1, 0]) };
    let expected = CMatrix::from_rows(&[
        vec![d[0], v[(0, 0)], v[(0, 2)]],
        vec![v[(0, 0)], d[0], v[(0, 2)]],
        vec![v[(2, 0)], v[(2, 0)], d[2]],
    ])
    .unwrap();
    let example_ok = build_reduced_matrix(&spec).unwrap() == expected;

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    let mut count = 0;
    for m in 1..=2usize {
        let v = random_symmetric(&mut rng, 2 * m);
        let d: Vec<C64> = (0..2 * m).map(|_| random_c64(&mut rng, 1.0)).collect();
        // every exponent vector over the 2m variables with total at most 4
        let mut stack = vec![vec![]];
        while let Some(e) = stack.pop() {
            if e.len() < 2 * m {
                let used: u32 = e.iter().sum();
                for k in 0..=(4 - used) {
                    let mut next = e.clone();
                    next.push(k);
                    stack.push(next);
                }
                continue;
            }
            let spec = ReducedMatrixSpec {
                v: v.clone(),
                d: d.clone(),
                p: FockIndex::new(e[..m].to_vec()),
                q: FockIndex::new(e[m..].to_vec()),
            };
            let total: u32 = e.iter().sum();
            let sign = if total.is_multiple_of(2) { 1.0 } else { -1.0 };
            let oracle = taylor::derivative(&v, &d, &e) * sign;
            worst = worst.max((t_integral(&spec).unwrap() - oracle).norm());
            count += 1;
        }
    }
    outcome(
        example_ok && worst <= 1e-9,
        format!("worked example exact: {example_ok}; {count} integrals vs Taylor oracle, max abs err {worst:.2e}"),
    )
}

fn density_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    let mut leakage = 0.0f64;
    let queries = 200;
    for _ in 0..queries {
        let m = rng.random_range(1..=3);
        let support = rng.random_range(1..=6);
        let core = random_core(&mut rng, m, 4, support);
        let count = rng.random_range(1..=6);
        let gates = random_moderate_gates(&mut rng, m, count);
        let alpha: Vec<C64> = (0..m).map(|_| random_in_disk(&mut rng, 1.5)).collect();
        let exact = core_density(&DensityQuery::full(unitary_of(m, &gates), core.clone(), alpha.clone())).unwrap();
        let circ = Circuit::new(core, gate_ops(&gates)).unwrap();
        let oracle = oracle_density(&simulate(&circ, DEFAULT_CUTOFF).unwrap(), &alpha).unwrap();
        worst = worst.max((exact - oracle.density).abs());
        leakage = leakage.max(oracle.leakage);
    }
    outcome(
        worst <= 1e-6,
        format!("{queries} queries (m<=3, degree<=4, support<=6), max abs dev {worst:.2e}, max oracle leakage {leakage:.1e}"),
    )
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst = 0.0f64;
    let cases = 12;
    for _ in 0..cases {
        let support = rng.random_range(1..=4);
        let core = random_core(&mut rng, 1, 3, support);
        let count = rng.random_range(1..=3);
        let gates = random_gates(&mut rng, 1, count);
        let ev = DensityEvaluator::full(&unitary_of(1, &gates), &core).unwrap();
        let total = integrate_plane(|a| ev.density(&[a]).unwrap(), C64::new(0.0, 0.0), 10.0, 0.15);
        worst = worst.max((total - 1.0).abs());
    }
    outcome(worst <= 1e-4, format!("{cases} single-mode inputs, max |integral - 1| {worst:.2e}"))
}

fn marginals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let h = 1.0 / 2f64.sqrt();
    let bell = CoreState::new([(FockIndex::new(vec![0, 0]), c(h, 0.0)), (FockIndex::new(vec![1, 1]), c(h, 0.0))], false).unwrap();
    let mut cases = vec![(bell, vec![])];
    for _ in 0..4 {
        let core = random_core(&mut rng, 2, 3, 3);
        let gates = random_gates(&mut rng, 2, 4);
        cases.push((core, gates));
    }
    let mut worst = 0.0f64;
    let mut count = 0;
    for (core, gates) in &cases {
        let g = unitary_of(2, gates);
        let full = DensityEvaluator::full(&g, core).unwrap();
        for measured in [0usize, 1] {
            let marg = DensityEvaluator::new(&g, core, &[measured]).unwrap();
            let a = random_in_disk(&mut rng, 1.2);
            let integrated = integrate_plane(
                |b| full.density(&if measured == 0 { [a, b] } else { [b, a] }).unwrap(),
                C64::new(0.0, 0.0),
                10.0,
                0.15,
            );
            worst = worst.max((marg.density(&[a]).unwrap() - integrated).abs());
            count += 1;
        }
    }
    outcome(worst <= 1e-5, format!("{count} two-mode marginals vs quadrature, max abs dev {worst:.2e}"))
}

fn fock_path() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.random_range(1..=4);
        let occ: Vec<u32> = (0..m).map(|_| rng.random_range(0..=2)).collect();
        let n = FockIndex::new(occ);
        let count = rng.random_range(1..=6);
        let g = unitary_of(m, &random_gates(&mut rng, m, count));
        let alpha: Vec<C64> = (0..m).map(|_| random_in_disk(&mut rng, 1.5)).collect();
        let a = fock_density(&g, &n, &alpha).unwrap();
        let b = core_density(&DensityQuery::full(g, CoreState::fock(n).unwrap(), alpha)).unwrap();
        worst = worst.max((a - b).abs() / b.max(1e-300));
    }
    outcome(worst <= 1e-10, format!("100 Fock inputs, max rel dev {worst:.2e}"))
}

fn ipag_compiler() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut degree_ok = 0;
    let circuits = 120;
    let ops_for = |rng: &mut ChaCha8Rng, m: usize, n: usize| {
        let per_layer: Vec<usize> = (0..=n).map(|_| rng.random_range(1..=3)).collect();
        let mut gates = random_moderate_gates(rng, m, per_layer.iter().sum()).into_iter();
        let mut ops = Vec::new();
        for (j, &count) in per_layer.iter().enumerate() {
            ops.extend(gate_ops(&gates.by_ref().take(count).collect::<Vec<_>>()));
            if j < n {
                ops.push(CircuitOp::Ladder(LadderEvent::addition(rng.random_range(0..m))));
            }
        }
        ops
    };
    for _ in 0..circuits {
        let m = rng.random_range(1..=4);
        let n = rng.random_range(0..=4);
        let ops = ops_for(&mut rng, m, n);
        let compiled = Circuit::new(CoreState::vacuum(m).unwrap(), ops).unwrap().compile().unwrap();
        if compiled.core.degree() as usize == n {
            degree_ok += 1;
        }
    }
    let mut worst = 0.0f64;
    let mut leakage = 0.0f64;
    let end_to_end = 60;
    for _ in 0..end_to_end {
        let m = rng.random_range(1..=2);
        let n = rng.random_range(1..=3);
        let circ = Circuit::new(CoreState::vacuum(m).unwrap(), ops_for(&mut rng, m, n)).unwrap();
        let compiled = circ.compile().unwrap();
        let alpha: Vec<C64> = (0..m).map(|_| random_in_disk(&mut rng, 1.5)).collect();
        let exact = core_density(&DensityQuery::full(compiled.unitary, compiled.core, alpha.clone())).unwrap();
        let oracle = oracle_density(&simulate(&circ, DEFAULT_CUTOFF).unwrap(), &alpha).unwrap();
        worst = worst.max((exact - oracle.density).abs());
        leakage = leakage.max(oracle.leakage);
    }
    outcome(
        degree_ok == circuits && worst <= 1e-6,
        format!(
            "degree = n on {degree_ok}/{circuits} addition circuits; {end_to_end} end-to-end vs oracle, max abs dev {worst:.2e}, max oracle leakage {leakage:.1e}"
        ),
    )
}

fn scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let m = 4;
    let g = unitary_of(m, &random_gates(&mut rng, m, 12));
    let alpha: Vec<C64> = (0..m).map(|_| random_in_disk(&mut rng, 0.5)).collect();
    let mut times = Vec::new();
    for n in 10..=14u32 {
        let mut occ = vec![0u32; m];
        for k in 0..n {
            occ[k as usize % m] += 1;
        }
        let ev = DensityEvaluator::full(&g, &CoreState::fock(FockIndex::new(occ)).unwrap()).unwrap();
        let mut samples: Vec<f64> = (0..5)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(ev.density(std::hint::black_box(&alpha)).unwrap());
                start.elapsed().as_secs_f64()
            })
            .collect();
        samples.sort_by(f64::total_cmp);
        times.push(samples[2]);
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let mean = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    outcome(
        (1.5..=3.0).contains(&mean),
        format!("n=10..14 median times {:.1}ms..{:.1}ms, step ratios [{}], mean {mean:.2}", times[0] * 1e3, times[4] * 1e3, shown.join(", ")),
    )
}

fn exclusion_witness() -> Outcome {
    let report = ipag_exclusion_witness(1000, 100, 109).unwrap();
    outcome(
        report.passed(),
        format!(
            "{} compilations, max fidelity {:.6}; {} constrained draws ({} rejected), max |1_2> coefficient {:e}, expansion err {:.1e}",
            report.samples, report.max_fidelity, report.draws, report.rejected, report.max_obstruction, report.expansion_error
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("kernel correctness", kernel_correctness),
        ("reduced matrix and Gaussian integral", reduced_matrix_construction),
        ("density vs truncated-Fock oracle", density_vs_oracle),
        ("normalization", normalization),
        ("marginals", marginals),
        ("Fock fast path", fock_path),
        ("photon-addition compiler", ipag_compiler),
        ("exponential scaling", scaling),
        ("non-IPAG witness", exclusion_witness),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {} ({:.1}s)", i + 1, result.detail, start.elapsed().as_secs_f64());
        if !result.pass {
            failures += 1;
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
