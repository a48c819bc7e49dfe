mod common;

use common::*;
use gcore::density::{core_density, DensityQuery};
use gcore::oracle::{circuit_density, DEFAULT_CUTOFF};
use gcore::{Circuit, CircuitOp, LadderEvent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_core_circuits_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let m = rng.random_range(1..=3);
        let support = rng.random_range(1..=6);
        let core = random_core(&mut rng, m, 4, support);
        let count = rng.random_range(1..=4);
        let gates = random_moderate_gates(&mut rng, m, count);
        let alpha: Vec<_> = (0..m).map(|_| random_in_disk(&mut rng, 1.5)).collect();
        let exact = core_density(&DensityQuery::full(unitary_of(m, &gates), core.clone(), alpha.clone())).unwrap();
        let circ = Circuit::new(core, gate_ops(&gates)).unwrap();
        let oracle = circuit_density(&circ, &alpha, DEFAULT_CUTOFF).unwrap();
        worst = worst.max((exact - oracle).abs());
    }
    eprintln!("worst deviation {worst:e}");
    assert!(worst < 1e-6, "worst deviation {worst:e}");
}

#[test]
fn interleaved_circuits_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = rng.random_range(1..=2);
        let n = rng.random_range(1..=3);
        let mut gates = random_moderate_gates(&mut rng, m, 2 * (n + 1)).into_iter();
        let mut ops = Vec::new();
        for j in 0..=n {
            ops.extend(gate_ops(&gates.by_ref().take(2).collect::<Vec<_>>()));
            if j < n {
                let mode = rng.random_range(0..m);
                let ev = if rng.random_bool(0.3) { LadderEvent::subtraction(mode) } else { LadderEvent::addition(mode) };
                ops.push(CircuitOp::Ladder(ev));
            }
        }
        let circ = Circuit::new(gcore::CoreState::vacuum(m).unwrap(), ops).unwrap();
        let compiled = match circ.compile() {
            Ok(c) => c,
            Err(gcore::Error::ZeroState) => continue,
            Err(e) => panic!("{e}"),
        };
        let st = gcore::oracle::simulate(&circ, DEFAULT_CUTOFF).unwrap();
        assert!((st.ladder_norm() - compiled.norm).abs() < 1e-4 * compiled.norm, "{} vs {}", st.ladder_norm(), compiled.norm);
        let alpha: Vec<_> = (0..m).map(|_| random_in_disk(&mut rng, 1.5)).collect();
        let exact = core_density(&DensityQuery::full(compiled.unitary, compiled.core, alpha.clone())).unwrap();
        let oracle = gcore::oracle::oracle_density(&st, &alpha).unwrap().density;
        worst = worst.max((exact - oracle).abs());
    }
    eprintln!("worst deviation {worst:e}");
    assert!(worst < 1e-6, "worst deviation {worst:e}");
}
