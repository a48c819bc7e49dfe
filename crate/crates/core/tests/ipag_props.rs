mod common;

use common::*;
use gcore::ipag::{compile, commute_ladder_through, InterleavedCircuit};
use gcore::{Circuit, CircuitOp, CoreState, Error, GaussianUnitary, LadderEvent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_interleaved(rng: &mut ChaCha8Rng, m: usize, n: usize, subtraction_rate: f64) -> Vec<CircuitOp> {
    let mut ops = Vec::new();
    for j in 0..=n {
        let count = rng.random_range(0..=3);
        ops.extend(gate_ops(&random_gates(rng, m, count)));
        if j < n {
            let mode = rng.random_range(0..m);
            let ev = if rng.random_bool(subtraction_rate) { LadderEvent::subtraction(mode) } else { LadderEvent::addition(mode) };
            ops.push(CircuitOp::Ladder(ev));
        }
    }
    ops
}

#[test]
fn pure_additions_have_degree_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let m = rng.random_range(1..=4);
        let n = rng.random_range(0..=4);
        let ops = random_interleaved(&mut rng, m, n, 0.0);
        let compiled = Circuit::new(CoreState::vacuum(m).unwrap(), ops).unwrap().compile().unwrap();
        assert_eq!(compiled.core.degree() as usize, n);
    }
}

#[test]
fn mixed_events_have_degree_at_most_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=4);
        let ops = random_interleaved(&mut rng, m, n, 0.5);
        match Circuit::new(CoreState::vacuum(m).unwrap(), ops).unwrap().compile() {
            Ok(c) => assert!(c.core.degree() as usize <= n),
            Err(e) => assert_eq!(e, Error::ZeroState),
        }
    }
}

#[test]
fn trailing_layer_only_changes_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..20 {
        let m = 2;
        let layers: Vec<GaussianUnitary> = (0..4).map(|_| unitary_of(m, &random_gates(&mut rng, m, 2))).collect();
        let events = vec![LadderEvent::addition(0), LadderEvent::addition(1), LadderEvent::addition(0)];
        let split = compile(&InterleavedCircuit::new(layers.clone(), events.clone()).unwrap()).unwrap();

        let mut merged_layers = layers.clone();
        let tail = merged_layers.pop().unwrap();
        let extra = unitary_of(m, &random_gates(&mut rng, m, 2));
        merged_layers.push(extra.compose(&tail).unwrap());
        let merged = compile(&InterleavedCircuit::new(merged_layers, events.clone()).unwrap()).unwrap();
        assert!(merged.core.overlap(&split.core).unwrap().norm() > 1.0 - 1e-10);
        assert!((merged.norm - split.norm).abs() < 1e-10 * split.norm);
    }
}

#[test]
fn flat_and_layered_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..20 {
        let m = 3;
        let ops = random_interleaved(&mut rng, m, 3, 0.0);
        let circuit = Circuit::new(CoreState::vacuum(m).unwrap(), ops.clone()).unwrap();
        let flat = circuit.compile().unwrap();

        // group consecutive gates into layers by hand
        let mut layers = vec![Vec::new()];
        let mut events = Vec::new();
        for op in &ops {
            match op {
                CircuitOp::Gate(g) => layers.last_mut().unwrap().push(*g),
                CircuitOp::Ladder(e) => {
                    events.push(*e);
                    layers.push(Vec::new());
                }
            }
        }
        let layers = layers.iter().map(|gs| unitary_of(m, gs)).collect();
        let layered = compile(&InterleavedCircuit::new(layers, events).unwrap()).unwrap();
        assert!(layered.core.overlap(&flat.core).unwrap().norm() > 1.0 - 1e-10);
        assert!(layered.unitary.symplectic().max_abs_diff(flat.unitary.symplectic()) < 1e-10);
    }
}

#[test]
fn beamsplitter_spreads_addition() {
    let bs = gcore::gaussian::ElementaryGate::Beamsplitter { modes: [0, 1], theta: 0.3, phi: 0.0 };
    let w = GaussianUnitary::from_gate(&bs, 2).unwrap();
    let op = commute_ladder_through(&w, &LadderEvent::addition(0)).unwrap();
    assert!((op.create[0].re - 0.3f64.cos()).abs() < 1e-15);
    assert!((op.create[1].re + 0.3f64.sin()).abs() < 1e-15);
    assert!(op.annih.iter().all(|z| z.norm() < 1e-15));
}
