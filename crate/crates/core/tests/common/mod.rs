#![allow(dead_code)]

pub mod taylor;

use gcore::gaussian::ElementaryGate;
use gcore::{CircuitOp, CoreState, FockIndex, GaussianUnitary, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_c64(rng: &mut impl Rng, scale: f64) -> C64 {
    c(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// Complex number with modulus at most `radius`.
pub fn random_in_disk(rng: &mut impl Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(0.0..core::f64::consts::TAU))
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> gcore::CMatrix {
    let mut a = gcore::CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = random_c64(rng, 1.0);
            a[(i, j)] = z;
            a[(j, i)] = z;
        }
    }
    a
}

/// Gate with `|β| ≤ 1` and squeezing `r ≤ 0.5`.
pub fn random_gate(rng: &mut impl Rng, m: usize) -> ElementaryGate {
    let a = rng.random_range(0..m);
    let b = if m > 1 { (a + rng.random_range(1..m)) % m } else { a };
    let kinds = if m > 1 { 6 } else { 3 };
    match rng.random_range(0..kinds) {
        0 => ElementaryGate::Displacement { mode: a, beta: random_in_disk(rng, 1.0) },
        1 => ElementaryGate::Rotation { mode: a, phi: rng.random_range(-3.2..3.2) },
        2 => ElementaryGate::Squeeze { mode: a, xi: random_in_disk(rng, 0.5) },
        3 => ElementaryGate::Beamsplitter { modes: [a, b], theta: rng.random_range(-1.6..1.6), phi: rng.random_range(-3.2..3.2) },
        4 => ElementaryGate::TwoModeSqueeze { modes: [a, b], xi: random_in_disk(rng, 0.5) },
        _ => ElementaryGate::Swap { modes: [a, b] },
    }
}

pub fn random_gates(rng: &mut impl Rng, m: usize, count: usize) -> Vec<ElementaryGate> {
    (0..count).map(|_| random_gate(rng, m)).collect()
}

pub fn unitary_of(m: usize, gates: &[ElementaryGate]) -> GaussianUnitary {
    GaussianUnitary::from_gates(m, gates.iter()).unwrap()
}

pub fn gate_ops(gates: &[ElementaryGate]) -> Vec<CircuitOp> {
    gates.iter().cloned().map(CircuitOp::Gate).collect()
}

/// Normalized core state on `m` modes with the given degree bound and
/// support size (support may end up smaller if occupations repeat).
pub fn random_core(rng: &mut impl Rng, m: usize, max_degree: u32, support: usize) -> CoreState {
    let mut terms = Vec::new();
    for _ in 0..support {
        let total = rng.random_range(0..=max_degree);
        let mut occ = vec![0u32; m];
        for _ in 0..total {
            occ[rng.random_range(0..m)] += 1;
        }
        terms.push((FockIndex::new(occ), random_c64(rng, 1.0)));
    }
    CoreState::new(terms, true).unwrap()
}

/// Trapezoid rule over the square `center ± half_width` in the complex
/// plane. Spectrally accurate for smooth integrands that vanish at the edges.
pub fn integrate_plane(mut f: impl FnMut(C64) -> f64, center: C64, half_width: f64, h: f64) -> f64 {
    let n = (half_width / h).round() as i64;
    let mut total = 0.0;
    for i in -n..=n {
        for j in -n..=n {
            total += f(center + c(i as f64 * h, j as f64 * h));
        }
    }
    total * h * h
}

/// Passive gate: rotation, beamsplitter or swap.
pub fn random_passive_gate(rng: &mut impl Rng, m: usize) -> ElementaryGate {
    loop {
        let g = random_gate(rng, m);
        if matches!(g, ElementaryGate::Rotation { .. } | ElementaryGate::Beamsplitter { .. } | ElementaryGate::Swap { .. }) {
            return g;
        }
    }
}

/// `count` gates of which at most one squeezes (`r ≤ 0.5`) and at most one
/// displaces (`|β| ≤ 1`); the rest are passive. Keeps the compound
/// squeezing and displacement of the whole circuit within the single-gate
/// bounds, the regime where a cutoff of 25 resolves the state.
pub fn random_moderate_gates(rng: &mut impl Rng, m: usize, count: usize) -> Vec<ElementaryGate> {
    let mut gates: Vec<ElementaryGate> = (0..count).map(|_| random_passive_gate(rng, m)).collect();
    if count > 0 && rng.random_bool(0.8) {
        let a = rng.random_range(0..m);
        let squeeze = if m > 1 && rng.random_bool(0.5) {
            let b = (a + rng.random_range(1..m)) % m;
            ElementaryGate::TwoModeSqueeze { modes: [a, b], xi: random_in_disk(rng, 0.5) }
        } else {
            ElementaryGate::Squeeze { mode: a, xi: random_in_disk(rng, 0.5) }
        };
        let at = rng.random_range(0..count);
        gates[at] = squeeze;
    }
    if count > 1 && rng.random_bool(0.8) {
        let at = rng.random_range(0..count);
        if !matches!(gates[at], ElementaryGate::Squeeze { .. } | ElementaryGate::TwoModeSqueeze { .. }) {
            gates[at] = ElementaryGate::Displacement { mode: rng.random_range(0..m), beta: random_in_disk(rng, 1.0) };
        }
    }
    gates
}
