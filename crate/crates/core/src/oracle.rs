//! Brute-force truncated-Fock simulator used to verify the density formula.
//!
//! States are dense tensors of shape `(Λ+1)ᵐ` for `m ≤ 3`. Each gate is the
//! exponential of its quadratic generator:
//!
//! | gate | generator |
//! |---|---|
//! | displacement `β` | `β â† − β* â` |
//! | rotation `φ` | `i φ n̂` |
//! | squeeze `ξ` | `½ (ξ* â² − ξ â†²)` |
//! | beamsplitter `θ, φ` | `θ (e^{iφ} â b̂† − e^{−iφ} â† b̂)` |
//! | two-mode squeeze `ξ` | `ξ* â b̂ − ξ â† b̂†` |
//!
//! Generators are built on a padded cutoff and split into the connected
//! blocks of their action on the Fock basis (each block conserves parity,
//! total photon number or photon-number difference), exponentiated block by
//! block, then restricted to the `Λ` box. Beamsplitter blocks are complete,
//! so that gate is exact up to rounding. Rotations and swaps are applied
//! exactly.
//!
//! This module deliberately does not use the hafnian or density code.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::circuit::{Circuit, CircuitOp};
use crate::corestate::CoreState;
use crate::error::{Error, Result};
use crate::gaussian::ElementaryGate;
use crate::ipag::{LadderEvent, LadderKind};
use crate::linalg::CMatrix;
use crate::C64;

pub const DEFAULT_CUTOFF: usize = 25;
pub const MAX_MODES: usize = 3;
/// Extra Fock levels kept while exponentiating generators.
pub const PADDING: usize = 15;
/// Largest admissible coherent-state tail beyond the cutoff.
pub const TAIL_TOL: f64 = 1e-8;

/// Dense amplitudes over `{0..=Λ}ᵐ`, mode 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedState {
    modes: usize,
    cutoff: usize,
    amps: Vec<C64>,
    leakage: f64,
    ladder_norm: f64,
}

impl TruncatedState {
    pub fn from_core(core: &CoreState, cutoff: usize) -> Result<Self> {
        let m = core.modes();
        if m > MAX_MODES {
            return Err(Error::TooManyModes { modes: m, max: MAX_MODES });
        }
        if cutoff == 0 || core.degree() as usize >= cutoff {
            return Err(Error::CutoffTooSmall { cutoff, reason: "core degree must be below the cutoff" });
        }
        let mut st = TruncatedState {
            modes: m,
            cutoff,
            amps: vec![C64::zero(); (cutoff + 1).pow(m as u32)],
            leakage: 0.0,
            ladder_norm: 1.0,
        };
        for (p, &c) in core.terms() {
            let occ: Vec<usize> = p.occupations().iter().map(|&n| n as usize).collect();
            let i = st.flat(&occ);
            st.amps[i] = c;
        }
        Ok(st)
    }

    pub fn vacuum(m: usize, cutoff: usize) -> Result<Self> {
        Self::from_core(&CoreState::vacuum(m)?, cutoff)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, occ: &[usize]) -> C64 {
        if occ.len() != self.modes || occ.iter().any(|&n| n > self.cutoff) {
            return C64::zero();
        }
        self.amps[self.flat(occ)]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Accumulated relative norm lost to truncation.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Product of the norms removed when renormalizing after ladder events.
    pub fn ladder_norm(&self) -> f64 {
        self.ladder_norm
    }

    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    fn stride(&self, mode: usize) -> usize {
        self.dim().pow((self.modes - 1 - mode) as u32)
    }

    fn flat(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |acc, &n| acc * self.dim() + n)
    }

    fn occupation(&self, mut flat: usize, mode: usize) -> usize {
        flat /= self.stride(mode);
        flat % self.dim()
    }

    fn record_loss(&mut self, before: f64) {
        let after = self.norm();
        if before > 0.0 && after < before {
            self.leakage += 1.0 - (after * after) / (before * before);
        }
    }

    pub fn apply(&mut self, op: &LocalOperator) -> Result<()> {
        if op.cutoff != self.cutoff {
            return Err(Error::DimensionMismatch { expected: self.cutoff, found: op.cutoff });
        }
        if let Some(&k) = op.modes.iter().find(|&&k| k >= self.modes) {
            return Err(Error::ModeOutOfRange { mode: k, modes: self.modes });
        }
        let before = self.norm();
        let local_dim = op.matrix.rows();
        let offsets: Vec<usize> = (0..local_dim)
            .map(|j| {
                let mut rest = j;
                let mut off = 0;
                for &mode in op.modes.iter().rev() {
                    off += (rest % self.dim()) * self.stride(mode);
                    rest /= self.dim();
                }
                off
            })
            .collect();
        let mut input = vec![C64::zero(); local_dim];
        let mut output = vec![C64::zero(); local_dim];
        for base in 0..self.amps.len() {
            if op.modes.iter().any(|&k| self.occupation(base, k) != 0) {
                continue;
            }
            for (x, off) in input.iter_mut().zip(&offsets) {
                *x = self.amps[base + off];
            }
            output.iter_mut().for_each(|z| *z = C64::zero());
            for &(i, j, v) in &op.entries {
                output[i] += v * input[j];
            }
            for (y, off) in output.iter().zip(&offsets) {
                self.amps[base + off] = *y;
            }
        }
        self.record_loss(before);
        Ok(())
    }

    /// Applies `â†` or `â` on one mode and renormalizes.
    pub fn apply_ladder(&mut self, event: &LadderEvent) -> Result<()> {
        let k = event.mode;
        if k >= self.modes {
            return Err(Error::ModeOutOfRange { mode: k, modes: self.modes });
        }
        let before = self.norm();
        let stride = self.stride(k);
        let mut out = vec![C64::zero(); self.amps.len()];
        let mut lost = 0.0;
        for (i, &a) in self.amps.iter().enumerate() {
            if a == C64::zero() {
                continue;
            }
            let n = self.occupation(i, k);
            match event.kind {
                LadderKind::Addition if n == self.cutoff => lost += a.norm_sqr() * (n + 1) as f64,
                LadderKind::Addition => out[i + stride] += a * ((n + 1) as f64).sqrt(),
                LadderKind::Subtraction if n > 0 => out[i - stride] += a * (n as f64).sqrt(),
                LadderKind::Subtraction => {}
            }
        }
        self.amps = out;
        let after = self.norm();
        if after == 0.0 {
            return Err(Error::ZeroState);
        }
        self.leakage += lost / (lost + after * after);
        for a in &mut self.amps {
            *a /= after;
        }
        self.ladder_norm *= after / before;
        Ok(())
    }

    /// `⟨α|ψ⟩` with the coherent bra truncated at the cutoff.
    pub fn coherent_overlap(&self, alpha: &[C64]) -> Result<C64> {
        if alpha.len() != self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: alpha.len() });
        }
        let dim = self.dim();
        let bras: Vec<Vec<C64>> = alpha
            .iter()
            .map(|a| {
                let mut v = Vec::with_capacity(dim);
                let mut c = C64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
                for n in 0..dim {
                    if n > 0 {
                        c = c * a.conj() / (n as f64).sqrt();
                    }
                    v.push(c);
                }
                v
            })
            .collect();
        let mut total = C64::zero();
        for (i, &amp) in self.amps.iter().enumerate() {
            if amp == C64::zero() {
                continue;
            }
            let mut w = amp;
            for (k, bra) in bras.iter().enumerate() {
                w *= bra[self.occupation(i, k)];
            }
            total += w;
        }
        Ok(total)
    }
}

/// A gate restricted to the `Λ` box of the modes it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    modes: Vec<usize>,
    cutoff: usize,
    matrix: CMatrix,
    entries: Vec<(usize, usize, C64)>,
}

impl LocalOperator {
    fn new(modes: Vec<usize>, cutoff: usize, matrix: CMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if matrix[(i, j)] != C64::zero() {
                    entries.push((i, j, matrix[(i, j)]));
                }
            }
        }
        LocalOperator { modes, cutoff, matrix, entries }
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// Dense matrix on `{0..=Λ}ᵏ`, first listed mode most significant.
    pub fn to_dense(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Action of a quadratic generator on a local basis state.
fn generator_action(gate: &ElementaryGate, occ: &[usize]) -> Vec<(Vec<usize>, C64)> {
    let sq = |x: usize| (x as f64).sqrt();
    let mut out = Vec::new();
    match *gate {
        ElementaryGate::Displacement { beta, .. } => {
            let n = occ[0];
            out.push((vec![n + 1], beta * sq(n + 1)));
            if n > 0 {
                out.push((vec![n - 1], -beta.conj() * sq(n)));
            }
        }
        ElementaryGate::Squeeze { xi, .. } => {
            let n = occ[0];
            out.push((vec![n + 2], -xi * 0.5 * sq((n + 1) * (n + 2))));
            if n > 1 {
                out.push((vec![n - 2], xi.conj() * 0.5 * sq(n * (n - 1))));
            }
        }
        ElementaryGate::Beamsplitter { theta, phi, .. } => {
            let (a, b) = (occ[0], occ[1]);
            let e = C64::from_polar(theta, phi);
            if a > 0 {
                out.push((vec![a - 1, b + 1], e * sq(a * (b + 1))));
            }
            if b > 0 {
                out.push((vec![a + 1, b - 1], -e.conj() * sq((a + 1) * b)));
            }
        }
        ElementaryGate::TwoModeSqueeze { xi, .. } => {
            let (a, b) = (occ[0], occ[1]);
            out.push((vec![a + 1, b + 1], -xi * sq((a + 1) * (b + 1))));
            if a > 0 && b > 0 {
                out.push((vec![a - 1, b - 1], xi.conj() * sq(a * b)));
            }
        }
        ElementaryGate::Rotation { .. } | ElementaryGate::Swap { .. } => unreachable!("applied exactly"),
    }
    out
}

/// The gate as a dense operator on the `Λ` box of its modes.
pub fn truncated_gate(gate: &ElementaryGate, cutoff: usize) -> Result<LocalOperator> {
    if cutoff == 0 {
        return Err(Error::CutoffTooSmall { cutoff, reason: "cutoff must be at least 1" });
    }
    let modes = gate.modes();
    let dim = cutoff + 1;
    let k = modes.len();
    let local = dim.pow(k as u32);
    let encode = |occ: &[usize]| occ.iter().fold(0, |acc, &n| acc * dim + n);
    let decode = |mut j: usize| {
        let mut occ = vec![0; k];
        for slot in occ.iter_mut().rev() {
            *slot = j % dim;
            j /= dim;
        }
        occ
    };
    let mut matrix = CMatrix::zeros(local, local);
    match *gate {
        ElementaryGate::Rotation { phi, .. } => {
            for n in 0..dim {
                matrix[(n, n)] = C64::from_polar(1.0, phi * n as f64);
            }
            return Ok(LocalOperator::new(modes, cutoff, matrix));
        }
        ElementaryGate::Swap { .. } => {
            for j in 0..local {
                let occ = decode(j);
                matrix[(encode(&[occ[1], occ[0]]), j)] = C64::one();
            }
            return Ok(LocalOperator::new(modes, cutoff, matrix));
        }
        _ => {}
    }
    // beamsplitter blocks (fixed total photon number) are finite
    let bound = match gate {
        ElementaryGate::Beamsplitter { .. } => 2 * cutoff,
        _ => cutoff + PADDING,
    };
    let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    for start in 0..local {
        let start = decode(start);
        if seen.contains_key(&start) {
            continue;
        }
        // connected block containing `start`
        let mut block = vec![start.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(start.clone(), 0);
        let mut head = 0;
        while head < block.len() {
            let cur = block[head].clone();
            head += 1;
            for (next, _) in generator_action(gate, &cur) {
                if next.iter().all(|&n| n <= bound) && !index.contains_key(&next) {
                    index.insert(next.clone(), block.len());
                    block.push(next);
                }
            }
        }
        let size = block.len();
        let mut gen = CMatrix::zeros(size, size);
        for (j, occ) in block.iter().enumerate() {
            for (next, v) in generator_action(gate, occ) {
                if let Some(&i) = index.get(&next) {
                    gen[(i, j)] += v;
                }
            }
        }
        let exp = gen.expm();
        let inside: Vec<(usize, usize)> = block
            .iter()
            .enumerate()
            .filter(|(_, occ)| occ.iter().all(|&n| n <= cutoff))
            .map(|(i, occ)| (i, encode(occ)))
            .collect();
        for &(i, row) in &inside {
            for &(j, col) in &inside {
                matrix[(row, col)] = exp[(i, j)];
            }
        }
        for occ in block {
            seen.insert(occ, ());
        }
    }
    Ok(LocalOperator::new(modes, cutoff, matrix))
}

/// Runs every gate and ladder event of the circuit on its input.
pub fn simulate(circuit: &Circuit, cutoff: usize) -> Result<TruncatedState> {
    let mut st = TruncatedState::from_core(circuit.input(), cutoff)?;
    let input_norm = st.norm();
    for a in &mut st.amps {
        *a /= input_norm;
    }
    for op in circuit.ops() {
        match op {
            CircuitOp::Gate(g) => st.apply(&truncated_gate(g, cutoff)?)?,
            CircuitOp::Ladder(e) => st.apply_ladder(e)?,
        }
    }
    Ok(st)
}

/// `Σ_{n>Λ} |α|²ⁿ / n!`.
pub fn coherent_tail(alpha: C64, cutoff: usize) -> f64 {
    let x = alpha.norm_sqr();
    let mut term = 1.0;
    for n in 1..=cutoff + 1 {
        term *= x / n as f64;
    }
    let mut total = 0.0;
    let mut n = cutoff + 1;
    while term > 1e-30 * total.max(1e-300) && n < cutoff + 1000 {
        total += term;
        n += 1;
        term *= x / n as f64;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleDensity {
    pub density: f64,
    /// Largest per-mode coherent tail beyond the cutoff.
    pub tail_bound: f64,
    pub leakage: f64,
}

/// `|⟨α|ψ⟩|² / πᵐ`.
pub fn oracle_density(state: &TruncatedState, alpha: &[C64]) -> Result<OracleDensity> {
    let tail_bound = alpha.iter().map(|&a| coherent_tail(a, state.cutoff)).fold(0.0, f64::max);
    if tail_bound >= TAIL_TOL {
        return Err(Error::CutoffTooSmall { cutoff: state.cutoff, reason: "coherent-state tail exceeds 1e-8" });
    }
    let overlap = state.coherent_overlap(alpha)?;
    Ok(OracleDensity {
        density: overlap.norm_sqr() / PI.powi(state.modes as i32),
        tail_bound,
        leakage: state.leakage,
    })
}

/// Simulates the circuit and evaluates its output density at `alpha`.
pub fn circuit_density(circuit: &Circuit, alpha: &[C64], cutoff: usize) -> Result<f64> {
    Ok(oracle_density(&simulate(circuit, cutoff)?, alpha)?.density)
}
