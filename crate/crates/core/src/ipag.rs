//! Compiler from circuits interleaving Gaussian layers with single-mode
//! photon additions and subtractions to the form `Ĝ|C⟩`.
//!
//! For the circuit `Ĝ⁽ⁿ⁾ ô_{n−1} Ĝ⁽ⁿ⁻¹⁾ … ô₀ Ĝ⁽⁰⁾|C₀⟩` with
//! `Ŵⱼ = Ĝ⁽ʲ⁾…Ĝ⁽⁰⁾`, each ladder operator is moved to the right through
//! `ôⱼŴⱼ = Ŵⱼ (Ŵⱼ† ôⱼ Ŵⱼ)`. The conjugated operator is affine in the
//! ladder operators and read off the Heisenberg action of `Ŵⱼ`, so the
//! output is `Ŵₙ |C⟩` with
//! `|C⟩ ∝ (Ŵ_{n−1}† ô_{n−1} Ŵ_{n−1}) … (Ŵ₀† ô₀ Ŵ₀)|C₀⟩`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corestate::{CoreState, FockIndex};
use crate::error::{Error, Result};
use crate::gaussian::{ElementaryGate, GaussianUnitary};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    /// `â_k†`
    Addition,
    /// `â_k`
    Subtraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LadderEvent {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderEvent {
    pub fn addition(mode: usize) -> Self {
        LadderEvent { mode, kind: LadderKind::Addition }
    }

    pub fn subtraction(mode: usize) -> Self {
        LadderEvent { mode, kind: LadderKind::Subtraction }
    }
}

/// Gaussian layers `G⁽⁰⁾ … G⁽ⁿ⁾` with ladder event `j` between layers `j`
/// and `j + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterleavedCircuit {
    modes: usize,
    layers: Vec<GaussianUnitary>,
    events: Vec<LadderEvent>,
}

impl InterleavedCircuit {
    pub fn new(layers: Vec<GaussianUnitary>, events: Vec<LadderEvent>) -> Result<Self> {
        let m = layers.first().ok_or(Error::ZeroModes)?.modes();
        if layers.len() != events.len() + 1 {
            return Err(Error::DimensionMismatch { expected: events.len() + 1, found: layers.len() });
        }
        if let Some(g) = layers.iter().find(|g| g.modes() != m) {
            return Err(Error::ModeMismatch { expected: m, found: g.modes() });
        }
        if let Some(e) = events.iter().find(|e| e.mode >= m) {
            return Err(Error::ModeOutOfRange { mode: e.mode, modes: m });
        }
        Ok(InterleavedCircuit { modes: m, layers, events })
    }

    /// Builds the circuit from a sequence of gates and events, merging
    /// consecutive gates into layers and inserting identity layers as needed.
    pub fn from_ops<'a>(m: usize, ops: impl IntoIterator<Item = Op<'a>>) -> Result<Self> {
        let mut layers = vec![GaussianUnitary::identity(m)?];
        let mut events = Vec::new();
        for op in ops {
            match op {
                Op::Gate(g) => {
                    let last = layers.last_mut().expect("at least one layer");
                    *last = GaussianUnitary::from_gate(g, m)?.compose(last)?;
                }
                Op::Ladder(e) => {
                    events.push(*e);
                    layers.push(GaussianUnitary::identity(m)?);
                }
            }
        }
        Self::new(layers, events)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn layers(&self) -> &[GaussianUnitary] {
        &self.layers
    }

    pub fn events(&self) -> &[LadderEvent] {
        &self.events
    }
}

/// Borrowed circuit element used by [`InterleavedCircuit::from_ops`].
#[derive(Clone, Copy, Debug)]
pub enum Op<'a> {
    Gate(&'a ElementaryGate),
    Ladder(&'a LadderEvent),
}

/// `d + Σₗ createₗ âₗ† + annihₗ âₗ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLadderOp {
    pub scalar: C64,
    pub create: Vec<C64>,
    pub annih: Vec<C64>,
}

impl AffineLadderOp {
    pub fn apply(&self, state: &CoreState) -> Result<CoreState> {
        state.apply_affine_ladder(self.scalar, &self.create, &self.annih).map_err(|e| match e {
            Error::EmptyState => Error::ZeroState,
            other => other,
        })
    }
}

/// `Ŵ† ô Ŵ` for the ladder operator `ô` of `event`, where `Ŵ` is the
/// cumulative unitary applied before the event.
pub fn commute_ladder_through(w: &GaussianUnitary, event: &LadderEvent) -> Result<AffineLadderOp> {
    let m = w.modes();
    let k = event.mode;
    if k >= m {
        return Err(Error::ModeOutOfRange { mode: k, modes: m });
    }
    let s = w.symplectic();
    let d = w.displacement()[k];
    // Ŵ†âₖŴ = dₖ + Σₗ Aₖₗ âₗ + Bₖₗ âₗ†, and the creation operator is its adjoint
    let a_row = &s.row(k)[..m];
    let b_row = &s.row(k)[m..];
    Ok(match event.kind {
        LadderKind::Subtraction => AffineLadderOp { scalar: d, create: b_row.to_vec(), annih: a_row.to_vec() },
        LadderKind::Addition => AffineLadderOp {
            scalar: d.conj(),
            create: a_row.iter().map(|z| z.conj()).collect(),
            annih: b_row.iter().map(|z| z.conj()).collect(),
        },
    })
}

/// Output of [`compile`]: the circuit equals `unitary` applied to `core`,
/// up to the factor `norm` discarded when normalizing the core state.
#[derive(Clone, Debug, PartialEq)]
pub struct Compiled {
    pub unitary: GaussianUnitary,
    pub core: CoreState,
    pub norm: f64,
}

/// Compiles a circuit acting on the vacuum.
pub fn compile(circuit: &InterleavedCircuit) -> Result<Compiled> {
    compile_from(circuit, &CoreState::vacuum(circuit.modes)?)
}

/// Compiles a circuit acting on an arbitrary core state.
pub fn compile_from(circuit: &InterleavedCircuit, input: &CoreState) -> Result<Compiled> {
    if input.modes() != circuit.modes {
        return Err(Error::ModeMismatch { expected: circuit.modes, found: input.modes() });
    }
    let mut w = circuit.layers[0].clone();
    let mut core = input.clone();
    for (event, layer) in circuit.events.iter().zip(&circuit.layers[1..]) {
        core = commute_ladder_through(&w, event)?.apply(&core)?;
        w = layer.compose(&w)?;
    }
    let (core, norm) = core.normalized();
    Ok(Compiled { unitary: w, core, norm: norm * input.norm().recip() })
}

/// Coefficients of the product
/// `(d₁ + Σ s₁ₖ âₖ† + s₁,ₘ₊ₖ âₖ)(d₀ + Σ s₀ₗ âₗ† + s₀,ₘ₊ₗ âₗ)|0⟩`
/// expanded by hand:
///
/// ```text
/// √2 Σₖ s₀ₖ s₁ₖ |2ₖ⟩ + Σ_{k≠l} s₀ₖ s₁ₗ |1ₖ + 1ₗ⟩ + Σₖ (d₁ s₀ₖ + d₀ s₁ₖ) |1ₖ⟩
///   + (d₀ d₁ + Σₖ s₀ₖ s₁,ₘ₊ₖ) |0⟩
/// ```
///
/// Each slice holds `2m` entries, creation coefficients first. Terms whose
/// coefficient is exactly zero are kept, so the result lists every
/// occupation of total at most two.
pub fn degree_two_expansion(d0: C64, s0: &[C64], d1: C64, s1: &[C64]) -> Result<Vec<(FockIndex, C64)>> {
    if !s0.len().is_multiple_of(2) || s0.len() != s1.len() || s0.is_empty() {
        return Err(Error::DimensionMismatch { expected: s0.len().max(2), found: s1.len() });
    }
    let m = s0.len() / 2;
    let mut out = Vec::new();
    let mut vac = d0 * d1;
    for k in 0..m {
        vac += s0[k] * s1[m + k];
    }
    out.push((FockIndex::vacuum(m), vac));
    for k in 0..m {
        out.push((FockIndex::unit(m, k), d1 * s0[k] + d0 * s1[k]));
    }
    for k in 0..m {
        let mut occ = vec![0; m];
        occ[k] = 2;
        out.push((FockIndex::new(occ), s0[k] * s1[k] * 2f64.sqrt()));
        for l in (k + 1)..m {
            let mut occ = vec![0; m];
            occ[k] = 1;
            occ[l] = 1;
            out.push((FockIndex::new(occ), s0[k] * s1[l] + s0[l] * s1[k]));
        }
    }
    Ok(out)
}

/// Outcome of [`ipag_exclusion_witness`].
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub samples: usize,
    /// Largest fidelity `|⟨T|C⟩|²` between `T = (|20⟩+|01⟩)/√2` and the
    /// normalized core of a random two-mode, two-addition circuit.
    pub max_fidelity: f64,
    pub draws: usize,
    /// Candidate coefficient draws rejected before `draws` satisfied the premises.
    pub rejected: usize,
    /// Largest `|coefficient of |01⟩|` among accepted draws; exactly 0 when
    /// the obstruction holds.
    pub max_obstruction: f64,
    /// Largest deviation between the hand expansion and two exact
    /// applications of the affine ladder operators.
    pub expansion_error: f64,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.max_fidelity < 1.0 - 1e-6 && self.max_obstruction == 0.0 && self.expansion_error < 1e-12
    }
}

fn random_c64(rng: &mut impl Rng, scale: f64) -> C64 {
    C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// Random layer of a few elementary gates on `m` modes.
pub fn random_layer(rng: &mut impl Rng, m: usize, gates: usize) -> Result<GaussianUnitary> {
    let mut g = GaussianUnitary::identity(m)?;
    for _ in 0..gates {
        let a = rng.random_range(0..m);
        let b = if m > 1 { (a + rng.random_range(1..m)) % m } else { a };
        let gate = match rng.random_range(0..if m > 1 { 6 } else { 3 }) {
            0 => ElementaryGate::Displacement { mode: a, beta: random_c64(rng, 1.0) },
            1 => ElementaryGate::Rotation { mode: a, phi: rng.random_range(-3.2..3.2) },
            2 => ElementaryGate::Squeeze { mode: a, xi: random_c64(rng, 0.5) },
            3 => ElementaryGate::Beamsplitter { modes: [a, b], theta: rng.random_range(-1.6..1.6), phi: rng.random_range(-3.2..3.2) },
            4 => ElementaryGate::TwoModeSqueeze { modes: [a, b], xi: random_c64(rng, 0.5) },
            _ => ElementaryGate::Swap { modes: [a, b] },
        };
        g = GaussianUnitary::from_gate(&gate, m)?.compose(&g)?;
    }
    Ok(g)
}

/// Randomized evidence that `(|20⟩+|01⟩)/√2` is not the core state of any
/// circuit made of Gaussian layers and photon additions on the vacuum.
///
/// The sampling part compiles `samples` random two-mode circuits with two
/// additions and records the best fidelity with the target. The algebraic
/// part draws `draws` coefficient sets of two affine ladder operators on
/// which the degree-two expansion matches the target's support pattern
/// (nonzero `|2₁⟩`, zero `|2ₖ⟩` for `k ≠ 1` and zero `|1ₖ+1ₗ⟩`) and checks
/// that the `|1₂⟩` coefficient then vanishes exactly. Premises are met by
/// drawing each creation coefficient as zero with probability one half and
/// rejecting draws that fail them.
pub fn ipag_exclusion_witness(samples: usize, draws: usize, seed: u64) -> Result<WitnessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1.0 / 2f64.sqrt();
    let target = CoreState::new(
        [(FockIndex::new(vec![2, 0]), C64::new(h, 0.0)), (FockIndex::new(vec![0, 1]), C64::new(h, 0.0))],
        false,
    )?;

    let mut max_fidelity = 0.0f64;
    for _ in 0..samples {
        let layers = (0..3).map(|_| random_layer(&mut rng, 2, 4)).collect::<Result<Vec<_>>>()?;
        let events = (0..2).map(|_| LadderEvent::addition(rng.random_range(0..2))).collect();
        let compiled = compile(&InterleavedCircuit::new(layers, events)?)?;
        max_fidelity = max_fidelity.max(target.overlap(&compiled.core)?.norm_sqr());
    }

    let m = 3;
    let mut accepted = 0;
    let mut rejected = 0;
    let mut max_obstruction = 0.0f64;
    let mut expansion_error = 0.0f64;
    while accepted < draws {
        let draw = |rng: &mut ChaCha8Rng| -> Vec<C64> {
            (0..2 * m)
                .map(|i| if i < m && i > 0 && rng.random_bool(0.5) { C64::zero() } else { random_c64(rng, 1.0) })
                .collect()
        };
        let (s0, s1) = (draw(&mut rng), draw(&mut rng));
        let (d0, d1) = (random_c64(&mut rng, 1.0), random_c64(&mut rng, 1.0));
        let expansion = degree_two_expansion(d0, &s0, d1, &s1)?;

        let vac = CoreState::vacuum(m)?;
        let exact = vac
            .apply_affine_ladder(d0, &s0[..m], &s0[m..])
            .and_then(|c| c.apply_affine_ladder(d1, &s1[..m], &s1[m..]));
        if let Ok(exact) = exact {
            for (idx, coef) in &expansion {
                expansion_error = expansion_error.max((exact.amplitude(idx) - coef).norm());
            }
        }

        let coef = |occ: [u32; 3]| {
            let idx = FockIndex::new(occ.to_vec());
            expansion.iter().find(|(k, _)| *k == idx).map_or(C64::zero(), |(_, c)| *c)
        };
        let premises = coef([2, 0, 0]) != C64::zero()
            && coef([0, 2, 0]) == C64::zero()
            && coef([0, 0, 2]) == C64::zero()
            && coef([1, 1, 0]) == C64::zero()
            && coef([1, 0, 1]) == C64::zero()
            && coef([0, 1, 1]) == C64::zero();
        if !premises {
            rejected += 1;
            continue;
        }
        accepted += 1;
        max_obstruction = max_obstruction.max(coef([0, 1, 0]).norm());
    }
    Ok(WitnessReport { samples, max_fidelity, draws, rejected, max_obstruction, expansion_error })
}
