//! Gaussian unitaries in the Bogoliubov representation.
//!
//! A Gaussian unitary `Û` on `m` modes acts affinely on the ladder operators:
//!
//! ```text
//! Û† âₖ Û = dₖ + Σₗ Aₖₗ âₗ + Bₖₗ âₗ†
//! ```
//!
//! Stacking `ξ = (â, â†)` gives `Û†ξÛ = Sξ + d̃` with `S = [[A, B], [B*, A*]]`
//! and `d̃ = (d, d*)`. Unitarity of `Û` is equivalent to the Bogoliubov
//! conditions `AA† − BB† = 1` and `ABᵀ = BAᵀ`.
//!
//! Gate conventions (all checked against the truncated-Fock oracle):
//!
//! | gate | generator `Ĝ` of `Û = exp(Ĝ)` | Bogoliubov blocks |
//! |------|-------------------------------|-------------------|
//! | displacement `β` | `βâ† − β*â` | `A = 1`, `B = 0`, `d = β` |
//! | rotation `φ` | `iφ n̂` | `A = e^{iφ}` |
//! | squeeze `ξ = re^{iθ}` | `½(ξ*â² − ξâ†²)` | `A = cosh r`, `B = −e^{iθ} sinh r` |
//! | beamsplitter `(θ, φ)` on `(a, b)` | `θ(e^{iφ}âb̂† − e^{−iφ}â†b̂)` | `A = [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]]` |
//! | two-mode squeeze `ξ` | `ξ*âb̂ − ξâ†b̂†` | `A = cosh r·1`, `B = −e^{iθ} sinh r·X` |
//!
//! With this squeeze convention `Ŝ(ξ)|0⟩` has stellar function
//! `∝ exp(−½e^{iθ} tanh(r) z²)`.
//!
//! Global phases of `Û` are not tracked; densities never depend on them.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::{C64, STRUCTURE_TOL};

/// One of the standard generators of the Gaussian group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElementaryGate {
    Displacement { mode: usize, beta: C64 },
    Rotation { mode: usize, phi: f64 },
    /// `ξ = r e^{iθ}`.
    Squeeze { mode: usize, xi: C64 },
    Beamsplitter { modes: [usize; 2], theta: f64, phi: f64 },
    TwoModeSqueeze { modes: [usize; 2], xi: C64 },
    Swap { modes: [usize; 2] },
}

impl ElementaryGate {
    /// Modes the gate acts on.
    pub fn modes(&self) -> Vec<usize> {
        match *self {
            ElementaryGate::Displacement { mode, .. }
            | ElementaryGate::Rotation { mode, .. }
            | ElementaryGate::Squeeze { mode, .. } => vec![mode],
            ElementaryGate::Beamsplitter { modes, .. }
            | ElementaryGate::TwoModeSqueeze { modes, .. }
            | ElementaryGate::Swap { modes } => modes.to_vec(),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let modes = self.modes();
        for &k in &modes {
            if k >= m {
                return Err(Error::ModeOutOfRange { mode: k, modes: m });
            }
        }
        if modes.len() == 2 && modes[0] == modes[1] {
            return Err(Error::RepeatedMode(modes[0]));
        }
        let finite = match *self {
            ElementaryGate::Displacement { beta, .. } => beta.is_finite(),
            ElementaryGate::Rotation { phi, .. } => phi.is_finite(),
            ElementaryGate::Squeeze { xi, .. } | ElementaryGate::TwoModeSqueeze { xi, .. } => {
                xi.is_finite()
            }
            ElementaryGate::Beamsplitter { theta, phi, .. } => theta.is_finite() && phi.is_finite(),
            ElementaryGate::Swap { .. } => true,
        };
        if finite {
            Ok(())
        } else {
            Err(Error::NonFinite("gate parameters"))
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> ElementaryGate {
        match *self {
            ElementaryGate::Displacement { mode, beta } => ElementaryGate::Displacement { mode, beta: -beta },
            ElementaryGate::Rotation { mode, phi } => ElementaryGate::Rotation { mode, phi: -phi },
            ElementaryGate::Squeeze { mode, xi } => ElementaryGate::Squeeze { mode, xi: -xi },
            ElementaryGate::Beamsplitter { modes, theta, phi } => {
                ElementaryGate::Beamsplitter { modes, theta: -theta, phi }
            }
            ElementaryGate::TwoModeSqueeze { modes, xi } => ElementaryGate::TwoModeSqueeze { modes, xi: -xi },
            ElementaryGate::Swap { modes } => ElementaryGate::Swap { modes },
        }
    }
}

/// `cosh r` and `e^{iθ} sinh r` for `ξ = r e^{iθ}`.
fn squeeze_coefficients(xi: C64) -> (f64, C64) {
    let r = xi.norm();
    if r == 0.0 {
        return (1.0, C64::zero());
    }
    (r.cosh(), xi * (r.sinh() / r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianUnitary {
    modes: usize,
    s: CMatrix,
    disp: Vec<C64>,
}

impl GaussianUnitary {
    pub fn identity(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(GaussianUnitary {
            modes: m,
            s: CMatrix::identity(2 * m),
            disp: vec![C64::zero(); m],
        })
    }

    /// Builds a unitary from its Bogoliubov matrix and displacement after
    /// checking the symplectic invariants.
    pub fn from_parts(s: CMatrix, disp: Vec<C64>) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
        }
        if !s.rows().is_multiple_of(2) {
            return Err(Error::OddDimension(s.rows()));
        }
        let m = s.rows() / 2;
        if m == 0 {
            return Err(Error::ZeroModes);
        }
        if disp.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: disp.len() });
        }
        if !validate_symplectic(&s)? {
            return Err(Error::NotSymplectic);
        }
        Ok(GaussianUnitary { modes: m, s, disp })
    }

    pub fn from_gate(gate: &ElementaryGate, m: usize) -> Result<Self> {
        gate.validate(m)?;
        let mut g = Self::identity(m)?;
        let one = C64::one();
        let set_block = |s: &mut CMatrix, i: usize, j: usize, a: C64, b: C64| {
            s[(i, j)] = a;
            s[(i, m + j)] = b;
            s[(m + i, j)] = b.conj();
            s[(m + i, m + j)] = a.conj();
        };
        match *gate {
            ElementaryGate::Displacement { mode, beta } => {
                g.disp[mode] = beta;
            }
            ElementaryGate::Rotation { mode, phi } => {
                set_block(&mut g.s, mode, mode, C64::from_polar(1.0, phi), C64::zero());
            }
            ElementaryGate::Squeeze { mode, xi } => {
                let (ch, sh) = squeeze_coefficients(xi);
                set_block(&mut g.s, mode, mode, C64::new(ch, 0.0), -sh);
            }
            ElementaryGate::Beamsplitter { modes: [a, b], theta, phi } => {
                let (c, s) = (theta.cos(), theta.sin());
                set_block(&mut g.s, a, a, C64::new(c, 0.0), C64::zero());
                set_block(&mut g.s, a, b, -C64::from_polar(s, -phi), C64::zero());
                set_block(&mut g.s, b, a, C64::from_polar(s, phi), C64::zero());
                set_block(&mut g.s, b, b, C64::new(c, 0.0), C64::zero());
            }
            ElementaryGate::TwoModeSqueeze { modes: [a, b], xi } => {
                let (ch, sh) = squeeze_coefficients(xi);
                set_block(&mut g.s, a, a, C64::new(ch, 0.0), C64::zero());
                set_block(&mut g.s, b, b, C64::new(ch, 0.0), C64::zero());
                set_block(&mut g.s, a, b, C64::zero(), -sh);
                set_block(&mut g.s, b, a, C64::zero(), -sh);
            }
            ElementaryGate::Swap { modes: [a, b] } => {
                set_block(&mut g.s, a, a, C64::zero(), C64::zero());
                set_block(&mut g.s, b, b, C64::zero(), C64::zero());
                set_block(&mut g.s, a, b, one, C64::zero());
                set_block(&mut g.s, b, a, one, C64::zero());
            }
        }
        Ok(g)
    }

    /// Composes a gate sequence applied left to right.
    pub fn from_gates<'a>(m: usize, gates: impl IntoIterator<Item = &'a ElementaryGate>) -> Result<Self> {
        let mut g = Self::identity(m)?;
        for gate in gates {
            g = Self::from_gate(gate, m)?.compose(&g)?;
        }
        Ok(g)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn symplectic(&self) -> &CMatrix {
        &self.s
    }

    pub fn displacement(&self) -> &[C64] {
        &self.disp
    }

    /// `d̃ = (d, d*)`.
    pub fn doubled_displacement(&self) -> Vec<C64> {
        doubled(&self.disp)
    }

    /// Block `A` (coefficients of `âₗ` in `Û†âₖÛ`).
    pub fn a_block(&self) -> CMatrix {
        let idx: Vec<usize> = (0..self.modes).collect();
        self.s.select(&idx, &idx)
    }

    /// Block `B` (coefficients of `âₗ†` in `Û†âₖÛ`).
    pub fn b_block(&self) -> CMatrix {
        let rows: Vec<usize> = (0..self.modes).collect();
        let cols: Vec<usize> = (self.modes..2 * self.modes).collect();
        self.s.select(&rows, &cols)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &GaussianUnitary) -> Result<GaussianUnitary> {
        if self.modes != first.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: first.modes });
        }
        // (Û₂Û₁)†ξ(Û₂Û₁) = Û₁†(S₂ξ + d̃₂)Û₁ = S₂S₁ξ + S₂d̃₁ + d̃₂
        let s = self.s.matmul(&first.s);
        let shifted = self.s.matvec(&first.doubled_displacement());
        let disp = (0..self.modes).map(|k| shifted[k] + self.disp[k]).collect();
        Ok(GaussianUnitary { modes: self.modes, s, disp })
    }

    /// The inverse unitary `Û†`.
    pub fn dagger(&self) -> GaussianUnitary {
        let m = self.modes;
        // S⁻¹ = K S† K with K = diag(1, −1)
        let mut inv = self.s.adjoint();
        for i in 0..2 * m {
            for j in 0..2 * m {
                if (i < m) != (j < m) {
                    inv[(i, j)] = -inv[(i, j)];
                }
            }
        }
        let shifted = inv.matvec(&self.doubled_displacement());
        let disp = shifted[..m].iter().map(|z| -z).collect();
        GaussianUnitary { modes: m, s: inv, disp }
    }

    /// The Gaussian state `Û†|α⟩`.
    pub fn heterodyne_pullback(&self, alpha: &[C64]) -> Result<GaussianState> {
        if alpha.len() != self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: alpha.len() });
        }
        if alpha.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("outcome"));
        }
        let inv = self.dagger();
        let cov = inv.s.matmul(&inv.s.adjoint()).scale(C64::new(0.5, 0.0));
        let mut disp = inv.s.matvec(&doubled(alpha));
        for (z, d) in disp.iter_mut().zip(inv.doubled_displacement()) {
            *z += d;
        }
        Ok(GaussianState { cov, disp })
    }
}

/// Pure Gaussian state: complex covariance `𝐕` and doubled mean `d̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    cov: CMatrix,
    disp: Vec<C64>,
}

impl GaussianState {
    pub fn new(cov: CMatrix, disp: Vec<C64>) -> Result<Self> {
        if !cov.is_square() {
            return Err(Error::NotSquare { rows: cov.rows(), cols: cov.cols() });
        }
        if !cov.rows().is_multiple_of(2) {
            return Err(Error::OddDimension(cov.rows()));
        }
        if disp.len() != cov.rows() {
            return Err(Error::DimensionMismatch { expected: cov.rows(), found: disp.len() });
        }
        Ok(GaussianState { cov, disp })
    }

    pub fn vacuum(m: usize) -> Result<Self> {
        GaussianUnitary::identity(m)?.heterodyne_pullback(&vec![C64::zero(); m])
    }

    pub fn modes(&self) -> usize {
        self.cov.rows() / 2
    }

    pub fn covariance(&self) -> &CMatrix {
        &self.cov
    }

    pub fn displacement(&self) -> &[C64] {
        &self.disp
    }

    /// `𝐕 + 𝟙/2`.
    pub fn q_matrix(&self) -> CMatrix {
        let mut q = self.cov.clone();
        for i in 0..q.rows() {
            q[(i, i)] += 0.5;
        }
        q
    }

    /// Husimi function `⟨β|ρ|β⟩/πᵐ`.
    pub fn q_function(&self, beta: &[C64]) -> Result<f64> {
        let m = self.modes();
        if beta.len() != m {
            return Err(Error::ModeMismatch { expected: m, found: beta.len() });
        }
        let chol = self.q_matrix().cholesky()?;
        let diff: Vec<C64> = doubled(beta).iter().zip(&self.disp).map(|(b, d)| b - d).collect();
        let solved = chol.solve(&diff);
        let quad: C64 = diff.iter().zip(&solved).map(|(x, y)| x.conj() * y).sum();
        if quad.im.abs() > crate::NUMERIC_TOL * quad.re.abs().max(1.0) {
            return Err(Error::ComplexResidue { imag: quad.im });
        }
        Ok((-0.5 * quad.re).exp() / (core::f64::consts::PI.powi(m as i32) * chol.sqrt_det()))
    }
}

/// `z̃ = (z, z*)`.
pub fn doubled(z: &[C64]) -> Vec<C64> {
    z.iter().copied().chain(z.iter().map(|x| x.conj())).collect()
}

/// Checks the block-conjugate structure and the Bogoliubov conditions
/// within [`STRUCTURE_TOL`].
pub fn validate_symplectic(s: &CMatrix) -> Result<bool> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    if !s.rows().is_multiple_of(2) {
        return Err(Error::OddDimension(s.rows()));
    }
    let m = s.rows() / 2;
    for i in 0..m {
        for j in 0..m {
            if (s[(i, j)] - s[(m + i, m + j)].conj()).norm() > STRUCTURE_TOL
                || (s[(i, m + j)] - s[(m + i, j)].conj()).norm() > STRUCTURE_TOL
            {
                return Ok(false);
            }
        }
    }
    let lo: Vec<usize> = (0..m).collect();
    let hi: Vec<usize> = (m..2 * m).collect();
    let a = s.select(&lo, &lo);
    let b = s.select(&lo, &hi);
    let unit = a.matmul(&a.adjoint()).sub(&b.matmul(&b.adjoint()));
    let sym = a.matmul(&b.transpose()).sub(&b.matmul(&a.transpose()));
    Ok(unit.max_abs_diff(&CMatrix::identity(m)) <= STRUCTURE_TOL && sym.max_abs() <= STRUCTURE_TOL)
}
