//! Heterodyne output densities of `Ĝ|C⟩`.
//!
//! With `(𝐕, d̃)` the pullback `Ĝ†|α⟩`, `M = (𝐕 + 𝟙/2)⁻¹` and `X` the
//! half-swap,
//!
//! ```text
//! Pr[α] = κ Σ_{p,q} c_p c_q* / √(p! q!) · lHaf A_{p,q}(V, D)
//! κ = exp(−½ d̃†M d̃) / (πᵐ √det(𝐕 + 𝟙/2)),   V = X(𝟙 − M),   D = X M d̃.
//! ```
//!
//! `A_{p,q}` repeats index `k` of `V` `p_k` times and index `m + k` `q_k`
//! times before the diagonal is replaced by `D`.
//!
//! Marginals integrate the unmeasured outcomes in closed form. Write
//! `d̃ = w + U β̃` where `w` carries the measured outcomes, `β̃` the
//! unmeasured ones and `U` is the matching column block of the pulled-back
//! Bogoliubov matrix. With `K = U†MU`, `R = MU` and
//! `G = XM − X R K⁻¹ X′ Rᵀ X` the marginal keeps the same shape with
//! `V = X − G`, `D = G w` and the prefactor
//! `π^{n′} exp(−½ wᵀGw) / (πᵐ √det(𝐕 + 𝟙/2) √det K)`. The full density is
//! the case `n′ = 0`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::corestate::{CoreState, FockIndex};
use crate::error::{Error, Result};
use crate::gaussian::{doubled, GaussianUnitary};
use crate::hafnian::{loop_hafnian, reduced_matrix, repetition_indices};
use crate::linalg::CMatrix;
use crate::{C64, NUMERIC_TOL};

/// Densities in `[−NEGATIVE_TOL, 0)` are treated as roundoff and clamped.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// A density evaluation request.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityQuery {
    pub unitary: GaussianUnitary,
    pub input: CoreState,
    /// One outcome per measured mode, in the order of `measured_modes`.
    pub outcome: Vec<C64>,
    pub measured_modes: Vec<usize>,
}

impl DensityQuery {
    /// Query measuring every mode.
    pub fn full(unitary: GaussianUnitary, input: CoreState, outcome: Vec<C64>) -> Self {
        let measured_modes = (0..unitary.modes()).collect();
        DensityQuery { unitary, input, outcome, measured_modes }
    }

    pub fn marginal(unitary: GaussianUnitary, input: CoreState, measured_modes: Vec<usize>, outcome: Vec<C64>) -> Self {
        DensityQuery { unitary, input, outcome, measured_modes }
    }

    pub fn evaluate(&self) -> Result<DensityReport> {
        DensityEvaluator::new(&self.unitary, &self.input, &self.measured_modes)?.evaluate(&self.outcome)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityReport {
    pub density: f64,
    /// Gaussian prefactor (of the marginal when modes are integrated out).
    pub kappa: f64,
    /// Number of `(p, q)` support pairs in the sum, `s²`.
    pub n_terms: usize,
}

#[derive(Clone, Debug)]
struct Term {
    /// Repetition pattern of `p` on the first half.
    first: Vec<usize>,
    /// The same pattern shifted to the second half.
    second: Vec<usize>,
    /// `c_p / √(p!)`.
    weight: C64,
}

/// Outcome-independent part of a density evaluation, reusable across many
/// outcomes.
#[derive(Clone, Debug)]
pub struct DensityEvaluator {
    modes: usize,
    measured: Vec<usize>,
    s_dag: CMatrix,
    disp_dag: Vec<C64>,
    v_eff: CMatrix,
    g_sym: CMatrix,
    norm_const: f64,
    terms: Vec<Term>,
}

impl DensityEvaluator {
    /// Prepares the evaluation of the joint density of `measured_modes`
    /// (all other modes integrated out). The input must be normalized.
    pub fn new(unitary: &GaussianUnitary, input: &CoreState, measured_modes: &[usize]) -> Result<Self> {
        let m = unitary.modes();
        if input.modes() != m {
            return Err(Error::ModeMismatch { expected: m, found: input.modes() });
        }
        if !input.is_normalized() {
            return Err(Error::NotNormalized { norm: input.norm() });
        }
        if measured_modes.is_empty() {
            return Err(Error::InvalidMeasurement("no measured modes"));
        }
        let mut seen = vec![false; m];
        for &k in measured_modes {
            if k >= m {
                return Err(Error::ModeOutOfRange { mode: k, modes: m });
            }
            if seen[k] {
                return Err(Error::InvalidMeasurement("mode listed twice"));
            }
            seen[k] = true;
        }
        let unmeasured: Vec<usize> = (0..m).filter(|&l| !seen[l]).collect();
        let n_int = unmeasured.len();

        let dag = unitary.dagger();
        let s_dag = dag.symplectic().clone();
        let disp_dag = dag.doubled_displacement();
        let q = s_dag.matmul(&s_dag.adjoint()).scale(C64::new(0.5, 0.0)).add(&CMatrix::identity(2 * m).scale(C64::new(0.5, 0.0)));
        let chol = q.cholesky()?;
        let mmat = chol.inverse();
        let x = CMatrix::half_swap(m);
        let mut g = x.matmul(&mmat);
        let mut norm_const = 1.0 / (PI.powi(m as i32) * chol.sqrt_det());

        if n_int > 0 {
            let cols: Vec<usize> = unmeasured.iter().copied().chain(unmeasured.iter().map(|l| l + m)).collect();
            let rows: Vec<usize> = (0..2 * m).collect();
            let u = s_dag.select(&rows, &cols);
            let r = mmat.matmul(&u);
            let k = u.adjoint().matmul(&r);
            let k_chol = k.cholesky()?;
            let h = r.matmul(&k_chol.inverse()).matmul(&CMatrix::half_swap(n_int)).matmul(&r.transpose());
            g = g.sub(&x.matmul(&h).matmul(&x));
            norm_const *= PI.powi(n_int as i32) / k_chol.sqrt_det();
        }
        let deviation = g.symmetry_deviation();
        if deviation > NUMERIC_TOL * g.max_abs().max(1.0) {
            return Err(Error::NotSymmetric { deviation });
        }
        let g_sym = g.symmetrized();
        let v_eff = x.sub(&g_sym);

        let vacuum = FockIndex::vacuum(m);
        let terms = input
            .terms()
            .map(|(p, &c)| {
                let first = repetition_indices(p, &vacuum);
                let second = first.iter().map(|i| i + m).collect();
                Term { first, second, weight: c / p.factorial().sqrt() }
            })
            .collect();
        Ok(DensityEvaluator {
            modes: m,
            measured: measured_modes.to_vec(),
            s_dag,
            disp_dag,
            v_eff,
            g_sym,
            norm_const,
            terms,
        })
    }

    /// Evaluator for the joint density of all modes.
    pub fn full(unitary: &GaussianUnitary, input: &CoreState) -> Result<Self> {
        let all: Vec<usize> = (0..unitary.modes()).collect();
        Self::new(unitary, input, &all)
    }

    pub fn measured_modes(&self) -> &[usize] {
        &self.measured
    }

    /// `(w, D, κ)` for one outcome.
    fn outcome_data(&self, outcome: &[C64]) -> Result<(Vec<C64>, f64)> {
        if outcome.len() != self.measured.len() {
            return Err(Error::ModeMismatch { expected: self.measured.len(), found: outcome.len() });
        }
        if outcome.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("outcome"));
        }
        let mut alpha = vec![C64::zero(); self.modes];
        for (&k, &a) in self.measured.iter().zip(outcome) {
            alpha[k] = a;
        }
        let mut w = self.s_dag.matvec(&doubled(&alpha));
        for (z, d) in w.iter_mut().zip(&self.disp_dag) {
            *z += d;
        }
        let d_eff = self.g_sym.matvec(&w);
        let quad: C64 = w.iter().zip(&d_eff).map(|(a, b)| a * b).sum();
        if quad.im.abs() > NUMERIC_TOL * quad.re.abs().max(1.0) {
            return Err(Error::ComplexResidue { imag: quad.im });
        }
        Ok((d_eff, self.norm_const * (-0.5 * quad.re).exp()))
    }

    /// Gaussian prefactor at `outcome`.
    pub fn kappa(&self, outcome: &[C64]) -> Result<f64> {
        Ok(self.outcome_data(outcome)?.1)
    }

    pub fn density(&self, outcome: &[C64]) -> Result<f64> {
        Ok(self.evaluate(outcome)?.density)
    }

    pub fn evaluate(&self, outcome: &[C64]) -> Result<DensityReport> {
        let (d_eff, kappa) = self.outcome_data(outcome)?;
        let mut idx = Vec::new();
        let mut lhaf = |p: &Term, q: &Term| -> Result<C64> {
            idx.clear();
            idx.extend_from_slice(&p.first);
            idx.extend_from_slice(&q.second);
            loop_hafnian(&reduced_matrix(&self.v_eff, &d_eff, &idx))
        };
        // term(q, p) = term(p, q)*, so only p ≤ q is evaluated
        let mut diag = C64::zero();
        let mut off = C64::zero();
        for (i, p) in self.terms.iter().enumerate() {
            diag += p.weight * p.weight.conj() * lhaf(p, p)?;
            for q in &self.terms[i + 1..] {
                off += p.weight * q.weight.conj() * lhaf(p, q)?;
            }
        }
        let total = diag.re + 2.0 * off.re;
        let scale = diag.norm() + 2.0 * off.norm();
        if diag.im.abs() > NUMERIC_TOL * scale.max(1.0) {
            return Err(Error::ComplexResidue { imag: diag.im });
        }
        let density = kappa * total;
        let density = if density >= 0.0 {
            density
        } else if density >= -NEGATIVE_TOL {
            0.0
        } else {
            return Err(Error::NegativeDensity { value: density });
        };
        Ok(DensityReport { density, kappa, n_terms: self.terms.len() * self.terms.len() })
    }
}

/// `κ` for the full measurement.
pub fn prefactor_kappa(unitary: &GaussianUnitary, alpha: &[C64]) -> Result<f64> {
    let st = unitary.heterodyne_pullback(alpha)?;
    let chol = st.q_matrix().cholesky()?;
    let d = st.displacement();
    let solved = chol.solve(d);
    let quad: C64 = d.iter().zip(&solved).map(|(a, b)| a.conj() * b).sum();
    if quad.im.abs() > NUMERIC_TOL * quad.re.abs().max(1.0) {
        return Err(Error::ComplexResidue { imag: quad.im });
    }
    Ok((-0.5 * quad.re).exp() / (PI.powi(unitary.modes() as i32) * chol.sqrt_det()))
}

/// The symmetric `V = X(𝟙 − M)` and the vector `D = X M d̃` of the
/// loop-hafnian expression at `alpha`.
pub fn kernel_matrices(unitary: &GaussianUnitary, alpha: &[C64]) -> Result<(CMatrix, Vec<C64>)> {
    let m = unitary.modes();
    let st = unitary.heterodyne_pullback(alpha)?;
    let mmat = st.q_matrix().cholesky()?.inverse();
    let x = CMatrix::half_swap(m);
    let v = x.matmul(&CMatrix::identity(2 * m).sub(&mmat));
    let deviation = v.symmetry_deviation();
    if deviation > NUMERIC_TOL * v.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { deviation });
    }
    let d = x.matmul(&mmat).matvec(st.displacement());
    Ok((v.symmetrized(), d))
}

/// Joint density of all modes for the query's input.
pub fn core_density(query: &DensityQuery) -> Result<f64> {
    if query.measured_modes.len() != query.unitary.modes() {
        return Err(Error::InvalidMeasurement("core_density needs every mode measured"));
    }
    Ok(query.evaluate()?.density)
}

/// Marginal density of the query's measured modes.
pub fn marginal_density(query: &DensityQuery) -> Result<f64> {
    Ok(query.evaluate()?.density)
}

/// Density for a Fock input `|n⟩`: a single loop hafnian with prefactor
/// `κ / n!`.
pub fn fock_density(unitary: &GaussianUnitary, n: &FockIndex, alpha: &[C64]) -> Result<f64> {
    let m = unitary.modes();
    if n.modes() != m {
        return Err(Error::IndexLength { expected: m, found: n.modes() });
    }
    let kappa = prefactor_kappa(unitary, alpha)?;
    let (v, d) = kernel_matrices(unitary, alpha)?;
    let lhaf = loop_hafnian(&reduced_matrix(&v, &d, &repetition_indices(n, n)))?;
    let scale = lhaf.norm().max(1.0);
    if lhaf.im.abs() > NUMERIC_TOL * scale {
        return Err(Error::ComplexResidue { imag: lhaf.im });
    }
    let density = kappa * lhaf.re / n.factorial();
    if density >= 0.0 {
        Ok(density)
    } else if density >= -NEGATIVE_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity { value: density })
    }
}
