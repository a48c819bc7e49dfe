//! Strong simulation of Gaussian circuits fed with non-Gaussian core states
//! and measured by heterodyne detection.
//!
//! The output probability density of a circuit `Ĝ|C⟩` measured by balanced
//! heterodyne detection is a Gaussian prefactor times a sum of `s²` loop
//! hafnians of matrices of size at most `2n`, where `s` is the support size
//! and `n` the degree of the core state `|C⟩`. This crate evaluates that
//! expression exactly, together with all marginals, and ships the pieces
//! needed to get there:
//!
//! - [`gaussian`]: Bogoliubov (complex symplectic) representation of Gaussian
//!   unitaries, elementary gates, composition and the heterodyne pullback
//!   `Ĝ†|α⟩`.
//! - [`corestate`]: sparse multimode core states and ladder-operator algebra.
//! - [`hafnian`]: permanent, hafnian and loop hafnian kernels, plus the
//!   reduced matrix built from repeated rows and columns.
//! - [`density`]: full and marginal heterodyne densities.
//! - [`ipag`]: compiler from circuits interleaving Gaussian layers with photon
//!   additions/subtractions to the canonical `(Ĝ, |C⟩)` form.
//! - [`oracle`]: an independent truncated-Fock simulator used for
//!   verification. It does not depend on [`hafnian`] or [`density`].
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `std` feature to
//! route floating point math through `std` instead of `libm`.
//!
//! # Conventions
//!
//! Every `2m`-dimensional object uses the doubled ordering
//! `ξ = (â₁,…,â_m, â₁†,…,â_m†)` and `α̃ = (α, α*)`. A Gaussian unitary `Û` is
//! stored through its Heisenberg action `Û†ξÛ = Sξ + d̃`, so that a
//! displacement `D̂(β)` has `d = β` and composition multiplies matrices in
//! circuit order (`S = S₂S₁` for `Û₁` followed by `Û₂`). Densities are with
//! respect to `d²α = dRe(α) dIm(α)` per mode.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod corestate;
pub mod density;
pub mod error;
pub mod gaussian;
pub mod hafnian;
pub mod ipag;
pub mod linalg;
pub mod oracle;

pub use circuit::{Circuit, CircuitOp};
pub use corestate::{CoreState, FockIndex};
pub use density::{DensityEvaluator, DensityQuery, DensityReport};
pub use error::{Error, Result};
pub use gaussian::{ElementaryGate, GaussianState, GaussianUnitary};
pub use ipag::{InterleavedCircuit, LadderEvent, LadderKind};
pub use linalg::CMatrix;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance for structural invariants (symplectic conditions, symmetry).
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tolerance for numerical equalities such as residual imaginary parts.
pub const NUMERIC_TOL: f64 = 1e-9;
/// Tolerance for the normalisation of input core states.
pub const NORM_TOL: f64 = 1e-9;
