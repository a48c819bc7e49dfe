//! Multimode core states: finite superpositions of Fock states.
//!
//! A core state `|C⟩ = Σ c_p |p⟩` has a polynomial stellar function
//! `F*(z) = Σ c_p z^p / √(p!)`. Its degree is the largest total photon
//! number `|p|` in the support and its support size the number of stored
//! terms. Terms are kept in a `BTreeMap`, so iteration is lexicographic in
//! the occupation vectors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{C64, NORM_TOL};

/// Occupation numbers `(p₁,…,p_m)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockIndex(Vec<u32>);

impl FockIndex {
    pub fn new(occ: Vec<u32>) -> Self {
        FockIndex(occ)
    }

    pub fn vacuum(m: usize) -> Self {
        FockIndex(vec![0; m])
    }

    /// `1ₖ`: a single photon in mode `k`.
    pub fn unit(m: usize, k: usize) -> Self {
        let mut occ = vec![0; m];
        occ[k] = 1;
        FockIndex(occ)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    /// `|p| = p₁ + … + p_m`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `p! = p₁!⋯p_m!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&n| (1..=n).map(f64::from).product::<f64>()).product()
    }

    /// `z^p`.
    pub fn monomial(&self, z: &[C64]) -> C64 {
        self.0
            .iter()
            .zip(z)
            .map(|(&n, &zk)| zk.powu(n))
            .fold(C64::one(), |acc, x| acc * x)
    }
}

impl From<Vec<u32>> for FockIndex {
    fn from(occ: Vec<u32>) -> Self {
        FockIndex(occ)
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 && self.0.len() > 1 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("⟩")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoreState {
    modes: usize,
    terms: BTreeMap<FockIndex, C64>,
    degree: u32,
    normalized: bool,
}

impl CoreState {
    /// Builds a core state, dropping exact zeros. With `normalize` the
    /// amplitudes are rescaled to unit norm; otherwise the state is flagged
    /// as normalized only if its norm already is one within [`NORM_TOL`].
    /// Repeated occupation vectors are summed.
    pub fn new(terms: impl IntoIterator<Item = (FockIndex, C64)>, normalize: bool) -> Result<Self> {
        let mut map: BTreeMap<FockIndex, C64> = BTreeMap::new();
        let mut modes = None;
        for (idx, amp) in terms {
            match modes {
                None => modes = Some(idx.modes()),
                Some(m) if m != idx.modes() => {
                    return Err(Error::IndexLength { expected: m, found: idx.modes() })
                }
                _ => {}
            }
            if !amp.is_finite() {
                return Err(Error::NonFinite("amplitude"));
            }
            *map.entry(idx).or_insert_with(C64::zero) += amp;
        }
        let modes = modes.ok_or(Error::EmptyState)?;
        if modes == 0 {
            return Err(Error::ZeroModes);
        }
        Self::from_map(modes, map, normalize)
    }

    fn from_map(modes: usize, mut terms: BTreeMap<FockIndex, C64>, normalize: bool) -> Result<Self> {
        terms.retain(|_, a| *a != C64::zero());
        if terms.is_empty() {
            return Err(Error::EmptyState);
        }
        let norm = terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if normalize {
            for a in terms.values_mut() {
                *a /= norm;
            }
        }
        let degree = terms.keys().map(FockIndex::total).max().unwrap_or(0);
        Ok(CoreState {
            modes,
            terms,
            degree,
            normalized: normalize || (norm - 1.0).abs() <= NORM_TOL,
        })
    }

    pub fn vacuum(m: usize) -> Result<Self> {
        Self::fock(FockIndex::vacuum(m))
    }

    pub fn fock(occ: FockIndex) -> Result<Self> {
        Self::new([(occ, C64::one())], false)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Largest `|p|` over the support.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, idx: &FockIndex) -> C64 {
        self.terms.get(idx).copied().unwrap_or_else(C64::zero)
    }

    /// Terms in lexicographic order of occupation.
    pub fn terms(&self) -> impl Iterator<Item = (&FockIndex, &C64)> {
        self.terms.iter()
    }

    /// The state rescaled to unit norm together with the norm it had.
    pub fn normalized(&self) -> (CoreState, f64) {
        let norm = self.norm();
        let terms = self.terms.iter().map(|(k, a)| (k.clone(), a / norm)).collect();
        (
            CoreState {
                modes: self.modes,
                terms,
                degree: self.degree,
                normalized: true,
            },
            norm,
        )
    }

    /// Evaluates the stellar function `F*(z) = Σ c_p z^p / √(p!)`.
    pub fn stellar_eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: z.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(p, c)| c * p.monomial(z) / p.factorial().sqrt())
            .sum())
    }

    /// `Σ c_p^{(1)*} c_p^{(2)}`.
    pub fn overlap(&self, other: &CoreState) -> Result<C64> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: other.modes });
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(p, c)| other.terms.get(p).map(|c2| c.conj() * c2))
            .sum())
    }

    /// Applies `d + Σₗ createₗ âₗ† + annihₗ âₗ` exactly. The result is not
    /// renormalized; it fails with [`Error::EmptyState`] if everything cancels.
    pub fn apply_affine_ladder(&self, d: C64, create: &[C64], annih: &[C64]) -> Result<CoreState> {
        let m = self.modes;
        if create.len() != m || annih.len() != m {
            return Err(Error::ModeMismatch {
                expected: m,
                found: if create.len() != m { create.len() } else { annih.len() },
            });
        }
        let mut out: BTreeMap<FockIndex, C64> = BTreeMap::new();
        for (p, &c) in &self.terms {
            if d != C64::zero() {
                *out.entry(p.clone()).or_insert_with(C64::zero) += d * c;
            }
            for l in 0..m {
                let n = p.0[l];
                if create[l] != C64::zero() {
                    let mut q = p.clone();
                    q.0[l] += 1;
                    *out.entry(q).or_insert_with(C64::zero) += create[l] * c * f64::from(n + 1).sqrt();
                }
                if annih[l] != C64::zero() && n > 0 {
                    let mut q = p.clone();
                    q.0[l] -= 1;
                    *out.entry(q).or_insert_with(C64::zero) += annih[l] * c * f64::from(n).sqrt();
                }
            }
        }
        let mut st = Self::from_map(m, out, false)?;
        st.normalized = false;
        Ok(st)
    }
}
