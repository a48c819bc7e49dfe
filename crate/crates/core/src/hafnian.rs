//! Permanent, hafnian and loop hafnian.
//!
//! The fast loop hafnian is the power-trace formula. Pair index `i` with
//! `i + n` (after padding odd sizes with an isolated unit loop). For a
//! subset `Z` of pairs let `A_Z` be the off-diagonal part restricted to the
//! pairs in `Z`, `d_Z` the matching diagonal entries and `C = X A_Z`, where
//! `X` swaps pair partners. Every single-pair matching, overlaid with the
//! fixed pairing, decomposes into alternating cycles and loop-terminated
//! paths, so
//!
//! ```text
//! lhaf(A) = Σ_Z (−1)^{n−|Z|} [ηⁿ] exp( Σⱼ ηʲ ( tr(Cʲ)/(2j) + ½ (X d_Z)ᵀ (A_Z X)^{j−1} d_Z ) )
//! ```
//!
//! Power traces come from the characteristic polynomial of the Hessenberg
//! form of `C`, so each subset costs `O(|Z|³)` and the whole sum
//! `O(r³ 2^{r/2})`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::corestate::FockIndex;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::{C64, STRUCTURE_TOL};

fn check_square(a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: a.rows(), cols: a.cols() })
    }
}

fn check_symmetric(a: &CMatrix) -> Result<()> {
    check_square(a)?;
    let deviation = a.symmetry_deviation();
    if deviation > STRUCTURE_TOL * a.max_abs().max(1.0) {
        Err(Error::NotSymmetric { deviation })
    } else {
        Ok(())
    }
}

/// Permanent by Ryser's formula with Gray-code updates.
pub fn permanent(b: &CMatrix) -> Result<C64> {
    check_square(b)?;
    let n = b.rows();
    if n == 0 {
        return Ok(C64::one());
    }
    let mut row_sums = vec![C64::zero(); n];
    let mut total = C64::zero();
    let mut gray = 0usize;
    for k in 1..(1usize << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += b[(i, col)];
            } else {
                *s -= b[(i, col)];
            }
        }
        gray = next;
        let prod = row_sums.iter().fold(C64::one(), |acc, x| acc * x);
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// Hafnian: sum over perfect matchings. Odd sizes give 0, the empty matrix 1.
pub fn hafnian(a: &CMatrix) -> Result<C64> {
    check_symmetric(a)?;
    let r = a.rows();
    if r % 2 == 1 {
        return Ok(C64::zero());
    }
    Ok(power_trace_sum(a, None))
}

/// Loop hafnian: sum over partitions into pairs and singletons, pairs
/// weighted by `a_ij` and singletons by `a_kk`.
pub fn loop_hafnian(a: &CMatrix) -> Result<C64> {
    check_symmetric(a)?;
    let diag: Vec<C64> = (0..a.rows()).map(|i| a[(i, i)]).collect();
    Ok(power_trace_sum(a, Some(&diag)))
}

/// Reference implementations by explicit enumeration. Exponential in the
/// matrix size rather than its half; meant for checking the fast kernels.
pub mod reference {
    use super::*;

    /// Loop hafnian by enumerating partitions into pairs and singletons in
    /// lexicographic order: the smallest free index is either a singleton or
    /// paired with a larger free index.
    pub fn loop_hafnian_enumerate(a: &CMatrix) -> Result<C64> {
        check_symmetric(a)?;
        let mut free = vec![true; a.rows()];
        Ok(enumerate(a, &mut free, true))
    }

    pub fn hafnian_enumerate(a: &CMatrix) -> Result<C64> {
        check_symmetric(a)?;
        let mut free = vec![true; a.rows()];
        Ok(enumerate(a, &mut free, false))
    }

    fn enumerate(a: &CMatrix, free: &mut [bool], loops: bool) -> C64 {
        let Some(i) = free.iter().position(|&f| f) else {
            return C64::one();
        };
        free[i] = false;
        let mut total = C64::zero();
        if loops {
            total += a[(i, i)] * enumerate(a, free, loops);
        }
        for j in (i + 1)..free.len() {
            if free[j] {
                free[j] = false;
                total += a[(i, j)] * enumerate(a, free, loops);
                free[j] = true;
            }
        }
        free[i] = true;
        total
    }

    /// Permanent as a sum over all permutations.
    pub fn permanent_expand(b: &CMatrix) -> Result<C64> {
        check_square(b)?;
        let mut used = vec![false; b.rows()];
        Ok(expand(b, 0, &mut used))
    }

    fn expand(b: &CMatrix, row: usize, used: &mut [bool]) -> C64 {
        if row == b.rows() {
            return C64::one();
        }
        let mut total = C64::zero();
        for col in 0..b.cols() {
            if !used[col] {
                used[col] = true;
                total += b[(row, col)] * expand(b, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
}

/// Scratch buffers reused across subsets.
struct Workspace {
    c: Vec<C64>,
    a_sub: Vec<C64>,
    v: Vec<C64>,
    w: Vec<C64>,
    poly: Vec<Vec<C64>>,
    coeffs: Vec<C64>,
    traces: Vec<C64>,
    g: Vec<C64>,
    series: Vec<C64>,
    householder: Vec<C64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let size = 2 * n;
        Workspace {
            c: vec![C64::zero(); size * size],
            a_sub: vec![C64::zero(); size * size],
            v: vec![C64::zero(); size],
            w: vec![C64::zero(); size],
            poly: (0..=size).map(|k| vec![C64::zero(); k + 1]).collect(),
            coeffs: vec![C64::zero(); size + 1],
            traces: vec![C64::zero(); n + 1],
            g: vec![C64::zero(); n + 1],
            series: vec![C64::zero(); n + 1],
            householder: vec![C64::zero(); size],
        }
    }
}

/// Inclusion–exclusion over subsets of pairs. `diag = None` gives the
/// hafnian (no loop paths).
fn power_trace_sum(a: &CMatrix, diag: Option<&[C64]>) -> C64 {
    let r = a.rows();
    if r == 0 {
        return C64::one();
    }
    let padded = r + r % 2;
    let n = padded / 2;
    // zero-diagonal copy plus loop weights, the padding vertex carries a unit loop
    let mut off = vec![C64::zero(); padded * padded];
    for i in 0..r {
        for j in 0..r {
            if i != j {
                off[i * padded + j] = a[(i, j)];
            }
        }
    }
    let loops: Option<Vec<C64>> = diag.map(|d| {
        let mut v = d.to_vec();
        v.resize(padded, C64::one());
        v
    });

    let mut ws = Workspace::new(n);
    let mut idx = Vec::with_capacity(padded);
    let mut total = C64::zero();
    for mask in 1usize..(1usize << n) {
        idx.clear();
        idx.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        let k = idx.len();
        for t in 0..k {
            idx.push(idx[t] + n);
        }
        let f = subset_term(&off, padded, loops.as_deref(), &idx, n, &mut ws);
        if (n - k).is_multiple_of(2) {
            total += f;
        } else {
            total -= f;
        }
    }
    total
}

fn subset_term(off: &[C64], stride: usize, loops: Option<&[C64]>, idx: &[usize], n: usize, ws: &mut Workspace) -> C64 {
    let size = idx.len();
    let half = size / 2;
    let partner = |i: usize| if i < half { i + half } else { i - half };
    for i in 0..size {
        for j in 0..size {
            let v = off[idx[i] * stride + idx[j]];
            ws.a_sub[i * size + j] = v;
            // C = X A_Z: row i of C is row partner(i) of A_Z
            ws.c[partner(i) * size + j] = v;
        }
    }
    power_traces(&mut ws.c[..size * size], size, n, &mut ws.poly, &mut ws.coeffs, &mut ws.householder, &mut ws.traces);

    for j in 1..=n {
        ws.g[j] = ws.traces[j] / (2 * j) as f64;
    }
    if let Some(d) = loops {
        // v₁ = d_Z, v_{j+1} = A_Z X v_j, term_j = (X d_Z)·v_j
        for i in 0..size {
            ws.v[i] = d[idx[i]];
        }
        for j in 1..=n {
            let mut dot = C64::zero();
            for i in 0..size {
                dot += d[idx[partner(i)]] * ws.v[i];
            }
            ws.g[j] += dot * 0.5;
            if j < n {
                for i in 0..size {
                    let row = &ws.a_sub[i * size..(i + 1) * size];
                    let mut s = C64::zero();
                    for (l, a) in row.iter().enumerate() {
                        s += a * ws.v[partner(l)];
                    }
                    ws.w[i] = s;
                }
                core::mem::swap(&mut ws.v, &mut ws.w);
            }
        }
    }
    // [ηⁿ] exp(Σ g_j η^j): e_t = (1/t) Σ_{j=1}^{t} j g_j e_{t−j}
    ws.series[0] = C64::one();
    for t in 1..=n {
        let mut s = C64::zero();
        for j in 1..=t {
            s += ws.g[j] * ws.series[t - j] * j as f64;
        }
        ws.series[t] = s / t as f64;
    }
    ws.series[n]
}

/// `traces[j] = tr(Cʲ)` for `j = 1..=n`. Destroys `c`.
fn power_traces(
    c: &mut [C64],
    size: usize,
    n: usize,
    poly: &mut [Vec<C64>],
    coeffs: &mut [C64],
    scratch: &mut [C64],
    traces: &mut [C64],
) {
    hessenberg(c, size, scratch);
    charpoly_hessenberg(c, size, poly, coeffs);
    // Newton: det(xI − C) = xᴺ + c₁xᴺ⁻¹ + … + c_N, p_j = −j c_j − Σ_{i<j} c_i p_{j−i}
    for j in 1..=n {
        let mut s = if j <= size { coeffs[j] * j as f64 } else { C64::zero() };
        for i in 1..j.min(size + 1) {
            s += coeffs[i] * traces[j - i];
        }
        traces[j] = -s;
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut [C64], n: usize, v: &mut [C64]) {
    if n < 3 {
        return;
    }
    for col in 0..n - 2 {
        let len = n - col - 1;
        let mut norm2 = 0.0;
        for i in 0..len {
            v[i] = h[(col + 1 + i) * n + col];
            norm2 += v[i].norm_sqr();
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { C64::one() } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H ← (I − β v v†) H on rows col+1..n
        for j in 0..n {
            let mut s = C64::zero();
            for i in 0..len {
                s += v[i].conj() * h[(col + 1 + i) * n + j];
            }
            s *= beta;
            for i in 0..len {
                h[(col + 1 + i) * n + j] -= v[i] * s;
            }
        }
        // H ← H (I − β v v†) on columns col+1..n
        for i in 0..n {
            let row = &mut h[i * n..(i + 1) * n];
            let mut s = C64::zero();
            for l in 0..len {
                s += row[col + 1 + l] * v[l];
            }
            s *= beta;
            for l in 0..len {
                row[col + 1 + l] -= s * v[l].conj();
            }
        }
    }
}

/// Characteristic polynomial of an upper Hessenberg matrix by the
/// recurrence on leading principal minors. Writes `coeffs[i]` = coefficient
/// of `x^{N−i}` in `det(xI − H)`.
fn charpoly_hessenberg(h: &[C64], n: usize, poly: &mut [Vec<C64>], coeffs: &mut [C64]) {
    // poly[k][t] = coefficient of x^t in the characteristic polynomial of the
    // leading k×k block.
    poly[0][0] = C64::one();
    for k in 1..=n {
        let hkk = h[(k - 1) * n + (k - 1)];
        let (prev, rest) = poly.split_at_mut(k);
        let cur = &mut rest[0];
        cur.iter_mut().for_each(|z| *z = C64::zero());
        let pk1 = &prev[k - 1];
        for t in 0..k {
            cur[t + 1] += pk1[t];
            cur[t] -= hkk * pk1[t];
        }
        let mut prod = C64::one();
        for i in (1..k).rev() {
            // product of subdiagonal entries h_{i+1,i} … h_{k,k−1} (1-based)
            prod *= h[i * n + (i - 1)];
            let coef = h[(i - 1) * n + (k - 1)] * prod;
            if coef == C64::zero() {
                continue;
            }
            let p = &prev[i - 1];
            for t in 0..i {
                cur[t] -= coef * p[t];
            }
        }
    }
    for i in 0..=n {
        coeffs[i] = poly[n][n - i];
    }
}

/// Inputs of the loop-hafnian construction: a symmetric `2m×2m` matrix, a
/// `2m` vector and two occupation patterns.
#[derive(Clone, Debug)]
pub struct ReducedMatrixSpec {
    pub v: CMatrix,
    pub d: Vec<C64>,
    pub p: FockIndex,
    pub q: FockIndex,
}

impl ReducedMatrixSpec {
    fn check(&self) -> Result<usize> {
        check_symmetric(&self.v)?;
        if !self.v.rows().is_multiple_of(2) {
            return Err(Error::OddDimension(self.v.rows()));
        }
        let m = self.v.rows() / 2;
        if self.d.len() != 2 * m {
            return Err(Error::DimensionMismatch { expected: 2 * m, found: self.d.len() });
        }
        for idx in [&self.p, &self.q] {
            if idx.modes() != m {
                return Err(Error::IndexLength { expected: m, found: idx.modes() });
            }
        }
        Ok(m)
    }
}

/// Row/column repetition pattern: index `k` repeated `p_k` times, then
/// index `m + k` repeated `q_k` times.
pub fn repetition_indices(p: &FockIndex, q: &FockIndex) -> Vec<usize> {
    let m = p.modes();
    let mut idx = Vec::with_capacity((p.total() + q.total()) as usize);
    for (k, &n) in p.occupations().iter().enumerate() {
        idx.extend(core::iter::repeat_n(k, n as usize));
    }
    for (k, &n) in q.occupations().iter().enumerate() {
        idx.extend(core::iter::repeat_n(m + k, n as usize));
    }
    idx
}

/// Repeats rows and columns of `V` according to `(p, q)`, then overwrites
/// the diagonal with the correspondingly repeated entries of `D`.
///
/// Repeating first keeps the off-diagonal copies `v_kk` between repeated
/// indices; replacing the diagonal first would lose them.
pub fn build_reduced_matrix(spec: &ReducedMatrixSpec) -> Result<CMatrix> {
    spec.check()?;
    Ok(reduced_matrix(&spec.v, &spec.d, &repetition_indices(&spec.p, &spec.q)))
}

pub(crate) fn reduced_matrix(v: &CMatrix, d: &[C64], idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| if i == j { d[idx[i]] } else { v[(idx[i], idx[j])] })
}

/// `(−1)^{|p|+|q|} lhaf(A_{p,q})`: the Gaussian integral of
/// `exp(½β̃ᵀVβ̃ + Dᵀβ̃)` against derivatives of the delta distribution.
pub fn t_integral(spec: &ReducedMatrixSpec) -> Result<C64> {
    let a = build_reduced_matrix(spec)?;
    let l = loop_hafnian(&a)?;
    Ok(if (spec.p.total() + spec.q.total()).is_multiple_of(2) { l } else { -l })
}
