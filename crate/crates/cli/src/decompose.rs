//! Elementary-gate decomposition of a Gaussian unitary.
//!
//! `A = U cosh(R) W†`, `B = U sinh(R) Wᵀ` splits `Ĝ` into a passive
//! interferometer `W†`, single-mode squeezers, a passive interferometer `U`
//! and final displacements. Interferometers are reduced to beamsplitters and
//! rotations by Givens nulling.

use gcore::{CMatrix, ElementaryGate, GaussianUnitary, C64};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::CliError;

type CMat = DMatrix<C64>;

/// Relative gap below which singular values are treated as degenerate.
const DEGENERACY_TOL: f64 = 1e-7;
/// Parameters below this are dropped as identity gates.
const TRIVIAL: f64 = 1e-14;
/// Largest accepted reconstruction error of the symplectic matrix and displacement.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

fn to_na(m: &CMatrix) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Gates whose product (applied in order) is `g`.
pub fn decompose(g: &GaussianUnitary) -> Result<Vec<ElementaryGate>, CliError> {
    let m = g.modes();
    let a = to_na(&g.a_block());
    let b = to_na(&g.b_block());
    let svd = a.clone().svd(true, true);
    let (u0, vt0) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut u = CMat::from_fn(m, m, |i, k| u0[(i, order[k])]);
    let mut w = CMat::from_fn(m, m, |i, k| vt0[(order[k], i)].conj());

    let mut r = vec![0.0; m];
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && sigma[end - 1] - sigma[end] <= DEGENERACY_TOL * sigma[start] {
            end += 1;
        }
        let k = end - start;
        let ub = u.columns(start, k).into_owned();
        let wb = w.columns(start, k).into_owned();
        let mblock = ub.adjoint() * &b * wb.map(|z| z.conj());
        let msvd = mblock.clone().svd(true, true);
        let sh = msvd.singular_values.mean();
        if sh > TRIVIAL {
            let q = msvd.u.expect("u requested") * msvd.v_t.expect("v_t requested");
            let o = takagi_symmetric_unitary(&((&q + q.transpose()) * C64::new(0.5, 0.0)));
            u.columns_mut(start, k).copy_from(&(ub * &o));
            w.columns_mut(start, k).copy_from(&(wb * &o));
            r[start..end].iter_mut().for_each(|x| *x = sh.asinh());
        }
        start = end;
    }

    let mut gates = passive_gates(&w.adjoint());
    for (mode, &rk) in r.iter().enumerate() {
        if rk > TRIVIAL {
            // A = cosh r, B = +sinh r.
            gates.push(ElementaryGate::Squeeze { mode, xi: C64::new(-rk, 0.0) });
        }
    }
    gates.extend(passive_gates(&u));
    for (mode, &beta) in g.displacement().iter().enumerate() {
        if beta.norm() > 0.0 {
            gates.push(ElementaryGate::Displacement { mode, beta });
        }
    }

    let rebuilt = GaussianUnitary::from_gates(m, &gates).map_err(CliError::core("decomposition"))?;
    let err = rebuilt.symplectic().max_abs_diff(g.symplectic()).max(
        rebuilt.displacement().iter().zip(g.displacement()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max),
    );
    let scale = g.symplectic().max_abs().max(1.0);
    if err > RECONSTRUCTION_TOL * scale {
        return Err(CliError::Core {
            context: format!("gate decomposition reconstructs the unitary only to {err:e}"),
            source: gcore::Error::ComplexResidue { imag: err },
        });
    }
    Ok(gates)
}

/// `O` unitary with `Q = O Oᵀ` for a symmetric unitary `Q`.
fn takagi_symmetric_unitary(q: &CMat) -> CMat {
    // Re Q and Im Q are commuting real symmetric matrices; a generic
    // combination shares their eigenbasis.
    let k = q.nrows();
    let mix = DMatrix::from_fn(k, k, |i, j| q[(i, j)].re + 0.618_033_988_749_894_9 * q[(i, j)].im);
    let r = SymmetricEigen::new(mix).eigenvectors.map(|x| C64::new(x, 0.0));
    let d = r.transpose() * q * &r;
    let half = CMat::from_diagonal(&nalgebra::DVector::from_fn(k, |i, _| C64::from_polar(1.0, 0.5 * d[(i, i)].arg())));
    r * half
}

/// Beamsplitters and rotations whose a-block product is the unitary `p`.
pub fn passive_gates(p: &CMat) -> Vec<ElementaryGate> {
    let n = p.nrows();
    let mut p = p.clone();
    let mut nulling = Vec::new();
    for col in 0..n {
        for row in (col + 1..n).rev() {
            let (x, y) = (p[(row - 1, col)], p[(row, col)]);
            if y.norm() <= TRIVIAL * 1e-2 {
                continue;
            }
            let theta = y.norm().atan2(x.norm());
            let phi = if x.norm() == 0.0 { 0.0 } else { (-y / x).arg() };
            let (c, s) = (theta.cos(), theta.sin());
            let (e, ec) = (C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi));
            for j in 0..n {
                let (top, bot) = (p[(row - 1, j)], p[(row, j)]);
                p[(row - 1, j)] = top * c - ec * s * bot;
                p[(row, j)] = e * s * top + bot * c;
            }
            nulling.push((row - 1, row, theta, phi));
        }
    }
    // T_N..T_1 P = D, so P = T_1†..T_N† D: rotations first, then T_N†..T_1†.
    let mut gates: Vec<ElementaryGate> = (0..n)
        .map(|k| (k, p[(k, k)].arg()))
        .filter(|&(_, phi)| phi.abs() > TRIVIAL)
        .map(|(mode, phi)| ElementaryGate::Rotation { mode, phi })
        .collect();
    gates.extend(
        nulling
            .into_iter()
            .rev()
            .filter(|&(_, _, theta, _)| theta.abs() > TRIVIAL)
            .map(|(a, b, theta, phi)| ElementaryGate::Beamsplitter { modes: [a, b], theta: -theta, phi }),
    );
    gates
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(g: &GaussianUnitary) {
        let gates = decompose(g).unwrap();
        let rebuilt = GaussianUnitary::from_gates(g.modes(), &gates).unwrap();
        assert!(rebuilt.symplectic().max_abs_diff(g.symplectic()) < 1e-11);
    }

    #[test]
    fn random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = rng.random_range(1..=5);
            let count = rng.random_range(0..=12);
            check(&gcore::ipag::random_layer(&mut rng, m, count).unwrap());
        }
    }

    #[test]
    fn degenerate_squeezing_and_identity() {
        check(&GaussianUnitary::identity(3).unwrap());
        let xi = C64::new(0.2, 0.4);
        let gates = [
            ElementaryGate::Squeeze { mode: 0, xi },
            ElementaryGate::Squeeze { mode: 1, xi },
            ElementaryGate::Beamsplitter { modes: [0, 1], theta: 0.4, phi: 0.3 },
            ElementaryGate::TwoModeSqueeze { modes: [1, 2], xi: C64::new(0.0, 0.3) },
        ];
        check(&GaussianUnitary::from_gates(3, &gates).unwrap());
        check(&GaussianUnitary::from_gates(2, &[ElementaryGate::TwoModeSqueeze { modes: [0, 1], xi }]).unwrap());
    }
}
