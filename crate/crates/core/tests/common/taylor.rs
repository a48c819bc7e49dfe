//! Independent check of the loop-hafnian integral: the mixed derivative
//! `∂^E exp(½ xᵀVx + Dᵀx)` at `x = 0` read off a truncated multivariate
//! Taylor series.

use std::collections::BTreeMap;

use gcore::{CMatrix, C64};

type Poly = BTreeMap<Vec<u32>, C64>;

fn divides(e: &[u32], bound: &[u32]) -> bool {
    e.iter().zip(bound).all(|(a, b)| a <= b)
}

fn mul(a: &Poly, b: &Poly, bound: &[u32]) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if divides(&e, bound) {
                *out.entry(e).or_insert(C64::new(0.0, 0.0)) += ca * cb;
            }
        }
    }
    out
}

/// `∂^E exp(½ xᵀVx + Dᵀx)|₀` where `E` lists the multiplicity of each variable.
pub fn derivative(v: &CMatrix, d: &[C64], exponents: &[u32]) -> C64 {
    let n = d.len();
    let mut p = Poly::new();
    let unit = |i: usize| {
        let mut e = vec![0u32; n];
        e[i] = 1;
        e
    };
    for i in 0..n {
        if exponents[i] >= 1 {
            *p.entry(unit(i)).or_insert(C64::new(0.0, 0.0)) += d[i];
        }
        for j in 0..n {
            let mut e = unit(i);
            e[j] += 1;
            if divides(&e, exponents) {
                *p.entry(e).or_insert(C64::new(0.0, 0.0)) += v[(i, j)] * 0.5;
            }
        }
    }
    let total: u32 = exponents.iter().sum();
    // exp(P) = Σ_k P^k / k!, P has no constant term
    let mut series = Poly::new();
    series.insert(vec![0; n], C64::new(1.0, 0.0));
    let mut power = series.clone();
    for k in 1..=total {
        power = mul(&power, &p, exponents);
        for (e, c) in &power {
            *series.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += c / factorial(k);
        }
    }
    let coef = series.get(exponents).copied().unwrap_or(C64::new(0.0, 0.0));
    let mult: f64 = exponents.iter().map(|&e| factorial(e)).product();
    coef * mult
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}
