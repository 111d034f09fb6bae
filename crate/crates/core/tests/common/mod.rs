#![allow(dead_code)]

pub mod reference;

use aqrm_core::ring::rat;
use aqrm_core::{LaurentPoly, NormalOp};
use proptest::prelude::*;

pub fn term() -> impl Strategy<Value = LaurentPoly> {
    (-9i64..=9, 1i64..=9, 0u32..=8, -8i32..=8)
        .prop_map(|(num, den, dp, gp)| LaurentPoly::monomial(rat(num, den), dp, gp))
}

/// Laurent polynomials with up to `max_terms` terms and |powers| ≤ 8.
pub fn laurent(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(term(), 0..=max_terms)
        .prop_map(|ts| ts.into_iter().fold(LaurentPoly::zero(), |acc, t| acc + t))
}

/// Small coefficients for operator tests so products stay cheap.
pub fn small_coeff() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (-4i64..=4, 1i64..=4, 0u32..=2, -2i32..=2).prop_map(|(n, d, dp, gp)| LaurentPoly::monomial(rat(n, d), dp, gp)),
        1..=2,
    )
    .prop_map(|ts| ts.into_iter().fold(LaurentPoly::zero(), |acc, t| acc + t))
}

/// Normal-ordered operators of total degree ≤ `max_degree`.
pub fn normal_op(max_degree: u32, max_terms: usize) -> impl Strategy<Value = NormalOp> {
    prop::collection::vec(
        (0..=max_degree, 0..=max_degree, small_coeff())
            .prop_filter("degree", move |(i, j, _)| i + j <= max_degree),
        0..=max_terms,
    )
    .prop_map(|ts| {
        ts.into_iter()
            .fold(NormalOp::zero(), |acc, (i, j, c)| acc.add(&NormalOp::monomial(c, i, j)))
    })
}

/// Lab-frame Hamiltonian (Δ/2)σ_z + (ε/2)σ_x + a†a + g(a† + a)σ_x, built
/// without any of the library's matrix code. Basis index = spin·dim + n with
/// spin 0 = σ_z eigenvalue +1.
pub fn lab_hamiltonian(dim: usize, delta: f64, g: f64, bias: f64) -> nalgebra::DMatrix<f64> {
    let mut h = nalgebra::DMatrix::zeros(2 * dim, 2 * dim);
    for n in 0..dim {
        h[(n, n)] = n as f64 + delta / 2.0;
        h[(dim + n, dim + n)] = n as f64 - delta / 2.0;
        h[(n, dim + n)] = bias / 2.0;
        h[(dim + n, n)] = bias / 2.0;
        if n + 1 < dim {
            let x = g * ((n + 1) as f64).sqrt();
            // σ_x couples the spin blocks through a† + a
            for (r, c) in [(n, dim + n + 1), (n + 1, dim + n), (dim + n, n + 1), (dim + n + 1, n)] {
                h[(r, c)] = x;
            }
        }
    }
    h
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
pub fn jacobi_eigenvalues(m: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut a = m.clone();
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() < 1e-14 * a.norm() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}
