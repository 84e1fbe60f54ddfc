//! Certified Mahler measures.
//!
//! Roots of each squarefree factor are approximated by companion-matrix
//! eigenvalues and polished by Newton's method. Around each approximation
//! z_i the disc of radius d·|f(z_i)| / |a_d ∏_{j≠i}(z_i − z_j)| (inflated for
//! rounding) contains a root; when these discs are pairwise disjoint each
//! contains exactly one, which turns ∏ max(1, |z_i|) into a rigorous
//! enclosure.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::irreducible::squarefree_decomposition;
use super::poly::IntPolynomial;
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Enclosure [value − error, value + error] of M(f).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mahler {
    pub value: f64,
    pub error_bound: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Mahler {
    fn exact(v: f64) -> Mahler {
        Mahler { value: v, error_bound: 0.0, lower: v, upper: v }
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, f64) {
    // value and Σ|a_k||z|^k for the rounding bound
    let r = z.norm();
    let mut v = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    for &a in c.iter().rev() {
        v = v * z + a;
        s = s * r + a.abs();
    }
    (v, s)
}

fn approximate_roots(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    if d == 1 {
        return vec![Complex64::new(-c[0] / c[1], 0.0)];
    }
    let lead = c[d];
    let m = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect();
    for z in roots.iter_mut() {
        for _ in 0..8 {
            let (fv, _) = horner(c, *z);
            let (dv, _) = horner(&dc, *z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = fv / dv;
            *z -= step;
            if step.norm() <= 4.0 * EPS * z.norm() {
                break;
            }
        }
    }
    roots
}

/// Enclosure of ∏ max(1, |root|) over the roots of a squarefree polynomial.
fn root_product(c: &[f64]) -> Result<(f64, f64)> {
    let d = c.len() - 1;
    if d == 0 {
        return Ok((1.0, 1.0));
    }
    let roots = approximate_roots(c);
    let df = d as f64;
    let gamma = 8.0 * (df + 2.0) * EPS;
    let radii: Vec<f64> = (0..d)
        .map(|i| {
            let (v, s) = horner(c, roots[i]);
            let num = (v.norm() + gamma * s) * (1.0 + 4.0 * EPS);
            let den = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(c[d].abs(), |acc, (_, zj)| acc * (roots[i] - zj).norm())
                * (1.0 - 4.0 * df * EPS);
            if den > 0.0 {
                df * num / den * (1.0 + 1e-12)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    for i in 0..d {
        for j in i + 1..d {
            if (roots[i] - roots[j]).norm() * (1.0 - 4.0 * EPS) <= radii[i] + radii[j] {
                return Err(Error::ToleranceUnreachable {
                    tol: "root isolation".into(),
                    reason: "root discs overlap in double precision".into(),
                });
            }
        }
    }
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for (z, r) in roots.iter().zip(&radii) {
        let a = z.norm();
        lo *= f64::max(1.0, (a * (1.0 - 2.0 * EPS) - r) * (1.0 - EPS));
        hi *= f64::max(1.0, (a * (1.0 + 2.0 * EPS) + r) * (1.0 + EPS));
    }
    Ok((f64::max(1.0, lo * (1.0 - 2.0 * df * EPS)), hi * (1.0 + 2.0 * df * EPS)))
}

/// M(f) = |a_d|·∏ max(1, |root|), certified to within `tol`.
pub fn mahler_measure(f: &IntPolynomial, tol: f64) -> Result<Mahler> {
    if !(tol > 0.0) {
        return Err(Error::pre("tolerance must be positive"));
    }
    let lead = f.leading().unsigned_abs() as f64;
    if f.degree() == 0 {
        return Ok(Mahler::exact(lead));
    }
    if f.degree() == 1 {
        let v = f.coeffs()[0].unsigned_abs().max(f.leading().unsigned_abs()) as f64;
        return Ok(Mahler::exact(v));
    }
    if f.coeffs().iter().any(|c| c.unsigned_abs() > 1 << 53) {
        return Err(Error::ToleranceUnreachable {
            tol: format!("{tol:e}"),
            reason: "coefficients are not exact doubles".into(),
        });
    }
    let (mut lo, mut hi) = (lead, lead);
    for (i, g) in squarefree_decomposition(f).iter().enumerate() {
        // the zero root contributes a factor of 1
        let z = g.zero_multiplicity();
        let c: Vec<f64> = g.coeffs()[z..].iter().map(|&a| a as f64).collect();
        let (l, h) = root_product(&c)?;
        lo *= l.powi(i as i32 + 1);
        hi *= h.powi(i as i32 + 1);
    }
    lo = lo.max(lead) * (1.0 - 4.0 * EPS);
    hi *= 1.0 + 4.0 * EPS;
    lo = lo.max(lead);
    let m = Mahler { value: 0.5 * (lo + hi), error_bound: 0.5 * (hi - lo), lower: lo, upper: hi };
    if m.error_bound > tol {
        return Err(Error::ToleranceUnreachable {
            tol: format!("{tol:e}"),
            reason: format!("certified enclosure has half-width {:e}", m.error_bound),
        });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(mahler_measure(&p(&[-2, 1]), 1e-12).unwrap().value, 2.0);
        let g = mahler_measure(&p(&[-1, -1, 1]), 1e-12).unwrap();
        assert!((g.value - 1.618033988749895).abs() < 1e-12);
        assert!(g.lower <= 1.618033988749895 && 1.618033988749895 <= g.upper);
        let i = mahler_measure(&p(&[1, 0, 1]), 1e-12).unwrap();
        assert!((i.value - 1.0).abs() < 1e-12);
        assert_eq!(i.lower, 1.0);
        assert_eq!(mahler_measure(&p(&[0, 1]), 1e-12).unwrap().value, 1.0);
        assert_eq!(mahler_measure(&p(&[5]), 1e-12).unwrap().value, 5.0);
    }

    #[test]
    fn lehmer_and_repeated_roots() {
        let l = mahler_measure(&p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]), 1e-9).unwrap();
        assert!((l.value - 1.176_280_818_259_917_6).abs() < 1e-9);
        // (x² − x − 1)² has measure φ²
        let sq = p(&[-1, -1, 1]).mul(&p(&[-1, -1, 1])).unwrap();
        let m = mahler_measure(&sq, 1e-9).unwrap();
        assert!((m.value - 2.618033988749895).abs() < 1e-9);
        // 3x²(2x − 1) : 3·2·max(1, 1/2) = 6
        let m = mahler_measure(&p(&[0, 0, -3, 6]), 1e-9).unwrap();
        assert!((m.value - 6.0).abs() < 1e-9);
    }
}
