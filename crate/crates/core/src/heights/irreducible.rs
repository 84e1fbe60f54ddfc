//! Exact irreducibility over Q for small degrees: the rational root test,
//! then Kronecker's interpolation search for factors of degree 2..d/2 with
//! values dividing f at chosen integer points and coefficients inside the
//! Mignotte bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{big, IntPolynomial};
use crate::arithmetic::{divisors, factorize_with_cap};
use crate::{Caps, Error, Result};

/// Yun's squarefree decomposition: primitive g_1, g_2, … with
/// f = c·∏ g_i^i, each g_i squarefree and pairwise coprime. Entry i−1 is
/// g_i (possibly the constant 1); trailing constants are dropped.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let a: Vec<BigRational> = f.to_big().into_iter().map(BigRational::from_integer).collect();
    let da = q::derivative(&a);
    if da.is_empty() {
        return Vec::new();
    }
    let b = q::gcd(&a, &da);
    let mut c = q::div(&a, &b);
    let mut d = q::sub(&q::div(&da, &b), &q::derivative(&c));
    let mut out = Vec::new();
    while c.len() > 1 {
        let g = q::gcd(&c, &d);
        c = q::div(&c, &g);
        d = q::sub(&q::div(&d, &g), &q::derivative(&c));
        out.push(q::to_primitive(&g));
    }
    while out.last().is_some_and(|g| g.degree() == 0) {
        out.pop();
    }
    out
}

/// Polynomials over Q, constant first, trimmed.
mod q {
    use super::*;

    pub fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn derivative(a: &[BigRational]) -> Vec<BigRational> {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = trim(a.to_vec());
        let lb = b.last().expect("division by zero polynomial").clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut qt = vec![BigRational::zero(); r.len() - b.len() + 1];
        for k in (0..qt.len()).rev() {
            let c = &r[k + b.len() - 1] / &lb;
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
            qt[k] = c;
        }
        (trim(qt), trim(r))
    }

    pub fn div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        divrem(a, b).0
    }

    /// Monic gcd.
    pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = divrem(&x, &y).1;
            x = y;
            y = r;
        }
        let l = x.last().cloned().unwrap_or_else(BigRational::one);
        x.iter().map(|c| c / &l).collect()
    }

    pub fn to_primitive(a: &[BigRational]) -> IntPolynomial {
        let den = a.iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
        let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        IntPolynomial::from_big(&big::primitive(&ints)).expect("small factor of a 64-bit polynomial")
    }
}

/// A rational root p/q of f, if any (p | a_0, q | a_d).
pub fn rational_root(f: &IntPolynomial, caps: &Caps) -> Result<Option<(i64, i64)>> {
    if f.coeffs()[0] == 0 {
        return Ok(Some((0, 1)));
    }
    let divs = |n: i64| -> Result<Vec<u64>> {
        let fac = factorize_with_cap(n.unsigned_abs(), caps.factor_trial);
        if fac.factors.iter().any(|&(p, _)| p > caps.factor_trial && !crate::arithmetic::is_prime(p)) {
            return Err(Error::limit("factoring a coefficient", caps.factor_trial));
        }
        Ok(divisors(n.unsigned_abs()))
    };
    let ps = divs(f.coeffs()[0])?;
    let qs = divs(f.leading())?;
    let a = f.to_big();
    for &q in &qs {
        for &p in &ps {
            if num_integer::Integer::gcd(&p, &q) != 1 {
                continue;
            }
            for s in [1i64, -1] {
                let (p, q) = (s * p as i64, q as i64);
                // q^d f(p/q) = Σ a_i p^i q^{d−i}
                let d = f.degree();
                let v: BigInt = a
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * num_traits::pow(BigInt::from(p), i) * num_traits::pow(BigInt::from(q), d - i))
                    .sum();
                if v.is_zero() {
                    return Ok(Some((p, q)));
                }
            }
        }
    }
    Ok(None)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A nontrivial factor of degree k, if one exists.
fn factor_of_degree(f: &IntPolynomial, k: usize, caps: &Caps) -> Result<Option<Vec<BigInt>>> {
    // k+1 evaluation points with f(x) ≠ 0 and few divisors
    let mut pts: Vec<(usize, i64, i128)> = Vec::new();
    for x in -24i64..=24 {
        let Some(v) = f.eval(x) else { continue };
        if v == 0 || v.unsigned_abs() > u64::MAX as u128 {
            continue;
        }
        let n = divisors(v.unsigned_abs() as u64).len();
        pts.push((n, x, v));
    }
    if pts.len() < k + 1 {
        return Err(Error::limit("evaluation points for the factor search", 49));
    }
    pts.sort();
    pts.truncate(k + 1);
    pts.sort_by_key(|p| p.1);
    let xs: Vec<i64> = pts.iter().map(|p| p.1).collect();
    let choices: Vec<Vec<i64>> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ds = divisors(p.2.unsigned_abs() as u64);
            // the overall sign of g is irrelevant: fix g(x_0) > 0
            if i == 0 {
                ds.iter().map(|&x| x as i64).collect()
            } else {
                ds.iter().flat_map(|&x| [x as i64, -(x as i64)]).collect()
            }
        })
        .collect();
    let total: f64 = choices.iter().map(|c| c.len() as f64).product();
    if total > caps.factor_search as f64 {
        return Err(Error::limit(format!("factor search over {total:.0} value tuples"), caps.factor_search));
    }

    // Lagrange basis polynomials over Q at the chosen points
    let basis: Vec<Vec<BigRational>> = (0..=k)
        .map(|i| {
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for j in 0..=k {
                if j == i {
                    continue;
                }
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (t, c) in poly.iter().enumerate() {
                    next[t + 1] += c;
                    next[t] -= c * BigRational::from_integer(BigInt::from(xs[j]));
                }
                poly = next;
                denom *= BigRational::from_integer(BigInt::from(xs[i] - xs[j]));
            }
            poly.into_iter().map(|c| c / &denom).collect()
        })
        .collect();
    let mig = f.norm2().ceil();
    let bounds: Vec<f64> = (0..=k).map(|j| binom(k, j) * mig).collect();
    let fb = f.to_big();

    let mut idx = vec![0usize; k + 1];
    loop {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        for (i, b) in basis.iter().enumerate() {
            let v = BigRational::from_integer(BigInt::from(choices[i][idx[i]]));
            for (t, c) in b.iter().enumerate() {
                coeffs[t] += c * &v;
            }
        }
        let integral = coeffs.iter().all(|c| c.is_integer());
        if integral {
            let g: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
            let within = g.iter().zip(&bounds).all(|(c, &b)| c.to_f64().is_some_and(|v| v.abs() <= b));
            if g.len() == k + 1 && !g[k].is_zero() && within && big::div_exact(&fb, &g).is_some() {
                return Ok(Some(g));
            }
        }
        // next tuple
        let mut pos = 0;
        loop {
            if pos > k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Irreducibility over Q of a primitive polynomial of degree ≥ 1.
pub fn is_irreducible(f: &IntPolynomial, caps: &Caps) -> Result<bool> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::pre("constant polynomial"));
    }
    if d == 1 {
        return Ok(true);
    }
    if rational_root(f, caps)?.is_some() {
        return Ok(false);
    }
    if d <= 3 {
        return Ok(true);
    }
    // repeated factors are found by the gcd with f'
    let g = big::gcd(&f.to_big(), &big::derivative(&f.to_big()));
    if g.len() > 1 {
        return Ok(false);
    }
    for k in 2..=d / 2 {
        if factor_of_degree(f, k, caps)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn irreducibility() {
        let caps = Caps::default();
        assert!(is_irreducible(&p(&[-1, -1, 1]), &caps).unwrap());
        assert!(!is_irreducible(&p(&[-1, 0, 1]), &caps).unwrap());
        assert!(!is_irreducible(&p(&[1, 0, 2, 0, 1]), &caps).unwrap()); // (x²+1)²
        assert!(!is_irreducible(&p(&[2, 0, 3, 0, 1]), &caps).unwrap()); // (x²+1)(x²+2)
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1]), &caps).unwrap()); // Φ8
        assert!(is_irreducible(&p(&[-2, 0, 0, 0, 1]), &caps).unwrap());
        assert!(!is_irreducible(&p(&[4, 0, 0, 0, 1]), &caps).unwrap()); // (x²+2x+2)(x²−2x+2)
        assert!(!is_irreducible(&p(&[1, 1, 1, 1, 1, 1]), &caps).unwrap()); // (x+1)(x²+x+1)(x²−x+1)
        assert!(is_irreducible(&p(&[1, -1, 0, 1, -1, 1, 0, -1, 1]), &caps).unwrap()); // Φ30
        assert!(!is_irreducible(&p(&[1, 0, 1, 0, 1, 0, 1]), &caps).unwrap()); // (x²+1)(x⁴+1)
        assert!(!is_irreducible(&p(&[1, 2, 3, 2, 1]), &caps).unwrap()); // (x²+x+1)²
                                                                        // Lehmer's polynomial
        assert!(is_irreducible(&p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]), &caps).unwrap());
    }

    #[test]
    fn squarefree_parts() {
        // (x−1)(x+1)²(x²+1)³
        let f = p(&[-1, 1]).mul(&p(&[1, 1])).unwrap().mul(&p(&[1, 1])).unwrap();
        let f = f.mul(&p(&[1, 0, 1])).unwrap().mul(&p(&[1, 0, 1])).unwrap().mul(&p(&[1, 0, 1])).unwrap();
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], p(&[-1, 1]));
        assert_eq!(parts[1], p(&[1, 1]));
        assert_eq!(parts[2], p(&[1, 0, 1]));
        let g = p(&[-1, -1, 1]);
        assert_eq!(squarefree_decomposition(&g), vec![g.clone()]);
        let h = p(&[0, 0, 3]); // 3x²
        assert_eq!(squarefree_decomposition(&h), vec![p(&[1]), p(&[0, 1])]);
    }
}
