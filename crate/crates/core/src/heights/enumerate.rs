use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::irreducible::is_irreducible;
use super::mahler::mahler_measure;
use super::poly::{big, IntPolynomial};
use crate::arithmetic::{euler_phi, factorize};
use crate::fields::quadratic_character;
use crate::{AbelianField, Caps, Error, Exec, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "class")]
pub enum KroneckerClass {
    Zero,
    RootOfUnity { order: u64 },
    PositiveHeight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeightRecord {
    pub polynomial: IntPolynomial,
    pub degree: usize,
    pub mahler: f64,
    pub height: f64,
    pub error_bound: f64,
    /// |h − T| ≤ errorBound for the bound T of the query that produced it.
    #[serde(default)]
    pub boundary: bool,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Vec<BigInt>>> {
    static C: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_n, exactly: (x^n − 1) divided by every Φ_d with d | n, d < n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    if let Some(c) = cyclotomic_cache().lock().unwrap().get(&n) {
        return c.clone();
    }
    let mut num = vec![BigInt::from(0); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::from(1);
    for d in crate::arithmetic::divisors(n) {
        if d < n {
            num = big::div_exact(&num, &cyclotomic_polynomial(d)).expect("cyclotomic factors divide");
        }
    }
    cyclotomic_cache().lock().unwrap().insert(n, num.clone());
    num
}

/// Zero for ±x, RootOfUnity(k) when f = ±Φ_k (all k with φ(k) = deg f
/// are compared exactly), otherwise PositiveHeight after the
/// irreducibility check.
pub fn kronecker_test(f: &IntPolynomial, caps: &Caps) -> Result<KroneckerClass> {
    if !f.is_primitive() {
        return Err(Error::pre("polynomial is not primitive"));
    }
    let g = f.normalized();
    let d = g.degree();
    if g.coeffs() == [0, 1] {
        return Ok(KroneckerClass::Zero);
    }
    if d == 0 {
        return Err(Error::pre("constant polynomial"));
    }
    let gb = g.to_big();
    // φ(k) ≥ √(k/2), so every k with φ(k) = d is at most 2d²
    let kmax = 2 * (d as u64) * (d as u64);
    for k in 1..=kmax.max(2) {
        if euler_phi(k) == d as u64 && cyclotomic_polynomial(k) == gb {
            return Ok(KroneckerClass::RootOfUnity { order: k });
        }
    }
    if !is_irreducible(&g, caps)? {
        return Err(Error::Reducible);
    }
    Ok(KroneckerClass::PositiveHeight)
}

fn height_record(f: &IntPolynomial, class: KroneckerClass, tol: f64) -> Result<HeightRecord> {
    let g = f.normalized();
    let d = g.degree();
    if class != KroneckerClass::PositiveHeight {
        return Ok(HeightRecord {
            polynomial: g,
            degree: d,
            mahler: 1.0,
            height: 0.0,
            error_bound: 0.0,
            boundary: false,
        });
    }
    let m = mahler_measure(&g, tol)?;
    let h = m.value.ln() / d as f64;
    let lo = m.lower.ln() / d as f64;
    let hi = m.upper.ln() / d as f64;
    let err = f64::max(h - lo, hi - h) + 4.0 * f64::EPSILON * h.abs();
    Ok(HeightRecord { polynomial: g, degree: d, mahler: m.value, height: h, error_bound: err, boundary: false })
}

/// h(α) = log M(f) / deg f for the primitive irreducible f.
pub fn weil_height(f: &IntPolynomial, tol: f64, caps: &Caps) -> Result<HeightRecord> {
    let class = kronecker_test(f, caps)?;
    height_record(f, class, tol)
}

/// The minimal polynomial of α^n for α of degree ≤ 2, via the power sums
/// a^n s_n = −b·a^{n−1}s_{n−1} − c·a·a^{n−2}s_{n−2} of f = a x² + b x + c
/// (the resultant Res_y(f(y), x − y^n) in closed form).
pub fn power_minimal_polynomial(f: &IntPolynomial, n: u32) -> Result<IntPolynomial> {
    if n == 0 {
        return IntPolynomial::new(vec![-1, 1]);
    }
    let c = f.coeffs();
    match f.degree() {
        1 => {
            // α = −c0/c1
            let num = num_traits::pow(BigInt::from(-c[0]), n as usize);
            let den = num_traits::pow(BigInt::from(c[1]), n as usize);
            let p = big::primitive(&[-num, den]);
            IntPolynomial::from_big(&p)
        }
        2 => {
            let (a, b, cc) = (BigInt::from(c[2]), BigInt::from(c[1]), BigInt::from(c[0]));
            // t_k = a^k s_k
            let mut t_prev = BigInt::from(2);
            let mut t = -b.clone();
            for _ in 1..n {
                let next = -&b * &t - &a * &cc * &t_prev;
                t_prev = t;
                t = next;
            }
            let an = num_traits::pow(a.clone(), n as usize);
            let cn = num_traits::pow(cc.clone(), n as usize);
            let disc = &t * &t - BigInt::from(4) * &an * &cn;
            let p = if disc == BigInt::from(0) {
                // α^n is rational: t/(2a^n) is a double root
                big::primitive(&[-t, BigInt::from(2) * an])
            } else {
                big::primitive(&[cn, -t, an])
            };
            IntPolynomial::from_big(&p)
        }
        d => Err(Error::UnsupportedDegree { degree: d, max: 2 }),
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bounds B_i with |a_i| ≤ B_i for every f of degree d and M(f) ≤ e^{dT}:
/// |a_i| ≤ binom(d, i)·M(f). A relative margin of 1e-9 absorbs rounding
/// in e^{dT}; the leading coefficient is also bounded by M(f).
pub fn coefficient_bounds(d: usize, t: f64) -> Vec<i64> {
    let m = (d as f64 * t).exp() * (1.0 + 1e-9);
    (0..=d).map(|i| (binom(d, i) * m).floor() as i64).collect()
}

fn squarefree_kernel(n: i128) -> i64 {
    let sign = if n < 0 { -1 } else { 1 };
    let f = factorize(n.unsigned_abs() as u64);
    sign * f.factors.iter().filter(|&&(_, e)| e % 2 == 1).map(|&(p, _)| p as i64).product::<i64>()
}

fn in_canonical_order(records: &mut [HeightRecord]) {
    records.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.polynomial.coeffs().cmp(b.polynomial.coeffs())));
}

/// All algebraic numbers of degree ≤ dmax and height ≤ T, one
/// sign-normalised minimal polynomial each. Numbers within the error bound
/// of T are included and flagged.
pub fn northcott_enumerate(dmax: usize, t: f64, caps: &Caps, exec: Exec) -> Result<Vec<HeightRecord>> {
    if dmax == 0 {
        return Err(Error::pre("degree bound must be at least 1"));
    }
    if !(t >= 0.0) {
        return Err(Error::pre("height bound must be nonnegative"));
    }
    let mut out = Vec::new();
    for d in 1..=dmax {
        let b = coefficient_bounds(d, t);
        // radices: a_0..a_{d−1} in [−B_i, B_i], a_d in [1, B_d]
        let radix: Vec<u64> = (0..=d).map(|i| if i == d { b[i] as u64 } else { 2 * b[i] as u64 + 1 }).collect();
        let total = radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r));
        let total = match total {
            Some(n) if n <= caps.enumeration => n,
            _ => return Err(Error::limit(format!("degree-{d} coefficient box"), caps.enumeration)),
        };
        const CHUNK: u64 = 1 << 12;
        let chunks = total.div_ceil(CHUNK) as usize;
        let found: Vec<Result<Vec<HeightRecord>>> = exec.map_range(0..chunks, |ci| {
            let mut acc = Vec::new();
            let lo = ci as u64 * CHUNK;
            for idx in lo..(lo + CHUNK).min(total) {
                let mut rem = idx;
                let mut c = vec![0i64; d + 1];
                for i in 0..=d {
                    let r = rem % radix[i];
                    rem /= radix[i];
                    c[i] = if i == d { r as i64 + 1 } else { r as i64 - b[i] };
                }
                if let Some(rec) = candidate(&c, t, caps)? {
                    acc.push(rec);
                }
            }
            Ok(acc)
        });
        for r in found {
            out.extend(r?);
        }
    }
    in_canonical_order(&mut out);
    Ok(out)
}

fn candidate(c: &[i64], t: f64, caps: &Caps) -> Result<Option<HeightRecord>> {
    let d = c.len() - 1;
    if c[0] == 0 && !(d == 1 && c[1] == 1) {
        return Ok(None);
    }
    let f = IntPolynomial::new(c.to_vec())?;
    if !f.is_primitive() {
        return Ok(None);
    }
    // M(f) ≥ max(|a_0|, |a_d|)
    let cheap = (c[0].unsigned_abs().max(c[d].unsigned_abs()) as f64).ln() / d as f64;
    if cheap > t + 1e-12 {
        return Ok(None);
    }
    let class = match kronecker_test(&f, caps) {
        Ok(k) => k,
        Err(Error::Reducible) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut rec = height_record(&f, class, super::DEFAULT_TOLERANCE)?;
    if rec.height - rec.error_bound > t {
        return Ok(None);
    }
    rec.boundary = (rec.height - t).abs() <= rec.error_bound;
    Ok(Some(rec))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    /// Numbers of positive height in the field, canonical order.
    pub records: Vec<HeightRecord>,
    pub excluded_zero_height: usize,
    pub excluded_not_in_field: usize,
}

/// Enumerated numbers of degree ≤ dmax ≤ 2 and positive height ≤ T lying
/// in F. A quadratic α lies in F iff Q(√disc) ⊆ F.
pub fn min_height_scan(field: &AbelianField, dmax: usize, t: f64, caps: &Caps, exec: Exec) -> Result<ScanReport> {
    if dmax > 2 {
        return Err(Error::UnsupportedDegree { degree: dmax, max: 2 });
    }
    let all = northcott_enumerate(dmax, t, caps, exec)?;
    let mut report = ScanReport { records: Vec::new(), excluded_zero_height: 0, excluded_not_in_field: 0 };
    for r in all {
        if r.height == 0.0 {
            report.excluded_zero_height += 1;
            continue;
        }
        let inside = match r.degree {
            1 => true,
            _ => {
                let c = r.polynomial.coeffs();
                let disc = c[1] as i128 * c[1] as i128 - 4 * c[2] as i128 * c[0] as i128;
                field.contains_character(&quadratic_character(squarefree_kernel(disc))?)
            }
        };
        if inside {
            report.records.push(r);
        } else {
            report.excluded_not_in_field += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn heights() {
        let caps = Caps::default();
        let h = weil_height(&p(&[-2, 1]), 1e-12, &caps).unwrap();
        assert!((h.height - 2f64.ln()).abs() < 1e-15);
        let g = weil_height(&p(&[-1, -1, 1]), 1e-12, &caps).unwrap();
        assert!((g.height - 0.2406059125298).abs() < 1e-12);
        assert_eq!(weil_height(&p(&[0, 1]), 1e-12, &caps).unwrap().height, 0.0);
        assert!(matches!(weil_height(&p(&[-1, 0, 1]), 1e-12, &caps), Err(Error::Reducible)));
        assert!(weil_height(&p(&[2, 2]), 1e-12, &caps).is_err());
    }

    #[test]
    fn kronecker() {
        let caps = Caps::default();
        assert_eq!(kronecker_test(&p(&[1, 0, 1]), &caps).unwrap(), KroneckerClass::RootOfUnity { order: 4 });
        assert_eq!(kronecker_test(&p(&[-1, -1, 1]), &caps).unwrap(), KroneckerClass::PositiveHeight);
        assert_eq!(kronecker_test(&p(&[0, 1]), &caps).unwrap(), KroneckerClass::Zero);
        assert_eq!(kronecker_test(&p(&[1, 1]), &caps).unwrap(), KroneckerClass::RootOfUnity { order: 2 });
        assert_eq!(kronecker_test(&p(&[1, -1]), &caps).unwrap(), KroneckerClass::RootOfUnity { order: 1 });
        assert!(matches!(kronecker_test(&p(&[1, 2, 1]), &caps), Err(Error::Reducible)));
    }

    #[test]
    fn cyclotomic_values() {
        let c = |n| IntPolynomial::from_big(&cyclotomic_polynomial(n)).unwrap();
        assert_eq!(c(1).coeffs(), &[-1, 1]);
        assert_eq!(c(6).coeffs(), &[1, -1, 1]);
        assert_eq!(c(12).coeffs(), &[1, 0, -1, 0, 1]);
        assert_eq!(c(105).coeffs()[7], -2);
    }

    #[test]
    fn powers() {
        let g = p(&[-1, -1, 1]);
        assert_eq!(power_minimal_polynomial(&g, 2).unwrap().coeffs(), &[1, -3, 1]);
        assert_eq!(power_minimal_polynomial(&p(&[1, 0, 1]), 2).unwrap().coeffs(), &[1, 1]);
        assert_eq!(power_minimal_polynomial(&p(&[1, 0, 1]), 4).unwrap().coeffs(), &[-1, 1]);
        assert_eq!(power_minimal_polynomial(&p(&[-3, 2]), 3).unwrap().coeffs(), &[-27, 8]);
        let caps = Caps::default();
        for n in 1..=5 {
            let h = weil_height(&power_minimal_polynomial(&g, n).unwrap(), 1e-12, &caps).unwrap();
            assert!((h.height - n as f64 * 0.2406059125298).abs() < 1e-10);
        }
    }

    #[test]
    fn enumeration_examples() {
        let caps = Caps::default();
        let e = northcott_enumerate(1, 2f64.ln(), &caps, Exec::Parallel).unwrap();
        let numbers: usize = e.iter().map(|r| r.degree).sum();
        assert_eq!(numbers, 7);
        assert_eq!(e.iter().filter(|r| r.boundary).count(), 4);
        let z = northcott_enumerate(1, 0.0, &caps, Exec::Sequential).unwrap();
        let zc: Vec<&[i64]> = z.iter().map(|r| r.polynomial.coeffs()).collect();
        assert_eq!(zc, vec![&[-1i64, 1][..], &[0, 1], &[1, 1]]);
        let z2 = northcott_enumerate(2, 0.0, &caps, Exec::Parallel).unwrap();
        assert_eq!(z2.len(), 6);
        assert_eq!(z2.iter().map(|r| r.degree).sum::<usize>(), 9);
        assert!(northcott_enumerate(0, 1.0, &caps, Exec::Parallel).is_err());
    }

    #[test]
    fn scans() {
        let caps = Caps::default();
        let q = AbelianField::rational();
        // the least positive height of a rational is log 2 > 0.6
        let r = min_height_scan(&q, 1, 0.6, &caps, Exec::Parallel).unwrap();
        assert!(r.records.is_empty());
        let r = min_height_scan(&q, 1, 2f64.ln(), &caps, Exec::Parallel).unwrap();
        let got: Vec<&[i64]> = r.records.iter().map(|r| r.polynomial.coeffs()).collect();
        assert_eq!(got, vec![&[-2i64, 1][..], &[-1, 2], &[1, 2], &[2, 1]]);
        assert_eq!(r.excluded_zero_height, 3);
        let k = AbelianField::quadratic(5, &caps).unwrap();
        let r = min_height_scan(&k, 2, 0.25, &caps, Exec::Parallel).unwrap();
        assert!(r.records.iter().any(|r| r.polynomial.coeffs() == [-1, -1, 1]));
        assert!(matches!(min_height_scan(&k, 3, 0.1, &caps, Exec::Parallel), Err(Error::UnsupportedDegree { .. })));
        let r0 = min_height_scan(&k, 2, 0.0, &caps, Exec::Parallel).unwrap();
        assert!(r0.records.is_empty());
        assert_eq!(r0.excluded_zero_height, 6);
    }
}
