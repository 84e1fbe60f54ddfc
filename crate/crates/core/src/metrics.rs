//! Scalar quantities attached to a field or a tower: the local terms
//! log p / (e(p^f + 1)) and their partial sums, Bogomolov and Fili bounds,
//! dyadic window sums over totally split primes, and the discriminant
//! growth quantity of a tower step.
//!
//! Sums are accumulated exactly in fixed point (see [`ExactSum`]); reports
//! keep their full term lists so a verifier can re-sum them.

use serde::{Deserialize, Serialize};

use crate::arithmetic::{is_prime, primes_in_range};
use crate::fields::{norm_relative_discriminant, FactoredInt, FieldPresentation};
use crate::{AbelianField, Caps, Error, Exec, Result};

/// Exact fixed-point summation: every term is truncated to a multiple of
/// 2^-100 and the multiples are added in an integer, so the result does not
/// depend on the order of the terms, never decreases when a nonnegative term
/// is added, and differs from the exact sum of the doubles by at most
/// (#terms)·2^-100 plus one final rounding.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSum {
    units: i128,
}

const SUM_SCALE: f64 = 1267650600228229401496703205376.0; // 2^100

impl ExactSum {
    pub fn add(&mut self, x: f64) {
        debug_assert!(x.is_finite() && x.abs() < 1e7, "term {x} outside the accumulator range");
        self.units += (x * SUM_SCALE) as i128;
    }

    pub fn value(&self) -> f64 {
        self.units as f64 / SUM_SCALE
    }
}

pub fn exact_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut k = ExactSum::default();
    for x in xs {
        k.add(x);
    }
    k.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDatum {
    pub prime: u64,
    pub e: u64,
    pub f: u64,
}

impl LocalDatum {
    pub fn new(prime: u64, e: u64, f: u64) -> Result<Self> {
        if e == 0 || f == 0 || prime < 2 {
            return Err(Error::pre(format!("invalid local datum ({prime}, {e}, {f})")));
        }
        Ok(LocalDatum { prime, e, f })
    }
}

/// p^f as a double, or None once it leaves the finite range.
fn pow_f64(p: u64, f: u64) -> Option<f64> {
    let lnp = (p as f64).ln();
    if f as f64 * lnp > 700.0 {
        return None;
    }
    let v = (p as f64).powi(f as i32);
    v.is_finite().then_some(v)
}

/// log p / (e(p^f + 1)). `Error::Overflow` when p^f leaves the double range;
/// [`sh_term_or_bound`] turns that case into a rigorous bound.
pub fn sh_term(d: LocalDatum) -> Result<f64> {
    let pf = pow_f64(d.prime, d.f)
        .ok_or_else(|| Error::Overflow(format!("{}^{} exceeds the double range", d.prime, d.f)))?;
    Ok((d.prime as f64).ln() / (d.e as f64 * (pf + 1.0)))
}

/// The term, or (when p^f overflows) `f64::MIN_POSITIVE`, which is then an
/// upper bound for the true value; the flag reports which.
pub fn sh_term_or_bound(d: LocalDatum) -> (f64, bool) {
    match sh_term(d) {
        Ok(v) => (v, false),
        Err(_) => (f64::MIN_POSITIVE, true),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TermRecord {
    pub prime: u64,
    pub e: u64,
    pub f: u64,
    pub term: f64,
    /// `term` is only an upper bound for an underflowing value; it is not
    /// included in the sum.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartialSumReport {
    pub cutoff: u64,
    pub value: f64,
    pub term_count: usize,
    /// Every prefix of the accumulated sum was nondecreasing.
    pub monotone_flag: bool,
    pub terms: Vec<TermRecord>,
}

impl PartialSumReport {
    fn from_terms(cutoff: u64, terms: Vec<TermRecord>) -> Self {
        let mut acc = ExactSum::default();
        let mut monotone = true;
        let mut last = 0.0;
        for t in &terms {
            if !t.overflow {
                acc.add(t.term);
            }
            monotone &= acc.value() >= last;
            last = acc.value();
        }
        PartialSumReport { cutoff, value: acc.value(), term_count: terms.len(), monotone_flag: monotone, terms }
    }

    /// Re-sum the recorded terms exactly as they were summed originally.
    pub fn resum(&self) -> f64 {
        exact_sum(self.terms.iter().filter(|t| !t.overflow).map(|t| t.term))
    }
}

fn record(d: LocalDatum) -> TermRecord {
    let (term, overflow) = sh_term_or_bound(d);
    TermRecord { prime: d.prime, e: d.e, f: d.f, term, overflow }
}

fn check_cutoff(x: u64, caps: &Caps) -> Result<()> {
    if x < 2 {
        return Err(Error::pre(format!("cutoff {x} is below 2")));
    }
    if x > caps.sieve {
        return Err(Error::limit(format!("primes up to {x}"), caps.sieve));
    }
    Ok(())
}

/// Σ_{p ≤ X} log p / (e_p(p^{f_p} + 1)) over every prime, ramified ones
/// included with their exact (e, f).
pub fn sh_partial_sum(field: &AbelianField, x: u64, caps: &Caps, exec: Exec) -> Result<PartialSumReport> {
    check_cutoff(x, caps)?;
    let primes = primes_in_range(2, x + 1, exec);
    let terms = exec.map(&primes, |&p| {
        let s = field.splitting_data_unchecked(p);
        record(LocalDatum { prime: p, e: s.e, f: s.f })
    });
    Ok(PartialSumReport::from_terms(x, terms))
}

/// ½ of the partial sum: a certified lower bound for ½𝔖(F), since every
/// omitted term is nonnegative.
pub fn bogomolov_lower_bound(field: &AbelianField, x: u64, caps: &Caps, exec: Exec) -> Result<f64> {
    Ok(0.5 * sh_partial_sum(field, x, caps, exec)?.value)
}

/// Σ log p/(p + 1) over the totally split primes p ≤ X.
pub fn totally_split_sum(field: &AbelianField, x: u64, caps: &Caps, exec: Exec) -> Result<f64> {
    check_cutoff(x, caps)?;
    let primes = primes_in_range(2, x + 1, exec);
    let split = exec.map(&primes, |&p| field.is_totally_split(p));
    Ok(exact_sum(primes.iter().zip(split).filter(|(_, s)| *s).map(|(&p, _)| (p as f64).ln() / (p as f64 + 1.0))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowSum {
    pub k: u32,
    pub value: f64,
    /// The totally split primes in (2^k, 2^{k+1}], ascending.
    pub primes: Vec<u64>,
}

fn window_limits(k: u32, caps: &Caps) -> Result<(u64, u64)> {
    if k >= 63 {
        return Err(Error::limit(format!("window 2^{k}"), caps.sieve));
    }
    let hi = 1u64 << (k + 1);
    if hi > caps.sieve {
        return Err(Error::limit(format!("primes up to 2^{}", k + 1), caps.sieve));
    }
    Ok((1u64 << k, hi))
}

/// a_k = Σ log p / p over the totally split p with 2^k < p ≤ 2^{k+1}.
pub fn window_sum(field: &AbelianField, k: u32, caps: &Caps, exec: Exec) -> Result<WindowSum> {
    let (lo, hi) = window_limits(k, caps)?;
    let primes = primes_in_range(lo + 1, hi + 1, exec);
    let split = exec.map(&primes, |&p| field.is_totally_split(p));
    let primes: Vec<u64> = primes.into_iter().zip(split).filter(|(_, s)| *s).map(|(p, _)| p).collect();
    let value = exact_sum(primes.iter().map(|&p| (p as f64).ln() / p as f64));
    Ok(WindowSum { k, value, primes })
}

/// Window sums for every k in [k_lo, k_hi) (half-open).
pub fn window_sums(field: &AbelianField, k_lo: u32, k_hi: u32, caps: &Caps, exec: Exec) -> Result<Vec<WindowSum>> {
    (k_lo..k_hi).map(|k| window_sum(field, k, caps, exec)).collect()
}

pub fn window_threshold(degree: u64) -> f64 {
    1.0 / (13.0 * degree as f64)
}

/// For each k in [kmin, kmax], whether a_k > 1/(13[F:Q]). Purely empirical;
/// an empty range gives an empty list.
pub fn window_bound_check(field: &AbelianField, kmin: u32, kmax: u32, caps: &Caps, exec: Exec) -> Result<Vec<bool>> {
    if kmin > kmax {
        return Ok(Vec::new());
    }
    window_limits(kmax, caps)?;
    let t = window_threshold(field.degree());
    (kmin..=kmax).map(|k| Ok(window_sum(field, k, caps, exec)?.value > t)).collect()
}

/// Σ log p / (e(p^f − 1)).
pub fn fili_bound(data: &[LocalDatum]) -> Result<f64> {
    let mut acc = ExactSum::default();
    for d in data {
        if d.f == 0 || d.e == 0 || d.prime < 2 {
            return Err(Error::pre(format!("invalid local datum ({}, {}, {})", d.prime, d.e, d.f)));
        }
        if let Some(pf) = pow_f64(d.prime, d.f) {
            acc.add((d.prime as f64).ln() / (d.e as f64 * (pf - 1.0)));
        } else {
            return Err(Error::Overflow(format!("{}^{} exceeds the double range", d.prime, d.f)));
        }
    }
    Ok(acc.value())
}

/// An enclosure of T = Σ_{k≥1} log k / k² = −ζ′(2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiliT {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub terms: u64,
}

/// Largest partial-sum length the T computation may use.
const T_MAX_TERMS: u64 = 1 << 30;

/// Partial sum up to K plus the integral tail bounds
/// ∫_{K+1}^∞ ≤ Σ_{k>K} log k/k² ≤ ∫_K^∞, with (log x + 1)/x as antiderivative.
pub fn fili_t_enclosure(tolerance: f64) -> Result<FiliT> {
    if !(tolerance > 0.0) {
        return Err(Error::pre("tolerance must be positive"));
    }
    // double rounding over ~K terms; anything finer is not attainable
    if tolerance < 1e-13 {
        return Err(Error::ToleranceUnreachable {
            tol: format!("{tolerance:e}"),
            reason: "below the rounding error of a double-precision partial sum".into(),
        });
    }
    let tail = |x: f64| (x.ln() + 1.0) / x;
    let mut k: u64 = 16;
    while (tail(k as f64) - tail(k as f64 + 1.0)) / 2.0 > tolerance / 2.0 {
        k *= 2;
        if k > T_MAX_TERMS {
            return Err(Error::ToleranceUnreachable {
                tol: format!("{tolerance:e}"),
                reason: format!("needs more than {T_MAX_TERMS} terms"),
            });
        }
    }
    let partial = exact_sum((2..=k).map(|j| {
        let j = j as f64;
        j.ln() / (j * j)
    }));
    let lower = partial + tail(k as f64 + 1.0);
    let upper = partial + tail(k as f64);
    Ok(FiliT { value: 0.5 * (lower + upper), lower, upper, terms: k })
}

pub fn fili_t_constant(tolerance: f64) -> Result<f64> {
    Ok(fili_t_enclosure(tolerance)?.value)
}

/// Σ_{p ≤ X} log p / (p² + 1): the local terms of an inert quadratic at
/// every prime.
pub fn q2_upper_partial(x: u64, caps: &Caps, exec: Exec) -> Result<PartialSumReport> {
    check_cutoff(x, caps)?;
    let primes = primes_in_range(2, x + 1, exec);
    let terms = primes.iter().map(|&p| record(LocalDatum { prime: p, e: 1, f: 2 })).collect();
    Ok(PartialSumReport::from_terms(x, terms))
}

/// Sum of local terms over an explicit list of primes (each checked prime).
pub fn sh_sum_of_data(data: &[LocalDatum]) -> Result<PartialSumReport> {
    for d in data {
        if !is_prime(d.prime) {
            return Err(Error::pre(format!("{} is not prime", d.prime)));
        }
    }
    let cutoff = data.iter().map(|d| d.prime).max().unwrap_or(0);
    Ok(PartialSumReport::from_terms(cutoff, data.iter().map(|&d| record(d)).collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WidmerCandidate {
    pub field: FieldPresentation,
    /// [M:K₀]
    pub degree_over_base: u64,
    /// [M:K_{i−1}]
    pub relative_degree: u64,
    /// Norm of the relative discriminant of M over K_{i−1}, factored.
    pub norm: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WidmerStep {
    pub value: f64,
    pub argmin: usize,
    pub candidates: Vec<WidmerCandidate>,
}

/// inf over K_{i−1} ⊊ M ⊆ K_i of N(D_{M/K_{i−1}})^{1/([M:K₀][M:K_{i−1}])}.
pub fn widmer_step(prev: &AbelianField, next: &AbelianField, base: &AbelianField, caps: &Caps) -> Result<WidmerStep> {
    if prev == next {
        return Err(Error::pre("the step K_{i-1} ⊆ K_i is trivial"));
    }
    if !next.contains_field(prev) || !prev.contains_field(base) {
        return Err(Error::pre("the fields do not form a tower"));
    }
    let mut candidates = Vec::new();
    for m in next.intermediate_fields(prev, caps)? {
        let norm: FactoredInt = norm_relative_discriminant(prev, &m)?;
        let over_base = m.degree() / base.degree();
        let rel = m.degree() / prev.degree();
        let value = norm.root(over_base * rel);
        candidates.push(WidmerCandidate {
            field: m.presentation(),
            degree_over_base: over_base,
            relative_degree: rel,
            norm: norm.to_string(),
            value,
        });
    }
    let (argmin, value) = candidates.iter().enumerate().map(|(i, c)| (i, c.value)).fold((0, f64::INFINITY), |a, b| {
        if b.1 < a.1 {
            b
        } else {
            a
        }
    });
    Ok(WidmerStep { value, argmin, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn local_terms() {
        let t = |p, e, f| sh_term(LocalDatum::new(p, e, f).unwrap()).unwrap();
        assert!(close(t(13, 1, 1), 13f64.ln() / 14.0, 1e-15));
        assert!(close(t(13, 1, 1), 0.183211, 1e-6));
        assert!(close(t(2, 1, 1), 0.231049, 1e-6));
        assert!(close(t(3, 2, 2), 0.054931, 1e-6));
        assert!(sh_term(LocalDatum::new(3, 1, 1000).unwrap()).is_err());
        assert_eq!(sh_term_or_bound(LocalDatum::new(3, 1, 1000).unwrap()), (f64::MIN_POSITIVE, true));
        assert!(LocalDatum::new(3, 0, 1).is_err());
    }

    #[test]
    fn decreasing_in_e_and_f() {
        for p in [2u64, 3, 5, 101] {
            for e in 1..5 {
                for f in 1..5 {
                    let t = |e, f| sh_term(LocalDatum { prime: p, e, f }).unwrap();
                    assert!(t(e + 1, f) < t(e, f));
                    assert!(t(e, f + 1) < t(e, f));
                }
            }
        }
    }

    #[test]
    fn rational_sums() {
        let q = AbelianField::rational();
        let r = sh_partial_sum(&q, 3, &caps(), Exec::Sequential).unwrap();
        assert!(close(r.value, 2f64.ln() / 3.0 + 3f64.ln() / 4.0, 1e-15));
        assert!(close(r.value, 0.505702, 1e-6));
        assert_eq!(r.term_count, 2);
        assert!(r.monotone_flag);
        let r2 = sh_partial_sum(&q, 2, &caps(), Exec::Sequential).unwrap();
        assert_eq!(r2.value, 2f64.ln() / 3.0);
        assert!(close(bogomolov_lower_bound(&q, 3, &caps(), Exec::Parallel).unwrap(), 0.252851, 1e-6));
        assert!(sh_partial_sum(&q, 1, &caps(), Exec::Sequential).is_err());
    }

    #[test]
    fn cubic_partial_sum_from_table() {
        let k = AbelianField::cyclic_prime_power_subfield(7, 3, &caps()).unwrap();
        let r = sh_partial_sum(&k, 7, &caps(), Exec::Sequential).unwrap();
        // 2: (1,3,1); 3 and 5 are inert (order 6 mod 7); 7: e=3
        let expect = exact_sum([2f64.ln() / 9.0, 3f64.ln() / 28.0, 5f64.ln() / 126.0, 7f64.ln() / 24.0]);
        assert!(close(r.value, expect, 1e-15));
    }

    #[test]
    fn inert_quadratic_at_two() {
        // Q(√5): 2 is inert
        let k = AbelianField::quadratic(5, &caps()).unwrap();
        let b = bogomolov_lower_bound(&k, 2, &caps(), Exec::Sequential).unwrap();
        assert!(close(b, 0.5 * 2f64.ln() / 5.0, 1e-16));
    }

    #[test]
    fn windows() {
        let q = AbelianField::rational();
        let w = window_sum(&q, 5, &caps(), Exec::Sequential).unwrap();
        assert_eq!(w.primes, vec![37, 41, 43, 47, 53, 59, 61]);
        assert!(close(w.value, 0.569, 5e-4));
        let w0 = window_sum(&q, 0, &caps(), Exec::Sequential).unwrap();
        assert!(close(w0.value, 2f64.ln() / 2.0, 1e-15));
        let k = AbelianField::cyclic_prime_power_subfield(7, 3, &caps()).unwrap();
        assert_eq!(window_sum(&k, 0, &caps(), Exec::Sequential).unwrap().value, 0.0);
        assert_eq!(window_bound_check(&q, 5, 10, &caps(), Exec::Parallel).unwrap(), vec![true; 6]);
        assert!(window_bound_check(&q, 6, 5, &caps(), Exec::Parallel).unwrap().is_empty());
    }

    #[test]
    fn fili() {
        let d = |p, e, f| LocalDatum { prime: p, e, f };
        assert!(close(fili_bound(&[d(2, 1, 2)]).unwrap(), 0.231049, 1e-6));
        assert!(close(fili_bound(&[d(2, 1, 2), d(3, 1, 2)]).unwrap(), 0.368376, 1e-6));
        assert_eq!(fili_bound(&[]).unwrap(), 0.0);
    }

    #[test]
    fn t_constant() {
        let t = fili_t_enclosure(1e-4).unwrap();
        assert!(t.lower <= t.upper);
        assert!(close(t.value, 0.937_548_254_315_843_8, 1e-4));
        let tight = fili_t_constant(1e-10).unwrap();
        assert!(close(tight, 0.937_548_254_315_843_8, 1e-10));
        assert!(fili_t_constant(0.0).is_err());
        assert!(matches!(fili_t_constant(1e-16), Err(Error::ToleranceUnreachable { .. })));
    }

    #[test]
    fn q2_bound() {
        let r = q2_upper_partial(10, &caps(), Exec::Sequential).unwrap();
        assert!(close(r.value, 0.349310, 1e-6));
        assert!(close(q2_upper_partial(2, &caps(), Exec::Sequential).unwrap().value, 0.138629, 1e-6));
        assert!(q2_upper_partial(1, &caps(), Exec::Sequential).is_err());
    }

    #[test]
    fn widmer_prime_steps() {
        let q = AbelianField::rational();
        let c7 = AbelianField::cyclic_prime_power_subfield(7, 3, &caps()).unwrap();
        let s = widmer_step(&q, &c7, &q, &caps()).unwrap();
        assert_eq!(s.candidates.len(), 1);
        assert!(close(s.value, 49f64.powf(1.0 / 9.0), 1e-12));
        assert!(widmer_step(&c7, &c7, &q, &caps()).is_err());
    }
}
