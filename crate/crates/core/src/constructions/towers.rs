//! Towers of abelian fields L_0 = Q ⊂ L_1 ⊂ … with L_i = L_{i−1}F_i.
//!
//! Each level first fixes its window [n_{i−1}, n_i): n_i is the least
//! integer for which the local terms of L_{i−1} over the primes of the
//! window reach 1. F_i is then made totally split at every p ≤ n_i, so the
//! window's terms are unchanged in every later L_j and the sums over all
//! windows grow without bound.

use serde::{Deserialize, Serialize};

use super::split_cyclic::{find_split_cyclic, is_cyclic, SplitCyclicCertificate, SplitCyclicOptions};
use crate::arithmetic::{factorize, next_prime, primes_in_range, PrimeStream};
use crate::fields::{norm_relative_discriminant, FieldPresentation};
use crate::metrics::{sh_term_or_bound, widmer_step, ExactSum, LocalDatum, TermRecord, WidmerStep};
use crate::{AbelianField, Caps, Error, Exec, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TowerKind {
    Product,
    AntiWidmer,
}

/// Local terms of one field over the primes of [lo, hi), ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct WindowReport {
    #[serde(with = "crate::dec")]
    pub lo: u64,
    #[serde(with = "crate::dec")]
    pub hi: u64,
    pub value: f64,
    pub terms: Vec<TermRecord>,
}

impl WindowReport {
    fn from_terms(lo: u64, hi: u64, terms: Vec<TermRecord>) -> Self {
        let mut acc = ExactSum::default();
        for t in terms.iter().filter(|t| !t.overflow) {
            acc.add(t.term);
        }
        WindowReport { lo, hi, value: acc.value(), terms }
    }

    pub fn resum(&self) -> f64 {
        let mut acc = ExactSum::default();
        for t in self.terms.iter().filter(|t| !t.overflow) {
            acc.add(t.term);
        }
        acc.value()
    }
}

pub(crate) fn term_of(field: &AbelianField, p: u64) -> TermRecord {
    let s = field.splitting_data_unchecked(p);
    let (term, overflow) = sh_term_or_bound(LocalDatum { prime: p, e: s.e, f: s.f });
    TermRecord { prime: p, e: s.e, f: s.f, term, overflow }
}

/// The window's terms over primes in [lo, hi).
pub fn window_terms(field: &AbelianField, lo: u64, hi: u64, exec: Exec) -> WindowReport {
    let primes = primes_in_range(lo, hi, exec);
    WindowReport::from_terms(lo, hi, exec.map(&primes, |&p| term_of(field, p)))
}

/// Least n > lo with Σ_{lo ≤ p < n} term_p(field) ≥ 1, with its terms.
pub fn next_window(field: &AbelianField, lo: u64, caps: &Caps, exec: Exec) -> Result<WindowReport> {
    const CHUNK: usize = 1 << 14;
    let mut stream = PrimeStream::new(lo, caps.sieve, exec);
    let mut acc = ExactSum::default();
    let mut terms = Vec::new();
    loop {
        let chunk: Vec<u64> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Err(Error::limit(format!("window from {lo} on a degree-{} field", field.degree()), caps.sieve));
        }
        for t in exec.map(&chunk, |&p| term_of(field, p)) {
            if !t.overflow {
                acc.add(t.term);
            }
            let p = t.prime;
            terms.push(t);
            if acc.value() >= 1.0 {
                return Ok(WindowReport::from_terms(lo, p + 1, terms));
            }
        }
    }
}

/// One level of a tower.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TowerLevel {
    /// [F_i : Q]
    #[serde(with = "crate::dec")]
    pub order: u64,
    /// n_i, the exclusive end of the window.
    #[serde(with = "crate::dec")]
    pub n: u64,
    /// Terms of L_{i−1} over the window.
    pub window: WindowReport,
    /// The same primes with the terms of L_i.
    pub window_in_level: WindowReport,
    /// Every prime here is totally split in F_i.
    #[serde(with = "crate::dec::vec")]
    pub split_set: Vec<u64>,
    /// One split-cyclic certificate per prime-power factor of the order.
    pub components: Vec<SplitCyclicCertificate>,
    pub field: FieldPresentation,
    pub compositum: FieldPresentation,
    /// |Δ_{F_i}|, factored.
    pub discriminant_factored: String,
    /// Infimum over K_{i−1} ⊊ M ⊆ K_i (anti-Widmer towers only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widmer: Option<WidmerStep>,
    pub conditions: LevelConditions,
}

/// Mechanical checks recorded per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LevelConditions {
    /// Every p in the split set is totally split in F_i.
    pub split: bool,
    /// The window sum on L_{i−1} is ≥ 1.
    pub window: bool,
    /// Window terms agree on L_{i−1} and L_i.
    pub telescoping: bool,
    /// [L_i : L_{i−1}] = [F_i : Q].
    pub disjoint: bool,
    pub totally_real: bool,
    /// |Δ_{F_i}|^{1/p_i²} ≤ 3 (anti-Widmer only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub small_discriminant: Option<bool>,
    /// Δ_{F_i} coprime to every earlier Δ_{F_j} (anti-Widmer only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coprime_discriminant: Option<bool>,
    /// The step infimum is ≤ 3 (anti-Widmer only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widmer_bounded: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TowerSpec {
    pub kind: TowerKind,
    #[serde(with = "crate::dec::vec")]
    pub orders: Vec<u64>,
    #[serde(with = "crate::dec")]
    pub prime_floor: u64,
    pub levels: Vec<TowerLevel>,
    pub notes: Vec<String>,
}

impl TowerSpec {
    /// [L_depth : Q]
    pub fn degree(&self) -> u64 {
        self.levels.iter().map(|l| l.order).product()
    }
}

/// Prime-power factors of d, ascending by prime.
fn prime_power_factors(d: u64) -> Vec<u64> {
    factorize(d).factors.iter().map(|&(p, e)| p.pow(e)).collect()
}

fn primes_at_most(n: u64, caps: &Caps, exec: Exec) -> Result<Vec<u64>> {
    if n > caps.sieve {
        return Err(Error::limit(format!("primes up to {n}"), caps.sieve));
    }
    Ok(primes_in_range(2, n + 1, exec))
}

fn union_sorted(a: &[u64], b: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().copied().chain(b).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Last common steps of a level: compositum, window on L_i, and records.
struct LevelDraft {
    order: u64,
    window: WindowReport,
    split_set: Vec<u64>,
    components: Vec<SplitCyclicCertificate>,
    field: AbelianField,
}

fn finish_level(prev: &AbelianField, draft: LevelDraft, caps: &Caps, exec: Exec) -> Result<(TowerLevel, AbelianField)> {
    let next = prev.compositum(&draft.field, caps)?;
    let window_in_level = window_terms(&next, draft.window.lo, draft.window.hi, exec);
    let split = {
        let f = &draft.field;
        exec.map(&draft.split_set, |&p| f.is_totally_split(p)).into_iter().all(|b| b)
    };
    let telescoping = window_in_level.terms == draft.window.terms && window_in_level.value == draft.window.value;
    let conditions = LevelConditions {
        split,
        window: draft.window.value >= 1.0,
        telescoping,
        disjoint: next.degree() == prev.degree() * draft.order && prev.is_linearly_disjoint(&draft.field),
        totally_real: next.is_totally_real(),
        small_discriminant: None,
        coprime_discriminant: None,
        widmer_bounded: None,
    };
    let level = TowerLevel {
        order: draft.order,
        n: draft.window.hi,
        window: draft.window,
        window_in_level,
        split_set: draft.split_set,
        components: draft.components,
        discriminant_factored: draft.field.discriminant().to_string(),
        field: draft.field.presentation(),
        compositum: next.presentation(),
        widmer: None,
        conditions,
    };
    Ok((level, next))
}

/// Abelian tower with Gal(L_depth/Q) = ∏ Z/d_i, every F_i totally real
/// and totally split at all p ≤ n_i.
pub fn build_product_tower(orders: &[u64], depth: usize, caps: &Caps, exec: Exec) -> Result<TowerSpec> {
    if depth > orders.len() {
        return Err(Error::pre(format!("depth {depth} exceeds the {} orders given", orders.len())));
    }
    if let Some(&d) = orders.iter().find(|&&d| d < 2) {
        return Err(Error::pre(format!("cyclic order {d} is below 2")));
    }
    let mut levels = Vec::new();
    let mut current = AbelianField::rational();
    let mut lo = 2u64;
    for &d in &orders[..depth] {
        let window = next_window(&current, lo, caps, exec)?;
        let n = window.hi;
        let ramified: Vec<u64> = current.conductor().primes().collect();
        let split_set = union_sorted(&primes_at_most(n, caps, exec)?, ramified);
        let mut used: Vec<u64> = Vec::new();
        let mut components = Vec::new();
        let mut field = AbelianField::rational();
        for q in prime_power_factors(d) {
            let opts = SplitCyclicOptions { exclude: used.clone(), totally_real: true };
            let (cert, f) = find_split_cyclic(&split_set, q, &opts, caps, exec)?;
            used.extend(&cert.auxiliary_primes);
            field = field.compositum(&f, caps)?;
            components.push(cert);
        }
        if field.degree() != d || !is_cyclic(&field) {
            return Err(Error::inconsistent(format!("level field is not cyclic of order {d}")));
        }
        let draft = LevelDraft { order: d, window, split_set, components, field };
        let (level, next) = finish_level(&current, draft, caps, exec)?;
        let c = level.conditions;
        if !(c.split && c.window && c.telescoping && c.disjoint && c.totally_real) {
            return Err(Error::inconsistent(format!("level {} fails verification: {c:?}", levels.len() + 1)));
        }
        levels.push(level);
        current = next;
        lo = n;
    }
    Ok(TowerSpec {
        kind: TowerKind::Product,
        orders: orders[..depth].to_vec(),
        prime_floor: 0,
        levels,
        notes: vec![
            "F_i is forced totally split at every p <= n_i and at the primes ramified in L_{i-1}; auxiliary primes avoid all earlier conductors".into(),
        ],
    })
}

/// Upper limit on the number of prime degrees tried at one level.
const DEGREE_SEARCH_LIMIT: usize = 10_000;

/// Tower of prime-degree cyclic steps with |Δ_{F_i}|^{1/p_i²} ≤ 3 at every
/// level and pairwise coprime discriminants.
pub fn build_anti_widmer_tower(depth: usize, prime_floor: u64, caps: &Caps, exec: Exec) -> Result<TowerSpec> {
    if depth == 0 {
        return Err(Error::pre("depth must be at least 1"));
    }
    let mut levels: Vec<TowerLevel> = Vec::new();
    let mut current = AbelianField::rational();
    let mut lo = 2u64;
    let mut used_degrees: Vec<u64> = Vec::new();
    let mut disc_primes: Vec<u64> = Vec::new();
    for i in 1..=depth {
        let window = next_window(&current, lo, caps, exec)?;
        let n = window.hi;
        let split_set = union_sorted(&primes_at_most(n, caps, exec)?, disc_primes.iter().copied());
        let mut p = if prime_floor <= 2 { 2 } else { next_prime(prime_floor - 1) };
        let mut found = None;
        for _ in 0..DEGREE_SEARCH_LIMIT {
            if p > caps.sieve {
                break;
            }
            if !used_degrees.contains(&p) {
                let opts = SplitCyclicOptions { exclude: disc_primes.clone(), totally_real: false };
                let (cert, f) = find_split_cyclic(&split_set, p, &opts, caps, exec)?;
                if f.discriminant().root_at_most(p * p, 3) {
                    found = Some((p, cert, f));
                    break;
                }
            }
            p = next_prime(p);
        }
        let Some((p, cert, field)) = found else {
            return Err(Error::limit(format!("prime degree search at level {i}"), DEGREE_SEARCH_LIMIT as u64));
        };
        let disc = field.discriminant();
        let coprime = disc_primes.iter().all(|&l| !disc.divides_prime(l));
        let draft = LevelDraft { order: p, window, split_set, components: vec![cert], field };
        let prev = current.clone();
        let (mut level, next) = finish_level(&current, draft, caps, exec)?;
        let step = widmer_step(&prev, &next, &AbelianField::rational(), caps)?;
        let widmer_ok = step.candidates.iter().zip(next.intermediate_fields(&prev, caps)?).any(|(c, m)| {
            norm_relative_discriminant(&prev, &m)
                .map(|nrm| nrm.root_at_most(c.degree_over_base * c.relative_degree, 3))
                .unwrap_or(false)
        });
        level.conditions.small_discriminant = Some(true);
        level.conditions.coprime_discriminant = Some(coprime);
        level.conditions.widmer_bounded = Some(widmer_ok);
        level.conditions.totally_real = true;
        level.widmer = Some(step);
        let c = level.conditions;
        if !(c.split && c.window && c.telescoping && c.disjoint && coprime && widmer_ok) {
            return Err(Error::inconsistent(format!("level {i} fails verification: {c:?}")));
        }
        disc_primes = union_sorted(&disc_primes, disc.primes());
        used_degrees.push(p);
        levels.push(level);
        current = next;
        lo = n;
    }
    Ok(TowerSpec {
        kind: TowerKind::AntiWidmer,
        orders: levels.iter().map(|l| l.order).collect(),
        prime_floor,
        levels,
        notes: vec![
            "split condition imposed for the discriminants of F_j with j < i only; coprimality of the discriminants is verified directly".into(),
            "the step infimum is checked over all intermediate fields of the constructed tower only".into(),
            "total reality is not imposed in this construction".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_window_of_the_rationals() {
        let w = next_window(&AbelianField::rational(), 2, &Caps::default(), Exec::Sequential).unwrap();
        assert_eq!(w.hi, 8);
        assert_eq!(w.terms.iter().map(|t| t.prime).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        let t: f64 = [2f64, 3., 5., 7.].iter().map(|p| p.ln() / (p + 1.0)).sum();
        assert!((w.value - t).abs() < 1e-15);
        assert!(w.value >= 1.0);
    }

    #[test]
    fn quadratic_product_tower() {
        let t = build_product_tower(&[2, 2], 2, &Caps::default(), Exec::Parallel).unwrap();
        assert_eq!(t.levels.len(), 2);
        assert_eq!(t.degree(), 4);
        assert_eq!(t.levels[0].n, 8);
        for l in &t.levels {
            assert!(l.window.value >= 1.0);
            assert_eq!(l.window.terms, l.window_in_level.terms);
        }
    }

    #[test]
    fn cubic_and_trivial_towers() {
        let caps = Caps::default();
        let t = build_product_tower(&[3], 1, &caps, Exec::Parallel).unwrap();
        let f = t.levels[0].field.check(&caps).unwrap();
        assert_eq!(f.degree(), 3);
        for p in [2, 3, 5, 7] {
            assert!(f.is_totally_split(p));
        }
        let t0 = build_product_tower(&[3], 0, &caps, Exec::Parallel).unwrap();
        assert!(t0.levels.is_empty());
        assert_eq!(t0.degree(), 1);
        assert!(build_product_tower(&[1], 1, &caps, Exec::Parallel).is_err());
    }

    #[test]
    fn anti_widmer_first_level() {
        let caps = Caps::default();
        let t = build_anti_widmer_tower(1, 3, &caps, Exec::Parallel).unwrap();
        let l = &t.levels[0];
        assert_eq!(l.order, 23);
        assert!(l.widmer.as_ref().unwrap().value <= 3.0);
        assert!(build_anti_widmer_tower(0, 3, &caps, Exec::Parallel).is_err());
    }
}
