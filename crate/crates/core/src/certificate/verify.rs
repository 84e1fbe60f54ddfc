//! Independent re-checking of certificates.
//!
//! Every claim is recomputed from the field presentations in the payload
//! with the arithmetic, field and metric layers only; nothing computed by a
//! builder is trusted. Failures carry the label of the condition they
//! violate.

use serde::Serialize;
use serde_json::Value;

use super::{
    Certificate, CertificateKind, FieldInfo, HeightReport, InputsEcho, Invocation, Payload, ShReport, SplittingRow,
    SubgroupSpec, SCHEMA_VERSION,
};
use crate::arithmetic::{is_prime, primes_in_range, primes_up_to};
use crate::constructions::{
    auxiliary_primes, frobenius_rows, functional_character, prime_power, window_terms, LevelConditions,
    SplitCyclicCertificate, TowerKind, TowerLevel, TowerSpec,
};
use crate::fields::{norm_relative_discriminant, FactoredInt, FieldPresentation};
use crate::heights::{min_height_scan, northcott_enumerate, weil_height};
use crate::linalg::mat_vec_mod;
use crate::metrics::{
    exact_sum, fili_bound, fili_t_enclosure, q2_upper_partial, sh_partial_sum, widmer_step, window_sums,
    window_threshold, ExactSum,
};
use crate::{AbelianField, Caps, Error, Exec, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub label: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, label: &str) -> bool {
        self.failures.iter().any(|f| f.label == label)
    }
}

struct Ctx<'a> {
    caps: &'a Caps,
    exec: Exec,
    failures: Vec<Failure>,
}

impl Ctx<'_> {
    fn fail(&mut self, label: &str, detail: impl Into<String>) {
        self.failures.push(Failure { label: label.into(), detail: detail.into() });
    }

    fn require(&mut self, ok: bool, label: &str, detail: impl FnOnce() -> String) -> bool {
        if !ok {
            self.fail(label, detail());
        }
        ok
    }

    /// Resource limits abort verification; every other error is a failed
    /// claim.
    fn soft<T>(&mut self, label: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ Error::ResourceLimit { .. }) => Err(e),
            Err(e) => {
                self.fail(label, e.to_string());
                Ok(None)
            }
        }
    }

    fn field(&mut self, label: &str, p: &FieldPresentation) -> Result<Option<AbelianField>> {
        let r = p.check(self.caps);
        self.soft(label, r)
    }

    /// Compares a recomputed value with the recorded one, naming the first
    /// differing JSON path.
    fn same<T: Serialize + PartialEq>(&mut self, label: &str, recorded: &T, recomputed: &T) -> bool {
        if recorded == recomputed {
            return true;
        }
        let a = serde_json::to_value(recorded).unwrap_or(Value::Null);
        let b = serde_json::to_value(recomputed).unwrap_or(Value::Null);
        let path = first_difference(&a, &b, String::new()).unwrap_or_else(|| "(value)".into());
        self.fail(label, format!("recorded value differs from recomputation at {path}"));
        false
    }
}

fn first_difference(a: &Value, b: &Value, path: String) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for (k, v) in x {
                match y.get(k) {
                    Some(w) => {
                        if let Some(p) = first_difference(v, w, format!("{path}/{k}")) {
                            return Some(p);
                        }
                    }
                    None => return Some(format!("{path}/{k}")),
                }
            }
            y.keys().find(|k| !x.contains_key(*k)).map(|k| format!("{path}/{k}"))
        }
        (Value::Array(x), Value::Array(y)) => {
            for (i, (v, w)) in x.iter().zip(y).enumerate() {
                if let Some(p) = first_difference(v, w, format!("{path}/{i}")) {
                    return Some(p);
                }
            }
            (x.len() != y.len()).then(|| format!("{path} (length {} vs {})", x.len(), y.len()))
        }
        _ => (a != b).then_some(if path.is_empty() { "/".into() } else { path }),
    }
}

/// Re-checks every claim of a certificate. `Err` means the payload does not
/// match its schema or a resource limit prevented the recomputation; claims
/// that fail are listed in the report.
pub fn verify(cert: &Certificate, caps: &Caps, exec: Exec) -> Result<VerifyReport> {
    let mut cx = Ctx { caps, exec, failures: Vec::new() };
    if cert.schema_version != SCHEMA_VERSION {
        cx.fail("schema", format!("unsupported schema version {}", cert.schema_version));
        return Ok(VerifyReport { failures: cx.failures });
    }
    if !cert.verified {
        cx.fail("unverified", "certificate is marked as failing its own verification");
        return Ok(VerifyReport { failures: cx.failures });
    }
    let echo: InputsEcho = serde_json::from_value(cert.inputs_echo.clone())
        .map_err(|e| Error::pre(format!("inputs echo does not match the schema: {e}")))?;
    let payload = cert.typed_payload()?;
    verify_echo(&mut cx, &echo.invocation, &payload)?;
    match payload {
        Payload::FieldInfo(f) => verify_field_info(&mut cx, &f)?,
        Payload::SplitCyclic(c) => {
            let split = c.split_set.clone();
            verify_split_cyclic(&mut cx, &c, &split, "split")?;
        }
        Payload::Tower(t) => {
            let want = match t.kind {
                TowerKind::Product => CertificateKind::ProductTower,
                TowerKind::AntiWidmer => CertificateKind::AntiWidmerTower,
            };
            if cx.require(want == cert.kind, "schema", || "tower kind does not match the certificate kind".into()) {
                verify_tower(&mut cx, &t)?;
            }
        }
        Payload::Sh(r) => verify_sh(&mut cx, &r)?,
        Payload::Height(h) => verify_height(&mut cx, &h)?,
    }
    Ok(VerifyReport { failures: cx.failures })
}

/// The payload answers the echoed invocation: every parameter it repeats
/// agrees with the echo, and fields given by subgroups are the recorded ones.
fn verify_echo(cx: &mut Ctx, inv: &Invocation, payload: &Payload) -> Result<()> {
    let same_field = |cx: &mut Ctx, spec: &SubgroupSpec, p: &FieldPresentation| -> Result<bool> {
        let r = spec.field(cx.caps);
        Ok(match cx.soft("inputs", r)? {
            Some(f) => cx.require(&f.presentation() == p, "inputs", || {
                format!("field is not the one fixed by {:?} mod {}", spec.subgroup, spec.modulus)
            }),
            None => false,
        })
    };
    let bits = |a: f64, b: f64| a.to_bits() == b.to_bits();
    let ok = match (inv, payload) {
        (Invocation::Field { field, primes_to }, Payload::FieldInfo(info)) => {
            same_field(cx, field, &info.field)? && *primes_to == info.primes_to
        }
        (Invocation::ConstructCyclic { split, degree, totally_real, exclude }, Payload::SplitCyclic(c)) => {
            let norm = |v: &[u64]| {
                let mut v = v.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            };
            norm(split) == c.split_set
                && *degree == c.target_degree
                && *totally_real == c.totally_real
                && norm(exclude) == c.excluded
        }
        (Invocation::ConstructTower { kind, orders, depth, prime_floor }, Payload::Tower(t)) => {
            *kind == t.kind
                && *depth == t.levels.len()
                && match kind {
                    TowerKind::Product => orders.get(..*depth) == Some(t.orders.as_slice()),
                    TowerKind::AntiWidmer => *prime_floor == t.prime_floor,
                }
        }
        (Invocation::Shsum { field, x } | Invocation::Bogomolov { field, x }, Payload::Sh(r)) => match &**r {
            ShReport::PartialSum { field: p, report, .. } => same_field(cx, field, p)? && *x == report.cutoff,
            _ => false,
        },
        (Invocation::Q2bound { x }, Payload::Sh(r)) => {
            matches!(&**r, ShReport::Q2Bound { report } if report.cutoff == *x)
        }
        (Invocation::Fili { tolerance, data }, Payload::Sh(r)) => match (&**r, tolerance, data) {
            (ShReport::FiliT { tolerance: t, .. }, Some(u), None) => bits(*t, *u),
            (ShReport::FiliBound { data: d, .. }, None, Some(e)) => d == e,
            _ => false,
        },
        (Invocation::Window { field, kmin, kmax }, Payload::Sh(r)) => match &**r {
            ShReport::Windows { field: p, windows, .. } => {
                let ks: Vec<u32> = windows.iter().map(|w| w.k).collect();
                same_field(cx, field, p)? && ks == (*kmin..=*kmax).collect::<Vec<_>>()
            }
            _ => false,
        },
        (Invocation::Widmer { next, prev, base }, Payload::Sh(r)) => match &**r {
            ShReport::Widmer { prev: kp, next: kn, base: kb, .. } => {
                let b = match base {
                    Some(b) => same_field(cx, b, kb)?,
                    None => *kb == AbelianField::rational().presentation(),
                };
                same_field(cx, next, kn)? && same_field(cx, prev, kp)? && b
            }
            _ => false,
        },
        (Invocation::Height { polynomial, tolerance }, Payload::Height(h)) => match &**h {
            HeightReport::Single { tolerance: t, record } => record.polynomial == *polynomial && bits(*t, *tolerance),
            _ => false,
        },
        (Invocation::Enumerate { dmax, bound }, Payload::Height(h)) => match &**h {
            HeightReport::Enumerate { dmax: d, bound: b, .. } => d == dmax && bits(*b, *bound),
            _ => false,
        },
        (Invocation::Scan { field, dmax, bound }, Payload::Height(h)) => match &**h {
            HeightReport::Scan { field: p, dmax: d, bound: b, .. } => {
                same_field(cx, field, p)? && d == dmax && bits(*b, *bound)
            }
            _ => false,
        },
        _ => false,
    };
    cx.require(ok, "inputs", || "payload does not answer the echoed invocation".into());
    Ok(())
}

fn verify_field_info(cx: &mut Ctx, info: &FieldInfo) -> Result<()> {
    let Some(f) = cx.field("field-presentation", &info.field)? else {
        return Ok(());
    };
    let disc = f.discriminant();
    cx.require(info.discriminant == disc.to_biguint().to_string(), "conductor-discriminant", || {
        "discriminant does not equal the product of the character conductors".into()
    });
    cx.require(info.discriminant_factored == disc.to_string(), "conductor-discriminant", || {
        "factored discriminant does not match".into()
    });
    cx.require(info.totally_real == f.is_totally_real(), "real", || "total reality flag is wrong".into());
    if info.primes_to > cx.caps.sieve {
        return Err(Error::limit(format!("primes up to {}", info.primes_to), cx.caps.sieve));
    }
    let rows: Vec<SplittingRow> =
        primes_up_to(info.primes_to).into_iter().map(|p| f.splitting_data_unchecked(p).into()).collect();
    cx.same("splitting", &info.splitting, &rows);
    Ok(())
}

/// Checks one split-cyclic certificate against the split set it must
/// satisfy; returns the field when its presentation is valid.
fn verify_split_cyclic(
    cx: &mut Ctx,
    c: &SplitCyclicCertificate,
    expected_split: &[u64],
    split_label: &str,
) -> Result<Option<AbelianField>> {
    let q = c.target_degree;
    let Some((p, a)) = prime_power(q) else {
        cx.fail("degree", format!("{q} is not a prime power"));
        return Ok(None);
    };
    cx.require((p, a) == (c.prime, c.exponent), "degree", || format!("{q} is not {}^{}", c.prime, c.exponent));
    let s = &c.split_set;
    cx.require(s.as_slice() == expected_split, split_label, || "split set is not the required one".into());
    cx.require(s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| is_prime(x)), split_label, || {
        "split set is not a sorted list of primes".into()
    });
    cx.require(
        c.excluded.windows(2).all(|w| w[0] < w[1]) && c.excluded.iter().all(|&x| is_prime(x)),
        "auxiliary-primes",
        || "exclusions are not a sorted list of primes".into(),
    );
    let minus_one = c.totally_real && q % 2 == 0;
    let count = s.len() + 1 + usize::from(minus_one);
    let r = auxiliary_primes(s, q, count, &c.excluded, cx.caps);
    let Some(aux) = cx.soft("auxiliary-primes", r)? else {
        return Ok(None);
    };
    if !cx.require(aux == c.auxiliary_primes, "auxiliary-primes", || {
        "auxiliary primes are not the least admissible primes ≡ 1 mod q".into()
    }) {
        return Ok(None);
    }
    cx.require(c.ell_max == aux.last().copied().unwrap_or(0), "auxiliary-primes", || "ell_max is wrong".into());
    cx.require(c.ln_x0.to_bits() == (q as f64 / (s.len() + 1) as f64).to_bits(), "auxiliary-primes", || {
        "log x0 is not q/(|S|+1)".into()
    });

    let r = frobenius_rows(s, &aux, q, minus_one, cx.exec);
    let Some(rows) = cx.soft("frobenius", r)? else {
        return Ok(None);
    };
    cx.same("frobenius", &c.frobenius_vectors, &rows.summary(aux.len()));

    let lam = &c.functional;
    if !cx.require(lam.len() == aux.len() && lam.iter().all(|&x| x < q), "functional", || {
        "functional has the wrong shape".into()
    }) {
        return Ok(None);
    }
    let words = rows.to_words();
    let image = mat_vec_mod(&words, lam, q);
    cx.require(image.iter().all(|&x| x == 0), split_label, || {
        "functional does not annihilate the Frobenius vectors".into()
    });
    cx.require(lam.iter().any(|&x| x % p != 0), "functional", || "functional is not surjective".into());

    let Some(field) = cx.field("field-presentation", &c.field)? else {
        return Ok(None);
    };
    let r = functional_character(&aux, lam, q).and_then(|chi| AbelianField::from_characters(&[chi], cx.caps));
    if let Some(g) = cx.soft("functional", r)? {
        cx.require(g == field, "functional", || "field is not cut out by the functional".into());
    }
    cx.require(field.degree() == q && crate::constructions::is_cyclic(&field), "degree", || {
        format!("field is not cyclic of degree {q}")
    });
    let cond = field.conductor();
    cx.require(cond.pairs().all(|(l, e)| e == 1 && aux.binary_search(&l).is_ok()), "conductor", || {
        "conductor is not a product of distinct auxiliary primes".into()
    });
    cx.require(!cond.divides_prime(p), "conductor", || format!("field ramifies at {p}"));
    cx.require(c.conductor_primes == cond.primes().collect::<Vec<_>>(), "conductor", || {
        "conductor primes are wrong".into()
    });
    let split = cx.exec.map(s, |&x| field.is_totally_split(x));
    if let Some((x, _)) = s.iter().zip(&split).find(|(_, ok)| !**ok) {
        cx.fail(split_label, format!("{x} is not totally split"));
    }
    if c.totally_real {
        cx.require(field.is_totally_real(), "real", || "field is not totally real".into());
    }
    check_discriminant(cx, &field, &c.discriminant, &c.discriminant_factored);
    if a == 1 {
        let bound = FactoredInt::from_pairs(aux.iter().zip(lam).filter(|(_, &x)| x != 0).map(|(&l, _)| (l, q - 1)));
        cx.require(bound == field.discriminant(), "conductor-discriminant", || {
            "discriminant is not the (q-1)-th power of the conductor".into()
        });
    }
    let disc = field.discriminant();
    let root = Some(disc.root(q * q)).filter(|r| r.is_finite());
    cx.require(
        c.discriminant_root.map(f64::to_bits) == root.map(f64::to_bits)
            && c.ln_discriminant_root.to_bits() == (disc.ln() / (q * q) as f64).to_bits(),
        "discriminant-root",
        || "recorded |Δ|^(1/q²) does not match".into(),
    );
    Ok(Some(field))
}

fn check_discriminant(cx: &mut Ctx, field: &AbelianField, decimal: &str, factored: &str) {
    let disc = field.discriminant();
    cx.require(decimal == disc.to_biguint().to_string(), "conductor-discriminant", || {
        "discriminant does not equal the product of the character conductors".into()
    });
    cx.require(factored == disc.to_string(), "conductor-discriminant", || {
        "factored discriminant does not equal the product of the character conductors".into()
    });
}

struct Labels {
    window: &'static str,
    split: &'static str,
    disjoint: &'static str,
}

fn verify_tower(cx: &mut Ctx, t: &TowerSpec) -> Result<()> {
    let labels = match t.kind {
        TowerKind::Product => Labels { window: "(a)", split: "(b)", disjoint: "(c)" },
        TowerKind::AntiWidmer => Labels { window: "(cc2)", split: "(cc1)", disjoint: "(disjoint)" },
    };
    let orders: Vec<u64> = t.levels.iter().map(|l| l.order).collect();
    cx.require(orders == t.orders, "schema", || "orders do not match the levels".into());
    if t.kind == TowerKind::Product {
        cx.require(t.prime_floor == 0, "schema", || "product towers carry no prime floor".into());
    }
    let mut current = AbelianField::rational();
    let mut lo = 2u64;
    let mut disc_primes: Vec<u64> = Vec::new();
    let mut used_degrees: Vec<u64> = Vec::new();
    for (i, level) in t.levels.iter().enumerate() {
        let Some(next) = verify_level(cx, t, &labels, i + 1, level, &current, lo, &disc_primes, &used_degrees)? else {
            // later levels cannot be checked without this one
            break;
        };
        if let Some(f) = cx.field("field-presentation", &level.field)? {
            disc_primes.extend(f.discriminant().primes());
            disc_primes.sort_unstable();
            disc_primes.dedup();
        }
        used_degrees.push(level.order);
        current = next;
        lo = level.n;
    }
    Ok(())
}

fn prime_power_factors(d: u64) -> Vec<u64> {
    crate::arithmetic::factorize(d).factors.iter().map(|&(p, e)| p.pow(e)).collect()
}

#[allow(clippy::too_many_arguments)]
fn verify_level(
    cx: &mut Ctx,
    t: &TowerSpec,
    labels: &Labels,
    i: usize,
    level: &TowerLevel,
    prev: &AbelianField,
    lo: u64,
    disc_primes: &[u64],
    used_degrees: &[u64],
) -> Result<Option<AbelianField>> {
    let at = |s: &str| format!("level {i}: {s}");
    // (window) recomputed from the previous level's field
    let w = &level.window;
    if w.hi > cx.caps.sieve {
        return Err(Error::limit(format!("primes up to {}", w.hi), cx.caps.sieve));
    }
    cx.require(w.lo == lo && w.hi == level.n, labels.window, || at("window bounds do not continue the tower"));
    let recomputed = window_terms(prev, lo, level.n, cx.exec);
    cx.same(labels.window, w, &recomputed);
    let sum = exact_sum(w.terms.iter().filter(|t| !t.overflow).map(|t| t.term));
    cx.require(sum >= 1.0 && sum.to_bits() == w.value.to_bits(), labels.window, || {
        at("window sum of the recorded terms is not ≥ 1")
    });
    let mut acc = ExactSum::default();
    for t in &w.terms[..w.terms.len().saturating_sub(1)] {
        if !t.overflow {
            acc.add(t.term);
        }
    }
    cx.require(acc.value() < 1.0, labels.window, || at("n is not minimal"));
    cx.require(w.terms.last().map(|t| t.prime + 1) == Some(level.n), labels.window, || {
        at("the window does not end just after the prime that reaches 1")
    });

    // split set
    let mut want: Vec<u64> = primes_in_range(2, level.n + 1, cx.exec);
    match t.kind {
        TowerKind::Product => want.extend(prev.conductor().primes()),
        TowerKind::AntiWidmer => want.extend(disc_primes),
    }
    want.sort_unstable();
    want.dedup();
    cx.require(level.split_set == want, labels.split, || at("split set is not the required set"));

    // components
    let mut field = AbelianField::rational();
    let mut components_ok = true;
    match t.kind {
        TowerKind::Product => {
            let factors = prime_power_factors(level.order);
            let qs: Vec<u64> = level.components.iter().map(|c| c.target_degree).collect();
            components_ok &= cx.require(qs == factors, labels.disjoint, || {
                at("components are not the prime-power factors of the order")
            });
            let mut used: Vec<u64> = Vec::new();
            for c in &level.components {
                let mut ex = used.clone();
                ex.sort_unstable();
                components_ok &= cx.require(c.excluded == ex && c.totally_real, labels.disjoint, || {
                    at("component options are not the construction's")
                });
                used.extend(&c.auxiliary_primes);
                match verify_split_cyclic(cx, c, &want, labels.split)? {
                    Some(f) => {
                        let r = field.compositum(&f, cx.caps);
                        match cx.soft("compositum", r)? {
                            Some(g) => field = g,
                            None => components_ok = false,
                        }
                    }
                    None => components_ok = false,
                }
            }
        }
        TowerKind::AntiWidmer => {
            let p = level.order;
            components_ok &= cx.require(is_prime(p) && p >= t.prime_floor.max(2), "(cc3)", || {
                at("degree is not a prime above the floor")
            });
            components_ok &= cx.require(!used_degrees.contains(&p), "(cc3)", || at("degree was used before"));
            components_ok &=
                cx.require(level.components.len() == 1 && level.components[0].target_degree == p, "schema", || {
                    at("expected one component of the level's degree")
                });
            if let Some(c) = level.components.first() {
                components_ok &= cx.require(c.excluded == disc_primes && !c.totally_real, "(cc1)", || {
                    at("component options are not the construction's")
                });
                match verify_split_cyclic(cx, c, &want, labels.split)? {
                    Some(f) => field = f,
                    None => components_ok = false,
                }
            }
        }
    }
    let Some(f) = cx.field("field-presentation", &level.field)? else {
        return Ok(None);
    };
    if components_ok {
        cx.require(f == field, "compositum", || at("level field is not the compositum of its components"));
    }
    cx.require(f.degree() == level.order && crate::constructions::is_cyclic(&f), labels.disjoint, || {
        at("level field is not cyclic of the stated order")
    });
    cx.require(level.discriminant_factored == f.discriminant().to_string(), "conductor-discriminant", || {
        at("factored discriminant does not match")
    });
    let split = cx.exec.map(&want, |&p| f.is_totally_split(p));
    let split_ok = split.iter().all(|&b| b);
    if let Some((p, _)) = want.iter().zip(&split).find(|(_, ok)| !**ok) {
        cx.fail(labels.split, at(&format!("{p} is not totally split")));
    }

    // compositum and disjointness
    let r = prev.compositum(&f, cx.caps);
    let Some(next) = cx.soft("compositum", r)? else {
        return Ok(None);
    };
    let Some(recorded_next) = cx.field("field-presentation", &level.compositum)? else {
        return Ok(None);
    };
    if !cx.require(recorded_next == next, "compositum", || at("L_i is not L_{i-1}F_i")) {
        return Ok(None);
    }
    let disjoint = next.degree() == prev.degree() * level.order && prev.is_linearly_disjoint(&f);
    cx.require(disjoint, labels.disjoint, || at("F_i is not linearly disjoint from L_{i-1}"));
    let in_level = window_terms(&next, lo, level.n, cx.exec);
    cx.same("(telescoping)", &level.window_in_level, &in_level);
    let telescoping = in_level.terms == recomputed.terms && in_level.value.to_bits() == recomputed.value.to_bits();
    cx.require(telescoping, "(telescoping)", || at("window terms change from L_{i-1} to L_i"));
    let real = next.is_totally_real();

    let mut conditions = LevelConditions {
        split: split_ok,
        window: recomputed.value >= 1.0,
        telescoping,
        disjoint,
        totally_real: real,
        small_discriminant: None,
        coprime_discriminant: None,
        widmer_bounded: None,
    };
    match t.kind {
        TowerKind::Product => {
            cx.require(real, "(real)", || at("L_i is not totally real"));
            cx.require(level.widmer.is_none(), "schema", || at("product towers record no Widmer step"));
        }
        TowerKind::AntiWidmer => {
            let p = level.order;
            let disc = f.discriminant();
            let small = disc.root_at_most(p * p, 3);
            cx.require(small, "(cc3)", || at("|Δ_F|^(1/p²) > 3"));
            let coprime = disc_primes.iter().all(|&l| !disc.divides_prime(l));
            cx.require(coprime, "(coprime)", || at("Δ_F shares a prime with an earlier discriminant"));
            let r = widmer_step(prev, &next, &AbelianField::rational(), cx.caps);
            let mut bounded = false;
            if let Some(step) = cx.soft("(widmer)", r)? {
                match &level.widmer {
                    Some(rec) => {
                        cx.same("(widmer)", rec, &step);
                    }
                    None => cx.fail("(widmer)", at("missing Widmer step")),
                }
                let r = next.intermediate_fields(prev, cx.caps);
                if let Some(ms) = cx.soft("(widmer)", r)? {
                    bounded = step.candidates.iter().zip(&ms).any(|(c, m)| {
                        norm_relative_discriminant(prev, m)
                            .map(|n| n.root_at_most(c.degree_over_base * c.relative_degree, 3))
                            .unwrap_or(false)
                    });
                }
                cx.require(bounded, "(widmer)", || at("no intermediate field has normed discriminant root ≤ 3"));
            }
            // total reality is not part of this construction; the flag is
            // recorded as the builder sets it
            conditions.totally_real = true;
            conditions.small_discriminant = Some(small);
            conditions.coprime_discriminant = Some(coprime);
            conditions.widmer_bounded = Some(bounded);
        }
    }
    cx.same("conditions", &level.conditions, &conditions);
    Ok(Some(next))
}

fn verify_sh(cx: &mut Ctx, r: &ShReport) -> Result<()> {
    match r {
        ShReport::PartialSum { field, report, bogomolov } => {
            let Some(f) = cx.field("field-presentation", field)? else {
                return Ok(());
            };
            let x = sh_partial_sum(&f, report.cutoff, cx.caps, cx.exec);
            if let Some(x) = cx.soft("partial-sum", x)? {
                cx.same("partial-sum", report, &x);
                cx.require(bogomolov.to_bits() == (x.value / 2.0).to_bits(), "bogomolov", || {
                    "Bogomolov bound is not half the partial sum".into()
                });
            }
        }
        ShReport::Q2Bound { report } => {
            let x = q2_upper_partial(report.cutoff, cx.caps, cx.exec);
            if let Some(x) = cx.soft("q2-bound", x)? {
                cx.same("q2-bound", report, &x);
            }
        }
        ShReport::FiliT { tolerance, enclosure } => {
            let x = fili_t_enclosure(*tolerance);
            if let Some(x) = cx.soft("fili-t", x)? {
                cx.same("fili-t", enclosure, &x);
                cx.require(x.upper - x.lower <= 2.0 * tolerance, "fili-t", || {
                    "enclosure is wider than the tolerance".into()
                });
            }
        }
        ShReport::FiliBound { data, value } => {
            let x = fili_bound(data);
            if let Some(x) = cx.soft("fili-bound", x)? {
                cx.same("fili-bound", value, &x);
            }
        }
        ShReport::Windows { field, threshold, windows, exceeds } => {
            let Some(f) = cx.field("field-presentation", field)? else {
                return Ok(());
            };
            cx.require(threshold.to_bits() == window_threshold(f.degree()).to_bits(), "windows", || {
                "threshold is not 1/(13[F:Q])".into()
            });
            let ks: Vec<u32> = windows.iter().map(|w| w.k).collect();
            let contiguous = ks.windows(2).all(|w| w[1] == w[0] + 1);
            if cx.require(contiguous, "windows", || "window indices are not contiguous".into()) && !ks.is_empty() {
                let x = window_sums(&f, ks[0], ks[ks.len() - 1] + 1, cx.caps, cx.exec);
                if let Some(x) = cx.soft("windows", x)? {
                    cx.same("windows", windows, &x);
                    let t = window_threshold(f.degree());
                    let ex: Vec<bool> = x.iter().map(|w| w.value > t).collect();
                    cx.same("windows", exceeds, &ex);
                }
            } else {
                cx.require(exceeds.is_empty(), "windows", || "comparison list without windows".into());
            }
        }
        ShReport::Widmer { prev, next, base, step } => {
            let (Some(k), Some(m), Some(b)) = (
                cx.field("field-presentation", prev)?,
                cx.field("field-presentation", next)?,
                cx.field("field-presentation", base)?,
            ) else {
                return Ok(());
            };
            let x = widmer_step(&k, &m, &b, cx.caps);
            if let Some(x) = cx.soft("(widmer)", x)? {
                cx.same("(widmer)", step, &x);
            }
        }
    }
    Ok(())
}

fn verify_height(cx: &mut Ctx, h: &HeightReport) -> Result<()> {
    match h {
        HeightReport::Single { tolerance, record } => {
            let x = weil_height(&record.polynomial, *tolerance, cx.caps);
            if let Some(x) = cx.soft("height", x)? {
                cx.same("height", record, &x);
            }
        }
        HeightReport::Enumerate { dmax, bound, records } => {
            let x = northcott_enumerate(*dmax, *bound, cx.caps, cx.exec);
            if let Some(x) = cx.soft("enumeration", x)? {
                cx.same("enumeration", records, &x);
            }
        }
        HeightReport::Scan { field, dmax, bound, report } => {
            let Some(f) = cx.field("field-presentation", field)? else {
                return Ok(());
            };
            let x = min_height_scan(&f, *dmax, *bound, cx.caps, cx.exec);
            if let Some(x) = cx.soft("scan", x)? {
                cx.same("scan", report, &x);
            }
        }
    }
    Ok(())
}
