//! Human-readable tables for certificates.

use std::fmt::Write;

use northcott_core::certificate::{Certificate, CertificateKind, FieldInfo, HeightReport, Payload, ShReport};
use northcott_core::constructions::{LocalParams, SplitCyclicCertificate, ThresholdReport, TowerSpec};
use northcott_core::fields::FieldPresentation;
use northcott_core::heights::HeightRecord;
use northcott_core::metrics::{PartialSumReport, WidmerStep};
use northcott_core::Result;

/// Partial sums with at most this many terms are printed term by term.
const TERM_TABLE_LIMIT: usize = 40;

pub fn kind_name(k: CertificateKind) -> &'static str {
    match k {
        CertificateKind::FieldInfo => "field-info",
        CertificateKind::SplitCyclic => "split-cyclic",
        CertificateKind::ProductTower => "product-tower",
        CertificateKind::AntiWidmerTower => "anti-widmer-tower",
        CertificateKind::ShReport => "sh-report",
        CertificateKind::HeightReport => "height-report",
    }
}

pub fn certificate(c: &Certificate) -> Result<String> {
    let mut s = String::new();
    match c.typed_payload()? {
        Payload::FieldInfo(f) => field_info(&mut s, &f),
        Payload::SplitCyclic(c) => split_cyclic(&mut s, &c),
        Payload::Tower(t) => tower(&mut s, &t),
        Payload::Sh(r) => sh(&mut s, &r),
        Payload::Height(h) => height(&mut s, &h),
    }
    Ok(s)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn field_line(s: &mut String, label: &str, f: &FieldPresentation) {
    let _ = writeln!(s, "{label}degree {}, conductor {}", f.degree, f.conductor);
}

fn field_info(s: &mut String, f: &FieldInfo) {
    field_line(s, "", &f.field);
    let _ = writeln!(s, "|disc| {}", f.discriminant);
    if f.discriminant_factored != f.discriminant {
        let _ = writeln!(s, "       = {}", f.discriminant_factored);
    }
    let _ = writeln!(s, "totally real: {}", yes(f.totally_real));
    let _ = writeln!(s, "\n{:>8} {:>4} {:>4} {:>4}  split", "p", "e", "f", "g");
    for r in &f.splitting {
        let split = if r.e == 1 && r.f == 1 { "totally" } else { "" };
        let _ = writeln!(s, "{:>8} {:>4} {:>4} {:>4}  {split}", r.prime, r.e, r.f, r.g);
    }
}

fn partial_sum(s: &mut String, r: &PartialSumReport) {
    let _ = writeln!(
        s,
        "cutoff {}: {} terms, sum {:.6} ({:e}), monotone {}",
        r.cutoff,
        r.term_count,
        r.value,
        r.value,
        yes(r.monotone_flag)
    );
    if r.terms.len() <= TERM_TABLE_LIMIT {
        let _ = writeln!(s, "{:>8} {:>3} {:>3}  term", "p", "e", "f");
        for t in &r.terms {
            let flag = if t.overflow { " (underflow, excluded)" } else { "" };
            let _ = writeln!(s, "{:>8} {:>3} {:>3}  {:.9}{flag}", t.prime, t.e, t.f, t.term);
        }
    }
}

fn widmer(s: &mut String, w: &WidmerStep) {
    let _ = writeln!(s, "infimum {:.6} at candidate {}", w.value, w.argmin);
    let _ = writeln!(s, "{:>6} {:>6} {:>12}  norm", "[M:K0]", "[M:K]", "value");
    for c in &w.candidates {
        let _ = writeln!(s, "{:>6} {:>6} {:>12.6}  {}", c.degree_over_base, c.relative_degree, c.value, c.norm);
    }
}

fn sh(s: &mut String, r: &ShReport) {
    match r {
        ShReport::PartialSum { field, report, bogomolov } => {
            field_line(s, "field: ", field);
            partial_sum(s, report);
            let _ = writeln!(s, "Bogomolov bound (half the sum): {bogomolov:.6}");
        }
        ShReport::Q2Bound { report } => partial_sum(s, report),
        ShReport::FiliT { tolerance, enclosure: e } => {
            let _ = writeln!(
                s,
                "T = {:.9} in [{:.12}, {:.12}] ({} terms, tolerance {tolerance:e})",
                e.value, e.lower, e.upper, e.terms
            );
        }
        ShReport::FiliBound { data, value } => {
            let _ = writeln!(s, "{} local data: bound {value:.9}", data.len());
        }
        ShReport::Windows { field, threshold, windows, exceeds } => {
            field_line(s, "field: ", field);
            let _ = writeln!(s, "threshold 1/(13n) = {threshold:.6}");
            let _ = writeln!(s, "{:>4} {:>8} {:>12}  > threshold", "k", "#split", "a_k");
            for (w, e) in windows.iter().zip(exceeds) {
                let _ = writeln!(s, "{:>4} {:>8} {:>12.6}  {}", w.k, w.primes.len(), w.value, yes(*e));
            }
        }
        ShReport::Widmer { prev, next, base, step } => {
            field_line(s, "K_i:     ", next);
            field_line(s, "K_{i-1}: ", prev);
            field_line(s, "K_0:     ", base);
            widmer(s, step);
        }
    }
}

fn split_cyclic(s: &mut String, c: &SplitCyclicCertificate) {
    let _ = writeln!(s, "cyclic field of degree {} totally split at {:?}", c.target_degree, c.split_set);
    if c.auxiliary_primes.len() <= TERM_TABLE_LIMIT {
        let _ = writeln!(s, "auxiliary primes {:?}", c.auxiliary_primes);
        let _ = writeln!(s, "functional {:?}", c.functional);
    } else {
        let _ = writeln!(s, "{} auxiliary primes up to {}", c.auxiliary_primes.len(), c.ell_max);
    }
    let _ = writeln!(
        s,
        "Frobenius matrix {}x{}, sha256 {}",
        c.frobenius_vectors.rows, c.frobenius_vectors.cols, c.frobenius_vectors.sha256
    );
    let _ = writeln!(s, "conductor {}", c.field.conductor);
    let _ = writeln!(s, "|disc| {} = {}", short(&c.discriminant), short(&c.discriminant_factored));
    match c.discriminant_root {
        Some(r) => writeln!(s, "|disc|^(1/q^2) = {r:.6}"),
        None => writeln!(s, "|disc|^(1/q^2) = exp({:.3})", c.ln_discriminant_root),
    }
    .ok();
}

fn short(x: &str) -> String {
    const KEEP: usize = 60;
    if x.chars().count() <= KEEP {
        x.to_string()
    } else {
        let head: String = x.chars().take(KEEP).collect();
        format!("{head}... ({} chars)", x.chars().count())
    }
}

fn tower(s: &mut String, t: &TowerSpec) {
    let _ = writeln!(s, "{:?} tower, degree {}", t.kind, t.degree());
    let _ = writeln!(s, "{:>3} {:>6} {:>10} {:>10} {:>8}  conditions", "i", "order", "n_i", "window", "|S_i|");
    for (i, l) in t.levels.iter().enumerate() {
        let c = &l.conditions;
        let mut conds = format!(
            "split {} window {} telescoping {} disjoint {} real {}",
            yes(c.split),
            yes(c.window),
            yes(c.telescoping),
            yes(c.disjoint),
            yes(c.totally_real)
        );
        if let (Some(a), Some(b), Some(w)) = (c.small_discriminant, c.coprime_discriminant, c.widmer_bounded) {
            let _ = write!(conds, " disc-root {} coprime {} widmer {}", yes(a), yes(b), yes(w));
        }
        let _ = writeln!(
            s,
            "{:>3} {:>6} {:>10} {:>10.6} {:>8}  {conds}",
            i + 1,
            l.order,
            l.n,
            l.window.value,
            l.split_set.len()
        );
        if let Some(w) = &l.widmer {
            let _ = writeln!(s, "    widmer infimum {:.6}", w.value);
        }
    }
    for n in &t.notes {
        let _ = writeln!(s, "note: {n}");
    }
}

fn record(s: &mut String, r: &HeightRecord) {
    let flag = if r.boundary { "  (boundary)" } else { "" };
    let _ = writeln!(
        s,
        "{:<28} {:>3} {:>12.9} {:>12.9} {:>9.1e}{flag}",
        r.polynomial.to_string(),
        r.degree,
        r.mahler,
        r.height,
        r.error_bound
    );
}

fn records(s: &mut String, rs: &[HeightRecord]) {
    let _ = writeln!(s, "{:<28} {:>3} {:>12} {:>12} {:>9}", "polynomial", "deg", "M", "h", "error");
    rs.iter().for_each(|r| record(s, r));
}

fn height(s: &mut String, h: &HeightReport) {
    match h {
        HeightReport::Single { record: r, .. } => records(s, std::slice::from_ref(r)),
        HeightReport::Enumerate { dmax, bound, records: rs } => {
            let numbers: usize = rs.iter().map(|r| r.degree).sum();
            let _ = writeln!(s, "degree <= {dmax}, height <= {bound}: {} polynomials, {numbers} numbers", rs.len());
            records(s, rs);
        }
        HeightReport::Scan { field, dmax, bound, report } => {
            field_line(s, "field: ", field);
            let _ = writeln!(
                s,
                "degree <= {dmax}, 0 < height <= {bound}: {} polynomials ({} of height 0 and {} outside the field skipped)",
                report.records.len(),
                report.excluded_zero_height,
                report.excluded_not_in_field
            );
            records(s, &report.records);
        }
    }
}

pub fn threshold(r: &ThresholdReport) -> String {
    format!(
        "N = {}, p = {}: x0 = {:.6}, pi(x0, p, 1) = {}, need {} -> {}\nC(N) = {:.3}",
        r.n,
        r.p,
        r.x0,
        r.count,
        r.required,
        if r.satisfied { "satisfied" } else { "not satisfied" },
        r.c_n
    )
}

pub fn local_params(r: &LocalParams, primes: &[u64]) -> String {
    let mut s = format!("f = {}", r.f);
    for (p, e) in primes.iter().zip(&r.e) {
        let _ = write!(s, "\ne({p}) = {e}");
    }
    s
}
