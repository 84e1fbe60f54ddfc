//! Producing certificates from invocations.

use super::{Certificate, CertificateKind, FieldInfo, HeightReport, Invocation, ShReport};
use crate::constructions::{
    build_anti_widmer_tower, build_product_tower, find_split_cyclic, SplitCyclicOptions, TowerKind,
};
use crate::heights::{min_height_scan, northcott_enumerate, weil_height};
use crate::metrics::{
    fili_bound, fili_t_enclosure, q2_upper_partial, sh_partial_sum, widmer_step, window_sums, window_threshold,
};
use crate::{AbelianField, Caps, Error, Exec, Result};

impl Invocation {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Invocation::Field { .. } => CertificateKind::FieldInfo,
            Invocation::ConstructCyclic { .. } => CertificateKind::SplitCyclic,
            Invocation::ConstructTower { kind: TowerKind::Product, .. } => CertificateKind::ProductTower,
            Invocation::ConstructTower { kind: TowerKind::AntiWidmer, .. } => CertificateKind::AntiWidmerTower,
            Invocation::Height { .. } | Invocation::Enumerate { .. } | Invocation::Scan { .. } => {
                CertificateKind::HeightReport
            }
            _ => CertificateKind::ShReport,
        }
    }
}

/// Runs an invocation and wraps its result. Builders verify their own
/// output; a failure there surfaces as `InternalInconsistency`, for which
/// [`diagnostic`] gives the unverified certificate.
pub fn run(inv: &Invocation, caps: &Caps, exec: Exec) -> Result<Certificate> {
    let ck = inv.kind();
    let echo = inv.clone().echo(caps);
    match inv {
        Invocation::Field { field, primes_to } => {
            if *primes_to > caps.sieve {
                return Err(Error::limit(format!("primes up to {primes_to}"), caps.sieve));
            }
            Certificate::new(ck, &FieldInfo::of(&field.field(caps)?, *primes_to), echo.clone(), true)
        }
        Invocation::Shsum { field, x } | Invocation::Bogomolov { field, x } => {
            let f = field.field(caps)?;
            let report = sh_partial_sum(&f, *x, caps, exec)?;
            let bogomolov = report.value / 2.0;
            Certificate::new(
                ck,
                &ShReport::PartialSum { field: f.presentation(), report, bogomolov },
                echo.clone(),
                true,
            )
        }
        Invocation::Q2bound { x } => {
            Certificate::new(ck, &ShReport::Q2Bound { report: q2_upper_partial(*x, caps, exec)? }, echo.clone(), true)
        }
        Invocation::Fili { tolerance, data } => match (tolerance, data) {
            (Some(t), None) => Certificate::new(
                ck,
                &ShReport::FiliT { tolerance: *t, enclosure: fili_t_enclosure(*t)? },
                echo.clone(),
                true,
            ),
            (None, Some(d)) => Certificate::new(
                ck,
                &ShReport::FiliBound { data: d.clone(), value: fili_bound(d)? },
                echo.clone(),
                true,
            ),
            _ => Err(Error::pre("give exactly one of a tolerance and local data")),
        },
        Invocation::Window { field, kmin, kmax } => {
            let f = field.field(caps)?;
            let windows = if kmin <= kmax { window_sums(&f, *kmin, kmax + 1, caps, exec)? } else { Vec::new() };
            let threshold = window_threshold(f.degree());
            let exceeds = windows.iter().map(|w| w.value > threshold).collect();
            Certificate::new(
                ck,
                &ShReport::Windows { field: f.presentation(), threshold, windows, exceeds },
                echo.clone(),
                true,
            )
        }
        Invocation::Widmer { next, prev, base } => {
            let n = next.field(caps)?;
            let p = prev.field(caps)?;
            let b = match base {
                Some(b) => b.field(caps)?,
                None => AbelianField::rational(),
            };
            let step = widmer_step(&p, &n, &b, caps)?;
            Certificate::new(
                ck,
                &ShReport::Widmer { prev: p.presentation(), next: n.presentation(), base: b.presentation(), step },
                echo.clone(),
                true,
            )
        }
        Invocation::ConstructCyclic { split, degree, totally_real, exclude } => {
            let opts = SplitCyclicOptions { exclude: exclude.clone(), totally_real: *totally_real };
            let (cert, _) = find_split_cyclic(split, *degree, &opts, caps, exec)?;
            Certificate::new(ck, &cert, echo.clone(), true)
        }
        Invocation::ConstructTower { kind, orders, depth, prime_floor } => {
            let t = match kind {
                TowerKind::Product => build_product_tower(orders, *depth, caps, exec)?,
                TowerKind::AntiWidmer => build_anti_widmer_tower(*depth, *prime_floor, caps, exec)?,
            };
            Certificate::new(ck, &t, echo.clone(), true)
        }
        Invocation::Height { polynomial, tolerance } => Certificate::new(
            ck,
            &HeightReport::Single { tolerance: *tolerance, record: weil_height(polynomial, *tolerance, caps)? },
            echo.clone(),
            true,
        ),
        Invocation::Enumerate { dmax, bound } => Certificate::new(
            ck,
            &HeightReport::Enumerate {
                dmax: *dmax,
                bound: *bound,
                records: northcott_enumerate(*dmax, *bound, caps, exec)?,
            },
            echo.clone(),
            true,
        ),
        Invocation::Scan { field, dmax, bound } => {
            let f = field.field(caps)?;
            let report = min_height_scan(&f, *dmax, *bound, caps, exec)?;
            Certificate::new(
                ck,
                &HeightReport::Scan { field: f.presentation(), dmax: *dmax, bound: *bound, report },
                echo.clone(),
                true,
            )
        }
    }
}

/// Certificate for a build whose own verification failed: the error in
/// place of the payload, marked unverified.
pub fn diagnostic(inv: &Invocation, caps: &Caps, err: &Error) -> Certificate {
    let payload = serde_json::json!({ "error": err.to_string() });
    Certificate::new(inv.kind(), &payload, inv.clone().echo(caps), false).expect("json values serialise")
}
