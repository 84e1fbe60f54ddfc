//! Machine-checkable certificates.
//!
//! A certificate is canonical JSON: keys sorted, integers as decimal
//! strings, reals as shortest round-trip decimals. It carries the payload of
//! one computation together with an echo of its inputs; [`verify`]
//! recomputes every claim in the payload from the field presentations it
//! contains.

mod build;
mod mutate;
mod verify;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;

use crate::constructions::{SplitCyclicCertificate, TowerSpec};
use crate::fields::{FieldPresentation, SplittingData};
use crate::heights::HeightRecord;
use crate::metrics::{FiliT, LocalDatum, PartialSumReport, WidmerStep, WindowSum};
use crate::{AbelianField, Caps, Error, Result};

pub use build::{diagnostic, run};
pub use mutate::{numeric_leaves, perturb};
pub use verify::{verify, Failure, VerifyReport};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    FieldInfo,
    SplitCyclic,
    ProductTower,
    AntiWidmerTower,
    ShReport,
    HeightReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: String,
    pub kind: CertificateKind,
    pub payload: Value,
    pub inputs_echo: Value,
    /// Whether the producer's own verification passed. Diagnostic
    /// certificates for failed builds carry `false`.
    pub verified: bool,
}

impl Certificate {
    pub fn new(kind: CertificateKind, payload: &impl Serialize, inputs_echo: Value, verified: bool) -> Result<Self> {
        let payload =
            serde_json::to_value(payload).map_err(|e| Error::inconsistent(format!("serialising payload: {e}")))?;
        Ok(Certificate { schema_version: SCHEMA_VERSION.into(), kind, payload, inputs_echo, verified })
    }

    /// Canonical text: sorted keys (serde_json's map is ordered), two-space
    /// indentation, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let v = serde_json::to_value(self).expect("certificates serialise");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialise");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn payload_as<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.payload.clone())
            .map_err(|e| Error::pre(format!("payload does not match the schema: {e}")))
    }
}

/// One row of a splitting table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SplittingRow {
    #[serde(with = "crate::dec")]
    pub prime: u64,
    #[serde(with = "crate::dec")]
    pub e: u64,
    #[serde(with = "crate::dec")]
    pub f: u64,
    #[serde(with = "crate::dec")]
    pub g: u64,
}

impl From<SplittingData> for SplittingRow {
    fn from(s: SplittingData) -> Self {
        SplittingRow { prime: s.prime, e: s.e, f: s.f, g: s.g }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FieldInfo {
    pub field: FieldPresentation,
    pub discriminant: String,
    pub discriminant_factored: String,
    pub totally_real: bool,
    #[serde(with = "crate::dec")]
    pub primes_to: u64,
    pub splitting: Vec<SplittingRow>,
}

impl FieldInfo {
    pub fn of(field: &AbelianField, primes_to: u64) -> FieldInfo {
        let disc = field.discriminant();
        FieldInfo {
            field: field.presentation(),
            discriminant: disc.to_biguint().to_string(),
            discriminant_factored: disc.to_string(),
            totally_real: field.is_totally_real(),
            primes_to,
            splitting: crate::arithmetic::primes_up_to(primes_to)
                .into_iter()
                .map(|p| field.splitting_data_unchecked(p).into())
                .collect(),
        }
    }
}

/// Payloads of `sh-report` certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "quantity", deny_unknown_fields)]
pub enum ShReport {
    /// Partial sum of the local terms of a field (and half of it, the
    /// Bogomolov bound).
    #[serde(rename_all = "camelCase")]
    PartialSum { field: FieldPresentation, report: PartialSumReport, bogomolov: f64 },
    /// Σ_{p ≤ X} log p/(p² + 1).
    #[serde(rename_all = "camelCase")]
    Q2Bound { report: PartialSumReport },
    /// T = Σ log k / k² within the tolerance.
    #[serde(rename_all = "camelCase")]
    FiliT { tolerance: f64, enclosure: FiliT },
    /// Σ log p / (e(p^f − 1)) over explicit local data.
    #[serde(rename_all = "camelCase")]
    FiliBound { data: Vec<LocalDatum>, value: f64 },
    /// Dyadic window sums with the 1/(13[F:Q]) comparison.
    #[serde(rename_all = "camelCase")]
    Windows { field: FieldPresentation, threshold: f64, windows: Vec<WindowSum>, exceeds: Vec<bool> },
    /// The discriminant-growth infimum of one step K_{i−1} ⊆ K_i over K₀.
    #[serde(rename_all = "camelCase")]
    Widmer { prev: FieldPresentation, next: FieldPresentation, base: FieldPresentation, step: WidmerStep },
}

/// Payload of `height-report` certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "query", deny_unknown_fields)]
pub enum HeightReport {
    #[serde(rename_all = "camelCase")]
    Single { tolerance: f64, record: HeightRecord },
    #[serde(rename_all = "camelCase")]
    Enumerate {
        #[serde(with = "crate::dec")]
        dmax: usize,
        bound: f64,
        records: Vec<HeightRecord>,
    },
    #[serde(rename_all = "camelCase")]
    Scan {
        field: FieldPresentation,
        #[serde(with = "crate::dec")]
        dmax: usize,
        bound: f64,
        report: crate::heights::ScanReport,
    },
}

/// Typed view of a payload.
pub enum Payload {
    FieldInfo(FieldInfo),
    SplitCyclic(Box<SplitCyclicCertificate>),
    Tower(Box<TowerSpec>),
    Sh(Box<ShReport>),
    Height(Box<HeightReport>),
}

impl Certificate {
    pub fn typed_payload(&self) -> Result<Payload> {
        Ok(match self.kind {
            CertificateKind::FieldInfo => Payload::FieldInfo(self.payload_as()?),
            CertificateKind::SplitCyclic => Payload::SplitCyclic(Box::new(self.payload_as()?)),
            CertificateKind::ProductTower | CertificateKind::AntiWidmerTower => {
                Payload::Tower(Box::new(self.payload_as()?))
            }
            CertificateKind::ShReport => Payload::Sh(Box::new(self.payload_as()?)),
            CertificateKind::HeightReport => Payload::Height(Box::new(self.payload_as()?)),
        })
    }
}

/// The invocation a certificate answers, echoed next to the payload so
/// that every input parameter of a claim can be checked against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InputsEcho {
    pub invocation: Invocation,
    pub caps: Caps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", rename_all_fields = "camelCase", tag = "command", deny_unknown_fields)]
pub enum Invocation {
    Field {
        field: SubgroupSpec,
        #[serde(with = "crate::dec")]
        primes_to: u64,
    },
    Shsum {
        field: SubgroupSpec,
        #[serde(with = "crate::dec")]
        x: u64,
    },
    Bogomolov {
        field: SubgroupSpec,
        #[serde(with = "crate::dec")]
        x: u64,
    },
    Q2bound {
        #[serde(with = "crate::dec")]
        x: u64,
    },
    Fili {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        data: Option<Vec<LocalDatum>>,
    },
    Window {
        field: SubgroupSpec,
        kmin: u32,
        kmax: u32,
    },
    /// K_i, K_{i−1} and K₀ (the rationals when absent).
    Widmer {
        next: SubgroupSpec,
        prev: SubgroupSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<SubgroupSpec>,
    },
    ConstructCyclic {
        #[serde(with = "crate::dec::vec")]
        split: Vec<u64>,
        #[serde(with = "crate::dec")]
        degree: u64,
        totally_real: bool,
        #[serde(with = "crate::dec::vec")]
        exclude: Vec<u64>,
    },
    ConstructTower {
        kind: crate::constructions::TowerKind,
        #[serde(with = "crate::dec::vec")]
        orders: Vec<u64>,
        #[serde(with = "crate::dec")]
        depth: usize,
        #[serde(with = "crate::dec")]
        prime_floor: u64,
    },
    Height {
        polynomial: crate::heights::IntPolynomial,
        tolerance: f64,
    },
    Enumerate {
        #[serde(with = "crate::dec")]
        dmax: usize,
        bound: f64,
    },
    Scan {
        field: SubgroupSpec,
        #[serde(with = "crate::dec")]
        dmax: usize,
        bound: f64,
    },
}

impl Invocation {
    pub fn echo(self, caps: &Caps) -> Value {
        serde_json::to_value(InputsEcho { invocation: self, caps: *caps }).expect("echo serialises")
    }
}

/// Field given by a modulus and generators of the subgroup H ⊆ (Z/m)^*
/// it fixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SubgroupSpec {
    #[serde(with = "crate::dec")]
    pub modulus: u64,
    #[serde(with = "crate::dec::vec")]
    pub subgroup: Vec<u64>,
}

impl SubgroupSpec {
    pub fn field(&self, caps: &Caps) -> Result<AbelianField> {
        AbelianField::from_subgroup(self.modulus, &self.subgroup, caps)
    }
}
