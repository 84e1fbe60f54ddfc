//! Cyclic fields of prime-power degree q, totally split at a prescribed
//! finite set of primes, with conductor a product of few auxiliary primes
//! ℓ ≡ 1 mod q.
//!
//! Each auxiliary ℓ carries the degree-q character 1/q on (Z/ℓ)^*. A prime
//! s of S splits totally in the field cut out by Σ λ_j/q at ℓ_j exactly
//! when Σ λ_j·v_j(s) ≡ 0 mod q, where v_j(s) is the discrete logarithm of s
//! mod ℓ_j reduced mod q. With |S| constraints and |S|+1 unknowns a
//! surjective λ always exists.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arithmetic::{factorize, find_primes_in_ap, is_prime};
use crate::fields::{Character, CharacterEvaluator, FactoredInt, FieldPresentation, Frac, Place};
use crate::linalg::{lex_least_kernel_vector, lex_least_kernel_vector_bytes, unimodular_kernel_vector};
use crate::{AbelianField, Caps, Error, Exec, Result};

/// Matrices with at most this many entries are stored inline in
/// certificates; larger ones only by digest.
pub const INLINE_MATRIX_ENTRIES: u64 = 4096;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitCyclicOptions {
    /// Primes that may not be used as auxiliary primes (in addition to S
    /// and the prime dividing q).
    pub exclude: Vec<u64>,
    /// Also annihilate the image of −1, so the field is totally real. Only
    /// changes anything for even q.
    pub totally_real: bool,
}

/// The Frobenius vectors: one row per prime of the split set (in order),
/// followed by the row of −1 when total reality was imposed.
///
/// The digest is SHA-256 over the row-major entries, one byte each when
/// q ≤ 256 and eight little-endian bytes each otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FrobeniusMatrix {
    #[serde(with = "crate::dec")]
    pub rows: u64,
    #[serde(with = "crate::dec")]
    pub cols: u64,
    pub sha256: String,
    #[serde(with = "crate::dec::opt_matrix", default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SplitCyclicCertificate {
    #[serde(with = "crate::dec")]
    pub target_degree: u64,
    #[serde(with = "crate::dec")]
    pub prime: u64,
    #[serde(with = "crate::dec")]
    pub exponent: u32,
    #[serde(with = "crate::dec::vec")]
    pub split_set: Vec<u64>,
    #[serde(with = "crate::dec::vec")]
    pub excluded: Vec<u64>,
    pub totally_real: bool,
    #[serde(with = "crate::dec::vec")]
    pub auxiliary_primes: Vec<u64>,
    pub frobenius_vectors: FrobeniusMatrix,
    #[serde(with = "crate::dec::vec")]
    pub functional: Vec<u64>,
    pub field: FieldPresentation,
    #[serde(with = "crate::dec::vec")]
    pub conductor_primes: Vec<u64>,
    /// |Δ_F| in decimal.
    pub discriminant: String,
    pub discriminant_factored: String,
    /// |Δ_F|^{1/q²}, absent when it exceeds the f64 range.
    pub discriminant_root: Option<f64>,
    /// log |Δ_F|^{1/q²}, always finite.
    pub ln_discriminant_root: f64,
    #[serde(with = "crate::dec")]
    pub ell_max: u64,
    /// log x₀ = q/(|S|+1), the size the auxiliary primes would have under
    /// the effective prime-number-theorem bound.
    pub ln_x0: f64,
}

impl SplitCyclicCertificate {
    pub fn field(&self, caps: &Caps) -> Result<AbelianField> {
        self.field.check(caps)
    }
}

/// q = p^a, or None when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q).factors;
    (f.len() == 1).then(|| (f[0].0, f[0].1))
}

/// Frobenius matrix with byte or word entries.
pub enum FrobeniusRows {
    Bytes(Vec<Vec<u8>>),
    Words(Vec<Vec<u64>>),
}

impl FrobeniusRows {
    pub fn len(&self) -> usize {
        match self {
            FrobeniusRows::Bytes(r) => r.len(),
            FrobeniusRows::Words(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_words(&self) -> Vec<Vec<u64>> {
        match self {
            FrobeniusRows::Bytes(r) => r.iter().map(|x| x.iter().map(|&b| b as u64).collect()).collect(),
            FrobeniusRows::Words(r) => r.clone(),
        }
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        match self {
            FrobeniusRows::Bytes(rows) => rows.iter().for_each(|r| h.update(r)),
            FrobeniusRows::Words(rows) => {
                for r in rows {
                    for x in r {
                        h.update(x.to_le_bytes());
                    }
                }
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn summary(&self, cols: usize) -> FrobeniusMatrix {
        let rows = self.len() as u64;
        let cols = cols as u64;
        FrobeniusMatrix {
            rows,
            cols,
            sha256: self.digest(),
            entries: (rows * cols <= INLINE_MATRIX_ENTRIES).then(|| self.to_words()),
        }
    }
}

fn column_evaluators(aux: &[u64], q: u64) -> Result<Vec<CharacterEvaluator>> {
    aux.iter().map(|&l| Ok(Character::local(Place::Odd(l), Frac::new(1, q))?.evaluator())).collect()
}

#[inline]
fn entry(ev: &CharacterEvaluator, u: u64, q: u64) -> u64 {
    let v = ev.eval(u);
    v.num() * (q / v.den())
}

/// Row s holds v_j(s) = log of s at ℓ_j, reduced mod q; the optional last
/// row holds the logarithms of −1.
pub fn frobenius_rows(split_set: &[u64], aux: &[u64], q: u64, minus_one: bool, exec: Exec) -> Result<FrobeniusRows> {
    let evs = column_evaluators(aux, q)?;
    if q <= 256 {
        let mut rows_b: Vec<Vec<u8>> = exec.map(split_set, |&s| evs.iter().map(|ev| entry(ev, s, q) as u8).collect());
        if minus_one {
            rows_b.push(evs.iter().zip(aux).map(|(ev, &l)| entry(ev, l - 1, q) as u8).collect());
        }
        Ok(FrobeniusRows::Bytes(rows_b))
    } else {
        let mut rows_w: Vec<Vec<u64>> = exec.map(split_set, |&s| evs.iter().map(|ev| entry(ev, s, q)).collect());
        if minus_one {
            rows_w.push(evs.iter().zip(aux).map(|(ev, &l)| entry(ev, l - 1, q)).collect());
        }
        Ok(FrobeniusRows::Words(rows_w))
    }
}

/// The character Σ λ_j/q at ℓ_j.
pub fn functional_character(aux: &[u64], functional: &[u64], q: u64) -> Result<Character> {
    Character::from_parts(
        aux.iter().zip(functional).filter(|(_, &x)| x % q != 0).map(|(&l, &x)| (Place::Odd(l), Frac::new(x % q, q))),
    )
}

/// Auxiliary primes: the smallest ℓ ≡ 1 mod q outside S, the exclusions
/// and the prime dividing q.
pub fn auxiliary_primes(split_set: &[u64], q: u64, count: usize, exclude: &[u64], caps: &Caps) -> Result<Vec<u64>> {
    let mut excl: Vec<u64> = split_set.iter().chain(exclude).copied().collect();
    excl.sort_unstable();
    excl.dedup();
    find_primes_in_ap(q, &excl, count, caps.sieve)
}

/// Splits into the set actually constrained (sorted, deduplicated).
fn normalise_split_set(split_set: &[u64]) -> Result<Vec<u64>> {
    let mut s = split_set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&x| !is_prime(x)) {
        return Err(Error::pre(format!("{bad} in the split set is not prime")));
    }
    Ok(s)
}

/// Builds and verifies a degree-q cyclic field totally split at every prime
/// of `split_set`. The functional is the lexicographically least kernel
/// vector for prime q; for proper prime powers it is the normalised
/// unimodular kernel vector of a Smith-style elimination.
pub fn find_split_cyclic(
    split_set: &[u64],
    q: u64,
    opts: &SplitCyclicOptions,
    caps: &Caps,
    exec: Exec,
) -> Result<(SplitCyclicCertificate, AbelianField)> {
    let (p, a) = prime_power(q).ok_or_else(|| Error::pre(format!("{q} is not a prime power")))?;
    let s = normalise_split_set(split_set)?;
    let minus_one = opts.totally_real && q % 2 == 0;
    let count = s.len() + 1 + usize::from(minus_one);
    if count as u64 > caps.linear {
        return Err(Error::limit(format!("linear system with {count} unknowns"), caps.linear));
    }
    let mut excluded = opts.exclude.clone();
    excluded.sort_unstable();
    excluded.dedup();
    let aux = auxiliary_primes(&s, q, count, &excluded, caps)?;
    let rows = frobenius_rows(&s, &aux, q, minus_one, exec)?;
    let summary = rows.summary(aux.len());

    let functional = if a == 1 {
        match rows {
            FrobeniusRows::Bytes(r) => lex_least_kernel_vector_bytes(r, aux.len(), q as u8, exec),
            FrobeniusRows::Words(r) => lex_least_kernel_vector(r, aux.len(), q, exec),
        }
    } else {
        unimodular_kernel_vector(&rows.to_words(), aux.len(), p, a)
    }
    .ok_or_else(|| Error::inconsistent("no surjective functional annihilates the Frobenius vectors"))?;

    let chi = functional_character(&aux, &functional, q)?;
    let field = AbelianField::from_characters(&[chi], caps)?;
    verify_field(&field, &s, &aux, q, p, minus_one, exec)?;

    let disc = field.discriminant();
    if a == 1 {
        let c = FactoredInt::from_pairs(aux.iter().zip(&functional).filter(|(_, &x)| x != 0).map(|(&l, _)| (l, q - 1)));
        if c != disc {
            return Err(Error::inconsistent("discriminant is not c^(q-1)"));
        }
    }
    let cert = SplitCyclicCertificate {
        target_degree: q,
        prime: p,
        exponent: a,
        split_set: s.clone(),
        excluded,
        totally_real: opts.totally_real,
        ell_max: *aux.last().unwrap(),
        auxiliary_primes: aux,
        frobenius_vectors: summary,
        functional,
        field: field.presentation(),
        conductor_primes: field.conductor().primes().collect(),
        discriminant: disc.to_biguint().to_string(),
        discriminant_factored: disc.to_string(),
        discriminant_root: Some(disc.root(q * q)).filter(|r| r.is_finite()),
        ln_discriminant_root: disc.ln() / (q * q) as f64,
        ln_x0: q as f64 / (s.len() + 1) as f64,
    };
    Ok((cert, field))
}

/// Some character has order equal to the degree.
pub fn is_cyclic(field: &AbelianField) -> bool {
    field.elements().iter().any(|c| c.order() == field.degree())
}

/// Independent checks of the built field through its own splitting data.
pub(crate) fn verify_field(
    field: &AbelianField,
    split_set: &[u64],
    aux: &[u64],
    q: u64,
    p: u64,
    totally_real: bool,
    exec: Exec,
) -> Result<()> {
    if field.degree() != q || !is_cyclic(field) {
        return Err(Error::inconsistent(format!("field is not cyclic of degree {q}")));
    }
    let cond = field.conductor();
    for (l, e) in cond.pairs() {
        if e != 1 || aux.binary_search(&l).is_err() {
            return Err(Error::inconsistent(format!("conductor factor {l}^{e} is not an auxiliary prime")));
        }
    }
    if cond.divides_prime(p) {
        return Err(Error::inconsistent(format!("field ramifies at {p}")));
    }
    let split = exec.map(split_set, |&s| field.is_totally_split(s));
    if let Some((s, _)) = split_set.iter().zip(&split).find(|(_, ok)| !**ok) {
        return Err(Error::inconsistent(format!("{s} is not totally split")));
    }
    if totally_real && !field.is_totally_real() {
        return Err(Error::inconsistent("field is not totally real"));
    }
    Ok(())
}
