//! Small parameter searches: the effective prime-count threshold for the
//! split-cyclic lemma, inert quadratic witnesses, and local degrees for the
//! embedding construction.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{factorize, gcd, is_prime, next_prime, pow_mod, primes_in_ap_count};
use crate::metrics::fili_t_constant;
use crate::{AbelianField, Caps, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdReport {
    pub n: u64,
    pub p: u64,
    /// x₀ = e^{p/(N+1)}
    pub x0: f64,
    /// π(x₀, p, 1)
    pub count: u64,
    /// 2(N+1)
    pub required: u64,
    pub satisfied: bool,
    /// max{121, (2T+1)(N+1)²}; purely informative.
    pub c_n: f64,
}

/// Whether there are at least 2(N+1) primes ℓ ≡ 1 mod p below e^{p/(N+1)}.
/// Diagnostic only: no builder depends on it.
pub fn effective_threshold_check(n: u64, p: u64, caps: &Caps) -> Result<ThresholdReport> {
    if !is_prime(p) {
        return Err(Error::pre(format!("{p} is not prime")));
    }
    let x0 = (p as f64 / (n + 1) as f64).exp();
    let count = primes_in_ap_count(x0, p, caps)?.count;
    let required = 2 * (n + 1);
    let t = fili_t_constant(1e-9)?;
    let c_n = f64::max(121.0, (2.0 * t + 1.0) * ((n + 1) as f64).powi(2));
    Ok(ThresholdReport { n, p, x0, count, required, satisfied: count >= required, c_n })
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).factors.iter().all(|&(_, e)| e == 1)
}

/// Least positive squarefree non-residue mod an odd prime p; the inertia
/// degree of p in Q(√n) is checked to be 2.
pub fn inert_quadratic_witness(p: u64, caps: &Caps) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::pre(format!("{p} is not an odd prime")));
    }
    let n =
        (2..p).find(|&n| is_squarefree(n) && pow_mod(n, (p - 1) / 2, p) == p - 1).expect("non-residues exist below p");
    let k = AbelianField::quadratic(n as i64, caps)?;
    let s = k.splitting_data(p);
    if (s.e, s.f) != (1, 2) {
        return Err(Error::inconsistent(format!("{p} is not inert in Q(√{n})")));
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalParams {
    #[serde(with = "crate::dec")]
    pub f: u64,
    /// e_i for each local prime, in input order.
    #[serde(with = "crate::dec::vec")]
    pub e: Vec<BigUint>,
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % 2u32).is_zero() {
        d >>= 1;
        s += 1;
    }
    [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == nm1 {
                return true;
            }
        }
        false
    })
}

/// The least prime e ≥ f dividing p_i^f − 1, for prime f.
///
/// A prime d divides p_i^f − 1 iff its order divides f, i.e. d | p_i − 1 or
/// d ≡ 1 mod f. The first kind is read off factor(p_i − 1); the second is
/// searched in increasing order up to the trial cap; past it, the remaining
/// cofactor must be a probable prime.
fn least_large_divisor(pi: u64, f: u64, caps: &Caps) -> Result<BigUint> {
    let small: Option<u64> = factorize(pi - 1).primes().filter(|&d| d >= f).min();
    let step = if f == 2 { 1 } else { 2 * f };
    let mut d = if f == 2 { 3 } else { 2 * f + 1 };
    while d <= caps.factor_trial {
        if small.is_some_and(|s| s < d) {
            break;
        }
        if is_prime(d) && pow_mod(pi % d, f, d) == 1 {
            return Ok(BigUint::from(d));
        }
        d += step;
    }
    if let Some(s) = small {
        return Ok(BigUint::from(s));
    }
    // Nothing below the cap: strip p_i − 1's primes and any prime ≡ 1 mod f
    // below the cap is already excluded, so the cofactor has only large
    // prime factors ≡ 1 mod f.
    let mut n = BigUint::from(pi).pow(f as u32) - 1u32;
    for q in factorize(pi - 1).primes() {
        while (&n % q).is_zero() {
            n /= q;
        }
    }
    if n.is_one() {
        return Err(Error::pre(format!("{pi}^{f} - 1 has no prime factor ≥ {f}")));
    }
    if is_probable_prime_big(&n) {
        return Ok(n);
    }
    Err(Error::limit(format!("factoring {pi}^{f} - 1"), caps.factor_trial))
}

/// f = least prime > p·μ·h·k; e_i = least prime ≥ f dividing p_i^f − 1.
pub fn shafarevich_local_params(
    p: u64,
    mu: u64,
    h: u64,
    k: u64,
    local_primes: &[u64],
    caps: &Caps,
) -> Result<LocalParams> {
    if p == 0 || mu == 0 || h == 0 || k == 0 {
        return Err(Error::pre("all parameters must be positive"));
    }
    if let Some(&bad) = local_primes.iter().find(|&&l| !is_prime(l)) {
        return Err(Error::pre(format!("{bad} is not prime")));
    }
    let bound = p
        .checked_mul(mu)
        .and_then(|x| x.checked_mul(h))
        .and_then(|x| x.checked_mul(k))
        .ok_or_else(|| Error::Overflow("p·μ·h·k".into()))?;
    let f = next_prime(bound);
    let mut es = Vec::with_capacity(local_primes.len());
    for &pi in local_primes {
        let e = least_large_divisor(pi, f, caps)?;
        let ok = (BigUint::from(pi).pow(f as u32) - 1u32) % &e == BigUint::zero() && e >= BigUint::from(f);
        // e and f are primes ≥ f > pμhk, so e·f is coprime to each of them
        let coprime = [p, mu, h, k].iter().all(|&x| gcd(f, x) == 1 && gcd((&e % x).to_u64().unwrap(), x) == 1);
        if !ok || !coprime {
            return Err(Error::inconsistent(format!("local degree at {pi} fails verification")));
        }
        es.push(e);
    }
    Ok(LocalParams { f, e: es })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        let caps = Caps::default();
        let r = effective_threshold_check(1, 11, &caps).unwrap();
        assert!((r.x0 - 5.5f64.exp()).abs() < 1e-9);
        assert_eq!((r.count, r.satisfied), (4, true));
        let r = effective_threshold_check(1, 3, &caps).unwrap();
        assert_eq!((r.count, r.satisfied), (0, false));
        // 3, 5 and 7 are all ≡ 1 mod 2 and below e² ≈ 7.39
        let r = effective_threshold_check(0, 2, &caps).unwrap();
        assert_eq!((r.count, r.satisfied), (3, true));
        assert!(effective_threshold_check(0, 4, &caps).is_err());
        assert!(matches!(effective_threshold_check(0, 101, &caps), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn inert_witnesses() {
        let caps = Caps::default();
        assert_eq!(inert_quadratic_witness(5, &caps).unwrap(), 2);
        assert_eq!(inert_quadratic_witness(7, &caps).unwrap(), 3);
        assert_eq!(inert_quadratic_witness(3, &caps).unwrap(), 2);
        assert!(inert_quadratic_witness(2, &caps).is_err());
        for p in [11u64, 13, 17, 23, 71, 97, 1009] {
            let n = inert_quadratic_witness(p, &caps).unwrap();
            assert_eq!(AbelianField::quadratic(n as i64, &caps).unwrap().splitting_data(p).f, 2);
        }
    }

    #[test]
    fn local_params() {
        let caps = Caps::default();
        let r = shafarevich_local_params(2, 1, 1, 1, &[2], &caps).unwrap();
        assert_eq!((r.f, r.e.clone()), (3, vec![BigUint::from(7u32)]));
        let r = shafarevich_local_params(2, 1, 1, 2, &[2], &caps).unwrap();
        assert_eq!((r.f, r.e.clone()), (5, vec![BigUint::from(31u32)]));
        let r = shafarevich_local_params(2, 1, 1, 2, &[3], &caps).unwrap();
        assert_eq!(r.e, vec![BigUint::from(11u32)]);
        // a cofactor past the trial bound: 2^61 − 1 is prime
        let tiny = Caps { factor_trial: 100, ..caps };
        let r = shafarevich_local_params(59, 1, 1, 1, &[2], &tiny).unwrap();
        assert_eq!(r.f, 61);
        assert_eq!(r.e, vec![BigUint::from((1u64 << 61) - 1)]);
    }
}
