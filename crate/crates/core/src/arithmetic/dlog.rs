use std::collections::HashMap;

use super::factor::{euler_phi, factorize};
use super::modular::{gcd, inv_mod, mul_mod, pow_mod};
use crate::{Error, Result};

/// Order of `a` modulo `m`, given a multiple `n` of it with factorisation
/// `n_factors`.
pub fn order_dividing(a: u64, m: u64, n: u64, n_factors: &[(u64, u32)]) -> u64 {
    let mut ord = n;
    for &(p, _) in n_factors {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a, m) != 1 {
        return None;
    }
    if m == 1 {
        return Some(1);
    }
    let n = euler_phi(m);
    Some(order_dividing(a, m, n, &factorize(n).factors))
}

/// Baby-step giant-step for x in [0, q) with base^x = target, base of order q.
fn bsgs(base: u64, target: u64, q: u64, m: u64) -> Option<u64> {
    if q <= 64 {
        let mut x = 1u64;
        for k in 0..q {
            if x == target {
                return Some(k);
            }
            x = mul_mod(x, base, m);
        }
        return None;
    }
    let s = (q as f64).sqrt().ceil() as u64;
    let mut table = HashMap::with_capacity(s as usize);
    let mut x = 1u64;
    for j in 0..s {
        table.entry(x).or_insert(j);
        x = mul_mod(x, base, m);
    }
    // giant step factor base^{-s}
    let giant = pow_mod(base, q - (s % q), m);
    let mut y = target;
    for i in 0..=s {
        if let Some(&j) = table.get(&y) {
            let k = i * s + j;
            if k < q {
                return Some(k);
            }
        }
        y = mul_mod(y, giant, m);
    }
    None
}

/// Logarithm of `target` to `base` in the cyclic group generated by `base`,
/// whose order is `order = ∏ p^e` (given factored). Pohlig–Hellman over the
/// prime powers, baby-step giant-step inside each prime-order step. Returns
/// the least nonnegative solution, or None if `target ∉ ⟨base⟩`.
pub fn dlog_in_cyclic(base: u64, target: u64, order: u64, order_factors: &[(u64, u32)], m: u64) -> Option<u64> {
    if order == 1 {
        return (target % m == 1 % m).then_some(0);
    }
    let mut residues: Vec<(u64, u64)> = Vec::new(); // (x mod p^e, p^e)
    for &(p, e) in order_factors {
        let pe = p.pow(e);
        let cof = order / pe;
        let g = pow_mod(base, cof, m); // order p^e
        let h = pow_mod(target, cof, m);
        let gamma = pow_mod(g, pe / p, m); // order p
        let mut x = 0u64;
        let mut pk = 1u64;
        for _ in 0..e {
            // h_k = (g^{-x} h)^{p^{e-1-k}}
            let ginv_x = pow_mod(g, (pe - x % pe) % pe, m);
            let hk = pow_mod(mul_mod(ginv_x, h, m), pe / pk / p, m);
            let d = bsgs(gamma, hk, p, m)?;
            x += d * pk;
            pk *= p;
        }
        residues.push((x % pe, pe));
    }
    // CRT over the coprime prime powers.
    let mut x = 0u128;
    let mut modulus = 1u128;
    for (r, pe) in residues {
        let pe128 = pe as u128;
        let inv = inv_mod((modulus % pe128) as u64, pe).expect("coprime prime powers") as u128;
        let diff = (r as u128 + pe128 - x % pe128) % pe128;
        x += modulus * (diff * inv % pe128);
        modulus *= pe128;
    }
    let x = x as u64;
    (pow_mod(base, x, m) == target % m).then_some(x)
}

/// Least k ≥ 0 with g^k ≡ a (mod m).
pub fn discrete_log(m: u64, g: u64, a: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::pre("modulus must be positive"));
    }
    if gcd(g, m) != 1 || gcd(a, m) != 1 {
        return Err(Error::pre("base and target must be coprime to the modulus"));
    }
    let ord = multiplicative_order(g % m, m).expect("coprime");
    let fac = factorize(ord).factors;
    dlog_in_cyclic(g % m, a % m, ord, &fac, m).ok_or(Error::NotInSubgroup { m, g, a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(discrete_log(7, 3, 1).unwrap(), 0);
        assert_eq!(discrete_log(7, 3, 2).unwrap(), 2);
        assert!(matches!(discrete_log(7, 2, 3), Err(Error::NotInSubgroup { .. })));
    }

    #[test]
    fn exhaustive_small() {
        for m in 2..200u64 {
            for g in 1..m {
                if gcd(g, m) != 1 {
                    continue;
                }
                let mut powers = HashMap::new();
                let mut x = 1 % m;
                for k in 0.. {
                    if powers.contains_key(&x) {
                        break;
                    }
                    powers.insert(x, k);
                    x = x * g % m;
                }
                for a in 1..m {
                    if gcd(a, m) != 1 {
                        continue;
                    }
                    match powers.get(&a) {
                        Some(&k) => assert_eq!(discrete_log(m, g, a).unwrap(), k, "{m} {g} {a}"),
                        None => assert!(discrete_log(m, g, a).is_err()),
                    }
                }
            }
        }
    }

    #[test]
    fn large_prime_order() {
        let m = 1_000_000_007u64;
        let g = 5;
        let a = pow_mod(g, 123_456_789, m);
        assert_eq!(discrete_log(m, g, a).unwrap(), 123_456_789);
    }
}
