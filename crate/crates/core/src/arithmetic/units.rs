use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::factor::factorize;
use super::modular::{crt_pair, pow_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LocalKind {
    /// The factor ⟨−1⟩ of (Z/2^a)^*, a ≥ 2.
    TwoMinus,
    /// The factor ⟨3⟩ of (Z/2^a)^*, a ≥ 3.
    TwoThree,
    /// The cyclic group (Z/ℓ^a)^* for odd ℓ.
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub prime: u64,
    pub exponent: u32,
    pub kind: LocalKind,
    pub order: u64,
    /// Generator as a residue modulo ℓ^a.
    pub local_generator: u64,
    /// The same generator lifted to the full modulus by CRT (≡ 1 elsewhere).
    pub generator: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub factor_orders: Vec<u64>,
    pub generators: Vec<u64>,
    pub factors: Vec<LocalFactor>,
}

fn root_cache() -> &'static RwLock<HashMap<u64, u64>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The least g > 0 generating (Z/ℓ²)^* for an odd prime ℓ < 2^32 (hence
/// generating (Z/ℓ^a)^* for every a). For larger ℓ only (Z/ℓ)^* is needed,
/// and the least primitive root mod ℓ is returned. Memoised.
pub fn least_primitive_root(l: u64) -> u64 {
    assert!(l > 2 && l % 2 == 1);
    if let Some(&g) = root_cache().read().unwrap().get(&l) {
        return g;
    }
    let fac = factorize(l - 1).factors;
    let lifts = l < 1 << 32;
    let l2 = l.wrapping_mul(l);
    let g = (2..l)
        .find(|&g| fac.iter().all(|&(q, _)| pow_mod(g, (l - 1) / q, l) != 1) && (!lifts || pow_mod(g, l - 1, l2) != 1))
        .expect("primitive roots exist");
    root_cache().write().unwrap().insert(l, g);
    g
}

/// Cyclic decomposition of (Z/m)^*, one factor per odd prime power and up to
/// two for the power of 2, ordered by prime with ⟨−1⟩ before ⟨3⟩.
pub fn unit_group(m: u64) -> UnitGroupStructure {
    assert!(m >= 1);
    let fac = factorize(m).factors;
    let mut factors = Vec::new();
    for &(p, a) in &fac {
        let pa = p.pow(a);
        let rest = m / pa;
        let lift = |g: u64| crt_pair(g % pa, pa, 1 % rest, rest);
        if p == 2 {
            if a >= 2 {
                factors.push(LocalFactor {
                    prime: 2,
                    exponent: a,
                    kind: LocalKind::TwoMinus,
                    order: 2,
                    local_generator: pa - 1,
                    generator: lift(pa - 1),
                });
            }
            if a >= 3 {
                factors.push(LocalFactor {
                    prime: 2,
                    exponent: a,
                    kind: LocalKind::TwoThree,
                    order: 1 << (a - 2),
                    local_generator: 3,
                    generator: lift(3),
                });
            }
        } else {
            let g = least_primitive_root(p);
            factors.push(LocalFactor {
                prime: p,
                exponent: a,
                kind: LocalKind::Odd,
                order: (p - 1) * p.pow(a - 1),
                local_generator: g % pa,
                generator: lift(g),
            });
        }
    }
    UnitGroupStructure {
        modulus: m,
        factor_orders: factors.iter().map(|f| f.order).collect(),
        generators: factors.iter().map(|f| f.generator).collect(),
        factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{euler_phi, gcd};
    use std::collections::HashSet;

    #[test]
    fn examples() {
        let u = unit_group(2);
        assert!(u.factor_orders.is_empty());
        let u = unit_group(7);
        assert_eq!((u.factor_orders.clone(), u.generators.clone()), (vec![6], vec![3]));
        let u = unit_group(8);
        assert_eq!((u.factor_orders.clone(), u.generators.clone()), (vec![2, 2], vec![7, 3]));
        assert_eq!(unit_group(4).generators, vec![3]);
        assert_eq!(least_primitive_root(40487), 10);
    }

    #[test]
    fn generators_generate() {
        for m in 1..=300u64 {
            let u = unit_group(m);
            let mut seen: HashSet<u64> = HashSet::from([1 % m]);
            for &g in &u.generators {
                let cur: Vec<u64> = seen.iter().copied().collect();
                let mut x = g;
                while x != 1 % m {
                    for &c in &cur {
                        seen.insert(c * x % m);
                    }
                    x = x * g % m;
                }
            }
            assert_eq!(seen.len() as u64, euler_phi(m), "m={m}");
            assert!(u.generators.iter().all(|&g| gcd(g, m) == 1));
            assert_eq!(u.factor_orders.iter().product::<u64>(), euler_phi(m));
        }
    }
}
