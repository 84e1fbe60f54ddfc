use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

/// A positive integer stored as its prime factorisation. Conductors and
/// discriminants of the fields built here routinely have thousands of prime
/// factors, so they are never multiplied out unless asked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredInt(BTreeMap<u64, u64>);

impl FactoredInt {
    pub fn one() -> Self {
        FactoredInt(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *m.entry(p).or_insert(0) += e;
            }
        }
        FactoredInt(m)
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_pairs(crate::arithmetic::factorize(n).factors.into_iter().map(|(p, e)| (p, e as u64)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn exponent(&self, p: u64) -> u64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn divides_prime(&self, p: u64) -> bool {
        self.0.contains_key(&p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            *m.entry(p).or_insert(0) += e;
        }
        FactoredInt(m)
    }

    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::one();
        }
        FactoredInt(self.0.iter().map(|(&p, &e)| (p, e * k)).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            let v = m.entry(p).or_insert(0);
            *v = (*v).max(e);
        }
        FactoredInt(m)
    }

    /// self / other when the quotient is an integer.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            let v = m.get_mut(&p)?;
            if *v < e {
                return None;
            }
            *v -= e;
            if *v == 0 {
                m.remove(&p);
            }
        }
        Some(FactoredInt(m))
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        let (small, big) = if self.0.len() <= other.0.len() { (self, other) } else { (other, self) };
        small.0.keys().all(|p| !big.0.contains_key(p))
    }

    pub fn ln(&self) -> f64 {
        self.0.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).sum()
    }

    pub fn to_biguint(&self) -> BigUint {
        // Balanced product tree; a left fold is quadratic for large inputs.
        let mut xs: Vec<BigUint> = self.0.iter().map(|(&p, &e)| BigUint::from(p).pow(e as u32)).collect();
        if xs.is_empty() {
            return BigUint::one();
        }
        while xs.len() > 1 {
            let mut next = Vec::with_capacity(xs.len().div_ceil(2));
            let mut it = xs.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a * b),
                    None => next.push(a),
                }
            }
            xs = next;
        }
        xs.pop().unwrap()
    }

    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }

    /// self^(1/k) ≤ b, decided exactly (logarithms only settle clear cases).
    pub fn root_at_most(&self, k: u64, b: u64) -> bool {
        let lhs = self.ln();
        let rhs = k as f64 * (b as f64).ln();
        let slack = 1e-9 * rhs.abs().max(1.0);
        if lhs < rhs - slack {
            return true;
        }
        if lhs > rhs + slack {
            return false;
        }
        self.to_biguint() <= BigUint::from(b).pow(k as u32)
    }

    /// exp(ln(self)/k), the real k-th root.
    pub fn root(&self, k: u64) -> f64 {
        (self.ln() / k as f64).exp()
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(&p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ops() {
        let a = FactoredInt::from_u64(8281);
        assert_eq!(a.to_u64(), Some(8281));
        assert_eq!(a.to_string(), "7^2·13^2");
        let b = FactoredInt::from_u64(49);
        assert_eq!(a.div_exact(&b), Some(FactoredInt::from_u64(169)));
        assert_eq!(b.div_exact(&a), None);
        assert!(a.root_at_most(9, 3));
        assert!(!a.root_at_most(8, 3));
        assert!((a.root(9) - 2.724_849_572).abs() < 1e-8);
        assert!(FactoredInt::from_u64(81).root_at_most(4, 3));
        assert!(!FactoredInt::from_u64(82).root_at_most(4, 3));
        assert_eq!(a.to_biguint().to_string(), "8281");
        assert!(a.is_coprime(&FactoredInt::from_u64(10)));
    }
}
