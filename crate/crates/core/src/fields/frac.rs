use std::fmt;

use crate::arithmetic::{gcd, lcm};

/// An element of Q/Z, kept as a reduced fraction num/den with 0 ≤ num < den.
/// Zero is 0/1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac {
    num: u64,
    den: u64,
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Frac {
        assert!(den > 0, "zero denominator");
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            return Frac::ZERO;
        }
        Frac { num: num / g, den: den / g }
    }

    /// num/den for a signed numerator.
    pub fn from_signed(num: i128, den: u64) -> Frac {
        let r = num.rem_euclid(den as i128) as u64;
        Frac::new(r, den)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Additive order in Q/Z.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn add(self, other: Frac) -> Frac {
        let d = lcm(self.den, other.den);
        let a = self.num as u128 * (d / self.den) as u128 + other.num as u128 * (d / other.den) as u128;
        Frac::new((a % d as u128) as u64, d)
    }

    pub fn neg(self) -> Frac {
        if self.num == 0 {
            self
        } else {
            Frac { num: self.den - self.num, den: self.den }
        }
    }

    pub fn scale(self, k: u64) -> Frac {
        let n = (self.num as u128 * (k % self.den) as u128 % self.den as u128) as u64;
        Frac::new(n, self.den)
    }

    pub fn parse(s: &str) -> Option<Frac> {
        let (a, b) = s.split_once('/')?;
        let num: u64 = a.trim().parse().ok()?;
        let den: u64 = b.trim().parse().ok()?;
        if den == 0 || num >= den {
            return None;
        }
        let f = Frac::new(num, den);
        // Only reduced fractions are canonical.
        (f.num == num && f.den == den || (num == 0 && den == 1)).then_some(f)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Frac::new(1, 3);
        assert_eq!(a.add(a).add(a), Frac::ZERO);
        assert_eq!(Frac::new(1, 2).add(Frac::new(1, 3)), Frac::new(5, 6));
        assert_eq!(Frac::new(4, 6), Frac::new(2, 3));
        assert_eq!(a.neg(), Frac::new(2, 3));
        assert_eq!(a.scale(5), Frac::new(2, 3));
        assert_eq!(Frac::from_signed(-1, 4), Frac::new(3, 4));
        assert_eq!(Frac::parse("2/6"), None);
        assert_eq!(Frac::parse("1/3"), Some(a));
        assert_eq!(Frac::parse("0/1"), Some(Frac::ZERO));
    }
}
