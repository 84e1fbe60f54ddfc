use std::fmt;

use super::factored::FactoredInt;
use super::frac::Frac;
use crate::arithmetic::{dlog_in_cyclic, factorize, gcd, is_prime, least_primitive_root, pow_mod, Montgomery};
use crate::{Error, Result};

/// A cyclic factor of the profinite unit group ∏ Z_ℓ^*: the two 2-adic
/// factors ⟨−1⟩ and (the closure of) ⟨3⟩, and Z_ℓ^* = ⟨g_ℓ⟩ for odd ℓ with g_ℓ
/// the least primitive root modulo ℓ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    TwoMinus,
    TwoThree,
    Odd(u64),
}

impl Place {
    pub fn prime(self) -> u64 {
        match self {
            Place::TwoMinus | Place::TwoThree => 2,
            Place::Odd(l) => l,
        }
    }

    pub fn parse(s: &str) -> Option<Place> {
        match s {
            "2:-1" => Some(Place::TwoMinus),
            "2:3" => Some(Place::TwoThree),
            _ => {
                let l: u64 = s.parse().ok()?;
                (l > 2 && is_prime(l)).then_some(Place::Odd(l))
            }
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::TwoMinus => write!(f, "2:-1"),
            Place::TwoThree => write!(f, "2:3"),
            Place::Odd(l) => write!(f, "{l}"),
        }
    }
}

/// A Dirichlet character, given by its values (in Q/Z) on the generators of
/// the places it touches. The representation does not depend on any
/// modulus: pulling a character back to a multiple level leaves it unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    parts: Vec<(Place, Frac)>,
}

fn v_p(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

impl Character {
    pub fn trivial() -> Self {
        Character { parts: Vec::new() }
    }

    /// Builds a character from (place, value) pairs, merging repeats and
    /// validating that each value is a genuine local character value.
    pub fn from_parts(parts: impl IntoIterator<Item = (Place, Frac)>) -> Result<Self> {
        let mut v: Vec<(Place, Frac)> = parts.into_iter().collect();
        v.sort_by_key(|x| x.0);
        let mut merged: Vec<(Place, Frac)> = Vec::with_capacity(v.len());
        for (pl, x) in v {
            match merged.last_mut() {
                Some((q, y)) if *q == pl => *y = y.add(x),
                _ => merged.push((pl, x)),
            }
        }
        merged.retain(|(_, x)| !x.is_zero());
        for &(pl, x) in &merged {
            let d = x.den();
            let ok = match pl {
                Place::TwoMinus => d == 2,
                Place::TwoThree => d.is_power_of_two(),
                Place::Odd(l) => {
                    let w = d / l.pow(v_p(d, l));
                    is_prime(l) && l % 2 == 1 && (l - 1) % w == 0
                }
            };
            if !ok {
                return Err(Error::pre(format!("{x} is not a character value at place {pl}")));
            }
        }
        Ok(Character { parts: merged })
    }

    /// The character of order `den/gcd(num,den)` at a single place.
    pub fn local(place: Place, value: Frac) -> Result<Self> {
        Self::from_parts([(place, value)])
    }

    pub fn parts(&self) -> &[(Place, Frac)] {
        &self.parts
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn value_at(&self, place: Place) -> Frac {
        self.parts.binary_search_by_key(&place, |x| x.0).map(|i| self.parts[i].1).unwrap_or(Frac::ZERO)
    }

    pub fn add(&self, other: &Character) -> Character {
        let (a, b) = (&self.parts, &other.parts);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let s = a[i].1.add(b[j].1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Character { parts: out }
    }

    pub fn neg(&self) -> Character {
        Character { parts: self.parts.iter().map(|&(p, x)| (p, x.neg())).collect() }
    }

    pub fn scale(&self, k: u64) -> Character {
        Character { parts: self.parts.iter().map(|&(p, x)| (p, x.scale(k))).filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn order(&self) -> u64 {
        self.parts.iter().fold(1, |acc, &(_, x)| crate::arithmetic::lcm(acc, x.den()))
    }

    /// Primes at which the character is nontrivial.
    pub fn support(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.parts.iter().map(|(p, _)| p.prime()).collect();
        v.dedup();
        v
    }

    /// The component at prime p (both 2-adic places when p = 2).
    pub fn restrict_to(&self, p: u64) -> Character {
        Character { parts: self.parts.iter().copied().filter(|(pl, _)| pl.prime() == p).collect() }
    }

    pub fn is_trivial_at(&self, p: u64) -> bool {
        self.parts.iter().all(|(pl, _)| pl.prime() != p)
    }

    /// Exponent of p in the conductor: the least b such that the character is
    /// trivial on the kernel of (Z_p)^* → (Z/p^b)^*.
    pub fn local_conductor_exponent(&self, p: u64) -> u64 {
        if p == 2 {
            let rm = self.value_at(Place::TwoMinus);
            let r3 = self.value_at(Place::TwoThree);
            if rm.is_zero() && r3.is_zero() {
                return 0;
            }
            // b = 1 kills nothing new: (Z/2)^* is trivial.
            // b = 2: the kernel is generated by −3 = (−1)·3.
            if rm.add(r3).is_zero() {
                return 2;
            }
            // b ≥ 3: the kernel is generated by 3^(2^(b−2)).
            let mut b = 3u64;
            while !r3.scale(1u64 << (b - 2)).is_zero() {
                b += 1;
            }
            return b;
        }
        let r = self.value_at(Place::Odd(p));
        if r.is_zero() {
            return 0;
        }
        // kernel of reduction mod p^b is generated by g^φ(p^b)
        let mut b = 1u64;
        loop {
            let phi = (p - 1) as u128 * (p as u128).pow(b as u32 - 1);
            if r.scale((phi % r.den() as u128) as u64).is_zero() {
                return b;
            }
            b += 1;
        }
    }

    pub fn conductor(&self) -> FactoredInt {
        FactoredInt::from_pairs(self.support().into_iter().map(|p| (p, self.local_conductor_exponent(p))))
    }

    /// χ(−1) ∈ {0, 1/2}.
    pub fn at_minus_one(&self) -> Frac {
        let mut acc = Frac::ZERO;
        for &(pl, x) in &self.parts {
            match pl {
                Place::TwoMinus => acc = acc.add(x),
                Place::TwoThree => {}
                Place::Odd(l) => {
                    // −1 = g^(N/2) with N = φ(ℓ^(s+1)), ℓ^s ∥ den
                    let d = x.den();
                    let k = ((l - 1) / 2) as u128 * (l as u128).pow(v_p(d, l));
                    acc = acc.add(x.scale((k % d as u128) as u64));
                }
            }
        }
        acc
    }

    pub fn evaluator(&self) -> CharacterEvaluator {
        CharacterEvaluator::new(self)
    }
}

/// Precomputed data for evaluating a character at many integers.
#[derive(Debug, Clone)]
pub struct CharacterEvaluator {
    odd: Vec<OddPart>,
    two: Option<TwoPart>,
}

#[derive(Debug, Clone)]
struct OddPart {
    prime: u64,
    value: Frac,
    modulus: u64,
    cofactor: u64,
    base: u64,
    den_factors: Vec<(u64, u32)>,
    mont: Option<Montgomery>,
    /// base^k for k < den, when den is small.
    table: Vec<u64>,
}

#[derive(Debug, Clone)]
struct TwoPart {
    minus: Frac,
    three: Frac,
    /// 2^(j+2) where 2^j is the denominator of the value on 3.
    modulus: u64,
    order3: u64,
}

impl OddPart {
    fn new(l: u64, value: Frac) -> OddPart {
        let den = value.den();
        let s = v_p(den, l);
        let modulus = l.pow(s + 1);
        let n = (l - 1) * l.pow(s);
        let cofactor = n / den;
        let g = least_primitive_root(l);
        let base = pow_mod(g, cofactor, modulus);
        let mont = (modulus < 1 << 32).then(|| Montgomery::new(modulus));
        let table = if den <= 64 {
            let mut t = Vec::with_capacity(den as usize);
            let mut x = 1u64;
            for _ in 0..den {
                t.push(x);
                x = crate::arithmetic::mul_mod(x, base, modulus);
            }
            t
        } else {
            Vec::new()
        };
        OddPart { prime: l, value, modulus, cofactor, base, den_factors: factorize(den).factors, mont, table }
    }

    #[inline]
    fn eval(&self, u: u64) -> Frac {
        let um = u % self.modulus;
        let x = match &self.mont {
            Some(m) => m.pow_plain(um, self.cofactor),
            None => pow_mod(um, self.cofactor, self.modulus),
        };
        let k = if !self.table.is_empty() {
            self.table.iter().position(|&t| t == x).map(|k| k as u64)
        } else {
            dlog_in_cyclic(self.base, x, self.value.den(), &self.den_factors, self.modulus)
        }
        .expect("argument must be a unit at every place of the character");
        self.value.scale(k)
    }
}

impl TwoPart {
    fn eval(&self, u: u64) -> Frac {
        let (s, v) = match u % 8 {
            1 | 3 => (0, u % self.modulus),
            _ => (1, (self.modulus - u % self.modulus) % self.modulus),
        };
        let mut acc = if s == 1 { self.minus } else { Frac::ZERO };
        if !self.three.is_zero() {
            // v ∈ ⟨3⟩ modulo 2^(j+2), an exhaustive walk is fine: j is tiny
            // for any field built at desk scale.
            let mut x = 1u64;
            let mut t = 0u64;
            while x != v {
                x = x * 3 % self.modulus;
                t += 1;
                assert!(t <= self.order3, "2-adic logarithm failed");
            }
            acc = acc.add(self.three.scale(t));
        }
        acc
    }
}

impl CharacterEvaluator {
    pub fn new(chi: &Character) -> Self {
        let mut odd = Vec::new();
        let mut minus = Frac::ZERO;
        let mut three = Frac::ZERO;
        for &(pl, x) in chi.parts() {
            match pl {
                Place::TwoMinus => minus = x,
                Place::TwoThree => three = x,
                Place::Odd(l) => odd.push(OddPart::new(l, x)),
            }
        }
        let two = (!minus.is_zero() || !three.is_zero()).then(|| TwoPart {
            minus,
            three,
            modulus: three.den() * 4,
            order3: three.den(),
        });
        CharacterEvaluator { odd, two }
    }

    /// χ(u) for u coprime to the conductor.
    pub fn eval(&self, u: u64) -> Frac {
        let mut acc = Frac::ZERO;
        if let Some(t) = &self.two {
            acc = acc.add(t.eval(u));
        }
        for part in &self.odd {
            acc = acc.add(part.eval(u));
        }
        acc
    }

    /// χ(u) ignoring the component at prime p (on which χ must be trivial
    /// for this to be a value of χ).
    pub fn eval_away_from(&self, u: u64, p: u64) -> Frac {
        let mut acc = Frac::ZERO;
        if p != 2 {
            if let Some(t) = &self.two {
                acc = acc.add(t.eval(u));
            }
        }
        for part in self.odd.iter().filter(|q| q.prime != p) {
            acc = acc.add(part.eval(u));
        }
        acc
    }

    /// Checks that u is a unit at every place of the character.
    pub fn is_unit(&self, u: u64) -> bool {
        (self.two.is_none() || u % 2 == 1) && self.odd.iter().all(|q| gcd(u, q.prime) == 1)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.parts.iter().map(|(p, x)| format!("{p}:{x}")).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(parts: &[(Place, u64, u64)]) -> Character {
        Character::from_parts(parts.iter().map(|&(p, a, b)| (p, Frac::new(a, b)))).unwrap()
    }

    #[test]
    fn two_adic_conductors() {
        let chi_m4 = ch(&[(Place::TwoMinus, 1, 2), (Place::TwoThree, 1, 2)]);
        let chi_8 = ch(&[(Place::TwoThree, 1, 2)]);
        let chi_m8 = ch(&[(Place::TwoMinus, 1, 2)]);
        assert_eq!(chi_m4.conductor().to_u64(), Some(4));
        assert_eq!(chi_8.conductor().to_u64(), Some(8));
        assert_eq!(chi_m8.conductor().to_u64(), Some(8));
        let chi16 = ch(&[(Place::TwoThree, 1, 4)]);
        assert_eq!(chi16.conductor().to_u64(), Some(16));
        // values: χ_{−4}(3) = −1, χ_{−4}(5) = 1; χ_8(3) = −1, χ_8(7) = 1
        let e = chi_m4.evaluator();
        assert_eq!((e.eval(3), e.eval(5), e.eval(7)), (Frac::new(1, 2), Frac::ZERO, Frac::new(1, 2)));
        let e = chi_8.evaluator();
        assert_eq!((e.eval(3), e.eval(5), e.eval(7)), (Frac::new(1, 2), Frac::new(1, 2), Frac::ZERO));
        assert_eq!(chi_m4.at_minus_one(), Frac::new(1, 2));
        assert_eq!(chi_8.at_minus_one(), Frac::ZERO);
    }

    #[test]
    fn odd_values_and_conductor() {
        // cubic character mod 7 with χ(3) = 1/3 (3 is the chosen generator)
        let chi = ch(&[(Place::Odd(7), 1, 3)]);
        let e = chi.evaluator();
        assert_eq!(e.eval(3), Frac::new(1, 3));
        assert_eq!(e.eval(2), Frac::new(2, 3)); // 2 = 3^2
        assert_eq!(e.eval(6), Frac::ZERO);
        assert_eq!(e.eval(13), Frac::ZERO);
        assert_eq!(chi.conductor().to_u64(), Some(7));
        assert_eq!(chi.at_minus_one(), Frac::ZERO);
        let wild = ch(&[(Place::Odd(3), 1, 3)]);
        assert_eq!(wild.conductor().to_u64(), Some(9));
        let quad7 = ch(&[(Place::Odd(7), 1, 2)]);
        assert_eq!(quad7.at_minus_one(), Frac::new(1, 2));
        assert!(Character::from_parts([(Place::Odd(7), Frac::new(1, 5))]).is_err());
    }

    #[test]
    fn group_ops() {
        let a = ch(&[(Place::Odd(7), 1, 3), (Place::Odd(13), 1, 3)]);
        assert!(a.add(&a).add(&a).is_trivial());
        assert_eq!(a.scale(2), a.neg());
        assert_eq!(a.order(), 3);
        assert_eq!(a.support(), vec![7, 13]);
    }
}
