use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Integer polynomial, constant term first, leading coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let c: Vec<i64> = v
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| Error::pre(format!("bad coefficient {s:?}"))))
            .collect::<Result<_>>()?;
        if c.last() == Some(&0) {
            return Err(Error::pre("leading coefficient is zero"));
        }
        IntPolynomial::new(c)
    }
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; the zero polynomial is
    /// rejected.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::pre("the zero polynomial"));
        }
        Ok(IntPolynomial { coeffs })
    }

    /// Parses a comma-separated coefficient list, constant term first.
    pub fn parse(s: &str) -> Result<Self> {
        let c = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::pre(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn content(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |g, &c| g.gcd(&c.unsigned_abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divided by its content, with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        let c = self.content() as i64;
        let s = self.leading().signum();
        IntPolynomial { coeffs: self.coeffs.iter().map(|&a| a / c * s).collect() }
    }

    /// The sign-normalised representative (positive leading coefficient).
    pub fn normalized(&self) -> IntPolynomial {
        let s = self.leading().signum();
        IntPolynomial { coeffs: self.coeffs.iter().map(|&a| a * s).collect() }
    }

    /// f(x), or None on overflow.
    pub fn eval(&self, x: i64) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x as i128)?.checked_add(c as i128)?;
        }
        Some(acc)
    }

    /// Multiplicity of 0 as a root.
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|&&c| c == 0).count()
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn from_big(c: &[BigInt]) -> Result<Self> {
        let v = c
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("coefficient {x} exceeds 64 bits"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        Self::from_big(&big::mul(&self.to_big(), &other.to_big()))
    }

    /// Euclidean 2-norm.
    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>().sqrt()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => {}
                _ => write!(f, "{a}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Dense arithmetic on BigInt coefficient vectors (constant first).
pub(crate) mod big {
    use super::*;

    pub fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn derivative(a: &[BigInt]) -> Vec<BigInt> {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(a: &[BigInt]) -> BigInt {
        a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divided by content, leading coefficient positive.
    pub fn primitive(a: &[BigInt]) -> Vec<BigInt> {
        let c = content(a);
        if c.is_zero() {
            return Vec::new();
        }
        let c = if a.last().unwrap().is_negative() { -c } else { c };
        a.iter().map(|x| x / &c).collect()
    }

    /// Exact quotient a/b in Z[x], or None if b does not divide a.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        let a = trim(a.to_vec());
        let b = trim(b.to_vec());
        if b.is_empty() {
            return None;
        }
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() < b.len() {
            return None;
        }
        let mut r = a;
        let lb = b.last().unwrap().clone();
        let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + b.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
            q[k] = c;
        }
        r.iter().all(|c| c.is_zero()).then(|| trim(q))
    }

    /// Pseudo-remainder of a by b.
    fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r = trim(a.to_vec());
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] -= &lr * bj;
            }
            r = trim(r);
        }
        r
    }

    /// Primitive gcd in Z[x] (primitive pseudo-remainder sequence).
    pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut x = primitive(&trim(a.to_vec()));
        let mut y = primitive(&trim(b.to_vec()));
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            let r = prem(&x, &y);
            x = y;
            y = primitive(&r);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let f = IntPolynomial::parse("-1, -1, 1").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "x^2 - x - 1");
        assert_eq!(IntPolynomial::new(vec![0, 2, 0]).unwrap().to_string(), "2x");
        assert_eq!(IntPolynomial::new(vec![4, -6]).unwrap().primitive_part().coeffs(), &[-2, 3]);
        assert!(IntPolynomial::new(vec![0, 0]).is_err());
        assert_eq!(f.eval(2), Some(1));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"["-1","-1","1"]"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), f);
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = IntPolynomial::new(vec![-1, 0, 1]).unwrap().to_big();
        let b = IntPolynomial::new(vec![1, 1]).unwrap().to_big();
        let q = big::div_exact(&a, &b).unwrap();
        assert_eq!(IntPolynomial::from_big(&q).unwrap().coeffs(), &[-1, 1]);
        assert!(big::div_exact(&b, &q).is_none());
        let g = big::gcd(&a, &big::mul(&b, &b));
        assert_eq!(IntPolynomial::from_big(&g).unwrap().coeffs(), &[1, 1]);
    }
}
