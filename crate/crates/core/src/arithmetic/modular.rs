pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// The residue x mod m1*m2 with x ≡ a1 mod m1 and x ≡ a2 mod m2, for coprime
/// moduli.
pub fn crt_pair(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    let m = m1 as u128 * m2 as u128;
    assert!(m <= u64::MAX as u128, "crt modulus overflow");
    let inv = inv_mod(m1 % m2, m2).expect("crt moduli must be coprime");
    // x = a1 + m1 * ((a2 - a1) * inv mod m2)
    let diff = (a2 as i128 - a1 as i128).rem_euclid(m2 as i128) as u64;
    let k = mul_mod(diff, inv, m2);
    ((a1 as u128 + m1 as u128 * k as u128) % m) as u64
}

/// Montgomery arithmetic for an odd modulus below 2^32. Used in the hot
/// character-evaluation loops, where thousands of exponentiations share a
/// modulus.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    m: u64,
    m_inv_neg: u32,
    r2: u64,
}

impl Montgomery {
    pub fn new(m: u64) -> Self {
        assert!(m % 2 == 1 && m < (1 << 32) && m > 1);
        // Newton iteration for m^{-1} mod 2^32.
        let mut inv: u32 = 1;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub((m as u32).wrapping_mul(inv)));
        }
        let r = (1u128 << 32) % m as u128;
        let r2 = ((r * r) % m as u128) as u64;
        Montgomery { m, m_inv_neg: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline(always)]
    fn redc(&self, t: u64) -> u64 {
        let u = (t as u32).wrapping_mul(self.m_inv_neg) as u64;
        let x = ((t as u128 + (u * self.m) as u128) >> 32) as u64;
        if x >= self.m {
            x - self.m
        } else {
            x
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc((a % self.m) * self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a)
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a * b)
    }

    /// a^e for `a` in Montgomery form; result in Montgomery form.
    #[inline]
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// a^e mod m for an ordinary residue `a`.
    #[inline]
    pub fn pow_plain(&self, a: u64, e: u64) -> u64 {
        self.from_mont(self.pow(self.to_mont(a), e))
    }
}
