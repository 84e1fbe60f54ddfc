use serde::{Deserialize, Serialize};

use super::modular::{gcd, mul_mod};
use super::primality::is_prime;

const DEFAULT_TRIAL_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn factorize(n: u64) -> Factorization {
    factorize_with_cap(n, DEFAULT_TRIAL_CAP)
}

/// Trial division over a 2·3·5 wheel up to `trial_cap`, then a deterministic
/// primality test on the cofactor. A composite cofactor left over (only
/// possible when `trial_cap` is below the cube root of n) is split with
/// Brent's rho using a fixed sequence of seeds, so the result stays total and
/// deterministic.
pub fn factorize_with_cap(n: u64, trial_cap: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let take = |m: &mut u64, p: u64, out: &mut Vec<(u64, u32)>| {
        if *m % p == 0 {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        take(&mut m, p, &mut out);
    }
    const GAPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d <= trial_cap && d.saturating_mul(d) <= m {
        take(&mut m, d, &mut out);
        d += GAPS[i];
        i = (i + 1) % 8;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_cofactor(m, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    Factorization { value: n, factors: out }
}

fn split_cofactor(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let d = rho(m);
    split_cofactor(d, out);
    split_cofactor(m / d, out);
}

fn rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = gcd(x.abs_diff(y), n);
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).factors.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// All positive divisors of n in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n).factors {
        let cur = ds.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}
