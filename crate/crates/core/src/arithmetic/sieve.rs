use serde::{Deserialize, Serialize};

use super::primality::is_prime;
use crate::{Caps, Error, Exec, Result};

const SEGMENT: u64 = 1 << 18;

/// Plain Eratosthenes over odd numbers; used for base primes and small bounds.
fn small_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let half = (n as usize - 1) / 2; // index i represents 2i+1
    let mut comp = vec![false; half + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !comp[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j <= half {
                comp[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend((1..=half).filter(|&i| !comp[i]).map(|i| 2 * i as u64 + 1));
    out
}

/// Primes in [lo, hi) given every base prime up to sqrt(hi).
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    if lo <= 2 && hi > 2 {
        out.push(2);
    }
    // odd numbers in [lo, hi)
    let first_odd = if lo % 2 == 0 { lo + 1 } else { lo }.max(3);
    if first_odd >= hi {
        return out;
    }
    let len = (hi - first_odd).div_ceil(2);
    let mut comp = vec![false; len as usize];
    for &p in base.iter().skip(1) {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first_odd.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut j = (start - first_odd) / 2;
        while j < len {
            comp[j as usize] = true;
            j += p;
        }
    }
    out.extend(comp.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| first_odd + 2 * i as u64));
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes p with lo ≤ p < hi, ascending. Segments are sieved
/// independently, so the parallel result is identical to the sequential one.
pub fn primes_in_range(lo: u64, hi: u64, exec: Exec) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let base = small_sieve(isqrt(hi) + 1);
    let nseg = (hi - lo).div_ceil(SEGMENT) as usize;
    let parts = exec.map_range(0..nseg, |s| {
        let a = lo + s as u64 * SEGMENT;
        let b = (a + SEGMENT).min(hi);
        sieve_segment(a, b, &base)
    });
    parts.concat()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 1 << 22 {
        small_sieve(n)
    } else {
        primes_in_range(0, n + 1, Exec::default())
    }
}

/// Ascending primes from `start`, produced segment by segment, never passing
/// `cap`.
pub struct PrimeStream {
    next_lo: u64,
    cap: u64,
    buf: std::vec::IntoIter<u64>,
    exec: Exec,
    exhausted: bool,
}

impl PrimeStream {
    pub fn new(start: u64, cap: u64, exec: Exec) -> Self {
        PrimeStream { next_lo: start, cap, buf: Vec::new().into_iter(), exec, exhausted: false }
    }

    /// True once the stream stopped because it reached the cap.
    pub fn hit_cap(&self) -> bool {
        self.exhausted
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(p) = self.buf.next() {
                return Some(p);
            }
            if self.next_lo > self.cap {
                self.exhausted = true;
                return None;
            }
            // Chunks grow with position so the per-chunk base sieve stays cheap.
            let width = (SEGMENT * 8).max(self.next_lo / 8);
            let hi = self.next_lo.saturating_add(width).min(self.cap.saturating_add(1));
            self.buf = primes_in_range(self.next_lo, hi, self.exec).into_iter();
            self.next_lo = hi;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct APCount {
    pub bound: f64,
    pub modulus: u64,
    pub count: u64,
}

/// Exact π(x, p, 1): the number of primes ℓ ≤ x with ℓ ≡ 1 mod p.
pub fn primes_in_ap_count(x: f64, p: u64, caps: &Caps) -> Result<APCount> {
    if !(x >= 0.0) {
        return Err(Error::pre("bound must be a nonnegative real"));
    }
    if !is_prime(p) {
        return Err(Error::pre(format!("{p} is not prime")));
    }
    if x > caps.sieve as f64 {
        return Err(Error::limit(format!("prime count up to {x}"), caps.sieve));
    }
    let n = x.floor() as u64;
    let count = if p >= 1000 {
        // Sparse progression: test the candidates directly.
        (1..).map(|t| t * p + 1).take_while(|&l| l <= n).filter(|&l| is_prime(l)).count() as u64
    } else {
        primes_in_range(0, n + 1, Exec::default()).iter().filter(|&&l| l % p == 1).count() as u64
    };
    Ok(APCount { bound: x, modulus: p, count })
}

/// The `k` smallest primes ℓ ≡ 1 mod p outside `exclude ∪ {p}`, all ≤ cap.
pub fn find_primes_in_ap(p: u64, exclude: &[u64], k: usize, cap: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::pre("count must be at least 1"));
    }
    let mut excl: Vec<u64> = exclude.to_vec();
    excl.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut l = p + 1;
    while out.len() < k {
        if l > cap {
            return Err(Error::limit(format!("only {} of {k} primes ≡ 1 mod {p} found", out.len()), cap));
        }
        if l != p && excl.binary_search(&l).is_err() && is_prime(l) {
            out.push(l);
        }
        l += p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_agrees_with_primality() {
        let expect: Vec<u64> = (0..100_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(small_sieve(99_999), expect);
        assert_eq!(primes_in_range(0, 100_000, Exec::Sequential), expect);
        assert_eq!(primes_in_range(0, 100_000, Exec::Parallel), expect);
        let mid: Vec<u64> = (999_000..1_300_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes_in_range(999_000, 1_300_000, Exec::Parallel), mid);
        assert_eq!(primes_in_range(2, 3, Exec::Sequential), vec![2]);
        assert_eq!(primes_in_range(3, 4, Exec::Sequential), vec![3]);
    }

    #[test]
    fn stream_crosses_chunks() {
        let s: Vec<u64> = PrimeStream::new(100, 5_000_000, Exec::Parallel).collect();
        let expect: Vec<u64> = primes_in_range(100, 5_000_001, Exec::Sequential);
        assert_eq!(s, expect);
    }

    #[test]
    fn ap_examples() {
        let caps = Caps::default();
        assert_eq!(primes_in_ap_count(10.0, 5, &caps).unwrap().count, 0);
        assert_eq!(primes_in_ap_count(100.0, 3, &caps).unwrap().count, 11);
        assert_eq!(primes_in_ap_count(2.0, 3, &caps).unwrap().count, 0);
        assert!(matches!(primes_in_ap_count(1e12, 3, &caps), Err(Error::ResourceLimit { .. })));
        assert_eq!(find_primes_in_ap(3, &[2], 2, 1000).unwrap(), vec![7, 13]);
        assert_eq!(find_primes_in_ap(5, &[], 1, 1000).unwrap(), vec![11]);
        assert_eq!(find_primes_in_ap(3, &[7], 1, 1000).unwrap(), vec![13]);
        assert!(matches!(find_primes_in_ap(3, &[], 5, 20), Err(Error::ResourceLimit { .. })));
    }
}
