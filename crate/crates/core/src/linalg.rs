//! Dense linear algebra over Z/p and Z/p^a for the annihilator systems of the
//! split-cyclic construction.
//!
//! The large systems (tens of thousands of Frobenius constraints) are over a
//! small prime field. They are stored as bytes and eliminated in panels:
//! each panel's pivot rows are applied to every trailing row independently,
//! so the trailing update is data-parallel and its result does not depend
//! on scheduling. Reductions mod p are deferred while the byte entries cannot
//! overflow.

use crate::arithmetic::inv_mod;
use crate::Exec;

/// Bytes of precomputed pivot multiples kept per panel.
const PANEL_TABLE_BYTES: usize = 32 << 20;

#[derive(Clone, Copy)]
struct ByteReducer {
    p: u16,
    magic: u16,
}

impl ByteReducer {
    fn new(p: u8) -> Self {
        let p = p as u16;
        // ⌈2^16/p⌉ gives exact quotients for every byte value when p < 257
        let magic = (1u32 << 16).div_ceil(p as u32) as u16;
        ByteReducer { p, magic }
    }

    #[inline(always)]
    fn reduce(self, x: u8) -> u8 {
        let q = ((x as u32 * self.magic as u32) >> 16) as u16;
        (x as u16 - q * self.p) as u8
    }

    fn reduce_slice(self, xs: &mut [u8]) {
        for x in xs {
            *x = self.reduce(*x);
        }
    }
}

#[inline(always)]
fn add_bytes_generic(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.wrapping_add(*s);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn add_bytes_avx2(dst: &mut [u8], src: &[u8]) {
    add_bytes_generic(dst, src)
}

#[inline]
fn add_bytes(dst: &mut [u8], src: &[u8]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            unsafe { add_bytes_avx2(dst, src) };
            return;
        }
    }
    add_bytes_generic(dst, src)
}

/// Pivot rows in echelon form: each row is normalised to 1 at its pivot
/// column and vanishes at the pivot columns of all earlier rows.
struct Echelon<T> {
    pivots: Vec<(usize, Vec<T>)>,
    ncols: usize,
}

fn echelon_bytes(mut rows: Vec<Vec<u8>>, ncols: usize, p: u8, exec: Exec) -> Echelon<u8> {
    assert!(p >= 2);
    let red = ByteReducer::new(p);
    let pm = p as usize - 1;
    // adds of values ≤ p−1 allowed on top of a reduced entry
    let lazy_limit = ((255 - pm) / pm.max(1)).max(1);
    let panel = (PANEL_TABLE_BYTES / (pm.max(1) * ncols.max(1))).clamp(1, 64);

    for r in rows.iter_mut() {
        red.reduce_slice(r);
    }
    let mut pivots: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut cursor = 0;
    while cursor < rows.len() {
        let end = (cursor + panel).min(rows.len());
        let mut local: Vec<(usize, Vec<u8>)> = Vec::new();
        for idx in cursor..end {
            let mut r = std::mem::take(&mut rows[idx]);
            for (c, piv) in &local {
                let f = r[*c];
                if f != 0 {
                    let m = p - f;
                    for (x, y) in r.iter_mut().zip(piv) {
                        *x = ((*x as u16 + m as u16 * *y as u16) % p as u16) as u8;
                    }
                }
            }
            if let Some(c) = r.iter().position(|&x| x != 0) {
                let inv = inv_mod(r[c] as u64, p as u64).unwrap() as u16;
                for x in r.iter_mut() {
                    *x = ((*x as u16 * inv) % p as u16) as u8;
                }
                local.push((c, r));
            }
        }
        if local.is_empty() {
            cursor = end;
            continue;
        }
        let start_col = local.iter().map(|(c, _)| *c).min().unwrap();
        // multiples[k][m-1] = m·pivot_k (reduced), restricted to start_col..
        let multiples: Vec<Vec<Vec<u8>>> = local
            .iter()
            .map(|(_, piv)| {
                (1..p)
                    .map(|m| piv[start_col..].iter().map(|&y| ((m as u16 * y as u16) % p as u16) as u8).collect())
                    .collect()
            })
            .collect();
        let cols: Vec<usize> = local.iter().map(|(c, _)| *c).collect();
        exec.for_each_mut(&mut rows[end..], |r| {
            let mut pending = 0usize;
            for (k, &c) in cols.iter().enumerate() {
                let f = red.reduce(r[c]);
                r[c] = f;
                if f != 0 {
                    if pending >= lazy_limit {
                        red.reduce_slice(&mut r[start_col..]);
                        pending = 0;
                    }
                    add_bytes(&mut r[start_col..], &multiples[k][(p - f) as usize - 1]);
                    pending += 1;
                }
            }
            red.reduce_slice(&mut r[start_col..]);
        });
        pivots.extend(local);
        cursor = end;
    }
    Echelon { pivots, ncols }
}

fn echelon_wide(rows: Vec<Vec<u64>>, ncols: usize, p: u64, exec: Exec) -> Echelon<u64> {
    let mut rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for idx in 0..rows.len() {
        let mut r = std::mem::take(&mut rows[idx]);
        let Some(c) = r.iter().position(|&x| x != 0) else { continue };
        let inv = inv_mod(r[c], p).unwrap();
        for x in r.iter_mut() {
            *x = crate::arithmetic::mul_mod(*x, inv, p);
        }
        exec.for_each_mut(&mut rows[idx + 1..], |s| {
            let f = s[c];
            if f != 0 {
                let m = p - f;
                for (x, y) in s[c..].iter_mut().zip(&r[c..]) {
                    *x = ((*x as u128 + m as u128 * *y as u128) % p as u128) as u64;
                }
            }
        });
        pivots.push((c, r));
    }
    Echelon { pivots, ncols }
}

impl<T: Copy + Into<u64>> Echelon<T> {
    fn kernel_basis(&self, p: u64) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.ncols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut x = vec![0u64; self.ncols];
            x[free] = 1;
            for (c, row) in self.pivots.iter().rev() {
                let mut s: u128 = 0;
                for (j, &a) in row.iter().enumerate() {
                    let a: u64 = a.into();
                    if j != *c && a != 0 && x[j] != 0 {
                        s += a as u128 * x[j] as u128;
                    }
                }
                x[*c] = ((p as u128 - s % p as u128) % p as u128) as u64;
            }
            basis.push(x);
        }
        basis
    }
}

/// Reduced row echelon form of a small matrix over Z/p.
fn rref(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p).unwrap();
        for x in m[row].iter_mut() {
            *x = crate::arithmetic::mul_mod(*x, inv, p);
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                let pr = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x = ((*x as u128 + (p - f) as u128 * y as u128) % p as u128) as u64;
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

/// Kernel of the matrix with the given rows over Z/p (p prime), as a basis.
pub fn kernel_basis_mod_prime(rows: Vec<Vec<u64>>, ncols: usize, p: u64, exec: Exec) -> Vec<Vec<u64>> {
    if p < 256 {
        let bytes = rows.into_iter().map(|r| r.into_iter().map(|x| (x % p) as u8).collect()).collect();
        echelon_bytes(bytes, ncols, p as u8, exec).kernel_basis(p)
    } else {
        echelon_wide(rows, ncols, p, exec).kernel_basis(p)
    }
}

/// The lexicographically least nonzero vector x with A·x = 0 over Z/p,
/// where A has byte entries (p < 256).
pub fn lex_least_kernel_vector_bytes(rows: Vec<Vec<u8>>, ncols: usize, p: u8, exec: Exec) -> Option<Vec<u64>> {
    let basis = echelon_bytes(rows, ncols, p, exec).kernel_basis(p as u64);
    lex_least_in_span(basis, p as u64)
}

/// Same for arbitrary primes.
pub fn lex_least_kernel_vector(rows: Vec<Vec<u64>>, ncols: usize, p: u64, exec: Exec) -> Option<Vec<u64>> {
    lex_least_in_span(kernel_basis_mod_prime(rows, ncols, p, exec), p)
}

fn lex_least_in_span(basis: Vec<Vec<u64>>, p: u64) -> Option<Vec<u64>> {
    // In reduced echelon form the least nonzero vector is the last row: it
    // has the latest possible leading position and leading coefficient 1.
    rref(basis, p).pop()
}

fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// A vector x over Z/p^a with A·x = 0 and some coordinate a unit (so the
/// functional y ↦ Σ x_j y_j is onto Z/p^a). Found by a Smith-style
/// elimination with tracked column operations: any column of the transform
/// matching a zero column of the diagonal form works; the first one is
/// taken and scaled so its first unit coordinate is 1. Requires more
/// columns than the rank.
pub fn unimodular_kernel_vector(rows: &[Vec<u64>], ncols: usize, p: u64, a: u32) -> Option<Vec<u64>> {
    let q = p.pow(a);
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    let mut v: Vec<Vec<u64>> = (0..ncols).map(|i| (0..ncols).map(|j| u64::from(i == j)).collect()).collect();
    let mulq = |x: u64, y: u64| ((x as u128 * y as u128) % q as u128) as u64;
    let nrows = m.len();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                let val = valuation(m[i][j], p, a);
                if val < a && best.is_none_or(|(b, _, _)| val < b) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, bi, bj)) = best else { break };
        m.swap(t, bi);
        for r in m.iter_mut() {
            r.swap(t, bj);
        }
        for r in v.iter_mut() {
            r.swap(t, bj);
        }
        let pv = p.pow(val);
        let unit = m[t][t] / pv;
        let uinv = inv_mod(unit % q, q).unwrap();
        for x in m[t].iter_mut() {
            *x = mulq(*x, uinv);
        }
        for i in t + 1..nrows {
            if m[i][t] != 0 {
                let f = m[i][t] / pv;
                let pr = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x = (*x + q - mulq(f, y)) % q;
                }
            }
        }
        for j in t + 1..ncols {
            if m[t][j] != 0 {
                let f = m[t][j] / pv;
                for r in m.iter_mut() {
                    r[j] = (r[j] + q - mulq(f, r[t])) % q;
                }
                for r in v.iter_mut() {
                    r[j] = (r[j] + q - mulq(f, r[t])) % q;
                }
            }
        }
        t += 1;
    }
    if t >= ncols {
        return None;
    }
    let mut x: Vec<u64> = v.iter().map(|r| r[t]).collect();
    let lead = x.iter().position(|&c| c % p != 0)?;
    let inv = inv_mod(x[lead], q).unwrap();
    for c in x.iter_mut() {
        *c = mulq(*c, inv);
    }
    Some(x)
}

/// A·x over Z/q.
pub fn mat_vec_mod<T: Copy + Into<u64>>(rows: &[Vec<T>], x: &[u64], q: u64) -> Vec<u64> {
    rows.iter()
        .map(|r| {
            let s: u128 = r.iter().zip(x).map(|(&a, &b)| a.into() as u128 * b as u128).sum();
            (s % q as u128) as u64
        })
        .collect()
}
