//! Identities checked on pseudo-random abelian fields of conductor ≤ 1000,
//! each against a brute-force oracle working directly in (Z/m)^*/H.

use northcott_core::fields::norm_relative_discriminant;
use northcott_core::{AbelianField, Caps};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: usize = 120;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Subgroup of (Z/m)^* generated by `gens`, as a membership table.
fn closure(m: u64, gens: &[u64]) -> Vec<bool> {
    let mut inside = vec![false; m as usize];
    inside[(1 % m) as usize] = true;
    let mut frontier = vec![1 % m];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = x * (g % m) % m;
            if !inside[y as usize] {
                inside[y as usize] = true;
                frontier.push(y);
            }
        }
    }
    inside
}

fn size(s: &[bool]) -> u64 {
    s.iter().filter(|&&b| b).count() as u64
}

fn order_mod(u: u64, m: u64, s: &[bool]) -> u64 {
    let mut x = u % m;
    let mut k = 1;
    while !s[x as usize] {
        x = x * u % m;
        k += 1;
    }
    k
}

/// (e, f, g) of p in Q(ζ_m)^H, from inertia and Frobenius in (Z/m)^*.
fn oracle(m: u64, h: &[u64], p: u64) -> (u64, u64, u64) {
    let units: Vec<u64> = (1..m.max(2)).filter(|&u| gcd(u, m) == 1).collect();
    let hs = closure(m, h);
    let n = units.len().max(1) as u64 / size(&hs);
    if m % p != 0 {
        let f = order_mod(p, m, &hs);
        return (1, f, n / f);
    }
    let mut pv = 1;
    while m % (pv * p) == 0 {
        pv *= p;
    }
    let rest = m / pv;
    let inertia: Vec<u64> = units.iter().copied().filter(|u| u % rest == 1 % rest).collect();
    let mut gens = h.to_vec();
    gens.extend(&inertia);
    let hi = closure(m, &gens);
    let e = size(&hi) / size(&hs);
    let frob = (0..m).find(|&u| u % rest == p % rest && u % pv == 1).unwrap();
    let f = order_mod(frob, m, &hi);
    (e, f, n / (e * f))
}

struct Sample {
    m: u64,
    h: Vec<u64>,
    field: AbelianField,
}

fn samples() -> Vec<Sample> {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1e1d);
    let mut out = Vec::new();
    while out.len() < FIELDS {
        let m: u64 = rng.random_range(1..=1000);
        let units: Vec<u64> = (1..m).filter(|&u| gcd(u, m) == 1).collect();
        let k = rng.random_range(0..=2);
        let h: Vec<u64> =
            (0..k).filter(|_| !units.is_empty()).map(|_| units[rng.random_range(0..units.len())]).collect();
        let field = AbelianField::from_subgroup(m, &h, &caps).unwrap();
        assert!(field.conductor().to_u64().unwrap() <= 1000);
        out.push(Sample { m, h, field });
    }
    out
}

#[test]
fn splitting_data_matches_the_unit_group_oracle() {
    for s in samples() {
        let n = s.field.degree();
        for p in (2..=100).filter(|&p| is_prime(p)) {
            let d = s.field.splitting_data(p);
            assert_eq!(d.e * d.f * d.g, n, "m={} H={:?} p={p}", s.m, s.h);
            assert_eq!((d.e, d.f, d.g), oracle(s.m, &s.h, p), "m={} H={:?} p={p}", s.m, s.h);
        }
    }
}

#[test]
fn presentation_is_independent_of_the_modulus() {
    let caps = Caps::default();
    for s in samples().into_iter().take(40) {
        // pull H back along (Z/km)^* → (Z/m)^* for a few k
        for k in [2u64, 3, 5] {
            let big = s.m * k;
            let lifts: Vec<u64> =
                s.h.iter()
                    .map(|&x| (0..k).map(|t| x + t * s.m).find(|&y| gcd(y, big) == 1).unwrap())
                    .chain((1..big).filter(|&u| gcd(u, big) == 1 && u % s.m == 1 % s.m))
                    .collect();
            let g = AbelianField::from_subgroup(big, &lifts, &caps).unwrap();
            assert_eq!(g, s.field, "m={} H={:?} k={k}", s.m, s.h);
            assert_eq!(g.conductor(), s.field.conductor());
            for p in [2u64, 3, 5, 7, 11, 13] {
                assert_eq!(g.splitting_data(p), s.field.splitting_data(p));
            }
        }
    }
}

#[test]
fn relative_discriminant_norms_are_integers() {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in samples() {
        let units: Vec<u64> = (1..s.m).filter(|&u| gcd(u, s.m) == 1).collect();
        let mut bigger = s.h.clone();
        if !units.is_empty() {
            bigger.push(units[rng.random_range(0..units.len())]);
        }
        let k = AbelianField::from_subgroup(s.m, &bigger, &caps).unwrap();
        assert!(s.field.contains_field(&k));
        let nrm = norm_relative_discriminant(&k, &s.field).unwrap();
        // |Δ_M| = |Δ_K|^[M:K] · N(D_{M/K})
        let rel = s.field.degree() / k.degree();
        assert_eq!(k.discriminant().pow(rel).mul(&nrm), s.field.discriminant());
    }
}

#[test]
fn discriminants_multiply_for_coprime_disjoint_pairs() {
    let caps = Caps::default();
    let all = samples();
    let mut checked = 0;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let (da, db) = (a.field.discriminant(), b.field.discriminant());
            if !da.is_coprime(&db) || !a.field.is_linearly_disjoint(&b.field) {
                continue;
            }
            let ab = a.field.compositum(&b.field, &caps).unwrap();
            if ab.degree() > 2000 {
                continue;
            }
            assert_eq!(ab.degree(), a.field.degree() * b.field.degree());
            assert_eq!(ab.discriminant(), da.pow(b.field.degree()).mul(&db.pow(a.field.degree())));
            checked += 1;
            if checked >= 150 {
                return;
            }
        }
    }
    assert!(checked >= 100, "only {checked} pairs");
}

#[test]
fn cyclotomic_discriminants() {
    let caps = Caps::default();
    for p in [3u64, 5, 7, 11, 13] {
        let f = AbelianField::cyclotomic(p, &caps).unwrap();
        assert_eq!(f.discriminant().to_u64(), Some(p.pow(p as u32 - 2)), "p={p}");
    }
}
