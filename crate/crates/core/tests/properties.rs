use northcott_core::heights::{mahler_measure, northcott_enumerate, IntPolynomial};
use northcott_core::metrics::{sh_partial_sum, sh_term, totally_split_sum, window_sums, LocalDatum};
use northcott_core::{AbelianField, Caps, Exec};
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn field_strategy() -> impl Strategy<Value = AbelianField> {
    (1u64..300, prop::collection::vec(1u64..300, 0..3)).prop_filter_map("no units", |(m, hs)| {
        let gens: Vec<u64> = hs.into_iter().map(|x| x % m.max(1)).filter(|&x| gcd(x as i64, m as i64) == 1).collect();
        AbelianField::from_subgroup(m, &gens, &Caps::default()).ok()
    })
}

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-6i64..=6, 2..=max_degree + 1)
        .prop_filter_map("degree ≥ 1", |mut v| {
            if *v.last().unwrap() == 0 {
                *v.last_mut().unwrap() = 1;
            }
            IntPolynomial::new(v).ok()
        })
        .prop_filter("degree ≥ 1", |p| p.degree() >= 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn efg_is_the_degree(field in field_strategy(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97, 101])) {
        let d = field.splitting_data(p);
        prop_assert_eq!(d.e * d.f * d.g, field.degree());
    }

    #[test]
    fn mahler_measure_is_multiplicative(f in poly_strategy(3), g in poly_strategy(3)) {
        let fg = f.mul(&g).unwrap();
        let (mf, mg, mfg) = (
            mahler_measure(&f, 1e-9).unwrap(),
            mahler_measure(&g, 1e-9).unwrap(),
            mahler_measure(&fg, 1e-9).unwrap(),
        );
        let want = mf.value * mg.value;
        prop_assert!((mfg.value - want).abs() <= 1e-7 * want.max(1.0), "{} vs {}", mfg.value, want);
        prop_assert!(mfg.value >= 1.0 - 1e-12 || fg.leading().abs() == 0);
    }

    #[test]
    fn local_terms_decrease(p in 2u64..500, e in 1u64..6, f in 1u64..6) {
        let t = |e, f| sh_term(LocalDatum { prime: p, e, f }).unwrap();
        prop_assert!(t(e + 1, f) < t(e, f));
        prop_assert!(t(e, f + 1) < t(e, f));
        prop_assert!(t(e, f) > 0.0);
    }

    #[test]
    fn partial_sums_grow_with_the_cutoff(field in field_strategy(), x in 2u64..2000, dx in 1u64..500) {
        let caps = Caps::default();
        let a = sh_partial_sum(&field, x, &caps, Exec::Sequential).unwrap();
        let b = sh_partial_sum(&field, x + dx, &caps, Exec::Sequential).unwrap();
        prop_assert!(a.monotone_flag && b.monotone_flag);
        prop_assert!(b.value >= a.value);
        prop_assert_eq!(&b.terms[..a.terms.len()], &a.terms[..]);
    }

    /// partial sum ≥ Σ_{split p ≤ X} log p/(p+1) ≥ ½ Σ_{k ≤ N} a_k with X = 2^{N+1}.
    #[test]
    fn chain_of_lower_bounds(field in field_strategy(), n in 0u32..12) {
        let caps = Caps::default();
        let x = 1u64 << (n + 1);
        let full = sh_partial_sum(&field, x, &caps, Exec::Sequential).unwrap().value;
        let split = totally_split_sum(&field, x, &caps, Exec::Sequential).unwrap();
        let windows: f64 = window_sums(&field, 0, n + 1, &caps, Exec::Sequential).unwrap().iter().map(|w| w.value).sum();
        prop_assert!(full >= split);
        prop_assert!(split >= 0.5 * windows - 1e-12);
    }

    #[test]
    fn parallel_and_sequential_sums_agree(field in field_strategy(), x in 2u64..5000) {
        let caps = Caps::default();
        let a = sh_partial_sum(&field, x, &caps, Exec::Sequential).unwrap();
        let b = sh_partial_sum(&field, x, &caps, Exec::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Degree-1 enumeration against a direct count of reduced fractions a/b
    /// with max(|a|, |b|) ≤ e^T.
    #[test]
    fn rational_enumeration_matches_brute_force(t in 0.0f64..3.0) {
        let got = northcott_enumerate(1, t, &Caps::default(), Exec::Parallel).unwrap();
        let bound = t.exp();
        let b = bound.floor() as i64 + 1;
        let mut count = 0;
        for den in 1..=b {
            for num in -b..=b {
                if gcd(num, den) == 1 && (num.abs().max(den) as f64).ln() <= t + 1e-12 {
                    count += 1;
                }
            }
        }
        // zero is 0/1 and has height 0
        prop_assert_eq!(got.len(), count, "T = {}", t);
    }
}
