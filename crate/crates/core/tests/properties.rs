//! Randomized structural invariants.

use proptest::prelude::*;

use sl2ext_core::ext_engine::{ExtEngine, ExtVector, FormalModule};
use sl2ext_core::grothendieck::Characters;
use sl2ext_core::specseq::{
    page, parse_bicomplex, random_bicomplex, write_bicomplex, GeneratorMode, DEFAULT_MODULUS,
};
use sl2ext_core::weights::{bar, decompose, linked, weight, weyl_dimension, WeightContext};
use sl2ext_core::Weight;

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_roundtrips(p in primes(), lam in 0u64..10_000) {
        let ctx = WeightContext::new(p).unwrap();
        let d = decompose(&weight(lam), &ctx).unwrap();
        prop_assert!(d.i < p);
        prop_assert_eq!(&d.a * p + d.i, weight(lam));
    }

    #[test]
    fn bar_is_an_involution(p in primes(), i in 0u64..11) {
        let ctx = WeightContext::new(p).unwrap();
        prop_assume!(i <= p.saturating_sub(2));
        let b = bar(i, &ctx).unwrap();
        prop_assert!(b <= p - 2);
        prop_assert_eq!(bar(b, &ctx).unwrap(), i);
    }

    #[test]
    fn linkage_is_reflexive_and_symmetric(p in primes(), a in 0u64..300, b in 0u64..300) {
        let ctx = WeightContext::new(p).unwrap();
        prop_assert!(linked(&weight(a), &weight(a), &ctx).unwrap());
        prop_assert_eq!(
            linked(&weight(a), &weight(b), &ctx).unwrap(),
            linked(&weight(b), &weight(a), &ctx).unwrap()
        );
    }

    #[test]
    fn decomposition_rows_invert(p in primes(), lam in 0u64..120) {
        let ctx = WeightContext::new(p).unwrap();
        let chars = Characters::new(ctx);
        // [Delta(lam)] = sum_n d_{lam,n} [L(n)] and [L(n)] = sum_m c_{n,m}
        // [Delta(m)] must compose to the identity row.
        let direct = chars.weyl_in_simples(&weight(lam)).unwrap();
        let mut total: std::collections::BTreeMap<Weight, i64> = Default::default();
        for (n, &d) in direct.iter() {
            let inverse = chars.simple_in_weyls(n).unwrap();
            for (m, &c) in inverse.iter() {
                *total.entry(m.clone()).or_insert(0) += d * c;
            }
        }
        total.retain(|_, v| *v != 0);
        prop_assert_eq!(total.len(), 1);
        prop_assert_eq!(total.get(&weight(lam)).copied(), Some(1));
    }

    #[test]
    fn simple_dimensions_fill_the_weyl_module(p in primes(), lam in 0u64..120) {
        let ctx = WeightContext::new(p).unwrap();
        let chars = Characters::new(ctx);
        let row = chars.weyl_in_simples(&weight(lam)).unwrap();
        let mut sum = Weight::from(0u64);
        for (n, &mult) in row.iter() {
            prop_assert!(mult > 0);
            sum += chars.simple_dimension(n).unwrap() * mult;
        }
        prop_assert_eq!(sum, weyl_dimension(&weight(lam)));
    }

    #[test]
    fn duality_swaps_arguments(p in prop::sample::select(vec![2u64, 3, 5]),
                               a in 0u64..60, b in 0u64..60) {
        let e = ExtEngine::new(WeightContext::new(p).unwrap());
        let pairs = [
            (FormalModule::weyl(b), FormalModule::weyl(a)),
            (FormalModule::weyl(b), FormalModule::simple(a)),
            (FormalModule::tilting(b), FormalModule::weyl(a)),
        ];
        for (src, tgt) in pairs {
            let v = e.query(&src, &tgt, None).unwrap();
            let w = e.query(&tgt.dual(), &src.dual(), None).unwrap();
            prop_assert_eq!(v.dims(), w.dims());
        }
    }

    #[test]
    fn truncation_never_invents_dimensions(dims in prop::collection::vec(0u64..5, 0..8),
                                           cut in 0usize..10) {
        let v = ExtVector::from_dims(dims);
        let t = v.truncated(cut);
        for q in 0..=cut {
            prop_assert_eq!(t.get(q), v.get(q));
        }
        prop_assert!(t.dims().len() <= cut + 1);
    }

    #[test]
    fn generated_bicomplexes_validate_and_serialize(
        mode in prop::sample::select(vec![
            GeneratorMode::AllVerticalZero,
            GeneratorMode::AllVerticalInjective,
            GeneratorMode::Generic,
        ]),
        seed in 0u64..10_000,
    ) {
        let b = random_bicomplex(mode, 4, 3, 3, DEFAULT_MODULUS, seed).unwrap();
        prop_assert!(b.validate().is_empty());
        let text = write_bicomplex(&b);
        let back = parse_bicomplex(&text).unwrap();
        prop_assert_eq!(write_bicomplex(&back), text);
    }

    #[test]
    fn stable_page_carries_total_homology(seed in 0u64..10_000) {
        let b = random_bicomplex(GeneratorMode::Generic, 3, 3, 3, DEFAULT_MODULUS, seed)
            .unwrap();
        let stable = page(&b, 7);
        for (k, &hk) in b.total_homology().iter().enumerate() {
            prop_assert_eq!(stable.diagonal_sum(k), hk);
        }
    }
}
