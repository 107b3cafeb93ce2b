use std::sync::Arc;

use proptest::prelude::*;
use ramlab::asfield::{reduce_class, solve_wp_in_maximal_ideal, FqField, LaurentSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = Arc<FqField>> {
    prop::sample::select(vec![
        (2u64, 1u32),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
        (5, 1),
        (5, 2),
    ])
    .prop_map(|(p, f)| FqField::new(p, f).unwrap())
}

fn series(k: &Arc<FqField>, seed: u64, low: i64, precision: i64) -> LaurentSeries {
    LaurentSeries::random(k, &mut ChaCha8Rng::seed_from_u64(seed), low, precision)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn field_axioms(k in field(), a in any::<u64>(), b in any::<u64>()) {
        let q = k.order();
        let x = k.elements().nth((a % q) as usize).unwrap();
        let y = k.elements().nth((b % q) as usize).unwrap();
        prop_assert_eq!(k.frob(&k.mul(&x, &y)), k.mul(&k.frob(&x), &k.frob(&y)));
        prop_assert_eq!(k.frob(&k.add(&x, &y)), k.add(&k.frob(&x), &k.frob(&y)));
        prop_assert_eq!(k.pth_root(&k.frob(&x)), x.clone());
        prop_assert_eq!((k.trace(&x) + k.trace(&y)) % k.p(), k.trace(&k.add(&x, &y)));
        if !x.is_zero() {
            prop_assert_eq!(k.mul(&x, &k.inv(&x).unwrap()), k.one());
        }
    }

    #[test]
    fn wp_is_additive(k in field(), s1 in any::<u64>(), s2 in any::<u64>(), low in -6i64..4) {
        let a = series(&k, s1, low, 8);
        let b = series(&k, s2, low, 8);
        let lhs = a.add(&b).wp();
        let rhs = a.wp().add(&b.wp());
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn multiplication_commutes_and_distributes(k in field(), s in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let a = LaurentSeries::random(&k, &mut rng, -3, 6);
        let b = LaurentSeries::random(&k, &mut rng, -2, 6);
        let c = LaurentSeries::random(&k, &mut rng, 0, 6);
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn solver_roundtrip(k in field(), s in any::<u64>(), precision in 2i64..30) {
        let a = series(&k, s, 1, precision);
        let x = solve_wp_in_maximal_ideal(&a).unwrap();
        prop_assert!(x.wp().agrees_with(&a));
        prop_assert!(x.valuation().is_none_or(|v| v >= 1));
    }

    #[test]
    fn reduction_ignores_wp_shifts(k in field(), s in any::<u64>(), t in any::<u64>(), depth in 0i64..20) {
        let a = series(&k, s, -depth, 1);
        let r = series(&k, t, -depth / 2, 1);
        let c = reduce_class(&a).unwrap();
        prop_assert_eq!(&reduce_class(&a.add(&r.wp())).unwrap(), &c);
        prop_assert_eq!(&reduce_class(&c.representative(1)).unwrap(), &c);
        prop_assert!(c.level() as i64 <= depth);
        prop_assert!(c.poles().keys().all(|&e| e < 0 && !((-e) as u64).is_multiple_of(k.p())));
    }
}
