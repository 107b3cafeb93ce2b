use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use ramlab::breakcalc::{
    custom_extension_report, direct_different, herbrand_different, lower_breaks,
    maximal_extension_report, psi_from_steps, upper_breaks, BreakProfile, BreakStep, FieldShape,
};

fn shape_strategy() -> impl Strategy<Value = FieldShape> {
    (
        prop::sample::select(vec![2u64, 3, 5, 7]),
        1u64..=3,
        1u32..=3,
    )
        .prop_map(|(p, e1, f)| FieldShape::new(p, e1, f).unwrap())
}

/// Admissible profile: a nonempty subset of the allowed breaks with
/// dimensions up to `f` (and 1 at the top break).
fn profile_strategy() -> impl Strategy<Value = (FieldShape, BreakProfile)> {
    shape_strategy().prop_flat_map(|shape| {
        let top = shape.top();
        let slots = prop::collection::vec((any::<bool>(), 1..=shape.f()), top as usize);
        (Just(shape), slots, any::<bool>()).prop_filter_map(
            "empty profile",
            |(shape, slots, unram)| {
                let p = shape.p();
                let steps: Vec<BreakStep> = slots
                    .iter()
                    .enumerate()
                    .map(|(i, &(keep, d))| (i as u64 + 1, keep, d))
                    .filter(|&(u, keep, _)| keep && (u % p != 0 || u == shape.top()))
                    .map(|(u, _, d)| BreakStep::new(u, if u == shape.top() { 1 } else { d }))
                    .collect();
                (!steps.is_empty()).then(|| (shape, BreakProfile::new(unram, steps)))
            },
        )
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (0i64..2000, 1i64..50).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_profiles_are_admissible((shape, profile) in profile_strategy()) {
        prop_assert!(profile.validate(&shape).is_ok());
    }

    #[test]
    fn phi_inverts_psi((shape, profile) in profile_strategy(), w in rational()) {
        let psi = psi_from_steps(shape.p(), &profile.steps).unwrap();
        let phi = psi.inverse();
        prop_assert_eq!(phi.eval(&psi.eval(&w)), w.clone());
        prop_assert_eq!(psi.eval(&phi.eval(&w)), w);
        prop_assert!(psi.slopes_strictly_increasing());
        prop_assert_eq!(psi.value_at_zero(), BigRational::zero());
    }

    #[test]
    fn psi_is_monotone((shape, profile) in profile_strategy(), a in rational(), b in rational()) {
        let psi = psi_from_steps(shape.p(), &profile.steps).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(psi.eval(&lo) <= psi.eval(&hi));
        prop_assert!(psi.eval(&hi) - psi.eval(&lo) >= hi - lo);
    }

    #[test]
    fn herbrand_matches_direct_sum((shape, profile) in profile_strategy()) {
        let p = shape.p();
        prop_assert_eq!(
            herbrand_different(p, &profile.steps).unwrap(),
            direct_different(p, &profile.steps).unwrap()
        );
    }

    #[test]
    fn report_is_coherent((shape, profile) in profile_strategy()) {
        let r = custom_extension_report(&shape, &profile).unwrap();
        let p = BigInt::from(shape.p());
        let dim = profile.ramified_dimension();
        prop_assert_eq!(&r.inertia_order, &num_traits::pow(p.clone(), dim as usize));
        let degree = if profile.has_unramified_part { &r.inertia_order * &p } else { r.inertia_order.clone() };
        prop_assert_eq!(&r.degree, &degree);
        prop_assert_eq!(&r.discriminant_valuation, &(&r.different_valuation * r.residual_degree));
        let lower = r.positive_lower_breaks();
        prop_assert!(lower.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(lower.iter().all(|b| b >= &BigInt::one()));
        for (u, l) in r.positive_upper_breaks().iter().zip(lower) {
            prop_assert!(BigInt::from(*u) <= *l);
        }
    }

    #[test]
    fn maximal_breaks_match_formula(shape in shape_strategy()) {
        let r = maximal_extension_report(&shape).unwrap();
        let upper: Vec<i64> = upper_breaks(&shape).iter().map(|&u| u as i64).collect();
        prop_assert_eq!(r.positive_upper_breaks(), upper.as_slice());
        let lower = lower_breaks(&shape);
        prop_assert_eq!(r.positive_lower_breaks(), lower.as_slice());
    }
}
