//! Properties of assembled results over random admissible parameters.

use cyclosrg::arith;
use cyclosrg::critgroup::{coprime_part, expected_order, formula_p_part};
use cyclosrg::{critical_group, Bounds, Method, Params};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Admissible `(p, ℓ, t)` with `q` small enough for the enumeration bound
/// when `ℓ > 3`.
fn triple() -> impl Strategy<Value = Params> {
    let ell3 = (prop::sample::select(vec![2u64, 5, 11, 17, 23, 29, 41]), 1u32..12);
    let other = prop::sample::select(vec![(2u64, 5u64, 2u32), (2, 5, 4), (3, 5, 1), (3, 5, 2), (2, 11, 1), (2, 13, 1), (3, 7, 1), (5, 7, 1), (2, 19, 1)]);
    prop_oneof![
        ell3.prop_filter_map("connected", |(p, t)| Params::new(p, 3, t).ok()),
        other.prop_map(|(p, ell, t)| Params::new(p, ell, t).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_matches_kirchhoff(params in triple()) {
        let r = critical_group(&params, Method::Formula, &Bounds::default()).unwrap();
        prop_assert_eq!(r.group.free_rank, 1);
        prop_assert_eq!(r.group.order_factorization(), expected_order(&params).unwrap());
        // the p-part and the coprime part multiply to the full order
        let coprime = coprime_part(&params).group().order_factorization();
        let mut joined = coprime.clone();
        joined.insert(BigUint::from(params.p), r.p_part.weighted());
        joined.retain(|_, e| !e.is_zero());
        prop_assert_eq!(joined, r.order.clone());
        prop_assert!(!coprime.contains_key(&BigUint::from(params.p)));
    }

    #[test]
    fn multiplicities_are_palindromic_off_the_middle(params in triple()) {
        let m = formula_p_part(&params, &Bounds::default()).unwrap();
        let top = params.vp_uv();
        let h = params.half_degree();
        prop_assert_eq!(m.count(), &params.q - 1u32);
        prop_assert_eq!(m.get(top) + 2u32, m.get(0));
        for j in 1..h {
            prop_assert_eq!(m.get(j), m.get(top - j));
        }
        prop_assert!(m.exps.keys().all(|&j| j <= top));
    }

    #[test]
    fn small_cases_agree_with_brute_force(params in triple().prop_filter("q <= 128", |p| p.q <= BigUint::from(128u32))) {
        let r = critical_group(&params, Method::Both, &Bounds::default());
        prop_assert!(r.is_ok(), "{}: {:?}", params, r.err());
    }
}

#[test]
fn invariant_factors_form_a_divisor_chain() {
    let params = Params::new(5, 3, 2).unwrap();
    let r = critical_group(&params, Method::Formula, &Bounds::default()).unwrap();
    let inv = r.group.invariant_factors().unwrap();
    assert!(inv.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    let product = inv.iter().fold(BigUint::one(), |acc, x| acc * x);
    let mut want = BigUint::one();
    for (prime, e) in &r.order {
        want *= prime.pow(u32::try_from(e.clone()).unwrap());
    }
    assert_eq!(product, want);
    // the largest invariant factor divides uv
    let uv = &params.u * &params.v;
    assert!((&uv % inv.last().unwrap()).is_zero());
    assert_eq!(arith::valuation(inv.last().unwrap(), 5), params.vp_uv());
}
