use std::cmp::Ordering;
use std::sync::Arc;

use freeloop_core::symcomb::compositions;
use freeloop_core::{
    groebner, ideal_equal, ideal_intersect, normal_form, track_reduction, Completion, DegreeBound, MonomialOrder,
    Polynomial, PowerProduct, Ring,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed_f10c), failure_persistence: None, ..Config::default() }
}

fn ring() -> Arc<Ring> {
    Ring::lex(&["a", "b", "c"]).unwrap()
}

fn poly(ring: &Arc<Ring>, terms: &[(i64, [u32; 3])]) -> Polynomial {
    Polynomial::from_terms(ring, terms.iter().map(|(c, e)| (BigInt::from(*c), PowerProduct::from_exponents(e.to_vec()))))
}

fn any_poly() -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    prop::collection::vec((-6i64..=6, [0u32..3, 0u32..3, 0u32..3]), 0..5)
}

/// Homogeneous of the given degree in `a, b, c`.
fn homogeneous(degree: u32) -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    let monos: Vec<[u32; 3]> = compositions(3, degree).into_iter().map(|e| [e[0], e[1], e[2]]).collect();
    let most = monos.len().min(3);
    (prop::sample::subsequence(monos, 1..=most), prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 3))
        .prop_map(|(ms, cs)| cs.into_iter().zip(ms).collect())
}

fn bounded(b: u32) -> Completion {
    Completion::truncated(vec![DegreeBound::new(vec![1, 1, 1], b)])
}

fn pp() -> impl Strategy<Value = PowerProduct> {
    [0u32..4, 0u32..4, 0u32..4].prop_map(|e| PowerProduct::from_exponents(e.to_vec()))
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn ring_axioms(x in any_poly(), y in any_poly(), z in any_poly()) {
        let r = ring();
        let (f, g, h) = (poly(&r, &x), poly(&r, &y), poly(&r, &z));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &r.constant(1), f.clone());
    }

    #[test]
    fn results_never_store_zeros(x in any_poly(), y in any_poly()) {
        let r = ring();
        let (f, g) = (poly(&r, &x), poly(&r, &y));
        for p in [&f + &g, &f - &g, &f * &g, f.neg(), f.pow(2), f.scale(&BigInt::from(0))] {
            prop_assert!(p.check_invariants());
        }
    }

    #[test]
    fn orders_are_admissible(a in pp(), b in pp(), c in pp(), ranking in Just(vec![2usize, 0, 1]).prop_shuffle()) {
        let order = MonomialOrder::from_ranking(ranking, 0).unwrap();
        let ab = order.compare(&a, &b).unwrap();
        prop_assert_eq!(ab.reverse(), order.compare(&b, &a).unwrap());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        prop_assert_eq!(order.compare(&a.mul(&c), &b.mul(&c)).unwrap(), ab);
        prop_assert_ne!(order.compare(&PowerProduct::one(3), &a).unwrap(), Ordering::Greater);
        if ab == Ordering::Less && order.compare(&b, &c).unwrap() == Ordering::Less {
            prop_assert_eq!(order.compare(&a, &c).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(x in any_poly(), y in any_poly(), z in any_poly()) {
        let r = ring();
        let (f, g, h) = (poly(&r, &x), poly(&r, &y), poly(&r, &z));
        let s = |p: &Polynomial| p.substitute("b", &h).unwrap();
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
        prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
    }

    #[test]
    fn printing_parses_back(x in any_poly()) {
        let r = ring();
        let f = poly(&r, &x);
        prop_assert_eq!(r.parse(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn normal_form_is_linear_and_canonical(g1 in homogeneous(2), g2 in homogeneous(2), x in homogeneous(3), y in homogeneous(3)) {
        let r = ring();
        let basis = groebner(&[poly(&r, &g1), poly(&r, &g2)], &r, &bounded(5)).unwrap();
        let gens = basis.generators();
        let (f, g) = (poly(&r, &x), poly(&r, &y));
        let (nf, ng) = (normal_form(&f, gens), normal_form(&g, gens));
        prop_assert!(basis.contains(&(&f - &nf)));
        prop_assert_eq!(normal_form(&(&f + &g), gens), normal_form(&(&nf + &ng), gens));
        prop_assert_eq!(normal_form(&nf, gens), nf.clone());
        // coefficients left on divisible monomials lie in [0, |lc|)
        for t in nf.terms() {
            for p in gens.iter().filter(|p| p.lt().divides(&t.pp)) {
                prop_assert!(t.coeff.sign() == num_bigint::Sign::Plus && t.coeff < p.lc().magnitude().clone().into());
            }
        }
    }

    #[test]
    fn reduced_basis_does_not_depend_on_presentation(g1 in homogeneous(2), g2 in homogeneous(2), m in homogeneous(1)) {
        let r = ring();
        let (p, q, s) = (poly(&r, &g1), poly(&r, &g2), poly(&r, &m));
        let one = groebner(&[p.clone(), q.clone()], &r, &bounded(5)).unwrap();
        let other = groebner(&[q.clone(), &p + &q, p.clone(), &s * &p], &r, &bounded(5)).unwrap();
        prop_assert_eq!(one.generators(), other.generators());
    }

    #[test]
    fn reduction_traces_replay(g1 in homogeneous(2), g2 in homogeneous(2), x in homogeneous(4)) {
        let r = ring();
        let basis = groebner(&[poly(&r, &g1), poly(&r, &g2)], &r, &bounded(5)).unwrap();
        let f = poly(&r, &x);
        let trace = track_reduction(&f, basis.generators());
        prop_assert_eq!(trace.replay(basis.generators()), f.clone());
        prop_assert_eq!(&trace.remainder, &normal_form(&f, basis.generators()));
    }

    #[test]
    fn intersection_is_symmetric_and_contained(g1 in homogeneous(2), g2 in homogeneous(2), g3 in homogeneous(1)) {
        let r = ring();
        let a = vec![poly(&r, &g1)];
        let b = vec![poly(&r, &g2), poly(&r, &g3)];
        let opts = bounded(5);
        let ab = ideal_intersect(&a, &b, &r, &opts).unwrap();
        let ba = ideal_intersect(&b, &a, &r, &opts).unwrap();
        prop_assert!(ideal_equal(ab.generators(), ba.generators(), &r, &opts).unwrap());
        let ga = groebner(&a, &r, &opts).unwrap();
        let gb = groebner(&b, &r, &opts).unwrap();
        for p in ab.generators() {
            prop_assert!(ga.contains(p) && gb.contains(p));
        }
        let prod = &a[0] * &b[1];
        prop_assert!(prod.is_zero() || groebner(ab.generators(), &r, &opts).unwrap().contains(&prod));
    }

    #[test]
    fn truncation_agrees_below_the_bound(g1 in homogeneous(2), g2 in homogeneous(2), x in homogeneous(3)) {
        let r = ring();
        let gens = [poly(&r, &g1), poly(&r, &g2)];
        let low = groebner(&gens, &r, &bounded(3)).unwrap();
        let high = groebner(&gens, &r, &bounded(6)).unwrap();
        let f = poly(&r, &x);
        prop_assert_eq!(low.contains(&f), high.contains(&f));
        let kept: Vec<&Polynomial> = high.generators().iter().filter(|p| p.total_degree().unwrap_or(0) <= 3).collect();
        prop_assert_eq!(kept, low.generators().iter().collect::<Vec<_>>());
    }
}
