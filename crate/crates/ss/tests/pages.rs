use freeloop_ss::engine::{assemble_final_page, dd_violations, init_e2, Bidegree, E2Page};
use freeloop_ss::route::row_kernel;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use std::sync::OnceLock;

fn rank_two() -> &'static E2Page {
    static PAGE: OnceLock<E2Page> = OnceLock::new();
    PAGE.get_or_init(|| init_e2(2, 12).unwrap())
}

fn keys() -> Vec<Bidegree> {
    rank_two().cells().keys().copied().filter(|(p, q)| p + q <= 10).collect()
}

fn cell_vector() -> impl Strategy<Value = (Bidegree, Vec<i64>)> {
    prop::sample::select(keys()).prop_flat_map(|key| {
        let dim = rank_two().cell(key).unwrap().dim();
        (Just(key), prop::collection::vec(-3i64..=3, dim))
    })
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

proptest! {
    #![proptest_config(Config { cases: 64, rng_seed: RngSeed::Fixed(0xd1ff), failure_persistence: None, ..Config::default() })]

    #[test]
    fn differentials_anticommute((key, v) in cell_vector(), j in 1usize..=2, k in 1usize..=2) {
        let e2 = rank_two();
        let e = e2.element(key, &big(&v));
        let total = e2.apply(j, &e2.apply(k, &e)).add(&e2.apply(k, &e2.apply(j, &e)));
        prop_assert!(total.reduce(e2.base.basis.generators()).is_zero());
    }

    #[test]
    fn differentials_are_linear((key, v) in cell_vector(), (_, w) in cell_vector(), k in 1usize..=2) {
        let e2 = rank_two();
        let w: Vec<i64> = w.into_iter().chain(std::iter::repeat(0)).take(v.len()).collect();
        let sum: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let lhs = e2.apply(k, &e2.element(key, &big(&sum)));
        let rhs = e2.apply(k, &e2.element(key, &big(&v))).add(&e2.apply(k, &e2.element(key, &big(&w))));
        prop_assert!(lhs.sub(&rhs).reduce(e2.base.basis.generators()).is_zero());
    }
}

#[test]
fn d_squared_vanishes() {
    for (n, cap) in [(1, 12), (2, 14), (3, 14)] {
        let e2 = init_e2(n, cap).unwrap();
        assert!(dd_violations(&e2).is_empty(), "rank {n}");
    }
}

#[test]
fn pages_are_nested_and_bookkeeping_is_clean() {
    for (n, cap) in [(1, 10), (2, 12), (3, 16)] {
        let fp = assemble_final_page(n, cap).unwrap();
        assert!(fp.checks.iter().all(|c| c.ok()), "rank {n}: {:?}", fp.checks);
        for w in fp.pages.windows(2) {
            for (key, before) in &w[0].cells {
                let after = &w[1].cells[key];
                assert!(before.cycles.contains_lattice(&after.cycles));
                assert!(after.boundaries.contains_lattice(&before.boundaries));
                assert!(after.cycles.contains_lattice(&after.boundaries));
            }
        }
    }
}

#[test]
fn ranks_never_grow() {
    let fp = assemble_final_page(3, 16).unwrap();
    for w in fp.pages.windows(2) {
        let (before, after) = (w[0].ranks_by_total(16), w[1].ranks_by_total(16));
        assert!(before.iter().zip(&after).all(|(b, a)| a <= b));
    }
    assert_eq!(fp.last().ranks_by_total(4), vec![1, 3, 6, 9, 11]);
}

#[test]
fn kernel_routes_agree_on_first_rows() {
    let fp = assemble_final_page(3, 24).unwrap();
    for a in 0..3 {
        let row = row_kernel(&fp, 1, a).unwrap();
        assert!(row.agrees(), "a = {a}: {:?}", row.lattice_mismatch);
    }
}
