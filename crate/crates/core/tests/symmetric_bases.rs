use freeloop_core::groebner::{groebner, is_groebner, standard_monomials, Completion};
use freeloop_core::symcomb::{complete_generators, phi_basis, symmetric_ring, tilde_relations, tilde_ring, tilde_ring_bar_largest};
use freeloop_core::{ideal_equal, Polynomial};

fn strings(v: &[Polynomial]) -> Vec<String> {
    v.iter().map(|p| p.to_string()).collect()
}

#[test]
fn complete_generators_complete_to_phi_basis() {
    for n in 2..=5 {
        let ring = symmetric_ring(n);
        let gb = groebner(&complete_generators(n), &ring, &Completion::default()).unwrap();
        let mut expected = strings(&phi_basis(n));
        expected.reverse();
        let mut got = gb.to_strings();
        got.sort();
        expected.sort();
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn quotient_ranks_are_factorials() {
    for n in 1..=5usize {
        let ring = symmetric_ring(n);
        let basis = phi_basis(n);
        let top = (n * (n - 1) / 2) as u32;
        let count = standard_monomials(&basis, &ring, top + 1, &vec![1; n]).len();
        assert_eq!(count, (1..=n).product::<usize>(), "n = {n}");
    }
}

#[test]
fn su4_tilde_relations_form_a_basis_with_bar_smallest() {
    let ring = tilde_ring(3);
    let rels: Vec<Polynomial> = tilde_relations(3, true).iter().map(|p| p.with_ring(&ring).unwrap()).collect();
    assert!(is_groebner(&rels));
    let std = standard_monomials(&rels, &ring, 7, &[1, 1, 1]);
    assert_eq!(std.len(), 24);
    let gb = groebner(&rels, &ring, &Completion::default()).unwrap();
    assert_eq!(gb.len(), 3);
}

#[test]
fn bar_largest_order_does_not_give_a_basis() {
    for n in 2..=3 {
        let ring = tilde_ring_bar_largest(n);
        let rels: Vec<Polynomial> = tilde_relations(n, true).iter().map(|p| p.with_ring(&ring).unwrap()).collect();
        assert!(!is_groebner(&rels), "n = {n}");
        let gb = groebner(&rels, &ring, &Completion::default()).unwrap();
        assert!(gb.len() > rels.len());
        assert!(ideal_equal(&rels, gb.generators(), &ring, &Completion::default()).unwrap());
    }
}
