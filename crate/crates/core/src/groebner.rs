//! Gröbner bases over `Z`: E-reduction, S/G-polynomials, Buchberger completion
//! with optional homogeneous truncation, reduced bases, intersections.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Euclid, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GroebnerError, PolyError};
use crate::poly::{MonomialOrder, Polynomial, PowerProduct, Ring, Term};

/// Name of the auxiliary variable used by [`ideal_intersect`].
pub const ELIMINATION_VAR: &str = "_elim";

/// Weighted degree bound; weights are indexed by context variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub weights: Vec<u32>,
    pub bound: u32,
}

impl DegreeBound {
    pub fn new(weights: Vec<u32>, bound: u32) -> Self {
        DegreeBound { weights, bound }
    }

    fn admits(&self, pp: &PowerProduct) -> bool {
        pp.weighted_degree(&self.weights) <= self.bound
    }
}

/// Options for [`buchberger`].
#[derive(Debug, Clone, Default)]
pub struct Completion {
    pub bounds: Vec<DegreeBound>,
    /// Hard cap on processed critical pairs; `None` means unlimited.
    pub max_pairs: Option<usize>,
}

impl Completion {
    pub fn truncated(bounds: Vec<DegreeBound>) -> Self {
        Completion { bounds, max_pairs: None }
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    reduced: bool,
    bounds: Vec<DegreeBound>,
}

impl GroebnerBasis {
    /// Wraps generators that the caller asserts form a Gröbner basis.
    pub fn from_generators(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Self {
        GroebnerBasis { ring: ring.clone(), generators, reduced: false, bounds: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<Polynomial> {
        self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn bounds(&self) -> &[DegreeBound] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.generators)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, &self.generators).is_zero()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

/// Quotient of `a` by `c` under least non-negative remainder, or `None` when it is zero.
fn e_quotient(a: &BigInt, c: &BigInt) -> Option<BigInt> {
    let q = a.div_euclid(c);
    if q.is_zero() {
        None
    } else {
        Some(q)
    }
}

/// One E-reduction of the largest reducible term of `f` by `p`.
pub fn e_reduce_step(f: &Polynomial, p: &Polynomial) -> Result<Option<Polynomial>, GroebnerError> {
    if p.is_zero() {
        return Err(GroebnerError::ZeroInput);
    }
    if f.ring() != p.ring() {
        return Err(PolyError::ContextMismatch.into());
    }
    for t in f.terms() {
        if let Some(s) = t.pp.div(p.lt()) {
            if let Some(q) = e_quotient(&t.coeff, p.lc()) {
                return Ok(Some(f.sub_scaled_shift(&q, &s, p)));
            }
        }
    }
    Ok(None)
}

/// One recorded reduction: `quotient * multiplier * basis[index]` was subtracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub index: usize,
    pub quotient: BigInt,
    pub multiplier: PowerProduct,
}

#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub remainder: Polynomial,
}

impl ReductionTrace {
    /// Rebuilds the traced input from the remainder and the steps.
    pub fn replay(&self, basis: &[Polynomial]) -> Polynomial {
        let mut acc = self.remainder.clone();
        for s in &self.steps {
            acc = acc.sub_scaled_shift(&-&s.quotient, &s.multiplier, &basis[s.index]);
        }
        acc
    }

    /// `sum quotient * multiplier * images[index]` for a parallel list of images.
    pub fn combine(&self, images: &[Polynomial], zero: Polynomial) -> Polynomial {
        let mut acc = zero;
        for s in &self.steps {
            acc = acc.sub_scaled_shift(&-&s.quotient, &s.multiplier, &images[s.index]);
        }
        acc
    }
}

fn reduce_impl(f: &Polynomial, basis: &[Polynomial], mut trace: Option<&mut Vec<ReductionStep>>) -> Polynomial {
    let mut f = f.clone();
    let mut i = 0;
    'outer: while i < f.len() {
        let (coeff, pp) = {
            let t = &f.terms()[i];
            (t.coeff.clone(), t.pp.clone())
        };
        for (j, g) in basis.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if let Some(s) = pp.div(g.lt()) {
                if let Some(q) = e_quotient(&coeff, g.lc()) {
                    f = f.sub_scaled_shift(&q, &s, g);
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(ReductionStep { index: j, quotient: q, multiplier: s });
                    }
                    continue 'outer;
                }
            }
        }
        i += 1;
    }
    f
}

/// Fully E-reduced form of `f`: the largest reducible term is reduced first,
/// always by the lowest-index applicable generator.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    reduce_impl(f, basis, None)
}

pub fn track_reduction(f: &Polynomial, basis: &[Polynomial]) -> ReductionTrace {
    let mut steps = Vec::new();
    let remainder = reduce_impl(f, basis, Some(&mut steps));
    ReductionTrace { steps, remainder }
}

fn check_pair(g1: &Polynomial, g2: &Polynomial) -> Result<(), GroebnerError> {
    if g1.is_zero() || g2.is_zero() {
        return Err(GroebnerError::ZeroInput);
    }
    if g1.ring() != g2.ring() {
        return Err(PolyError::ContextMismatch.into());
    }
    Ok(())
}

fn spoly_unchecked(g1: &Polynomial, g2: &Polynomial) -> Polynomial {
    let l = g1.lt().lcm(g2.lt());
    let c = g1.lc().lcm(g2.lc());
    let b1 = &c / g1.lc();
    let b2 = &c / g2.lc();
    let s1 = l.div(g1.lt()).expect("lcm divisible");
    let s2 = l.div(g2.lt()).expect("lcm divisible");
    g1.mul_term(&b1, &s1).sub_scaled_shift(&b2, &s2, g2)
}

fn gpoly_unchecked(g1: &Polynomial, g2: &Polynomial) -> Polynomial {
    let l = g1.lt().lcm(g2.lt());
    let e = g1.lc().extended_gcd(g2.lc());
    let (mut d1, mut d2) = (e.x, e.y);
    if e.gcd.is_negative() {
        d1 = -d1;
        d2 = -d2;
    }
    let s1 = l.div(g1.lt()).expect("lcm divisible");
    let s2 = l.div(g2.lt()).expect("lcm divisible");
    g1.mul_term(&d1, &s1).sub_scaled_shift(&-d2, &s2, g2)
}

/// `b1*s1*g1 - b2*s2*g2` cancelling the leading monomials.
pub fn s_polynomial(g1: &Polynomial, g2: &Polynomial) -> Result<Polynomial, GroebnerError> {
    check_pair(g1, g2)?;
    Ok(spoly_unchecked(g1, g2))
}

/// `d1*s1*g1 + d2*s2*g2` with `d1*c1 + d2*c2 = gcd(c1, c2)` from extended Euclid.
pub fn g_polynomial(g1: &Polynomial, g2: &Polynomial) -> Result<Polynomial, GroebnerError> {
    check_pair(g1, g2)?;
    Ok(gpoly_unchecked(g1, g2))
}

/// Some generator's leading monomial divides `t`'s, coefficient included.
fn strongly_top_reducible(t: &Term, basis: &[Polynomial]) -> bool {
    basis.iter().any(|g| g.lt().divides(&t.pp) && (&t.coeff % g.lc()).is_zero())
}

fn pair_degree(pp: &PowerProduct, bounds: &[DegreeBound]) -> u32 {
    match bounds.first() {
        Some(b) => pp.weighted_degree(&b.weights),
        None => pp.degree(),
    }
}

fn check_inputs(f: &[Polynomial], ring: &Arc<Ring>, bounds: &[DegreeBound]) -> Result<(), GroebnerError> {
    for p in f {
        if p.is_zero() {
            return Err(GroebnerError::ZeroInput);
        }
        if p.ring() != ring {
            return Err(PolyError::ContextMismatch.into());
        }
        for b in bounds {
            if b.weights.len() != ring.nvars() {
                return Err(PolyError::ContextMismatch.into());
            }
            if !p.is_homogeneous(&b.weights) {
                return Err(GroebnerError::NotHomogeneous(p.to_string()));
            }
        }
    }
    Ok(())
}

/// Completes `f` to a (strong) Gröbner basis over `Z`.
///
/// Pairs are handled by the normal strategy. With bounds, pairs whose lcm
/// exceeds any bound are dropped and the result is a basis of the truncation.
pub fn buchberger(f: &[Polynomial], ring: &Arc<Ring>, opts: &Completion) -> Result<GroebnerBasis, GroebnerError> {
    check_inputs(f, ring, &opts.bounds)?;
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();

    let push = |basis: &mut Vec<Polynomial>, pairs: &mut BTreeSet<(u32, usize, usize)>, h: Polynomial| {
        let h = h.normalize_sign();
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let l = g.lt().lcm(h.lt());
            if opts.bounds.iter().all(|b| b.admits(&l)) {
                pairs.insert((pair_degree(&l, &opts.bounds), i, k));
            }
        }
        basis.push(h);
    };

    for p in f {
        let r = normal_form(p, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut pairs, r);
        }
    }

    let mut processed = 0usize;
    while let Some((_, i, j)) = pairs.pop_first() {
        processed += 1;
        if let Some(limit) = opts.max_pairs {
            if processed > limit {
                return Err(GroebnerError::PairLimit(limit));
            }
        }
        let (gi, gj) = (&basis[i], &basis[j]);
        let (ci, cj) = (gi.lc(), gj.lc());
        let divides = (cj % ci).is_zero() || (ci % cj).is_zero();
        let gp = if divides { None } else { Some(gpoly_unchecked(gi, gj)) };
        let skip_s = gi.lt().is_coprime(gj.lt()) && ci.gcd(cj).is_one();
        let sp = if skip_s { None } else { Some(spoly_unchecked(gi, gj)) };

        if let Some(gp) = gp {
            let gp = gp.normalize_sign();
            if !strongly_top_reducible(&gp.terms()[0], &basis) {
                push(&mut basis, &mut pairs, gp);
            }
        }
        if let Some(sp) = sp {
            let r = normal_form(&sp, &basis);
            if !r.is_zero() {
                push(&mut basis, &mut pairs, r);
            }
        }
    }
    Ok(GroebnerBasis { ring: ring.clone(), generators: basis, reduced: false, bounds: opts.bounds.clone() })
}

/// Interreduces until no generator E-reduces by another, normalizes signs
/// and sorts by leading power product, largest first.
pub fn reduce_basis(g: &GroebnerBasis) -> GroebnerBasis {
    let mut gens: Vec<Polynomial> =
        g.generators.iter().filter(|p| !p.is_zero()).map(|p| p.normalize_sign()).collect();
    let order = g.ring.order().clone();
    loop {
        sort_gens(&mut gens, &order);
        let mut changed = false;
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<Polynomial> =
                gens.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.clone()).collect();
            let r = normal_form(&gens[i], &others).normalize_sign();
            if r != gens[i] {
                changed = true;
                if r.is_zero() {
                    gens.remove(i);
                    continue;
                }
                gens[i] = r;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    sort_gens(&mut gens, &order);
    GroebnerBasis { ring: g.ring.clone(), generators: gens, reduced: true, bounds: g.bounds.clone() }
}

fn sort_gens(gens: &mut [Polynomial], order: &MonomialOrder) {
    gens.sort_by(|a, b| order.cmp_pp(b.lt(), a.lt()).then_with(|| a.lc().cmp(b.lc())));
}

/// `buchberger` followed by `reduce_basis`.
pub fn groebner(f: &[Polynomial], ring: &Arc<Ring>, opts: &Completion) -> Result<GroebnerBasis, GroebnerError> {
    Ok(reduce_basis(&buchberger(f, ring, opts)?))
}

/// Checks both completion criteria on every pair: the S-polynomial reduces
/// to zero and the G-polynomial's leading monomial is divisible by some
/// generator's leading monomial (coefficient included).
pub fn is_groebner(gens: &[Polynomial]) -> bool {
    if gens.iter().any(|g| g.is_zero()) {
        return false;
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (gi, gj) = (&gens[i], &gens[j]);
            if !normal_form(&spoly_unchecked(gi, gj), gens).is_zero() {
                return false;
            }
            let gp = gpoly_unchecked(gi, gj).normalize_sign();
            if !strongly_top_reducible(&gp.terms()[0], gens) {
                return false;
            }
        }
    }
    true
}

/// Reduced Gröbner basis of the intersection, via the elimination variable
/// [`ELIMINATION_VAR`] placed above every other variable.
pub fn ideal_intersect(
    a: &[Polynomial],
    b: &[Polynomial],
    ring: &Arc<Ring>,
    opts: &Completion,
) -> Result<GroebnerBasis, GroebnerError> {
    if ring.ctx().index_of(ELIMINATION_VAR).is_some() {
        return Err(GroebnerError::ReservedVariable(ELIMINATION_VAR.to_string()));
    }
    check_inputs(a, ring, &opts.bounds)?;
    check_inputs(b, ring, &opts.bounds)?;
    if a.is_empty() || b.is_empty() {
        return Ok(GroebnerBasis { ring: ring.clone(), generators: Vec::new(), reduced: true, bounds: opts.bounds.clone() });
    }
    let n = ring.nvars();
    let ctx = ring.ctx().extend(&[ELIMINATION_VAR])?;
    let ext = Ring::new(ctx, ring.order().with_leading_block(1))?;
    let var_map: Vec<usize> = (0..n).collect();
    let t = ext.var_at(n);
    let one_minus_t = &ext.constant(1) - &t;
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for p in a {
        gens.push(&t * &p.embed(&ext, &var_map));
    }
    for p in b {
        gens.push(&one_minus_t * &p.embed(&ext, &var_map));
    }
    let bounds: Vec<DegreeBound> = opts
        .bounds
        .iter()
        .map(|bd| {
            let mut w = bd.weights.clone();
            w.push(0);
            DegreeBound::new(w, bd.bound)
        })
        .collect();
    let ext_opts = Completion { bounds, max_pairs: opts.max_pairs };
    let full = buchberger(&gens, &ext, &ext_opts)?;
    let kept: Vec<Polynomial> = full
        .generators
        .iter()
        .filter(|p| p.degree_in(n) == 0)
        .map(|p| {
            let terms = p.terms().iter().map(|t| {
                (t.coeff.clone(), PowerProduct::from_exponents(t.pp.exponents()[..n].to_vec()))
            });
            Polynomial::from_terms(ring, terms)
        })
        .collect();
    let out = GroebnerBasis { ring: ring.clone(), generators: kept, reduced: false, bounds: opts.bounds.clone() };
    Ok(reduce_basis(&out))
}

/// Whether the two generator lists span the same ideal (within the bounds, if any).
pub fn ideal_equal(a: &[Polynomial], b: &[Polynomial], ring: &Arc<Ring>, opts: &Completion) -> Result<bool, GroebnerError> {
    let ga = buchberger(a, ring, opts)?;
    let gb = buchberger(b, ring, opts)?;
    let admitted = |p: &Polynomial| {
        opts.bounds.iter().all(|bd| p.weighted_degree(&bd.weights).is_none_or(|d| d <= bd.bound))
    };
    Ok(a.iter().filter(|p| admitted(p)).all(|p| gb.contains(p))
        && b.iter().filter(|p| admitted(p)).all(|p| ga.contains(p)))
}

/// Power products of weighted degree at most `bound` that no leading power
/// product divides, in ascending order. Every weight must be positive.
pub fn standard_monomials(basis: &[Polynomial], ring: &Arc<Ring>, bound: u32, weights: &[u32]) -> Vec<PowerProduct> {
    assert_eq!(weights.len(), ring.nvars(), "one weight per variable");
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    let leads: Vec<&PowerProduct> = basis.iter().filter(|g| !g.is_zero()).map(|g| g.lt()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u32; ring.nvars()];
    enumerate(0, bound, weights, &mut cur, &mut |e| {
        let pp = PowerProduct::from_exponents(e.to_vec());
        if !leads.iter().any(|l| l.divides(&pp)) {
            out.push(pp);
        }
    });
    let order = ring.order();
    out.sort_by(|a, b| order.cmp_pp(a, b));
    out
}

fn enumerate(i: usize, left: u32, w: &[u32], cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == cur.len() {
        f(cur);
        return;
    }
    let mut e = 0;
    while e * w[i] <= left {
        cur[i] = e;
        enumerate(i + 1, left - e * w[i], w, cur, f);
        e += 1;
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Arc<Ring> {
        Ring::lex(&["x", "y"]).unwrap()
    }

    fn p(r: &Arc<Ring>, s: &str) -> Polynomial {
        r.parse(s).unwrap()
    }

    #[test]
    fn e_reduction_examples() {
        let r = r2();
        let got = e_reduce_step(&p(&r, "5*x^2"), &p(&r, "2*x")).unwrap().unwrap();
        assert_eq!(got, p(&r, "x^2"));
        assert!(e_reduce_step(&p(&r, "x^2"), &p(&r, "2*x")).unwrap().is_none());
        let got = e_reduce_step(&p(&r, "4*x*y"), &p(&r, "2*x")).unwrap().unwrap();
        assert!(got.is_zero());
        assert!(e_reduce_step(&p(&r, "x"), &r.zero()).is_err());
    }

    #[test]
    fn negative_coefficients_use_nonnegative_remainder() {
        let r = r2();
        let got = e_reduce_step(&p(&r, "-x^2"), &p(&r, "2*x")).unwrap().unwrap();
        assert_eq!(got, p(&r, "x^2"));
        let got = e_reduce_step(&p(&r, "5*x"), &p(&r, "-2*x")).unwrap().unwrap();
        assert_eq!(got, p(&r, "x"));
    }

    #[test]
    fn normal_form_examples() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        let g = vec![p(&r, "x2 + x1"), p(&r, "x1^2")];
        assert_eq!(normal_form(&p(&r, "x2"), &g), p(&r, "-x1"));
        assert!(normal_form(&p(&r, "x1^3"), &g).is_zero());
    }

    #[test]
    fn s_and_g_polynomials() {
        let r = r2();
        let s = s_polynomial(&p(&r, "2*x^2 + y"), &p(&r, "3*x*y + x")).unwrap();
        assert_eq!(s, p(&r, "3*y^2 - 2*x^2"));
        let f = p(&r, "x^2 + 3*y");
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
        assert!(s_polynomial(&p(&r, "x"), &p(&r, "y")).unwrap().is_zero());
        assert_eq!(g_polynomial(&p(&r, "2*x^2"), &p(&r, "3*x*y")).unwrap(), p(&r, "x^2*y"));
        assert_eq!(g_polynomial(&p(&r, "2*x"), &p(&r, "4*y")).unwrap(), p(&r, "2*x*y"));
        assert_eq!(g_polynomial(&p(&r, "x + 1"), &p(&r, "y")).unwrap().lc(), &BigInt::one());
        assert!(s_polynomial(&r.zero(), &f).is_err());
    }

    #[test]
    fn completion_examples() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        let g = groebner(&[p(&r, "x1 + x2"), p(&r, "x1^2 + x1*x2 + x2^2")], &r, &Completion::default()).unwrap();
        assert_eq!(g.to_strings(), vec!["x2 + x1", "x1^2"]);
        let r1 = Ring::lex(&["x"]).unwrap();
        let g = groebner(&[p(&r1, "2*x"), p(&r1, "3*x")], &r1, &Completion::default()).unwrap();
        assert_eq!(g.to_strings(), vec!["x"]);
        assert!(buchberger(&[r1.zero()], &r1, &Completion::default()).is_err());
    }

    #[test]
    fn truncation_requires_homogeneity() {
        let r = r2();
        let opts = Completion::truncated(vec![DegreeBound::new(vec![1, 1], 3)]);
        assert!(matches!(buchberger(&[p(&r, "x^2 + y")], &r, &opts), Err(GroebnerError::NotHomogeneous(_))));
    }

    #[test]
    fn reduce_basis_examples() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        let g = GroebnerBasis::from_generators(&r, vec![p(&r, "x2 + x1"), p(&r, "x2^2")]);
        assert_eq!(reduce_basis(&g).to_strings(), vec!["x2 + x1", "x1^2"]);
        let once = reduce_basis(&g);
        assert_eq!(reduce_basis(&once).to_strings(), once.to_strings());
        let r1 = Ring::lex(&["x"]).unwrap();
        let g = GroebnerBasis::from_generators(&r1, vec![p(&r1, "-x")]);
        assert_eq!(reduce_basis(&g).to_strings(), vec!["x"]);
    }

    #[test]
    fn groebner_test_examples() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        assert!(is_groebner(&[p(&r, "x2 + x1"), p(&r, "x1^2")]));
        let r = r2();
        assert!(!is_groebner(&[p(&r, "2*x^2 + y"), p(&r, "3*x*y + x")]));
        // xy = x*(3y) - y*(2x) lies in the ideal but no single leading
        // monomial divides it, so this is not a strong basis.
        assert!(!is_groebner(&[p(&r, "2*x"), p(&r, "3*y")]));
        assert!(is_groebner(&[p(&r, "2*x"), p(&r, "3*y"), p(&r, "x*y")]));
    }

    #[test]
    fn intersections() {
        let r = Ring::lex(&["x", "y2"]).unwrap();
        let g = ideal_intersect(&[p(&r, "x")], &[p(&r, "y2")], &r, &Completion::default()).unwrap();
        assert_eq!(g.to_strings(), vec!["x*y2"]);
        let g = ideal_intersect(&[p(&r, "2")], &[p(&r, "3")], &r, &Completion::default()).unwrap();
        assert_eq!(g.to_strings(), vec!["6"]);
        let bad = Ring::lex(&["x", ELIMINATION_VAR]).unwrap();
        assert!(matches!(
            ideal_intersect(&[p(&bad, "x")], &[p(&bad, "x")], &bad, &Completion::default()),
            Err(GroebnerError::ReservedVariable(_))
        ));
    }

    #[test]
    fn ideal_equality() {
        let r = r2();
        let c = Completion::default();
        assert!(!ideal_equal(&[p(&r, "x")], &[p(&r, "x^2")], &r, &c).unwrap());
        assert!(ideal_equal(&[p(&r, "x + y"), p(&r, "y")], &[p(&r, "x"), p(&r, "y")], &r, &c).unwrap());
    }

    #[test]
    fn trace_replays() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        let g = vec![p(&r, "x2 + x1"), p(&r, "x1^2")];
        let f = p(&r, "3*x2^2*x1 + x2 - 7");
        let tr = track_reduction(&f, &g);
        assert_eq!(tr.remainder, normal_form(&f, &g));
        assert_eq!(tr.replay(&g), f);
        let empty = track_reduction(&r.zero(), &g);
        assert!(empty.steps.is_empty() && empty.remainder.is_zero());
    }

    #[test]
    fn standard_monomial_scan() {
        let r = Ring::lex(&["x2", "x1"]).unwrap();
        let g = vec![p(&r, "x2 + x1"), p(&r, "x1^2")];
        let sm = standard_monomials(&g, &r, 1, &[1, 1]);
        let names: Vec<String> = sm.iter().map(|m| crate::poly::format_pp(r.ctx(), m)).collect();
        assert_eq!(names, vec!["1", "x1"]);
    }
}
