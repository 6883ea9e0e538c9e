//! Page-by-page computation of the spectral sequence on integer lattices.
//!
//! Every bidegree `(p, q)` of the second page is a free abelian group with
//! basis `(shape, standard monomial)`. Each page keeps, per bidegree, the
//! cycle lattice `Z` and the boundary lattice `B` with `B ⊆ Z`; the page
//! itself is `Z / B`. Advancing by the differential `d^{2k}` replaces `Z` by
//! the elements whose image lands in the target's `B`, and adds to `B` the
//! image of the source's `Z`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use freeloop_core::symcomb::{tilde_basis_map, tilde_relations, tilde_ring, TildeMap};
use freeloop_core::{
    groebner, normal_form, standard_monomials, Completion, DegreeBound, GroebnerBasis, IntegerMatrix, Lattice, Polynomial,
    PowerProduct, QuotientShape, Ring,
};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SsError;
use crate::graded::{to_y_poly, y_ring, GradedElement, Shape};

/// Largest supported rank.
pub const MAX_RANK: usize = 3;

/// Default total-degree cap.
pub const DEFAULT_CAP: u32 = 24;

pub type Bidegree = (u32, u32);

/// `Z[g_1..g_{n-1}, gb] / I` with its standard monomial basis.
#[derive(Debug, Clone)]
pub struct BaseQuotient {
    pub n: usize,
    pub map: TildeMap,
    pub ring: Arc<Ring>,
    pub relations: Vec<Polynomial>,
    pub basis: GroebnerBasis,
    monomials: Vec<Vec<PowerProduct>>,
}

impl BaseQuotient {
    /// Uses the signed tilde relations, for which the differentials take the
    /// form `Σ (-1)^{i+1} y_i γ̃_i^k`.
    pub fn new(n: usize) -> Result<Self, SsError> {
        check_rank(n)?;
        let map = tilde_basis_map(n, true);
        let ring = tilde_ring(n);
        let relations = tilde_relations(n, true);
        let basis = groebner(&relations, &ring, &Completion::default())?;
        if basis.generators().iter().any(|g| !g.lc().is_one()) {
            return Err(SsError::OutOfRange("base relations do not give a free quotient basis".into()));
        }
        let top = top_degree(n);
        let all = standard_monomials(basis.generators(), &ring, top + 1, &vec![1; n]);
        let mut monomials = vec![Vec::new(); top as usize + 1];
        for pp in all {
            let d = pp.degree();
            if d > top {
                return Err(SsError::OutOfRange(format!("standard monomial above degree {top}")));
            }
            monomials[d as usize].push(pp);
        }
        Ok(BaseQuotient { n, map, ring, relations, basis, monomials })
    }

    pub fn top_degree(&self) -> u32 {
        top_degree(self.n)
    }

    pub fn rank(&self) -> usize {
        self.monomials.iter().map(Vec::len).sum()
    }

    pub fn monomials(&self, d: u32) -> &[PowerProduct] {
        self.monomials.get(d as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.basis.normal_form(p)
    }

    /// `D_k = Σ (-1)^{i+1} y_i γ̃_i^k` for `1 <= k <= n`.
    pub fn differential(&self, k: usize) -> GradedElement {
        let n = self.n;
        let mut acc = GradedElement::zero(&self.ring, n);
        for i in 1..=n {
            let t = GradedElement::y(&self.ring, n, i).mul_base(&self.map.tilde(i).pow(k as u32));
            acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }
}

/// `n(n+1)/2`, the top degree of the base quotient.
pub fn top_degree(n: usize) -> u32 {
    (n * (n + 1) / 2) as u32
}

fn check_rank(n: usize) -> Result<(), SsError> {
    if n == 0 {
        return Err(SsError::OutOfRange("rank must be at least 1".into()));
    }
    if n > MAX_RANK {
        return Err(SsError::Unsupported(n));
    }
    Ok(())
}

/// All shapes of fibre degree `q`, sorted.
pub fn shapes_of_degree(n: usize, q: u32) -> Vec<Shape> {
    let mut out = Vec::new();
    let mut xs = vec![0u32; n];
    fn rec(k: usize, left: u32, n: usize, xs: &mut Vec<u32>, out: &mut Vec<Shape>) {
        if k == n {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() == left {
                    out.push(Shape::new(xs.clone(), mask));
                }
            }
            return;
        }
        let w = 2 * (k as u32 + 1);
        let mut m = 0;
        while m * w <= left {
            xs[k] = m;
            rec(k + 1, left - m * w, n, xs, out);
            m += 1;
        }
        xs[k] = 0;
    }
    rec(0, q, n, &mut xs, &mut out);
    out.sort();
    out
}

/// A bidegree of the second page with its basis.
#[derive(Debug, Clone)]
pub struct Cell {
    pub p: u32,
    pub q: u32,
    pub basis: Vec<(Shape, PowerProduct)>,
    index: HashMap<(Shape, PowerProduct), usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn total(&self) -> u32 {
        self.p + self.q
    }

    pub fn element(&self, i: usize, base: &BaseQuotient) -> GradedElement {
        let (s, pp) = &self.basis[i];
        let n = base.n;
        GradedElement::term(s.clone(), Polynomial::monomial(&base.ring, BigInt::one(), pp.clone()), n)
    }

    pub fn label(&self, i: usize, base: &BaseQuotient) -> String {
        self.element(i, base).to_string()
    }

    pub fn labels(&self, base: &BaseQuotient) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i, base)).collect()
    }

    pub fn index_of(&self, s: &Shape, pp: &PowerProduct) -> Option<usize> {
        self.index.get(&(s.clone(), pp.clone())).copied()
    }
}

/// The second page up to a total-degree cap.
#[derive(Debug, Clone)]
pub struct E2Page {
    pub n: usize,
    pub cap: u32,
    pub base: BaseQuotient,
    pub differentials: Vec<GradedElement>,
    cells: BTreeMap<Bidegree, Cell>,
}

/// Enumerates the second page through total degree `cap + 1` (one past the
/// cap so that every differential leaving a reported bidegree has a target).
pub fn init_e2(n: usize, cap: u32) -> Result<E2Page, SsError> {
    check_rank(n)?;
    let needed = 2 * top_degree(n);
    if cap < needed {
        return Err(SsError::CapTooSmall { cap, needed });
    }
    let base = BaseQuotient::new(n)?;
    let mut cells = BTreeMap::new();
    for q in 0..=cap + 1 {
        let shapes = shapes_of_degree(n, q);
        for d in 0..=base.top_degree() {
            let p = 2 * d;
            if p + q > cap + 1 {
                break;
            }
            let mut basis = Vec::new();
            for s in &shapes {
                for pp in base.monomials(d) {
                    basis.push((s.clone(), pp.clone()));
                }
            }
            if basis.is_empty() {
                continue;
            }
            let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            cells.insert((p, q), Cell { p, q, basis, index });
        }
    }
    let differentials = (1..=n).map(|k| base.differential(k)).collect();
    Ok(E2Page { n, cap, base, differentials, cells })
}

impl E2Page {
    pub fn cells(&self) -> &BTreeMap<Bidegree, Cell> {
        &self.cells
    }

    pub fn cell(&self, key: Bidegree) -> Option<&Cell> {
        self.cells.get(&key)
    }

    /// Target bidegree of `d^{2k}` from `key`, when the fibre degree allows it.
    pub fn target_of(key: Bidegree, k: usize) -> Option<Bidegree> {
        let r = 2 * k as u32;
        (key.1 + 1 >= r).then(|| (key.0 + r, key.1 + 1 - r))
    }

    pub fn source_of(key: Bidegree, k: usize) -> Option<Bidegree> {
        let r = 2 * k as u32;
        (key.0 >= r).then(|| (key.0 - r, key.1 + r - 1))
    }

    /// Coordinates of a homogeneous element in the basis of `key`, after
    /// reducing its base coefficients.
    pub fn coordinates(&self, e: &GradedElement, key: Bidegree) -> Result<Vec<BigInt>, SsError> {
        let dim = self.cells.get(&key).map_or(0, Cell::dim);
        let mut v = vec![BigInt::zero(); dim];
        let reduced = e.reduce(self.base.basis.generators());
        for (s, p) in reduced.terms() {
            for t in p.terms() {
                let cell = self.cells.get(&key);
                let pos = cell.and_then(|c| c.index_of(s, &t.pp));
                match pos {
                    Some(i) if (2 * t.pp.degree(), s.fibre_degree()) == key => v[i] += &t.coeff,
                    _ => {
                        return Err(SsError::OutOfRange(format!(
                            "term with shape {s:?} and base degree {} is not in bidegree {key:?}",
                            t.pp.degree()
                        )))
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn element(&self, key: Bidegree, v: &[BigInt]) -> GradedElement {
        let mut acc = GradedElement::zero(&self.base.ring, self.n);
        if let Some(cell) = self.cells.get(&key) {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&cell.element(i, &self.base).scale(c));
                }
            }
        }
        acc
    }

    /// `d^{2k}` applied to an element of the second page (not reduced).
    pub fn apply(&self, k: usize, e: &GradedElement) -> GradedElement {
        e.leibniz_differential(k, &self.differentials[k - 1])
    }

    /// Whether the target of `d^{2k}` from `key` lies past the enumerated
    /// range (so the cycles of `key` are not determined).
    fn target_open(&self, key: Bidegree, k: usize) -> bool {
        match Self::target_of(key, k) {
            Some(t) => t.0 / 2 <= self.base.top_degree() && t.0 + t.1 > self.cap + 1,
            None => false,
        }
    }

    /// Matrix of `d^{2k}` from `key` to its target, rows indexed by the
    /// source basis.
    pub fn row_matrix(&self, k: usize, key: Bidegree) -> Result<IntegerMatrix, SsError> {
        let src = self.cells.get(&key).ok_or_else(|| SsError::OutOfRange(format!("no bidegree {key:?}")))?;
        let tgt_key = Self::target_of(key, k);
        let tgt = tgt_key.and_then(|t| self.cells.get(&t));
        let row_labels = src.labels(&self.base);
        let col_labels = tgt.map(|c| c.labels(&self.base)).unwrap_or_default();
        let mut m = IntegerMatrix::zeros(row_labels, col_labels);
        for i in 0..src.dim() {
            let img = self.apply(k, &src.element(i, &self.base));
            match tgt_key {
                Some(t) if tgt.is_some() => m.rows[i] = self.coordinates(&img, t)?,
                _ => {
                    if !img.reduce(self.base.basis.generators()).is_zero() && !self.target_open(key, k) {
                        return Err(SsError::OutOfRange(format!("nonzero image from {key:?} without target")));
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Cycles and boundaries at one bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellState {
    pub cycles: Lattice,
    pub boundaries: Lattice,
}

impl CellState {
    pub fn rank(&self) -> usize {
        self.cycles.rank() - self.boundaries.rank()
    }

    pub fn shape(&self) -> QuotientShape {
        self.cycles.quotient(&self.boundaries)
    }
}

/// One page: `E_r = Z / B` at every bidegree.
#[derive(Debug, Clone)]
pub struct PageState {
    pub page: u32,
    pub cells: BTreeMap<Bidegree, CellState>,
}

/// Bookkeeping recorded while advancing a page.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvanceChecks {
    /// Bidegrees where the new boundaries are not inside the new cycles.
    pub boundary_not_in_cycles: Vec<Bidegree>,
    /// Bidegrees where the differential does not send boundaries to boundaries.
    pub not_well_defined: Vec<Bidegree>,
    /// Bidegrees where `rank E_{r+1} = rank E_r - rank d_out - rank d_in` fails.
    pub rank_mismatch: Vec<Bidegree>,
    /// Total degrees where the alternating-sum identity fails.
    pub euler_mismatch: Vec<u32>,
}

impl AdvanceChecks {
    pub fn ok(&self) -> bool {
        self.boundary_not_in_cycles.is_empty()
            && self.not_well_defined.is_empty()
            && self.rank_mismatch.is_empty()
            && self.euler_mismatch.is_empty()
    }
}

impl PageState {
    pub fn second(e2: &E2Page) -> PageState {
        let cells = e2
            .cells
            .iter()
            .map(|(k, c)| (*k, CellState { cycles: Lattice::full(c.dim()), boundaries: Lattice::zero(c.dim()) }))
            .collect();
        PageState { page: 2, cells }
    }

    /// Rank of `E_r` in each total degree up to the cap.
    pub fn ranks_by_total(&self, cap: u32) -> Vec<i64> {
        let mut out = vec![0i64; cap as usize + 1];
        for ((p, q), c) in &self.cells {
            if p + q <= cap {
                out[(p + q) as usize] += c.rank() as i64;
            }
        }
        out
    }

    /// Applies `d^{2k}` and returns `E_{2k+1}` with the consistency record.
    pub fn advance(&self, e2: &E2Page, k: usize) -> Result<(PageState, AdvanceChecks), SsError> {
        let keys: Vec<Bidegree> = e2.cells.keys().copied().collect();
        let mats: Vec<(Bidegree, IntegerMatrix)> =
            keys.par_iter().map(|&key| e2.row_matrix(k, key).map(|m| (key, m))).collect::<Result<_, _>>()?;
        let mats: BTreeMap<Bidegree, IntegerMatrix> = mats.into_iter().collect();

        struct Step {
            key: Bidegree,
            state: CellState,
            out_rank: usize,
            well_defined: bool,
        }
        let steps: Vec<Step> = keys
            .par_iter()
            .map(|&key| {
                let cur = &self.cells[&key];
                let m = &mats[&key];
                let tkey = E2Page::target_of(key, k).filter(|t| self.cells.contains_key(t));
                let (cycles, out_rank, well_defined) = match tkey {
                    Some(t) if !e2.target_open(key, k) => {
                        let tb = &self.cells[&t].boundaries;
                        let img = cur.cycles.image(&m.rows, m.ncols());
                        let out_rank = img.sum(tb).rank() - tb.rank();
                        let wd = tb.contains_lattice(&cur.boundaries.image(&m.rows, m.ncols()));
                        (cur.cycles.preimage_within(&m.rows, tb), out_rank, wd)
                    }
                    _ => (cur.cycles.clone(), 0, true),
                };
                let mut boundaries = cur.boundaries.clone();
                if let Some(s) = E2Page::source_of(key, k).filter(|s| self.cells.contains_key(s)) {
                    let sm = &mats[&s];
                    boundaries = boundaries.sum(&self.cells[&s].cycles.image(&sm.rows, sm.ncols()));
                }
                Step { key, state: CellState { cycles, boundaries }, out_rank, well_defined }
            })
            .collect();

        let mut checks = AdvanceChecks::default();
        let out_rank: BTreeMap<Bidegree, usize> = steps.iter().map(|s| (s.key, s.out_rank)).collect();
        let mut cells = BTreeMap::new();
        for s in steps {
            let key = s.key;
            let reported = key.0 + key.1 <= e2.cap;
            if reported && !s.state.cycles.contains_lattice(&s.state.boundaries) {
                checks.boundary_not_in_cycles.push(key);
            }
            if reported && !s.well_defined {
                checks.not_well_defined.push(key);
            }
            if reported {
                let before = self.cells[&key].rank() as i64;
                let incoming = E2Page::source_of(key, k).and_then(|src| out_rank.get(&src)).copied().unwrap_or(0);
                let after = s.state.cycles.rank() as i64 - s.state.boundaries.rank() as i64;
                if after != before - s.out_rank as i64 - incoming as i64 {
                    checks.rank_mismatch.push(key);
                }
            }
            cells.insert(key, s.state);
        }
        let next = PageState { page: 2 * k as u32 + 1, cells };

        // Σ_{s<=t} (-1)^s (rank E_r(s) - rank E_{r+1}(s)) = (-1)^t rank(d: t -> t+1)
        let before = self.ranks_by_total(e2.cap);
        let after = next.ranks_by_total(e2.cap);
        let mut out_by_total = vec![0i64; e2.cap as usize + 1];
        for ((p, q), r) in &out_rank {
            if p + q <= e2.cap {
                out_by_total[(p + q) as usize] += *r as i64;
            }
        }
        let mut running = 0i64;
        for t in 0..=e2.cap as usize {
            let sign = if t % 2 == 0 { 1 } else { -1 };
            running += sign * (before[t] - after[t]);
            if running != sign * out_by_total[t] {
                checks.euler_mismatch.push(t as u32);
            }
        }
        Ok((next, checks))
    }
}

/// Torsion orders with the total degrees where they occur.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSummary {
    /// order -> total degree -> multiplicity
    pub orders: BTreeMap<u64, BTreeMap<u32, usize>>,
}

impl TorsionSummary {
    pub fn add(&mut self, order: u64, degree: u32) {
        if order > 1 {
            *self.orders.entry(order).or_default().entry(degree).or_default() += 1;
        }
    }

    pub fn order_set(&self) -> Vec<u64> {
        self.orders.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }
}

/// The last page with everything needed to report and verify it.
#[derive(Debug, Clone)]
pub struct FinalPage {
    pub e2: E2Page,
    /// Pages `E_2, E_3, E_5, …, E_{2n+1}`.
    pub pages: Vec<PageState>,
    pub checks: Vec<AdvanceChecks>,
}

impl FinalPage {
    pub fn last(&self) -> &PageState {
        self.pages.last().expect("at least the second page")
    }

    /// Bidegrees with total degree within the cap.
    pub fn reported(&self) -> impl Iterator<Item = (&Bidegree, &CellState)> {
        let cap = self.e2.cap;
        self.last().cells.iter().filter(move |((p, q), _)| p + q <= cap)
    }

    /// Torsion of the last page from Smith invariants of `Z / B`.
    pub fn torsion(&self) -> TorsionSummary {
        let mut t = TorsionSummary::default();
        for ((p, q), c) in self.reported() {
            for d in c.shape().torsion {
                t.add(d.to_u64().expect("torsion order fits in u64"), p + q);
            }
        }
        t
    }

    pub fn consistent(&self) -> bool {
        self.checks.iter().all(AdvanceChecks::ok)
    }
}

/// Runs every differential `d^2, d^4, …, d^{2n}`; after the last one the
/// page is final because no further differential has room to act.
pub fn assemble_final_page(n: usize, cap: u32) -> Result<FinalPage, SsError> {
    let e2 = init_e2(n, cap)?;
    let mut pages = vec![PageState::second(&e2)];
    let mut checks = Vec::new();
    for k in 1..=n {
        let (next, c) = pages.last().expect("nonempty").advance(&e2, k)?;
        pages.push(next);
        checks.push(c);
    }
    Ok(FinalPage { e2, pages, checks })
}

/// Elements `e` with `d^{2j} d^{2k} e + d^{2k} d^{2j} e ≠ 0` (and
/// `d^{2k} d^{2k} e ≠ 0`), listed by label; empty means `d∘d = 0` on every
/// enumerated basis element.
pub fn dd_violations(e2: &E2Page) -> Vec<String> {
    let gens = e2.base.basis.generators();
    let n = e2.n;
    let cells: Vec<&Cell> = e2.cells.values().filter(|c| c.total() + 2 <= e2.cap + 1).collect();
    cells
        .par_iter()
        .flat_map_iter(|c| {
            (0..c.dim()).filter_map(move |i| {
                let e = c.element(i, &e2.base);
                for j in 1..=n {
                    for k in j..=n {
                        let a = e2.apply(j, &e2.apply(k, &e));
                        let b = e2.apply(k, &e2.apply(j, &e));
                        let s = if j == k { a } else { a.add(&b) };
                        if !s.reduce(gens).is_zero() {
                            return Some(format!("{} (d{} d{})", c.label(i, &e2.base), 2 * j, 2 * k));
                        }
                    }
                }
                None
            })
        })
        .collect()
}

/// Torsion of row `a` as recorded by the Gröbner basis itself: every basis
/// element of the relation module whose coefficients share a factor `> 1`
/// contributes that factor at its total degree. This names the orders that
/// occur; the exact groups come from [`x_free_groups_gb`].
pub fn torsion_summary(base: &BaseQuotient, a: usize) -> Result<TorsionSummary, SsError> {
    let (_, gb) = row_relation_basis(base, a)?;
    let mut out = TorsionSummary::default();
    for g in &gb {
        let c = g.content();
        if c > BigInt::one() {
            let gamma_deg = g.total_degree().expect("nonzero") - a as u32;
            out.add(c.to_u64().expect("content fits in u64"), a as u32 + 2 * gamma_deg);
        }
    }
    Ok(out)
}

/// Strong Gröbner basis of `Λ^a ⊗ I + Σ_k D_k Λ^{a-1}` inside `Λ^a ⊗ Z[γ]`,
/// with `Λ^a` realised by square-free `y` monomials of degree `a`.
fn row_relation_basis(base: &BaseQuotient, a: usize) -> Result<(Arc<Ring>, Vec<Polynomial>), SsError> {
    let n = base.n;
    if a > n {
        return Err(SsError::OutOfRange(format!("row {a} for rank {n}")));
    }
    let yr = y_ring(&base.ring, n)?;
    let mut gens = Vec::new();
    for mask in (0u32..(1 << n)).filter(|m| m.count_ones() as usize == a) {
        let ys = GradedElement::term(Shape::new(vec![0; n], mask), base.ring.constant(1), n);
        for r in base.basis.generators() {
            gens.push(to_y_poly(&ys.mul_base(r), &yr)?);
        }
    }
    if a >= 1 {
        for mask in (0u32..(1 << n)).filter(|m| m.count_ones() as usize == a - 1) {
            let ys = GradedElement::term(Shape::new(vec![0; n], mask), base.ring.constant(1), n);
            for k in 1..=n {
                let g = to_y_poly(&base.differential(k).mul(&ys), &yr)?;
                if !g.is_zero() {
                    gens.push(g);
                }
            }
        }
    }
    let w: Vec<u32> = (0..yr.nvars()).map(|i| u32::from(i < n)).collect();
    let gb = groebner(&gens, &yr, &Completion::truncated(vec![DegreeBound::new(w, a as u32)]))?;
    Ok((yr, gb.into_generators()))
}

/// Groups of the `x`-free row `a` read off a strong Gröbner basis of the
/// relation module `Λ^a ⊗ I + Σ_k D_k Λ^{a-1}` inside `Λ^a ⊗ Z[γ]`.
///
/// For each monomial `m` let `c_m` be the gcd of the leading coefficients of
/// basis elements whose leading term divides `m`. Monomials with `c_m ≠ 1`
/// span the quotient, and the relations are `c_m m + NF(tail)`; Smith
/// invariants of that matrix give the group in each bidegree.
pub fn x_free_groups_gb(base: &BaseQuotient, a: usize) -> Result<BTreeMap<Bidegree, QuotientShape>, SsError> {
    let n = base.n;
    let (yr, gb) = row_relation_basis(base, a)?;
    let gb = gb.as_slice();
    let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == a).collect();

    let mut out = BTreeMap::new();
    for d in 0..=base.top_degree() {
        let mut spanning: Vec<(PowerProduct, BigInt)> = Vec::new();
        for &mask in &masks {
            for alpha in freeloop_core::symcomb::compositions(n, d) {
                let mut e: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                e.extend(alpha);
                let m = PowerProduct::from_exponents(e);
                let c = gb
                    .iter()
                    .filter(|g| g.lt().divides(&m))
                    .fold(BigInt::zero(), |acc, g| num_integer::Integer::gcd(&acc, g.lc()));
                if !c.is_one() {
                    spanning.push((m, c));
                }
            }
        }
        spanning.sort_by(|x, y| x.0.cmp(&y.0));
        let pos: HashMap<&PowerProduct, usize> = spanning.iter().enumerate().map(|(i, (m, _))| (m, i)).collect();
        let mut rows = Vec::new();
        for (m, c) in &spanning {
            if c.is_zero() {
                continue;
            }
            let g = gb
                .iter()
                .find(|g| g.lt().divides(m) && g.lc() == c)
                .ok_or_else(|| SsError::OutOfRange(format!("basis is not strong at {m:?}")))?;
            let shift = m.div(g.lt()).expect("divides");
            let lead = Polynomial::monomial(&yr, c.clone(), m.clone());
            let tail = &g.mul_term(&BigInt::one(), &shift) - &lead;
            let rel = &lead + &normal_form(&tail, gb);
            let mut row = vec![BigInt::zero(); spanning.len()];
            for t in rel.terms() {
                let i = pos.get(&t.pp).ok_or_else(|| SsError::OutOfRange("relation leaves the spanning set".into()))?;
                row[*i] += &t.coeff;
            }
            rows.push(row);
        }
        let dim = spanning.len();
        let shape = Lattice::full(dim).quotient(&Lattice::span(dim, &rows));
        out.insert((2 * d, a as u32), shape);
    }
    Ok(out)
}

/// Groups of the `x`-free row `a` on the last page: the image of the
/// `x`-free basis vectors, i.e. `F / (B ∩ F)` for the `x`-free span `F`
/// (every `x`-free element is a permanent cycle).
pub fn x_free_groups_page(fp: &FinalPage, a: usize) -> BTreeMap<Bidegree, QuotientShape> {
    let e2 = &fp.e2;
    let mut out = BTreeMap::new();
    for ((p, q), c) in fp.reported() {
        if *q as usize != a {
            continue;
        }
        let cell = &e2.cells[&(*p, *q)];
        let free_idx: Vec<usize> = (0..cell.dim()).filter(|&i| !cell.basis[i].0.has_x()).collect();
        if free_idx.is_empty() {
            continue;
        }
        let inclusion: Vec<Vec<BigInt>> = free_idx
            .iter()
            .map(|&i| (0..cell.dim()).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let full = Lattice::full(free_idx.len());
        let hit = full.preimage_within(&inclusion, &c.boundaries);
        out.insert((*p, *q), full.quotient(&hit));
    }
    out
}

/// Compares both readings of every `x`-free row within the cap; returns the
/// first disagreeing bidegree.
pub fn x_free_mismatch(fp: &FinalPage) -> Result<Option<Bidegree>, SsError> {
    for a in 0..=fp.e2.n {
        let mut gb = x_free_groups_gb(&fp.e2.base, a)?;
        gb.retain(|(p, q), _| p + q <= fp.e2.cap);
        let page = x_free_groups_page(fp, a);
        if let Some(k) = gb.keys().chain(page.keys()).find(|k| gb.get(k) != page.get(k)) {
            return Ok(Some(*k));
        }
    }
    Ok(None)
}

/// Collects torsion orders from per-bidegree groups.
pub fn torsion_of(groups: &BTreeMap<Bidegree, QuotientShape>) -> TorsionSummary {
    let mut t = TorsionSummary::default();
    for ((p, q), g) in groups {
        for d in &g.torsion {
            t.add(d.to_u64().expect("torsion order fits in u64"), p + q);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_quotients() {
        let b = BaseQuotient::new(3).unwrap();
        assert_eq!(b.rank(), 24);
        assert_eq!(b.top_degree(), 6);
        let dims: Vec<usize> = (0..=6).map(|d| b.monomials(d).len()).collect();
        assert_eq!(dims, vec![1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(BaseQuotient::new(1).unwrap().rank(), 2);
        assert_eq!(BaseQuotient::new(2).unwrap().rank(), 6);
        assert_eq!(BaseQuotient::new(4).unwrap_err(), SsError::Unsupported(4));
    }

    #[test]
    fn differential_matches_closed_form() {
        let b = BaseQuotient::new(3).unwrap();
        let yr = y_ring(&b.ring, 3).unwrap();
        let d = to_y_poly(&b.differential(1), &yr).unwrap();
        assert_eq!(d, yr.parse("y1*g1 - y2*g2 - y3*(4*gb + g1 + g2)").unwrap());
    }

    #[test]
    fn shapes() {
        assert_eq!(shapes_of_degree(1, 3).len(), 1);
        let s = shapes_of_degree(3, 3);
        // (x2) y_i for three i, and y1 y2 y3
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|s| s.fibre_degree() == 3));
    }

    #[test]
    fn cap_guard() {
        assert_eq!(init_e2(3, 11).unwrap_err(), SsError::CapTooSmall { cap: 11, needed: 12 });
        assert!(init_e2(3, 12).is_ok());
    }

    #[test]
    fn first_row_matrix() {
        // d^2 on (x2)_1 at p = 0 sends it to D_1, a combination of y_i g
        let e2 = init_e2(3, 12).unwrap();
        let m = e2.row_matrix(1, (0, 2)).unwrap();
        assert_eq!(m.nrows(), 1 + 3);
        let x_row = e2.cell((0, 2)).unwrap().basis.iter().position(|(s, _)| s.has_x()).unwrap();
        let nonzero = m.rows[x_row].iter().filter(|c| !c.is_zero()).count();
        assert!(nonzero >= 3);
        assert!(e2.row_matrix(2, (0, 2)).unwrap().is_nil());
    }

    #[test]
    fn rank_one_run() {
        let fp = assemble_final_page(1, 4).unwrap();
        assert!(fp.consistent(), "{:?}", fp.checks);
        assert!(dd_violations(&fp.e2).is_empty());
        // degree 0: Z; degree 1: y1; degree 2: gb
        let last = fp.last();
        assert_eq!(last.cells[&(0, 0)].shape(), QuotientShape { free_rank: 1, torsion: vec![] });
        assert_eq!(last.cells[&(2, 1)].shape().torsion, vec![BigInt::from(2)]);
    }
}
