//! Kernels of `d^{2k}` on the rows `(x_{2k})_1 Λ^a Z[γ]`, computed three
//! independent ways.
//!
//! The map is `φ(e_S) = D_k y_S` into `Λ^{a+1} Z[γ]` modulo the relations
//! that hold on the page where `d^{2k}` acts: `Λ^{a+1} ⊗ I` and the images
//! `D_j Λ^a` of the earlier differentials.
//!
//! * elimination: a Gröbner basis of `{φ(e_S) + z_S} ∪ relations` under
//!   lex `y > z > γ`; its `y`-free elements are the kernel.
//! * intersection: `im φ ∩ relations`, each generator pulled back through a
//!   tagged basis of `{φ(e_S) + z_S}` by recorded reduction, together with
//!   the syzygies of `φ`.
//! * lattices: the integer kernel of the row matrix against the page's
//!   boundary lattice.

use std::sync::Arc;

use freeloop_core::symcomb::compositions;
use freeloop_core::{
    groebner, ideal_equal, ideal_intersect, track_reduction, Completion, DegreeBound, Lattice, MonomialOrder,
    Polynomial, PowerProduct, Ring, VarContext,
};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::engine::{Bidegree, E2Page, FinalPage};
use crate::error::SsError;
use crate::graded::{to_y_poly, y_ring, GradedElement, Shape};

/// Comparison of the three kernel computations on one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowKernel {
    pub k: usize,
    pub a: usize,
    pub elimination: Vec<String>,
    pub intersection: Vec<String>,
    /// The two Gröbner routes generate the same module.
    pub routes_equal: bool,
    /// Base degrees where a Gröbner route and the lattice kernel differ.
    pub lattice_mismatch: Vec<u32>,
    pub degrees_checked: u32,
}

impl RowKernel {
    pub fn agrees(&self) -> bool {
        self.routes_equal && self.lattice_mismatch.is_empty()
    }
}

struct RowSetup {
    n: usize,
    k: usize,
    a: usize,
    masks: Vec<u32>,
    yr: Arc<Ring>,
    tagged: Arc<Ring>,
    image: Vec<Polynomial>,
    relations: Vec<Polynomial>,
    bound: u32,
}

fn masks_of(n: usize, a: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == a).collect()
}

impl RowSetup {
    fn new(e2: &E2Page, k: usize, a: usize) -> Result<RowSetup, SsError> {
        let n = e2.n;
        if !(1..=n).contains(&k) || a >= n {
            return Err(SsError::OutOfRange(format!("row (k={k}, a={a}) for rank {n}")));
        }
        let base = &e2.base;
        let yr = y_ring(&base.ring, n)?;
        let masks = masks_of(n, a);
        let ys = |mask: u32| GradedElement::term(Shape::new(vec![0; n], mask), base.ring.constant(1), n);
        let image: Vec<Polynomial> =
            masks.iter().map(|&m| to_y_poly(&e2.differentials[k - 1].mul(&ys(m)), &yr)).collect::<Result<_, _>>()?;
        let mut relations = Vec::new();
        for t in masks_of(n, a + 1) {
            for h in base.basis.generators() {
                relations.push(to_y_poly(&ys(t).mul_base(h), &yr)?);
            }
        }
        for j in 1..k {
            for &m in &masks {
                let p = to_y_poly(&e2.differentials[j - 1].mul(&ys(m)), &yr)?;
                if !p.is_zero() {
                    relations.push(p);
                }
            }
        }
        let mut names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        names.extend((1..=masks.len()).map(|i| format!("z{i}")));
        names.extend(base.ring.ctx().names().iter().cloned());
        let ctx = VarContext::new(&names)?;
        let shift = n + masks.len();
        let mut ranking: Vec<usize> = (0..shift).collect();
        ranking.extend(base.ring.order().ranking().iter().map(|&i| i + shift));
        let tagged = Ring::new(ctx, MonomialOrder::from_ranking(ranking, 0)?)?;
        let bound = base.top_degree() + k as u32;
        Ok(RowSetup { n, k, a, masks, yr, tagged, image, relations, bound })
    }

    fn ny(&self) -> usize {
        self.n
    }

    fn nz(&self) -> usize {
        self.masks.len()
    }

    /// `y` ring variables into the tagged ring.
    fn y_map(&self) -> Vec<usize> {
        let (ny, nz) = (self.ny(), self.nz());
        (0..self.yr.nvars()).map(|i| if i < ny { i } else { i + nz }).collect()
    }

    fn tagged_opts(&self) -> Completion {
        let (ny, nz) = (self.ny(), self.nz());
        let total = self.tagged.nvars();
        let fibre: Vec<u32> = (0..total)
            .map(|i| {
                if i < ny {
                    1
                } else if i < ny + nz {
                    self.a as u32 + 1
                } else {
                    0
                }
            })
            .collect();
        let gamma: Vec<u32> = (0..total)
            .map(|i| {
                if i < ny {
                    0
                } else if i < ny + nz {
                    self.k as u32
                } else {
                    1
                }
            })
            .collect();
        Completion::truncated(vec![DegreeBound::new(fibre, self.a as u32 + 1), DegreeBound::new(gamma, self.bound)])
    }

    fn y_opts(&self) -> Completion {
        let ny = self.ny();
        let total = self.yr.nvars();
        let fibre: Vec<u32> = (0..total).map(|i| u32::from(i < ny)).collect();
        let gamma: Vec<u32> = (0..total).map(|i| u32::from(i >= ny)).collect();
        Completion::truncated(vec![
            DegreeBound::new(fibre, self.a as u32 + 1),
            DegreeBound::new(gamma, self.bound),
        ])
    }

    fn tags(&self) -> Vec<Polynomial> {
        (0..self.nz()).map(|i| self.tagged.var_at(self.ny() + i)).collect()
    }

    fn is_y_free(&self, p: &Polynomial) -> bool {
        p.terms().iter().all(|t| t.pp.exponents()[..self.ny()].iter().all(|&e| e == 0))
    }

    fn tagged_generators(&self) -> Vec<Polynomial> {
        let map = self.y_map();
        self.image.iter().zip(self.tags()).map(|(f, z)| &f.embed(&self.tagged, &map) + &z).collect()
    }

    /// Kernel from the `y`-free part of one elimination basis.
    fn elimination(&self) -> Result<Vec<Polynomial>, SsError> {
        let map = self.y_map();
        let mut gens = self.tagged_generators();
        gens.extend(self.relations.iter().map(|r| r.embed(&self.tagged, &map)));
        let gb = groebner(&gens, &self.tagged, &self.tagged_opts())?;
        Ok(gb.into_generators().into_iter().filter(|g| self.is_y_free(g)).collect())
    }

    /// Kernel from preimages of `im φ ∩ relations` plus the syzygies of `φ`.
    fn intersection(&self) -> Result<Vec<Polynomial>, SsError> {
        if self.image.iter().all(Polynomial::is_zero) {
            return Ok(self.tags());
        }
        let nonzero: Vec<Polynomial> = self.image.iter().filter(|p| !p.is_zero()).cloned().collect();
        let meet = ideal_intersect(&nonzero, &self.relations, &self.yr, &self.y_opts())?;
        let tagged_gb = groebner(&self.tagged_generators(), &self.tagged, &self.tagged_opts())?;
        let basis = tagged_gb.generators();
        let map = self.y_map();
        let mut out: Vec<Polynomial> = basis.iter().filter(|g| self.is_y_free(g)).cloned().collect();
        for f in meet.generators() {
            let f = f.embed(&self.tagged, &map);
            let trace = track_reduction(&f, basis);
            if trace.replay(basis) != f || !self.is_y_free(&trace.remainder) {
                return Err(SsError::RouteMismatch(format!("no preimage for {f} on row (k={}, a={})", self.k, self.a)));
            }
            out.push(trace.remainder.neg());
        }
        Ok(out.into_iter().filter(|p| !p.is_zero()).collect())
    }
}

/// Z-span, in the basis of the source cell, of all base-monomial multiples
/// of module elements `Σ c_S z_S` in base degree `d`.
fn expand_in_degree(
    e2: &E2Page,
    setup: &RowSetup,
    gens: &[Polynomial],
    d: u32,
    key: Bidegree,
    sub: &[usize],
) -> Result<Lattice, SsError> {
    let base = &e2.base;
    let (ny, nz) = (setup.ny(), setup.nz());
    let nb = base.ring.nvars();
    let mut vectors = Vec::new();
    for g in gens {
        // split into z-components
        let mut parts = vec![Vec::new(); nz];
        let mut gdeg = None;
        for t in g.terms() {
            let e = t.pp.exponents();
            let zi = (0..nz).find(|&i| e[ny + i] == 1).ok_or_else(|| {
                SsError::RouteMismatch(format!("kernel element {g} is not linear in the tags"))
            })?;
            let gamma = e[ny + nz..].to_vec();
            gdeg = Some(gamma.iter().sum::<u32>());
            parts[zi].push((t.coeff.clone(), PowerProduct::from_exponents(gamma)));
        }
        let Some(gdeg) = gdeg else { continue };
        if gdeg > d {
            continue;
        }
        for mu in compositions(nb, d - gdeg) {
            let mu = PowerProduct::from_exponents(mu);
            let mut elem = GradedElement::zero(&base.ring, e2.n);
            for (i, terms) in parts.iter().enumerate() {
                if terms.is_empty() {
                    continue;
                }
                let c = Polynomial::from_terms(&base.ring, terms.iter().map(|(c, p)| (c.clone(), p.mul(&mu))));
                let mut xs = vec![0; e2.n];
                xs[setup.k - 1] = 1;
                elem = elem.add(&GradedElement::term(Shape::new(xs, setup.masks[i]), c, e2.n));
            }
            let v = e2.coordinates(&elem, key)?;
            vectors.push(sub.iter().map(|&j| v[j].clone()).collect::<Vec<BigInt>>());
        }
    }
    Ok(Lattice::span(sub.len(), &vectors))
}

/// Runs all three routes on one row and compares them degree by degree.
pub fn row_kernel(fp: &FinalPage, k: usize, a: usize) -> Result<RowKernel, SsError> {
    let e2 = &fp.e2;
    let setup = RowSetup::new(e2, k, a)?;
    let elim = setup.elimination()?;
    let inter = setup.intersection()?;
    let routes_equal = ideal_equal(&elim, &inter, &setup.tagged, &setup.tagged_opts())?;

    let page = &fp.pages[k - 1];
    let mut lattice_mismatch = Vec::new();
    let mut checked = 0;
    for d in 0..=e2.base.top_degree() {
        let key = (2 * d, 2 * k as u32 + a as u32);
        if key.0 + key.1 > e2.cap {
            break;
        }
        let Some(cell) = e2.cell(key) else { continue };
        let mut xs = vec![0; e2.n];
        xs[k - 1] = 1;
        let sub: Vec<usize> = (0..cell.dim())
            .filter(|&i| cell.basis[i].0.xs == xs && cell.basis[i].0.ys.count_ones() as usize == a)
            .collect();
        let m = e2.row_matrix(k, key)?;
        let rows: Vec<Vec<BigInt>> = sub.iter().map(|&i| m.rows[i].clone()).collect();
        // past the top base degree the target group is zero
        let lattice = match E2Page::target_of(key, k).and_then(|t| page.cells.get(&t)) {
            Some(t) => Lattice::full(sub.len()).preimage_within(&rows, &t.boundaries),
            None => Lattice::full(sub.len()),
        };
        let l1 = expand_in_degree(e2, &setup, &elim, d, key, &sub)?;
        let l2 = expand_in_degree(e2, &setup, &inter, d, key, &sub)?;
        if l1 != lattice || l2 != lattice {
            lattice_mismatch.push(d);
        }
        checked += 1;
    }
    let show = |v: &[Polynomial]| v.iter().map(|p| p.to_string()).collect();
    Ok(RowKernel {
        k,
        a,
        elimination: show(&elim),
        intersection: show(&inter),
        routes_equal,
        lattice_mismatch,
        degrees_checked: checked,
    })
}

/// Every row `(k, a)` with `1 <= k <= n` and `0 <= a < n`.
pub fn all_row_kernels(fp: &FinalPage) -> Result<Vec<RowKernel>, SsError> {
    let n = fp.e2.n;
    let rows: Vec<(usize, usize)> = (1..=n).flat_map(|k| (0..n).map(move |a| (k, a))).collect();
    rows.par_iter().map(|&(k, a)| row_kernel(fp, k, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::assemble_final_page;

    #[test]
    fn rank_two_rows_agree() {
        let fp = assemble_final_page(2, 12).unwrap();
        let rows = all_row_kernels(&fp).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.agrees(), "row (k={}, a={}) mismatch at {:?}", r.k, r.a, r.lattice_mismatch);
            assert!(r.degrees_checked > 0);
        }
    }

    #[test]
    fn rejects_rows_outside_range() {
        let fp = assemble_final_page(1, 4).unwrap();
        assert!(row_kernel(&fp, 2, 0).is_err());
        assert!(row_kernel(&fp, 1, 1).is_err());
    }
}
