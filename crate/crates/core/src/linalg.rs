//! Exact integer linear algebra on row lattices: Hermite forms, kernels,
//! Smith invariants and quotient structure.
//!
//! Every routine first runs on `i128` with checked arithmetic and falls back
//! to `BigInt` when an intermediate value overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
struct Overflow;

trait Entry: Clone + PartialEq + Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_gt(&self, other: &Self) -> bool;
    fn negated(&self) -> Result<Self, Overflow>;
    fn floor_div(&self, d: &Self) -> Result<Self, Overflow>;
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow>;
    fn plus(&self, b: &Self) -> Result<Self, Overflow>;
    fn rem_is_zero(&self, d: &Self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_gt(&self, other: &Self) -> bool {
        self.unsigned_abs() > other.unsigned_abs()
    }
    fn negated(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn floor_div(&self, d: &Self) -> Result<Self, Overflow> {
        if *self == i128::MIN {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, d))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p)).ok_or(Overflow)
    }
    fn plus(&self, b: &Self) -> Result<Self, Overflow> {
        self.checked_add(*b).ok_or(Overflow)
    }
    fn rem_is_zero(&self, d: &Self) -> bool {
        self.checked_rem(*d).is_none_or(|r| r == 0)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        // leave headroom so that a single product of two inputs cannot overflow silently
        b.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 100))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_gt(&self, other: &Self) -> bool {
        self.magnitude() > other.magnitude()
    }
    fn negated(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn floor_div(&self, d: &Self) -> Result<Self, Overflow> {
        Ok(Integer::div_floor(self, d))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        Ok(self - q * b)
    }
    fn plus(&self, b: &Self) -> Result<Self, Overflow> {
        Ok(self + b)
    }
    fn rem_is_zero(&self, d: &Self) -> bool {
        Zero::is_zero(&(self % d))
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn convert<T: Entry>(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<T>>> {
    rows.iter().map(|r| r.iter().map(T::from_big).collect()).collect()
}

fn back<T: Entry>(rows: Vec<Vec<T>>) -> Vec<Vec<BigInt>> {
    rows.into_iter().map(|r| r.iter().map(T::to_big).collect()).collect()
}

/// Runs `f` on `i128` entries, retrying with `BigInt` on overflow.
fn with_fallback<R>(
    rows: &[Vec<BigInt>],
    small: impl Fn(Vec<Vec<i128>>) -> Result<R, Overflow>,
    big: impl Fn(Vec<Vec<BigInt>>) -> Result<R, Overflow>,
) -> R {
    if let Some(m) = convert::<i128>(rows) {
        if let Ok(r) = small(m) {
            return r;
        }
    }
    big(rows.to_vec()).expect("BigInt arithmetic cannot overflow")
}

fn row_sub_mul<T: Entry>(rows: &mut [Vec<T>], target: usize, q: &T, src: usize, from: usize) -> Result<(), Overflow> {
    if q.is_nil() {
        return Ok(());
    }
    let (a, b) = if target < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for k in from..a.len() {
        if !b[k].is_nil() {
            a[k] = a[k].sub_mul(q, &b[k])?;
        }
    }
    Ok(())
}

fn row_neg<T: Entry>(row: &mut [T]) -> Result<(), Overflow> {
    for v in row.iter_mut() {
        if !v.is_nil() {
            *v = v.negated()?;
        }
    }
    Ok(())
}

/// Row echelon (Hermite) form pivoting only on the first `pivot_cols`
/// columns. Returns the rank; rows `rank..` are zero on those columns.
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
fn echelon<T: Entry>(rows: &mut [Vec<T>], pivot_cols: usize) -> Result<usize, Overflow> {
    let m = rows.len();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !rows[i][col].is_nil() && best.is_none_or(|b| rows[b][col].abs_gt(&rows[i][col])) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut clean = true;
            for i in r + 1..m {
                if rows[i][col].is_nil() {
                    continue;
                }
                let q = rows[i][col].floor_div(&rows[r][col])?;
                row_sub_mul(rows, i, &q, r, col)?;
                if !rows[i][col].is_nil() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][col].is_nil() {
            continue;
        }
        if rows[r][col].is_neg() {
            row_neg(&mut rows[r])?;
        }
        for i in 0..r {
            if rows[i][col].is_nil() {
                continue;
            }
            let q = rows[i][col].floor_div(&rows[r][col])?;
            row_sub_mul(rows, i, &q, r, col)?;
        }
        r += 1;
    }
    Ok(r)
}

fn hermite_t<T: Entry>(mut rows: Vec<Vec<T>>, ncols: usize) -> Result<Vec<Vec<T>>, Overflow> {
    let rank = echelon(&mut rows, ncols)?;
    rows.truncate(rank);
    Ok(rows)
}

/// Hermite normal form of the row lattice spanned by `rows` (nonzero rows only).
pub fn hermite(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    with_fallback(rows, |m| hermite_t(m, ncols).map(back), |m| hermite_t(m, ncols).map(back))
}

fn kernel_t<T: Entry>(rows: Vec<Vec<T>>, ncols: usize) -> Result<Vec<Vec<T>>, Overflow> {
    let m = rows.len();
    let mut aug: Vec<Vec<T>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..m).map(|j| if i == j { T::unit() } else { T::nil() }));
            r
        })
        .collect();
    let rank = echelon(&mut aug, ncols)?;
    let ker: Vec<Vec<T>> = aug.drain(rank..).map(|r| r[ncols..].to_vec()).collect();
    hermite_t(ker, m)
}

/// Basis (in Hermite form) of `{c : c * M = 0}` for the matrix with the given rows.
pub fn left_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    with_fallback(rows, |m| kernel_t(m, ncols).map(back), |m| kernel_t(m, ncols).map(back))
}

fn smith_t<T: Entry>(mut a: Vec<Vec<T>>, ncols: usize) -> Result<Vec<T>, Overflow> {
    let m = a.len();
    let n = ncols;
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        // choose the smallest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_nil() && best.is_none_or(|(bi, bj)| a[bi][bj].abs_gt(&a[i][j])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut done = true;
            for i in t + 1..m {
                if a[i][t].is_nil() {
                    continue;
                }
                let q = a[i][t].floor_div(&a[t][t])?;
                row_sub_mul(&mut a, i, &q, t, t)?;
                if !a[i][t].is_nil() {
                    done = false;
                    a.swap(t, i);
                }
            }
            for j in t + 1..n {
                if a[t][j].is_nil() {
                    continue;
                }
                let q = a[t][j].floor_div(&a[t][t])?;
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_nil() {
                        row[j] = row[j].sub_mul(&q, &row[t])?;
                    }
                }
                if !a[t][j].is_nil() {
                    done = false;
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !done {
                continue;
            }
            // pivot must divide the whole trailing block
            let p = a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].rem_is_zero(&p)));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t][t..n].iter_mut().zip(&tail[0][t..n]) {
                        *x = x.plus(y)?;
                    }
                }
                None => break,
            }
        }
        let p = if a[t][t].is_neg() { a[t][t].negated()? } else { a[t][t].clone() };
        diag.push(p);
    }
    Ok(diag)
}

/// Nonzero Smith invariants `d1 | d2 | ...` of the matrix with the given rows.
pub fn smith_invariants(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    if rows.is_empty() || ncols == 0 {
        return Vec::new();
    }
    let mut d = with_fallback(
        rows,
        |m| smith_t(m, ncols).map(|v| v.iter().map(Entry::to_big).collect::<Vec<_>>()),
        |m| smith_t(m, ncols),
    );
    // the elimination above gives a diagonal form; normalize to divisibility chain
    normalize_chain(&mut d);
    d
}

fn normalize_chain(d: &mut [BigInt]) {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
}

/// Coordinates of `v` in an echelon basis (as produced by [`hermite`]), if `v` lies in its span.
pub fn solve_echelon(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let col = b.iter().position(|x| !x.is_nil()).expect("echelon rows are nonzero");
        if rest[..col].iter().any(|x| !x.is_nil()) {
            return None;
        }
        let (q, r) = rest[col].div_rem(&b[col]);
        if !r.is_nil() {
            return None;
        }
        if !q.is_nil() {
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_nil() {
                    *x -= &q * y;
                }
            }
        }
        coords.push(q);
    }
    if rest.iter().all(|x| x.is_nil()) {
        Some(coords)
    } else {
        None
    }
}

/// `c * M` for a row vector `c` and matrix rows `M`.
pub fn vec_mat(c: &[BigInt], m: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); ncols];
    for (ci, row) in c.iter().zip(m) {
        if ci.is_nil() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_nil() {
                *o += ci * x;
            }
        }
    }
    out
}

/// A sublattice of `Z^dim`, stored as a Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice { dim, basis }
    }

    pub fn span(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        Lattice { dim, basis: hermite(gens, dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_echelon(&self.basis, v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Lattice::span(self.dim, &g)
    }

    /// Image under the map whose rows give the images of the unit vectors.
    pub fn image(&self, map: &[Vec<BigInt>], target_dim: usize) -> Lattice {
        let gens: Vec<Vec<BigInt>> = self.basis.iter().map(|b| vec_mat(b, map, target_dim)).collect();
        Lattice::span(target_dim, &gens)
    }

    /// `{x in self : x * map in target}`.
    pub fn preimage_within(&self, map: &[Vec<BigInt>], target: &Lattice) -> Lattice {
        let k = self.basis.len();
        if k == 0 {
            return self.clone();
        }
        let tdim = target.dim;
        let mut stacked: Vec<Vec<BigInt>> = self.basis.iter().map(|b| vec_mat(b, map, tdim)).collect();
        stacked.extend(target.basis.iter().cloned());
        let ker = left_kernel(&stacked, tdim);
        let gens: Vec<Vec<BigInt>> = ker.iter().map(|c| vec_mat(&c[..k], &self.basis, self.dim)).collect();
        Lattice::span(self.dim, &gens)
    }

    /// Structure of `self / sub` for `sub` contained in `self`: free rank and torsion invariants (> 1).
    pub fn quotient(&self, sub: &Lattice) -> QuotientShape {
        let k = self.basis.len();
        let coords: Vec<Vec<BigInt>> = sub
            .basis
            .iter()
            .map(|v| solve_echelon(&self.basis, v).expect("sublattice not contained"))
            .collect();
        let inv = smith_invariants(&coords, k);
        let free_rank = k - inv.len();
        let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
        QuotientShape { free_rank, torsion }
    }
}

/// Abelian group `Z^free_rank + sum Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuotientShape {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Exact integer matrix with labelled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub rows: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        let rows = vec![vec![BigInt::zero(); col_labels.len()]; row_labels.len()];
        IntegerMatrix { row_labels, col_labels, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_nil(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|x| x.is_nil()))
    }

    pub fn rank(&self) -> usize {
        hermite(&self.rows, self.ncols()).len()
    }

    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        left_kernel(&self.rows, self.ncols())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hermite_small() {
        let h = hermite(&m(&[&[2, 4], &[3, 5]]), 2);
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_small() {
        let k = left_kernel(&m(&[&[1, 2], &[2, 4], &[0, 1]]), 2);
        assert_eq!(k.len(), 1);
        assert_eq!(vec_mat(&k[0], &m(&[&[1, 2], &[2, 4], &[0, 1]]), 2), vec![BigInt::zero(); 2]);
    }

    #[test]
    fn smith_small() {
        assert_eq!(smith_invariants(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3), m(&[&[2, 6, 12]])[0]);
        assert_eq!(smith_invariants(&m(&[&[4, 0], &[0, 6]]), 2), m(&[&[2, 12]])[0]);
    }

    #[test]
    fn quotient_shape() {
        let full = Lattice::full(3);
        let sub = Lattice::span(3, &m(&[&[2, 0, 0], &[0, 4, 0]]));
        let q = full.quotient(&sub);
        assert_eq!(q.free_rank, 1);
        assert_eq!(q.torsion, m(&[&[2, 4]])[0]);
    }

    #[test]
    fn preimage() {
        // map Z^2 -> Z^1, (a, b) -> 2a + 3b, target 6Z
        let map = m(&[&[2], &[3]]);
        let t = Lattice::span(1, &m(&[&[6]]));
        let p = Lattice::full(2).preimage_within(&map, &t);
        for b in p.basis() {
            assert!(t.contains(&vec_mat(b, &map, 1)));
        }
        // index of preimage in Z^2 is 6
        let q = Lattice::full(2).quotient(&p);
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion, m(&[&[6]])[0]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = BigInt::from(1u128 << 99);
        let rows = vec![vec![big.clone(), BigInt::from(3)], vec![big.clone() + 1, BigInt::from(5)]];
        let h = hermite(&rows, 2);
        // determinant check: |det| preserved
        let det = &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0];
        assert_eq!(&h[0][0] * &h[1][1], det.abs());
    }
}
