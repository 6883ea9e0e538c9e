//! Elements of `Γ[x_2, …, x_2n] ⊗ Λ[y_1, …, y_n] ⊗ base`, the second page of
//! the spectral sequence before any differential is taken.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use freeloop_core::symcomb::binomial;
use freeloop_core::{normal_form, MonomialOrder, Polynomial, PowerProduct, Ring};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::SsError;

/// Divided-power multi-index and exterior support of a basis element.
///
/// `xs[k]` is the divided-power index of `x_{2(k+1)}`; bit `i` of `ys` is `y_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub xs: Vec<u32>,
    pub ys: u32,
}

impl Shape {
    pub fn unit(n: usize) -> Self {
        Shape { xs: vec![0; n], ys: 0 }
    }

    pub fn new(xs: Vec<u32>, ys: u32) -> Self {
        Shape { xs, ys }
    }

    /// Degree contributed by the loop-space factors: `|Y| + Σ 2k m_k`.
    pub fn fibre_degree(&self) -> u32 {
        self.ys.count_ones() + self.xs.iter().enumerate().map(|(k, &m)| 2 * (k as u32 + 1) * m).sum::<u32>()
    }

    pub fn has_x(&self) -> bool {
        self.xs.iter().any(|&m| m > 0)
    }
}

/// Sign of `y_a * y_b` relative to the ascending product `y_{a ∪ b}`:
/// `Some(true)` for negative, `None` when the supports overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

fn format_shape(s: &Shape) -> String {
    let mut parts = Vec::new();
    for (k, &m) in s.xs.iter().enumerate() {
        if m > 0 {
            parts.push(format!("(x{})_{}", 2 * (k + 1), m));
        }
    }
    for i in 0..32 {
        if s.ys >> i & 1 == 1 {
            parts.push(format!("y{}", i + 1));
        }
    }
    parts.join("*")
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedElement {
    ring: Arc<Ring>,
    n: usize,
    terms: BTreeMap<Shape, Polynomial>,
}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedElement({self})")
    }
}

impl GradedElement {
    pub fn zero(ring: &Arc<Ring>, n: usize) -> Self {
        GradedElement { ring: ring.clone(), n, terms: BTreeMap::new() }
    }

    pub fn term(shape: Shape, poly: Polynomial, n: usize) -> Self {
        assert_eq!(shape.xs.len(), n, "shape has one index per divided-power generator");
        let mut e = GradedElement::zero(poly.ring(), n);
        if !poly.is_zero() {
            e.terms.insert(shape, poly);
        }
        e
    }

    pub fn base(poly: Polynomial, n: usize) -> Self {
        GradedElement::term(Shape::unit(n), poly, n)
    }

    pub fn one(ring: &Arc<Ring>, n: usize) -> Self {
        GradedElement::base(ring.constant(1), n)
    }

    /// `y_i`, 1-based.
    pub fn y(ring: &Arc<Ring>, n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "y index {i} out of range");
        GradedElement::term(Shape::new(vec![0; n], 1 << (i - 1)), ring.constant(1), n)
    }

    /// `(x_{2k})_m`, with `k` 1-based.
    pub fn x(ring: &Arc<Ring>, n: usize, k: usize, m: u32) -> Self {
        assert!((1..=n).contains(&k), "x index {k} out of range");
        let mut xs = vec![0; n];
        xs[k - 1] = m;
        GradedElement::term(Shape::new(xs, 0), ring.constant(1), n)
    }

    /// Exterior product of the listed `y`s in the given order.
    pub fn y_product(ring: &Arc<Ring>, n: usize, idx: &[usize]) -> Self {
        idx.iter().fold(GradedElement::one(ring, n), |acc, &i| acc.mul(&GradedElement::y(ring, n, i)))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Shape, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Base coefficient of the given shape (zero when absent).
    pub fn coefficient(&self, shape: &Shape) -> Polynomial {
        self.terms.get(shape).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn insert_add(&mut self, shape: Shape, poly: Polynomial) {
        if poly.is_zero() {
            return;
        }
        match self.terms.remove(&shape) {
            Some(old) => {
                let s = &old + &poly;
                if !s.is_zero() {
                    self.terms.insert(shape, s);
                }
            }
            None => {
                self.terms.insert(shape, poly);
            }
        }
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (s, p) in &other.terms {
            out.insert_add(s.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &GradedElement) -> GradedElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> GradedElement {
        let mut out = GradedElement::zero(&self.ring, self.n);
        if c.is_zero() {
            return out;
        }
        for (s, p) in &self.terms {
            out.terms.insert(s.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every base coefficient by `f`.
    pub fn mul_base(&self, f: &Polynomial) -> GradedElement {
        let mut out = GradedElement::zero(&self.ring, self.n);
        for (s, p) in &self.terms {
            out.insert_add(s.clone(), p * f);
        }
        out
    }

    /// Product in the graded-commutative algebra: divided powers multiply by
    /// `(x)_a (x)_b = C(a+b, a) (x)_{a+b}` and `y`s anticommute.
    pub fn mul(&self, other: &GradedElement) -> GradedElement {
        assert_eq!(self.n, other.n, "rank mismatch");
        let mut out = GradedElement::zero(&self.ring, self.n);
        for (s1, p1) in &self.terms {
            for (s2, p2) in &other.terms {
                let Some(neg) = wedge_sign(s1.ys, s2.ys) else { continue };
                let mut c = BigInt::one();
                let mut xs = Vec::with_capacity(self.n);
                for (&a, &b) in s1.xs.iter().zip(&s2.xs) {
                    if a > 0 && b > 0 {
                        c *= binomial(u64::from(a + b), u64::from(a));
                    }
                    xs.push(a + b);
                }
                if neg {
                    c = -c;
                }
                out.insert_add(Shape::new(xs, s1.ys | s2.ys), (p1 * p2).scale(&c));
            }
        }
        out
    }

    /// Reduces every base coefficient modulo a Gröbner basis of the base relations.
    pub fn reduce(&self, basis: &[Polynomial]) -> GradedElement {
        let mut out = GradedElement::zero(&self.ring, self.n);
        for (s, p) in &self.terms {
            out.insert_add(s.clone(), normal_form(p, basis));
        }
        out
    }

    /// `(p, q)` with `p` twice the base degree and `q` the fibre degree, when
    /// every term has the same bidegree.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut out = None;
        for (s, p) in &self.terms {
            let w = vec![1; self.ring.nvars()];
            if !p.is_homogeneous(&w) {
                return None;
            }
            let b = (2 * p.total_degree()?, s.fibre_degree());
            match out {
                None => out = Some(b),
                Some(o) if o != b => return None,
                _ => {}
            }
        }
        out
    }

    /// The derivation that sends `(x_{2k})_m` to `(x_{2k})_{m-1} · image`
    /// and kills `y`s, base classes and the other divided powers. The image
    /// is multiplied on the left of the remaining factors.
    pub fn leibniz_differential(&self, k: usize, image: &GradedElement) -> GradedElement {
        assert!((1..=self.n).contains(&k), "differential index {k} out of range");
        let mut out = GradedElement::zero(&self.ring, self.n);
        for (s, p) in &self.terms {
            if s.xs[k - 1] == 0 {
                continue;
            }
            let mut xs = s.xs.clone();
            xs[k - 1] -= 1;
            for (ds, dp) in &image.terms {
                let Some(neg) = wedge_sign(ds.ys, s.ys) else { continue };
                let mut dxs = xs.clone();
                let mut c = BigInt::one();
                for (j, &m) in ds.xs.iter().enumerate() {
                    if m > 0 && dxs[j] > 0 {
                        c *= binomial(u64::from(m + dxs[j]), u64::from(m));
                    }
                    dxs[j] += m;
                }
                if neg {
                    c = -c;
                }
                out.insert_add(Shape::new(dxs, ds.ys | s.ys), (dp * p).scale(&c));
            }
        }
        out
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let head = format_shape(s);
            match (head.is_empty(), p.len() == 1) {
                (true, _) => write!(f, "{p}")?,
                (false, true) if p.terms()[0].pp.is_one() => write!(f, "{}*{head}", p)?,
                _ => write!(f, "{head}*({p})")?,
            }
        }
        Ok(())
    }
}

/// Commutative ring `y1..yn` followed by the base variables, lex with every
/// `y` above the base and the base keeping its own ranking.
pub fn y_ring(base: &Ring, n: usize) -> Result<Arc<Ring>, SsError> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    names.extend(base.ctx().names().iter().cloned());
    let ctx = freeloop_core::VarContext::new(&names)?;
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.extend(base.order().ranking().iter().map(|&i| i + n));
    Ok(Ring::new(ctx, MonomialOrder::from_ranking(ranking, 0)?)?)
}

/// Writes an `x`-free element as a polynomial in [`y_ring`], each exterior
/// monomial becoming the ascending product of its `y`s.
pub fn to_y_poly(e: &GradedElement, yr: &Arc<Ring>) -> Result<Polynomial, SsError> {
    let n = e.n;
    if yr.nvars() != n + e.ring.nvars() {
        return Err(SsError::OutOfRange("ring does not match the element".into()));
    }
    let mut terms = Vec::new();
    for (s, p) in &e.terms {
        if s.has_x() {
            return Err(SsError::OutOfRange(format!("element has a divided-power factor: {e}")));
        }
        for t in p.terms() {
            let mut ex: Vec<u32> = (0..n).map(|i| s.ys >> i & 1).collect();
            ex.extend_from_slice(t.pp.exponents());
            terms.push((t.coeff.clone(), PowerProduct::from_exponents(ex)));
        }
    }
    Ok(Polynomial::from_terms(yr, terms))
}

/// Inverse of [`to_y_poly`]; terms with a repeated `y` vanish.
pub fn from_y_poly(f: &Polynomial, base: &Arc<Ring>, n: usize) -> GradedElement {
    let mut out = GradedElement::zero(base, n);
    for t in f.terms() {
        let ex = t.pp.exponents();
        if ex[..n].iter().any(|&e| e > 1) {
            continue;
        }
        let ys = (0..n).fold(0u32, |m, i| m | (ex[i] << i));
        let p = Polynomial::monomial(base, t.coeff.clone(), PowerProduct::from_exponents(ex[n..].to_vec()));
        out.insert_add(Shape::new(vec![0; n], ys), p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeloop_core::symcomb::tilde_ring;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(false));
        assert_eq!(wedge_sign(0b10, 0b01), Some(true));
        assert_eq!(wedge_sign(0b11, 0b01), None);
        // y2 * (y1 y3) = - y1 y2 y3
        assert_eq!(wedge_sign(0b010, 0b101), Some(true));
        // (y1 y3) * y2 = - y1 y2 y3
        assert_eq!(wedge_sign(0b101, 0b010), Some(true));
    }

    #[test]
    fn divided_powers_and_exterior_products() {
        let r = tilde_ring(3);
        let x = GradedElement::x(&r, 3, 1, 1);
        let x2 = x.mul(&x);
        assert_eq!(x2, GradedElement::x(&r, 3, 1, 2).scale(&BigInt::from(2)));
        let x3 = GradedElement::x(&r, 3, 1, 2).mul(&GradedElement::x(&r, 3, 1, 1));
        assert_eq!(x3, GradedElement::x(&r, 3, 1, 3).scale(&BigInt::from(3)));
        let y1 = GradedElement::y(&r, 3, 1);
        let y2 = GradedElement::y(&r, 3, 2);
        assert!(y1.mul(&y1).is_zero());
        assert_eq!(y2.mul(&y1), y1.mul(&y2).neg());
        assert_eq!(y1.mul(&y2).bidegree(), Some((0, 2)));
        assert_eq!(GradedElement::x(&r, 3, 3, 2).bidegree(), Some((0, 12)));
    }

    #[test]
    fn differential_on_divided_power() {
        let r = tilde_ring(3);
        let g1 = r.var("g1").unwrap();
        let d = GradedElement::y(&r, 3, 1).mul_base(&g1);
        let e = GradedElement::x(&r, 3, 1, 2).mul(&GradedElement::y(&r, 3, 2));
        let de = e.leibniz_differential(1, &d);
        // (x2)_2 y2 -> (x2)_1 y1 y2 g1
        let expect = GradedElement::x(&r, 3, 1, 1).mul(&GradedElement::y_product(&r, 3, &[1, 2])).mul_base(&g1);
        assert_eq!(de, expect);
        assert!(e.leibniz_differential(2, &d).is_zero());
        assert!(GradedElement::y_product(&r, 3, &[1, 2, 3]).leibniz_differential(1, &d).is_zero());
    }

    #[test]
    fn y_poly_round_trip() {
        let r = tilde_ring(3);
        let yr = y_ring(&r, 3).unwrap();
        assert_eq!(yr.order().describe(yr.ctx()), "lex:y1>y2>y3>g2>g1>gb");
        let e = GradedElement::y_product(&r, 3, &[3, 1]).mul_base(&r.parse("g1 - 2*gb").unwrap());
        let f = to_y_poly(&e, &yr).unwrap();
        assert_eq!(f, yr.parse("-y1*y3*g1 + 2*y1*y3*gb").unwrap());
        assert_eq!(from_y_poly(&f, &r, 3), e);
        assert!(to_y_poly(&GradedElement::x(&r, 3, 1, 1), &yr).is_err());
    }
}
