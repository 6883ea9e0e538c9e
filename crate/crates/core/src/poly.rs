//! Sparse multivariate polynomials over `Z` with lexicographic and elimination orders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

/// Ordered, immutable list of variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if !is_identifier(n) {
                return Err(PolyError::BadVariableName(n.to_string()));
            }
            if !seen.insert(n.to_string()) {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(VarContext { names: out }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New context with `extra` appended. Old variable `i` keeps index `i`.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>, PolyError> {
        let mut all: Vec<String> = self.names.clone();
        all.extend(extra.iter().map(|s| s.as_ref().to_string()));
        VarContext::new(&all)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector, one entry per context variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerProduct(Vec<u32>);

impl PowerProduct {
    pub fn one(nvars: usize) -> Self {
        PowerProduct(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        PowerProduct(v)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        PowerProduct(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn divides(&self, other: &PowerProduct) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        PowerProduct(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &PowerProduct) -> Option<PowerProduct> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(PowerProduct(out))
    }

    pub fn lcm(&self, other: &PowerProduct) -> PowerProduct {
        PowerProduct(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &PowerProduct) -> PowerProduct {
        PowerProduct(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &PowerProduct) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Lexicographic order on a ranking of the variables. The first `block`
/// entries of the ranking form an elimination block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    ranking: Vec<usize>,
    block: usize,
}

impl MonomialOrder {
    /// Lex with variable 0 largest.
    pub fn lex_natural(nvars: usize) -> Self {
        MonomialOrder { ranking: (0..nvars).collect(), block: 0 }
    }

    /// Lex with the last variable largest.
    pub fn lex_reversed(nvars: usize) -> Self {
        MonomialOrder { ranking: (0..nvars).rev().collect(), block: 0 }
    }

    /// Lex with `largest_first` giving the ranking, most significant first.
    pub fn lex<S: AsRef<str>>(ctx: &VarContext, largest_first: &[S]) -> Result<Self, PolyError> {
        Self::elimination(ctx, &[] as &[&str], largest_first)
    }

    /// Block order: every variable of `block` dominates the rest; both
    /// parts are lex in the order given.
    pub fn elimination<S: AsRef<str>, T: AsRef<str>>(
        ctx: &VarContext,
        block: &[S],
        rest: &[T],
    ) -> Result<Self, PolyError> {
        let mut ranking = Vec::with_capacity(ctx.len());
        for name in block.iter().map(|s| s.as_ref()).chain(rest.iter().map(|s| s.as_ref())) {
            let i = ctx.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            if ranking.contains(&i) {
                return Err(PolyError::DuplicateVariable(name.to_string()));
            }
            ranking.push(i);
        }
        if ranking.len() != ctx.len() {
            return Err(PolyError::IncompleteRanking);
        }
        Ok(MonomialOrder { ranking, block: block.len() })
    }

    pub fn from_ranking(ranking: Vec<usize>, block: usize) -> Result<Self, PolyError> {
        let mut seen = vec![false; ranking.len()];
        for &i in &ranking {
            if i >= ranking.len() || seen[i] {
                return Err(PolyError::IncompleteRanking);
            }
            seen[i] = true;
        }
        if block > ranking.len() {
            return Err(PolyError::IncompleteRanking);
        }
        Ok(MonomialOrder { ranking, block })
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn block_len(&self) -> usize {
        self.block
    }

    pub fn nvars(&self) -> usize {
        self.ranking.len()
    }

    /// Same order with new variables prepended as an elimination block.
    /// The new variables must occupy indices `old_len..`.
    pub fn with_leading_block(&self, new_vars: usize) -> Self {
        let n = self.ranking.len();
        let mut ranking: Vec<usize> = (n..n + new_vars).collect();
        ranking.extend_from_slice(&self.ranking);
        MonomialOrder { ranking, block: new_vars }
    }

    pub fn compare(&self, a: &PowerProduct, b: &PowerProduct) -> Result<Ordering, PolyError> {
        if a.len() != self.ranking.len() || b.len() != self.ranking.len() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self.cmp_pp(a, b))
    }

    #[inline]
    pub(crate) fn cmp_pp(&self, a: &PowerProduct, b: &PowerProduct) -> Ordering {
        for &i in &self.ranking {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Human readable descriptor such as `lex:y1>y2>g2` or `elim[t]:...`.
    pub fn describe(&self, ctx: &VarContext) -> String {
        let names: Vec<&str> = self.ranking.iter().map(|&i| ctx.name(i)).collect();
        if self.block > 0 {
            format!("elim[{}]:{}", self.block, names.join(">"))
        } else {
            format!("lex:{}", names.join(">"))
        }
    }

    /// Parses `lex:a>b>c` or `elim[k]:a>b>c`.
    pub fn parse(ctx: &VarContext, spec: &str) -> Result<Self, PolyError> {
        let spec = spec.trim();
        let (block, body) = if let Some(rest) = spec.strip_prefix("lex:") {
            (0, rest)
        } else if let Some(rest) = spec.strip_prefix("elim[") {
            let close = rest.find("]:").ok_or_else(|| PolyError::BadOrder(spec.to_string()))?;
            let k: usize = rest[..close].parse().map_err(|_| PolyError::BadOrder(spec.to_string()))?;
            (k, &rest[close + 2..])
        } else {
            return Err(PolyError::BadOrder(spec.to_string()));
        };
        let names: Vec<&str> = body.split('>').map(|s| s.trim()).collect();
        if block > names.len() {
            return Err(PolyError::BadOrder(spec.to_string()));
        }
        Self::elimination(ctx, &names[..block], &names[block..])
    }
}

/// A variable context together with the order used to sort terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    ctx: Arc<VarContext>,
    order: MonomialOrder,
}

impl Ring {
    pub fn new(ctx: Arc<VarContext>, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        if order.nvars() != ctx.len() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(Arc::new(Ring { ctx, order }))
    }

    /// Ring with lex order, first listed variable largest.
    pub fn lex<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, PolyError> {
        let ctx = VarContext::new(names)?;
        let order = MonomialOrder::lex_natural(ctx.len());
        Ring::new(ctx, order)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        Ring::new(self.ctx.clone(), order)
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial, PolyError> {
        let i = self.ctx.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self.var_at(i))
    }

    pub fn var_at(self: &Arc<Self>, i: usize) -> Polynomial {
        Polynomial::monomial(self, BigInt::one(), PowerProduct::var(self.nvars(), i, 1))
    }

    pub fn constant(self: &Arc<Self>, c: impl Into<BigInt>) -> Polynomial {
        Polynomial::monomial(self, c.into(), PowerProduct::one(self.nvars()))
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial { ring: self.clone(), terms: Vec::new() }
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial, PolyError> {
        crate::parse::parse_polynomial(self, text)
    }

    fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Coefficient times power product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub pp: PowerProduct,
}

/// Sparse polynomial; terms are kept strictly descending in the ring order
/// with no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl Polynomial {
    pub fn monomial(ring: &Arc<Ring>, coeff: BigInt, pp: PowerProduct) -> Self {
        assert_eq!(pp.len(), ring.nvars(), "power product length differs from context size");
        let terms = if coeff.is_zero() { Vec::new() } else { vec![Term { coeff, pp }] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (BigInt, PowerProduct)>) -> Self {
        let mut acc: HashMap<PowerProduct, BigInt> = HashMap::new();
        for (c, pp) in terms {
            assert_eq!(pp.len(), ring.nvars(), "power product length differs from context size");
            *acc.entry(pp).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<PowerProduct, BigInt>) -> Self {
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(pp, coeff)| Term { coeff, pp }).collect();
        let order = ring.order();
        terms.sort_unstable_by(|a, b| order.cmp_pp(&b.pp, &a.pp));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.pp.is_one())
    }

    pub fn leading(&self) -> Result<&Term, PolyError> {
        self.terms.first().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn lt(&self) -> &PowerProduct {
        &self.terms[0].pp
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].coeff
    }

    pub fn coeff_of(&self, pp: &PowerProduct) -> BigInt {
        let order = self.ring.order();
        match self.terms.binary_search_by(|t| order.cmp_pp(pp, &t.pp)) {
            Ok(i) => self.terms[i].coeff.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Ring::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp_pp(&a[i].pp, &b[j].pp) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].coeff } else { b[j].coeff.clone() };
                    out.push(Term { coeff: c, pp: b[j].pp.clone() });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                    if !c.is_zero() {
                        out.push(Term { coeff: c, pp: a[i].pp.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.coeff } else { t.coeff.clone() };
            out.push(Term { coeff: c, pp: t.pp.clone() });
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    /// `self - c * s * p` where `s` is a power product; the workhorse of reduction.
    pub fn sub_scaled_shift(&self, c: &BigInt, s: &PowerProduct, p: &Polynomial) -> Polynomial {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + p.terms.len());
        let a = &self.terms;
        let mut i = 0;
        for t in &p.terms {
            let pp = t.pp.mul(s);
            let delta = c * &t.coeff;
            loop {
                if i < a.len() {
                    match order.cmp_pp(&a[i].pp, &pp) {
                        Ordering::Greater => {
                            out.push(a[i].clone());
                            i += 1;
                            continue;
                        }
                        Ordering::Equal => {
                            let v = &a[i].coeff - &delta;
                            if !v.is_zero() {
                                out.push(Term { coeff: v, pp });
                            }
                            i += 1;
                            break;
                        }
                        Ordering::Less => {}
                    }
                }
                out.push(Term { coeff: -delta, pp });
                break;
            }
        }
        out.extend(a[i..].iter().cloned());
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        if other.terms.len() == 1 {
            return Ok(self.mul_term(&other.terms[0].coeff, &other.terms[0].pp));
        }
        if self.terms.len() == 1 {
            return Ok(other.mul_term(&self.terms[0].coeff, &self.terms[0].pp));
        }
        let mut acc: HashMap<PowerProduct, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for s in &self.terms {
            for t in &other.terms {
                let pp = s.pp.mul(&t.pp);
                let c = &s.coeff * &t.coeff;
                match acc.get_mut(&pp) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(pp, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    /// Multiplication by `c * pp`; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, c: &BigInt, pp: &PowerProduct) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * c, pp: t.pp.mul(pp) }).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * c, pp: t.pp.clone() }).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|t| Term { coeff: -&t.coeff, pp: t.pp.clone() }).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = self.ring.constant(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divides every coefficient exactly by `c`. Returns `None` if some coefficient is not divisible.
    pub fn div_exact(&self, c: &BigInt) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if !(&t.coeff % c).is_zero() {
                return None;
            }
            terms.push(Term { coeff: &t.coeff / c, pp: t.pp.clone() });
        }
        Some(Polynomial { ring: self.ring.clone(), terms })
    }

    /// gcd of the absolute values of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.iter().fold(BigInt::zero(), |g, t| g.gcd(&t.coeff))
    }

    /// Makes the leading coefficient positive.
    pub fn normalize_sign(&self) -> Polynomial {
        if !self.is_zero() && self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.pp.degree()).max()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.iter().map(|t| t.pp.weighted_degree(weights)).max()
    }

    /// True when all terms share one weighted degree (the zero polynomial counts as homogeneous).
    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut it = self.terms.iter().map(|t| t.pp.weighted_degree(weights));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.pp.0[var]).max().unwrap_or(0)
    }

    /// Re-sorts the terms under a different order on the same context.
    pub fn with_ring(&self, ring: &Arc<Ring>) -> Result<Polynomial, PolyError> {
        if ring.ctx() != self.ring.ctx() {
            return Err(PolyError::ContextMismatch);
        }
        if Ring::same(ring, &self.ring) {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_unstable_by(|a, b| order.cmp_pp(&b.pp, &a.pp));
        Ok(Polynomial { ring: ring.clone(), terms })
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn evaluate(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::ContextMismatch);
        }
        for im in images {
            if !Ring::same(im.ring(), target) {
                return Err(PolyError::ContextMismatch);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![target.constant(1)]; images.len()];
        let mut acc = target.zero();
        for t in &self.terms {
            let mut prod = target.constant(t.coeff.clone());
            for (i, &e) in t.pp.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// Image under `var -> replacement`, identity on other variables.
    pub fn substitute(&self, var: &str, replacement: &Polynomial) -> Result<Polynomial, PolyError> {
        let i = self.ring.ctx().index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        self.check(replacement)?;
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|j| if j == i { replacement.clone() } else { self.ring.var_at(j) })
            .collect();
        self.evaluate(&self.ring, &images)
    }

    /// Maps into `target` by renaming: variable `i` goes to `var_map[i]`.
    pub fn embed(&self, target: &Arc<Ring>, var_map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self.terms.iter().map(|t| {
            let mut e = vec![0u32; n];
            for (i, &x) in t.pp.0.iter().enumerate() {
                if x > 0 {
                    e[var_map[i]] += x;
                }
            }
            (t.coeff.clone(), PowerProduct(e))
        });
        Polynomial::from_terms(target, terms)
    }

    /// Internal audit: sorted strictly descending, no zeros, right lengths.
    pub fn check_invariants(&self) -> bool {
        let order = self.ring.order();
        self.terms.iter().all(|t| !t.coeff.is_zero() && t.pp.len() == self.ring.nvars())
            && self.terms.windows(2).all(|w| order.cmp_pp(&w[0].pp, &w[1].pp) == Ordering::Greater)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands live in different rings; use the `try_` form to handle that.
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                self.$f(rhs).expect("polynomials from different rings")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs).expect("polynomials from different rings")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(&self)
    }
}

/// Formats a power product as `x^2*y`, or `1` if trivial.
pub fn format_pp(ctx: &VarContext, pp: &PowerProduct) -> String {
    let mut parts = Vec::new();
    for (i, &e) in pp.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ctx.name(i).to_string()),
            _ => parts.push(format!("{}^{}", ctx.name(i), e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ctx = self.ring.ctx();
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if t.pp.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", format_pp(ctx, &t.pp))?;
            } else {
                write!(f, "{}*{}", abs, format_pp(ctx, &t.pp))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::lex(&["x", "y"]).unwrap()
    }

    #[test]
    fn lex_compares_highest_variable_first() {
        let ctx = VarContext::new(&["x1", "x2"]).unwrap();
        let o = MonomialOrder::lex(&ctx, &["x2", "x1"]).unwrap();
        let x2 = PowerProduct::var(2, 1, 1);
        let x1sq = PowerProduct::var(2, 0, 2);
        assert_eq!(o.compare(&x2, &x1sq).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(&x2, &x2).unwrap(), Ordering::Equal);
        assert!(o.compare(&x2, &PowerProduct::one(3)).is_err());
    }

    #[test]
    fn elimination_block_dominates() {
        let ctx = VarContext::new(&["x1", "t"]).unwrap();
        let o = MonomialOrder::elimination(&ctx, &["t"], &["x1"]).unwrap();
        let t = PowerProduct::var(2, 1, 1);
        let x5 = PowerProduct::var(2, 0, 5);
        assert_eq!(o.compare(&t, &x5).unwrap(), Ordering::Greater);
        assert_eq!(o.describe(&ctx), "elim[1]:t>x1");
        assert_eq!(MonomialOrder::parse(&ctx, "elim[1]:t>x1").unwrap(), o);
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring();
        let x = r.var("x").unwrap();
        let y = r.var("y").unwrap();
        assert_eq!((&x + &y) + (&x - &y), x.scale(&BigInt::from(2)));
        assert_eq!((&x + &y) * (&x - &y), &(&x * &x) - &(&y * &y));
        assert!((&x + &y).scale(&BigInt::zero()).is_zero());
    }

    #[test]
    fn leading_term() {
        let r = ring();
        let f = r.parse("3*y + 2*x^2").unwrap();
        let lt = f.leading().unwrap();
        assert_eq!(lt.coeff, BigInt::from(2));
        assert_eq!(lt.pp, PowerProduct::var(2, 0, 2));
        assert_eq!(r.constant(5).leading().unwrap().pp, PowerProduct::one(2));
        assert!(r.zero().leading().is_err());
    }

    #[test]
    fn leading_term_under_y_first_order() {
        let ctx = VarContext::new(&["y1", "y2", "g2", "g1"]).unwrap();
        let r = Ring::new(ctx, MonomialOrder::lex_natural(4)).unwrap();
        let f = r.parse("-y2*g2 + y1*g1").unwrap();
        assert_eq!(f.to_string(), "y1*g1 - y2*g2");
    }

    #[test]
    fn homogeneity() {
        let r = ring();
        assert!(r.parse("x^2*y + y^3").unwrap().is_homogeneous(&[1, 1]));
        assert!(!r.parse("x^2 + x").unwrap().is_homogeneous(&[1, 1]));
        assert_eq!(r.parse("x^2*y + y").unwrap().total_degree(), Some(3));
    }

    #[test]
    fn substitution_is_identity_on_itself() {
        let r = ring();
        let f = r.parse("x^3 - 2*x*y + 7").unwrap();
        assert_eq!(f.substitute("x", &r.var("x").unwrap()).unwrap(), f);
        let g = f.substitute("x", &r.parse("y + 1").unwrap()).unwrap();
        assert_eq!(g, r.parse("(y+1)^3 - 2*(y+1)*y + 7").unwrap());
        assert!(f.substitute("z", &f).is_err());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = ring();
        let b = Ring::lex(&["x", "z"]).unwrap();
        assert!(a.var("x").unwrap().try_add(&b.var("x").unwrap()).is_err());
    }

    #[test]
    fn sub_scaled_shift_matches_naive() {
        let r = ring();
        let f = r.parse("x^3 + 4*x^2*y - y^3 + 2").unwrap();
        let p = r.parse("2*x + y - 1").unwrap();
        let s = PowerProduct::from_exponents(vec![1, 1]);
        let c = BigInt::from(3);
        let naive = &f - &p.mul_term(&c, &s);
        let fast = f.sub_scaled_shift(&c, &s, &p);
        assert_eq!(naive, fast);
        assert!(fast.check_invariants());
    }
}
