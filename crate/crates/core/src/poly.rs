//! Sparse multivariate polynomials over a named variable ring.
//!
//! A [`Polynomial`] is a list of `(Monomial, coefficient)` pairs kept sorted
//! in strictly descending order under the ring's [`MonomialOrder`], with no
//! zero coefficients. All arithmetic preserves that canonical form, so
//! structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::coeff::{Field, FieldTag};

/// Total degrees at or above this bound abort the computation.
pub const MAX_DEGREE: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no image given for variable {0}")]
    MissingImage(String),
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u32; 22]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, arity) }
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let deg: u64 = exps.iter().map(|&e| e as u64).sum();
        assert!(deg < MAX_DEGREE, "total degree {deg} exceeds 2^31");
        Monomial { deg: deg as u32, exps: SmallVec::from_slice(exps) }
    }

    pub fn variable(arity: usize, var: usize) -> Self {
        let mut m = Monomial::one(arity);
        m.exps[var] = 1;
        m.deg = 1;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), rhs.arity());
        let deg = self.deg as u64 + rhs.deg as u64;
        assert!(deg < MAX_DEGREE, "total degree {deg} exceeds 2^31");
        let exps = self.exps.iter().zip(&rhs.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: deg as u32, exps }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        let deg = self.deg as u64 * e as u64;
        assert!(deg < MAX_DEGREE, "total degree {deg} exceeds 2^31");
        Monomial { deg: deg as u32, exps: self.exps.iter().map(|a| a * e).collect() }
    }

    #[inline]
    pub fn divides(&self, rhs: &Monomial) -> bool {
        self.deg <= rhs.deg && self.exps.iter().zip(&rhs.exps).all(|(a, b)| a <= b)
    }

    /// `rhs / self`, when `self` divides `rhs`.
    pub fn quotient_of(&self, rhs: &Monomial) -> Option<Monomial> {
        if !self.divides(rhs) {
            return None;
        }
        let exps = self.exps.iter().zip(&rhs.exps).map(|(a, b)| b - a).collect();
        Some(Monomial { deg: rhs.deg - self.deg, exps })
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 22]> =
            self.exps.iter().zip(&rhs.exps).map(|(a, b)| *a.max(b)).collect();
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn is_coprime(&self, rhs: &Monomial) -> bool {
        self.exps.iter().zip(&rhs.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i % 64` set when variable `i` occurs. If `a | b` then
    /// `mask(a) & !mask(b) == 0`.
    pub fn divmask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0, |m, (i, _)| m | (1u64 << (i % 64)))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    DegRevLex,
    Lex,
}

/// A monomial order. `ranking[k]` is the variable with rank `k` (rank 0 is
/// the highest variable); without a ranking, variable `k` has rank `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    ranking: Option<Arc<[usize]>>,
}

impl MonomialOrder {
    pub fn degrevlex() -> Self {
        MonomialOrder { kind: OrderKind::DegRevLex, ranking: None }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, ranking: None }
    }

    pub fn with_ranking(kind: OrderKind, ranking: Vec<usize>) -> Self {
        let mut seen = ranking.clone();
        seen.sort_unstable();
        assert!(
            seen.iter().enumerate().all(|(i, v)| i == *v),
            "ranking must be a permutation"
        );
        MonomialOrder { kind, ranking: Some(ranking.into()) }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn ranking(&self) -> Option<&[usize]> {
        self.ranking.as_deref()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.arity(), b.arity());
        match (self.kind, &self.ranking) {
            (OrderKind::DegRevLex, None) => {
                a.deg.cmp(&b.deg).then_with(|| {
                    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            (OrderKind::Lex, None) => a.exps.cmp(&b.exps),
            (OrderKind::DegRevLex, Some(r)) => a.deg.cmp(&b.deg).then_with(|| {
                for &v in r.iter().rev() {
                    if a.exps[v] != b.exps[v] {
                        return b.exps[v].cmp(&a.exps[v]);
                    }
                }
                Ordering::Equal
            }),
            (OrderKind::Lex, Some(r)) => {
                for &v in r.iter() {
                    if a.exps[v] != b.exps[v] {
                        return a.exps[v].cmp(&b.exps[v]);
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// The same order in a ring with one extra variable prepended at rank 0.
    fn shifted_with_leading(&self) -> Self {
        MonomialOrder {
            kind: self.kind,
            ranking: self.ranking.as_ref().map(|r| {
                std::iter::once(0).chain(r.iter().map(|v| v + 1)).collect::<Vec<_>>().into()
            }),
        }
    }
}

/// Names and order of the indeterminates, plus the coefficient field.
pub struct VarRing<K: Field> {
    names: Vec<String>,
    index: HashMap<String, usize>,
    order: MonomialOrder,
    ctx: K::Ctx,
    matrix_dim: Option<usize>,
}

impl<K: Field> PartialEq for VarRing<K> {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.order == other.order
            && self.ctx == other.ctx
    }
}

impl<K: Field> fmt::Debug for VarRing<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", K::tag(&self.ctx), self.names.join(","))
    }
}

impl<K: Field> VarRing<K> {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        order: MonomialOrder,
        ctx: K::Ctx,
    ) -> Result<Arc<Self>, PolyError> {
        Self::build(names.into_iter().map(Into::into).collect(), order, ctx, None)
    }

    /// A ring whose variables index the entries of `n×n` matrices.
    pub fn for_matrices<S: Into<String>>(
        n: usize,
        names: impl IntoIterator<Item = S>,
        order: MonomialOrder,
        ctx: K::Ctx,
    ) -> Result<Arc<Self>, PolyError> {
        Self::build(names.into_iter().map(Into::into).collect(), order, ctx, Some(n))
    }

    fn build(
        names: Vec<String>,
        order: MonomialOrder,
        ctx: K::Ctx,
        matrix_dim: Option<usize>,
    ) -> Result<Arc<Self>, PolyError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarRing { names, index, order, ctx, matrix_dim }))
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn tag(&self) -> FieldTag {
        K::tag(&self.ctx)
    }

    pub fn matrix_dim(&self) -> Option<usize> {
        self.matrix_dim
    }

    pub fn zero_elem(&self) -> K {
        K::zero(&self.ctx)
    }

    pub fn one_elem(&self) -> K {
        K::one(&self.ctx)
    }

    /// A copy of this ring with `name` added as the highest-ranked variable
    /// (index 0). Other variables shift up by one index.
    pub fn with_leading_var(&self, name: &str) -> Result<Arc<Self>, PolyError> {
        if self.index.contains_key(name) {
            return Err(PolyError::DuplicateVariable(name.to_string()));
        }
        let names = std::iter::once(name.to_string()).chain(self.names.iter().cloned()).collect();
        Self::build(names, self.order.shifted_with_leading(), self.ctx.clone(), self.matrix_dim)
    }

    /// The same variables under another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(VarRing {
            names: self.names.clone(),
            index: self.index.clone(),
            order,
            ctx: self.ctx.clone(),
            matrix_dim: self.matrix_dim,
        })
    }
}

#[inline]
pub(crate) fn same_ring<K: Field>(a: &Arc<VarRing<K>>, b: &Arc<VarRing<K>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone)]
pub struct Polynomial<K: Field> {
    ring: Arc<VarRing<K>>,
    terms: Vec<(Monomial, K)>,
}

impl<K: Field> PartialEq for Polynomial<K> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<K: Field> Eq for Polynomial<K> {}

impl<K: Field> Polynomial<K> {
    pub fn zero(ring: &Arc<VarRing<K>>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<VarRing<K>>, c: K) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.arity()), c)] }
    }

    pub fn one(ring: &Arc<VarRing<K>>) -> Self {
        Self::constant(ring, ring.one_elem())
    }

    pub fn from_i64(ring: &Arc<VarRing<K>>, v: i64) -> Self {
        Self::constant(ring, K::from_i64(ring.ctx(), v))
    }

    pub fn var(ring: &Arc<VarRing<K>>, var: usize) -> Self {
        assert!(var < ring.arity(), "variable index {var} out of range");
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::variable(ring.arity(), var), ring.one_elem())],
        }
    }

    pub fn var_named(ring: &Arc<VarRing<K>>, name: &str) -> Result<Self, PolyError> {
        ring.var_index(name)
            .map(|i| Self::var(ring, i))
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn monomial(ring: &Arc<VarRing<K>>, m: Monomial, c: K) -> Self {
        assert_eq!(m.arity(), ring.arity(), "monomial arity mismatch");
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Builds a canonical polynomial from arbitrary terms: sorts, merges
    /// equal monomials and drops zeros.
    pub fn from_terms(ring: &Arc<VarRing<K>>, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut acc: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), ring.arity(), "monomial arity mismatch");
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<VarRing<K>>, acc: HashMap<Monomial, K>) -> Self {
        let mut terms: Vec<(Monomial, K)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_unstable_by(|a, b| order.compare(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Caller guarantees canonical form.
    pub(crate) fn from_sorted_unchecked(ring: &Arc<VarRing<K>>, terms: Vec<(Monomial, K)>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<VarRing<K>> {
        &self.ring
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value when the polynomial has degree ≤ 0.
    pub fn constant_value(&self) -> Option<K> {
        match self.terms.as_slice() {
            [] => Some(self.ring.zero_elem()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, K)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Highest exponent of `var` appearing in any term.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[var] > 0)
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect(),
        }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// `self · c · m`; the order is multiplicative so sortedness is kept.
    pub fn mul_term(&self, c: &K, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.mul(c))).collect(),
        }
    }

    /// `self + c · m · g` in one merge pass.
    pub fn add_scaled(&self, c: &K, m: &Monomial, g: &Self) -> Self {
        self.check_ring(g);
        let terms = merge_scaled(&self.ring, &self.terms, c, m, &g.terms);
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[K]) -> Result<K, PolyError> {
        if point.len() != self.ring.arity() {
            return Err(PolyError::ArityMismatch { expected: self.ring.arity(), got: point.len() });
        }
        let mut sum = self.ring.zero_elem();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u64));
                }
            }
            sum = sum.add(&t);
        }
        Ok(sum)
    }

    /// Ring homomorphism sending variable `i` to `images[i]` in `target`.
    /// Only variables that actually occur need an image.
    pub fn substitute(
        &self,
        target: &Arc<VarRing<K>>,
        images: &[Option<Polynomial<K>>],
    ) -> Result<Polynomial<K>, PolyError> {
        if images.len() != self.ring.arity() {
            return Err(PolyError::ArityMismatch { expected: self.ring.arity(), got: images.len() });
        }
        for v in 0..self.ring.arity() {
            if self.uses_var(v) {
                match &images[v] {
                    None => return Err(PolyError::MissingImage(self.ring.name(v).to_string())),
                    Some(p) => assert!(same_ring(p.ring(), target), "image lives in another ring"),
                }
            }
        }
        let mut cache: Vec<Vec<Polynomial<K>>> = vec![Vec::new(); self.ring.arity()];
        let mut acc: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[v].as_ref().expect("checked above");
                let powers = &mut cache[v];
                if powers.is_empty() {
                    powers.push(img.clone());
                }
                while powers.len() < e as usize {
                    let next = &powers[powers.len() - 1] * img;
                    powers.push(next);
                }
                t = &t * &powers[e as usize - 1];
            }
            for (tm, tc) in t.terms {
                match acc.get_mut(&tm) {
                    Some(v) => *v = v.add(&tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        Ok(Polynomial::from_map(target, acc))
    }

    /// Renames variables: source variable `i` becomes target variable
    /// `var_map[i]`. Cheaper than [`Polynomial::substitute`].
    pub fn map_vars(&self, target: &Arc<VarRing<K>>, var_map: &[usize]) -> Polynomial<K> {
        assert_eq!(var_map.len(), self.ring.arity());
        let arity = target.arity();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: SmallVec<[u32; 22]> = SmallVec::from_elem(0, arity);
            for (i, &e) in m.exponents().iter().enumerate() {
                exps[var_map[i]] += e;
            }
            (Monomial { deg: m.deg, exps }, c.clone())
        });
        Polynomial::from_terms(target, terms)
    }

    /// The same polynomial in a ring that contains all variables of this
    /// one (matched by name).
    pub fn embed(&self, target: &Arc<VarRing<K>>) -> Result<Polynomial<K>, PolyError> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut var_map = Vec::with_capacity(self.ring.arity());
        for (v, name) in self.ring.names().iter().enumerate() {
            match target.var_index(name) {
                Some(i) => var_map.push(i),
                None if !self.uses_var(v) => var_map.push(usize::MAX),
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let arity = target.arity();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: SmallVec<[u32; 22]> = SmallVec::from_elem(0, arity);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    exps[var_map[i]] = e;
                }
            }
            (Monomial { deg: m.deg, exps }, c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }
}

/// `a + c·m·b` for descending term lists.
pub(crate) fn merge_scaled<K: Field>(
    ring: &VarRing<K>,
    a: &[(Monomial, K)],
    c: &K,
    m: &Monomial,
    b: &[(Monomial, K)],
) -> Vec<(Monomial, K)> {
    let order = ring.order();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut it = b.iter().map(|(bm, bc)| (bm.mul(m), bc.mul(c))).peekable();
    while i < a.len() {
        let Some((bm, _)) = it.peek() else { break };
        match order.compare(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(it.next().expect("peeked")),
            Ordering::Equal => {
                let (bm, bc) = it.next().expect("peeked");
                let s = a[i].1.add(&bc);
                if !s.is_zero() {
                    out.push((bm, s));
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(it);
    out
}

fn merge_add<K: Field>(ring: &VarRing<K>, a: &[(Monomial, K)], b: &[(Monomial, K)], negate_b: bool) -> Vec<(Monomial, K)> {
    let order = ring.order();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let conv = |c: &K| if negate_b { c.neg() } else { c.clone() };
    while i < a.len() && j < b.len() {
        match order.compare(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), conv(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let s = if negate_b { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), conv(c))));
    out
}

impl<'a, K: Field> Add<&'a Polynomial<K>> for &'a Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, rhs: &'a Polynomial<K>) -> Polynomial<K> {
        self.check_ring(rhs);
        Polynomial { ring: self.ring.clone(), terms: merge_add(&self.ring, &self.terms, &rhs.terms, false) }
    }
}

impl<'a, K: Field> Sub<&'a Polynomial<K>> for &'a Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, rhs: &'a Polynomial<K>) -> Polynomial<K> {
        self.check_ring(rhs);
        Polynomial { ring: self.ring.clone(), terms: merge_add(&self.ring, &self.terms, &rhs.terms, true) }
    }
}

impl<'a, K: Field> Mul<&'a Polynomial<K>> for &'a Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, rhs: &'a Polynomial<K>) -> Polynomial<K> {
        self.check_ring(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(c, m);
        }
        let mut acc: HashMap<Monomial, K> = HashMap::with_capacity(small.len() * big.len());
        for (am, ac) in &small.terms {
            for (bm, bc) in &big.terms {
                let m = am.mul(bm);
                let c = ac.mul(bc);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial::from_map(&self.ring, acc)
    }
}

impl<K: Field> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial::neg(self)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<K: Field> $tr<Polynomial<K>> for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $f(self, rhs: Polynomial<K>) -> Polynomial<K> {
                (&self).$f(&rhs)
            }
        }
        impl<'a, K: Field> $tr<&'a Polynomial<K>> for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $f(self, rhs: &'a Polynomial<K>) -> Polynomial<K> {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Field> Neg for Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial::neg(&self)
    }
}

fn write_monomial<K: Field>(f: &mut fmt::Formatter<'_>, ring: &VarRing<K>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.name(v))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical rendering: descending terms, explicit `*`, `^` for powers,
/// e.g. `x1^2*x4 - 2*x2`.
impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
