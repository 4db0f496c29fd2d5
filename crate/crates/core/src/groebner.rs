//! Buchberger's algorithm, normal forms and radical membership.
//!
//! Pairs are selected by the normal strategy (smallest lcm first) and
//! pruned with the Gebauer–Möller installation of Buchberger's product and
//! chain criteria. Intermediate polynomials are kept monic. Radical
//! membership uses the Rabinowitsch trick: `f ∈ √I` iff
//! `1 ∈ I + (t·f - 1)` with a fresh variable `t` ranked highest.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Field;
use crate::poly::{Monomial, MonomialOrder, PolyError, Polynomial, VarRing};

/// Name of the Rabinowitsch variable.
pub const RABINOWITSCH_VAR: &str = "t";

/// Resource caps for one Gröbner basis computation. Exhausting either cap
/// is reported as an error, never as an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub pair_cap: u64,
    pub degree_cap: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { pair_cap: 1_000_000, degree_cap: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("undecided: budget exhausted after {0} critical pairs")]
    PairCapExhausted(u64),
    #[error("undecided: budget exhausted, basis element of degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_processed: u64,
    pub pairs_pruned: u64,
    pub zero_reductions: u64,
    pub basis_size: usize,
}

impl GbStats {
    pub fn absorb(&mut self, other: &GbStats) {
        self.pairs_processed += other.pairs_processed;
        self.pairs_pruned += other.pairs_pruned;
        self.zero_reductions += other.zero_reductions;
        self.basis_size = self.basis_size.max(other.basis_size);
    }
}

/// A reduced, monic Gröbner basis together with the order it was
/// computed under.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    ring: Arc<VarRing<K>>,
    basis: Vec<Polynomial<K>>,
    order: MonomialOrder,
    stats: GbStats,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn ring(&self) -> &Arc<VarRing<K>> {
        &self.ring
    }

    /// Basis elements sorted by ascending leading monomial.
    pub fn basis(&self) -> &[Polynomial<K>] {
        &self.basis
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|g| !g.is_zero() && g.is_constant())
    }

    pub fn normal_form(&self, f: &Polynomial<K>) -> Polynomial<K> {
        normal_form(f, &self.basis)
    }

    pub fn contains(&self, f: &Polynomial<K>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Union of two bases over disjoint sets of variables, which is again a
    /// reduced Gröbner basis: every cross pair has coprime leading
    /// monomials. Both inputs must already be embedded in the same ring.
    pub fn disjoint_union(a: &GroebnerBasis<K>, b: &GroebnerBasis<K>) -> GroebnerBasis<K> {
        assert!(crate::poly::same_ring(&a.ring, &b.ring), "ring mismatch");
        let used = |gb: &GroebnerBasis<K>| -> Vec<bool> {
            (0..gb.ring.arity()).map(|v| gb.basis.iter().any(|g| g.uses_var(v))).collect()
        };
        let (ua, ub) = (used(a), used(b));
        assert!(ua.iter().zip(&ub).all(|(x, y)| !(x & y)), "bases share variables");
        if a.is_unit() {
            return a.clone();
        }
        if b.is_unit() {
            return b.clone();
        }
        let order = a.ring.order().clone();
        let mut basis: Vec<Polynomial<K>> = a.basis.iter().chain(&b.basis).cloned().collect();
        basis.sort_by(|f, g| order.compare(lm(f), lm(g)));
        let mut stats = a.stats;
        stats.absorb(&b.stats);
        stats.basis_size = basis.len();
        GroebnerBasis { ring: a.ring.clone(), basis, order, stats }
    }

    /// Embeds every basis element into `target` (which must extend this
    /// ring compatibly with the order, e.g. by renaming or adding variables
    /// that rank consistently).
    pub fn map_vars(&self, target: &Arc<VarRing<K>>, var_map: &[usize]) -> GroebnerBasis<K> {
        let basis = self.basis.iter().map(|g| g.map_vars(target, var_map)).collect();
        GroebnerBasis { ring: target.clone(), basis, order: target.order().clone(), stats: self.stats }
    }

    /// `f ∈ √(basis)`, decided by a normal form first and the Rabinowitsch
    /// trick when the normal form does not vanish. The known basis seeds
    /// the extended computation so its own pairs are not revisited.
    pub fn radical_contains(&self, f: &Polynomial<K>, budget: &Budget) -> Result<RadicalAnswer, GbError> {
        if self.is_unit() {
            return Ok(RadicalAnswer { member: true, stats: GbStats::default(), via_normal_form: true });
        }
        let nf = self.normal_form(f);
        if nf.is_zero() {
            return Ok(RadicalAnswer { member: true, stats: GbStats::default(), via_normal_form: true });
        }
        let t_ring = self.ring.with_leading_var(RABINOWITSCH_VAR)?;
        let shift: Vec<usize> = (1..=self.ring.arity()).collect();
        let seed: Vec<Polynomial<K>> = self.basis.iter().map(|g| g.map_vars(&t_ring, &shift)).collect();
        let t = Polynomial::var(&t_ring, 0);
        let rab = &(&t * &nf.map_vars(&t_ring, &shift)) - &Polynomial::one(&t_ring);
        let gb = buchberger_seeded(&t_ring, seed, vec![rab], budget)?;
        Ok(RadicalAnswer { member: gb.is_unit(), stats: gb.stats, via_normal_form: false })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RadicalAnswer {
    pub member: bool,
    pub stats: GbStats,
    /// True when the answer came from a vanishing normal form alone.
    pub via_normal_form: bool,
}

#[inline]
fn lm<K: Field>(f: &Polynomial<K>) -> &Monomial {
    f.leading_monomial().expect("nonzero polynomial")
}

struct Divisor<'a, K: Field> {
    poly: &'a Polynomial<K>,
    mask: u64,
}

fn find_divisor<'a, 'b, K: Field>(divs: &'b [Divisor<'a, K>], m: &Monomial) -> Option<&'b Divisor<'a, K>> {
    let mask = m.divmask();
    divs.iter().find(|d| d.mask & !mask == 0 && lm(d.poly).divides(m))
}

fn reduce_with<K: Field>(f: &Polynomial<K>, divs: &[Divisor<'_, K>]) -> Polynomial<K> {
    let ring = f.ring();
    if divs.is_empty() || f.is_zero() {
        return f.clone();
    }
    let mut rem: Vec<(Monomial, K)> = Vec::new();
    let mut cur: Polynomial<K> = f.clone();
    loop {
        let mut idx = 0;
        let terms = cur.terms();
        let mut step = None;
        while idx < terms.len() {
            let (m, c) = &terms[idx];
            if let Some(d) = find_divisor(divs, m) {
                let q = lm(d.poly).quotient_of(m).expect("divides");
                let lc = d.poly.leading_coeff().expect("nonzero");
                let coef = if lc.is_one() { c.neg() } else { c.div(lc).expect("nonzero lc").neg() };
                step = Some((idx, q, coef, d.poly));
                break;
            }
            rem.push((m.clone(), c.clone()));
            idx += 1;
        }
        match step {
            None => break,
            Some((idx, q, coef, g)) => {
                let terms = crate::poly::merge_scaled(ring, &cur.terms()[idx + 1..], &coef, &q, &g.terms()[1..]);
                cur = Polynomial::from_sorted_unchecked(ring, terms);
            }
        }
    }
    // `rem` is built in descending order: every kept term is larger than
    // everything produced afterwards.
    Polynomial::from_sorted_unchecked(ring, rem)
}

/// Full reduction of `f` by `divisors` (any list, not necessarily a
/// Gröbner basis). No term of the result is divisible by a leading
/// monomial of a divisor, and `f - result` lies in the ideal they span.
pub fn normal_form<K: Field>(f: &Polynomial<K>, divisors: &[Polynomial<K>]) -> Polynomial<K> {
    let divs: Vec<Divisor<'_, K>> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            assert!(crate::poly::same_ring(f.ring(), g.ring()), "ring mismatch");
            Divisor { poly: g, mask: lm(g).divmask() }
        })
        .collect();
    reduce_with(f, &divs)
}

pub fn s_polynomial<K: Field>(f: &Polynomial<K>, g: &Polynomial<K>) -> Polynomial<K> {
    let (mf, mg) = (lm(f), lm(g));
    let l = mf.lcm(mg);
    let cf = f.leading_coeff().expect("nonzero").inv().expect("nonzero");
    let cg = g.leading_coeff().expect("nonzero").inv().expect("nonzero");
    let a = f.mul_term(&cf, &mf.quotient_of(&l).expect("lcm"));
    let b = g.mul_term(&cg, &mg.quotient_of(&l).expect("lcm"));
    &a - &b
}

/// Buchberger's criterion checked directly: every S-polynomial reduces to
/// zero. Quadratic in the basis size; meant for verification.
pub fn is_groebner_basis<K: Field>(basis: &[Polynomial<K>]) -> bool {
    let nz: Vec<&Polynomial<K>> = basis.iter().filter(|g| !g.is_zero()).collect();
    let owned: Vec<Polynomial<K>> = nz.iter().map(|g| (*g).clone()).collect();
    for i in 0..nz.len() {
        for j in i + 1..nz.len() {
            if !normal_form(&s_polynomial(nz[i], nz[j]), &owned).is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'b, K: Field> {
    ring: Arc<VarRing<K>>,
    polys: Vec<Polynomial<K>>,
    masks: Vec<u64>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    stats: GbStats,
    budget: &'b Budget,
}

enum Insert {
    Added,
    Zero,
    Unit,
}

impl<'b, K: Field> Engine<'b, K> {
    fn reduce(&self, f: &Polynomial<K>) -> Polynomial<K> {
        let divs: Vec<Divisor<'_, K>> = (0..self.polys.len())
            .filter(|&k| self.active[k])
            .map(|k| Divisor { poly: &self.polys[k], mask: self.masks[k] })
            .collect();
        reduce_with(f, &divs)
    }

    fn push_raw(&mut self, h: Polynomial<K>) -> usize {
        self.masks.push(lm(&h).divmask());
        self.polys.push(h);
        self.active.push(true);
        self.polys.len() - 1
    }

    fn insert(&mut self, f: &Polynomial<K>) -> Result<Insert, GbError> {
        let h = self.reduce(f);
        if h.is_zero() {
            return Ok(Insert::Zero);
        }
        if h.is_constant() {
            return Ok(Insert::Unit);
        }
        let deg = h.total_degree().expect("nonzero");
        if deg > self.budget.degree_cap {
            return Err(GbError::DegreeCapExceeded { degree: deg, cap: self.budget.degree_cap });
        }
        let h = h.monic();
        self.update(h);
        Ok(Insert::Added)
    }

    /// Gebauer–Möller pair update for a new element `h`.
    fn update(&mut self, h: Polynomial<K>) {
        let lm_h = lm(&h).clone();
        let hi = self.push_raw(h);

        let candidates: Vec<Pair> = (0..hi)
            .filter(|&k| self.active[k])
            .map(|k| Pair { i: k, j: hi, lcm: lm(&self.polys[k]).lcm(&lm_h) })
            .collect();

        // Chain criterion among the new pairs: drop (g1, h) if some other
        // new pair's lcm properly or equally divides it, unless coprime.
        let mut kept: Vec<Pair> = Vec::new();
        for (a, p) in candidates.iter().enumerate() {
            let coprime = lm(&self.polys[p.i]).is_coprime(&lm_h);
            let dominated_by_rest = candidates[a + 1..].iter().any(|q| q.lcm.divides(&p.lcm));
            let dominated_by_kept = kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime || (!dominated_by_rest && !dominated_by_kept) {
                kept.push(p.clone());
            } else {
                self.stats.pairs_pruned += 1;
            }
        }
        // Product criterion.
        let before = kept.len();
        kept.retain(|p| !lm(&self.polys[p.i]).is_coprime(&lm_h));
        self.stats.pairs_pruned += (before - kept.len()) as u64;

        // Chain criterion on old pairs.
        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let l1 = lm(&polys[p.i]).lcm(&lm_h);
            let l2 = lm(&polys[p.j]).lcm(&lm_h);
            l1 == p.lcm || l2 == p.lcm
        });
        self.stats.pairs_pruned += (before - self.pairs.len()) as u64;
        self.pairs.extend(kept);

        for k in 0..hi {
            if self.active[k] && lm_h.divides(lm(&self.polys[k])) {
                self.active[k] = false;
            }
        }
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.ring.order();
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k].lcm, &self.pairs[best].lcm);
            let ord = a.degree().cmp(&b.degree()).then_with(|| order.compare(a, b));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn unit_basis(&self) -> GroebnerBasis<K> {
        let mut stats = self.stats;
        stats.basis_size = 1;
        GroebnerBasis {
            ring: self.ring.clone(),
            basis: vec![Polynomial::one(&self.ring)],
            order: self.ring.order().clone(),
            stats,
        }
    }

    fn finish(mut self) -> GroebnerBasis<K> {
        let order = self.ring.order().clone();
        let mut idx: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        idx.sort_by(|&a, &b| order.compare(lm(&self.polys[a]), lm(&self.polys[b])));
        // Minimal: drop any element whose leading monomial is divisible by
        // another's (possible for seeded elements).
        let mut minimal: Vec<usize> = Vec::new();
        for &k in &idx {
            if !minimal.iter().any(|&m| lm(&self.polys[m]).divides(lm(&self.polys[k]))) {
                minimal.push(k);
            }
        }
        let mut basis: Vec<Polynomial<K>> = minimal.iter().map(|&k| self.polys[k].clone()).collect();
        // Tail-reduce each element against the others.
        for a in 0..basis.len() {
            let others: Vec<Divisor<'_, K>> = basis
                .iter()
                .enumerate()
                .filter(|(b, _)| *b != a)
                .map(|(_, g)| Divisor { poly: g, mask: lm(g).divmask() })
                .collect();
            let g = &basis[a];
            let head = Polynomial::from_sorted_unchecked(&self.ring, vec![g.terms()[0].clone()]);
            let tail = Polynomial::from_sorted_unchecked(&self.ring, g.terms()[1..].to_vec());
            let reduced = &head + &reduce_with(&tail, &others);
            drop(others);
            basis[a] = reduced.monic();
        }
        self.stats.basis_size = basis.len();
        self.polys.clear();
        GroebnerBasis { ring: self.ring.clone(), basis, order, stats: self.stats }
    }
}

/// Reduced Gröbner basis of the ideal spanned by `gens`.
pub fn buchberger<K: Field>(gens: &[Polynomial<K>], budget: &Budget) -> Result<GroebnerBasis<K>, GbError> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => panic!("buchberger on an empty list needs a ring; use buchberger_in"),
    };
    buchberger_in(&ring, gens, budget)
}

/// As [`buchberger`], with the ring given explicitly (for empty inputs).
pub fn buchberger_in<K: Field>(
    ring: &Arc<VarRing<K>>,
    gens: &[Polynomial<K>],
    budget: &Budget,
) -> Result<GroebnerBasis<K>, GbError> {
    buchberger_seeded(ring, Vec::new(), gens.to_vec(), budget)
}

/// Completes `seed ∪ gens`, where `seed` is already a reduced Gröbner basis
/// in `ring` (its pairs are known to reduce to zero and are skipped).
pub fn buchberger_seeded<K: Field>(
    ring: &Arc<VarRing<K>>,
    seed: Vec<Polynomial<K>>,
    gens: Vec<Polynomial<K>>,
    budget: &Budget,
) -> Result<GroebnerBasis<K>, GbError> {
    let mut eng = Engine {
        ring: ring.clone(),
        polys: Vec::new(),
        masks: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: GbStats::default(),
        budget,
    };
    for g in seed {
        assert!(crate::poly::same_ring(ring, g.ring()), "ring mismatch");
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(eng.unit_basis());
        }
        eng.push_raw(g.monic());
    }
    let mut gens: Vec<Polynomial<K>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    for g in &gens {
        assert!(crate::poly::same_ring(ring, g.ring()), "ring mismatch");
    }
    // Smallest leading monomials first keeps early reductions cheap.
    let order = ring.order().clone();
    gens.sort_by(|a, b| order.compare(lm(a), lm(b)));
    for g in &gens {
        if let Insert::Unit = eng.insert(g)? {
            return Ok(eng.unit_basis());
        }
    }
    while let Some(p) = eng.select_pair() {
        eng.stats.pairs_processed += 1;
        if eng.stats.pairs_processed > budget.pair_cap {
            return Err(GbError::PairCapExhausted(budget.pair_cap));
        }
        let s = s_polynomial(&eng.polys[p.i], &eng.polys[p.j]);
        match eng.insert(&s)? {
            Insert::Zero => eng.stats.zero_reductions += 1,
            Insert::Unit => return Ok(eng.unit_basis()),
            Insert::Added => {}
        }
    }
    Ok(eng.finish())
}

/// Whether `1` lies in the ideal spanned by `gens`.
pub fn contains_one<K: Field>(
    ring: &Arc<VarRing<K>>,
    gens: &[Polynomial<K>],
    budget: &Budget,
) -> Result<bool, GbError> {
    Ok(buchberger_in(ring, gens, budget)?.is_unit())
}

/// `f ∈ √(gens)` exactly as the Rabinowitsch trick states it:
/// `1 ∈ (gens, t·f - 1)` in the ring extended by `t`.
pub fn radical_membership<K: Field>(
    f: &Polynomial<K>,
    gens: &[Polynomial<K>],
    budget: &Budget,
) -> Result<bool, GbError> {
    let ring = f.ring();
    let t_ring = ring.with_leading_var(RABINOWITSCH_VAR)?;
    let shift: Vec<usize> = (1..=ring.arity()).collect();
    let mut ext: Vec<Polynomial<K>> = gens.iter().map(|g| g.map_vars(&t_ring, &shift)).collect();
    let t = Polynomial::var(&t_ring, 0);
    ext.push(&(&t * &f.map_vars(&t_ring, &shift)) - &Polynomial::one(&t_ring));
    contains_one(&t_ring, &ext, budget)
}
