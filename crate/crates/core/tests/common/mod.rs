//! Independent oracles and property suites shared by the integration and
//! acceptance targets. Each suite returns `Err` with a description of the
//! first counterexample.

#![allow(dead_code)]

pub mod criteria;

use std::cmp::Ordering;
use std::sync::Arc;

use algroup::coeff::{Field, Fp, PrimeModulus, Rational};
use algroup::decide::{add_field_equations, DecideOptions, Decider, Verdict};
use algroup::groebner::{
    buchberger_in, contains_one, is_groebner_basis, normal_form, radical_membership, Budget,
};
use algroup::parse::{parse_poly, parse_problem, AnyProblem, ProblemSpec};
use algroup::poly::{Monomial, MonomialOrder, OrderKind, Polynomial, VarRing};
use algroup::symmat::{self, Block};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub fn qfrac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into()).unwrap()
}

pub fn rand_q(r: &mut Rng8) -> Rational {
    qfrac(r.gen_range(-6..=6), r.gen_range(1..=4))
}

pub fn rand_fp(r: &mut Rng8, p: PrimeModulus) -> Fp {
    p.elem(r.gen_range(0..p.get()))
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> AnyProblem {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_problem(&text).unwrap()
}

pub fn qfixture(name: &str) -> ProblemSpec<Rational> {
    match fixture(name) {
        AnyProblem::Rational(s) => s,
        AnyProblem::Prime(_) => panic!("{name} is not over Q"),
    }
}

pub fn fpfixture(name: &str) -> ProblemSpec<Fp> {
    match fixture(name) {
        AnyProblem::Prime(s) => s,
        AnyProblem::Rational(_) => panic!("{name} is not over a prime field"),
    }
}

/// Rational fixtures.
pub const Q_FIXTURES: &[&str] = &[
    "sl2.alg",
    "zero2.alg",
    "torus2.alg",
    "diag-union.alg",
    "cubic-q.alg",
    "linear-noid.alg",
    "linear-group.alg",
    "linear-noninv.alg",
    "finite-roots.alg",
];

pub fn random_monomial(r: &mut Rng8, arity: usize, max_deg: u32) -> Monomial {
    let deg = r.gen_range(0..=max_deg);
    let mut e = vec![0u32; arity];
    for _ in 0..deg {
        e[r.gen_range(0..arity)] += 1;
    }
    Monomial::from_exponents(&e)
}

pub fn random_poly<K: Field>(
    r: &mut Rng8,
    ring: &Arc<VarRing<K>>,
    terms: usize,
    max_deg: u32,
    coeff: &mut dyn FnMut(&mut Rng8) -> K,
) -> Polynomial<K> {
    let ts: Vec<(Monomial, K)> =
        (0..terms).map(|_| (random_monomial(r, ring.arity(), max_deg), coeff(r))).collect();
    Polynomial::from_terms(ring, ts)
}

pub fn plain_ring<K: Field>(arity: usize, ctx: K::Ctx, order: MonomialOrder) -> Arc<VarRing<K>> {
    VarRing::new((1..=arity).map(|k| format!("x{k}")), order, ctx).unwrap()
}

// Matrix oracles over Q, written independently of the library.

pub fn matmul<K: Field>(a: &[K], b: &[K], n: usize) -> Vec<K> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut s = a[0].sub(&a[0]);
            for k in 0..n {
                s = s.add(&a[i * n + k].mul(&b[k * n + j]));
            }
            out.push(s);
        }
    }
    out
}

/// Gauss-Jordan inverse and determinant.
pub fn inverse_and_det(m: &[Rational], n: usize) -> Option<(Vec<Rational>, Rational)> {
    let mut a = m.to_vec();
    let mut b: Vec<Rational> = (0..n * n).map(|k| q(i64::from(k % (n + 1) == 0))).collect();
    let mut det = q(1);
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r * n + c].is_zero())?;
        if piv != c {
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
                b.swap(piv * n + k, c * n + k);
            }
            det = det.neg();
        }
        let pv = a[c * n + c].clone();
        det = det.mul(&pv);
        let inv = pv.inv().unwrap();
        for k in 0..n {
            a[c * n + k] = a[c * n + k].mul(&inv);
            b[c * n + k] = b[c * n + k].mul(&inv);
        }
        for r in 0..n {
            if r == c || a[r * n + c].is_zero() {
                continue;
            }
            let f = a[r * n + c].clone();
            for k in 0..n {
                a[r * n + k] = a[r * n + k].sub(&f.mul(&a[c * n + k]));
                b[r * n + k] = b[r * n + k].sub(&f.mul(&b[c * n + k]));
            }
        }
    }
    Some((b, det))
}

pub fn random_invertible(r: &mut Rng8, n: usize) -> (Vec<Rational>, Vec<Rational>, Rational) {
    loop {
        let m: Vec<Rational> = (0..n * n).map(|_| rand_q(r)).collect();
        if let Some((inv, det)) = inverse_and_det(&m, n) {
            return (m, inv, det);
        }
    }
}

// coeff

pub fn suite_field_axioms() -> Result<(), String> {
    let mut r = rng(1);
    let f7 = PrimeModulus::new(7).unwrap();
    let f32003 = PrimeModulus::new(32003).unwrap();
    fn axioms<K: Field>(a: &K, b: &K, c: &K) -> Result<(), String> {
        let ctx_err = || format!("axiom failed on {a}, {b}, {c}");
        ensure(a.add(b) == b.add(a) && a.mul(b) == b.mul(a), ctx_err)?;
        ensure(a.add(b).add(c) == a.add(&b.add(c)), ctx_err)?;
        ensure(a.mul(b).mul(c) == a.mul(&b.mul(c)), ctx_err)?;
        ensure(a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c)), ctx_err)?;
        ensure(a.sub(a).is_zero() && a.add(&a.neg()).is_zero(), ctx_err)?;
        if !a.is_zero() {
            ensure(a.mul(&a.inv().unwrap()).is_one(), ctx_err)?;
        } else {
            ensure(a.inv().is_err(), ctx_err)?;
        }
        Ok(())
    }
    for _ in 0..300 {
        axioms(&rand_q(&mut r), &rand_q(&mut r), &rand_q(&mut r))?;
        for p in [f7, f32003] {
            let (a, b, c) = (rand_fp(&mut r, p), rand_fp(&mut r, p), rand_fp(&mut r, p));
            axioms(&a, &b, &c)?;
            ensure(a.pow(p.get()) == a, || format!("Fermat fails for {a} mod {}", p.get()))?;
        }
    }
    ensure(qfrac(-2, 4) == qfrac(-1, 2) && qfrac(-2, 4).to_string() == "-1/2", || "lowest terms".into())
}

// poly

fn ring_axioms_over<K: Field>(
    r: &mut Rng8,
    ring: &Arc<VarRing<K>>,
    coeff: &mut dyn FnMut(&mut Rng8) -> K,
) -> Result<(), String> {
    let f = random_poly(r, ring, 4, 3, coeff);
    let g = random_poly(r, ring, 4, 3, coeff);
    let h = random_poly(r, ring, 3, 2, coeff);
    let msg = || format!("ring axioms fail on f={f}, g={g}, h={h}");
    ensure(&f + &g == &g + &f && &f * &g == &g * &f, msg)?;
    ensure(&(&f + &g) + &h == &f + &(&g + &h), msg)?;
    ensure(&(&f * &g) * &h == &f * &(&g * &h), msg)?;
    ensure(&f * &(&g + &h) == &(&f * &g) + &(&f * &h), msg)?;
    let f2 = f.clone();
    ensure((&f - &f2).is_zero() && (&f + &(-&f)).is_zero(), msg)?;
    ensure(&f * &Polynomial::one(ring) == f, msg)?;
    ensure(f.terms().windows(2).all(|w| ring.order().compare(&w[0].0, &w[1].0) == Ordering::Greater), msg)?;
    ensure(f.terms().iter().all(|(_, c)| !c.is_zero()), msg)
}

pub fn suite_ring_axioms() -> Result<(), String> {
    let mut r = rng(2);
    let f5 = PrimeModulus::new(5).unwrap();
    for arity in [1usize, 3, 7, 13, 20] {
        for order in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
            let rq = plain_ring::<Rational>(arity, (), order.clone());
            let rp = plain_ring::<Fp>(arity, f5, order);
            for _ in 0..10 {
                ring_axioms_over(&mut r, &rq, &mut rand_q)?;
                ring_axioms_over(&mut r, &rp, &mut |r| rand_fp(r, f5))?;
            }
        }
    }
    Ok(())
}

pub fn suite_substitute() -> Result<(), String> {
    let mut r = rng(3);
    let src = plain_ring::<Rational>(4, (), MonomialOrder::degrevlex());
    let dst = VarRing::<Rational>::new(["a", "b", "c"], MonomialOrder::degrevlex(), ()).unwrap();
    for _ in 0..60 {
        let images: Vec<Option<Polynomial<Rational>>> =
            (0..4).map(|_| Some(random_poly(&mut r, &dst, 3, 2, &mut rand_q))).collect();
        let f = random_poly(&mut r, &src, 4, 3, &mut rand_q);
        let g = random_poly(&mut r, &src, 4, 3, &mut rand_q);
        let s = |p: &Polynomial<Rational>| p.substitute(&dst, &images).unwrap();
        let msg = || format!("substitution not a homomorphism on {f}, {g}");
        ensure(s(&(&f + &g)) == &s(&f) + &s(&g), msg)?;
        ensure(s(&(&f * &g)) == &s(&f) * &s(&g), msg)?;
        let pt: Vec<Rational> = (0..3).map(|_| rand_q(&mut r)).collect();
        let inner: Vec<Rational> = images.iter().map(|i| i.as_ref().unwrap().eval(&pt).unwrap()).collect();
        ensure(s(&f).eval(&pt).unwrap() == f.eval(&inner).unwrap(), || format!("eval∘subst mismatch on {f}"))?;
    }
    Ok(())
}

pub fn suite_compare() -> Result<(), String> {
    let mut r = rng(4);
    let orders = [
        MonomialOrder::degrevlex(),
        MonomialOrder::lex(),
        MonomialOrder::with_ranking(OrderKind::DegRevLex, vec![2, 0, 4, 1, 3]),
        MonomialOrder::with_ranking(OrderKind::Lex, vec![4, 3, 2, 1, 0]),
    ];
    for ord in &orders {
        for _ in 0..300 {
            let a = random_monomial(&mut r, 5, 6);
            let b = random_monomial(&mut r, 5, 6);
            let c = random_monomial(&mut r, 5, 6);
            let msg = || format!("order {ord:?} fails on {a:?} {b:?} {c:?}");
            ensure(ord.compare(&a, &b) == ord.compare(&b, &a).reverse(), msg)?;
            ensure((ord.compare(&a, &b) == Ordering::Equal) == (a == b), msg)?;
            if ord.compare(&a, &b) == Ordering::Less && ord.compare(&b, &c) == Ordering::Less {
                ensure(ord.compare(&a, &c) == Ordering::Less, msg)?;
            }
            ensure(ord.compare(&a, &b) == ord.compare(&a.mul(&c), &b.mul(&c)), msg)?;
            ensure(a.is_one() || ord.compare(&Monomial::one(5), &a) == Ordering::Less, msg)?;
        }
    }
    Ok(())
}

// parse

/// A random expression in the grammar with its expected value.
fn random_expr(r: &mut Rng8, ring: &Arc<VarRing<Rational>>, depth: u32) -> (String, Polynomial<Rational>) {
    let choice = if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..6) };
    match choice {
        0 => {
            let v: i64 = r.gen_range(0..20);
            (v.to_string(), Polynomial::from_i64(ring, v))
        }
        1 => {
            let k = r.gen_range(0..ring.arity());
            (ring.name(k).to_string(), Polynomial::var(ring, k))
        }
        2 => {
            let (a, pa) = random_expr(r, ring, depth - 1);
            let (b, pb) = random_expr(r, ring, depth - 1);
            (format!("({a}) + ({b})"), &pa + &pb)
        }
        3 => {
            let (a, pa) = random_expr(r, ring, depth - 1);
            let (b, pb) = random_expr(r, ring, depth - 1);
            (format!("({a})*({b}) - ({b})"), &(&pa * &pb) - &pb)
        }
        4 => {
            let (a, pa) = random_expr(r, ring, depth - 1);
            (format!("-({a})"), -&pa)
        }
        _ => {
            let (a, pa) = random_expr(r, ring, depth - 1);
            let e = r.gen_range(0..3);
            (format!("({a})^{e}"), pa.pow(e))
        }
    }
}

pub fn suite_parse() -> Result<(), String> {
    let mut r = rng(5);
    let ring = symmat::x_ring::<Rational>(2, ());
    for _ in 0..300 {
        let f = random_poly(&mut r, &ring, 5, 4, &mut |r| q(r.gen_range(-50..=50)));
        let back = parse_poly(&f.to_string(), &ring).map_err(|e| format!("render of {f} fails: {e}"))?;
        ensure(back == f, || format!("round trip {f} -> {back}"))?;

        let (text, expected) = random_expr(&mut r, &ring, 3);
        let got = parse_poly(&text, &ring).map_err(|e| format!("{text:?}: {e}"))?;
        ensure(got == expected, || format!("{text:?} parsed to {got}, expected {expected}"))?;

        let mut bytes: Vec<char> = text.chars().collect();
        let alphabet = ['+', '-', '*', '^', '(', ')', 'x', '9', ' ', '@', 'y'];
        for _ in 0..r.gen_range(1..4) {
            let pos = r.gen_range(0..=bytes.len());
            bytes.insert(pos, alphabet[r.gen_range(0..alphabet.len())]);
        }
        let mutated: String = bytes.into_iter().collect();
        if let Err(e) = parse_poly(&mutated, &ring) {
            ensure(e.line == 1 && e.column >= 1 && e.column <= mutated.chars().count() + 1, || {
                format!("bad position {e} for {mutated:?}")
            })?;
        }
    }
    Ok(())
}

// groebner

fn gb_suite_over<K: Field>(
    r: &mut Rng8,
    ring: &Arc<VarRing<K>>,
    coeff: &mut dyn FnMut(&mut Rng8) -> K,
    rounds: usize,
) -> Result<(), String> {
    let budget = Budget::default();
    for _ in 0..rounds {
        let ngens = r.gen_range(1..=3);
        let gens: Vec<Polynomial<K>> = (0..ngens).map(|_| random_poly(r, ring, 3, 2, coeff)).collect();
        let gb = buchberger_in(ring, &gens, &budget).map_err(|e| e.to_string())?;
        let b = gb.basis();
        let show = || gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        ensure(is_groebner_basis(b), || format!("S-pairs do not reduce for ({})", show()))?;
        ensure(b.iter().all(|g| g.leading_coeff().unwrap().is_one()), || format!("not monic: ({})", show()))?;
        for (i, g) in b.iter().enumerate() {
            for (j, h) in b.iter().enumerate() {
                if i != j {
                    ensure(!g.leading_monomial().unwrap().divides(h.leading_monomial().unwrap()), || {
                        format!("not reduced: ({})", show())
                    })?;
                }
            }
        }
        ensure(gens.iter().all(|g| gb.normal_form(g).is_zero()), || format!("generator not in basis ideal ({})", show()))?;

        let f = random_poly(r, ring, 4, 3, coeff);
        let nf = gb.normal_form(&f);
        ensure(gb.normal_form(&nf) == nf, || format!("NF not idempotent for {f}"))?;
        ensure(normal_form(&nf, b) == nf, || "free NF disagrees".into())?;
        ensure(
            nf.terms().iter().all(|(m, _)| b.iter().all(|g| !g.leading_monomial().unwrap().divides(m))),
            || format!("NF of {f} still reducible"),
        )?;

        let mut member = Polynomial::zero(ring);
        for g in &gens {
            member = &member + &(&random_poly(r, ring, 2, 2, coeff) * g);
        }
        ensure(gb.normal_form(&member).is_zero(), || format!("combination {member} not recognised"))?;
        let small = Budget { pair_cap: 20_000, degree_cap: 60 };
        if let Ok(rm) = radical_membership(&member, &gens, &small) {
            ensure(rm, || format!("ideal member {member} rejected by radical test"))?;
        }
        if let (Ok(a), Ok(bb)) = (gb.radical_contains(&f, &small), radical_membership(&f, &gens, &small)) {
            ensure(a.member == bb, || format!("radical routes disagree on {f} mod ({})", show()))?;
        }
    }
    Ok(())
}

pub fn suite_groebner() -> Result<(), String> {
    let mut r = rng(6);
    let p = PrimeModulus::new(32003).unwrap();
    for order in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
        let rp = plain_ring::<Fp>(3, p, order.clone());
        gb_suite_over(&mut r, &rp, &mut |r| rand_fp(r, p), 40)?;
        let rq = plain_ring::<Rational>(3, (), order);
        gb_suite_over(&mut r, &rq, &mut |r| q(r.gen_range(-3..=3)), 25)?;
    }
    Ok(())
}

/// `contains_one` on the fixtures' `I + (det)` and `Î` under both orders.
pub fn suite_order_invariance() -> Result<(), String> {
    let budget = Budget::default();
    for name in Q_FIXTURES {
        let spec = qfixture(name);
        let det = symmat::det_poly(&spec.ring, spec.n, Block::X).unwrap();
        let (hat_ring, hat_gens) = symmat::build_hat_ideal(&spec);
        let mut j = spec.generators.clone();
        j.push(det);
        let mut answers = Vec::new();
        for order in [MonomialOrder::degrevlex(), MonomialOrder::lex()] {
            let rj = spec.ring.with_order(order.clone());
            let jj: Vec<_> = j.iter().map(|g| g.embed(&rj).unwrap()).collect();
            let rh = hat_ring.with_order(order);
            let hh: Vec<_> = hat_gens.iter().map(|g| g.embed(&rh).unwrap()).collect();
            answers.push((
                contains_one(&rj, &jj, &budget).map_err(|e| e.to_string())?,
                contains_one(&rh, &hh, &budget).map_err(|e| e.to_string())?,
            ));
        }
        ensure(answers[0] == answers[1], || format!("{name}: order changes contains_one {answers:?}"))?;
    }
    Ok(())
}

// symmat

fn identity_poly_matrix(ring: &Arc<VarRing<Rational>>, n: usize, d: &Polynomial<Rational>) -> Vec<Vec<Polynomial<Rational>>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { d.clone() } else { Polynomial::zero(ring) }).collect()).collect()
}

fn polymatmul(a: &[Vec<Polynomial<Rational>>], b: &[Vec<Polynomial<Rational>>]) -> Vec<Vec<Polynomial<Rational>>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Polynomial::zero(a[0][0].ring());
                    for k in 0..n {
                        s = &s + &(&a[i][k] * &b[k][j]);
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn suite_adjugate() -> Result<(), String> {
    for n in 1..=4 {
        let ring = symmat::x_ring::<Rational>(n, ());
        let x = symmat::generic_matrix(&ring, n, Block::X).unwrap();
        let adj = symmat::adjugate(&ring, n, Block::X).unwrap();
        let det = symmat::det_poly(&ring, n, Block::X).unwrap();
        let d1 = identity_poly_matrix(&ring, n, &det);
        ensure(polymatmul(&x, &adj) == d1, || format!("X·adj(X) ≠ det·1 for n={n}"))?;
        ensure(polymatmul(&adj, &x) == d1, || format!("adj(X)·X ≠ det·1 for n={n}"))?;
        let factorial: usize = (1..=n).product();
        ensure(det.len() == factorial, || format!("det has {} terms for n={n}", det.len()))?;
        let id: Vec<Rational> = (0..n * n).map(|k| q(i64::from(k % (n + 1) == 0))).collect();
        ensure(det.eval(&id).unwrap().is_one(), || format!("det(1) ≠ 1 for n={n}"))?;
        for i in 0..n {
            for j in 0..n {
                let v = adj[i][j].eval(&id).unwrap();
                ensure(v == q(i64::from(i == j)), || format!("adj(1) ≠ 1 for n={n}"))?;
            }
        }
    }
    Ok(())
}

/// `h(v) = det(v)^l·f(v⁻¹)` on 100 random invertible matrices.
pub fn suite_formal_inverse() -> Result<(), String> {
    let mut r = rng(7);
    for trial in 0..100 {
        let n = 1 + trial % 3;
        let ring = symmat::x_ring::<Rational>(n, ());
        let f = random_poly(&mut r, &ring, 3, 3, &mut |r| q(r.gen_range(-5..=5)));
        let img = symmat::eval_at_formal_inverse(&f).unwrap();
        ensure(img.denom_exponent == f.total_degree().unwrap_or(0), || format!("l ≠ deg f for {f}"))?;
        let (v, vinv, det) = random_invertible(&mut r, n);
        let lhs = img.numerator.eval(&v).unwrap();
        let rhs = det.pow(img.denom_exponent as u64).mul(&f.eval(&vinv).unwrap());
        ensure(lhs == rhs, || format!("formal inverse contract fails for {f} at {v:?}"))?;
        let k = symmat::make_k(&img).unwrap();
        ensure(k.eval(&v).unwrap() == lhs.mul(&det), || format!("k ≠ h·det for {f}"))?;
    }
    Ok(())
}

/// Substituting then evaluating agrees with evaluating at `v·w` and `v·w⁻¹`.
pub fn suite_products() -> Result<(), String> {
    let mut r = rng(8);
    for trial in 0..60 {
        let n = 1 + trial % 3;
        let ring = symmat::x_ring::<Rational>(n, ());
        let f = random_poly(&mut r, &ring, 3, 3, &mut |r| q(r.gen_range(-5..=5)));
        let (w, winv, wdet) = random_invertible(&mut r, n);
        let v: Vec<Rational> = (0..n * n).map(|_| rand_q(&mut r)).collect();

        let plain = symmat::xy_ring::<Rational>(n, (), false);
        let prod = symmat::subst_product(&f, &plain).unwrap();
        let pt: Vec<Rational> = w.iter().chain(v.iter()).cloned().collect();
        ensure(prod.eval(&pt).unwrap() == f.eval(&matmul(&v, &w, n)).unwrap(), || format!("f(XY) contract fails for {f}"))?;

        let hat = symmat::xy_ring::<Rational>(n, (), true);
        let alt = symmat::subst_x_times_inverse_y(&f, &hat).unwrap();
        let mut pt: Vec<Rational> = w.clone();
        pt.push(wdet.inv().unwrap());
        pt.extend(v.iter().cloned());
        pt.push(rand_q(&mut r));
        let expected = f.eval(&matmul(&v, &winv, n)).unwrap();
        ensure(alt.eval(&pt).unwrap() == expected, || format!("f(X·Y⁻¹) contract fails for {f}"))?;

        let padded = symmat::subst_x_times_adj_y(&f, &plain).unwrap();
        let pt: Vec<Rational> = w.iter().chain(v.iter()).cloned().collect();
        let lhs = padded.numerator.eval(&pt).unwrap();
        ensure(lhs == wdet.pow(padded.denom_exponent as u64).mul(&expected), || format!("padded X·adj(Y) fails for {f}"))?;
    }
    Ok(())
}

// decide

/// With `V(I) = V*(I)`, the x0-free checks agree with the standard ones.
pub fn suite_fast_path() -> Result<(), String> {
    let mut checked = 0;
    for name in Q_FIXTURES {
        let spec = qfixture(name);
        let std = Decider::new(&spec, DecideOptions::default());
        if std.variety_equals_vstar() != Verdict::Decided(true) {
            continue;
        }
        let fast = Decider::new(&spec, DecideOptions { fast_path: true, ..Default::default() });
        let pairs = [
            ("inversion_alt", std.check_inversion_alt(), fast.check_inversion_alt()),
            ("multiplication", std.check_multiplication(), fast.check_multiplication()),
            ("group_alt", std.is_group_alt().group.unwrap(), fast.is_group_alt().group.unwrap()),
        ];
        for (what, a, b) in pairs {
            ensure(a == b, || format!("{name}: fast path changes {what}: {a} vs {b}"))?;
        }
        ensure(fast.is_group().mode.fast_path_used, || format!("{name}: fast path not used"))?;
        checked += 1;
    }
    ensure(checked >= 3, || format!("only {checked} fixtures with V = V*"))
}

pub fn suite_empty_ideal() -> Result<(), String> {
    for n in 1..=3 {
        let spec = ProblemSpec::<Rational>::empty(n, ());
        let rep = Decider::new(&spec, DecideOptions::default()).is_group();
        ensure(rep.group == Some(Verdict::Decided(true)), || format!("I = (0), n={n}: {:?}", rep.group))?;
    }
    for p in [2u64, 3, 5] {
        let spec = ProblemSpec::<Fp>::empty(2, PrimeModulus::new(p).unwrap());
        let spec = add_field_equations(&spec, p).unwrap();
        let rep = Decider::new(&spec, DecideOptions::default()).is_group();
        ensure(rep.group == Some(Verdict::Decided(true)), || format!("GL(2, F_{p}): {:?}", rep.group))?;
    }
    Ok(())
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const PROPERTY_SUITES: &[Suite] = &[
    ("coeff: field axioms and Fermat", suite_field_axioms),
    ("poly: ring axioms up to 20 variables", suite_ring_axioms),
    ("poly: substitution homomorphism and eval", suite_substitute),
    ("poly: monomial order laws", suite_compare),
    ("parse: round trip and fuzzing", suite_parse),
    ("groebner: S-pairs, reducedness, NF, membership", suite_groebner),
    ("groebner: order invariance of 1 ∈ J", suite_order_invariance),
    ("symmat: X·adj(X) = det·1 for n ≤ 4", suite_adjugate),
    ("symmat: formal inverse on 100 random matrices", suite_formal_inverse),
    ("symmat: product substitution contracts", suite_products),
    ("decide: fast path consistency", suite_fast_path),
    ("decide: zero ideal gives GL", suite_empty_ideal),
];
