//! The acceptance criteria, each returning a one-line summary on success.

use std::time::{Duration, Instant};

use algroup::coeff::{Fp, PrimeModulus, Rational};
use algroup::decide::{add_field_equations, Check, CheckKind, DecideOptions, Decider, DecisionReport, Verdict};
use algroup::groebner::Budget;
use algroup::oracle::{self, DEFAULT_ENUM_CAP};
use algroup::parse::ProblemSpec;
use algroup::poly::Polynomial;
use rand::Rng;

use super::*;

pub type Outcome = Result<String, String>;

const T: Verdict = Verdict::Decided(true);
const F: Verdict = Verdict::Decided(false);

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el <= limit, || format!("{what} took {el:?}, budget {limit:?}"))
}

fn expect(what: &str, got: Option<Verdict>, want: Verdict) -> Result<(), String> {
    ensure(got == Some(want), || format!("{what}: got {got:?}, expected {want}"))
}

fn all_checks(spec: &ProblemSpec<Rational>) -> DecisionReport {
    Decider::new(spec, DecideOptions::default()).run(
        &[Check::VstarEq, Check::Identity, Check::Inversion, Check::Multiplication, Check::Group],
        false,
    )
}

pub fn criterion_1() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("linear-group.alg");
    let mut rep = Decider::new(&spec, DecideOptions::default()).is_group();
    let mut note = "default caps";
    if rep.group == Some(Verdict::Undecided) {
        let raised = DecideOptions { budget: Budget { pair_cap: 20_000_000, degree_cap: 400 }, ..Default::default() };
        rep = Decider::new(&spec, raised).is_group();
        note = "raised caps";
    }
    expect("group", rep.group, T)?;
    expect("identity", rep.identity, T)?;
    expect("inversion", rep.inversion, T)?;
    expect("multiplication", rep.multiplication, T)?;
    within(start, Duration::from_secs(600), "linear group")?;
    Ok(format!("n=3 linear forms: group = true ({note}, {:?})", start.elapsed()))
}

pub fn criterion_2() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("linear-noninv.alg");
    let rep = Decider::new(&spec, DecideOptions::default()).is_group();
    expect("identity", rep.identity, T)?;
    expect("inversion", rep.inversion, F)?;
    expect("group", rep.group, F)?;
    ensure(rep.witness_for(CheckKind::Inversion).is_some(), || "no inversion witness".into())?;
    expect("V = V*", Decider::new(&spec, DecideOptions::default()).run(&[Check::VstarEq], false).variety_equals_vstar, F)?;
    within(start, Duration::from_secs(60), "non-invertible linear case")?;
    Ok(format!("identity true, inversion false, group false ({:?})", start.elapsed()))
}

pub fn criterion_3() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("linear-noid.alg");
    let rep = Decider::new(&spec, DecideOptions::default()).is_group();
    expect("identity", rep.identity, F)?;
    expect("group", rep.group, F)?;
    ensure(rep.gb_stats.is_empty() && rep.inversion.is_none() && rep.multiplication.is_none(), || {
        format!("Gröbner work was done: {:?}", rep.gb_stats)
    })?;
    let alt = Decider::new(&spec, DecideOptions::default()).is_group_alt();
    expect("alt group", alt.group, F)?;
    ensure(alt.gb_stats.is_empty(), || "alt mode did Gröbner work".into())?;
    within(start, Duration::from_secs(1), "missing identity")?;
    Ok(format!("identity false, group false, no Gröbner basis ({:?})", start.elapsed()))
}

pub fn criterion_4() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("finite-roots.alg");
    let rep = all_checks(&spec);
    expect("V = V*", rep.variety_equals_vstar, T)?;
    expect("identity", rep.identity, T)?;
    expect("inversion", rep.inversion, T)?;
    expect("multiplication", rep.multiplication, F)?;
    expect("group", rep.group, F)?;
    let w = rep.witness_for(CheckKind::Multiplication).ok_or("no multiplication witness")?;
    ensure(w.generator_index == 1, || format!("witness index {}", w.generator_index))?;
    within(start, Duration::from_secs(60), "finite roots")?;
    Ok(format!("V = V*, identity, inversion true; multiplication false ({:?})", start.elapsed()))
}

pub fn criterion_5() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("diag-union.alg");
    expect(
        "multiplication",
        Some(Decider::new(&spec, DecideOptions::default()).check_multiplication()),
        T,
    )?;
    let f3 = PrimeModulus::new(3).unwrap();
    let gens: Vec<String> = spec.generators.iter().map(|g| g.to_string()).collect();
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    let over_f3 = ProblemSpec::<Fp>::from_strs(2, f3, &refs).map_err(|e| e.to_string())?;
    let vs = oracle::enumerate(&over_f3, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
    ensure(vs.multiplication_failure().is_none(), || "V* over F_3 not closed".into())?;
    let (a, b) = vs.full_multiplication_failure().ok_or("V over F_3 unexpectedly closed")?;
    let witness = format!("{a:?}·{b:?}");
    within(start, Duration::from_secs(60), "diagonal union")?;
    Ok(format!(
        "V* closed; over F_3 |V| = {}, |V*| = {}, V not closed ({witness})",
        vs.points.len(),
        vs.invertible.len()
    ))
}

pub fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (name, vstar) in [("sl2.alg", T), ("zero2.alg", F)] {
        let start = Instant::now();
        let spec = qfixture(name);
        let rep = all_checks(&spec);
        expect(&format!("{name} V = V*"), rep.variety_equals_vstar, vstar)?;
        expect(&format!("{name} group"), rep.group, T)?;
        within(start, Duration::from_secs(10), name)?;
        parts.push(format!("{name}: V=V* {vstar}, group true"));
    }
    Ok(parts.join("; "))
}

pub fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec = qfixture("cubic-q.alg");
    let rep = Decider::new(&spec, DecideOptions::default()).is_group();
    expect("group", rep.group, F)?;
    ensure(!rep.witnesses.is_empty(), || "no witness".into())?;
    within(start, Duration::from_secs(5), "n=1 cubic")?;
    Ok(format!("(x1-1)(x1^2-2) over Q: group false via {} ({:?})", rep.witnesses[0].check.name(), start.elapsed()))
}

pub fn criterion_8() -> Outcome {
    let spec = fpfixture("cubic-f5.alg");
    let start = Instant::now();
    let t1 = add_field_equations(&spec, 5).map_err(|e| e.to_string())?;
    let rep = Decider::new(&t1, DecideOptions::default()).is_group();
    expect("t=1 group", rep.group, T)?;
    let vs = oracle::enumerate(&t1, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
    let o = oracle::is_group_bruteforce(&vs);
    ensure(o.group && vs.points == vec![vec![1]], || format!("oracle disagrees: {o:?}"))?;
    within(start, Duration::from_secs(60), "t=1")?;
    let start = Instant::now();
    let t2 = add_field_equations(&spec, 25).map_err(|e| e.to_string())?;
    let rep2 = Decider::new(&t2, DecideOptions::default()).is_group();
    expect("t=2 group", rep2.group, F)?;
    within(start, Duration::from_secs(60), "t=2")?;
    Ok("F_5: t=1 group true (oracle agrees, V = {1}); t=2 group false".into())
}

fn battery_over<K: algroup::coeff::Field>(name: &str, spec: &ProblemSpec<K>, log: &mut Vec<String>) -> Result<usize, String> {
    let d = Decider::new(spec, DecideOptions::default());
    let mut compared = 0;
    let (a, b) = (d.check_inversion(), d.check_inversion_alt());
    if a != Verdict::Undecided && b != Verdict::Undecided {
        ensure(a == b, || format!("{name}: inversion via k {a} vs via h {b}"))?;
        compared += 1;
    }
    let (g, ga) = (d.is_group().group.unwrap(), d.is_group_alt().group.unwrap());
    if g != Verdict::Undecided && ga != Verdict::Undecided {
        ensure(g == ga, || format!("{name}: is_group {g} vs is_group_alt {ga}"))?;
        compared += 1;
    }
    log.push(format!("{name}: inv {a}/{b}, group {g}/{ga}"));
    Ok(compared)
}

pub fn criterion_9() -> Outcome {
    let mut log = Vec::new();
    let mut compared = 0;
    for name in Q_FIXTURES {
        compared += battery_over(name, &qfixture(name), &mut log)?;
    }
    let base = fpfixture("cubic-f5.alg");
    for q in [5u64, 25] {
        let spec = add_field_equations(&base, q).map_err(|e| e.to_string())?;
        compared += battery_over(&format!("cubic q={q}"), &spec, &mut log)?;
    }
    let expected = 2 * (Q_FIXTURES.len() + 2);
    ensure(compared == expected, || format!("only {compared}/{expected} comparisons decided: {log:?}"))?;
    Ok(format!("{compared} comparisons agree across {} fixtures", Q_FIXTURES.len() + 2))
}

/// Random problem over `F_p` with the field equations for `q = p` added.
pub fn random_fp_problem(r: &mut Rng8, p: u64) -> ProblemSpec<Fp> {
    let pm = PrimeModulus::new(p).unwrap();
    let base = ProblemSpec::<Fp>::empty(2, pm);
    let ring = base.ring.clone();
    let ngens = r.gen_range(0..=3);
    let identity: Vec<Fp> = (0..4).map(|k| pm.elem(u64::from(k % 3 == 0))).collect();
    let mut gens = Vec::new();
    for _ in 0..ngens {
        let terms = r.gen_range(1..=3);
        let mut g = random_poly(r, &ring, terms, 2, &mut |r| pm.elem(r.gen_range(1..p)));
        // Half the generators are shifted to vanish at the identity, so that
        // the interesting cases are not too rare.
        if r.gen_bool(0.5) {
            let c = g.eval(&identity).unwrap();
            g = &g - &Polynomial::constant(&ring, c);
        }
        gens.push(g);
    }
    add_field_equations(&ProblemSpec::new(2, pm, gens), p).unwrap()
}

pub fn oracle_agreement(count: usize, seed: u64) -> Outcome {
    let start = Instant::now();
    let mut r = rng(seed);
    let mut groups = 0;
    let mut not_groups = 0;
    let mut profiles = std::collections::BTreeSet::new();
    for i in 0..count {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let spec = random_fp_problem(&mut r, p);
        let show = || spec.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        let vs = oracle::enumerate(&spec, DEFAULT_ENUM_CAP).map_err(|e| e.to_string())?;
        let o = oracle::is_group_bruteforce(&vs);
        let d = Decider::new(&spec, DecideOptions::default());
        let engine = [
            ("identity", Verdict::Decided(d.check_identity()), o.identity),
            ("inversion", d.check_inversion(), o.inversion),
            ("multiplication", d.check_multiplication(), o.multiplication),
            ("group", d.is_group().group.unwrap(), o.group),
            ("group_alt", d.is_group_alt().group.unwrap(), o.group),
        ];
        for (what, e, want) in engine {
            ensure(e == Verdict::Decided(want), || {
                format!("spec #{i} over F_{p} ({}): {what} engine {e}, oracle {want}", show())
            })?;
        }
        profiles.insert((o.identity, o.inversion, o.multiplication));
        if o.group {
            groups += 1;
        } else {
            not_groups += 1;
        }
    }
    Ok(format!(
        "{count} random specs agree ({groups} groups, {not_groups} non-groups, {} verdict profiles, {:?})",
        profiles.len(),
        start.elapsed()
    ))
}

pub fn criterion_10() -> Outcome {
    let start = Instant::now();
    let out = oracle_agreement(240, 10)?;
    within(start, Duration::from_secs(1800), "oracle fuzzing")?;
    Ok(out)
}

pub fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, suite) in PROPERTY_SUITES {
        if let Err(e) = suite() {
            failed.push(format!("{name}: {e}"));
        }
    }
    ensure(failed.is_empty(), || failed.join("; "))?;
    within(start, Duration::from_secs(600), "property suites")?;
    Ok(format!("{} property suites pass ({:?})", PROPERTY_SUITES.len(), start.elapsed()))
}

pub type Criterion = (u32, &'static str, fn() -> Outcome);

pub const CRITERIA: &[Criterion] = &[
    (1, "n=3 linear forms give a group", criterion_1),
    (2, "n=3 linear forms fail inversion", criterion_2),
    (3, "n=3 linear forms miss the identity, no Gröbner work", criterion_3),
    (4, "finite roots n=2 fail multiplication", criterion_4),
    (5, "diagonal union: V* closed, V not", criterion_5),
    (6, "SL2 and zero ideal", criterion_6),
    (7, "n=1 cubic over Q is not a group", criterion_7),
    (8, "F_5 cubic with field equations", criterion_8),
    (9, "standard and alternative modes agree", criterion_9),
    (10, "random specs agree with brute force", criterion_10),
    (11, "module property suites", criterion_11),
];
