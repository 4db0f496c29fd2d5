//! The group decision procedures.
//!
//! Every closure property of `V*(I)` is reduced to radical membership
//! questions:
//!
//! * identity: `f_i(1_n) = 0`;
//! * inversion: `k_i = h_i·det ∈ √I`, where `f_i(X⁻¹) = h_i / det^{l_i}`
//!   (alternatively `h_i ∈ √Î`);
//! * multiplication: `f_i(XY) ∈ √Î_xy` with `Î_xy = Î + φ(Î)`;
//! * the combined test `f_i(X·Y⁻¹) ∈ √Î_xy` once the identity is known to
//!   lie in `V(I)`.
//!
//! Here `Î = I + (x0·det(X) - 1)`. The computations run over `Q` or `F_p`;
//! since `1 ∈ J` does not change under field extension, the verdicts hold
//! over the algebraic closure.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coeff::{Field, FieldTag, Fp};
use crate::groebner::{buchberger_in, buchberger_seeded, Budget, GbError, GbStats, GroebnerBasis};
use crate::parse::ProblemSpec;
use crate::poly::{Polynomial, VarRing};
use crate::symmat::{self, Block};

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Decided(bool),
    Undecided,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::Decided(true)
    }

    pub fn is_false(self) -> bool {
        self == Verdict::Decided(false)
    }

    pub fn decided(self) -> Option<bool> {
        match self {
            Verdict::Decided(b) => Some(b),
            Verdict::Undecided => None,
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Decided(false), _) | (_, Verdict::Decided(false)) => Verdict::Decided(false),
            (Verdict::Decided(true), Verdict::Decided(true)) => Verdict::Decided(true),
            _ => Verdict::Undecided,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Decided(b) => write!(f, "{b}"),
            Verdict::Undecided => write!(f, "undecided"),
        }
    }
}

// JSON: `true` / `false` / `"undecided"`.
impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Decided(b) => s.serialize_bool(*b),
            Verdict::Undecided => s.serialize_str("undecided"),
        }
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            B(bool),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::B(b) => Ok(Verdict::Decided(b)),
            Repr::S(s) if s == "undecided" => Ok(Verdict::Undecided),
            Repr::S(s) => Err(serde::de::Error::custom(format!("unknown verdict {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Identity,
    Inversion,
    InversionAlt,
    Multiplication,
    GroupAlt,
    VarietyEqualsVstar,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Identity => "identity",
            CheckKind::Inversion => "inversion",
            CheckKind::InversionAlt => "inversion_alt",
            CheckKind::Multiplication => "multiplication",
            CheckKind::GroupAlt => "group_alt",
            CheckKind::VarietyEqualsVstar => "variety_equals_vstar",
        }
    }
}

/// A generator whose test failed, with the polynomial that was tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: CheckKind,
    /// 1-based index into the generator list.
    pub generator_index: usize,
    pub polynomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndecidedNote {
    pub check: CheckKind,
    pub generator_index: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeFlags {
    pub alt: bool,
    pub fast_path_requested: bool,
    pub fast_path_used: bool,
}

/// Everything a run decided, in a form that serialises one-to-one to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub n: usize,
    pub field: FieldTag,
    /// Where the verdicts hold, e.g. "the algebraic closure of Q".
    pub verdict_scope: String,
    pub generators: Vec<String>,
    pub mode: ModeFlags,
    pub identity: Option<Verdict>,
    pub inversion: Option<Verdict>,
    pub multiplication: Option<Verdict>,
    pub group: Option<Verdict>,
    pub variety_equals_vstar: Option<Verdict>,
    pub witnesses: Vec<Witness>,
    pub undecided: Vec<UndecidedNote>,
    pub reason: Option<String>,
    pub timings_us: BTreeMap<String, u64>,
    pub gb_stats: BTreeMap<String, GbStats>,
}

impl DecisionReport {
    /// True when some requested verdict could not be decided.
    pub fn has_undecided(&self) -> bool {
        [self.identity, self.inversion, self.multiplication, self.group, self.variety_equals_vstar]
            .contains(&Some(Verdict::Undecided))
    }

    pub fn witness_for(&self, check: CheckKind) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.check == check)
    }
}

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub budget: Budget,
    /// Skip `x0`/`y0` when `V(I) = V*(I)` has been established.
    pub fast_path: bool,
    /// Worker threads for per-generator radical tests.
    pub jobs: usize,
    /// Set when field equations for `F_q` were added; only affects the
    /// scope statement in the report.
    pub field_restriction: Option<u64>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { budget: Budget::default(), fast_path: false, jobs: 1, field_restriction: None }
    }
}

/// Checks a report can be asked to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Identity,
    Inversion,
    Multiplication,
    Group,
    GroupAlt,
    VstarEq,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("{q} is not a positive power of the characteristic {p}")]
    NotAPowerOfCharacteristic { q: u64, p: u64 },
    #[error("field size {0} too large for field equations")]
    FieldTooLarge(u64),
}

/// Appends `x_i^q - x_i` for every entry variable, so that the variety over
/// the closure is cut down to its `F_q`-points.
pub fn add_field_equations(spec: &ProblemSpec<Fp>, q: u64) -> Result<ProblemSpec<Fp>, DecideError> {
    let p = spec.ring.tag().characteristic();
    let mut r = q;
    while r > 1 && r.is_multiple_of(p) {
        r /= p;
    }
    if q < p || r != 1 {
        return Err(DecideError::NotAPowerOfCharacteristic { q, p });
    }
    let e = u32::try_from(q).map_err(|_| DecideError::FieldTooLarge(q))?;
    let mut out = spec.clone();
    for v in 0..spec.n * spec.n {
        let x = Polynomial::var(&spec.ring, v);
        out.generators.push(&x.pow(e) - &x);
    }
    Ok(out)
}

struct Outcome {
    verdict: Verdict,
    witness: Option<Witness>,
    undecided: Option<UndecidedNote>,
    stats: GbStats,
    micros: u64,
}

impl Outcome {
    fn decided(v: bool) -> Self {
        Outcome { verdict: Verdict::Decided(v), witness: None, undecided: None, stats: GbStats::default(), micros: 0 }
    }
}

/// Runs the checks for one problem and caches the Gröbner bases they share.
pub struct Decider<'a, K: Field> {
    spec: &'a ProblemSpec<K>,
    opts: DecideOptions,
    /// Nonzero generators with their 1-based index.
    gens: Vec<(usize, Polynomial<K>)>,
    xhat: Arc<VarRing<K>>,
    xy_hat: Arc<VarRing<K>>,
    xy_plain: Arc<VarRing<K>>,
    gb_x: OnceLock<Result<GroebnerBasis<K>, GbError>>,
    gb_hat: OnceLock<Result<GroebnerBasis<K>, GbError>>,
    gb_hat_xy: OnceLock<Result<GroebnerBasis<K>, GbError>>,
    gb_x_xy: OnceLock<Result<GroebnerBasis<K>, GbError>>,
    vstar: OnceLock<Result<bool, GbError>>,
    setup_stats: Mutex<GbStats>,
}

type RadicalResult<K> = Result<(bool, GbStats, Polynomial<K>), GbError>;

type GenTest<'f, K> = dyn Fn(&Polynomial<K>) -> Result<Polynomial<K>, GbError> + Sync + 'f;

impl<'a, K: Field> Decider<'a, K> {
    pub fn new(spec: &'a ProblemSpec<K>, opts: DecideOptions) -> Self {
        let ctx = spec.ring.ctx().clone();
        let gens = spec
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(i, g)| (i + 1, g.clone()))
            .collect();
        Decider {
            spec,
            gens,
            xhat: symmat::xhat_ring::<K>(spec.n, ctx.clone()),
            xy_hat: symmat::xy_ring::<K>(spec.n, ctx.clone(), true),
            xy_plain: symmat::xy_ring::<K>(spec.n, ctx, false),
            opts,
            gb_x: OnceLock::new(),
            gb_hat: OnceLock::new(),
            gb_hat_xy: OnceLock::new(),
            gb_x_xy: OnceLock::new(),
            vstar: OnceLock::new(),
            setup_stats: Mutex::new(GbStats::default()),
        }
    }

    pub fn spec(&self) -> &ProblemSpec<K> {
        self.spec
    }

    fn n(&self) -> usize {
        self.spec.n
    }

    fn record(&self, gb: &Result<GroebnerBasis<K>, GbError>) {
        if let Ok(gb) = gb {
            self.setup_stats.lock().expect("stats lock").absorb(gb.stats());
        }
    }

    /// Gröbner basis of `I` in `K[x]`.
    pub fn gb_x(&self) -> Result<&GroebnerBasis<K>, GbError> {
        self.gb_x
            .get_or_init(|| {
                let gens: Vec<Polynomial<K>> = self.gens.iter().map(|(_, g)| g.clone()).collect();
                let gb = buchberger_in(&self.spec.ring, &gens, &self.opts.budget);
                self.record(&gb);
                gb
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Gröbner basis of `Î` in `K[x, x0]`.
    pub fn gb_hat(&self) -> Result<&GroebnerBasis<K>, GbError> {
        self.gb_hat
            .get_or_init(|| {
                let gb = self.gb_x().and_then(|gx| {
                    let lift: Vec<usize> = (0..self.n() * self.n()).collect();
                    let seed = gx.map_vars(&self.xhat, &lift);
                    let f0 = symmat::build_f0(&self.xhat, self.n())?;
                    buchberger_seeded(&self.xhat, seed.basis().to_vec(), vec![f0], &self.opts.budget)
                });
                self.record(&gb);
                gb
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `Î_xy = Î + φ(Î)`: the two copies live in disjoint variables, so the
    /// union of their bases is already a Gröbner basis.
    pub fn gb_hat_xy(&self) -> Result<&GroebnerBasis<K>, GbError> {
        self.gb_hat_xy
            .get_or_init(|| {
                self.gb_hat().map(|g| {
                    let nn = self.n() * self.n();
                    // xhat ring: [x1..x_{n²}, x0]; xy ring: [y1.., y0, x1.., x0]
                    let into_y: Vec<usize> = (0..=nn).collect();
                    let into_x: Vec<usize> = (0..=nn).map(|k| nn + 1 + k).collect();
                    GroebnerBasis::disjoint_union(&g.map_vars(&self.xy_hat, &into_x), &g.map_vars(&self.xy_hat, &into_y))
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `I + φ(I)` in the ring without `x0`, `y0`.
    fn gb_x_xy(&self) -> Result<&GroebnerBasis<K>, GbError> {
        self.gb_x_xy
            .get_or_init(|| {
                self.gb_x().map(|g| {
                    let nn = self.n() * self.n();
                    let into_y: Vec<usize> = (0..nn).collect();
                    let into_x: Vec<usize> = (0..nn).map(|k| nn + k).collect();
                    GroebnerBasis::disjoint_union(
                        &g.map_vars(&self.xy_plain, &into_x),
                        &g.map_vars(&self.xy_plain, &into_y),
                    )
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn vstar_cached(&self) -> Result<bool, GbError> {
        self.vstar
            .get_or_init(|| {
                let gb = self.gb_x()?;
                let det = symmat::det_poly(&self.spec.ring, self.n(), Block::X)?;
                let j = buchberger_seeded(&self.spec.ring, gb.basis().to_vec(), vec![det], &self.opts.budget);
                self.record(&j);
                Ok(j?.is_unit())
            })
            .clone()
    }

    fn use_fast_path(&self) -> bool {
        self.opts.fast_path && matches!(self.vstar_cached(), Ok(true))
    }

    fn identity_point(&self) -> Vec<K> {
        let n = self.n();
        let ctx = self.spec.ring.ctx();
        (0..n * n).map(|k| if k % (n + 1) == 0 { K::one(ctx) } else { K::zero(ctx) }).collect()
    }

    /// Whether some generator is a nonzero constant, making `V(I)` empty.
    pub fn has_constant_generator(&self) -> bool {
        self.gens.iter().any(|(_, g)| g.is_constant())
    }

    fn identity_outcome(&self) -> Outcome {
        let start = Instant::now();
        let point = self.identity_point();
        let mut out = Outcome::decided(true);
        for (i, g) in &self.gens {
            if !g.eval(&point).expect("arity").is_zero() {
                out.verdict = Verdict::Decided(false);
                out.witness =
                    Some(Witness { check: CheckKind::Identity, generator_index: *i, polynomial: g.to_string() });
                break;
            }
        }
        out.micros = start.elapsed().as_micros() as u64;
        out
    }

    pub fn check_identity(&self) -> bool {
        self.identity_outcome().verdict.is_true()
    }

    /// Tests `test(f_i) ∈ √(gb)` for every generator.
    fn radical_all(
        &self,
        check: CheckKind,
        gb: Result<&GroebnerBasis<K>, GbError>,
        test: &GenTest<'_, K>,
    ) -> Outcome {
        let start = Instant::now();
        let mut out = Outcome::decided(true);
        let gb = match gb {
            Ok(gb) => gb,
            Err(e) => {
                out.verdict = Verdict::Undecided;
                out.undecided = Some(UndecidedNote { check, generator_index: None, reason: e.to_string() });
                out.micros = start.elapsed().as_micros() as u64;
                return out;
            }
        };
        let budget = self.opts.budget;
        let run_one = |f: &Polynomial<K>| -> RadicalResult<K> {
            let p = test(f)?;
            let ans = gb.radical_contains(&p, &budget)?;
            Ok((ans.member, ans.stats, p))
        };

        let results: Vec<(usize, Option<RadicalResult<K>>)> = if self.opts.jobs > 1 {
            let first_fail = AtomicUsize::new(usize::MAX);
            let pool = rayon::ThreadPoolBuilder::new().num_threads(self.opts.jobs).build();
            let work = || {
                self.gens
                    .par_iter()
                    .map(|(i, f)| {
                        if first_fail.load(Ordering::Relaxed) < *i {
                            return (*i, None);
                        }
                        let r = run_one(f);
                        if matches!(r, Ok((false, _, _))) {
                            first_fail.fetch_min(*i, Ordering::Relaxed);
                        }
                        (*i, Some(r))
                    })
                    .collect()
            };
            match pool {
                Ok(pool) => pool.install(work),
                Err(_) => work(),
            }
        } else {
            let mut v = Vec::new();
            for (i, f) in &self.gens {
                let r = run_one(f);
                let stop = matches!(r, Ok((false, _, _)));
                v.push((*i, Some(r)));
                if stop {
                    break;
                }
            }
            v
        };

        let mut undecided: Option<UndecidedNote> = None;
        for (i, r) in results {
            match r {
                None => {}
                Some(Ok((member, stats, p))) => {
                    out.stats.absorb(&stats);
                    if !member && out.witness.is_none() {
                        out.witness = Some(Witness { check, generator_index: i, polynomial: p.to_string() });
                    }
                }
                Some(Err(e)) if undecided.is_none() => {
                    undecided = Some(UndecidedNote { check, generator_index: Some(i), reason: e.to_string() });
                }
                Some(Err(_)) => {}
            }
        }
        out.verdict = if out.witness.is_some() {
            Verdict::Decided(false)
        } else if undecided.is_some() {
            Verdict::Undecided
        } else {
            Verdict::Decided(true)
        };
        if out.verdict == Verdict::Undecided {
            out.undecided = undecided;
        }
        out.micros = start.elapsed().as_micros() as u64;
        out
    }

    fn inversion_outcome(&self) -> Outcome {
        let test = |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> {
            Ok(symmat::make_k(&symmat::eval_at_formal_inverse(f)?)?)
        };
        self.radical_all(CheckKind::Inversion, self.gb_x(), &test)
    }

    fn inversion_alt_outcome(&self) -> Outcome {
        if self.use_fast_path() {
            let test = |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> {
                Ok(symmat::eval_at_formal_inverse(f)?.numerator)
            };
            return self.radical_all(CheckKind::InversionAlt, self.gb_x(), &test);
        }
        let xhat = self.xhat.clone();
        let test = move |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> {
            Ok(symmat::eval_at_formal_inverse(f)?.numerator.embed(&xhat)?)
        };
        self.radical_all(CheckKind::InversionAlt, self.gb_hat(), &test)
    }

    fn multiplication_outcome(&self) -> Outcome {
        if self.use_fast_path() {
            let xy = self.xy_plain.clone();
            let test = move |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> { Ok(symmat::subst_product(f, &xy)?) };
            return self.radical_all(CheckKind::Multiplication, self.gb_x_xy(), &test);
        }
        let xy = self.xy_hat.clone();
        let test = move |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> { Ok(symmat::subst_product(f, &xy)?) };
        self.radical_all(CheckKind::Multiplication, self.gb_hat_xy(), &test)
    }

    fn group_alt_outcome(&self) -> Outcome {
        if self.use_fast_path() {
            let xy = self.xy_plain.clone();
            let test = move |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> {
                Ok(symmat::subst_x_times_adj_y(f, &xy)?.numerator)
            };
            return self.radical_all(CheckKind::GroupAlt, self.gb_x_xy(), &test);
        }
        let xy = self.xy_hat.clone();
        let test =
            move |f: &Polynomial<K>| -> Result<Polynomial<K>, GbError> { Ok(symmat::subst_x_times_inverse_y(f, &xy)?) };
        self.radical_all(CheckKind::GroupAlt, self.gb_hat_xy(), &test)
    }

    fn vstar_outcome(&self) -> Outcome {
        let start = Instant::now();
        let mut out = match self.vstar_cached() {
            Ok(b) => Outcome::decided(b),
            Err(e) => Outcome {
                verdict: Verdict::Undecided,
                witness: None,
                undecided: Some(UndecidedNote {
                    check: CheckKind::VarietyEqualsVstar,
                    generator_index: None,
                    reason: e.to_string(),
                }),
                stats: GbStats::default(),
                micros: 0,
            },
        };
        out.micros = start.elapsed().as_micros() as u64;
        out
    }

    /// `V*(I)` closed under inversion, via `k_i ∈ √I`.
    pub fn check_inversion(&self) -> Verdict {
        self.inversion_outcome().verdict
    }

    /// `V*(I)` closed under inversion, via `h_i ∈ √Î`.
    pub fn check_inversion_alt(&self) -> Verdict {
        self.inversion_alt_outcome().verdict
    }

    /// `V*(I)` closed under multiplication, via `f_i(XY) ∈ √Î_xy`.
    pub fn check_multiplication(&self) -> Verdict {
        self.multiplication_outcome().verdict
    }

    /// `V(I) = V*(I)`, i.e. `1 ∈ I + (det)`.
    pub fn variety_equals_vstar(&self) -> Verdict {
        self.vstar_outcome().verdict
    }

    fn blank_report(&self, alt: bool) -> DecisionReport {
        let tag = self.spec.ring.tag();
        let mut scope = format!("the algebraic closure of {tag}");
        if let Some(q) = self.opts.field_restriction {
            scope.push_str(&format!(", restricted to F_{q}-points by field equations"));
        }
        DecisionReport {
            n: self.n(),
            field: tag,
            verdict_scope: scope,
            generators: self.spec.generators.iter().map(|g| g.to_string()).collect(),
            mode: ModeFlags { alt, fast_path_requested: self.opts.fast_path, fast_path_used: false },
            identity: None,
            inversion: None,
            multiplication: None,
            group: None,
            variety_equals_vstar: None,
            witnesses: Vec::new(),
            undecided: Vec::new(),
            reason: None,
            timings_us: BTreeMap::new(),
            gb_stats: BTreeMap::new(),
        }
    }

    fn absorb(&self, report: &mut DecisionReport, kind: CheckKind, out: Outcome) -> Verdict {
        if let Some(w) = out.witness {
            report.witnesses.push(w);
        }
        if let Some(u) = out.undecided {
            report.undecided.push(u);
        }
        report.timings_us.insert(kind.name().to_string(), out.micros);
        if out.stats != GbStats::default() {
            report.gb_stats.insert(kind.name().to_string(), out.stats);
        }
        out.verdict
    }

    fn finish(&self, report: &mut DecisionReport) {
        let setup = *self.setup_stats.lock().expect("stats lock");
        if setup != GbStats::default() {
            report.gb_stats.insert("shared_bases".into(), setup);
        }
        if report.mode.fast_path_requested {
            report.mode.fast_path_used = self.use_fast_path();
        }
        if report.variety_equals_vstar.is_none() {
            if let Some(Ok(b)) = self.vstar.get() {
                report.variety_equals_vstar = Some(Verdict::Decided(*b));
            }
        }
    }

    fn identity_step(&self, report: &mut DecisionReport) -> Verdict {
        let v = self.absorb(report, CheckKind::Identity, self.identity_outcome());
        report.identity = Some(v);
        if v.is_false() {
            report.group = Some(Verdict::Decided(false));
            report.reason = Some(if self.has_constant_generator() {
                "empty variety: a generator is a nonzero constant".to_string()
            } else {
                "the identity matrix is not in V(I)".to_string()
            });
        }
        v
    }

    /// Identity, then inversion, then multiplication; stops at the first
    /// decided failure.
    pub fn is_group(&self) -> DecisionReport {
        let mut report = self.blank_report(false);
        self.group_into(&mut report, false);
        self.finish(&mut report);
        report
    }

    fn group_into(&self, report: &mut DecisionReport, alt_inversion: bool) {
        if self.identity_step(report).is_false() {
            return;
        }
        let (kind, out) = if alt_inversion {
            (CheckKind::InversionAlt, self.inversion_alt_outcome())
        } else {
            (CheckKind::Inversion, self.inversion_outcome())
        };
        let inv = self.absorb(report, kind, out);
        report.inversion = Some(inv);
        if inv.is_false() {
            report.group = Some(Verdict::Decided(false));
            report.reason = Some("V*(I) is not closed under inversion".into());
            return;
        }
        let mul = self.absorb(report, CheckKind::Multiplication, self.multiplication_outcome());
        report.multiplication = Some(mul);
        let group = Verdict::Decided(true).and(inv).and(mul);
        report.group = Some(group);
        if mul.is_false() {
            report.reason = Some("V*(I) is not closed under multiplication".into());
        }
    }

    /// Identity, then `f_i(X·Y⁻¹) ∈ √Î_xy` for all generators.
    pub fn is_group_alt(&self) -> DecisionReport {
        let mut report = self.blank_report(true);
        self.group_alt_into(&mut report);
        self.finish(&mut report);
        report
    }

    fn group_alt_into(&self, report: &mut DecisionReport) {
        if self.identity_step(report).is_false() {
            return;
        }
        let v = self.absorb(report, CheckKind::GroupAlt, self.group_alt_outcome());
        report.group = Some(v);
        if v.is_false() {
            report.reason = Some("some f_i(X·Y⁻¹) does not vanish on V*(I) × V*(I)".into());
        }
    }

    /// Runs the requested checks into one report. With `alt`, the group
    /// verdict uses the combined test and inversion uses `h_i ∈ √Î`.
    pub fn run(&self, checks: &[Check], alt: bool) -> DecisionReport {
        let mut report = self.blank_report(alt);
        for &c in checks {
            match c {
                Check::Identity => {
                    if report.identity.is_none() {
                        let v = self.absorb(&mut report, CheckKind::Identity, self.identity_outcome());
                        report.identity = Some(v);
                    }
                }
                Check::Inversion => {
                    if report.inversion.is_none() {
                        let (kind, out) = if alt {
                            (CheckKind::InversionAlt, self.inversion_alt_outcome())
                        } else {
                            (CheckKind::Inversion, self.inversion_outcome())
                        };
                        let v = self.absorb(&mut report, kind, out);
                        report.inversion = Some(v);
                    }
                }
                Check::Multiplication => {
                    if report.multiplication.is_none() {
                        let v = self.absorb(&mut report, CheckKind::Multiplication, self.multiplication_outcome());
                        report.multiplication = Some(v);
                    }
                }
                Check::Group if !alt => {
                    if report.group.is_none() {
                        self.group_into_sharing(&mut report);
                    }
                }
                Check::Group | Check::GroupAlt => {
                    if report.group.is_none() {
                        if report.identity.is_none() {
                            self.group_alt_into(&mut report);
                        } else if report.identity == Some(Verdict::Decided(false)) {
                            report.group = Some(Verdict::Decided(false));
                        } else {
                            let v = self.absorb(&mut report, CheckKind::GroupAlt, self.group_alt_outcome());
                            report.group = Some(report.identity.unwrap_or(Verdict::Decided(true)).and(v));
                        }
                    }
                }
                Check::VstarEq => {
                    if report.variety_equals_vstar.is_none() {
                        let v = self.absorb(&mut report, CheckKind::VarietyEqualsVstar, self.vstar_outcome());
                        report.variety_equals_vstar = Some(v);
                    }
                }
            }
        }
        self.finish(&mut report);
        report
    }

    /// Standard group check that reuses verdicts already in the report.
    fn group_into_sharing(&self, report: &mut DecisionReport) {
        if report.identity.is_none() {
            self.identity_step(report);
        } else if report.identity == Some(Verdict::Decided(false)) {
            report.group = Some(Verdict::Decided(false));
        }
        if report.identity == Some(Verdict::Decided(false)) {
            report.group = Some(Verdict::Decided(false));
            return;
        }
        if report.inversion.is_none() {
            let v = self.absorb(report, CheckKind::Inversion, self.inversion_outcome());
            report.inversion = Some(v);
        }
        let inv = report.inversion.expect("set above");
        if inv.is_false() {
            report.group = Some(Verdict::Decided(false));
            report.reason = Some("V*(I) is not closed under inversion".into());
            return;
        }
        if report.multiplication.is_none() {
            let v = self.absorb(report, CheckKind::Multiplication, self.multiplication_outcome());
            report.multiplication = Some(v);
        }
        let mul = report.multiplication.expect("set above");
        if mul.is_false() {
            report.reason = Some("V*(I) is not closed under multiplication".into());
        }
        report.group = Some(report.identity.expect("set").and(inv).and(mul));
    }
}

/// One-shot helpers with default options.
pub fn is_group<K: Field>(spec: &ProblemSpec<K>) -> DecisionReport {
    Decider::new(spec, DecideOptions::default()).is_group()
}

pub fn is_group_alt<K: Field>(spec: &ProblemSpec<K>) -> DecisionReport {
    Decider::new(spec, DecideOptions::default()).is_group_alt()
}

pub fn check_identity<K: Field>(spec: &ProblemSpec<K>) -> bool {
    Decider::new(spec, DecideOptions::default()).check_identity()
}

pub fn check_inversion<K: Field>(spec: &ProblemSpec<K>) -> Verdict {
    Decider::new(spec, DecideOptions::default()).check_inversion()
}

pub fn check_inversion_alt<K: Field>(spec: &ProblemSpec<K>) -> Verdict {
    Decider::new(spec, DecideOptions::default()).check_inversion_alt()
}

pub fn check_multiplication<K: Field>(spec: &ProblemSpec<K>) -> Verdict {
    Decider::new(spec, DecideOptions::default()).check_multiplication()
}

pub fn variety_equals_vstar<K: Field>(spec: &ProblemSpec<K>) -> Verdict {
    Decider::new(spec, DecideOptions::default()).variety_equals_vstar()
}
