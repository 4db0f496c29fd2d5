//! Command-line driver.
//!
//! Exit codes: 0 decided, 1 input or usage error, 2 undecided (budget),
//! 3 engine and brute-force oracle disagree.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coeff::{Field, Fp};
use crate::decide::{add_field_equations, Check, DecideOptions, Decider, DecisionReport, Verdict};
use crate::groebner::Budget;
use crate::oracle::{self, OracleVerdict, DEFAULT_ENUM_CAP};
use crate::parse::{parse_problem, AnyProblem, ProblemSpec};
use crate::poly::Polynomial;

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "algroup", version, about = "Decide whether V(I) ∩ GL(n) is a group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the decision procedures on a problem file.
    Decide(DecideArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CheckArg {
    Identity,
    Inversion,
    Multiplication,
    Group,
    GroupAlt,
    VstarEq,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct DecideArgs {
    /// Problem file in the `.alg` format.
    input: PathBuf,
    /// Checks to run (repeatable).
    #[arg(long = "check", value_enum)]
    checks: Vec<CheckArg>,
    /// Use the combined X·Y⁻¹ test for the group verdict and h_i ∈ √Î for inversion.
    #[arg(long)]
    alt: bool,
    /// Drop x0/y0 when V(I) = V*(I) holds.
    #[arg(long)]
    fast_path: bool,
    /// Restrict to F_q-points by adding x_i^q - x_i.
    #[arg(long, value_name = "Q")]
    field_equations: Option<u64>,
    /// Cross-check against brute-force enumeration (prime fields only).
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = Budget::default().pair_cap)]
    pair_cap: u64,
    #[arg(long, default_value_t = Budget::default().degree_cap)]
    degree_cap: u32,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Oracle section of the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    #[serde(flatten)]
    pub verdict: OracleVerdict,
    /// Whether the engine verdicts were required to match.
    pub compared: bool,
    pub mismatches: Vec<String>,
}

/// What `--format json` prints: the report plus an optional oracle section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliOutput {
    #[serde(flatten)]
    pub report: DecisionReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleSection>,
}

fn to_check(c: CheckArg) -> Check {
    match c {
        CheckArg::Identity => Check::Identity,
        CheckArg::Inversion => Check::Inversion,
        CheckArg::Multiplication => Check::Multiplication,
        CheckArg::Group => Check::Group,
        CheckArg::GroupAlt => Check::GroupAlt,
        CheckArg::VstarEq => Check::VstarEq,
    }
}

fn run_checks<K: Field>(spec: &ProblemSpec<K>, args: &DecideArgs, opts: DecideOptions) -> DecisionReport {
    let mut checks: Vec<Check> = args.checks.iter().copied().map(to_check).collect();
    if checks.is_empty() {
        checks.push(Check::Group);
    }
    Decider::new(spec, opts).run(&checks, args.alt)
}

/// True when every `x_i^p - x_i` is among the generators, so that the
/// variety over the closure consists of `F_p`-points only.
fn has_prime_field_equations(spec: &ProblemSpec<Fp>) -> bool {
    let p = spec.ring.tag().characteristic();
    let Ok(e) = u32::try_from(p) else { return false };
    (0..spec.n * spec.n).all(|v| {
        let x = Polynomial::var(&spec.ring, v);
        let fe = &x.pow(e) - &x;
        spec.generators.iter().any(|g| *g == fe || *g == -&fe)
    })
}

fn compare(report: &DecisionReport, o: &OracleVerdict) -> Vec<String> {
    let mut out = Vec::new();
    let mut cmp = |name: &str, engine: Option<Verdict>, oracle: bool| {
        if let Some(Verdict::Decided(b)) = engine {
            if b != oracle {
                out.push(format!("{name}: engine {b}, oracle {oracle}"));
            }
        }
    };
    cmp("identity", report.identity, o.identity);
    cmp("inversion", report.inversion, o.inversion);
    cmp("multiplication", report.multiplication, o.multiplication);
    cmp("group", report.group, o.group);
    out
}

fn render_text(out: &CliOutput, w: &mut dyn Write) -> io::Result<()> {
    let r = &out.report;
    writeln!(w, "n = {}, field {}", r.n, r.field)?;
    writeln!(w, "verdicts hold over {}", r.verdict_scope)?;
    let mode = if r.mode.alt { "alt" } else { "standard" };
    let fast = match (r.mode.fast_path_requested, r.mode.fast_path_used) {
        (false, _) => "off",
        (true, true) => "used",
        (true, false) => "requested, not applicable",
    };
    writeln!(w, "mode: {mode}, fast path {fast}")?;
    for (name, v) in [
        ("identity", r.identity),
        ("inversion", r.inversion),
        ("multiplication", r.multiplication),
        ("variety_equals_vstar", r.variety_equals_vstar),
        ("group", r.group),
    ] {
        if let Some(v) = v {
            writeln!(w, "{name}: {v}")?;
        }
    }
    if let Some(reason) = &r.reason {
        writeln!(w, "reason: {reason}")?;
    }
    for wit in &r.witnesses {
        writeln!(w, "witness [{}] f{}: {}", wit.check.name(), wit.generator_index, wit.polynomial)?;
    }
    for u in &r.undecided {
        match u.generator_index {
            Some(i) => writeln!(w, "{} f{}: {}", u.check.name(), i, u.reason)?,
            None => writeln!(w, "{}: {}", u.check.name(), u.reason)?,
        }
    }
    if let Some(o) = &out.oracle {
        let v = &o.verdict;
        writeln!(
            w,
            "oracle: {} points, {} invertible; identity: {}, inversion: {}, multiplication: {}, group: {}",
            v.points, v.invertible, v.identity, v.inversion, v.multiplication, v.group
        )?;
        if let Some(wit) = &v.witness {
            writeln!(w, "oracle witness: {wit}")?;
        }
        if !o.compared {
            writeln!(w, "oracle: not compared (variety not restricted to F_p-points)")?;
        }
        for m in &o.mismatches {
            writeln!(w, "MISMATCH {m}")?;
        }
    }
    Ok(())
}

fn execute(args: DecideArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let text = match fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "algroup: cannot read {}: {e}", args.input.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "algroup: {}: {e}", args.input.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    let opts = DecideOptions {
        budget: Budget { pair_cap: args.pair_cap, degree_cap: args.degree_cap },
        fast_path: args.fast_path,
        jobs: args.jobs.max(1),
        field_restriction: args.field_equations,
    };
    let output = match problem {
        AnyProblem::Rational(spec) => {
            if args.field_equations.is_some() {
                writeln!(err, "algroup: --field-equations requires a prime field")?;
                return Ok(EXIT_INPUT);
            }
            if args.oracle {
                writeln!(err, "algroup: --oracle requires a prime field")?;
                return Ok(EXIT_INPUT);
            }
            CliOutput { report: run_checks(&spec, &args, opts), oracle: None }
        }
        AnyProblem::Prime(spec) => {
            let spec = match args.field_equations {
                Some(q) => match add_field_equations(&spec, q) {
                    Ok(s) => s,
                    Err(e) => {
                        writeln!(err, "algroup: --field-equations: {e}")?;
                        return Ok(EXIT_INPUT);
                    }
                },
                None => spec,
            };
            let report = run_checks(&spec, &args, opts);
            let oracle = if args.oracle {
                let vs = match oracle::enumerate(&spec, args.enum_cap) {
                    Ok(vs) => vs,
                    Err(e) => {
                        writeln!(err, "algroup: --oracle: {e}")?;
                        return Ok(EXIT_INPUT);
                    }
                };
                let verdict = oracle::is_group_bruteforce(&vs);
                let compared = has_prime_field_equations(&spec);
                let mismatches = if compared { compare(&report, &verdict) } else { Vec::new() };
                Some(OracleSection { verdict, compared, mismatches })
            } else {
                None
            };
            CliOutput { report, oracle }
        }
    };
    match args.format {
        Format::Text => render_text(&output, out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &output).map_err(io::Error::other)?;
            writeln!(out)?;
        }
    }
    if let Some(o) = &output.oracle {
        if !o.mismatches.is_empty() {
            writeln!(err, "algroup: engine and oracle disagree:")?;
            for m in &o.mismatches {
                writeln!(err, "  {m}")?;
            }
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(if output.report.has_undecided() { EXIT_UNDECIDED } else { EXIT_DECIDED })
}

/// Runs the tool with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_DECIDED };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let Command::Decide(args) = cli.command;
    match execute(args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "algroup: {e}");
            EXIT_INPUT
        }
    }
}

pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}
