//! Command-line front end: subcommand dispatch and report rendering.
//!
//! Every subcommand is a pure function of its arguments and input files, so
//! identical invocations produce byte-identical output.  Reports render as
//! aligned text by default or as JSON with `--json`; JSON keys are sorted and
//! all rationals appear as `p/q` strings, never as floats.

pub mod parse;

pub use parse::{parse_germ, parse_space, ExprFactor, GermExpression, SumTerm};

use crate::error::{Error, Result};
use crate::qspace::{QuotientType, Rat};
use crate::resolve::{
    oracle_quasihomogeneous, oracle_semigroup_mu, pipeline_brieskorn, pipeline_curve,
    pipeline_two_pairs, pipeline_yomdin, two_pairs_semigroup_generators, PipelineResult,
};
use crate::strata::{report, zeta_from_strata, InvariantReport, ReportOptions, StrataSet};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::Value;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read as _;

#[derive(Parser)]
#[command(
    name = "qzeta",
    version,
    about = "Exact monodromy zeta functions of hypersurface germs on quotient spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a two-dimensional cyclic quotient type
    Normalize(NormalizeArgs),
    /// Evaluate invariants from a strata JSON file
    Strata(StrataArgs),
    /// Resolve a curve germ by one weighted blow-up
    Curve(CurveArgs),
    /// Plane branch with two Puiseux pairs
    Puiseux2(Puiseux2Args),
    /// Surface germ x^p + y^q + z^r
    Brieskorn(BrieskornArgs),
    /// Series germ z^(m+k) plus a degree-m tangent cone
    Yomdin(YomdinArgs),
    /// Run consistency checks against independent oracles
    Check(CheckArgs),
}

/// Flags shared by every report-producing subcommand.
#[derive(Args, Clone)]
struct ReportFlags {
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    /// Expand the characteristic polynomial into coefficients
    #[arg(long)]
    expand: bool,
    /// Tabulate Lefschetz numbers for k in the inclusive range A..B
    #[arg(long, value_name = "A..B", value_parser = parse_lefschetz_range)]
    lefschetz: Option<(u64, u64)>,
}

impl ReportFlags {
    fn options(&self) -> ReportOptions {
        ReportOptions {
            expand: self.expand,
            lefschetz: self.lefschetz,
            series_order: None,
        }
    }
}

fn parse_lefschetz_range(text: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("expected a range A..B, got '{text}'"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("invalid bound '{a}'"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("invalid bound '{b}'"))?;
    if a < 1 || b < a {
        return Err("need 1 <= A <= B".into());
    }
    Ok((a, b))
}

#[derive(Args)]
struct NormalizeArgs {
    /// Quotient-type literal, e.g. "X(6;3,2)"
    #[arg(long)]
    space: String,
    /// Emit the result as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StrataArgs {
    /// Path to a strata JSON file, or '-' for stdin
    #[arg(long, value_name = "FILE")]
    input: String,
    #[command(flatten)]
    report: ReportFlags,
}

#[derive(Args)]
struct CurveArgs {
    /// Ambient quotient type (cyclic, dimension 2)
    #[arg(long, default_value = "C^2")]
    space: String,
    /// Germ expression, e.g. "x^2 y^3 (x^2+y^3)"
    #[arg(long)]
    germ: String,
    #[command(flatten)]
    report: ReportFlags,
}

#[derive(Args)]
struct Puiseux2Args {
    /// First characteristic exponent numerator
    #[arg(long)]
    p1: i64,
    /// First characteristic exponent denominator
    #[arg(long)]
    q1: i64,
    /// Second characteristic exponent numerator
    #[arg(long)]
    p2: i64,
    /// Second characteristic exponent denominator
    #[arg(long)]
    q2: i64,
    #[command(flatten)]
    report: ReportFlags,
}

#[derive(Args)]
struct BrieskornArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    q: i64,
    #[arg(long)]
    r: i64,
    #[command(flatten)]
    report: ReportFlags,
}

#[derive(Args)]
struct YomdinArgs {
    /// Tangent-cone degree
    #[arg(long)]
    m: i64,
    /// Series offset: the leading power is m + k
    #[arg(long)]
    k: i64,
    /// Local singularity exponent p of the tangent curve
    #[arg(long)]
    p: i64,
    /// Local singularity exponent q of the tangent curve
    #[arg(long)]
    q: i64,
    /// Euler characteristic of the curve complement in the plane
    #[arg(long = "chi-complement", value_name = "CHI", allow_hyphen_values = true)]
    chi_complement: i64,
    #[command(flatten)]
    report: ReportFlags,
}

#[derive(Args)]
#[command(group = ArgGroup::new("target").required(true).multiple(false))]
struct CheckArgs {
    /// Strata JSON file (or '-') to check against the series identity
    #[arg(long, value_name = "FILE", group = "target")]
    input: Option<String>,
    /// Curve germ expression to check
    #[arg(long, value_name = "GERM", group = "target")]
    curve: Option<String>,
    /// Ambient type for --curve
    #[arg(long, default_value = "C^2")]
    space: String,
    /// Brieskorn exponents "P,Q,R" to check
    #[arg(long, value_name = "P,Q,R", group = "target")]
    brieskorn: Option<String>,
    /// Puiseux-pair data "P1,Q1,P2,Q2" to check
    #[arg(long, value_name = "P1,Q1,P2,Q2", group = "target")]
    puiseux2: Option<String>,
}

/// Rendered output plus the success flag deciding the exit code.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

/// Parses `argv` and runs one subcommand, returning the process exit code:
/// 0 on success, 1 on domain errors or failed checks, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; they are not errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Normalize(args) => cmd_normalize(args),
        Command::Strata(args) => cmd_strata(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Puiseux2(args) => cmd_puiseux2(args),
        Command::Brieskorn(args) => cmd_brieskorn(args),
        Command::Yomdin(args) => cmd_yomdin(args),
        Command::Check(args) => cmd_check(args),
    }
}

fn cmd_normalize(args: NormalizeArgs) -> Result<Output> {
    let space = parse_space(&args.space)?;
    let (normalized, (tx, ty)) = space.normalize_dim2()?;
    let text = if args.json {
        let mut obj = serde_json::Map::new();
        obj.insert("input".into(), Value::String(space.to_string()));
        obj.insert("normalized".into(), Value::String(normalized.to_string()));
        obj.insert(
            "transport".into(),
            Value::Array(vec![
                Value::String(tx.to_string()),
                Value::String(ty.to_string()),
            ]),
        );
        format!("{}\n", Value::Object(obj))
    } else {
        format!(
            "input: {space}\nnormalized: {normalized}\ntransport: ({tx}, {ty})\n"
        )
    };
    Ok(Output::ok(text))
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::validation(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read {path}: {e}")))
    }
}

fn load_strata(path: &str) -> Result<(StrataSet, Vec<String>)> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::validation(format!("invalid JSON: {e}")))?;
    StrataSet::from_json(&value)
}

fn cmd_strata(args: StrataArgs) -> Result<Output> {
    let (set, parse_warnings) = load_strata(&args.input)?;
    let mut rep = report(&set, &args.report.options());
    let mut warnings = parse_warnings;
    warnings.append(&mut rep.warnings);
    rep.warnings = warnings;
    Ok(Output::ok(render_report(
        &rep,
        &[],
        None,
        &[],
        args.report.json,
    )))
}

fn cmd_curve(args: CurveArgs) -> Result<Output> {
    let space = parse_space(&args.space)?;
    let expr = parse_germ(&args.germ, space.dim())?;
    let germ = expr.to_germ(&space)?;
    let result = pipeline_curve(&germ)?;
    let rep = report(&result.strata, &args.report.options());
    let head = [
        ("space".to_string(), space.to_string()),
        ("germ".to_string(), expr.to_string()),
    ];
    let closed = result.closed_form.as_ref().map(|cf| cf.to_string());
    Ok(Output::ok(render_report(
        &rep,
        &head,
        closed.as_deref(),
        &result.notes,
        args.report.json,
    )))
}

fn cmd_puiseux2(args: Puiseux2Args) -> Result<Output> {
    let result = pipeline_two_pairs(args.p1, args.q1, args.p2, args.q2)?;
    pipeline_report(result, &[], args.report)
}

fn cmd_brieskorn(args: BrieskornArgs) -> Result<Output> {
    let result = pipeline_brieskorn(args.p, args.q, args.r)?;
    let head = [(
        "germ".to_string(),
        format!("x^{} + y^{} + z^{}", args.p, args.q, args.r),
    )];
    pipeline_report(result, &head, args.report)
}

fn cmd_yomdin(args: YomdinArgs) -> Result<Output> {
    let result = pipeline_yomdin(args.m, args.k, args.p, args.q, args.chi_complement)?;
    pipeline_report(result, &[], args.report)
}

fn pipeline_report(
    result: PipelineResult,
    head: &[(String, String)],
    flags: ReportFlags,
) -> Result<Output> {
    let rep = report(&result.strata, &flags.options());
    let closed = result.closed_form.as_ref().map(|cf| cf.to_string());
    Ok(Output::ok(render_report(
        &rep,
        head,
        closed.as_deref(),
        &result.notes,
        flags.json,
    )))
}

fn render_report(
    rep: &InvariantReport,
    head: &[(String, String)],
    closed_form: Option<&str>,
    notes: &[String],
    json: bool,
) -> String {
    if json {
        let mut obj = match rep.to_json() {
            Value::Object(map) => map,
            other => {
                let mut map = serde_json::Map::new();
                map.insert("report".into(), other);
                map
            }
        };
        for (key, value) in head {
            obj.insert(key.clone(), Value::String(value.clone()));
        }
        if !notes.is_empty() {
            obj.insert(
                "notes".into(),
                Value::Array(notes.iter().cloned().map(Value::String).collect()),
            );
        }
        if let Some(cf) = closed_form {
            obj.insert("closed_form".into(), Value::String(cf.to_string()));
        }
        return format!("{}\n", Value::Object(obj));
    }

    let mut out = String::new();
    for (key, value) in head {
        let _ = writeln!(out, "{key}: {value}");
    }
    let _ = writeln!(out, "strata (n = {}):", rep.n);
    for s in rep.strata.strata() {
        let mut line = format!("  m = {}", s.m());
        if s.ell() != 1 {
            let _ = write!(line, ", ell = {}", s.ell());
        }
        let _ = write!(line, ", chi = {}", s.chi());
        if let Some(label) = s.label() {
            let _ = write!(line, "  [{label}]");
        }
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "Z(t) = {}", rep.zeta);
    let _ = writeln!(out, "chi(F) = {}", rep.chi_fiber);
    let _ = writeln!(out, "mu = {}", rep.mu);
    match (&rep.delta, &rep.delta_reason) {
        (Some(delta), _) => {
            let _ = writeln!(out, "Delta(t) = {delta}");
        }
        (None, Some(reason)) => {
            let _ = writeln!(out, "Delta(t) undefined: {reason}");
        }
        (None, None) => {}
    }
    if let Some(cf) = closed_form {
        let _ = writeln!(out, "closed form: {cf}");
    }
    match (&rep.delta_expanded, &rep.delta_expanded_reason) {
        (Some(poly), _) => {
            let _ = writeln!(out, "Delta(t) expanded = {poly}");
        }
        (None, Some(reason)) => {
            let _ = writeln!(out, "Delta(t) expansion unavailable: {reason}");
        }
        (None, None) => {}
    }
    if let Some(table) = &rep.lambda {
        for (k, v) in table {
            let _ = writeln!(out, "Lambda(h^{k}) = {v}");
        }
    } else if let Some(reason) = &rep.lambda_reason {
        let _ = writeln!(out, "Lambda table unavailable: {reason}");
    }
    if !notes.is_empty() {
        let _ = writeln!(out, "notes:");
        for note in notes {
            let _ = writeln!(out, "  - {note}");
        }
    }
    if !rep.warnings.is_empty() {
        let _ = writeln!(out, "warnings:");
        for w in &rep.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}

/// Accumulates PASS/FAIL/SKIP lines for the `check` subcommand.
struct CheckRun {
    lines: Vec<String>,
    failed: usize,
}

impl CheckRun {
    fn new() -> Self {
        CheckRun {
            lines: Vec::new(),
            failed: 0,
        }
    }

    fn record(&mut self, label: &str, ok: bool) {
        if ok {
            self.lines.push(format!("PASS {label}"));
        } else {
            self.failed += 1;
            self.lines.push(format!("FAIL {label}"));
        }
    }

    fn skip(&mut self, label: &str, why: &str) {
        self.lines.push(format!("SKIP {label}: {why}"));
    }

    fn finish(self) -> Output {
        let mut text = self.lines.join("\n");
        text.push('\n');
        if self.failed > 0 {
            let _ = writeln!(text, "{} check(s) failed", self.failed);
        }
        Output {
            text,
            ok: self.failed == 0,
        }
    }
}

fn parse_int_list(text: &str, expect: usize, what: &str) -> Result<Vec<i64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != expect {
        return Err(Error::validation(format!(
            "{what} expects {expect} comma-separated integers, got '{text}'"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<i64>()
                .map_err(|_| Error::validation(format!("invalid integer '{p}' in {what}")))
        })
        .collect()
}

const CHECK_ORDER: usize = 100;
const ORACLE_LIMIT: i64 = 100_000;

fn check_series(run: &mut CheckRun, z: &crate::zeta::CyclotomicProduct) -> Result<()> {
    let label = format!("series identity to order {CHECK_ORDER}");
    if z.has_integer_keys() {
        run.record(&label, z.series_check(CHECK_ORDER)?);
    } else {
        run.skip(&label, "fractional exponents have no integer Lefschetz numbers");
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<Output> {
    let mut run = CheckRun::new();
    if let Some(path) = &args.input {
        let (set, _warnings) = load_strata(path)?;
        check_series(&mut run, &zeta_from_strata(&set))?;
    } else if let Some(germ_text) = &args.curve {
        check_curve(&mut run, &args.space, germ_text)?;
    } else if let Some(text) = &args.brieskorn {
        let v = parse_int_list(text, 3, "--brieskorn")?;
        check_brieskorn(&mut run, v[0], v[1], v[2])?;
    } else if let Some(text) = &args.puiseux2 {
        let v = parse_int_list(text, 4, "--puiseux2")?;
        check_puiseux2(&mut run, v[0], v[1], v[2], v[3])?;
    }
    Ok(run.finish())
}

fn check_curve(run: &mut CheckRun, space_text: &str, germ_text: &str) -> Result<()> {
    let space = parse_space(space_text)?;
    let expr = parse_germ(germ_text, space.dim())?;
    let germ = expr.to_germ(&space)?;
    let result = pipeline_curve(&germ)?;
    let z = zeta_from_strata(&result.strata);
    check_series(run, &z)?;
    if let Some(cf) = &result.closed_form {
        run.record(
            "closed form equals the strata product",
            *cf == z.to_delta(result.strata.n())?,
        );
    }
    if let Some((p, q)) = plain_binomial_exponents(&expr, &space) {
        if p * q <= ORACLE_LIMIT {
            let delta = z.to_delta(result.strata.n())?;
            run.record(
                "eigenvalues match the quasi-homogeneous oracle",
                delta.eigenvalue_multiset()? == oracle_quasihomogeneous(&[p, q])?,
            );
        } else {
            run.skip(
                "eigenvalues match the quasi-homogeneous oracle",
                "product of exponents exceeds the oracle bound",
            );
        }
    }
    Ok(())
}

/// Recognizes `c1 x^p + c2 y^q` on the trivial quotient, the shape the
/// quasi-homogeneous oracle covers.
fn plain_binomial_exponents(expr: &GermExpression, space: &QuotientType) -> Option<(i64, i64)> {
    if !space.is_trivial_group() || space.dim() != 2 {
        return None;
    }
    match expr.factors() {
        [ExprFactor::Sum { terms, power: 1 }] => {
            let mut p = None;
            let mut q = None;
            for t in terms {
                match (t.exps[0], t.exps[1]) {
                    (a, 0) if a >= 2 && p.is_none() => p = Some(a as i64),
                    (0, b) if b >= 2 && q.is_none() => q = Some(b as i64),
                    _ => return None,
                }
            }
            Some((p?, q?))
        }
        _ => None,
    }
}

fn check_brieskorn(run: &mut CheckRun, p: i64, q: i64, r: i64) -> Result<()> {
    let result = pipeline_brieskorn(p, q, r)?;
    let z = zeta_from_strata(&result.strata);
    check_series(run, &z)?;
    let delta = z.to_delta(result.strata.n())?;
    if let Some(cf) = &result.closed_form {
        run.record("closed form equals the strata product", *cf == delta);
    }
    run.record(
        "degree equals (p-1)(q-1)(r-1)",
        delta.degree() == Rat::from_integer((p - 1) * (q - 1) * (r - 1)),
    );
    if p >= 2 && q >= 2 && r >= 2 && p * q * r <= ORACLE_LIMIT {
        run.record(
            "eigenvalues match the quasi-homogeneous oracle",
            delta.eigenvalue_multiset()? == oracle_quasihomogeneous(&[p, q, r])?,
        );
    } else {
        run.skip(
            "eigenvalues match the quasi-homogeneous oracle",
            "exponents outside the oracle range",
        );
    }
    Ok(())
}

fn check_puiseux2(run: &mut CheckRun, p1: i64, q1: i64, p2: i64, q2: i64) -> Result<()> {
    let result = pipeline_two_pairs(p1, q1, p2, q2)?;
    let z = zeta_from_strata(&result.strata);
    check_series(run, &z)?;
    let delta = z.to_delta(result.strata.n())?;
    if let Some(cf) = &result.closed_form {
        run.record("closed form equals the strata product", *cf == delta);
    }
    let gens = two_pairs_semigroup_generators(p1, q1, p2, q2)?;
    let mu = oracle_semigroup_mu(&gens)?;
    run.record(
        "degree equals the semigroup gap count",
        delta.degree() == Rat::from_integer(mu as i64),
    );
    Ok(())
}
