//! Batch front end behind the `returnset` binary.
//!
//! Exit codes: `0` success, `2` parse error, `3` solver error, `4` mismatch
//! between the solver and the brute-force window (or an expected set).

mod problem;
mod suite;

pub use problem::{parse_problem, FileOptions, ParseError, Problem, ProblemFile, SetOp, TangencyMode};
pub use suite::{run_suite, suite_names, SuiteEntry};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::jets::{
    arnold_scan, brute_tangency_window, min_finite_order, stabilized_germ, tangency_set_with, Colength, JetError,
    DEFAULT_ORDER_CAP,
};
use crate::padic::PadicError;
use crate::recurrence::{brute_window, solve_certified, ClassOutcome, ReturnTarget, Solution, SolveError, SolverOptions};
use crate::semilinear::{clearing_modulus, intersect_family, stepsize, SemilinearError};
use crate::SemilinearSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "returnset", version, about = "Certified return sets of linear maps and jet-level germ dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Force the p-adic prime (must give good reduction).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Starting p-adic precision in digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Half-width H of the brute-force window [-H, H].
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Largest jet order explored by chain computations.
    #[arg(long = "order-cap", global = true)]
    pub order_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and print the result.
    Run { file: PathBuf },
    /// Solve, then compare against exact brute-force evaluation.
    Verify {
        file: PathBuf,
        /// Set the answer must equal.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Recompute the built-in worked examples.
    Examples { names: Vec<String> },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self { stdout: String::new(), stderr, code }
    }
}

/// Resolved settings: command-line flags override file options.
#[derive(Debug, Clone)]
struct Settings {
    solver: SolverOptions,
    window: Option<i64>,
    order_cap: usize,
    format: Format,
}

fn settings(cli: &Cli, file: &FileOptions) -> Settings {
    let mut solver = SolverOptions { prime: cli.prime.or(file.prime), ..SolverOptions::default() };
    if let Some(p) = cli.precision.or(file.precision) {
        solver.precision = p;
    }
    Settings {
        solver,
        window: cli.window.or(file.window),
        order_cap: cli.order_cap.or(file.order_cap).unwrap_or(DEFAULT_ORDER_CAP),
        format: cli.format,
    }
}

/// Name of the error variant, printed on standard error.
fn solve_error_name(e: &SolveError) -> &'static str {
    match e {
        SolveError::NotSquare(..) => "NotSquare",
        SolveError::Dimension { .. } => "Dimension",
        SolveError::Singular => "Singular",
        SolveError::NotInvertibleModP(_) => "NotInvertibleModP",
        SolveError::BadPrime(_) => "BadPrime",
        SolveError::DegenerateTarget(_) => "DegenerateTarget",
        SolveError::Padic(p) => match p {
            PadicError::BadReduction => "BadReduction",
            PadicError::PrimeTooSmall(_) => "PrimeTooSmall",
            PadicError::NotPrime(_) => "NotPrime",
            PadicError::NotIntegral => "NotIntegral",
            PadicError::InsufficientPrecision => "InsufficientPrecision",
            PadicError::PrecisionExhausted => "PrecisionExhausted",
            PadicError::NotFinite => "NotFinite",
        },
        SolveError::Semilinear(_) => "Semilinear",
    }
}

fn jet_error_name(e: &JetError) -> &'static str {
    match e {
        JetError::ZeroJet => "ZeroJet",
        JetError::NotThroughOrigin => "NotThroughOrigin",
        JetError::NotInvertible => "NotInvertible",
        JetError::Dimension => "Dimension",
        JetError::Parse(_) => "Parse",
        JetError::PeriodicDivisor(_) => "PeriodicDivisor",
        JetError::OrderCapExceeded(_) => "OrderCapExceeded",
        JetError::VerificationFailed(_) => "VerificationFailed",
        JetError::Solve(s) => solve_error_name(s),
        JetError::Semilinear(_) => "Semilinear",
    }
}

#[derive(Debug)]
enum Failure {
    Solve(SolveError),
    Jet(JetError),
    Set(SemilinearError),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Solve(e)
    }
}

impl From<JetError> for Failure {
    fn from(e: JetError) -> Self {
        Failure::Jet(e)
    }
}

impl From<SemilinearError> for Failure {
    fn from(e: SemilinearError) -> Self {
        Failure::Set(e)
    }
}

impl Failure {
    fn render(&self) -> String {
        match self {
            Failure::Solve(e) => format!("error: {}: {e}\n", solve_error_name(e)),
            Failure::Jet(e) => format!("error: {}: {e}\n", jet_error_name(e)),
            Failure::Set(e) => format!("error: SemilinearError: {e}\n"),
        }
    }
}

/// A solved problem: human lines, a JSON document, and the headline set if any.
struct Report {
    lines: Vec<String>,
    json: Value,
    set: Option<SemilinearSet>,
}

fn certificate_json(sol: &Solution) -> Value {
    let certs: Vec<Value> = sol
        .certificates
        .iter()
        .map(|c| {
            let classes: Vec<Value> = c
                .classes
                .iter()
                .map(|cl| match &cl.outcome {
                    ClassOutcome::Vanishes => json!({"residue": cl.residue, "outcome": "vanishes"}),
                    ClassOutcome::Zeros { zeros, bound, complete, radius } => json!({
                        "residue": cl.residue, "outcome": "zeros", "zeros": zeros,
                        "strassmann_bound": bound, "complete": complete, "radius": radius,
                    }),
                })
                .collect();
            json!({"prime": c.prime, "period": c.period, "precision": c.precision, "order": c.order, "classes": classes})
        })
        .collect();
    json!({"complete": sol.is_complete(), "radius": sol.incomplete_radius(), "functionals": certs})
}

fn certificate_lines(sol: &Solution) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(c) = sol.certificates.first() {
        out.push(format!(
            "certificate: p = {}, N = {}, precision = {}, {} functional(s)",
            c.prime,
            c.period,
            sol.certificates.iter().map(|c| c.precision).max().unwrap_or(c.precision),
            sol.certificates.len()
        ));
    } else {
        out.push("certificate: exact (degenerate orbit or target)".to_string());
    }
    out.push(match sol.incomplete_radius() {
        None => "complete: every integer zero isolated".to_string(),
        Some(r) => format!("complete for |n| <= {r}; remaining p-adic zeros are not integers in that range"),
    });
    out
}

fn solve_report(sol: Solution, kind: &str) -> Report {
    let mut lines = vec![sol.set.to_string()];
    lines.extend(certificate_lines(&sol));
    let json = json!({"kind": kind, "set": sol.set.to_string(), "certificate": certificate_json(&sol)});
    Report { lines, json, set: Some(sol.set) }
}

fn target_of(problem: &Problem) -> Option<(&crate::recurrence::LinearSystem, ReturnTarget)> {
    match problem {
        Problem::Hyperplane { system, functional, constant } => Some((
            system,
            ReturnTarget::Hyperplane { functional: functional.clone(), constant: constant.clone() },
        )),
        Problem::Point { system, target } => Some((system, ReturnTarget::Point(target.clone()))),
        Problem::Subspace { system, basis } => Some((system, ReturnTarget::Subspace(basis.clone()))),
        _ => None,
    }
}

fn solve(problem: &Problem, st: &Settings) -> Result<Report, Failure> {
    if let Some((system, target)) = target_of(problem) {
        return Ok(solve_report(solve_certified(system, &target, &st.solver)?, problem.kind()));
    }
    match problem {
        Problem::Tangency { germ, divisor, curve, mode } => match mode {
            TangencyMode::Order(k) => {
                let sol = tangency_set_with(germ, divisor, curve, *k, &st.solver)?;
                Ok(solve_report(sol, "tangency"))
            }
            TangencyMode::Chain => {
                let k0 = min_finite_order(germ, divisor, curve, st.order_cap)?;
                let mut lines = Vec::new();
                let mut chain = Vec::new();
                for k in 0..=k0 {
                    let a = tangency_set_with(germ, divisor, curve, k, &st.solver)?.set;
                    lines.push(format!("A_{k} = {a}"));
                    chain.push(a.to_string());
                }
                lines.push(format!("first finite order: {k0}"));
                Ok(Report { lines, json: json!({"kind": "tangency", "chain": chain, "min_finite_order": k0}), set: None })
            }
            TangencyMode::Stabilize { sample } => {
                let st_germ = stabilized_germ(germ, divisor, st.order_cap, -*sample..=*sample)?;
                let basis: Vec<String> = st_germ.subspace.basis_jets().iter().map(|j| j.to_poly().to_string()).collect();
                let lines = vec![
                    format!("step n = {}, order k = {}", st_germ.step, st_germ.order),
                    format!("(f_D) + m^{} in J_{} = span{{{}}}", st_germ.order + 1, st_germ.order + 1, basis.join(", ")),
                    format!("identity verified for 0 < |m| <= {sample}"),
                ];
                let json = json!({
                    "kind": "tangency", "step": st_germ.step, "order": st_germ.order, "basis": basis,
                    "chain": st_germ.chain.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "verified": st_germ.verified,
                });
                Ok(Report { lines, json, set: None })
            }
        },
        Problem::Arnold { germ, curve_y, curve_z } => {
            let h = st.window.unwrap_or(50);
            let r = arnold_scan(germ, curve_y, curve_z, h, st.order_cap)?;
            let lines = vec![
                format!("degenerate set: {}", r.degenerate_set),
                format!("K = {}", r.k),
                format!("max multiplicity on [-{h},{h}]: {}", r.max_mult),
                format!("bound: {}", r.bound),
            ];
            let mults: Vec<Value> = r
                .multiplicities
                .iter()
                .map(|(n, c)| match c {
                    Colength::Finite(v) => json!([n, v]),
                    Colength::Infinite => json!([n, null]),
                })
                .collect();
            let json = json!({
                "kind": "arnold", "degenerate_set": r.degenerate_set.to_string(), "k": r.k,
                "max_mult": r.max_mult, "bound": r.bound, "window": h, "multiplicities": mults,
            });
            Ok(Report { lines, json, set: Some(r.degenerate_set) })
        }
        Problem::SetOperation { op, sets } => {
            let result = match op {
                SetOp::Normalize => Some(sets[0].normalize()),
                SetOp::Union => Some(sets.iter().skip(1).try_fold(sets[0].clone(), |acc, s| acc.union(s))?),
                SetOp::Intersect => Some(sets.iter().skip(1).try_fold(sets[0].clone(), |acc, s| acc.intersect(s))?),
                SetOp::IntersectFamily(n) => Some(intersect_family(sets, *n)?),
                SetOp::ScaleSection(n) => Some(sets[0].scale_section(*n)?),
                SetOp::ClearingModulus | SetOp::Stepsize => None,
            };
            if let Some(set) = result {
                let lines = vec![set.to_string()];
                return Ok(Report { lines, json: json!({"kind": "semilinear-op", "set": set.to_string()}), set: Some(set) });
            }
            if *op == SetOp::ClearingModulus {
                let n = clearing_modulus(sets);
                return Ok(Report { lines: vec![format!("n = {n}")], json: json!({"kind": "semilinear-op", "n": n}), set: None });
            }
            let (n, k) = stepsize(sets)?;
            Ok(Report {
                lines: vec![format!("n = {n}, k = {k}")],
                json: json!({"kind": "semilinear-op", "n": n, "k": k}),
                set: None,
            })
        }
        _ => unreachable!("linear problems handled above"),
    }
}

/// Membership predicate the solver's set must reproduce on a window.
fn brute_members(problem: &Problem, h: i64) -> Result<Option<Vec<bool>>, Failure> {
    if let Some((system, target)) = target_of(problem) {
        return Ok(Some(brute_window(system, |y| target.contains(y), h).hits));
    }
    match problem {
        Problem::Tangency { germ, divisor, curve, mode: TangencyMode::Order(k) } => {
            Ok(Some(brute_tangency_window(germ, divisor, curve, *k, h)?.hits))
        }
        Problem::SetOperation { op, sets } => {
            let member = |n: i64| -> Option<bool> {
                match op {
                    SetOp::Normalize => Some(sets[0].contains(n)),
                    SetOp::Union => Some(sets.iter().any(|s| s.contains(n))),
                    SetOp::Intersect | SetOp::IntersectFamily(_) => Some(sets.iter().all(|s| s.contains(n))),
                    SetOp::ScaleSection(m) => Some(n.checked_mul(*m).is_some_and(|x| sets[0].contains(x))),
                    SetOp::ClearingModulus | SetOp::Stepsize => None,
                }
            };
            Ok((-h..=h).map(member).collect())
        }
        _ => Ok(None),
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.lines.iter().map(|l| format!("{l}\n")).collect(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable")),
    }
}

fn load(path: &PathBuf) -> Result<ProblemFile, Output> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Output::fail(EXIT_PARSE, format!("error: Io: {}: {e}\n", path.display())))?;
    parse_problem(&raw).map_err(|e| Output::fail(EXIT_PARSE, format!("error: Parse: {}: {e}\n", path.display())))
}

fn run_file(cli: &Cli, path: &PathBuf) -> Output {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let st = settings(cli, &file.options);
    match solve(&file.problem, &st) {
        Ok(report) => Output::ok(render(&report, st.format)),
        Err(f) => Output::fail(EXIT_SOLVER, f.render()),
    }
}

fn verify_file(cli: &Cli, path: &PathBuf, expect: Option<&str>) -> Output {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let expected = match expect.map(str::parse::<SemilinearSet>).transpose() {
        Ok(e) => e.or(file.options.expect.clone()),
        Err(e) => return Output::fail(EXIT_PARSE, format!("error: Parse: --expect: {e}\n")),
    };
    let st = settings(cli, &file.options);
    let report = match solve(&file.problem, &st) {
        Ok(r) => r,
        Err(f) => return Output::fail(EXIT_SOLVER, f.render()),
    };
    let mut out = render(&report, Format::Text);
    let mut code = EXIT_OK;
    if let (Some(exp), Some(set)) = (&expected, &report.set) {
        if exp != set {
            out.push_str(&format!("MISMATCH: expected {exp}, solver gave {set}\n"));
            code = EXIT_MISMATCH;
        } else {
            out.push_str("AGREE with expected set\n");
        }
    }
    let h = st.window.unwrap_or_else(|| report.set.as_ref().map_or(50, |s| s.witness_radius().max(100)));
    let window = match brute_members(&file.problem, h) {
        Ok(w) => w,
        Err(f) => return Output::fail(EXIT_SOLVER, f.render()),
    };
    match (window, &report.set) {
        (Some(hits), Some(set)) => {
            let bad = (-h..=h).zip(&hits).find(|(n, &hit)| set.contains(*n) != hit).map(|(n, _)| n);
            match bad {
                None => out.push_str(&format!("AGREE on [-{h},{h}]\n")),
                Some(n) => {
                    out.push_str(&format!("MISMATCH at n = {n} on [-{h},{h}]\n"));
                    code = EXIT_MISMATCH;
                }
            }
        }
        _ => out.push_str("AGREE (self-verified; no brute-force window for this kind)\n"),
    }
    if st.format == Format::Json {
        let verdict = if code == EXIT_OK { "AGREE" } else { "MISMATCH" };
        let mut doc = report.json.clone();
        doc["verdict"] = json!(verdict);
        doc["window"] = json!(h);
        out = format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    Output { stdout: out, stderr: String::new(), code }
}

/// Runs the command line `args` (including the program name).
pub fn execute<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Output::ok(text) } else { Output::fail(code, text) };
        }
    };
    match &cli.command {
        Command::Run { file } => run_file(&cli, file),
        Command::Verify { file, expect } => verify_file(&cli, file, expect.as_deref()),
        Command::Examples { names } => suite::run_examples(names, cli.format),
    }
}
