//! Command-line front end. Every invocation produces one JSON report
//!
//! ```text
//! {command, inputs, outputs, checks: [{name, pass, value, tolerance}], wall_time_ms}
//! ```
//!
//! and exits with 0 (all checks passed), 1 (a check failed), 2 (parse or
//! usage error) or 3 (internal error).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::oracle::adjoint_suite;
use crate::parse::{infer_dim, parse_dist, parse_poly, parse_testfn};
use crate::solver::{solve, verify};
use crate::wagner::{me_check, Grid};
use crate::DistExpr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "euler-solve", version, about = "Solve and check Euler-operator equations P(theta) U = T")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Report `wall_time_ms` as null, making reports reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DimArg {
    /// Dimension; inferred from the highest variable index when omitted.
    #[arg(short = 'd', long = "dim")]
    pub dim: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find U with P(theta) U = T.
    Solve {
        #[arg(short = 'P', long = "poly", allow_hyphen_values = true)]
        poly: String,
        #[arg(short = 'T', long = "target", allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        dim: DimArg,
    },
    /// Check P(theta) U = T exactly.
    Verify {
        #[arg(short = 'P', long = "poly", allow_hyphen_values = true)]
        poly: String,
        #[arg(short = 'U', long = "solution", allow_hyphen_values = true)]
        solution: String,
        #[arg(short = 'T', long = "target", allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        dim: DimArg,
    },
    /// Adjoint-identity check of the theta table against quadrature.
    OracleSuite {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Check <E, P(-d)phi> = phi(0) for Wagner's elementary solution E.
    WagnerCheck {
        #[arg(short = 'P', long = "poly", allow_hyphen_values = true)]
        poly: String,
        /// `<poly in x1..xd>; center=..; width=..`
        #[arg(long, allow_hyphen_values = true)]
        testfn: String,
        /// Grid points per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Frequency cutoff R (grid covers [-R, R]^d).
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[command(flatten)]
        dim: DimArg,
    },
    /// Parse an expression and print its canonical form.
    Parse {
        #[arg(long, conflicts_with = "dist", required_unless_present = "dist", allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        dist: Option<String>,
        #[command(flatten)]
        dim: DimArg,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Verify { .. } => "verify",
            Command::OracleSuite { .. } => "oracle-suite",
            Command::WagnerCheck { .. } => "wagner-check",
            Command::Parse { .. } => "parse",
        }
    }
}

struct Report {
    inputs: Map<String, Value>,
    outputs: Map<String, Value>,
    checks: Vec<Value>,
}

impl Report {
    fn new() -> Self {
        Report {
            inputs: Map::new(),
            outputs: Map::new(),
            checks: Vec::new(),
        }
    }

    fn input(&mut self, k: &str, v: impl Into<Value>) {
        self.inputs.insert(k.into(), v.into());
    }

    fn output(&mut self, k: &str, v: impl Into<Value>) {
        self.outputs.insert(k.into(), v.into());
    }

    fn check(&mut self, name: &str, pass: bool, value: impl Into<Value>, tolerance: impl Into<Value>) {
        self.checks.push(json!({
            "name": name,
            "pass": pass,
            "value": value.into(),
            "tolerance": tolerance.into(),
        }));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c["pass"] == Value::Bool(true))
    }
}

fn error_value(e: &Error) -> Value {
    match e {
        Error::Parse(p) => json!({
            "kind": "parse",
            "message": p.message,
            "offset": p.offset,
            "expected": p.expected,
        }),
        other => json!({
            "kind": error_kind(other),
            "message": other.to_string(),
        }),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::TermNotHyperplaneSupported(_) => "term_not_hyperplane_supported",
        Error::UnsupportedInput(_) => "unsupported_input",
        Error::EscalationExceeded { .. } => "escalation_exceeded",
        Error::TraceCapExceeded { .. } => "trace_cap_exceeded",
        Error::QuadratureNoConvergence { .. } => "quadrature_no_convergence",
        Error::DuplicateLambda(_) => "duplicate_lambda",
        Error::PoleOnGrid { .. } => "pole_on_grid",
        Error::Parse(_) => "parse",
        Error::CoordinateConflict(_) => "coordinate_conflict",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::CoordinateConflict(_)
        | Error::Dimension(_)
        | Error::InvalidArgument(_)
        | Error::ZeroPolynomial => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn dim_of(d: &DimArg, sources: &[&str]) -> usize {
    d.dim
        .unwrap_or_else(|| sources.iter().map(|s| infer_dim(s)).max().unwrap_or(1))
}

fn run_command(cmd: &Command, r: &mut Report) -> crate::Result<()> {
    match cmd {
        Command::Solve { poly, target, dim } => {
            let d = dim_of(dim, &[poly, target]);
            r.input("poly", poly.as_str());
            r.input("target", target.as_str());
            r.input("dim", d);
            let p = parse_poly(poly, d)?;
            let t = parse_dist(target, d)?;
            let rep = solve(&p, &t)?;
            r.output("solution", rep.solution.to_string());
            r.output("verified", rep.verified);
            r.output("escalation_depth", rep.escalation_depth);
            r.output(
                "recursion_trace",
                rep.recursion_trace.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            );
            r.check("exact_verification", rep.verified, rep.verified, 0);
        }
        Command::Verify {
            poly,
            solution,
            target,
            dim,
        } => {
            let d = dim_of(dim, &[poly, solution, target]);
            r.input("poly", poly.as_str());
            r.input("solution", solution.as_str());
            r.input("target", target.as_str());
            r.input("dim", d);
            let p = parse_poly(poly, d)?;
            let u = parse_dist(solution, d)?;
            let t = parse_dist(target, d)?;
            let ok = verify(&p, &u, &t);
            r.output("verified", ok);
            r.check("exact_verification", ok, ok, 0);
        }
        Command::OracleSuite { tol } => {
            if tol.is_nan() || *tol <= 0.0 {
                return Err(Error::InvalidArgument("tol must be positive".into()));
            }
            r.input("tol", *tol);
            let rep = adjoint_suite(tol * 1e-2)?;
            let mut per_atom: Vec<(String, f64)> = Vec::new();
            for row in &rep.rows {
                let name = DistExpr::atom(row.atom.clone()).to_string();
                match per_atom.last_mut() {
                    Some((n, v)) if *n == name => *v = v.max(row.residual),
                    _ => per_atom.push((name, row.residual)),
                }
            }
            let failures = rep.rows.iter().filter(|x| x.residual > *tol).count();
            r.output("atoms", per_atom.len());
            r.output("test_functions", rep.rows.len() / per_atom.len().max(1));
            r.output("max_residual", rep.max_residual);
            r.output("failures", failures);
            r.output(
                "matrix",
                per_atom
                    .iter()
                    .map(|(a, v)| json!({"atom": a, "max_residual": v}))
                    .collect::<Vec<_>>(),
            );
            r.check("adjoint_identity", rep.max_residual <= *tol, rep.max_residual, *tol);
        }
        Command::WagnerCheck {
            poly,
            testfn,
            grid,
            cutoff,
            tol,
            dim,
        } => {
            let d = dim_of(dim, &[poly, testfn]);
            let defaults = Grid::default_for(d);
            let g = Grid {
                n: grid.unwrap_or(defaults.n),
                cutoff: cutoff.unwrap_or(defaults.cutoff),
            };
            r.input("poly", poly.as_str());
            r.input("testfn", testfn.as_str());
            r.input("dim", d);
            r.input("N", g.n);
            r.input("R", g.cutoff);
            let p = parse_poly(poly, d)?;
            let phi = parse_testfn(testfn, d)?;
            let m = me_check(&p, &phi, g)?;
            r.output("residual", m.residual);
            r.output("N", g.n);
            r.output("R", g.cutoff);
            r.output("eta", m.params.eta.clone());
            r.output(
                "lambda",
                m.params.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            );
            r.output("a", m.params.a.iter().map(|a| a.to_string()).collect::<Vec<_>>());
            r.output("normalizer", m.params.normalizer.to_string());
            r.output("paired", m.paired.value);
            r.output("target", m.target);
            r.output("grid_offset", m.paired.offset);
            r.check("malgrange_ehrenpreis", m.residual <= *tol, m.residual, *tol);
            r.check(
                "multiplier_modulus",
                m.paired.modulus_defect <= 1e-12,
                m.paired.modulus_defect,
                1e-12,
            );
        }
        Command::Parse { poly, dist, dim } => {
            if let Some(src) = poly {
                let d = dim_of(dim, &[src]);
                r.input("poly", src.as_str());
                r.input("dim", d);
                let p = parse_poly(src, d)?;
                r.output("kind", "polynomial");
                r.output("canonical", p.to_string());
                r.output("terms", p.num_terms());
            } else if let Some(src) = dist {
                let d = dim_of(dim, &[src]);
                r.input("dist", src.as_str());
                r.input("dim", d);
                let e = parse_dist(src, d)?;
                r.output("kind", "distribution");
                r.output("canonical", e.to_string());
                r.output("terms", e.len());
            }
        }
    }
    Ok(())
}

/// Runs one command and returns the rendered report and the exit code.
pub fn run(cli: &Cli) -> (String, i32) {
    let start = Instant::now();
    let mut r = Report::new();
    let outcome = run_command(&cli.command, &mut r);
    let wall = if cli.no_timing {
        Value::Null
    } else {
        json!(start.elapsed().as_millis() as u64)
    };
    let mut obj = Map::new();
    obj.insert("command".into(), cli.command.name().into());
    obj.insert("inputs".into(), Value::Object(r.inputs.clone()));
    let code = match &outcome {
        Ok(()) => {
            obj.insert("outputs".into(), Value::Object(r.outputs.clone()));
            if r.passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            obj.insert("outputs".into(), Value::Object(Map::new()));
            obj.insert("error".into(), error_value(e));
            exit_code_for(e)
        }
    };
    obj.insert("checks".into(), Value::Array(r.checks.clone()));
    obj.insert("wall_time_ms".into(), wall);
    let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json serialization");
    (text, code)
}

/// Parses `args` (including the program name), runs, and writes the report.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let report = json!({
                "command": Value::Null,
                "inputs": {},
                "outputs": {},
                "error": {"kind": "usage", "message": e.to_string()},
                "checks": [],
                "wall_time_ms": Value::Null,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json serialization"));
            return EXIT_USAGE;
        }
    };
    let (text, code) = run(&cli);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INTERNAL;
            }
        }
        None => println!("{text}"),
    }
    code
}
