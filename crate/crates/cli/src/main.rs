//! `toric-bounds`: eigenvalue bounds from moment polytopes.
//!
//! Exit codes: 0 success, 1 self-check failure, 2 malformed input,
//! 3 infeasible polytope or parameter, 4 unwritable output.

mod check;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toric_core::calabi::{
    self, find_critical_a, gnuplot_script, write_sweep_csv, DEFAULT_A_MAX, DEFAULT_A_MIN,
    DEFAULT_GRID, DEFAULT_ORDER,
};
use toric_core::{
    builtin_polytope, parse_polytope_json, rescale_bound, solve_extremal_s, theorem1_bound,
    theorem2_bound, Builtin, DelzantPolytope, PolytopeFileError,
};

use report::Metadata;

#[derive(Debug, Parser)]
#[command(
    name = "toric-bounds",
    version,
    about = "Upper bounds on the first torus-invariant eigenvalue of toric Kähler metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound for metrics of non-negative scalar curvature
    Bound(PolytopeArgs),
    /// Extremal scalar curvature and the bound for the extremal metric
    Extremal(PolytopeArgs),
    /// Sweep of the Calabi family: closed-form bound and Rayleigh-Ritz values
    Calabi(CalabiArgs),
    /// Run the acceptance checks and report pass/fail with timings
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct PolytopeArgs {
    /// Builtin polytope: cpn:N, rectangle:A or trapezoid:A (A rational, p/q)
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<String>,
    /// JSON polytope file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Also write the report to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Divide the bound by a metric scale; without a value, use c(a) for trapezoid:A
    #[arg(long, num_args = 0..=1, default_missing_value = "auto")]
    normalize: Option<String>,
    /// Recorded in the report metadata
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CalabiArgs {
    /// CSV output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gauss-Legendre order per direction per triangle
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Number of grid points
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_A_MIN, allow_negative_numbers = true)]
    amin: f64,
    #[arg(long, default_value_t = DEFAULT_A_MAX, allow_negative_numbers = true)]
    amax: f64,
    /// Write a gnuplot script for the sweep CSV to this path
    #[arg(long)]
    gnuplot_script: Option<PathBuf>,
    /// Recorded in the report metadata
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Seed for the Monte Carlo and random-instance checks
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Quadrature order for the Rayleigh-Ritz checks
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Negative control: perturb the reference scalar-curvature slope
    #[arg(long, hide = true)]
    tamper_alpha: bool,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    fn unwritable(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: 4,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }
}

fn load_polytope(args: &PolytopeArgs) -> Result<(DelzantPolytope, Option<Builtin>), Failure> {
    if let Some(name) = &args.builtin {
        let b: Builtin = name
            .parse()
            .map_err(|e| Failure::malformed(format!("{e}")))?;
        let p = builtin_polytope(&b).map_err(|e| Failure::infeasible(format!("{e}")))?;
        return Ok((p, Some(b)));
    }
    let path = args
        .input
        .as_ref()
        .expect("clap enforces --builtin or --input");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    let p = parse_polytope_json(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        match e {
            PolytopeFileError::Geometry(_) => Failure::infeasible(msg),
            _ => Failure::malformed(msg),
        }
    })?;
    Ok((p.with_label(path.display().to_string()), None))
}

fn resolve_scale(
    normalize: &Option<String>,
    builtin: &Option<Builtin>,
) -> Result<Option<f64>, Failure> {
    match normalize.as_deref() {
        None => Ok(None),
        Some("auto") => match builtin {
            Some(Builtin::Trapezoid(a)) => Ok(Some(calabi::normalization(toric_core::numerics::rational::to_f64(a)))),
            _ => Err(Failure::malformed(
                "--normalize without a value needs --builtin trapezoid:A; pass an explicit scale otherwise",
            )),
        },
        Some(s) => match s.parse::<f64>() {
            Ok(c) if c > 0.0 && c.is_finite() => Ok(Some(c)),
            _ => Err(Failure::malformed(format!("--normalize expects a positive number, got `{s}`"))),
        },
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, text).map_err(|e| Failure::unwritable(path, e))?;
    }
    Ok(())
}

fn cmd_bound(args: &PolytopeArgs) -> Result<(), Failure> {
    let (p, builtin) = load_polytope(args)?;
    let scale = resolve_scale(&args.normalize, &builtin)?;
    let mut r = theorem1_bound(&p).map_err(|e| Failure::infeasible(e.to_string()))?;
    if let Some(c) = scale {
        r = rescale_bound(&r, c).map_err(|e| Failure::malformed(e.to_string()))?;
    }
    let meta = Metadata::new("bound")
        .entry("input", polytope_source(args))
        .entry("normalize", fmt_scale(scale))
        .entry("seed", args.seed);
    let text = format!(
        "{meta}{}",
        report::bound_report(&p, &r, "non-negative scalar curvature")
    );
    emit(&text, &args.out)
}

fn cmd_extremal(args: &PolytopeArgs) -> Result<(), Failure> {
    let (p, builtin) = load_polytope(args)?;
    let scale = resolve_scale(&args.normalize, &builtin)?;
    let s = solve_extremal_s(&p).map_err(|e| Failure::infeasible(e.to_string()))?;
    let mut r = theorem2_bound(&p).map_err(|e| Failure::infeasible(e.to_string()))?;
    if let Some(c) = scale {
        r = rescale_bound(&r, c).map_err(|e| Failure::malformed(e.to_string()))?;
    }
    let meta = Metadata::new("extremal")
        .entry("input", polytope_source(args))
        .entry("normalize", fmt_scale(scale))
        .entry("seed", args.seed);
    let text = format!(
        "{meta}{}{}",
        report::scalar_curvature_report(&s),
        report::bound_report(&p, &r, "extremal")
    );
    emit(&text, &args.out)
}

fn polytope_source(args: &PolytopeArgs) -> String {
    match (&args.builtin, &args.input) {
        (Some(b), _) => format!("builtin {b}"),
        (None, Some(path)) => format!("file {}", path.display()),
        (None, None) => unreachable!("clap enforces an input"),
    }
}

fn fmt_scale(scale: Option<f64>) -> String {
    scale.map_or_else(|| "none".to_string(), |c| format!("{c:.12}"))
}

fn cmd_calabi(args: &CalabiArgs) -> Result<(), Failure> {
    let records = calabi::sweep(args.amin, args.amax, args.grid, args.order)
        .map_err(|e| Failure::malformed(e.to_string()))?;
    let mut csv = Vec::new();
    write_sweep_csv(&records, &mut csv).expect("writing to memory");
    match &args.out {
        Some(path) => fs::write(path, &csv).map_err(|e| Failure::unwritable(path, e))?,
        None => print!("{}", String::from_utf8(csv).expect("CSV is UTF-8")),
    }
    if let Some(path) = &args.gnuplot_script {
        let csv_name = args
            .out
            .as_ref()
            .map_or_else(|| "sweep.csv".to_string(), |p| p.display().to_string());
        fs::write(path, gnuplot_script(&csv_name)).map_err(|e| Failure::unwritable(path, e))?;
    }
    let meta = Metadata::new("calabi")
        .entry(
            "grid",
            format!("{} points on [{}, {}]", args.grid, args.amin, args.amax),
        )
        .entry("quadrature order", args.order)
        .entry("quadrature doubling tolerance", calabi::QUADRATURE_TOL)
        .entry(
            "zero-eigenvalue threshold (relative)",
            calabi::ZERO_EIGEN_REL,
        )
        .entry("seed", args.seed);
    let summary = format!(
        "{meta}{}",
        report::sweep_summary(&records, find_critical_a())
    );
    // keep stdout a clean CSV stream when no output file is given
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Extremal(a) => cmd_extremal(a),
        Command::Calabi(a) => cmd_calabi(a),
        Command::Check(a) => {
            let meta = Metadata::new("check")
                .entry("seed", a.seed)
                .entry("quadrature order", a.order)
                .entry("tamper-alpha", a.tamper_alpha);
            print!("{meta}");
            let passed = check::run(&check::Options {
                seed: a.seed,
                order: a.order,
                tamper_alpha: a.tamper_alpha,
            });
            if passed {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    message: "one or more checks failed".into(),
                })
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
