use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fef_cli::error::{CliError, ErrorCode};
use fef_cli::matrix_file;
use fef_cli::report::{render_json, render_text, OptimizationMeta, ReportDoc, StateOrigin};
use fef_cli::sweep::{self, Family, SweepConfig};
use fef_core::bounds;
use fef_core::optimizer::{self, OptimizerConfig, DEFAULT_SEED};
use fef_core::states::StateSpec;
use fef_core::verify::{run_all, VerifyLevel};

#[derive(Parser)]
#[command(
    name = "fef",
    version,
    about = "Fully entangled fraction of d⊗d bipartite states: bounds, exact values, certified numeric estimates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bounds, exact values and (optionally) a certified numeric FEF for one state
    Report(ReportArgs),
    /// Sweep a one-parameter family and emit CSV
    Sweep(SweepArgs),
    /// Run the cross-validation suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateName {
    MaxEntangled,
    Isotropic,
    Example1,
    Example2,
    Phix,
    Rho3,
}

#[derive(Args)]
struct ReportArgs {
    /// Built-in state family
    #[arg(long, value_enum)]
    state: Option<StateName>,
    /// JSON matrix file (schema: {"format":1,"dim":d,"matrix":[[[re,im],..],..]})
    #[arg(long)]
    file: Option<PathBuf>,
    /// Local dimension (families that take one; default 3)
    #[arg(long)]
    d: Option<usize>,
    /// Isotropic mixing parameter
    #[arg(long)]
    theta: Option<f64>,
    /// example1 parameter
    #[arg(long)]
    a: Option<f64>,
    /// example2 / phix parameter
    #[arg(long)]
    x: Option<f64>,
    /// rho3 parameter
    #[arg(long)]
    y: Option<f64>,
    /// Run the numeric maximizer and certify the sandwich
    #[arg(long)]
    optimize: bool,
    /// Restarts for the maximizer
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Seed for the maximizer
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit the JSON document on stdout instead of text
    #[arg(long)]
    json: bool,
    /// Also write the JSON document to a file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Example1,
    Example2,
    Phix,
    Rho3,
    Isotropic,
}

impl From<FamilyName> for Family {
    fn from(f: FamilyName) -> Family {
        match f {
            FamilyName::Example1 => Family::Example1,
            FamilyName::Example2 => Family::Example2,
            FamilyName::Phix => Family::PhiX,
            FamilyName::Rho3 => Family::Rho3,
            FamilyName::Isotropic => Family::Isotropic,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Family to sweep
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Local dimension (isotropic family; default 3)
    #[arg(long)]
    d: Option<usize>,
    /// Range start (default: family domain start)
    #[arg(long)]
    from: Option<f64>,
    /// Range end (default: family domain end)
    #[arg(long)]
    to: Option<f64>,
    /// Grid points
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Fill the fef_numeric column with certified numeric estimates
    #[arg(long)]
    optimize: bool,
    /// Restarts per grid point when optimizing
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Base seed; per-point seeds are derived from (seed, index)
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Bisect the crossings of f − 1/d inside the range (printed to stderr)
    #[arg(long)]
    find_threshold: bool,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sample-count level
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    level: Level,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[E-USAGE]: {first}");
            return 2;
        }
    };
    let result = match cli.cmd {
        Cmd::Report(args) => cmd_report(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn require(value: Option<f64>, flag: &str, state: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--state {state} requires {flag}")))
}

fn spec_from_flags(name: StateName, args: &ReportArgs) -> Result<StateSpec, CliError> {
    let d = args.d.unwrap_or(3);
    Ok(match name {
        StateName::MaxEntangled => StateSpec::MaxEntangled { dim: d },
        StateName::Isotropic => StateSpec::Isotropic {
            dim: d,
            theta: require(args.theta, "--theta", "isotropic")?,
        },
        StateName::Example1 => StateSpec::Example1 {
            a: require(args.a, "--a", "example1")?,
        },
        StateName::Example2 => StateSpec::Example2 {
            x: require(args.x, "--x", "example2")?,
        },
        StateName::Phix => StateSpec::PhiX {
            x: require(args.x, "--x", "phix")?,
        },
        StateName::Rho3 => StateSpec::Rho3 {
            y: require(args.y, "--y", "rho3")?,
        },
    })
}

fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let (origin, spec, rho) = match (&args.state, &args.file) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage("--state and --file are mutually exclusive"))
        }
        (None, None) => return Err(CliError::usage("one of --state or --file is required")),
        (Some(name), None) => {
            let spec = spec_from_flags(*name, &args)?;
            let rho = spec.build()?;
            (
                StateOrigin::Family { spec: spec.clone() },
                Some(spec),
                rho,
            )
        }
        (None, Some(path)) => (
            StateOrigin::File {
                path: path.display().to_string(),
            },
            None,
            matrix_file::read_matrix_file(path)?,
        ),
    };

    let (report, meta) = if args.optimize {
        let cfg = OptimizerConfig {
            restarts: args.restarts,
            seed: args.seed,
            ..OptimizerConfig::default()
        };
        let (report, res) = optimizer::certify_with_details(&rho, &cfg)?;
        (
            report,
            Some(OptimizationMeta::from_result(&res, cfg.restarts, cfg.seed)),
        )
    } else {
        (bounds::full_report(&rho, false)?, None)
    };

    let distillable = match &spec {
        Some(StateSpec::Isotropic { dim, theta }) => {
            Some(bounds::distillable_isotropic(*theta, *dim)?)
        }
        _ => None,
    };
    let doc = ReportDoc {
        state: origin,
        fef_known: report.known_fef(1e-9),
        distillable,
        optimization: meta,
        report,
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.json {
        write!(out, "{}", render_json(&doc)?)?;
    } else {
        write!(out, "{}", render_text(&doc))?;
    }
    if let Some(path) = &args.out {
        let mut w = BufWriter::new(File::create(path)?);
        write!(w, "{}", render_json(&doc)?)?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let family: Family = args.family.into();
    let d = args.d.unwrap_or(3);
    if family == Family::Isotropic && d < 2 {
        return Err(CliError::usage("--d must be at least 2"));
    }
    let (dom_lo, dom_hi) = family.domain(d);
    let from = args.from.unwrap_or(dom_lo);
    let to = args.to.unwrap_or(dom_hi);
    if args.steps == 0 {
        return Err(CliError::usage("--steps must be at least 1"));
    }

    let rows = sweep::run_sweep(&SweepConfig {
        family,
        dim: d,
        from,
        to,
        steps: args.steps,
        optimize: args.optimize,
        restarts: args.restarts,
        seed: args.seed,
    })?;

    match &args.out {
        Some(path) => {
            let w = BufWriter::new(File::create(path)?);
            sweep::write_csv(w, &rows)?;
        }
        None => {
            let stdout = io::stdout();
            sweep::write_csv(stdout.lock(), &rows)?;
        }
    }

    if args.find_threshold {
        let roots = sweep::find_thresholds(family, d, from, to, args.steps)?;
        if roots.is_empty() {
            eprintln!("threshold: none in [{from}, {to}]");
        }
        for root in roots {
            eprintln!("threshold: param={root:.16e} (f crosses 1/{d})");
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let level = match args.level {
        Level::Fast => VerifyLevel::Fast,
        Level::Full => VerifyLevel::Full,
    };
    let started = Instant::now();
    let results = run_all(level);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "{:<28} {:>7} {:>12} {:>9}  status",
        "suite", "cases", "max-dev", "tol"
    )?;
    let mut failed = 0;
    for r in &results {
        if !r.passed {
            failed += 1;
        }
        writeln!(
            out,
            "{:<28} {:>7} {:>12.3e} {:>9.1e}  {}",
            r.name,
            r.cases,
            r.max_deviation,
            r.tolerance,
            if r.passed { "pass" } else { "FAIL" }
        )?;
    }
    writeln!(
        out,
        "verify level {:?}: {}/{} suites passed in {:.1}s",
        args.level,
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    )?;
    if failed > 0 {
        return Err(CliError::new(
            ErrorCode::Internal,
            format!("{failed} verification suite(s) failed"),
        ));
    }
    Ok(())
}
