//! Command-line front end. All computation lives in the library; this
//! binary parses arguments, resolves tolerances, sets up the thread pool,
//! renders one report, and maps outcomes to the exit-code contract:
//! 0 success/all-pass, 1 usage, 2 check failure, 3 quadrature/linear
//! algebra failure, 4 geometry failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use halfspace::asymptotics::{Quantity, DEFAULT_GRID};
use halfspace::cli::{
    asymptotics_report, constants_report, eigen_report, fiber_report, parse_range, region_report,
    thresholds_report, CommandOutput, OutputFormat,
};
use halfspace::fiber::{TestFamily, DEFAULT_EPS};
use halfspace::verify::{criteria_report, run_all, DEFAULT_SEED};
use halfspace::{Error, QuadratureSpec, Result};

#[derive(Parser)]
#[command(
    name = "halfspace",
    version,
    about = "Numerical checks for a weighted critical Neumann problem on the half-space"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_abs: f64,
    /// Relative quadrature tolerance. Falls back to the HALFSPACE_TOL_REL
    /// environment variable, then to 1e-8.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Worker threads. Output is byte-identical at any thread count.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Every computable constant for one dimension, with cross-route
    /// checks where a second route exists.
    Constants {
        #[arg(long)]
        dim: u32,
    },
    /// Threshold values and chain inequalities over a dimension range.
    Thresholds {
        /// Inclusive range LO..HI with 3 <= LO <= HI <= 12.
        #[arg(long, value_name = "LO..HI")]
        dim_range: String,
        /// One row per chain inequality instead of one per dimension.
        #[arg(long)]
        detail: bool,
    },
    /// Expansion sweep and coefficient fit for one family and quantity.
    Asymptotics {
        #[arg(long)]
        dim: u32,
        /// Test family: u, uhat, v, or vhat.
        #[arg(long, default_value = "u")]
        family: String,
        /// Quantity: E, P, V, T, or Q.
        #[arg(long)]
        quantity: String,
        /// Boundary exponent (used by quantity Q).
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Comma-separated scales; the default grid when omitted.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Fiber level-condition sweep at one parameter point.
    Fiber {
        #[arg(long)]
        dim: u32,
        /// Interior critical term switch: 1 on, 0 off.
        #[arg(long)]
        a: u8,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Comma-separated scales; the default list when omitted.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Gaussian eigenvalue check and Ritz upper bounds for mu_1.
    Eigen {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 6)]
        basis_size: usize,
    },
    /// Existence/nonexistence classification over a parameter grid.
    Region {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        a: u8,
        #[arg(long)]
        q: f64,
        /// Inclusive lambda grid as lo:hi:step.
        #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
        lambda_range: String,
        /// Inclusive mu grid as lo:hi:step.
        #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
        mu_range: String,
        /// Certified lower bound for mu_1 (0 when nothing is known).
        #[arg(long, default_value_t = 0.0)]
        mu1_lower: f64,
        /// Certified upper bound for mu_1; computed by Rayleigh-Ritz when
        /// omitted.
        #[arg(long)]
        mu1_upper: Option<f64>,
    },
    /// Run the complete verification checklist, one line per criterion.
    VerifyAll,
}

fn resolve_tol_rel(flag: Option<f64>) -> Result<f64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var("HALFSPACE_TOL_REL") {
        Ok(text) => text.parse().map_err(|_| {
            Error::Domain(format!("HALFSPACE_TOL_REL must be a number, got '{text}'"))
        }),
        Err(_) => Ok(1e-8),
    }
}

fn parse_dim_range(text: &str) -> Result<(u32, u32)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Error::Domain(format!("dimension range must be LO..HI, got '{text}'")))?;
    let lo = lo
        .parse()
        .map_err(|_| Error::Domain(format!("bad dimension '{lo}'")))?;
    let hi = hi
        .parse()
        .map_err(|_| Error::Domain(format!("bad dimension '{hi}'")))?;
    Ok((lo, hi))
}

fn parse_family(text: &str) -> Result<TestFamily> {
    match text {
        "u" => Ok(TestFamily::Cutoff),
        "uhat" => Ok(TestFamily::CutoffTrace),
        "v" => Ok(TestFamily::Envelope),
        "vhat" => Ok(TestFamily::EnvelopeTrace),
        other => Err(Error::Domain(format!(
            "unknown family '{other}' (expected u, uhat, v, or vhat)"
        ))),
    }
}

fn parse_quantity(text: &str) -> Result<Quantity> {
    match text {
        "E" => Ok(Quantity::E),
        "P" => Ok(Quantity::P),
        "V" => Ok(Quantity::V),
        "T" => Ok(Quantity::T),
        "Q" => Ok(Quantity::Q),
        other => Err(Error::Domain(format!(
            "unknown quantity '{other}' (expected E, P, V, T, or Q)"
        ))),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let spec = QuadratureSpec {
        abs_tol: g.tol_abs,
        rel_tol: resolve_tol_rel(g.tol_rel)?,
        max_subdivisions: 2000,
    };
    spec.validate()?;
    if g.threads == 0 {
        return Err(Error::Domain("--threads must be at least 1".into()));
    }
    // A second build_global in the same process (tests) is harmless; the
    // pool from the first call stays in effect.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build_global();
    let format: OutputFormat = g.format.parse()?;

    let output: CommandOutput = match &cli.command {
        Command::Constants { dim } => constants_report(*dim, &spec)?,
        Command::Thresholds { dim_range, detail } => {
            let (lo, hi) = parse_dim_range(dim_range)?;
            thresholds_report(lo, hi, *detail, &spec)?
        }
        Command::Asymptotics {
            dim,
            family,
            quantity,
            q,
            eps,
        } => {
            let family = parse_family(family)?;
            let quantity = parse_quantity(quantity)?;
            let eps = if eps.is_empty() {
                &DEFAULT_GRID[..]
            } else {
                eps
            };
            asymptotics_report(*dim, family, quantity, *q, eps, &spec)?
        }
        Command::Fiber {
            dim,
            a,
            lambda,
            mu,
            q,
            eps,
        } => {
            let eps = if eps.is_empty() {
                &DEFAULT_EPS[..]
            } else {
                eps
            };
            fiber_report(*dim, *a, *lambda, *mu, *q, eps, &spec)?
        }
        Command::Eigen { dim, basis_size } => eigen_report(*dim, *basis_size, &spec)?,
        Command::Region {
            dim,
            a,
            q,
            lambda_range,
            mu_range,
            mu1_lower,
            mu1_upper,
        } => region_report(
            *dim,
            *a,
            *q,
            parse_range(lambda_range)?,
            parse_range(mu_range)?,
            *mu1_lower,
            *mu1_upper,
            &spec,
        )?,
        Command::VerifyAll => {
            let results = run_all(g.seed, &spec)?;
            CommandOutput {
                all_pass: results.iter().all(|r| r.passed),
                report: criteria_report(&results),
            }
        }
    };

    let rendered = output.report.render(format)?;
    match &g.out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(Error::from)?;
            file.write_all(rendered.as_bytes()).map_err(Error::from)?;
        }
        None => {
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .map_err(Error::from)?;
        }
    }
    Ok(output.all_pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let usage_ok = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if usage_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
