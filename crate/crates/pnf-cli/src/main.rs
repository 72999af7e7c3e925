//! `pnf`: command-line checks of the Poisson-Newton summation
//! formulas.
//!
//! Every `verify-*` subcommand evaluates both sides of one identity
//! and emits a JSON array of verification reports to stdout or
//! `--out`; `analyze` dumps a series' divisor and atom measure as CSV
//! for external plotting.  Exit codes: 0 when every report passes its
//! tolerance, 1 on a tolerance miss, 2 on a usage error, 3 on a data
//! error.  `PNF_THREADS` caps the parallelism of the library
//! internals.

use clap::{Parser, Subcommand};
use pnf_cli::{config, formats};
use pnf_core::{
    atom_measure, locate_divisor, selberg_instance_check, verify_classical_poisson,
    verify_explicit_formula, verify_newton_identities, verify_poisson_newton, Complex64,
    DirichletSeries, NewtonError, SelbergData, SelbergError, TestFunction, VerificationReport,
    VerifyError, DEFAULT_LATTICE_BUDGET,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use config::RunConfig;

#[derive(Parser)]
#[command(name = "pnf", version, about = "Distributional summation formula checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate a series' divisor and atom measure; dump both as CSV
    Analyze {
        /// Series description (JSON)
        #[arg(long)]
        series: PathBuf,
        /// Divisor window height H
        #[arg(long, default_value_t = 100.0)]
        height: f64,
        /// Fundamental-frequency cutoff T
        #[arg(long, default_value_t = 10.0)]
        cutoff: f64,
        #[arg(long, default_value = "divisor.csv")]
        divisor_out: PathBuf,
        #[arg(long, default_value = "atoms.csv")]
        atoms_out: PathBuf,
    },
    /// Check the Poisson-Newton formula for a series
    VerifyPn {
        #[arg(long)]
        series: PathBuf,
        /// Test function, e.g. gaussian:center=0,width=1
        #[arg(long)]
        test: String,
        #[arg(long, default_value_t = 100.0)]
        height: f64,
        #[arg(long, default_value_t = 10.0)]
        cutoff: f64,
        /// Shift damping the atoms by exp(-freq * beta)
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Symmetric-on-R variant (adds mirrored atoms and the c0 delta term)
        #[arg(long)]
        symmetric: bool,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check classical Poisson summation via f = 1 - exp(-lambda s)
    VerifyPoisson {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value = "gaussian:center=0,width=1")]
        test: String,
        #[arg(long, default_value_t = 1e4)]
        height: f64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Newton identities for a monic polynomial
    VerifyNewton {
        /// Coefficients from the leading power down, e.g. 1,-3,2
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 8)]
        mmax: usize,
        /// Base frequency of the induced exponential sum
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Riemann explicit formula against a zero table
    VerifyExplicit {
        /// Zero ordinate table, one ascending value per line
        #[arg(long)]
        zeros: PathBuf,
        /// Sieve primes up to this limit X
        #[arg(long, default_value_t = 1_000_000)]
        primes: u64,
        #[arg(long, default_value = "gaussian:center=0,width=1")]
        test: String,
        /// Use only the first N zeros
        #[arg(long)]
        max_zeros: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a Selberg trace formula instance from spectral data
    VerifySelberg {
        /// Surface data (JSON: genus, eigen_gammas, lengths)
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        test: String,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report whether a series completes to a functional equation
    DetectFe {
        #[arg(long)]
        series: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Data(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Applies the PNF_THREADS cap before any parallel work starts.
fn configure_threads() -> Result<(), CliError> {
    match std::env::var("PNF_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    CliError::Usage(format!("PNF_THREADS must be a positive integer, got {v:?}"))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Data(format!("thread pool: {e}")))
        }
        Err(_) => Ok(()),
    }
}

fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Analyze { series, height, cutoff, divisor_out, atoms_out } => {
            let config = RunConfig {
                scenario: "analyze".to_string(),
                inputs: vec![series.clone()],
                height: Some(height),
                cutoff: Some(cutoff),
                zero_cap: None,
                prime_limit: None,
                test_spec: None,
                tolerance: 0.5,
                out: Some(divisor_out.clone()),
            };
            config.validate().map_err(CliError::Usage)?;
            let f = load_series(&series)?;
            let divisor = locate_divisor(&f, height)
                .map_err(|e| CliError::Data(format!("divisor location: {e}")))?;
            let atoms = atom_measure(&f, cutoff, DEFAULT_LATTICE_BUDGET)
                .map_err(|e| CliError::Data(format!("atom measure: {e}")))?;
            write_file(&divisor_out, &formats::divisor_csv(&divisor))?;
            write_file(&atoms_out, &formats::atoms_csv(&atoms))?;
            let summary = json!({
                "zero_count": divisor.points().len(),
                "atom_count": atoms.atoms.len(),
                "divisor_out": divisor_out.display().to_string(),
                "atoms_out": atoms_out.display().to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary"));
            Ok(true)
        }
        Command::VerifyPn {
            series,
            test,
            height,
            cutoff,
            beta,
            symmetric,
            tolerance,
            out,
        } => {
            let config = RunConfig {
                scenario: "verify-pn".to_string(),
                inputs: vec![series.clone()],
                height: Some(height),
                cutoff: Some(cutoff),
                zero_cap: None,
                prime_limit: None,
                test_spec: Some(test.clone()),
                tolerance,
                out: out.clone(),
            };
            config.validate().map_err(CliError::Usage)?;
            let f = load_series(&series)?;
            let phi = parse_test(&test)?;
            let report =
                verify_poisson_newton(&f, &phi, height, cutoff, beta, symmetric, tolerance)
                    .map_err(map_verify)?;
            emit(&[report], out.as_deref())
        }
        Command::VerifyPoisson { lambda, test, height, tolerance, out } => {
            let config = RunConfig {
                scenario: "verify-poisson".to_string(),
                inputs: vec![],
                height: Some(height),
                cutoff: None,
                zero_cap: None,
                prime_limit: None,
                test_spec: Some(test.clone()),
                tolerance,
                out: out.clone(),
            };
            config.validate().map_err(CliError::Usage)?;
            let phi = parse_test(&test)?;
            let report = verify_classical_poisson(lambda, &phi, height, tolerance)
                .map_err(map_verify)?;
            emit(&[report], out.as_deref())
        }
        Command::VerifyNewton { poly, mmax, lambda, out } => {
            let coeffs = parse_poly(&poly)?;
            let reports = verify_newton_identities(&coeffs, lambda, mmax).map_err(|e| match e {
                NewtonError::Validation(_) => CliError::Usage(e.to_string()),
                NewtonError::RootSolveFailure { .. } => CliError::Data(e.to_string()),
            })?;
            emit(&reports, out.as_deref())
        }
        Command::VerifyExplicit { zeros, primes, test, max_zeros, tolerance, out } => {
            let config = RunConfig {
                scenario: "verify-explicit".to_string(),
                inputs: vec![zeros.clone()],
                height: None,
                cutoff: None,
                zero_cap: max_zeros,
                prime_limit: Some(primes),
                test_spec: Some(test.clone()),
                tolerance,
                out: out.clone(),
            };
            config.validate().map_err(CliError::Usage)?;
            let phi = parse_test(&test)?;
            let report = verify_explicit_formula(&phi, &zeros, primes, max_zeros, tolerance)
                .map_err(map_verify)?;
            emit(&[report], out.as_deref())
        }
        Command::VerifySelberg { data, test, tolerance, out } => {
            let config = RunConfig {
                scenario: "verify-selberg".to_string(),
                inputs: vec![data.clone()],
                height: None,
                cutoff: None,
                zero_cap: None,
                prime_limit: None,
                test_spec: Some(test.clone()),
                tolerance,
                out: out.clone(),
            };
            config.validate().map_err(CliError::Usage)?;
            let text = read_file(&data)?;
            let surface = SelbergData::from_json(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", data.display())))?;
            let phi = parse_test(&test)?;
            let report = selberg_instance_check(&surface, &phi, tolerance).map_err(|e| match e {
                SelbergError::Validation(_) => CliError::Usage(e.to_string()),
                other => CliError::Data(other.to_string()),
            })?;
            emit(&[report], out.as_deref())
        }
        Command::DetectFe { series } => {
            let f = load_series(&series)?;
            let info = f.detect_functional_equation();
            let payload = json!({
                "has_fe": info.has_fe,
                "mu": info.mu,
                "c": info.c,
                "axis_note": info.axis_note,
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("payload"));
            Ok(info.has_fe)
        }
    }
}

fn map_verify(e: VerifyError) -> CliError {
    match e {
        VerifyError::Validation(_) => CliError::Usage(e.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_series(path: &Path) -> Result<DirichletSeries, CliError> {
    let text = read_file(path)?;
    DirichletSeries::from_json(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn parse_test(spec: &str) -> Result<TestFunction, CliError> {
    TestFunction::parse(spec).map_err(|e| CliError::Usage(e.to_string()))
}

/// Comma-separated coefficients, leading power first, into the
/// ascending order the library expects.
fn parse_poly(text: &str) -> Result<Vec<Complex64>, CliError> {
    let descending: Vec<f64> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("--poly entry {part:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if descending.len() < 2 {
        return Err(CliError::Usage(
            "--poly needs at least two coefficients".to_string(),
        ));
    }
    Ok(descending
        .into_iter()
        .rev()
        .map(|c| Complex64::new(c, 0.0))
        .collect())
}

fn emit(reports: &[VerificationReport], out: Option<&Path>) -> Result<bool, CliError> {
    let json = serde_json::to_string_pretty(reports).expect("reports serialize");
    match out {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }
    Ok(reports.iter().all(|r| r.pass))
}
