//! Command-line front end. Data files (symbols, decompositions, operators)
//! use the plain wire formats of their types; check and suite commands emit
//! reports tagged with [`REPORT_SCHEMA`](crate::suite::REPORT_SCHEMA).
//!
//! Exit codes: 0 the command ran and, for checks, criterion and oracle
//! agreed; 1 input, schema, or configuration errors; 2 a stated hypothesis
//! of the operation was violated; 3 criterion and oracle disagreed (a
//! counterexample to the implementation, worth a bug report).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{difference_condition, extract_symbol, product_condition, VerdictReport};
use crate::error::{Error, Result};
use crate::fast::bench_one;
use crate::linalg::Conjugation;
use crate::model::{build_mtto, BlockOperator};
use crate::suite::{run_suite, SuiteConfig, REPORT_SCHEMA};
use crate::symbols::LaurentSymbol;

#[derive(Parser)]
#[command(
    name = "mtto",
    version,
    about = "Matrix-valued truncated Toeplitz operators on z^N model spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Write the JSON (or CSV) output to this file instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Split a symbol into constant, analytic, and coanalytic parts.
    Decompose {
        /// Symbol file (JSON).
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Build the dense block operator induced by a symbol.
    Build {
        /// Symbol file (JSON).
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Read the symbol back off a block Toeplitz operator.
    Extract {
        /// Block operator file (JSON).
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Decide whether the product of two compressed operators is block
    /// Toeplitz, and cross-check against the brute-force oracle.
    CheckProduct {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        /// Conjugation file (JSON); identity conjugation when omitted.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Echoed into the report for traceability.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Decide whether A_phi A_psi - A_chi A_zeta is block Toeplitz. Omitted
    /// chi or zeta default to the zero symbol.
    CheckDifference {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        chi: Option<PathBuf>,
        #[arg(long)]
        zeta: Option<PathBuf>,
        /// Conjugation file (JSON); identity conjugation when omitted.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the randomized criterion-versus-oracle suite.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "max-N", default_value_t = 8)]
        max_n: usize,
        #[arg(long = "max-d", default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Time the FFT apply path against the dense reference (CSV output).
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Applications per grid cell.
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long = "max-N", default_value_t = 4096)]
        max_n: usize,
        #[arg(long = "max-d", default_value_t = 2)]
        max_d: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
}

/// Check report envelope: the verdict plus enough context to replay it.
/// Inputs are embedded only when criterion and oracle disagree, so a
/// disagreement report is a self-contained bug reproducer.
#[derive(Serialize)]
struct CheckEnvelope<'a> {
    schema: &'static str,
    command: &'static str,
    seed: u64,
    #[serde(rename = "N")]
    model_degree: usize,
    d: usize,
    phi_sha256: String,
    psi_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    chi_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_sha256: Option<String>,
    #[serde(flatten)]
    report: &'a VerdictReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    inputs: Option<CheckInputs<'a>>,
}

#[derive(Serialize)]
struct CheckInputs<'a> {
    phi: &'a LaurentSymbol,
    psi: &'a LaurentSymbol,
    #[serde(skip_serializing_if = "Option::is_none")]
    chi: Option<&'a LaurentSymbol>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta: Option<&'a LaurentSymbol>,
    gamma: &'a Conjugation,
}

/// Parses `args` and runs the requested command, returning the process exit
/// code. Split from `main` so tests can drive it in process.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::HypothesisViolation { .. } | Error::NotToeplitz { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Decompose { phi, out } => {
            let s = read_symbol(&phi)?;
            let dec = s.decompose();
            emit_json(&out, &dec)?;
            note(
                &out,
                format!(
                    "decomposed: N = {}, d = {}, {} coefficients",
                    s.model_degree(),
                    s.dim(),
                    s.coeffs().count()
                ),
            );
            Ok(0)
        }
        Command::Build { phi, out } => {
            let s = read_symbol(&phi)?;
            let a = build_mtto(&s)?;
            emit_json(&out, &a)?;
            note(
                &out,
                format!("built operator: N = {}, d = {}", s.model_degree(), s.dim()),
            );
            Ok(0)
        }
        Command::Extract { operator, tol, out } => {
            let a: BlockOperator = read_json(&operator)?;
            let s = extract_symbol(&a, tol)?;
            emit_json(&out, &s)?;
            note(
                &out,
                format!(
                    "extracted symbol: N = {}, d = {}, {} coefficients",
                    s.model_degree(),
                    s.dim(),
                    s.coeffs().count()
                ),
            );
            Ok(0)
        }
        Command::CheckProduct {
            phi,
            psi,
            gamma,
            tol,
            seed,
            out,
        } => {
            let phi = read_symbol(&phi)?;
            let psi = read_symbol(&psi)?;
            let gamma = read_gamma(gamma.as_deref(), phi.dim())?;
            let report = product_condition(&phi, &psi, &gamma, tol)?;
            let disagree = report.agree == Some(false);
            let envelope = CheckEnvelope {
                schema: REPORT_SCHEMA,
                command: "check-product",
                seed,
                model_degree: phi.model_degree(),
                d: phi.dim(),
                phi_sha256: sha256_of(&phi)?,
                psi_sha256: sha256_of(&psi)?,
                chi_sha256: None,
                zeta_sha256: None,
                report: &report,
                inputs: disagree.then_some(CheckInputs {
                    phi: &phi,
                    psi: &psi,
                    chi: None,
                    zeta: None,
                    gamma: &gamma,
                }),
            };
            emit_json(&out, &envelope)?;
            note(&out, describe("product", &report));
            Ok(if disagree { 3 } else { 0 })
        }
        Command::CheckDifference {
            phi,
            psi,
            chi,
            zeta,
            gamma,
            tol,
            seed,
            out,
        } => {
            let phi = read_symbol(&phi)?;
            let psi = read_symbol(&psi)?;
            let zero = LaurentSymbol::zero(phi.model_degree(), phi.dim());
            let chi = match chi {
                Some(p) => read_symbol(&p)?,
                None => zero.clone(),
            };
            let zeta = match zeta {
                Some(p) => read_symbol(&p)?,
                None => zero,
            };
            let gamma = read_gamma(gamma.as_deref(), phi.dim())?;
            let report = difference_condition(&phi, &psi, &chi, &zeta, &gamma, tol)?;
            let disagree = report.agree == Some(false);
            let envelope = CheckEnvelope {
                schema: REPORT_SCHEMA,
                command: "check-difference",
                seed,
                model_degree: phi.model_degree(),
                d: phi.dim(),
                phi_sha256: sha256_of(&phi)?,
                psi_sha256: sha256_of(&psi)?,
                chi_sha256: Some(sha256_of(&chi)?),
                zeta_sha256: Some(sha256_of(&zeta)?),
                report: &report,
                inputs: disagree.then_some(CheckInputs {
                    phi: &phi,
                    psi: &psi,
                    chi: Some(&chi),
                    zeta: Some(&zeta),
                    gamma: &gamma,
                }),
            };
            emit_json(&out, &envelope)?;
            note(&out, describe("difference", &report));
            Ok(if disagree { 3 } else { 0 })
        }
        Command::Suite {
            seed,
            trials,
            max_n,
            max_d,
            tol,
            out,
        } => {
            let cfg = SuiteConfig::new(seed, trials, max_n, max_d, tol);
            let report = run_suite(&cfg)?;
            emit_json(&out, &report)?;
            note(
                &out,
                format!(
                    "suite: {} trials, {} checks, {} failures, passed = {}",
                    report.config.trials,
                    report.checks_run,
                    report.failures.len(),
                    report.passed
                ),
            );
            Ok(if report.passed { 0 } else { 3 })
        }
        Command::Bench {
            seed,
            trials,
            max_n,
            max_d,
            out,
        } => {
            if max_d < 1 || max_n < 16 || trials < 1 {
                return Err(Error::InvalidConfig(format!(
                    "bench needs max-N >= 16, max-d >= 1, trials >= 1; got max-N = {max_n}, \
                     max-d = {max_d}, trials = {trials}"
                )));
            }
            let mut csv = String::from("N,d,reps,dense_ns,fast_ns,max_rel_err\n");
            let mut rows = 0;
            for (cell, &n) in [16usize, 256, 4096].iter().enumerate() {
                if n > max_n {
                    continue;
                }
                for d in 1..=max_d.min(2) {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(
                        seed ^ (cell as u64) << 8 ^ d as u64,
                    );
                    let s = LaurentSymbol::random(n, d, &mut rng);
                    let b = bench_one(&s, trials, seed)?;
                    csv.push_str(&format!(
                        "{},{},{},{},{},{:e}\n",
                        b.model_degree, b.dim, b.reps, b.dense_ns, b.fast_ns, b.max_rel_err
                    ));
                    rows += 1;
                }
            }
            emit_raw(&out, &csv)?;
            note(
                &out,
                format!("bench: {rows} grid cells, {trials} reps each"),
            );
            Ok(0)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read_symbol(path: &Path) -> Result<LaurentSymbol> {
    read_json(path)
}

fn read_gamma(path: Option<&Path>, d: usize) -> Result<Conjugation> {
    match path {
        Some(p) => read_json(p),
        None => Ok(Conjugation::standard(d)),
    }
}

fn sha256_of<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn emit_json<T: Serialize>(out: &OutputOpts, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_raw(out, &text)
}

fn emit_raw(out: &OutputOpts, text: &str) -> Result<()> {
    match &out.report {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn note(out: &OutputOpts, line: String) {
    if !out.quiet {
        eprintln!("{line}");
    }
}

fn describe(kind: &str, report: &VerdictReport) -> String {
    let mut line = format!(
        "{kind} criterion: residual = {:.3e}, verdict = {}, oracle = {:?}, agree = {:?}",
        report.residual, report.verdict, report.oracle_verdict, report.agree
    );
    if report.near_threshold {
        line.push_str(" (near threshold)");
    }
    line
}
