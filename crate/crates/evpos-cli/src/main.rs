//! `evpos`: analyze matrix semigroups and matrix powers for eventual
//! positivity, spectral structure, long-time behaviour, and per-theorem
//! hypothesis/conclusion checks.
//!
//! Exit codes: 0 for any computed verdict (verdicts are data, not errors),
//! 2 for usage and parse errors, 3 for numerical failures, 4 when a checker
//! reports a VIOLATION (so pipelines can gate on it).

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use evpos::checkers::{run_all, run_check, CheckConfig, CheckReport, Verdict};
use evpos::dynamics::{
    is_mean_ergodic, strong_convergence_verdict, uniform_balancing_verdict, DEFAULT_TOL_CONV,
    DEFAULT_T_MAX,
};
use evpos::error::Error;
use evpos::generators::{generate, Family, GenParams};
use evpos::positivity::{
    default_tol_pos, eventual_positivity_of_powers, eventual_positivity_of_semigroup,
};
use evpos::spectral::{default_tol_peripheral, spectrum_report};
use evpos::ComplexMatrix;

#[derive(Parser)]
#[command(name = "evpos", version, about = "Spectral analysis of eventually positive matrix semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral bound and radius, eigenvalue multiplicities and pole
    /// orders, peripheral spectrum.
    Analyze {
        /// Matrix file (JSON: {"rows", "cols", "entries": [[[re, im], ...]]}).
        path: PathBuf,
        /// Peripheral tolerance; defaults to 1e-7 * (1 + ||A||).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Eventual-positivity scan plus spectral certificate.
    Positivity {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: PositivityMode,
        /// Largest exponent (power mode) or time (semigroup mode) scanned.
        #[arg(long)]
        horizon: Option<f64>,
        /// Sample count for the semigroup time grid.
        #[arg(long, default_value_t = 120)]
        steps: usize,
        /// Positivity slack; defaults to 1e-9 * (1 + ||M||).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Long-time convergence verdicts.
    Converge {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: ConvergeMode,
        /// Grid horizon t_max.
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_CONV)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run one theorem checker (or `all`) against a matrix.
    Check {
        /// Theorem identifier (thm-2.1, cor-2.2, thm-3.1, lem-3.2, thm-4.1,
        /// lem-4.2, thm-4.3, eq-4.2-sequences, thm-5.1, thm-5.2, lem-5.3)
        /// or `all`.
        theorem: String,
        /// Matrix file to check.
        path: PathBuf,
        /// Second operand for lem-4.2: the checked operator Q (the main
        /// path then supplies the dominating projection P). Without it the
        /// dominant spectral projection of the input is used for both.
        #[arg(long)]
        aux: Option<PathBuf>,
        /// Convergence tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL_CONV)]
        tol: f64,
        /// Horizon for semigroup scans and grids.
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        horizon: f64,
        /// Sample count for positivity time grids.
        #[arg(long, default_value_t = 120)]
        steps: usize,
        /// Seed for sampled-vector evidence.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write a seeded instance (matrix JSON plus `<out>.meta.json` sidecar
    /// carrying the ground truth).
    Generate(GenerateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// evpos-semigroup | metzler | evpos-power | rotation-counterexample |
    /// jordan-counterexample
    #[arg(long)]
    family: String,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Spectral gap below the dominant eigenvalue.
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Dominant eigenvalue for the semigroup family.
    #[arg(long, default_value_t = 0.0)]
    spectral_bound: f64,
    /// Dominant eigenvalue modulus for the power family.
    #[arg(long, default_value_t = 1.0)]
    spectral_radius: f64,
    /// Rotation rate planted in the complement dynamics.
    #[arg(long, default_value_t = 1.5)]
    rotation: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PositivityMode {
    Power,
    Semigroup,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvergeMode {
    Strong,
    /// Alias for strong: the notions coincide on matrices.
    Uniform,
    MeanErgodic,
    Balancing,
}

fn main() -> ExitCode {
    // Die quietly on closed pipes (e.g. `evpos analyze m.json | head`)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Dimension(_) | Error::Parameter(_) | Error::NonFinite { .. } | Error::NotASpectralValue { .. } => 2,
        _ => 3,
    }
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        format!(
            "parse error in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Analyze { path, tol, json } => {
            let m = match load_matrix(&path) {
                Ok(m) => m,
                Err(msg) => return usage_error(msg),
            };
            let tol = tol.unwrap_or_else(|| default_tol_peripheral(&m));
            let report = spectrum_report(&m, tol)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                render::spectrum(&report);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Positivity {
            path,
            mode,
            horizon,
            steps,
            tol,
            json,
        } => {
            let m = match load_matrix(&path) {
                Ok(m) => m,
                Err(msg) => return usage_error(msg),
            };
            let tol = tol.unwrap_or_else(|| default_tol_pos(&m));
            let cert = match mode {
                PositivityMode::Power => {
                    eventual_positivity_of_powers(&m, horizon.unwrap_or(200.0) as usize, tol)?
                }
                PositivityMode::Semigroup => {
                    eventual_positivity_of_semigroup(&m, horizon.unwrap_or(DEFAULT_T_MAX), steps, tol)?
                }
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&cert).unwrap());
            } else {
                render::positivity(&cert);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge {
            path,
            mode,
            horizon,
            tol,
            json,
        } => {
            let m = match load_matrix(&path) {
                Ok(m) => m,
                Err(msg) => return usage_error(msg),
            };
            let verdict = match mode {
                ConvergeMode::Strong | ConvergeMode::Uniform => {
                    strong_convergence_verdict(&m, horizon, tol)?
                }
                ConvergeMode::MeanErgodic => is_mean_ergodic(&m, horizon, tol)?,
                ConvergeMode::Balancing => uniform_balancing_verdict(&m, horizon, tol)?,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            } else {
                render::convergence(&verdict);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            theorem,
            path,
            aux,
            tol,
            horizon,
            steps,
            seed,
            json,
        } => {
            let m = match load_matrix(&path) {
                Ok(m) => m,
                Err(msg) => return usage_error(msg),
            };
            let cfg = CheckConfig {
                tol_conv: tol,
                t_max: horizon,
                steps,
                seed,
                ..CheckConfig::default()
            };
            let reports: Vec<CheckReport> = if theorem == "all" {
                run_all(&m, &cfg)?
            } else if theorem == "lem-4.2" {
                if let Some(aux_path) = aux {
                    let q = match load_matrix(&aux_path) {
                        Ok(q) => q,
                        Err(msg) => return usage_error(msg),
                    };
                    vec![evpos::checkers::check_domination_lemma42(&q, &m, &cfg)?]
                } else {
                    vec![run_check("lem-4.2", &m, &cfg)?]
                }
            } else {
                vec![run_check(&theorem, &m, &cfg)?]
            };
            if json {
                let texts: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
                if reports.len() == 1 {
                    println!("{}", texts[0]);
                } else {
                    println!("[{}]", texts.join(",\n"));
                }
            } else {
                for report in &reports {
                    render::check(report);
                }
            }
            if reports.iter().any(|r| r.verdict == Verdict::Violation) {
                Ok(ExitCode::from(4))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Generate(args) => {
            let family = match Family::parse(&args.family) {
                Some(f) => f,
                None => {
                    return usage_error(format!(
                        "unknown family {:?}; expected evpos-semigroup, metzler, evpos-power, rotation-counterexample or jordan-counterexample",
                        args.family
                    ))
                }
            };
            let params = GenParams {
                spectral_bound: args.spectral_bound,
                spectral_radius: args.spectral_radius,
                gap: args.gap,
                rotation: args.rotation,
            };
            let bundle = generate(family, args.dim, args.seed, &params)?;

            let matrix_json = serde_json::to_string_pretty(&bundle.matrix).unwrap();
            std::fs::write(&args.out, format!("{matrix_json}\n")).map_err(|e| {
                Error::Parameter(format!("cannot write {}: {e}", args.out.display()))
            })?;

            let meta = serde_json::json!({
                "family": bundle.family.name(),
                "seed": bundle.seed,
                "ground_truth": bundle.ground_truth,
            });
            let meta_path = sidecar_path(&args.out);
            std::fs::write(&meta_path, format!("{}\n", serde_json::to_string_pretty(&meta).unwrap()))
                .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", meta_path.display())))?;

            println!(
                "wrote {} and {} (family {}, dim {}, seed {})",
                args.out.display(),
                meta_path.display(),
                bundle.family.name(),
                args.dim,
                args.seed
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

fn usage_error(msg: String) -> Result<ExitCode, Error> {
    eprintln!("error: {msg}");
    Ok(ExitCode::from(2))
}
