//! Batch front end for the theta pipelines: reproducible configs, JSON
//! reports, exit code 0 iff all checks pass.

mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "theta", version, about = "theta-group and theta-function pipelines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic backend end-to-end: torsion table, Weil pairing matrix,
    /// moduli vector at z = 0 with ambiguity flags.
    TorusModuli {
        /// JSON file with the period matrix as a g x g array of [re, im].
        #[arg(long)]
        tau: PathBuf,
        /// Torsion level N >= 2.
        #[arg(long = "N", default_value_t = 2)]
        n: u32,
        #[arg(long)]
        seed: u64,
        /// Tolerance for the normal-set cocycle residual.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Genus-2 pipeline: periods, torsion, determinantal Weil functions,
    /// normalization, and the analytic comparison.
    CurveThomae {
        /// JSON file with branch_points or coefficients.
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Random triples per torsion point.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Tolerance on the worst coefficient of variation.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact Pfaffian and pure-spinor identities plus the residue-pairing
    /// corank table of a genus-2 curve.
    SpinorSuite {
        /// Optional curve file; defaults to y^2 = x^6 - 1.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact intersection-number identities in the exterior-algebra model.
    Cohomology {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit<T: serde::Serialize>(report: &T, pass: bool, out: Option<PathBuf>) -> ExitCode {
    let text = serde_json::to_string_pretty(report).expect("serialization cannot fail");
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &text) {
            eprintln!("{{\"error\": \"cannot write {}: {e}\"}}", path.display());
            return ExitCode::from(2);
        }
    }
    println!("{text}");
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("{{\"error\": \"{e}\"}}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::TorusModuli { tau, n, seed, tol, out } => {
            let text = match std::fs::read_to_string(&tau) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", tau.display())),
            };
            let tau = match report::parse_tau(&text) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            match report::cmd_torus_moduli(tau, n, seed, tol) {
                Ok(r) => {
                    let pass = r.pass;
                    emit(&r, pass, out)
                }
                Err(e) => fail(e),
            }
        }
        Command::CurveThomae { curve, seed, samples, tol, out } => {
            let text = match std::fs::read_to_string(&curve) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", curve.display())),
            };
            let curve = match report::parse_curve(&text) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match report::cmd_curve_thomae(&curve, samples, seed, tol) {
                Ok(r) => {
                    let pass = r.pass;
                    emit(&r, pass, out)
                }
                Err(e) => fail(e),
            }
        }
        Command::SpinorSuite { curve, seed, out } => {
            let curve = match curve {
                Some(path) => {
                    let text = match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => return fail(format!("cannot read {}: {e}", path.display())),
                    };
                    match report::parse_curve(&text) {
                        Ok(c) => c,
                        Err(e) => return fail(e),
                    }
                }
                None => report::default_curve(),
            };
            match report::cmd_spinor_suite(&curve, seed) {
                Ok(r) => {
                    let pass = r.pass;
                    emit(&r, pass, out)
                }
                Err(e) => fail(e),
            }
        }
        Command::Cohomology { out } => match report::cmd_cohomology() {
            Ok(r) => {
                let pass = r.pass;
                emit(&r, pass, out)
            }
            Err(e) => fail(e),
        },
    }
}
