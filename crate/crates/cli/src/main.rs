use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;

/// Incidence rings of prosets: analysis, arithmetic, functor and colimit
/// checks, unit groups and inverse limits. Reports are JSON on stdout.
#[derive(Debug, Parser)]
#[command(name = "incidence", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Coefficient ring: Z, Q, Z/n, Fp, Fq or GF(q).
    #[arg(long, global = true)]
    pub ring: Option<String>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Enumeration budget.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Window: a depth, a comma-separated label list, or a JSON array.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Standard window depth for rule prosets.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Proset structure.
    #[command(subcommand)]
    Proset(ProsetCmd),
    /// Incidence matrix arithmetic.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// The incidence functor M[f].
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Colimits in the FCC category.
    #[command(subcommand)]
    Colimit(ColimitCmd),
    /// Unit groups.
    #[command(subcommand)]
    Gl(GlCmd),
    /// Inverse systems of windows.
    #[command(subcommand)]
    Limits(LimitsCmd),
}

#[derive(Debug, Subcommand)]
pub enum ProsetCmd {
    /// Classes, components, layers, intervals and a convexity table.
    Analyze {
        /// A JSON file, inline JSON, or a rule: nat, int, zig, divisibility,
        /// chain:N, full:N, arrow:M,N.
        proset: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatrixCmd {
    /// Product of two matrices on the same carrier.
    Mul { a: PathBuf, b: PathBuf },
    /// Inverse, with both invertibility routes reported.
    Inv { a: PathBuf },
    /// Restriction to the `--window`.
    Project { a: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum FunctorCmd {
    /// M[f](A) for an FCC map f.
    Apply {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Ring-homomorphism check of M[f] (or the naive pullback).
    Verify {
        #[arg(long)]
        map: PathBuf,
        /// Check the literal entrywise pullback instead of M[f].
        #[arg(long)]
        naive: bool,
        /// Random pairs when the carrier is too large to enumerate.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ColimitCmd {
    /// Disjoint union with its injections.
    Coproduct {
        prosets: Vec<String>,
        #[arg(long, default_value_t = 0)]
        certify: usize,
    },
    /// Pushout of f and g along their common source.
    Pushout {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Certify universality against every proset of at most this size.
        #[arg(long, default_value_t = 0)]
        certify: usize,
    },
    /// Coequalizer of a parallel pair.
    Coeq {
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
        #[arg(long, default_value_t = 0)]
        certify: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GlCmd {
    /// Solvability verdict with the deciding criterion and certificate.
    Solvability {
        #[arg(long)]
        proset: String,
    },
    /// Order, generators and derived series of the unit group.
    Enumerate {
        #[arg(long)]
        proset: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum LimitsCmd {
    /// Projection triangles over the standard windows up to `--depth`, or
    /// compatibility and reconstruction of a `--family` file.
    Check {
        #[arg(long, required_unless_present = "family")]
        proset: Option<String>,
        #[arg(long, conflicts_with = "proset")]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            match &cli.global.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("{}", serde_json::json!({ "error": "io", "message": e.to_string() }));
                        return ExitCode::from(3);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(if e.code() == "parse_error" { 3 } else { 2 })
        }
    }
}
