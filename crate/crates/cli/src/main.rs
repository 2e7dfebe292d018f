//! Command-line front end for Anosov certification pipelines.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "anosov", version, about = "Singular value gaps, flag dynamics and Schottky certificates for free groups in SL(d,R)")]
pub struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Decimal places in numeric output.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,
    /// Tolerance override `name=value` (svd_tol, det_tol, sum_tol,
    /// recompose_tol, rank_tol, angle_tol); repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan projection of every matrix in a file.
    Cartan {
        file: PathBuf,
        /// Also print root gaps for these pivots.
        #[arg(long)]
        pivots: Option<String>,
    },
    /// Weyl group combinatorics.
    Weyl {
        #[command(subcommand)]
        command: WeylCommand,
    },
    /// Uniform regularity certificate over a word ball.
    Certify(CertifyArgs),
    /// Schottky constructions.
    Schottky {
        #[command(subcommand)]
        command: SchottkyCommand,
    },
    /// Sampled limit set as CSV (and SVG).
    Limitset(LimitArgs),
    /// Classify random chambers against a thickened limit set.
    Domain(DomainArgs),
}

#[derive(Subcommand, Debug)]
pub enum WeylCommand {
    /// Balanced thickenings of the given face type.
    Thickenings {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        pivots: String,
    },
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long)]
    pub pivots: String,
    #[arg(long, default_value_t = 10)]
    pub radius: usize,
    #[arg(long, default_value_t = 0.05)]
    pub min_slope: f64,
    /// Largest number of words evaluated.
    #[arg(long, default_value_t = anosov_core::certify::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SchottkyCommand {
    /// Smallest power `m` with `A ↦ α^m, B ↦ β^m` passing ping-pong and URU.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Eigenvalues of α, non-increasing with product one.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eigenvalues: Vec<f64>,
    /// Matrix file with the conjugator of α (identity by default).
    #[arg(long)]
    pub conj: Option<PathBuf>,
    /// Rotation angle producing β from α.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    pub theta: f64,
    /// Embed the pair by the symmetric square (2×2 input only).
    #[arg(long)]
    pub sym2: bool,
    #[arg(long)]
    pub pivots: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub radius: usize,
    #[arg(long, default_value_t = 0.05)]
    pub min_slope: f64,
    #[arg(long, default_value_t = 256)]
    pub cap: u64,
    /// Ping-pong sample points per ball.
    #[arg(long, default_value_t = 2048)]
    pub samples: usize,
    #[arg(long, default_value_t = anosov_core::sampling::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long)]
    pub pivots: String,
    /// Length of the cyclically reduced words sampled.
    #[arg(long, default_value_t = 5)]
    pub word_length: usize,
    /// Power taken of each word.
    #[arg(long, default_value_t = 16)]
    pub power: u64,
    /// Certification radius (0 skips certification).
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
    #[arg(long, default_value_t = 0.05)]
    pub min_slope: f64,
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DomainArgs {
    #[arg(long)]
    pub rep: PathBuf,
    /// Index into the balanced thickenings, or a file of one-line
    /// permutations separated by `|`.
    #[arg(long)]
    pub thickening: String,
    /// Limit flag type (full flags by default).
    #[arg(long)]
    pub pivots: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = anosov_core::sampling::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub word_length: usize,
    #[arg(long, default_value_t = 16)]
    pub power: u64,
    #[arg(long, default_value_t = 8)]
    pub radius: usize,
    #[arg(long, default_value_t = 0.05)]
    pub min_slope: f64,
    /// Return census up to this word length over the `out` chambers.
    #[arg(long)]
    pub census: Option<usize>,
    /// Distance at which a translate meets the census sample.
    #[arg(long, default_value_t = 0.05)]
    pub census_tol: f64,
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(commands::Status::Success) => ExitCode::SUCCESS,
        Ok(commands::Status::CertificateFailed) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
