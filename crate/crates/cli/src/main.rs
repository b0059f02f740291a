mod commands;
mod output;
mod settings;

use clap::{Args, Parser, Subcommand};
use ldl_core::LdlError;
use std::path::PathBuf;
use std::process::ExitCode;

const AFTER_HELP: &str = "\
Every option can also be set in the --config file as `key = value`, using
the long flag name without the leading dashes (for example `R = 256` or
`h-rule = sqrtR`). Global keys are threads, seed, output and C0. A flag on
the command line wins over the file, which wins over the built-in default.

Exit codes: 0 success, 1 invalid input or violated precondition,
2 internal consistency failure, 3 resource guard, 64 usage error.";

#[derive(Parser, Debug)]
#[command(name = "ldl", version, about = "Lattice point discrepancy laboratory", after_help = AFTER_HELP)]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "LDL_THREADS")]
    threads: Option<usize>,

    /// `key = value` file supplying defaults for any option
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for randomized experiments
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write results to this file (atomically) instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of lattice points in the closed dilate tΩ
    Count(CountArgs),
    /// Mean-square lattice discrepancy over [R, R+h]
    Discrepancy(DiscrepancyArgs),
    /// Mean-square discrepancy across a list of R under an h rule
    Study(StudyArgs),
    /// Grid of cap widths and their normalized per-direction maximum
    Caps(CapsArgs),
    /// Lattice points of a thin annulus of the polar functional
    Annulus(AnnulusArgs),
    /// Windowed bilinear cap sum
    Bilinear(BilinearArgs),
    /// Weighted dyadic sums and the assembled bound
    Sums(SumsArgs),
    /// Smoothed Farey polygon and its checks
    Farey(FareyArgs),
    /// Distinct-value statistics of a norm on a lattice shell
    Distance(DistanceArgs),
    /// Mean-square discrepancy of randomly rotated domains
    RotationStudy(RotationArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    /// text, csv or json
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct DiscrepancyArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// exact or sampled
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct StudyArgs {
    /// Domain specs separated by ';' (or repeat the flag)
    #[arg(long, value_delimiter = ';')]
    pub domains: Vec<String>,
    /// Comma-separated, increasing
    #[arg(long = "R")]
    pub big_r: Option<String>,
    /// R, sqrtR, logR or const:c
    #[arg(long)]
    pub h_rule: Option<String>,
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct CapsArgs {
    #[arg(long)]
    pub domain: Option<String>,
    /// Number of equally spaced directions
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Comma-separated depths (default: one per decade over [1e-8, 1e-1] r1)
    #[arg(long)]
    pub deltas: Option<String>,
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct AnnulusArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// + or -
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// centered or onesided
    #[arg(long)]
    pub interval: Option<String>,
    /// Add the hull/segment decomposition of the one-sided + annulus
    #[arg(long)]
    pub segments: bool,
    /// Add the hull extreme points and the chain vertex bound
    #[arg(long)]
    pub hull: bool,
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct BilinearArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Leave out the k = l pairs
    #[arg(long)]
    pub no_diagonal: bool,
}

#[derive(Args, Debug)]
pub struct SumsArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    /// gamma, b, btilde or rhs24
    #[arg(long)]
    pub which: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// Decay exponent of the weights
    #[arg(long)]
    pub n_exp: Option<u32>,
    /// Truncation radius in units of R
    #[arg(long)]
    pub k_cutoff: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FareyArgs {
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long = "C0")]
    pub c0: Option<f64>,
    /// slim, caps, kbound or all
    #[arg(long)]
    pub verify: Option<String>,
    /// Acceptance bracket for the cap ratios, as lo,hi
    #[arg(long)]
    pub bracket: Option<String>,
    /// json only
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    /// euclidean, ellipsoid:a1,..,ad or pnorm:p
    #[arg(long)]
    pub norm: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// json only
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Args, Debug)]
pub struct RotationArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated
    #[arg(long = "R")]
    pub big_r: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<output::Format>,
}

#[derive(Debug)]
pub enum Fail {
    Usage(String),
    Core(LdlError),
    Io(String),
}

impl From<LdlError> for Fail {
    fn from(e: LdlError) -> Self {
        Fail::Core(e)
    }
}

impl Fail {
    fn exit_code(&self) -> u8 {
        match self {
            Fail::Usage(_) => 64,
            Fail::Core(e) => e.exit_code() as u8,
            Fail::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Fail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fail::Usage(m) => write!(f, "usage error: {m}"),
            Fail::Core(e) => write!(f, "{e}"),
            Fail::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ldl: {e}");
            if matches!(e, Fail::Usage(_)) {
                eprintln!("Run `ldl --help` for usage.");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
