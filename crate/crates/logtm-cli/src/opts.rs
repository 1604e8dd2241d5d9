use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logtm::constants::Weight;
use logtm::quadrature::LogKind;

#[derive(Parser, Debug)]
#[command(name = "logtm", version, about = "Log-weighted Trudinger-Moser and Hardy inequalities on radial profiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sharp constants c_n, alpha_{n,beta}, gamma_{n,beta} and the concentration bound
    Constants(Opts),
    /// Norm and exponential functional of one profile
    Eval(Opts),
    /// Norm and functional along a family, one row per index (CSV ell,norm,J)
    Sharpness(Opts),
    /// Residuals of the change of variables s = n ln(1/r)
    TransportCheck(Opts),
    /// Weighted Hardy inequalities
    #[command(subcommand)]
    Hardy(HardyCommand),
    /// Embedding of the weighted Sobolev space into L^p_alpha
    Embed(Opts),
    /// Maximize the critical functional over the unit ball (n = 2k, w0 weight)
    Maximize(Opts),
    /// k-admissibility (S_j >= 0, j <= k) of a profile
    Admissible(Opts),
    /// Mollify the kinks of a profile and report what changed
    Smooth(Opts),
    /// Critical functional along the concentrating Moser sequence
    Concentration(Opts),
}

#[derive(Subcommand, Debug)]
pub enum HardyCommand {
    /// Decide a query from the condition lists
    Decide(Opts),
    /// Decide a query and cross-check it with the numerical criterion
    Verify(Opts),
    /// Decide every row of a CSV file `alpha,theta,nu,mu,p,q,R,logkind`
    Batch(BatchArgs),
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Shared by every command so one config file serves them all; commands ignore flags
/// they have no use for.
#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Dimension
    #[arg(long)]
    pub n: Option<u32>,
    /// Hessian order (default n/2)
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// w0 = ln(1/r), w1 = ln(e/r)
    #[arg(long, value_parser = parse_weight)]
    pub weight: Option<Weight>,
    /// Exponent multiplier of the functional, or the power of t in Hardy queries
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// alpha / alpha_{n,beta}
    #[arg(long)]
    pub alpha_ratio: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Family index (upper end of the scan for sharpness and concentration)
    #[arg(long)]
    pub ell: Option<f64>,
    /// Grid size (optimizer nodes, or scan points)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Truncation of the log variable for the optimizer
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Optimizer start jitter; no other command reads it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 on DIVERGENT or NON_CONVERGED outcomes
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// key=value file; command-line flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// moser-w0, moser-w1, dexp, trunc-log, zero, paraboloid
    #[arg(long)]
    pub family: Option<String>,
    /// Mollifier half-width
    #[arg(long)]
    pub eps: Option<f64>,
    /// trunc-log exponent
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// log_r = ln(R/t), log_er = ln(eR/t)
    #[arg(long, value_parser = parse_logkind)]
    pub logkind: Option<LogKind>,
    /// Profile file: JSON closed form or `t,v` CSV
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Whitespace-separated data file of the main curve
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// SVG polyline of the main curve
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse()
}

fn parse_logkind(s: &str) -> Result<LogKind, String> {
    s.parse()
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Eval(_) => "eval",
            Command::Sharpness(_) => "sharpness",
            Command::TransportCheck(_) => "transport-check",
            Command::Hardy(HardyCommand::Decide(_)) => "hardy decide",
            Command::Hardy(HardyCommand::Verify(_)) => "hardy verify",
            Command::Hardy(HardyCommand::Batch(_)) => "hardy batch",
            Command::Embed(_) => "embed",
            Command::Maximize(_) => "maximize",
            Command::Admissible(_) => "admissible",
            Command::Smooth(_) => "smooth",
            Command::Concentration(_) => "concentration",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::Constants(o)
            | Command::Eval(o)
            | Command::Sharpness(o)
            | Command::TransportCheck(o)
            | Command::Embed(o)
            | Command::Maximize(o)
            | Command::Admissible(o)
            | Command::Smooth(o)
            | Command::Concentration(o)
            | Command::Hardy(HardyCommand::Decide(o))
            | Command::Hardy(HardyCommand::Verify(o)) => o,
            Command::Hardy(HardyCommand::Batch(b)) => &b.opts,
        }
    }
}
