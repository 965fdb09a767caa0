use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "specmap", version, about = "Direct and inverse spectral problems for non-self-adjoint Sturm-Liouville operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Problem triple to spectral data and Cauchy data.
    Forward(ForwardArgs),
    /// Spectral data to a reconstructed triple.
    Inverse(InverseArgs),
    /// Cauchy data to a reconstructed triple.
    InverseCauchy(InverseArgs),
    /// Forward then inverse; reports the reconstruction error.
    Roundtrip(RoundtripArgs),
    /// Lipschitz quotient sweep under a perturbation scheme.
    Stability(StabilityArgs),
    /// Membership of spectral data or a triple in one of the stability sets.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output JSON file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Number of eigenvalues computed by the forward solver.
    #[arg(long, global = true, default_value_t = 30)]
    pub n_modes: usize,
    /// Intervals of the reconstruction grid.
    #[arg(long, global = true, default_value_t = 1024)]
    pub grid_nodes: usize,
    /// Data pairs used by the inverse solvers; all when absent.
    #[arg(long, global = true)]
    pub n_trunc: Option<usize>,
    /// Contour index for multiple eigenvalues; chosen automatically when
    /// absent.
    #[arg(long, global = true)]
    pub contour_index: Option<usize>,
    /// Trapezoid nodes on the contour.
    #[arg(long, global = true, default_value_t = 64)]
    pub contour_nodes: usize,
    /// Cosine and sine modes of the Cauchy data kernels.
    #[arg(long, global = true, default_value_t = 64)]
    pub fourier_modes: usize,
    /// Acceptance threshold: round-trip error or stability ratio spread.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed of the first perturbation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Solve the differentiated main equation for ε' (otherwise ε is
    /// differenced).
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub with_derivative: bool,
    /// Form explicit inverses for the operator norm instead of estimating.
    #[arg(long, global = true)]
    pub explicit_inverse_norm: bool,
}

#[derive(Debug, Args)]
pub struct ForwardArgs {
    /// Cauchy data file; derived from --output when absent.
    #[arg(long)]
    pub cauchy_output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    /// CSV of the reconstructed potential (`x, re, im`).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    /// Go through Cauchy data instead of spectral data.
    #[arg(long)]
    pub via_cauchy: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    GaussianTail,
    SingleEntry,
    PairSplit,
    AlphaDegenerate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EntryArg {
    Rho,
    Alpha,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    /// Perturbation magnitudes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub magnitudes: Vec<f64>,
    /// Seeds per magnitude, starting at --seed.
    #[arg(long, default_value_t = 1)]
    pub ensemble: u64,
    /// 1-based entry index for single-entry and alpha-degenerate schemes.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    #[arg(long, value_enum, default_value_t = EntryArg::Rho)]
    pub entry: EntryArg,
    /// CSV copy of the report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub set: SetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    BOmega,
    BOmegaRing,
    VOmegaDelta,
    VOmegaTauPlus,
    VOmegaTauMinus,
    Pq,
    Pqa,
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Admissible set to check.
    #[arg(long, value_enum)]
    pub set: Option<SetArg>,
    #[arg(long, default_value_t = 1.0)]
    pub omega_bound: f64,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub k_bound: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q_bound: f64,
    #[arg(long, default_value_t = 10.0)]
    pub a_bound: f64,
    /// `τₙ = tau / n²`.
    #[arg(long, default_value_t = 1e-3)]
    pub tau: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Spectral data accompanying a triple (weight-bounded set).
    #[arg(long)]
    pub spectral: Option<PathBuf>,
}
