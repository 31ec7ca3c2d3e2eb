use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

/// Relativistic Heisenberg uncertainty bound for Dirac electrons.
#[derive(Debug, Parser)]
#[command(name = "relhur", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format. Single points default to JSON, curves to CSV, `verify` to a text table.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the document to this path instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound γ(d) at a single relativistic scale.
    Bound(BoundArgs),
    /// Bound curve γ(d) on a grid of scales.
    Sweep(SweepArgs),
    /// Uncertainty product of the hydrogen-like ground state.
    Hydrogen(HydrogenArgs),
    /// Uncertainty product of the Dirac hopfion.
    Hopfion(HopfionArgs),
    /// Run the built-in anchor checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("scale").required(true).args(["d", "d_inf"])))]
pub struct BoundArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Ultrarelativistic limit d = ∞.
    #[arg(long)]
    pub d_inf: bool,
    /// Requested accuracy of γ (at least 1e-8).
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub d_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub d_max: f64,
    #[arg(long)]
    pub points: usize,
    /// Space the points logarithmically.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct HydrogenArgs {
    /// Nuclear charge.
    #[arg(long = "Z", visible_alias = "z")]
    pub z: u32,
    /// Fine-structure constant.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Also integrate the dispersions of the ground state numerically.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["a", "a_min"])))]
pub struct HopfionArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["a_max", "points"])]
    pub a_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "a_min")]
    pub a_max: Option<f64>,
    #[arg(long, requires = "a_min")]
    pub points: Option<usize>,
    #[arg(long, requires = "a_min")]
    pub log: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Also run the cross-checks between the numerical oracles and the printed closed forms.
    #[arg(long)]
    pub strict: bool,
}
