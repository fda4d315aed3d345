use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::Overrides;

#[derive(Debug, Parser)]
#[command(
    name = "dirac-delay",
    version,
    about = "Spectral experiments for Dirac operators with a constant delay"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Δ₁, Δ₂ of a potential on a real λ-grid
    Forward,
    /// Both spectra of a potential up to |n| = N
    Spectra,
    /// Potentials on [a, π] from two spectra and the known window
    Invert,
    /// Spectra and reconstruction over the N ladder, scored against the input
    Roundtrip,
    /// Closed form against the direct solution at random λ
    OracleCheck,
}

/// Flags override the values of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    #[arg(long, global = true)]
    pub m_pot: Option<usize>,
    #[arg(long, global = true)]
    pub m_aux: Option<usize>,
    /// P0, P1, P2 or a potential CSV
    #[arg(long, global = true)]
    pub potential: Option<String>,
    #[arg(long, global = true)]
    pub spectra: Option<PathBuf>,
    #[arg(long, global = true)]
    pub known: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_step: Option<f64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Comma-separated truncation orders for roundtrip
    #[arg(long, global = true, value_delimiter = ',')]
    pub ladder: Option<Vec<usize>>,
    /// JSON experiment configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            a: self.a,
            nmax: self.nmax,
            m_pot: self.m_pot,
            m_aux: self.m_aux,
            potential: self.potential.clone(),
            spectra: self.spectra.clone(),
            known: self.known.clone(),
            out: self.out.clone(),
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            lambda_step: self.lambda_step,
            tolerance: self.tolerance,
            ladder: self.ladder.clone(),
        }
    }
}
