use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coulomb_core::ExtendedReal;

use crate::config::{KernelWhich, OutputFormat, RunConfig};
use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "coulomb", version, about = "Eigenvalues and resolvents of -d²/dr² + ν/r with a point interaction at the origin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Coulomb coupling ν (non-zero; negative is attractive).
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Extension parameter α, a real number or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Number of eigenvalues for ν < 0.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Root-finding tolerance on the spectral function.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negative eigenvalues of one extension.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalue curves over a grid of α, long format (alpha, n, E).
    Fibration {
        #[command(flatten)]
        common: Common,
        /// `lo:hi:count`.
        #[arg(long, allow_hyphen_values = true)]
        alpha_grid: Option<String>,
    },
    /// The spectral function on an energy grid, skipping its poles.
    SpectralFunction {
        #[command(flatten)]
        common: Common,
        /// `lo:hi:count` or `lo:hi:count:log`, energies below zero.
        #[arg(long, allow_hyphen_values = true)]
        e_grid: Option<String>,
    },
    /// One resolvent kernel value at energy −η(κ).
    Kernel {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, value_enum)]
        which: Option<KernelWhich>,
    },
    /// Cross-checks of the solver against the independent oracles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Shift added to the digamma function inside the spectral solver.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb_digamma: Option<f64>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Spectrum { common }
            | Command::Fibration { common, .. }
            | Command::SpectralFunction { common, .. }
            | Command::Kernel { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

impl Cli {
    /// Merged configuration (file, then flags) and the command.
    pub fn into_config(self) -> CliResult<(RunConfig, Command)> {
        let c = self.command.common().clone();
        let base = match &c.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let alpha = c
            .alpha
            .as_deref()
            .map(|s| s.parse::<ExtendedReal>())
            .transpose()
            .map_err(|e| CliError::Input(e.to_string()))?;
        let mut top = RunConfig {
            nu: c.nu,
            alpha,
            n_max: c.n_max,
            tol: c.tol,
            out: c.out,
            format: c.format,
            ..Default::default()
        };
        match &self.command {
            Command::Fibration { alpha_grid, .. } => top.alpha_grid = alpha_grid.clone(),
            Command::SpectralFunction { e_grid, .. } => top.e_grid = e_grid.clone(),
            Command::Kernel { kappa, r, rho, which, .. } => {
                top.kappa = *kappa;
                top.r = *r;
                top.rho = *rho;
                top.which = *which;
            }
            _ => {}
        }
        Ok((base.overlay(top), self.command))
    }
}
