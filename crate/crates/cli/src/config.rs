use std::path::{Path, PathBuf};

use coulomb_core::ExtendedReal;
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelWhich {
    /// Half-line kernel.
    #[default]
    Radial,
    /// s-wave kernel of the three-dimensional operator.
    #[value(name = "3d")]
    #[serde(rename = "3d")]
    ThreeD,
}

/// All settings of one run. A config file is this struct as JSON (keys as the
/// flags, `-` or `_` both accepted); flags override the file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub nu: Option<f64>,
    pub alpha: Option<ExtendedReal>,
    pub kappa: Option<f64>,
    #[serde(alias = "n-max")]
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    #[serde(alias = "alpha-grid")]
    pub alpha_grid: Option<String>,
    #[serde(alias = "e-grid")]
    pub e_grid: Option<String>,
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub which: Option<KernelWhich>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; nu, alpha, kappa, n_max, tol, out, format, alpha_grid, e_grid, r, rho, which)
    }

    pub fn nu(&self) -> CliResult<f64> {
        let nu = self.nu.ok_or_else(|| CliError::Input("--nu is required".into()))?;
        if nu == 0.0 || !nu.is_finite() {
            return Err(CliError::Input(format!("nu must be finite and non-zero, got {nu}")));
        }
        Ok(nu)
    }

    pub fn alpha_or(&self, default: ExtendedReal) -> ExtendedReal {
        self.alpha.unwrap_or(default)
    }

    pub fn n_max(&self) -> CliResult<usize> {
        let n = self.n_max.unwrap_or(coulomb_core::spectra::DEFAULT_N_MAX);
        if n == 0 {
            return Err(CliError::Input("--n-max must be at least 1".into()));
        }
        Ok(n)
    }

    pub fn tol(&self) -> CliResult<f64> {
        let t = self.tol.unwrap_or(coulomb_core::spectra::DEFAULT_TOL);
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Input(format!("--tol must lie in (0, 1), got {t}")));
        }
        Ok(t)
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }

    pub fn required(&self, v: Option<f64>, flag: &str) -> CliResult<f64> {
        v.ok_or_else(|| CliError::Input(format!("--{flag} is required")))
    }
}

/// `lo:hi:count` (linear) or `lo:hi:count:log` (geometric in |x|).
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Input(format!("bad grid '{spec}': {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if !(parts.len() == 3 || parts.len() == 4) {
        return Err(bad("expected lo:hi:count or lo:hi:count:log"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad("lo is not a number"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad("hi is not a number"))?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad("count is not a positive integer"))?;
    let log = match parts.get(3).map(|s| s.trim()) {
        None | Some("lin") => false,
        Some("log") => true,
        Some(_) => return Err(bad("fourth field must be 'log' or 'lin'")),
    };
    if count == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad("need finite bounds and count >= 1"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    if log && !(lo * hi > 0.0) {
        return Err(bad("a log grid needs bounds of one sign, both non-zero"));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / last;
            if log {
                lo.signum() * (lo.abs().ln() + t * (hi.abs().ln() - lo.abs().ln())).exp()
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect())
}
