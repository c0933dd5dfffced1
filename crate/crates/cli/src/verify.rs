//! The `verify` battery: spectral solver against the oracles, plus the
//! Wronskian and Green-identity self-checks, on one parameter set.

use coulomb_core::greens::green_identity_check;
use coulomb_core::oracle::{shoot_eigenvalue, verify_eigenfunction, ShootingConfig};
use coulomb_core::radial::{fundamental_system, ShiftFrame};
use coulomb_core::spectra::{assemble_spectrum, assemble_spectrum_with, f_nu_kappa_raw, friedrichs_level, SpectralEquation};
use coulomb_core::{CoulombParams, ExtendedReal, SpectralPoint};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{CliError, CliResult, Rendered};

const DEFAULT_NU: f64 = -1.0;
const DEFAULT_ALPHA: f64 = 0.0;
const DEFAULT_LEVELS: usize = 3;
const ORACLE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub nu: f64,
    pub alpha: ExtendedReal,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: &'static str, result: CliResult<(bool, String)>) -> Check {
    match result {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Runs every check; `psi_offset` perturbs the solver's digamma (test hook).
pub fn run_battery(nu: f64, alpha: ExtendedReal, levels: usize, tol: f64, psi_offset: f64) -> CliResult<VerifyReport> {
    let params = CoulombParams::new(nu, alpha)?;
    let eq = SpectralEquation::new(nu)?.with_psi_offset(psi_offset);
    let roots: CliResult<Vec<SpectralPoint>> = assemble_spectrum_with(&eq, &params, levels, tol)
        .map(|r| r.points)
        .map_err(CliError::from);

    let mut checks = Vec::new();

    checks.push(check("friedrichs_levels", (|| {
        if nu > 0.0 {
            return Ok((true, "no bound states for nu > 0".into()));
        }
        let rep = assemble_spectrum(&CoulombParams::friedrichs(nu)?, levels, tol)?;
        let worst = rep
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.e - friedrichs_level(nu, i + 1)).abs())
            .fold(0.0, f64::max);
        Ok((worst <= 1e-10, format!("max |E_n - (-nu^2/4n^2)| = {worst:e}")))
    })()));

    checks.push(check("oracle_agreement", (|| {
        let roots = roots.as_ref().map_err(|e| CliError::Solver(e.to_string()))?;
        let mut worst = 0.0f64;
        for p in roots {
            // the solver's bracket holds exactly this root; the ground state's
            // lower end is unbounded, so cap it
            let lo = p.bracket.0.max(4.0 * p.e);
            let hi = if p.bracket.1 > p.e { p.bracket.1 } else { 0.25 * p.e };
            let shot = match alpha {
                ExtendedReal::Infinite => shoot_eigenvalue(&params, (1.1 * p.e, 0.9 * p.e), &ShootingConfig::default())?,
                _ => shoot_eigenvalue(&params, (lo, hi), &ShootingConfig::default())?,
            };
            worst = worst.max(((shot - p.e) / p.e).abs());
        }
        Ok((worst <= ORACLE_REL_TOL, format!("{} roots, max relative deviation from shooting {worst:e}", roots.len())))
    })()));

    checks.push(check("krein_pole", (|| {
        let roots = roots.as_ref().map_err(|e| CliError::Solver(e.to_string()))?;
        let Some(a) = alpha.finite() else {
            return Ok((true, "alpha = inf: poles are the Friedrichs levels".into()));
        };
        let mut worst = 0.0f64;
        for p in roots {
            let kappa = -nu / (2.0 * (-p.e).sqrt());
            worst = worst.max((f_nu_kappa_raw(nu, kappa)? - a).abs());
        }
        Ok((worst <= 10.0 * tol, format!("max |F(nu, kappa(E)) - alpha| = {worst:e}")))
    })()));

    checks.push(check("boundary_conditions", (|| {
        let roots = roots.as_ref().map_err(|e| CliError::Solver(e.to_string()))?;
        let mut worst = 0.0f64;
        let mut ok = true;
        for p in roots {
            let rep = verify_eigenfunction(&params, p.e)?;
            ok &= rep.passes;
            worst = worst.max(rep.violation / rep.scale);
        }
        Ok((ok, format!("max relative boundary violation {worst:e}")))
    })()));

    let frame = ShiftFrame::new(nu, -0.5 * nu.signum())?;

    checks.push(check("wronskian", (|| {
        let w = frame.wronskian();
        let mut worst = 0.0f64;
        for i in 0..20 {
            let r = 0.01 * 1.5f64.powi(i) / frame.lambda;
            worst = worst.max(((fundamental_system(&frame, r)?.wronskian() - w) / w).abs());
        }
        Ok((worst <= 1e-9, format!("max relative Wronskian drift {worst:e}")))
    })()));

    checks.push(check("green_identity", (|| {
        let bump = |r: f64| Ok((-4.0 * (r - 2.0) * (r - 2.0)).exp());
        let res = green_identity_check(&frame, bump, 0.5, 8.0, 0.02)?;
        Ok((res <= 1e-6, format!("discrete L2 residual {res:e}")))
    })()));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        nu,
        alpha,
        passed,
        checks,
    })
}

pub fn cmd_verify(cfg: &RunConfig, psi_offset: f64) -> CliResult<Rendered> {
    let nu = match cfg.nu {
        Some(_) => cfg.nu()?,
        None => DEFAULT_NU,
    };
    let alpha = cfg.alpha_or(ExtendedReal::Finite(DEFAULT_ALPHA));
    let levels = cfg.n_max.map(|_| cfg.n_max()).transpose()?.unwrap_or(DEFAULT_LEVELS);
    let report = run_battery(nu, alpha, levels, cfg.tol()?, psi_offset)?;
    let mut body = serde_json::to_string_pretty(&report).expect("report serialises");
    body.push('\n');
    if !report.passed {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        // the report still goes out before the failure is signalled
        let rendered = Rendered {
            body,
            warnings: Vec::new(),
        };
        if let Some(path) = &cfg.out {
            std::fs::write(path, &rendered.body)?;
        } else {
            print!("{}", rendered.body);
        }
        return Err(CliError::Verify(failed.join(", ")));
    }
    Ok(Rendered {
        body,
        warnings: Vec::new(),
    })
}
