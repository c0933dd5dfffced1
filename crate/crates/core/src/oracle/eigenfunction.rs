//! Direct check of a claimed eigenvalue: build the decaying solution at that
//! energy, read off its boundary trace and test the boundary condition.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CoulombParams, ExtendedReal};
use crate::radial::{boundary_trace_fit, extension_violation, sample_near_origin, BoundaryTrace, DOMAIN_TOL};
use crate::specfun::whittaker_w;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionReport {
    pub e: f64,
    /// `θ = −ν/(2√|E|)`.
    pub theta: f64,
    pub trace: BoundaryTrace,
    /// Relative misfit of the trace model near 0.
    pub trace_residual: f64,
    /// `|g₁ − 4παg₀|`, or `|g₀|` for α = ∞.
    pub violation: f64,
    pub scale: f64,
    /// `|g₁/(4πg₀) − α|` for finite α; infinite when `g₀ = 0`.
    pub margin: f64,
    /// Max over `[0.5, 5]` of the ODE residual relative to `max |(ν/r − E)g|`.
    pub ode_residual: f64,
    pub passes: bool,
}

/// Builds `g(r) = 𝓦_{θ,1/2}(2√|E| r)` and reports how well it satisfies the
/// boundary condition of `H_α` and the radial equation at energy `E`.
pub fn verify_eigenfunction(params: &CoulombParams, e: f64) -> Result<EigenfunctionReport> {
    if !(e < 0.0 && e.is_finite()) {
        return Err(Error::Parameter(format!("claimed eigenvalue must be negative, got {e}")));
    }
    let nu = params.nu;
    let k = (-e).sqrt();
    let theta = -nu / (2.0 * k);
    let g = |r: f64| Ok(whittaker_w(theta, 2.0 * k * r)?.0);
    let fit = boundary_trace_fit(&sample_near_origin(g)?, nu)?;
    let trace = fit.trace;
    let (violation, scale) = extension_violation(&trace, params);
    let margin = match params.alpha {
        ExtendedReal::Finite(a) if trace.g0 != 0.0 => (trace.g1 / (4.0 * PI * trace.g0) - a).abs(),
        ExtendedReal::Finite(_) => f64::INFINITY,
        ExtendedReal::Infinite => trace.g0.abs() / (trace.g1.abs() + f64::MIN_POSITIVE),
    };

    let h = 1e-3;
    let mut worst = 0.0f64;
    let mut size = 0.0f64;
    for i in 0..=45 {
        let r = 0.5 + 0.1 * i as f64;
        let v = [g(r - 2.0 * h)?, g(r - h)?, g(r)?, g(r + h)?, g(r + 2.0 * h)?];
        let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
        let pot = (nu / r - e) * v[2];
        worst = worst.max((pot - d2).abs());
        size = size.max(pot.abs());
    }
    let ode_residual = worst / size.max(f64::MIN_POSITIVE);

    Ok(EigenfunctionReport {
        e,
        theta,
        trace,
        trace_residual: fit.rel_residual,
        violation,
        scale,
        margin,
        ode_residual,
        passes: violation <= DOMAIN_TOL * scale,
    })
}
