//! Shift frames, the fundamental system `F_κ`, `Φ_κ`, boundary traces and the
//! `α ↔ β` reparametrisation of the self-adjoint extensions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::SampledFunction;
use crate::params::{CoulombParams, ExtendedReal};
use crate::specfun::{gamma, whittaker, whittaker_w};
use crate::spectra::f_nu_kappa;

/// Default relative tolerance of [`in_extension_domain`].
pub const DOMAIN_TOL: f64 = 1e-6;
/// Absolute floor added to the scale of the boundary condition check.
pub const EPS_FLOOR: f64 = 1e-12;

/// A choice of spectral shift `−η` with `η = ν²/(4κ²)`.
///
/// `κ` has the opposite sign of `ν` and lies in `(−∞,0) ∪ (0,1)`; then
/// `λ = −ν/κ > 0` is the scale of the Whittaker variable `ρ = λr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftFrame {
    pub nu: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub eta: f64,
}

impl ShiftFrame {
    pub fn new(nu: f64, kappa: f64) -> Result<Self> {
        if nu == 0.0 || !nu.is_finite() {
            return Err(Error::Parameter(format!("nu must be finite and non-zero, got {nu}")));
        }
        if !kappa.is_finite() || kappa == 0.0 || kappa >= 1.0 {
            return Err(Error::Parameter(format!(
                "kappa must lie in (-inf,0) or (0,1), got {kappa}"
            )));
        }
        if kappa.signum() == nu.signum() {
            return Err(Error::Parameter(format!(
                "kappa must have the opposite sign of nu (nu = {nu}, kappa = {kappa})"
            )));
        }
        Ok(Self {
            nu,
            kappa,
            lambda: -nu / kappa,
            eta: nu * nu / (4.0 * kappa * kappa),
        })
    }

    /// `Γ(1−κ)`, positive for every admissible κ.
    pub fn gamma_1mk(&self) -> f64 {
        gamma(1.0 - self.kappa).expect("1 - kappa > 0")
    }

    /// `W = Φ F' − F Φ' = λ/Γ(1−κ)`.
    pub fn wronskian(&self) -> f64 {
        self.lambda / self.gamma_1mk()
    }

    /// The spectral parameter `−η` at which the resolvents are taken.
    pub fn energy(&self) -> f64 {
        -self.eta
    }
}

/// Same as [`ShiftFrame::new`].
pub fn make_frame(nu: f64, kappa: f64) -> Result<ShiftFrame> {
    ShiftFrame::new(nu, kappa)
}

/// Same as [`ShiftFrame::wronskian`].
pub fn wronskian(frame: &ShiftFrame) -> f64 {
    frame.wronskian()
}

/// `F_κ(r) = 𝓜(λr)`, `Φ_κ(r) = 𝓦(λr)` and their r-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSystem {
    pub f: f64,
    pub phi: f64,
    pub f_prime: f64,
    pub phi_prime: f64,
}

impl FundamentalSystem {
    pub fn wronskian(&self) -> f64 {
        self.phi * self.f_prime - self.f * self.phi_prime
    }
}

pub fn fundamental_system(frame: &ShiftFrame, r: f64) -> Result<FundamentalSystem> {
    let p = whittaker(frame.kappa, frame.lambda * r)?;
    Ok(FundamentalSystem {
        f: p.m,
        phi: p.w,
        f_prime: frame.lambda * p.m_prime,
        phi_prime: frame.lambda * p.w_prime,
    })
}

/// `Φ_κ(r)` alone.
pub fn phi(frame: &ShiftFrame, r: f64) -> Result<f64> {
    Ok(whittaker_w(frame.kappa, frame.lambda * r)?.0)
}

/// Coefficients of `g(r) = g₀(1 + νr ln r) + g₁r + o(r)` as `r → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub g0: f64,
    pub g1: f64,
}

impl BoundaryTrace {
    pub fn is_trace_free(&self, tol: f64) -> bool {
        self.g0.abs() <= tol && self.g1.abs() <= tol
    }
}

impl std::ops::Add for BoundaryTrace {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            g0: self.g0 + o.g0,
            g1: self.g1 + o.g1,
        }
    }
}

impl std::ops::Mul<BoundaryTrace> for f64 {
    type Output = BoundaryTrace;
    fn mul(self, t: BoundaryTrace) -> BoundaryTrace {
        BoundaryTrace {
            g0: self * t.g0,
            g1: self * t.g1,
        }
    }
}

/// A trace together with the quality of the fit it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceFit {
    pub trace: BoundaryTrace,
    /// Coefficient of `r²` in the fitted model.
    pub b2: f64,
    /// RMS misfit relative to the largest sample in the window.
    pub rel_residual: f64,
    pub samples: usize,
}

/// Relative misfit above which a function is reported as not having the
/// adjoint-domain expansion at the origin.
pub const TRACE_FIT_TOL: f64 = 1e-9;

/// Sampling window for traces of closed-form functions.
pub const TRACE_WINDOW: (f64, f64) = (1e-6, 1e-5);

/// Extracts `(g₀, g₁)` from samples that reach down to `r ≤ 1e−4`.
///
/// The samples in the lowest decade are fitted by least squares to
/// `g₀·(1 + νr ln r + ν²r² ln r/2) + g₁r + b₂r²`. The `r² ln r` coefficient
/// is forced by the equation `−g'' + νg/r = f` for any `f` bounded at the
/// origin, so it is tied to `g₀` rather than fitted.
pub fn boundary_trace_fit(g: &SampledFunction, nu: f64) -> Result<TraceFit> {
    let r_first = g
        .r
        .iter()
        .copied()
        .find(|&r| r > 0.0)
        .ok_or_else(|| Error::Parameter("no positive sample radius".into()))?;
    if r_first > 1e-4 {
        return Err(Error::Parameter(format!(
            "samples must reach r <= 1e-4 for a trace fit, smallest is {r_first}"
        )));
    }
    let window: Vec<(f64, f64)> = g
        .r
        .iter()
        .zip(&g.values)
        .filter(|(&r, _)| r > 0.0 && r <= 10.0 * r_first * (1.0 + 1e-12))
        .map(|(&r, &v)| (r, v))
        .collect();
    if window.len() < 6 {
        return Err(Error::Parameter(format!(
            "need at least 6 samples in the lowest decade, got {}",
            window.len()
        )));
    }
    let r_top = window.iter().map(|p| p.0).fold(0.0, f64::max);
    let n = window.len();
    // Columns scaled by their size at r_top to keep the system well conditioned.
    let s1 = r_top;
    let s2 = r_top * r_top;
    let mut a = DMatrix::<f64>::zeros(n, 3);
    let mut b = DVector::<f64>::zeros(n);
    for (i, &(r, v)) in window.iter().enumerate() {
        let lr = r.ln();
        a[(i, 0)] = 1.0 + nu * r * lr + 0.5 * nu * nu * r * r * lr;
        a[(i, 1)] = r / s1;
        a[(i, 2)] = r * r / s2;
        b[i] = v;
    }
    let qr = a.clone().qr();
    let rhs = qr.q().transpose() * &b;
    let x = qr
        .r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| Error::Oracle("singular trace fit".into()))?;
    let fit = &a * &x;
    let scale = window.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let rms = ((&fit - &b).norm_squared() / n as f64).sqrt();
    let rel_residual = if scale > 0.0 { rms / scale } else { rms };
    Ok(TraceFit {
        trace: BoundaryTrace {
            g0: x[0],
            g1: x[1] / s1,
        },
        b2: x[2] / s2,
        rel_residual,
        samples: n,
    })
}

/// Like [`boundary_trace_fit`], but a misfit above [`TRACE_FIT_TOL`] is an
/// error: the samples do not behave like an adjoint-domain element at 0.
pub fn boundary_trace(g: &SampledFunction, nu: f64) -> Result<BoundaryTrace> {
    let fit = boundary_trace_fit(g, nu)?;
    if fit.rel_residual > TRACE_FIT_TOL {
        return Err(Error::NotInAdjointDomain {
            residual: fit.rel_residual,
            tolerance: TRACE_FIT_TOL,
        });
    }
    Ok(fit.trace)
}

/// Samples `g` on the default geometric window near the origin.
pub fn sample_near_origin(g: impl Fn(f64) -> Result<f64>) -> Result<SampledFunction> {
    let (lo, hi) = TRACE_WINDOW;
    let n = 41;
    let r: Vec<f64> = (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect();
    let values = r.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
    SampledFunction::new(r, values)
}

/// Trace of a function given in closed form.
pub fn trace_of(g: impl Fn(f64) -> Result<f64>, nu: f64) -> Result<TraceFit> {
    boundary_trace_fit(&sample_near_origin(g)?, nu)
}

/// Coefficients `c = Γ(1−κ)‖Φ_κ‖²` and `d = 4π𝔉_{ν,κ}/Γ(1−κ)` of the
/// boundary behaviour `g₁/g₀ = Γ(1−κ)(cβ + d)` of `βΨ_κ + Φ_κ`.
pub fn classification_coeffs(frame: &ShiftFrame, phi_norm_sq: f64) -> Result<(f64, f64)> {
    let g = frame.gamma_1mk();
    let c = g * phi_norm_sq;
    let d = 4.0 * PI * f_nu_kappa(frame)? / g;
    Ok((c, d))
}

/// `α = 𝔉_{ν,κ} + Γ(1−κ)²‖Φ_κ‖² β/(4π)`, i.e. `Γ(1−κ)(cβ+d)/(4π)`.
pub fn alpha_from_beta(beta: ExtendedReal, frame: &ShiftFrame, phi_norm_sq: f64) -> Result<ExtendedReal> {
    match beta {
        ExtendedReal::Infinite => Ok(ExtendedReal::Infinite),
        ExtendedReal::Finite(b) => {
            let g = frame.gamma_1mk();
            Ok(ExtendedReal::Finite(
                f_nu_kappa(frame)? + g * g * phi_norm_sq * b / (4.0 * PI),
            ))
        }
    }
}

/// Inverse of [`alpha_from_beta`]; `α = 𝔉_{ν,κ}` maps to `β = 0` exactly.
pub fn beta_from_alpha(alpha: ExtendedReal, frame: &ShiftFrame, phi_norm_sq: f64) -> Result<ExtendedReal> {
    match alpha {
        ExtendedReal::Infinite => Ok(ExtendedReal::Infinite),
        ExtendedReal::Finite(a) => {
            let g = frame.gamma_1mk();
            Ok(ExtendedReal::Finite(
                4.0 * PI * (a - f_nu_kappa(frame)?) / (g * g * phi_norm_sq),
            ))
        }
    }
}

/// An extension labelled by its frame-dependent parameter `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionBeta {
    pub beta: ExtendedReal,
    pub frame: ShiftFrame,
}

impl ExtensionBeta {
    pub fn from_alpha(alpha: ExtendedReal, frame: ShiftFrame, phi_norm_sq: f64) -> Result<Self> {
        Ok(Self {
            beta: beta_from_alpha(alpha, &frame, phi_norm_sq)?,
            frame,
        })
    }

    pub fn alpha(&self, phi_norm_sq: f64) -> Result<ExtendedReal> {
        alpha_from_beta(self.beta, &self.frame, phi_norm_sq)
    }
}

/// `(|g₁ − 4παg₀|, scale)` for finite α, `(|g₀|, scale)` for α = ∞.
///
/// The scale is `|g₁| + (4π|α| + |ν|)|g₀| + ε_floor`. The `|ν||g₀|` term is
/// the size of the `νr ln r` part of the expansion; without it the check
/// degenerates at `α = 0`, where `g₁` itself is the quantity tested.
pub fn extension_violation(trace: &BoundaryTrace, params: &CoulombParams) -> (f64, f64) {
    match params.alpha {
        ExtendedReal::Finite(alpha) => {
            let viol = (trace.g1 - 4.0 * PI * alpha * trace.g0).abs();
            let scale = trace.g1.abs() + (4.0 * PI * alpha.abs() + params.nu.abs()) * trace.g0.abs() + EPS_FLOOR;
            (viol, scale)
        }
        ExtendedReal::Infinite => (trace.g0.abs(), trace.g1.abs() + EPS_FLOOR),
    }
}

/// Whether a trace satisfies `g₁ = 4παg₀` (or `g₀ = 0` for α = ∞) to `tol`.
pub fn in_extension_domain(trace: &BoundaryTrace, params: &CoulombParams, tol: f64) -> bool {
    let (viol, scale) = extension_violation(trace, params);
    viol <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn frames() {
        let f = make_frame(-1.0, 0.5).unwrap();
        assert_eq!((f.lambda, f.eta), (2.0, 1.0));
        let f = make_frame(1.0, -0.5).unwrap();
        assert_eq!((f.lambda, f.eta), (2.0, 1.0));
        assert!(make_frame(-1.0, 1.5).is_err());
        assert!(make_frame(-1.0, -0.5).is_err());
        assert!(make_frame(0.0, 0.5).is_err());
    }

    #[test]
    fn wronskian_values() {
        let f = make_frame(-1.0, 0.5).unwrap();
        assert_relative_eq!(wronskian(&f), std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-14);
        let f = make_frame(1.0, -1.0).unwrap();
        assert_relative_eq!(wronskian(&f), 1.0, max_relative = 1e-14);
        for (nu, kappa) in [(-1.0, 0.5), (1.0, -1.0), (-2.0, 0.3), (3.0, -2.5)] {
            let f = make_frame(nu, kappa).unwrap();
            let w: Vec<f64> = [0.05, 0.5, 1.0, 5.0, 20.0]
                .iter()
                .map(|&r| fundamental_system(&f, r).unwrap().wronskian())
                .collect();
            let (lo, hi) = w.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            assert!(hi - lo <= 1e-8 * f.wronskian().abs());
            assert_relative_eq!(w[2], f.wronskian(), max_relative = 1e-9);
        }
    }

    #[test]
    fn fundamental_system_near_zero() {
        let f = make_frame(-1.0, 0.5).unwrap();
        let s = fundamental_system(&f, 1e-9).unwrap();
        assert_relative_eq!(s.phi, 0.564_189_583_547_756_3, max_relative = 1e-7);
        assert_relative_eq!(s.f / 1e-9, 2.0, max_relative = 1e-7);
    }

    #[test]
    fn trace_of_linear_function() {
        let t = trace_of(Ok, -1.0).unwrap();
        assert!(t.trace.g0.abs() < 1e-14);
        assert_relative_eq!(t.trace.g1, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn trace_of_phi() {
        let f = make_frame(-1.0, 0.5).unwrap();
        let t = trace_of(|r| phi(&f, r), f.nu).unwrap();
        let g = f.gamma_1mk();
        assert_relative_eq!(t.trace.g0, 1.0 / g, max_relative = 1e-10);
        let (_, d) = classification_coeffs(&f, 1.0).unwrap();
        assert_relative_eq!(t.trace.g1 / t.trace.g0, d * g, max_relative = 1e-8);
        assert!(t.rel_residual < 1e-12);
    }

    #[test]
    fn trace_rejects_wrong_behaviour() {
        // r^{1/2} has no expansion of the required form
        let s = sample_near_origin(|r| Ok(r.sqrt())).unwrap();
        assert!(matches!(boundary_trace(&s, -1.0), Err(Error::NotInAdjointDomain { .. })));
    }

    #[test]
    fn coefficient_values() {
        // ‖Φ‖² for ν=−1, κ=0.5 from a 50-digit quadrature
        let f = make_frame(-1.0, 0.5).unwrap();
        let (c, d) = classification_coeffs(&f, 0.711_008_967_882_514_8).unwrap();
        assert_relative_eq!(d, 0.065_407_353_539_379_9, max_relative = 1e-13);
        assert!(c > 0.0);
    }

    #[test]
    fn alpha_beta_maps() {
        let f = make_frame(-1.0, 0.5).unwrap();
        let n2 = 0.711_008_967_882_514_8;
        assert_eq!(alpha_from_beta(ExtendedReal::Infinite, &f, n2).unwrap(), ExtendedReal::Infinite);
        assert_eq!(beta_from_alpha(ExtendedReal::Infinite, &f, n2).unwrap(), ExtendedReal::Infinite);
        for b in [-3.0, 0.0, 7.0] {
            let a = alpha_from_beta(ExtendedReal::Finite(b), &f, n2).unwrap();
            let back = beta_from_alpha(a, &f, n2).unwrap().finite().unwrap();
            assert!((back - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
        let fk = f_nu_kappa(&f).unwrap();
        assert_eq!(beta_from_alpha(ExtendedReal::Finite(fk), &f, n2).unwrap(), ExtendedReal::Finite(0.0));
        let b0 = beta_from_alpha(ExtendedReal::Finite(0.0), &f, n2).unwrap().finite().unwrap();
        assert_relative_eq!(b0, -0.051_901_100_016_000_39, max_relative = 1e-12);
        // the α = Γ(cβ+d)/4π form
        let (c, d) = classification_coeffs(&f, n2).unwrap();
        let a = alpha_from_beta(ExtendedReal::Finite(1.0), &f, n2).unwrap().finite().unwrap();
        assert_relative_eq!(a, f.gamma_1mk() * (c + d) / (4.0 * PI), max_relative = 1e-13);
    }

    #[test]
    fn extension_membership() {
        let p0 = CoulombParams::new(-1.0, 0.0).unwrap();
        let lin = BoundaryTrace { g0: 0.0, g1: 1.0 };
        assert!(!in_extension_domain(&lin, &p0, DOMAIN_TOL));
        let pinf = CoulombParams::friedrichs(-1.0).unwrap();
        assert!(in_extension_domain(&lin, &pinf, DOMAIN_TOL));
        let f = make_frame(-1.0, 0.5).unwrap();
        let t = trace_of(|r| phi(&f, r), f.nu).unwrap().trace;
        let p = CoulombParams::new(-1.0, t.g1 / (4.0 * PI * t.g0)).unwrap();
        assert!(in_extension_domain(&t, &p, DOMAIN_TOL));
    }
}
