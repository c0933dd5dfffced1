//! The spectral function `𝔉_ν(E)` and the negative eigenvalues of `H_α`.
//!
//! Everything is evaluated in `s = −ν/(2√|E|)`, where the Friedrichs levels
//! `E_n = −ν²/(4n²)` sit at the integers. In that variable
//!
//! ```text
//! 𝔉(s) = (ν/4π) (ψ(1−s) + ln(−ν/s) + 2γ − 1 + 1/(2s))
//! ```
//!
//! which is also `𝔉_{ν,κ}` at `κ = s`. For `ν < 0`, `s > 0` and `𝔉` increases
//! from `−∞` to `+∞` on each interval `(n−1, n)`; the root there is labelled
//! `n`, so that `E_n^{(ν,α)} ∈ (E_{n−1}, E_n)` with `E_0 = −∞`. For `ν > 0`,
//! `s < 0` and `𝔉` rises monotonically in `E` to the threshold `α_ν`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::params::{CoulombParams, ExtendedReal};
use crate::radial::ShiftFrame;
use crate::specfun::{digamma, EULER_GAMMA};

/// Default bound on `|𝔉_ν(E) − α|` at a returned root.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default number of roots requested for `ν < 0`.
pub const DEFAULT_N_MAX: usize = 20;
/// Distance in `s` kept from the poles when bracketing.
pub const POLE_OFFSET: f64 = 1e-9;

const POLE_OFFSET_FALLBACKS: [f64; 3] = [POLE_OFFSET, 1e-12, 1e-15];

/// `𝔉` with an optional additive perturbation of ψ.
///
/// The perturbation exists only so that the verification battery can check
/// that it notices a wrong digamma; everything public uses zero.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEquation {
    pub nu: f64,
    pub psi_offset: f64,
}

impl SpectralEquation {
    pub fn new(nu: f64) -> Result<Self> {
        if nu == 0.0 || !nu.is_finite() {
            return Err(Error::Parameter(format!("nu must be finite and non-zero, got {nu}")));
        }
        Ok(Self { nu, psi_offset: 0.0 })
    }

    pub fn with_psi_offset(mut self, offset: f64) -> Self {
        self.psi_offset = offset;
        self
    }

    /// `𝔉` as a function of `s = −ν/(2√|E|)`.
    pub fn eval_s(&self, s: f64) -> Result<f64> {
        let nu = self.nu;
        if s == 0.0 || s.signum() == nu.signum() || !s.is_finite() {
            return Err(domain(
                "spectral_function",
                format!("s = {s} is not admissible for nu = {nu}"),
            ));
        }
        let psi = digamma(1.0 - s)? + self.psi_offset;
        Ok(nu / (4.0 * PI) * (psi + (-nu / s).ln() + 2.0 * EULER_GAMMA - 1.0 + 0.5 / s))
    }

    pub fn eval_e(&self, e: f64) -> Result<f64> {
        if !(e < 0.0) {
            return Err(domain("spectral_function", format!("E must be negative, got {e}")));
        }
        self.eval_s(s_from_energy(self.nu, e))
    }
}

/// `s = −ν/(2√|E|)`.
pub fn s_from_energy(nu: f64, e: f64) -> f64 {
    -nu / (2.0 * e.abs().sqrt())
}

/// `E = −ν²/(4s²)`.
pub fn energy_from_s(nu: f64, s: f64) -> f64 {
    -nu * nu / (4.0 * s * s)
}

/// The Friedrichs level `E_n = −ν²/(4n²)`.
pub fn friedrichs_level(nu: f64, n: usize) -> f64 {
    energy_from_s(nu, n as f64)
}

/// `𝔉_ν(E)` for `E < 0`; a pole error at the Friedrichs levels when `ν < 0`.
pub fn spectral_function(nu: f64, e: f64) -> Result<f64> {
    SpectralEquation::new(nu)?.eval_e(e)
}

/// `𝔉_{ν,κ}` of a shift frame.
pub fn f_nu_kappa(frame: &ShiftFrame) -> Result<f64> {
    f_nu_kappa_raw(frame.nu, frame.kappa)
}

/// `𝔉_{ν,κ}` without the frame restriction `κ < 1`, as needed when `κ` is
/// read off an eigenvalue.
pub fn f_nu_kappa_raw(nu: f64, kappa: f64) -> Result<f64> {
    SpectralEquation::new(nu)?.eval_s(kappa)
}

/// `α_ν = (ν/4π)(ln ν + 2γ − 1)`, the limit of `𝔉_ν(E)` as `E → 0⁻` for `ν > 0`.
pub fn alpha_threshold(nu: f64) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(domain("alpha_threshold", format!("requires nu > 0, got {nu}")));
    }
    Ok(nu / (4.0 * PI) * (nu.ln() + 2.0 * EULER_GAMMA - 1.0))
}

/// Which root: `E_n^{(ν,α)}` for `ν < 0`, the single `E_+^{(ν,α)}` for `ν > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpectralLabel {
    Index(usize),
    Plus,
}

impl fmt::Display for SpectralLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralLabel::Index(n) => write!(f, "{n}"),
            SpectralLabel::Plus => f.write_str("plus"),
        }
    }
}

impl Serialize for SpectralLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectralLabel::Index(n) => s.serialize_u64(*n as u64),
            SpectralLabel::Plus => s.serialize_str("plus"),
        }
    }
}

impl<'de> Deserialize<'de> for SpectralLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(usize),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(SpectralLabel::Index(n)),
            Repr::S(s) if s == "plus" => Ok(SpectralLabel::Plus),
            Repr::S(s) => Err(serde::de::Error::custom(format!("unknown label '{s}'"))),
        }
    }
}

/// One negative eigenvalue with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    #[serde(rename = "n")]
    pub label: SpectralLabel,
    #[serde(rename = "E")]
    pub e: f64,
    /// `|𝔉_ν(E) − α|`.
    pub residual: f64,
    /// Energy interval the root was bracketed in before refinement.
    pub bracket: (f64, f64),
}

/// The negative spectrum of one `H_α^{(ν)}` up to `n_max` roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: CoulombParams,
    pub points: Vec<SpectralPoint>,
    pub friedrichs_reference: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

// Brent's method (zeroin) on [a, b] with f(a), f(b) of opposite sign. Stops
// when the bracket is below 2ε|x| + xtol_abs.
fn brent(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, fa: f64, fb: f64, xtol_abs: f64) -> Result<(f64, f64, (f64, f64))> {
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa.signum() == fb.signum() && fa != 0.0 && fb != 0.0 {
        return Err(Error::Bracket(format!("no sign change on [{a}, {b}]")));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() && fb != 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol_abs;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok((b, fb, (lo, hi)));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::Bracket("Brent iteration did not converge".into()))
}

fn point_from_s(eq: &SpectralEquation, label: SpectralLabel, alpha: f64, s: f64, s_bracket: (f64, f64)) -> Result<SpectralPoint> {
    let nu = eq.nu;
    let e = energy_from_s(nu, s);
    let residual = (eq.eval_s(s)? - alpha).abs();
    let (e1, e2) = (energy_from_s(nu, s_bracket.0), energy_from_s(nu, s_bracket.1));
    Ok(SpectralPoint {
        label,
        e,
        residual,
        bracket: (e1.min(e2), e1.max(e2)),
    })
}

/// Root `n ≥ 1` for `ν < 0`: the unique solution of `𝔉_ν(E) = α` with
/// `s ∈ (n−1, n)`, i.e. `E ∈ (E_{n−1}, E_n)`, `E_0 = −∞`.
///
/// `α = ∞` gives the Friedrichs level `E_n` with a degenerate bracket.
pub fn solve_interval(nu: f64, alpha: ExtendedReal, n: usize, tol: f64) -> Result<SpectralPoint> {
    solve_interval_with(&SpectralEquation::new(nu)?, alpha, n, tol)
}

#[doc(hidden)]
pub fn solve_interval_with(eq: &SpectralEquation, alpha: ExtendedReal, n: usize, tol: f64) -> Result<SpectralPoint> {
    let nu = eq.nu;
    if !(nu < 0.0) {
        return Err(Error::Parameter(format!("solve_interval requires nu < 0, got {nu}")));
    }
    if n == 0 {
        return Err(Error::Parameter("root index n starts at 1".into()));
    }
    let alpha = match alpha {
        ExtendedReal::Infinite => {
            let e = friedrichs_level(nu, n);
            return Ok(SpectralPoint {
                label: SpectralLabel::Index(n),
                e,
                residual: 0.0,
                bracket: (e, e),
            });
        }
        ExtendedReal::Finite(a) => a,
    };
    let g = |s: f64| eq.eval_s(s).map(|v| v - alpha);
    let nf = n as f64;
    for &delta in &POLE_OFFSET_FALLBACKS {
        let off = delta * nf.max(1.0);
        let hi = nf - off;
        let ghi = g(hi)?;
        if ghi <= 0.0 {
            continue;
        }
        let (lo, glo) = if n == 1 {
            // 𝔉 → −∞ as s → 0⁺
            let mut lo = 0.5f64;
            let mut glo = g(lo)?;
            while glo >= 0.0 {
                lo *= 0.5;
                if lo < 1e-300 {
                    return Err(Error::Bracket("ground root: no lower bracket".into()));
                }
                glo = g(lo)?;
            }
            (lo, glo)
        } else {
            let lo = nf - 1.0 + off;
            (lo, g(lo)?)
        };
        if glo >= 0.0 {
            continue;
        }
        let (s, _, sb) = brent(g, lo, hi, glo, ghi, 0.0)?;
        let p = point_from_s(eq, SpectralLabel::Index(n), alpha, s, (lo, hi))?;
        return check_residual(p, sb, tol);
    }
    Err(Error::Bracket(format!(
        "root {n} for nu = {nu}, alpha = {alpha} lies closer than 1e-15 to a pole"
    )))
}

// `final_s` is the bracket Brent stopped with.
fn check_residual(p: SpectralPoint, final_s: (f64, f64), tol: f64) -> Result<SpectralPoint> {
    if p.residual <= tol {
        return Ok(p);
    }
    // The bracket has shrunk to rounding level; the residual is the
    // conditioning floor of 𝔉 there, not a solver failure.
    let (lo, hi) = final_s;
    if hi - lo <= 8.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
        return Ok(p);
    }
    Err(Error::Bracket(format!(
        "residual {:e} above tolerance {tol:e} at E = {}",
        p.residual, p.e
    )))
}

/// The single root for `ν > 0`, or `None` when `α ≥ α_ν`.
pub fn solve_positive_nu(nu: f64, alpha: ExtendedReal, tol: f64) -> Result<Option<SpectralPoint>> {
    solve_positive_nu_with(&SpectralEquation::new(nu)?, alpha, tol)
}

#[doc(hidden)]
pub fn solve_positive_nu_with(eq: &SpectralEquation, alpha: ExtendedReal, tol: f64) -> Result<Option<SpectralPoint>> {
    let nu = eq.nu;
    if !(nu > 0.0) {
        return Err(Error::Parameter(format!("solve_positive_nu requires nu > 0, got {nu}")));
    }
    let alpha = match alpha {
        ExtendedReal::Infinite => return Ok(None),
        ExtendedReal::Finite(a) => a,
    };
    if alpha >= alpha_threshold(nu)? {
        return Ok(None);
    }
    // 𝔉 decreases in s on (−∞, 0): −∞ at 0⁻, α_ν at −∞.
    let g = |s: f64| eq.eval_s(s).map(|v| v - alpha);
    let mut s_pos = -1.0f64; // g > 0 here
    let mut g_pos = g(s_pos)?;
    let mut s_neg = s_pos; // g < 0 here
    let mut g_neg = g_pos;
    if g_pos > 0.0 {
        while g_neg >= 0.0 {
            s_pos = s_neg;
            g_pos = g_neg;
            s_neg *= 0.5;
            if s_neg.abs() < 1e-300 {
                return Err(Error::Bracket("positive-nu root: no bracket near s = 0".into()));
            }
            g_neg = g(s_neg)?;
        }
    } else {
        while g_pos <= 0.0 {
            s_neg = s_pos;
            g_neg = g_pos;
            s_pos *= 2.0;
            if s_pos.abs() > 1e150 {
                // numerically at the threshold
                return Ok(None);
            }
            g_pos = g(s_pos)?;
        }
    }
    let (lo, hi, glo, ghi) = (s_pos, s_neg, g_pos, g_neg);
    let (s, _, sb) = brent(g, lo, hi, glo, ghi, 0.0)?;
    let p = point_from_s(eq, SpectralLabel::Plus, alpha, s, (lo, hi))?;
    check_residual(p, sb, tol).map(Some)
}

/// All requested negative eigenvalues of `H_α^{(ν)}`.
pub fn assemble_spectrum(params: &CoulombParams, n_max: usize, tol: f64) -> Result<SpectrumReport> {
    assemble_spectrum_with(&SpectralEquation::new(params.nu)?, params, n_max, tol)
}

#[doc(hidden)]
pub fn assemble_spectrum_with(eq: &SpectralEquation, params: &CoulombParams, n_max: usize, tol: f64) -> Result<SpectrumReport> {
    let nu = params.nu;
    if nu < 0.0 {
        let friedrichs_reference: Vec<f64> = (1..=n_max).map(|n| friedrichs_level(nu, n)).collect();
        let points = (1..=n_max)
            .map(|n| solve_interval_with(eq, params.alpha, n, tol))
            .collect::<Result<Vec<_>>>()?;
        let report = SpectrumReport {
            params: *params,
            points,
            friedrichs_reference,
            note: None,
        };
        check_report(&report)?;
        Ok(report)
    } else {
        let point = solve_positive_nu_with(eq, params.alpha, tol)?;
        let note = if point.is_none() {
            Some(match params.alpha {
                ExtendedReal::Infinite => "alpha = inf: no negative eigenvalues for nu > 0".to_string(),
                ExtendedReal::Finite(_) => format!("alpha >= alpha_nu = {}", alpha_threshold(nu)?),
            })
        } else {
            None
        };
        Ok(SpectrumReport {
            params: *params,
            points: point.into_iter().collect(),
            friedrichs_reference: Vec::new(),
            note,
        })
    }
}

fn check_report(r: &SpectrumReport) -> Result<()> {
    for w in r.points.windows(2) {
        if !(w[0].e < w[1].e) {
            return Err(Error::Bracket(format!(
                "spectrum not strictly increasing: {} then {}",
                w[0].e, w[1].e
            )));
        }
    }
    for (i, p) in r.points.iter().enumerate() {
        let en = r.friedrichs_reference[i];
        if p.e > en {
            return Err(Error::Bracket(format!("E_{} = {} above E_{} = {en}", i + 1, p.e, i + 1)));
        }
        if let Some(next) = r.points.get(i + 1) {
            if next.e < en {
                return Err(Error::Bracket(format!("E_{} = {} below E_{} = {en}", i + 2, next.e, i + 1)));
            }
        }
    }
    Ok(())
}

/// One cell of an eigenvalue fan `α ↦ E_n^{(ν,α)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibrationRow {
    pub alpha: f64,
    pub n: SpectralLabel,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Eigenvalue curves over an α grid, ordered by α then label. Failures are
/// recorded in the row, not propagated.
pub fn fibration_data(nu: f64, alpha_grid: &[f64], n_max: usize, tol: f64) -> Result<Vec<FibrationRow>> {
    let eq = SpectralEquation::new(nu)?;
    let mut rows = Vec::new();
    for &alpha in alpha_grid {
        if nu < 0.0 {
            for n in 1..=n_max {
                let (e, warning) = match solve_interval_with(&eq, ExtendedReal::Finite(alpha), n, tol) {
                    Ok(p) => (Some(p.e), None),
                    Err(err) => (None, Some(err.to_string())),
                };
                rows.push(FibrationRow {
                    alpha,
                    n: SpectralLabel::Index(n),
                    e,
                    warning,
                });
            }
        } else {
            let (e, warning) = match solve_positive_nu_with(&eq, ExtendedReal::Finite(alpha), tol) {
                Ok(p) => (p.map(|p| p.e), None),
                Err(err) => (None, Some(err.to_string())),
            };
            rows.push(FibrationRow {
                alpha,
                n: SpectralLabel::Plus,
                e,
                warning,
            });
        }
    }
    Ok(rows)
}
