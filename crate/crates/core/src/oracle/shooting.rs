//! Shooting solver: integrate outward from a small radius with the
//! short-distance expansion as initial data, match the log-derivative to the
//! decaying asymptotics at a large radius, bisect in `E`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CoulombParams, ExtendedReal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Series-start radius.
    pub r0: f64,
    /// Matching radius; `None` means `max(30/√|E|, 20)` per energy.
    pub r_match: Option<f64>,
    /// Local integrator tolerance, also the relative bisection tolerance.
    pub rk_tol: f64,
    pub ell: u32,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            r0: 1e-4,
            r_match: None,
            rk_tol: 1e-10,
            ell: 0,
        }
    }
}

impl ShootingConfig {
    fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.rk_tol > 0.0) {
            return Err(Error::Parameter("shooting needs r0 > 0 and rk_tol > 0".into()));
        }
        if let Some(r) = self.r_match {
            if !(r > self.r0) {
                return Err(Error::Parameter("matching radius must exceed r0".into()));
            }
        }
        Ok(())
    }
}

const STEP_FLOOR: f64 = 1e-8;

/// `(u, u')` at `r0` for energy `e`.
///
/// For `ℓ = 0` write `u = P(r) ln r + Q(r)` with power series `P`, `Q` and
/// substitute into `u'' = (ν/r − E)u`. The `ln r` part says `P` solves the
/// equation itself, `k(k−1)p_k = νp_{k−1} − Ep_{k−2}`; the rest gives
/// `(2k−1)p_k + k(k−1)q_k = νq_{k−1} − Eq_{k−2}`. With `q₀ = g₀`, `q₁ = g₁`
/// this forces `p₁ = νg₀`, so the leading terms are `g₀(1 + νr ln r) + g₁r`,
/// and the `r² ln r`, `r²` terms are `ν²g₀/2` and `(νg₁ − Eg₀ − 3ν²g₀/2)/2`.
/// For `ℓ ≥ 1`, Frobenius series of `r^{ℓ+1}`.
fn initial_data(nu: f64, alpha: ExtendedReal, ell: u32, e: f64, r: f64) -> (f64, f64) {
    if ell == 0 {
        let (g0, g1) = match alpha {
            ExtendedReal::Finite(a) => (1.0, 4.0 * PI * a),
            ExtendedReal::Infinite => (0.0, 1.0),
        };
        const K: usize = 10;
        let mut p = [0.0f64; K];
        let mut q = [0.0f64; K];
        q[0] = g0;
        q[1] = g1;
        p[1] = nu * g0;
        for k in 2..K {
            let kf = k as f64;
            p[k] = (nu * p[k - 1] - e * p[k - 2]) / (kf * (kf - 1.0));
            q[k] = (nu * q[k - 1] - e * q[k - 2] - (2.0 * kf - 1.0) * p[k]) / (kf * (kf - 1.0));
        }
        let l = r.ln();
        let (mut u, mut du) = (0.0, 0.0);
        for k in (0..K).rev() {
            let kf = k as f64;
            let rk = r.powi(k as i32);
            u += (p[k] * l + q[k]) * rk;
            if k > 0 {
                du += (p[k] * (kf * l + 1.0) + kf * q[k]) * rk / r;
            }
        }
        (u, du)
    } else {
        // u = Σ c_k r^{k+ℓ+1}, c_k [(k+ℓ+1)(k+ℓ) − ℓ(ℓ+1)] = ν c_{k−1} − E c_{k−2}
        let l = ell as f64;
        let mut c = [0.0f64; 8];
        c[0] = 1.0;
        for k in 1..c.len() {
            let kf = k as f64;
            let denom = (kf + l + 1.0) * (kf + l) - l * (l + 1.0);
            let prev2 = if k >= 2 { c[k - 2] } else { 0.0 };
            c[k] = (nu * c[k - 1] - e * prev2) / denom;
        }
        let mut u = 0.0;
        let mut du = 0.0;
        for (k, ck) in c.iter().enumerate() {
            let p = k as f64 + l + 1.0;
            u += ck * r.powf(p);
            du += ck * p * r.powf(p - 1.0);
        }
        (u, du)
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(r, y)` for a 2-vector from `r_a` to `r_b` with the
/// error measured against the norm of `y`.
fn dopri5(
    f: impl Fn(f64, [f64; 2]) -> [f64; 2],
    r_a: f64,
    r_b: f64,
    y0: [f64; 2],
    tol: f64,
) -> Result<[f64; 2]> {
    let mut r = r_a;
    let mut y = y0;
    let mut h = (r_a * 0.1).max(STEP_FLOOR);
    let mut k = [[0.0f64; 2]; 7];
    k[0] = f(r, y);
    let mut steps = 0usize;
    while r < r_b {
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::Oracle("integrator step budget exhausted".into()));
        }
        if r + h > r_b {
            h = r_b - r;
        }
        for s in 1..7 {
            let mut yt = y;
            for j in 0..s {
                yt[0] += h * A[s][j] * k[j][0];
                yt[1] += h * A[s][j] * k[j][1];
            }
            k[s] = f(r + C[s] * h, yt);
        }
        let mut y5 = y;
        let mut err = [0.0f64; 2];
        for s in 0..7 {
            y5[0] += h * B5[s] * k[s][0];
            y5[1] += h * B5[s] * k[s][1];
            err[0] += h * (B5[s] - B4[s]) * k[s][0];
            err[1] += h * (B5[s] - B4[s]) * k[s][1];
        }
        let scale = y.iter().chain(y5.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let en = err[0].abs().max(err[1].abs()) / (tol * scale);
        if en <= 1.0 || h <= STEP_FLOOR {
            r += h;
            y = y5;
            k[0] = k[6];
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).max(STEP_FLOOR);
        } else {
            h = (h * (0.9 * en.powf(-0.25)).max(0.1)).max(STEP_FLOOR);
        }
    }
    Ok(y)
}

/// Log-derivative of `W_{κ,ℓ+1/2}(2kr)` at `r`, from its large-argument
/// expansion `e^{−ρ/2}ρ^κ Σ t_j ρ^{−j}` summed to the smallest term.
fn asymptotic_log_derivative(nu: f64, ell: u32, e: f64, r: f64) -> f64 {
    let k = (-e).sqrt();
    let kappa = -nu / (2.0 * k);
    let rho = 2.0 * k * r;
    let a = ell as f64 + 1.0 - kappa;
    let amb1 = -(ell as f64) - kappa;
    let mut t = 1.0;
    let mut s = 1.0;
    let mut ds = 0.0;
    let mut last = f64::INFINITY;
    for j in 0..200 {
        let jf = j as f64;
        let next = -t * (a + jf) * (amb1 + jf) / ((jf + 1.0) * rho);
        if next.abs() >= last || next == 0.0 {
            break;
        }
        last = next.abs();
        t = next;
        s += t;
        ds += -(jf + 1.0) * t / rho;
    }
    // d/dr = 2k d/dρ
    2.0 * k * (-0.5 + kappa / rho + ds / s)
}

fn matching_radius(cfg: &ShootingConfig, e: f64) -> f64 {
    cfg.r_match.unwrap_or_else(|| (30.0 / (-e).sqrt()).max(20.0))
}

/// Normalised mismatch `(u' − L u)/|(u, u')|` at the matching radius.
/// Continuous in `E` and zero exactly when the log-derivatives agree.
pub fn shooting_mismatch(params: &CoulombParams, e: f64, cfg: &ShootingConfig) -> Result<f64> {
    cfg.validate()?;
    if !(e < 0.0) {
        return Err(Error::Parameter(format!("shooting needs E < 0, got {e}")));
    }
    let nu = params.nu;
    let ell = cfg.ell;
    let lsq = (ell * (ell + 1)) as f64;
    let big_r = matching_radius(cfg, e);
    let y0 = initial_data(nu, params.alpha, ell, e, cfg.r0);
    let rhs = |r: f64, y: [f64; 2]| [y[1], (lsq / (r * r) + nu / r - e) * y[0]];
    let y = dopri5(rhs, cfg.r0, big_r, [y0.0, y0.1], cfg.rk_tol)?;
    let l = asymptotic_log_derivative(nu, ell, e, big_r);
    Ok((y[1] - l * y[0]) / (y[0].hypot(y[1]) * (1.0 + l.abs())))
}

/// Eigenvalue in `bracket` by bisection on [`shooting_mismatch`].
pub fn shoot_eigenvalue(params: &CoulombParams, bracket: (f64, f64), cfg: &ShootingConfig) -> Result<f64> {
    let (mut lo, mut hi) = if bracket.0 < bracket.1 { bracket } else { (bracket.1, bracket.0) };
    if !(hi < 0.0) {
        return Err(Error::Parameter("shooting bracket must lie in E < 0".into()));
    }
    let mut f_lo = shooting_mismatch(params, lo, cfg)?;
    let f_hi = shooting_mismatch(params, hi, cfg)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Oracle(format!(
            "no sign change of the shooting mismatch on [{lo}, {hi}]"
        )));
    }
    while (hi - lo) > cfg.rk_tol * lo.abs().min(hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = shooting_mismatch(params, mid, cfg)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
