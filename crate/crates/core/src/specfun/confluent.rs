//! Kummer `M(a,b,z)` and Tricomi `U(a,2,z)` for real `z ≥ 0`.
//!
//! `U` is assembled from three regimes: the integer-`b` logarithmic series for
//! `z ≤ 2`, the asymptotic series once `z` is large compared with `a²`, and
//! between them a Taylor-series continuation of the Whittaker equation run
//! inward from the asymptotic region. The inward direction is the stable one
//! for the recessive solution, and it avoids the cancellation the power series
//! suffers on `2 < z < 40`.

use crate::error::{domain, Error, Result};

use super::gamma::{digamma, is_nonpositive_integer, rgamma};
use super::SpecfunResult;

const EPS: f64 = f64::EPSILON;

/// Series/asymptotic switch for `M`.
pub const Z_SWITCH: f64 = 40.0;

// Below this `U(a,2,z)` comes from the logarithmic connection formula.
const U_SMALL_Z: f64 = 2.0;

const MAX_TERMS: usize = 5000;

/// `M(a,b,z)` as `mant · e^{ln_scale}`, with a relative error estimate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub mant: f64,
    pub ln_scale: f64,
    pub rel_err: f64,
}

impl Scaled {
    pub fn value(self) -> f64 {
        self.mant * self.ln_scale.exp()
    }
}

fn check_b(function: &'static str, b: f64) -> Result<()> {
    if is_nonpositive_integer(b) {
        return Err(Error::Pole { function, x: b });
    }
    Ok(())
}

fn m_series(a: f64, b: f64, z: f64) -> Scaled {
    const RESCALE: f64 = 1e200;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut ln_scale = 0.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        abs_sum += term.abs();
        k += 1;
        if term == 0.0 {
            break;
        }
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            abs_sum /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        // once past the peak the terms decay at least geometrically
        if a + kf > 0.0 && term.abs() <= EPS * 0.1 * sum.abs() && (a + kf) * z < (b + kf) * (kf + 1.0) {
            break;
        }
        if k > MAX_TERMS {
            break;
        }
    }
    let rel_err = if sum == 0.0 {
        0.0
    } else {
        (k as f64).sqrt() * EPS * abs_sum / sum.abs() + term.abs() / sum.abs()
    };
    Scaled {
        mant: sum,
        ln_scale,
        rel_err,
    }
}

// Γ(b)/Γ(a) e^z z^{a−b} Σ (b−a)_k (1−a)_k / (k! z^k); the recessive
// Γ(b)/Γ(b−a)(−z)^{−a} part is below e^{−z} relative and dropped.
fn m_asymptotic(a: f64, b: f64, z: f64) -> Option<Scaled> {
    let (sum, last) = asymptotic_sum(|k| (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z))?;
    let ga = super::gamma::ln_gamma(a);
    let gb = super::gamma::ln_gamma(b);
    let sign = super::gamma::gamma_sign(a) * super::gamma::gamma_sign(b);
    Some(Scaled {
        mant: sign * sum,
        ln_scale: gb - ga + z + (a - b) * z.ln(),
        rel_err: last.abs() / sum.abs() + 20.0 * EPS,
    })
}

// Sums 1 + t1 + t2 + ... with t_{k+1} = t_k·ratio(k), stopping at the smallest
// term. Returns None if the series never becomes small enough to be useful.
fn asymptotic_sum(ratio: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..200 {
        let next = term * ratio(k as f64);
        if next == 0.0 {
            return Some((sum, 0.0));
        }
        if next.abs() >= term.abs() && k > 0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 0.1 * EPS * sum.abs() {
            return Some((sum, term));
        }
    }
    if term.abs() <= 1e-13 * sum.abs() {
        Some((sum, term))
    } else {
        None
    }
}

pub(crate) fn kummer_m_scaled(a: f64, b: f64, z: f64) -> Result<Scaled> {
    check_b("kummer_m", b)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("kummer_m", format!("z must be finite and >= 0, got {z}")));
    }
    if z <= Z_SWITCH || a <= 0.0 {
        return Ok(m_series(a, b, z));
    }
    Ok(m_asymptotic(a, b, z).unwrap_or_else(|| m_series(a, b, z)))
}

/// Kummer's confluent hypergeometric function `M(a,b,z) = ₁F₁(a;b;z)`, `z ≥ 0`.
///
/// Power series up to [`Z_SWITCH`], the `e^z z^{a−b}` asymptotic series above
/// it when that series converges far enough. The error estimate is heuristic.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<SpecfunResult> {
    let s = kummer_m_scaled(a, b, z)?;
    let value = s.value();
    Ok(SpecfunResult::new(value, s.rel_err * value.abs()))
}

/// Tricomi's function `U(a,b,z)` for `z > 0`. Only `b = 2` is implemented.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<SpecfunResult> {
    if b != 2.0 {
        return Err(domain("tricomi_u", format!("only b = 2 is supported, got b = {b}")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("tricomi_u", format!("z must be finite and > 0, got {z}")));
    }
    if z >= u_asymptotic_start(a) {
        if let Some(u) = u2_asymptotic(a, z) {
            let value = u.u * (-a * z.ln()).exp();
            return Ok(SpecfunResult::new(value, u.rel_err * value.abs()));
        }
    }
    let w = w_raw(1.0 - a, z)?;
    let value = w.w * (0.5 * z).exp() / z;
    Ok(SpecfunResult::new(value, w.rel_err * value.abs()))
}

/// `𝓦_{κ,1/2}(ρ) = e^{−ρ/2} ρ U(1−κ,2,ρ)` and its ρ-derivative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WRaw {
    pub w: f64,
    pub w_prime: f64,
    pub rel_err: f64,
}

// Where the asymptotic series for U(a,2,z) is first tried: its first ratio
// a(a−1)/z must be small.
fn u_asymptotic_start(a: f64) -> f64 {
    Z_SWITCH + 2.0 * a * a
}

struct UAsym {
    // U = z^{-a}·u,  U' = z^{-a}·(u_prime)
    u: f64,
    u_prime: f64,
    rel_err: f64,
}

fn u2_asymptotic(a: f64, z: f64) -> Option<UAsym> {
    // U(a,2,z) ~ z^{-a} Σ (a)_k (a−1)_k (−1/z)^k / k!
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut dsum = 0.0f64; // d/dz of Σ s_k z^{-k} = Σ −k s_k z^{-k-1}
    let mut converged = false;
    // for a = 0, −1, ... the series terminates and is exact
    let terminating = is_nonpositive_integer(a);
    for k in 0..200 {
        let kf = k as f64;
        let next = -term * (a + kf) * (a - 1.0 + kf) / ((kf + 1.0) * z);
        if next == 0.0 {
            converged = true;
            break;
        }
        if !terminating && next.abs() >= term.abs() && k > 0 {
            break;
        }
        term = next;
        sum += term;
        dsum += -(kf + 1.0) * term / z;
        if !terminating && term.abs() <= 0.1 * EPS * sum.abs() {
            converged = true;
            break;
        }
    }
    if !converged && term.abs() > 1e-13 * sum.abs() {
        return None;
    }
    Some(UAsym {
        u: sum,
        u_prime: dsum - a / z * sum,
        rel_err: term.abs() / sum.abs() + 20.0 * EPS,
    })
}

// zU(a,2,z) and its derivative from the b = 2 connection formula
//   U = 1/(Γ(a) z) + (1/Γ(a−1)) Σ (a)_k z^k/((2)_k k!) [ln z + ψ(a+k) − ψ(1+k) − ψ(2+k)]
fn zu_log_series(a: f64, z: f64) -> Result<(f64, f64, f64)> {
    let r0 = rgamma(a);
    let r1 = rgamma(a - 1.0);
    if r1 == 0.0 {
        // a = 1: U(1,2,z) = 1/z exactly
        return Ok((r0, 0.0, EPS));
    }
    let lnz = z.ln();
    // ψ(1) and ψ(2)
    let mut psi1 = -super::EULER_GAMMA;
    let mut psi2 = 1.0 - super::EULER_GAMMA;
    let mut coef = 1.0; // (a)_k / ((2)_k k!)
    let mut zk = 1.0; // z^k
    let mut s = 0.0; // Σ coef z^{k+1} (ln z + ψ's)
    let mut ds = 0.0; // derivative of the above
    let mut abs_s = 0.0;
    let mut last = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let psi_a = digamma(a + kf)?;
        let bracket = lnz + psi_a - psi1 - psi2;
        let t = coef * zk * z * bracket;
        s += t;
        abs_s += t.abs();
        ds += coef * zk * ((kf + 1.0) * bracket + 1.0);
        last = t;
        let small = t.abs() <= 0.1 * EPS * (s.abs() + r0.abs() / r1.abs().max(1e-300));
        if k > 2 && small && coef.abs() * zk < 1e-17 {
            break;
        }
        if coef == 0.0 {
            // a is a nonpositive integer; handled elsewhere
            break;
        }
        psi1 += 1.0 / (kf + 1.0);
        psi2 += 1.0 / (kf + 2.0);
        coef *= (a + kf) / ((2.0 + kf) * (kf + 1.0));
        zk *= z;
    }
    let value = r0 + r1 * s;
    let deriv = r1 * ds;
    let err = EPS * (r0.abs() + (r1 * abs_s).abs() * 4.0) + (r1 * last).abs();
    let rel = if value != 0.0 { err / value.abs() } else { err };
    Ok((value, deriv, rel))
}

// zU for a = −m: U(−m,2,z) = (−1)^m (2)_m M(−m,2,z).
fn zu_polynomial(m: u32, z: f64) -> (f64, f64, f64) {
    let a = -(m as f64);
    let mut pref = 1.0;
    for j in 0..m {
        pref *= -(2.0 + j as f64);
    }
    // M and M' as polynomials
    let mut term = 1.0;
    let mut mval = 1.0;
    let mut mder = 0.0;
    let mut abs_sum = 1.0;
    for k in 0..m {
        let kf = k as f64;
        let dterm = term * (a + kf) / ((2.0 + kf) * (kf + 1.0)) * (kf + 1.0);
        mder += dterm;
        term *= (a + kf) / (2.0 + kf) * z / (kf + 1.0);
        mval += term;
        abs_sum += term.abs();
    }
    let u = pref * mval;
    let du = pref * mder;
    let rel = EPS * (m as f64 + 1.0) * abs_sum / mval.abs().max(1e-300);
    (z * u, u + z * du, rel)
}

// Taylor step for w'' = (1/4 − κ/ρ) w from ρ0 to ρ0 + h.
fn taylor_step(kappa: f64, rho0: f64, w0: f64, dw0: f64, h: f64) -> (f64, f64) {
    // d_k = c_k h^k
    let mut d_km1 = 0.0;
    let mut d_k = w0;
    let mut d_kp1 = dw0 * h;
    let mut w = d_k + d_kp1;
    let mut dw = d_kp1;
    let p = rho0 / 4.0 - kappa;
    let h2 = h * h;
    let h3 = h2 * h;
    for k in 0..400 {
        let kf = k as f64;
        let d_kp2 = (h2 * p * d_k + h3 * d_km1 / 4.0 - h * kf * (kf + 1.0) * d_kp1)
            / (rho0 * (kf + 1.0) * (kf + 2.0));
        w += d_kp2;
        dw += (kf + 2.0) * d_kp2;
        if k > 4 && d_kp2.abs() + d_kp1.abs() <= 1e-18 * (w.abs() + dw.abs()) {
            break;
        }
        d_km1 = d_k;
        d_k = d_kp1;
        d_kp1 = d_kp2;
    }
    (w, dw / h)
}

fn w_from_asymptotic(a: f64, rho: f64) -> Option<WRaw> {
    let u = u2_asymptotic(a, rho)?;
    let pref = (-0.5 * rho + (1.0 - a) * rho.ln()).exp();
    // w = e^{-ρ/2}ρU,  w' = e^{-ρ/2}(U + ρU' − ρU/2)
    let w = pref * u.u;
    let w_prime = pref * (u.u / rho + u.u_prime - 0.5 * u.u);
    Some(WRaw {
        w,
        w_prime,
        rel_err: u.rel_err,
    })
}

pub(crate) fn w_raw(kappa: f64, rho: f64) -> Result<WRaw> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(domain("whittaker", format!("rho must be finite and > 0, got {rho}")));
    }
    let a = 1.0 - kappa;
    let start = u_asymptotic_start(a);
    if rho >= start {
        if let Some(w) = w_from_asymptotic(a, rho) {
            return Ok(w);
        }
    }
    let e = (-0.5 * rho).exp();
    // the log series cancels badly for large positive a once ρ is O(1)
    let small_z = if a > 2.0 { U_SMALL_Z.min(4.0 / a) } else { U_SMALL_Z };
    if rho <= small_z {
        let (zu, dzu, rel) = if is_nonpositive_integer(a) {
            zu_polynomial((-a) as u32, rho)
        } else {
            zu_log_series(a, rho)?
        };
        return Ok(WRaw {
            w: e * zu,
            w_prime: e * (dzu - 0.5 * zu),
            rel_err: rel,
        });
    }
    if is_nonpositive_integer(a) {
        // polynomial: ascending powers for small ρ, descending beyond
        if rho > -2.0 * a {
            if let Some(w) = w_from_asymptotic(a, rho) {
                return Ok(w);
            }
        }
        let (zu, dzu, rel) = zu_polynomial((-a) as u32, rho);
        return Ok(WRaw {
            w: e * zu,
            w_prime: e * (dzu - 0.5 * zu),
            rel_err: rel,
        });
    }
    // Continue inward from the asymptotic region, moving its start outward
    // until the series there is accurate.
    let mut r = start;
    let init = loop {
        if let Some(w) = w_from_asymptotic(a, r) {
            break w;
        }
        r *= 1.5;
        if r > 1e4 {
            return Err(domain(
                "whittaker",
                format!("asymptotic series for U({a},2,z) does not converge below z = 1e4"),
            ));
        }
    };
    let (mut w, mut dw) = (init.w, init.w_prime);
    let mut steps = 0usize;
    while r > rho {
        let hmax = (0.5 * r).min(2.0 / (1.0 + kappa.abs() / r).sqrt());
        let h = hmax.min(r - rho);
        let (w1, dw1) = taylor_step(kappa, r, w, dw, -h);
        w = w1;
        dw = dw1;
        r -= h;
        steps += 1;
        if r - rho < 1e-14 * rho {
            break;
        }
    }
    Ok(WRaw {
        w,
        w_prime: dw,
        rel_err: init.rel_err + 4.0 * EPS * (steps as f64 + 1.0),
    })
}
