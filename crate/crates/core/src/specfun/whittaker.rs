//! Whittaker functions `𝓜_{κ,1/2}` and `𝓦_{κ,1/2}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::confluent::{kummer_m_scaled, w_raw};
use super::gamma::{digamma, rgamma};
use super::EULER_GAMMA;

/// Values and ρ-derivatives of the Whittaker pair at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhittakerPair {
    pub m: f64,
    pub w: f64,
    pub m_prime: f64,
    pub w_prime: f64,
}

impl WhittakerPair {
    /// `w·m' − m·w'`, which should equal `1/Γ(1−κ)`.
    pub fn wronskian(&self) -> f64 {
        self.w * self.m_prime - self.m * self.w_prime
    }
}

/// `𝓜_{κ,1/2}(ρ) = e^{−ρ/2}ρM(1−κ,2,ρ)` and `𝓦_{κ,1/2}(ρ) = e^{−ρ/2}ρU(1−κ,2,ρ)`
/// with their ρ-derivatives, for `ρ > 0`.
///
/// Any real κ is accepted. For κ a positive integer `𝓦` degenerates to a
/// multiple of `𝓜` and the Wronskian vanishes.
pub fn whittaker(kappa: f64, rho: f64) -> Result<WhittakerPair> {
    let w = w_raw(kappa, rho)?;
    let (m, m_prime) = whittaker_m(kappa, rho)?;
    Ok(WhittakerPair {
        m,
        w: w.w,
        m_prime,
        w_prime: w.w_prime,
    })
}

/// `𝓦_{κ,1/2}(ρ)` and its derivative only.
pub fn whittaker_w(kappa: f64, rho: f64) -> Result<(f64, f64)> {
    let w = w_raw(kappa, rho)?;
    Ok((w.w, w.w_prime))
}

/// `𝓜_{κ,1/2}(ρ)` and its derivative only.
pub fn whittaker_m(kappa: f64, rho: f64) -> Result<(f64, f64)> {
    let a = 1.0 - kappa;
    let m0 = kummer_m_scaled(a, 2.0, rho)?;
    // M' = (a/2) M(a+1, 3, ρ)
    let m1 = kummer_m_scaled(a + 1.0, 3.0, rho)?;
    let base = -0.5 * rho + rho.ln();
    let m = m0.mant * (base + m0.ln_scale).exp();
    let mp = 0.5 * a * m1.mant * (base + m1.ln_scale).exp();
    // d/dρ [e^{−ρ/2} ρ M] = e^{−ρ/2} ((1 − ρ/2) M + ρ M')
    let m_prime = m * (1.0 / rho - 0.5) + mp;
    Ok((m, m_prime))
}

/// Leading small-ρ coefficients of `𝓦_{κ,1/2}(ρ) ≈ c₀ + c₁ ρ ln ρ + c₂ ρ`.
pub fn whittaker_w_small_r_coeffs(kappa: f64) -> Result<(f64, f64, f64)> {
    let rg = rgamma(1.0 - kappa);
    let c_const = rg;
    let c_rlogr = -kappa * rg;
    let c_r = if rg == 0.0 {
        // κ = n a positive integer: only ψ(1−κ)/Γ(1−κ) → (−1)^n (n−1)! survives
        let n = kappa;
        let mut fact = 1.0;
        for j in 1..(n as u64) {
            fact *= j as f64;
        }
        let sign = if (n as u64).is_multiple_of(2) { 1.0 } else { -1.0 };
        -kappa * sign * fact
    } else {
        ((2.0 - 4.0 * EULER_GAMMA) * kappa - 2.0 * kappa * digamma(1.0 - kappa)? - 1.0) * rg / 2.0
    };
    Ok((c_const, c_rlogr, c_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_at_zero_kappa() {
        let p = whittaker(0.0, 2.0).unwrap();
        assert_relative_eq!(p.w, 0.367_879_441_171_442_33, max_relative = 1e-14);
        assert_relative_eq!(p.m, 2.350_402_387_287_602_8, max_relative = 1e-14);
        let mut z = 0.1;
        while z <= 20.0 {
            let p = whittaker(0.0, z).unwrap();
            assert_relative_eq!(p.w, (-0.5 * z).exp(), max_relative = 1e-12);
            assert_relative_eq!(p.m, 2.0 * (0.5 * z).sinh(), max_relative = 1e-12);
            z *= 1.3;
        }
    }

    #[test]
    fn reference_values() {
        let p = whittaker(0.5, 2.0).unwrap();
        assert_relative_eq!(p.w, 0.577_127_392_013_814_5, max_relative = 1e-13);
        assert_relative_eq!(p.m, 1.401_813_547_519_046_6, max_relative = 1e-13);
    }

    #[test]
    fn m_over_rho_tends_to_one() {
        let p = whittaker(0.5, 1e-8).unwrap();
        assert_relative_eq!(p.m / 1e-8, 1.0, max_relative = 1e-7);
    }

    #[test]
    fn wronskian_is_constant() {
        for kappa in [-2.0, -0.5, 0.25, 0.75] {
            let target = rgamma(1.0 - kappa);
            for i in 0..20 {
                let rho = 1e-2 * (5000f64).powf(i as f64 / 19.0);
                let p = whittaker(kappa, rho).unwrap();
                let err = (p.wronskian() - target).abs();
                assert!(err <= 1e-9 * (1.0 + target.abs()), "κ={kappa} ρ={rho}: {err:e}");
            }
        }
    }

    #[test]
    fn ode_residual() {
        for kappa in [-2.0, -0.5, 0.25, 0.75] {
            for rho in [0.5, 5.0] {
                let h = 1e-5 * rho;
                let lo = whittaker(kappa, rho - h).unwrap();
                let hi = whittaker(kappa, rho + h).unwrap();
                let mid = whittaker(kappa, rho).unwrap();
                let q = 0.25 - kappa / rho;
                let fd_w = (hi.w_prime - lo.w_prime) / (2.0 * h);
                let fd_m = (hi.m_prime - lo.m_prime) / (2.0 * h);
                assert_relative_eq!(fd_w, q * mid.w, max_relative = 1e-6);
                assert_relative_eq!(fd_m, q * mid.m, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn large_rho_asymptotics() {
        let rho: f64 = 200.0;
        for kappa in [-2.0, -0.5, 0.25, 0.75] {
            let p = whittaker(kappa, rho).unwrap();
            let w_ratio = p.w * (0.5 * rho).exp() * rho.powf(-kappa);
            let m_ratio = p.m / rgamma(1.0 - kappa) * (-0.5 * rho).exp() * rho.powf(kappa);
            assert!((w_ratio - 1.0).abs() < 5e-2, "κ={kappa}: {w_ratio}");
            assert!((m_ratio - 1.0).abs() < 5e-2, "κ={kappa}: {m_ratio}");
        }
    }

    #[test]
    fn small_r_coefficients() {
        let (c0, c1, c2) = whittaker_w_small_r_coeffs(0.0).unwrap();
        assert_eq!((c0, c1), (1.0, 0.0));
        assert_relative_eq!(c2, -0.5, max_relative = 1e-15);
        let (c0, c1, _) = whittaker_w_small_r_coeffs(0.5).unwrap();
        assert_relative_eq!(c0, 0.564_189_583_547_756_3, max_relative = 1e-14);
        assert_relative_eq!(c1 / c0, -0.5, max_relative = 1e-15);
        // the expansion reproduces 𝓦 at small ρ up to O(ρ² ln ρ)
        for kappa in [-1.3, 0.3, 0.9] {
            let (c0, c1, c2) = whittaker_w_small_r_coeffs(kappa).unwrap();
            let rho: f64 = 1e-4;
            let approx = c0 + c1 * rho * rho.ln() + c2 * rho;
            let (w, _) = whittaker_w(kappa, rho).unwrap();
            assert!((w - approx).abs() < 1e-6, "κ={kappa}: {w} vs {approx}");
        }
    }
}
