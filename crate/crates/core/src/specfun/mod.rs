//! Real-argument special functions: Γ, ψ, Kummer `M`, Tricomi `U` and the
//! Whittaker pair `𝓜_{κ,1/2}`, `𝓦_{κ,1/2}`.

mod confluent;
mod gamma;
mod whittaker;

use serde::{Deserialize, Serialize};

pub use confluent::{kummer_m, tricomi_u, Z_SWITCH};
pub use gamma::{digamma, gamma, gamma_sign, is_nonpositive_integer, ln_gamma, pi_cotpi, rgamma, sinpi};
pub use whittaker::{whittaker, whittaker_m, whittaker_w, whittaker_w_small_r_coeffs, WhittakerPair};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A value with a heuristic absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecfunResult {
    pub value: f64,
    pub abs_err_est: f64,
}

impl SpecfunResult {
    pub fn new(value: f64, abs_err_est: f64) -> Self {
        let abs_err_est = if value.is_finite() && !abs_err_est.is_finite() {
            value.abs()
        } else {
            abs_err_est.abs()
        };
        Self { value, abs_err_est }
    }
}
