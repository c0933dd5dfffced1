//! Resolvents: the Friedrichs Green kernel, its action by quadrature, `Ψ_κ`,
//! `‖Φ_κ‖²` and the rank-one Kreĭn resolvents of the other extensions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CoulombParams, ExtendedReal};
use crate::radial::{fundamental_system, phi, ShiftFrame};
use crate::specfun::{whittaker, whittaker_w};
use crate::spectra::f_nu_kappa;

/// Values of a function on an increasing list of radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub r: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SampledFunction {
    pub fn new(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() {
            return Err(Error::Parameter(format!(
                "{} radii but {} values",
                r.len(),
                values.len()
            )));
        }
        if r.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("sample radii must be strictly increasing".into()));
        }
        Ok(Self {
            r,
            values,
            warnings: Vec::new(),
        })
    }

    pub fn from_fn(r: &[f64], g: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = r.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
        Self::new(r.to_vec(), values)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

// 4-point Gauss–Legendre on [−1, 1].
const GL4_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_W: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_8,
];

/// Smallest graded break point.
pub const R_MIN: f64 = 1e-6;
/// Default mesh parameter: geometric ratio `e^h` near 0, width `h` beyond.
pub const DEFAULT_H: f64 = 0.1;

/// Composite 4-point Gauss–Legendre rule on panels `[breaks[i], breaks[i+1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub breaks: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Rule on the given panel boundaries (sorted and deduplicated here).
    pub fn from_breaks(mut breaks: Vec<f64>) -> Result<Self> {
        breaks.retain(|x| x.is_finite());
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
        if breaks.len() < 2 || breaks[0] < 0.0 {
            return Err(Error::Parameter("a quadrature grid needs at least one panel on [0, inf)".into()));
        }
        let mut nodes = Vec::with_capacity(4 * breaks.len());
        let mut weights = Vec::with_capacity(4 * breaks.len());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for k in 0..4 {
                nodes.push(c + h * GL4_X[k]);
                weights.push(h * GL4_W[k]);
            }
        }
        Ok(Self { breaks, nodes, weights })
    }

    /// `[0, r_min]`, then geometric breaks `r_min·e^{kh}` until the spacing
    /// reaches `h`, then uniform spacing `h` up to `r_max`.
    pub fn graded(r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        Self::from_breaks(graded_breaks(r_min, r_max, h))
    }

    /// Default grid of a frame: `R_max = 40/λ + 40/√η`.
    pub fn for_frame(frame: &ShiftFrame, h: f64) -> Result<Self> {
        Self::graded(R_MIN, default_r_max(frame), h)
    }

    /// The same grid with extra panel boundaries.
    pub fn with_breaks(&self, extra: &[f64]) -> Result<Self> {
        let mut b = self.breaks.clone();
        b.extend(extra.iter().copied().filter(|&x| x > 0.0 && x < *self.breaks.last().unwrap()));
        Self::from_breaks(b)
    }

    pub fn r_max(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(*x)?;
        }
        Ok(s)
    }
}

pub fn default_r_max(frame: &ShiftFrame) -> f64 {
    40.0 / frame.lambda + 40.0 / frame.eta.sqrt()
}

fn graded_breaks(r_min: f64, r_max: f64, h: f64) -> Vec<f64> {
    let ratio = h.exp();
    let mut b = vec![0.0];
    let mut r = r_min.min(r_max);
    b.push(r);
    while r < r_max {
        let step = (r * (ratio - 1.0)).min(h);
        r = (r + step).min(r_max);
        if r_max - r < 1e-3 * step {
            r = r_max;
        }
        b.push(r);
    }
    b
}

fn gl_panel(a: f64, b: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for k in 0..4 {
        s += GL4_W[k] * f(c + h * GL4_X[k])?;
    }
    Ok(h * s)
}

/// The Friedrichs kernel `(1/W) Φ_κ(max(r,ρ)) F_κ(min(r,ρ))`, with
/// `1/W = −κΓ(1−κ)/ν`.
pub fn friedrichs_kernel(frame: &ShiftFrame, r: f64, rho: f64) -> Result<f64> {
    if !(r > 0.0 && rho > 0.0) {
        return Err(Error::Parameter(format!("kernel needs r, rho > 0, got ({r}, {rho})")));
    }
    let (lo, hi) = if r <= rho { (r, rho) } else { (rho, r) };
    let w = whittaker_w(frame.kappa, frame.lambda * hi)?.0;
    let m = crate::specfun::whittaker_m(frame.kappa, frame.lambda * lo)?.0;
    Ok(-frame.kappa * frame.gamma_1mk() / frame.nu * w * m)
}

/// `R_G g` for one right-hand side, with the two cumulative integrals
/// `A(r) = ∫₀^r F g` and `B(r) = ∫_r^∞ Φ g` tabulated at the panel breaks.
pub struct GreenAction<G> {
    frame: ShiftFrame,
    g: G,
    breaks: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    tail: f64,
    scale: f64,
}

impl<G: Fn(f64) -> Result<f64>> GreenAction<G> {
    pub fn new(frame: &ShiftFrame, g: G, grid: &QuadratureGrid) -> Result<Self> {
        let nb = grid.breaks.len();
        let mut pa = vec![0.0; nb - 1];
        let mut pb = vec![0.0; nb - 1];
        let mut scale = 0.0f64;
        for i in 0..nb - 1 {
            let mut sa = 0.0;
            let mut sb = 0.0;
            for k in 0..4 {
                let idx = 4 * i + k;
                let x = grid.nodes[idx];
                let w = grid.weights[idx];
                let s = fundamental_system(frame, x)?;
                let gx = g(x)?;
                sa += w * s.f * gx;
                sb += w * s.phi * gx;
                scale = scale.max((s.phi * gx).abs());
            }
            pa[i] = sa;
            pb[i] = sb;
        }
        let mut a = vec![0.0; nb];
        for i in 0..nb - 1 {
            a[i + 1] = a[i] + pa[i];
        }
        let mut b = vec![0.0; nb];
        for i in (0..nb - 1).rev() {
            b[i] = b[i + 1] + pb[i];
        }
        // ∫_R^∞ Φ g, estimated from the decay of Φ at the cut
        let r_max = grid.r_max();
        let tail = (phi(frame, r_max)? * g(r_max)?).abs() * 2.0 / frame.lambda;
        Ok(Self {
            frame: *frame,
            g,
            breaks: grid.breaks.clone(),
            a,
            b,
            tail,
            scale,
        })
    }

    /// Estimate of the neglected `∫_{R_max}^∞ Φ g`.
    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    /// Whether the truncated tail is small compared with the integrand.
    pub fn tail_ok(&self) -> bool {
        self.tail <= 1e-10 * self.scale.max(1e-300)
    }

    /// `(R_G g)(r)` for `0 < r ≤ R_max`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let r_max = *self.breaks.last().unwrap();
        if !(r > 0.0 && r <= r_max) {
            return Err(Error::Parameter(format!("r = {r} outside (0, {r_max}]")));
        }
        let i = match self.breaks.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.breaks.len() - 2),
            Err(i) => i - 1,
        };
        let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
        let frame = &self.frame;
        let g = &self.g;
        let a_part = if r > lo {
            gl_panel(lo, r, |x| Ok(fundamental_system(frame, x)?.f * g(x)?))?
        } else {
            0.0
        };
        let b_part = if r < hi {
            gl_panel(r, hi, |x| Ok(phi(frame, x)? * g(x)?))?
        } else {
            0.0
        };
        let a = self.a[i] + a_part;
        let b = self.b[i + 1] + b_part;
        let s = fundamental_system(frame, r)?;
        Ok((s.phi * a + s.f * b) / frame.wronskian())
    }
}

/// `(R_G g)(r)` at the given points. The grid is refined so that every point
/// is a panel boundary; a large truncated tail is reported as a warning.
pub fn apply_rg(
    frame: &ShiftFrame,
    g: impl Fn(f64) -> Result<f64>,
    grid: &QuadratureGrid,
    points: &[f64],
) -> Result<SampledFunction> {
    let grid = grid.with_breaks(points)?;
    let act = GreenAction::new(frame, g, &grid)?;
    let values = points.iter().map(|&r| act.eval(r)).collect::<Result<Vec<_>>>()?;
    let mut out = SampledFunction::new(points.to_vec(), values)?;
    if !act.tail_ok() {
        out.warnings.push(format!(
            "truncation tail {:e} at R_max = {} is not negligible",
            act.tail_estimate(),
            grid.r_max()
        ));
    }
    Ok(out)
}

/// `‖Φ_κ‖² = λ⁻¹ ∫₀^∞ 𝓦_{κ,1/2}(ρ)² dρ`.
pub fn phi_norm_sq(frame: &ShiftFrame) -> Result<f64> {
    let rho_max = 100.0 + 4.0 * frame.kappa.max(0.0) * 10.0;
    let grid = QuadratureGrid::graded(1e-14, rho_max, 0.25)?;
    let k = frame.kappa;
    let s = grid.integrate(|x| {
        let w = whittaker_w(k, x)?.0;
        Ok(w * w)
    })?;
    Ok(s / frame.lambda)
}

/// `Ψ_κ = R_G Φ_κ` as an evaluable object.
pub struct PsiKappa {
    action: GreenAction<Box<dyn Fn(f64) -> Result<f64>>>,
}

impl PsiKappa {
    pub fn new(frame: &ShiftFrame) -> Result<Self> {
        let grid = QuadratureGrid::for_frame(frame, DEFAULT_H)?;
        let f = *frame;
        let g: Box<dyn Fn(f64) -> Result<f64>> = Box::new(move |x| phi(&f, x));
        Ok(Self {
            action: GreenAction::new(frame, g, &grid)?,
        })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        self.action.eval(r)
    }
}

/// `Ψ_κ(r)`.
pub fn psi_kappa(frame: &ShiftFrame, r: f64) -> Result<f64> {
    PsiKappa::new(frame)?.eval(r)
}

fn spectral_guard(alpha: f64, f: f64) -> Result<()> {
    if (alpha - f).abs() < 1e-12 * (1.0 + alpha.abs()) {
        return Err(Error::SpectralPoint { alpha, f_nu_kappa: f });
    }
    Ok(())
}

/// Kernel of `(H_α + η)⁻¹` on the half-line:
/// `G(r,ρ) + Γ(1−κ)²/(4π) · Φ_κ(r)Φ_κ(ρ)/(α − 𝔉_{ν,κ})`.
pub fn krein_resolvent_radial(params: &CoulombParams, frame: &ShiftFrame, r: f64, rho: f64) -> Result<f64> {
    check_frame(params, frame)?;
    let g0 = friedrichs_kernel(frame, r, rho)?;
    match params.alpha {
        ExtendedReal::Infinite => Ok(g0),
        ExtendedReal::Finite(alpha) => {
            let f = f_nu_kappa(frame)?;
            spectral_guard(alpha, f)?;
            let g = frame.gamma_1mk();
            Ok(g0 + g * g / (4.0 * PI) * phi(frame, r)? * phi(frame, rho)? / (alpha - f))
        }
    }
}

/// `𝔤_{ν,κ}(x) = Γ(1−κ) Φ_κ(|x|) / (4π|x|)`.
pub fn g_nu_kappa(frame: &ShiftFrame, x_norm: f64) -> Result<f64> {
    Ok(frame.gamma_1mk() * phi(frame, x_norm)? / (4.0 * PI * x_norm))
}

/// The s-wave kernel of the three-dimensional resolvent at `|x|`, `|y|`,
/// together with `𝔤_{ν,κ}(x)`.
pub fn krein_resolvent_3d(params: &CoulombParams, frame: &ShiftFrame, x_norm: f64, y_norm: f64) -> Result<(f64, f64)> {
    check_frame(params, frame)?;
    let gx = g_nu_kappa(frame, x_norm)?;
    let base = friedrichs_kernel(frame, x_norm, y_norm)? / (4.0 * PI * x_norm * y_norm);
    let l0 = match params.alpha {
        ExtendedReal::Infinite => base,
        ExtendedReal::Finite(alpha) => {
            let f = f_nu_kappa(frame)?;
            spectral_guard(alpha, f)?;
            base + gx * g_nu_kappa(frame, y_norm)? / (alpha - f)
        }
    };
    Ok((l0, gx))
}

fn check_frame(params: &CoulombParams, frame: &ShiftFrame) -> Result<()> {
    if params.nu != frame.nu {
        return Err(Error::Parameter(format!(
            "frame built for nu = {} used with nu = {}",
            frame.nu, params.nu
        )));
    }
    Ok(())
}

/// `∫_ε^∞ g(r)²/r dr`, truncated where the frame's functions have decayed.
pub fn potential_form_partial(frame: &ShiftFrame, g: impl Fn(f64) -> Result<f64>, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::Parameter(format!("eps must lie in (0, 0.1], got {eps}")));
    }
    let grid = QuadratureGrid::from_breaks(
        graded_breaks(eps, default_r_max(frame), DEFAULT_H)
            .into_iter()
            .filter(|&x| x >= eps)
            .collect(),
    )?;
    grid.integrate(|r| {
        let v = g(r)?;
        Ok(v * v / r)
    })
}

/// Which resolvent kernel a [`KernelSample`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelKind {
    Friedrichs,
    Extension(ExtendedReal),
}

/// One evaluated kernel value with the frame used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub r: f64,
    pub rho: f64,
    pub value: f64,
    pub frame: ShiftFrame,
    pub which: KernelKind,
}

impl KernelSample {
    pub fn evaluate(frame: &ShiftFrame, which: KernelKind, r: f64, rho: f64) -> Result<Self> {
        let value = match which {
            KernelKind::Friedrichs => friedrichs_kernel(frame, r, rho)?,
            KernelKind::Extension(alpha) => {
                krein_resolvent_radial(&CoulombParams::new(frame.nu, alpha)?, frame, r, rho)?
            }
        };
        Ok(Self {
            r,
            rho,
            value,
            frame: *frame,
            which,
        })
    }
}

/// Discrete L² residual of `−f'' + (ν/r + η) f − g` on `r_i = a + i·h`,
/// with `f''` from the 5-point central difference. `f` must be available on
/// `[a − 2h, b + 2h]`.
pub fn green_identity_residual(
    frame: &ShiftFrame,
    f: impl Fn(f64) -> Result<f64>,
    g: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    h: f64,
) -> Result<f64> {
    let n = ((b - a) / h).round() as usize;
    let mut sum = 0.0;
    for i in 0..=n {
        let r = a + i as f64 * h;
        let fm2 = f(r - 2.0 * h)?;
        let fm1 = f(r - h)?;
        let f0 = f(r)?;
        let fp1 = f(r + h)?;
        let fp2 = f(r + 2.0 * h)?;
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let res = -d2 + (frame.nu / r + frame.eta) * f0 - g(r)?;
        sum += res * res * h;
    }
    Ok(sum.sqrt())
}

/// `(R_G g)` sampled on `[a − 2h, b + 2h]` with step `h`, using a grid of
/// mesh parameter `h`, returned as a lookup closure for
/// [`green_identity_residual`].
pub fn green_identity_check(
    frame: &ShiftFrame,
    g: impl Fn(f64) -> Result<f64> + Copy,
    a: f64,
    b: f64,
    h: f64,
) -> Result<f64> {
    let n = ((b - a) / h).round() as usize + 4;
    let pts: Vec<f64> = (0..=n).map(|i| a - 2.0 * h + i as f64 * h).collect();
    let grid = QuadratureGrid::for_frame(frame, h)?;
    let f = apply_rg(frame, g, &grid, &pts)?;
    let lookup = |r: f64| -> Result<f64> {
        let i = ((r - (a - 2.0 * h)) / h).round() as usize;
        Ok(f.values[i])
    };
    green_identity_residual(frame, lookup, g, a, b, h)
}

/// Product of the two Whittaker factors is positive on the diagonal.
pub fn friedrichs_diagonal(frame: &ShiftFrame, r: f64) -> Result<f64> {
    let p = whittaker(frame.kappa, frame.lambda * r)?;
    Ok(-frame.kappa * frame.gamma_1mk() / frame.nu * p.w * p.m)
}
