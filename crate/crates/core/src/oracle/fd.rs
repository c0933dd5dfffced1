//! Finite-element matrix oracle: piecewise-linear elements on a softplus
//! mesh for the quadratic form of the operator, lumped mass, Sturm-count
//! bisection, Richardson extrapolation under mesh doubling.
//!
//! For `ℓ = 0` and finite `α` the form on `[r_min, R]` is
//! `∫ (u'² + νu²/r) dr + σ u(r_min)²`, where `σ` is the log-derivative at
//! `r_min` of the short-distance expansion with `(g₀, g₁) = (1, 4πα)`. Integrating by parts against an element of
//! the domain shows this truncated Robin problem carries the boundary
//! condition `g₁ = 4παg₀`; the divergent `ν ln r_min` pieces cancel between
//! the integral and `σ`. For `α = ∞` or `ℓ ≥ 1` the node at `r_min` is clamped.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CoulombParams, ExtendedReal};

/// Graded nodes `r_i = c·ln(1 + e^{x_i})` on uniform `x_i`: geometric near 0,
/// uniform far out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdMesh {
    pub nodes: Vec<f64>,
}

impl FdMesh {
    pub fn softplus(r_min: f64, r_max: f64, scale: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && scale > 0.0 && n >= 10) {
            return Err(Error::Parameter("invalid softplus mesh".into()));
        }
        let inv = |r: f64| (r / scale).exp_m1().ln();
        let (x0, x1) = (inv(r_min), inv(r_max));
        let nodes = (0..=n)
            .map(|i| {
                let x = x0 + (x1 - x0) * i as f64 / n as f64;
                scale * x.exp().ln_1p()
            })
            .collect::<Vec<_>>();
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("softplus mesh is not strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Symmetric tridiagonal stiffness `K` and diagonal mass `M`.
struct Pencil {
    diag: Vec<f64>,
    off: Vec<f64>,
    mass: Vec<f64>,
}

fn assemble(params: &CoulombParams, ell: u32, mesh: &FdMesh) -> Pencil {
    let r = &mesh.nodes;
    let n = r.len();
    let nu = params.nu;
    let lsq = (ell * (ell + 1)) as f64;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut mass = vec![0.0; n];
    for i in 0..n - 1 {
        let (a, b) = (r[i], r[i + 1]);
        let h = b - a;
        let lg = (b / a).ln();
        diag[i] += 1.0 / h;
        diag[i + 1] += 1.0 / h;
        off[i] -= 1.0 / h;
        mass[i] += 0.5 * h;
        mass[i + 1] += 0.5 * h;
        // ∫ hat/r over the element, exact
        let left = (b * lg - h) / h;
        let right = (h - a * lg) / h;
        diag[i] += nu * left;
        diag[i + 1] += nu * right;
        if lsq > 0.0 {
            // ∫ hat/r² over the element, exact
            let left2 = (b / a - 1.0 - lg) / h;
            let right2 = (lg - 1.0 + a / b) / h;
            diag[i] += lsq * left2;
            diag[i + 1] += lsq * right2;
        }
    }
    // σ(E) = u'/u at r_min for u = 1 + νr ln r + 4παr + a₂r² ln r + b₂r²;
    // to the order kept, σ(E) = σ(0) − E·r_min, and the E part moves into M.
    let robin = match (ell, params.alpha) {
        (0, ExtendedReal::Finite(alpha)) => {
            let r0 = r[0];
            let l = r0.ln();
            let g1 = 4.0 * PI * alpha;
            let a2 = 0.5 * nu * nu;
            let b2 = 0.5 * (nu * g1 - 3.0 * a2);
            let g = 1.0 + nu * r0 * l + g1 * r0 + a2 * r0 * r0 * l + b2 * r0 * r0;
            let dg = nu * (l + 1.0) + g1 + a2 * r0 * (2.0 * l + 1.0) + 2.0 * b2 * r0;
            Some(dg / g)
        }
        _ => None,
    };
    // outer node is clamped; inner node clamped unless Robin
    let start = if robin.is_some() { 0 } else { 1 };
    if let Some(s) = robin {
        diag[0] += s;
        mass[0] += r[0];
    }
    let end = n - 1;
    Pencil {
        diag: diag[start..end].to_vec(),
        off: off[start..end - 1].to_vec(),
        mass: mass[start..end].to_vec(),
    }
}

impl Pencil {
    /// Number of eigenvalues of `K − xM` below zero (Sylvester inertia).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x * self.mass[i] - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs() * self.mass[i]);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th lowest eigenvalue (1-based) below zero by bisection.
    fn eigenvalue(&self, k: usize) -> Result<f64> {
        if self.count_below(0.0) < k {
            return Err(Error::Oracle(format!("discretisation has fewer than {k} bound states")));
        }
        let mut lo = -1.0;
        while self.count_below(lo) >= k {
            lo *= 2.0;
            if lo < -1e30 {
                return Err(Error::Oracle("no lower bound for the discrete spectrum".into()));
            }
        }
        let mut hi = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi.abs() {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Lowest `k` eigenvalues of the discretisation on `mesh`.
pub fn fd_spectrum(params: &CoulombParams, ell: u32, mesh: &FdMesh, k: usize) -> Result<Vec<f64>> {
    if mesh.len() < 10 {
        return Err(Error::Parameter("mesh too small".into()));
    }
    let pencil = assemble(params, ell, mesh);
    (1..=k).map(|j| pencil.eigenvalue(j)).collect()
}

/// Mesh controls for [`fd_extrapolated`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Inner radius when the `r_min` node carries the Robin condition.
    pub r_min: f64,
    /// Inner radius when the `r_min` node is clamped; the Dirichlet shift is
    /// `O(r_min)` so this one sits much closer to the origin.
    pub r_min_clamped: f64,
    pub r_max: f64,
    pub scale: f64,
    /// Interval count of the coarsest of three meshes.
    pub n_coarse: usize,
    pub ell: u32,
}

impl FdConfig {
    /// A mesh that holds the `k`-th level `E_k` comfortably: the box reaches
    /// 40 decay lengths, the uniform region has unit-scaled spacing.
    pub fn for_levels(e_highest: f64, ell: u32) -> Self {
        let r_max = (40.0 / (-e_highest).sqrt()).max(40.0);
        Self {
            r_min: 1e-6,
            r_min_clamped: 1e-12,
            r_max,
            scale: 1.0,
            n_coarse: 4000 + (20.0 * r_max) as usize,
            ell,
        }
    }
}

/// One extrapolated level with the observed convergence ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdLevel {
    pub e: f64,
    /// `(E_N − E_{2N})/(E_{2N} − E_{4N})`, about 4 for clean second order.
    pub ratio: f64,
    /// `|E_extrapolated − E_{4N}|`.
    pub error_est: f64,
    /// Set when the ratio is far from 4.
    pub flagged: bool,
}

/// Lowest `k` levels on meshes of `N`, `2N`, `4N` intervals, two rounds of
/// Richardson extrapolation in `h²`, `h⁴`.
pub fn fd_extrapolated(params: &CoulombParams, cfg: &FdConfig, k: usize) -> Result<Vec<FdLevel>> {
    let clamped = cfg.ell > 0 || params.alpha.is_infinite();
    let r_min = if clamped { cfg.r_min_clamped } else { cfg.r_min };
    let mut levels = Vec::with_capacity(3);
    for m in [1, 2, 4] {
        let mesh = FdMesh::softplus(r_min, cfg.r_max, cfg.scale, cfg.n_coarse * m)?;
        levels.push(fd_spectrum(params, cfg.ell, &mesh, k)?);
    }
    Ok((0..k)
        .map(|j| {
            let (e1, e2, e4) = (levels[0][j], levels[1][j], levels[2][j]);
            let r12 = (4.0 * e2 - e1) / 3.0;
            let r24 = (4.0 * e4 - e2) / 3.0;
            let e = (16.0 * r24 - r12) / 15.0;
            let ratio = (e1 - e2) / (e2 - e4);
            FdLevel {
                e,
                ratio,
                error_est: (e - e4).abs(),
                flagged: !(2.5..=6.0).contains(&ratio),
            }
        })
        .collect())
}
