//! Self-adjoint realisations of the half-line Schrödinger–Coulomb operator
//! `-d²/dr² + ν/r` with a point interaction at the origin.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: real-argument Gamma, digamma, Kummer `M`, Tricomi `U` and the
//!   Whittaker pair `𝓜_{κ,1/2}`, `𝓦_{κ,1/2}`.
//! * [`radial`]: shift frames, the fundamental system, boundary traces
//!   `(g₀, g₁)` and the `α ↔ β` reparametrisation of the extensions.
//! * [`greens`]: the Friedrichs Green kernel, quadrature, `Ψ_κ`, `‖Φ_κ‖²` and
//!   the rank-one Kreĭn resolvents.
//! * [`spectra`]: the spectral function `𝔉_ν(E)` and the bracketed root solver
//!   for the perturbed hydrogenoid eigenvalues.
//! * [`oracle`]: independent shooting and finite-difference eigensolvers used
//!   to cross-check everything above.
//!
//! Units follow `2m = ħ = e = 1`.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod greens;
pub mod oracle;
pub mod params;
pub mod radial;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};
pub use greens::{KernelKind, KernelSample, QuadratureGrid, SampledFunction};
pub use params::{CoulombParams, ExtendedReal};
pub use radial::{BoundaryTrace, ExtensionBeta, ShiftFrame};
pub use specfun::{SpecfunResult, WhittakerPair, EULER_GAMMA};
pub use spectra::{SpectralLabel, SpectralPoint, SpectrumReport};
