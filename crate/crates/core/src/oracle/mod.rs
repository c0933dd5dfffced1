//! Independent cross-checks for the spectral solver. Nothing here calls into
//! [`crate::spectra`] or the Green's function code: the shooting solver
//! integrates the radial ODE directly, the matrix solver discretises the
//! quadratic form, and the eigenfunction check only uses the Whittaker
//! function and the boundary-trace fit.

mod eigenfunction;
mod fd;
mod shooting;

pub use eigenfunction::{verify_eigenfunction, EigenfunctionReport};
pub use fd::{fd_extrapolated, fd_spectrum, FdConfig, FdLevel, FdMesh};
pub use shooting::{shoot_eigenvalue, shooting_mismatch, ShootingConfig};
