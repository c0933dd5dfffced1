use thiserror::Error;

/// Errors raised anywhere in the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma or digamma evaluated exactly at a nonpositive integer.
    #[error("pole of {function} at x = {x}")]
    Pole { function: &'static str, x: f64 },

    /// Argument outside the domain of a function (e.g. `z <= 0` for U).
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// Physical or numerical parameters violate a precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The requested spectral point `-eta` is an eigenvalue of the extension,
    /// so the resolvent does not exist there.
    #[error("spectral point: alpha = {alpha} coincides with F(nu, kappa) = {f_nu_kappa}")]
    SpectralPoint { alpha: f64, f_nu_kappa: f64 },

    /// A root bracket could not be established or refined.
    #[error("bracketing failure: {0}")]
    Bracket(String),

    /// The boundary trace fit left a residual too large for the function to
    /// belong to the adjoint domain.
    #[error("not in adjoint domain: fit residual {residual:.3e} exceeds {tolerance:.3e}")]
    NotInAdjointDomain { residual: f64, tolerance: f64 },

    /// The oracle solvers disagree with their own consistency checks.
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
