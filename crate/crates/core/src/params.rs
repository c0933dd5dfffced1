use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A real number or the point at infinity.
///
/// The extension parameters `α` and `β` live on `ℝ ∪ {∞}`; `∞` labels the
/// Friedrichs extension and is kept as its own state rather than a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite => None,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// Non-finite floats map to [`ExtendedReal::Infinite`].
    fn from(x: f64) -> Self {
        if x.is_finite() {
            ExtendedReal::Finite(x)
        } else {
            ExtendedReal::Infinite
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "∞" => Ok(ExtendedReal::Infinite),
            _ => {
                let x: f64 = t
                    .parse()
                    .map_err(|_| Error::Parameter(format!("cannot parse '{s}' as a real or 'inf'")))?;
                if x.is_finite() {
                    Ok(ExtendedReal::Finite(x))
                } else {
                    Err(Error::Parameter(format!("'{s}' is not finite; spell infinity as 'inf'")))
                }
            }
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => serializer.serialize_f64(*x),
            ExtendedReal::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Ok(ExtendedReal::from(x)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Coupling `ν` and extension parameter `α` of one operator `H_α^(ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombParams {
    pub nu: f64,
    pub alpha: ExtendedReal,
}

impl CoulombParams {
    pub fn new(nu: f64, alpha: impl Into<ExtendedReal>) -> Result<Self> {
        if nu == 0.0 || !nu.is_finite() {
            return Err(Error::Parameter(format!(
                "coupling nu must be finite and non-zero, got {nu}"
            )));
        }
        Ok(Self {
            nu,
            alpha: alpha.into(),
        })
    }

    /// The Friedrichs realisation (`α = ∞`), i.e. the textbook hydrogenoid operator.
    pub fn friedrichs(nu: f64) -> Result<Self> {
        Self::new(nu, ExtendedReal::Infinite)
    }
}
