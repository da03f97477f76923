use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An `L^p` exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinite)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Self::Finite(p))
        } else {
            Err(Error::Argument(format!("exponent must lie in [1, inf], got {p}")))
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinite => f64::INFINITY,
        }
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Self::Infinite => Self::Finite(1.0),
            Self::Finite(1.0) => Self::Infinite,
            Self::Finite(p) => Self::Finite(p / (p - 1.0)),
        }
    }
}

/// Conjugate exponent of `p`, with the endpoint conventions `1 ↔ ∞`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    Ok(Exponent::new(p)?.conjugate().value())
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::Infinite);
        }
        if let Some((num, den)) = t.split_once('/') {
            let (num, den): (f64, f64) = (
                num.trim().parse().map_err(|_| Error::Argument(format!("bad exponent {s:?}")))?,
                den.trim().parse().map_err(|_| Error::Argument(format!("bad exponent {s:?}")))?,
            );
            return Self::new(num / den);
        }
        Self::new(t.parse().map_err(|_| Error::Argument(format!("bad exponent {s:?}")))?)
    }
}
