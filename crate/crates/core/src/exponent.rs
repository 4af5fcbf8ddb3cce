use std::fmt;
use std::str::FromStr;

use crate::error::{AuerbachError, Result};

/// The exponent `p` of an lp norm, restricted to `[1, ∞]`.
///
/// The polyhedral endpoints are distinguished variants rather than sentinel
/// floats; a finite value is always strictly greater than one.
#[derive(Clone, Copy, Debug)]
pub struct PExponent(Repr);

#[derive(Clone, Copy, Debug)]
enum Repr {
    One,
    /// `(p, q)`; the conjugate is kept so that dualizing twice is exact.
    Finite(f64, f64),
    Infinity,
}

impl PartialEq for PExponent {
    fn eq(&self, other: &Self) -> bool {
        match (self.0, other.0) {
            (Repr::One, Repr::One) | (Repr::Infinity, Repr::Infinity) => true,
            (Repr::Finite(a, _), Repr::Finite(b, _)) => a == b,
            _ => false,
        }
    }
}

impl PExponent {
    pub const ONE: PExponent = PExponent(Repr::One);
    pub const INFINITY: PExponent = PExponent(Repr::Infinity);

    /// `1.0` maps to [`PExponent::ONE`] and `f64::INFINITY` to
    /// [`PExponent::INFINITY`]; anything below one or NaN is rejected.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(AuerbachError::Domain(format!(
                "exponent p must satisfy p >= 1, got {value}"
            )));
        }
        Ok(if value == 1.0 {
            Self::ONE
        } else if value.is_infinite() {
            Self::INFINITY
        } else {
            PExponent(Repr::Finite(value, value / (value - 1.0)))
        })
    }

    /// The finite value when `1 < p < ∞`.
    pub fn finite(self) -> Option<f64> {
        match self.0 {
            Repr::Finite(p, _) => Some(p),
            _ => None,
        }
    }

    /// `1.0`, the finite value, or `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self.0 {
            Repr::One => 1.0,
            Repr::Finite(p, _) => p,
            Repr::Infinity => f64::INFINITY,
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self.0, Repr::One)
    }

    pub fn is_infinity(self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    /// True for the smooth, strictly convex norms `1 < p < ∞`.
    pub fn is_smooth(self) -> bool {
        matches!(self.0, Repr::Finite(..))
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual(self) -> PExponent {
        match self.0 {
            Repr::One => Self::INFINITY,
            Repr::Infinity => Self::ONE,
            Repr::Finite(p, q) => PExponent(Repr::Finite(q, p)),
        }
    }

    /// Finite `p > 1`, or a domain error naming `what`.
    pub fn require_smooth(self, what: &str) -> Result<f64> {
        self.finite().ok_or_else(|| {
            AuerbachError::Domain(format!("{what} requires a finite exponent p > 1, got p = {self}"))
        })
    }

    /// `1 / p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self.0 {
            Repr::One => 1.0,
            Repr::Finite(p, _) => 1.0 / p,
            Repr::Infinity => 0.0,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::One => f.write_str("1"),
            Repr::Infinity => f.write_str("inf"),
            Repr::Finite(p, _) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PExponent {
    type Err = AuerbachError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "+inf" => return Ok(Self::INFINITY),
            _ => {}
        }
        let value: f64 = t
            .parse()
            .map_err(|_| AuerbachError::Domain(format!("cannot parse exponent p from {s:?}")))?;
        Self::new(value)
    }
}
