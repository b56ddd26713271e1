use std::cmp::Ordering;
use std::fmt;

/// A real number or `+∞`.
///
/// Rate functions and log-moment generating functions take the value `+∞`
/// outside their effective domain; this type carries that explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    /// IEEE view, `+∞` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// `exp(-self)`, which is `0` at `+∞`.
    pub fn exp_neg(self) -> f64 {
        match self {
            ExtReal::Finite(x) => (-x).exp(),
            ExtReal::PosInf => 0.0,
        }
    }

    pub fn scale(self, k: f64) -> ExtReal {
        debug_assert!(k >= 0.0);
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(k * x),
            ExtReal::PosInf if k == 0.0 => ExtReal::ZERO,
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    pub fn ge(self, y: f64) -> bool {
        match self {
            ExtReal::Finite(x) => x >= y,
            ExtReal::PosInf => true,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInf) => Some(Ordering::Less),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}
