//! Exact rationals used for every hypothesis bound. Comparisons are done by
//! the underlying cross-multiplication, never through floating point.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use serde::ser::{Serialize, Serializer};

/// Exact rational on 128-bit integers, serialized as `"num/den"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

pub fn rational(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

impl Rational {
    /// Reduced rational; panics on a zero denominator (callers construct
    /// denominators from strictly positive formulas).
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_int(v: i128) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
