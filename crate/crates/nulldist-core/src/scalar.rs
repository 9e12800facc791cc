//! Exact-or-float scalars for curve breakpoints.
//!
//! Fractal curve families are built by recursions whose breakpoints are
//! dyadic/triadic rationals; storing them exactly keeps the null-length
//! functional exact for rational-preserving time functions. Everything
//! else (quadrature output, lattice nodes) carries plain floats.

use core::cmp::Ordering;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i128>;

/// Rational to float. Exact whenever numerator and denominator are
/// exactly representable (in particular for all dyadic breakpoints of
/// the fractal families); otherwise within 2 ulp.
pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i128) -> Self {
        Scalar::Exact(Rational::from_integer(n))
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        Scalar::Exact(Rational::new(num, den))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Exact difference `self - other` when both sides are rational.
    pub fn exact_sub(&self, other: &Scalar) -> Option<Rational> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a - b),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

/// Sum of `|r|` over exact rationals, as a rational.
pub fn rational_abs_sum<'a>(items: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut acc = Rational::zero();
    for r in items {
        acc += r.abs();
    }
    acc
}
