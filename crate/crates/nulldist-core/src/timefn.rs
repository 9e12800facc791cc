//! Generalized time functions.
//!
//! The registry carries the canonical time `τ = t`, the smooth reshapings
//! used by the causality checks, and the discontinuous step/sqrt examples.
//! Increments `τ(t₂) - τ(t₁)` are computed exactly over rationals where
//! the definition permits (canonical, step), and by cancellation-free
//! rearrangement otherwise (`√t₂ - √t₁ = (t₂ - t₁)/(√t₂ + √t₁)`); the
//! null-length functional sums increments, so per-segment accuracy is
//! what keeps million-segment fractal curves at full precision.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::{Float, One, Zero};

use crate::error::Error;
use crate::scalar::{Rational, Scalar};
use crate::spacetime::SpacetimePoint;
use crate::Result;

type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A (generalized) time function `τ(t, x) = φ(t)`.
#[derive(Clone)]
pub enum TimeFunction {
    /// `τ = t`.
    Canonical,
    /// `τ = t³`; continuous but not anti-Lipschitz at `t = 0`.
    Cubed,
    /// `τ = t + 1` for `t > 0`, `0` at `t = 0`, `t - 1` for `t < 0`.
    Step,
    /// `τ = √t + 1` for `t > 1`, `√t` on `[0, 1]`, `t` for `t ≤ 0`;
    /// jump of size 1 at `t = 1`.
    Sqrt,
    /// `τ = √t` for `t ≥ 0`, `t` below; the continuous reshaping.
    SqrtReshaped,
    /// `τ = t + t³/3`, with `φ' = 1 + t² > 0`.
    CubicPhi,
    /// Custom smooth monotone reshaping with its derivative.
    Smooth { label: String, phi: Fn1, dphi: Fn1 },
}

/// An increment of `τ`, exact when the definition allows.
#[derive(Debug, Clone)]
pub enum DeltaTau {
    Exact(Rational),
    Float(f64),
}

impl DeltaTau {
    pub fn to_f64(&self) -> f64 {
        match self {
            DeltaTau::Exact(r) => Scalar::Exact(r.clone()).to_f64(),
            DeltaTau::Float(x) => *x,
        }
    }
}

impl core::fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

fn sqrt_branch_delta(a: f64, b: f64) -> f64 {
    // √b - √a for 0 ≤ a ≤ b without cancellation
    if a == b {
        return 0.0;
    }
    let (sa, sb) = (a.sqrt(), b.sqrt());
    if sa + sb == 0.0 {
        0.0
    } else {
        (b - a) / (sa + sb)
    }
}

impl TimeFunction {
    pub fn smooth(
        label: impl Into<String>,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dphi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TimeFunction::Smooth {
            label: label.into(),
            phi: Arc::new(phi),
            dphi: Arc::new(dphi),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            TimeFunction::Canonical => "canonical",
            TimeFunction::Cubed => "t_cubed",
            TimeFunction::Step => "step",
            TimeFunction::Sqrt => "sqrt",
            TimeFunction::SqrtReshaped => "sqrt_reshaped",
            TimeFunction::CubicPhi => "cubic_phi",
            TimeFunction::Smooth { label, .. } => label,
        }
    }

    /// Registry lookup by identifier.
    pub fn from_registry(id: &str) -> Result<Self> {
        Ok(match id {
            "canonical" => TimeFunction::Canonical,
            "t_cubed" => TimeFunction::Cubed,
            "step" => TimeFunction::Step,
            "sqrt" => TimeFunction::Sqrt,
            "sqrt_reshaped" => TimeFunction::SqrtReshaped,
            "cubic_phi" => TimeFunction::CubicPhi,
            other => {
                return Err(Error::domain(alloc::format!(
                    "unknown time function registry id '{other}'"
                )))
            }
        })
    }

    pub fn registry_ids() -> [&'static str; 6] {
        [
            "canonical",
            "t_cubed",
            "step",
            "sqrt",
            "sqrt_reshaped",
            "cubic_phi",
        ]
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, TimeFunction::Step | TimeFunction::Sqrt)
    }

    /// Jump locations to be resolved exactly by lattice time grids.
    pub fn jump_locations(&self) -> Vec<f64> {
        match self {
            TimeFunction::Step => alloc::vec![0.0],
            TimeFunction::Sqrt => alloc::vec![1.0],
            _ => Vec::new(),
        }
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Canonical => t,
            TimeFunction::Cubed => t * t * t,
            TimeFunction::Step => {
                if t > 0.0 {
                    t + 1.0
                } else if t < 0.0 {
                    t - 1.0
                } else {
                    0.0
                }
            }
            TimeFunction::Sqrt => {
                if t > 1.0 {
                    t.sqrt() + 1.0
                } else if t >= 0.0 {
                    t.sqrt()
                } else {
                    t
                }
            }
            TimeFunction::SqrtReshaped => {
                if t >= 0.0 {
                    t.sqrt()
                } else {
                    t
                }
            }
            TimeFunction::CubicPhi => t + t * t * t / 3.0,
            TimeFunction::Smooth { phi, .. } => phi(t),
        }
    }

    /// `dτ/dt` for the smooth kinds; `None` where not differentiable
    /// (used by the profile solver to refuse non-smooth reshapings).
    pub fn density(&self, t: f64) -> Option<f64> {
        match self {
            TimeFunction::Canonical => Some(1.0),
            TimeFunction::Cubed => Some(3.0 * t * t),
            TimeFunction::CubicPhi => Some(1.0 + t * t),
            TimeFunction::Smooth { dphi, .. } => Some(dphi(t)),
            _ => None,
        }
    }

    /// `τ(t₂) - τ(t₁)`, exact over rationals for the rational-preserving
    /// kinds and cancellation-free otherwise.
    pub fn delta(&self, t1: &Scalar, t2: &Scalar) -> DeltaTau {
        match self {
            TimeFunction::Canonical => {
                if let Some(d) = t2.exact_sub(t1) {
                    return DeltaTau::Exact(d);
                }
                DeltaTau::Float(t2.to_f64() - t1.to_f64())
            }
            TimeFunction::Step => {
                if let (Some(a), Some(b)) = (t1.as_exact(), t2.as_exact()) {
                    let tau = |r: &Rational| -> Rational {
                        if r > &Rational::zero() {
                            r + Rational::one()
                        } else if r < &Rational::zero() {
                            r - Rational::one()
                        } else {
                            Rational::zero()
                        }
                    };
                    return DeltaTau::Exact(tau(b) - tau(a));
                }
                DeltaTau::Float(self.eval_t(t2.to_f64()) - self.eval_t(t1.to_f64()))
            }
            TimeFunction::Sqrt | TimeFunction::SqrtReshaped => {
                let (a, b) = (t1.to_f64(), t2.to_f64());
                let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
                // identity below 0, square root above, and for the Sqrt
                // kind an extra +1 jump when crossing t = 1
                let mut d = if hi <= 0.0 {
                    hi - lo
                } else if lo >= 0.0 {
                    sqrt_branch_delta(lo, hi)
                } else {
                    (0.0 - lo) + sqrt_branch_delta(0.0, hi)
                };
                if matches!(self, TimeFunction::Sqrt) && lo <= 1.0 && hi > 1.0 {
                    d += 1.0;
                }
                DeltaTau::Float(sign * d)
            }
            _ => DeltaTau::Float(self.eval_t(t2.to_f64()) - self.eval_t(t1.to_f64())),
        }
    }

    /// Audit strict increase on a dense grid over `[t0, t1]`.
    pub fn audit_increasing(&self, t0: f64, t1: f64) -> Result<()> {
        let n = 4096;
        let mut prev = self.eval_t(t0);
        for k in 1..=n {
            let t = t0 + (t1 - t0) * k as f64 / n as f64;
            let v = self.eval_t(t);
            if !(v > prev) && t > t0 {
                return Err(Error::domain(alloc::format!(
                    "time function '{}' not strictly increasing near t = {t}",
                    self.label()
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

/// `τ(p)`; for the canonical kind this is the time coordinate itself.
pub fn evaluate_time(tf: &TimeFunction, p: &SpacetimePoint) -> f64 {
    tf.eval_t(p.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BasePoint;

    #[test]
    fn canonical_and_cubed_eval() {
        let p = SpacetimePoint::new(1.5, BasePoint::one(0.0));
        assert_eq!(evaluate_time(&TimeFunction::Canonical, &p), 1.5);
        let q = SpacetimePoint::new(2.0, BasePoint::one(0.0));
        assert_eq!(evaluate_time(&TimeFunction::Cubed, &q), 8.0);
    }

    #[test]
    fn sqrt_registry_values() {
        let p = SpacetimePoint::new(1.0, BasePoint::one(0.0));
        assert_eq!(evaluate_time(&TimeFunction::Sqrt, &p), 1.0);
        let q = SpacetimePoint::new(4.0, BasePoint::one(0.0));
        assert_eq!(evaluate_time(&TimeFunction::Sqrt, &q), 3.0);
        let r = SpacetimePoint::new(-2.0, BasePoint::one(0.0));
        assert_eq!(evaluate_time(&TimeFunction::Sqrt, &r), -2.0);
    }

    #[test]
    fn step_delta_includes_jump() {
        let d = TimeFunction::Step.delta(&Scalar::ratio(-1, 2), &Scalar::ratio(1, 2));
        match d {
            DeltaTau::Exact(r) => assert_eq!(r, Rational::new(3, 1)),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn sqrt_delta_matches_direct_eval() {
        let tf = TimeFunction::Sqrt;
        for (a, b) in [(-0.5, 0.25), (0.25, 0.75), (0.5, 2.0), (1.5, 3.0), (-1.0, 2.0)] {
            let d = tf
                .delta(&Scalar::Float(a), &Scalar::Float(b))
                .to_f64();
            let direct = tf.eval_t(b) - tf.eval_t(a);
            assert!((d - direct).abs() < 1e-12, "a={a} b={b} d={d} direct={direct}");
            let rev = tf.delta(&Scalar::Float(b), &Scalar::Float(a)).to_f64();
            assert!((d + rev).abs() < 1e-15);
        }
    }

    #[test]
    fn sqrt_delta_is_cancellation_free() {
        // near t = 1 the naive difference loses ~10 digits; the stable form keeps them
        let tf = TimeFunction::SqrtReshaped;
        let a = 1.0 - 2f64.powi(-19);
        let d = tf.delta(&Scalar::Float(a), &Scalar::Float(1.0)).to_f64();
        let exact = 2f64.powi(-19) / (1.0 + a.sqrt());
        assert!((d - exact).abs() < 1e-18);
    }

    #[test]
    fn audits() {
        assert!(TimeFunction::Canonical.audit_increasing(-1.0, 1.0).is_ok());
        assert!(TimeFunction::Cubed.audit_increasing(-1.0, 1.0).is_ok());
        assert!(TimeFunction::Step.audit_increasing(-1.0, 1.0).is_ok());
        assert!(TimeFunction::Sqrt.audit_increasing(0.0, 2.0).is_ok());
        let bad = TimeFunction::smooth("sin", |t| t.sin(), |t| t.cos());
        assert!(bad.audit_increasing(0.0, 6.0).is_err());
    }
}
