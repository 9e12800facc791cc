//! Warped-product spacetimes `I ×_f Σ` with metric `g_f = -dt² + f(t)² σ`,
//! their causal relation, and the causal reach integral.
//!
//! A future-directed null curve parametrized by time satisfies
//! `-1 + f(t)² σ(α', α') = 0`, i.e. it covers base distance at speed
//! `1/f(t)`. The base distance reachable between two time levels is
//! therefore `∫ dt / f(t)`, and two points are causally related exactly
//! when the base separation does not exceed the reach of their time
//! separation. A conformal factor `ψ(t)² g` rescales both terms of the
//! metric and drops out of the null condition, so it never enters the
//! reach integrand; it is retained only so audits can check positivity.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::base::{base_distance, BasePoint, RiemannianBase};
use crate::error::Error;
use crate::quad;
use crate::Result;

/// Quadrature tolerance for the reach integral.
pub const REACH_TOL: f64 = 1e-9;
/// Grid size of the construction-time warping audit.
const AUDIT_GRID: usize = 10_000;
/// Slack allowed between declared bounds and the audit grid.
const AUDIT_SLACK: f64 = 1e-9;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A positive warping function with verified bounds.
#[derive(Clone)]
pub struct WarpingFunction {
    eval: Evaluator,
    pub f_min: f64,
    pub f_max: f64,
    pub label: String,
    pub registry_id: Option<String>,
    /// Set when the function is constant; enables closed forms.
    pub constant: Option<f64>,
}

impl core::fmt::Debug for WarpingFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("WarpingFunction")
            .field("label", &self.label)
            .field("f_min", &self.f_min)
            .field("f_max", &self.f_max)
            .field("constant", &self.constant)
            .finish()
    }
}

impl WarpingFunction {
    pub fn new(
        label: impl Into<String>,
        f_min: f64,
        f_max: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(f_min > 0.0 && f_max >= f_min) {
            return Err(Error::domain("need 0 < f_min <= f_max"));
        }
        Ok(WarpingFunction {
            eval: Arc::new(eval),
            f_min,
            f_max,
            label: label.into(),
            registry_id: None,
            constant: None,
        })
    }

    pub fn with_registry_id(mut self, id: impl Into<String>) -> Self {
        self.registry_id = Some(id.into());
        self
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0) {
            return Err(Error::domain("constant warping must be positive"));
        }
        let mut w = WarpingFunction::new(alloc::format!("f = {value}"), value, value, move |_| {
            value
        })?;
        w.constant = Some(value);
        Ok(w)
    }

    /// The trivial warping of a Lorentzian product.
    pub fn unit() -> Self {
        let mut w = WarpingFunction::constant(1.0).unwrap();
        w.registry_id = Some("unit".into());
        w
    }

    pub fn is_unit(&self) -> bool {
        self.constant == Some(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Check `f_min ≤ f ≤ f_max` and positivity on a dense grid over `[t0, t1]`.
    fn audit(&self, t0: f64, t1: f64) -> Result<()> {
        for k in 0..=AUDIT_GRID {
            let t = t0 + (t1 - t0) * k as f64 / AUDIT_GRID as f64;
            let v = self.eval(t);
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(alloc::format!(
                    "warping '{}' not positive at t = {t} (value {v})",
                    self.label
                )));
            }
            if v < self.f_min - AUDIT_SLACK || v > self.f_max + AUDIT_SLACK {
                return Err(Error::domain(alloc::format!(
                    "warping '{}' leaves declared bounds [{}, {}] at t = {t} (value {v})",
                    self.label,
                    self.f_min,
                    self.f_max
                )));
            }
        }
        Ok(())
    }
}

/// Smoothstep `3u² - 2u³` clamped to `[0, 1]`; the default bump shape for
/// the registry families (flat derivative at both ends).
pub fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Built-in warping families.
pub mod warp_registry {
    use super::*;

    /// `f(t) = t² + 1` with exact bounds on the given interval.
    pub fn t_squared_plus_one(t0: f64, t1: f64) -> WarpingFunction {
        let at = |t: f64| t * t + 1.0;
        let f_min = if t0 <= 0.0 && t1 >= 0.0 {
            1.0
        } else {
            at(t0).min(at(t1))
        };
        let f_max = at(t0).max(at(t1));
        WarpingFunction::new("f = t^2 + 1", f_min, f_max, move |t| t * t + 1.0)
            .unwrap()
            .with_registry_id("tsq_plus_one")
    }

    /// Bump profile `h` shared by the convergence families: constant `h0`
    /// on `[0, 1/2]`, smoothstep to `1` with flat ends on `[1/2, 1]`.
    fn bump(h0: f64, u: f64) -> f64 {
        if u <= 0.5 {
            h0
        } else {
            h0 + (1.0 - h0) * smoothstep(2.0 * u - 1.0)
        }
    }

    /// `f_j(t) = h(jt)` for `t ≤ 1/j`, then `1`; `h0 ∈ (0, 1)`.
    pub fn example51(h0: f64, j: u32) -> Result<WarpingFunction> {
        if !(0.0 < h0 && h0 < 1.0) {
            return Err(Error::domain("example51 needs h0 in (0, 1)"));
        }
        let jf = j as f64;
        let mut w = WarpingFunction::new(
            alloc::format!("example51 h0={h0} j={j}"),
            h0,
            1.0,
            move |t| {
                if t <= 1.0 / jf {
                    bump(h0, jf * t)
                } else {
                    1.0
                }
            },
        )?;
        w.registry_id = Some("example51".into());
        Ok(w)
    }

    /// Same shape with `h0 > 1` (decreasing bump); `f_j ∈ [1, h0]`.
    pub fn example52(h0: f64, j: u32) -> Result<WarpingFunction> {
        if !(h0 > 1.0) {
            return Err(Error::domain("example52 needs h0 > 1"));
        }
        let jf = j as f64;
        let mut w = WarpingFunction::new(
            alloc::format!("example52 h0={h0} j={j}"),
            1.0,
            h0,
            move |t| {
                if t <= 1.0 / jf {
                    bump(h0, jf * t)
                } else {
                    1.0
                }
            },
        )?;
        w.registry_id = Some("example52".into());
        Ok(w)
    }

    /// `f_j = 1/j` on `[0, 1-1/j]`, smoothstep ramp up to `1` at `t = 1`,
    /// then `1` on `[1, 2]`; the collapsing family.
    pub fn example53(j: u32) -> Result<WarpingFunction> {
        if j == 0 {
            return Err(Error::domain("example53 needs j >= 1"));
        }
        let jf = j as f64;
        let mut w = WarpingFunction::new(
            alloc::format!("example53 j={j}"),
            1.0 / jf,
            1.0,
            move |t| {
                if t <= 1.0 - 1.0 / jf {
                    1.0 / jf
                } else if t >= 1.0 {
                    1.0
                } else {
                    1.0 / jf + (1.0 - 1.0 / jf) * smoothstep(jf * t - (jf - 1.0))
                }
            },
        )?;
        w.registry_id = Some("example53".into());
        Ok(w)
    }

    /// Uniformly converging family `f_j = 1 + sin(t)/j` (for `t ∈ [0, 2]`
    /// the perturbation is nonnegative with sup `1/j`).
    pub fn uniform_sin(j: u32) -> Result<WarpingFunction> {
        if j == 0 {
            return Err(Error::domain("uniform_sin needs j >= 1"));
        }
        let jf = j as f64;
        let mut w = WarpingFunction::new(
            alloc::format!("uniform_sin j={j}"),
            1.0,
            1.0 + 1.0 / jf,
            move |t: f64| 1.0 + t.sin().max(0.0) / jf,
        )?;
        w.registry_id = Some("uniform_sin".into());
        Ok(w)
    }
}

/// A point `p = (t_p, p_Σ)` of `I × Σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: BasePoint,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: BasePoint) -> Self {
        SpacetimePoint { t, x }
    }
}

/// Causal relation of an ordered pair `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalRelation {
    /// `p ≤ q` (includes `p = q`).
    Before,
    /// `q ≤ p`.
    After,
    /// Not causally related.
    None,
}

impl CausalRelation {
    pub fn is_related(self) -> bool {
        !matches!(self, CausalRelation::None)
    }
}

/// A warped product spacetime over a closed time interval.
#[derive(Clone)]
pub struct WarpedSpacetime {
    interval: (f64, f64),
    pub base: RiemannianBase,
    pub warping: WarpingFunction,
    /// Optional conformal factor `ψ(t)`; positive, audited, and absent
    /// from all causal computations (it cancels in the null condition).
    conformal: Option<Evaluator>,
    pub conformal_label: Option<String>,
}

impl core::fmt::Debug for WarpedSpacetime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("WarpedSpacetime")
            .field("interval", &self.interval)
            .field("base", &self.base)
            .field("warping", &self.warping)
            .field("conformal_label", &self.conformal_label)
            .finish()
    }
}

impl WarpedSpacetime {
    pub fn new(
        interval: (f64, f64),
        base: RiemannianBase,
        warping: WarpingFunction,
    ) -> Result<Self> {
        let (t0, t1) = interval;
        if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::domain("time interval needs t0 < t1, finite"));
        }
        warping.audit(t0, t1)?;
        Ok(WarpedSpacetime {
            interval,
            base,
            warping,
            conformal: None,
            conformal_label: None,
        })
    }

    /// Lorentzian product `I × Σ` (unit warping).
    pub fn product(interval: (f64, f64), base: RiemannianBase) -> Result<Self> {
        WarpedSpacetime::new(interval, base, WarpingFunction::unit())
    }

    /// Conformally rescaled spacetime `ψ(t)² g`. The factor must be
    /// positive on `I`; it does not change cones, reach or null lengths.
    pub fn with_conformal_factor(
        mut self,
        label: impl Into<String>,
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let (t0, t1) = self.interval;
        for k in 0..=AUDIT_GRID {
            let t = t0 + (t1 - t0) * k as f64 / AUDIT_GRID as f64;
            let v = psi(t);
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(alloc::format!(
                    "conformal factor not positive at t = {t}"
                )));
            }
        }
        self.conformal = Some(Arc::new(psi));
        self.conformal_label = Some(label.into());
        Ok(self)
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn contains_time(&self, t: f64) -> bool {
        t >= self.interval.0 - 1e-12 && t <= self.interval.1 + 1e-12
    }

    pub fn check_point(&self, p: &SpacetimePoint) -> Result<()> {
        if !self.contains_time(p.t) {
            return Err(Error::domain(alloc::format!(
                "time {} outside interval [{}, {}]",
                p.t,
                self.interval.0,
                self.interval.1
            )));
        }
        base_distance(&self.base, &p.x, &p.x)?;
        Ok(())
    }

    pub fn is_product(&self) -> bool {
        self.warping.is_unit()
    }
}

/// Base distance a null curve can cover between the time levels `t_a`, `t_b`:
/// `∫ |dt| / f(t)` by adaptive quadrature (closed form for constant `f`).
pub fn causal_reach(spacetime: &WarpedSpacetime, t_a: f64, t_b: f64) -> Result<f64> {
    if !spacetime.contains_time(t_a) || !spacetime.contains_time(t_b) {
        return Err(Error::domain("reach endpoints outside the time interval"));
    }
    let (lo, hi) = if t_a <= t_b { (t_a, t_b) } else { (t_b, t_a) };
    if let Some(c) = spacetime.warping.constant {
        return Ok((hi - lo) / c);
    }
    let w = spacetime.warping.clone();
    quad::integrate(move |t| 1.0 / w.eval(t), lo, hi, REACH_TOL)
}

/// Causal relation of `p` and `q`: `p ≤ q` iff `t_p ≤ t_q` and the base
/// separation is within the causal reach of `[t_p, t_q]`. Reflexive.
pub fn is_causally_related(
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<CausalRelation> {
    spacetime.check_point(p)?;
    spacetime.check_point(q)?;
    let d = base_distance(&spacetime.base, &p.x, &q.x)?;
    let reach = causal_reach(spacetime, p.t, q.t)?;
    let tol = REACH_TOL * (1.0 + reach.abs());
    if d <= reach + tol {
        Ok(if p.t <= q.t {
            CausalRelation::Before
        } else {
            CausalRelation::After
        })
    } else {
        Ok(CausalRelation::None)
    }
}

/// Dense audit values of `f` over the interval; used by checks that need
/// pointwise orderings (cone monotonicity) or sup-norms of differences.
pub fn warping_samples(spacetime: &WarpedSpacetime, n: usize) -> Vec<(f64, f64)> {
    let (t0, t1) = spacetime.interval;
    (0..=n)
        .map(|k| {
            let t = t0 + (t1 - t0) * k as f64 / n as f64;
            (t, spacetime.warping.eval(t))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    fn minkowski_strip() -> WarpedSpacetime {
        WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn reach_unit_warping_is_time_span() {
        let st = minkowski_strip();
        assert!((causal_reach(&st, 0.0, 2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reach_arctan_oracle() {
        // f = t²+1: ∫_0^1 dt/f = arctan(1) = π/4
        let st = WarpedSpacetime::new(
            (-1.0, 1.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(-1.0, 1.0),
        )
        .unwrap();
        let r = causal_reach(&st, 0.0, 1.0).unwrap();
        assert!((r - FRAC_PI_4).abs() < 1e-9, "reach {r}");
    }

    #[test]
    fn reach_degenerate() {
        let st = minkowski_strip();
        assert_eq!(causal_reach(&st, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn reach_additivity_and_bounds() {
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(0.0, 2.0),
        )
        .unwrap();
        let (a, b, c) = (0.1, 0.9, 1.7);
        let whole = causal_reach(&st, a, c).unwrap();
        let split = causal_reach(&st, a, b).unwrap() + causal_reach(&st, b, c).unwrap();
        assert!((whole - split).abs() < 1e-8);
        // Δt/f_max ≤ reach ≤ Δt/f_min
        let dt = c - a;
        assert!(whole >= dt / st.warping.f_max - 1e-9);
        assert!(whole <= dt / st.warping.f_min + 1e-9);
    }

    #[test]
    fn reach_monotone_in_warping() {
        // f1 ≤ f2 pointwise ⇒ reach under f1 is at least reach under f2
        let base = RiemannianBase::interval(-2.0, 2.0).unwrap();
        let f1 = WarpedSpacetime::new((0.0, 2.0), base.clone(), WarpingFunction::constant(1.0).unwrap()).unwrap();
        let f2 = WarpedSpacetime::new((0.0, 2.0), base, WarpingFunction::constant(2.0).unwrap()).unwrap();
        let r1 = causal_reach(&f1, 0.3, 1.7).unwrap();
        let r2 = causal_reach(&f2, 0.3, 1.7).unwrap();
        assert!(r1 >= r2);
    }

    #[test]
    fn causal_relations() {
        let st = minkowski_strip();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(2.0, BasePoint::one(1.0));
        assert_eq!(is_causally_related(&st, &p, &q).unwrap(), CausalRelation::Before);
        assert_eq!(is_causally_related(&st, &q, &p).unwrap(), CausalRelation::After);
        assert_eq!(is_causally_related(&st, &p, &p).unwrap(), CausalRelation::Before);
    }

    #[test]
    fn level_pair_not_related_under_tsq() {
        let st = WarpedSpacetime::new(
            (-0.5, 0.5),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(-0.5, 0.5),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        assert_eq!(is_causally_related(&st, &p, &q).unwrap(), CausalRelation::None);
    }

    #[test]
    fn audit_rejects_bad_bounds() {
        let w = WarpingFunction::new("bad", 2.0, 3.0, |_| 1.0).unwrap();
        let r = WarpedSpacetime::new((0.0, 1.0), RiemannianBase::interval(0.0, 1.0).unwrap(), w);
        assert!(r.is_err());
    }

    #[test]
    fn registry_bounds_audit_clean() {
        for w in [
            warp_registry::example51(0.5, 4).unwrap(),
            warp_registry::example52(2.0, 4).unwrap(),
            warp_registry::example53(7).unwrap(),
            warp_registry::uniform_sin(4).unwrap(),
        ] {
            WarpedSpacetime::new((0.0, 2.0), RiemannianBase::circle(core::f64::consts::TAU).unwrap(), w)
                .unwrap();
        }
    }

    #[test]
    fn conformal_factor_does_not_change_reach() {
        let st = minkowski_strip();
        let resc = minkowski_strip()
            .with_conformal_factor("psi = 3", |_| 3.0)
            .unwrap();
        let a = causal_reach(&st, 0.25, 1.75).unwrap();
        let b = causal_reach(&resc, 0.25, 1.75).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
