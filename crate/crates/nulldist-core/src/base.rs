//! Exact geodesic-distance oracles for the Riemannian bases `(Σ, σ)`.
//!
//! Only bases with closed-form geodesic distance are supported, so every
//! distance downstream inherits exactness from `d_σ`. All types are
//! immutable and all operations pure.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// A point of the base manifold in its chart.
///
/// One coordinate for `Interval` / `Circle`, two for `FlatTorus`
/// (per-axis positions) and `RoundSphere` (polar angle `θ ∈ [0, π]`,
/// azimuth `φ ∈ [0, 2π)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub coords: Vec<f64>,
}

impl BasePoint {
    pub fn one(x: f64) -> Self {
        BasePoint {
            coords: alloc::vec![x],
        }
    }
    pub fn two(a: f64, b: f64) -> Self {
        BasePoint {
            coords: alloc::vec![a, b],
        }
    }
}

/// Tie-break rule for non-unique minimizing geodesics (circle antipodes,
/// sphere antipodes). `Positive` walks in the direction of increasing
/// chart coordinate; it is the default so curve constructions stay
/// deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeodesicOrientation {
    Positive,
    Negative,
}

impl Default for GeodesicOrientation {
    fn default() -> Self {
        GeodesicOrientation::Positive
    }
}

/// A base manifold with exact geodesic distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiemannianBase {
    /// Closed interval `[min, max]`; `open` marks the incomplete (open)
    /// variant used by the causality counterexamples. Distances are the
    /// same either way, only the completeness flag differs.
    Interval {
        min: f64,
        max: f64,
        #[serde(default)]
        open: bool,
    },
    /// Circle of the given circumference, chart angle in `[0, 2π)`.
    Circle { circumference: f64 },
    /// Flat torus with side lengths `l1 × l2`.
    FlatTorus { l1: f64, l2: f64 },
    /// Round sphere of the given radius.
    RoundSphere { radius: f64 },
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// SplitMix64 step; turns a seed into a chart phase in `[0, 1)`.
fn seed_phase(seed: u64) -> f64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Golden-ratio conjugate, the rotation of the 1-D low-discrepancy sample.
const GOLDEN: f64 = 0.618_033_988_749_894_9;
/// Plastic-constant pair driving the 2-D (R2) low-discrepancy sample.
const PLASTIC: [f64; 2] = [0.754_877_666_246_692_9, 0.569_840_290_998_053_2];

impl RiemannianBase {
    pub fn interval(min: f64, max: f64) -> Result<Self> {
        if !(max > min) {
            return Err(Error::domain("interval needs max > min"));
        }
        Ok(RiemannianBase::Interval {
            min,
            max,
            open: false,
        })
    }

    pub fn circle(circumference: f64) -> Result<Self> {
        if !(circumference > 0.0) {
            return Err(Error::domain("circumference must be positive"));
        }
        Ok(RiemannianBase::Circle { circumference })
    }

    pub fn flat_torus(l1: f64, l2: f64) -> Result<Self> {
        if !(l1 > 0.0 && l2 > 0.0) {
            return Err(Error::domain("torus side lengths must be positive"));
        }
        Ok(RiemannianBase::FlatTorus { l1, l2 })
    }

    pub fn round_sphere(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::domain("sphere radius must be positive"));
        }
        Ok(RiemannianBase::RoundSphere { radius })
    }

    /// Completeness of `(Σ, d_σ)` as a metric space.
    pub fn is_complete(&self) -> bool {
        match self {
            RiemannianBase::Interval { open, .. } => !open,
            _ => true,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            RiemannianBase::Interval { .. } | RiemannianBase::Circle { .. } => 1,
            RiemannianBase::FlatTorus { .. } | RiemannianBase::RoundSphere { .. } => 2,
        }
    }

    /// Diameter of `(Σ, d_σ)`.
    pub fn diameter(&self) -> f64 {
        match self {
            RiemannianBase::Interval { min, max, .. } => max - min,
            RiemannianBase::Circle { circumference } => 0.5 * circumference,
            RiemannianBase::FlatTorus { l1, l2 } => (0.25 * (l1 * l1 + l2 * l2)).sqrt(),
            RiemannianBase::RoundSphere { radius } => PI * radius,
        }
    }

    /// Riemannian volume (length for the 1-D bases).
    pub fn volume(&self) -> f64 {
        match self {
            RiemannianBase::Interval { min, max, .. } => max - min,
            RiemannianBase::Circle { circumference } => *circumference,
            RiemannianBase::FlatTorus { l1, l2 } => l1 * l2,
            RiemannianBase::RoundSphere { radius } => 4.0 * PI * radius * radius,
        }
    }

    fn check_point(&self, p: &BasePoint) -> Result<()> {
        let need = self.dim();
        if p.coords.len() != need {
            return Err(Error::domain(alloc::format!(
                "point has {} coordinates, base needs {}",
                p.coords.len(),
                need
            )));
        }
        match self {
            RiemannianBase::Interval { min, max, .. } => {
                let x = p.coords[0];
                if x < *min - 1e-12 || x > *max + 1e-12 {
                    return Err(Error::domain(alloc::format!(
                        "coordinate {x} outside interval [{min}, {max}]"
                    )));
                }
            }
            RiemannianBase::Circle { .. } => {
                let a = p.coords[0];
                if !(0.0..TAU + 1e-12).contains(&a) {
                    return Err(Error::domain(alloc::format!(
                        "circle angle {a} not normalized to [0, 2π)"
                    )));
                }
            }
            RiemannianBase::FlatTorus { l1, l2 } => {
                for (x, l) in p.coords.iter().zip([l1, l2]) {
                    if *x < -1e-12 || *x > *l + 1e-12 {
                        return Err(Error::domain(alloc::format!(
                            "torus coordinate {x} outside [0, {l})"
                        )));
                    }
                }
            }
            RiemannianBase::RoundSphere { .. } => {
                let th = p.coords[0];
                if !(-1e-12..=PI + 1e-12).contains(&th) {
                    return Err(Error::domain(alloc::format!(
                        "polar angle {th} outside [0, π]"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn circle_coord_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).abs() % period;
    d.min(period - d)
}

fn sphere_to_cartesian(radius: f64, p: &BasePoint) -> [f64; 3] {
    let (th, ph) = (p.coords[0], p.coords[1]);
    [
        radius * th.sin() * ph.cos(),
        radius * th.sin() * ph.sin(),
        radius * th.cos(),
    ]
}

fn sphere_from_cartesian(radius: f64, v: [f64; 3]) -> BasePoint {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let th = (v[2] / n).clamp(-1.0, 1.0).acos();
    let mut ph = v[1].atan2(v[0]);
    if ph < 0.0 {
        ph += TAU;
    }
    let _ = radius;
    BasePoint::two(th, ph)
}

/// Exact geodesic distance `d_σ(x, y)`.
pub fn base_distance(base: &RiemannianBase, x: &BasePoint, y: &BasePoint) -> Result<f64> {
    base.check_point(x)?;
    base.check_point(y)?;
    Ok(match base {
        RiemannianBase::Interval { .. } => (x.coords[0] - y.coords[0]).abs(),
        RiemannianBase::Circle { circumference } => {
            let unit = circle_coord_distance(x.coords[0], y.coords[0], TAU);
            unit * circumference / TAU
        }
        RiemannianBase::FlatTorus { l1, l2 } => {
            let d1 = circle_coord_distance(x.coords[0], y.coords[0], *l1);
            let d2 = circle_coord_distance(x.coords[1], y.coords[1], *l2);
            (d1 * d1 + d2 * d2).sqrt()
        }
        RiemannianBase::RoundSphere { radius } => {
            let a = sphere_to_cartesian(1.0, x);
            let b = sphere_to_cartesian(1.0, y);
            let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
            radius * dot.acos()
        }
    })
}

fn circle_interpolate(a: f64, b: f64, s: f64, orient: GeodesicOrientation) -> f64 {
    let mut delta = b - a;
    // shift into (-π, π]; exact antipodes resolve by orientation
    while delta > PI {
        delta -= TAU;
    }
    while delta <= -PI {
        delta += TAU;
    }
    if (delta + PI).abs() < 1e-15 || (delta - PI).abs() < 1e-15 {
        delta = match orient {
            GeodesicOrientation::Positive => PI,
            GeodesicOrientation::Negative => -PI,
        };
    }
    let mut r = a + s * delta;
    r %= TAU;
    if r < 0.0 {
        r += TAU;
    }
    r
}

/// Point at fraction `s ∈ [0, 1]` along a minimizing geodesic from `x` to `y`.
///
/// Ties (circle or sphere antipodes) are broken by `orient`.
pub fn geodesic_interpolate_oriented(
    base: &RiemannianBase,
    x: &BasePoint,
    y: &BasePoint,
    s: f64,
    orient: GeodesicOrientation,
) -> Result<BasePoint> {
    base.check_point(x)?;
    base.check_point(y)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain("interpolation parameter must lie in [0, 1]"));
    }
    Ok(match base {
        RiemannianBase::Interval { .. } => {
            BasePoint::one(x.coords[0] + s * (y.coords[0] - x.coords[0]))
        }
        RiemannianBase::Circle { .. } => {
            BasePoint::one(circle_interpolate(x.coords[0], y.coords[0], s, orient))
        }
        RiemannianBase::FlatTorus { l1, l2 } => {
            let f1 = circle_interpolate(
                x.coords[0] / l1 * TAU,
                y.coords[0] / l1 * TAU,
                s,
                orient,
            ) / TAU
                * l1;
            let f2 = circle_interpolate(
                x.coords[1] / l2 * TAU,
                y.coords[1] / l2 * TAU,
                s,
                orient,
            ) / TAU
                * l2;
            BasePoint::two(f1, f2)
        }
        RiemannianBase::RoundSphere { radius } => {
            let a = sphere_to_cartesian(1.0, x);
            let b = sphere_to_cartesian(1.0, y);
            let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
            let ang = dot.acos();
            if ang < 1e-15 {
                return Ok(x.clone());
            }
            let b_eff = if (ang - PI).abs() < 1e-12 {
                // antipodal: route through a deterministic waypoint orthogonal to a
                let w = if a[0].abs() < 0.9 {
                    [0.0, -a[2], a[1]]
                } else {
                    [-a[2], 0.0, a[0]]
                };
                let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
                let sign = match orient {
                    GeodesicOrientation::Positive => 1.0,
                    GeodesicOrientation::Negative => -1.0,
                };
                [sign * w[0] / n, sign * w[1] / n, sign * w[2] / n]
            } else {
                // component of b orthogonal to a, normalized
                let mut u = [b[0] - dot * a[0], b[1] - dot * a[1], b[2] - dot * a[2]];
                let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
                u = [u[0] / n, u[1] / n, u[2] / n];
                u
            };
            let t = s * ang;
            let v = [
                a[0] * t.cos() + b_eff[0] * t.sin(),
                a[1] * t.cos() + b_eff[1] * t.sin(),
                a[2] * t.cos() + b_eff[2] * t.sin(),
            ];
            sphere_from_cartesian(*radius, v)
        }
    })
}

/// [`geodesic_interpolate_oriented`] with the positive-orientation tie rule.
pub fn geodesic_interpolate(
    base: &RiemannianBase,
    x: &BasePoint,
    y: &BasePoint,
    s: f64,
) -> Result<BasePoint> {
    geodesic_interpolate_oriented(base, x, y, s, GeodesicOrientation::Positive)
}

/// Deterministic quasi-uniform sample of `n ≥ 1` points.
///
/// The seed only rotates the low-discrepancy sequence through its chart,
/// so the same seed reproduces the same list and different seeds keep the
/// spacing guarantees of the underlying rule (evenly spaced on intervals,
/// golden-angle on circles, R2 on tori, Fibonacci lattice on spheres).
pub fn sample_points(base: &RiemannianBase, n: usize, seed: u64) -> Result<Vec<BasePoint>> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let phase = seed_phase(seed);
    Ok(match base {
        RiemannianBase::Interval { min, max, .. } => {
            let h = (max - min) / n as f64;
            (0..n)
                .map(|k| BasePoint::one(min + (k as f64 + 0.5 + 0.5 * (phase - 0.5)) * h))
                .collect()
        }
        RiemannianBase::Circle { .. } => (0..n)
            .map(|k| BasePoint::one(TAU * frac(k as f64 * GOLDEN + phase)))
            .collect(),
        RiemannianBase::FlatTorus { l1, l2 } => (0..n)
            .map(|k| {
                BasePoint::two(
                    l1 * frac(k as f64 * PLASTIC[0] + phase),
                    l2 * frac(k as f64 * PLASTIC[1] + phase),
                )
            })
            .collect(),
        RiemannianBase::RoundSphere { .. } => (0..n)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                let th = z.clamp(-1.0, 1.0).acos();
                let ph = TAU * frac(k as f64 * GOLDEN + phase);
                BasePoint::two(th, ph)
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ() -> RiemannianBase {
        RiemannianBase::circle(TAU).unwrap()
    }

    #[test]
    fn antipodal_on_unit_circle() {
        let d = base_distance(&circ(), &BasePoint::one(0.0), &BasePoint::one(PI)).unwrap();
        assert!((d - PI).abs() < 1e-15);
    }

    #[test]
    fn interval_endpoints() {
        let b = RiemannianBase::interval(-1.0, 1.0).unwrap();
        let d = base_distance(&b, &BasePoint::one(-1.0), &BasePoint::one(1.0)).unwrap();
        assert_eq!(d, 2.0);
    }

    #[test]
    fn identity_distance_zero() {
        for b in [
            RiemannianBase::interval(0.0, 3.0).unwrap(),
            circ(),
            RiemannianBase::flat_torus(1.0, 2.0).unwrap(),
            RiemannianBase::round_sphere(1.5).unwrap(),
        ] {
            let p = sample_points(&b, 3, 7).unwrap().pop().unwrap();
            assert_eq!(base_distance(&b, &p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn interpolate_midpoints() {
        let b = RiemannianBase::interval(-1.0, 1.0).unwrap();
        let m = geodesic_interpolate(&b, &BasePoint::one(-1.0), &BasePoint::one(1.0), 0.5).unwrap();
        assert!(m.coords[0].abs() < 1e-15);

        let m = geodesic_interpolate(
            &circ(),
            &BasePoint::one(0.0),
            &BasePoint::one(core::f64::consts::FRAC_PI_2),
            0.5,
        )
        .unwrap();
        assert!((m.coords[0] - core::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn interpolate_endpoint_and_fraction_law() {
        let b = circ();
        let x = BasePoint::one(1.0);
        let y = BasePoint::one(2.5);
        let end = geodesic_interpolate(&b, &x, &y, 1.0).unwrap();
        assert!((end.coords[0] - 2.5).abs() < 1e-12);
        let d = base_distance(&b, &x, &y).unwrap();
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let p = geodesic_interpolate(&b, &x, &y, s).unwrap();
            let dp = base_distance(&b, &x, &p).unwrap();
            assert!((dp - s * d).abs() < 1e-12, "s={s} dp={dp} want {}", s * d);
        }
    }

    #[test]
    fn circle_antipodal_tie_positive_orientation() {
        let b = circ();
        let m = geodesic_interpolate(&b, &BasePoint::one(0.0), &BasePoint::one(PI), 0.5).unwrap();
        assert!((m.coords[0] - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_geodesic_fractions() {
        let b = RiemannianBase::round_sphere(2.0).unwrap();
        let x = BasePoint::two(0.3, 1.0);
        let y = BasePoint::two(1.9, 4.0);
        let d = base_distance(&b, &x, &y).unwrap();
        for s in [0.25, 0.5, 0.9] {
            let p = geodesic_interpolate(&b, &x, &y, s).unwrap();
            let dp = base_distance(&b, &x, &p).unwrap();
            assert!((dp - s * d).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_determinism_and_circle_spacing() {
        // derived oracle for the golden-angle rule: compute the sample and
        // assert the promised C/8 spacing for n = 4 directly
        let b = circ();
        let pts = sample_points(&b, 4, 0).unwrap();
        let again = sample_points(&b, 4, 0).unwrap();
        assert_eq!(pts, again);
        let mut min_gap = f64::INFINITY;
        for i in 0..4 {
            for j in (i + 1)..4 {
                min_gap = min_gap.min(base_distance(&b, &pts[i], &pts[j]).unwrap());
            }
        }
        assert!(min_gap >= TAU / 8.0, "min gap {min_gap}");
    }

    #[test]
    fn sample_single_point() {
        let pts = sample_points(&RiemannianBase::interval(0.0, 1.0).unwrap(), 1, 42).unwrap();
        assert_eq!(pts.len(), 1);
    }

    #[test]
    fn outside_chart_rejected() {
        let b = RiemannianBase::interval(0.0, 1.0).unwrap();
        assert!(base_distance(&b, &BasePoint::one(2.0), &BasePoint::one(0.5)).is_err());
        let c = circ();
        assert!(base_distance(&c, &BasePoint::one(7.0), &BasePoint::one(0.5)).is_err());
    }

    #[test]
    fn distance_caps() {
        let b = circ();
        let pts = sample_points(&b, 16, 3).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let d = base_distance(&b, &pts[i], &pts[j]).unwrap();
                assert!(d <= PI + 1e-12);
            }
        }
    }
}
