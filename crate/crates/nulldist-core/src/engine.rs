//! Null distance computation: closed forms where they exist, two-sided
//! bounds everywhere, the lattice oracle for the general case, and the
//! causality / completeness / invariance checks built on top.

use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::base::base_distance;
use crate::error::Error;
use crate::lattice::{Lattice, LatticeConfig, LatticeQuery};
use crate::profile::profile_null_distance as profile_solve;
use crate::spacetime::{
    is_causally_related, warping_samples, CausalRelation, SpacetimePoint, WarpedSpacetime,
};
use crate::timefn::TimeFunction;
use crate::Result;

/// How a distance value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceMethod {
    ClosedForm,
    Lattice,
    Profile,
}

/// A null distance value with certified bracket.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub method: DistanceMethod,
}

impl DistanceResult {
    pub fn closed(value: f64) -> Self {
        DistanceResult {
            value,
            lower_bound: value,
            upper_bound: value,
            method: DistanceMethod::ClosedForm,
        }
    }

    fn bracketed(value: f64, lo: f64, hi: f64, method: DistanceMethod) -> Self {
        DistanceResult {
            value,
            lower_bound: lo.min(value),
            upper_bound: hi.max(value),
            method,
        }
    }
}

/// Null distance of a Lorentzian product under the canonical time:
/// `|Δt|` for causal pairs and `d_σ` otherwise, which collapse to
/// `max(|Δt|, d_σ)` since the pair is causal exactly when `d_σ ≤ |Δt|`.
pub fn product_formula(dt_abs: f64, d_sigma: f64) -> f64 {
    dt_abs.max(d_sigma)
}

/// Exact product null distance. Precondition: unit warping.
pub fn product_null_distance(
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<DistanceResult> {
    if !spacetime.is_product() {
        return Err(Error::precondition(
            "product_null_distance needs the unit warping",
        ));
    }
    spacetime.check_point(p)?;
    spacetime.check_point(q)?;
    let d = base_distance(&spacetime.base, &p.x, &q.x)?;
    Ok(DistanceResult::closed(product_formula((p.t - q.t).abs(), d)))
}

/// Reference product null distance `d̂_σ = max(|Δt|, d_σ)` of the same
/// `I × Σ` with unit warping; the comparison metric of the bi-Lipschitz
/// bracket.
pub fn sigma_null_distance(
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<f64> {
    let d = base_distance(&spacetime.base, &p.x, &q.x)?;
    Ok(product_formula((p.t - q.t).abs(), d))
}

/// Two-sided bracket for the warped null distance: causal pairs are
/// pinned at `|Δt|`; otherwise the intersection of the warped-bound pair
/// `f_min d_σ ≤ d̂_f ≤ f_max d_σ` with the bi-Lipschitz pair
/// `min{1, f_min} d̂_σ ≤ d̂_f ≤ max{1, f_max} d̂_σ`.
pub fn warped_bounds(
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<(f64, f64)> {
    spacetime.check_point(p)?;
    spacetime.check_point(q)?;
    let dt = (p.t - q.t).abs();
    if is_causally_related(spacetime, p, q)?.is_related() {
        return Ok((dt, dt));
    }
    let d_sigma = base_distance(&spacetime.base, &p.x, &q.x)?;
    let d_hat_sigma = product_formula(dt, d_sigma);
    let (f_min, f_max) = (spacetime.warping.f_min, spacetime.warping.f_max);
    let lo = (f_min * d_sigma).max(f_min.min(1.0) * d_hat_sigma);
    let hi = (f_max * d_sigma).min(f_max.max(1.0) * d_hat_sigma);
    Ok((lo, hi))
}

/// One-shot lattice query wrapped as a [`DistanceResult`]: the value is a
/// certified upper bound on the infimum (up to the reported tolerance),
/// the lower bound comes from [`warped_bounds`].
pub fn lattice_null_distance(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    config: &LatticeConfig,
) -> Result<(DistanceResult, LatticeQuery)> {
    let lat = Lattice::build(spacetime, tf, config.clone())?;
    lattice_query_on(&lat, p, q)
}

/// Lattice query against a prebuilt lattice.
pub fn lattice_query_on(
    lattice: &Lattice<'_>,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<(DistanceResult, LatticeQuery)> {
    let query = lattice.query(p, q)?;
    let (lo, _) = if matches!(lattice.tf, TimeFunction::Canonical) && lattice.config.holes.is_empty()
    {
        warped_bounds(lattice.spacetime, p, q)?
    } else {
        (0.0, f64::INFINITY)
    };
    let result = DistanceResult::bracketed(
        query.value,
        lo,
        query.value + query.snap_slack,
        DistanceMethod::Lattice,
    );
    Ok((result, query))
}

/// Profile fast path wrapped as a [`DistanceResult`]. Causal pairs are
/// answered in closed form.
pub fn profile_null_distance(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    n_levels: usize,
) -> Result<DistanceResult> {
    if is_causally_related(spacetime, p, q)?.is_related() {
        let dtau = (tf.eval_t(p.t) - tf.eval_t(q.t)).abs();
        return Ok(DistanceResult::closed(dtau));
    }
    let sol = profile_solve(spacetime, tf, p, q, n_levels)?;
    let (lo, hi) = if matches!(tf, TimeFunction::Canonical) {
        warped_bounds(spacetime, p, q)?
    } else {
        (0.0, f64::INFINITY)
    };
    Ok(DistanceResult::bracketed(
        sol.value,
        lo,
        hi,
        DistanceMethod::Profile,
    ))
}

/// Best available method: closed forms for products (canonical time) and
/// causal pairs, the profile solver otherwise. The profile value is a
/// fast path; callers that need certificates cross-check it against the
/// lattice (see the acceptance suite).
pub fn distance_auto(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<DistanceResult> {
    if spacetime.is_product() && matches!(tf, TimeFunction::Canonical) {
        return product_null_distance(spacetime, p, q);
    }
    if is_causally_related(spacetime, p, q)?.is_related() {
        let dtau = (tf.eval_t(p.t) - tf.eval_t(q.t)).abs();
        return Ok(DistanceResult::closed(dtau));
    }
    profile_null_distance(spacetime, tf, p, q, 401)
}

/// Pairwise lattice distances over a point list, symmetrized by
/// construction (each unordered pair is computed once from the smaller
/// index, so the emitted matrix is exactly symmetric).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceMatrix {
    /// The snapped points actually used.
    pub points: Vec<SpacetimePoint>,
    pub matrix: Vec<Vec<f64>>,
    /// Per-pair discretization slack estimates.
    pub tolerances: Vec<Vec<f64>>,
    pub max_tolerance: f64,
}

pub fn lattice_distance_matrix(
    lattice: &Lattice<'_>,
    points: &[SpacetimePoint],
) -> Result<DistanceMatrix> {
    let n = points.len();
    let mut nodes = Vec::with_capacity(n);
    for p in points {
        let (id, _) = lattice.snap(p)?;
        nodes.push(id);
    }
    let snapped: Vec<SpacetimePoint> = nodes.iter().map(|&id| lattice.node_point(id)).collect();
    let mut matrix = alloc::vec![alloc::vec![0.0f64; n]; n];
    let mut tolerances = alloc::vec![alloc::vec![0.0f64; n]; n];
    let mut max_tol = 0.0f64;
    for i in 0..n {
        if nodes[i + 1..].is_empty() {
            continue;
        }
        let field = lattice.distance_field_with_pred(nodes[i]);
        for j in (i + 1)..n {
            let (value, tol) = field.query(nodes[j])?;
            matrix[i][j] = value;
            matrix[j][i] = value;
            tolerances[i][j] = tol;
            tolerances[j][i] = tol;
            max_tol = max_tol.max(tol);
        }
    }
    Ok(DistanceMatrix {
        points: snapped,
        matrix,
        tolerances,
        max_tolerance: max_tol,
    })
}

/// One causality-encoding disagreement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CausalityViolator {
    pub pair: (usize, usize),
    pub distance: f64,
    pub tau_gap: f64,
    pub related: bool,
}

/// Result of the `p ≤ q ⟺ d̂_τ(p,q) = τ(q) - τ(p)` check over a sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CausalityReport {
    pub pairs_checked: usize,
    pub agreements: usize,
    pub violators: Vec<CausalityViolator>,
}

impl CausalityReport {
    pub fn encodes(&self) -> bool {
        self.violators.is_empty()
    }
}

/// Compare the distance criterion `|d̂ - |Δτ|| ≤ tol` against the causal
/// relation, pair by pair. `distance` and `related` are supplied by the
/// caller so holed spacetimes can use lattice reachability.
pub fn encodes_causality_check(
    tf: &TimeFunction,
    pairs: &[(SpacetimePoint, SpacetimePoint)],
    tol: f64,
    mut distance: impl FnMut(&SpacetimePoint, &SpacetimePoint) -> Result<f64>,
    mut related: impl FnMut(&SpacetimePoint, &SpacetimePoint) -> Result<bool>,
) -> Result<CausalityReport> {
    let mut report = CausalityReport {
        pairs_checked: pairs.len(),
        agreements: 0,
        violators: Vec::new(),
    };
    for (idx, (p, q)) in pairs.iter().enumerate() {
        let d = distance(p, q)?;
        let tau_gap = (tf.eval_t(q.t) - tf.eval_t(p.t)).abs();
        let close = (d - tau_gap).abs() <= tol;
        let rel = related(p, q)?;
        if close == rel {
            report.agreements += 1;
        } else {
            report.violators.push(CausalityViolator {
                pair: (idx, idx),
                distance: d,
                tau_gap,
                related: rel,
            });
        }
    }
    Ok(report)
}

/// Smooth-warped convenience wrapper: closed form on causal pairs, the
/// profile solver on the rest, relation by the reach criterion.
pub fn encodes_causality_check_smooth(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    pairs: &[(SpacetimePoint, SpacetimePoint)],
    tol: f64,
    profile_levels: usize,
) -> Result<CausalityReport> {
    encodes_causality_check(
        tf,
        pairs,
        tol,
        |p, q| {
            if is_causally_related(spacetime, p, q)?.is_related() {
                Ok((tf.eval_t(p.t) - tf.eval_t(q.t)).abs())
            } else {
                Ok(profile_solve(spacetime, tf, p, q, profile_levels)?.value)
            }
        },
        |p, q| Ok(is_causally_related(spacetime, p, q)?.is_related()),
    )
}

/// Background metric for the anti-Lipschitz modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Background {
    /// Riemannian product distance `√(Δt² + d_σ²)`.
    RiemannianProduct,
}

pub fn background_distance(
    bg: Background,
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
) -> Result<f64> {
    match bg {
        Background::RiemannianProduct => {
            let d = base_distance(&spacetime.base, &p.x, &q.x)?;
            let dt = p.t - q.t;
            Ok((dt * dt + d * d).sqrt())
        }
    }
}

/// Largest `C` with `τ(q) - τ(p) ≥ C · d_bg(p, q)` over the sampled
/// causal pairs; `None` when the sample contains no causal pair
/// (inconclusive).
pub fn anti_lipschitz_modulus(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    bg: Background,
    samples: &[SpacetimePoint],
) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for i in 0..samples.len() {
        for j in 0..samples.len() {
            if i == j {
                continue;
            }
            let (p, q) = (&samples[i], &samples[j]);
            if is_causally_related(spacetime, p, q)? != CausalRelation::Before {
                continue;
            }
            let db = background_distance(bg, spacetime, p, q)?;
            if db == 0.0 {
                continue;
            }
            let ratio = ((tf.eval_t(q.t) - tf.eval_t(p.t)) / db).max(0.0);
            best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
        }
    }
    Ok(best)
}

/// Completeness certificate: verifies `d̂_τ ≥ C · d_bg` on all sampled
/// pairs for `C` the anti-Lipschitz modulus of the sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub modulus: Option<f64>,
    pub pairs_checked: usize,
    pub worst_slack: f64,
    pub passes: bool,
}

pub fn completeness_certificate(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    samples: &[SpacetimePoint],
    mut distance: impl FnMut(&SpacetimePoint, &SpacetimePoint) -> Result<f64>,
) -> Result<CompletenessReport> {
    if !spacetime.base.is_complete() {
        return Err(Error::precondition(
            "completeness certificate needs a complete base",
        ));
    }
    let modulus = anti_lipschitz_modulus(
        spacetime,
        tf,
        Background::RiemannianProduct,
        samples,
    )?;
    let mut worst = f64::INFINITY;
    let mut checked = 0usize;
    if let Some(c) = modulus {
        if c > 0.0 {
            for i in 0..samples.len() {
                for j in (i + 1)..samples.len() {
                    let (p, q) = (&samples[i], &samples[j]);
                    let d = distance(p, q)?;
                    let db =
                        background_distance(Background::RiemannianProduct, spacetime, p, q)?;
                    worst = worst.min(d - c * db);
                    checked += 1;
                }
            }
        }
    }
    if checked == 0 {
        worst = 0.0;
    }
    let passes = matches!(modulus, Some(c) if c > 0.0)
        && worst >= -1e-9 * (1.0 + spacetime.base.diameter());
    Ok(CompletenessReport {
        modulus,
        pairs_checked: checked,
        worst_slack: worst,
        passes,
    })
}

/// Conformal invariance: lattice distances computed for `g` and `ψ² g`
/// agree because the admissible edge set and the weights depend only on
/// the cones and on `τ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConformalReport {
    pub pairs_checked: usize,
    pub max_abs_diff: f64,
    pub bitwise_equal: bool,
}

pub fn conformal_invariance_check(
    spacetime: &WarpedSpacetime,
    rescaled: &WarpedSpacetime,
    tf: &TimeFunction,
    pairs: &[(SpacetimePoint, SpacetimePoint)],
    config: &LatticeConfig,
) -> Result<ConformalReport> {
    let lat_a = Lattice::build(spacetime, tf, config.clone())?;
    let lat_b = Lattice::build(rescaled, tf, config.clone())?;
    let mut max_diff = 0.0f64;
    let mut bitwise = true;
    for (p, q) in pairs {
        let a = lat_a.query(p, q)?.value;
        let b = lat_b.query(p, q)?.value;
        max_diff = max_diff.max((a - b).abs());
        if a.to_bits() != b.to_bits() {
            bitwise = false;
        }
    }
    Ok(ConformalReport {
        pairs_checked: pairs.len(),
        max_abs_diff: max_diff,
        bitwise_equal: bitwise,
    })
}

/// Cone monotonicity: `f₁ ≤ f₂` pointwise widens the cones of `g_{f₁}`,
/// so `d̂_{f₁} ≤ d̂_{f₂}`. On a shared mesh the `f₁` edge set contains the
/// `f₂` edge set, making the lattice comparison structural.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeMonotonicityReport {
    pub pairs_checked: usize,
    pub max_violation: f64,
    pub passes: bool,
}

pub fn cone_monotonicity_check(
    narrow: &WarpedSpacetime,
    wide: &WarpedSpacetime,
    tf: &TimeFunction,
    pairs: &[(SpacetimePoint, SpacetimePoint)],
    config: &LatticeConfig,
) -> Result<ConeMonotonicityReport> {
    // `narrow` carries f₁ ≤ f₂ = `wide`'s warping; audit the ordering
    let (a, b) = (warping_samples(narrow, 10_000), warping_samples(wide, 10_000));
    for ((t, f1), (_, f2)) in a.iter().zip(b.iter()) {
        if f1 > &(f2 + 1e-12) {
            return Err(Error::precondition(alloc::format!(
                "warping ordering f1 <= f2 fails at t = {t}"
            )));
        }
    }
    let lat_1 = Lattice::build(narrow, tf, config.clone())?;
    let lat_2 = Lattice::build(wide, tf, config.clone())?;
    let mut max_violation = 0.0f64;
    for (p, q) in pairs {
        let d1 = lat_1.query(p, q)?.value;
        let d2 = lat_2.query(p, q)?.value;
        max_violation = max_violation.max(d1 - d2);
    }
    Ok(ConeMonotonicityReport {
        pairs_checked: pairs.len(),
        max_violation,
        passes: max_violation <= 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{BasePoint, RiemannianBase};
    use crate::spacetime::{warp_registry, WarpingFunction};

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, BasePoint::one(x))
    }

    fn minkowski() -> WarpedSpacetime {
        WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn product_formula_cases() {
        let st = minkowski();
        // non-causal level pair
        let r = product_null_distance(&st, &pt(0.0, 0.0), &pt(0.0, 1.0)).unwrap();
        assert_eq!(r.value, 1.0);
        // causal pair
        let r = product_null_distance(&st, &pt(0.0, 0.0), &pt(2.0, 1.0)).unwrap();
        assert_eq!(r.value, 2.0);
        // identical points
        let r = product_null_distance(&st, &pt(1.0, 0.5), &pt(1.0, 0.5)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn product_requires_unit_warping() {
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            WarpingFunction::constant(2.0).unwrap(),
        )
        .unwrap();
        assert!(product_null_distance(&st, &pt(0.0, 0.0), &pt(0.0, 1.0)).is_err());
    }

    #[test]
    fn warped_bounds_tsq_example() {
        // f = t²+1 on [0, 2]: f ∈ [1, 5]; level pair with d_σ = 2 gives [2, 10]
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(0.0, 2.0),
        )
        .unwrap();
        let (lo, hi) = warped_bounds(&st, &pt(0.0, -1.0), &pt(0.0, 1.0)).unwrap();
        assert!((lo - 2.0).abs() < 1e-12, "lo {lo}");
        assert!((hi - 10.0).abs() < 1e-12, "hi {hi}");
    }

    #[test]
    fn warped_bounds_causal_pin() {
        let st = minkowski();
        let (lo, hi) = warped_bounds(&st, &pt(0.0, 0.0), &pt(1.0, 0.5)).unwrap();
        assert_eq!((lo, hi), (1.0, 1.0));
    }

    #[test]
    fn warped_bounds_unit_degenerate() {
        let st = minkowski();
        let (lo, hi) = warped_bounds(&st, &pt(0.0, 0.0), &pt(0.0, 1.5)).unwrap();
        assert!((lo - 1.5).abs() < 1e-12 && (hi - 1.5).abs() < 1e-12);
    }

    #[test]
    fn lattice_sandwiched_by_bounds() {
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(0.0, 2.0),
        )
        .unwrap();
        let tf = TimeFunction::Canonical;
        let cfg = LatticeConfig::new(101, 101, 4);
        let (p, q) = (pt(0.5, -1.0), pt(0.7, 1.0));
        let (res, query) = lattice_null_distance(&st, &tf, &p, &q, &cfg).unwrap();
        let (lo, hi) = warped_bounds(&st, &p, &q).unwrap();
        assert!(res.value >= lo - 1e-9, "value {} lo {lo}", res.value);
        assert!(res.value <= hi + query.tolerance, "value {} hi {hi}", res.value);
    }

    #[test]
    fn anti_lipschitz_canonical_is_inv_sqrt2() {
        // minimize Δt/√(Δt² + Δx²) over causal pairs: attained on null pairs
        let st = minkowski();
        let mut samples = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                samples.push(pt(
                    2.0 * i as f64 / 5.0,
                    -2.0 + 4.0 * j as f64 / 5.0,
                ));
            }
        }
        let c = anti_lipschitz_modulus(
            &st,
            &TimeFunction::Canonical,
            Background::RiemannianProduct,
            &samples,
        )
        .unwrap()
        .unwrap();
        let want = core::f64::consts::FRAC_1_SQRT_2;
        // the sample contains exactly-null pairs, so the modulus hits 1/√2
        assert!((c - want).abs() < 1e-9, "c = {c}");
    }

    #[test]
    fn anti_lipschitz_cubed_collapses() {
        let st = WarpedSpacetime::product(
            (-1.0, 1.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let mut samples = Vec::new();
        for i in 0..9 {
            samples.push(pt(-0.02 + 0.005 * i as f64, 0.0));
        }
        let c = anti_lipschitz_modulus(
            &st,
            &TimeFunction::Cubed,
            Background::RiemannianProduct,
            &samples,
        )
        .unwrap()
        .unwrap();
        assert!(c < 2e-3, "c = {c}");
    }

    #[test]
    fn anti_lipschitz_scales_linearly() {
        let st = minkowski();
        let samples: Vec<_> = (0..5)
            .flat_map(|i| (0..3).map(move |j| pt(i as f64 * 0.5, j as f64 * 0.3)))
            .collect();
        let c1 = anti_lipschitz_modulus(
            &st,
            &TimeFunction::Canonical,
            Background::RiemannianProduct,
            &samples,
        )
        .unwrap()
        .unwrap();
        let doubled = TimeFunction::smooth("2t", |t| 2.0 * t, |_| 2.0);
        let c2 = anti_lipschitz_modulus(&st, &doubled, Background::RiemannianProduct, &samples)
            .unwrap()
            .unwrap();
        assert!((c2 - 2.0 * c1).abs() < 1e-12);
    }

    #[test]
    fn anti_lipschitz_inconclusive_without_causal_pairs() {
        let st = minkowski();
        let samples = alloc::vec![pt(1.0, -1.5), pt(1.0, 1.5)];
        assert!(anti_lipschitz_modulus(
            &st,
            &TimeFunction::Canonical,
            Background::RiemannianProduct,
            &samples
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn completeness_product_passes() {
        let st = minkowski();
        let samples: Vec<_> = (0..5)
            .flat_map(|i| (0..5).map(move |j| pt(0.5 * i as f64, -2.0 + j as f64)))
            .collect();
        let rep = completeness_certificate(&st, &TimeFunction::Canonical, &samples, |p, q| {
            Ok(product_null_distance(&st, p, q)?.value)
        })
        .unwrap();
        assert!(rep.passes, "report {rep:?}");
        let c = rep.modulus.unwrap();
        assert!((c - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn completeness_single_point_trivially_passes() {
        let st = minkowski();
        let samples = alloc::vec![pt(1.0, 0.0), pt(1.0, 0.0)];
        let rep = completeness_certificate(&st, &TimeFunction::Canonical, &samples, |p, q| {
            Ok(product_null_distance(&st, p, q)?.value)
        })
        .unwrap();
        // p = q pairs carry no causal information: inconclusive, not failing
        assert!(rep.modulus.is_none() || rep.passes);
    }

    #[test]
    fn cone_monotonicity_constants() {
        let base = RiemannianBase::interval(-2.0, 2.0).unwrap();
        let st1 = WarpedSpacetime::new(
            (0.0, 2.0),
            base.clone(),
            WarpingFunction::constant(1.0).unwrap(),
        )
        .unwrap();
        let st2 =
            WarpedSpacetime::new((0.0, 2.0), base, WarpingFunction::constant(2.0).unwrap())
                .unwrap();
        let pairs = alloc::vec![
            (pt(0.5, -1.0), pt(0.5, 1.0)),
            (pt(0.0, 0.0), pt(1.5, 0.2)),
            (pt(1.0, -0.4), pt(1.2, 0.8)),
        ];
        let rep = cone_monotonicity_check(
            &st1,
            &st2,
            &TimeFunction::Canonical,
            &pairs,
            &LatticeConfig::new(81, 81, 4),
        )
        .unwrap();
        assert!(rep.passes, "max violation {}", rep.max_violation);
        // equal warpings give exact equality
        let st1b = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            WarpingFunction::constant(1.0).unwrap(),
        )
        .unwrap();
        let rep = cone_monotonicity_check(
            &st1,
            &st1b,
            &TimeFunction::Canonical,
            &pairs,
            &LatticeConfig::new(81, 81, 4),
        )
        .unwrap();
        assert_eq!(rep.max_violation, 0.0);
    }

    #[test]
    fn ordering_audit_rejects_crossing_warpings() {
        let base = RiemannianBase::interval(-2.0, 2.0).unwrap();
        let st1 = WarpedSpacetime::new(
            (0.0, 2.0),
            base.clone(),
            WarpingFunction::constant(2.0).unwrap(),
        )
        .unwrap();
        let st2 =
            WarpedSpacetime::new((0.0, 2.0), base, WarpingFunction::constant(1.0).unwrap())
                .unwrap();
        assert!(cone_monotonicity_check(
            &st1,
            &st2,
            &TimeFunction::Canonical,
            &[],
            &LatticeConfig::new(41, 41, 2),
        )
        .is_err());
    }
}
