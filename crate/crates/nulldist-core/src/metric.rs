//! Finite-metric-space toolkit: uniform distance, Hausdorff distance, the
//! GH and SWIF upper bounds, metric-axiom and midpoint validators, and
//! the scalar mass proxy.
//!
//! The mass proxy substitutes the bi-Lipschitz volume bound for the full
//! current mass; every report labels it as a proxy. The GH bound is
//! `2 ε` and the SWIF bound `2^{(n+1)/2} λ^{n+1} · 2ε · M`, both taken
//! from the compactness theorem they implement.

use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spacetime::{SpacetimePoint, WarpedSpacetime};
use crate::Result;

/// A finite point list with a symmetric distance matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    pub points: Vec<SpacetimePoint>,
    pub matrix: Vec<Vec<f64>>,
    pub label: String,
    /// Recorded (not assumed): strictly positive off-diagonal entries.
    pub definite: bool,
}

impl FiniteMetricSpace {
    pub fn new(
        points: Vec<SpacetimePoint>,
        matrix: Vec<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = points.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::domain("matrix shape does not match point list"));
        }
        for i in 0..n {
            if matrix[i][i] != 0.0 {
                return Err(Error::domain("nonzero diagonal entry"));
            }
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::domain("matrix not exactly symmetric"));
                }
                if !(matrix[i][j] >= 0.0) {
                    return Err(Error::domain("negative or NaN distance entry"));
                }
            }
        }
        let definite = min_off_diagonal(&matrix).map_or(true, |m| m > 0.0);
        Ok(FiniteMetricSpace {
            points,
            matrix,
            label: label.into(),
            definite,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn min_off_diagonal(matrix: &[Vec<f64>]) -> Option<f64> {
    let n = matrix.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            best = Some(best.map_or(matrix[i][j], |b: f64| b.min(matrix[i][j])));
        }
    }
    best
}

fn same_points(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> bool {
    a.points.len() == b.points.len()
        && a.points
            .iter()
            .zip(&b.points)
            .all(|(p, q)| p.t == q.t && p.x == q.x)
}

/// `sup |d_A - d_B|` over the shared point list: a lower estimate of the
/// true uniform distance (finite sampling).
pub fn uniform_distance(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<f64> {
    if !same_points(a, b) {
        return Err(Error::domain("uniform distance needs identical point lists"));
    }
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        for j in 0..a.len() {
            worst = worst.max((a.matrix[i][j] - b.matrix[i][j]).abs());
        }
    }
    Ok(worst)
}

/// Like [`uniform_distance`] but also reporting an attaining pair.
pub fn uniform_distance_worst_pair(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<(f64, (usize, usize))> {
    if !same_points(a, b) {
        return Err(Error::domain("uniform distance needs identical point lists"));
    }
    let mut worst = 0.0f64;
    let mut pair = (0, 0);
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let d = (a.matrix[i][j] - b.matrix[i][j]).abs();
            if d > worst {
                worst = d;
                pair = (i, j);
            }
        }
    }
    Ok((worst, pair))
}

/// GH upper bound `2 ε` on a fixed point set.
pub fn gh_upper_bound(eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::domain("eps must be nonnegative"));
    }
    Ok(2.0 * eps)
}

/// Scalar mass surrogate (bi-Lipschitz volume bound), labeled as such.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MassProxy {
    pub dimension: u32,
    pub value: f64,
    pub method: MassMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MassMethod {
    BiLipschitzVolume,
}

/// `λ^m · |I| · vol_σ(Σ)` with `m = 1 + dim Σ`; an upper mass surrogate,
/// not the current mass.
pub fn mass_proxy(spacetime: &WarpedSpacetime, lambda: f64) -> Result<MassProxy> {
    if !(lambda >= 1.0) {
        return Err(Error::domain("lambda must be >= 1"));
    }
    let m = 1 + spacetime.base.dim() as u32;
    let (t0, t1) = spacetime.interval();
    let value = lambda.powi(m as i32) * (t1 - t0) * spacetime.base.volume();
    Ok(MassProxy {
        dimension: m,
        value,
        method: MassMethod::BiLipschitzVolume,
    })
}

/// SWIF upper bound `2^{(n+1)/2} λ^{n+1} · 2ε · mass`.
pub fn swif_upper_bound(eps: f64, lambda: f64, n: u32, mass: &MassProxy) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::domain("eps must be nonnegative"));
    }
    if !(lambda >= 1.0) {
        return Err(Error::domain("lambda must be >= 1 (bi-Lipschitz bound)"));
    }
    Ok(2f64.powf((n as f64 + 1.0) / 2.0) * lambda.powi(n as i32 + 1) * 2.0 * eps * mass.value)
}

/// Hausdorff distance between two index subsets of an ambient space.
pub fn hausdorff_distance(
    ambient: &FiniteMetricSpace,
    a: &[usize],
    b: &[usize],
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("Hausdorff distance needs nonempty sets"));
    }
    let n = ambient.len();
    if a.iter().chain(b.iter()).any(|&i| i >= n) {
        return Err(Error::domain("index outside the ambient point list"));
    }
    let directed = |from: &[usize], to: &[usize]| -> f64 {
        let mut worst = 0.0f64;
        for &i in from {
            let mut best = f64::INFINITY;
            for &j in to {
                best = best.min(ambient.matrix[i][j]);
            }
            worst = worst.max(best);
        }
        worst
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Metric-axiom report: symmetry is exact by construction, triangle
/// inequality within the tolerance, definiteness recorded as the minimal
/// off-diagonal entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricAxiomsReport {
    pub symmetry_ok: bool,
    pub max_triangle_defect: f64,
    pub triangle_ok: bool,
    pub min_off_diagonal: Option<f64>,
    pub worst_triple: (usize, usize, usize),
}

pub fn metric_axioms_check(space: &FiniteMetricSpace, tol: f64) -> MetricAxiomsReport {
    let n = space.len();
    let m = &space.matrix;
    let mut symmetry_ok = true;
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != m[j][i] {
                symmetry_ok = false;
            }
        }
    }
    let mut max_defect = 0.0f64;
    let mut worst = (0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let defect = m[i][k] - (m[i][j] + m[j][k]);
                if defect > max_defect {
                    max_defect = defect;
                    worst = (i, j, k);
                }
            }
        }
    }
    MetricAxiomsReport {
        symmetry_ok,
        max_triangle_defect: max_defect,
        triangle_ok: max_defect <= tol,
        min_off_diagonal: min_off_diagonal(m),
        worst_triple: worst,
    }
}

/// A pair for which no approximate midpoint was found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MidpointFailure {
    pub pair: (usize, usize),
    pub distance: f64,
    /// Best achieved `max(d(p, m), d(m, q))` over the candidate sampler.
    pub best: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MidpointReport {
    pub pairs_checked: usize,
    pub failures: Vec<MidpointFailure>,
}

impl MidpointReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Midpoint property over all pairs: for each pair the `sampler` returns
/// the best `max(d(p, m), d(m, q))` over its candidate midpoints (for
/// lattice-backed spaces: over all lattice nodes); the pair fails when
/// that exceeds `d(p, q)/2 + tol`.
pub fn midpoint_property_check(
    space: &FiniteMetricSpace,
    mut sampler: impl FnMut(usize, usize) -> Result<f64>,
    tol: f64,
) -> Result<MidpointReport> {
    let mut report = MidpointReport {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for i in 0..space.len() {
        for j in (i + 1)..space.len() {
            report.pairs_checked += 1;
            let d = space.matrix[i][j];
            if d == 0.0 {
                continue;
            }
            let best = sampler(i, j)?;
            if best > 0.5 * d + tol {
                report.failures.push(MidpointFailure {
                    pair: (i, j),
                    distance: d,
                    best,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{BasePoint, RiemannianBase};

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, BasePoint::one(x))
    }

    fn space_from(points: Vec<SpacetimePoint>, matrix: Vec<Vec<f64>>) -> FiniteMetricSpace {
        FiniteMetricSpace::new(points, matrix, "test").unwrap()
    }

    #[test]
    fn uniform_distance_basics() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0)];
        let a = space_from(pts.clone(), alloc::vec![
            alloc::vec![0.0, 1.0],
            alloc::vec![1.0, 0.0]
        ]);
        let b = space_from(pts, alloc::vec![
            alloc::vec![0.0, 2.0],
            alloc::vec![2.0, 0.0]
        ]);
        assert_eq!(uniform_distance(&a, &a).unwrap(), 0.0);
        // scaling B = 2A: sup|d_A - d_B| = max entry of A
        assert_eq!(uniform_distance(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn gh_and_swif_formulas() {
        assert_eq!(gh_upper_bound(0.0).unwrap(), 0.0);
        assert!((gh_upper_bound(0.3).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(gh_upper_bound(1.0).unwrap(), 2.0);

        let mass8 = MassProxy {
            dimension: 2,
            value: 8.0,
            method: MassMethod::BiLipschitzVolume,
        };
        // n = 1, λ = 2, ε = 0.1, mass = 8 → 2 · 4 · 0.2 · 8 = 12.8
        let v = swif_upper_bound(0.1, 2.0, 1, &mass8).unwrap();
        assert!((v - 12.8).abs() < 1e-12, "v = {v}");
        let mass1 = MassProxy {
            dimension: 2,
            value: 1.0,
            method: MassMethod::BiLipschitzVolume,
        };
        // λ = 1, n = 1, ε = 0.5, mass = 1 → 2
        let v = swif_upper_bound(0.5, 1.0, 1, &mass1).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        assert_eq!(swif_upper_bound(0.0, 3.0, 2, &mass8).unwrap(), 0.0);
        assert!(swif_upper_bound(0.1, 0.5, 1, &mass8).is_err());
    }

    #[test]
    fn bound_calculators_homogeneous_monotone() {
        let mass = MassProxy {
            dimension: 2,
            value: 3.0,
            method: MassMethod::BiLipschitzVolume,
        };
        for eps in [0.1, 0.2, 0.7] {
            let g1 = gh_upper_bound(eps).unwrap();
            let g2 = gh_upper_bound(2.0 * eps).unwrap();
            assert_eq!(g2, 2.0 * g1);
            let s1 = swif_upper_bound(eps, 1.5, 1, &mass).unwrap();
            let s2 = swif_upper_bound(2.0 * eps, 1.5, 1, &mass).unwrap();
            assert!((s2 - 2.0 * s1).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_proxy_values() {
        use crate::spacetime::WarpedSpacetime;
        let st = WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::circle(core::f64::consts::TAU).unwrap(),
        )
        .unwrap();
        let m = mass_proxy(&st, 1.0).unwrap();
        assert_eq!(m.dimension, 2);
        assert!((m.value - 4.0 * core::f64::consts::PI).abs() < 1e-12);
        let m2 = mass_proxy(&st, 2.0).unwrap();
        assert!((m2.value - 16.0 * core::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn mass_proxy_degenerate_interval() {
        use crate::spacetime::WarpedSpacetime;
        // |I| → 0 sends the proxy to 0; use a tiny interval
        let st = WarpedSpacetime::product(
            (0.0, 1e-12),
            RiemannianBase::circle(1.0).unwrap(),
        )
        .unwrap();
        let m = mass_proxy(&st, 1.0).unwrap();
        assert!(m.value < 1e-11);
    }

    #[test]
    fn hausdorff_cases() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0), pt(0.0, 3.0)];
        let m = alloc::vec![
            alloc::vec![0.0, 1.0, 3.0],
            alloc::vec![1.0, 0.0, 2.0],
            alloc::vec![3.0, 2.0, 0.0],
        ];
        let amb = space_from(pts, m);
        assert_eq!(hausdorff_distance(&amb, &[0, 1], &[0, 1]).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&amb, &[0], &[2]).unwrap(), 3.0);
        assert!(hausdorff_distance(&amb, &[], &[0]).is_err());
        assert_eq!(hausdorff_distance(&amb, &[0, 1], &[1]).unwrap(), 1.0);
    }

    #[test]
    fn hausdorff_zero_iff_equal_sets() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0), pt(0.0, 2.5)];
        let m = alloc::vec![
            alloc::vec![0.0, 1.0, 2.5],
            alloc::vec![1.0, 0.0, 1.5],
            alloc::vec![2.5, 1.5, 0.0],
        ];
        let amb = space_from(pts, m);
        assert!(hausdorff_distance(&amb, &[0, 1], &[1, 0]).unwrap() == 0.0);
        assert!(hausdorff_distance(&amb, &[0, 1], &[0, 1, 2]).unwrap() > 0.0);
    }

    #[test]
    fn axioms_check_flags_asymmetry_via_constructor() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0)];
        let bad = FiniteMetricSpace::new(
            pts,
            alloc::vec![alloc::vec![0.0, 1.0], alloc::vec![1.0 + 1e-9, 0.0]],
            "asym",
        );
        assert!(bad.is_err());
    }

    #[test]
    fn axioms_check_triangle() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0), pt(0.0, 2.0)];
        let good = space_from(
            pts.clone(),
            alloc::vec![
                alloc::vec![0.0, 1.0, 2.0],
                alloc::vec![1.0, 0.0, 1.0],
                alloc::vec![2.0, 1.0, 0.0],
            ],
        );
        let rep = metric_axioms_check(&good, 1e-12);
        assert!(rep.symmetry_ok && rep.triangle_ok);
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2 breaks the triangle inequality
        let bad = space_from(
            pts,
            alloc::vec![
                alloc::vec![0.0, 1.0, 5.0],
                alloc::vec![1.0, 0.0, 1.0],
                alloc::vec![5.0, 1.0, 0.0],
            ],
        );
        let rep = metric_axioms_check(&bad, 1e-12);
        assert!(!rep.triangle_ok);
        assert!((rep.max_triangle_defect - 3.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_check_calls_sampler() {
        let pts = alloc::vec![pt(0.0, 0.0), pt(0.0, 1.0)];
        let space = space_from(pts, alloc::vec![
            alloc::vec![0.0, 1.0],
            alloc::vec![1.0, 0.0]
        ]);
        // perfect midpoint available
        let rep = midpoint_property_check(&space, |_, _| Ok(0.5), 1e-9).unwrap();
        assert!(rep.passes());
        // nothing better than the endpoints themselves
        let rep = midpoint_property_check(&space, |_, _| Ok(1.0), 1e-9).unwrap();
        assert!(!rep.passes());
    }
}
