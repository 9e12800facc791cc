//! Convergence laboratory: sequences of warped spacetimes, limit-metric
//! formulas, and per-index convergence tables.
//!
//! Every registered family lives on `I = [0, 2]` over a compact base.
//! For each index `j` a distance matrix over the sample grid is built
//! (lattice oracle or profile fast path), compared against the limit
//! formula, and wrapped with the GH and SWIF upper bounds.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::base::{base_distance, sample_points, RiemannianBase};
use crate::engine::{
    lattice_distance_matrix, product_formula, profile_null_distance, sigma_null_distance,
    warped_bounds, DistanceMatrix,
};
use crate::error::Error;
use crate::lattice::{Lattice, LatticeConfig};
use crate::metric::{gh_upper_bound, mass_proxy, swif_upper_bound};
use crate::spacetime::{warp_registry, SpacetimePoint, WarpedSpacetime, WarpingFunction};
use crate::timefn::TimeFunction;
use crate::Result;

/// Time interval shared by the registered families.
pub const FAMILY_INTERVAL: (f64, f64) = (0.0, 2.0);

/// Registered warping-sequence families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SequenceFamily {
    /// `f_j = 1 + sin(t)/j → 1` uniformly; `‖f_j - f_∞‖ ≤ 1/j`.
    UniformSin,
    /// Bump at the bottom with `f_j ∈ [h0, 1]`, `h0 ∈ (0, 1)`.
    Example51 { h0: f64 },
    /// Bump at the bottom with `f_j ∈ [1, h0]`, `h0 > 1`.
    Example52 { h0: f64 },
    /// Collapsing family `f_j ∈ [1/j, 1]`, monotone in `j`.
    Example53,
}

impl SequenceFamily {
    pub fn warping(&self, j: u32) -> Result<WarpingFunction> {
        match self {
            SequenceFamily::UniformSin => warp_registry::uniform_sin(j),
            SequenceFamily::Example51 { h0 } => warp_registry::example51(*h0, j),
            SequenceFamily::Example52 { h0 } => warp_registry::example52(*h0, j),
            SequenceFamily::Example53 => warp_registry::example53(j),
        }
    }

    /// Sup-norm bound on `‖f_j - f_∞‖` where a uniform limit exists.
    pub fn uniform_eps(&self, j: u32) -> Option<f64> {
        match self {
            SequenceFamily::UniformSin => Some(1.0 / j as f64),
            _ => None,
        }
    }

    /// Sequence-wide bi-Lipschitz constant `λ` with `1/λ ≤ f_j ≤ λ`.
    pub fn lambda(&self, j_list: &[u32]) -> f64 {
        let j_max = j_list.iter().copied().max().unwrap_or(1) as f64;
        match self {
            SequenceFamily::UniformSin => 2.0,
            SequenceFamily::Example51 { h0 } => 1.0 / h0,
            SequenceFamily::Example52 { h0 } => *h0,
            SequenceFamily::Example53 => j_max,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SequenceFamily::UniformSin => "uniform_sin",
            SequenceFamily::Example51 { .. } => "example51",
            SequenceFamily::Example52 { .. } => "example52",
            SequenceFamily::Example53 => "example53",
        }
    }
}

/// A warping sequence to evaluate at the given indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpingSequence {
    pub family: SequenceFamily,
    pub j_list: Vec<u32>,
}

/// Closed-form limit metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitMetric {
    /// Null distance of a constant-warping product (`max(|Δt|, c d_σ)`).
    NullDistanceOfConstant { c: f64 },
    /// The non-uniform-limit metric of the bottom-bump family.
    D0Formula { h0: f64 },
    /// The collapsed-cylinder metric of the monotone family.
    DInfinity53,
}

/// `d₀(p, q) = min{ d̂_σ(p,q), t(p) + t(q) + h₀ · max(0, d_σ - t(p) - t(q)) }`,
/// the set-distance term interpreted as the inf over point pairs of the
/// product-cone pasts on `Σ₀`.
pub fn evaluate_limit_d0(
    h0: f64,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    base: &RiemannianBase,
) -> Result<f64> {
    let d_sigma = base_distance(base, &p.x, &q.x)?;
    let d_hat_sigma = product_formula((p.t - q.t).abs(), d_sigma);
    let set_dist = (d_sigma - p.t - q.t).max(0.0);
    Ok(d_hat_sigma.min(p.t + q.t + h0 * set_dist))
}

/// `d_∞(p, q) = min{ d̂_σ(p,q), (t(p)-1) + (t(q)-1) }` above the collapse
/// level, `|t(p) - t(q)|` otherwise.
pub fn evaluate_limit_dinfty_53(
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    base: &RiemannianBase,
) -> Result<f64> {
    if p.t > 1.0 && q.t > 1.0 {
        let d_sigma = base_distance(base, &p.x, &q.x)?;
        let d_hat_sigma = product_formula((p.t - q.t).abs(), d_sigma);
        Ok(d_hat_sigma.min((p.t - 1.0) + (q.t - 1.0)))
    } else {
        Ok((p.t - q.t).abs())
    }
}

pub fn evaluate_limit(
    limit: &LimitMetric,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    base: &RiemannianBase,
) -> Result<f64> {
    match limit {
        LimitMetric::NullDistanceOfConstant { c } => {
            let d = base_distance(base, &p.x, &q.x)?;
            Ok(product_formula((p.t - q.t).abs(), c * d))
        }
        LimitMetric::D0Formula { h0 } => evaluate_limit_d0(*h0, p, q, base),
        LimitMetric::DInfinity53 => evaluate_limit_dinfty_53(p, q, base),
    }
}

/// Pointwise envelope of the uniform-convergence bound: for
/// `ε = ‖f_j - f_∞‖ ≤ f_min/4`,
/// `hi = d̂_∞ + ε (1 + 8ε/f_min + 8 d̂_∞/f_min)` and
/// `lo = d̂_∞ - ε (1 + 3 d̂_∞/f_min)`.
///
/// The inequality `4ε/(f_min - 2ε) ≤ 8ε/f_min` behind the `hi` constant
/// holds exactly up to `ε = f_min/4`, so the domain is closed at the top.
pub fn pointwise_envelope(eps: f64, f_min: f64, d_inf: f64) -> Result<(f64, f64)> {
    if !(f_min > 0.0) {
        return Err(Error::domain("f_min must be positive"));
    }
    if !(0.0..=f_min / 4.0).contains(&eps) {
        return Err(Error::domain("envelope requires 0 <= eps <= f_min/4"));
    }
    let hi = d_inf + eps * (1.0 + 8.0 * eps / f_min + 8.0 * d_inf / f_min);
    let lo = d_inf - eps * (1.0 + 3.0 * d_inf / f_min);
    Ok((lo, hi))
}

/// Distance backend for a convergence step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum StepMethod {
    Lattice(LatticeConfig),
    Profile { n_levels: usize },
}

/// Sample grid over `I × Σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n_time: usize,
    pub n_space: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            n_time: 8,
            n_space: 8,
        }
    }
}

pub fn sample_grid(
    base: &RiemannianBase,
    interval: (f64, f64),
    spec: &SampleSpec,
) -> Result<Vec<SpacetimePoint>> {
    if spec.n_time < 1 || spec.n_space < 1 {
        return Err(Error::domain("sample grid needs at least one point per axis"));
    }
    let mut pts = Vec::with_capacity(spec.n_time * spec.n_space);
    let xs = uniform_base_points(base, spec.n_space)?;
    for i in 0..spec.n_time {
        let t = if spec.n_time == 1 {
            interval.0
        } else {
            interval.0 + (interval.1 - interval.0) * i as f64 / (spec.n_time - 1) as f64
        };
        for x in &xs {
            pts.push(SpacetimePoint::new(t, x.clone()));
        }
    }
    Ok(pts)
}

fn uniform_base_points(
    base: &RiemannianBase,
    n: usize,
) -> Result<Vec<crate::base::BasePoint>> {
    Ok(match base {
        RiemannianBase::Interval { min, max, .. } => (0..n)
            .map(|k| {
                crate::base::BasePoint::one(if n == 1 {
                    *min
                } else {
                    min + (max - min) * k as f64 / (n - 1) as f64
                })
            })
            .collect(),
        RiemannianBase::Circle { .. } => (0..n)
            .map(|k| {
                crate::base::BasePoint::one(core::f64::consts::TAU * k as f64 / n as f64)
            })
            .collect(),
        _ => sample_points(base, n, 0)?,
    })
}

/// One row of the convergence table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub j: u32,
    pub eps_j: f64,
    pub gh_bound: f64,
    pub swif_bound: f64,
    pub worst_pair: (usize, usize),
    pub max_tolerance: f64,
    /// Sandwich violations against [`warped_bounds`] beyond tolerance.
    pub sandwich_violations: usize,
    /// Envelope violations (uniform families only).
    pub envelope_violations: Option<usize>,
    /// Filled by the driver; the core computes no wall time.
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    ConvergesToLimit,
    BoundedAwayFromLimit { gap: f64 },
}

/// Fiber diameter of one time level at the largest index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiberDiameter {
    pub t: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub rows: Vec<ConvergenceRow>,
    pub verdict: Verdict,
    pub lambda: f64,
    pub mass_value: f64,
    /// Per-level fiber diameters at the largest index.
    pub fiber_diameters: Vec<FiberDiameter>,
    pub sample_size: usize,
    /// Convergence threshold used for the verdict.
    pub threshold: f64,
}

/// Experiment description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub base: RiemannianBase,
    pub sequence: WarpingSequence,
    pub limit: LimitMetric,
    pub method: StepMethod,
    pub samples: SampleSpec,
    /// `ε_last ≤ threshold` declares convergence; otherwise the verdict
    /// is bounded-away with that gap.
    pub verdict_threshold: f64,
}

/// Matrix of a single family member over the sample points.
pub fn step_distance_matrix(
    spec: &ExperimentSpec,
    j: u32,
) -> Result<(DistanceMatrix, WarpedSpacetime)> {
    let warping = spec.sequence.family.warping(j)?;
    let st = WarpedSpacetime::new(FAMILY_INTERVAL, spec.base.clone(), warping)?;
    let tf = TimeFunction::Canonical;
    let points = sample_grid(&spec.base, FAMILY_INTERVAL, &spec.samples)?;
    let matrix = match &spec.method {
        StepMethod::Lattice(cfg) => {
            let lat = Lattice::build(&st, &tf, cfg.clone())?;
            lattice_distance_matrix(&lat, &points)?
        }
        StepMethod::Profile { n_levels } => {
            let n = points.len();
            let mut m = alloc::vec![alloc::vec![0.0f64; n]; n];
            let mut tol = alloc::vec![alloc::vec![0.0f64; n]; n];
            let (t0, t1) = st.interval();
            let slack = 4.0 * (t1 - t0) / *n_levels as f64 * st.warping.f_max;
            for i in 0..n {
                for k in (i + 1)..n {
                    let r = profile_null_distance(&st, &tf, &points[i], &points[k], *n_levels)?;
                    m[i][k] = r.value;
                    m[k][i] = r.value;
                    tol[i][k] = slack;
                    tol[k][i] = slack;
                }
            }
            DistanceMatrix {
                points,
                matrix: m,
                tolerances: tol,
                max_tolerance: slack,
            }
        }
    };
    Ok((matrix, st))
}

/// Run one index of the experiment.
pub fn run_convergence_step(spec: &ExperimentSpec, j: u32) -> Result<ConvergenceRow> {
    let (dm, st) = step_distance_matrix(spec, j)?;
    let n = dm.points.len();
    let lambda = spec.sequence.family.lambda(&spec.sequence.j_list);
    let mass = mass_proxy(&st, lambda)?;

    let mut eps = 0.0f64;
    let mut worst = (0, 0);
    let mut sandwich_violations = 0usize;
    let mut envelope_violations = spec.sequence.family.uniform_eps(j).map(|_| 0usize);
    for i in 0..n {
        for k in (i + 1)..n {
            let (p, q) = (&dm.points[i], &dm.points[k]);
            let lim = evaluate_limit(&spec.limit, p, q, &spec.base)?;
            let diff = (dm.matrix[i][k] - lim).abs();
            if diff > eps {
                eps = diff;
                worst = (i, k);
            }
            let (lo, hi) = warped_bounds(&st, p, q)?;
            let tol = dm.tolerances[i][k].max(1e-9);
            if dm.matrix[i][k] < lo - tol || dm.matrix[i][k] > hi + tol {
                sandwich_violations += 1;
            }
            if let (Some(viol), Some(eps_f)) = (
                envelope_violations.as_mut(),
                spec.sequence.family.uniform_eps(j),
            ) {
                let d_inf = sigma_null_distance(&st, p, q)?;
                let (lo_e, hi_e) = pointwise_envelope(eps_f, 1.0, d_inf)?;
                if dm.matrix[i][k] < lo_e - tol || dm.matrix[i][k] > hi_e + tol {
                    *viol += 1;
                }
            }
        }
    }
    let m_dim = 1 + spec.base.dim() as u32;
    Ok(ConvergenceRow {
        j,
        eps_j: eps,
        gh_bound: gh_upper_bound(eps)?,
        swif_bound: swif_upper_bound(eps, lambda, m_dim, &mass)?,
        worst_pair: worst,
        max_tolerance: dm.max_tolerance,
        sandwich_violations,
        envelope_violations,
        runtime_ms: 0.0,
    })
}

/// Fiber diameters per sampled time level at index `j`.
pub fn fiber_diameters(spec: &ExperimentSpec, j: u32) -> Result<Vec<FiberDiameter>> {
    let (dm, _) = step_distance_matrix(spec, j)?;
    let mut levels: Vec<f64> = Vec::new();
    for p in &dm.points {
        if !levels.iter().any(|&t| t == p.t) {
            levels.push(p.t);
        }
    }
    let mut out = Vec::new();
    for &t in &levels {
        let idx: Vec<usize> = (0..dm.points.len())
            .filter(|&i| dm.points[i].t == t)
            .collect();
        let mut diam = 0.0f64;
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                diam = diam.max(dm.matrix[idx[a]][idx[b]]);
            }
        }
        out.push(FiberDiameter { t, diameter: diam });
    }
    Ok(out)
}

/// Run the whole experiment sequentially. Drivers that parallelize per
/// index call [`run_convergence_step`] directly and assemble with
/// [`assemble_report`].
pub fn run_convergence_experiment(spec: &ExperimentSpec) -> Result<ConvergenceReport> {
    let mut rows = Vec::new();
    for &j in &spec.sequence.j_list {
        rows.push(run_convergence_step(spec, j)?);
    }
    assemble_report(spec, rows)
}

pub fn assemble_report(
    spec: &ExperimentSpec,
    rows: Vec<ConvergenceRow>,
) -> Result<ConvergenceReport> {
    if rows.is_empty() {
        return Err(Error::domain("experiment needs at least one index"));
    }
    let lambda = spec.sequence.family.lambda(&spec.sequence.j_list);
    let st_ref = WarpedSpacetime::new(
        FAMILY_INTERVAL,
        spec.base.clone(),
        WarpingFunction::unit(),
    )?;
    let mass = mass_proxy(&st_ref, lambda)?;
    let last = rows.last().unwrap();
    let verdict = if last.eps_j <= spec.verdict_threshold {
        Verdict::ConvergesToLimit
    } else {
        Verdict::BoundedAwayFromLimit { gap: last.eps_j }
    };
    let fibers = fiber_diameters(spec, last.j)?;
    let sample_size = spec.samples.n_time * spec.samples.n_space;
    Ok(ConvergenceReport {
        family: spec.sequence.family.name().into(),
        rows,
        verdict,
        lambda,
        mass_value: mass.value,
        fiber_diameters: fibers,
        sample_size,
        threshold: spec.verdict_threshold,
    })
}

/// Collapse diagnostic: flags fiber levels whose diameter at the largest
/// index fell below `3 ×` the worst lattice tolerance of the last row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapseDiagnostic {
    pub threshold: f64,
    pub levels: Vec<(f64, f64, bool)>,
}

pub fn collapse_diagnostic(report: &ConvergenceReport) -> CollapseDiagnostic {
    let tol = report
        .rows
        .last()
        .map(|r| r.max_tolerance)
        .unwrap_or(0.0);
    let threshold = 3.0 * tol.max(1e-9);
    CollapseDiagnostic {
        threshold,
        levels: report
            .fiber_diameters
            .iter()
            .map(|f| (f.t, f.diameter, f.diameter <= threshold))
            .collect(),
    }
}
