//! Piecewise causal curves and the null length functional
//! `L̂_τ(β) = Σ |τ(β(s_i)) - τ(β(s_{i-1}))|`.
//!
//! Curves store exact segment endpoints and the functional never
//! integrates: for piecewise data the sum of increments is the whole
//! story. Fractal families are built by their defining recursions in
//! rational arithmetic (dyadic/triadic breakpoints are exact up to the
//! generation cap), so the canonical-time null length of the timelike and
//! null counterexample families is exact, not approximate.

use alloc::vec::Vec;
use num_traits::{Float, Zero};
use serde::{Deserialize, Serialize};

use crate::base::{
    base_distance, geodesic_interpolate_oriented, BasePoint, GeodesicOrientation, RiemannianBase,
};
use crate::error::Error;
use crate::scalar::{Rational, Scalar};
use crate::spacetime::{causal_reach, SpacetimePoint, WarpedSpacetime};
use crate::timefn::{DeltaTau, TimeFunction};
use crate::Result;

/// Matching tolerance for the per-segment null condition `d_σ = reach`.
pub const NULL_TOL: f64 = 1e-9;
/// Endpoint continuity tolerance between consecutive segments.
pub const CONTINUITY_TOL: f64 = 1e-12;
/// Fractal generation cap keeping breakpoints exact in 128-bit rationals.
pub const FRACTAL_MAX_INDEX: u32 = 30;

/// Causal character of one smooth segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    FutureNull,
    PastNull,
    FutureTimelike,
    PastTimelike,
}

impl SegmentKind {
    pub fn is_future(self) -> bool {
        matches!(self, SegmentKind::FutureNull | SegmentKind::FutureTimelike)
    }
    pub fn is_null(self) -> bool {
        matches!(self, SegmentKind::FutureNull | SegmentKind::PastNull)
    }
    pub fn reversed(self) -> Self {
        match self {
            SegmentKind::FutureNull => SegmentKind::PastNull,
            SegmentKind::PastNull => SegmentKind::FutureNull,
            SegmentKind::FutureTimelike => SegmentKind::PastTimelike,
            SegmentKind::PastTimelike => SegmentKind::FutureTimelike,
        }
    }
}

/// One causal segment; the base path is the minimizing geodesic between
/// its base endpoints (ties broken by `orientation`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CausalSegment {
    pub kind: SegmentKind,
    pub t_start: Scalar,
    pub t_end: Scalar,
    pub base_start: BasePoint,
    pub base_end: BasePoint,
    #[serde(default)]
    pub orientation: GeodesicOrientation,
}

impl CausalSegment {
    pub fn new(
        kind: SegmentKind,
        t_start: impl Into<Scalar>,
        t_end: impl Into<Scalar>,
        base_start: BasePoint,
        base_end: BasePoint,
    ) -> Self {
        CausalSegment {
            kind,
            t_start: t_start.into(),
            t_end: t_end.into(),
            base_start,
            base_end,
            orientation: GeodesicOrientation::Positive,
        }
    }

    pub fn start_point(&self) -> SpacetimePoint {
        SpacetimePoint::new(self.t_start.to_f64(), self.base_start.clone())
    }

    pub fn end_point(&self) -> SpacetimePoint {
        SpacetimePoint::new(self.t_end.to_f64(), self.base_end.clone())
    }
}

/// An ordered, continuous concatenation of causal segments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseCausalCurve {
    pub segments: Vec<CausalSegment>,
}

impl PiecewiseCausalCurve {
    pub fn new(segments: Vec<CausalSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::domain("curve needs at least one segment"));
        }
        Ok(PiecewiseCausalCurve { segments })
    }

    pub fn start(&self) -> SpacetimePoint {
        self.segments[0].start_point()
    }

    pub fn end(&self) -> SpacetimePoint {
        self.segments[self.segments.len() - 1].end_point()
    }

    /// Orientation-reversed curve; null length is invariant under this.
    pub fn reversed(&self) -> Self {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| CausalSegment {
                kind: s.kind.reversed(),
                t_start: s.t_end.clone(),
                t_end: s.t_start.clone(),
                base_start: s.base_end.clone(),
                base_end: s.base_start.clone(),
                orientation: s.orientation,
            })
            .collect();
        PiecewiseCausalCurve { segments }
    }

    /// Restriction to a contiguous block of segments.
    pub fn restrict(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.segments.len() {
            return Err(Error::domain("invalid restriction range"));
        }
        PiecewiseCausalCurve::new(self.segments[from..to].to_vec())
    }

    /// Largest deviation of breakpoint positions from the diagonal
    /// `t = x` (1-D bases only); used by the semicontinuity witnesses.
    pub fn sup_deviation_from_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in &self.segments {
            for (t, x) in [
                (s.t_start.to_f64(), s.base_start.coords[0]),
                (s.t_end.to_f64(), s.base_end.coords[0]),
            ] {
                worst = worst.max((t - x).abs());
            }
        }
        worst
    }
}

/// Null length `Σ |Δτ|`: exact rational accumulation where the time
/// function permits, compensated (Neumaier) float summation otherwise.
pub fn null_length(curve: &PiecewiseCausalCurve, tf: &TimeFunction) -> f64 {
    let mut exact = Rational::zero();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for seg in &curve.segments {
        match tf.delta(&seg.t_start, &seg.t_end) {
            DeltaTau::Exact(r) => {
                exact += if r < Rational::zero() { -r } else { r };
            }
            DeltaTau::Float(x) => {
                let x = x.abs();
                let t = sum + x;
                comp += if sum.abs() >= x.abs() {
                    (sum - t) + x
                } else {
                    (x - t) + sum
                };
                sum = t;
            }
        }
    }
    Scalar::Exact(exact).to_f64() + sum + comp
}

/// Null length as an exact rational, when every segment increment is
/// exact under `tf` (canonical/step time on rational breakpoints).
pub fn null_length_exact(curve: &PiecewiseCausalCurve, tf: &TimeFunction) -> Option<Rational> {
    let mut acc = Rational::zero();
    for seg in &curve.segments {
        match tf.delta(&seg.t_start, &seg.t_end) {
            DeltaTau::Exact(r) => acc += if r < Rational::zero() { -r } else { r },
            DeltaTau::Float(_) => return None,
        }
    }
    Some(acc)
}

/// A violated curve invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CurveViolation {
    Discontinuity { index: usize, gap: f64 },
    OutsideInterval { index: usize, t: f64 },
    WrongTimeDirection { index: usize },
    NullMismatch { index: usize, mismatch: f64 },
    NotCausal { index: usize, excess: f64 },
}

/// Validation report; empty means the curve is admissible.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<CurveViolation>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check continuity and the per-segment causal conditions against a
/// spacetime. Violations are reported, not fatal.
pub fn validate(curve: &PiecewiseCausalCurve, spacetime: &WarpedSpacetime) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, seg) in curve.segments.iter().enumerate() {
        let (ta, tb) = (seg.t_start.to_f64(), seg.t_end.to_f64());
        for t in [ta, tb] {
            if !spacetime.contains_time(t) {
                report
                    .violations
                    .push(CurveViolation::OutsideInterval { index: i, t });
            }
        }
        if i + 1 < curve.segments.len() {
            let next = &curve.segments[i + 1];
            let dt = (tb - next.t_start.to_f64()).abs();
            let dx = base_distance(&spacetime.base, &seg.base_end, &next.base_start)
                .unwrap_or(f64::INFINITY);
            let gap = dt.max(dx);
            if gap > CONTINUITY_TOL {
                report
                    .violations
                    .push(CurveViolation::Discontinuity { index: i, gap });
            }
        }
        let future = tb > ta;
        if tb == ta || future != seg.kind.is_future() {
            report
                .violations
                .push(CurveViolation::WrongTimeDirection { index: i });
            continue;
        }
        let d = match base_distance(&spacetime.base, &seg.base_start, &seg.base_end) {
            Ok(d) => d,
            Err(_) => {
                report
                    .violations
                    .push(CurveViolation::OutsideInterval { index: i, t: ta });
                continue;
            }
        };
        let reach = match causal_reach(spacetime, ta, tb) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let tol = NULL_TOL * (1.0 + reach.abs());
        if seg.kind.is_null() {
            let mismatch = (d - reach).abs();
            if mismatch > tol {
                report
                    .violations
                    .push(CurveViolation::NullMismatch { index: i, mismatch });
            }
        } else if d >= reach + tol {
            report.violations.push(CurveViolation::NotCausal {
                index: i,
                excess: d - reach,
            });
        }
    }
    report
}

fn solve_reach_level(
    spacetime: &WarpedSpacetime,
    a: f64,
    b: f64,
    target: f64,
) -> Result<f64> {
    // smallest x in [a, b] with reach(a, x) = target (reach is strictly
    // increasing in x); bisection against the quadrature oracle
    let full = causal_reach(spacetime, a, b)?;
    if target > full * (1.0 + 1e-12) {
        return Err(Error::precondition(
            "band too narrow to fit teeth under the warping bounds",
        ));
    }
    if target <= 0.0 {
        return Ok(a);
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if causal_reach(spacetime, a, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Piecewise null zig-zag from `p` to `q` lifted over the minimizing base
/// geodesic, with `2 n_teeth` null teeth confined to the time band
/// `[band.0, band.1]`. Endpoints may sit anywhere inside the band; they
/// are joined to the tooth line by null descent/ascent legs.
pub fn generate_zigzag(
    spacetime: &WarpedSpacetime,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    n_teeth: usize,
    band: (f64, f64),
) -> Result<PiecewiseCausalCurve> {
    spacetime.check_point(p)?;
    spacetime.check_point(q)?;
    let (a, b) = band;
    let (t0, t1) = spacetime.interval();
    if !(a < b) || a < t0 - 1e-12 || b > t1 + 1e-12 {
        return Err(Error::domain("band must be a nonempty subinterval of I"));
    }
    if n_teeth == 0 {
        return Err(Error::domain("need n_teeth >= 1"));
    }
    for t in [p.t, q.t] {
        if t < a - 1e-12 || t > b + 1e-12 {
            return Err(Error::precondition("endpoints must lie inside the band"));
        }
    }
    let orient = GeodesicOrientation::Positive;
    let big_d = base_distance(&spacetime.base, &p.x, &q.x)?;
    let r_p = causal_reach(spacetime, a, p.t)?;
    let r_q = causal_reach(spacetime, a, q.t)?;
    if big_d + 1e-12 < r_p + r_q {
        return Err(Error::precondition(
            "endpoints too close: descent legs overshoot the base separation",
        ));
    }
    if big_d == 0.0 {
        return Err(Error::precondition(
            "zig-zag needs distinct base endpoints",
        ));
    }
    let s = ((big_d - r_p - r_q) / (2.0 * n_teeth as f64)).max(0.0);
    let t_top = solve_reach_level(spacetime, a, b, s)?;

    let at = |u: f64| -> Result<BasePoint> {
        geodesic_interpolate_oriented(&spacetime.base, &p.x, &q.x, (u / big_d).clamp(0.0, 1.0), orient)
    };

    let mut segments = Vec::new();
    let mut u = 0.0;
    if r_p > 0.0 {
        let nb = at(r_p)?;
        segments.push(CausalSegment::new(
            SegmentKind::PastNull,
            p.t,
            a,
            p.x.clone(),
            nb,
        ));
        u = r_p;
    }
    if s > 0.0 {
        for _ in 0..n_teeth {
            let up_end = at(u + s)?;
            let down_end = at(u + 2.0 * s)?;
            let from = segments
                .last()
                .map(|sg: &CausalSegment| sg.base_end.clone())
                .unwrap_or_else(|| p.x.clone());
            segments.push(CausalSegment::new(
                SegmentKind::FutureNull,
                a,
                t_top,
                from,
                up_end.clone(),
            ));
            segments.push(CausalSegment::new(
                SegmentKind::PastNull,
                t_top,
                a,
                up_end,
                down_end,
            ));
            u += 2.0 * s;
        }
    }
    if r_q > 0.0 {
        let from = segments
            .last()
            .map(|sg: &CausalSegment| sg.base_end.clone())
            .unwrap_or_else(|| p.x.clone());
        segments.push(CausalSegment::new(
            SegmentKind::FutureNull,
            a,
            q.t,
            from,
            q.x.clone(),
        ));
    }
    if segments.is_empty() {
        return Err(Error::precondition(
            "degenerate zig-zag: no segments to emit",
        ));
    }
    // make the final endpoint exact
    if let Some(last) = segments.last_mut() {
        last.base_end = q.x.clone();
    }
    PiecewiseCausalCurve::new(segments)
}

/// The explicit counterexample curve families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FractalFamily {
    /// Piecewise timelike graphs with constant null length 2 converging
    /// to a null segment of length 1.
    Timelike2,
    /// Piecewise null curves with constant null length 5, same limit.
    Null5,
    /// The square-root-time family whose lengths decrease to the
    /// unattained distance 1.
    SqrtNonattained,
    /// Approximants of the removed-point causality violator.
    RemovedPoint,
    /// Approximants of the removed-line causality violator.
    RemovedLine,
}

impl FractalFamily {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "timelike_2" => FractalFamily::Timelike2,
            "null_5" => FractalFamily::Null5,
            "sqrt_nonattained" => FractalFamily::SqrtNonattained,
            "removed_point" => FractalFamily::RemovedPoint,
            "removed_line" => FractalFamily::RemovedLine,
            other => {
                return Err(Error::domain(alloc::format!(
                    "unknown fractal family '{other}'"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FractalFamily::Timelike2 => "timelike_2",
            FractalFamily::Null5 => "null_5",
            FractalFamily::SqrtNonattained => "sqrt_nonattained",
            FractalFamily::RemovedPoint => "removed_point",
            FractalFamily::RemovedLine => "removed_line",
        }
    }

    /// The Minkowski-strip ambient each family lives in.
    pub fn ambient(self) -> WarpedSpacetime {
        let (tspan, xspan) = match self {
            FractalFamily::Timelike2 => ((0.0, 1.5), (0.0, 1.0)),
            FractalFamily::Null5 => ((0.0, 2.0), (-1.0, 1.0)),
            FractalFamily::SqrtNonattained => ((0.0, 1.0), (-1.0, 1.0)),
            FractalFamily::RemovedPoint => ((0.0, 2.5), (0.0, 2.0)),
            FractalFamily::RemovedLine => ((0.0, 2.0), (0.0, 1.5)),
        };
        WarpedSpacetime::product(
            tspan,
            RiemannianBase::Interval {
                min: xspan.0,
                max: xspan.1,
                open: false,
            },
        )
        .expect("fractal ambient is well-formed")
    }
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn graph_curve(points: Vec<(Rational, Rational)>, classify: impl Fn(&Rational) -> SegmentKind) -> PiecewiseCausalCurve {
    let mut segments = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        let (ref s0, ref t0) = w[0];
        let (ref s1, ref t1) = w[1];
        let slope = (t1 - t0) / (s1 - s0);
        segments.push(CausalSegment::new(
            classify(&slope),
            Scalar::Exact(t0.clone()),
            Scalar::Exact(t1.clone()),
            BasePoint::one(Scalar::Exact(s0.clone()).to_f64()),
            BasePoint::one(Scalar::Exact(s1.clone()).to_f64()),
        ));
    }
    PiecewiseCausalCurve::new(segments).expect("graph curve nonempty")
}

fn timelike2_points(i: u32) -> Vec<(Rational, Rational)> {
    // graphs over x ∈ [0, 1]: level 1 rises with slope 3 then falls with
    // slope -1; each level is two half-scale copies of the previous one
    let mut pts = alloc::vec![
        (r(0, 1), r(0, 1)),
        (r(1, 2), r(3, 2)),
        (r(1, 1), r(1, 1)),
    ];
    let half = r(1, 2);
    for _ in 1..i {
        let mut next: Vec<(Rational, Rational)> =
            pts.iter().map(|(s, t)| (s * &half, t * &half)).collect();
        next.extend(
            pts.iter()
                .skip(1)
                .map(|(s, t)| ((s + 1) * &half, (t + 1) * &half)),
        );
        pts = next;
    }
    pts
}

fn sqrt_points(i: u32) -> Vec<(Rational, Rational)> {
    // graphs over x ∈ [-1, 1] joining (-1, 1) to (1, 1); level 1 is |x|
    let mut pts = alloc::vec![
        (r(-1, 1), r(1, 1)),
        (r(0, 1), r(0, 1)),
        (r(1, 1), r(1, 1)),
    ];
    let half = r(1, 2);
    for _ in 1..i {
        let mut next: Vec<(Rational, Rational)> = pts
            .iter()
            .map(|(s, t)| ((s - 1) * &half, (t + 1) * &half))
            .collect();
        next.extend(
            pts.iter()
                .skip(1)
                .map(|(s, t)| ((s + 1) * &half, (t + 1) * &half)),
        );
        pts = next;
    }
    pts
}

/// Tokens of the null-5 family: a `Z` excursion of amplitude `a`
/// advancing `d` along the diagonal (three null segments, null length
/// `2a + d`), and plain diagonal runs. Refinement halves amplitudes and
/// splits each excursion into two separated by a diagonal third, which
/// preserves the total null length.
enum NullTok {
    Z { a: Rational, d: Rational },
    Diag(Rational),
}

fn null5_segments(i: u32) -> Vec<(Rational, Rational, SegmentKind)> {
    let third = r(1, 3);
    let mut toks = alloc::vec![
        NullTok::Z {
            a: r(1, 1),
            d: r(1, 3),
        },
        NullTok::Diag(r(1, 3)),
        NullTok::Z {
            a: r(1, 1),
            d: r(1, 3),
        },
    ];
    for _ in 1..i {
        let mut next = Vec::with_capacity(toks.len() * 2);
        for tok in toks {
            match tok {
                NullTok::Z { a, d } => {
                    let (ha, td) = (&a / r(2, 1), &d * &third);
                    next.push(NullTok::Z {
                        a: ha.clone(),
                        d: td.clone(),
                    });
                    next.push(NullTok::Diag(td.clone()));
                    next.push(NullTok::Z { a: ha, d: td });
                }
                NullTok::Diag(d) => next.push(NullTok::Diag(d)),
            }
        }
        toks = next;
    }
    // displacements (dx, dt) with causal kind; Z = left-up, diag, right-down
    let mut out = Vec::new();
    for tok in &toks {
        match tok {
            NullTok::Z { a, d } => {
                out.push((-a.clone(), a.clone(), SegmentKind::FutureNull));
                out.push((d.clone(), d.clone(), SegmentKind::FutureNull));
                out.push((a.clone(), -a.clone(), SegmentKind::PastNull));
            }
            NullTok::Diag(d) => out.push((d.clone(), d.clone(), SegmentKind::FutureNull)),
        }
    }
    out
}

/// Exact construction of the `i`-th member of a counterexample family.
pub fn fractal_family(family: FractalFamily, i: u32) -> Result<PiecewiseCausalCurve> {
    if i == 0 || i > FRACTAL_MAX_INDEX {
        return Err(Error::domain(alloc::format!(
            "fractal index must lie in 1..={FRACTAL_MAX_INDEX}"
        )));
    }
    Ok(match family {
        FractalFamily::Timelike2 => graph_curve(timelike2_points(i), |slope| {
            if *slope > Rational::zero() {
                SegmentKind::FutureTimelike
            } else {
                SegmentKind::PastNull
            }
        }),
        FractalFamily::SqrtNonattained => graph_curve(sqrt_points(i), |slope| {
            if *slope > Rational::zero() {
                SegmentKind::FutureNull
            } else {
                SegmentKind::PastNull
            }
        }),
        FractalFamily::Null5 => {
            let mut x = Rational::zero();
            let mut t = Rational::zero();
            let mut segments = Vec::new();
            for (dx, dt, kind) in null5_segments(i) {
                let (x1, t1) = (&x + &dx, &t + &dt);
                segments.push(CausalSegment::new(
                    kind,
                    Scalar::Exact(t.clone()),
                    Scalar::Exact(t1.clone()),
                    BasePoint::one(Scalar::Exact(x.clone()).to_f64()),
                    BasePoint::one(Scalar::Exact(x1.clone()).to_f64()),
                ));
                x = x1;
                t = t1;
            }
            PiecewiseCausalCurve::new(segments)?
        }
        FractalFamily::RemovedPoint => {
            let eps = r(1, 1 << i.min(62));
            let mid_x = r(2, 1) - &eps;
            let mid_t = r(2, 1) + &eps;
            PiecewiseCausalCurve::new(alloc::vec![
                CausalSegment::new(
                    SegmentKind::FutureTimelike,
                    Scalar::Exact(r(0, 1)),
                    Scalar::Exact(mid_t.clone()),
                    BasePoint::one(0.0),
                    BasePoint::one(Scalar::Exact(mid_x.clone()).to_f64()),
                ),
                CausalSegment::new(
                    SegmentKind::PastNull,
                    Scalar::Exact(mid_t),
                    Scalar::Exact(r(2, 1)),
                    BasePoint::one(Scalar::Exact(mid_x).to_f64()),
                    BasePoint::one(2.0),
                ),
            ])?
        }
        FractalFamily::RemovedLine => {
            let eps = r(1, 1 << i.min(62));
            let h = &eps / r(2, 1);
            let pts: Vec<(Rational, Rational)> = alloc::vec![
                (r(0, 1), r(0, 1)),
                (h.clone(), h.clone()),
                (eps.clone(), r(0, 1)),
                (r(1, 1) + &eps, r(1, 1)),
                (eps.clone(), r(2, 1)),
                (h.clone(), r(2, 1) - &h),
                (r(0, 1), r(2, 1)),
            ];
            let mut segments = Vec::new();
            for w in pts.windows(2) {
                let (ref x0, ref t0) = w[0];
                let (ref x1, ref t1) = w[1];
                let kind = if t1 > t0 {
                    SegmentKind::FutureNull
                } else {
                    SegmentKind::PastNull
                };
                segments.push(CausalSegment::new(
                    kind,
                    Scalar::Exact(t0.clone()),
                    Scalar::Exact(t1.clone()),
                    BasePoint::one(Scalar::Exact(x0.clone()).to_f64()),
                    BasePoint::one(Scalar::Exact(x1.clone()).to_f64()),
                ));
            }
            PiecewiseCausalCurve::new(segments)?
        }
    })
}

/// Closed form for the sqrt family's null length,
/// `2^{(i+1)/2} (2^{(i-1)/2} - (2^{i-1}-1)^{1/2})`, evaluated through the
/// cancellation-free reciprocal form.
pub fn sqrt_family_length_formula(i: u32) -> f64 {
    let p = 2f64.powf((i as f64 + 1.0) / 2.0);
    let q = 2f64.powf((i as f64 - 1.0) / 2.0);
    let m = (2f64.powi(i as i32 - 1) - 1.0).sqrt();
    p / (q + m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::warp_registry;

    #[test]
    fn timelike_family_exact_two() {
        let tf = TimeFunction::Canonical;
        for i in 1..=10 {
            let c = fractal_family(FractalFamily::Timelike2, i).unwrap();
            assert_eq!(null_length_exact(&c, &tf).unwrap(), Rational::new(2, 1));
            assert_eq!(null_length(&c, &tf), 2.0);
            assert!(validate(&c, &FractalFamily::Timelike2.ambient()).is_admissible());
        }
    }

    #[test]
    fn null_family_exact_five() {
        let tf = TimeFunction::Canonical;
        for i in 1..=10 {
            let c = fractal_family(FractalFamily::Null5, i).unwrap();
            assert_eq!(null_length_exact(&c, &tf).unwrap(), Rational::new(5, 1));
            assert_eq!(null_length(&c, &tf), 5.0);
            assert!(
                validate(&c, &FractalFamily::Null5.ambient()).is_admissible(),
                "i = {i}"
            );
        }
    }

    #[test]
    fn families_converge_to_unit_null_segment() {
        // lower-semicontinuity witnesses: lengths stay at 2 and 5 while the
        // point sets converge to the diagonal null segment of length 1
        let limit = PiecewiseCausalCurve::new(alloc::vec![CausalSegment::new(
            SegmentKind::FutureNull,
            Scalar::from_int(0),
            Scalar::from_int(1),
            BasePoint::one(0.0),
            BasePoint::one(1.0),
        )])
        .unwrap();
        assert_eq!(null_length(&limit, &TimeFunction::Canonical), 1.0);
        let mut prev_dev = f64::INFINITY;
        for i in [1, 3, 6, 9] {
            let c = fractal_family(FractalFamily::Timelike2, i).unwrap();
            let dev = c.sup_deviation_from_diagonal();
            assert!(dev < prev_dev);
            prev_dev = dev;
        }
        let c9 = fractal_family(FractalFamily::Null5, 9).unwrap();
        // amplitude 2^{1-i}, peak deviation 2 · amplitude
        assert!(c9.sup_deviation_from_diagonal() <= 2f64.powi(-7) * (1.0 + 1e-9));
    }

    #[test]
    fn sqrt_family_lengths() {
        let tf = TimeFunction::Sqrt;
        let c1 = fractal_family(FractalFamily::SqrtNonattained, 1).unwrap();
        assert!((null_length(&c1, &tf) - 2.0).abs() < 1e-15);
        for i in 1..=20 {
            let c = fractal_family(FractalFamily::SqrtNonattained, i).unwrap();
            let got = null_length(&c, &tf);
            let want = sqrt_family_length_formula(i);
            assert!(
                (got - want).abs() <= 1e-12,
                "i={i} got={got} want={want} diff={:e}",
                got - want
            );
        }
        assert!((sqrt_family_length_formula(20) - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn removed_families_lengths() {
        let tf = TimeFunction::Canonical;
        for i in 1..=8 {
            let cp = fractal_family(FractalFamily::RemovedPoint, i).unwrap();
            let want = r(2, 1) + r(2, 1 << i);
            assert_eq!(null_length_exact(&cp, &tf).unwrap(), want);
            assert!(validate(&cp, &FractalFamily::RemovedPoint.ambient()).is_admissible());

            let cl = fractal_family(FractalFamily::RemovedLine, i).unwrap();
            let want = r(2, 1) + r(2, 1 << i);
            assert_eq!(null_length_exact(&cl, &tf).unwrap(), want);
            assert!(validate(&cl, &FractalFamily::RemovedLine.ambient()).is_admissible());
        }
    }

    #[test]
    fn additivity_exact_at_breakpoints() {
        let tf = TimeFunction::Canonical;
        let c = fractal_family(FractalFamily::Null5, 4).unwrap();
        let n = c.segments.len();
        for cut in [1, n / 3, n / 2, n - 1] {
            let left = c.restrict(0, cut).unwrap();
            let right = c.restrict(cut, n).unwrap();
            let whole = null_length_exact(&c, &tf).unwrap();
            let split =
                null_length_exact(&left, &tf).unwrap() + null_length_exact(&right, &tf).unwrap();
            assert_eq!(whole, split);
        }
    }

    #[test]
    fn reversal_invariance() {
        for (fam, tf) in [
            (FractalFamily::Timelike2, TimeFunction::Canonical),
            (FractalFamily::SqrtNonattained, TimeFunction::Sqrt),
        ] {
            let c = fractal_family(fam, 5).unwrap();
            let fwd = null_length(&c, &tf);
            let bwd = null_length(&c.reversed(), &tf);
            assert!((fwd - bwd).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_length_dominates_time_separation() {
        let c = fractal_family(FractalFamily::Timelike2, 6).unwrap();
        let dt = (c.end().t - c.start().t).abs();
        assert!(null_length(&c, &TimeFunction::Canonical) >= dt);
    }

    #[test]
    fn single_null_segment_length() {
        let c = PiecewiseCausalCurve::new(alloc::vec![CausalSegment::new(
            SegmentKind::FutureNull,
            Scalar::Float(0.0),
            Scalar::Float(0.7),
            BasePoint::one(0.0),
            BasePoint::one(0.7),
        )])
        .unwrap();
        assert!((null_length(&c, &TimeFunction::Canonical) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn validation_flags_forced_violations() {
        let st = FractalFamily::Timelike2.ambient();
        // d_σ > reach on a "null" segment
        let bad = PiecewiseCausalCurve::new(alloc::vec![CausalSegment::new(
            SegmentKind::FutureNull,
            Scalar::Float(0.0),
            Scalar::Float(0.2),
            BasePoint::one(0.0),
            BasePoint::one(0.9),
        )])
        .unwrap();
        let rep = validate(&bad, &st);
        assert!(!rep.is_admissible());
        // endpoint gap of 1e-6 between segments
        let gapped = PiecewiseCausalCurve::new(alloc::vec![
            CausalSegment::new(
                SegmentKind::FutureNull,
                Scalar::Float(0.0),
                Scalar::Float(0.2),
                BasePoint::one(0.0),
                BasePoint::one(0.2),
            ),
            CausalSegment::new(
                SegmentKind::FutureNull,
                Scalar::Float(0.2 + 1e-6),
                Scalar::Float(0.4),
                BasePoint::one(0.2),
                BasePoint::one(0.4 - 1e-6),
            ),
        ])
        .unwrap();
        let rep = validate(&gapped, &st);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, CurveViolation::Discontinuity { .. })));
    }

    #[test]
    fn zigzag_product_case() {
        // f ≡ 1, level-0 endpoints with d_σ = 2, band [0, 1], two teeth
        let st = WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        let c = generate_zigzag(&st, &p, &q, 2, (0.0, 1.0)).unwrap();
        assert!(validate(&c, &st).is_admissible());
        assert_eq!(c.segments.len(), 4);
        let len = null_length(&c, &TimeFunction::Canonical);
        assert!((len - 2.0).abs() < 1e-9, "len {len}");
    }

    #[test]
    fn zigzag_band_with_constant_warping_gives_h0_d() {
        // inside the flat part of the example51 band f ≡ h0, so the teeth
        // cost exactly h0 · d_σ
        let h0 = 0.5;
        let j = 4;
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::circle(core::f64::consts::TAU).unwrap(),
            warp_registry::example51(h0, j).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(core::f64::consts::PI));
        let band = (0.0, 1.0 / (2.0 * j as f64));
        let c = generate_zigzag(&st, &p, &q, 64, band).unwrap();
        assert!(validate(&c, &st).is_admissible());
        let len = null_length(&c, &TimeFunction::Canonical);
        assert!(
            (len - h0 * core::f64::consts::PI).abs() < 1e-8,
            "len {len}"
        );
    }

    #[test]
    fn zigzag_band_bounds_under_tsq_warping() {
        let delta = 0.3;
        let st = WarpedSpacetime::new(
            (-1.0, 1.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(-1.0, 1.0),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        let c = generate_zigzag(&st, &p, &q, 8, (0.0, delta)).unwrap();
        assert!(validate(&c, &st).is_admissible());
        let len = null_length(&c, &TimeFunction::Canonical);
        let d = 2.0;
        assert!(len >= d - 1e-9 && len <= (delta * delta + 1.0) * d + 1e-9, "len {len}");
    }

    #[test]
    fn zigzag_band_too_narrow() {
        let st = WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        // one tooth must cover base distance 1 per flank, but the band only reaches 0.01
        assert!(generate_zigzag(&st, &p, &q, 1, (0.0, 0.01)).is_err());
    }

    #[test]
    fn unknown_family_and_bad_index() {
        assert!(FractalFamily::parse("no_such_family").is_err());
        assert!(fractal_family(FractalFamily::Null5, 0).is_err());
        assert!(fractal_family(FractalFamily::Null5, 31).is_err());
    }
}
