//! Time-profile solver: a fast path for non-causal pairs.
//!
//! Optimal curves between non-causally-related points project (up to
//! reparametrization) onto the minimizing base geodesic; what remains is
//! the time profile `ℓ(u)` over arc position `u ∈ [0, D]`. An envelope of
//! infinitesimal null zig-zags drifting along `ℓ` costs `∫ φ'(ℓ) f(ℓ) du`
//! and can drift no faster than `|ℓ'| ≤ f(ℓ)`; vertical causal segments
//! cost `|Δτ|` at fixed arc position.
//!
//! Two passes are combined:
//! - a dynamic program over the (arc-position, time-level) grid with
//!   drift, flat and vertical moves;
//! - a bang-bang candidate family — descend/ascend at exact cone speed
//!   (cost `|Δτ|`, arc consumed = causal reach) toward a crossing level
//!   `b`, cross flat at `b` — minimized over `b`. These are the
//!   variational optimizers whenever `f` has a single active basin, and
//!   each candidate is the null length of an admissible curve family, so
//!   this pass is an upper bound up to quadrature error.
//!
//! The combined value is a two-sided approximation (not a certified
//! bound); the engine cross-validates it against the lattice oracle and
//! falls back when they disagree beyond the combined tolerance.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use crate::base::base_distance;
use crate::error::Error;
use crate::spacetime::{
    causal_reach, is_causally_related, CausalRelation, SpacetimePoint, WarpedSpacetime,
};
use crate::timefn::TimeFunction;
use crate::Result;

/// Profile solve outcome.
#[derive(Debug, Clone)]
pub struct ProfileValue {
    pub value: f64,
    pub n_levels: usize,
    pub n_arc: usize,
}

/// Cost of the bang-bang candidate crossing at level `b`: cone legs from
/// both endpoints toward `b`, flat zig-zag at `b` for the leftover arc.
/// When the cone legs overshoot the arc budget the legs are trimmed to
/// their meeting point (the V profile); the trimmed level is bracketed
/// between `b` and the endpoint levels, so the candidate stays valid.
fn candidate_cost(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p_t: f64,
    q_t: f64,
    big_d: f64,
    b: f64,
) -> Result<Option<f64>> {
    let reach_p = causal_reach(spacetime, b, p_t)?;
    let reach_q = causal_reach(spacetime, b, q_t)?;
    if reach_p + reach_q > big_d {
        return Ok(None);
    }
    let tau_b = tf.eval_t(b);
    let cone = (tf.eval_t(p_t) - tau_b).abs() + (tf.eval_t(q_t) - tau_b).abs();
    let density = tf
        .density(b)
        .ok_or_else(|| Error::precondition("profile needs a smooth time function"))?;
    let flat = (big_d - reach_p - reach_q) * density * spacetime.warping.eval(b);
    Ok(Some(cone + flat))
}

/// Meeting level of the two cone legs when no flat part fits: smallest
/// `|τ`-cost `V` profile, found by bisection on `reach_p + reach_q = D`.
fn v_profile_cost(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p_t: f64,
    q_t: f64,
    big_d: f64,
    below: bool,
) -> Result<Option<f64>> {
    let (t0, t1) = spacetime.interval();
    let (mut lo, mut hi) = if below {
        (t0, p_t.min(q_t))
    } else {
        (p_t.max(q_t), t1)
    };
    let budget = |b: f64| -> Result<f64> {
        Ok(causal_reach(spacetime, b, p_t)? + causal_reach(spacetime, b, q_t)?)
    };
    // want the level where the legs exactly exhaust the arc budget
    let (at_near, at_far) = if below {
        (budget(hi)?, budget(lo)?)
    } else {
        (budget(lo)?, budget(hi)?)
    };
    if at_far < big_d || at_near > big_d {
        return Ok(None);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let over = budget(mid)? > big_d;
        if below == over {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    let tau_b = tf.eval_t(b);
    Ok(Some(
        (tf.eval_t(p_t) - tau_b).abs() + (tf.eval_t(q_t) - tau_b).abs(),
    ))
}

/// Solve the profile problem with `n_levels` time levels. Preconditions:
/// `p` and `q` are not causally related, the base is 1-D, and `τ` is
/// smooth (has a density).
pub fn profile_null_distance(
    spacetime: &WarpedSpacetime,
    tf: &TimeFunction,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    n_levels: usize,
) -> Result<ProfileValue> {
    if n_levels < 2 {
        return Err(Error::domain("profile needs at least 2 levels"));
    }
    if tf.density(0.0).is_none() {
        return Err(Error::precondition(
            "profile solver needs a smooth time function",
        ));
    }
    if spacetime.base.dim() != 1 {
        return Err(Error::precondition("profile solver needs a 1-D base"));
    }
    if is_causally_related(spacetime, p, q)? != CausalRelation::None {
        return Err(Error::precondition(
            "profile solver is for non-causal pairs; causal pairs cost |Δτ| exactly",
        ));
    }
    let big_d = base_distance(&spacetime.base, &p.x, &q.x)?;
    let (t0, t1) = spacetime.interval();
    let n_arc = (2 * n_levels).max(256);
    let du = big_d / n_arc as f64;
    let dlev = (t1 - t0) / (n_levels - 1) as f64;

    let levels: Vec<f64> = (0..n_levels).map(|l| t0 + dlev * l as f64).collect();
    let fv: Vec<f64> = levels.iter().map(|&t| spacetime.warping.eval(t)).collect();
    let gv: Vec<f64> = levels
        .iter()
        .zip(&fv)
        .map(|(&t, &f)| tf.density(t).unwrap_or(1.0) * f)
        .collect();
    let tauv: Vec<f64> = levels.iter().map(|&t| tf.eval_t(t)).collect();

    let vertical_relax = |dp: &mut Vec<f64>| {
        for l in 1..n_levels {
            let c = dp[l - 1] + (tauv[l] - tauv[l - 1]).abs();
            if c < dp[l] {
                dp[l] = c;
            }
        }
        for l in (0..n_levels - 1).rev() {
            let c = dp[l + 1] + (tauv[l + 1] - tauv[l]).abs();
            if c < dp[l] {
                dp[l] = c;
            }
        }
    };

    // vertical leg from p to every level
    let tau_p = tf.eval_t(p.t);
    let mut dp: Vec<f64> = tauv.iter().map(|&t| (t - tau_p).abs()).collect();
    vertical_relax(&mut dp);

    let f_max = spacetime.warping.f_max;
    let max_window = ((du * f_max / dlev).ceil() as usize).max(1);
    let mut next = vec![0.0f64; n_levels];
    for _ in 0..n_arc {
        for l in 0..n_levels {
            let mut best = f64::INFINITY;
            let lo = l.saturating_sub(max_window);
            let hi = (l + max_window).min(n_levels - 1);
            for m in lo..=hi {
                let fbar = 0.5 * (fv[l] + fv[m]);
                if (levels[l] - levels[m]).abs() > du * fbar * (1.0 + 1e-12) {
                    continue;
                }
                let cost = dp[m] + du * 0.5 * (gv[l] + gv[m]);
                if cost < best {
                    best = cost;
                }
            }
            next[l] = best;
        }
        core::mem::swap(&mut dp, &mut next);
        vertical_relax(&mut dp);
    }

    let tau_q = tf.eval_t(q.t);
    let mut best = f64::INFINITY;
    for l in 0..n_levels {
        let v = dp[l] + (tauv[l] - tau_q).abs();
        if v < best {
            best = v;
        }
    }

    // bang-bang relaxation over crossing levels
    for &b in &levels {
        if let Some(c) = candidate_cost(spacetime, tf, p.t, q.t, big_d, b)? {
            if c < best {
                best = c;
            }
        }
    }
    for below in [true, false] {
        if let Some(c) = v_profile_cost(spacetime, tf, p.t, q.t, big_d, below)? {
            if c < best {
                best = c;
            }
        }
    }

    Ok(ProfileValue {
        value: best,
        n_levels,
        n_arc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{BasePoint, RiemannianBase};
    use crate::engine::warped_bounds;
    use crate::spacetime::{warp_registry, WarpedSpacetime, WarpingFunction};

    #[test]
    fn constant_warping_gives_c_times_d() {
        // the bound pair with f_min = f_max = c forces d̂ = c · d_σ
        for c in [0.5, 1.0, 2.5] {
            let st = WarpedSpacetime::new(
                (0.0, 2.0),
                RiemannianBase::interval(-2.0, 2.0).unwrap(),
                WarpingFunction::constant(c).unwrap(),
            )
            .unwrap();
            let p = SpacetimePoint::new(1.0, BasePoint::one(-1.0));
            let q = SpacetimePoint::new(1.0, BasePoint::one(1.0));
            if is_causally_related(&st, &p, &q).unwrap() != CausalRelation::None {
                continue;
            }
            let v = profile_null_distance(&st, &TimeFunction::Canonical, &p, &q, 201)
                .unwrap()
                .value;
            assert!((v - 2.0 * c).abs() < 1e-6, "c={c} v={v}");
        }
    }

    #[test]
    fn tsq_level_zero_endpoints() {
        let st = WarpedSpacetime::new(
            (-1.0, 1.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(-1.0, 1.0),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        let v = profile_null_distance(&st, &TimeFunction::Canonical, &p, &q, 401)
            .unwrap()
            .value;
        assert!(v >= 2.0 - 1e-9 && v <= 2.01, "v = {v}");
    }

    #[test]
    fn example51_band_value() {
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::circle(core::f64::consts::TAU).unwrap(),
            warp_registry::example51(0.5, 8).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(0.0, BasePoint::one(core::f64::consts::PI));
        let v = profile_null_distance(&st, &TimeFunction::Canonical, &p, &q, 401)
            .unwrap()
            .value;
        let want = 0.5 * core::f64::consts::PI;
        assert!((v - want).abs() < 5e-3, "v = {v} want {want}");
    }

    #[test]
    fn drifting_pair_stays_in_bounds() {
        // endpoints at different times: the optimum drifts at cone speed
        // instead of paying vertical legs
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::circle(core::f64::consts::TAU).unwrap(),
            warp_registry::uniform_sin(4).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(2.0, BasePoint::one(core::f64::consts::PI));
        let v = profile_null_distance(&st, &TimeFunction::Canonical, &p, &q, 161)
            .unwrap()
            .value;
        let (lo, hi) = warped_bounds(&st, &p, &q).unwrap();
        assert!(v >= lo - 1e-6 && v <= hi + 1e-6, "v = {v}, bounds [{lo}, {hi}]");
    }

    #[test]
    fn causal_pair_rejected() {
        let st = WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(1.0, BasePoint::one(0.5));
        assert!(
            profile_null_distance(&st, &TimeFunction::Canonical, &p, &q, 101).is_err()
        );
    }
}
