//! Causal-lattice shortest paths: the discretized infimum over piecewise
//! causal curves.
//!
//! Nodes are pairs `(t_i, s_j)` of a time level and a base sample. An
//! edge joins `(i, j)` to `(i', j')` when the base separation of the two
//! samples is within the causal reach of `[t_i, t_i']`, with at most
//! `stencil_radius` spatial hops per edge; its weight is `|τ(t_i') -
//! τ(t_i)|`. Both time directions are allowed, so the graph is undirected
//! and every lattice path is an admissible piecewise causal curve: the
//! shortest-path value is a certified upper bound on the true null
//! distance. Only minimal time hops are materialized per spatial class —
//! any longer causal hop decomposes into a minimal hop plus vertical
//! moves of identical total weight, since `τ` is monotone.
//!
//! Reach is accumulated once per time gap by quadrature and shared by
//! every row (`f` depends only on `t`); jump locations of a generalized
//! `τ` are inserted as extra levels so no edge straddles a jump silently.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::base::{BasePoint, RiemannianBase};
use crate::error::Error;
use crate::spacetime::{causal_reach, SpacetimePoint, WarpedSpacetime, REACH_TOL};
use crate::timefn::TimeFunction;
use crate::Result;

/// Relative slack in edge admissibility; absorbs quadrature rounding so
/// exactly-null mesh alignments do not flip edge by edge. The certified
/// upper bound therefore holds up to this relative amount.
const ADMIT_SLACK: f64 = 1e-12;

/// Deleted regions modeling incomplete spacetimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Hole {
    Point { t: f64, x: f64 },
    /// Constant-time slit `{t} × [x0, x1]` (interval bases).
    Segment { t: f64, x0: f64, x1: f64 },
}

/// Lattice resolution and stencil.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub n_time: usize,
    pub n_space: usize,
    /// Max spatial hops per edge.
    pub stencil_radius: usize,
    #[serde(default)]
    pub holes: Vec<Hole>,
    /// Node deletion radius around holes, in grid cells.
    #[serde(default = "default_hole_radius")]
    pub hole_radius_cells: f64,
}

fn default_hole_radius() -> f64 {
    1.5
}

impl LatticeConfig {
    pub fn new(n_time: usize, n_space: usize, stencil_radius: usize) -> Self {
        LatticeConfig {
            n_time,
            n_space,
            stencil_radius,
            holes: Vec::new(),
            hole_radius_cells: default_hole_radius(),
        }
    }

    pub fn with_holes(mut self, holes: Vec<Hole>) -> Self {
        self.holes = holes;
        self
    }
}

/// Circle sample count making the mesh ratio `Δs ≤ 2 Δt` tight, so null
/// hops land on grid levels (exactly for warping speeds `2^k`, within
/// `1/n_space` otherwise). Cone-quantization error scales with the
/// mismatch, so aligned meshes buy an order of magnitude of accuracy.
pub fn aligned_circle_spaces(circumference: f64, interval_len: f64, n_time: usize) -> usize {
    let dt = interval_len / (n_time - 1) as f64;
    let n = (circumference / (2.0 * dt)).ceil() as usize;
    n.max(4)
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    cost: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap; node index breaks ties deterministically
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of one lattice shortest-path query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeQuery {
    /// Shortest lattice path weight between the snapped nodes.
    pub value: f64,
    /// Estimated discretization slack along the optimal path: the sum of
    /// per-edge overshoots of the minimal admissible hop versus the exact
    /// reach crossing, plus endpoint snapping slack.
    pub tolerance: f64,
    /// Snapping displacement contribution to `tolerance`.
    pub snap_slack: f64,
    pub source: u32,
    pub target: u32,
    pub path_edges: usize,
}

pub struct Lattice<'a> {
    pub spacetime: &'a WarpedSpacetime,
    pub tf: &'a TimeFunction,
    pub config: LatticeConfig,
    levels: Vec<f64>,
    tau: Vec<f64>,
    reach_cum: Vec<f64>,
    xs: Vec<f64>,
    circle: bool,
    circumference: f64,
    dx: f64,
    nominal_dt: f64,
    /// `dist(δ)` for `δ = 1..=stencil`.
    class_dist: Vec<f64>,
    /// Minimal upward time hop per `(level, δ-1)`, `None` when the top of
    /// the interval is reached first.
    k_up: Vec<Vec<Option<u32>>>,
    k_down: Vec<Vec<Option<u32>>>,
    deleted: Vec<bool>,
    has_holes: bool,
}

impl<'a> Lattice<'a> {
    pub fn build(
        spacetime: &'a WarpedSpacetime,
        tf: &'a TimeFunction,
        config: LatticeConfig,
    ) -> Result<Self> {
        if config.n_time < 2 || config.n_space < 2 {
            return Err(Error::domain("lattice needs n_time, n_space >= 2"));
        }
        if config.stencil_radius < 1 {
            return Err(Error::domain("stencil radius must be >= 1"));
        }
        let (t0, t1) = spacetime.interval();
        tf.audit_increasing(t0, t1)?;

        // time levels: uniform grid plus exact jump locations
        let span = t1 - t0;
        let mut levels: Vec<f64> = (0..config.n_time)
            .map(|i| t0 + span * i as f64 / (config.n_time - 1) as f64)
            .collect();
        levels[config.n_time - 1] = t1;
        for jp in tf.jump_locations() {
            if jp > t0 && jp < t1
                && levels
                    .iter()
                    .all(|&t| (t - jp).abs() > 1e-12 * (1.0 + span))
            {
                levels.push(jp);
            }
        }
        levels.sort_by(f64::total_cmp);
        let n_levels = levels.len();

        let tau: Vec<f64> = levels.iter().map(|&t| tf.eval_t(t)).collect();

        let mut reach_cum = Vec::with_capacity(n_levels);
        reach_cum.push(0.0);
        for w in levels.windows(2) {
            let gap = causal_reach(spacetime, w[0], w[1])?;
            let last = *reach_cum.last().unwrap();
            reach_cum.push(last + gap);
        }

        // base samples
        let (xs, circle, circumference, dx) = match &spacetime.base {
            RiemannianBase::Interval { min, max, .. } => {
                let h = (max - min) / (config.n_space - 1) as f64;
                let xs: Vec<f64> = (0..config.n_space).map(|j| min + h * j as f64).collect();
                (xs, false, 0.0, h)
            }
            RiemannianBase::Circle { circumference } => {
                let h = circumference / config.n_space as f64;
                let xs: Vec<f64> = (0..config.n_space).map(|j| h * j as f64).collect();
                (xs, true, *circumference, h)
            }
            _ => {
                return Err(Error::precondition(
                    "lattice oracle supports Interval and Circle bases only",
                ))
            }
        };
        if config.stencil_radius >= config.n_space / 2 {
            return Err(Error::domain("stencil radius too large for the space grid"));
        }

        let class_dist: Vec<f64> = (1..=config.stencil_radius)
            .map(|d| {
                let s = d as f64 * dx;
                if circle {
                    s.min(circumference - s)
                } else {
                    s
                }
            })
            .collect();

        // minimal admissible hops per level and spatial class; `R` is
        // strictly increasing, so both searches are monotone in `k`
        let mut k_up = vec![vec![None; config.stencil_radius]; n_levels];
        let mut k_down = vec![vec![None; config.stencil_radius]; n_levels];
        for (c, &target) in class_dist.iter().enumerate() {
            let admit = target * (1.0 - ADMIT_SLACK);
            for i in 0..n_levels {
                // smallest m > i with R[m] - R[i] ≥ admit
                let need_up = reach_cum[i] + admit;
                let m = i + 1 + reach_cum[i + 1..].partition_point(|&r| r < need_up);
                if m < n_levels {
                    k_up[i][c] = Some((m - i) as u32);
                }
                // largest m < i with R[i] - R[m] ≥ admit, i.e. R[m] ≤ R[i] - admit
                let need_down = reach_cum[i] - admit;
                let cut = reach_cum[..i].partition_point(|&r| r <= need_down);
                if cut > 0 {
                    k_down[i][c] = Some((i - (cut - 1)) as u32);
                }
            }
        }

        let nominal_dt = span / (config.n_time - 1) as f64;

        let mut lat = Lattice {
            spacetime,
            tf,
            config,
            levels,
            tau,
            reach_cum,
            xs,
            circle,
            circumference,
            dx,
            nominal_dt,
            class_dist,
            k_up,
            k_down,
            deleted: Vec::new(),
            has_holes: false,
        };
        lat.apply_holes()?;
        Ok(lat)
    }

    fn apply_holes(&mut self) -> Result<()> {
        let n = self.levels.len() * self.xs.len();
        self.deleted = vec![false; n];
        self.has_holes = !self.config.holes.is_empty();
        if !self.has_holes {
            return Ok(());
        }
        let holes = self.config.holes.clone();
        let r = self.config.hole_radius_cells;
        for i in 0..self.levels.len() {
            for j in 0..self.xs.len() {
                let id = self.node_id(i, j);
                let (t, x) = (self.levels[i], self.xs[j]);
                for h in &holes {
                    if self.hole_cell_distance(h, t, x) <= r {
                        self.deleted[id as usize] = true;
                    }
                }
            }
        }
        Ok(())
    }

    fn hole_cell_distance(&self, hole: &Hole, t: f64, x: f64) -> f64 {
        let (ht, hx) = match hole {
            Hole::Point { t: ht, x: hx } => (*ht, *hx),
            Hole::Segment { t: ht, x0, x1 } => (*ht, x.clamp(*x0, *x1)),
        };
        let dxs = if self.circle {
            let d = (x - hx).abs() % self.circumference;
            d.min(self.circumference - d)
        } else {
            (x - hx).abs()
        };
        let a = (t - ht) / self.nominal_dt;
        let b = dxs / self.dx;
        (a * a + b * b).sqrt()
    }

    /// Whether a straight edge between two nodes passes through a hole.
    fn edge_blocked(&self, from: u32, to: u32) -> bool {
        if !self.has_holes {
            return false;
        }
        let (i0, j0) = self.split(from);
        let (i1, j1) = self.split(to);
        let steps = ((i1 as i64 - i0 as i64).unsigned_abs() as usize)
            .max(self.space_sep(j0, j1))
            .max(1)
            * 2;
        for s in 0..=steps {
            let f = s as f64 / steps as f64;
            let t = self.levels[i0] + f * (self.levels[i1] - self.levels[i0]);
            let x = self.interp_x(j0, j1, f);
            for h in &self.config.holes {
                if self.hole_cell_distance(h, t, x) <= self.config.hole_radius_cells {
                    return true;
                }
            }
        }
        false
    }

    fn interp_x(&self, j0: usize, j1: usize, f: f64) -> f64 {
        let (x0, x1) = (self.xs[j0], self.xs[j1]);
        if !self.circle {
            return x0 + f * (x1 - x0);
        }
        let mut d = x1 - x0;
        let half = 0.5 * self.circumference;
        if d > half {
            d -= self.circumference;
        }
        if d < -half {
            d += self.circumference;
        }
        let mut x = x0 + f * d;
        x %= self.circumference;
        if x < 0.0 {
            x += self.circumference;
        }
        x
    }

    fn space_sep(&self, j0: usize, j1: usize) -> usize {
        let d = (j1 as i64 - j0 as i64).unsigned_abs() as usize;
        if self.circle {
            d.min(self.xs.len() - d)
        } else {
            d
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.levels.len() * self.xs.len()
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn n_space(&self) -> usize {
        self.xs.len()
    }

    pub fn level(&self, i: usize) -> f64 {
        self.levels[i]
    }

    pub fn nominal_dt(&self) -> f64 {
        self.nominal_dt
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    fn node_id(&self, i: usize, j: usize) -> u32 {
        (i * self.xs.len() + j) as u32
    }

    fn split(&self, id: u32) -> (usize, usize) {
        let id = id as usize;
        (id / self.xs.len(), id % self.xs.len())
    }

    pub fn node_point(&self, id: u32) -> SpacetimePoint {
        let (i, j) = self.split(id);
        SpacetimePoint::new(self.levels[i], BasePoint::one(self.xs[j]))
    }

    /// Snap to the nearest node. Returns the node and the snapping slack
    /// `max(Δt_grid, f_max · Δs)` (zero when the point lies on a node).
    pub fn snap(&self, p: &SpacetimePoint) -> Result<(u32, f64)> {
        self.spacetime.check_point(p)?;
        let i = match self
            .levels
            .binary_search_by(|probe| probe.total_cmp(&p.t))
        {
            Ok(i) => i,
            Err(ins) => {
                if ins == 0 {
                    0
                } else if ins >= self.levels.len() {
                    self.levels.len() - 1
                } else if (self.levels[ins] - p.t).abs() < (p.t - self.levels[ins - 1]).abs() {
                    ins
                } else {
                    ins - 1
                }
            }
        };
        let x = p.x.coords[0];
        let j = if self.circle {
            let mut xx = x % self.circumference;
            if xx < 0.0 {
                xx += self.circumference;
            }
            ((xx / self.dx).round() as usize) % self.xs.len()
        } else {
            let rel = (x - self.xs[0]) / self.dx;
            (rel.round().max(0.0) as usize).min(self.xs.len() - 1)
        };
        let id = self.node_id(i, j);
        if self.deleted[id as usize] {
            return Err(Error::domain("query point lies inside a deleted hole"));
        }
        let moved = (self.levels[i] - p.t).abs() > 1e-14
            || self.space_dist_coord(self.xs[j], x) > 1e-14;
        let slack = if moved {
            self.nominal_dt.max(self.spacetime.warping.f_max * self.dx)
        } else {
            0.0
        };
        Ok((id, slack))
    }

    fn space_dist_coord(&self, a: f64, b: f64) -> f64 {
        if self.circle {
            let d = (a - b).abs() % self.circumference;
            d.min(self.circumference - d)
        } else {
            (a - b).abs()
        }
    }

    fn neighbors(&self, id: u32, future_only: bool, mut visit: impl FnMut(u32, f64)) {
        let (i, j) = self.split(id);
        let n_levels = self.levels.len();
        let n_space = self.xs.len();
        // vertical moves
        if i + 1 < n_levels {
            let to = self.node_id(i + 1, j);
            if !self.deleted[to as usize] && !self.edge_blocked(id, to) {
                visit(to, (self.tau[i + 1] - self.tau[i]).abs());
            }
        }
        if !future_only && i > 0 {
            let to = self.node_id(i - 1, j);
            if !self.deleted[to as usize] && !self.edge_blocked(id, to) {
                visit(to, (self.tau[i] - self.tau[i - 1]).abs());
            }
        }
        // spatial hops at minimal admissible time extent
        for c in 0..self.config.stencil_radius {
            let delta = c + 1;
            for dir in [-1i64, 1i64] {
                let jj = j as i64 + dir * delta as i64;
                let j2 = if self.circle {
                    Some(jj.rem_euclid(n_space as i64) as usize)
                } else if (0..n_space as i64).contains(&jj) {
                    Some(jj as usize)
                } else {
                    None
                };
                let Some(j2) = j2 else { continue };
                if let Some(k) = self.k_up[i][c] {
                    let m = i + k as usize;
                    let to = self.node_id(m, j2);
                    if !self.deleted[to as usize] && !self.edge_blocked(id, to) {
                        visit(to, (self.tau[m] - self.tau[i]).abs());
                    }
                }
                if !future_only {
                    if let Some(k) = self.k_down[i][c] {
                        let m = i - k as usize;
                        let to = self.node_id(m, j2);
                        if !self.deleted[to as usize] && !self.edge_blocked(id, to) {
                            visit(to, (self.tau[i] - self.tau[m]).abs());
                        }
                    }
                }
            }
        }
    }

    /// Dijkstra from `source`; stops early when `target` is settled.
    /// Returns the distance array and the predecessor array.
    fn dijkstra(&self, source: u32, target: Option<u32>) -> (Vec<f64>, Vec<u32>) {
        let n = self.n_nodes();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![u32::MAX; n];
        let mut heap = alloc::collections::BinaryHeap::new();
        dist[source as usize] = 0.0;
        heap.push(HeapEntry {
            cost: 0.0,
            node: source,
        });
        while let Some(HeapEntry { cost, node }) = heap.pop() {
            if cost > dist[node as usize] {
                continue;
            }
            if target == Some(node) {
                break;
            }
            self.neighbors(node, false, |to, w| {
                let next = cost + w;
                if next < dist[to as usize] {
                    dist[to as usize] = next;
                    pred[to as usize] = node;
                    heap.push(HeapEntry {
                        cost: next,
                        node: to,
                    });
                }
            });
        }
        (dist, pred)
    }

    /// Full single-source distance field over lattice nodes.
    pub fn distance_field(&self, source: u32) -> Vec<f64> {
        self.dijkstra(source, None).0
    }

    /// Full field with predecessors, for per-target tolerance queries.
    pub fn distance_field_with_pred(&self, source: u32) -> DistanceField<'_, 'a> {
        let (dist, pred) = self.dijkstra(source, None);
        DistanceField {
            lattice: self,
            source,
            dist,
            pred,
        }
    }

    /// Directed (future-only) reachability; the lattice causal relation.
    pub fn causally_reaches(&self, from: u32, to: u32) -> bool {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from as usize] = true;
        while let Some(node) = stack.pop() {
            if node == to {
                return true;
            }
            self.neighbors(node, true, |next, _| {
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    stack.push(next);
                }
            });
        }
        false
    }

    /// Estimated overshoot of one optimal-path edge versus the exact reach
    /// crossing, in `τ` units (zero for vertical moves).
    fn edge_overshoot(&self, from: u32, to: u32) -> f64 {
        let (i0, j0) = self.split(from);
        let (i1, j1) = self.split(to);
        if j0 == j1 {
            return 0.0;
        }
        let sep = self.space_sep(j0, j1);
        let target = self.class_dist[sep - 1];
        let (lo, hi) = if i0 <= i1 { (i0, i1) } else { (i1, i0) };
        let need = self.reach_cum[lo] + target;
        // exact crossing lies inside the last gap; interpolate R and τ there
        if hi == 0 || self.reach_cum[hi] <= need {
            return 0.0;
        }
        let gap_r = self.reach_cum[hi] - self.reach_cum[hi - 1];
        let frac = if gap_r > 0.0 {
            ((need - self.reach_cum[hi - 1]) / gap_r).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let tau_star = self.tau[hi - 1] + frac * (self.tau[hi] - self.tau[hi - 1]);
        let w = (self.tau[hi] - self.tau[lo]).abs();
        let exact = (tau_star - self.tau[lo]).abs();
        (w - exact).max(0.0)
    }

    /// Shortest-path query between two spacetime points.
    pub fn query(&self, p: &SpacetimePoint, q: &SpacetimePoint) -> Result<LatticeQuery> {
        let (s, slack_s) = self.snap(p)?;
        let (t, slack_t) = self.snap(q)?;
        let snap_slack = slack_s + slack_t;
        if s == t {
            return Ok(LatticeQuery {
                value: 0.0,
                tolerance: snap_slack,
                snap_slack,
                source: s,
                target: t,
                path_edges: 0,
            });
        }
        let (dist, pred) = self.dijkstra(s, Some(t));
        let value = dist[t as usize];
        if !value.is_finite() {
            return Err(Error::Unreachable(alloc::format!(
                "no lattice path between the snapped endpoints (holes disconnect them)"
            )));
        }
        let mut overshoot = 0.0;
        let mut edges = 0usize;
        let mut cur = t;
        while cur != s {
            let back = pred[cur as usize];
            overshoot += self.edge_overshoot(back, cur);
            edges += 1;
            cur = back;
            if edges > self.n_nodes() {
                break;
            }
        }
        Ok(LatticeQuery {
            value,
            tolerance: overshoot + snap_slack + 2.0 * REACH_TOL,
            snap_slack,
            source: s,
            target: t,
            path_edges: edges,
        })
    }
}

/// A settled single-source field with predecessor chains.
pub struct DistanceField<'l, 'a> {
    lattice: &'l Lattice<'a>,
    pub source: u32,
    pub dist: Vec<f64>,
    pred: Vec<u32>,
}

impl DistanceField<'_, '_> {
    pub fn value(&self, target: u32) -> f64 {
        self.dist[target as usize]
    }

    /// Distance and estimated discretization slack to `target`.
    pub fn query(&self, target: u32) -> Result<(f64, f64)> {
        let value = self.dist[target as usize];
        if !value.is_finite() {
            return Err(Error::Unreachable(alloc::format!(
                "node {target} unreachable from {}",
                self.source
            )));
        }
        let mut overshoot = 0.0;
        let mut cur = target;
        let mut hops = 0usize;
        while cur != self.source {
            let back = self.pred[cur as usize];
            if back == u32::MAX {
                break;
            }
            overshoot += self.lattice.edge_overshoot(back, cur);
            cur = back;
            hops += 1;
            if hops > self.lattice.n_nodes() {
                break;
            }
        }
        Ok((value, overshoot + 2.0 * REACH_TOL))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::RiemannianBase;
    use crate::spacetime::warp_registry;

    fn minkowski() -> WarpedSpacetime {
        WarpedSpacetime::product(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn product_level_pair_matches_base_distance() {
        let st = minkowski();
        let tf = TimeFunction::Canonical;
        let lat = Lattice::build(&st, &tf, LatticeConfig::new(101, 101, 4)).unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        // even cell count: the zig-zag is exactly null on the aligned mesh
        let q = SpacetimePoint::new(0.0, BasePoint::one(0.96));
        let out = lat.query(&p, &q).unwrap();
        assert!((out.value - 0.96).abs() < 1e-9, "value {}", out.value);
        assert_eq!(out.snap_slack, 0.0);
        // odd cell count pays at most one vertical pair (time-parity)
        let q = SpacetimePoint::new(0.0, BasePoint::one(1.0));
        let out = lat.query(&p, &q).unwrap();
        assert!(out.value >= 1.0 - 1e-9);
        assert!(out.value <= 1.0 + 2.0 * lat.nominal_dt() + 1e-9, "value {}", out.value);
    }

    #[test]
    fn causal_pair_costs_time_separation() {
        let st = minkowski();
        let tf = TimeFunction::Canonical;
        let lat = Lattice::build(&st, &tf, LatticeConfig::new(101, 101, 4)).unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(2.0, BasePoint::one(1.0));
        let out = lat.query(&p, &q).unwrap();
        assert!((out.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn symmetry_via_undirected_edges() {
        let st = minkowski();
        let tf = TimeFunction::Canonical;
        let lat = Lattice::build(&st, &tf, LatticeConfig::new(81, 81, 3)).unwrap();
        let p = SpacetimePoint::new(0.5, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(1.5, BasePoint::one(1.3));
        let a = lat.query(&p, &q).unwrap().value;
        let b = lat.query(&q, &p).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn refinement_does_not_increase() {
        let st = WarpedSpacetime::new(
            (0.0, 2.0),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
            warp_registry::t_squared_plus_one(0.0, 2.0),
        )
        .unwrap();
        let tf = TimeFunction::Canonical;
        let p = SpacetimePoint::new(0.5, BasePoint::one(-1.0));
        let q = SpacetimePoint::new(0.5, BasePoint::one(1.0));
        let coarse = Lattice::build(&st, &tf, LatticeConfig::new(51, 51, 2))
            .unwrap()
            .query(&p, &q)
            .unwrap()
            .value;
        let fine = Lattice::build(&st, &tf, LatticeConfig::new(101, 101, 4))
            .unwrap()
            .query(&p, &q)
            .unwrap()
            .value;
        assert!(fine <= coarse + 1e-12, "fine {fine} coarse {coarse}");
    }

    #[test]
    fn jump_levels_are_inserted() {
        let st = WarpedSpacetime::product(
            (-1.0, 1.5),
            RiemannianBase::interval(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let tf = TimeFunction::Step;
        let lat = Lattice::build(&st, &tf, LatticeConfig::new(100, 41, 2)).unwrap();
        assert!(lat
            .levels
            .iter()
            .any(|&t| t == 0.0));
    }

    #[test]
    fn hole_blocks_causal_reach_but_not_distance() {
        let st = WarpedSpacetime::product(
            (0.0, 2.5),
            RiemannianBase::interval(0.0, 2.5).unwrap(),
        )
        .unwrap();
        let tf = TimeFunction::Canonical;
        let cfg = LatticeConfig::new(201, 201, 4).with_holes(vec![Hole::Point { t: 1.0, x: 1.0 }]);
        let lat = Lattice::build(&st, &tf, cfg).unwrap();
        let p = SpacetimePoint::new(0.0, BasePoint::one(0.0));
        let q = SpacetimePoint::new(2.0, BasePoint::one(2.0));
        let (s, _) = lat.snap(&p).unwrap();
        let (t, _) = lat.snap(&q).unwrap();
        assert!(!lat.causally_reaches(s, t), "hole must sever the null line");
        let out = lat.query(&p, &q).unwrap();
        assert!((out.value - 2.0).abs() < 0.1, "value {}", out.value);
        assert!(out.value >= 2.0 - 1e-9);
    }

    #[test]
    fn point_inside_hole_rejected() {
        let st = minkowski();
        let tf = TimeFunction::Canonical;
        let cfg = LatticeConfig::new(101, 101, 2).with_holes(vec![Hole::Point { t: 1.0, x: 0.0 }]);
        let lat = Lattice::build(&st, &tf, cfg).unwrap();
        let p = SpacetimePoint::new(1.0, BasePoint::one(0.0));
        assert!(lat.snap(&p).is_err());
    }
}
