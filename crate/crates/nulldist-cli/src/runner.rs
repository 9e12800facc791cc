//! Experiment dispatch with reproducible run records.
//!
//! A run record carries the scenario hash, tool version, seed, wall time
//! and an output manifest with content hashes: reruns with the same
//! scenario and seed reproduce the outputs bitwise (fixed evaluation
//! order; wall time lives only in the record itself).

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use nulldist_core::engine::{
    self, lattice_distance_matrix, warped_bounds, DistanceMethod, DistanceResult,
};
use nulldist_core::lab::{
    assemble_report, run_convergence_step, ExperimentSpec, StepMethod, WarpingSequence,
};
use nulldist_core::lattice::Lattice;
use nulldist_core::metric::{metric_axioms_check, FiniteMetricSpace};
use nulldist_core::timefn::TimeFunction;

use crate::report::{write_json, write_matrix_csv};
use crate::scenario::{
    build_samples, build_spacetime, build_time_function, default_limit_for, parse_point,
    ExperimentKind, Scenario,
};
use crate::svg::write_convergence_plot;
use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub wall_time_ms: f64,
    pub outputs: Vec<OutputEntry>,
    pub passed: bool,
}

fn sha256_hex(data: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(data);
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

fn hash_scenario(scenario: &Scenario) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(scenario)
        .map_err(|e| CliError::numeric(format!("scenario hash failed: {e}")))?;
    Ok(sha256_hex(&bytes))
}

fn manifest_entry(path: &Path) -> Result<OutputEntry, CliError> {
    let data = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot hash {}: {e}", path.display())))?;
    Ok(OutputEntry {
        path: path.display().to_string(),
        sha256: sha256_hex(&data),
    })
}

/// Distance query result with its certificate fields; emitted distances
/// always carry method and error bounds, never bare numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceReport {
    pub result: DistanceResult,
    pub tolerance: f64,
    pub snap_slack: f64,
    pub p: [f64; 2],
    pub q: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub label: String,
    pub points: usize,
    pub symmetry_ok: bool,
    pub triangle_ok: bool,
    pub max_triangle_defect: f64,
    pub triangle_tolerance: f64,
    pub min_off_diagonal: Option<f64>,
    pub sandwich_violations: usize,
    pub passed: bool,
}

pub struct RunOutcome {
    pub record: RunRecord,
    pub passed: bool,
}

pub fn run(
    scenario: &Scenario,
    out_dir: &Path,
    plot: Option<&Path>,
) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", out_dir.display())))?;
    let started = Instant::now();
    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut passed = true;

    match scenario
        .experiment
        .clone()
        .ok_or_else(|| CliError::input("scenario has no experiment block"))?
    {
        ExperimentKind::Distance { p, q, method } => {
            let st = build_spacetime(scenario)?;
            let tf = build_time_function(scenario)?;
            let p = parse_point(&p, &scenario.base)?;
            let q = parse_point(&q, &scenario.base)?;
            let (result, tolerance, snap) = match method.as_str() {
                "closed" => {
                    let r = if st.is_product() && matches!(tf, TimeFunction::Canonical) {
                        engine::product_null_distance(&st, &p, &q)
                            .map_err(CliError::from_core_run)?
                    } else {
                        engine::distance_auto(&st, &tf, &p, &q)
                            .map_err(CliError::from_core_run)?
                    };
                    if r.method != DistanceMethod::ClosedForm {
                        return Err(CliError::input(
                            "no closed form for this scenario/pair; use lattice or profile",
                        ));
                    }
                    (r, 0.0, 0.0)
                }
                "lattice" => {
                    let (r, query) =
                        engine::lattice_null_distance(&st, &tf, &p, &q, &scenario.lattice)
                            .map_err(CliError::from_core_run)?;
                    (r, query.tolerance, query.snap_slack)
                }
                "profile" => {
                    let r = engine::profile_null_distance(
                        &st,
                        &tf,
                        &p,
                        &q,
                        scenario.lattice.n_time.max(101),
                    )
                    .map_err(CliError::from_core_run)?;
                    (r, 0.0, 0.0)
                }
                other => {
                    return Err(CliError::input(format!(
                        "unknown method '{other}' (use lattice|closed|profile)"
                    )))
                }
            };
            let report = DistanceReport {
                result,
                tolerance,
                snap_slack: snap,
                p: [p.t, p.x.coords[0]],
                q: [q.t, q.x.coords[0]],
            };
            let path = out_dir.join("distance.json");
            write_json(&path, &report)?;
            outputs.push(path);
        }
        ExperimentKind::Converge { .. } => {
            let (family, j_list) = scenario
                .family()?
                .expect("converge experiment carries a family");
            let spec = ExperimentSpec {
                base: scenario.base.clone(),
                sequence: WarpingSequence {
                    family: family.clone(),
                    j_list: j_list.clone(),
                },
                limit: default_limit_for(&family),
                method: StepMethod::Lattice(scenario.lattice.clone()),
                samples: match &scenario.samples {
                    crate::scenario::SamplesSpec::Grid { grid } => {
                        nulldist_core::lab::SampleSpec {
                            n_time: grid[0],
                            n_space: grid[1],
                        }
                    }
                    crate::scenario::SamplesSpec::Seeded { count, .. } => {
                        nulldist_core::lab::SampleSpec {
                            n_time: (*count).max(2),
                            n_space: (*count).max(2),
                        }
                    }
                },
                verdict_threshold: 0.1,
            };
            let mut rows = j_list
                .par_iter()
                .map(|&j| {
                    let t = Instant::now();
                    let mut row = run_convergence_step(&spec, j).map_err(CliError::from_core_run)?;
                    row.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
                    Ok(row)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            rows.sort_by_key(|r| r.j);
            let report = assemble_report(&spec, rows).map_err(CliError::from_core_run)?;

            let path = out_dir.join("report.json");
            write_json(&path, &report)?;
            outputs.push(path);

            let (dm, _) =
                nulldist_core::lab::step_distance_matrix(&spec, *j_list.iter().max().unwrap())
                    .map_err(CliError::from_core_run)?;
            let path = out_dir.join("matrix_last.csv");
            write_matrix_csv(&path, &dm)?;
            outputs.push(path);

            if let Some(plot_path) = plot {
                write_convergence_plot(plot_path, &report)?;
                outputs.push(plot_path.to_path_buf());
            }
        }
        ExperimentKind::Check {} => {
            let st = build_spacetime(scenario)?;
            let tf = build_time_function(scenario)?;
            let points = build_samples(scenario)?;
            let lat = Lattice::build(&st, &tf, scenario.lattice.clone())
                .map_err(CliError::from_core_run)?;
            let dm = lattice_distance_matrix(&lat, &points).map_err(CliError::from_core_run)?;
            let space = FiniteMetricSpace::new(dm.points.clone(), dm.matrix.clone(), "check")
                .map_err(CliError::from_core_run)?;
            let tol = 2.0 * dm.max_tolerance.max(1e-9);
            let axioms = metric_axioms_check(&space, tol);
            let mut sandwich_violations = 0usize;
            if matches!(tf, TimeFunction::Canonical) && scenario.lattice.holes.is_empty() {
                for i in 0..space.len() {
                    for k in (i + 1)..space.len() {
                        let (lo, hi) = warped_bounds(&st, &space.points[i], &space.points[k])
                            .map_err(CliError::from_core_run)?;
                        let v = space.matrix[i][k];
                        if v < lo - tol || v > hi + tol {
                            sandwich_violations += 1;
                        }
                    }
                }
            }
            let ok = axioms.symmetry_ok && axioms.triangle_ok && sandwich_violations == 0;
            let report = CheckReport {
                label: "lattice metric checks".into(),
                points: space.len(),
                symmetry_ok: axioms.symmetry_ok,
                triangle_ok: axioms.triangle_ok,
                max_triangle_defect: axioms.max_triangle_defect,
                triangle_tolerance: tol,
                min_off_diagonal: axioms.min_off_diagonal,
                sandwich_violations,
                passed: ok,
            };
            let path = out_dir.join("check.json");
            write_json(&path, &report)?;
            outputs.push(path);
            passed = ok;
        }
    }

    let mut manifest = Vec::new();
    for p in &outputs {
        manifest.push(manifest_entry(p)?);
    }
    let record = RunRecord {
        scenario_hash: hash_scenario(scenario)?,
        tool_version: TOOL_VERSION.into(),
        seed: scenario.seed,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        outputs: manifest,
        passed,
    };
    let record_path = out_dir.join("run_record.json");
    write_json(&record_path, &record)?;
    Ok(RunOutcome { record, passed })
}
