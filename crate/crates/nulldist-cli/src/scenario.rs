//! Scenario files: JSON descriptions of a spacetime, a time function, a
//! lattice configuration, a sample spec, and an experiment. Unknown keys
//! are rejected so typos fail loudly at load time.

use std::path::Path;

use serde::{Deserialize, Serialize};

use nulldist_core::base::RiemannianBase;
use nulldist_core::lab::{LimitMetric, SampleSpec, SequenceFamily};
use nulldist_core::lattice::{Hole, LatticeConfig};
use nulldist_core::spacetime::{warp_registry, WarpedSpacetime, WarpingFunction};
use nulldist_core::timefn::TimeFunction;

use crate::expr::Expr;
use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub interval: [f64; 2],
    pub base: RiemannianBase,
    pub warping: WarpingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalSpec>,
    #[serde(default)]
    pub time_function: TimeFunctionSpec,
    #[serde(default = "default_lattice")]
    pub lattice: LatticeConfig,
    #[serde(default)]
    pub samples: SamplesSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
}

fn default_lattice() -> LatticeConfig {
    LatticeConfig::new(201, 201, 4)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum WarpingSpec {
    Registry {
        registry: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j: Option<u32>,
    },
    Expr {
        expr: String,
        fmin: f64,
        fmax: f64,
    },
    Constant {
        constant: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalSpec {
    pub expr: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum TimeFunctionSpec {
    Registry { registry: String },
    PhiExpr { phi_expr: String },
}

impl Default for TimeFunctionSpec {
    fn default() -> Self {
        TimeFunctionSpec::Registry {
            registry: "canonical".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum SamplesSpec {
    Grid { grid: [usize; 2] },
    Seeded { count: usize, seed: u64 },
}

impl Default for SamplesSpec {
    fn default() -> Self {
        SamplesSpec::Grid { grid: [8, 8] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    Distance {
        p: String,
        q: String,
        #[serde(default = "default_method")]
        method: String,
    },
    Converge {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h0: Option<f64>,
        j_list: Vec<u32>,
    },
    Check {},
}

fn default_method() -> String {
    "lattice".into()
}

impl Scenario {
    pub fn family(&self) -> Result<Option<(SequenceFamily, Vec<u32>)>, CliError> {
        match &self.experiment {
            Some(ExperimentKind::Converge { family, h0, j_list }) => {
                let fam = parse_family(family, *h0)?;
                Ok(Some((fam, j_list.clone())))
            }
            _ => Ok(None),
        }
    }
}

pub fn parse_family(name: &str, h0: Option<f64>) -> Result<SequenceFamily, CliError> {
    Ok(match name {
        "uniform_sin" => SequenceFamily::UniformSin,
        "example51" => SequenceFamily::Example51 {
            h0: h0.unwrap_or(0.5),
        },
        "example52" => SequenceFamily::Example52 {
            h0: h0.unwrap_or(2.0),
        },
        "example53" => SequenceFamily::Example53,
        other => {
            return Err(CliError::input(format!(
                "unknown convergence family '{other}'"
            )))
        }
    })
}

pub fn default_limit_for(family: &SequenceFamily) -> LimitMetric {
    match family {
        SequenceFamily::UniformSin => LimitMetric::NullDistanceOfConstant { c: 1.0 },
        SequenceFamily::Example51 { h0 } => LimitMetric::D0Formula { h0: *h0 },
        SequenceFamily::Example52 { .. } => LimitMetric::NullDistanceOfConstant { c: 1.0 },
        SequenceFamily::Example53 => LimitMetric::DInfinity53,
    }
}

/// Load and fully validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    // resolve everything eagerly so errors carry the offending key
    build_spacetime(&scenario)?;
    build_time_function(&scenario)?;
    if let Some((_, js)) = scenario.family()? {
        if js.is_empty() {
            return Err(CliError::input("converge experiment needs a nonempty j_list"));
        }
    }
    Ok(scenario)
}

pub fn build_warping(spec: &WarpingSpec, interval: (f64, f64)) -> Result<WarpingFunction, CliError> {
    Ok(match spec {
        WarpingSpec::Constant { constant } => {
            WarpingFunction::constant(*constant).map_err(CliError::from_core_input)?
        }
        WarpingSpec::Expr { expr, fmin, fmax } => {
            let parsed = Expr::parse(expr).map_err(|e| CliError::input(e.to_string()))?;
            WarpingFunction::new(format!("f = {expr}"), *fmin, *fmax, move |t| parsed.eval(t))
                .map_err(CliError::from_core_input)?
        }
        WarpingSpec::Registry { registry, h0, j } => match registry.as_str() {
            "unit" => WarpingFunction::unit(),
            "tsq_plus_one" => warp_registry::t_squared_plus_one(interval.0, interval.1),
            "example51" => warp_registry::example51(h0.unwrap_or(0.5), j.unwrap_or(1))
                .map_err(CliError::from_core_input)?,
            "example52" => warp_registry::example52(h0.unwrap_or(2.0), j.unwrap_or(1))
                .map_err(CliError::from_core_input)?,
            "example53" => warp_registry::example53(j.unwrap_or(1))
                .map_err(CliError::from_core_input)?,
            "uniform_sin" => warp_registry::uniform_sin(j.unwrap_or(1))
                .map_err(CliError::from_core_input)?,
            other => {
                return Err(CliError::input(format!(
                    "unknown warping registry id '{other}'"
                )))
            }
        },
    })
}

pub fn build_spacetime(scenario: &Scenario) -> Result<WarpedSpacetime, CliError> {
    let interval = (scenario.interval[0], scenario.interval[1]);
    let warping = build_warping(&scenario.warping, interval)?;
    let st = WarpedSpacetime::new(interval, scenario.base.clone(), warping)
        .map_err(CliError::from_core_input)?;
    if let Some(conf) = &scenario.conformal {
        let parsed = Expr::parse(&conf.expr).map_err(|e| CliError::input(e.to_string()))?;
        let label = conf.label.clone().unwrap_or_else(|| conf.expr.clone());
        return st
            .with_conformal_factor(label, move |t| parsed.eval(t))
            .map_err(CliError::from_core_input);
    }
    Ok(st)
}

pub fn build_time_function(scenario: &Scenario) -> Result<TimeFunction, CliError> {
    match &scenario.time_function {
        TimeFunctionSpec::Registry { registry } => {
            TimeFunction::from_registry(registry).map_err(CliError::from_core_input)
        }
        TimeFunctionSpec::PhiExpr { phi_expr } => {
            let parsed = Expr::parse(phi_expr).map_err(|e| CliError::input(e.to_string()))?;
            let d = parsed.clone();
            // derivative by central differences; the reshaping is audited
            // for strict increase wherever it is used
            let tf = TimeFunction::smooth(
                format!("phi = {phi_expr}"),
                move |t| parsed.eval(t),
                move |t| {
                    let h = 1e-6 * (1.0 + t.abs());
                    (d.eval(t + h) - d.eval(t - h)) / (2.0 * h)
                },
            );
            Ok(tf)
        }
    }
}

/// Sample points over the scenario's spacetime.
pub fn build_samples(
    scenario: &Scenario,
) -> Result<Vec<nulldist_core::spacetime::SpacetimePoint>, CliError> {
    let interval = (scenario.interval[0], scenario.interval[1]);
    match &scenario.samples {
        SamplesSpec::Grid { grid } => nulldist_core::lab::sample_grid(
            &scenario.base,
            interval,
            &SampleSpec {
                n_time: grid[0],
                n_space: grid[1],
            },
        )
        .map_err(CliError::from_core_input),
        SamplesSpec::Seeded { count, seed } => {
            let xs = nulldist_core::base::sample_points(&scenario.base, *count, *seed)
                .map_err(CliError::from_core_input)?;
            let mut out = Vec::with_capacity(*count);
            for (k, x) in xs.into_iter().enumerate() {
                let f = (k as f64 + 0.5) / *count as f64;
                out.push(nulldist_core::spacetime::SpacetimePoint::new(
                    interval.0 + f * (interval.1 - interval.0),
                    x,
                ));
            }
            Ok(out)
        }
    }
}

/// Parse a point given as `"t,x"` (or `"t,a,b"` for 2-D bases).
pub fn parse_point(
    s: &str,
    base: &RiemannianBase,
) -> Result<nulldist_core::spacetime::SpacetimePoint, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("bad coordinate '{p}' in point '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 1 + base.dim() {
        return Err(CliError::input(format!(
            "point '{s}' needs {} coordinates (t plus {} base)",
            1 + base.dim(),
            base.dim()
        )));
    }
    let x = nulldist_core::base::BasePoint {
        coords: parts[1..].to_vec(),
    };
    Ok(nulldist_core::spacetime::SpacetimePoint::new(parts[0], x))
}
