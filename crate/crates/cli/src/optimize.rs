use std::path::Path;

use serde::{Deserialize, Serialize};
use splitmev_core::error::from_json_with_path;
use splitmev_core::optimizer::{SolveError, SplitProblem};
use splitmev_core::{ArbParams, FailureModel, PoolState};

use crate::error::{CliError, Result};
use crate::output::{line_chart_svg, read_input, OutDir, RunManifest};

const CONFIG_VERSION: u32 = 1;
const REL_TOL: f64 = 1e-10;
const CURVE_CAP: u64 = 1000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub version: u32,
    pub pool: PoolState,
    pub params: ArbParams,
    pub failure_model: FailureModel,
    /// Upper bound of the brute-force cross-check; omitted means no check.
    #[serde(default)]
    pub n_max: Option<u64>,
}

impl OptimizeConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, splitmev_core::ConfigError> {
        let cfg: OptimizeConfig = from_json_with_path(text)?;
        if cfg.version != CONFIG_VERSION {
            return Err(splitmev_core::ConfigError::new(
                "version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", cfg.version),
            ));
        }
        if cfg.n_max == Some(0) {
            return Err(splitmev_core::ConfigError::new("n_max", "must be at least 1"));
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct CurveRow {
    n: u64,
    chunk_size: f64,
    total_profit: f64,
}

pub fn run(config: &Path, out: &OutDir) -> Result<()> {
    let bytes = read_input(config)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::config(config, e))?;
    let cfg = OptimizeConfig::parse(text).map_err(|e| CliError::config(config, e))?;
    let prob = SplitProblem::new(cfg.pool, cfg.params, cfg.failure_model);

    let plan = prob.plan(REL_TOL).map_err(|e| match e {
        SolveError::NoRoot { .. } | SolveError::NotConverged { .. } => CliError::Anomaly(e.to_string()),
        SolveError::Model(m) => CliError::Anomaly(format!("model evaluation failed: {m}")),
    })?;
    log::info!(
        "n* = {} ({:?}), expected profit {}",
        plan.num_chunks,
        plan.branch,
        plan.expected_total_profit
    );

    let n_curve = (10 * plan.num_chunks).min(CURVE_CAP);
    let curve = prob
        .profit_curve(n_curve)
        .map_err(|e| CliError::Anomaly(format!("profit curve: {e}")))?;
    let d = cfg.params.total_size;
    let rows: Vec<CurveRow> = curve
        .iter()
        .map(|&(n, total_profit)| CurveRow {
            n,
            chunk_size: d / n as f64,
            total_profit,
        })
        .collect();

    out.json("plan.json", &plan)?;
    out.csv("profit_curve.csv", &rows)?;
    let points: Vec<(f64, f64)> = curve.iter().map(|&(n, p)| (n as f64, p)).collect();
    out.write(
        "profit_curve.svg",
        line_chart_svg("Expected total profit", "number of swaps n", "profit", &points).as_bytes(),
    )?;
    if let Some(n_max) = cfg.n_max {
        let bf = prob
            .brute_force_plan(n_max)
            .map_err(|e| CliError::Anomaly(format!("brute force: {e}")))?;
        out.json("brute_force.json", &bf)?;
    }
    out.json(
        "manifest.json",
        &RunManifest::new("optimize", &[(config.to_path_buf(), bytes)], out),
    )
}
