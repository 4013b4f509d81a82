use std::path::{Path, PathBuf};

use serde::Serialize;
use splitmev_core::fees::write_records;
use splitmev_core::sim::{self, SimConfig, SimReport};

use crate::error::{CliError, Result};
use crate::output::{read_input, OutDir, RunManifest};

#[derive(Serialize)]
struct MetricRow {
    metric: &'static str,
    value: String,
}

#[derive(Serialize)]
struct HistogramRow {
    position: u64,
    reverts: u64,
}

#[derive(Serialize)]
struct SummaryRow {
    scenario: String,
    seed: u64,
    ordering: String,
    block_time: f64,
    batch_window: f64,
    total: u64,
    reverts: u64,
    revert_rate: f64,
    revert_index0_share: Option<f64>,
    fee_rank_correlation: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn config_files(input: &Path) -> Result<Vec<PathBuf>> {
    if !input.is_dir() {
        return Ok(vec![input.to_path_buf()]);
    }
    let entries = std::fs::read_dir(input).map_err(|e| CliError::config(input, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::config(input, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn write_report(out: &OutDir, report: &SimReport) -> Result<()> {
    let m = &report.metrics;
    out.json("report.json", report)?;
    let metrics = vec![
        MetricRow {
            metric: "total",
            value: m.total.to_string(),
        },
        MetricRow {
            metric: "successes",
            value: m.successes.to_string(),
        },
        MetricRow {
            metric: "reverts",
            value: m.reverts.to_string(),
        },
        MetricRow {
            metric: "revert_rate",
            value: m.revert_rate.to_string(),
        },
        MetricRow {
            metric: "revert_index0_share",
            value: opt(m.revert_index0_share),
        },
        MetricRow {
            metric: "priority_revert_rate",
            value: opt(m.priority_revert_rate),
        },
        MetricRow {
            metric: "priority_differential",
            value: opt(m.priority_differential),
        },
        MetricRow {
            metric: "fee_rank_correlation",
            value: opt(m.fee_rank_correlation),
        },
    ];
    out.csv("metrics.csv", &metrics)?;
    let hist: Vec<HistogramRow> = m
        .revert_histogram
        .0
        .iter()
        .map(|(&position, &reverts)| HistogramRow { position, reverts })
        .collect();
    out.csv("revert_histogram.csv", &hist)?;
    out.csv("bots.csv", &m.bots)?;
    let mut records = Vec::new();
    write_records(&mut records, &report.to_tx_records("sim"))
        .map_err(|e| CliError::io(&out.path().join("records.csv"), e))?;
    out.write("records.csv", &records)
}

pub fn run(input: &Path, out: &OutDir, seed_override: Option<u64>) -> Result<()> {
    let is_matrix = input.is_dir();
    let files = config_files(input)?;
    let mut inputs = Vec::with_capacity(files.len());
    let mut configs = Vec::with_capacity(files.len());
    for path in files {
        let bytes = read_input(&path)?;
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError::config(&path, e))?;
        let mut cfg = SimConfig::from_json(text).map_err(|e| CliError::config(&path, e))?;
        if let Some(seed) = seed_override {
            cfg = cfg.with_seed(seed);
        }
        configs.push(cfg);
        inputs.push((path, bytes));
    }

    let reports = sim::run_matrix(&configs);
    if is_matrix {
        let mut summary = Vec::with_capacity(reports.len());
        for ((path, _), report) in inputs.iter().zip(&reports) {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
            write_report(&out.sub(&name)?, report)?;
            log::info!("{name}: revert rate {:.4}", report.metrics.revert_rate);
            summary.push(SummaryRow {
                scenario: name,
                seed: report.seed,
                ordering: serde_json::to_value(report.ordering)
                    .unwrap()
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                block_time: report.block_time,
                batch_window: report.batch_window,
                total: report.metrics.total,
                reverts: report.metrics.reverts,
                revert_rate: report.metrics.revert_rate,
                revert_index0_share: report.metrics.revert_index0_share,
                fee_rank_correlation: report.metrics.fee_rank_correlation,
            });
        }
        out.csv("summary.csv", &summary)?;
    } else if let Some(report) = reports.first() {
        log::info!("revert rate {:.4}", report.metrics.revert_rate);
        write_report(out, report)?;
    }
    out.json("manifest.json", &RunManifest::new("simulate", &inputs, out))
}
