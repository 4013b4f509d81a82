use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Serialize;
use splitmev_core::fees::{
    daily_fee_totals, decompose, position_histogram, priority_fee_distribution, read_records, revert_differential,
    revert_stats, StatusFilter, Subset,
};
use splitmev_core::trace::{
    breakdown, classify_traces, identify_bots, parse_trace_document, parse_trace_lines, BreakdownRow, LabelLibrary,
    TransactionTrace,
};

use crate::error::{CliError, Result};
use crate::output::{read_input, OutDir, RunManifest};

pub struct AnalyzeArgs<'a> {
    pub traces: &'a Path,
    pub labels: &'a Path,
    pub records: &'a Path,
    pub top_k: usize,
    pub min_bot_reverts: u64,
}

#[derive(Serialize)]
struct FeeRow<'a> {
    tx_hash: &'a str,
    chain: &'a str,
    day: NaiveDate,
    status: &'static str,
    execution_fee: u128,
    priority_fee: u128,
    base_fee: u128,
    l1_fee: u128,
    total: u128,
    clamped: bool,
}

#[derive(Serialize)]
struct RateRow {
    subset: &'static str,
    chain: String,
    day: NaiveDate,
    total: u64,
    reverted: u64,
    revert_rate: f64,
}

#[derive(Serialize)]
struct PositionRow {
    position: u64,
    reverted: u64,
    all: u64,
}

#[derive(Serialize)]
struct BotRow {
    address: String,
    reverted_count: u64,
}

fn trace_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::config(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::config(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json" || e == "jsonl") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn run(args: &AnalyzeArgs, out: &OutDir) -> Result<()> {
    let label_bytes = read_input(args.labels)?;
    let labels = LabelLibrary::read_csv(label_bytes.as_slice()).map_err(|e| CliError::config(args.labels, e))?;
    let record_bytes = read_input(args.records)?;
    let records = read_records(record_bytes.as_slice()).map_err(|e| CliError::config(args.records, e))?;

    let mut inputs = vec![
        (args.labels.to_path_buf(), label_bytes),
        (args.records.to_path_buf(), record_bytes),
    ];
    let mut traces: Vec<TransactionTrace> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    for path in trace_files(args.traces)? {
        let bytes = read_input(&path)?;
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError::config(&path, e))?;
        let parsed = if path.extension().is_some_and(|e| e == "jsonl") {
            parse_trace_lines(text)
        } else {
            parse_trace_document(text).map(|t| vec![t])
        }
        .map_err(|e| CliError::config(&path, e))?;
        origin.extend(std::iter::repeat_n(inputs.len(), parsed.len()));
        traces.extend(parsed);
        inputs.push((path, bytes));
    }

    let classified = classify_traces(&traces, &labels).map_err(|(i, e)| CliError::config(&inputs[origin[i]].0, e))?;
    let mut jsonl = String::new();
    for c in &classified {
        jsonl.push_str(&serde_json::to_string(c).expect("serializable"));
        jsonl.push('\n');
    }
    out.write("classifications.jsonl", jsonl.as_bytes())?;

    let by_hash: HashMap<String, &_> = records.iter().map(|r| (r.tx_hash.to_lowercase(), r)).collect();
    let mut items = Vec::with_capacity(classified.len());
    for c in &classified {
        match by_hash.get(&c.tx_hash) {
            Some(r) => items.push((c.classification.clone(), (*r).clone())),
            None => log::warn!("{}: no matching record; left out of the breakdown", c.tx_hash),
        }
    }
    let bd = breakdown(&items, args.top_k);
    out.json("breakdown.json", &bd)?;
    let rows = |r: &[BreakdownRow]| r.to_vec();
    out.csv("breakdown_dex.csv", &rows(&bd.dex))?;
    out.csv("breakdown_pair.csv", &rows(&bd.pair))?;
    out.csv("breakdown_sender.csv", &rows(&bd.sender))?;
    log::info!(
        "{} traces, {} swaps among reverted records",
        classified.len(),
        bd.total_swaps
    );

    let bots = identify_bots(&records, &labels, args.min_bot_reverts);
    let mut reverted_to: BTreeMap<&str, u64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_reverted()) {
        *reverted_to.entry(r.to_address.as_str()).or_default() += 1;
    }
    let bot_rows: Vec<BotRow> = bots
        .iter()
        .map(|a| BotRow {
            address: a.clone(),
            reverted_count: reverted_to.get(a.as_str()).copied().unwrap_or(0),
        })
        .collect();
    out.csv("bots.csv", &bot_rows)?;

    let fee_rows: Vec<FeeRow> = records
        .iter()
        .map(|r| {
            let fb = decompose(r);
            FeeRow {
                tx_hash: &r.tx_hash,
                chain: &r.chain,
                day: r.day,
                status: if r.is_reverted() { "reverted" } else { "success" },
                execution_fee: fb.execution_fee,
                priority_fee: fb.priority_fee,
                base_fee: fb.base_fee,
                l1_fee: fb.l1_fee,
                total: fb.total,
                clamped: fb.clamped,
            }
        })
        .collect();
    out.csv("fees.csv", &fee_rows)?;

    let mut rates = Vec::new();
    for (name, subset) in [("all", Subset::All), ("priority", Subset::priority())] {
        rates.extend(revert_stats(&records, subset).into_iter().map(|d| RateRow {
            subset: name,
            chain: d.chain,
            day: d.day,
            total: d.total,
            reverted: d.reverted,
            revert_rate: d.revert_rate,
        }));
    }
    out.csv("revert_rates.csv", &rates)?;
    out.csv("revert_differential.csv", &revert_differential(&records, 0))?;

    let reverted = position_histogram(&records, StatusFilter::Reverted);
    let all = position_histogram(&records, StatusFilter::All);
    let positions: Vec<PositionRow> = all
        .0
        .keys()
        .map(|&p| PositionRow {
            position: p,
            reverted: reverted.count(p),
            all: all.count(p),
        })
        .collect();
    out.csv("position_histogram.csv", &positions)?;
    out.json("priority_fees.json", &priority_fee_distribution(&records))?;
    out.csv(
        "daily_fees_reverted.csv",
        &daily_fee_totals(&records, StatusFilter::Reverted),
    )?;

    out.json("manifest.json", &RunManifest::new("analyze", &inputs, out))
}
