use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::classify::SwapClassification;
use super::labels::LabelLibrary;
use crate::fees::TxRecord;

/// Contract addresses that look like automated traders: frequent targets of
/// reverted transactions that carry bytecode, are not DEX routers or pools,
/// and have no known owner. Addresses missing from the label library are
/// skipped because their bytecode status is unknown.
pub fn identify_bots(records: &[TxRecord], labels: &LabelLibrary, min_count: u64) -> BTreeSet<String> {
    let mut reverts: BTreeMap<&str, u64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_reverted()) {
        *reverts.entry(r.to_address.as_str()).or_default() += 1;
    }
    reverts
        .into_iter()
        .filter(|&(_, n)| n >= min_count)
        .filter_map(|(addr, _)| {
            let label = labels.get(addr)?;
            let keep = !label.kind.is_dex_infrastructure() && label.has_code && label.owner_label.is_none();
            keep.then(|| addr.to_string())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub value: String,
    pub count: u64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Breakdown {
    pub total_swaps: u64,
    pub dex: Vec<BreakdownRow>,
    pub pair: Vec<BreakdownRow>,
    pub sender: Vec<BreakdownRow>,
}

fn top_k(counts: BTreeMap<String, u64>, total: u64, k: usize) -> Vec<BreakdownRow> {
    let mut rows: Vec<(String, u64)> = counts.into_iter().collect();
    // BTreeMap order is lexicographic, so a stable sort keeps ties that way.
    rows.sort_by_key(|r| std::cmp::Reverse(r.1));
    rows.into_iter()
        .take(k)
        .map(|(value, count)| BreakdownRow {
            percent: 100.0 * count as f64 / total as f64,
            value,
            count,
        })
        .collect()
}

/// Top-`k` target DEX, token pair and sender among reverted swaps, with
/// each row's share of all reverted swaps. Ties rank lexicographically.
pub fn breakdown(items: &[(SwapClassification, TxRecord)], k: usize) -> Breakdown {
    let swaps: Vec<_> = items.iter().filter(|(c, r)| c.is_swap && r.is_reverted()).collect();
    let total = swaps.len() as u64;
    if total == 0 {
        return Breakdown::default();
    }
    let mut dex = BTreeMap::new();
    let mut pair = BTreeMap::new();
    let mut sender = BTreeMap::new();
    for (c, r) in &swaps {
        let unknown = || "unknown".to_string();
        *dex.entry(c.dex.clone().unwrap_or_else(unknown)).or_default() += 1;
        *pair.entry(c.pair.clone().unwrap_or_else(unknown)).or_default() += 1;
        *sender.entry(r.from_address.clone()).or_default() += 1;
    }
    Breakdown {
        total_swaps: total,
        dex: top_k(dex, total, k),
        pair: top_k(pair, total, k),
        sender: top_k(sender, total, k),
    }
}
