use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use super::config::OrderingPolicy;
use crate::address::synthetic_address;
use crate::fees::{PositionHistogram, TxRecord, TxStatus};

/// Base fee per gas, in wei, stamped on exported records.
pub const SIM_BASE_FEE_WEI: u64 = 1_000_000;
/// Gas charged per exported record.
pub const SIM_GAS_USED: u64 = 150_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TxOutcome {
    pub submission_seq: u64,
    pub bot_id: Option<usize>,
    pub opportunity: Option<u64>,
    pub chunk: Option<u32>,
    pub submit_time: f64,
    pub arrival_time: f64,
    pub close_time: f64,
    pub block: u64,
    /// Execution index within the block.
    pub position: u64,
    pub size: f64,
    pub priority_fee: f64,
    pub min_out: f64,
    pub status: TxStatus,
    pub payout: f64,
    /// Arbitrage payoff of the attempt; `None` for background traffic.
    pub profit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotSummary {
    pub bot_id: usize,
    pub submitted: u64,
    pub successes: u64,
    pub reverts: u64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub total: u64,
    pub successes: u64,
    pub reverts: u64,
    pub revert_rate: f64,
    /// Positions of reverted transactions within their blocks.
    pub revert_histogram: PositionHistogram,
    pub revert_index0_share: Option<f64>,
    /// Revert rate among transactions with a nonzero tip.
    pub priority_revert_rate: Option<f64>,
    /// `priority_revert_rate - revert_rate`.
    pub priority_differential: Option<f64>,
    /// Pearson correlation between tip and execution rank among the bot
    /// transactions of one opportunity, averaged over opportunities where
    /// it is defined.
    pub fee_rank_correlation: Option<f64>,
    pub bots: Vec<BotSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    pub ordering: OrderingPolicy,
    pub block_time: f64,
    pub batch_window: f64,
    /// Outcomes in execution order.
    pub outcomes: Vec<TxOutcome>,
    pub metrics: SimMetrics,
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Aggregate metrics over outcomes listed in execution order.
pub fn summarize(outcomes: &[TxOutcome], n_bots: usize) -> SimMetrics {
    let total = outcomes.len() as u64;
    let reverted = |o: &TxOutcome| o.status == TxStatus::Reverted;
    let reverts = outcomes.iter().filter(|o| reverted(o)).count() as u64;

    let mut revert_histogram = PositionHistogram::default();
    for o in outcomes.iter().filter(|o| reverted(o)) {
        revert_histogram.add(o.position);
    }

    let priority: Vec<_> = outcomes.iter().filter(|o| o.priority_fee > 0.0).collect();
    let priority_revert_rate =
        (!priority.is_empty()).then(|| priority.iter().filter(|o| reverted(o)).count() as f64 / priority.len() as f64);
    let revert_rate = if total == 0 { 0.0 } else { reverts as f64 / total as f64 };

    let mut by_opp: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for o in outcomes {
        if let (Some(_), Some(opp)) = (o.bot_id, o.opportunity) {
            by_opp.entry(opp).or_default().push(o.priority_fee);
        }
    }
    let rhos: Vec<f64> = by_opp
        .values()
        .filter_map(|fees| {
            let ranks: Vec<f64> = (0..fees.len()).map(|r| r as f64).collect();
            pearson(fees, &ranks)
        })
        .collect();
    let fee_rank_correlation = (!rhos.is_empty()).then(|| rhos.iter().sum::<f64>() / rhos.len() as f64);

    let mut bots: Vec<BotSummary> = (0..n_bots)
        .map(|bot_id| BotSummary {
            bot_id,
            submitted: 0,
            successes: 0,
            reverts: 0,
            profit: 0.0,
        })
        .collect();
    for o in outcomes {
        if let Some(b) = o.bot_id.and_then(|id| bots.get_mut(id)) {
            b.submitted += 1;
            match o.status {
                TxStatus::Success => b.successes += 1,
                TxStatus::Reverted => b.reverts += 1,
            }
            b.profit += o.profit.unwrap_or(0.0);
        }
    }

    SimMetrics {
        total,
        successes: total - reverts,
        reverts,
        revert_rate,
        revert_index0_share: revert_histogram.share(0),
        revert_histogram,
        priority_revert_rate,
        priority_differential: priority_revert_rate.map(|p| p - revert_rate),
        fee_rank_correlation,
        bots,
    }
}

impl SimReport {
    /// Bot ids in execution order for one opportunity.
    pub fn execution_order(&self, opportunity: u64) -> Vec<usize> {
        self.outcomes
            .iter()
            .filter(|o| o.opportunity == Some(opportunity))
            .filter_map(|o| o.bot_id)
            .collect()
    }

    /// Export outcomes as chain-style records. Tips are read as gwei and
    /// converted to wei; block numbers and in-block positions carry over.
    pub fn to_tx_records(&self, chain: &str) -> Vec<TxRecord> {
        let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date");
        self.outcomes
            .iter()
            .map(|o| {
                let tip = (o.priority_fee * 1e9).round() as u64;
                let (from, to) = match o.bot_id {
                    Some(id) => (synthetic_address(0xb0, id as u64), synthetic_address(0xc0, id as u64)),
                    None => (
                        synthetic_address(0xa0, o.submission_seq),
                        synthetic_address(0xa1, o.submission_seq),
                    ),
                };
                TxRecord {
                    tx_hash: format!("0x{:064x}", o.submission_seq),
                    day: epoch + Days::new((o.close_time / 86_400.0).floor() as u64),
                    block_number: o.block,
                    tx_index: o.position,
                    status: o.status,
                    from_address: from,
                    to_address: to,
                    gas_price: SIM_BASE_FEE_WEI + tip,
                    priority_fee_per_gas: tip,
                    gas_used: SIM_GAS_USED,
                    l1_fee: 0,
                    chain: chain.to_string(),
                }
            })
            .collect()
    }
}
