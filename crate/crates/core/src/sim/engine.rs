use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::config::{OrderingPolicy, SimConfig};
use super::report::{summarize, SimReport, TxOutcome};
use crate::amm::PoolState;
use crate::fees::TxStatus;

/// A transaction in flight. Background transactions have no bot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTx {
    pub bot_id: Option<usize>,
    pub opportunity: Option<u64>,
    pub chunk: Option<u32>,
    pub submit_time: f64,
    pub arrival_time: f64,
    pub size: f64,
    pub priority_fee: f64,
    /// Smallest payout the transaction accepts before reverting.
    pub min_out: f64,
    pub submission_seq: u64,
}

/// Order the transactions of one closed batch.
pub fn order_batch(mut txs: Vec<SimTx>, policy: OrderingPolicy) -> Vec<SimTx> {
    match policy {
        OrderingPolicy::Fcfs => txs.sort_by(|a, b| {
            a.arrival_time
                .total_cmp(&b.arrival_time)
                .then(a.submission_seq.cmp(&b.submission_seq))
        }),
        OrderingPolicy::PfaWithinBatch => txs.sort_by(|a, b| {
            b.priority_fee
                .total_cmp(&a.priority_fee)
                .then(a.arrival_time.total_cmp(&b.arrival_time))
                .then(a.submission_seq.cmp(&b.submission_seq))
        }),
    }
    txs
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Execution {
    pub status: TxStatus,
    /// Realized payout; zero for reverts and background traffic.
    pub payout: f64,
}

/// Execute `tx` against `pool`. A success moves the reserves; a revert
/// leaves them untouched.
pub fn execute_tx(pool: &mut PoolState, tx: &SimTx) -> Execution {
    if tx.bot_id.is_none() {
        return Execution {
            status: TxStatus::Success,
            payout: 0.0,
        };
    }
    let attempt = pool
        .swap_out(tx.size)
        .ok()
        .filter(|&out| out >= tx.min_out)
        .and_then(|out| Some((out, pool.apply_swap(tx.size).ok()?)));
    match attempt {
        Some((payout, next)) => {
            *pool = next;
            Execution {
                status: TxStatus::Success,
                payout,
            }
        }
        None => Execution {
            status: TxStatus::Reverted,
            payout: 0.0,
        },
    }
}

/// Block containing time `t`; a block `[kT, (k+1)T]` owns its right edge.
pub fn block_index(t: f64, block_time: f64) -> u64 {
    let k = (t / block_time - 1e-9).ceil() - 1.0;
    if k > 0.0 {
        k as u64
    } else {
        0
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Draw every transaction of the run. Each bot has its own random stream,
/// so a bot's latencies do not depend on other bots or on fees.
pub fn generate_txs(cfg: &SimConfig) -> Vec<SimTx> {
    let mut txs = Vec::new();
    let n_opp = cfg.opportunity_count();
    for (bot_id, bot) in cfg.bots.iter().enumerate() {
        let mut rng = stream(cfg.seed, 1 + bot_id as u64);
        let (n, k) = bot.shape();
        let q = bot.chunk_size();
        // The bot quotes chunk j against the pool after its own j earlier
        // chunks, i.e. it expects its chunks to land in order.
        let mut quotes = Vec::with_capacity(n as usize);
        let mut pool = cfg.pool;
        for _ in 0..n {
            let quote = pool.swap_out(q).unwrap_or(0.0);
            quotes.push(quote);
            if let Ok(next) = pool.apply_swap(q) {
                pool = next;
            }
        }
        for opp in 0..n_opp {
            let submit = opp as f64 * cfg.opportunity_refresh + bot.submit_delay;
            for (chunk, quote) in quotes.iter().enumerate() {
                let min_out = (cfg.cex_price * q).max(quote * (1.0 - bot.slippage));
                for _ in 0..k {
                    let z: f64 = rng.sample(StandardNormal);
                    let latency = (bot.latency_mean + bot.latency_jitter * z).max(0.0);
                    txs.push(SimTx {
                        bot_id: Some(bot_id),
                        opportunity: Some(opp),
                        chunk: Some(chunk as u32),
                        submit_time: submit,
                        arrival_time: submit + latency,
                        size: q,
                        priority_fee: bot.priority_fee,
                        min_out,
                        submission_seq: 0,
                    });
                }
            }
        }
    }
    if cfg.background_rate > 0.0 {
        let mut rng = stream(cfg.seed, 0);
        let mut t = 0.0;
        loop {
            let u: f64 = rng.random();
            t += -(1.0 - u).ln() / cfg.background_rate;
            if t >= cfg.horizon {
                break;
            }
            txs.push(SimTx {
                bot_id: None,
                opportunity: None,
                chunk: None,
                submit_time: t,
                arrival_time: t,
                size: 0.0,
                priority_fee: cfg.background_priority_fee,
                min_out: 0.0,
                submission_seq: 0,
            });
        }
    }
    // Sequence numbers follow submission time; the stable sort keeps
    // generation order among simultaneous submissions.
    txs.sort_by(|a, b| a.submit_time.total_cmp(&b.submit_time));
    for (seq, tx) in txs.iter_mut().enumerate() {
        tx.submission_seq = seq as u64;
    }
    txs
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum Event {
    // Variant order matters: at equal times a batch closes before the
    // pool is refreshed for the next opportunity.
    Close { time: f64, first: usize, last: usize },
    Refresh { time: f64 },
}

impl Event {
    fn time(&self) -> f64 {
        match *self {
            Event::Close { time, .. } | Event::Refresh { time } => time,
        }
    }
}

/// Run one simulation. Every generated transaction is included exactly
/// once; transactions still in flight at the horizon are drained into
/// later blocks.
pub fn run(cfg: &SimConfig) -> SimReport {
    let window = cfg.batch_window();
    let mut txs = generate_txs(cfg);
    let close_of = |tx: &SimTx| {
        if window > 0.0 {
            ((tx.arrival_time / window).floor() + 1.0) * window
        } else {
            tx.arrival_time
        }
    };
    txs.sort_by(|a, b| {
        close_of(a)
            .total_cmp(&close_of(b))
            .then(a.arrival_time.total_cmp(&b.arrival_time))
            .then(a.submission_seq.cmp(&b.submission_seq))
    });

    let mut events = Vec::new();
    let mut start = 0;
    while start < txs.len() {
        let close = close_of(&txs[start]);
        let mut end = start + 1;
        if window > 0.0 {
            while end < txs.len() && close_of(&txs[end]) == close {
                end += 1;
            }
        }
        events.push(Event::Close {
            time: close,
            first: start,
            last: end,
        });
        start = end;
    }
    events.extend((1..cfg.opportunity_count()).map(|k| Event::Refresh {
        time: k as f64 * cfg.opportunity_refresh,
    }));
    // Stable: closes keep their order; refreshes sort after closes at ties.
    events.sort_by(|a, b| {
        a.time()
            .total_cmp(&b.time())
            .then_with(|| matches!(a, Event::Refresh { .. }).cmp(&matches!(b, Event::Refresh { .. })))
    });

    let mut pool = cfg.pool;
    let mut outcomes = Vec::with_capacity(txs.len());
    let mut current_block = None;
    let mut position = 0;
    for event in events {
        match event {
            Event::Refresh { .. } => pool = cfg.pool,
            Event::Close { time, first, last } => {
                let batch = txs[first..last].to_vec();
                let block = block_index(time, cfg.block_time);
                if current_block != Some(block) {
                    current_block = Some(block);
                    position = 0;
                }
                for tx in order_batch(batch, cfg.ordering) {
                    let exec = execute_tx(&mut pool, &tx);
                    let profit = tx.bot_id.map(|_| {
                        let cost = cfg.cex_price * tx.size + cfg.gas_overhead;
                        match exec.status {
                            TxStatus::Success => exec.payout - cost,
                            TxStatus::Reverted => -cost - cfg.liquidation_penalty,
                        }
                    });
                    outcomes.push(TxOutcome {
                        submission_seq: tx.submission_seq,
                        bot_id: tx.bot_id,
                        opportunity: tx.opportunity,
                        chunk: tx.chunk,
                        submit_time: tx.submit_time,
                        arrival_time: tx.arrival_time,
                        close_time: time,
                        block,
                        position,
                        size: tx.size,
                        priority_fee: tx.priority_fee,
                        min_out: tx.min_out,
                        status: exec.status,
                        payout: exec.payout,
                        profit,
                    });
                    position += 1;
                }
            }
        }
    }

    let metrics = summarize(&outcomes, cfg.bots.len());
    SimReport {
        seed: cfg.seed,
        ordering: cfg.ordering,
        block_time: cfg.block_time,
        batch_window: window,
        outcomes,
        metrics,
    }
}

/// Run independent configurations in parallel. Output order follows input.
pub fn run_matrix(configs: &[SimConfig]) -> Vec<SimReport> {
    use rayon::prelude::*;
    configs.par_iter().map(run).collect()
}
