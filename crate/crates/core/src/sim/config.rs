use serde::{Deserialize, Serialize};

use crate::amm::PoolState;
use crate::error::{from_json_with_path, ConfigError};

pub const CONFIG_VERSION: u32 = 1;

/// Upper bound on transactions one run may generate.
pub const MAX_SIM_TXS: f64 = 5.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingPolicy {
    Fcfs,
    PfaWithinBatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    SingleShot,
    SplitN,
    DuplicateK,
    SplitAndDuplicate,
}

fn default_slippage() -> f64 {
    0.005
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BotSpec {
    pub strategy: Strategy,
    /// Total amount of X the bot sells per opportunity (before duplication).
    pub trade_size: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_chunks: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_copies: Option<u32>,
    /// Tip per gas, in gwei.
    #[serde(default)]
    pub priority_fee: f64,
    #[serde(default)]
    pub latency_mean: f64,
    /// Standard deviation of the Gaussian jitter around `latency_mean`;
    /// latencies are clamped at zero.
    #[serde(default)]
    pub latency_jitter: f64,
    /// Tolerated shortfall against the quote, as a fraction.
    #[serde(default = "default_slippage")]
    pub slippage: f64,
    /// Delay between the opportunity appearing and the bot submitting.
    #[serde(default)]
    pub submit_delay: f64,
}

impl BotSpec {
    /// `(chunks, copies)` submitted per opportunity.
    pub fn shape(&self) -> (u32, u32) {
        (self.n_chunks.unwrap_or(1), self.k_copies.unwrap_or(1))
    }

    pub fn chunk_size(&self) -> f64 {
        self.trade_size / f64::from(self.shape().0)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let (wants_n, wants_k) = match self.strategy {
            Strategy::SingleShot => (false, false),
            Strategy::SplitN => (true, false),
            Strategy::DuplicateK => (false, true),
            Strategy::SplitAndDuplicate => (true, true),
        };
        for (name, value, wanted) in [
            ("n_chunks", self.n_chunks, wants_n),
            ("k_copies", self.k_copies, wants_k),
        ] {
            match (value, wanted) {
                (None, true) => {
                    return Err(ConfigError::new(
                        name,
                        format!("required by strategy {:?}", self.strategy),
                    ))
                }
                (Some(0), true) => return Err(ConfigError::new(name, "must be at least 1")),
                (Some(_), false) => {
                    return Err(ConfigError::new(
                        name,
                        format!("not used by strategy {:?}", self.strategy),
                    ))
                }
                _ => {}
            }
        }
        positive("trade_size", self.trade_size)?;
        nonnegative("priority_fee", self.priority_fee)?;
        nonnegative("latency_mean", self.latency_mean)?;
        nonnegative("latency_jitter", self.latency_jitter)?;
        nonnegative("submit_delay", self.submit_delay)?;
        if !(0.0..1.0).contains(&self.slippage) {
            return Err(ConfigError::new("slippage", "must lie in [0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub version: u32,
    pub block_time: f64,
    /// Mempool dwell before a batch is ordered; defaults to `block_time`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_window: Option<f64>,
    pub ordering: OrderingPolicy,
    pub pool: PoolState,
    pub cex_price: f64,
    pub opportunity_refresh: f64,
    pub bots: Vec<BotSpec>,
    pub horizon: f64,
    pub seed: u64,
    /// Flat cost charged to every arbitrage attempt.
    #[serde(default)]
    pub gas_overhead: f64,
    /// Cost of unwinding inventory stranded by a revert.
    #[serde(default)]
    pub liquidation_penalty: f64,
    /// Poisson rate of unrelated transactions, per second.
    #[serde(default)]
    pub background_rate: f64,
    #[serde(default)]
    pub background_priority_fee: f64,
}

fn positive(name: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError::new(name, format!("must be positive and finite, got {v}")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::new(
            name,
            format!("must be nonnegative and finite, got {v}"),
        ))
    }
}

impl SimConfig {
    /// Parse and validate a JSON config.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: SimConfig = from_json_with_path(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn batch_window(&self) -> f64 {
        self.batch_window.unwrap_or(self.block_time)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn opportunity_count(&self) -> u64 {
        (self.horizon / self.opportunity_refresh).ceil() as u64
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != CONFIG_VERSION {
            return Err(ConfigError::new(
                "version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        positive("block_time", self.block_time)?;
        if let Some(w) = self.batch_window {
            nonnegative("batch_window", w)?;
        }
        positive("horizon", self.horizon)?;
        if self.horizon < self.block_time {
            return Err(ConfigError::new("horizon", "must be at least block_time"));
        }
        positive("opportunity_refresh", self.opportunity_refresh)?;
        positive("cex_price", self.cex_price)?;
        nonnegative("gas_overhead", self.gas_overhead)?;
        nonnegative("liquidation_penalty", self.liquidation_penalty)?;
        nonnegative("background_rate", self.background_rate)?;
        nonnegative("background_priority_fee", self.background_priority_fee)?;
        if self.bots.is_empty() {
            return Err(ConfigError::new("bots", "at least one bot is required"));
        }
        for (i, bot) in self.bots.iter().enumerate() {
            bot.validate().map_err(|e| e.within(&format!("bots[{i}]")))?;
        }
        let per_opportunity: f64 = self
            .bots
            .iter()
            .map(|b| {
                let (n, k) = b.shape();
                f64::from(n) * f64::from(k)
            })
            .sum();
        let expected = per_opportunity * self.opportunity_count() as f64 + self.background_rate * self.horizon;
        if expected > MAX_SIM_TXS {
            return Err(ConfigError::new(
                "horizon",
                format!("run would generate about {expected:.0} transactions (limit {MAX_SIM_TXS:.0})"),
            ));
        }
        Ok(())
    }
}
