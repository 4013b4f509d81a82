//! Discrete-event model of a fast rollup sequencer: bots race for a shared
//! AMM mispricing through a private mempool that orders each batch first
//! come first served or by priority fee.

mod config;
mod engine;
mod report;

pub use config::{BotSpec, OrderingPolicy, SimConfig, Strategy, CONFIG_VERSION, MAX_SIM_TXS};
pub use engine::{block_index, execute_tx, generate_txs, order_batch, run, run_matrix, Execution, SimTx};
pub use report::{summarize, BotSummary, SimMetrics, SimReport, TxOutcome, SIM_BASE_FEE_WEI, SIM_GAS_USED};
