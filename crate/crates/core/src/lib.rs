//! CEX-DEX arbitrage under swap-failure risk on fast rollups.
//!
//! * [`amm`]: constant-product pool math.
//! * [`failure`]: execution-probability models `p(q)`.
//! * [`optimizer`]: optimal trade splitting.
//! * [`sim`]: sequencer simulation with competing bots.
//! * [`trace`]: revert classification from call traces.
//! * [`fees`]: fee decomposition and revert statistics.

pub mod address;
pub mod amm;
pub mod error;
pub mod failure;
pub mod fees;
pub mod optimizer;
pub mod sim;
pub mod trace;

pub use amm::PoolState;
pub use error::{ConfigError, ModelError};
pub use failure::{FailureFamily, FailureModel, FailureModelConfig};
pub use fees::{TxRecord, TxStatus};
pub use optimizer::{ArbParams, Branch, SolveError, SplitPlan, SplitProblem};
pub use sim::{SimConfig, SimReport};
pub use trace::{LabelLibrary, SwapClassification};
