//! Reverted-transaction analysis: execution graphs from call traces, swap
//! attribution against a label library, bot flagging and top-k breakdowns.

mod classify;
mod frame;
mod graph;
mod labels;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use classify::{classify_swap, Evidence, EvidenceRole, SwapClassification};
pub use frame::{parse_trace_document, parse_trace_lines, CallKind, TraceError, TraceFrame, TransactionTrace};
pub use graph::{build_graph, CallEdge, ExecutionGraph, GraphNode};
pub use labels::{AddressKind, AddressLabel, LabelError, LabelLibrary, LABEL_HEADER};
pub use report::{breakdown, identify_bots, Breakdown, BreakdownRow};

/// Classification of one transaction, as written to classification JSONL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedTx {
    pub tx_hash: String,
    #[serde(flatten)]
    pub classification: SwapClassification,
}

/// Build and classify every trace. Transactions are independent and are
/// processed in parallel; output order follows input order.
pub fn classify_traces(
    traces: &[TransactionTrace],
    labels: &LabelLibrary,
) -> Result<Vec<ClassifiedTx>, (usize, TraceError)> {
    traces
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let graph = build_graph(&t.trace).map_err(|e| (i, e))?;
            let tx_hash = crate::address::normalize_hex(&t.tx_hash, 32).ok_or_else(|| {
                (
                    i,
                    TraceError::Malformed {
                        path: "tx_hash".into(),
                        message: format!("`{}` is not a 32-byte hash", t.tx_hash),
                    },
                )
            })?;
            Ok(ClassifiedTx {
                tx_hash,
                classification: classify_swap(&graph, labels),
            })
        })
        .collect()
}
