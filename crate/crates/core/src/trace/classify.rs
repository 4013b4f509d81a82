use serde::{Deserialize, Serialize};

use super::frame::CallKind;
use super::graph::ExecutionGraph;
use super::labels::{AddressKind, AddressLabel, LabelLibrary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceRole {
    PoolV2,
    PoolV3,
    PoolManagerV4,
    Token,
}

/// A graph edge whose callee supports the classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub edge_index: usize,
    pub address: String,
    pub role: EvidenceRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SwapClassification {
    pub is_swap: bool,
    pub dex: Option<String>,
    pub pool: Option<String>,
    pub pair: Option<String>,
    pub evidence: Vec<Evidence>,
}

struct Match<'a> {
    edge_index: usize,
    label: &'a AddressLabel,
}

/// Decide whether a reverted transaction was a DEX swap.
///
/// * v2/v3: a `call` edge into an address labelled as a pool.
/// * v4: a `call` edge into a pool manager plus `call`/`staticcall` edges
///   into at least two distinct labelled tokens; the pair is made of the
///   first two tokens touched.
///
/// The earliest qualifying match in edge order decides dex, pool and pair;
/// every qualifying match is listed as evidence.
pub fn classify_swap(graph: &ExecutionGraph, labels: &LabelLibrary) -> SwapClassification {
    let mut pools: Vec<Match> = Vec::new();
    let mut managers: Vec<Match> = Vec::new();
    let mut tokens: Vec<Match> = Vec::new();

    for (edge_index, edge) in graph.edges.iter().enumerate() {
        let Some(label) = labels.get(&edge.callee) else {
            continue;
        };
        let m = Match { edge_index, label };
        match (label.kind, edge.call_kind) {
            (AddressKind::PoolV2 | AddressKind::PoolV3, CallKind::Call) => pools.push(m),
            (AddressKind::PoolManagerV4, CallKind::Call) => managers.push(m),
            (AddressKind::Token, CallKind::Call | CallKind::Staticcall)
                if !tokens.iter().any(|t| t.label.address == label.address) =>
            {
                tokens.push(m)
            }
            _ => {}
        }
    }

    let v4_ok = !managers.is_empty() && tokens.len() >= 2;
    let mut evidence: Vec<Evidence> = pools
        .iter()
        .map(|m| Evidence {
            edge_index: m.edge_index,
            address: m.label.address.clone(),
            role: if m.label.kind == AddressKind::PoolV2 {
                EvidenceRole::PoolV2
            } else {
                EvidenceRole::PoolV3
            },
        })
        .collect();
    if v4_ok {
        evidence.extend(managers.iter().map(|m| Evidence {
            edge_index: m.edge_index,
            address: m.label.address.clone(),
            role: EvidenceRole::PoolManagerV4,
        }));
        evidence.extend(tokens.iter().map(|m| Evidence {
            edge_index: m.edge_index,
            address: m.label.address.clone(),
            role: EvidenceRole::Token,
        }));
    }
    evidence.sort_by_key(|e| e.edge_index);

    let first_pool = pools.first();
    let first_manager = managers.first().filter(|_| v4_ok);
    let use_pool = match (first_pool, first_manager) {
        (Some(p), Some(m)) => p.edge_index < m.edge_index,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return SwapClassification::default(),
    };

    if use_pool {
        let p = first_pool.expect("checked");
        SwapClassification {
            is_swap: true,
            dex: Some(p.label.dex.clone().unwrap_or_else(|| "unknown".into())),
            pool: Some(p.label.address.clone()),
            pair: p.label.pair.clone(),
            evidence,
        }
    } else {
        let m = first_manager.expect("checked");
        let mut symbols = [tokens[0].label.symbol(), tokens[1].label.symbol()];
        symbols.sort_unstable();
        SwapClassification {
            is_swap: true,
            dex: m.label.dex.clone(),
            pool: Some(m.label.address.clone()),
            pair: Some(symbols.join("-")),
            evidence,
        }
    }
}
