use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::frame::{CallKind, TraceError, TraceFrame};
use super::labels::{AddressKind, LabelLibrary};
use crate::address::{normalize_address, normalize_hex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub address: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<AddressKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEdge {
    pub caller: String,
    pub callee: String,
    pub selector: Option<String>,
    pub call_kind: CallKind,
}

/// Directed multigraph of the addresses a transaction touched. Nodes are
/// kept in first-appearance order and edges in trace pre-order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<CallEdge>,
    /// Top-level `to_address`.
    pub root: String,
    /// Top-level `from_address`.
    pub sender: String,
}

impl ExecutionGraph {
    pub fn node(&self, address: &str) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.address == address)
    }

    /// Fill node annotations from a label library.
    pub fn annotate(&mut self, labels: &LabelLibrary) {
        for node in &mut self.nodes {
            node.annotation = labels.get(&node.address).map(|l| l.kind);
        }
    }
}

/// Flatten a frame tree into an [`ExecutionGraph`], validating depths,
/// addresses and selectors on the way.
pub fn build_graph(root: &TraceFrame) -> Result<ExecutionGraph, TraceError> {
    if root.depth != 0 {
        return Err(TraceError::Malformed {
            path: "trace.depth".into(),
            message: format!("root frame must have depth 0, found {}", root.depth),
        });
    }
    let mut nodes: IndexMap<String, ()> = IndexMap::new();
    let mut edges = Vec::new();
    walk(root, "trace", &mut nodes, &mut edges)?;
    let first = &edges[0];
    let (sender, root_addr) = (first.caller.clone(), first.callee.clone());
    Ok(ExecutionGraph {
        nodes: nodes
            .into_keys()
            .map(|address| GraphNode {
                address,
                annotation: None,
            })
            .collect(),
        edges,
        root: root_addr,
        sender,
    })
}

fn walk(
    frame: &TraceFrame,
    path: &str,
    nodes: &mut IndexMap<String, ()>,
    edges: &mut Vec<CallEdge>,
) -> Result<(), TraceError> {
    let malformed = |field: &str, message: String| TraceError::Malformed {
        path: format!("{path}.{field}"),
        message,
    };
    let caller = normalize_address(&frame.from_address).ok_or_else(|| {
        malformed(
            "from_address",
            format!("`{}` is not a 20-byte hex address", frame.from_address),
        )
    })?;
    let callee = normalize_address(&frame.to_address).ok_or_else(|| {
        malformed(
            "to_address",
            format!("`{}` is not a 20-byte hex address", frame.to_address),
        )
    })?;
    let selector = match &frame.selector {
        None => None,
        Some(s) => Some(
            normalize_hex(s, 4).ok_or_else(|| malformed("selector", format!("`{s}` is not a 4-byte hex selector")))?,
        ),
    };
    nodes.entry(caller.clone()).or_default();
    nodes.entry(callee.clone()).or_default();
    edges.push(CallEdge {
        caller,
        callee,
        selector,
        call_kind: frame.call_kind,
    });
    for (i, child) in frame.children.iter().enumerate() {
        let child_path = format!("{path}.children[{i}]");
        if child.depth != frame.depth + 1 {
            return Err(TraceError::Malformed {
                path: format!("{child_path}.depth"),
                message: format!("expected depth {}, found {}", frame.depth + 1, child.depth),
            });
        }
        walk(child, &child_path, nodes, edges)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(n: u8) -> String {
        format!("0x{}", format!("{n:02x}").repeat(20))
    }

    fn frame(from: u8, to: u8, depth: u32, children: Vec<TraceFrame>) -> TraceFrame {
        TraceFrame {
            from_address: addr(from),
            to_address: addr(to),
            selector: Some("0xA9059CBB".into()),
            call_kind: CallKind::Call,
            depth,
            children,
        }
    }

    #[test]
    fn single_frame() {
        let g = build_graph(&frame(1, 2, 0, vec![])).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.root, addr(2));
        assert_eq!(g.sender, addr(1));
        assert_eq!(g.edges[0].selector.as_deref(), Some("0xa9059cbb"));
    }

    #[test]
    fn duplicate_edges_are_kept() {
        let f = frame(1, 2, 0, vec![frame(2, 3, 1, vec![]), frame(2, 3, 1, vec![])]);
        let g = build_graph(&f).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.edges[1], g.edges[2]);
    }

    #[test]
    fn preorder_edges() {
        let f = frame(
            1,
            2,
            0,
            vec![frame(2, 3, 1, vec![frame(3, 4, 2, vec![])]), frame(2, 5, 1, vec![])],
        );
        let g = build_graph(&f).unwrap();
        let callees: Vec<_> = g.edges.iter().map(|e| e.callee.clone()).collect();
        assert_eq!(callees, vec![addr(2), addr(3), addr(4), addr(5)]);
    }

    #[test]
    fn bad_depth_reports_path() {
        let f = frame(1, 2, 0, vec![frame(2, 3, 1, vec![frame(3, 4, 3, vec![])])]);
        match build_graph(&f) {
            Err(TraceError::Malformed { path, .. }) => {
                assert_eq!(path, "trace.children[0].children[0].depth")
            }
            other => panic!("{other:?}"),
        }
        assert!(build_graph(&frame(1, 2, 1, vec![])).is_err());
    }

    #[test]
    fn bad_address_reports_path() {
        let mut child = frame(2, 3, 1, vec![]);
        child.to_address = "0x1234".into();
        match build_graph(&frame(1, 2, 0, vec![child])) {
            Err(TraceError::Malformed { path, .. }) => {
                assert_eq!(path, "trace.children[0].to_address")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn addresses_are_lowercased() {
        let mut f = frame(1, 2, 0, vec![]);
        f.to_address = f.to_address.replace("02", "0A").to_uppercase().replacen("0X", "0x", 1);
        let g = build_graph(&f).unwrap();
        assert_eq!(g.root, g.root.to_lowercase());
    }
}
