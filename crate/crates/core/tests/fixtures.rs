mod common;

use std::collections::BTreeMap;

use common::{fixture, read, repo_root};
use serde_json::Value;
use splitmev_core::fees::{position_histogram, read_records, StatusFilter, TxRecord};
use splitmev_core::sim::{self, SimConfig};
use splitmev_core::trace::{
    breakdown, build_graph, classify_swap, classify_traces, parse_trace_document, AddressKind, CallKind, LabelLibrary,
    TransactionTrace,
};

const TOPIC_TRANSFER: &str = "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef";
const TOPIC_SWAP_V2: &str = "0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822";
const TOPIC_SWAP_V3: &str = "0xc42079f94a6350d7e6235f29174924f928cc2ac818eb64fed8004e115fbcca67";
const TOPIC_SWAP_V4: &str = "0x40e9cecb9f5f1f1c5b9c97dec2917b7ee92e57ba5563708daca94dd84ad7112f";

fn labels() -> LabelLibrary {
    LabelLibrary::read_csv(read(&fixture("labels.csv")).as_bytes()).unwrap()
}

fn corpus() -> Vec<TransactionTrace> {
    let mut files: Vec<_> = std::fs::read_dir(fixture("traces"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files.iter().map(|p| parse_trace_document(&read(p)).unwrap()).collect()
}

fn records() -> Vec<TxRecord> {
    read_records(read(&fixture("records.csv")).as_bytes()).unwrap()
}

#[test]
fn v3_revert_graph_shape() {
    let t = parse_trace_document(&read(&fixture("v3_swap_revert.json"))).unwrap();
    let mut g = build_graph(&t.trace).unwrap();
    assert_eq!(g.nodes.len(), 5);
    assert_eq!(g.edges.len(), 7);
    assert_eq!(g.sender, "0x9000000000000000000000000000000000000001");
    assert_eq!(g.root, "0x1000000000000000000000000000000000000003");
    let static_calls = g.edges.iter().filter(|e| e.call_kind == CallKind::Staticcall).count();
    assert_eq!(static_calls, 2);

    g.annotate(&labels());
    let kinds: BTreeMap<&str, Option<AddressKind>> =
        g.nodes.iter().map(|n| (n.address.as_str(), n.annotation)).collect();
    assert_eq!(kinds["0x9000000000000000000000000000000000000001"], None);
    assert_eq!(
        kinds["0x1000000000000000000000000000000000000003"],
        Some(AddressKind::Router)
    );
    assert_eq!(
        kinds["0x3000000000000000000000000000000000000001"],
        Some(AddressKind::PoolV3)
    );
    let tokens = g
        .nodes
        .iter()
        .filter(|n| n.annotation == Some(AddressKind::Token))
        .count();
    assert_eq!(tokens, 2);
}

/// Classification read off success-path event logs: the first swap event
/// names the venue; for v4 the pair comes from the tokens that emitted
/// transfers.
fn classify_from_logs(logs: &[Value], labels: &LabelLibrary) -> (String, String, String) {
    let topic = |l: &Value| l["topics"][0].as_str().unwrap().to_string();
    let addr = |l: &Value| l["address"].as_str().unwrap().to_lowercase();
    let swap = logs
        .iter()
        .find(|l| [TOPIC_SWAP_V2, TOPIC_SWAP_V3, TOPIC_SWAP_V4].contains(&topic(l).as_str()))
        .expect("no swap event");
    let venue = labels.get(&addr(swap)).expect("swap emitter unlabelled");
    let dex = venue.dex.clone().unwrap();
    let pair = if topic(swap) == TOPIC_SWAP_V4 {
        let mut symbols: Vec<String> = Vec::new();
        for l in logs.iter().filter(|l| topic(l) == TOPIC_TRANSFER) {
            let s = labels.get(&addr(l)).unwrap().symbol().to_string();
            if !symbols.contains(&s) {
                symbols.push(s);
            }
        }
        symbols.truncate(2);
        symbols.sort();
        symbols.join("-")
    } else {
        venue.pair.clone().unwrap()
    };
    (dex, addr(swap), pair)
}

#[test]
fn trace_classification_agrees_with_logs() {
    let labels = labels();
    let traces: BTreeMap<String, TransactionTrace> =
        corpus().into_iter().map(|t| (t.tx_hash.to_lowercase(), t)).collect();
    let mut checked = 0;
    for entry in std::fs::read_dir(fixture("logs")).unwrap() {
        let doc: Value = serde_json::from_str(&read(&entry.unwrap().path())).unwrap();
        let hash = doc["tx_hash"].as_str().unwrap().to_lowercase();
        let (dex, pool, pair) = classify_from_logs(doc["logs"].as_array().unwrap(), &labels);
        let c = classify_swap(&build_graph(&traces[&hash].trace).unwrap(), &labels);
        assert!(c.is_swap, "{hash}");
        assert_eq!(c.dex.as_deref(), Some(dex.as_str()), "{hash}");
        assert_eq!(c.pool.as_deref(), Some(pool.as_str()), "{hash}");
        assert_eq!(c.pair.as_deref(), Some(pair.as_str()), "{hash}");
        checked += 1;
    }
    assert_eq!(checked, 7);
}

#[test]
fn batch_classification_matches_expected() {
    let labels = labels();
    let expected: Vec<Value> = serde_json::from_str(&read(&fixture("expected_classifications.json"))).unwrap();
    let got = classify_traces(&corpus(), &labels).unwrap();
    assert_eq!(got.len(), expected.len());
    let by_hash: BTreeMap<&str, &Value> = expected.iter().map(|e| (e["tx_hash"].as_str().unwrap(), e)).collect();
    for c in &got {
        let e = by_hash[c.tx_hash.as_str()];
        assert_eq!(
            c.classification.is_swap,
            e["is_swap"].as_bool().unwrap(),
            "{}",
            e["name"]
        );
        assert_eq!(c.classification.dex.as_deref(), e["dex"].as_str(), "{}", e["name"]);
        assert_eq!(c.classification.pool.as_deref(), e["pool"].as_str(), "{}", e["name"]);
        assert_eq!(c.classification.pair.as_deref(), e["pair"].as_str(), "{}", e["name"]);
    }
}

#[test]
fn corpus_breakdown_matches_expected() {
    let labels = labels();
    let by_hash: BTreeMap<String, TxRecord> = records().into_iter().map(|r| (r.tx_hash.clone(), r)).collect();
    let items: Vec<_> = classify_traces(&corpus(), &labels)
        .unwrap()
        .into_iter()
        .map(|c| {
            let r = by_hash[&c.tx_hash].clone();
            (c.classification, r)
        })
        .collect();
    let got = serde_json::to_value(breakdown(&items, 3)).unwrap();
    let want: Value = serde_json::from_str(&read(&fixture("expected_breakdown.json"))).unwrap();
    assert_eq!(got["total_swaps"], want["total_swaps"]);
    for key in ["dex", "pair", "sender"] {
        let (g, w) = (got[key].as_array().unwrap(), want[key].as_array().unwrap());
        assert_eq!(g.len(), w.len(), "{key}");
        for (a, b) in g.iter().zip(w) {
            assert_eq!(a["value"], b["value"], "{key}");
            assert_eq!(a["count"], b["count"], "{key}");
            let (pa, pb) = (a["percent"].as_f64().unwrap(), b["percent"].as_f64().unwrap());
            assert!((pa - pb).abs() < 1e-9, "{key}: {pa} vs {pb}");
        }
    }
}

#[test]
fn simulated_records_feed_fee_accounting() {
    let path = repo_root().join("scenarios/block_time/bt_0_25.json");
    let cfg = SimConfig::from_json(&read(&path)).unwrap();
    let report = sim::run(&cfg);
    let records = report.to_tx_records("sim");
    assert_eq!(records.len(), report.outcomes.len());
    let hist = position_histogram(&records, StatusFilter::Reverted);
    assert_eq!(hist, report.metrics.revert_histogram);
    let reverted = records.iter().filter(|r| r.is_reverted()).count() as u64;
    assert_eq!(reverted, report.metrics.reverts);
}
