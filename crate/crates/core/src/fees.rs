//! Transaction records, L2 gas-fee decomposition and revert statistics.
//!
//! All fee arithmetic is done in integer wei; floating point only appears
//! in reported ratios.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::address::{normalize_address, normalize_hex};

/// Exact CSV header of a transaction-record file.
pub const RECORD_HEADER: [&str; 12] = [
    "tx_hash",
    "day",
    "block_number",
    "tx_index",
    "status",
    "from_address",
    "to_address",
    "gas_price",
    "priority_fee_per_gas",
    "gas_used",
    "l1_fee",
    "chain",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxStatus {
    Success,
    Reverted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxRecord {
    pub tx_hash: String,
    pub day: NaiveDate,
    pub block_number: u64,
    pub tx_index: u64,
    pub status: TxStatus,
    pub from_address: String,
    pub to_address: String,
    pub gas_price: u64,
    pub priority_fee_per_gas: u64,
    pub gas_used: u64,
    pub l1_fee: u64,
    pub chain: String,
}

impl TxRecord {
    pub fn is_reverted(&self) -> bool {
        self.status == TxStatus::Reverted
    }

    fn normalized(mut self) -> Result<Self, String> {
        self.tx_hash =
            normalize_hex(&self.tx_hash, 32).ok_or_else(|| format!("tx_hash `{}` is not 32-byte hex", self.tx_hash))?;
        self.from_address = normalize_address(&self.from_address)
            .ok_or_else(|| format!("from_address `{}` is not a 20-byte address", self.from_address))?;
        self.to_address = normalize_address(&self.to_address)
            .ok_or_else(|| format!("to_address `{}` is not a 20-byte address", self.to_address))?;
        Ok(self)
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<TxRecord>, RecordError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(RECORD_HEADER.iter().copied()) {
        return Err(RecordError::Header {
            expected: RECORD_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<TxRecord>() {
        let line = out.len() as u64 + 2;
        let rec = row.map_err(|e| RecordError::Row {
            line: e.position().map_or(line, |p| p.line()),
            message: e.to_string(),
        })?;
        out.push(rec.normalized().map_err(|message| RecordError::Row { line, message })?);
    }
    Ok(out)
}

pub fn write_records<W: Write>(writer: W, records: &[TxRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Gas fee of one transaction split into execution (base + priority) and L1 data fee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeeBreakdown {
    pub execution_fee: u128,
    pub priority_fee: u128,
    pub base_fee: u128,
    pub l1_fee: u128,
    pub total: u128,
    /// The priority fee per gas exceeded the gas price, so the base fee was
    /// clamped to zero and `base + priority > execution`.
    pub clamped: bool,
}

pub fn decompose(record: &TxRecord) -> FeeBreakdown {
    let gas = u128::from(record.gas_used);
    let price = u128::from(record.gas_price);
    let tip = u128::from(record.priority_fee_per_gas);
    let execution_fee = price * gas;
    let l1_fee = u128::from(record.l1_fee);
    FeeBreakdown {
        execution_fee,
        priority_fee: tip * gas,
        base_fee: price.saturating_sub(tip) * gas,
        l1_fee,
        total: execution_fee + l1_fee,
        clamped: tip > price,
    }
}

/// Which transactions a revert-rate series is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Subset {
    #[default]
    All,
    /// Transactions with `priority_fee_per_gas > above`.
    PriorityFee { above: u64 },
}

impl Subset {
    pub fn priority() -> Self {
        Subset::PriorityFee { above: 0 }
    }

    pub fn contains(&self, r: &TxRecord) -> bool {
        match *self {
            Subset::All => true,
            Subset::PriorityFee { above } => r.priority_fee_per_gas > above,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RevertCounts {
    pub total: u64,
    pub reverted: u64,
}

impl RevertCounts {
    pub fn merge(self, other: Self) -> Self {
        Self {
            total: self.total + other.total,
            reverted: self.reverted + other.reverted,
        }
    }

    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.reverted as f64 / self.total as f64)
    }
}

pub type DayKey = (String, NaiveDate);

/// Per `(chain, day)` counts; merging two tables adds counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DailyCounts(pub BTreeMap<DayKey, RevertCounts>);

impl DailyCounts {
    pub fn tally(records: &[TxRecord], subset: Subset) -> Self {
        let mut map: BTreeMap<DayKey, RevertCounts> = BTreeMap::new();
        for r in records.iter().filter(|r| subset.contains(r)) {
            let c = map.entry((r.chain.clone(), r.day)).or_default();
            c.total += 1;
            c.reverted += u64::from(r.is_reverted());
        }
        Self(map)
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.0 {
            let e = self.0.entry(k).or_default();
            *e = e.merge(v);
        }
        self
    }

    pub fn rates(&self) -> Vec<DailyRevertRate> {
        self.0
            .iter()
            .filter(|(_, c)| c.total > 0)
            .map(|((chain, day), c)| DailyRevertRate {
                chain: chain.clone(),
                day: *day,
                total: c.total,
                reverted: c.reverted,
                revert_rate: c.reverted as f64 / c.total as f64,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyRevertRate {
    pub chain: String,
    pub day: NaiveDate,
    pub total: u64,
    pub reverted: u64,
    pub revert_rate: f64,
}

/// Daily revert rate per chain over the chosen subset. Days with no
/// transactions in the subset are omitted.
pub fn revert_stats(records: &[TxRecord], subset: Subset) -> Vec<DailyRevertRate> {
    DailyCounts::tally(records, subset).rates()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevertDifferential {
    pub chain: String,
    pub day: NaiveDate,
    pub priority_rate: f64,
    pub all_rate: f64,
    pub differential: f64,
}

/// Priority-fee revert rate minus the all-transaction revert rate, per day.
pub fn revert_differential(records: &[TxRecord], priority_above: u64) -> Vec<RevertDifferential> {
    let all = DailyCounts::tally(records, Subset::All);
    let prio = DailyCounts::tally(records, Subset::PriorityFee { above: priority_above });
    prio.0
        .iter()
        .filter_map(|(key, pc)| {
            let priority_rate = pc.rate()?;
            let all_rate = all.0.get(key)?.rate()?;
            Some(RevertDifferential {
                chain: key.0.clone(),
                day: key.1,
                priority_rate,
                all_rate,
                differential: priority_rate - all_rate,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatusFilter {
    All,
    Success,
    #[default]
    Reverted,
}

impl StatusFilter {
    pub fn matches(&self, status: TxStatus) -> bool {
        match self {
            StatusFilter::All => true,
            StatusFilter::Success => status == TxStatus::Success,
            StatusFilter::Reverted => status == TxStatus::Reverted,
        }
    }
}

/// Count of transactions per in-block position.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositionHistogram(pub BTreeMap<u64, u64>);

impl PositionHistogram {
    pub fn add(&mut self, index: u64) {
        *self.0.entry(index).or_default() += 1;
    }

    pub fn count(&self, index: u64) -> u64 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Share of the mass at `index`; `None` for an empty histogram.
    pub fn share(&self, index: u64) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.count(index) as f64 / total as f64)
    }
}

pub fn position_histogram(records: &[TxRecord], filter: StatusFilter) -> PositionHistogram {
    let mut h = PositionHistogram::default();
    for r in records.iter().filter(|r| filter.matches(r.status)) {
        h.add(r.tx_index);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantile {
    pub level: f64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityFeeSummary {
    pub reverted_count: u64,
    pub zero_fee_share: f64,
    pub one_wei_share: f64,
    pub quantiles: Vec<Quantile>,
}

pub const FEE_QUANTILE_LEVELS: [f64; 7] = [0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0];

/// Distribution of `priority_fee_per_gas` over reverted transactions.
/// Quantiles use the nearest-rank rule; an empty input yields zero shares
/// and no quantiles.
pub fn priority_fee_distribution(records: &[TxRecord]) -> PriorityFeeSummary {
    let mut fees: Vec<u64> = records
        .iter()
        .filter(|r| r.is_reverted())
        .map(|r| r.priority_fee_per_gas)
        .collect();
    fees.sort_unstable();
    let n = fees.len();
    if n == 0 {
        return PriorityFeeSummary {
            reverted_count: 0,
            zero_fee_share: 0.0,
            one_wei_share: 0.0,
            quantiles: Vec::new(),
        };
    }
    let share = |v: u64| fees.iter().filter(|&&f| f == v).count() as f64 / n as f64;
    let quantiles = FEE_QUANTILE_LEVELS
        .iter()
        .map(|&level| {
            let rank = ((level * n as f64).ceil() as usize).clamp(1, n);
            Quantile {
                level,
                value: fees[rank - 1],
            }
        })
        .collect();
    PriorityFeeSummary {
        reverted_count: n as u64,
        zero_fee_share: share(0),
        one_wei_share: share(1),
        quantiles,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyFeeTotals {
    pub chain: String,
    pub day: NaiveDate,
    pub transactions: u64,
    pub base_fee: u128,
    pub priority_fee: u128,
    pub l1_fee: u128,
    pub total: u128,
    pub clamped: u64,
}

/// Summed fee components per `(chain, day)` over records matching `filter`.
pub fn daily_fee_totals(records: &[TxRecord], filter: StatusFilter) -> Vec<DailyFeeTotals> {
    let mut map: BTreeMap<DayKey, DailyFeeTotals> = BTreeMap::new();
    for r in records.iter().filter(|r| filter.matches(r.status)) {
        let fb = decompose(r);
        let e = map.entry((r.chain.clone(), r.day)).or_insert_with(|| DailyFeeTotals {
            chain: r.chain.clone(),
            day: r.day,
            transactions: 0,
            base_fee: 0,
            priority_fee: 0,
            l1_fee: 0,
            total: 0,
            clamped: 0,
        });
        e.transactions += 1;
        e.base_fee += fb.base_fee;
        e.priority_fee += fb.priority_fee;
        e.l1_fee += fb.l1_fee;
        e.total += fb.total;
        e.clamped += u64::from(fb.clamped);
    }
    map.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(status: TxStatus, index: u64, fee: u64) -> TxRecord {
        TxRecord {
            tx_hash: format!("0x{:064x}", index),
            day: NaiveDate::from_ymd_opt(2025, 1, 1).unwrap(),
            block_number: 1,
            tx_index: index,
            status,
            from_address: format!("0x{:040x}", 1),
            to_address: format!("0x{:040x}", 2),
            gas_price: 100,
            priority_fee_per_gas: fee,
            gas_used: 1000,
            l1_fee: 0,
            chain: "test".into(),
        }
    }

    fn with_fees(gas_price: u64, priority: u64, gas_used: u64) -> TxRecord {
        TxRecord {
            gas_price,
            priority_fee_per_gas: priority,
            gas_used,
            ..rec(TxStatus::Reverted, 0, 0)
        }
    }

    #[test]
    fn decompose_examples() {
        let fb = decompose(&with_fees(100, 20, 1000));
        assert_eq!(
            (fb.execution_fee, fb.priority_fee, fb.base_fee, fb.clamped),
            (100_000, 20_000, 80_000, false)
        );
        let fb = decompose(&with_fees(5, 7, 10));
        assert_eq!(
            (fb.execution_fee, fb.priority_fee, fb.base_fee, fb.clamped),
            (50, 70, 0, true)
        );
        assert_eq!(decompose(&with_fees(5, 1, 0)), FeeBreakdown::default());
    }

    #[test]
    fn l1_fee_adds_to_total() {
        let mut r = with_fees(100, 20, 1000);
        r.l1_fee = 7;
        let fb = decompose(&r);
        assert_eq!(fb.total, 100_007);
        assert_eq!(fb.l1_fee, 7);
    }

    #[test]
    fn no_overflow_at_extremes() {
        let fb = decompose(&with_fees(u64::MAX, 0, u64::MAX));
        assert_eq!(fb.execution_fee, u128::from(u64::MAX) * u128::from(u64::MAX));
    }

    #[test]
    fn revert_rate_basic() {
        let mut rs: Vec<_> = (0..10).map(|i| rec(TxStatus::Success, i, 0)).collect();
        rs[3].status = TxStatus::Reverted;
        rs[7].status = TxStatus::Reverted;
        let s = revert_stats(&rs, Subset::All);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].revert_rate, 0.2);
        assert!(revert_stats(&rs, Subset::priority()).is_empty());
        assert!(revert_differential(&rs, 0).is_empty());
    }

    #[test]
    fn differential_uses_threshold() {
        let rs = vec![
            rec(TxStatus::Reverted, 0, 1),
            rec(TxStatus::Success, 1, 1),
            rec(TxStatus::Reverted, 2, 5),
            rec(TxStatus::Success, 3, 0),
        ];
        let d = revert_differential(&rs, 0);
        assert_eq!(d[0].priority_rate, 2.0 / 3.0);
        assert_eq!(d[0].all_rate, 0.5);
        let d1 = revert_differential(&rs, 1);
        assert_eq!(d1[0].priority_rate, 1.0);
    }

    #[test]
    fn histograms() {
        let all_zero: Vec<_> = (0..5).map(|_| rec(TxStatus::Reverted, 0, 0)).collect();
        let h = position_histogram(&all_zero, StatusFilter::Reverted);
        assert_eq!(h.0.len(), 1);
        assert_eq!(h.count(0), 5);

        let flat: Vec<_> = (0..10).map(|i| rec(TxStatus::Reverted, i, 0)).collect();
        let h = position_histogram(&flat, StatusFilter::Reverted);
        assert!((0..10).all(|i| h.count(i) == 1));
        assert_eq!(position_histogram(&flat, StatusFilter::Success).total(), 0);
    }

    #[test]
    fn fee_distribution_shares() {
        let rs: Vec<_> = [0, 0, 1, 5]
            .iter()
            .enumerate()
            .map(|(i, &f)| rec(TxStatus::Reverted, i as u64, f))
            .collect();
        let s = priority_fee_distribution(&rs);
        assert_eq!(s.zero_fee_share, 0.5);
        assert_eq!(s.one_wei_share, 0.25);
        assert_eq!(s.quantiles.iter().find(|q| q.level == 0.5).unwrap().value, 0);
        assert_eq!(s.quantiles.last().unwrap().value, 5);

        let zeros: Vec<_> = (0..3).map(|i| rec(TxStatus::Reverted, i, 0)).collect();
        assert_eq!(priority_fee_distribution(&zeros).zero_fee_share, 1.0);
        assert_eq!(priority_fee_distribution(&[]).reverted_count, 0);
    }

    #[test]
    fn csv_roundtrip_and_header_check() {
        let rs = vec![rec(TxStatus::Reverted, 3, 2), rec(TxStatus::Success, 4, 0)];
        let mut buf = Vec::new();
        write_records(&mut buf, &rs).unwrap();
        assert_eq!(read_records(buf.as_slice()).unwrap(), rs);

        let bad = "tx_hash,day\n0x00,2025-01-01\n";
        assert!(matches!(read_records(bad.as_bytes()), Err(RecordError::Header { .. })));
    }

    #[test]
    fn csv_row_errors_carry_line() {
        let mut text = RECORD_HEADER.join(",");
        text.push('\n');
        text.push_str(&format!(
            "0x{:064x},2025-01-01,1,0,success,0x{:040x},0x{:040x},1,0,1,0,c\n",
            1, 1, 2
        ));
        text.push_str(&format!(
            "0x{:064x},2025-01-01,1,0,maybe,0x{:040x},0x{:040x},1,0,1,0,c\n",
            2, 1, 2
        ));
        match read_records(text.as_bytes()) {
            Err(RecordError::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let upper = text
            .lines()
            .take(2)
            .collect::<Vec<_>>()
            .join("\n")
            .replace("0x0000", "0X0000");
        let parsed = read_records(upper.as_bytes()).unwrap();
        assert!(parsed[0].tx_hash.starts_with("0x"));
    }

    fn arb_record() -> impl Strategy<Value = TxRecord> {
        (0u8..2, 0u8..3, 0u8..2, 0u64..20, 0u64..4).prop_map(|(chain, day, st, idx, fee)| TxRecord {
            chain: format!("c{chain}"),
            day: NaiveDate::from_ymd_opt(2025, 1, 1 + u32::from(day)).unwrap(),
            status: if st == 0 { TxStatus::Success } else { TxStatus::Reverted },
            ..rec(TxStatus::Success, idx, fee)
        })
    }

    proptest! {
        #[test]
        fn decomposition_invariants(price in 0u64..1_000_000, tip in 0u64..1_000_000, gas in 0u64..10_000_000, l1 in 0u64..1_000_000) {
            let mut r = with_fees(price, tip, gas);
            r.l1_fee = l1;
            let fb = decompose(&r);
            prop_assert_eq!(fb.total, fb.execution_fee + fb.l1_fee);
            if tip <= price {
                prop_assert_eq!(fb.execution_fee, fb.base_fee + fb.priority_fee);
                prop_assert!(!fb.clamped);
            } else {
                prop_assert_eq!(fb.base_fee, 0);
                prop_assert!(fb.clamped);
            }
        }

        #[test]
        fn stats_merge_over_disjoint_sets(a in prop::collection::vec(arb_record(), 0..40),
                                          b in prop::collection::vec(arb_record(), 0..40)) {
            let merged = DailyCounts::tally(&a, Subset::All).merge(DailyCounts::tally(&b, Subset::All));
            let union: Vec<_> = a.iter().chain(b.iter()).cloned().collect();
            prop_assert_eq!(merged.rates(), revert_stats(&union, Subset::All));
        }

        #[test]
        fn stats_are_permutation_invariant(mut rs in prop::collection::vec(arb_record(), 0..40), seed in any::<u64>()) {
            let before = (revert_stats(&rs, Subset::priority()), position_histogram(&rs, StatusFilter::Reverted), priority_fee_distribution(&rs));
            let len = rs.len().max(1);
            rs.rotate_left((seed as usize) % len);
            rs.reverse();
            let after = (revert_stats(&rs, Subset::priority()), position_histogram(&rs, StatusFilter::Reverted), priority_fee_distribution(&rs));
            prop_assert_eq!(before, after);
        }
    }
}
