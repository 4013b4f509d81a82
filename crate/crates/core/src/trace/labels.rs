use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::address::normalize_address;

pub const LABEL_HEADER: [&str; 7] = ["address", "kind", "dex", "pair", "fee_tier", "owner_label", "has_code"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AddressKind {
    Router,
    PoolV2,
    PoolV3,
    PoolManagerV4,
    Token,
    Other,
}

impl AddressKind {
    /// DEX infrastructure that can never be a bot.
    pub fn is_dex_infrastructure(&self) -> bool {
        matches!(
            self,
            AddressKind::Router | AddressKind::PoolV2 | AddressKind::PoolV3 | AddressKind::PoolManagerV4
        )
    }

    pub fn is_pool(&self) -> bool {
        matches!(self, AddressKind::PoolV2 | AddressKind::PoolV3)
    }
}

/// One row of the label library. For `token` rows the `pair` column holds
/// the token symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressLabel {
    pub address: String,
    pub kind: AddressKind,
    pub dex: Option<String>,
    pub pair: Option<String>,
    pub fee_tier: Option<u32>,
    pub owner_label: Option<String>,
    pub has_code: bool,
}

impl AddressLabel {
    pub fn symbol(&self) -> &str {
        self.pair.as_deref().unwrap_or(&self.address)
    }
}

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelLibrary {
    entries: BTreeMap<String, AddressLabel>,
}

impl LabelLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, mut label: AddressLabel) -> Result<(), String> {
        label.address =
            normalize_address(&label.address).ok_or_else(|| format!("`{}` is not a 20-byte address", label.address))?;
        if label.kind.is_pool() && label.pair.is_none() {
            return Err(format!("pool {} has no pair", label.address));
        }
        if label.kind == AddressKind::PoolManagerV4 && label.dex.is_none() {
            return Err(format!("pool manager {} has no dex", label.address));
        }
        if self.entries.contains_key(&label.address) {
            return Err(format!("duplicate label for {}", label.address));
        }
        self.entries.insert(label.address.clone(), label);
        Ok(())
    }

    pub fn get(&self, address: &str) -> Option<&AddressLabel> {
        self.entries.get(address)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AddressLabel> {
        self.entries.values()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, LabelError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.iter().ne(LABEL_HEADER.iter().copied()) {
            return Err(LabelError::Header {
                expected: LABEL_HEADER.join(","),
                found: header.iter().collect::<Vec<_>>().join(","),
            });
        }
        let mut lib = Self::new();
        for (i, row) in rdr.deserialize::<AddressLabel>().enumerate() {
            let line = i as u64 + 2;
            let mut label = row.map_err(|e| LabelError::Row {
                line,
                message: e.to_string(),
            })?;
            for field in [&mut label.dex, &mut label.pair, &mut label.owner_label] {
                if field.as_deref() == Some("") {
                    *field = None;
                }
            }
            lib.insert(label).map_err(|message| LabelError::Row { line, message })?;
        }
        Ok(lib)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "address,kind,dex,pair,fee_tier,owner_label,has_code
0xC1C1C1C1C1C1C1C1C1C1C1C1C1C1C1C1C1C1C1C1,pool_v3,uniswap_v3,USDC-WETH,500,,true
0xe1e1e1e1e1e1e1e1e1e1e1e1e1e1e1e1e1e1e1e1,token,,USDC,,,true
0xf0f0f0f0f0f0f0f0f0f0f0f0f0f0f0f0f0f0f0f0,other,,,,exchange,false
";

    #[test]
    fn reads_and_normalizes() {
        let lib = LabelLibrary::read_csv(CSV.as_bytes()).unwrap();
        assert_eq!(lib.len(), 3);
        let pool = lib.get(&format!("0x{}", "c1".repeat(20))).unwrap();
        assert_eq!(pool.kind, AddressKind::PoolV3);
        assert_eq!(pool.fee_tier, Some(500));
        let token = lib.get(&format!("0x{}", "e1".repeat(20))).unwrap();
        assert_eq!(token.symbol(), "USDC");
        assert_eq!(token.dex, None);
        let ex = lib.get(&format!("0x{}", "f0".repeat(20))).unwrap();
        assert_eq!(ex.owner_label.as_deref(), Some("exchange"));
        assert!(!ex.has_code);
    }

    #[test]
    fn missing_header_rejected() {
        let body: String = CSV.lines().skip(1).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            LabelLibrary::read_csv(body.as_bytes()),
            Err(LabelError::Header { .. })
        ));
    }

    #[test]
    fn invariants_enforced() {
        let dup = format!("{CSV}0xc1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1,pool_v2,x,A-B,,,true\n");
        match LabelLibrary::read_csv(dup.as_bytes()) {
            Err(LabelError::Row { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let pairless = "address,kind,dex,pair,fee_tier,owner_label,has_code
0xc1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1,pool_v2,uniswap_v2,,,,true
";
        assert!(LabelLibrary::read_csv(pairless.as_bytes()).is_err());
        let bad_kind = "address,kind,dex,pair,fee_tier,owner_label,has_code
0xc1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1c1,pool_v9,uniswap_v2,A-B,,,true
";
        assert!(LabelLibrary::read_csv(bad_kind.as_bytes()).is_err());
    }
}
