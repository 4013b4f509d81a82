//! Hex address handling shared by traces, labels and transaction records.

/// Lowercase a `0x`-prefixed hex string of exactly `bytes` bytes.
pub fn normalize_hex(value: &str, bytes: usize) -> Option<String> {
    let v = value.trim();
    let body = v.strip_prefix("0x").or_else(|| v.strip_prefix("0X"))?;
    if body.len() != bytes * 2 || !body.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    Some(format!("0x{}", body.to_ascii_lowercase()))
}

/// 20-byte account address, lowercased. No checksum validation.
pub fn normalize_address(value: &str) -> Option<String> {
    normalize_hex(value, 20)
}

/// Synthetic address derived from a tag and an index, used by the simulator.
pub fn synthetic_address(tag: u8, index: u64) -> String {
    format!("0x{tag:02x}{:038x}", index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_case_and_rejects_bad_lengths() {
        assert_eq!(
            normalize_address("0xAbCdEf0123456789aBcDeF0123456789AbCdEf01").as_deref(),
            Some("0xabcdef0123456789abcdef0123456789abcdef01")
        );
        assert!(normalize_address("0x1234").is_none());
        assert!(normalize_address("abcdef0123456789abcdef0123456789abcdef01").is_none());
        assert!(normalize_address("0xzzcdef0123456789abcdef0123456789abcdef01").is_none());
        assert_eq!(normalize_hex("0xA9059CBB", 4).as_deref(), Some("0xa9059cbb"));
    }

    #[test]
    fn synthetic_addresses_are_valid() {
        let a = synthetic_address(0xb0, 7);
        assert_eq!(normalize_address(&a).as_deref(), Some(a.as_str()));
    }
}
