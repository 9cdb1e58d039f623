use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A fixed-width bit string. Position 0 is the leftmost character and maps to
/// the most significant bit of the integer encoding used elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(width: usize) -> Self {
        BitString(vec![false; width])
    }

    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(width <= 64, "integer encoding holds at most 64 bits");
        BitString(
            (0..width)
                .map(|i| (value >> (width - 1 - i)) & 1 == 1)
                .collect(),
        )
    }

    /// Integer encoding, or `None` for strings wider than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

/// Hex encoding of a `width`-bit value, zero-padded to `ceil(width / 4)` digits.
pub fn hex_key(value: u64, width: usize) -> String {
    format!("{value:0w$x}", w = width.div_ceil(4).max(1))
}

pub fn parse_hex_key(key: &str, width: usize) -> Result<u64> {
    let value =
        u64::from_str_radix(key, 16).map_err(|_| Error::Parse(format!("bad hex key {key:?}")))?;
    if width < 64 && value >> width != 0 {
        return Err(Error::Parse(format!("key {key:?} exceeds width {width}")));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_encoding() {
        let b: BitString = "10".parse().unwrap();
        assert_eq!(b.to_u64(), Some(2));
        assert_eq!(BitString::from_u64(1, 4).to_string(), "0001");
        assert_eq!(hex_key(0b101, 3), "5");
        assert_eq!(hex_key(0x1f, 5), "1f");
        assert_eq!(parse_hex_key("1f", 5).unwrap(), 0x1f);
        assert!(parse_hex_key("20", 5).is_err());
        assert!("012".parse::<BitString>().is_err());
    }
}
