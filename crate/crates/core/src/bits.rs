//! Fixed-length binary blocks.
//!
//! Textual forms: a `0`/`1` string maps its first character to bit 0;
//! a hex string is read most-significant nibble first, so its leading
//! nibble becomes bits 0..4 with bit 0 the nibble's MSB.

use std::fmt;
use std::ops::BitXor;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock {
    bits: Vec<u8>,
}

impl BitBlock {
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// Builds a block from 0/1 symbols; any other value is rejected.
    pub fn from_bits(bits: impl Into<Vec<u8>>) -> Result<Self> {
        let bits = bits.into();
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::invalid(format!(
                "bit {pos} has value {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(Self { bits })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self {
            bits: bits.iter().map(|&b| b as u8).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random::<bool>() as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<u8> {
        self.bits.get(index).copied().ok_or(Error::OutOfRange {
            index,
            len: self.bits.len(),
        })
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn slice(&self, start: usize, len: usize) -> Result<BitBlock> {
        let end = start.saturating_add(len);
        if end > self.bits.len() {
            return Err(Error::OutOfRange {
                index: end.saturating_sub(1),
                len: self.bits.len(),
            });
        }
        Ok(Self {
            bits: self.bits[start..end].to_vec(),
        })
    }

    /// Parses a `0`/`1` string. Surrounding whitespace is ignored.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::invalid(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| Self { bits })
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }

    /// Parses hex, most-significant nibble first. An optional `0x` prefix is accepted.
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        if s.is_empty() {
            return Err(Error::invalid("empty hex string"));
        }
        let mut bits = Vec::with_capacity(s.len() * 4);
        for c in s.chars() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid(format!("invalid hex character {c:?}")))?;
            for shift in (0..4).rev() {
                bits.push(((nibble >> shift) & 1) as u8);
            }
        }
        Ok(Self { bits })
    }

    /// Hex of exactly `len` bits: the integer value is kept in the low bits.
    /// Fails if a set bit would be discarded.
    pub fn from_hex_len(s: &str, len: usize) -> Result<Self> {
        let raw = Self::from_hex(s)?;
        if raw.len() >= len {
            let excess = raw.len() - len;
            if raw.bits[..excess].contains(&1) {
                return Err(Error::invalid(format!(
                    "hex value {s} does not fit in {len} bits"
                )));
            }
            Ok(Self {
                bits: raw.bits[excess..].to_vec(),
            })
        } else {
            let mut bits = vec![0; len - raw.len()];
            bits.extend_from_slice(&raw.bits);
            Ok(Self { bits })
        }
    }

    /// Lowercase hex, MSB nibble first. A length that is not a multiple of
    /// four is zero-padded on the most-significant side.
    pub fn to_hex(&self) -> String {
        let pad = (4 - self.bits.len() % 4) % 4;
        let padded: Vec<u8> = std::iter::repeat_n(0, pad)
            .chain(self.bits.iter().copied())
            .collect();
        padded
            .chunks(4)
            .map(|c| {
                let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    /// The low `len` bits of `value`, with bit 0 of the block holding the
    /// most significant of them.
    pub fn from_u128(value: u128, len: usize) -> Result<Self> {
        if len > 128 {
            return Err(Error::invalid(format!("{len} bits exceed a 128-bit word")));
        }
        Ok(Self {
            bits: (0..len)
                .map(|i| ((value >> (len - 1 - i)) & 1) as u8)
                .collect(),
        })
    }

    pub fn to_u128(&self) -> Result<u128> {
        if self.bits.len() > 128 {
            return Err(Error::invalid(format!(
                "{} bits exceed a 128-bit word",
                self.bits.len()
            )));
        }
        Ok(self
            .bits
            .iter()
            .fold(0u128, |acc, &b| (acc << 1) | b as u128))
    }
}

impl BitXor for &BitBlock {
    type Output = BitBlock;

    fn bitxor(self, rhs: &BitBlock) -> BitBlock {
        assert_eq!(self.len(), rhs.len(), "xor of blocks with different lengths");
        BitBlock {
            bits: self.bits.iter().zip(&rhs.bits).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock[{}]({})", self.len(), self.to_bit_string())
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}
