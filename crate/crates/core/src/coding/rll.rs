//! Manchester and 4B6B run-length-limited line codes.
//!
//! 4B6B packs each group LSB-first: input bits `x..x+4` form a nibble whose
//! most significant bit is `x+3`, and the 6-bit codeword is written to
//! output bits `z..z+6` with its most significant bit at `z+5`.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitBlock;
use crate::coding::OpCounts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RllScheme {
    Manchester,
    FourBSixB,
}

impl RllScheme {
    pub const ALL: [RllScheme; 2] = [RllScheme::Manchester, RllScheme::FourBSixB];

    /// Line-coded length for `input_len` codeword bits.
    pub fn frame_len(self, input_len: usize) -> usize {
        match self {
            RllScheme::Manchester => 2 * input_len,
            RllScheme::FourBSixB => input_len / 4 * 6,
        }
    }

    /// Code rate as (numerator, denominator).
    pub fn rate(self) -> (usize, usize) {
        match self {
            RllScheme::Manchester => (1, 2),
            RllScheme::FourBSixB => (2, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RllScheme::Manchester => "manchester",
            RllScheme::FourBSixB => "4b6b",
        }
    }
}

impl fmt::Display for RllScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RllScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "manchester" | "man" => Ok(RllScheme::Manchester),
            "4b6b" | "fourbsixb" => Ok(RllScheme::FourBSixB),
            other => Err(Error::invalid(format!(
                "unknown RLL scheme {other:?} (expected manchester or 4b6b)"
            ))),
        }
    }
}

/// DC-balanced 4B6B codewords indexed by nibble value; every entry has weight 3.
pub const FOUR_B_SIX_B_TABLE: [u8; 16] = [
    0b001110, 0b001101, 0b010011, 0b010110, 0b010101, 0b100011, 0b100110, 0b100101,
    0b011001, 0b011010, 0b011100, 0b110001, 0b110010, 0b101001, 0b101010, 0b101100,
];

const INVALID: u8 = 0xff;

const fn build_inverse() -> [u8; 64] {
    let mut inv = [INVALID; 64];
    let mut i = 0;
    while i < 16 {
        inv[FOUR_B_SIX_B_TABLE[i] as usize] = i as u8;
        i += 1;
    }
    inv
}

const FOUR_B_SIX_B_INVERSE: [u8; 64] = build_inverse();

/// Reverse lookup of a 6-bit codeword.
pub fn four_b_six_b_lookup(codeword: u8) -> Option<u8> {
    FOUR_B_SIX_B_INVERSE
        .get(codeword as usize)
        .copied()
        .filter(|&v| v != INVALID)
}

/// An RLL-encoded bit sequence for one front-end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCodedFrame {
    scheme: RllScheme,
    bits: BitBlock,
}

impl LineCodedFrame {
    /// Wraps raw bits without checking the code laws; decoding reports violations.
    pub fn new(scheme: RllScheme, bits: BitBlock) -> Self {
        Self { scheme, bits }
    }

    pub fn scheme(&self) -> RllScheme {
        self.scheme
    }

    pub fn bits(&self) -> &BitBlock {
        &self.bits
    }

    pub fn into_bits(self) -> BitBlock {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn decode(&self) -> Result<BitBlock> {
        match self.scheme {
            RllScheme::Manchester => manchester_decode(self),
            RllScheme::FourBSixB => four_b_six_b_decode(self),
        }
    }
}

pub fn rll_encode(codeword: &BitBlock, scheme: RllScheme) -> Result<LineCodedFrame> {
    rll_encode_counted(codeword, scheme, &mut OpCounts::default())
}

pub(crate) fn rll_encode_counted(
    codeword: &BitBlock,
    scheme: RllScheme,
    ops: &mut OpCounts,
) -> Result<LineCodedFrame> {
    match scheme {
        RllScheme::Manchester => manchester_encode_counted(codeword, ops),
        RllScheme::FourBSixB => four_b_six_b_encode_counted(codeword, ops),
    }
}

/// `1 -> (1,0)`, `0 -> (0,1)`.
pub fn manchester_encode(codeword: &BitBlock) -> Result<LineCodedFrame> {
    manchester_encode_counted(codeword, &mut OpCounts::default())
}

fn manchester_encode_counted(codeword: &BitBlock, ops: &mut OpCounts) -> Result<LineCodedFrame> {
    if codeword.is_empty() {
        return Err(Error::invalid("cannot Manchester-encode an empty block"));
    }
    let out: Vec<u8> = codeword.iter().flat_map(|b| [b, b ^ 1]).collect();
    ops.bit_moves += out.len() as u64;
    Ok(LineCodedFrame::new(
        RllScheme::Manchester,
        BitBlock::from_bits_unchecked(out),
    ))
}

pub fn manchester_decode(frame: &LineCodedFrame) -> Result<BitBlock> {
    let bits = frame.bits.as_slice();
    if !bits.len().is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Manchester frame length {} is odd",
            bits.len()
        )));
    }
    bits.chunks_exact(2)
        .enumerate()
        .map(|(i, pair)| match (pair[0], pair[1]) {
            (1, 0) => Ok(1),
            (0, 1) => Ok(0),
            (a, b) => Err(Error::LineCodeViolation {
                scheme: RllScheme::Manchester,
                unit: "pair",
                index: i,
                found: format!("({a},{b})"),
            }),
        })
        .collect::<Result<Vec<u8>>>()
        .map(BitBlock::from_bits_unchecked)
}

pub fn four_b_six_b_encode(codeword: &BitBlock) -> Result<LineCodedFrame> {
    four_b_six_b_encode_counted(codeword, &mut OpCounts::default())
}

fn four_b_six_b_encode_counted(codeword: &BitBlock, ops: &mut OpCounts) -> Result<LineCodedFrame> {
    if codeword.is_empty() || !codeword.len().is_multiple_of(4) {
        return Err(Error::invalid(format!(
            "4B6B input length {} is not a positive multiple of 4",
            codeword.len()
        )));
    }
    let mut out = Vec::with_capacity(codeword.len() / 4 * 6);
    for group in codeword.as_slice().chunks_exact(4) {
        let nibble = group
            .iter()
            .enumerate()
            .fold(0u8, |acc, (j, &b)| acc | (b << j));
        let word = FOUR_B_SIX_B_TABLE[nibble as usize];
        out.extend((0..6).map(|j| (word >> j) & 1));
    }
    ops.table_lookups += (codeword.len() / 4) as u64;
    ops.bit_moves += out.len() as u64;
    Ok(LineCodedFrame::new(
        RllScheme::FourBSixB,
        BitBlock::from_bits_unchecked(out),
    ))
}

pub fn four_b_six_b_decode(frame: &LineCodedFrame) -> Result<BitBlock> {
    let bits = frame.bits.as_slice();
    if !bits.len().is_multiple_of(6) {
        return Err(Error::invalid(format!(
            "4B6B frame length {} is not a multiple of 6",
            bits.len()
        )));
    }
    let mut out = Vec::with_capacity(bits.len() / 6 * 4);
    for (i, group) in bits.chunks_exact(6).enumerate() {
        let word = group
            .iter()
            .enumerate()
            .fold(0u8, |acc, (j, &b)| acc | (b << j));
        let nibble = four_b_six_b_lookup(word).ok_or_else(|| Error::LineCodeViolation {
            scheme: RllScheme::FourBSixB,
            unit: "group",
            index: i,
            found: format!("{word:06b}"),
        })?;
        out.extend((0..4).map(|j| (nibble >> j) & 1));
    }
    Ok(BitBlock::from_bits_unchecked(out))
}
