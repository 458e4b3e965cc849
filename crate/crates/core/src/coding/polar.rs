//! Polar encoding over the kernel `F = [[1,0],[1,1]]` without bit reversal.

use std::fs;
use std::path::Path;

use crate::bits::BitBlock;
use crate::coding::OpCounts;
use crate::error::{Error, Result};

pub const DEFAULT_ERASURE_PROB: f64 = 0.5;

/// Codeword length `N = 2^n` together with its frozen positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCodeConfig {
    n: u32,
    frozen: Vec<usize>,
    frozen_mask: Vec<bool>,
}

impl PolarCodeConfig {
    /// `frozen` may be given in any order but must hold distinct indices in `[0, 2^n)`.
    pub fn new(n: u32, frozen: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("codeword exponent n must be at least 1"));
        }
        if n > 24 {
            return Err(Error::invalid(format!("codeword exponent {n} is too large")));
        }
        let len = 1usize << n;
        let mut mask = vec![false; len];
        let mut sorted = Vec::new();
        for idx in frozen {
            if idx >= len {
                return Err(Error::invalid(format!(
                    "frozen index {idx} out of range for N = {len}"
                )));
            }
            if mask[idx] {
                return Err(Error::invalid(format!("frozen index {idx} repeated")));
            }
            mask[idx] = true;
            sorted.push(idx);
        }
        sorted.sort_unstable();
        if sorted.len() >= len {
            return Err(Error::invalid(
                "every position is frozen; information length must be at least 1",
            ));
        }
        Ok(Self {
            n,
            frozen: sorted,
            frozen_mask: mask,
        })
    }

    /// Codeword length must be a power of two, at least 2.
    pub fn with_codeword_len(codeword_len: usize, frozen: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(exponent_of(codeword_len)?, frozen)
    }

    /// Frozen set chosen by the erasure-channel Bhattacharyya design.
    pub fn designed(codeword_len: usize, info_len: usize, erasure_prob: f64) -> Result<Self> {
        let n = exponent_of(codeword_len)?;
        let frozen = design_frozen_set(n, info_len, erasure_prob)?;
        Self::new(n, frozen)
    }

    /// Loads an index list (see [`parse_frozen_list`]) for a codeword of `codeword_len` bits.
    pub fn from_frozen_file(path: &Path, codeword_len: usize) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let frozen = parse_frozen_list(&text, path)?;
        Self::with_codeword_len(codeword_len, frozen)
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    /// `N`.
    pub fn codeword_len(&self) -> usize {
        1 << self.n
    }

    /// `K = N - |frozen|`.
    pub fn info_len(&self) -> usize {
        self.codeword_len() - self.frozen.len()
    }

    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        self.frozen_mask.get(index).copied().unwrap_or(false)
    }

    pub fn info_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.frozen_mask
            .iter()
            .enumerate()
            .filter(|(_, &f)| !f)
            .map(|(i, _)| i)
    }
}

fn exponent_of(codeword_len: usize) -> Result<u32> {
    if codeword_len < 2 || !codeword_len.is_power_of_two() {
        return Err(Error::invalid(format!(
            "codeword length {codeword_len} is not a power of two >= 2"
        )));
    }
    Ok(codeword_len.trailing_zeros())
}

/// Bhattacharyya parameters of the `2^n` synthetic channels of an erasure
/// channel with erasure probability `erasure_prob`.
pub fn bhattacharyya_bec(n: u32, erasure_prob: f64) -> Vec<f64> {
    let mut z = vec![erasure_prob];
    for _ in 0..n {
        z = z.iter().flat_map(|&p| [2.0 * p - p * p, p * p]).collect();
    }
    z
}

/// Returns the `2^n - info_len` indices with the largest Bhattacharyya
/// parameter, ascending. Equal parameters freeze the lower index first.
pub fn design_frozen_set(n: u32, info_len: usize, erasure_prob: f64) -> Result<Vec<usize>> {
    if n == 0 || n > 24 {
        return Err(Error::invalid(format!("codeword exponent {n} out of range")));
    }
    let len = 1usize << n;
    if info_len > len {
        return Err(Error::invalid(format!(
            "information length {info_len} exceeds codeword length {len}"
        )));
    }
    if !(erasure_prob > 0.0 && erasure_prob < 1.0) {
        return Err(Error::invalid(format!(
            "erasure probability {erasure_prob} not in (0, 1)"
        )));
    }
    let z = bhattacharyya_bec(n, erasure_prob);
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
    let mut frozen = order[..len - info_len].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// Frozen-set text: one decimal index per line, ascending, `#` starts a comment.
pub fn parse_frozen_list(text: &str, source: &Path) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let idx: usize = line
            .parse()
            .map_err(|_| Error::parse(source, lineno + 1, format!("not a decimal index: {line:?}")))?;
        if let Some(&prev) = out.last() {
            if idx <= prev {
                return Err(Error::parse(
                    source,
                    lineno + 1,
                    format!("index {idx} is not ascending (previous {prev})"),
                ));
            }
        }
        out.push(idx);
    }
    Ok(out)
}

pub fn format_frozen_list(config: &PolarCodeConfig) -> String {
    let mut s = format!(
        "# frozen positions, N = {}, K = {}\n",
        config.codeword_len(),
        config.info_len()
    );
    for idx in config.frozen() {
        s.push_str(&idx.to_string());
        s.push('\n');
    }
    s
}

pub fn insert_frozen(message: &BitBlock, config: &PolarCodeConfig) -> Result<BitBlock> {
    insert_frozen_counted(message, config, &mut OpCounts::default())
}

pub(crate) fn insert_frozen_counted(
    message: &BitBlock,
    config: &PolarCodeConfig,
    ops: &mut OpCounts,
) -> Result<BitBlock> {
    if message.len() != config.info_len() {
        return Err(Error::invalid(format!(
            "message has {} bits, code expects K = {}",
            message.len(),
            config.info_len()
        )));
    }
    let msg = message.as_slice();
    let mut out = vec![0u8; config.codeword_len()];
    let mut bit_index = 0;
    for (c, slot) in out.iter_mut().enumerate() {
        if !config.is_frozen(c) {
            *slot = msg[bit_index];
            bit_index += 1;
        }
    }
    ops.bit_moves += out.len() as u64;
    Ok(BitBlock::from_bits_unchecked(out))
}

/// Butterfly over `n` stages; stage `i` works on blocks of `2^(n-i)` and adds
/// the lower half of each block into its upper half.
pub fn polar_transform(u: &BitBlock) -> Result<BitBlock> {
    polar_transform_counted(u, &mut OpCounts::default())
}

pub(crate) fn polar_transform_counted(u: &BitBlock, ops: &mut OpCounts) -> Result<BitBlock> {
    let len = u.len();
    let n = exponent_of(len)?;
    let mut x = u.as_slice().to_vec();
    for i in 0..n {
        let block = 1usize << (n - i);
        let half = block / 2;
        for base in (0..len).step_by(block) {
            for t in 0..half {
                x[base + t] ^= x[base + t + half];
            }
        }
        ops.xors += (len / 2) as u64;
    }
    Ok(BitBlock::from_bits_unchecked(x))
}

pub fn polar_encode(message: &BitBlock, config: &PolarCodeConfig) -> Result<BitBlock> {
    polar_encode_counted(message, config, &mut OpCounts::default())
}

pub(crate) fn polar_encode_counted(
    message: &BitBlock,
    config: &PolarCodeConfig,
    ops: &mut OpCounts,
) -> Result<BitBlock> {
    let u = insert_frozen_counted(message, config, ops)?;
    polar_transform_counted(&u, ops)
}

/// Noiseless inverse of [`polar_encode`]; the transform is its own inverse.
pub fn polar_extract(codeword: &BitBlock, config: &PolarCodeConfig) -> Result<BitBlock> {
    if codeword.len() != config.codeword_len() {
        return Err(Error::invalid(format!(
            "codeword has {} bits, code expects N = {}",
            codeword.len(),
            config.codeword_len()
        )));
    }
    let u = polar_transform(codeword)?;
    let bits = u.as_slice();
    Ok(BitBlock::from_bits_unchecked(
        config.info_positions().map(|i| bits[i]).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitBlock {
        BitBlock::from_bit_str(s).unwrap()
    }

    /// u * F^{(x)n} by the subset rule: output c collects every input r with c ⊆ r.
    fn subset_oracle(u: &[u8]) -> Vec<u8> {
        let len = u.len();
        (0..len)
            .map(|c| (0..len).filter(|&r| c & !r == 0).fold(0, |acc, r| acc ^ u[r]))
            .collect()
    }

    #[test]
    fn single_erasure_step() {
        assert_eq!(design_frozen_set(1, 1, 0.5).unwrap(), vec![0]);
        let z = bhattacharyya_bec(1, 0.5);
        assert_eq!(z, vec![0.75, 0.25]);
    }

    #[test]
    fn full_rate_freezes_nothing() {
        assert!(design_frozen_set(2, 4, 0.3).unwrap().is_empty());
        assert!(design_frozen_set(2, 4, 0.9).unwrap().is_empty());
    }

    #[test]
    fn eight_channel_design() {
        assert_eq!(design_frozen_set(3, 4, 0.5).unwrap(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn design_rejects_bad_parameters() {
        assert!(design_frozen_set(2, 5, 0.5).is_err());
        assert!(design_frozen_set(2, 2, 0.0).is_err());
        assert!(design_frozen_set(2, 2, 1.0).is_err());
    }

    #[test]
    fn config_invariants() {
        assert!(PolarCodeConfig::new(0, []).is_err());
        assert!(PolarCodeConfig::new(1, [0, 1]).is_err());
        assert!(PolarCodeConfig::new(2, [4]).is_err());
        assert!(PolarCodeConfig::new(2, [1, 1]).is_err());
        assert!(PolarCodeConfig::with_codeword_len(33, []).is_err());
        assert!(PolarCodeConfig::with_codeword_len(1, []).is_err());
        let c = PolarCodeConfig::new(2, [1, 0]).unwrap();
        assert_eq!(c.frozen(), &[0, 1]);
        assert_eq!(c.info_len(), 2);
        assert_eq!(c.info_positions().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn insert_frozen_examples() {
        let c2 = PolarCodeConfig::new(1, [0]).unwrap();
        assert_eq!(insert_frozen(&bits("1"), &c2).unwrap(), bits("01"));
        let c4 = PolarCodeConfig::new(2, [0, 1]).unwrap();
        assert_eq!(insert_frozen(&bits("10"), &c4).unwrap(), bits("0010"));
        assert_eq!(insert_frozen(&bits("00"), &c4).unwrap(), bits("0000"));
        assert!(insert_frozen(&bits("101"), &c4).is_err());
    }

    #[test]
    fn transform_examples() {
        assert_eq!(polar_transform(&bits("01")).unwrap(), bits("11"));
        assert_eq!(polar_transform(&bits("0010")).unwrap(), bits("1010"));
        assert_eq!(polar_transform(&BitBlock::zeros(64)).unwrap(), BitBlock::zeros(64));
        assert!(polar_transform(&bits("011")).is_err());
        assert!(polar_transform(&bits("0")).is_err());
    }

    #[test]
    fn encode_and_extract_examples() {
        let c4 = PolarCodeConfig::new(2, [0, 1]).unwrap();
        assert_eq!(polar_encode(&bits("10"), &c4).unwrap(), bits("1010"));
        assert_eq!(polar_extract(&bits("1010"), &c4).unwrap(), bits("10"));
        assert_eq!(polar_extract(&bits("0000"), &c4).unwrap(), bits("00"));
        assert!(polar_extract(&bits("101"), &c4).is_err());
        let big = PolarCodeConfig::designed(256, 128, 0.5).unwrap();
        assert_eq!(polar_encode(&BitBlock::zeros(128), &big).unwrap().len(), 256);
    }

    #[test]
    fn frozen_list_parsing() {
        let p = Path::new("frozen.txt");
        let parsed = parse_frozen_list("# header\n0\n1 # trailing\n\n4\n", p).unwrap();
        assert_eq!(parsed, vec![0, 1, 4]);
        let err = parse_frozen_list("0\n3\n2\n", p).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_frozen_list("0\nabc\n", p).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let c = PolarCodeConfig::designed(32, 16, 0.5).unwrap();
        let text = format_frozen_list(&c);
        assert_eq!(parse_frozen_list(&text, p).unwrap(), c.frozen());
    }

    #[test]
    fn transform_matches_subset_oracle_exhaustively_up_to_16() {
        for n in 1..=4u32 {
            let len = 1usize << n;
            for word in 0u32..(1 << len) {
                let u: Vec<u8> = (0..len).map(|i| ((word >> i) & 1) as u8).collect();
                let got = polar_transform(&BitBlock::from_bits(u.clone()).unwrap()).unwrap();
                assert_eq!(got.as_slice(), subset_oracle(&u).as_slice());
            }
        }
    }

    proptest! {
        #[test]
        fn transform_is_an_involution(n in 1u32..=8, seed in any::<u64>()) {
            let len = 1usize << n;
            let u: Vec<u8> = (0..len).map(|i| ((seed.rotate_left(i as u32 * 7) ^ (i as u64 * 0x9e37)) & 1) as u8).collect();
            let u = BitBlock::from_bits(u).unwrap();
            prop_assert_eq!(polar_transform(&polar_transform(&u).unwrap()).unwrap(), u);
        }

        #[test]
        fn encoding_is_linear(a in proptest::collection::vec(0u8..2, 64), b in proptest::collection::vec(0u8..2, 64)) {
            let cfg = PolarCodeConfig::designed(128, 64, 0.5).unwrap();
            let a = BitBlock::from_bits(a).unwrap();
            let b = BitBlock::from_bits(b).unwrap();
            let lhs = polar_encode(&(&a ^ &b), &cfg).unwrap();
            let rhs = &polar_encode(&a, &cfg).unwrap() ^ &polar_encode(&b, &cfg).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn frozen_positions_ignore_message(m in proptest::collection::vec(0u8..2, 16), flip in 0usize..16) {
            let cfg = PolarCodeConfig::designed(32, 16, 0.5).unwrap();
            let m = BitBlock::from_bits(m).unwrap();
            let mut flipped = m.clone().into_vec();
            flipped[flip] ^= 1;
            let a = insert_frozen(&m, &cfg).unwrap();
            let b = insert_frozen(&BitBlock::from_bits(flipped).unwrap(), &cfg).unwrap();
            for &f in cfg.frozen() {
                prop_assert_eq!(a.get(f).unwrap(), 0);
                prop_assert_eq!(b.get(f).unwrap(), 0);
            }
        }

        #[test]
        fn extract_inverts_encode(m in proptest::collection::vec(0u8..2, 128)) {
            let cfg = PolarCodeConfig::designed(256, 128, 0.5).unwrap();
            let m = BitBlock::from_bits(m).unwrap();
            prop_assert_eq!(polar_extract(&polar_encode(&m, &cfg).unwrap(), &cfg).unwrap(), m);
        }
    }
}
