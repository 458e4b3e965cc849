//! Transmitter-side coding: frozen-bit insertion, the polar butterfly, and
//! the Manchester / 4B6B line codes, plus noiseless inverses.

mod polar;
mod rll;

pub use polar::{
    bhattacharyya_bec, design_frozen_set, format_frozen_list, insert_frozen, parse_frozen_list,
    polar_encode, polar_extract, polar_transform, PolarCodeConfig, DEFAULT_ERASURE_PROB,
};
pub use rll::{
    four_b_six_b_decode, four_b_six_b_encode, four_b_six_b_lookup, manchester_decode,
    manchester_encode, rll_encode, LineCodedFrame, RllScheme, FOUR_B_SIX_B_TABLE,
};

use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Primitive operations executed by one pass of the encoders.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub xors: u64,
    pub table_lookups: u64,
    pub bit_moves: u64,
}

impl std::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.xors += rhs.xors;
        self.table_lookups += rhs.table_lookups;
        self.bit_moves += rhs.bit_moves;
    }
}

fn check_scheme(config: &PolarCodeConfig, scheme: RllScheme) -> Result<()> {
    if scheme == RllScheme::FourBSixB && !config.codeword_len().is_multiple_of(4) {
        return Err(Error::invalid(format!(
            "4B6B needs a codeword length divisible by 4, got {}",
            config.codeword_len()
        )));
    }
    Ok(())
}

/// Polar-encode then line-code one message: the per-transmitter unit of work.
pub fn transmit_pipeline(
    message: &BitBlock,
    config: &PolarCodeConfig,
    scheme: RllScheme,
) -> Result<LineCodedFrame> {
    transmit_pipeline_counted(message, config, scheme).map(|(frame, _)| frame)
}

/// Same as [`transmit_pipeline`], also returning the operations it executed.
pub fn transmit_pipeline_counted(
    message: &BitBlock,
    config: &PolarCodeConfig,
    scheme: RllScheme,
) -> Result<(LineCodedFrame, OpCounts)> {
    check_scheme(config, scheme)?;
    let mut ops = OpCounts::default();
    let codeword = polar::polar_encode_counted(message, config, &mut ops)?;
    let frame = rll::rll_encode_counted(&codeword, scheme, &mut ops)?;
    Ok((frame, ops))
}

/// Line-decode then polar-extract; inverse of [`transmit_pipeline`].
pub fn receive_pipeline(frame: &LineCodedFrame, config: &PolarCodeConfig) -> Result<BitBlock> {
    let expected = frame.scheme().frame_len(config.codeword_len());
    if frame.len() != expected {
        return Err(Error::invalid(format!(
            "{} frame has {} bits, expected {expected}",
            frame.scheme(),
            frame.len()
        )));
    }
    polar_extract(&frame.decode()?, config)
}
