use crate::bits::BitBlock;
use crate::coding::{receive_pipeline, LineCodedFrame, PolarCodeConfig, RllScheme};
use crate::error::{Error, Result};

/// Slices one frame out of a sampled OOK waveform starting at `frame_offset`
/// and recovers the K-bit message. A wrong offset normally surfaces as a
/// line-code violation.
pub fn receive_and_decode(
    waveform: &BitBlock,
    config: &PolarCodeConfig,
    scheme: RllScheme,
    frame_offset: usize,
) -> Result<BitBlock> {
    let frame_len = scheme.frame_len(config.codeword_len());
    if frame_offset + frame_len > waveform.len() {
        return Err(Error::invalid(format!(
            "waveform of {} samples has no complete {frame_len}-bit frame at offset {frame_offset}",
            waveform.len()
        )));
    }
    let frame = LineCodedFrame::new(scheme, waveform.slice(frame_offset, frame_len)?);
    receive_pipeline(&frame, config)
}

/// Message bits per pipeline occupancy interval: `K * fmax / latency`, in bit/s.
pub fn report_throughput(config: &PolarCodeConfig, latency: u32, fmax_hz: f64) -> Result<f64> {
    if latency == 0 {
        return Err(Error::invalid("latency must be at least one cycle"));
    }
    Ok(config.info_len() as f64 * fmax_hz / latency as f64)
}
