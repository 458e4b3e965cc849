//! End-to-end simulation run: schedule in, waveform files, event log, and a
//! per-anchor decode check out.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::datapath::artifacts::{write_event_log, write_waveforms, ScheduleEntry};
use crate::datapath::{receive_and_decode, SimConfig, SimState};
use crate::error::{Error, Result};

pub const EVENTS_FILE: &str = "events.csv";
pub const VERIFY_FILE: &str = "verify.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStatus {
    /// The last loaded frame was recovered bit-exactly from the waveform.
    Verified,
    /// Decoded cleanly but to a different message.
    Mismatch,
    /// The waveform slice broke the line code.
    Violation,
    /// No request ever reached this anchor.
    Unwritten,
    /// A frame is still waiting in the buffer register.
    Pending,
    /// The run ended before one full frame was emitted.
    Incomplete,
}

impl VerifyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyStatus::Verified => "verified",
            VerifyStatus::Mismatch => "mismatch",
            VerifyStatus::Violation => "violation",
            VerifyStatus::Unwritten => "unwritten",
            VerifyStatus::Pending => "pending",
            VerifyStatus::Incomplete => "incomplete",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorCheck {
    pub anchor: usize,
    pub status: VerifyStatus,
    pub expected_hex: String,
    pub decoded_hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationOutcome {
    pub cycles: u64,
    pub sr_ticks: u64,
    pub checks: Vec<AnchorCheck>,
}

impl SimulationOutcome {
    pub fn count(&self, status: VerifyStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// No anchor failed to decode or decoded wrongly.
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| {
            matches!(c.status, VerifyStatus::Verified | VerifyStatus::Unwritten)
        })
    }
}

/// Long enough for every request to load and each anchor to emit one whole
/// frame after its last load.
pub fn default_cycles(config: &SimConfig, schedule: &[ScheduleEntry]) -> u64 {
    let last_arrival = schedule.iter().map(|e| e.cycle).max().unwrap_or(0);
    let drain = config.latency as u64 * (schedule.len() as u64 + 1);
    let frame = config.frame_len() as u64;
    last_arrival + drain + config.clock.divider() * (2 * frame + 2)
}

pub fn run_simulation(
    config: &SimConfig,
    schedule: &[ScheduleEntry],
    out_dir: &Path,
    cycles: Option<u64>,
) -> Result<SimulationOutcome> {
    if let Some(bad) = schedule.iter().find(|e| e.address >= config.front_ends) {
        return Err(Error::InvalidAddress {
            address: bad.address,
            front_ends: config.front_ends,
        });
    }
    let mut state = SimState::new(config.clone())?;
    for e in schedule {
        state.enqueue(e.address, e.payload, e.cycle)?;
    }
    state.start_recording();
    let cycles = cycles.unwrap_or_else(|| default_cycles(config, schedule));
    state.run_until(cycles);
    let waveforms = state.take_recording().unwrap_or_default();

    let checks = (0..config.front_ends)
        .map(|a| check_anchor(&state, a, &waveforms[a]))
        .collect::<Result<Vec<_>>>()?;

    fs::create_dir_all(out_dir)?;
    write_waveforms(out_dir, &waveforms)?;
    write_event_log(&out_dir.join(EVENTS_FILE), state.events())?;
    fs::write(out_dir.join(VERIFY_FILE), verify_csv(&checks))?;

    Ok(SimulationOutcome {
        cycles: state.cycle(),
        sr_ticks: state.sr_ticks(),
        checks,
    })
}

fn check_anchor(state: &SimState, anchor: usize, wave: &crate::bits::BitBlock) -> Result<AnchorCheck> {
    let config = state.config();
    let fe = state.front_end(anchor)?;
    let check = |status, expected_hex: String, decoded_hex: String| AnchorCheck {
        anchor,
        status,
        expected_hex,
        decoded_hex,
    };
    let Some(payload) = state.loaded_payload(anchor) else {
        return Ok(check(VerifyStatus::Unwritten, String::new(), String::new()));
    };
    let expected = config.message_of(payload);
    let expected_hex = expected.to_hex();
    if fe.is_staged() {
        return Ok(check(VerifyStatus::Pending, expected_hex, String::new()));
    }
    let start = fe.active_since().unwrap_or(0) as usize;
    if start + config.frame_len() > wave.len() {
        return Ok(check(VerifyStatus::Incomplete, expected_hex, String::new()));
    }
    Ok(match receive_and_decode(wave, &config.code, config.scheme, start) {
        Ok(m) if m == expected => check(VerifyStatus::Verified, expected_hex, m.to_hex()),
        Ok(m) => check(VerifyStatus::Mismatch, expected_hex, m.to_hex()),
        Err(Error::LineCodeViolation { .. }) => check(VerifyStatus::Violation, expected_hex, String::new()),
        Err(e) => return Err(e),
    })
}

fn verify_csv(checks: &[AnchorCheck]) -> String {
    let mut s = String::from("anchor,status,expected_hex,decoded_hex\n");
    for c in checks {
        let _ = writeln!(s, "{},{},{},{}", c.anchor, c.status.as_str(), c.expected_hex, c.decoded_hex);
    }
    s
}
