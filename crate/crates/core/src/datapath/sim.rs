//! Cycle-level model of the centralized transmitter.
//!
//! Each sys tick runs, in order: request arrivals into the FIFO, pipeline
//! countdown (with de-multiplexed loads into front-end buffer registers),
//! the address pointer's dequeue, the message memory edge, and on every
//! `divider`-th tick an sr edge shifting all PISO registers.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::bits::BitBlock;
use crate::coding::{transmit_pipeline, LineCodedFrame, PolarCodeConfig, RllScheme};
use crate::datapath::clock::ClockConfig;
use crate::datapath::frontend::{FrameBoundary, FrontEnd};
use crate::datapath::memory::MessageMemory;
use crate::datapath::request::{UpdateRequest, MAX_FRONT_ENDS};
use crate::error::{Error, Result};

pub const DEFAULT_FRONT_ENDS: usize = 100;
pub const DEFAULT_LATENCY: u32 = 14;
pub const DEFAULT_FIFO_DEPTH: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub front_ends: usize,
    pub code: PolarCodeConfig,
    pub scheme: RllScheme,
    pub clock: ClockConfig,
    /// sys cycles from dequeue to front-end register load, memory read included.
    pub latency: u32,
    pub fifo_depth: usize,
    /// Accept a new request every cycle instead of waiting for the unit to drain.
    pub overlap: bool,
}

impl SimConfig {
    /// Full-size network (100 anchors, 14-cycle latency) for the given code.
    pub fn new(code: PolarCodeConfig, scheme: RllScheme) -> Self {
        Self {
            front_ends: DEFAULT_FRONT_ENDS,
            code,
            scheme,
            clock: ClockConfig::default(),
            latency: DEFAULT_LATENCY,
            fifo_depth: DEFAULT_FIFO_DEPTH,
            overlap: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.front_ends == 0 || self.front_ends > MAX_FRONT_ENDS {
            return Err(Error::invalid(format!(
                "front-end count {} not in 1..={MAX_FRONT_ENDS}",
                self.front_ends
            )));
        }
        if self.latency < 2 {
            return Err(Error::invalid(format!(
                "latency {} too short: memory read alone takes one cycle",
                self.latency
            )));
        }
        if self.fifo_depth == 0 {
            return Err(Error::invalid("FIFO depth must be at least 1"));
        }
        if self.code.info_len() > 128 {
            return Err(Error::invalid(format!(
                "message length {} exceeds the 128-bit payload",
                self.code.info_len()
            )));
        }
        if self.scheme == RllScheme::FourBSixB && !self.code.codeword_len().is_multiple_of(4) {
            return Err(Error::invalid("4B6B needs a codeword length divisible by 4"));
        }
        Ok(())
    }

    pub fn frame_len(&self) -> usize {
        self.scheme.frame_len(self.code.codeword_len())
    }

    /// The K-bit message carried in the low-order bits of a payload.
    pub fn message_of(&self, payload: u128) -> BitBlock {
        let k = self.code.info_len();
        let masked = if k == 128 { payload } else { payload & ((1u128 << k) - 1) };
        BitBlock::from_u128(masked, k).expect("K <= 128 checked by validate")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    Enqueue,
    Dequeue,
    MemWrite,
    MemRead,
    EncodeStart,
    FeLoad,
    PisoWrap,
    Error,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Enqueue => "enqueue",
            EventKind::Dequeue => "dequeue",
            EventKind::MemWrite => "mem_write",
            EventKind::MemRead => "mem_read",
            EventKind::EncodeStart => "encode_start",
            EventKind::FeLoad => "fe_load",
            EventKind::PisoWrap => "piso_wrap",
            EventKind::Error => "error",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub cycle: u64,
    pub kind: EventKind,
    pub anchor: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Job {
    address: usize,
    remaining: u32,
    dequeued_at: u64,
    read_pending: bool,
    frame: Option<(LineCodedFrame, u128)>,
}

/// The encode unit. In blocking mode at most one request is in flight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmitterUnit {
    latency: u32,
    overlap: bool,
    jobs: VecDeque<Job>,
}

impl TransmitterUnit {
    fn new(latency: u32, overlap: bool) -> Self {
        Self {
            latency,
            overlap,
            jobs: VecDeque::new(),
        }
    }

    pub fn latency(&self) -> u32 {
        self.latency
    }

    pub fn busy(&self) -> bool {
        !self.jobs.is_empty()
    }

    /// Cycles until the oldest in-flight request loads; 0 when idle.
    pub fn pipeline_counter(&self) -> u32 {
        self.jobs.front().map_or(0, |j| j.remaining)
    }

    pub fn in_flight(&self) -> usize {
        self.jobs.len()
    }

    fn can_accept(&self) -> bool {
        self.overlap || self.jobs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimStats {
    pub accepted: u64,
    pub dropped: u64,
    pub rejected: u64,
    pub mem_writes: u64,
    pub fe_loads: u64,
}

#[derive(Debug, Clone)]
pub struct SimState {
    config: SimConfig,
    cycle: u64,
    sr_ticks: u64,
    arrivals: BTreeMap<u64, Vec<UpdateRequest>>,
    fifo: VecDeque<UpdateRequest>,
    memory: MessageMemory,
    tx: TransmitterUnit,
    front_ends: Vec<FrontEnd>,
    loaded_payloads: Vec<Option<u128>>,
    events: Vec<Event>,
    log_wraps: bool,
    recording: Option<Vec<Vec<u8>>>,
    stats: SimStats,
}

impl SimState {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            cycle: 0,
            sr_ticks: 0,
            arrivals: BTreeMap::new(),
            fifo: VecDeque::new(),
            memory: MessageMemory::new(config.front_ends),
            tx: TransmitterUnit::new(config.latency, config.overlap),
            front_ends: (0..config.front_ends).map(FrontEnd::new).collect(),
            loaded_payloads: vec![None; config.front_ends],
            events: Vec::new(),
            log_wraps: true,
            recording: None,
            stats: SimStats::default(),
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Index of the next sys tick to execute.
    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn sr_ticks(&self) -> u64 {
        self.sr_ticks
    }

    pub fn fifo_len(&self) -> usize {
        self.fifo.len()
    }

    pub fn memory(&self) -> &MessageMemory {
        &self.memory
    }

    pub fn transmitter(&self) -> &TransmitterUnit {
        &self.tx
    }

    pub fn front_ends(&self) -> &[FrontEnd] {
        &self.front_ends
    }

    pub fn front_end(&self, anchor: usize) -> Result<&FrontEnd> {
        self.front_ends.get(anchor).ok_or(Error::InvalidAddress {
            address: anchor,
            front_ends: self.config.front_ends,
        })
    }

    /// Payload whose frame was most recently de-multiplexed to `anchor`.
    pub fn loaded_payload(&self, anchor: usize) -> Option<u128> {
        self.loaded_payloads.get(anchor).copied().flatten()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn stats(&self) -> SimStats {
        self.stats
    }

    /// Turn per-frame `piso_wrap` records on or off (on by default).
    pub fn set_log_wraps(&mut self, on: bool) {
        self.log_wraps = on;
    }

    /// Record every anchor's output line from the next sr edge onwards.
    pub fn start_recording(&mut self) {
        self.recording = Some(vec![Vec::new(); self.config.front_ends]);
    }

    pub fn take_recording(&mut self) -> Option<Vec<BitBlock>> {
        self.recording
            .take()
            .map(|r| r.into_iter().map(BitBlock::from_bits_unchecked).collect())
    }

    fn log(&mut self, kind: EventKind, anchor: Option<usize>, detail: impl Into<String>) {
        self.events.push(Event {
            cycle: self.cycle,
            kind,
            anchor,
            detail: detail.into(),
        });
    }

    /// Schedules `req` to enter the FIFO at the start of sys tick `at_cycle`.
    pub fn enqueue_request(&mut self, req: UpdateRequest, at_cycle: u64) -> Result<()> {
        if at_cycle < self.cycle {
            return Err(Error::invalid(format!(
                "cannot enqueue at cycle {at_cycle}: simulation is at cycle {}",
                self.cycle
            )));
        }
        if req.address() >= self.config.front_ends {
            self.stats.rejected += 1;
            self.log(
                EventKind::Error,
                Some(req.address()),
                format!("invalid_address front_ends={}", self.config.front_ends),
            );
            return Err(Error::InvalidAddress {
                address: req.address(),
                front_ends: self.config.front_ends,
            });
        }
        self.arrivals.entry(at_cycle).or_default().push(req);
        Ok(())
    }

    /// Convenience wrapper building the request from an address and payload.
    pub fn enqueue(&mut self, address: usize, payload: u128, at_cycle: u64) -> Result<()> {
        let req = UpdateRequest::new(address, payload).map_err(|_| Error::InvalidAddress {
            address,
            front_ends: self.config.front_ends,
        })?;
        self.enqueue_request(req, at_cycle)
    }

    /// Executes one sys tick and returns `true` if it was an sr edge.
    pub fn step_sys(&mut self) -> bool {
        self.admit_arrivals();
        self.advance_pipeline();
        let port_a = self.address_pointer();
        self.memory_edge(port_a);
        let edge = self.config.clock.is_sr_edge(self.cycle);
        if edge {
            self.shift_registers();
        }
        self.cycle += 1;
        edge
    }

    fn admit_arrivals(&mut self) {
        let Some(batch) = self.arrivals.remove(&self.cycle) else {
            return;
        };
        for req in batch {
            if self.fifo.len() >= self.config.fifo_depth {
                self.stats.dropped += 1;
                self.log(
                    EventKind::Error,
                    Some(req.address()),
                    format!("fifo_full depth={}", self.config.fifo_depth),
                );
            } else {
                self.stats.accepted += 1;
                self.fifo.push_back(req);
                self.log(EventKind::Enqueue, Some(req.address()), format!("payload={:032x}", req.payload));
            }
        }
    }

    fn advance_pipeline(&mut self) {
        for job in self.tx.jobs.iter_mut() {
            job.remaining -= 1;
        }
        while self.tx.jobs.front().is_some_and(|j| j.remaining == 0) {
            let job = self.tx.jobs.pop_front().expect("front checked");
            let waited = self.cycle - job.dequeued_at;
            match job.frame {
                Some((frame, payload)) => {
                    self.front_ends[job.address].load_buffer(frame);
                    self.loaded_payloads[job.address] = Some(payload);
                    self.stats.fe_loads += 1;
                    self.log(EventKind::FeLoad, Some(job.address), format!("latency={waited}"));
                }
                None => self.log(EventKind::Error, Some(job.address), "encode_failed"),
            }
        }
    }

    fn address_pointer(&mut self) -> Option<(usize, u128)> {
        if !self.tx.can_accept() {
            return None;
        }
        let req = self.fifo.pop_front()?;
        let addr = req.address();
        self.tx.jobs.push_back(Job {
            address: addr,
            remaining: self.tx.latency,
            dequeued_at: self.cycle,
            read_pending: true,
            frame: None,
        });
        self.log(EventKind::Dequeue, Some(addr), format!("fifo_remaining={}", self.fifo.len()));
        if req.write_flag {
            self.stats.mem_writes += 1;
            self.log(EventKind::MemWrite, Some(addr), "port=a");
            Some((addr, req.payload))
        } else {
            None
        }
    }

    fn memory_edge(&mut self, port_a: Option<(usize, u128)>) {
        let cycle = self.cycle;
        let reader = self
            .tx
            .jobs
            .iter()
            .position(|j| j.read_pending && j.dequeued_at < cycle);
        let port_b = reader.map(|i| self.tx.jobs[i].address);
        let data = self
            .memory
            .clock(port_a, port_b)
            .expect("addresses validated on enqueue");
        let (Some(i), Some(payload)) = (reader, data) else {
            return;
        };
        let addr = self.tx.jobs[i].address;
        let message = self.config.message_of(payload);
        let encoded = transmit_pipeline(&message, &self.config.code, self.config.scheme);
        self.log(EventKind::MemRead, Some(addr), "port=b");
        let job = &mut self.tx.jobs[i];
        job.read_pending = false;
        match encoded {
            Ok(frame) => {
                job.frame = Some((frame, payload));
                self.log(EventKind::EncodeStart, Some(addr), format!("k={}", message.len()));
            }
            Err(e) => self.log(EventKind::Error, Some(addr), format!("encode: {e}")),
        }
    }

    fn shift_registers(&mut self) {
        for id in 0..self.front_ends.len() {
            let boundary = self.front_ends[id].sr_edge(self.sr_ticks);
            if let Some(rec) = self.recording.as_mut() {
                rec[id].push(self.front_ends[id].output_line());
            }
            if self.log_wraps {
                match boundary {
                    Some(FrameBoundary::Loaded) => self.log(
                        EventKind::PisoWrap,
                        Some(id),
                        format!("load sr_tick={}", self.sr_ticks),
                    ),
                    Some(FrameBoundary::Repeat) => self.log(
                        EventKind::PisoWrap,
                        Some(id),
                        format!("repeat sr_tick={}", self.sr_ticks),
                    ),
                    None => {}
                }
            }
        }
        self.sr_ticks += 1;
    }

    /// Steps until `cycle()` equals `target`; a target in the past is a no-op.
    pub fn run_until(&mut self, target: u64) {
        while self.cycle < target {
            self.step_sys();
        }
    }

    /// True when nothing is pending, queued, or in flight.
    pub fn is_quiescent(&self) -> bool {
        self.arrivals.is_empty() && self.fifo.is_empty() && !self.tx.busy()
    }

    /// Runs until every scheduled request has been loaded into its buffer register.
    pub fn run_until_quiescent(&mut self) {
        while !self.is_quiescent() {
            self.step_sys();
        }
    }

    /// Advances `sr_ticks` sr periods, returning every anchor's output line
    /// sampled once per sr edge.
    pub fn sample_all(&mut self, sr_ticks: usize) -> Vec<BitBlock> {
        let mut out = vec![Vec::with_capacity(sr_ticks); self.front_ends.len()];
        let mut taken = 0;
        while taken < sr_ticks {
            if self.step_sys() {
                for (wave, fe) in out.iter_mut().zip(&self.front_ends) {
                    wave.push(fe.output_line());
                }
                taken += 1;
            }
        }
        out.into_iter().map(BitBlock::from_bits_unchecked).collect()
    }

    /// Advances `sr_ticks` sr periods, returning one anchor's OOK samples.
    pub fn sample_waveform(&mut self, anchor: usize, sr_ticks: usize) -> Result<BitBlock> {
        self.front_end(anchor)?;
        let mut wave = Vec::with_capacity(sr_ticks);
        while wave.len() < sr_ticks {
            if self.step_sys() {
                wave.push(self.front_ends[anchor].output_line());
            }
        }
        Ok(BitBlock::from_bits_unchecked(wave))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::receive_pipeline;

    fn small_config(scheme: RllScheme) -> SimConfig {
        let mut cfg = SimConfig::new(PolarCodeConfig::designed(32, 16, 0.5).unwrap(), scheme);
        cfg.front_ends = 8;
        cfg.clock = ClockConfig::new(100, 10).unwrap();
        cfg
    }

    fn loads(state: &SimState) -> Vec<(u64, usize)> {
        state
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::FeLoad)
            .map(|e| (e.cycle, e.anchor.unwrap()))
            .collect()
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_config(RllScheme::Manchester);
        cfg.front_ends = 129;
        assert!(SimState::new(cfg.clone()).is_err());
        cfg.front_ends = 4;
        cfg.latency = 1;
        assert!(SimState::new(cfg.clone()).is_err());
        cfg.latency = 14;
        cfg.fifo_depth = 0;
        assert!(SimState::new(cfg).is_err());
    }

    #[test]
    fn first_load_after_fourteen_cycles() {
        let mut s = SimState::new(small_config(RllScheme::Manchester)).unwrap();
        s.enqueue(2, 0xbeef, 0).unwrap();
        s.run_until(14);
        assert!(loads(&s).is_empty());
        assert!(s.transmitter().busy());
        assert_eq!(s.transmitter().pipeline_counter(), 1);
        s.step_sys();
        assert_eq!(loads(&s), vec![(14, 2)]);
        assert!(!s.transmitter().busy());
        assert_eq!(s.loaded_payload(2), Some(0xbeef));
    }

    #[test]
    fn back_to_back_requests_serialize() {
        let mut s = SimState::new(small_config(RllScheme::FourBSixB)).unwrap();
        for a in 0..5 {
            s.enqueue(a, a as u128 + 1, 0).unwrap();
        }
        s.run_until_quiescent();
        let got = loads(&s);
        assert_eq!(got, (0..5).map(|i| (14 * (i as u64 + 1), i)).collect::<Vec<_>>());
    }

    #[test]
    fn overlap_mode_pipelines() {
        let mut cfg = small_config(RllScheme::Manchester);
        cfg.overlap = true;
        let mut s = SimState::new(cfg).unwrap();
        for a in 0..3 {
            s.enqueue(a, 1, 0).unwrap();
        }
        s.run_until_quiescent();
        assert_eq!(loads(&s), vec![(14, 0), (15, 1), (16, 2)]);
    }

    #[test]
    fn overlap_same_address_keeps_each_payload() {
        // The second write lands on the cycle the first read executes; the
        // read still returns the first payload.
        let mut cfg = small_config(RllScheme::Manchester);
        cfg.overlap = true;
        let mut s = SimState::new(cfg.clone()).unwrap();
        s.enqueue(1, 0x1111, 0).unwrap();
        s.enqueue(1, 0x2222, 0).unwrap();
        s.run_until(15);
        let first = transmit_pipeline(&cfg.message_of(0x1111), &cfg.code, cfg.scheme).unwrap();
        assert_eq!(s.front_end(1).unwrap().buffer_reg(), Some(&first));
        s.run_until_quiescent();
        assert_eq!(s.memory().peek(1), Some(0x2222));
        assert_eq!(s.loaded_payload(1), Some(0x2222));
    }

    #[test]
    fn invalid_address_rejected() {
        let mut s = SimState::new(small_config(RllScheme::Manchester)).unwrap();
        assert!(matches!(
            s.enqueue(8, 0, 0),
            Err(Error::InvalidAddress { address: 8, front_ends: 8 })
        ));
        assert_eq!(s.events().last().unwrap().kind, EventKind::Error);
        assert!(s.enqueue(0, 0, 0).is_ok());
        s.run_until(3);
        assert!(s.enqueue(0, 0, 2).is_err());
    }

    #[test]
    fn fifo_overflow_is_reported() {
        let mut cfg = small_config(RllScheme::Manchester);
        cfg.fifo_depth = 2;
        let mut s = SimState::new(cfg).unwrap();
        for _ in 0..4 {
            s.enqueue(0, 1, 0).unwrap();
        }
        s.run_until_quiescent();
        assert_eq!(s.stats().dropped, 2);
        assert_eq!(s.stats().accepted, 2);
        assert_eq!(s.stats().fe_loads, 2);
        let errors = s.events().iter().filter(|e| e.kind == EventKind::Error).count();
        assert_eq!(errors, 2);
    }

    #[test]
    fn sampled_frame_decodes() {
        let cfg = small_config(RllScheme::Manchester);
        let mut s = SimState::new(cfg.clone()).unwrap();
        s.enqueue(5, 0xa5a5, 0).unwrap();
        s.run_until_quiescent();
        let offset = s.front_end(5).unwrap().next_frame_offset().unwrap();
        let wave = s.sample_waveform(5, offset + cfg.frame_len()).unwrap();
        let frame = LineCodedFrame::new(cfg.scheme, wave.slice(offset, cfg.frame_len()).unwrap());
        assert_eq!(receive_pipeline(&frame, &cfg.code).unwrap(), cfg.message_of(0xa5a5));
        assert_eq!(s.sample_waveform(0, 10).unwrap(), BitBlock::zeros(10));
        assert!(s.sample_waveform(8, 1).is_err());
    }

    #[test]
    fn message_uses_low_order_bits() {
        let cfg = small_config(RllScheme::Manchester);
        let m = cfg.message_of(0xffff_0000_0000_0000_0000_0000_0001_8001);
        assert_eq!(m.to_hex(), "8001");
    }
}
