//! Scenario runner: sequential baseline versus the centralized datapath for
//! a range of network sizes, with per-size gain rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitBlock;
use crate::coding::{PolarCodeConfig, RllScheme};
use crate::datapath::{ClockConfig, EventKind, SimConfig, SimState, DEFAULT_FRONT_ENDS, DEFAULT_LATENCY};
use crate::error::{Error, Result};
use crate::firmware::{delay_report, sequential_frames, CostMode, CostModel, DelayReport, DelayUnit};

pub const DEFAULT_K_VALUES: [usize; 7] = [1, 3, 5, 10, 20, 50, 100];

/// Reference gains at ML = 128 as (k, vs. Arduino Uno, vs. Raspberry Pi 3).
/// Hardware measurements, printed for comparison only.
pub const REFERENCE_GAINS: [(usize, f64, f64); 7] = [
    (1, 2729.0, 548.0),
    (3, 3969.0, 738.0),
    (5, 4609.0, 966.0),
    (10, 4610.0, 850.0),
    (20, 4465.0, 985.0),
    (50, 4375.0, 802.0),
    (100, 4359.0, 789.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub k_values: Vec<usize>,
    pub code: PolarCodeConfig,
    pub scheme: RllScheme,
    pub clock: ClockConfig,
    pub latency: u32,
    pub front_ends: usize,
    pub cost: CostModel,
    /// sys cycles between consecutive request arrivals; 0 is back-to-back.
    pub gap_cycles: u64,
    pub seed: u64,
}

impl Scenario {
    pub fn new(code: PolarCodeConfig, scheme: RllScheme, cost: CostModel) -> Self {
        Self {
            k_values: DEFAULT_K_VALUES.to_vec(),
            code,
            scheme,
            clock: ClockConfig::default(),
            latency: DEFAULT_LATENCY,
            front_ends: DEFAULT_FRONT_ENDS,
            cost,
            gap_cycles: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() {
            return Err(Error::invalid("scenario needs at least one transmitter count"));
        }
        if self.k_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("transmitter counts must be strictly ascending"));
        }
        if self.k_values[0] == 0 {
            return Err(Error::invalid("transmitter count 0 is not a network"));
        }
        let max = *self.k_values.last().unwrap();
        if max > self.front_ends {
            return Err(Error::invalid(format!(
                "transmitter count {max} exceeds {} front-ends",
                self.front_ends
            )));
        }
        self.cost.validate()?;
        self.sim_config().validate()
    }

    fn sim_config(&self) -> SimConfig {
        SimConfig {
            front_ends: self.front_ends,
            code: self.code.clone(),
            scheme: self.scheme,
            clock: self.clock,
            latency: self.latency,
            fifo_depth: self.front_ends.max(1),
            overlap: false,
        }
    }

    pub fn model_label(&self) -> &'static str {
        match self.cost.mode {
            CostMode::Measured => "measured",
            CostMode::Modeled => "modeled",
        }
    }

    /// Deterministic messages for the largest `k`.
    pub fn messages(&self) -> Vec<BitBlock> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let count = self.k_values.last().copied().unwrap_or(0);
        (0..count)
            .map(|_| BitBlock::random(self.code.info_len(), &mut rng))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralizedRow {
    pub k: usize,
    /// First arrival to last front-end load.
    pub total_cycles: u64,
    /// Largest dequeue-to-load interval seen.
    pub max_update_latency: u64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainRow {
    pub k: usize,
    pub baseline_delay: f64,
    pub centralized_delay: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GainTable {
    pub rows: Vec<GainRow>,
}

impl GainTable {
    pub const CSV_HEADER: &'static str = "k,baseline_delay,centralized_delay,gain";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.k, r.baseline_delay, r.centralized_delay, r.gain);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let source = Path::new("gains.csv");
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let field = |i: usize| -> Result<&str> {
                record
                    .get(i)
                    .ok_or_else(|| Error::parse(source, line, "missing column"))
            };
            let num = |i: usize| -> Result<f64> {
                field(i)?
                    .parse()
                    .map_err(|_| Error::parse(source, line, format!("bad number in column {i}")))
            };
            rows.push(GainRow {
                k: field(0)?
                    .parse()
                    .map_err(|_| Error::parse(source, line, "bad k"))?,
                baseline_delay: num(1)?,
                centralized_delay: num(2)?,
                gain: num(3)?,
            });
        }
        Ok(Self { rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub baseline: DelayReport,
    pub centralized: Vec<CentralizedRow>,
    pub gains: GainTable,
    /// Every front-end register held the same frame the sequential loop produced.
    pub frames_match: bool,
}

/// Runs `k` back-to-back updates through the datapath and returns the
/// timing row and whether every loaded frame matches `expected`.
pub fn run_centralized(
    scenario: &Scenario,
    messages: &[BitBlock],
    expected: &[crate::coding::LineCodedFrame],
) -> Result<(CentralizedRow, bool)> {
    let k = messages.len();
    let mut state = SimState::new(scenario.sim_config())?;
    state.set_log_wraps(false);
    for (i, m) in messages.iter().enumerate() {
        state.enqueue(i, m.to_u128()?, i as u64 * scenario.gap_cycles)?;
    }
    state.run_until_quiescent();

    let mut last_load = 0;
    let mut max_latency = 0;
    let mut dequeued = vec![0u64; k];
    for e in state.events() {
        match (e.kind, e.anchor) {
            (EventKind::Dequeue, Some(a)) => dequeued[a] = e.cycle,
            (EventKind::FeLoad, Some(a)) => {
                last_load = last_load.max(e.cycle);
                max_latency = max_latency.max(e.cycle - dequeued[a]);
            }
            _ => {}
        }
    }
    let frames_match = expected
        .iter()
        .enumerate()
        .all(|(a, f)| state.front_ends()[a].buffer_reg() == Some(f));
    Ok((
        CentralizedRow {
            k,
            total_cycles: last_load,
            max_update_latency: max_latency,
            seconds: scenario.clock.cycles_to_seconds(last_load),
        },
        frames_match,
    ))
}

pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioResult> {
    scenario.validate()?;
    let messages = scenario.messages();
    let baseline = delay_report(
        &scenario.k_values,
        &messages,
        &scenario.code,
        scenario.scheme,
        &scenario.cost,
        scenario.model_label(),
    )?;
    let expected = sequential_frames(&messages, &scenario.code, scenario.scheme)?;

    let mut centralized = Vec::new();
    let mut gains = GainTable::default();
    let mut frames_match = true;
    for row in &baseline.rows {
        let k = row.k;
        let (c, ok) = run_centralized(scenario, &messages[..k], &expected[..k])?;
        frames_match &= ok;
        let baseline_seconds = match baseline.unit {
            DelayUnit::Seconds => row.delay,
            DelayUnit::Units => row.delay * scenario.cost.calibration_scale,
        };
        gains.rows.push(GainRow {
            k,
            baseline_delay: baseline_seconds,
            centralized_delay: c.seconds,
            gain: baseline_seconds / c.seconds,
        });
        centralized.push(c);
    }
    Ok(ScenarioResult {
        baseline,
        centralized,
        gains,
        frames_match,
    })
}

fn manifest(scenario: &Scenario, result: &ScenarioResult) -> String {
    let mut s = String::new();
    let c = &scenario.cost;
    let _ = writeln!(s, "model = {}", scenario.model_label());
    let _ = writeln!(s, "seed = {}", scenario.seed);
    let _ = writeln!(
        s,
        "k_values = {}",
        scenario.k_values.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    );
    let _ = writeln!(s, "ml = {}", scenario.code.info_len());
    let _ = writeln!(s, "cl = {}", scenario.code.codeword_len());
    let _ = writeln!(s, "scheme = {}", scenario.scheme);
    let _ = writeln!(s, "front_ends = {}", scenario.front_ends);
    let _ = writeln!(s, "sys_hz = {}", scenario.clock.sys_hz());
    let _ = writeln!(s, "sr_hz = {}", scenario.clock.sr_hz());
    let _ = writeln!(s, "latency_cycles = {}", scenario.latency);
    let _ = writeln!(s, "gap_cycles = {}", scenario.gap_cycles);
    let _ = writeln!(s, "cost_per_xor = {}", c.cost_per_xor);
    let _ = writeln!(s, "cost_per_table_lookup = {}", c.cost_per_table_lookup);
    let _ = writeln!(s, "cost_per_bit_move = {}", c.cost_per_bit_move);
    let _ = writeln!(s, "calibration_scale = {}", c.calibration_scale);
    let _ = writeln!(s, "warmup = {}", c.warmup);
    let _ = writeln!(s, "repetitions = {}", c.repetitions);
    let _ = writeln!(s, "frames_match = {}", result.frames_match);
    let _ = writeln!(
        s,
        "gain_units = seconds/seconds (centralized cycles / sys_hz; baseline {})",
        match result.baseline.unit {
            DelayUnit::Seconds => "wall clock",
            DelayUnit::Units => "units * calibration_scale",
        }
    );
    let frozen: Vec<String> = scenario.code.frozen().iter().map(|i| i.to_string()).collect();
    let _ = writeln!(s, "frozen = {}", frozen.join(","));
    s
}

/// Writes `delays_<model>.csv`, `delays_centralized.csv`, `gains.csv`, and `manifest.txt`.
pub fn write_artifacts(scenario: &Scenario, result: &ScenarioResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    put(format!("delays_{}.csv", scenario.model_label()), result.baseline.to_csv())?;
    let mut central = String::from("k,delay_seconds\n");
    for r in &result.centralized {
        let _ = writeln!(central, "{},{}", r.k, r.seconds);
    }
    put("delays_centralized.csv".into(), central)?;
    put("gains.csv".into(), result.gains.to_csv())?;
    put("manifest.txt".into(), manifest(scenario, result))?;
    Ok(written)
}
