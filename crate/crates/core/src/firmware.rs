//! Sequential central-processor baseline: one processor runs the whole
//! transmitter pipeline once per anchor, in a loop.
//!
//! Delay is either measured (wall clock, median of repetitions after
//! warm-up) or modeled from the encoders' operation counts.

use std::fmt::Write as _;
use std::fs;
use std::hint::black_box;
use std::path::Path;
use std::time::Instant;

use crate::bits::BitBlock;
use crate::coding::{
    transmit_pipeline, transmit_pipeline_counted, LineCodedFrame, OpCounts, PolarCodeConfig,
    RllScheme,
};
use crate::error::{Error, Result};

/// One abstract unit per primitive at 16 MHz.
pub const DEFAULT_SECONDS_PER_UNIT: f64 = 1.0 / 16.0e6;
pub const DEFAULT_WARMUP: usize = 10;
pub const DEFAULT_REPETITIONS: usize = 30;

/// The message/codeword pairs the baseline is evaluated at.
pub const EVALUATED_LENGTHS: [(usize, usize); 4] = [(16, 32), (32, 64), (64, 128), (128, 256)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Measured,
    Modeled,
}

impl std::str::FromStr for CostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "measured" => Ok(CostMode::Measured),
            "modeled" | "modelled" => Ok(CostMode::Modeled),
            other => Err(Error::invalid(format!(
                "unknown cost mode {other:?} (expected measured or modeled)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    pub mode: CostMode,
    pub cost_per_xor: f64,
    pub cost_per_table_lookup: f64,
    pub cost_per_bit_move: f64,
    /// Seconds per abstract unit.
    pub calibration_scale: f64,
    pub warmup: usize,
    pub repetitions: usize,
}

impl CostModel {
    pub fn modeled() -> Self {
        Self {
            mode: CostMode::Modeled,
            cost_per_xor: 1.0,
            cost_per_table_lookup: 1.0,
            cost_per_bit_move: 1.0,
            calibration_scale: DEFAULT_SECONDS_PER_UNIT,
            warmup: DEFAULT_WARMUP,
            repetitions: DEFAULT_REPETITIONS,
        }
    }

    pub fn measured() -> Self {
        Self {
            mode: CostMode::Measured,
            ..Self::modeled()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let costs = [
            self.cost_per_xor,
            self.cost_per_table_lookup,
            self.cost_per_bit_move,
            self.calibration_scale,
        ];
        if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::invalid("unit costs and calibration must be finite and >= 0"));
        }
        if self.mode == CostMode::Measured && self.repetitions == 0 {
            return Err(Error::invalid("measured mode needs at least one repetition"));
        }
        Ok(())
    }

    pub fn units_for(&self, ops: &OpCounts) -> f64 {
        ops.xors as f64 * self.cost_per_xor
            + ops.table_lookups as f64 * self.cost_per_table_lookup
            + ops.bit_moves as f64 * self.cost_per_bit_move
    }

    pub fn unit(&self) -> DelayUnit {
        match self.mode {
            CostMode::Measured => DelayUnit::Seconds,
            CostMode::Modeled => DelayUnit::Units,
        }
    }
}

impl Default for CostModel {
    fn default() -> Self {
        Self::modeled()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayUnit {
    Seconds,
    Units,
}

impl DelayUnit {
    pub fn column(self) -> &'static str {
        match self {
            DelayUnit::Seconds => "delay_seconds",
            DelayUnit::Units => "delay_units",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayRow {
    pub k: usize,
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayReport {
    pub rows: Vec<DelayRow>,
    pub ml: usize,
    pub scheme: RllScheme,
    pub model_label: String,
    pub unit: DelayUnit,
}

impl DelayReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!("k,{}\n", self.unit.column());
        for r in &self.rows {
            let _ = writeln!(s, "{},{}", r.k, r.delay);
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn fit(&self) -> Option<LinearFit> {
        let xs: Vec<f64> = self.rows.iter().map(|r| r.k as f64).collect();
        let ys: Vec<f64> = self.rows.iter().map(|r| r.delay).collect();
        linear_fit(&xs, &ys)
    }
}

/// The frames the sequential loop produces, in order.
pub fn sequential_frames(
    messages: &[BitBlock],
    config: &PolarCodeConfig,
    scheme: RllScheme,
) -> Result<Vec<LineCodedFrame>> {
    messages
        .iter()
        .map(|m| transmit_pipeline(m, config, scheme))
        .collect()
}

/// Runs the pipeline for each of the `k` messages in sequence and returns
/// the delay of the whole loop.
pub fn run_sequential(
    k: usize,
    messages: &[BitBlock],
    config: &PolarCodeConfig,
    scheme: RllScheme,
    cost: &CostModel,
) -> Result<DelayRow> {
    if k == 0 {
        return Err(Error::EmptyReport);
    }
    if messages.len() != k {
        return Err(Error::invalid(format!(
            "expected {k} messages, got {}",
            messages.len()
        )));
    }
    cost.validate()?;
    let delay = match cost.mode {
        CostMode::Modeled => {
            let mut total = 0.0;
            for m in messages {
                let (_, ops) = transmit_pipeline_counted(m, config, scheme)?;
                total += cost.units_for(&ops);
            }
            total
        }
        CostMode::Measured => {
            // Validate once so the timed loop can't fail halfway.
            for m in messages {
                transmit_pipeline(m, config, scheme)?;
            }
            let mut samples = Vec::with_capacity(cost.repetitions);
            for rep in 0..cost.warmup + cost.repetitions {
                let start = Instant::now();
                for m in messages {
                    let frame = transmit_pipeline(black_box(m), black_box(config), scheme);
                    black_box(frame).ok();
                }
                let elapsed = start.elapsed().as_secs_f64();
                if rep >= cost.warmup {
                    samples.push(elapsed);
                }
            }
            median(&mut samples)
        }
    };
    Ok(DelayRow { k, delay })
}

/// One row per `k`, each using the first `k` of `messages`.
pub fn delay_report(
    ks: &[usize],
    messages: &[BitBlock],
    config: &PolarCodeConfig,
    scheme: RllScheme,
    cost: &CostModel,
    model_label: impl Into<String>,
) -> Result<DelayReport> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    let mut rows = Vec::with_capacity(ks.len());
    for &k in &ks {
        let slice = messages.get(..k).ok_or_else(|| {
            Error::invalid(format!("k = {k} exceeds the {} available messages", messages.len()))
        })?;
        rows.push(run_sequential(k, slice, config, scheme, cost)?);
    }
    Ok(DelayReport {
        rows,
        ml: config.info_len(),
        scheme,
        model_label: model_label.into(),
        unit: cost.unit(),
    })
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Ordinary least squares `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Memory estimate for one transmitter's global arrays at one byte per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FootprintReport {
    pub ml: usize,
    pub cl: usize,
    pub scheme: RllScheme,
    pub array_bytes: usize,
    pub overhead_bytes: usize,
    pub total: usize,
}

impl FootprintReport {
    /// Share of a RAM budget, in percent.
    pub fn budget_percent(&self, budget_bytes: usize) -> f64 {
        100.0 * self.total as f64 / budget_bytes as f64
    }

    pub const CSV_HEADER: &'static str = "ml,cl,scheme,array_bytes,overhead,total";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.ml, self.cl, self.scheme, self.array_bytes, self.overhead_bytes, self.total
        )
    }
}

/// Message + frozen map + codeword + line-coded output arrays.
pub fn estimate_footprint(
    ml: usize,
    cl: usize,
    scheme: RllScheme,
    overhead_bytes: usize,
) -> Result<FootprintReport> {
    if !EVALUATED_LENGTHS.contains(&(ml, cl)) {
        return Err(Error::invalid(format!(
            "unsupported (ml, cl) = ({ml}, {cl}); expected one of {EVALUATED_LENGTHS:?}"
        )));
    }
    let array_bytes = ml + cl + cl + scheme.frame_len(cl);
    Ok(FootprintReport {
        ml,
        cl,
        scheme,
        array_bytes,
        overhead_bytes,
        total: array_bytes + overhead_bytes,
    })
}

pub fn footprint_csv(reports: &[FootprintReport]) -> String {
    let mut s = String::from(FootprintReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn messages(k: usize, ml: usize) -> Vec<BitBlock> {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        (0..k).map(|_| BitBlock::random(ml, &mut rng)).collect()
    }

    #[test]
    fn modeled_delay_is_additive() {
        let cfg = PolarCodeConfig::designed(256, 128, 0.5).unwrap();
        let cost = CostModel::modeled();
        let msgs = messages(100, 128);
        let one = run_sequential(1, &msgs[..1], &cfg, RllScheme::Manchester, &cost).unwrap();
        for k in [3, 10, 100] {
            let row = run_sequential(k, &msgs[..k], &cfg, RllScheme::Manchester, &cost).unwrap();
            assert_eq!(row.delay, k as f64 * one.delay);
        }
    }

    #[test]
    fn zero_costs_give_zero_delay() {
        let cfg = PolarCodeConfig::designed(32, 16, 0.5).unwrap();
        let cost = CostModel {
            cost_per_xor: 0.0,
            cost_per_table_lookup: 0.0,
            cost_per_bit_move: 0.0,
            ..CostModel::modeled()
        };
        let row = run_sequential(1, &messages(1, 16), &cfg, RllScheme::FourBSixB, &cost).unwrap();
        assert_eq!(row.delay, 0.0);
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        let cfg = PolarCodeConfig::designed(32, 16, 0.5).unwrap();
        let cost = CostModel::modeled();
        assert!(matches!(
            run_sequential(0, &[], &cfg, RllScheme::Manchester, &cost),
            Err(Error::EmptyReport)
        ));
        assert!(run_sequential(2, &messages(1, 16), &cfg, RllScheme::Manchester, &cost).is_err());
        let bad = CostModel { cost_per_xor: -1.0, ..CostModel::modeled() };
        assert!(run_sequential(1, &messages(1, 16), &cfg, RllScheme::Manchester, &bad).is_err());
    }

    #[test]
    fn report_rows_sorted_and_csv() {
        let cfg = PolarCodeConfig::designed(32, 16, 0.5).unwrap();
        let r = delay_report(&[5, 1, 3], &messages(5, 16), &cfg, RllScheme::Manchester, &CostModel::modeled(), "modeled")
            .unwrap();
        assert_eq!(r.rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert!(r.to_csv().starts_with("k,delay_units\n1,"));
        let fit = r.fit().unwrap();
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-9);
    }

    #[test]
    fn footprint_examples() {
        let man = estimate_footprint(128, 256, RllScheme::Manchester, 0).unwrap();
        assert_eq!(man.array_bytes, 1152);
        let fbsb = estimate_footprint(128, 256, RllScheme::FourBSixB, 0).unwrap();
        assert_eq!(fbsb.array_bytes, 1024);
        assert_eq!(estimate_footprint(16, 32, RllScheme::Manchester, 100).unwrap().total, 16 + 32 + 32 + 64 + 100);
        assert!(estimate_footprint(16, 64, RllScheme::Manchester, 0).is_err());
        assert!((man.budget_percent(2048) - 56.25).abs() < 1e-9);
        assert_eq!(man.csv_row(), "128,256,manchester,1152,0,1152");
    }

    #[test]
    fn fit_of_known_line() {
        let fit = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
        assert!(linear_fit(&[2.0, 2.0], &[1.0, 3.0]).is_none());
    }
}
