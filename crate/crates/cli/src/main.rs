use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vlc_beacon::bench::{run_scenario, write_artifacts, Scenario, REFERENCE_GAINS};
use vlc_beacon::coding::{
    format_frozen_list, receive_pipeline, transmit_pipeline, LineCodedFrame, PolarCodeConfig,
    RllScheme, DEFAULT_ERASURE_PROB,
};
use vlc_beacon::config::NetworkConfig;
use vlc_beacon::datapath::{artifacts, ClockConfig};
use vlc_beacon::firmware::{estimate_footprint, footprint_csv, CostModel, EVALUATED_LENGTHS};
use vlc_beacon::simulate::{run_simulation, VerifyStatus};
use vlc_beacon::{BitBlock, Error};

#[derive(Parser)]
#[command(name = "vlc-beacon", version, about = "Centralized VLC beacon transmitter toolkit")]
struct Cli {
    /// Seed for generated messages.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for written artifacts.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polar + RLL encode one message.
    Encode(EncodeArgs),
    /// Recover a message from a line-coded frame.
    Decode(DecodeArgs),
    /// Print a designed frozen-position list.
    Frozen(FrozenArgs),
    /// Run the datapath simulator on a config and request schedule.
    Simulate(SimulateArgs),
    /// Sequential baseline versus centralized datapath over transmitter counts.
    Bench(BenchArgs),
    /// Estimate global-array memory of the sequential transmitter.
    Footprint(FootprintArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Rll {
    Manchester,
    #[value(name = "4b6b")]
    FourBSixB,
}

impl From<Rll> for RllScheme {
    fn from(r: Rll) -> Self {
        match r {
            Rll::Manchester => RllScheme::Manchester,
            Rll::FourBSixB => RllScheme::FourBSixB,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BitFormat {
    Bits,
    Hex,
}

#[derive(Args)]
struct CodeArgs {
    /// Message length K.
    #[arg(long, default_value_t = 128)]
    ml: usize,
    /// Codeword length N (default 2 * ml).
    #[arg(long)]
    cl: Option<usize>,
    #[arg(long, value_enum, default_value_t = Rll::Manchester)]
    rll: Rll,
    /// Erasure probability for the frozen-set design.
    #[arg(long, default_value_t = DEFAULT_ERASURE_PROB, conflicts_with = "frozen_file")]
    erasure: f64,
    /// Explicit frozen-position list instead of the designed one.
    #[arg(long)]
    frozen_file: Option<PathBuf>,
}

impl CodeArgs {
    fn code(&self) -> Result<PolarCodeConfig, Error> {
        let cl = self.cl.unwrap_or(2 * self.ml);
        let code = match &self.frozen_file {
            Some(path) => PolarCodeConfig::from_frozen_file(path, cl)?,
            None => PolarCodeConfig::designed(cl, self.ml, self.erasure)?,
        };
        if code.info_len() != self.ml {
            return Err(Error::InvalidParameters(format!(
                "frozen list leaves K = {}, but --ml is {}",
                code.info_len(),
                self.ml
            )));
        }
        Ok(code)
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, conflicts_with = "message_bits", required_unless_present = "message_bits")]
    message_hex: Option<String>,
    #[arg(long)]
    message_bits: Option<String>,
    /// Output format of the frame.
    #[arg(long, value_enum, default_value_t = BitFormat::Bits)]
    format: BitFormat,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, conflicts_with = "frame_bits", required_unless_present = "frame_bits")]
    frame_hex: Option<String>,
    #[arg(long)]
    frame_bits: Option<String>,
    /// Output format of the message.
    #[arg(long, value_enum, default_value_t = BitFormat::Hex)]
    format: BitFormat,
}

#[derive(Args)]
struct FrozenArgs {
    #[arg(long, default_value_t = 128)]
    ml: usize,
    #[arg(long)]
    cl: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ERASURE_PROB)]
    erasure: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    /// sys cycles to run (default: long enough for every anchor to emit a full frame).
    #[arg(long)]
    cycles: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Modeled,
    Measured,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Mode::Modeled)]
    mode: Mode,
    /// Transmitter counts, ascending.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 3, 5, 10, 20, 50, 100])]
    k: Vec<usize>,
    #[arg(long, default_value_t = 128)]
    ml: usize,
    #[arg(long, value_enum, default_value_t = Rll::Manchester)]
    rll: Rll,
    #[arg(long, default_value_t = 100)]
    front_ends: usize,
    #[arg(long, default_value_t = 14)]
    latency: u32,
    #[arg(long, default_value_t = 50_000_000)]
    sys_hz: u64,
    #[arg(long, default_value_t = 100_000)]
    sr_hz: u64,
    /// sys cycles between request arrivals.
    #[arg(long, default_value_t = 0)]
    gap: u64,
    #[arg(long, default_value_t = 10)]
    warmup: usize,
    #[arg(long, default_value_t = 30)]
    repetitions: usize,
    /// Seconds per modeled cost unit.
    #[arg(long)]
    calibration: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    cost_xor: f64,
    #[arg(long, default_value_t = 1.0)]
    cost_lookup: f64,
    #[arg(long, default_value_t = 1.0)]
    cost_move: f64,
}

#[derive(Args)]
struct FootprintArgs {
    /// Message length; all evaluated lengths when omitted.
    #[arg(long)]
    ml: Option<usize>,
    /// Line code; both when omitted.
    #[arg(long, value_enum)]
    rll: Option<Rll>,
    #[arg(long, default_value_t = 0)]
    overhead: usize,
    /// RAM budget for the percentage column.
    #[arg(long, default_value_t = 2048)]
    budget: usize,
}

fn read_bits(hex: Option<&str>, bits: Option<&str>, len: Option<usize>) -> Result<BitBlock, Error> {
    match (hex, bits) {
        (Some(h), _) => match len {
            Some(l) => BitBlock::from_hex_len(h, l),
            None => BitBlock::from_hex(h),
        },
        (None, Some(b)) => BitBlock::from_bit_str(b),
        (None, None) => Err(Error::InvalidParameters("no input given".into())),
    }
}

fn render(bits: &BitBlock, format: BitFormat) -> String {
    match format {
        BitFormat::Bits => bits.to_bit_string(),
        BitFormat::Hex => bits.to_hex(),
    }
}

fn cmd_encode(args: &EncodeArgs) -> Result<(), Error> {
    let code = args.code.code()?;
    let message = read_bits(
        args.message_hex.as_deref(),
        args.message_bits.as_deref(),
        Some(code.info_len()),
    )?;
    let frame = transmit_pipeline(&message, &code, args.code.rll.into())?;
    println!("{}", render(frame.bits(), args.format));
    Ok(())
}

fn cmd_decode(args: &DecodeArgs) -> Result<(), Error> {
    let code = args.code.code()?;
    let scheme: RllScheme = args.code.rll.into();
    let expected = scheme.frame_len(code.codeword_len());
    let bits = read_bits(args.frame_hex.as_deref(), args.frame_bits.as_deref(), Some(expected))?;
    let message = receive_pipeline(&LineCodedFrame::new(scheme, bits), &code)?;
    println!("{}", render(&message, args.format));
    Ok(())
}

fn cmd_frozen(args: &FrozenArgs, out_dir: Option<&Path>) -> Result<(), Error> {
    let cl = args.cl.unwrap_or(2 * args.ml);
    let code = PolarCodeConfig::designed(cl, args.ml, args.erasure)?;
    let text = format_frozen_list(&code);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("frozen_{cl}_{}.txt", args.ml));
        fs::write(&path, &text)?;
        eprintln!("wrote {}", path.display());
    }
    print!("{text}");
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, out_dir: Option<&Path>) -> Result<(), Error> {
    let config = NetworkConfig::load(&args.config)?.to_sim_config()?;
    let schedule = artifacts::read_schedule(&args.schedule)?;
    let out_dir = out_dir.unwrap_or(Path::new("sim_out"));
    let outcome = run_simulation(&config, &schedule, out_dir, args.cycles)?;
    println!(
        "simulated {} sys cycles ({} sr ticks); {} anchors: {} verified, {} unwritten, {} pending, {} incomplete, {} mismatch, {} violation",
        outcome.cycles,
        outcome.sr_ticks,
        outcome.checks.len(),
        outcome.count(VerifyStatus::Verified),
        outcome.count(VerifyStatus::Unwritten),
        outcome.count(VerifyStatus::Pending),
        outcome.count(VerifyStatus::Incomplete),
        outcome.count(VerifyStatus::Mismatch),
        outcome.count(VerifyStatus::Violation),
    );
    println!("artifacts in {}", out_dir.display());
    Ok(())
}

fn cmd_bench(args: &BenchArgs, seed: u64, out_dir: Option<&Path>) -> Result<(), Error> {
    let code = PolarCodeConfig::designed(2 * args.ml, args.ml, DEFAULT_ERASURE_PROB)?;
    let base = match args.mode {
        Mode::Modeled => CostModel::modeled(),
        Mode::Measured => CostModel::measured(),
    };
    let cost = CostModel {
        cost_per_xor: args.cost_xor,
        cost_per_table_lookup: args.cost_lookup,
        cost_per_bit_move: args.cost_move,
        calibration_scale: args.calibration.unwrap_or(base.calibration_scale),
        warmup: args.warmup,
        repetitions: args.repetitions,
        ..base
    };
    let mut scenario = Scenario::new(code, args.rll.into(), cost);
    scenario.k_values = args.k.clone();
    scenario.front_ends = args.front_ends;
    scenario.latency = args.latency;
    scenario.clock = ClockConfig::new(args.sys_hz, args.sr_hz)?;
    scenario.gap_cycles = args.gap;
    scenario.seed = seed;

    let result = run_scenario(&scenario)?;
    let out_dir = out_dir.unwrap_or(Path::new("bench_out"));
    write_artifacts(&scenario, &result, out_dir)?;

    println!("{:>5} {:>16} {:>16} {:>10}   reference gain (Arduino / Raspberry)", "k", "baseline_s", "centralized_s", "gain");
    for row in &result.gains.rows {
        let reference = REFERENCE_GAINS
            .iter()
            .find(|g| g.0 == row.k)
            .map(|g| format!("{} / {}", g.1, g.2))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>5} {:>16.6e} {:>16.6e} {:>10.1}   {reference}",
            row.k, row.baseline_delay, row.centralized_delay, row.gain
        );
    }
    if !result.frames_match {
        eprintln!("warning: datapath frames differ from the sequential baseline");
    }
    println!("artifacts in {}", out_dir.display());
    Ok(())
}

fn cmd_footprint(args: &FootprintArgs, out_dir: Option<&Path>) -> Result<(), Error> {
    let lengths: Vec<(usize, usize)> = match args.ml {
        Some(ml) => vec![(ml, 2 * ml)],
        None => EVALUATED_LENGTHS.to_vec(),
    };
    let schemes: Vec<RllScheme> = match args.rll {
        Some(r) => vec![r.into()],
        None => RllScheme::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for (ml, cl) in lengths {
        for &scheme in &schemes {
            reports.push(estimate_footprint(ml, cl, scheme, args.overhead)?);
        }
    }
    let csv = footprint_csv(&reports);
    print!("{csv}");
    for r in &reports {
        eprintln!(
            "ml={} cl={} {}: {} bytes = {:.1}% of {} bytes",
            r.ml,
            r.cl,
            r.scheme,
            r.total,
            r.budget_percent(args.budget),
            args.budget
        );
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("footprint.csv"), csv)?;
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::LineCodeViolation { .. } => 3,
        Error::InvalidAddress { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.as_deref();
    let result = match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Frozen(a) => cmd_frozen(a, out_dir),
        Command::Simulate(a) => cmd_simulate(a, out_dir),
        Command::Bench(a) => cmd_bench(a, cli.seed, out_dir),
        Command::Footprint(a) => cmd_footprint(a, out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
