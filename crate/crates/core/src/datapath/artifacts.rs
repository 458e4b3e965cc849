//! On-disk formats of the simulator: waveform dumps, the event log, and
//! request schedules.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::bits::BitBlock;
use crate::datapath::sim::Event;
use crate::error::{Error, Result};

pub fn waveform_file_name(anchor: usize) -> String {
    format!("fe_{anchor}.bits")
}

/// Writes `fe_<id>.bits` for every anchor: one `0`/`1` per sr tick and a trailing newline.
pub fn write_waveforms(dir: &Path, waveforms: &[BitBlock]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    waveforms
        .iter()
        .enumerate()
        .map(|(id, wave)| {
            let path = dir.join(waveform_file_name(id));
            let mut text = wave.to_bit_string();
            text.push('\n');
            fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}

pub fn read_waveform(path: &Path) -> Result<BitBlock> {
    BitBlock::from_bit_str(&fs::read_to_string(path)?)
}

pub fn write_event_log(path: &Path, events: &[Event]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["cycle", "event", "anchor", "detail"])?;
    for e in events {
        let anchor = e.anchor.map(|a| a.to_string()).unwrap_or_default();
        w.write_record([e.cycle.to_string().as_str(), e.kind.as_str(), &anchor, &e.detail])?;
    }
    w.flush()?;
    Ok(())
}

/// One row of a request schedule file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub cycle: u64,
    pub address: usize,
    pub payload: u128,
}

pub const PAYLOAD_HEX_CHARS: usize = 32;

/// Reads `cycle,address,payload_hex` rows (header required, payload exactly
/// 32 hex characters). Address range is checked later against the network.
pub fn read_schedule(path: &Path) -> Result<Vec<ScheduleEntry>> {
    let text = fs::read_to_string(path)?;
    parse_schedule(&text, path)
}

pub fn parse_schedule(text: &str, source: &Path) -> Result<Vec<ScheduleEntry>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let expected = ["cycle", "address", "payload_hex"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::parse(source, 1, "expected header cycle,address,payload_hex"));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::parse(source, line, format!("expected 3 fields, got {}", record.len())));
        }
        let cycle = record[0]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("bad cycle {:?}", &record[0])))?;
        let address = record[1]
            .parse()
            .map_err(|_| Error::parse(source, line, format!("bad address {:?}", &record[1])))?;
        let hex = &record[2];
        if hex.len() != PAYLOAD_HEX_CHARS {
            return Err(Error::parse(
                source,
                line,
                format!("payload must be {PAYLOAD_HEX_CHARS} hex characters, got {}", hex.len()),
            ));
        }
        let payload = u128::from_str_radix(hex, 16)
            .map_err(|_| Error::parse(source, line, format!("bad payload hex {hex:?}")))?;
        out.push(ScheduleEntry { cycle, address, payload });
    }
    Ok(out)
}

pub fn write_schedule(path: &Path, entries: &[ScheduleEntry]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "cycle,address,payload_hex")?;
    for e in entries {
        writeln!(f, "{},{},{:032x}", e.cycle, e.address, e.payload)?;
    }
    f.flush()?;
    Ok(())
}
