//! Network configuration file: flat `key = value` lines, `#` comments.
//!
//! ```text
//! front_ends = 100
//! ml = 128
//! cl = 256
//! rll = manchester
//! sys_hz = 50000000
//! sr_hz = 100000
//! latency_cycles = 14
//! fifo_depth = 128
//! frozen = bec:0.5        # or file:frozen_256.txt
//! overlap = false
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::coding::{PolarCodeConfig, RllScheme, DEFAULT_ERASURE_PROB};
use crate::datapath::{
    ClockConfig, SimConfig, DEFAULT_FIFO_DEPTH, DEFAULT_FRONT_ENDS, DEFAULT_LATENCY, DEFAULT_SR_HZ,
    DEFAULT_SYS_HZ, MAX_FRONT_ENDS,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FrozenSource {
    Bec(f64),
    File(PathBuf),
}

impl FrozenSource {
    pub fn build(&self, ml: usize, cl: usize) -> Result<PolarCodeConfig> {
        let code = match self {
            FrozenSource::Bec(p) => PolarCodeConfig::designed(cl, ml, *p)?,
            FrozenSource::File(path) => PolarCodeConfig::from_frozen_file(path, cl)?,
        };
        if code.info_len() != ml {
            return Err(Error::invalid(format!(
                "frozen set leaves K = {} information bits, expected ml = {ml}",
                code.info_len()
            )));
        }
        Ok(code)
    }
}

impl FromStr for FrozenSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "bec" {
            return Ok(FrozenSource::Bec(DEFAULT_ERASURE_PROB));
        }
        if let Some(p) = s.strip_prefix("bec:") {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad erasure probability {p:?}")))?;
            return Ok(FrozenSource::Bec(p));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(FrozenSource::File(PathBuf::from(path.trim())));
        }
        Err(Error::invalid(format!(
            "frozen source {s:?} must be bec, bec:<p>, or file:<path>"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub front_ends: usize,
    pub ml: usize,
    pub cl: usize,
    pub scheme: RllScheme,
    pub sys_hz: u64,
    pub sr_hz: u64,
    pub latency_cycles: u32,
    pub fifo_depth: usize,
    pub frozen_source: FrozenSource,
    pub overlap: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            front_ends: DEFAULT_FRONT_ENDS,
            ml: 128,
            cl: 256,
            scheme: RllScheme::Manchester,
            sys_hz: DEFAULT_SYS_HZ,
            sr_hz: DEFAULT_SR_HZ,
            latency_cycles: DEFAULT_LATENCY,
            fifo_depth: DEFAULT_FIFO_DEPTH,
            frozen_source: FrozenSource::Bec(DEFAULT_ERASURE_PROB),
            overlap: false,
        }
    }
}

fn parse_value<T: FromStr>(value: &str, key: &str, path: &Path, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(path, line, format!("invalid value {value:?} for {key}")))
}

impl NetworkConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text, path)?;
        // Relative frozen-set files resolve against the config's directory.
        if let FrozenSource::File(p) = &cfg.frozen_source {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.frozen_source = FrozenSource::File(dir.join(p));
                }
            }
        }
        Ok(cfg)
    }

    /// Unset keys keep their defaults. Every malformed line is reported with its number.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::parse(path, line, format!("expected key = value, got {content:?}")))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "front_ends" => cfg.front_ends = parse_value(value, key, path, line)?,
                "ml" => cfg.ml = parse_value(value, key, path, line)?,
                "cl" => cfg.cl = parse_value(value, key, path, line)?,
                "rll" | "scheme" => {
                    cfg.scheme = value
                        .parse()
                        .map_err(|e: Error| Error::parse(path, line, e.to_string()))?
                }
                "sys_hz" => cfg.sys_hz = parse_value(value, key, path, line)?,
                "sr_hz" => cfg.sr_hz = parse_value(value, key, path, line)?,
                "latency_cycles" => cfg.latency_cycles = parse_value(value, key, path, line)?,
                "fifo_depth" => cfg.fifo_depth = parse_value(value, key, path, line)?,
                "frozen" => {
                    cfg.frozen_source = value
                        .parse()
                        .map_err(|e: Error| Error::parse(path, line, e.to_string()))?
                }
                "overlap" => cfg.overlap = parse_value(value, key, path, line)?,
                other => return Err(Error::parse(path, line, format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cl != 2 * self.ml {
            return Err(Error::invalid(format!(
                "cl must equal 2 * ml (got ml = {}, cl = {})",
                self.ml, self.cl
            )));
        }
        if self.front_ends == 0 || self.front_ends > MAX_FRONT_ENDS {
            return Err(Error::invalid(format!(
                "front_ends {} not in 1..={MAX_FRONT_ENDS}",
                self.front_ends
            )));
        }
        ClockConfig::new(self.sys_hz, self.sr_hz)?;
        Ok(())
    }

    pub fn to_sim_config(&self) -> Result<SimConfig> {
        self.validate()?;
        let code = self.frozen_source.build(self.ml, self.cl)?;
        let cfg = SimConfig {
            front_ends: self.front_ends,
            code,
            scheme: self.scheme,
            clock: ClockConfig::new(self.sys_hz, self.sr_hz)?,
            latency: self.latency_cycles,
            fifo_depth: self.fifo_depth,
            overlap: self.overlap,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let frozen = match &self.frozen_source {
            FrozenSource::Bec(p) => format!("bec:{p}"),
            FrozenSource::File(path) => format!("file:{}", path.display()),
        };
        format!(
            "front_ends = {}\nml = {}\ncl = {}\nrll = {}\nsys_hz = {}\nsr_hz = {}\n\
             latency_cycles = {}\nfifo_depth = {}\nfrozen = {}\noverlap = {}\n",
            self.front_ends,
            self.ml,
            self.cl,
            self.scheme,
            self.sys_hz,
            self.sr_hz,
            self.latency_cycles,
            self.fifo_depth,
            frozen,
            self.overlap
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("net.conf")
    }

    #[test]
    fn defaults_and_overrides() {
        let cfg = NetworkConfig::parse("# comment\nml = 16 # inline\ncl = 32\nrll = 4b6b\n", p()).unwrap();
        assert_eq!(cfg.ml, 16);
        assert_eq!(cfg.scheme, RllScheme::FourBSixB);
        assert_eq!(cfg.front_ends, 100);
        let sim = cfg.to_sim_config().unwrap();
        assert_eq!(sim.code.info_len(), 16);
        assert_eq!(sim.clock.divider(), 500);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = NetworkConfig::parse("ml = 16\ncl = 32\njunk\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = NetworkConfig::parse("ml = sixteen\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = NetworkConfig::parse("\n\ncolour = red\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = NetworkConfig::parse("frozen = magic\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn semantic_checks() {
        assert!(NetworkConfig::parse("ml = 16\ncl = 64\n", p()).is_err());
        assert!(NetworkConfig::parse("front_ends = 129\n", p()).is_err());
        assert!(NetworkConfig::parse("sr_hz = 300000\n", p()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let cfg = NetworkConfig {
            frozen_source: FrozenSource::Bec(0.3),
            overlap: true,
            ..NetworkConfig::default()
        };
        assert_eq!(NetworkConfig::parse(&cfg.to_text(), p()).unwrap(), cfg);
    }

    #[test]
    fn frozen_file_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let code = PolarCodeConfig::designed(32, 16, 0.4).unwrap();
        fs::write(dir.path().join("f.txt"), crate::coding::format_frozen_list(&code)).unwrap();
        let conf = dir.path().join("net.conf");
        fs::write(&conf, "ml = 16\ncl = 32\nfrozen = file:f.txt\n").unwrap();
        let sim = NetworkConfig::load(&conf).unwrap().to_sim_config().unwrap();
        assert_eq!(sim.code, code);
    }
}
