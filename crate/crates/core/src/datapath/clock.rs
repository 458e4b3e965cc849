use crate::error::{Error, Result};

pub const DEFAULT_SYS_HZ: u64 = 50_000_000;
pub const DEFAULT_SR_HZ: u64 = 100_000;

/// System clock and the slower shift-register clock derived from it by an
/// integer divider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClockConfig {
    sys_hz: u64,
    sr_hz: u64,
}

impl ClockConfig {
    pub fn new(sys_hz: u64, sr_hz: u64) -> Result<Self> {
        if sys_hz == 0 || sr_hz == 0 {
            return Err(Error::invalid("clock frequencies must be positive"));
        }
        if !sys_hz.is_multiple_of(sr_hz) {
            return Err(Error::invalid(format!(
                "sys_hz {sys_hz} is not an integer multiple of sr_hz {sr_hz}"
            )));
        }
        Ok(Self { sys_hz, sr_hz })
    }

    pub fn sys_hz(&self) -> u64 {
        self.sys_hz
    }

    pub fn sr_hz(&self) -> u64 {
        self.sr_hz
    }

    /// sys ticks per sr tick.
    pub fn divider(&self) -> u64 {
        self.sys_hz / self.sr_hz
    }

    pub fn cycles_to_seconds(&self, cycles: u64) -> f64 {
        cycles as f64 / self.sys_hz as f64
    }

    /// True when the sys tick `cycle` closes an sr period.
    pub(crate) fn is_sr_edge(&self, cycle: u64) -> bool {
        (cycle + 1).is_multiple_of(self.divider())
    }
}

impl Default for ClockConfig {
    fn default() -> Self {
        Self {
            sys_hz: DEFAULT_SYS_HZ,
            sr_hz: DEFAULT_SR_HZ,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_divider() {
        assert_eq!(ClockConfig::default().divider(), 500);
    }

    #[test]
    fn non_integer_divider_rejected() {
        assert!(ClockConfig::new(50_000_000, 300_000).is_err());
        assert!(ClockConfig::new(0, 1).is_err());
        assert_eq!(ClockConfig::new(1000, 10).unwrap().divider(), 100);
    }

    #[test]
    fn edges_every_divider_ticks() {
        let c = ClockConfig::new(40, 10).unwrap();
        let edges: Vec<u64> = (0..12).filter(|&t| c.is_sr_edge(t)).collect();
        assert_eq!(edges, vec![3, 7, 11]);
    }
}
