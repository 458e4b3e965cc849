use crate::error::{Error, Result};

pub const CELL_BYTES: usize = 16;

/// Dual-port message store with one 128-bit cell per anchor. Port A writes,
/// port B reads; a same-cycle read of the cell being written sees the old value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageMemory {
    cells: Vec<u128>,
}

impl MessageMemory {
    pub fn new(front_ends: usize) -> Self {
        Self {
            cells: vec![0; front_ends],
        }
    }

    pub fn capacity_bytes(&self) -> usize {
        self.cells.len() * CELL_BYTES
    }

    pub fn cells(&self) -> usize {
        self.cells.len()
    }

    pub fn peek(&self, address: usize) -> Option<u128> {
        self.cells.get(address).copied()
    }

    /// One clock edge: sample port B, then commit port A.
    pub fn clock(&mut self, port_a: Option<(usize, u128)>, port_b: Option<usize>) -> Result<Option<u128>> {
        let read = match port_b {
            Some(addr) => Some(*self.cells.get(addr).ok_or(Error::InvalidAddress {
                address: addr,
                front_ends: self.cells.len(),
            })?),
            None => None,
        };
        if let Some((addr, value)) = port_a {
            let len = self.cells.len();
            let cell = self.cells.get_mut(addr).ok_or(Error::InvalidAddress {
                address: addr,
                front_ends: len,
            })?;
            *cell = value;
        }
        Ok(read)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_network_capacity() {
        assert_eq!(MessageMemory::new(100).capacity_bytes(), 1600);
    }

    #[test]
    fn read_before_write_same_address() {
        let mut m = MessageMemory::new(4);
        m.clock(Some((2, 7)), None).unwrap();
        assert_eq!(m.clock(Some((2, 9)), Some(2)).unwrap(), Some(7));
        assert_eq!(m.clock(None, Some(2)).unwrap(), Some(9));
    }

    #[test]
    fn different_addresses_are_independent() {
        let mut m = MessageMemory::new(4);
        assert_eq!(m.clock(Some((1, 5)), Some(0)).unwrap(), Some(0));
        assert_eq!(m.peek(1), Some(5));
        assert!(m.clock(Some((4, 1)), None).is_err());
        assert!(m.clock(None, Some(9)).is_err());
    }
}
