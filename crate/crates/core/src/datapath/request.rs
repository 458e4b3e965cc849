use crate::error::{Error, Result};

/// Address field width of the request word.
pub const ADDRESS_BITS: u32 = 7;
pub const MAX_FRONT_ENDS: usize = 1 << ADDRESS_BITS;
pub const REQUEST_BYTES: usize = 17;

/// A 136-bit write request: bit 135 is the write flag, bits 134..128 the
/// anchor address, bits 127..0 the message payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpdateRequest {
    pub write_flag: bool,
    address: u8,
    pub payload: u128,
}

impl UpdateRequest {
    pub fn new(address: usize, payload: u128) -> Result<Self> {
        if address >= MAX_FRONT_ENDS {
            return Err(Error::InvalidAddress {
                address,
                front_ends: MAX_FRONT_ENDS,
            });
        }
        Ok(Self {
            write_flag: true,
            address: address as u8,
            payload,
        })
    }

    pub fn address(&self) -> usize {
        self.address as usize
    }

    /// Big-endian 17-byte image of the 136-bit word.
    pub fn to_bytes(&self) -> [u8; REQUEST_BYTES] {
        let mut out = [0u8; REQUEST_BYTES];
        out[0] = ((self.write_flag as u8) << 7) | self.address;
        out[1..].copy_from_slice(&self.payload.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bytes: &[u8; REQUEST_BYTES] = bytes.try_into().map_err(|_| {
            Error::invalid(format!(
                "serialized request must be {REQUEST_BYTES} bytes, got {}",
                bytes.len()
            ))
        })?;
        let mut payload = [0u8; 16];
        payload.copy_from_slice(&bytes[1..]);
        Ok(Self {
            write_flag: bytes[0] & 0x80 != 0,
            address: bytes[0] & 0x7f,
            payload: u128::from_be_bytes(payload),
        })
    }
}
