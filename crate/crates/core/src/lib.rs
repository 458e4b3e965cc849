//! Centralized visible-light beacon transmitter.
//!
//! * [`coding`]: polar encoding with frozen-bit insertion, Manchester and
//!   4B6B line codes, and their noiseless inverses.
//! * [`datapath`]: cycle-level simulation of the shared transmitter (request
//!   FIFO, dual-port message memory, encode unit, de-multiplexer, looping
//!   PISO registers on a divided clock).
//! * [`firmware`]: the sequential one-processor baseline, timed or modeled,
//!   plus a memory footprint estimate.
//! * [`bench`]: baseline-versus-datapath delay scaling and gain tables.

pub mod bench;
pub mod bits;
pub mod coding;
pub mod config;
pub mod datapath;
pub mod error;
pub mod firmware;
pub mod simulate;

pub use bits::BitBlock;
pub use coding::{LineCodedFrame, PolarCodeConfig, RllScheme};
pub use error::{Error, Result};
