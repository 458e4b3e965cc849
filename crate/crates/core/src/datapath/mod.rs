//! Cycle-level simulation of the centralized beacon transmitter: request
//! FIFO, address pointer, dual-port message memory, encode unit,
//! de-multiplexer, front-end registers, and looping PISO shift registers.

pub mod artifacts;
mod clock;
mod frontend;
mod memory;
mod receiver;
mod request;
mod sim;

pub use clock::{ClockConfig, DEFAULT_SR_HZ, DEFAULT_SYS_HZ};
pub use frontend::{FrameBoundary, FrontEnd, Piso};
pub use memory::MessageMemory;
pub use receiver::{receive_and_decode, report_throughput};
pub use request::{UpdateRequest, ADDRESS_BITS, MAX_FRONT_ENDS, REQUEST_BYTES};
pub use sim::{
    Event, EventKind, SimConfig, SimState, SimStats, TransmitterUnit, DEFAULT_FIFO_DEPTH,
    DEFAULT_FRONT_ENDS, DEFAULT_LATENCY,
};
