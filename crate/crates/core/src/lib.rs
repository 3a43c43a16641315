//! Quantum bit-string comparator circuits and the Grover searches built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`]: exact statevector simulation (sparse and dense storage).
//! * [`circuit`]: registers, gates with control polarity, and truth-table lifting.
//! * [`comparator`]: the n-bit comparator and its predicate-flip oracle wrapper.
//! * [`arith`]: ripple-carry adders and the shift-and-add multiplier.
//! * [`grover`]: oracles, diffusion, iteration planning and the randomized schedule.
//! * [`algorithms`]: threshold search, minimum finding, zero finding, primality
//!   testing, factoring and comparator-controlled conditional search.

pub mod algorithms;
pub mod arith;
pub mod circuit;
pub mod comparator;
pub mod error;
pub mod grover;
pub mod state;

pub use circuit::{Circuit, Control, Gate, GateKind, Layout, Polarity, Register};
pub use error::{Error, Result};
pub use state::{Backend, MeasurementDistribution, QuantumState};
