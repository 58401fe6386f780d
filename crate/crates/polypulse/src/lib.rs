//! Simulator and pulse compiler for one-dimensional heteropolymer computers.
//!
//! A polymer `ABCABC...` is driven by resonant pulses whose frequency selects
//! a species together with the states of its two neighbours. Each pulse is a
//! conditioned permutation applied to every matching unit at once, which makes
//! the array a cellular automaton whose rule is chosen per step.
//!
//! Modules:
//! - [`lattice`]: polymer model, pulses and the exact classical engine.
//! - [`qsim`]: statevector engine for coherent pulses and unitary synthesis.
//! - [`pulsec`]: compiler for swaps, shifts, loading, Fredkin circuits and readout.
//! - [`ecc`]: dissipative error correction routines and Monte Carlo checks.
//! - [`physics`]: analytic error-rate and lifetime estimates.

pub mod ecc;
pub mod error;
pub mod lattice;
pub mod physics;
pub mod pulsec;
pub mod qsim;

pub use error::{Error, Result};
