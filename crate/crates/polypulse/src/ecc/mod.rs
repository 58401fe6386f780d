//! Error correction by repeated majority votes among redundant copies.

mod analytic;
mod blocks;
mod montecarlo;
mod program;

pub use analytic::{
    iterate_map, redundancy_required, vote_success_prob, RedundancyReport, VoteMap, QUOTED_COPIES,
};
pub use blocks::{
    block_vote_program, compile_block_vote, compile_scramble, compile_triple_vote, scramble_program, vote_partners, BlockEnd,
    BlockFormat,
};
pub use montecarlo::{monte_carlo_ec, EcSchedule, EcStats};
pub use program::{EcOp, EcProgram};

use crate::error::{Error, Result};
use rand::Rng;

/// Error probability `epsilon` per unit per computational cycle and `theta`
/// per unit during one vote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub epsilon: f64,
    pub theta: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(epsilon: f64, theta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) || !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!("noise epsilon={epsilon} theta={theta}")));
        }
        Ok(NoiseModel { epsilon, theta, seed })
    }
}

/// Flips each listed unit between 0 and 1 with probability `p`; returns the
/// number of flips.
pub fn inject_errors<R: Rng + ?Sized>(states: &mut [u8], units: &[usize], p: f64, rng: &mut R) -> usize {
    let mut flips = 0;
    for &u in units {
        if states[u] <= 1 && rng.gen_bool(p) {
            states[u] ^= 1;
            flips += 1;
        }
    }
    flips
}
