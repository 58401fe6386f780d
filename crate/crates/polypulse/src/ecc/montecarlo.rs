//! Monte Carlo runs of compiled error-correction rounds.

use super::blocks::{block_vote_program, scramble_program, BlockEnd, BlockFormat};
use super::program::EcProgram;
use super::{inject_errors, NoiseModel};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// Shifts used by successive votes in a round, and whether each vote is
/// followed by front and back scrambles of width `max(1, n/2 − v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcSchedule {
    pub shifts: Vec<(usize, usize)>,
    pub scramble: bool,
}

impl EcSchedule {
    pub const DEFAULT_SHIFTS: [(usize, usize); 5] = [(1, 1), (2, 3), (4, 5), (6, 7), (8, 9)];

    /// The first `votes` entries of the default shift cycle, repeated as needed.
    pub fn standard(votes: usize, scramble: bool) -> Self {
        let shifts = (0..votes).map(|v| Self::DEFAULT_SHIFTS[v % 5]).collect();
        EcSchedule { shifts, scramble }
    }

    fn scramble_width(n: usize, vote: usize) -> usize {
        (n / 2).saturating_sub(vote).max(1)
    }
}

/// Wrong-copy fractions after every vote, averaged over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EcStats {
    pub theta: f64,
    pub trials: usize,
    /// `(mean, standard error)` after each vote of each round, in order.
    pub trajectory: Vec<(f64, f64)>,
    /// The same restricted to copies whose voting partners lie inside the block.
    pub interior: Vec<(f64, f64)>,
    pub residual: f64,
    pub residual_stderr: f64,
}

impl fmt::Display for EcStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "round wrong_fraction stderr")?;
        for (i, (m, s)) in self.trajectory.iter().enumerate() {
            writeln!(f, "{} {:.6} {:.6}", i + 1, m, s)?;
        }
        write!(f, "residual={:.6} theta={}", self.residual, self.theta)
    }
}

fn mean_stderr(xs: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let m = xs.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (m, 0.0);
    }
    let var = xs.map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

/// Runs `rounds` rounds of: inject `epsilon` errors on the data copies, then
/// per vote a block vote, optional scrambles and `theta` errors. Block `k`
/// holds `values[k % values.len()]`.
pub fn monte_carlo_ec(
    format: &BlockFormat,
    model: &NoiseModel,
    schedule: &EcSchedule,
    values: &[u8],
    rounds: usize,
    trials: usize,
) -> Result<EcStats> {
    if trials == 0 || values.is_empty() {
        return Err(Error::InvalidArgument("need at least one trial and one block value".into()));
    }
    if schedule.scramble && !format.shepherd {
        return Err(Error::InvalidArgument("scrambling needs a shepherd block".into()));
    }
    let n = format.n;
    let mut votes = Vec::new();
    for (v, &(s1, s2)) in schedule.shifts.iter().enumerate() {
        let mut p = block_vote_program(format, s1, s2)?;
        if schedule.scramble {
            let m = EcSchedule::scramble_width(n, v);
            p.extend(&scramble_program(format, m, BlockEnd::Front)?);
            p.extend(&scramble_program(format, m, BlockEnd::Back)?);
        }
        votes.push(p);
    }
    let widest = schedule.shifts.iter().map(|&(a, b)| super::blocks::vote_partners(a, b)).fold((0, 0), |acc, (l, r)| {
        (acc.0.max(l.max(0) as usize), acc.1.max(r.max(0) as usize))
    });
    let interior: Vec<usize> = (widest.0..n.saturating_sub(widest.1)).collect();
    let polymer = format.polymer();
    let vals: Vec<u8> = (0..format.blocks).map(|k| values[k % values.len()]).collect();
    let start = format.configuration(&vals)?.states;
    let data = format.all_data_units();
    let blocks: Vec<Vec<usize>> = (0..format.blocks).map(|k| format.data_units(k)).collect();
    let steps = rounds * votes.len();

    let per_trial: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            rng.set_stream(t as u64);
            let mut states = start.clone();
            let mut all = Vec::with_capacity(steps);
            let mut inner = Vec::with_capacity(steps);
            for _ in 0..rounds {
                inject_errors(&mut states, &data, model.epsilon, &mut rng);
                for prog in &votes {
                    run_vote(prog, &polymer, &mut states)?;
                    inject_errors(&mut states, &data, model.theta, &mut rng);
                    let mut wrong = 0usize;
                    let mut wrong_in = 0usize;
                    for (units, &v) in blocks.iter().zip(&vals) {
                        wrong += units.iter().filter(|&&u| states[u] != v).count();
                        wrong_in += interior.iter().filter(|&&i| states[units[i]] != v).count();
                    }
                    all.push(wrong as f64 / data.len() as f64);
                    inner.push(wrong_in as f64 / (interior.len() * blocks.len()).max(1) as f64);
                }
            }
            Ok((all, inner))
        })
        .collect();
    let per_trial: Vec<(Vec<f64>, Vec<f64>)> = per_trial.into_iter().collect::<Result<_>>()?;
    let trajectory: Vec<(f64, f64)> = (0..steps).map(|i| mean_stderr(per_trial.iter().map(|r| r.0[i]), trials)).collect();
    let interior = (0..steps).map(|i| mean_stderr(per_trial.iter().map(|r| r.1[i]), trials)).collect();
    let (residual, residual_stderr) = trajectory.last().copied().unwrap_or((0.0, 0.0));
    Ok(EcStats { theta: model.theta, trials, trajectory, interior, residual, residual_stderr })
}

fn run_vote(prog: &EcProgram, polymer: &crate::lattice::Polymer, states: &mut [u8]) -> Result<()> {
    prog.run(polymer, states)
}
