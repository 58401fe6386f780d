//! Closed-form estimates for voting and redundancy sizing.

use crate::error::{Error, Result};
use std::fmt;

/// Copy count quoted for the 10^12-bit, 10^20-cycle example.
pub const QUOTED_COPIES: usize = 47;

/// `1 − (p/n)²(2 − p/n) − θ`, clamped to `[0, 1]`.
pub fn vote_success_prob(p: f64, n: f64, theta: f64) -> f64 {
    let q = p / n;
    (1.0 - q * q * (2.0 - q) - theta).clamp(0.0, 1.0)
}

/// Wrong-copy fraction after one vote as a function of the fraction before.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteMap {
    /// `q²(2 − q) + θ`, the complement of [`vote_success_prob`].
    Quoted,
    /// `q²(3 − 2q) + θ`: a copy ends wrong when both partners are wrong, or
    /// when it was wrong and its partners disagree.
    Majority,
}

impl VoteMap {
    pub fn apply(self, q: f64, theta: f64) -> f64 {
        let v = match self {
            VoteMap::Quoted => q * q * (2.0 - q),
            VoteMap::Majority => q * q * (3.0 - 2.0 * q),
        };
        (v + theta).clamp(0.0, 1.0)
    }
}

/// Fractions after each of `votes` votes starting from `q0`.
pub fn iterate_map(map: VoteMap, q0: f64, theta: f64, votes: usize) -> Vec<f64> {
    let mut q = q0;
    (0..votes)
        .map(|_| {
            q = map.apply(q, theta);
            q
        })
        .collect()
}

/// Redundancy needed so that `b` bits survive `c` cycles with at most `f`
/// expected losses when voting cuts the error rate to `η = (2ε)^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyReport {
    pub epsilon: f64,
    pub bits: f64,
    pub cycles: f64,
    pub budget: f64,
    /// Smallest `k` with `η ≤ 1/(c·b²)`.
    pub k: usize,
    pub copies: usize,
    pub eta: f64,
    /// `b(1 − η)^{bc}` at `k`.
    pub surviving: f64,
    /// Whether `b(1 − η)^{bc} ≥ b − f` holds at `k`.
    pub meets_budget: bool,
    /// Smallest `k` meeting `b(1 − η)^{bc} ≥ b − f` directly.
    pub k_budget: usize,
    pub copies_budget: usize,
}

fn ln_eta(epsilon: f64, k: usize) -> f64 {
    k as f64 * (2.0 * epsilon).ln()
}

/// Expected lost bits `b − b(1 − η)^{bc}`, computed without cancellation.
fn expected_losses(b: f64, c: f64, ln_eta: f64) -> f64 {
    let eta = ln_eta.exp();
    -b * (b * c * (-eta).ln_1p()).exp_m1()
}

pub fn redundancy_required(epsilon: f64, b: f64, c: f64, f: f64) -> Result<RedundancyReport> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::NoSolution(format!("voting cannot help at epsilon={epsilon}")));
    }
    if b <= 0.0 || c <= 0.0 || f < 0.0 {
        return Err(Error::InvalidArgument("bits and cycles must be positive".into()));
    }
    const MAX_K: usize = 1 << 16;
    let bound = -(c.ln() + 2.0 * b.ln());
    let (k, k_budget) = if epsilon == 0.0 {
        (1, 1)
    } else {
        let k = (1..MAX_K).find(|&k| ln_eta(epsilon, k) <= bound);
        let kb = (1..MAX_K).find(|&k| expected_losses(b, c, ln_eta(epsilon, k)) <= f);
        match (k, kb) {
            (Some(k), Some(kb)) => (k, kb),
            _ => return Err(Error::NoSolution(format!("no k below {MAX_K}"))),
        }
    };
    let le = if epsilon == 0.0 { f64::NEG_INFINITY } else { ln_eta(epsilon, k) };
    let losses = expected_losses(b, c, le);
    Ok(RedundancyReport {
        epsilon,
        bits: b,
        cycles: c,
        budget: f,
        k,
        copies: 2 * k + 1,
        eta: le.exp(),
        surviving: b - losses,
        meets_budget: losses <= f,
        k_budget,
        copies_budget: 2 * k_budget + 1,
    })
}

impl fmt::Display for RedundancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "epsilon={} bits={:e} cycles={:e} budget={}", self.epsilon, self.bits, self.cycles, self.budget)?;
        writeln!(f, "eta_bound k={} copies={} eta={:e} meets_budget={}", self.k, self.copies, self.eta, self.meets_budget)?;
        writeln!(f, "budget_bound k={} copies={}", self.k_budget, self.copies_budget)?;
        write!(
            f,
            "quoted copies={} differs={}",
            QUOTED_COPIES,
            self.copies != QUOTED_COPIES || self.copies_budget != QUOTED_COPIES
        )
    }
}
