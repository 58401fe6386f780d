//! Statevector simulation of coherent pulses.
//!
//! A pulse rotates every addressed two-level pair `(a, b)` of its species by
//!
//! ```text
//! U(θ, φ) = e^{-iθ/2} [[cos θ/2, -i e^{-iφ} sin θ/2], [-i e^{iφ} sin θ/2, cos θ/2]]
//! ```
//!
//! in the basis `(|a⟩, |b⟩)`. A π pulse at phase π is then an exact exchange.
//! With a frequency table, every basis state accrues `e^{-iEt}` during the
//! pulse's `delay` (before it) and `duration` (after it), the pulse itself
//! acting instantaneously.

mod synth;

pub use synth::{
    compose_on_subspace, haar_unitary, parse_unitary, permutation_word, subspace_distance, synthesize_unitary, PrimitiveProgram,
    ProgramStep, TwoLevelRotation, UnitaryTarget,
};

use crate::error::{Error, Result};
use crate::lattice::{Condition, Configuration, FrequencyTable, Polymer, Pulse, PulseKind, PulseSequence, Side};
use num_complex::Complex64;
use rand::Rng;
use std::fmt::Write as _;

/// Largest basis dimension accepted.
pub const DIMENSION_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    dims: Vec<usize>,
    strides: Vec<usize>,
    pub amplitudes: Vec<Complex64>,
}

/// The pulse's 2×2 matrix, first row and column for the lower state of the pair.
pub fn rotation_matrix(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let g = Complex64::from_polar(1.0, -theta / 2.0);
    let (s, c) = (theta / 2.0).sin_cos();
    let mi = Complex64::new(0.0, -1.0);
    [
        [g * c, g * mi * Complex64::from_polar(s, -phi)],
        [g * mi * Complex64::from_polar(s, phi), g * c],
    ]
}

impl QuantumState {
    /// All units in state 0.
    pub fn new(polymer: &Polymer) -> Result<Self> {
        let dims: Vec<usize> = (0..polymer.len()).map(|i| polymer.num_states(i) as usize).collect();
        let dim = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d).filter(|&x| x <= DIMENSION_CAP));
        let dim = dim.ok_or(Error::DimensionCap { dim: polymer.basis_dimension(), cap: DIMENSION_CAP })?;
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { dims, strides, amplitudes })
    }

    pub fn basis(polymer: &Polymer, config: &Configuration) -> Result<Self> {
        let mut s = Self::new(polymer)?;
        if config.states.len() != s.dims.len() {
            return Err(Error::DimensionMismatch(format!("{} unit configuration for {} units", config.states.len(), s.dims.len())));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        let idx = s.index_of(&config.states);
        s.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// State with the given amplitudes, normalized.
    pub fn from_amplitudes(polymer: &Polymer, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::new(polymer)?;
        if amplitudes.len() != s.amplitudes.len() {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for dimension {}", amplitudes.len(), s.amplitudes.len())));
        }
        let n = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("zero or non-finite state".into()));
        }
        s.amplitudes = amplitudes.into_iter().map(|a| a / n).collect();
        Ok(s)
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn units(&self) -> usize {
        self.dims.len()
    }

    pub fn index_of(&self, states: &[u8]) -> usize {
        states.iter().zip(&self.strides).map(|(&s, &st)| s as usize * st).sum()
    }

    pub fn digit(&self, index: usize, unit: usize) -> u8 {
        ((index / self.strides[unit]) % self.dims[unit]) as u8
    }

    pub fn states_of(&self, index: usize) -> Vec<u8> {
        (0..self.dims.len()).map(|u| self.digit(index, u)).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, states: &[u8]) -> f64 {
        self.amplitudes[self.index_of(states)].norm_sqr()
    }

    fn condition_holds(&self, cond: Condition, index: usize, unit: usize) -> bool {
        let n = self.dims.len();
        match cond {
            Condition::Interior { left, right } => {
                unit > 0 && unit + 1 < n && self.digit(index, unit - 1) == left && self.digit(index, unit + 1) == right
            }
            Condition::End { side: Side::Left, neighbor } => unit == 0 && n > 1 && self.digit(index, 1) == neighbor,
            Condition::End { side: Side::Right, neighbor } => unit + 1 == n && n > 1 && self.digit(index, n - 2) == neighbor,
        }
    }

    /// Rotates the pair `(a, b)` of `unit` wherever `cond` holds.
    fn rotate_unit(&mut self, unit: usize, cond: Condition, (a, b): (u8, u8), m: &[[Complex64; 2]; 2]) {
        let st = self.strides[unit];
        for idx in 0..self.amplitudes.len() {
            if self.digit(idx, unit) != a || !self.condition_holds(cond, idx, unit) {
                continue;
            }
            let j = idx + b as usize * st - a as usize * st;
            let (x, y) = (self.amplitudes[idx], self.amplitudes[j]);
            self.amplitudes[idx] = m[0][0] * x + m[0][1] * y;
            self.amplitudes[j] = m[1][0] * x + m[1][1] * y;
        }
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() >= 1e-14 {
                let label: String = self.states_of(i).iter().map(|&s| char::from(b'0' + s)).collect();
                let _ = writeln!(out, "|{label}> {:.15} {:.15}", a.re, a.im);
            }
        }
        out
    }
}

/// Applies one coherent pulse, with phase tracking when `freq` is given.
pub fn apply_pulse_quantum(state: &mut QuantumState, polymer: &Polymer, pulse: &Pulse, freq: Option<&FrequencyTable>) -> Result<()> {
    apply_indexed(state, polymer, pulse, freq, 0)
}

fn apply_indexed(state: &mut QuantumState, polymer: &Polymer, pulse: &Pulse, freq: Option<&FrequencyTable>, index: usize) -> Result<()> {
    if pulse.kind == PulseKind::DecayPump {
        return Err(Error::DissipativePulse(index));
    }
    if polymer.len() != state.units() {
        return Err(Error::DimensionMismatch("state and polymer differ in length".into()));
    }
    pulse.validate(polymer)?;
    if let (Some(f), Some(t)) = (freq, pulse.delay) {
        free_evolution(state, polymer, t, f)?;
    }
    let m = rotation_matrix(pulse.area, pulse.phase);
    for unit in (pulse.species..polymer.len()).step_by(polymer.period()) {
        state.rotate_unit(unit, pulse.condition, pulse.transition, &m);
    }
    if let (Some(f), Some(t)) = (freq, pulse.duration) {
        free_evolution(state, polymer, t, f)?;
    }
    Ok(())
}

pub fn apply_sequence_quantum(state: &mut QuantumState, polymer: &Polymer, seq: &PulseSequence, freq: Option<&FrequencyTable>) -> Result<()> {
    for (i, p) in seq.pulses.iter().enumerate() {
        apply_indexed(state, polymer, p, freq, i)?;
    }
    Ok(())
}

/// Multiplies each amplitude by `e^{-iEt}`, `E` the basis-state energy in rad/s.
pub fn free_evolution(state: &mut QuantumState, polymer: &Polymer, duration: f64, freq: &FrequencyTable) -> Result<()> {
    if duration == 0.0 {
        return Ok(());
    }
    for idx in 0..state.amplitudes.len() {
        let e = freq.energy(polymer, &state.states_of(idx))?;
        state.amplitudes[idx] *= Complex64::from_polar(1.0, -e * duration);
    }
    Ok(())
}

/// Samples unit `unit` and collapses the state onto the outcome.
pub fn measure_unit(state: &QuantumState, unit: usize, rng: &mut impl Rng) -> Result<(u8, QuantumState)> {
    if unit >= state.units() {
        return Err(Error::InvalidArgument(format!("unit {unit} out of range")));
    }
    let mut probs = vec![0.0; state.dims[unit]];
    for (i, a) in state.amplitudes.iter().enumerate() {
        probs[state.digit(i, unit) as usize] += a.norm_sqr();
    }
    let total: f64 = probs.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    let mut outcome = probs.len() - 1;
    for (k, &p) in probs.iter().enumerate() {
        if r < p {
            outcome = k;
            break;
        }
        r -= p;
    }
    // Never select an outcome of zero probability through rounding.
    if probs[outcome] == 0.0 {
        outcome = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    }
    let norm = probs[outcome].sqrt();
    let mut post = state.clone();
    for (i, a) in post.amplitudes.iter_mut().enumerate() {
        *a = if state.digit(i, unit) as usize == outcome { *a / norm } else { Complex64::new(0.0, 0.0) };
    }
    Ok((outcome as u8, post))
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {}", a.amplitudes.len(), b.amplitudes.len())));
    }
    let ip: Complex64 = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum();
    Ok(ip.norm_sqr().min(1.0))
}
