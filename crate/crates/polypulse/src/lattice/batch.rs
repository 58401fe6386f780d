use super::{Condition, Configuration, Polymer, Pulse, PulseKind, PulseSequence, Side};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Many binary configurations evaluated together, one bit lane per configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchConfiguration {
    units: usize,
    count: usize,
    words: usize,
    data: Vec<u64>,
}

#[inline]
fn sel(v: u64, s: u8) -> u64 {
    if s == 1 {
        v
    } else {
        !v
    }
}

impl BatchConfiguration {
    pub fn zeros(units: usize, count: usize) -> Self {
        let words = count.div_ceil(64).max(1);
        BatchConfiguration { units, count, words, data: vec![0; units * words] }
    }

    pub fn from_configurations(configs: &[Configuration]) -> Result<Self> {
        let units = configs.first().map_or(0, |c| c.states.len());
        let mut b = Self::zeros(units, configs.len());
        for (k, c) in configs.iter().enumerate() {
            if c.states.len() != units {
                return Err(Error::InvalidArgument("configurations differ in length".into()));
            }
            for (u, &s) in c.states.iter().enumerate() {
                if s > 1 {
                    return Err(Error::InvalidArgument("batch engine is binary only".into()));
                }
                b.set(k, u, s);
            }
        }
        Ok(b)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn set(&mut self, lane: usize, unit: usize, value: u8) {
        let w = &mut self.data[unit * self.words + lane / 64];
        if value == 1 {
            *w |= 1 << (lane % 64);
        } else {
            *w &= !(1 << (lane % 64));
        }
    }

    pub fn get(&self, lane: usize, unit: usize) -> u8 {
        ((self.data[unit * self.words + lane / 64] >> (lane % 64)) & 1) as u8
    }

    pub fn configuration(&self, lane: usize) -> Configuration {
        Configuration { states: (0..self.units).map(|u| self.get(lane, u)).collect() }
    }

    pub fn apply_pulse(&mut self, polymer: &Polymer, pulse: &Pulse) -> Result<()> {
        if pulse.kind != PulseKind::Coherent || pulse.transition != (0, 1) && pulse.transition != (1, 0) {
            return Err(Error::InvalidPulse("batch engine handles only 0:1 coherent pulses".into()));
        }
        if (pulse.area - PI).abs() > 1e-12 {
            return Err(Error::NonClassicalPulse { index: 0, area: pulse.area });
        }
        let w = self.words;
        let n = self.units;
        match pulse.condition {
            Condition::End { side, neighbor } => {
                if n < 2 {
                    return Ok(());
                }
                let (i, nb) = if side == Side::Left { (0, 1) } else { (n - 1, n - 2) };
                if polymer.species_of(i) != pulse.species {
                    return Ok(());
                }
                for k in 0..w {
                    let m = sel(self.data[nb * w + k], neighbor);
                    self.data[i * w + k] ^= m;
                }
            }
            Condition::Interior { left, right } => {
                let mut i = if pulse.species == 0 { polymer.period() } else { pulse.species };
                while i + 1 < n {
                    for k in 0..w {
                        let m = sel(self.data[(i - 1) * w + k], left) & sel(self.data[(i + 1) * w + k], right);
                        self.data[i * w + k] ^= m;
                    }
                    i += polymer.period();
                }
            }
        }
        Ok(())
    }

    pub fn apply_sequence(&mut self, polymer: &Polymer, seq: &PulseSequence) -> Result<()> {
        for (index, p) in seq.pulses.iter().enumerate() {
            self.apply_pulse(polymer, p).map_err(|e| match e {
                Error::NonClassicalPulse { area, .. } => Error::NonClassicalPulse { index, area },
                e => e,
            })?;
        }
        Ok(())
    }
}
