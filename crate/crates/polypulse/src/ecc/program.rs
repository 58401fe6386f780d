//! Error-correction programs with stream shifts kept symbolic, so long shifts
//! can be executed by moving values directly.

use crate::error::{Error, Result};
use crate::lattice::{apply_pulse_in_place, Polymer, Pulse, PulseSequence};
use crate::pulsec::{plan_swaps, stream_in, swap_pulses, Offsets};

#[derive(Debug, Clone, PartialEq)]
pub enum EcOp {
    Pulse(Pulse),
    /// Stream shift between two offset states, realized by swaps.
    Shift { from: Offsets, to: Offsets },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EcProgram {
    pub ops: Vec<EcOp>,
}

impl EcProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pulse(&mut self, p: Pulse) -> &mut Self {
        self.ops.push(EcOp::Pulse(p));
        self
    }

    pub fn pulses(&mut self, ps: &[Pulse]) -> &mut Self {
        self.ops.extend(ps.iter().map(|p| EcOp::Pulse(*p)));
        self
    }

    pub fn shift(&mut self, from: Offsets, to: Offsets) -> &mut Self {
        if from != to {
            self.ops.push(EcOp::Shift { from, to });
        }
        self
    }

    pub fn extend(&mut self, other: &EcProgram) -> &mut Self {
        self.ops.extend(other.ops.iter().cloned());
        self
    }

    /// Flat pulse sequence; every shift becomes its swap sequence.
    pub fn to_sequence(&self) -> Result<PulseSequence> {
        let mut seq = PulseSequence::new();
        for op in &self.ops {
            match op {
                EcOp::Pulse(p) => seq.push(*p),
                EcOp::Shift { from, to } => {
                    for k in plan_swaps(from, to)? {
                        seq.extend_pulses(&swap_pulses(k, true));
                    }
                }
            }
        }
        Ok(seq)
    }

    /// Runs the program on `states`, moving shifted values directly. Values
    /// may not reach the first unit or the last triple.
    pub fn run(&self, polymer: &Polymer, states: &mut [u8]) -> Result<()> {
        let mut scratch = vec![0u8; states.len()];
        for op in &self.ops {
            match op {
                EcOp::Pulse(p) => apply_pulse_in_place(polymer, states, p)?,
                EcOp::Shift { from, to } => shift_values(states, &mut scratch, from, to)?,
            }
        }
        Ok(())
    }
}

fn shift_values(states: &mut [u8], scratch: &mut [u8], from: &Offsets, to: &Offsets) -> Result<()> {
    let len = states.len() as i64;
    scratch.iter_mut().for_each(|x| *x = 0);
    let delta: [i64; 3] = std::array::from_fn(|s| to[s] - from[s]);
    let by_slot: [i64; 3] = std::array::from_fn(|slot| delta[stream_in(from, slot)]);
    for (u, &v) in states.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let w = u as i64 + by_slot[u % 3];
        if u == 0 || w < 1 || w > len - 4 {
            return Err(Error::SectionOverflow(format!("shift moves a value from unit {u} to {w}")));
        }
        scratch[w as usize] = v;
    }
    states.copy_from_slice(scratch);
    Ok(())
}
