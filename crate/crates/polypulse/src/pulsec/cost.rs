//! Pulse-count summaries.

use crate::lattice::{Condition, PulseSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostReport {
    pub pulses: usize,
    /// Pulses per species id.
    pub per_species: [usize; 3],
    /// Pulses addressed to an end unit.
    pub end_pulses: usize,
    pub cycles: usize,
}

pub fn cost_report(seq: &PulseSequence) -> CostReport {
    let mut r = CostReport { pulses: seq.len(), cycles: seq.cycle_marks.len(), ..Default::default() };
    for p in &seq.pulses {
        if p.species < 3 {
            r.per_species[p.species] += 1;
        }
        if matches!(p.condition, Condition::End { .. }) {
            r.end_pulses += 1;
        }
    }
    r
}

impl std::fmt::Display for CostReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "pulses={}", self.pulses)?;
        writeln!(f, "pulses_A={}", self.per_species[0])?;
        writeln!(f, "pulses_B={}", self.per_species[1])?;
        writeln!(f, "pulses_C={}", self.per_species[2])?;
        writeln!(f, "end_pulses={}", self.end_pulses)?;
        write!(f, "cycles={}", self.cycles)
    }
}
