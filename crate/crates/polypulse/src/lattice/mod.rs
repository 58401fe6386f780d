//! Polymer model, pulses and the exact classical semantics of conditioned pulses.

mod batch;
mod engine;
mod format;
mod freq;

pub use batch::BatchConfiguration;
pub use engine::{apply_pulse_classical, apply_pulse_in_place, apply_sequence, apply_sequence_in_place, matches};
pub use format::{format_frequency_table, format_polymer, format_sequence, parse_frequency_table, parse_polymer, parse_sequence};
pub use freq::{check_frequency_distinctness, AddressClass, Collision, FrequencyTable};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Index of a species within the polymer pattern.
pub type SpeciesId = usize;

/// Pattern index of `A` in the standard `ABC` polymer.
pub const A: SpeciesId = 0;
/// Pattern index of `B`.
pub const B: SpeciesId = 1;
/// Pattern index of `C`.
pub const C: SpeciesId = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub label: char,
    pub num_states: u8,
    /// `(pump_state, ground_state)` of the short-lived level.
    pub fast_decay: Option<(u8, u8)>,
}

impl Species {
    pub fn binary(label: char) -> Self {
        Species { label, num_states: 2, fast_decay: None }
    }

    /// Three-level species whose state 2 decays to 0.
    pub fn with_decay(label: char) -> Self {
        Species { label, num_states: 3, fast_decay: Some((2, 0)) }
    }

    fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.num_states) {
            return Err(Error::InvalidPolymer(format!(
                "species {} has {} states",
                self.label, self.num_states
            )));
        }
        if let Some((pump, ground)) = self.fast_decay {
            if pump >= self.num_states || ground != 0 || pump < 2 {
                return Err(Error::InvalidPolymer(format!(
                    "species {} has bad decay {}->{}",
                    self.label, pump, ground
                )));
            }
        }
        Ok(())
    }
}

/// Periodic heteropolymer. Unit `n` has species `pattern[n % pattern.len()]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polymer {
    pattern: Vec<Species>,
    length: usize,
}

impl Polymer {
    pub fn new(pattern: Vec<Species>, length: usize) -> Result<Self> {
        if pattern.len() < 2 {
            return Err(Error::InvalidPolymer("pattern needs at least two species".into()));
        }
        if length < 2 {
            return Err(Error::InvalidPolymer(format!("length {length} < 2")));
        }
        for (i, s) in pattern.iter().enumerate() {
            s.validate()?;
            if pattern[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::InvalidPolymer(format!("duplicate species {}", s.label)));
            }
        }
        Ok(Polymer { pattern, length })
    }

    /// Binary `ABC` polymer with `length` units.
    pub fn abc(length: usize) -> Self {
        Polymer::new(vec![Species::binary('A'), Species::binary('B'), Species::binary('C')], length)
            .expect("abc polymer")
    }

    /// `ABC` polymer where every species has a decaying third level.
    pub fn abc_dissipative(length: usize) -> Self {
        Polymer::new(
            vec![Species::with_decay('A'), Species::with_decay('B'), Species::with_decay('C')],
            length,
        )
        .expect("abc polymer")
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn pattern(&self) -> &[Species] {
        &self.pattern
    }

    pub fn species(&self, id: SpeciesId) -> &Species {
        &self.pattern[id]
    }

    pub fn species_of(&self, index: usize) -> SpeciesId {
        index % self.pattern.len()
    }

    pub fn species_id(&self, label: char) -> Result<SpeciesId> {
        self.pattern
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSpecies(label.to_string()))
    }

    pub fn num_states(&self, index: usize) -> u8 {
        self.pattern[self.species_of(index)].num_states
    }

    pub fn is_binary(&self) -> bool {
        self.pattern.iter().all(|s| s.num_states == 2)
    }

    pub fn is_end(&self, index: usize) -> bool {
        index == 0 || index + 1 == self.length
    }

    /// Number of whole periods, or an error if the last one is partial.
    pub fn whole_periods(&self) -> Result<usize> {
        if self.length % self.pattern.len() != 0 {
            return Err(Error::PartialPeriodPolymer(self.length));
        }
        Ok(self.length / self.pattern.len())
    }

    /// Product of per-unit state counts, saturating.
    pub fn basis_dimension(&self) -> usize {
        (0..self.length).fold(1usize, |d, i| d.saturating_mul(self.num_states(i) as usize))
    }
}

/// Classical state of every unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub states: Vec<u8>,
}

impl Configuration {
    pub fn zeros(polymer: &Polymer) -> Self {
        Configuration { states: vec![0; polymer.len()] }
    }

    pub fn from_states(polymer: &Polymer, states: Vec<u8>) -> Result<Self> {
        if states.len() != polymer.len() {
            return Err(Error::InvalidArgument(format!(
                "configuration has {} units, polymer has {}",
                states.len(),
                polymer.len()
            )));
        }
        for (i, &s) in states.iter().enumerate() {
            if s >= polymer.num_states(i) {
                return Err(Error::InvalidArgument(format!("unit {i} state {s} out of range")));
            }
        }
        Ok(Configuration { states })
    }

    /// Parses a digit string such as `010011`.
    pub fn parse(polymer: &Polymer, text: &str) -> Result<Self> {
        let states = text
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad state digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::from_states(polymer, states)
    }

    pub fn is_zero(&self) -> bool {
        self.states.iter().all(|&s| s == 0)
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.states {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Neighbour condition under which a pulse is resonant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Interior { left: u8, right: u8 },
    End { side: Side, neighbor: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    Coherent,
    DecayPump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub species: SpeciesId,
    pub condition: Condition,
    pub transition: (u8, u8),
    pub area: f64,
    pub phase: f64,
    /// Pulse length, used only for phase tracking.
    pub duration: Option<f64>,
    /// Idle time before the pulse starts, used only for phase tracking.
    pub delay: Option<f64>,
    pub kind: PulseKind,
}

impl Pulse {
    /// π pulse `ω^X_{left,right}` on the 0↔1 transition.
    pub fn pi(species: SpeciesId, left: u8, right: u8) -> Self {
        Pulse {
            species,
            condition: Condition::Interior { left, right },
            transition: (0, 1),
            area: PI,
            phase: 0.0,
            duration: None,
            delay: None,
            kind: PulseKind::Coherent,
        }
    }

    /// π pulse addressing an end unit whose single neighbour is in state `neighbor`.
    pub fn pi_end(species: SpeciesId, side: Side, neighbor: u8) -> Self {
        Pulse { condition: Condition::End { side, neighbor }, ..Pulse::pi(species, 0, 0) }
    }

    /// Pump `ω^X_{left,right}(1 pump)` that resets state 1 to 0 through the decaying level.
    pub fn pump(species: SpeciesId, left: u8, right: u8, pump_state: u8) -> Self {
        Pulse {
            transition: (1, pump_state),
            kind: PulseKind::DecayPump,
            ..Pulse::pi(species, left, right)
        }
    }

    pub fn with_area(mut self, area: f64) -> Self {
        self.area = area;
        self
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_transition(mut self, a: u8, b: u8) -> Self {
        self.transition = (a, b);
        self
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = Some(duration);
        self
    }

    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = Some(delay);
        self
    }

    pub fn is_coherent(&self) -> bool {
        self.kind == PulseKind::Coherent
    }

    /// Checks the pulse against a polymer.
    pub fn validate(&self, polymer: &Polymer) -> Result<()> {
        if self.species >= polymer.period() {
            return Err(Error::InvalidPulse(format!("species index {}", self.species)));
        }
        let sp = polymer.species(self.species);
        let (a, b) = self.transition;
        if self.kind == PulseKind::DecayPump && sp.fast_decay.is_none() {
            return Err(Error::NoFastDecay(sp.label));
        }
        if a == b || a >= sp.num_states || b >= sp.num_states {
            return Err(Error::InvalidPulse(format!("transition {a}:{b} on {}", sp.label)));
        }
        match self.kind {
            PulseKind::Coherent => {
                if !(self.area > 0.0 && self.area <= 2.0 * PI + 1e-12) {
                    return Err(Error::InvalidPulse(format!("area {}", self.area)));
                }
            }
            PulseKind::DecayPump => match sp.fast_decay {
                Some((pump, _)) if a == 1 && b == pump => {}
                Some(_) => {
                    return Err(Error::InvalidPulse(format!("pump transition {a}:{b} on {}", sp.label)))
                }
                None => return Err(Error::NoFastDecay(sp.label)),
            },
        }
        Ok(())
    }
}

/// Ordered pulses with computational-cycle marks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    pub pulses: Vec<Pulse>,
    /// Pulse indices at which a new cycle begins.
    pub cycle_marks: Vec<usize>,
    pub metadata: String,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pulses(pulses: Vec<Pulse>) -> Self {
        PulseSequence { pulses, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn push(&mut self, pulse: Pulse) {
        self.pulses.push(pulse);
    }

    pub fn extend(&mut self, other: &PulseSequence) {
        let base = self.pulses.len();
        self.pulses.extend_from_slice(&other.pulses);
        for &m in &other.cycle_marks {
            self.mark_at(base + m);
        }
    }

    pub fn extend_pulses(&mut self, pulses: &[Pulse]) {
        self.pulses.extend_from_slice(pulses);
    }

    /// Marks a cycle boundary at the current end.
    pub fn mark_cycle(&mut self) {
        let at = self.pulses.len();
        self.mark_at(at);
    }

    fn mark_at(&mut self, at: usize) {
        if self.cycle_marks.last().map_or(true, |&m| m < at) {
            self.cycle_marks.push(at);
        }
    }

    /// Pulses in reverse order. Cycle marks are mirrored.
    pub fn reversed(&self) -> PulseSequence {
        let n = self.pulses.len();
        let mut pulses = self.pulses.clone();
        pulses.reverse();
        let mut cycle_marks: Vec<usize> = self.cycle_marks.iter().map(|&m| n - m).collect();
        cycle_marks.reverse();
        cycle_marks.dedup();
        PulseSequence { pulses, cycle_marks, metadata: self.metadata.clone() }
    }

    pub fn is_coherent(&self) -> bool {
        self.pulses.iter().all(Pulse::is_coherent)
    }

    pub fn validate(&self, polymer: &Polymer) -> Result<()> {
        for p in &self.pulses {
            p.validate(polymer)?;
        }
        let mut prev = None;
        for &m in &self.cycle_marks {
            if m > self.pulses.len() || prev.map_or(false, |p| m <= p) {
                return Err(Error::InvalidPulse(format!("bad cycle mark {m}")));
            }
            prev = Some(m);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polymer_rejects_bad_species() {
        assert!(Polymer::new(vec![Species::binary('A')], 4).is_err());
        let bad = Species { label: 'B', num_states: 4, fast_decay: None };
        assert!(Polymer::new(vec![Species::binary('A'), bad], 4).is_err());
        let p = Polymer::abc(10);
        assert_eq!(p.species_of(4), B);
        assert!(p.whole_periods().is_err());
        assert_eq!(Polymer::abc(9).whole_periods().unwrap(), 3);
    }

    #[test]
    fn pump_requires_decay() {
        let p = Polymer::abc(6);
        assert_eq!(Pulse::pump(B, 0, 0, 2).validate(&p), Err(Error::NoFastDecay('B')));
        let d = Polymer::abc_dissipative(6);
        assert!(Pulse::pump(B, 0, 0, 2).validate(&d).is_ok());
    }

    #[test]
    fn reversal_mirrors_marks() {
        let mut s = PulseSequence::new();
        s.push(Pulse::pi(A, 0, 0));
        s.mark_cycle();
        s.push(Pulse::pi(B, 0, 0));
        s.push(Pulse::pi(C, 0, 0));
        let r = s.reversed();
        assert_eq!(r.cycle_marks, vec![2]);
        assert_eq!(r.pulses[0], Pulse::pi(C, 0, 0));
        assert_eq!(r.reversed(), s);
    }
}
