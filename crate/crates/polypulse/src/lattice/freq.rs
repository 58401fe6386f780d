use super::{Condition, Polymer, Side, SpeciesId};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// One addressable resonance: species, neighbour condition and transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AddressClass {
    pub species: SpeciesId,
    pub condition: Condition,
    pub transition: (u8, u8),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collision {
    pub first: AddressClass,
    pub second: AddressClass,
    pub separation: f64,
}

/// Resonant frequencies in rad/s. Missing shifts count as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable {
    pub base: BTreeMap<(SpeciesId, (u8, u8)), f64>,
    pub shift: BTreeMap<(SpeciesId, u8, u8, (u8, u8)), f64>,
    pub end_shift: BTreeMap<(SpeciesId, Side, u8, (u8, u8)), f64>,
}

fn norm(t: (u8, u8)) -> (u8, u8) {
    if t.0 <= t.1 {
        t
    } else {
        (t.1, t.0)
    }
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_base(&mut self, species: SpeciesId, transition: (u8, u8), omega: f64) {
        self.base.insert((species, norm(transition)), omega);
    }

    pub fn set_shift(&mut self, species: SpeciesId, left: u8, right: u8, transition: (u8, u8), d: f64) {
        self.shift.insert((species, left, right, norm(transition)), d);
    }

    pub fn set_end_shift(&mut self, species: SpeciesId, side: Side, neighbor: u8, transition: (u8, u8), d: f64) {
        self.end_shift.insert((species, side, neighbor, norm(transition)), d);
    }

    /// Effective frequency `base + shift` of an address class.
    pub fn effective(&self, class: &AddressClass) -> Result<f64> {
        let t = norm(class.transition);
        let base = *self.base.get(&(class.species, t)).ok_or_else(|| {
            Error::MissingEntry(format!("base frequency of species {} transition {}:{}", class.species, t.0, t.1))
        })?;
        let shift = match class.condition {
            Condition::Interior { left, right } => self.shift.get(&(class.species, left, right, t)),
            Condition::End { side, neighbor } => self.end_shift.get(&(class.species, side, neighbor, t)),
        };
        let w = base + shift.copied().unwrap_or(0.0);
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::MissingEntry(format!("non-positive frequency {w} for {class:?}")));
        }
        Ok(w)
    }

    /// Conditioned frequency of unit `index` for `transition` given neighbour states.
    pub fn unit_frequency(&self, polymer: &Polymer, states: &[u8], index: usize, transition: (u8, u8)) -> Result<f64> {
        let len = states.len();
        let condition = if index == 0 {
            Condition::End { side: Side::Left, neighbor: states[1] }
        } else if index + 1 == len {
            Condition::End { side: Side::Right, neighbor: states[len - 2] }
        } else {
            Condition::Interior { left: states[index - 1], right: states[index + 1] }
        };
        self.effective(&AddressClass { species: polymer.species_of(index), condition, transition })
    }

    /// Energy of a basis state: each unit in state k contributes the sum of its
    /// conditioned ladder frequencies `0→1, …, k−1→k`.
    pub fn energy(&self, polymer: &Polymer, states: &[u8]) -> Result<f64> {
        let mut e = 0.0;
        for (i, &s) in states.iter().enumerate() {
            for j in 0..s {
                e += self.unit_frequency(polymer, states, i, (j, j + 1))?;
            }
        }
        Ok(e)
    }
}

/// Every address class a polymer can present.
pub fn address_classes(polymer: &Polymer) -> Vec<AddressClass> {
    let mut out = Vec::new();
    let len = polymer.len();
    let period = polymer.period();
    for s in 0..period {
        let ns = polymer.species(s).num_states;
        let ladder: Vec<(u8, u8)> = (0..ns - 1).map(|j| (j, j + 1)).collect();
        let interior = (1..len.saturating_sub(1)).any(|i| polymer.species_of(i) == s);
        if interior {
            let ls = polymer.species((s + period - 1) % period).num_states;
            let rs = polymer.species((s + 1) % period).num_states;
            for l in 0..ls {
                for r in 0..rs {
                    for &t in &ladder {
                        out.push(AddressClass { species: s, condition: Condition::Interior { left: l, right: r }, transition: t });
                    }
                }
            }
        }
        for (side, idx, nb) in [(Side::Left, 0, 1usize), (Side::Right, len - 1, len.saturating_sub(2))] {
            if polymer.species_of(idx) == s {
                for n in 0..polymer.num_states(nb) {
                    for &t in &ladder {
                        out.push(AddressClass { species: s, condition: Condition::End { side, neighbor: n }, transition: t });
                    }
                }
            }
        }
    }
    out
}

/// Pairs of address classes whose frequencies are within `tolerance` of each other.
pub fn check_frequency_distinctness(table: &FrequencyTable, polymer: &Polymer, tolerance: f64) -> Result<Vec<Collision>> {
    let classes = address_classes(polymer);
    let freqs = classes.iter().map(|c| table.effective(c)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&i, &j| freqs[i].total_cmp(&freqs[j]));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            let sep = freqs[j] - freqs[i];
            if sep > tolerance {
                break;
            }
            let (first, second) = if classes[i] <= classes[j] { (classes[i], classes[j]) } else { (classes[j], classes[i]) };
            out.push(Collision { first, second, separation: sep });
        }
    }
    out.sort_by(|a, b| (a.first, a.second).cmp(&(b.first, b.second)));
    Ok(out)
}
