use super::{Condition, Configuration, Polymer, Pulse, PulseKind, PulseSequence, Side};
use crate::error::{Error, Result};
use std::f64::consts::PI;

fn condition_holds(cond: Condition, states: &[u8], index: usize) -> bool {
    let len = states.len();
    match cond {
        Condition::Interior { left, right } => {
            index > 0 && index + 1 < len && states[index - 1] == left && states[index + 1] == right
        }
        Condition::End { side: Side::Left, neighbor } => index == 0 && len > 1 && states[1] == neighbor,
        Condition::End { side: Side::Right, neighbor } => {
            index + 1 == len && len > 1 && states[len - 2] == neighbor
        }
    }
}

/// Whether unit `index` responds to `pulse` in `config`.
pub fn matches(polymer: &Polymer, pulse: &Pulse, config: &Configuration, index: usize) -> bool {
    if polymer.species_of(index) != pulse.species {
        return false;
    }
    if !condition_holds(pulse.condition, &config.states, index) {
        return false;
    }
    let s = config.states[index];
    match pulse.kind {
        PulseKind::Coherent => s == pulse.transition.0 || s == pulse.transition.1,
        PulseKind::DecayPump => s == pulse.transition.0,
    }
}

fn check_classical(pulse: &Pulse, index: usize) -> Result<()> {
    if pulse.kind == PulseKind::Coherent && (pulse.area - PI).abs() > 1e-12 {
        return Err(Error::NonClassicalPulse { index, area: pulse.area });
    }
    Ok(())
}

/// Applies a pulse to a raw state vector.
///
/// Same-species units are never neighbours, so updating in place sees only
/// pre-pulse neighbour states.
pub fn apply_pulse_in_place(polymer: &Polymer, states: &mut [u8], pulse: &Pulse) -> Result<()> {
    check_classical(pulse, 0)?;
    let period = polymer.period();
    let len = states.len();
    let (a, b) = pulse.transition;
    let mut i = pulse.species;
    // End conditions touch a single unit.
    match pulse.condition {
        Condition::End { side, .. } => {
            let idx = if side == Side::Left { 0 } else { len - 1 };
            if polymer.species_of(idx) == pulse.species && condition_holds(pulse.condition, states, idx) {
                update(states, idx, pulse.kind, a, b);
            }
            return Ok(());
        }
        Condition::Interior { left, right } => {
            if i == 0 {
                i += period;
            }
            while i + 1 < len {
                if states[i - 1] == left && states[i + 1] == right {
                    update(states, i, pulse.kind, a, b);
                }
                i += period;
            }
        }
    }
    Ok(())
}

#[inline]
fn update(states: &mut [u8], i: usize, kind: PulseKind, a: u8, b: u8) {
    let s = states[i];
    match kind {
        PulseKind::Coherent => {
            if s == a {
                states[i] = b;
            } else if s == b {
                states[i] = a;
            }
        }
        PulseKind::DecayPump => {
            if s == a {
                states[i] = 0;
            }
        }
    }
}

/// Applies one pulse to a configuration.
pub fn apply_pulse_classical(polymer: &Polymer, config: &Configuration, pulse: &Pulse) -> Result<Configuration> {
    let mut out = config.clone();
    apply_pulse_in_place(polymer, &mut out.states, pulse)?;
    Ok(out)
}

pub fn apply_sequence_in_place(polymer: &Polymer, states: &mut [u8], seq: &PulseSequence) -> Result<()> {
    for (index, p) in seq.pulses.iter().enumerate() {
        check_classical(p, index)?;
        apply_pulse_in_place(polymer, states, p)?;
    }
    Ok(())
}

/// Left-to-right fold of [`apply_pulse_classical`].
pub fn apply_sequence(polymer: &Polymer, config: &Configuration, seq: &PulseSequence) -> Result<Configuration> {
    let mut out = config.clone();
    apply_sequence_in_place(polymer, &mut out.states, seq)?;
    Ok(out)
}
