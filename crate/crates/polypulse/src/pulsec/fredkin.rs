//! Controlled swaps on windows of three consecutive units.

use super::swap::{swap_pulses, xor_from_left, xor_from_right};
use crate::error::{Error, Result};
use crate::lattice::{apply_sequence, Configuration, Polymer, Pulse, PulseSequence, Side, SpeciesId, A, B, C};

/// Three consecutive units starting at residue `first`, controlled by the unit at
/// the `control` end. Every window of this shape in the polymer acts at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub first: SpeciesId,
    pub control: Side,
}

impl Window {
    pub const ALL: [Window; 6] = [
        Window { first: A, control: Side::Left },
        Window { first: A, control: Side::Right },
        Window { first: B, control: Side::Left },
        Window { first: B, control: Side::Right },
        Window { first: C, control: Side::Left },
        Window { first: C, control: Side::Right },
    ];

    /// Residue of the control unit.
    pub fn control_residue(&self) -> usize {
        match self.control {
            Side::Left => self.first,
            Side::Right => (self.first + 2) % 3,
        }
    }

    /// Unit offsets of the two targets relative to the control unit.
    pub fn target_offsets(&self) -> [i64; 2] {
        match self.control {
            Side::Left => [1, 2],
            Side::Right => [-2, -1],
        }
    }

    pub fn pulses(&self) -> Vec<Pulse> {
        let x = self.first;
        let y = (x + 1) % 3;
        let z = (x + 2) % 3;
        let mut v = Vec::with_capacity(6);
        match self.control {
            Side::Left => {
                v.extend(xor_from_left(z));
                v.push(Pulse::pi(y, 1, 1));
                v.extend(xor_from_left(z));
            }
            Side::Right => {
                let xr = xor_from_right(x, true);
                v.extend(xr.iter().copied());
                v.push(Pulse::pi(y, 1, 1));
                v.extend(xr);
            }
        }
        v
    }
}

/// Fredkin gate inside each triple `ABC` with the given control species.
///
/// Control `A` swaps `B` and `C`; control `C` swaps `A` and `B`; control `B`
/// swaps `A` and `C` by conjugating the `C`-controlled gate with a `B↔C` swap.
pub fn compile_fredkin(control: SpeciesId) -> Result<PulseSequence> {
    let pulses = match control {
        A => Window { first: A, control: Side::Left }.pulses(),
        C => Window { first: A, control: Side::Right }.pulses(),
        B => {
            let mut v = swap_pulses(B, true);
            v.extend(Window { first: A, control: Side::Right }.pulses());
            v.extend(swap_pulses(B, true));
            v
        }
        _ => return Err(Error::UnknownSpecies(format!("{control}"))),
    };
    Ok(PulseSequence::from_pulses(pulses))
}

/// Reference Fredkin on one triple `(a, b, c)`.
pub fn fredkin_triple(control: SpeciesId, t: [u8; 3]) -> [u8; 3] {
    let mut out = t;
    if t[control] == 1 {
        let (i, j) = match control {
            A => (1, 2),
            B => (0, 2),
            _ => (0, 1),
        };
        out.swap(i, j);
    }
    out
}

/// A neighbour context in which the same-triple gate misbehaves.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextFinding {
    pub control: SpeciesId,
    pub prev: [u8; 3],
    pub triple: [u8; 3],
    pub next: [u8; 3],
    pub got: [u8; 3],
}

/// Brute-forces the same-triple gate on a middle triple against every value of
/// its two neighbouring triples, with blank triples beyond. Each triple must
/// transform by its own Fredkin gate; deviations are returned.
pub fn characterize_fredkin_contexts(control: SpeciesId) -> Result<Vec<ContextFinding>> {
    let seq = compile_fredkin(control)?;
    let poly = Polymer::abc(15);
    let mut found = Vec::new();
    for v in 0u32..512 {
        let mut st = vec![0u8; 15];
        for k in 0..9 {
            st[3 + k] = ((v >> k) & 1) as u8;
        }
        let out = apply_sequence(&poly, &Configuration { states: st.clone() }, &seq)?;
        let tri = |s: &[u8], t: usize| [s[3 * t], s[3 * t + 1], s[3 * t + 2]];
        let ok = (1..=3).all(|t| tri(&out.states, t) == fredkin_triple(control, tri(&st, t)))
            && out.states[..3].iter().chain(&out.states[12..]).all(|&x| x == 0);
        if !ok {
            found.push(ContextFinding { control, prev: tri(&st, 1), triple: tri(&st, 2), next: tri(&st, 3), got: tri(&out.states, 2) });
        }
    }
    Ok(found)
}
