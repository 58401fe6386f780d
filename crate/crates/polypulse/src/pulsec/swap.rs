use crate::error::{Error, Result};
use crate::lattice::{Pulse, PulseSequence, Side, SpeciesId, A};

/// `Y ^= left neighbour` for every unit of species `y`.
pub(crate) fn xor_from_left(y: SpeciesId) -> [Pulse; 2] {
    [Pulse::pi(y, 1, 0), Pulse::pi(y, 1, 1)]
}

/// `X ^= right neighbour` for every unit of species `x`, optionally including
/// the end unit when `x` is `A`.
pub(crate) fn xor_from_right(x: SpeciesId, include_end: bool) -> Vec<Pulse> {
    let mut v = vec![Pulse::pi(x, 0, 1), Pulse::pi(x, 1, 1)];
    if include_end && x == A {
        v.push(Pulse::pi_end(A, Side::Left, 1));
    }
    v
}

/// Swap pulses for the slot pair `(x, x+1)` of the `ABC` pattern.
pub(crate) fn swap_pulses(x: SpeciesId, include_end: bool) -> Vec<Pulse> {
    let y = (x + 1) % 3;
    let mut v = Vec::with_capacity(7);
    v.extend(xor_from_left(y));
    v.extend(xor_from_right(x, include_end));
    v.extend(xor_from_left(y));
    v
}

/// Exchanges the values of every adjacent `(x, y)` pair, `y` directly right of `x`.
pub fn compile_swap(x: SpeciesId, y: SpeciesId, include_end: bool) -> Result<PulseSequence> {
    const LABELS: [char; 3] = ['A', 'B', 'C'];
    if x > 2 || y > 2 {
        return Err(Error::UnknownSpecies(format!("{x}/{y}")));
    }
    if (x + 1) % 3 != y {
        return Err(Error::NonAdjacentSpecies(LABELS[x], LABELS[y]));
    }
    Ok(PulseSequence::from_pulses(swap_pulses(x, include_end)))
}
