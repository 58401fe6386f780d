//! Stream offsets and swap planning.
//!
//! The values held in the `A`, `B` and `C` slots form three streams. A swap of
//! slots `(k, k+1)` moves the stream in slot `k` one unit right and the stream in
//! slot `k+1` one unit left, so the sum of all stream offsets never changes.

use super::swap::swap_pulses;
use crate::error::{Error, Result};
use crate::lattice::{Polymer, PulseSequence, SpeciesId};
use std::collections::{HashMap, VecDeque};

/// Unit displacement of each stream, indexed by home species.
pub type Offsets = [i64; 3];

pub const HOME: Offsets = [0, 0, 0];

/// Residue currently occupied by stream `s`.
pub fn slot_of(off: &Offsets, s: usize) -> usize {
    (s as i64 + off[s]).rem_euclid(3) as usize
}

/// Stream currently occupying residue `slot`.
pub fn stream_in(off: &Offsets, slot: usize) -> usize {
    (0..3).find(|&s| slot_of(off, s) == slot).expect("offsets form a permutation of slots")
}

pub fn is_valid(off: &Offsets) -> bool {
    let mut seen = [false; 3];
    for s in 0..3 {
        seen[slot_of(off, s)] = true;
    }
    seen.iter().all(|&b| b)
}

/// Offsets after swapping slots `(k, k+1)`.
pub fn apply_swap(off: &Offsets, k: SpeciesId) -> Offsets {
    let lo = stream_in(off, k);
    let hi = stream_in(off, (k + 1) % 3);
    let mut out = *off;
    out[lo] += 1;
    out[hi] -= 1;
    out
}

/// Shortest list of slot swaps taking `from` to `to`.
pub fn plan_swaps(from: &Offsets, to: &Offsets) -> Result<Vec<SpeciesId>> {
    let sum_from: i64 = from.iter().sum();
    let sum_to: i64 = to.iter().sum();
    if sum_from != sum_to {
        return Err(Error::CenterOfGravityViolation(sum_to - sum_from));
    }
    if !is_valid(from) || !is_valid(to) {
        return Err(Error::InvalidArgument(format!("offsets {to:?} do not occupy distinct slots")));
    }
    if from == to {
        return Ok(Vec::new());
    }
    const PAD: i64 = 6;
    let lo: Vec<i64> = (0..3).map(|s| from[s].min(to[s]) - PAD).collect();
    let hi: Vec<i64> = (0..3).map(|s| from[s].max(to[s]) + PAD).collect();
    let inside = |o: &Offsets| (0..3).all(|s| o[s] >= lo[s] && o[s] <= hi[s]);
    let mut prev: HashMap<Offsets, (Offsets, SpeciesId)> = HashMap::new();
    let mut queue = VecDeque::from([*from]);
    prev.insert(*from, (*from, 0));
    while let Some(x) = queue.pop_front() {
        for k in 0..3 {
            let y = apply_swap(&x, k);
            if !inside(&y) || prev.contains_key(&y) {
                continue;
            }
            prev.insert(y, (x, k));
            if &y == to {
                let mut path = Vec::new();
                let mut cur = y;
                while &cur != from {
                    let (p, k) = prev[&cur];
                    path.push(k);
                    cur = p;
                }
                path.reverse();
                return Ok(path);
            }
            queue.push_back(y);
        }
    }
    Err(Error::Internal(format!("no swap path from {from:?} to {to:?}")))
}

/// Pulses realizing a list of slot swaps. `A↔B` swaps include the end unit.
pub fn swaps_to_sequence(kinds: &[SpeciesId]) -> PulseSequence {
    let mut seq = PulseSequence::new();
    for &k in kinds {
        seq.extend_pulses(&swap_pulses(k, true));
    }
    seq
}

/// Displaces each stream by `displacement[s]` units.
pub fn compile_shift(polymer: &Polymer, displacement: Offsets) -> Result<PulseSequence> {
    polymer.whole_periods()?;
    let sum: i64 = displacement.iter().sum();
    if sum != 0 {
        return Err(Error::CenterOfGravityViolation(sum));
    }
    Ok(swaps_to_sequence(&plan_swaps(&HOME, &displacement)?))
}

/// Displacement moving `species` by `offset` triples while the other two streams
/// move by `others` triples (listed in pattern order, skipping `species`).
pub fn shift_plan(species: SpeciesId, offset: i64, others: [i64; 2]) -> Offsets {
    let mut d = [0; 3];
    d[species] = 3 * offset;
    let mut it = others.iter();
    for (s, slot) in d.iter_mut().enumerate() {
        if s != species {
            *slot = 3 * it.next().unwrap();
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_sequence, Configuration, A, B, C};
    use proptest::prelude::*;

    /// Places stream tags in a zero-padded polymer and reads back where they went.
    fn run_tagged(disp: Offsets) -> bool {
        let triples = 20;
        let p = Polymer::abc(3 * triples);
        let seq = compile_shift(&p, disp).unwrap();
        // Distinct patterns per stream in the middle triples.
        let mut st = vec![0u8; 3 * triples];
        let pat = [[1, 0, 1, 1], [1, 1, 0, 1], [0, 1, 1, 1]];
        for s in 0..3 {
            for (k, &v) in pat[s].iter().enumerate() {
                st[3 * (8 + k) + s] = v;
            }
        }
        let out = apply_sequence(&p, &Configuration { states: st.clone() }, &seq).unwrap();
        let mut want = vec![0u8; 3 * triples];
        for s in 0..3 {
            for k in 0..4 {
                let u = (3 * (8 + k) + s) as i64 + disp[s];
                want[u as usize] = st[3 * (8 + k) + s];
            }
        }
        out.states == want
    }

    #[test]
    fn bc_then_ab_moves_c_two_left() {
        let p = Polymer::abc(12);
        let s = compile_shift(&p, [1, 1, -2]).unwrap();
        assert_eq!(s.len(), 13);
        assert!(run_tagged([1, 1, -2]));
    }

    #[test]
    fn identity_and_violations() {
        let p = Polymer::abc(12);
        assert!(compile_shift(&p, [0, 0, 0]).unwrap().is_empty());
        assert_eq!(compile_shift(&p, [3, 0, 0]), Err(Error::CenterOfGravityViolation(3)));
        assert_eq!(compile_shift(&Polymer::abc(13), [0, 0, 0]), Err(Error::PartialPeriodPolymer(13)));
        assert!(compile_shift(&p, [1, 0, -1]).is_err());
        assert_eq!(compile_shift(&p, [1, -1, 0]).unwrap().len(), 7);
    }

    #[test]
    fn push_sequences() {
        // One-triple pushes take four swaps.
        for (x, y) in [(A, B), (A, C), (B, A), (B, C), (C, A), (C, B)] {
            let mut d = [0; 3];
            d[x] = 3;
            d[y] = -3;
            assert_eq!(plan_swaps(&HOME, &d).unwrap().len(), 4);
            assert!(run_tagged(d));
        }
    }

    proptest! {
        #[test]
        fn shifts_move_tags(a in -2i64..=2, b in -2i64..=2, r in 0usize..3) {
            // Residue pattern of a valid permutation with zero sum.
            let rot = [[0, 0, 0], [1, 1, -2], [2, -1, -1]][r];
            let d = [3 * a + rot[0], 3 * b + rot[1], -3 * (a + b) + rot[2]];
            prop_assume!(is_valid(&d));
            prop_assert!(run_tagged(d));
            let p = Polymer::abc(36);
            let fwd = compile_shift(&p, d).unwrap();
            let back = swaps_to_sequence(&plan_swaps(&d, &HOME).unwrap());
            let mut st = vec![0u8; 36];
            st[16] = 1; st[17] = 1; st[21] = 1;
            let c = Configuration { states: st };
            let there = apply_sequence(&p, &c, &fwd).unwrap();
            prop_assert_eq!(apply_sequence(&p, &there, &back).unwrap(), c);
        }
    }
}
