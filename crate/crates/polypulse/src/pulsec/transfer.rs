//! Moving selected wires into the neighbouring section.

use super::compile::{layout_tracker, reference_pilots};
use super::layout::{Method, SectionLayout};
use super::tracker::Tracker;
use crate::error::{Error, Result};
use crate::lattice::{PulseSequence, Side, A, B, C};

const BREADTH: usize = 16;

/// Moves the listed wires of every section one section to the `direction`
/// side. Each bit is stashed in the B stream with the C shepherd, carried a
/// full period in that stream, dropped back onto an A unit, and the stashing
/// is undone. Wires leaving the outermost section land in the blank margin.
pub fn compile_section_transfer(bits: &[usize], direction: Side, layout: &SectionLayout) -> Result<PulseSequence> {
    if layout.method != Method::Shepherd {
        return Err(Error::LayoutMismatch("section transfer needs the shepherd layout".into()));
    }
    if let Some(&w) = bits.iter().find(|&&w| w >= layout.num_wires) {
        return Err(Error::LayoutMismatch(format!("wire {w} not in a {}-wire layout", layout.num_wires)));
    }
    let mut wires = bits.to_vec();
    wires.sort_unstable();
    wires.dedup();
    let shift = 3 * layout.period as i64 * if direction == Side::Right { 1 } else { -1 };
    let pilots = reference_pilots(layout);
    let k2 = pilots[C].ok_or_else(|| Error::Internal("no C shepherd".into()))?;
    let mut t = layout_tracker(layout);
    for &w in &wires {
        t = move_wire(&t, layout, w, shift, k2)
            .ok_or_else(|| Error::SectionOverflow(format!("no clean route to transfer wire {w}")))?;
    }
    let mut seq = t.seq;
    seq.metadata = format!("transfer wires={wires:?} direction={direction:?}");
    Ok(seq)
}

fn move_wire(t: &Tracker, layout: &SectionLayout, w: usize, shift: i64, pilot: (usize, i64)) -> Option<Tracker> {
    let n = layout.num_wires as u32;
    let label = w as u32;
    let home = layout.unit_of(0, w) as i64;
    let mut expected = t.frames();
    for k in 0..layout.sections {
        let f = layout.unit_of(k, w) as i64;
        let v = t.frames()[A].get(&f).copied();
        debug_assert_eq!(v, Some(super::tracker::Sym::Data(k as u32 * n + label)));
        expected[A].remove(&f);
    }
    for k in 0..layout.sections {
        let f = layout.unit_of(k, w) as i64;
        expected[A].insert(f + shift, super::tracker::Sym::Data(k as u32 * n + label));
    }
    let mark = t.log_len();
    for m1 in t.relocation_moves(label, B, None, pilot).into_iter().take(BREADTH) {
        let Some(t1) = t.try_move(&m1, |x| x.find(label).map_or(false, |(s, _)| s == B)) else { continue };
        let mark1 = t1.log_len();
        for m2 in t1.relocation_moves(label, A, Some(home + shift), pilot).into_iter().take(BREADTH) {
            let Some(mut t2) = t1.try_move(&m2, |x| x.find(label) == Some((A, home + shift))) else { continue };
            if t2.undo_range(mark, mark1).is_err() {
                continue;
            }
            if t2.offsets() == super::streams::HOME && t2.frames() == expected {
                return Some(t2);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::apply_sequence;

    #[test]
    fn no_bits_is_identity() {
        let l = SectionLayout::shepherd(3, 3).unwrap();
        assert!(compile_section_transfer(&[], Side::Right, &l).unwrap().is_empty());
    }

    #[test]
    fn sparse_layout_rejected() {
        let l = SectionLayout::sparse(3, 2).unwrap();
        assert!(matches!(compile_section_transfer(&[0], Side::Right, &l), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn one_bit_moves_right() {
        let l = SectionLayout::shepherd(3, 3).unwrap();
        let p = l.polymer();
        let seq = compile_section_transfer(&[1], Side::Right, &l).unwrap();
        for x in 0..8u64 {
            let inputs = [x, 0b101, 0b010];
            let out = apply_sequence(&p, &l.initial_configuration(&inputs).unwrap(), &seq).unwrap();
            let moved = |k: usize| (inputs[k] >> 1) & 1;
            assert_eq!(l.read(&out, 1), (inputs[1] & !2) | moved(0) << 1);
            assert_eq!(l.read(&out, 2), (inputs[2] & !2) | moved(1) << 1);
            assert_eq!(l.read(&out, 0), inputs[0] & !2);
            // The outermost bit sits one period past the last section.
            let spill = l.unit_of(2, 1) + 3 * l.period;
            assert_eq!(out.states[spill] as u64, moved(2));
        }
    }
}
