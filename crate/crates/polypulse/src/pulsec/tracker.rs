//! Symbolic bookkeeping of stream contents during circuit compilation.
//!
//! Every unit holds zero, a known one, or a labelled data bit. Swaps move whole
//! streams; a window Fredkin controlled by a known one is an exact exchange,
//! and a data-controlled window is allowed only where it is the intended gate
//! or where both targets are equal constants. Under these rules a relocation
//! sequence is a pure permutation of units and can be undone by reversal.

use super::fredkin::Window;
use super::streams::{apply_swap, plan_swaps, slot_of, stream_in, Offsets, HOME};
use super::swap::swap_pulses;
use crate::error::{Error, Result};
use crate::lattice::{PulseSequence, Side};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    One,
    Data(u32),
}

/// A data-controlled exchange that a window step is meant to perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateTriple {
    pub control: u32,
    pub targets: [u32; 2],
}

#[derive(Debug, Clone)]
pub struct Tracker {
    len: i64,
    off: Offsets,
    /// Per home stream: frame coordinate (home unit index) to symbol.
    content: [BTreeMap<i64, Sym>; 3],
    pub seq: PulseSequence,
    /// Steps taken so far, for symbolic undo.
    log: Vec<Op>,
}

#[derive(Debug, Clone, Copy)]
enum Op {
    /// Alignment away from the recorded offsets.
    Align(Offsets),
    Window(Window),
}

/// One way of bringing a labelled bit into another stream.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Move {
    target: Offsets,
    window: Window,
    cost: i64,
}

impl Tracker {
    pub fn new(len: usize) -> Self {
        Tracker { len: len as i64, off: HOME, content: Default::default(), seq: PulseSequence::new(), log: Vec::new() }
    }

    pub fn offsets(&self) -> Offsets {
        self.off
    }

    pub fn place(&mut self, stream: usize, frame: i64, sym: Sym) {
        self.content[stream].insert(frame, sym);
    }

    pub fn at(&self, unit: i64) -> Option<Sym> {
        if unit < 0 || unit >= self.len {
            return None;
        }
        let s = stream_in(&self.off, unit.rem_euclid(3) as usize);
        self.content[s].get(&(unit - self.off[s])).copied()
    }

    /// Stream and frame coordinate of a data label.
    pub fn find(&self, label: u32) -> Option<(usize, i64)> {
        (0..3).find_map(|s| self.content[s].iter().find(|(_, &v)| v == Sym::Data(label)).map(|(&f, _)| (s, f)))
    }

    /// Content as `(unit, symbol)` pairs at the current offsets.
    pub fn snapshot(&self) -> BTreeMap<i64, Sym> {
        let mut m = BTreeMap::new();
        for s in 0..3 {
            for (&f, &v) in &self.content[s] {
                m.insert(f + self.off[s], v);
            }
        }
        m
    }

    /// Frame view: stream and frame for every symbol, independent of offsets.
    pub fn frames(&self) -> [BTreeMap<i64, Sym>; 3] {
        self.content.clone()
    }

    fn in_bounds(&self, off: &Offsets) -> bool {
        (0..3).all(|s| {
            self.content[s].keys().all(|&f| {
                let u = f + off[s];
                u >= 1 && u <= self.len - 4
            })
        })
    }

    /// Moves the streams to `target`, one swap at a time. Content must stay off
    /// the end unit and out of the last triple throughout.
    pub fn align(&mut self, target: &Offsets) -> Result<()> {
        let path = plan_swaps(&self.off, target)?;
        let mut off = self.off;
        for &k in &path {
            off = apply_swap(&off, k);
            if !self.in_bounds(&off) {
                return Err(Error::SectionOverflow(format!("alignment {target:?} pushes data to a polymer end")));
            }
            self.seq.extend_pulses(&swap_pulses(k, true));
        }
        self.log.push(Op::Align(self.off));
        self.off = off;
        Ok(())
    }

    /// Applies every window of shape `w`. With `gate` set, only the listed
    /// data-controlled exchanges may change anything.
    pub fn window(&mut self, w: Window, gate: Option<&[GateTriple]>) -> Result<()> {
        let cs = stream_in(&self.off, w.control_residue());
        let [o1, o2] = w.target_offsets();
        let mut swaps = Vec::new();
        for (&f, &sym) in &self.content[cs] {
            let c = f + self.off[cs];
            let (t1, t2) = (self.at(c + o1), self.at(c + o2));
            if t1 == t2 {
                continue;
            }
            match (sym, gate) {
                (Sym::One, None) => swaps.push((c + o1, c + o2)),
                (Sym::Data(l), Some(g)) => {
                    let hit = g.iter().any(|gt| {
                        gt.control == l
                            && matches!((t1, t2), (Some(Sym::Data(a)), Some(Sym::Data(b)))
                                if (a, b) == (gt.targets[0], gt.targets[1]) || (b, a) == (gt.targets[0], gt.targets[1]))
                    });
                    if !hit {
                        return Err(Error::Internal(format!("data {l} would control a stray exchange")));
                    }
                }
                (Sym::One, Some(_)) => return Err(Error::Internal("constant-controlled exchange during a gate".into())),
                (Sym::Data(l), None) => return Err(Error::Internal(format!("data {l} would control an exchange"))),
            }
        }
        if gate.is_none() {
            for (u1, u2) in swaps {
                self.exchange(u1, u2);
            }
        }
        if !self.in_bounds(&self.off) {
            return Err(Error::SectionOverflow("window exchange reaches a polymer end".into()));
        }
        self.seq.extend_pulses(&w.pulses());
        self.log.push(Op::Window(w));
        Ok(())
    }

    fn exchange(&mut self, u1: i64, u2: i64) {
        let s1 = stream_in(&self.off, u1.rem_euclid(3) as usize);
        let s2 = stream_in(&self.off, u2.rem_euclid(3) as usize);
        let (f1, f2) = (u1 - self.off[s1], u2 - self.off[s2]);
        let v1 = self.content[s1].remove(&f1);
        let v2 = self.content[s2].remove(&f2);
        if let Some(v) = v1 {
            self.content[s2].insert(f2, v);
        }
        if let Some(v) = v2 {
            self.content[s1].insert(f1, v);
        }
    }

    /// Offsets placing frames `(fc, fa, fb)` of streams `(sc, sa, sb)` on one window
    /// with control `sc` and targets `sa`, `sb` in either order.
    fn placements(&self, sc: (usize, i64), sa: (usize, i64), sb: (usize, i64)) -> Vec<Move> {
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            let offs = match side {
                Side::Left => [1i64, 2],
                Side::Right => [-2, -1],
            };
            for (oa, ob) in [(offs[0], offs[1]), (offs[1], offs[0])] {
                let num = sc.1 + sa.1 + sb.1 - oa - ob;
                if num.rem_euclid(3) != 0 {
                    continue;
                }
                let c = num / 3;
                let mut target = [0; 3];
                target[sc.0] = c - sc.1;
                target[sa.0] = c + oa - sa.1;
                target[sb.0] = c + ob - sb.1;
                let first = match side {
                    Side::Left => c.rem_euclid(3) as usize,
                    Side::Right => (c - 2).rem_euclid(3) as usize,
                };
                debug_assert_eq!(slot_of(&target, sc.0), c.rem_euclid(3) as usize);
                let cost = (0..3).map(|s| (target[s] - self.off[s]).abs()).sum();
                out.push(Move { target, window: Window { first, control: side }, cost });
            }
        }
        out
    }

    /// Candidate moves of `label` into `dest` (at `dest_frame` if given) using
    /// the constant one at `pilot`, cheapest first.
    pub(crate) fn relocation_moves(&self, label: u32, dest: usize, dest_frame: Option<i64>, pilot: (usize, i64)) -> Vec<Move> {
        let Some(src) = self.find(label) else { return Vec::new() };
        let frames: Vec<i64> = match dest_frame {
            Some(f) => vec![f],
            None => {
                let lo = -self.len - self.len.rem_euclid(3) + dest as i64;
                (lo..2 * self.len)
                    .step_by(3)
                    .filter(|f| !self.content[dest].contains_key(f))
                    .collect()
            }
        };
        let mut moves: Vec<(Move, i64)> = Vec::new();
        for fd in frames {
            for m in self.placements(pilot, src, (dest, fd)) {
                moves.push((m, fd));
            }
        }
        moves.sort_by_key(|(m, fd)| (m.cost, *fd, m.window.first, m.window.control == Side::Right));
        moves.into_iter().map(|(m, _)| m).collect()
    }

    pub(crate) fn log_len(&self) -> usize {
        self.log.len()
    }

    /// Replays logged steps `from..to` backwards, emitting their pulses.
    pub(crate) fn undo_range(&mut self, from: usize, to: usize) -> Result<()> {
        let ops: Vec<Op> = self.log[from..to].iter().rev().copied().collect();
        for op in ops {
            match op {
                Op::Align(prev) => self.align(&prev)?,
                Op::Window(w) => self.window(w, None)?,
            }
        }
        Ok(())
    }

    pub(crate) fn try_move(&self, m: &Move, check: impl Fn(&Tracker) -> bool) -> Option<Tracker> {
        let mut t = self.clone();
        t.align(&m.target).ok()?;
        t.window(m.window, None).ok()?;
        check(&t).then_some(t)
    }

    /// Moves `label` into stream `dest`, to `dest_frame` if given.
    pub fn relocate(&mut self, label: u32, dest: usize, dest_frame: Option<i64>, pilot: (usize, i64)) -> Result<()> {
        for m in self.relocation_moves(label, dest, dest_frame, pilot) {
            let ok = |t: &Tracker| {
                t.find(label).map_or(false, |(s, f)| s == dest && dest_frame.map_or(true, |d| d == f))
            };
            if let Some(t) = self.try_move(&m, ok) {
                *self = t;
                return Ok(());
            }
        }
        Err(Error::SectionOverflow(format!("no clean way to move bit {label} into stream {dest}")))
    }

    /// Aligns the three labels of `gates[0]` on one window and applies it,
    /// provided every other active window is harmless.
    fn try_gate(&self, gates: &[GateTriple]) -> Option<Tracker> {
        let g = gates[0];
        let pc = self.find(g.control)?;
        let pa = self.find(g.targets[0])?;
        let pb = self.find(g.targets[1])?;
        if pc.0 == pa.0 || pc.0 == pb.0 || pa.0 == pb.0 {
            return None;
        }
        let mut moves = self.placements(pc, pa, pb);
        moves.sort_by_key(|m| m.cost);
        for m in moves {
            let mut t = self.clone();
            if t.align(&m.target).is_ok() && t.window(m.window, Some(gates)).is_ok() {
                return Some(t);
            }
        }
        None
    }

    /// Applies the Fredkin gate described by `gates` (one entry per section,
    /// the first being the reference section). Operands sharing a stream are
    /// first moved apart with the pilots; the moves are undone afterwards.
    pub fn gate(&mut self, gates: &[GateTriple], pilots: &[Option<(usize, i64)>; 3], breadth: usize) -> Result<()> {
        let g = gates[0];
        let labels = [g.control, g.targets[0], g.targets[1]];
        let mut streams = [0usize; 3];
        for (k, &l) in labels.iter().enumerate() {
            streams[k] = self.find(l).ok_or_else(|| Error::Internal(format!("label {l} lost")))?.0;
        }
        let plans = staging_plans(streams, pilots);
        let start = self.clone();
        let mark = self.log.len();
        let shortest = plans.first().map_or(0, |p| p.len());
        for plan in &plans {
            // Longer detours are searched less widely.
            let width = if plan.len() == shortest { breadth } else { (breadth / 4).max(2) };
            if let Some(mut done) = self.search(&start, plan, &labels, pilots, gates, width) {
                // Undo everything except the gate window itself.
                let end = done.log.len() - 1;
                done.undo_range(mark, end)?;
                if done.off != start.off || done.content != start.content {
                    return Err(Error::Internal("gate staging did not unwind".into()));
                }
                *self = done;
                return Ok(());
            }
        }
        Err(Error::SectionOverflow(format!("no clean placement for gate {:?}", labels)))
    }

    fn search(
        &self,
        start: &Tracker,
        plan: &[(usize, usize)],
        labels: &[u32; 3],
        pilots: &[Option<(usize, i64)>; 3],
        gates: &[GateTriple],
        breadth: usize,
    ) -> Option<Tracker> {
        if plan.is_empty() {
            return start.try_gate(gates);
        }
        let (who, dest) = plan[0];
        let label = labels[who];
        let src = start.find(label)?.0;
        let pilot_stream = (0..3).find(|&s| s != dest && s != src).and_then(|s| pilots[s])?;
        for m in start.relocation_moves(label, dest, None, pilot_stream).into_iter().take(breadth) {
            let ok = |t: &Tracker| t.find(label).map_or(false, |(s, _)| s == dest);
            if let Some(t) = start.try_move(&m, ok) {
                if let Some(done) = self.search(&t, &plan[1..], labels, pilots, gates, breadth) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Sequences of up to three (operand, destination stream) moves that leave the
/// operands in distinct streams, shortest first. Each move needs a pilot in
/// the stream that is neither source nor destination.
fn staging_plans(streams: [usize; 3], pilots: &[Option<(usize, i64)>; 3]) -> Vec<Vec<(usize, usize)>> {
    let distinct = |s: &[usize; 3]| s[0] != s[1] && s[0] != s[2] && s[1] != s[2];
    let mut out = Vec::new();
    let mut frontier = vec![(Vec::new(), streams)];
    for _ in 0..=3 {
        let mut next = Vec::new();
        for (plan, s) in frontier {
            if distinct(&s) {
                out.push(plan.clone());
            }
            if plan.len() == 3 {
                continue;
            }
            for who in 0..3 {
                for dest in 0..3 {
                    if dest == s[who] {
                        continue;
                    }
                    if pilots[3 - s[who] - dest].is_none() || plan.last().map_or(false, |&(w, _)| w == who) {
                        continue;
                    }
                    let mut p = plan.clone();
                    p.push((who, dest));
                    let mut s2 = s;
                    s2[who] = dest;
                    next.push((p, s2));
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_tracks_streams() {
        let mut t = Tracker::new(60);
        t.place(0, 30, Sym::Data(1));
        t.place(2, 32, Sym::One);
        t.align(&[3, 0, -3]).unwrap();
        assert_eq!(t.at(33), Some(Sym::Data(1)));
        assert_eq!(t.at(29), Some(Sym::One));
        assert_eq!(t.find(1), Some((0, 30)));
    }

    #[test]
    fn alignment_refuses_the_end() {
        let mut t = Tracker::new(30);
        t.place(0, 3, Sym::One);
        assert!(t.align(&[-3, 3, 0]).is_err());
    }
}
