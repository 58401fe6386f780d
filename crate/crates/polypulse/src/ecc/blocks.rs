//! Majority voting among redundant copies and scrambling of block contents.

use super::program::EcProgram;
use crate::error::{Error, Result};
use crate::lattice::{Configuration, Polymer, Pulse, PulseSequence, Side, SpeciesId, A, B, C};
use crate::pulsec::{xor_from_left, xor_from_right, Offsets, Window, HOME};

const LABELS: [char; 3] = ['A', 'B', 'C'];

/// Resets the middle unit to its neighbours' value when they agree.
fn restore(y: SpeciesId) -> [Pulse; 3] {
    [Pulse::pump(y, 0, 0, 2), Pulse::pump(y, 1, 1, 2), Pulse::pi(y, 1, 1)]
}

/// Swap of adjacent species `x`, `y` that also covers both polymer ends.
fn swap_with_ends(x: SpeciesId, y: SpeciesId) -> Vec<Pulse> {
    let mut left = xor_from_left(y).to_vec();
    if y == C {
        left.push(Pulse::pi_end(C, Side::Right, 1));
    }
    let mut v = left.clone();
    v.extend(xor_from_right(x, true));
    v.extend(left);
    v
}

fn require_decay(polymer: &Polymer, species: &[SpeciesId]) -> Result<()> {
    for &s in species {
        let sp = polymer.species(s);
        if sp.fast_decay.is_none() || sp.num_states < 3 {
            return Err(Error::NoFastDecay(sp.label));
        }
    }
    Ok(())
}

/// Majority vote inside every triple: restore `B` from `A` and `C`, then the
/// same after exchanging `B` with `C`, then after exchanging `A` with `B`.
pub fn compile_triple_vote(polymer: &Polymer) -> Result<PulseSequence> {
    if polymer.period() != 3 {
        return Err(Error::InvalidPolymer("triple vote needs an ABC polymer".into()));
    }
    require_decay(polymer, &[B])?;
    let mut v = restore(B).to_vec();
    v.extend(swap_with_ends(B, C));
    v.extend(restore(B));
    v.extend(swap_with_ends(A, B));
    v.extend(restore(B));
    let mut seq = PulseSequence::from_pulses(v);
    seq.metadata = "triple vote".into();
    Ok(seq)
}

/// Periodic layout for error correction, in triples: a margin, then per
/// period an optional shepherd block of `Z = 1` (`Z` the species two after
/// the data species), `n` blank, `n` data and `n` blank triples, then a margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockFormat {
    pub n: usize,
    pub species: SpeciesId,
    pub blocks: usize,
    pub shepherd: bool,
}

impl BlockFormat {
    pub fn new(n: usize, species: SpeciesId, blocks: usize, shepherd: bool) -> Result<Self> {
        if n < 2 || species > 2 || blocks == 0 {
            return Err(Error::InvalidArgument(format!("block format n={n} species={species} blocks={blocks}")));
        }
        Ok(BlockFormat { n, species, blocks, shepherd })
    }

    pub fn margin(&self) -> usize {
        3 * self.n + 4
    }

    pub fn period(&self) -> usize {
        if self.shepherd {
            4 * self.n
        } else {
            2 * self.n
        }
    }

    pub fn total_triples(&self) -> usize {
        2 * self.margin() + self.blocks * self.period()
    }

    pub fn polymer(&self) -> Polymer {
        Polymer::abc_dissipative(3 * self.total_triples())
    }

    fn period_start(&self, k: usize) -> usize {
        self.margin() + k * self.period()
    }

    /// First triple of data block `k`.
    pub fn data_start(&self, k: usize) -> usize {
        self.period_start(k) + if self.shepherd { 2 * self.n } else { 0 }
    }

    pub fn shepherd_start(&self, k: usize) -> Option<usize> {
        self.shepherd.then(|| self.period_start(k))
    }

    pub fn species_triple(&self) -> (SpeciesId, SpeciesId, SpeciesId) {
        let x = self.species;
        (x, (x + 1) % 3, (x + 2) % 3)
    }

    pub fn data_units(&self, k: usize) -> Vec<usize> {
        let s = self.data_start(k);
        (0..self.n).map(|i| 3 * (s + i) + self.species).collect()
    }

    pub fn all_data_units(&self) -> Vec<usize> {
        (0..self.blocks).flat_map(|k| self.data_units(k)).collect()
    }

    /// Data blocks filled with `values[k]`, shepherd blocks with ones.
    pub fn configuration(&self, values: &[u8]) -> Result<Configuration> {
        if values.len() != self.blocks || values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidArgument(format!("{} block values for {} blocks", values.len(), self.blocks)));
        }
        let mut states = vec![0u8; 3 * self.total_triples()];
        let (_, _, z) = self.species_triple();
        for k in 0..self.blocks {
            for u in self.data_units(k) {
                states[u] = values[k];
            }
            if let Some(s) = self.shepherd_start(k) {
                for i in 0..self.n {
                    states[3 * (s + i) + z] = 1;
                }
            }
        }
        Ok(Configuration { states })
    }

    /// Copies in each data block that differ from the block's intended value.
    pub fn wrong_copies(&self, states: &[u8], values: &[u8]) -> usize {
        (0..self.blocks).map(|k| self.data_units(k).iter().filter(|&&u| states[u] != values[k]).count()).sum()
    }
}

/// Block distances `(left, right)` of the two voting partners for shifts
/// `(s1, s2)`: the right partner is `2·s1 − s2` triples away, the left one
/// `2·s2 − s1 + 1`. Both must be positive so that units outside a block
/// never see two partners inside it.
pub fn vote_partners(s1: usize, s2: usize) -> (i64, i64) {
    let (s1, s2) = (s1 as i64, s2 as i64);
    (2 * s2 - s1 + 1, 2 * s1 - s2)
}

/// `Z ^= Y`, flip `Y` where `X=1, Z=0`, `Z ^= Y`: exchanges `XYZ = 100` with
/// `111` and fixes every other triple value.
fn unfold(y: SpeciesId, z: SpeciesId) -> Vec<Pulse> {
    let mut v = xor_from_left(z).to_vec();
    v.push(Pulse::pi(y, 1, 0));
    v.extend(xor_from_left(z));
    v
}

/// Clears `Y` and `Z` wherever `X` is 0: `Y ^= Z`, reset `Z` where `Y = 0`, `Y ^= Z`.
fn cleanup(y: SpeciesId, z: SpeciesId) -> Vec<Pulse> {
    let yz = xor_from_right(y, false);
    let mut v = yz.clone();
    v.push(Pulse::pump(z, 0, 0, 2));
    v.push(Pulse::pump(z, 0, 1, 2));
    v.extend(yz);
    v
}

/// One vote of every data copy with two partner copies of the same block.
///
/// The block is unfolded so every triple carries its data value in all three
/// species, the `Y` copies are shifted `s1` triples left and the `Z` copies
/// `s2` right, each data unit is restored from its new neighbours, and the
/// shifts and the unfolding are undone. Blocks holding data in another
/// species are left as they were.
pub fn block_vote_program(format: &BlockFormat, s1: usize, s2: usize) -> Result<EcProgram> {
    let (dl, dr) = vote_partners(s1, s2);
    if s1 + s2 >= format.n || dl <= 0 || dr <= 0 {
        return Err(Error::ShiftOutOfRange(format!("shifts ({s1},{s2}) for blocks of {}", format.n)));
    }
    let (x, y, z) = format.species_triple();
    let mut shifted: Offsets = HOME;
    shifted[x] = 3 * (s1 as i64 - s2 as i64);
    shifted[y] = -3 * s1 as i64;
    shifted[z] = 3 * s2 as i64;
    let mut p = EcProgram::new();
    p.pulses(&unfold(y, z)).shift(HOME, shifted).pulses(&restore(x)).shift(shifted, HOME);
    p.pulses(&unfold(y, z)).pulses(&cleanup(y, z));
    Ok(p)
}

pub fn compile_block_vote(format: &BlockFormat, s1: usize, s2: usize) -> Result<PulseSequence> {
    let polymer = format.polymer();
    require_decay(&polymer, &[format.species, (format.species + 2) % 3])?;
    let mut seq = block_vote_program(format, s1, s2)?.to_sequence()?;
    seq.metadata = format!("block vote species={} n={} shifts={s1},{s2}", LABELS[format.species], format.n);
    Ok(seq)
}

/// Which end of each data block a scramble exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockEnd {
    /// First `m` copies with the next `m`.
    Front,
    /// Last `m` copies with the `m` before them.
    Back,
}

/// Offsets placing the `Z` unit at frame `fz` and the `X` unit at frame `fx` in
/// one Fredkin window with an empty `Y` unit, cheapest first.
fn pairing(x: SpeciesId, y: SpeciesId, z: SpeciesId, fz: i64, fx: i64, reach: i64) -> (Offsets, Window) {
    let mut best: Option<(i64, Offsets, Window)> = None;
    for d in [1i64, 2, -1, -2] {
        let d2 = if d > 0 { 3 - d } else { -3 - d };
        let tx = fx.div_euclid(3);
        for ty in tx - reach..=tx + reach {
            let fy = 3 * ty + y as i64;
            let num = fz + fx + fy - d - d2;
            if num.rem_euclid(3) != 0 {
                continue;
            }
            let c = num / 3;
            let mut off = HOME;
            off[z] = c - fz;
            off[x] = c + d - fx;
            off[y] = c + d2 - fy;
            let cost: i64 = off.iter().map(|o| o.abs()).sum();
            let (side, first) = if d > 0 { (Side::Left, c) } else { (Side::Right, c - 2) };
            let w = Window { first: first.rem_euclid(3) as usize, control: side };
            if best.as_ref().map_or(true, |b| cost < b.0) {
                best = Some((cost, off, w));
            }
        }
    }
    let (_, off, w) = best.expect("some pairing exists");
    (off, w)
}

/// Window holding the `Z` unit at frame `fz` under offsets `off`, on the same side as `w`.
fn window_at(off: &Offsets, z: SpeciesId, fz: i64, side: Side) -> Window {
    let c = fz + off[z];
    let first = if side == Side::Left { c } else { c - 2 };
    Window { first: first.rem_euclid(3) as usize, control: side }
}

/// Exchanges `m` copies at one end of every data block with the next `m`,
/// using the shepherd block of ones as Fredkin controls: stash the end
/// copies in the empty `Y` units, move the shepherds on by `m` triples and
/// swap the stash with the next copies, move back and unstash.
pub fn scramble_program(format: &BlockFormat, m: usize, end: BlockEnd) -> Result<EcProgram> {
    let n = format.n;
    if m == 0 || 2 * m > n {
        return Err(Error::ShiftOutOfRange(format!("scramble width {m} for blocks of {n}")));
    }
    let Some(s) = format.shepherd_start(0) else {
        return Err(Error::InvalidArgument("scrambling needs a shepherd block".into()));
    };
    let (x, y, z) = format.species_triple();
    let d = format.data_start(0);
    let (zt, xt, dir) = match end {
        BlockEnd::Front => (s + n - m, d, 1i64),
        BlockEnd::Back => (s, d + n - m, -1),
    };
    let fz = 3 * zt as i64 + z as i64;
    let fx = 3 * xt as i64 + x as i64;
    let (o1, w1) = pairing(x, y, z, fz, fx, 2 * n as i64);
    let mut o2 = o1;
    let m = m as i64;
    o2[x] -= 2 * m * dir;
    o2[y] += m * dir;
    o2[z] += m * dir;
    let w2 = window_at(&o2, z, fz, w1.control);
    let mut p = EcProgram::new();
    p.shift(HOME, o1).pulses(&w1.pulses());
    p.shift(o1, o2).pulses(&w2.pulses());
    p.shift(o2, o1).pulses(&w1.pulses());
    p.shift(o1, HOME);
    Ok(p)
}

pub fn compile_scramble(format: &BlockFormat, m: usize) -> Result<PulseSequence> {
    let mut seq = scramble_program(format, m, BlockEnd::Front)?.to_sequence()?;
    seq.metadata = format!("scramble species={} n={} m={m}", LABELS[format.species], format.n);
    Ok(seq)
}
