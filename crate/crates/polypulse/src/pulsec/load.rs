//! Loading bits through the end unit and reading them back out.

use super::streams::{apply_swap, is_valid, plan_swaps, swaps_to_sequence, Offsets, HOME};
use crate::error::{Error, Result};
use crate::lattice::{apply_sequence, Configuration, Polymer, Pulse, PulseSequence, Side, SpeciesId, A, B, C};

fn check_abc(polymer: &Polymer) -> Result<usize> {
    let labels: Vec<char> = polymer.pattern().iter().map(|s| s.label).collect();
    if labels != ['A', 'B', 'C'] {
        return Err(Error::InvalidPolymer("compiler routines need the ABC pattern".into()));
    }
    polymer.whole_periods()
}

/// Number of bits the load protocol can place on `polymer`.
pub fn load_capacity(polymer: &Polymer) -> Result<usize> {
    let triples = check_abc(polymer)?;
    Ok(3 * (triples.saturating_sub(3) / 2))
}

/// Sequence of slot swaps moving stream `x` one triple right and `y` one triple left.
fn push(x: SpeciesId, y: SpeciesId) -> PulseSequence {
    let mut d = HOME;
    d[x] = 3;
    d[y] = -3;
    swaps_to_sequence(&plan_swaps(&HOME, &d).expect("push plan"))
}

fn parse_bits(bits: &str) -> Result<Vec<u8>> {
    bits.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!("bit string contains {c:?}"))),
        })
        .collect()
}

/// Loads `a1 b1 c1 a2 b2 c2 …` onto the first triples of an all-zero polymer.
///
/// Values are written into the end triple and pushed inward stream by stream:
/// first the `C` values, then the `B` values, then the `A` values. Each push
/// moves one stream a triple inward while a stream that is still empty absorbs
/// the opposite displacement. A partial last triple is padded with zeros.
pub fn compile_load(bits: &str, polymer: &Polymer) -> Result<PulseSequence> {
    let mut v = parse_bits(bits)?;
    while v.len() % 3 != 0 {
        v.push(0);
    }
    let capacity = load_capacity(polymer)?;
    if v.len() > capacity {
        return Err(Error::CapacityExceeded { needed: v.len(), capacity });
    }
    let n = v.len() / 3;
    let mut seq = PulseSequence::new();
    seq.metadata = format!("load {}", bits.trim());
    if n == 0 {
        return Ok(seq);
    }
    let (a, b, c): (Vec<u8>, Vec<u8>, Vec<u8>) =
        ((0..n).map(|t| v[3 * t]).collect(), (0..n).map(|t| v[3 * t + 1]).collect(), (0..n).map(|t| v[3 * t + 2]).collect());
    let end = |k| Pulse::pi_end(A, Side::Left, k);
    for t in (0..n).rev() {
        if t + 1 < n {
            seq.extend(&push(C, B));
        }
        if c[t] == 1 {
            // Write A0, copy it through B0 into C0, then clear B0 and A0.
            seq.extend_pulses(&[end(0), Pulse::pi(B, 1, 0), Pulse::pi(C, 1, 0), Pulse::pi(C, 1, 1), Pulse::pi(B, 1, 1), end(0)]);
        }
    }
    for _ in 1..n {
        seq.extend(&push(C, A));
    }
    for t in (0..n).rev() {
        if t + 1 < n {
            seq.extend(&push(B, A));
        }
        if b[t] == 1 {
            seq.extend_pulses(&[end(0), Pulse::pi(B, 1, 0), Pulse::pi(B, 1, 1), end(1)]);
        }
    }
    for t in (0..n).rev() {
        if t + 1 < n {
            seq.extend(&push(A, C));
        }
        if a[t] == 1 {
            seq.push(end(b[0]));
        }
    }
    Ok(seq)
}

/// Runs the load protocol from `initial`, which must be all zero.
pub fn run_load(polymer: &Polymer, initial: &Configuration, bits: &str) -> Result<Configuration> {
    if !initial.is_zero() {
        return Err(Error::NonZeroInitialState);
    }
    apply_sequence(polymer, initial, &compile_load(bits, polymer)?)
}

/// How to interpret the two probe pulses sent after an unload sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutDescriptor {
    /// `ω^{A:end}_0` and `ω^{A:end}_1`; exactly one is resonant, selected by the state of `B0`.
    pub probes: [Pulse; 2],
    pub rule: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeResponse {
    Attenuated,
    Amplified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Readout {
    /// Index of the probe that interacted with the end unit.
    pub matched_probe: u8,
    pub response: ProbeResponse,
    pub bit: u8,
}

impl ReadoutDescriptor {
    fn new() -> Self {
        ReadoutDescriptor {
            probes: [Pulse::pi_end(A, Side::Left, 0), Pulse::pi_end(A, Side::Left, 1)],
            rule: "attenuated probe => bit 1; amplified probe => bit 0",
        }
    }

    /// Classical evaluation of the probes against a configuration.
    pub fn read(&self, config: &Configuration) -> Readout {
        let matched_probe = config.states[1];
        let end = config.states[0];
        let response = if end == 1 { ProbeResponse::Attenuated } else { ProbeResponse::Amplified };
        let bit = match response {
            ProbeResponse::Attenuated => 1,
            ProbeResponse::Amplified => 0,
        };
        Readout { matched_probe, response, bit }
    }
}

/// Stream offsets bringing the value at `unit` to the end unit.
fn unload_target(unit: usize) -> Result<Vec<SpeciesId>> {
    let x = unit as i64;
    let s = unit % 3;
    let mut best: Option<Vec<SpeciesId>> = None;
    for comp in (0..3).filter(|&k| k != s) {
        let third = 3 - s - comp;
        for d in -3..=3 {
            let mut t: Offsets = [0; 3];
            t[s] = -x;
            t[comp] = x - d;
            t[third] = d;
            if !is_valid(&t) {
                continue;
            }
            let path = plan_swaps(&HOME, &t)?;
            if best.as_ref().map_or(true, |b| path.len() < b.len()) {
                best = Some(path);
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no unload plan".into()))
}

/// Moves the value stored at `unit` to the end unit and describes the readout.
pub fn compile_unload(unit: usize, polymer: &Polymer) -> Result<(PulseSequence, ReadoutDescriptor)> {
    let triples = check_abc(polymer)?;
    if unit >= 3 * triples.saturating_sub(1) {
        return Err(Error::LayoutMismatch(format!("unit {unit} is not a readable location")));
    }
    let path = unload_target(unit)?;
    let mut off = HOME;
    for &k in &path {
        off = apply_swap(&off, k);
    }
    debug_assert_eq!(off[unit % 3], -(unit as i64));
    let mut seq = swaps_to_sequence(&path);
    seq.metadata = format!("unload unit {unit}");
    Ok((seq, ReadoutDescriptor::new()))
}

/// Unload of bit `index` of a string loaded by [`compile_load`].
pub fn compile_unload_loaded(index: usize, loaded_bits: usize, polymer: &Polymer) -> Result<(PulseSequence, ReadoutDescriptor)> {
    if index >= loaded_bits.div_ceil(3) * 3 {
        return Err(Error::LayoutMismatch(format!("bit {index} was not loaded")));
    }
    compile_unload(index, polymer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits_of(v: u32, len: usize) -> String {
        (0..len).map(|k| if (v >> k) & 1 == 1 { '1' } else { '0' }).collect()
    }

    #[test]
    fn single_bit_starts_with_end_write() {
        let p = Polymer::abc(15);
        let s = compile_load("1", &p).unwrap();
        assert_eq!(s.pulses[0], Pulse::pi_end(A, Side::Left, 0));
        let out = apply_sequence(&p, &Configuration::zeros(&p), &s).unwrap();
        assert_eq!(out.to_string(), format!("1{}", "0".repeat(14)));
    }

    #[test]
    fn zero_string_is_identity() {
        let p = Polymer::abc(27);
        let out = run_load(&p, &Configuration::zeros(&p), "000000").unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn exhaustive_small_loads() {
        for n in 1..=3usize {
            let p = Polymer::abc(3 * (2 * n + 3));
            for v in 0..(1u32 << (3 * n)) {
                let bits = bits_of(v, 3 * n);
                let out = run_load(&p, &Configuration::zeros(&p), &bits).unwrap();
                let s = out.to_string();
                assert_eq!(&s[..3 * n], bits);
                assert!(s[3 * n..].chars().all(|c| c == '0'));
            }
        }
    }

    #[test]
    fn capacity_and_precondition() {
        let p = Polymer::abc(15);
        assert_eq!(load_capacity(&p).unwrap(), 3);
        assert!(matches!(compile_load("1111", &p), Err(Error::CapacityExceeded { .. })));
        let mut c = Configuration::zeros(&p);
        c.states[4] = 1;
        assert_eq!(run_load(&p, &c, "1"), Err(Error::NonZeroInitialState));
    }

    #[test]
    fn readout_at_the_end() {
        let p = Polymer::abc(9);
        let (s, d) = compile_unload(0, &p).unwrap();
        assert!(s.is_empty());
        let one = Configuration::parse(&p, "110000000").unwrap();
        let r = d.read(&one);
        assert_eq!((r.matched_probe, r.response, r.bit), (1, ProbeResponse::Attenuated, 1));
        let zero = Configuration::parse(&p, "000000000").unwrap();
        let r = d.read(&zero);
        assert_eq!((r.matched_probe, r.response, r.bit), (0, ProbeResponse::Amplified, 0));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=6);
            let p = Polymer::abc(3 * (2 * n + 3));
            let bits: String = (0..3 * n).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect();
            let loaded = run_load(&p, &Configuration::zeros(&p), &bits).unwrap();
            let k = rng.gen_range(0..3 * n);
            let (s, d) = compile_unload_loaded(k, 3 * n, &p).unwrap();
            let moved = apply_sequence(&p, &loaded, &s).unwrap();
            assert_eq!(d.read(&moved).bit, bits.as_bytes()[k] - b'0', "bits {bits} index {k}");
        }
    }
}
