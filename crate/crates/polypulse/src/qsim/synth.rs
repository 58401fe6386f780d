//! Synthesis of unitaries on a few basis states from exchanges and rotations
//! on the fixed pair `|0…0⟩`, `|10…0⟩`.

use super::{rotation_matrix, QuantumState};
use crate::error::{Error, Result};
use crate::lattice::{apply_pulse_classical, Configuration, Polymer, Pulse, PulseSequence, Side, A, B, C};
use num_complex::Complex64;
use rand::Rng;
use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::sync::OnceLock;

type Matrix = Vec<Vec<Complex64>>;

/// Rotation of the pair `(pair.0, pair.1)` by the pulse matrix, `pair.0` first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelRotation {
    pub pair: (usize, usize),
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProgramStep {
    /// Basis index `x` goes to `map[x]`.
    Permutation { map: Vec<usize>, sequence: Option<PulseSequence> },
    Rotation { rotation: TwoLevelRotation, sequence: Option<PulseSequence> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveProgram {
    pub dim: usize,
    pub steps: Vec<ProgramStep>,
}

/// Target matrix on the listed basis indices; column `j` is the image of `labels[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryTarget {
    pub labels: Vec<usize>,
    pub matrix: Matrix,
}

impl PrimitiveProgram {
    pub fn rotations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, ProgramStep::Rotation { .. })).count()
    }

    /// Image of basis vector `x` under the whole program.
    pub fn apply_to_basis(&self, x: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        v[x] = Complex64::new(1.0, 0.0);
        for s in &self.steps {
            match s {
                ProgramStep::Permutation { map, .. } => {
                    let mut w = vec![Complex64::new(0.0, 0.0); self.dim];
                    for (i, &a) in v.iter().enumerate() {
                        w[map[i]] = a;
                    }
                    v = w;
                }
                ProgramStep::Rotation { rotation: r, .. } => {
                    let m = rotation_matrix(r.theta, r.phi);
                    let (a, b) = (v[r.pair.0], v[r.pair.1]);
                    v[r.pair.0] = m[0][0] * a + m[0][1] * b;
                    v[r.pair.1] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
        v
    }

    /// Concatenated pulses, when every step has a realization.
    pub fn pulse_sequence(&self) -> Option<PulseSequence> {
        let mut out = PulseSequence::new();
        for s in &self.steps {
            let seq = match s {
                ProgramStep::Permutation { sequence, .. } | ProgramStep::Rotation { sequence, .. } => sequence.as_ref()?,
            };
            out.extend(seq);
            out.mark_cycle();
        }
        Some(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("program dim={} steps={}\n", self.dim, self.steps.len());
        for st in &self.steps {
            match st {
                ProgramStep::Permutation { map, sequence } => {
                    let moved: Vec<String> =
                        map.iter().enumerate().filter(|(i, &m)| *i != m).map(|(i, m)| format!("{i}->{m}")).collect();
                    s += &format!("perm {} pulses={}\n", moved.join(","), sequence.as_ref().map_or(0, |q| q.len()));
                }
                ProgramStep::Rotation { rotation: r, sequence } => {
                    s += &format!(
                        "rot {} {} theta={:?} phi={:?} pulses={}\n",
                        r.pair.0,
                        r.pair.1,
                        r.theta,
                        r.phi,
                        sequence.as_ref().map_or(0, |q| q.len())
                    );
                }
            }
        }
        s
    }
}

/// Matrix of the program restricted to `labels`.
pub fn compose_on_subspace(program: &PrimitiveProgram, labels: &[usize]) -> Matrix {
    let k = labels.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (j, &l) in labels.iter().enumerate() {
        let col = program.apply_to_basis(l);
        for (i, &li) in labels.iter().enumerate() {
            m[i][j] = col[li];
        }
    }
    m
}

/// Frobenius distance between `a` and `e^{iα} u`, minimized over `α`.
pub fn subspace_distance(a: &Matrix, u: &Matrix) -> f64 {
    let mut ip = Complex64::new(0.0, 0.0);
    for (ra, ru) in a.iter().zip(u) {
        for (x, y) in ra.iter().zip(ru) {
            ip += y.conj() * x;
        }
    }
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    let mut d = 0.0;
    for (ra, ru) in a.iter().zip(u) {
        for (x, y) in ra.iter().zip(ru) {
            d += (x - phase * y).norm_sqr();
        }
    }
    d.sqrt()
}

fn unitarity_error(m: &Matrix) -> f64 {
    let k = m.len();
    let mut err: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let s: Complex64 = (0..k).map(|r| m[r][i].conj() * m[r][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            err = err.max((s - want).norm());
        }
    }
    err
}

/// Haar-distributed `k × k` unitary.
pub fn haar_unitary(k: usize, rng: &mut impl Rng) -> Matrix {
    let normal = |rng: &mut dyn rand::RngCore| {
        // Box-Muller.
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    };
    let mut cols: Vec<Vec<Complex64>> =
        (0..k).map(|_| (0..k).map(|_| Complex64::new(normal(rng), normal(rng))).collect()).collect();
    // Modified Gram-Schmidt on columns gives the Q of a QR with positive R diagonal.
    for j in 0..k {
        for i in 0..j {
            let p: Complex64 = (0..k).map(|r| cols[i][r].conj() * cols[j][r]).sum();
            for r in 0..k {
                let sub = p * cols[i][r];
                cols[j][r] -= sub;
            }
        }
        let n = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|x| *x /= n);
    }
    (0..k).map(|r| (0..k).map(|c| cols[c][r]).collect()).collect()
}

/// Parses `dim k labels=000,100,...` followed by `k` rows of `re im` pairs.
pub fn parse_unitary(text: &str, polymer: &Polymer) -> Result<UnitaryTarget> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty unitary file".into() })?;
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "dim" {
        return Err(perr(hl, "expected `dim k labels=...`".into()));
    }
    let k: usize = toks[1].parse().map_err(|_| perr(hl, format!("bad dimension `{}`", toks[1])))?;
    let labels_txt = toks[2].strip_prefix("labels=").ok_or_else(|| perr(hl, "missing labels=".into()))?;
    let probe = QuantumState::new(polymer)?;
    let mut labels = Vec::new();
    for l in labels_txt.split(',') {
        let cfg = Configuration::parse(polymer, l).map_err(|e| perr(hl, format!("label `{l}`: {e}")))?;
        labels.push(probe.index_of(&cfg.states));
    }
    if labels.len() != k {
        return Err(perr(hl, format!("{} labels for dimension {k}", labels.len())));
    }
    let mut matrix = Vec::new();
    for (ln, row) in lines.by_ref().take(k) {
        let nums: Vec<f64> = row
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| perr(ln, format!("bad number `{t}`"))))
            .collect::<Result<_>>()?;
        if nums.len() != 2 * k {
            return Err(perr(ln, format!("row has {} numbers, expected {}", nums.len(), 2 * k)));
        }
        matrix.push(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    }
    if matrix.len() != k {
        return Err(perr(0, format!("{} rows, expected {k}", matrix.len())));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "trailing content after matrix".into()));
    }
    Ok(UnitaryTarget { labels, matrix })
}

/// Permutation taking `u` to 0 and `v` to `e`, fixing everything else it can.
fn staging_map(dim: usize, u: usize, v: usize, e: usize) -> Vec<usize> {
    let mut map: Vec<usize> = (0..dim).collect();
    let mut sources: Vec<usize> = [0, e].into_iter().filter(|x| *x != u && *x != v).collect();
    let mut targets: Vec<usize> = [u, v].into_iter().filter(|x| *x != 0 && *x != e).collect();
    map[u] = 0;
    map[v] = e;
    sources.sort_unstable();
    targets.sort_unstable();
    for (s, t) in sources.into_iter().zip(targets) {
        map[s] = t;
    }
    map
}

fn inverse(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &m) in map.iter().enumerate() {
        inv[m] = i;
    }
    inv
}

/// Exchange pulses of the three-unit ABC polymer: π pulses at phase π, each
/// an exact permutation of the eight basis states.
fn generators() -> Vec<Pulse> {
    let mut g = Vec::new();
    for n in 0..2 {
        g.push(Pulse::pi_end(A, Side::Left, n).with_phase(PI));
        g.push(Pulse::pi_end(C, Side::Right, n).with_phase(PI));
    }
    for l in 0..2 {
        for r in 0..2 {
            g.push(Pulse::pi(B, l, r).with_phase(PI));
        }
    }
    g
}

fn tiny_polymer() -> Polymer {
    Polymer::abc(3)
}

type Perm8 = [u8; 8];

/// Breadth-first tree over all permutations reachable from the generators.
fn word_tree() -> &'static (Vec<Perm8>, HashMap<Perm8, (Perm8, u8)>) {
    static TREE: OnceLock<(Vec<Perm8>, HashMap<Perm8, (Perm8, u8)>)> = OnceLock::new();
    TREE.get_or_init(|| {
        let p = tiny_polymer();
        let gens: Vec<Perm8> = generators()
            .iter()
            .map(|g| {
                let mut m = [0u8; 8];
                for (x, slot) in m.iter_mut().enumerate() {
                    let states: Vec<u8> = (0..3).map(|u| (x >> (2 - u) & 1) as u8).collect();
                    let out = apply_pulse_classical(&p, &Configuration { states }, g).expect("classical pulse");
                    *slot = out.states.iter().fold(0u8, |acc, &s| acc << 1 | s);
                }
                m
            })
            .collect();
        let id: Perm8 = [0, 1, 2, 3, 4, 5, 6, 7];
        let mut parent = HashMap::new();
        parent.insert(id, (id, u8::MAX));
        let mut q = VecDeque::from([id]);
        while let Some(cur) = q.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let next: Perm8 = std::array::from_fn(|x| g[cur[x] as usize]);
                if !parent.contains_key(&next) {
                    parent.insert(next, (cur, gi as u8));
                    q.push_back(next);
                }
            }
        }
        (gens, parent)
    })
}

/// Pulses realizing a permutation of the eight basis states of a three-unit
/// ABC polymer, shortest first found.
pub fn permutation_word(map: &[usize]) -> Option<Vec<Pulse>> {
    if map.len() != 8 {
        return None;
    }
    let (_, parent) = word_tree();
    let mut cur: Perm8 = std::array::from_fn(|x| map[x] as u8);
    let gens = generators();
    let mut word = Vec::new();
    loop {
        let &(prev, g) = parent.get(&cur)?;
        if g == u8::MAX {
            break;
        }
        word.push(gens[g as usize]);
        cur = prev;
    }
    word.reverse();
    Some(word)
}

fn realizable(polymer: &Polymer) -> bool {
    polymer.len() == 3 && polymer.period() == 3 && polymer.is_binary()
}

fn perm_step(map: Vec<usize>, polymer: &Polymer) -> ProgramStep {
    let sequence = if realizable(polymer) { permutation_word(&map).map(PulseSequence::from_pulses) } else { None };
    ProgramStep::Permutation { map, sequence }
}

/// Rotation on the fixed pair. On three units it is an exchange of `|100⟩`
/// with `|010⟩` around a B pulse addressed to the pair `|000⟩`, `|010⟩`.
fn rotation_step(theta: f64, phi: f64, e: usize, polymer: &Polymer) -> ProgramStep {
    let sequence = realizable(polymer).then(|| {
        let mut swap: Vec<usize> = (0..8).collect();
        swap.swap(4, 2);
        let q = permutation_word(&swap).expect("transposition reachable");
        let mut pulses = q.clone();
        pulses.push(Pulse::pi(B, 0, 0).with_area(theta).with_phase(phi));
        pulses.extend(q.iter().rev());
        PulseSequence::from_pulses(pulses)
    });
    ProgramStep::Rotation { rotation: TwoLevelRotation { pair: (0, e), theta, phi }, sequence }
}

/// Rotation between `labels` entries `u` and `v`, staged through the fixed pair.
fn push_rotation(steps: &mut Vec<ProgramStep>, dim: usize, e: usize, u: usize, v: usize, theta: f64, phi: f64, polymer: &Polymer) {
    let map = staging_map(dim, u, v, e);
    let identity = map.iter().enumerate().all(|(i, &m)| i == m);
    if !identity {
        steps.push(perm_step(map.clone(), polymer));
    }
    steps.push(rotation_step(theta, phi, e, polymer));
    if !identity {
        steps.push(perm_step(inverse(&map), polymer));
    }
}

/// Builds a program equal to `target` on its labels up to a global phase.
///
/// Column by column, rotations clear the entries of `U†` below the diagonal;
/// what remains is diagonal and is flattened by pairs of π rotations. Each
/// rotation on labels `(u, v)` is an exchange onto `|0…0⟩`, `|10…0⟩`, a
/// rotation there, and the inverse exchange.
pub fn synthesize_unitary(target: &UnitaryTarget, polymer: &Polymer) -> Result<PrimitiveProgram> {
    let k = target.labels.len();
    let probe = QuantumState::new(polymer)?;
    let dim = probe.dimension();
    if k == 0 || target.matrix.len() != k || target.matrix.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch(format!("matrix shape does not match {k} labels")));
    }
    if k > dim || target.labels.iter().any(|&l| l >= dim) {
        return Err(Error::DimensionMismatch(format!("labels outside the {dim}-state basis")));
    }
    let mut seen = target.labels.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != k {
        return Err(Error::DimensionMismatch("repeated label".into()));
    }
    if polymer.is_empty() || polymer.num_states(0) < 2 {
        return Err(Error::DimensionMismatch("no |10…0⟩ state".into()));
    }
    let err = unitarity_error(&target.matrix);
    if err > 1e-10 {
        return Err(Error::NotUnitary(err));
    }
    let e = {
        let mut s = vec![0u8; polymer.len()];
        s[0] = 1;
        probe.index_of(&s)
    };
    let labels = &target.labels;
    // V = U†.
    let mut v: Matrix = (0..k).map(|i| (0..k).map(|j| target.matrix[j][i].conj()).collect()).collect();
    let mut steps = Vec::new();
    for c in 0..k.saturating_sub(1) {
        for r in c + 1..k {
            let (x, y) = (v[c][c], v[r][c]);
            if y.norm() < 1e-15 {
                continue;
            }
            let (theta, phi) = if x.norm() < 1e-300 {
                (PI, 0.0)
            } else {
                (2.0 * (y.norm() / x.norm()).atan(), (Complex64::new(0.0, -1.0) * y / x).arg())
            };
            let m = rotation_matrix(theta, phi);
            for j in 0..k {
                let (a, b) = (v[c][j], v[r][j]);
                v[c][j] = m[0][0] * a + m[0][1] * b;
                v[r][j] = m[1][0] * a + m[1][1] * b;
            }
            push_rotation(&mut steps, dim, e, labels[c], labels[r], theta, phi, polymer);
        }
    }
    // v is now diagonal; apply its inverse up to a global phase.
    let psi: Vec<f64> = (0..k).map(|j| -v[j][j].arg()).collect();
    let tau = psi.iter().sum::<f64>() / k as f64;
    let mut gamma = 0.0;
    for j in 0..k.saturating_sub(1) {
        gamma -= psi[j] - tau;
        let g = gamma.rem_euclid(2.0 * PI);
        if g.min(2.0 * PI - g) < 1e-15 {
            continue;
        }
        // R(π, 0) first, then R(π, γ): diag(e^{-iγ}, e^{iγ}) on the pair.
        push_rotation(&mut steps, dim, e, labels[j], labels[j + 1], PI, 0.0, polymer);
        push_rotation(&mut steps, dim, e, labels[j], labels[j + 1], PI, gamma, polymer);
    }
    Ok(PrimitiveProgram { dim, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::apply_sequence_quantum;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check(polymer: &Polymer, labels: Vec<usize>, u: Matrix) -> PrimitiveProgram {
        let t = UnitaryTarget { labels: labels.clone(), matrix: u.clone() };
        let prog = synthesize_unitary(&t, polymer).unwrap();
        let d = subspace_distance(&compose_on_subspace(&prog, &labels), &u);
        assert!(d < 1e-9, "distance {d}");
        prog
    }

    #[test]
    fn identity_and_flip() {
        let p = Polymer::abc(3);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let prog = check(&p, vec![0, 4], vec![vec![one, zero], vec![zero, one]]);
        assert_eq!(prog.rotations(), 0);
        let prog = check(&p, vec![0, 4], vec![vec![zero, one], vec![one, zero]]);
        assert_eq!(prog.steps.len(), 1);
        let ProgramStep::Rotation { rotation, .. } = &prog.steps[0] else { panic!() };
        assert!((rotation.theta - PI).abs() < 1e-12);
    }

    #[test]
    fn exchange_group_is_complete() {
        assert_eq!(word_tree().1.len(), 40320);
    }

    #[test]
    fn random_targets_and_their_pulses() {
        let p = Polymer::abc(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 2..=8 {
            let mut labels: Vec<usize> = (0..8).collect();
            for i in 0..k {
                let j = rng.gen_range(i..8);
                labels.swap(i, j);
            }
            labels.truncate(k);
            let u = haar_unitary(k, &mut rng);
            let prog = check(&p, labels.clone(), u.clone());
            // Independent route: run the pulses on the statevector engine.
            let seq = prog.pulse_sequence().unwrap();
            let mut got = vec![vec![Complex64::new(0.0, 0.0); k]; k];
            for (j, &l) in labels.iter().enumerate() {
                let cfg = Configuration { states: (0..3).map(|b| (l >> (2 - b) & 1) as u8).collect() };
                let mut s = QuantumState::basis(&p, &cfg).unwrap();
                apply_sequence_quantum(&mut s, &p, &seq, None).unwrap();
                for (i, &li) in labels.iter().enumerate() {
                    got[i][j] = s.amplitudes[li];
                }
            }
            assert!(subspace_distance(&got, &u) < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_targets() {
        let p = Polymer::abc(3);
        let one = Complex64::new(1.0, 0.0);
        let t = UnitaryTarget { labels: vec![0, 1], matrix: vec![vec![one, one], vec![one, one]] };
        assert!(matches!(synthesize_unitary(&t, &p), Err(Error::NotUnitary(_))));
        let t = UnitaryTarget { labels: vec![0, 0], matrix: vec![vec![one, one * 0.0], vec![one * 0.0, one]] };
        assert!(matches!(synthesize_unitary(&t, &p), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn parses_unitary_file() {
        let p = Polymer::abc(3);
        let t = parse_unitary("dim 2 labels=000,100\n0 0 1 0\n1 0 0 0\n", &p).unwrap();
        assert_eq!(t.labels, vec![0, 4]);
        assert_eq!(t.matrix[0][1], Complex64::new(1.0, 0.0));
        let e = parse_unitary("dim 2 labels=000,100\n0 0 1\n1 0 0 0\n", &p).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
