use super::{Condition, FrequencyTable, Polymer, Pulse, PulseKind, PulseSequence, Side, Species};
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::fmt::Write;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses `pattern=ABC length=30` plus optional `species X states=3 decay=2->0` lines.
pub fn parse_polymer(text: &str) -> Result<Polymer> {
    let mut pattern: Option<Vec<char>> = None;
    let mut length: Option<usize> = None;
    let mut decls: Vec<(usize, Species)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap_or_default();
        if first == "species" {
            let label = toks.next().ok_or_else(|| perr(line_no, "species label missing"))?;
            let mut chars = label.chars();
            let label = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(perr(line_no, format!("bad species label {label:?}"))),
            };
            let mut sp = Species::binary(label);
            for t in toks {
                let (k, v) = t.split_once('=').ok_or_else(|| perr(line_no, format!("expected key=value, got {t:?}")))?;
                match k {
                    "states" => sp.num_states = v.parse().map_err(|_| perr(line_no, format!("bad states {v:?}")))?,
                    "decay" => {
                        let (a, b) = v.split_once("->").ok_or_else(|| perr(line_no, format!("bad decay {v:?}")))?;
                        let a: u8 = a.parse().map_err(|_| perr(line_no, format!("bad decay {v:?}")))?;
                        let b: u8 = b.parse().map_err(|_| perr(line_no, format!("bad decay {v:?}")))?;
                        sp.fast_decay = Some((a, b));
                    }
                    _ => return Err(perr(line_no, format!("unknown key {k:?}"))),
                }
            }
            decls.push((line_no, sp));
        } else {
            for t in line.split_whitespace() {
                let (k, v) = t.split_once('=').ok_or_else(|| perr(line_no, format!("expected key=value, got {t:?}")))?;
                match k {
                    "pattern" => pattern = Some(v.chars().collect()),
                    "length" => length = Some(v.parse().map_err(|_| perr(line_no, format!("bad length {v:?}")))?),
                    _ => return Err(perr(line_no, format!("unknown key {k:?}"))),
                }
            }
        }
    }
    let pattern = pattern.ok_or_else(|| perr(0, "missing pattern"))?;
    let length = length.ok_or_else(|| perr(0, "missing length"))?;
    let mut species: Vec<Species> = pattern.iter().map(|&c| Species::binary(c)).collect();
    for (line_no, d) in decls {
        let slot = species
            .iter_mut()
            .find(|s| s.label == d.label)
            .ok_or_else(|| perr(line_no, format!("species {} not in pattern", d.label)))?;
        *slot = d;
    }
    Polymer::new(species, length)
}

pub fn format_polymer(polymer: &Polymer) -> String {
    let mut out = String::new();
    let pat: String = polymer.pattern().iter().map(|s| s.label).collect();
    let _ = writeln!(out, "pattern={pat} length={}", polymer.len());
    for s in polymer.pattern() {
        if s.num_states != 2 || s.fast_decay.is_some() {
            let _ = write!(out, "species {} states={}", s.label, s.num_states);
            if let Some((a, b)) = s.fast_decay {
                let _ = write!(out, " decay={a}->{b}");
            }
            out.push('\n');
        }
    }
    out
}

fn parse_state(line: usize, v: &str) -> Result<u8> {
    v.parse().map_err(|_| perr(line, format!("bad state {v:?}")))
}

fn parse_f64(line: usize, k: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| perr(line, format!("bad {k} value {v:?}")))
}

fn parse_pulse(polymer: &Polymer, line: usize, toks: &[&str]) -> Result<Pulse> {
    let kind = toks[0];
    let label = toks.get(1).ok_or_else(|| perr(line, "species missing"))?;
    let mut chars = label.chars();
    let species = match (chars.next(), chars.next()) {
        (Some(c), None) => polymer.species_id(c).map_err(|_| perr(line, format!("unknown species {label:?}")))?,
        _ => return Err(perr(line, format!("bad species {label:?}"))),
    };
    let (mut l, mut r, mut end, mut n) = (None, None, None, None);
    let mut transition = None;
    let mut area = None;
    let mut phase = 0.0;
    let mut duration = None;
    let mut delay = None;
    for t in &toks[2..] {
        let (k, v) = t.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got {t:?}")))?;
        match k {
            "L" => l = Some(parse_state(line, v)?),
            "R" => r = Some(parse_state(line, v)?),
            "N" => n = Some(parse_state(line, v)?),
            "END" => {
                end = Some(match v {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    _ => return Err(perr(line, format!("bad END side {v:?}"))),
                })
            }
            "T" => {
                let (a, b) = v.split_once(':').ok_or_else(|| perr(line, format!("bad transition {v:?}")))?;
                transition = Some((parse_state(line, a)?, parse_state(line, b)?));
            }
            "area" => area = Some(parse_f64(line, k, v)?),
            "phase" => phase = parse_f64(line, k, v)?,
            "dur" => duration = Some(parse_f64(line, k, v)?),
            "delay" => delay = Some(parse_f64(line, k, v)?),
            _ => return Err(perr(line, format!("unknown key {k:?}"))),
        }
    }
    let condition = match (end, l, r, n) {
        (Some(side), None, None, Some(neighbor)) => Condition::End { side, neighbor },
        (None, Some(left), Some(right), None) => Condition::Interior { left, right },
        _ => return Err(perr(line, "need either L= and R=, or END= and N=")),
    };
    let transition = transition.unwrap_or(if kind == "PUMP" { (1, 2) } else { (0, 1) });
    let (kind, area) = match kind {
        "PI" => {
            if area.is_some() {
                return Err(perr(line, "PI pulses take no area"));
            }
            (PulseKind::Coherent, PI)
        }
        "ROT" => (PulseKind::Coherent, area.ok_or_else(|| perr(line, "ROT needs area="))?),
        "PUMP" => (PulseKind::DecayPump, area.unwrap_or(PI)),
        _ => return Err(perr(line, format!("unknown pulse kind {kind:?}"))),
    };
    let p = Pulse { species, condition, transition, area, phase, duration, delay, kind };
    p.validate(polymer).map_err(|e| perr(line, e.to_string()))?;
    Ok(p)
}

/// Parses a pulse-sequence file. `#!` lines carry metadata, `#` starts a comment.
pub fn parse_sequence(text: &str, polymer: &Polymer) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new();
    let mut meta = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        if let Some(m) = raw.trim_start().strip_prefix("#!") {
            meta.push(m.trim().to_string());
            continue;
        }
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "CYCLE" {
            if toks.len() > 1 {
                return Err(perr(line_no, "CYCLE takes no arguments"));
            }
            seq.mark_cycle();
            continue;
        }
        seq.push(parse_pulse(polymer, line_no, &toks)?);
    }
    seq.metadata = meta.join("\n");
    Ok(seq)
}

fn format_pulse(polymer: &Polymer, p: &Pulse, out: &mut String) {
    let label = polymer.species(p.species).label;
    let kind = match p.kind {
        PulseKind::DecayPump => "PUMP",
        PulseKind::Coherent if p.area == PI => "PI",
        PulseKind::Coherent => "ROT",
    };
    let _ = write!(out, "{kind} {label}");
    match p.condition {
        Condition::Interior { left, right } => {
            let _ = write!(out, " L={left} R={right}");
        }
        Condition::End { side, neighbor } => {
            let s = if side == Side::Left { "left" } else { "right" };
            let _ = write!(out, " END={s} N={neighbor}");
        }
    }
    let _ = write!(out, " T={}:{}", p.transition.0, p.transition.1);
    if kind == "ROT" || (kind == "PUMP" && p.area != PI) {
        let _ = write!(out, " area={:?}", p.area);
    }
    if p.phase != 0.0 {
        let _ = write!(out, " phase={:?}", p.phase);
    }
    if let Some(d) = p.duration {
        let _ = write!(out, " dur={d:?}");
    }
    if let Some(d) = p.delay {
        let _ = write!(out, " delay={d:?}");
    }
    out.push('\n');
}

/// Writes a sequence in the text format read by [`parse_sequence`].
pub fn format_sequence(seq: &PulseSequence, polymer: &Polymer) -> String {
    let mut out = String::new();
    for m in seq.metadata.lines() {
        let _ = writeln!(out, "#! {m}");
    }
    let mut marks = seq.cycle_marks.iter().peekable();
    for (i, p) in seq.pulses.iter().enumerate() {
        while marks.peek() == Some(&&i) {
            out.push_str("CYCLE\n");
            marks.next();
        }
        format_pulse(polymer, p, &mut out);
    }
    if marks.next().is_some() {
        out.push_str("CYCLE\n");
    }
    out
}

fn parse_transition(line: usize, v: &str) -> Result<(u8, u8)> {
    let (a, b) = v.split_once(':').ok_or_else(|| perr(line, format!("bad transition {v:?}")))?;
    Ok((parse_state(line, a)?, parse_state(line, b)?))
}

/// Parses a frequency table, one entry per line:
///
/// ```text
/// base A T=0:1 3.0e15
/// shift B L=1 R=0 T=0:1 4.7e13
/// shift A END=left N=1 T=0:1 2.3e13
/// ```
pub fn parse_frequency_table(text: &str, polymer: &Polymer) -> Result<FrequencyTable> {
    let mut table = FrequencyTable::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(perr(line, "expected kind, species, fields and a value"));
        }
        let label = toks[1];
        let mut chars = label.chars();
        let species = match (chars.next(), chars.next()) {
            (Some(c), None) => polymer.species_id(c).map_err(|_| perr(line, format!("unknown species {label:?}")))?,
            _ => return Err(perr(line, format!("bad species {label:?}"))),
        };
        let value = parse_f64(line, "frequency", toks[toks.len() - 1])?;
        let (mut l, mut r, mut end, mut n, mut t) = (None, None, None, None, (0, 1));
        for tok in &toks[2..toks.len() - 1] {
            let (k, v) = tok.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got {tok:?}")))?;
            match k {
                "L" => l = Some(parse_state(line, v)?),
                "R" => r = Some(parse_state(line, v)?),
                "N" => n = Some(parse_state(line, v)?),
                "T" => t = parse_transition(line, v)?,
                "END" => {
                    end = Some(match v {
                        "left" => Side::Left,
                        "right" => Side::Right,
                        _ => return Err(perr(line, format!("bad END side {v:?}"))),
                    })
                }
                _ => return Err(perr(line, format!("unknown key {k:?}"))),
            }
        }
        match (toks[0], end, l, r, n) {
            ("base", None, None, None, None) => table.set_base(species, t, value),
            ("shift", None, Some(l), Some(r), None) => table.set_shift(species, l, r, t, value),
            ("shift", Some(side), None, None, Some(nb)) => table.set_end_shift(species, side, nb, t, value),
            _ => return Err(perr(line, "expected `base X`, `shift X L= R=` or `shift X END= N=`")),
        }
    }
    Ok(table)
}

/// Writes a table in the format read by [`parse_frequency_table`].
pub fn format_frequency_table(table: &FrequencyTable, polymer: &Polymer) -> String {
    let mut out = String::new();
    let label = |s: usize| polymer.species(s).label;
    for (&(s, t), v) in &table.base {
        let _ = writeln!(out, "base {} T={}:{} {v:?}", label(s), t.0, t.1);
    }
    for (&(s, l, r, t), v) in &table.shift {
        let _ = writeln!(out, "shift {} L={l} R={r} T={}:{} {v:?}", label(s), t.0, t.1);
    }
    for (&(s, side, nb, t), v) in &table.end_shift {
        let side = if side == Side::Left { "left" } else { "right" };
        let _ = writeln!(out, "shift {} END={side} N={nb} T={}:{} {v:?}", label(s), t.0, t.1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{A, B};

    #[test]
    fn frequency_file() {
        let p = Polymer::abc(6);
        let text = "base A T=0:1 3.0e15\nbase B 3.3e15 # default transition\nshift B L=1 R=0 T=0:1 4.7e13\nshift A END=left N=1 2.3e13\n";
        let f = parse_frequency_table(text, &p).unwrap();
        assert_eq!(f.base[&(A, (0, 1))], 3.0e15);
        assert_eq!(f.shift[&(B, 1, 0, (0, 1))], 4.7e13);
        assert_eq!(f.end_shift[&(A, Side::Left, 1, (0, 1))], 2.3e13);
        assert_eq!(parse_frequency_table(&format_frequency_table(&f, &p), &p).unwrap(), f);
        assert!(matches!(parse_frequency_table("shift A L=1 3", &p), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_frequency_table("\nbase Q 3", &p), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn polymer_file() {
        let p = parse_polymer("pattern=ABC length=30\nspecies B states=3 decay=2->0 # pumped\n").unwrap();
        assert_eq!(p.len(), 30);
        assert_eq!(p.species(B).fast_decay, Some((2, 0)));
        assert_eq!(parse_polymer(&format_polymer(&p)).unwrap(), p);
        assert!(matches!(parse_polymer("pattern=ABC"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sequence_lines() {
        let p = parse_polymer("pattern=ABC length=9\nspecies B states=3 decay=2->0").unwrap();
        let text = "PI B L=1 R=0 T=0:1\nPI A END=left N=1 T=0:1 # end\nCYCLE\nPUMP B L=0 R=0 T=1:2\nROT A END=left N=0 area=1.5707963 phase=0 dur=1e-12\n";
        let s = parse_sequence(text, &p).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.pulses[0], Pulse::pi(B, 1, 0));
        assert_eq!(s.pulses[1], Pulse::pi_end(A, Side::Left, 1));
        assert_eq!(s.cycle_marks, vec![2]);
        assert_eq!(s.pulses[3].duration, Some(1e-12));
        let again = parse_sequence(&format_sequence(&s, &p), &p).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn errors_name_the_line() {
        let p = parse_polymer("pattern=ABC length=9").unwrap();
        let e = parse_sequence("PI A L=0 R=0 T=0:1\nPI Q L=0 R=0 T=0:1\n", &p).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_sequence("PI A L=0 T=0:1\n", &p).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}
