//! Placement of circuit wires in repeated sections along the polymer.

use crate::error::{Error, Result};
use crate::lattice::{Configuration, Polymer, SpeciesId, A, B, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shepherd,
    SparseInterval,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Shepherd => "shepherd",
            Method::SparseInterval => "sparse",
        }
    }
}

/// Sections repeat every `period` triples after `lead` blank triples; each
/// section holds the wires in its first `section_length` triples and is
/// followed by as many blank triples. Lead and tail leave room for one extra
/// section on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionLayout {
    pub method: Method,
    pub num_wires: usize,
    pub sections: usize,
    pub section_length: usize,
    pub period: usize,
    pub lead: usize,
    pub tail: usize,
    /// Wire to (triple within section, species).
    pub placement: Vec<(usize, SpeciesId)>,
    /// Constant ones used to steer exchanges.
    pub pilots: Vec<(usize, SpeciesId)>,
    /// Interval `m` of the sparse method.
    pub interval: Option<usize>,
}

impl SectionLayout {
    fn finish(method: Method, n: usize, sections: usize, placement: Vec<(usize, SpeciesId)>, pilots: Vec<(usize, SpeciesId)>, section_length: usize, interval: Option<usize>) -> Self {
        SectionLayout {
            method,
            num_wires: n,
            sections,
            section_length,
            period: 2 * section_length,
            lead: 2 * section_length + 2,
            tail: 2 * section_length + 3,
            placement,
            pilots,
            interval,
        }
    }

    /// Wires on the first `n` A units, ones on B and C of the next triple.
    pub fn shepherd(n: usize, sections: usize) -> Result<Self> {
        check_counts(n, sections)?;
        let placement = (0..n).map(|w| (w, A)).collect();
        Ok(Self::finish(Method::Shepherd, n, sections, placement, vec![(n, B), (n, C)], 2 * n.max(2), None))
    }

    /// A wires every `m` triples, B wires every `m+1`, C wires every `m+2`,
    /// with `m = ceil(n/3)`; one pilot per species follows the data.
    pub fn sparse(n: usize, sections: usize) -> Result<Self> {
        check_counts(n, sections)?;
        let m = n.div_ceil(3);
        let placement: Vec<(usize, SpeciesId)> = (0..n)
            .map(|w| match w / m {
                0 => (w * m, A),
                1 => ((w - m) * (m + 1), B),
                _ => ((w - 2 * m) * (m + 2), C),
            })
            .collect();
        let data = placement.iter().map(|p| p.0).max().unwrap_or(0) + 1;
        let pilots = vec![(data + 1, A), (data + 2, B), (data + 3, C)];
        Ok(Self::finish(Method::SparseInterval, n, sections, placement, pilots, data + 4, Some(m)))
    }

    pub fn new(method: Method, n: usize, sections: usize) -> Result<Self> {
        match method {
            Method::Shepherd => Self::shepherd(n, sections),
            Method::SparseInterval => Self::sparse(n, sections),
        }
    }

    /// Parses `method=shepherd N=5` with an optional `sections=2`.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut method, mut n, mut sections) = (None, None, 2usize);
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            let perr = |msg: String| Error::Parse { line: i + 1, msg };
            for tok in body.split_whitespace() {
                let (k, v) = tok.split_once('=').ok_or_else(|| perr(format!("expected key=value, got `{tok}`")))?;
                match k {
                    "method" => {
                        method = Some(match v {
                            "shepherd" => Method::Shepherd,
                            "sparse" => Method::SparseInterval,
                            _ => return Err(perr(format!("unknown method `{v}`"))),
                        })
                    }
                    "N" => n = Some(v.parse().map_err(|_| perr(format!("bad N `{v}`")))?),
                    "sections" => sections = v.parse().map_err(|_| perr(format!("bad sections `{v}`")))?,
                    _ => return Err(perr(format!("unknown key `{k}`"))),
                }
            }
        }
        let method = method.ok_or(Error::Parse { line: 0, msg: "missing `method`".into() })?;
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing `N`".into() })?;
        Self::new(method, n, sections)
    }

    pub fn to_text(&self) -> String {
        format!("method={} N={} sections={}\n", self.method.name(), self.num_wires, self.sections)
    }

    pub fn total_triples(&self) -> usize {
        self.lead + self.sections * self.period + self.tail
    }

    pub fn polymer(&self) -> Polymer {
        Polymer::abc(3 * self.total_triples())
    }

    pub fn section_start(&self, section: usize) -> usize {
        3 * (self.lead + section * self.period)
    }

    pub fn unit_of(&self, section: usize, wire: usize) -> usize {
        let (t, s) = self.placement[wire];
        self.section_start(section) + 3 * t + s
    }

    pub fn pilot_units(&self, section: usize) -> Vec<usize> {
        self.pilots.iter().map(|&(t, s)| self.section_start(section) + 3 * t + s).collect()
    }

    pub fn check_polymer(&self, polymer: &Polymer) -> Result<()> {
        if polymer.len() != 3 * self.total_triples() || polymer.whole_periods().is_err() || polymer.period() != 3 {
            return Err(Error::LayoutMismatch(format!(
                "layout needs an ABC polymer of {} units, got {}",
                3 * self.total_triples(),
                polymer.len()
            )));
        }
        Ok(())
    }

    /// Configuration holding `inputs[k]` in section `k` plus the pilots.
    pub fn initial_configuration(&self, inputs: &[u64]) -> Result<Configuration> {
        if inputs.len() != self.sections {
            return Err(Error::LayoutMismatch(format!("{} inputs for {} sections", inputs.len(), self.sections)));
        }
        let mut states = vec![0u8; 3 * self.total_triples()];
        for (k, &x) in inputs.iter().enumerate() {
            for w in 0..self.num_wires {
                states[self.unit_of(k, w)] = (x >> w & 1) as u8;
            }
            for u in self.pilot_units(k) {
                states[u] = 1;
            }
        }
        Configuration::from_states(&self.polymer(), states)
    }

    /// Wire values of one section.
    pub fn read(&self, config: &Configuration, section: usize) -> u64 {
        (0..self.num_wires).fold(0, |acc, w| acc | (config.states[self.unit_of(section, w)] as u64) << w)
    }
}

fn check_counts(n: usize, sections: usize) -> Result<()> {
    if n == 0 || n > 64 || sections == 0 {
        return Err(Error::InvalidArgument(format!("layout needs 1..=64 wires and at least one section, got {n} and {sections}")));
    }
    Ok(())
}
