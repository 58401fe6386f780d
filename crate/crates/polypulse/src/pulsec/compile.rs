//! Circuit compilers, selected by name at runtime.

use super::circuit::CircuitDesign;
use super::layout::{Method, SectionLayout};
use super::tracker::{GateTriple, Sym, Tracker};
use crate::error::{Error, Result};
use crate::lattice::{BatchConfiguration, PulseSequence};

/// Candidate relocations tried per step before a gate placement is abandoned.
const BREADTH: usize = 16;

pub trait CircuitCompiler: Send + Sync {
    fn name(&self) -> &'static str;
    fn method(&self) -> Method;

    fn layout(&self, num_wires: usize, sections: usize) -> Result<SectionLayout> {
        SectionLayout::new(self.method(), num_wires, sections)
    }

    fn compile(&self, circuit: &CircuitDesign, layout: &SectionLayout) -> Result<PulseSequence> {
        if layout.method != self.method() {
            return Err(Error::LayoutMismatch(format!(
                "the {} compiler cannot use a {} layout",
                self.name(),
                layout.method.name()
            )));
        }
        compile_on_layout(circuit, layout)
    }
}

/// Wires on A units steered by one-bits on B and C of the following triple.
pub struct ShepherdCompiler;

/// Wires spread over all three species at staggered intervals.
pub struct SparseCompiler;

impl CircuitCompiler for ShepherdCompiler {
    fn name(&self) -> &'static str {
        "shepherd"
    }
    fn method(&self) -> Method {
        Method::Shepherd
    }
}

impl CircuitCompiler for SparseCompiler {
    fn name(&self) -> &'static str {
        "sparse"
    }
    fn method(&self) -> Method {
        Method::SparseInterval
    }
}

pub struct CompilerRegistry {
    entries: Vec<Box<dyn CircuitCompiler>>,
}

impl Default for CompilerRegistry {
    fn default() -> Self {
        let mut r = CompilerRegistry { entries: Vec::new() };
        r.register(Box::new(ShepherdCompiler));
        r.register(Box::new(SparseCompiler));
        r
    }
}

impl CompilerRegistry {
    pub fn register(&mut self, c: Box<dyn CircuitCompiler>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CircuitCompiler> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::InvalidArgument(format!("no circuit compiler named `{name}`")))
    }

    pub fn for_method(&self, method: Method) -> Result<&dyn CircuitCompiler> {
        self.get(method.name())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

pub fn compile_circuit_method1(circuit: &CircuitDesign, layout: &SectionLayout) -> Result<PulseSequence> {
    ShepherdCompiler.compile(circuit, layout)
}

pub fn compile_circuit_method2(circuit: &CircuitDesign, layout: &SectionLayout) -> Result<PulseSequence> {
    SparseCompiler.compile(circuit, layout)
}

/// Tracker holding every section's wires and pilots at their home positions.
pub(crate) fn layout_tracker(layout: &SectionLayout) -> Tracker {
    let mut t = Tracker::new(3 * layout.total_triples());
    let n = layout.num_wires;
    for k in 0..layout.sections {
        for w in 0..n {
            let u = layout.unit_of(k, w);
            t.place(u % 3, u as i64, Sym::Data((k * n + w) as u32));
        }
        for u in layout.pilot_units(k) {
            t.place(u % 3, u as i64, Sym::One);
        }
    }
    t
}

/// First-section pilot per stream.
pub(crate) fn reference_pilots(layout: &SectionLayout) -> [Option<(usize, i64)>; 3] {
    let mut p = [None; 3];
    for u in layout.pilot_units(0) {
        p[u % 3].get_or_insert((u % 3, u as i64));
    }
    p
}

fn compile_on_layout(circuit: &CircuitDesign, layout: &SectionLayout) -> Result<PulseSequence> {
    circuit.validate()?;
    if circuit.num_wires != layout.num_wires {
        return Err(Error::LayoutMismatch(format!(
            "circuit has {} wires, layout {}",
            circuit.num_wires, layout.num_wires
        )));
    }
    let n = layout.num_wires as u32;
    let mut t = layout_tracker(layout);
    let pilots = reference_pilots(layout);
    for g in &circuit.gates {
        let triples: Vec<GateTriple> = (0..layout.sections as u32)
            .map(|k| GateTriple {
                control: k * n + g.control as u32,
                targets: [k * n + g.targets[0] as u32, k * n + g.targets[1] as u32],
            })
            .collect();
        t.gate(&triples, &pilots, BREADTH)?;
        t.seq.mark_cycle();
    }
    let mut seq = t.seq;
    seq.metadata = format!(
        "circuit method={} wires={} gates={} sections={}",
        layout.method.name(),
        layout.num_wires,
        circuit.gates.len(),
        layout.sections
    );
    Ok(seq)
}

/// Outcome of running a compiled circuit on many inputs at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionRun {
    /// Per input set, the wire values of each section.
    pub outputs: Vec<Vec<u64>>,
    /// Every unit outside wires and pilots ended at zero, and pilots at one.
    pub clean: bool,
}

/// Runs `seq` on the layout loaded with each entry of `inputs` (one value per
/// section) using the bit-parallel engine.
pub fn execute_sections(layout: &SectionLayout, seq: &PulseSequence, inputs: &[Vec<u64>]) -> Result<SectionRun> {
    let polymer = layout.polymer();
    let mut batch = BatchConfiguration::zeros(polymer.len(), inputs.len());
    for (lane, xs) in inputs.iter().enumerate() {
        let cfg = layout.initial_configuration(xs)?;
        for (u, &s) in cfg.states.iter().enumerate() {
            if s != 0 {
                batch.set(lane, u, s);
            }
        }
    }
    batch.apply_sequence(&polymer, seq)?;
    let mut wires = vec![false; polymer.len()];
    let mut pilots = vec![false; polymer.len()];
    for k in 0..layout.sections {
        (0..layout.num_wires).for_each(|w| wires[layout.unit_of(k, w)] = true);
        layout.pilot_units(k).into_iter().for_each(|u| pilots[u] = true);
    }
    let mut clean = true;
    let mut outputs = Vec::with_capacity(inputs.len());
    for lane in 0..inputs.len() {
        outputs.push(
            (0..layout.sections)
                .map(|k| (0..layout.num_wires).fold(0u64, |acc, w| acc | (batch.get(lane, layout.unit_of(k, w)) as u64) << w))
                .collect(),
        );
        clean &= (0..polymer.len()).all(|u| wires[u] || batch.get(lane, u) == pilots[u] as u8);
    }
    Ok(SectionRun { outputs, clean })
}
