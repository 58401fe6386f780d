//! Compiler from loading, shifting, Fredkin circuits, section transfer and
//! readout to pulse sequences.

mod circuit;
mod compile;
mod cost;
mod fredkin;
mod layout;
mod load;
mod streams;
mod swap;
mod tracker;
mod transfer;

pub use fredkin::{characterize_fredkin_contexts, compile_fredkin, fredkin_triple, ContextFinding, Window};
pub use load::{
    compile_load, compile_unload, compile_unload_loaded, load_capacity, run_load, ProbeResponse, Readout, ReadoutDescriptor,
};
pub use streams::{apply_swap, compile_shift, plan_swaps, shift_plan, slot_of, stream_in, swaps_to_sequence, Offsets, HOME};
pub use swap::compile_swap;
pub(crate) use swap::{swap_pulses, xor_from_left, xor_from_right};
pub use circuit::{CircuitDesign, Fredkin};
pub use compile::{
    compile_circuit_method1, compile_circuit_method2, execute_sections, CircuitCompiler, CompilerRegistry, SectionRun, ShepherdCompiler,
    SparseCompiler,
};
pub use cost::{cost_report, CostReport};
pub use layout::{Method, SectionLayout};
pub use tracker::{GateTriple, Sym, Tracker};
pub use transfer::compile_section_transfer;
