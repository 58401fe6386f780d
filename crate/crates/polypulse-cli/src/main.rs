use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polypulse::ecc::{monte_carlo_ec, redundancy_required, BlockFormat, EcSchedule, NoiseModel};
use polypulse::lattice::{
    apply_sequence, format_polymer, format_sequence, parse_frequency_table, parse_polymer, parse_sequence, Configuration, Polymer,
    PulseSequence,
};
use polypulse::physics::{operating_window, PhysicalParams};
use polypulse::pulsec::{compile_load, cost_report, CircuitDesign, CompilerRegistry, SectionLayout};
use polypulse::qsim::{
    apply_sequence_quantum, compose_on_subspace, measure_unit, parse_unitary, subspace_distance, synthesize_unitary, QuantumState,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 20_011_959;

#[derive(Parser)]
#[command(name = "polypulse", version, about = "Pulse-driven polymer computer: compiler and simulators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Fredkin circuit (or a load string) to a pulse sequence.
    Compile(CompileArgs),
    /// Run a sequence on the classical engine.
    Run(RunArgs),
    /// Run a sequence on the state-vector simulator.
    Qrun(QrunArgs),
    /// Monte Carlo of repeated block votes.
    #[command(name = "ec-sim")]
    EcSim(EcArgs),
    /// Operating window for a set of physical parameters.
    Analyze(AnalyzeArgs),
    /// Decompose a unitary into two-level rotations.
    Synth(SynthArgs),
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, required_unless_present = "load")]
    circuit: Option<PathBuf>,
    #[arg(long, requires = "circuit")]
    layout: Option<PathBuf>,
    /// Compile the load sequence for these bits instead; needs --polymer.
    #[arg(long, requires = "polymer", conflicts_with = "circuit")]
    load: Option<String>,
    /// Polymer to check the layout against, or to load into.
    #[arg(long)]
    polymer: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write the cost report here instead of stderr.
    #[arg(long)]
    cost: Option<PathBuf>,
    /// Write the layout's polymer description here.
    #[arg(long)]
    emit_polymer: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    polymer: PathBuf,
    #[arg(long)]
    sequence: Option<PathBuf>,
    /// Initial configuration as a digit string; all zeros if absent.
    #[arg(long, conflicts_with = "inputs")]
    config: Option<String>,
    /// Prepend the load sequence for these bits.
    #[arg(long)]
    load: Option<String>,
    /// Section layout used to place `--inputs` and read outputs.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Comma-separated wire values per section, each an integer bitmask.
    #[arg(long, requires = "layout", value_delimiter = ',')]
    inputs: Vec<u64>,
    /// Append the reversed sequence.
    #[arg(long)]
    and_reverse: bool,
}

#[derive(Args)]
struct QrunArgs {
    #[arg(long)]
    polymer: PathBuf,
    #[arg(long)]
    sequence: PathBuf,
    /// Frequency table; enables phase tracking.
    #[arg(long)]
    freq: Option<PathBuf>,
    /// Ignore the frequency table.
    #[arg(long)]
    no_phase: bool,
    #[arg(long)]
    config: Option<String>,
    /// Units to measure in order after the sequence.
    #[arg(long, value_delimiter = ',')]
    measure: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct EcArgs {
    #[arg(long, default_value_t = 0.0025)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Copies per bit (block length in triples).
    #[arg(long, default_value_t = 99)]
    copies: usize,
    #[arg(long, default_value_t = 5)]
    votes: usize,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Species holding the data.
    #[arg(long, default_value = "A")]
    species: char,
    /// Block values, cycled over the blocks.
    #[arg(long, default_value = "10")]
    values: String,
    #[arg(long)]
    no_scramble: bool,
    #[arg(long, default_value_t = 1e12)]
    bits: f64,
    #[arg(long, default_value_t = 1e20)]
    cycles: f64,
    #[arg(long, default_value_t = 0.01)]
    budget: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    unitary: PathBuf,
    #[arg(long)]
    polymer: PathBuf,
    /// Write the pulse realization here when every step has one.
    #[arg(long)]
    pulses: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_polymer(path: &Path) -> Result<Polymer> {
    parse_polymer(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_sequence(path: &Path, polymer: &Polymer) -> Result<PulseSequence> {
    parse_sequence(&read(path)?, polymer).with_context(|| format!("in {}", path.display()))
}

fn cmd_compile(a: CompileArgs) -> Result<()> {
    let (seq, polymer) = if let Some(bits) = &a.load {
        let polymer = load_polymer(a.polymer.as_deref().expect("clap requires --polymer"))?;
        (compile_load(bits, &polymer)?, polymer)
    } else {
        let circuit_path = a.circuit.as_deref().expect("clap requires --circuit");
        let circuit = CircuitDesign::parse(&read(circuit_path)?).with_context(|| format!("in {}", circuit_path.display()))?;
        let layout = match &a.layout {
            Some(p) => SectionLayout::parse(&read(p)?).with_context(|| format!("in {}", p.display()))?,
            None => SectionLayout::shepherd(circuit.num_wires, 2)?,
        };
        let polymer = layout.polymer();
        if let Some(p) = &a.polymer {
            layout.check_polymer(&load_polymer(p)?)?;
        }
        let registry = CompilerRegistry::default();
        (registry.for_method(layout.method)?.compile(&circuit, &layout)?, polymer)
    };
    if let Some(p) = &a.emit_polymer {
        fs::write(p, format_polymer(&polymer))?;
    }
    write_out(a.out.as_deref(), &format_sequence(&seq, &polymer))?;
    let cost = format!("{}\n", cost_report(&seq));
    match &a.cost {
        Some(p) => fs::write(p, cost)?,
        None => eprint!("{cost}"),
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let polymer = load_polymer(&a.polymer)?;
    let layout = a.layout.as_deref().map(|p| SectionLayout::parse(&read(p)?).map_err(anyhow::Error::from)).transpose()?;
    let initial = match (&a.config, &layout) {
        (Some(c), _) => Configuration::parse(&polymer, c)?,
        (None, Some(l)) if !a.inputs.is_empty() => {
            l.check_polymer(&polymer)?;
            l.initial_configuration(&a.inputs)?
        }
        _ => Configuration::zeros(&polymer),
    };
    let mut seq = PulseSequence::new();
    if let Some(bits) = &a.load {
        seq.extend(&compile_load(bits, &polymer)?);
    }
    if let Some(p) = &a.sequence {
        seq.extend(&load_sequence(p, &polymer)?);
    }
    if a.and_reverse {
        let back = seq.reversed();
        seq.extend(&back);
    }
    let out = apply_sequence(&polymer, &initial, &seq)?;
    println!("{out}");
    if let Some(l) = &layout {
        for s in 0..l.sections {
            println!("section {s} output={}", l.read(&out, s));
        }
    }
    Ok(())
}

fn cmd_qrun(a: QrunArgs) -> Result<()> {
    let polymer = load_polymer(&a.polymer)?;
    let seq = load_sequence(&a.sequence, &polymer)?;
    let freq = match (&a.freq, a.no_phase) {
        (Some(p), false) => Some(parse_frequency_table(&read(p)?, &polymer).with_context(|| format!("in {}", p.display()))?),
        _ => None,
    };
    let mut state = match &a.config {
        Some(c) => QuantumState::basis(&polymer, &Configuration::parse(&polymer, c)?)?,
        None => QuantumState::new(&polymer)?,
    };
    apply_sequence_quantum(&mut state, &polymer, &seq, freq.as_ref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for &u in &a.measure {
        if u >= polymer.len() {
            bail!("unit {u} outside a polymer of {} units", polymer.len());
        }
        let (outcome, post) = measure_unit(&state, u, &mut rng)?;
        println!("measure unit={u} outcome={outcome}");
        state = post;
    }
    print!("{}", state.dump());
    Ok(())
}

fn cmd_ecsim(a: EcArgs) -> Result<()> {
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let species = match a.species {
        'A' => 0,
        'B' => 1,
        'C' => 2,
        s => bail!("unknown species {s:?}"),
    };
    let values: Vec<u8> = a
        .values
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => bail!("--values takes 0s and 1s"),
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("--values is empty");
    }
    let model = NoiseModel::new(a.epsilon, a.theta, a.seed)?;
    let format = BlockFormat::new(a.copies, species, values.len(), !a.no_scramble)?;
    let schedule = EcSchedule::standard(a.votes, !a.no_scramble);
    match redundancy_required(a.epsilon, a.bits, a.cycles, a.budget) {
        Ok(r) => println!("{r}"),
        Err(e) => println!("redundancy unavailable: {e}"),
    }
    let stats = monte_carlo_ec(&format, &model, &schedule, &values, a.rounds, a.trials)?;
    println!("{stats}");
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let params = PhysicalParams::parse(&read(&a.params)?).with_context(|| format!("in {}", a.params.display()))?;
    let w = operating_window(&params)?;
    print!("{}", w.table());
    println!("{w}");
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let polymer = load_polymer(&a.polymer)?;
    let target = parse_unitary(&read(&a.unitary)?, &polymer).with_context(|| format!("in {}", a.unitary.display()))?;
    let program = synthesize_unitary(&target, &polymer)?;
    let residual = subspace_distance(&compose_on_subspace(&program, &target.labels), &target.matrix);
    print!("{}", program.to_text());
    println!("rotations={}", program.rotations());
    println!("residual={residual:e}");
    if let Some(p) = &a.pulses {
        match program.pulse_sequence() {
            Some(seq) => fs::write(p, format_sequence(&seq, &polymer))?,
            None => bail!("no pulse realization on this polymer"),
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<polypulse::Error>() {
        Some(polypulse::Error::Internal(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Compile(a) => cmd_compile(a),
        Command::Run(a) => cmd_run(a),
        Command::Qrun(a) => cmd_qrun(a),
        Command::EcSim(a) => cmd_ecsim(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
