use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polypulse")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn compile_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("f.seq");
    let poly = dir.path().join("f.polymer");
    let args = [
        "compile",
        "--circuit",
        &data("fredkin3.circ"),
        "--layout",
        &data("shepherd3.layout"),
        "--emit-polymer",
        poly.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stderr(&a).contains("cycles=1"));

    let text = stdout(&a);
    std::fs::write(&seq, &text).unwrap();
    let polymer = polypulse::lattice::parse_polymer(&std::fs::read_to_string(&poly).unwrap()).unwrap();
    let parsed = polypulse::lattice::parse_sequence(&text, &polymer).unwrap();
    assert_eq!(polypulse::lattice::format_sequence(&parsed, &polymer), text);

    // Section 0 has control, x and y set; section 1 has control and x, which get swapped.
    let r = run(&[
        "run",
        "--polymer",
        poly.to_str().unwrap(),
        "--sequence",
        seq.to_str().unwrap(),
        "--layout",
        &data("shepherd3.layout"),
        "--inputs",
        "7,3",
    ]);
    assert!(r.status.success(), "{}", stderr(&r));
    let out = stdout(&r);
    assert!(out.contains("section 0 output=7"));
    assert!(out.contains("section 1 output=5"));
}

#[test]
fn compile_sparse_layout() {
    let o = run(&["compile", "--circuit", &data("fredkin3.circ"), "--layout", &data("sparse3.layout")]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("#! circuit method=sparse"));
}

#[test]
fn empty_circuit_has_no_gate_cycles() {
    let o = run(&["compile", "--circuit", &data("empty.circ"), "--layout", &data("shepherd3.layout")]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("cycles=0"));
}

#[test]
fn malformed_gate_names_line() {
    let o = run(&["compile", "--circuit", &data("bad.circ")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn load_places_bits_and_reverse_restores() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("load.seq");
    let c = run(&["compile", "--load", "101101", "--polymer", &data("load.polymer"), "-o", seq.to_str().unwrap()]);
    assert!(c.status.success(), "{}", stderr(&c));
    let r = run(&["run", "--polymer", &data("load.polymer"), "--sequence", seq.to_str().unwrap()]);
    assert_eq!(stdout(&r).trim(), format!("101101{}", "0".repeat(24)));
    let r = run(&["run", "--polymer", &data("load.polymer"), "--sequence", seq.to_str().unwrap(), "--and-reverse"]);
    assert_eq!(stdout(&r).trim(), "0".repeat(30));
    let e = run(&["run", "--polymer", &data("load.polymer"), "--config", &"1".repeat(30)]);
    assert_eq!(stdout(&e).trim(), "1".repeat(30));
}

#[test]
fn qrun_bell_pair() {
    let o = run(&["qrun", "--polymer", &data("bell.polymer"), "--sequence", &data("bell.seq"), "--freq", &data("bell.freq")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("|000000> 0.5000"));
    assert!(lines[1].starts_with("|110000>"));
    let amp: Vec<f64> = lines[1].split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
    assert!((amp[0].hypot(amp[1]) - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn qrun_empty_and_measurement_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.seq");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["qrun", "--polymer", &data("bell.polymer"), "--sequence", empty.to_str().unwrap()]);
    assert_eq!(stdout(&o), "|000000> 1.000000000000000 0.000000000000000\n");
    let args = ["qrun", "--polymer", &data("bell.polymer"), "--sequence", &data("bell.seq"), "--measure", "0,1", "--seed", "11"];
    let a = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, run(&args).stdout);
    let out = stdout(&a);
    let outcomes: Vec<&str> = out.lines().filter(|l| l.starts_with("measure")).collect();
    assert_eq!(outcomes.len(), 2);
    // The pair is perfectly correlated.
    assert_eq!(outcomes[0].chars().last(), outcomes[1].chars().last());
}

#[test]
fn ecsim_reports() {
    let o = run(&["ec-sim", "--epsilon", "0", "--theta", "0", "--trials", "5", "--copies", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).trim_end().ends_with("residual=0.000000 theta=0"));

    let args = ["ec-sim", "--epsilon", "0.0025", "--trials", "20", "--copies", "30", "--seed", "3"];
    let o = run(&args);
    let out = stdout(&o);
    assert!(out.contains("eta_bound k=20 copies=41"));
    assert!(out.contains("quoted copies=47"));
    assert!(out.contains("round wrong_fraction stderr"));
    assert_eq!(o.stdout, run(&args).stdout);

    let bad = run(&["ec-sim", "--trials", "0"]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = run(&["ec-sim", "--theta", "2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn analyze_windows() {
    let o = run(&["analyze", "--params", &data("optical.params")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("T_min=1e-9"));
    assert!(out.contains("exciton_lifetime=1e-6"));
    assert!(out.contains("feasible=true"));

    let o = run(&["analyze", "--params", &data("no_omega.params")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("omega"));

    let o = run(&["analyze", "--params", &data("infeasible.params")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("feasible=false"));
}

#[test]
fn synth_swap() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("syn.seq");
    let o = run(&["synth", "--unitary", &data("swap01.unitary"), "--polymer", &data("triple.polymer"), "--pulses", seq.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("rotations=1"));
    let residual: f64 = out.lines().find_map(|l| l.strip_prefix("residual=")).unwrap().parse().unwrap();
    assert!(residual < 1e-9);
    assert!(std::fs::read_to_string(&seq).unwrap().contains("PI B"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["run"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
