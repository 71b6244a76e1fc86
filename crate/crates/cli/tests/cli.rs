//! End-to-end tests of the binary: every verb, exit codes, and the file
//! formats it reads and writes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn orq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orq"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    orq()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn write_demo(dir: &Path) -> PathBuf {
    let path = dir.join("demo.json");
    let json = orq::format::to_json(&orq::constructions::demo_circuit()).unwrap();
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn build_or_reduction_emits_composites_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "build",
            "or-reduction",
            "--b",
            "3",
            "--variant",
            "commuting",
            "--out",
            "or3.json",
        ],
        dir.path(),
    );
    stdout_of(&out);
    let circuit =
        orq::format::from_json(&std::fs::read_to_string(dir.path().join("or3.json")).unwrap())
            .unwrap();
    assert_eq!(circuit.gates().len(), 6);
    assert!(circuit
        .gates()
        .iter()
        .all(|g| matches!(g, orq::Gate::U { .. })));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("or3.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "build or-reduction");
    assert!(manifest["details"]["postselect"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn simulate_or_reduction_inputs() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["build", "or-reduction", "--b", "3", "--out", "or.json"],
        dir.path(),
    );
    let zero = stdout_of(&run(
        &["simulate", "--in", "or.json", "--x", "000", "--json"],
        dir.path(),
    ));
    let dist = orq::Distribution::from_json(&zero).unwrap();
    assert!((dist.prob(0) - 1.0).abs() <= 1e-9);
    let hit = stdout_of(&run(
        &["simulate", "--in", "or.json", "--x", "101", "--json"],
        dir.path(),
    ));
    let dist = orq::Distribution::from_json(&hit).unwrap();
    assert!(dist.prob(0) <= 1e-9);
}

#[test]
fn build_pipeline_compress_en_conjugate() {
    let dir = tempfile::tempdir().unwrap();
    let demo = write_demo(dir.path());
    stdout_of(&run(
        &[
            "build",
            "compress3",
            "--in",
            demo.to_str().unwrap(),
            "--out",
            "a.json",
        ],
        dir.path(),
    ));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("a.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["details"]["depth"], 3);
    assert_eq!(
        manifest["details"]["teleport_qubits"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
    assert_eq!(
        manifest["details"]["origin_map"].as_array().unwrap().len(),
        2
    );

    // Rearrange outputs for folding, as the library pipeline does.
    let compressed =
        orq::format::from_json(&std::fs::read_to_string(dir.path().join("a.json")).unwrap())
            .unwrap();
    let mut bookkept = compressed.clone();
    let mut outputs = bookkept.postselect().to_vec();
    outputs.extend(compressed.outputs().iter().copied());
    bookkept.set_outputs(outputs);
    std::fs::write(
        dir.path().join("a.json"),
        orq::format::to_json(&bookkept).unwrap(),
    )
    .unwrap();

    stdout_of(&run(
        &["build", "en", "--a", "a.json", "--out", "en.json"],
        dir.path(),
    ));
    stdout_of(&run(
        &["build", "conjugate", "--a", "a.json", "--out", "conj.json"],
        dir.path(),
    ));

    // The conjugated circuit passes both checks.
    let commuting = run(&["check", "commuting", "--in", "conj.json"], dir.path());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&commuting)).unwrap();
    assert_eq!(report["pass"], true);
    // Output-less verbs still leave a run manifest behind.
    assert!(dir.path().join("orq.manifest.json").exists());
    let locality = run(
        &["check", "locality", "--in", "conj.json", "--c", "5"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&locality)).unwrap();
    assert_eq!(report["pass"], true);
    // And fails a locality bound of 4, exiting 1.
    let too_tight = run(
        &["check", "locality", "--in", "conj.json", "--c", "4"],
        dir.path(),
    );
    assert_eq!(too_tight.status.code(), Some(1));

    // The folded and conjugated circuits agree under simulation.
    let en_dist = stdout_of(&run(
        &[
            "simulate",
            "--in",
            "en.json",
            "--x",
            "10",
            "--json",
            "--out",
            "en-dist.json",
        ],
        dir.path(),
    ));
    let conj_dist = stdout_of(&run(
        &["simulate", "--in", "conj.json", "--x", "10", "--json"],
        dir.path(),
    ));
    let a = orq::Distribution::from_json(&en_dist).unwrap();
    let b = orq::Distribution::from_json(&conj_dist).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() <= 1e-9);
}

#[test]
fn strong_sim_on_clifford_or_reduction() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["build", "or-reduction", "--b", "1", "--out", "or1.json"],
        dir.path(),
    );
    let out = stdout_of(&run(
        &[
            "strong-sim",
            "--in",
            "or1.json",
            "--x",
            "0",
            "--y",
            "0",
            "--audit",
        ],
        dir.path(),
    ));
    let prob: f64 = out
        .lines()
        .find(|l| l.starts_with("probability"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((prob - 1.0).abs() <= 1e-9);
    assert!(out.contains("subset"));
    let out = stdout_of(&run(
        &["strong-sim", "--in", "or1.json", "--x", "1", "--y", "0"],
        dir.path(),
    ));
    let prob: f64 = out
        .lines()
        .find(|l| l.starts_with("probability"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(prob.abs() <= 1e-9);
}

#[test]
fn weak_sim_reports_tv_against_exact() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["build", "or-reduction", "--b", "2", "--out", "f.json"],
        dir.path(),
    );
    // Diagonal circuit on t + l = 2 + 1 qubits.
    let d = r#"{"qubits":3,"roles":["input","input","input"],"outputs":[],"postselect":[],
        "gates":[{"type":"CR","control":0,"target":2,"sign":1,"k":2},
                 {"type":"CZ","a":1,"b":2}]}"#;
    std::fs::write(dir.path().join("d.json"), d).unwrap();
    let out = stdout_of(&run(
        &[
            "weak-sim",
            "--f",
            "f.json",
            "--d",
            "d.json",
            "--l",
            "1",
            "--x",
            "01",
            "--shots",
            "20000",
            "--seed",
            "5",
            "--exact",
            "--out",
            "counts.json",
        ],
        dir.path(),
    ));
    let tv: f64 = out
        .lines()
        .find(|l| l.starts_with("tv-vs-exact"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(tv <= 0.05, "tv {tv}");
    assert!(dir.path().join("counts.json").exists());
    assert!(dir.path().join("counts.json.manifest.json").exists());
}

#[test]
fn postselect_exact_and_sampled() {
    let dir = tempfile::tempdir().unwrap();
    // Two independent coins: acceptance = Pr[01]/(Pr[00]+Pr[01]) = 1/2.
    let circuit = r#"{"qubits":2,"roles":["zero","zero"],"outputs":[0,1],"postselect":[],
        "gates":[{"type":"H","q":0},{"type":"H","q":1}]}"#;
    std::fs::write(dir.path().join("c.json"), circuit).unwrap();
    let out = stdout_of(&run(
        &[
            "postselect",
            "--sampler",
            "oracle",
            "--circuit",
            "c.json",
            "--x",
            "",
            "--shots",
            "1",
            "--seed",
            "1",
            "--exact",
        ],
        dir.path(),
    ));
    assert!(out.contains("acceptance 0.5"), "{out}");
    let out = stdout_of(&run(
        &[
            "postselect",
            "--sampler",
            "oracle",
            "--circuit",
            "c.json",
            "--x",
            "",
            "--shots",
            "20000",
            "--seed",
            "2",
        ],
        dir.path(),
    ));
    assert!(out.contains("wilson99"), "{out}");
    let line = out.lines().find(|l| l.starts_with("acceptance")).unwrap();
    let est: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((est - 0.5).abs() < 0.05);

    // The weak-sim sampler drives the same filter through a sandwich.
    run(
        &["build", "or-reduction", "--b", "2", "--out", "f.json"],
        dir.path(),
    );
    let d = r#"{"qubits":4,"roles":["input","input","input","input"],"outputs":[],"postselect":[],
        "gates":[{"type":"CR","control":0,"target":2,"sign":1,"k":2},
                 {"type":"CR","control":1,"target":3,"sign":1,"k":1}]}"#;
    std::fs::write(dir.path().join("d.json"), d).unwrap();
    let out = stdout_of(&run(
        &[
            "postselect",
            "--sampler",
            "weak-sim",
            "--circuit",
            "f.json",
            "--d",
            "d.json",
            "--l",
            "2",
            "--x",
            "00",
            "--shots",
            "5000",
            "--seed",
            "3",
        ],
        dir.path(),
    ));
    assert!(
        out.contains("acceptance") || out.contains("no postselection mass"),
        "{out}"
    );
}

#[test]
fn build_magic_compile_en_prime_and_fanout_or() {
    let dir = tempfile::tempdir().unwrap();
    // A one-input circuit with one quarter-phase gate and one postselected
    // ancilla.
    let base = r#"{"qubits":2,"roles":["input","zero"],"outputs":[0],"postselect":[1],
        "gates":[{"type":"H","q":1},{"type":"CZ","a":0,"b":1},
                 {"type":"R","q":0,"sign":1,"k":3},{"type":"H","q":0}]}"#;
    std::fs::write(dir.path().join("base.json"), base).unwrap();
    stdout_of(&run(
        &[
            "build",
            "magic-compile",
            "--in",
            "base.json",
            "--out",
            "compiled.json",
        ],
        dir.path(),
    ));
    let compiled = orq::format::from_json(
        &std::fs::read_to_string(dir.path().join("compiled.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(compiled.postselect().len(), 2);

    // Rearrange outputs for folding: postselection qubits first, data last.
    let mut bookkept = compiled.clone();
    let mut outputs = bookkept.postselect().to_vec();
    outputs.push(0);
    bookkept.set_outputs(outputs);
    std::fs::write(
        dir.path().join("bookkept.json"),
        orq::format::to_json(&bookkept).unwrap(),
    )
    .unwrap();
    stdout_of(&run(
        &[
            "build",
            "en-prime",
            "--a",
            "bookkept.json",
            "--out",
            "folded.json",
        ],
        dir.path(),
    ));
    let folded = orq::format::from_json(
        &std::fs::read_to_string(dir.path().join("folded.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(folded.outputs().len(), 3);

    stdout_of(&run(
        &["build", "fanout-or", "--b", "3", "--out", "fan.json"],
        dir.path(),
    ));
    let fan = orq::format::from_json(
        &std::fs::read_to_string(dir.path().join("fan.json")).unwrap(),
    )
    .unwrap();
    // Same reduction semantics as the plain circuit, extra ancillas aside.
    let hit = stdout_of(&run(
        &["simulate", "--in", "fan.json", "--x", "010", "--json"],
        dir.path(),
    ));
    let dist = orq::Distribution::from_json(&hit).unwrap();
    assert!(dist.prob(0) <= 1e-9);
    assert!(fan.n_qubits() > 5);
}

#[test]
fn compare_distribution_files() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["build", "or-reduction", "--b", "2", "--out", "or.json"],
        dir.path(),
    );
    run(
        &[
            "simulate", "--in", "or.json", "--x", "00", "--out", "a.json",
        ],
        dir.path(),
    );
    run(
        &[
            "simulate", "--in", "or.json", "--x", "00", "--out", "b.json",
        ],
        dir.path(),
    );
    let out = run(&["compare", "a.json", "b.json"], dir.path());
    let text = stdout_of(&out);
    assert!(text.contains("tv 0"), "{text}");

    run(
        &[
            "simulate", "--in", "or.json", "--x", "01", "--out", "c.json",
        ],
        dir.path(),
    );
    let out = run(&["compare", "a.json", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn demo_theorem1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["demo", "theorem1", "--seed", "7"], dir.path());
    let text = stdout_of(&out);
    for check in [
        "commuting",
        "locality<=5",
        "distribution-match",
        "fold-identity",
    ] {
        let line = text
            .lines()
            .find(|l| l.starts_with(check))
            .unwrap_or_else(|| panic!("missing row {check}: {text}"));
        assert!(line.contains("pass"), "{line}");
    }
}

#[test]
fn unknown_flags_exit_2() {
    let out = orq().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = orq().args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_outputs_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["build", "or-reduction", "--b", "2", "--out", "f.json"],
        dir.path(),
    );
    let d = r#"{"qubits":3,"roles":["input","input","input"],"outputs":[],"postselect":[],
        "gates":[{"type":"CR","control":0,"target":2,"sign":1,"k":2}]}"#;
    std::fs::write(dir.path().join("d.json"), d).unwrap();
    let args = [
        "weak-sim", "--f", "f.json", "--d", "d.json", "--l", "1", "--x", "10", "--shots", "3000",
        "--seed", "11", "--out", "w.json",
    ];
    run(&args, dir.path());
    let first = std::fs::read_to_string(dir.path().join("w.json")).unwrap();
    run(&args, dir.path());
    let second = std::fs::read_to_string(dir.path().join("w.json")).unwrap();
    assert_eq!(first, second);
}
