use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_fermigrad");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn record(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn numerical(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string(&v).unwrap()
}

fn circuit(name: &str) -> String {
    format!("{DATA}/circuits/{name}")
}

fn config(name: &str) -> String {
    format!("{DATA}/configs/{name}")
}

#[test]
fn energy_of_bundled_reference() {
    let r = record(&["energy", "bundled:h2_sto3g_0.7414"]);
    let e = r["results"]["energy"].as_f64().unwrap();
    assert!((e - r["results"]["hf_energy"].as_f64().unwrap()).abs() < 1e-10);
    assert!(r["timing"]["wall_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn energy_with_parameter_assignment() {
    let toy = circuit("h2_toy.circ");
    let at0 = record(&["energy", "bundled:h2_sto3g_0.7414", "--circuit", &toy]);
    let at1 = record(&["energy", "bundled:h2_sto3g_0.7414", "--circuit", &toy, "--param", "t=0.2"]);
    let e0 = at0["results"]["energy"].as_f64().unwrap();
    assert!((e0 - at0["results"]["hf_energy"].as_f64().unwrap()).abs() < 1e-12);
    assert_ne!(at0["results"]["energy"], at1["results"]["energy"]);
    assert_eq!(at1["results"]["parameters"]["t"], 0.2);
}

#[test]
fn commands_are_deterministic() {
    let toy = circuit("h2_toy.circ");
    let cases: Vec<Vec<&str>> = vec![
        vec!["energy", "bundled:h2_sto3g_0.7414", "--circuit", &toy],
        vec!["grad", "bundled:h2_sto3g_0.7414", "--circuit", &toy, "--scheme", "exact4"],
        vec!["vqe", "bundled:h2_sto3g_0.7414", "--seed", "5"],
        vec!["adapt", "bundled:h2_sto3g_0.7414"],
        vec!["excited", "bundled:h2_sto3g_0.7414"],
        vec!["spectrum", "bundled:h2_sto3g_0.7414", "--electrons", "2", "--singlet"],
    ];
    for args in cases {
        let (a, b) = (record(&args), record(&args));
        assert_eq!(numerical(a), numerical(b), "{args:?}");
    }
}

#[test]
fn random_initialization_depends_on_seed_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("random.toml");
    std::fs::write(&cfg, "[optimizer]\ninit = \"random\"\ninit_scale = 0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let init = |seed: &str| {
        record(&["vqe", "bundled:h2_sto3g_0.7414", "--config", cfg, "--seed", seed])["results"]["initial_parameters"]["s0_0"].clone()
    };
    let (a, b, c) = (init("1"), init("1"), init("2"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_ne!(a, Value::from(0.0));
}

#[test]
fn out_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.json");
    let status = run(&[
        "grad",
        "bundled:h2_631g_0.7414",
        "--circuit",
        &circuit("illustrative_complex.circ"),
        "--config",
        &config("scan_schemes.toml"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("theta,energy,qubit[r=|c|/2 s=pi/(4r)],exact4[r=1/4 s=pi],real2+[r=1/2 s=pi/2]"));
    assert_eq!(csv.lines().count(), 102);
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rec["command"], "grad");
    let schemes = rec["results"]["schemes"].as_array().unwrap();
    assert!(schemes[1]["max_abs_dev_from_fd"].as_f64().unwrap() < 1e-6);
    assert!(schemes[2]["max_abs_dev_from_fd"].as_f64().unwrap() > 1e-3);
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let bad_ham = write("bad.ham", "# n_qubits: 4\n1 0 Z0\n0.5 0 W3\n");
    let out = run(&["energy", &bad_ham]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("W3"), "{err}");

    let bad_cfg = write("bad.toml", "[optimizer]\nmethd = \"gd\"\n");
    assert_eq!(code(&run(&["vqe", "bundled:h2_sto3g_0.7414", "--config", &bad_cfg])), 2);
    assert_eq!(code(&run(&["energy", "bundled:h2_sto3g_0.7414", "--circuit", "/nonexistent.circ"])), 2);
    assert_eq!(code(&run(&["frobnicate", "bundled:h2_sto3g_0.7414"])), 2);
    let wide = write("wide.circ", "X 7\n");
    assert_eq!(code(&run(&["energy", "bundled:h2_sto3g_0.7414", "--circuit", &wide])), 2);

    let huge = write("huge.ham", "# n_qubits: 2\n# n_electrons: 0\n1e308 0 Z0\n1e308 0 Z1\n");
    assert_eq!(code(&run(&["energy", &huge])), 3);

    let short = write("short.toml", "[optimizer]\nmax_iters = 1\ntol = 1e-14\n");
    assert_eq!(code(&run(&["vqe", "bundled:h2_sto3g_0.7414", "--config", &short])), 4);

    assert_eq!(code(&run(&["spectrum", "bundled:h2_sto3g_0.7414", "--k", "2"])), 0);
}

#[test]
fn sample_configs_parse_and_run() {
    for (cmd, problem, cfg) in [
        ("excited", "bundled:h2_sto3g_0.7414", "excited_h2.toml"),
        ("adapt", "bundled:h2_631g_0.7414", "adapt_631g.toml"),
    ] {
        let r = record(&[cmd, problem, "--config", &config(cfg)]);
        assert_eq!(r["command"], cmd);
    }
    assert!(Path::new(&circuit("illustrative_real.circ")).exists());
}
