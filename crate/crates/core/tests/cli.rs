//! End-to-end tests of the `bandpos` binary. Expected stdout lives in
//! `tests/golden/`; set `BANDPOS_BLESS=1` to rewrite it after an intended
//! output change.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bandpos::io::parse_matrix;
use bandpos::SymMatrix;
use serde_json::Value;

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn bandpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandpos"))
        .args(args)
        .current_dir(manifest_dir())
        .env_remove("BANDPOS_EXACT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn golden(name: &str, args: &[&str]) -> String {
    let out = bandpos(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    let text = stdout(&out);
    let path: PathBuf = manifest_dir().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var("BANDPOS_BLESS").is_ok_and(|v| v == "1") {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "golden {name} differs");
    text
}

#[test]
fn check_positivity_goldens() {
    let text = golden(
        "check_positivity_a_eps",
        &["check-positivity", "tests/data/a_eps_0.1.json"],
    );
    assert!(text.starts_with("PD; chain sequence m=(0.47619047619, 0.909090909091)"));
    let text = golden(
        "check_positivity_penta",
        &["check-positivity", "tests/data/penta_boundary.json"],
    );
    assert!(text.starts_with("PSD_BOUNDARY\n"));
    let text = golden(
        "check_positivity_a_eps_json",
        &["--json", "check-positivity", "tests/data/a_eps_0.1.json"],
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdicts"]["positivity"]["class"], "PD");
    assert_eq!(v["verdicts"]["disagreement"], false);
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn hadamard_goldens() {
    let text = golden(
        "hadamard_penta_half",
        &["hadamard", "tests/data/penta_boundary.json", "-r", "0.5"],
    );
    assert!(text.starts_with("INDEFINITE\n"));
    assert!(text.contains("determinant: -0.242640687119"));
    let text = golden(
        "hadamard_zero_json",
        &["hadamard", "tests/data/tri_121.json", "-r", "0", "--json"],
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["conventions"][0], "0^0 := 1");
    let powered = serde_json::to_string(&v["verdicts"]["powered"]).unwrap();
    assert_eq!(parse_matrix(&powered).unwrap().kind(), "tridiagonal");
}

#[test]
fn hadamard_at_one_matches_check_positivity() {
    for file in [
        "tests/data/a_eps_0.1.json",
        "tests/data/penta_boundary.json",
        "tests/data/tri_121.json",
        "tests/data/cauchy3.json",
    ] {
        let h = stdout(&bandpos(&["hadamard", file, "-r", "1"]));
        let c = stdout(&bandpos(&["check-positivity", file]));
        let class = |s: &str| s.split([';', '\n']).next().unwrap().to_string();
        assert_eq!(class(&h), class(&c), "{file}");
    }
}

#[test]
fn chain_goldens() {
    let text = golden("chain_quarter", &["chain", "1/4,1/4,1/4"]);
    assert_eq!(text, "chain sequence m=(1/4, 1/3, 3/8) (exact)\n");
    let text = golden("chain_one", &["chain", "1"]);
    assert!(text.starts_with("not a chain sequence at index 1"));
    let text = golden("chain_half", &["chain", "0.5,0.5,0.5"]);
    assert!(text.starts_with("not a chain sequence at index 2"));
    golden("chain_quarter_json", &["--json", "chain", "1/4,1/4,1/4"]);
}

#[test]
fn chain_env_forces_exact_mode() {
    let terms = vec!["0.1"; 40].join(",");
    let float = bandpos(&["--json", "chain", &terms]);
    let v: Value = serde_json::from_slice(&float.stdout).unwrap();
    assert_eq!(v["verdicts"]["exact_mode"], false);
    let exact = Command::new(env!("CARGO_BIN_EXE_bandpos"))
        .args(["--json", "chain", &terms])
        .env("BANDPOS_EXACT", "1")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(v["verdicts"]["exact_mode"], true);
    assert_eq!(v["verdicts"]["exact_params"][0], "1/10");
}

#[test]
fn critical_exponent_goldens() {
    assert!(golden("critical_k5", &["critical-exponent", "tests/data/k5.txt"]).starts_with("ℕ ∪ [3, ∞)\n"));
    assert_eq!(
        golden("critical_c4", &["critical-exponent", "tests/data/c4.txt"]),
        "not chordal; witness 1-2-3-4\n"
    );
    assert!(golden("critical_p3", &["critical-exponent", "tests/data/p3.txt"]).starts_with("[1, ∞)\n"));
    assert!(golden(
        "critical_k4_minus_edge",
        &["critical-exponent", "tests/data/k4_minus_edge.txt"]
    )
    .starts_with("ℕ ∪ [2, ∞)\n"));
    let text = golden(
        "critical_k5_json",
        &["--json", "critical-exponent", "tests/data/k5.txt"],
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdicts"]["critical_exponent"]["display"], "ℕ ∪ [3, ∞)");
    assert_eq!(v["conventions"][0], "N excludes 0");
}

#[test]
fn id_check_goldens() {
    let text = golden("id_check_tri_121", &["id-check", "tests/data/tri_121.json"]);
    assert!(text.starts_with("not ID: b₁b₂ ≠ 0\n"));
    let text = golden("id_check_blocks", &["id-check", "tests/data/tri_id_blocks.json"]);
    assert!(text.starts_with("ID\n"));
    golden("id_check_cauchy", &["id-check", "tests/data/cauchy3.json"]);
}

#[test]
fn counterexample_goldens() {
    let out = bandpos(&["counterexample", "--family", "tridiagonal", "-r", "0.5"]);
    let text = golden(
        "counterexample_tridiagonal_half",
        &["counterexample", "--family", "tridiagonal", "-r", "0.5"],
    );
    let a = parse_matrix(&text).unwrap();
    assert_eq!(a.entry(1, 1), 3.0);
    let notes = stderr(&out);
    assert!(notes.contains("= -0.267949192431"), "{notes}");
    assert!(notes.contains("powered: INDEFINITE"));

    let text = golden(
        "counterexample_pentadiagonal_quarter",
        &["counterexample", "--family", "pentadiagonal", "-r", "0.25"],
    );
    assert_eq!(parse_matrix(&text).unwrap().kind(), "pentadiagonal");
}

#[test]
fn probe_goldens_and_determinism() {
    let args = [
        "probe",
        "--family",
        "pentadiagonal",
        "-r",
        "2",
        "-n",
        "100",
        "--seed",
        "7",
    ];
    let text = golden("probe_pentadiagonal", &args);
    assert_eq!(text, stdout(&bandpos(&args)));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["min_over_samples"].as_f64().unwrap() >= -1e-10);
    assert_eq!(v["violations"], 0);
    let worst = serde_json::to_string(&v["worst_case"]).unwrap();
    assert_eq!(parse_matrix(&worst).unwrap().kind(), "pentadiagonal");

    let text = golden(
        "probe_pattern_k5",
        &[
            "probe",
            "--family",
            "pattern",
            "--graph",
            "tests/data/k5.txt",
            "-r",
            "3",
            "-n",
            "50",
            "--seed",
            "3",
        ],
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["violations"], 0);
}

#[test]
fn probe_with_injected_counterexample() {
    let dir = std::env::temp_dir().join(format!("bandpos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("a1.json");
    let out = bandpos(&["counterexample", "--family", "tridiagonal", "-r", "0.5"]);
    std::fs::write(&file, &out.stdout).unwrap();
    let file = file.to_str().unwrap();
    let out = bandpos(&[
        "probe",
        "--family",
        "tridiagonal",
        "-r",
        "0.5",
        "-n",
        "1",
        "--seed",
        "0",
        "--inject",
        file,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["min_over_samples"].as_f64().unwrap() < 0.0);
    assert!(v["violations"].as_u64().unwrap() >= 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["check-positivity", "tests/data/nonsymmetric.json"], 2),
        (&["check-positivity", "tests/data/unknown_kind.json"], 2),
        (&["check-positivity", "tests/data/missing.json"], 2),
        (&["critical-exponent", "tests/data/missing.txt"], 2),
        (&["hadamard", "tests/data/tri_121.json", "-r", "-1"], 1),
        (&["counterexample", "--family", "tridiagonal", "-r", "1"], 1),
        (&["counterexample", "--family", "pentadiagonal", "-r", "0"], 1),
        (&["chain", "1/x"], 2),
        (&["chain", "1,,2"], 2),
        (&["probe", "--family", "tridiagonal", "-r", "1", "-n", "0"], 1),
        (&["probe", "--family", "tridiagonal", "-r", "-2"], 1),
        (&["probe", "--family", "pattern", "-r", "2"], 1),
        (&["probe", "--family", "heptagonal", "-r", "2"], 1),
        (&["--tol", "-1", "chain", "1/4"], 1),
        (&["bogus"], 1),
        (&[], 1),
        (&["--help"], 0),
        (&["--version"], 0),
        (&["critical-exponent", "tests/data/c4.txt"], 0),
        (&["id-check", "tests/data/tri_121.json"], 0),
    ];
    for (args, code) in cases {
        let out = bandpos(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn json_errors_carry_exit_code() {
    let out = bandpos(&["--json", "check-positivity", "tests/data/nonsymmetric.json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exit_code"], 2);
    assert!(v["error"].as_str().unwrap().contains("not symmetric"));
}
