use std::path::Path;
use std::process::{Command, Output};

fn qpar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().expect("utf-8 temp path").to_string()
}

#[test]
fn small_sweep_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpar(&[
        "--dist",
        "semi",
        "--scheme",
        "subid-ncbit,subbit-ncid",
        "--subnets",
        "2..8",
        "--qubits",
        "8",
        "--bench",
        "ghz,ising",
        "--dump-program",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("speedups.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("benchmark,dist,scheme,M,K,W_S,W_NC"));
    assert_eq!(lines.count(), 2 * 2 * 3);
    let svg = std::fs::read_to_string(dir.path().join("speedups.svg")).unwrap();
    roxmltree::Document::parse(&svg).expect("well-formed svg");
    assert!(dir.path().join("programs/ghz_semi_baseline.txt").is_file());
    assert!(dir
        .path()
        .join("programs/ising_semi_subid-ncbit_M4.txt")
        .is_file());
}

#[test]
fn qasm_input_and_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("bell.qasm");
    std::fs::write(
        &good,
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n",
    )
    .unwrap();
    let bad = dir.path().join("broken.qasm");
    std::fs::write(&bad, "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    let paths = format!("{},{}", good.display(), bad.display());
    let out_dir = dir.path().join("out");
    let out = qpar(&[
        "--dist",
        "fully",
        "--scheme",
        "subbit-ncbit",
        "--subnets",
        "4",
        "--qasm",
        &paths,
        "--out",
        &out_arg(&out_dir),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let failures = std::fs::read_to_string(out_dir.join("failures.csv")).unwrap();
    assert!(failures.contains("broken"));
    let rows = std::fs::read_to_string(out_dir.join("speedups.csv")).unwrap();
    assert!(rows.contains("bell,fully,subBIT_ncBIT,4"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = out_arg(dir.path());
    assert_eq!(
        qpar(&["--bench", "nope", "--out", &o]).status.code(),
        Some(1)
    );
    assert_eq!(
        qpar(&["--scheme", "mimd", "--out", &o]).status.code(),
        Some(1)
    );
    assert_eq!(
        qpar(&["--subnets", "5..7", "--out", &o]).status.code(),
        Some(1)
    );
    let timing = dir.path().join("timing.toml");
    std::fs::write(&timing, "clock_hz = \"fast\"\n").unwrap();
    assert_eq!(
        qpar(&["--timing", timing.to_str().unwrap(), "--out", &o])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qpar(&["--cx-template", "/nonexistent/template.toml", "--out", &o])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn shipped_configs_match_defaults() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let timing = qpar::TimingModel::load(&root.join("timing.toml")).unwrap();
    assert_eq!(timing, qpar::TimingModel::default());
    let template = qpar::CxTemplate::load(&root.join("cx_template.toml")).unwrap();
    assert_eq!(template, qpar::CxTemplate::default());
}
