use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lattice-ca"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Exit codes"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    let (code, _, err) = run(&["entropy", "--rule", "builtin:nope", "--domain", "square:1"]);
    assert_eq!(code, 1);
    assert!(err.contains("no builtin rule"));
    assert_eq!(run(&["geom", "--domain", "square:0"]).0, 1);
}

#[test]
fn exact_enumeration_past_the_cap_exits_two() {
    let (code, _, err) = run(&["entropy", "--rule", "builtin:xor2d", "--domain", "square:3", "--kmax", "2", "--mode", "exact"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("resource limit"));
}

#[test]
fn rule_check_reports_permutativity() {
    let (code, out, _) = run(&["rule", "check", "builtin:and2d"]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    assert_eq!(row, "2,2,table,2,2,false,0.5,degenerate");
}

#[test]
fn malformed_rule_file_names_the_line() {
    let dir = std::env::temp_dir().join(format!("lattice-ca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.rule");
    std::fs::write(&path, "dim = 2\nalphabet = 2\ntype = algebraic\nprime = 4\n").unwrap();
    let (code, _, err) = run(&["rule", "check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn entropy_csv_header_and_counts() {
    let (code, out, _) = run(&["entropy", "--rule", "builtin:ledrappier", "--domain", "square:2", "--kmax", "3", "--mode", "exact"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,p_J,k,N_k,exact,slope,lower_rate,upper_rate");
    // J = [−2,2] has five cells, so N_k = 2^(4+k).
    let counts: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(counts, ["32", "64", "128"]);
}

#[test]
fn jsonl_and_manifest_written_to_out() {
    let dir = std::env::temp_dir().join(format!("lattice-ca-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("ruelle.jsonl");
    let (code, _, err) = run(&[
        "verify", "ruelle", "--rule", "builtin:xor2d", "--n", "20", "--format", "jsonl", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("verdict PASS"));
    let ly = std::fs::read_to_string(dir.join("ruelle.lyapunov.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(ly.lines().next().unwrap()).unwrap();
    assert_eq!(first["k"], 1);
    assert_eq!(first["satisfied"], true);
    let manifest = std::fs::read_to_string(dir.join("ruelle.jsonl.manifest.jsonl")).unwrap();
    assert_eq!(manifest.lines().count(), 2);
    let entry: serde_json::Value = serde_json::from_str(manifest.lines().next().unwrap()).unwrap();
    assert_eq!(entry["config"]["kind"], "ruelle");
    assert_eq!(entry["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_properties_passes() {
    let (code, out, err) = run(&["--seed", "3", "verify", "properties", "--cases", "40"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("suite,cases,violations,first_failure"));
    assert!(out.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0")));
}

#[test]
fn same_seed_same_output() {
    let args = ["--seed", "5", "lyapunov", "--rule", "builtin:and2d", "--domain", "square:2", "--kmax", "2", "--samples", "12"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn in_process_entry_point() {
    assert_eq!(lattice_ca_cli::run_cli(["lattice-ca", "rule", "show", "builtin:xor2d"]), 0);
    assert_eq!(lattice_ca_cli::run_cli(["lattice-ca", "geom", "--domain", "bogus:1"]), 1);
}
