//! End-to-end checks of the `sinklock` binary: pinned outputs, byte-level
//! determinism across reruns, exit codes (0 success, 1 dirty verification,
//! 2 errors), JSON modes, and the simulate -> verify loop.

use std::process::{Command, Output};

use serde_json::Value;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sinklock"));
    // The tests must not inherit a seed from the caller's shell.
    cmd.env_remove("SINKLOCK_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.args(args).output().expect("spawn sinklock")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn stdout_str(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("stdout utf8")
}

fn assert_code(out: &Output, code: i32, what: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{what}: expected exit {code}, got {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        stdout_str(out),
        String::from_utf8_lossy(&out.stderr),
    );
}

#[test]
fn gen_prints_pinned_edge_list_and_reruns_are_byte_identical() {
    let first = run(&["gen", "--class", "path", "-n", "5"]);
    assert_code(&first, 0, "gen path");
    assert_eq!(stdout_str(&first), "5 4\n0 1\n1 2\n2 3\n3 4\n");

    let again = run(&["gen", "--class", "path", "-n", "5"]);
    assert_eq!(first.stdout, again.stdout, "gen is not deterministic");

    let star = run(&["gen", "--class", "star", "-n", "4"]);
    assert_eq!(stdout_str(&star), "4 3\n0 1\n0 2\n0 3\n");

    // Randomized classes repeat under the same generation seed and move
    // under a different one.
    let t1 = run(&["gen", "--class", "tree", "-n", "9", "--gen-seed", "3"]);
    let t2 = run(&["gen", "--class", "tree", "-n", "9", "--gen-seed", "3"]);
    let t3 = run(&["gen", "--class", "tree", "-n", "9", "--gen-seed", "4"]);
    assert_code(&t1, 0, "gen tree");
    assert_eq!(t1.stdout, t2.stdout);
    assert_ne!(t1.stdout, t3.stdout, "gen ignored --gen-seed");
}

#[test]
fn gen_writes_the_same_bytes_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("edges.txt");
    let to_file = run(&[
        "gen", "--class", "cycle", "-n", "6", "-o",
        path.to_str().unwrap(),
    ]);
    assert_code(&to_file, 0, "gen -o");
    let on_stdout = run(&["gen", "--class", "cycle", "-n", "6"]);
    assert_eq!(
        std::fs::read(&path).expect("read edge file"),
        on_stdout.stdout
    );
}

#[test]
fn table_pins_path_closed_forms() {
    let out = run(&["table", "--class", "path", "--n-from", "3", "--n-to", "4"]);
    assert_code(&out, 0, "table path");
    let text = stdout_str(&out);
    assert!(text.starts_with("class: path\n"), "got {text:?}");
    // E[X] = (n + 2) / 4 and trees always have a sink.
    assert!(text.contains("n=3\texpected_sinks = 5/4 (1.25000000000)"), "got {text:?}");
    assert!(text.contains("prob_positive = 1/1 (1.00000000000)"), "got {text:?}");
    assert!(text.contains("n=4\texpected_sinks = 3/2 (1.50000000000)"), "got {text:?}");

    let json = run(&["table", "--class", "path", "--n-from", "3", "--n-to", "4", "--json"]);
    assert_code(&json, 0, "table --json");
    let report: Value = serde_json::from_str(stdout_str(&json)).expect("table json");
    assert_eq!(report["class"], "path");
    let rows = report["rows"].as_array().expect("rows");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["n"], 3);
    assert_eq!(rows[0]["expected_sinks"]["rational"], "5/4");
    assert_eq!(rows[0]["expected_sinks"]["relation"], "=");
    assert_eq!(rows[0]["expected_sinks"]["value"], 1.25);
}

#[test]
fn table_marks_bounds_and_missing_forms() {
    // Bounded degree has one-sided forms; Pr uses the grouping bound.
    let out = run(&[
        "table", "--class", "bounded", "--k", "3", "--n-from", "12", "--n-to", "12", "--json",
    ]);
    assert_code(&out, 0, "table bounded");
    let report: Value = serde_json::from_str(stdout_str(&out)).expect("json");
    assert_eq!(report["rows"][0]["expected_sinks"]["relation"], ">=");

    // gnp has an asymptotic E-form and no Pr-form at all.
    let out = run(&[
        "table", "--class", "gnp", "--p", "0.1", "--n-from", "30", "--n-to", "30", "--json",
    ]);
    assert_code(&out, 0, "table gnp");
    let report: Value = serde_json::from_str(stdout_str(&out)).expect("json");
    assert_eq!(report["rows"][0]["expected_sinks"]["relation"], "~");
    assert!(report["rows"][0].get("prob_positive").is_none());
}

#[test]
fn estimate_json_report_is_deterministic_and_self_consistent() {
    let args = [
        "estimate", "--class", "cycle", "-n", "8", "--statistic", "expected-sinks",
        "--trials", "20000", "--seed", "7", "--json",
    ];
    let out = run(&args);
    assert_code(&out, 0, "estimate cycle");
    let report: Value = serde_json::from_str(stdout_str(&out)).expect("estimate json");

    // C_8: E[X] = 8/4 = 2, every vertex contributing 2^-2.
    assert_eq!(report["closed_form"]["rational"], "2/1");
    assert_eq!(report["degree_sum"], "2/1");
    assert_eq!(report["exact"]["rational"], "2/1");
    assert_eq!(report["exact"]["orientations"], "256");
    assert_eq!(report["trials"], 20000);
    assert_eq!(report["seed"], 7);
    let point = report["estimate"]["point"].as_f64().expect("point");
    let se = report["estimate"]["std_error"].as_f64().expect("se");
    assert!(se > 0.0);
    assert!((point - 2.0).abs() <= 4.0 * se, "estimate {point} se {se}");
    let z = report["z_score"].as_f64().expect("z");
    assert!(z.abs() <= 4.0);

    let again = run(&args);
    assert_eq!(out.stdout, again.stdout, "estimate is not deterministic");
}

#[test]
fn estimate_reads_an_edge_list_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "3 2\n0 1\n1 2\n").expect("write graph");
    let out = run(&[
        "estimate", "--graph", path.to_str().unwrap(), "--trials", "5000", "--json",
    ]);
    assert_code(&out, 0, "estimate --graph");
    let report: Value = serde_json::from_str(stdout_str(&out)).expect("json");
    // P_3 by hand: 2 * 2^-1 + 2^-2.
    assert_eq!(report["degree_sum"], "5/4");
    assert!(report.get("closed_form").is_none(), "no class, no form");
    assert_eq!(report["graph"]["n"], 3);
    assert_eq!(report["graph"]["m"], 2);
}

#[test]
fn seed_env_variable_matches_the_flag() {
    let flagged = run(&[
        "estimate", "--class", "star", "-n", "6", "--trials", "4000", "--seed", "9", "--json",
    ]);
    let from_env = run_env(
        &["estimate", "--class", "star", "-n", "6", "--trials", "4000", "--json"],
        &[("SINKLOCK_SEED", "9")],
    );
    assert_code(&flagged, 0, "estimate --seed");
    assert_code(&from_env, 0, "estimate via env");
    assert_eq!(flagged.stdout, from_env.stdout);
}

#[test]
fn simulate_then_verify_round_trips_cleanly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trace = dir.path().join("run.jsonl");
    let sim = run(&[
        "simulate", "--class", "path", "-n", "8", "--seed", "21", "-o",
        trace.to_str().unwrap(),
    ]);
    assert_code(&sim, 0, "simulate");
    let text = stdout_str(&sim);
    assert!(text.contains("engine: central"), "got {text:?}");
    assert!(text.contains("completed: true"), "got {text:?}");

    // The trace file itself must be reproducible.
    let trace2 = dir.path().join("run2.jsonl");
    run(&[
        "simulate", "--class", "path", "-n", "8", "--seed", "21", "-o",
        trace2.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read(&trace).unwrap(),
        std::fs::read(&trace2).unwrap(),
        "trace bytes moved between reruns"
    );

    let verify = run(&["verify", trace.to_str().unwrap()]);
    assert_code(&verify, 0, "verify clean trace");
    let text = stdout_str(&verify);
    assert!(text.contains("structural violations: 0"), "got {text:?}");
    assert!(text.contains("priority digraph: acyclic"), "got {text:?}");
    assert!(text.ends_with("verdict: clean\n"), "got {text:?}");

    let json = run(&["verify", trace.to_str().unwrap(), "--json"]);
    assert_code(&json, 0, "verify --json");
    let report: Value = serde_json::from_str(stdout_str(&json)).expect("verify json");
    assert_eq!(report["structural"].as_array().map(Vec::len), Some(0));
}

#[test]
fn verify_rejects_a_tampered_trace_with_exit_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trace = dir.path().join("run.jsonl");
    run(&[
        "simulate", "--class", "cycle", "-n", "6", "--seed", "5", "-o",
        trace.to_str().unwrap(),
    ]);

    // Redirect the first grant to a different process.
    let text = std::fs::read_to_string(&trace).expect("read trace");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let target = lines
        .iter()
        .position(|l| l.contains("\"type\":\"granted\""))
        .expect("a granted event");
    let mut event: Value = serde_json::from_str(&lines[target]).expect("event json");
    let original = event["process"].as_u64().expect("process") as u32;
    event["process"] = Value::from((original + 1) % 6);
    lines[target] = serde_json::to_string(&event).expect("serialize");
    std::fs::write(&trace, lines.join("\n") + "\n").expect("write tampered");

    let verify = run(&["verify", trace.to_str().unwrap()]);
    assert_code(&verify, 1, "verify tampered trace");
    let out = stdout_str(&verify);
    assert!(out.ends_with("verdict: violations found\n"), "got {out:?}");
}

#[test]
fn classical_engine_traces_verify_cleanly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let workload = dir.path().join("workload.json");
    std::fs::write(
        &workload,
        r#"{"capacities":[1,2],"requests":[[1,0],[0,2],[1,1]]}"#,
    )
    .expect("write workload");
    let trace = dir.path().join("classical.jsonl");
    let sim = run(&[
        "simulate", "--engine", "classical", "--workload",
        workload.to_str().unwrap(), "--seed", "3", "-o", trace.to_str().unwrap(),
    ]);
    assert_code(&sim, 0, "simulate classical");
    let text = stdout_str(&sim);
    assert!(text.contains("engine: classical"), "got {text:?}");
    assert!(text.contains("workload: 3 processes, 2 classes"), "got {text:?}");
    assert!(text.contains("completed: true"), "got {text:?}");

    let verify = run(&["verify", trace.to_str().unwrap()]);
    assert_code(&verify, 0, "verify classical");
    let out = stdout_str(&verify);
    assert!(out.contains("engine: classical"), "got {out:?}");
    assert!(out.contains("snapshots acyclic: true"), "got {out:?}");
    assert!(out.ends_with("verdict: clean\n"), "got {out:?}");
}

#[test]
fn dist_sim_reports_messages_and_verifies_clean() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trace = dir.path().join("dist.jsonl");
    let sim = run(&[
        "dist-sim", "--class", "cycle", "-n", "8", "--seed", "3",
        "--delay", "uniform:1..4", "--delay-seed", "9", "-o",
        trace.to_str().unwrap(),
    ]);
    assert_code(&sim, 0, "dist-sim");
    let text = stdout_str(&sim);
    assert!(text.contains("engine: dist"), "got {text:?}");
    assert!(text.contains("completed: true"), "got {text:?}");
    assert!(text.contains("messages: "), "got {text:?}");

    let verify = run(&["verify", trace.to_str().unwrap()]);
    assert_code(&verify, 0, "verify dist trace");
    assert!(stdout_str(&verify).ends_with("verdict: clean\n"));

    // The delay law shifts delivery times but not the trace's grants; a
    // different delay seed still verifies clean.
    let sim = run(&[
        "dist-sim", "--class", "cycle", "-n", "8", "--seed", "3",
        "--delay", "fixed:2", "-o", trace.to_str().unwrap(),
    ]);
    assert_code(&sim, 0, "dist-sim fixed delay");
    let verify = run(&["verify", trace.to_str().unwrap()]);
    assert_code(&verify, 0, "verify fixed-delay trace");
}

#[test]
fn bad_invocations_exit_two() {
    // Missing required graph parameters.
    assert_code(&run(&["gen", "--class", "path"]), 2, "gen without -n");
    assert_code(&run(&["gen", "--class", "gnp", "-n", "10"]), 2, "gnp without --p");
    // Class parameters on the wrong class.
    assert_code(
        &run(&["gen", "--class", "path", "-n", "5", "--k", "3"]),
        2,
        "stray --k",
    );
    // Degenerate Monte Carlo request.
    assert_code(
        &run(&["estimate", "--class", "path", "-n", "5", "--trials", "0"]),
        2,
        "zero trials",
    );
    // Unreadable trace.
    assert_code(&run(&["verify", "/nonexistent/trace.jsonl"]), 2, "missing trace");
    // Malformed delay law.
    assert_code(
        &run(&["dist-sim", "--class", "path", "-n", "4", "--delay", "uniform:9..2"]),
        2,
        "inverted delay range",
    );
    // Unknown subcommand (clap usage error).
    assert_code(&run(&["frobnicate"]), 2, "unknown subcommand");
    // Enumeration past the edge cap reports the error, not a hang.
    let big = run(&["estimate", "--class", "complete", "-n", "12", "--trials", "10"]);
    assert_code(&big, 0, "estimate skips enumeration past the cap");
    let report = stdout_str(&big);
    assert!(!report.contains("enumeration exact"), "got {report:?}");
}

#[test]
fn table_rejects_an_empty_range() {
    let out = run(&["table", "--class", "path", "--n-from", "6", "--n-to", "3"]);
    assert_code(&out, 2, "inverted range");
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("exceeds"),
        "stderr should explain the range"
    );
}

#[test]
fn simulate_writes_trace_to_stdout_with_dash() {
    let out = run(&[
        "simulate", "--class", "path", "-n", "4", "--seed", "2", "-o", "-",
    ]);
    assert_code(&out, 0, "simulate -o -");
    let text = stdout_str(&out);
    let first = text.lines().next().expect("first line");
    let header: Value = serde_json::from_str(first).expect("header json");
    assert_eq!(header["type"], "config");
    assert_eq!(header["engine"], "central");
    assert_eq!(header["n"], 4);
    // The human summary follows the trace on stdout.
    assert!(text.contains("completed: true"), "got {text:?}");

    // Piping the dash output into a file must equal -o FILE bytes.
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("t.jsonl");
    run(&[
        "simulate", "--class", "path", "-n", "4", "--seed", "2", "-o",
        path.to_str().unwrap(),
    ]);
    let file_bytes = std::fs::read(&path).unwrap();
    assert!(out.stdout.starts_with(&file_bytes));
}

#[test]
fn help_and_version_are_available() {
    let help = run(&["--help"]);
    assert_code(&help, 0, "--help");
    for sub in ["gen", "table", "estimate", "simulate", "dist-sim", "verify"] {
        assert!(stdout_str(&help).contains(sub), "--help misses {sub}");
    }
    let version = run(&["--version"]);
    assert_code(&version, 0, "--version");
    assert!(stdout_str(&version).starts_with("sinklock "));
}

/// Regression: trace paths come out of `Path::display`, so non-ASCII
/// directories must round-trip.
#[test]
fn traces_survive_unicode_paths() {
    let dir = tempfile::tempdir().expect("tempdir");
    let sub = dir.path().join("runs-\u{e9}t\u{e9}");
    std::fs::create_dir(&sub).expect("mkdir");
    let trace = sub.join("t.jsonl");
    let sim = run(&[
        "simulate", "--class", "star", "-n", "5", "--seed", "1", "-o",
        trace.to_str().unwrap(),
    ]);
    assert_code(&sim, 0, "simulate into unicode dir");
    assert_code(&run(&["verify", trace.to_str().unwrap()]), 0, "verify from unicode dir");
}

/// Atomic writes must not leave temp droppings next to the output.
#[test]
fn output_directory_stays_clean() {
    let dir = tempfile::tempdir().expect("tempdir");
    let trace = dir.path().join("t.jsonl");
    run(&[
        "simulate", "--class", "path", "-n", "6", "--seed", "4", "-o",
        trace.to_str().unwrap(),
    ]);
    assert!(trace.exists());
    let entries: Vec<_> = std::fs::read_dir(dir.path())
        .expect("read dir")
        .map(|e| e.expect("entry").file_name())
        .collect();
    assert_eq!(entries.len(), 1, "stray files: {entries:?}");
}
