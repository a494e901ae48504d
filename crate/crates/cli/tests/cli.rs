//! End-to-end checks of the command line surface: exit codes, output
//! determinism, tolerance resolution and the JSON report shape.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tenrank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tenrank-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn synth_stdout_is_byte_identical_for_same_seed() {
    let args = ["synth", "--dims", "3,4,2", "--rank", "2", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let c = run(&["synth", "--dims", "3,4,2", "--rank", "2", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn synth_embeds_reproducibility_metadata() {
    let out = run(&["synth", "--dims", "2,2", "--rank", "1", "--seed", "5"]);
    let text = stdout(&out);
    assert!(text.starts_with("tensor 2\ndims 2 2\n"));
    assert!(text.contains("# generator chacha8"));
    assert!(text.contains("# seed 5"));
    assert!(text.contains("# rank 1"));
    assert!(text.contains("# distribution gaussian"));
}

#[test]
fn detect_round_trip_through_file() {
    let path = temp_path("roundtrip.tns");
    let out = run(&[
        "synth",
        "--dims",
        "4,4,4",
        "--rank",
        "3",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let detect = run(&["detect", path.to_str().unwrap()]);
    assert!(detect.status.success());
    let text = stdout(&detect);
    assert!(text.contains("lower bound  3"));
    assert!(text.contains("rank detected, R = 3"));

    let bound = run(&["bound", path.to_str().unwrap()]);
    assert!(bound.status.success());
    let text = stdout(&bound);
    assert!(text.contains("lower bound  3"));
    assert!(!text.contains("verdict"));

    std::fs::remove_file(&path).ok();
}

#[test]
fn detect_json_mirrors_report_fields() {
    let path = temp_path("json.tns");
    run(&[
        "synth",
        "--dims",
        "4,4,4",
        "--rank",
        "3",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    let out = run(&["detect", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["lower_bound"], 3);
    assert_eq!(value["detected"], true);
    assert_eq!(value["detected_rank"], 3);
    assert_eq!(value["r_max"], 3);
    assert_eq!(value["split"]["rows"], 4);
    assert_eq!(value["split"]["cols"], 16);
    assert_eq!(value["unfolding_shape"][0], 4);
    assert!(value["singular_values"].as_array().unwrap().len() == 4);
    assert!(value["tolerance_used"].as_f64().unwrap() > 0.0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn tolerance_flag_beats_environment() {
    let path = temp_path("tol.tns");
    run(&[
        "synth",
        "--dims",
        "3,3",
        "--rank",
        "2",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);

    // Huge env tolerance wipes out every singular value.
    let out = bin()
        .args(["detect", path.to_str().unwrap(), "--json"])
        .env("TENRANK_TOL", "1e12")
        .output()
        .unwrap();
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["lower_bound"], 0);
    assert_eq!(value["tolerance_used"].as_f64().unwrap(), 1e12);

    // The flag wins over the environment.
    let out = bin()
        .args(["detect", path.to_str().unwrap(), "--json", "--tol", "1e-12"])
        .env("TENRANK_TOL", "1e12")
        .output()
        .unwrap();
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["lower_bound"], 2);
    assert_eq!(value["tolerance_used"].as_f64().unwrap(), 1e-12);

    std::fs::remove_file(&path).ok();
}

#[test]
fn exit_codes() {
    // 0: success
    assert_eq!(run(&["rmax", "--dims", "4,4,4"]).status.code(), Some(0));
    // 1: usage errors
    assert_eq!(run(&["detect"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["rmax", "--dims", "5"]).status.code(), Some(1));
    assert_eq!(
        run(&["synth", "--dims", "2,2", "--rank", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["figure", "--imax", "1", "--nmax", "4"]).status.code(),
        Some(1)
    );
    // 0: help is not an error
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // 2: unreadable or malformed input
    assert_eq!(
        run(&["detect", "/nonexistent/nowhere.tns"]).status.code(),
        Some(2)
    );
    let path = temp_path("bad.tns");
    std::fs::write(&path, "tensor 2\ndims 2 2\n1 2 3\n").unwrap();
    assert_eq!(run(&["detect", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "tensor 2\ndims 2 2\n1 2 x 4\n").unwrap();
    assert_eq!(run(&["detect", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn figure_csv_has_header_and_lf_endings() {
    let out = run(&["figure", "--imax", "4", "--nmax", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,I,R_max");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert_eq!(lines[1], "2,2,1");
    assert_eq!(lines.last().unwrap(), &"3,4,3");
}

#[test]
fn figure_agrees_with_rmax_per_cell() {
    let out = run(&["figure", "--imax", "6", "--nmax", "4"]);
    for line in stdout(&out).lines().skip(1) {
        let parts: Vec<u64> = line.split(',').map(|p| p.parse().unwrap()).collect();
        let (n, i, r_max) = (parts[0], parts[1], parts[2]);
        let dims = vec![i.to_string(); n as usize].join(",");
        let cell = run(&["rmax", "--dims", &dims]);
        let text = stdout(&cell);
        let reported: u64 = text
            .lines()
            .find_map(|l| l.strip_prefix("r_max  "))
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert_eq!(reported, r_max, "cell N={n} I={i}");
    }
}

#[test]
fn nranks_reports_each_split() {
    let path = temp_path("nranks.tns");
    run(&[
        "synth",
        "--dims",
        "2,2,8",
        "--rank",
        "3",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    let out = run(&["nranks", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1  2  16  2"));
    assert!(text.contains("2  4  8  3"));
    assert!(text.contains("max rank 3"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn split_strategies_are_selectable() {
    let exact = run(&["split", "--dims", "8,2,3,3"]);
    assert!(stdout(&exact).contains("min product  9"));
    let dp = run(&["split", "--dims", "8,2,3,3", "--strategy", "sum-dp"]);
    assert!(stdout(&dp).contains("min product  8"));
}

#[test]
fn mc_is_deterministic_for_a_seed() {
    let a = run(&["mc", "--trials", "40", "--seed", "12"]);
    let b = run(&["mc", "--trials", "40", "--seed", "12", "--threads", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("summary  trials 40  seed 12"));
}
