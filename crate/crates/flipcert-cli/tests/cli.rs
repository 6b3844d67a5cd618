//! End-to-end checks of the command-line interface: exit codes, output
//! formats, and byte-determinism of generated files. Only fast subcommands
//! are exercised here; the certificate pipeline itself is covered by the
//! library's acceptance suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_flipcert")
}

/// A fresh scratch directory per call, cleaned up by the OS temp reaper.
fn scratch(tag: &str) -> PathBuf {
    static N: AtomicU32 = AtomicU32::new(0);
    let dir = std::env::temp_dir().join(format!(
        "flipcert-cli-test-{}-{}-{}",
        std::process::id(),
        tag,
        N.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

const HEXAGON: &str = "dim 2 6\n2 0\n1 2\n-1 2\n-2 0\n-1 -2\n1 -2\n";
const FAN: &str = "4 3\n0 1 2\n0 2 3\n0 3 4\n0 4 5\n";

fn write_hexagon(dir: &Path) -> (PathBuf, PathBuf) {
    let points = dir.join("hexagon.points");
    let tri = dir.join("fan.triangulation");
    fs::write(&points, HEXAGON).unwrap();
    fs::write(&tri, FAN).unwrap();
    (points, tri)
}

#[test]
fn validate_accepts_the_fan_and_rejects_corruptions() {
    let dir = scratch("validate");
    let (points, tri) = write_hexagon(&dir);
    let ok = run(&[
        "validate",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        tri.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0, "stdout: {}", stdout(&ok));
    assert!(
        stdout(&ok).starts_with("valid: 4 cells, covered volume 24"),
        "stdout: {}",
        stdout(&ok)
    );

    // a missing cell leaves the hull uncovered
    let short = dir.join("short.triangulation");
    fs::write(&short, "3 3\n0 1 2\n0 2 3\n0 3 4\n").unwrap();
    let bad = run(&[
        "validate",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        short.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("invalid: "), "stdout: {}", stdout(&bad));

    // a duplicated cell is rejected at parse time with a witness
    let dup = dir.join("dup.triangulation");
    fs::write(&dup, "4 3\n0 1 2\n0 1 2\n0 2 3\n0 3 4\n").unwrap();
    let bad = run(&[
        "validate",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        dup.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("invalid: "), "stdout: {}", stdout(&bad));

    // a missing file is a usage error, not a verdict
    let gone = run(&[
        "validate",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        dir.join("nope.triangulation").to_str().unwrap(),
    ]);
    assert_eq!(code(&gone), 2);
}

#[test]
fn explore_reports_the_hexagon_graph_and_flags_caps() {
    let dir = scratch("explore");
    let (points, tri) = write_hexagon(&dir);
    let out = dir.join("graph");
    let o = run(&[
        "explore",
        "--config",
        points.to_str().unwrap(),
        "--seed",
        tri.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "stdout: {}", stdout(&o));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(
        summary,
        "nodes=14\nedges=21\ncomponents=1\nstatus=complete\n"
    );
    let adjacency = fs::read_to_string(out.join("adjacency.txt")).unwrap();
    assert_eq!(adjacency.lines().count(), 14);

    // hitting the node cap is not an error; the status says partial
    let capped = dir.join("capped");
    let o = run(&[
        "explore",
        "--config",
        points.to_str().unwrap(),
        "--seed",
        tri.to_str().unwrap(),
        "--node-limit",
        "5",
        "--out",
        capped.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "stdout: {}", stdout(&o));
    let summary = fs::read_to_string(capped.join("summary.txt")).unwrap();
    assert_eq!(summary.lines().next(), Some("nodes=5"));
    assert!(summary.ends_with("status=partial\n"), "summary: {}", summary);
}

#[test]
fn flips_lists_the_three_fan_moves() {
    let dir = scratch("flips");
    let (points, tri) = write_hexagon(&dir);
    let o = run(&[
        "flips",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        tri.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let log = stdout(&o);
    assert_eq!(log.lines().count(), 3, "log: {}", log);
    for line in log.lines() {
        assert!(line.contains(" | "), "malformed flip line: {}", line);
    }
}

#[test]
fn restrict_reads_the_staircase_orientation() {
    let dir = scratch("restrict");
    let points = dir.join("prism.points");
    fs::write(
        &points,
        "dim 3 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 0 1\n0 1 1\n",
    )
    .unwrap();
    let tri = dir.join("staircase.triangulation");
    fs::write(&tri, "3 4\n0 1 2 5\n0 1 4 5\n0 3 4 5\n").unwrap();
    let edges = dir.join("base.edges");
    fs::write(&edges, "0 1\n0 2\n1 2\n").unwrap();
    let out = dir.join("read.orientation");
    let o = run(&[
        "restrict",
        "--config",
        points.to_str().unwrap(),
        "--triangulation",
        tri.to_str().unwrap(),
        "--edges",
        edges.to_str().unwrap(),
        "--nbase",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "stdout: {}", stdout(&o));
    assert_eq!(fs::read_to_string(&out).unwrap(), "0 1\n0 2\n1 2\n");
}

#[test]
fn build_is_byte_deterministic() {
    let dir = scratch("build");
    let (a, b) = (dir.join("a"), dir.join("b"));
    for out in [&a, &b] {
        let o = run(&["build", "CELL24", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "stdout: {}", stdout(&o));
    }
    let ma = fs::read(a.join("manifest.txt")).unwrap();
    let mb = fs::read(b.join("manifest.txt")).unwrap();
    assert!(!ma.is_empty());
    assert_eq!(ma, mb, "manifests differ between identical invocations");
    let points = fs::read_to_string(a.join("cell24.points")).unwrap();
    assert!(points.starts_with("dim 4 24\n"), "points: {}", points);
}

#[test]
fn usage_errors_exit_two() {
    // unknown construction id
    let o = run(&["build", "NO_SUCH_THING"]);
    assert_eq!(code(&o), 2);
    // unknown certificate id
    let o = run(&["certify", "NO_SUCH_THING"]);
    assert_eq!(code(&o), 2);
    // unknown flag
    let o = run(&["explore", "--definitely-not-a-flag"]);
    assert_eq!(code(&o), 2);
    // no subcommand
    let o = run(&[]);
    assert_eq!(code(&o), 2);
}
