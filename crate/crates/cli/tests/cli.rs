//! End-to-end checks of the `dilates` binary: exit codes, file formats,
//! and byte-identical reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use dilates_core::ZpSet;

fn dilates(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilates"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn verify_cd_reports_pair_count() {
    let out = dilates(&["verify", "cd", "--p", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "cd p=7: 0 violations / 16129 pairs\n");
}

#[test]
fn verify_vosper_and_ruzsa_pass() {
    let out = dilates(&["verify", "vosper", "--p", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("vosper p=7: 0 violations"));

    let out = dilates(&[
        "verify", "ruzsa", "--p", "31", "--trials", "200", "--seed", "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 violations, 0 chained violations"));
}

#[test]
fn verify_tower_checks_levels() {
    let out = dilates(&[
        "verify", "tower", "--lambda", "-2", "--m", "2", "--levels", "6",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("tower nu=2 m=2 levels=6: 0 violations"));
}

#[test]
fn construct_cycle_emits_expected_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.set");
    let out = dilates(&[
        "construct",
        "cycle",
        "--p",
        "7",
        "--l1",
        "1",
        "--l2",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# lambda1=1 lambda2=2 k=6"));
    let set = ZpSet::from_text(&text).unwrap();
    assert_eq!(set.residues(), vec![1, 2, 4]);
}

#[test]
fn construct_rokhlin_roundtrips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.set");
    let b = dir.path().join("b.set");
    for path in [&a, &b] {
        let out = dilates(&[
            "construct",
            "rokhlin",
            "--p",
            "10007",
            "--lambda",
            "-2",
            "--epsilon",
            "1/4",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ta = std::fs::read_to_string(&a).unwrap();
    let tb = std::fs::read_to_string(&b).unwrap();
    assert_eq!(ta, tb, "identical runs must be byte-identical");
    assert!(ta.starts_with("# lambda=-2 nu=2 m=3 t=16 epsilon=1/4"));
    let set = ZpSet::from_text(&ta).unwrap();
    assert!(!set.is_empty());
}

#[test]
fn workers_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("w1.set");
    let b = dir.path().join("w4.set");
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let out = dilates(&[
            "--workers",
            workers,
            "construct",
            "rokhlin",
            "--p",
            "10007",
            "--lambda",
            "-2",
            "--epsilon",
            "1/4",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap()
    );
}

#[test]
fn sumset_reports_bounds_and_rejects_empty() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.set");
    write(&input, "p=101\n0 1 2 3 4 5 6 7 8 9\n");
    let out = dilates(&[
        "sumset",
        "--input",
        input.to_str().unwrap(),
        "--lambdas",
        "1,2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("cd=19"));
    assert!(text.contains("bukh_main=30"));
    assert!(text.contains("actual=28"));

    let empty = dir.path().join("empty.set");
    write(&empty, "p=101\n\n");
    let out = dilates(&[
        "sumset",
        "--input",
        empty.to_str().unwrap(),
        "--lambdas",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty set"));
}

#[test]
fn diameter_and_rectify_formats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.set");
    write(&input, "p=101\n10 13 19\n");
    let out = dilates(&["diameter", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x=10 d=3 l=4\n");

    let out = dilates(&[
        "rectify",
        "--input",
        input.to_str().unwrap(),
        "--weight",
        "3",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 1 3\n");
}

#[test]
fn discretize_reads_interval_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ivs");
    write(&input, "1/3 2/3\n");
    let out = dilates(&["discretize", "--input", input.to_str().unwrap(), "--p", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "p=7\n3 4\n");
}

#[test]
fn extremal_csv_is_seed_deterministic() {
    let run = || {
        stdout(&dilates(&[
            "extremal",
            "random",
            "--p",
            "101",
            "--lambdas",
            "1,1",
            "--size",
            "8",
            "--iterations",
            "300",
            "--seed",
            "9",
        ]))
    };
    let first = run();
    assert_eq!(first, run());
    assert!(first.starts_with("p,k,lambdas,size,min_sumset,ratio,mode,witness\n"));
    assert!(first.contains(",randomized,"));

    let out = stdout(&dilates(&[
        "extremal",
        "exhaustive",
        "--p",
        "7",
        "--lambdas",
        "1,1",
        "--size",
        "3",
    ]));
    assert!(out.contains("7,2,1;1,3,5,"));
    assert!(out.contains("0;1;2"));

    let out = stdout(&dilates(&[
        "extremal",
        "exhaustive",
        "--p",
        "7",
        "--lambdas",
        "1,1",
        "--size",
        "3",
        "--format",
        "json",
    ]));
    assert!(out.contains("\"min_sumset\":5"));
    assert!(out.contains("\"witness\":[0,1,2]"));
}

#[test]
fn tower_interval_cap_is_enforced() {
    let out = dilates(&[
        "verify",
        "tower",
        "--lambda",
        "-2",
        "--m",
        "2",
        "--levels",
        "8",
        "--interval-cap",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("interval cap exceeded"));
}

#[test]
fn bounds_csv_has_provenance_and_threshold_lines() {
    let out = dilates(&[
        "bounds",
        "--lambda-min",
        "2",
        "--lambda-max",
        "4",
        "--alpha-steps",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# dilates bounds"));
    assert!(text.contains("# alpha_star lambda=3"));
    assert!(text.contains("lambda,alpha,plagne_f,bukh_main_ratio,cd_ratio"));
    assert_eq!(
        text.lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("lambda"))
            .count(),
        15
    );
}

#[test]
fn error_paths_have_distinct_messages_and_exit_1() {
    let out = dilates(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.set");
    write(&bad, "p=10\n1 2\n");
    let out = dilates(&["diameter", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));

    let unsorted = dir.path().join("unsorted.set");
    write(&unsorted, "p=7\n3 1\n");
    let out = dilates(&["diameter", "--input", unsorted.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));

    let out = dilates(&[
        "construct",
        "rokhlin",
        "--p",
        "10007",
        "--lambda",
        "1",
        "--epsilon",
        "1/4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|lambda| >= 2"));
}

#[test]
fn help_exits_zero() {
    let out = dilates(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
