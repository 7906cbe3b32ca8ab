//! End-to-end tests driving the `pbs` binary: the gen → solve → validate
//! flow, the exit-code contract, and benchmark CSV determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(dir: &Path, name: &str) -> (PathBuf, String) {
    let p = dir.join(name);
    let s = p.to_str().unwrap().to_owned();
    (p, s)
}

#[test]
fn gen_solve_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (inst_path, inst) = path_str(dir.path(), "inst.txt");
    let (sched_path, sched) = path_str(dir.path(), "sched.txt");

    let out = pbs(&[
        "gen",
        "--n",
        "5",
        "--m",
        "4",
        "--d",
        "3",
        "--wmax",
        "12",
        "--density",
        "0.8",
        "--seed",
        "7",
        "-o",
        &inst,
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(&inst_path).unwrap();
    assert!(text.starts_with("pbs-instance 1\n5 4 3\n"));

    for alg in ["sga", "a1", "apbs"] {
        let out = pbs(&["solve", "--alg", alg, "--in", &inst, "--out", &sched]);
        assert!(out.status.success(), "{alg}: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("makespan: "), "{alg}: {stdout}");
        assert!(stdout.contains("lower_bound: "), "{alg}: {stdout}");

        let out = pbs(&["validate", "--in", &inst, "--sched", &sched]);
        assert_eq!(out.status.code(), Some(0), "{alg}: {out:?}");
    }
    drop(sched_path);
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (pa, a) = path_str(dir.path(), "a.txt");
    let (pb, b) = path_str(dir.path(), "b.txt");
    let args = [
        "gen", "--n", "6", "--m", "6", "--d", "2", "--wmax", "9", "--seed", "123",
    ];
    assert!(pbs(&[&args[..], &["-o", &a]].concat()).status.success());
    assert!(pbs(&[&args[..], &["-o", &b]].concat()).status.success());
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
}

#[test]
fn validate_rejects_bad_schedule_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (_, inst) = path_str(dir.path(), "inst.txt");
    let (_, sched) = path_str(dir.path(), "sched.txt");
    std::fs::write(&inst, "pbs-instance 1\n1 1 1\n1\n1 1 3\n").unwrap();
    // Under-covers the single edge.
    std::fs::write(&sched, "pbs-schedule 1\n1\n2 1\n1 1 2\n").unwrap();
    let out = pbs(&["validate", "--in", &inst, "--sched", &sched]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("invalid"), "{stdout}");
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (_, bad) = path_str(dir.path(), "bad.txt");
    std::fs::write(&bad, "pbs-instance 1\n2 2 1\n1\n1 1 0\n").unwrap();
    let out = pbs(&["solve", "--alg", "sga", "--in", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("weight must be ≥ 1, line 4"), "{stderr}");

    // Unknown algorithm is a usage error too.
    let out = pbs(&["solve", "--alg", "nope", "--in", &bad]);
    assert_eq!(out.status.code(), Some(2));

    // Missing file.
    let out = pbs(&["solve", "--alg", "sga", "--in", "/nonexistent/x.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exact_solves_small_and_rejects_large_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let (_, small) = path_str(dir.path(), "small.txt");
    std::fs::write(&small, "pbs-instance 1\n2 2 1\n3\n1 1 3\n1 2 2\n2 1 2\n").unwrap();
    let out = pbs(&["exact", "--in", &small]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("optimal_makespan: 7"), "{stdout}");

    let (_, big) = path_str(dir.path(), "big.txt");
    let mut text = String::from("pbs-instance 1\n3 3 1\n9\n");
    for v in 1..=3 {
        for u in 1..=3 {
            text.push_str(&format!("{v} {u} 2\n"));
        }
    }
    std::fs::write(&big, text).unwrap();
    let out = pbs(&["exact", "--in", &big]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (pa, a) = path_str(dir.path(), "a.csv");
    let (pb, b) = path_str(dir.path(), "b.csv");
    let args = [
        "bench", "--d-list", "1,4", "--cases", "5", "--n", "4", "--m", "4", "--wmax", "8",
        "--seed", "31",
    ];
    assert!(pbs(&[&args[..], &["--csv", &a]].concat()).status.success());
    assert!(pbs(&[&args[..], &["--csv", &b]].concat()).status.success());

    let strip = |p: &PathBuf| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_owned()).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let (sa, sb) = (strip(&pa), strip(&pb));
    assert!(sa.starts_with("d,alg,cases,mean_ratio,worst_ratio,mean_makespan,mean_lb"));
    assert_eq!(sa, sb);
    // Two overheads × three algorithms plus the header.
    assert_eq!(sa.lines().count(), 7);
}
