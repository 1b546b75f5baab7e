//! The command-line frontend as a subprocess: output, exit codes and files.

use std::process::{Command, Output};

fn pellfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellfib")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn kfib_methods_agree() {
    for method in ["window", "three-term", "cooper-howard"] {
        let o = pellfib(&["kfib", "--k", "5", "--m", "7", "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), "31");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pellfib(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pellfib(&["kfib", "--k", "5"]).status.code(), Some(2));
    assert_eq!(
        pellfib(&["--precision", "10", "kfib", "--k", "5", "--m", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pellfib(&["kfib", "--k", "1", "--m", "7"]).status.code(), Some(2));
    assert_eq!(pellfib(&["--help"]).status.code(), Some(0));
}

#[test]
fn pell_commands() {
    let o = pellfib(&["pell", "fundamental", "--d", "2"]);
    assert!(stdout(&o).starts_with("x1=1 y1=1 eps=-1"), "{}", stdout(&o));
    let o = pellfib(&["pell", "xn", "--x1", "16", "--eps", "1", "--n", "3"]);
    assert_eq!(stdout(&o).trim(), "16336");
}

#[test]
fn bounds_and_reduction_commands() {
    let o = pellfib(&["bounds", "tables", "--k", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m1_max="));
    let o = pellfib(&["bounds", "matveev", "--t", "1", "--degree", "1", "--b", "1", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = pellfib(&["reduce", "cf", "--m1", "2", "--eps", "-1", "--depth", "5"]);
    assert!(stdout(&o).starts_with("[1, 3, 1, "), "{}", stdout(&o));
    let o = pellfib(&["reduce", "cf", "--k", "4", "--m1", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pellfib(&["reduce", "dp", "--k", "4", "--m1", "2", "--eps", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w_bound="));
}

#[test]
fn families_and_gamma() {
    let o = pellfib(&["verify", "families", "--a-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("family (ii): 3 values of a verified"), "{s}");
    assert!(s.contains("family (i): 248 values of k verified"), "{s}");
    assert!(s.contains("a=1: k=10 m1=6 m2=16 x1=16 x3=16336"), "{s}");
    let o = pellfib(&[
        "verify", "gamma", "--k", "5", "--n", "2", "--m", "7", "--x1", "4", "--eps", "1",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o).trim().to_string()),
        (Some(0), "true".into())
    );
    // not a solution, so there is nothing to check
    let o = pellfib(&[
        "verify", "gamma", "--k", "5", "--n", "2", "--m", "8", "--x1", "4", "--eps", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let o = pellfib(&[
            "--threads",
            threads,
            "--audit",
            "--out",
            out.to_str().unwrap(),
            "sweep",
            "dp",
            "--k-min",
            "4",
            "--k-max",
            "5",
            "--m1-max",
            "4",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("max_w_bound="));
        let csv = std::fs::read_to_string(&out).unwrap();
        assert!(csv.starts_with("sweep,grid,stat,cells,failures,seconds\n"));
        std::fs::read_to_string(out.with_extension("jsonl")).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("2", "b.csv");
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 2 * 5);
}

#[test]
fn small_searches() {
    let o = pellfib(&["search", "enumerate", "--x1-max", "1", "--k-max", "4", "--m-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=1 value=1 x1=1 eps=-1 k=4 m=2"), "{}", stdout(&o));
    let o = pellfib(&["sweep", "modsieve", "--k-max", "12", "--m-max", "20", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("survivor y=31 k=5 m=7 b=2 x1=4 eps=1 exact=true"));
    let o = pellfib(&[
        "sweep",
        "chi-quotients",
        "--k-min",
        "4",
        "--k-max",
        "8",
        "--depth",
        "20",
    ]);
    assert!(stdout(&o).starts_with("Q="));
}
