use std::path::Path;
use std::process::{Command, Output};

use circnet::commands::{keys, COMMANDS};

fn circnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circnet")).args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", dir.to_str().unwrap()]);
    circnet(&a)
}

fn csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn every_config_key_is_a_flag() {
    for &cmd in COMMANDS {
        let out = circnet(&[cmd, "--help"]);
        assert!(out.status.success(), "{cmd}");
        let help = String::from_utf8(out.stdout).unwrap();
        for key in keys(cmd).iter().chain(&["out", "seed", "threads", "config"]) {
            assert!(help.contains(&format!("--{key} ")), "{cmd} --help lacks --{key}");
        }
    }
}

#[test]
fn certify_high_node_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["certify", "--m", "2400", "--R", "10", "--eps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&dir.path().join("certify.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(col(&h, &rows, "C_P")[0], 140.0);
    assert!((col(&h, &rows, "rate")[0] - 1.0 / 70.0).abs() < 1e-15);
    assert!(dir.path().join("run.manifest").is_file());
}

#[test]
fn smooth_step_example() {
    let dir = tempfile::tempdir().unwrap();
    let step = dir.path().join("step.pwt");
    std::fs::write(&step, "0 3.141592653589793 1 0 0\n3.141592653589793 3.141592653589793 -1 0 0\n").unwrap();
    let out = run_in(dir.path(), &["smooth", "--target", step.to_str().unwrap(), "--r", "1,2,4,8"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&dir.path().join("smooth.csv"));
    assert_eq!(rows.len(), 4);
    let bv = col(&h, &rows, "bv");
    for ((r, e), bv) in col(&h, &rows, "r").iter().zip(col(&h, &rows, "error_sq")).zip(bv) {
        assert!(e <= 16.0 * bv * bv / r, "r = {r}");
    }
}

#[test]
fn diverge_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["diverge", "--b0", "1", "--T", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(&dir.path().join("diverge.csv"));
    let b = col(&h, &rows, "b");
    assert!(b.len() > 2);
    assert!(b.windows(2).all(|w| w[1] > w[0]));
    assert!(*col(&h, &rows, "t").last().unwrap() >= 50.0);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["certify", "--eps", "-1"]).status.code(), Some(2));
    assert_eq!(run_in(dir.path(), &["smooth", "--target", "nope.pwt"]).status.code(), Some(2));
    assert_eq!(circnet(&["certify", "--nope", "1"]).status.code(), Some(2));
    let ini = dir.path().join("bad.ini");
    std::fs::write(&ini, "[certify]\nwhatever = 1\n").unwrap();
    let out = run_in(dir.path(), &["certify", "--config", ini.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("whatever"));
}

#[test]
fn violated_bound_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["langevin", "--n_traj", "8", "--T", "1", "--record_every", "50", "--tv_max", "1e-9"],
    );
    assert_eq!(out.status.code(), Some(1));
    let manifest = std::fs::read_to_string(dir.path().join("run.manifest")).unwrap();
    assert!(manifest.contains("status = fail"));
    assert!(manifest.contains("[violations]"));
}

#[test]
fn config_file_and_sections() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    std::fs::write(&ini, "seed = 4\n[certify]\nm = 100,2400\n[smooth]\nr = 3\n").unwrap();
    let out = run_in(dir.path(), &["certify", "--config", ini.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv(&dir.path().join("certify.csv"));
    assert_eq!(rows.len(), 2);
    let manifest = std::fs::read_to_string(dir.path().join("run.manifest")).unwrap();
    assert!(manifest.contains("seed = 4"));
}

#[test]
fn small_runs_of_each_experiment_pass() {
    let runs: &[&[&str]] = &[
        &["approx", "--target", "corpus:half_cos", "--m_under", "1,2,4"],
        &["fit", "--target", "corpus:half_cos", "--n_dirs", "3"],
        &["localize", "--m", "4", "--R", "100,1000", "--polish_steps", "50"],
        &["flow", "--m", "4", "--T", "1", "--dt", "0.01"],
        &["langevin", "--n_traj", "8", "--T", "1", "--record_every", "50"],
        &["fokker-planck", "--n", "16", "--T", "1"],
    ];
    for args in runs {
        let dir = tempfile::tempdir().unwrap();
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        assert!(files >= 2, "{args:?}");
    }
}

#[test]
fn outputs_do_not_depend_on_threads() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["langevin", "--m", "2", "--n_traj", "12", "--T", "1", "--record_every", "25", "--seed", "9"];
    let mut a_args = args.to_vec();
    a_args.extend(["--threads", "1"]);
    let mut b_args = args.to_vec();
    b_args.extend(["--threads", "3"]);
    assert_eq!(run_in(a.path(), &a_args).status.code(), Some(0));
    assert_eq!(run_in(b.path(), &b_args).status.code(), Some(0));
    for f in ["langevin.csv", "langevin_hist.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
