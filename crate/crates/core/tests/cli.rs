use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"{
    "grid": {"n": 512},
    "soliton": {"a": -0.5, "alpha": 1.0, "phi": 0.0, "mu": 1.0},
    "eps": 0.02,
    "t_final": {"policy": "fixed", "value": 1.0},
    "dt": 0.01,
    "stride": 10
}"#;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_szego-lab"));
    cmd.args(args).env_remove("SZEGO_LAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn commands_write_their_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.json", SMALL);
    let cases: [(&str, &[&str]); 3] = [
        ("simulate", &["trajectory.csv", "conservation.json", "norms.svg"]),
        ("effective", &["effective.csv", "effective.json", "effective.svg"]),
        ("track", &["track.csv", "metrics.json", "w_h12.svg", "deviations.svg"]),
    ];
    for (cmd, files) in cases {
        let out = dir.path().join(cmd);
        let o = run(&[cmd, "--config", &cfg, "--out", out.to_str().unwrap(), "--plots", "--parallel", "2"], &[]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        for f in files {
            assert!(out.join(f).is_file(), "{cmd} did not write {f}");
        }
    }
    let csv = fs::read_to_string(dir.path().join("simulate/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,norm_L2,norm_H12,mass,hamiltonian");
    assert_eq!(csv.lines().count(), 1 + 11);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let body = SMALL.replace("\"eps\": 0.02,", "\"eps_list\": [0.04, 0.02, 0.01],");
    let cfg = write_config(dir.path(), "sweep.json", &body);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["sweep", "--config", &cfg, "--out", a.to_str().unwrap()], &[("SZEGO_LAB_THREADS", "1")]).status.success());
    assert!(run(&["sweep", "--config", &cfg, "--out", b.to_str().unwrap(), "--parallel", "3"], &[]).status.success());
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["members"].as_array().unwrap().len(), 3);
    assert_eq!(summary["complete"], true);
    for m in summary["members"].as_array().unwrap() {
        let sub = m["dir"].as_str().unwrap();
        let x = fs::read(a.join(sub).join("track.csv")).unwrap();
        let y = fs::read(b.join(sub).join("track.csv")).unwrap();
        assert_eq!(x, y, "{sub} differs between thread counts");
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_delta = write_config(dir.path(), "delta.json", r#"{"delta": 0.7}"#);
    let unknown = write_config(dir.path(), "unknown.json", r#"{"dtt": 0.1}"#);
    let short_sweep = write_config(dir.path(), "sweep.json", r#"{"eps_list": [0.01, 0.02]}"#);
    let n = write_config(dir.path(), "n.json", r#"{"grid": {"n": 1000}}"#);
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    type Case<'a> = (Vec<&'a str>, Vec<(&'a str, &'a str)>);
    let cases: Vec<Case> = vec![
        (vec!["simulate", "--config", &bad_delta, "--out", out], vec![]),
        (vec!["simulate", "--config", &unknown, "--out", out], vec![]),
        (vec!["sweep", "--config", &short_sweep, "--out", out], vec![]),
        (vec!["track", "--config", &n, "--out", out], vec![]),
        (vec!["simulate", "--out", out], vec![]),
        (vec!["simulate", "--config", "/nonexistent/config.json", "--out", out], vec![]),
        (vec!["effective", "--config", &bad_delta], vec![("SZEGO_LAB_THREADS", "zero")]),
    ];
    for (args, env) in cases {
        let o = run(&args, &env);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
