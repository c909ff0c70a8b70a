use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ewens-ldp"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rate_row() {
    let o = run(&["rate", "--alpha", "0.5", "--x", "0.5", "--decimals", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x,t_x,rate\n0.5,0.405465,0.084950\n");
}

#[test]
fn mgf_rows_echo_inputs() {
    let o = run(&["mgf", "--alpha", "0.5", "--n", "10", "--t", "0.5,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,theta,n,t,method,value,log_value,terms_used,remainder");
    assert!(lines[1].starts_with("0.5,0,10,0.5,series,"));
    assert!(lines[2].starts_with("0.5,0,10,1,series,"));
    let v: f64 = lines[1].split(',').nth(5).unwrap().parse().unwrap();
    assert!((v - 10.376427663781444).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["rate", "--alpha", "0.5", "--x", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["mgf", "--alpha", "1.2", "--n", "3", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["mgf", "--alpha", "0.5"]).status.code(), Some(1));
    assert_eq!(run(&["rate", "--alpha", "0.5", "--x", "0.5", "--out", "/nonexistent/dir/f.csv"]).status.code(), Some(1));
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
}

#[test]
fn verify_is_reproducible_across_thread_counts() {
    let args = ["verify", "--alpha", "0.4", "--theta", "0.5", "--n", "60", "--x", "0.2,0.4", "--reps", "3000", "--seed", "11"];
    let one = run_env(&args, &[("EWENS_LDP_THREADS", "1")]);
    let many = run_env(&args, &[("EWENS_LDP_THREADS", "8")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let s = run(&["sample", "--alpha", "0.3", "--n", "100", "--reps", "5", "--seed", "0x2a"]);
    let d = run(&["sample", "--alpha", "0.3", "--n", "100", "--reps", "5", "--seed", "42"]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(s.stdout, d.stdout);
}

#[test]
fn verify_without_levels() {
    let o = run(&["verify", "--alpha", "0.5", "--n", "50", "--reps", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    assert_eq!(v["violations"], 0);
}

#[test]
fn out_file_and_json() {
    let path = std::env::temp_dir().join(format!("ewens-ldp-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["bound", "--alpha", "0.5", "--n", "100", "--x", "0.5", "--no-chernoff", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    let rows = v.as_array().cloned().or_else(|| v["rows"].as_array().cloned()).unwrap();
    let b = rows[0]["paper_bound"].as_f64().unwrap();
    assert!((b - 4.090e-4).abs() < 1e-6);
}
