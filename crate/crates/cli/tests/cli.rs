use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_levy-expfun"));
    c.env_remove("LEVY_EXPFUN_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn simulate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = dir.join(name).to_string_lossy().into_owned();
    let mut args = vec!["simulate", "--out", &out];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn values(path: &str) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect()
}

#[test]
fn simulate_writes_samples_in_support() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--model", "exp-jump", "--c", "1.8", "--a", "0.7", "--b", "0.2", "--n", "1000", "--seed", "7"]);
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("a_infinity\n"));
    let v = values(&p);
    assert_eq!(v.len(), 1000);
    assert!(v.iter().all(|&x| x > 0.0 && x < 1.0 / 1.8));
}

#[test]
fn simulate_is_deterministic_and_honours_seed_env() {
    let d = tempfile::tempdir().unwrap();
    let flags = ["--n", "300", "--seed", "7"];
    let a = simulate(d.path(), "a.csv", &flags);
    let b = simulate(d.path(), "b.csv", &flags);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let c = d.path().join("c.csv");
    let o = bin()
        .env("LEVY_EXPFUN_SEED", "7")
        .args(["simulate", "--n", "300", "--out", c.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn simulate_rejects_zero_n() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("s.csv");
    let o = run(&["simulate", "--n", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn unknown_flags_are_rejected() {
    let o = run(&["simulate", "--n", "10", "--out", "x.csv", "--colour", "red"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = run(&["simulate", "--n", "10", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn estimate_recovers_drift() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--n", "20000", "--seed", "1"]);
    let out = d.path().join("est.json");
    let o = run(&["estimate", "--input", &p, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let c = json["c_hat"].as_f64().unwrap();
    assert!((c - 1.8).abs() < 0.01, "c_hat {c}");
    assert!(json["a_hat"].as_f64().is_some());
    assert_eq!(json["grid"]["grid_points"], 201);
    assert_eq!(json["diagnostics"]["n"], 20000);
}

#[test]
fn estimate_rejects_nonpositive_samples() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("bad.csv");
    fs::write(&p, "a_infinity\n0.2\n0\n0.3\n").unwrap();
    let o = run(&["estimate", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("samples must be positive"));
}

#[test]
fn estimate_accepts_two_point_grid() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--n", "500", "--seed", "2"]);
    let o = run(&["estimate", "--input", &p, "--w-epsilon", "0.9", "--grid-points", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("\"grid_points\": 2"));
}

#[test]
fn estimate_with_weights_file_and_rate_window() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--n", "2000", "--seed", "3"]);
    let w = d.path().join("w.csv");
    let weights: Vec<String> = (0..11).map(|k| format!("{}", 1.0 + k as f64)).collect();
    fs::write(&w, format!("weight\n{}\n", weights.join("\n"))).unwrap();
    let o = run(&[
        "estimate", "--input", &p, "--grid-points", "11", "--weights-file", w.to_str().unwrap(),
        "--gamma", "0.1", "--u", "5",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"rule\": \"rates\""));

    fs::write(&w, "1\n2\n3\n").unwrap();
    let o = run(&["estimate", "--input", &p, "--grid-points", "11", "--weights-file", w.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn degenerate_denominator_exits_with_four() {
    // u = 0 and v = pi / ln 2 make the phases of 1 and 2 cancel
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("two.csv");
    fs::write(&p, "a_infinity\n1\n2\n").unwrap();
    let v = format!("{}", std::f64::consts::PI / 2f64.ln());
    let o = run(&["estimate", "--input", p.to_str().unwrap(), "--u", "0", "--v-max", &v, "--grid-points", "2"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate denominator"));
}

#[test]
fn invert_writes_density_and_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--model", "geometric", "--n", "3000", "--seed", "4"]);
    let mut outputs = Vec::new();
    for name in ["nu1.csv", "nu2.csv"] {
        let out = d.path().join(name);
        let o = run(&[
            "invert", "--input", &p, "--u", "1", "--v-max", "5", "--x-min", "0.2", "--x-max", "3",
            "--x-points", "28", "--jump-scale", "0.6931471805599453", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert!(text.starts_with("x,nu_real,nu_imag\n"));
    assert_eq!(text.lines().count(), 29);
}

#[test]
fn invert_warns_on_small_bandwidth() {
    let d = tempfile::tempdir().unwrap();
    let p = simulate(d.path(), "s.csv", &["--n", "500", "--seed", "5"]);
    let out = d.path().join("nu.csv");
    let o = run(&["invert", "--input", &p, "--bandwidth", "0.001", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bandwidth times v_max"));
}

#[test]
fn invert_rejects_empty_input() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("empty.csv");
    fs::write(&p, "a_infinity\n").unwrap();
    let out = d.path().join("nu.csv");
    let o = run(&["invert", "--input", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn missing_input_is_an_io_error() {
    let o = run(&["estimate", "--input", "/nonexistent/samples.csv"]);
    assert_eq!(code(&o), 3);
}

const MINIMAL: &str = r#"{
    "model": {"kind": "exp_jump", "c": 1.8, "a": 0.7, "b": 0.2},
    "n_values": [200, 400],
    "runs": 2,
    "grid": {"u": 30.0, "grid_points": 51, "v_max": {"rule": "fixed", "value": 30.0}},
    "master_seed": 9
}"#;

#[test]
fn experiment_writes_reproducible_outputs() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, MINIMAL).unwrap();
    let mut manifests = Vec::new();
    let out = d.path().join("out");
    for _ in 0..2 {
        let o = run(&["--threads", "2", "experiment", "--config", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join("parameters_exp_jump_200.csv").exists());
        assert!(out.join("summary_exp_jump.csv").exists());
        manifests.push(fs::read(out.join("manifest.json")).unwrap());
        let csv = fs::read_to_string(out.join("parameters_exp_jump_400.csv")).unwrap();
        assert!(csv.starts_with("run,v_max,c_hat,a_hat,error\n"));
    }
    assert_eq!(manifests[0], manifests[1]);
}

#[test]
fn experiment_seed_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, MINIMAL).unwrap();
    let read = |sub: &str| fs::read_to_string(d.path().join(sub).join("parameters_exp_jump_200.csv")).unwrap();
    let go = |sub: &str, env: Option<&str>, flag: Option<&str>| {
        let out = d.path().join(sub);
        let mut c = bin();
        if let Some(s) = env {
            c.env("LEVY_EXPFUN_SEED", s);
        }
        c.args(["experiment", "--config", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        assert!(c.output().unwrap().status.success());
    };
    go("base", None, None);
    go("env", Some("10"), None);
    go("flag", Some("10"), Some("9"));
    assert_ne!(read("base"), read("env"));
    assert_eq!(read("base"), read("flag"));
}

#[test]
fn experiment_rejects_invalid_json() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, "{\"model\": ").unwrap();
    let out = d.path().join("out");
    let o = run(&["experiment", "--config", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}
