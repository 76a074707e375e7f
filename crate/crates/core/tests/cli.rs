use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stable_sde::io::read_trajectories;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stable-sde"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_single_error_line(out: &Output, code: i32) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", stderr(out));
    let err = stderr(out);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with("error: "), "{err}");
}

const SIMULATE: [&str; 21] = [
    "simulate", "--model", "ou", "--alpha", "1.5", "--lambda", "1", "--mu", "1", "--x0", "1", "--t-end", "1",
    "--steps", "1024", "--paths", "3", "--seed", "42", "--out", "t.csv",
];

#[test]
fn simulate_row_count_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&SIMULATE, dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let first = fs::read(dir.path().join("t.csv")).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.lines().next(), Some("path_id,t,x"));
    assert_eq!(text.lines().count(), 1 + 3 * 1025);

    let paths = read_trajectories(&dir.path().join("t.csv")).unwrap();
    assert_eq!(paths.len(), 3);
    for (i, p) in paths.iter().enumerate() {
        assert_eq!(p.path_id, i as u64);
        assert_eq!(p.values[0], 1.0);
        assert_eq!(p.times[1024], 1.0);
        assert!(p.times.windows(2).all(|w| w[1] > w[0]));
    }

    let out = run(&SIMULATE, dir.path());
    assert!(out.status.success());
    assert_eq!(fs::read(dir.path().join("t.csv")).unwrap(), first);
}

#[test]
fn zero_noise_simulation_is_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "simulate", "--model", "ou", "--alpha", "1.5", "--lambda", "2", "--mu", "0", "--x0", "3", "--steps",
            "4096", "--out", "d.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let p = &read_trajectories(&dir.path().join("d.csv")).unwrap()[0];
    for (&t, &x) in p.times.iter().zip(&p.values) {
        let exact = 3.0 * (-2.0 * t).exp();
        assert!((x - exact).abs() < 2e-3, "t={t}: {x} vs {exact}");
    }
}

#[test]
fn simulate_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = SIMULATE.to_vec();
    args.extend(["--svg", "t.svg"]);
    assert!(run(&args, dir.path()).status.success());
    let svg = fs::read_to_string(dir.path().join("t.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 3);
}

#[test]
fn simulate_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (flag, value) in [("--alpha", "2.5"), ("--lambda", "0"), ("--mu", "-1"), ("--steps", "0"), ("--t-end", "-1")] {
        let mut args = SIMULATE.to_vec();
        let pos = args.iter().position(|a| *a == flag).unwrap();
        args[pos + 1] = value;
        let out = run(&args, dir.path());
        assert_single_error_line(&out, 1);
        assert!(!dir.path().join("t.csv").exists(), "{flag} left output behind");
    }
}

#[test]
fn sweep_file_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "sweep", "--model", "ou", "--lambdas", "1", "--mus", "1", "--alphas", "0.5,1.0,1.5,1.9", "--steps", "64",
            "--out-dir", "a",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let mut names: Vec<String> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        vec!["ou_l1_m1_a0p5.csv", "ou_l1_m1_a1.csv", "ou_l1_m1_a1p5.csv", "ou_l1_m1_a1p9.csv"]
    );

    let out = run(
        &[
            "sweep", "--model", "glm", "--lambdas", "1,10,1000", "--mus", "1,10", "--alphas", "0.5,1.0,1.5,1.9",
            "--steps", "64", "--out-dir", "b", "--svg",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let files: Vec<PathBuf> = fs::read_dir(dir.path().join("b")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.iter().filter(|p| p.extension().unwrap() == "csv").count(), 24);
    assert_eq!(files.iter().filter(|p| p.extension().unwrap() == "svg").count(), 24);
    assert!(dir.path().join("b/glm_l1000_m10_a1p9.csv").exists());
}

#[test]
fn sweep_empty_list_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sweep", "--model", "ou", "--lambdas", "1", "--mus", "1", "--alphas", "", "--out-dir", "a"],
        dir.path(),
    );
    assert_single_error_line(&out, 1);
}

fn fit_link_json(input: &Path) -> serde_json::Value {
    let out = bin().args(["fit-link", "--input"]).arg(input).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn fit_link_reports() {
    let ou = fit_link_json(&data("ou_link_samples.csv"));
    assert!((ou["rhs"].as_f64().unwrap() - 3.24).abs() < 0.01);
    assert_eq!(ou["beta"].as_array().unwrap().len(), 5);
    assert!((ou["t_bar"].as_f64().unwrap() - 0.0238276).abs() < 1e-12);
    assert!(ou["equation"].as_str().unwrap().contains("*lambda"));

    let glm = fit_link_json(&data("glm_link_samples.csv"));
    assert!((glm["rhs"].as_f64().unwrap() - -0.3949911).abs() < 1e-3);
    assert!((glm["x_bar"].as_f64().unwrap() - 0.61768).abs() < 1e-12);
}

#[test]
fn fit_link_errors() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(data("ou_link_samples.csv")).unwrap();
    let four: Vec<&str> = text.lines().take(5).collect();
    fs::write(dir.path().join("four.csv"), four.join("\n")).unwrap();
    let out = run(&["fit-link", "--input", "four.csv"], dir.path());
    assert_single_error_line(&out, 1);
    assert!(stderr(&out).contains("expected 5, found 4"), "{}", stderr(&out));

    let singular = "lambda,mu,alpha,t,x\n".to_string() + &"1,1,1,0.1,0.5\n".repeat(5);
    fs::write(dir.path().join("sing.csv"), singular).unwrap();
    let out = run(&["fit-link", "--input", "sing.csv"], dir.path());
    assert_single_error_line(&out, 1);
    assert!(stderr(&out).contains("singular"));

    let out = run(&["fit-link", "--input", "missing.csv"], dir.path());
    assert_single_error_line(&out, 1);
}

#[test]
fn rng_output_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["rng", "--alpha", "2", "--beta", "0", "--gamma", "1", "--delta", "0", "--n", "5", "--seed", "7"];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        let mantissa = line.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{line}");
        line.parse::<f64>().unwrap();
    }

    let out = run(&["rng", "--alpha", "3", "--n", "5"], dir.path());
    assert_single_error_line(&out, 1);
    assert!(stderr(&out).contains("(0, 2]"), "{}", stderr(&out));

    let out = run(&["rng", "--alpha", "1", "--n", "0"], dir.path());
    assert_single_error_line(&out, 1);

    let out = run(&["rng", "--alpha", "1", "--beta", "-1.5", "--n", "3"], dir.path());
    assert_single_error_line(&out, 1);
    assert!(stderr(&out).contains("beta"));
}

#[test]
fn selfsim_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["selfsim", "--alpha", "2", "--c", "4", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass=true"));

    let out = run(&["selfsim", "--alpha", "1.5", "--c", "8", "--t", "0.5", "--seed", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["selfsim", "--alpha", "1.5", "--c", "0"], dir.path());
    assert_single_error_line(&out, 1);
    let out = run(&["selfsim", "--alpha", "1.5", "--c", "-2"], dir.path());
    assert_single_error_line(&out, 1);
}

#[test]
fn usage_errors_are_single_line() {
    let dir = tempfile::tempdir().unwrap();
    assert_single_error_line(&run(&["bogus"], dir.path()), 1);
    assert_single_error_line(&run(&["rng", "--alpha", "abc", "--n", "1"], dir.path()), 1);
    assert_single_error_line(&run(&["simulate", "--model", "xyz"], dir.path()), 1);
}
