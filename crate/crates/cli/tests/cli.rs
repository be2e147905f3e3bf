use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn fuzzcyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzcyl")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rep_on_order_four_cylinder_is_the_subdiagonal_shift() {
    let out = fuzzcyl(&["rep", "--hbar", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["dim"], 4);
    let v = doc["result"]["v"].as_array().unwrap();
    for (i, row) in v.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if i == j + 1 { 1.0 } else { 0.0 };
            assert_eq!(z[0].as_f64().unwrap(), want, "V[{i}][{j}]");
            assert_eq!(z[1].as_f64().unwrap(), 0.0);
        }
    }
}

#[test]
fn empty_element_list_gives_an_empty_report() {
    let out = fuzzcyl(&["algebra-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn poisson_limit_csv_rows_decrease() {
    let out = fuzzcyl(&["poisson-limit", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let residuals: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(residuals.len(), 3);
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
}

#[test]
fn config_file_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"command":"rep","hbar":[0.125],"elements":[[{"n":1,"fn":{"type":"polynomial","coeffs":[[0,0],[1,0]]}}],
            [{"n":0,"fn":{"type":"exp_ikx","k":2}},{"n":-1,"fn":{"type":"indicator","interval":"[1/2,1]"}}]]}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let cfg_s = cfg.to_str().unwrap();
    let out = fuzzcyl(&["algebra-check", "--config", cfg_s, "--samples", "5", "--seed", "7", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = Command::new(env!("CARGO_BIN_EXE_fuzzcyl"))
        .args(["algebra-check", "--config", cfg_s, "--samples", "5", "--seed", "7", "--out", b.to_str().unwrap()])
        .env("FUZZCYL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // identical apart from the echoed output path
    let text_a = fs::read_to_string(&a).unwrap();
    let text_b = fs::read_to_string(&b).unwrap();
    assert_eq!(text_a.replace("a.json", "b.json"), text_b);

    // the echoed config re-parses and reproduces the run
    let doc: Value = serde_json::from_str(&text_a).unwrap();
    let echo = dir.path().join("echo.json");
    let mut config = doc["config"].clone();
    config.as_object_mut().unwrap().remove("out");
    fs::write(&echo, serde_json::to_vec(&config).unwrap()).unwrap();
    let c = dir.path().join("c.json");
    let out = fuzzcyl(&["algebra-check", "--config", echo.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let again: Value = serde_json::from_slice(&fs::read(&c).unwrap()).unwrap();
    assert_eq!(again["checks"], doc["checks"]);
    assert_eq!(again["config"]["elements"], doc["config"]["elements"]);
}

#[test]
fn config_errors_exit_two_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"hbar": [0.1], "typo": 1}"#).unwrap();
    let out = fuzzcyl(&["rep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("invalid configuration"));
    assert!(err["context"].to_string().contains("typo"));

    let out = fuzzcyl(&["rep", "--hbar", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fuzzcyl(&["subalgebra", "--profile", "poincare", "--hbar", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_failures_exit_one() {
    // the plane_minus generator needs √φ with φ < 0 at the border
    let out = fuzzcyl(&["subalgebra", "--profile", "plane_minus", "--hbar", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["result"]["generator_valid"], false);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "check failure");

    let out = fuzzcyl(&["subalgebra", "--profile", "plane_plus", "--hbar", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["boundary"]["cases"][0]["zero_at_u0"], true);
}

#[test]
fn oracle_and_orbit_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("o.json");
    fs::write(&cfg, r#"{"size": 4, "samples": 2, "elements": [[{"n":1,"fn":{"type":"constant","value":[1,0]}}]]}"#).unwrap();
    let out = fuzzcyl(&["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["result"]["instances"].as_array().unwrap().len(), 3);
    assert_eq!(doc["result"]["bridge"]["points"].as_array().unwrap().len(), 4);

    let out = fuzzcyl(&["orbit", "--family", "poincare", "--hbar", "0.1", "--base", "0.5", "--truncation", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let orbit = &json(&out)["result"]["orbits"][0];
    assert_eq!(orbit["truncated_above"], true);
}
