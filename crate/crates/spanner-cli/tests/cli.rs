use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanner-kit")).args(args).env_remove("SPANNER_KIT_SEED").output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_half_theta6_passes() {
    assert_eq!(code(&["verify", "--graph", "half_theta6", "--n", "64", "--trials", "20", "--seed", "7"]), 0);
}

#[test]
fn invalid_k_is_usage_error() {
    let out = run(&["build", "--graph", "theta", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn same_endpoints_is_usage_error() {
    assert_eq!(code(&["route", "--algo", "stateless", "--from", "0", "--to", "0"]), 2);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["analyze", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn gen_is_deterministic_and_seed_env_is_read() {
    let a = run(&["gen", "--seed", "3", "--n", "20"]).stdout;
    let b = run(&["gen", "--seed", "3", "--n", "20"]).stdout;
    assert_eq!(a, b);
    let c = Command::new(env!("CARGO_BIN_EXE_spanner-kit"))
        .args(["gen", "--n", "20"])
        .env("SPANNER_KIT_SEED", "3")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, c);
}

#[test]
fn build_then_analyze_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    let graph = dir.path().join("g.json");
    let csv = dir.path().join("pairs.csv");
    let p = |x: &std::path::Path| x.to_str().unwrap().to_string();
    assert_eq!(code(&["gen", "--n", "12", "--out", &p(&pts)]), 0);
    assert_eq!(code(&["build", "--graph", "half_theta6", "--input", &p(&pts), "--out", &p(&graph)]), 0);
    let r = json(&["analyze", "--input", &p(&graph), "--per-pair", &p(&csv), "--check"]);
    assert!(r["max_ratio"].as_f64().unwrap() <= 2.0 + 1e-9);
    assert_eq!(r["bound"].as_f64(), Some(2.0));
    assert_eq!(r["pass"].as_bool(), Some(true));
    assert_eq!(r["witness"].as_array().unwrap().len(), 2);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 12 * 11 / 2);
}

#[test]
fn route_emits_trace_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    for algo in ["stateless", "stateful", "g12", "g9"] {
        let t = json(&["route", "--algo", algo, "--from", "2", "--to", "9", "--n", "40", "--svg", svg.to_str().unwrap(), "--check"]);
        let steps = t["steps"].as_array().unwrap();
        assert!(!steps.is_empty());
        for key in ["from", "to", "case", "phi_before", "phi_after", "len"] {
            assert!(steps[0].get(key).is_some(), "{key}");
        }
        for key in ["total", "exploration", "bound", "pass"] {
            assert!(t.get(key).is_some(), "{key}");
        }
        let drawn = std::fs::read_to_string(&svg).unwrap();
        assert_eq!(drawn.matches(r#"<line class="route""#).count(), steps.len());
    }
}

#[test]
fn render_is_byte_identical() {
    let a = run(&["render", "--graph", "g9", "--n", "25", "--pair", "0,5"]);
    let b = run(&["render", "--graph", "g9", "--n", "25", "--pair", "0,5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("<svg"));
}

#[test]
fn lower_bound_generators() {
    let p = json(&["gen", "--kind", "theta5_lb"]);
    assert_eq!(p["points"].as_array().unwrap().len(), 31);
    let q = json(&["gen", "--kind", "routing_lb", "--gadget", "negative_b"]);
    assert_eq!(q["points"].as_array().unwrap().len(), 6);
    assert_eq!(code(&["gen", "--kind", "routing_lb", "--alpha", "2"]), 2);
}

#[test]
fn malformed_input_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{not json").unwrap();
    assert_eq!(code(&["analyze", "--input", f.to_str().unwrap()]), 2);
}
