use assert_cmd::Command;
use serde_json::Value;

const THETA1_BAR_THETA2: &str = r#"{"dim":2,"terms":[{"c":[1,0],"e":[0,1],"ebar":[1,0]}]}"#;
const THETA1: &str = r#"{"dim":2,"terms":[{"c":[1,0],"e":[1,0]}]}"#;
const THETA1_BAR: &str = r#"{"dim":2,"terms":[{"c":[1,0],"e":[0,0],"ebar":[1,0]}]}"#;

fn qhardy() -> Command {
    Command::cargo_bin("qhardy").unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = qhardy().args(args).output().unwrap();
    let code = out.status.code().unwrap();
    (serde_json::from_slice(&out.stdout).unwrap_or(Value::Null), code)
}

#[test]
fn group_info_reports_order() {
    let (v, code) = json(&["group", "info", "G(4,2,3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 192);
    assert_eq!(v["reflections"], 15);
    assert_eq!(v["hyperplanes"].as_array().unwrap().len(), 15);
}

#[test]
fn brown_halmos_example_passes() {
    let (v, code) = json(&["toeplitz", "bh", "--group", "G(2,1,2)", "--symbol", THETA1_BAR_THETA2, "-D", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["passed"], true);
    let rows = v["rows"].as_array().unwrap().len();
    assert_eq!(v["entries"].as_array().unwrap().len(), rows);
}

#[test]
fn kernel_identity_passes() {
    let (v, code) = json(&["verify", "kernel-identity", "--group", "G(1,1,2)", "--pairs", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(v["max_relative_error"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn kernel_identity_rejects_other_groups() {
    qhardy().args(["verify", "kernel-identity", "--group", "G(2,1,2)"]).assert().code(2);
}

#[test]
fn usage_errors_exit_two() {
    qhardy().arg("frobnicate").assert().code(2);
    qhardy().args(["group", "info", "G(4,3,2)"]).assert().code(2);
    qhardy().args(["toeplitz", "bh", "--group", "G(2,1,2)", "-D", "6"]).assert().code(2);
}

#[test]
fn failing_product_exits_one_with_report() {
    let args = ["toeplitz", "product", "--group", "G(1,1,2)", "--symbol", THETA1, "--symbol", THETA1_BAR, "-D", "5"];
    let (v, code) = json(&args);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["passed"], false);
    let (v, code) = json(&["toeplitz", "product", "--group", "G(1,1,2)", "--symbol", THETA1_BAR, "--symbol", THETA1, "-D", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["passed"], true);
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["kernel", "eval", "--spec", r#"{"domain":"polydisc","group":"G(2,1,2)","character":"sgn"}"#, "--random", "5", "--seed", "11"];
    let a = qhardy().args(args).output().unwrap().stdout;
    let b = qhardy().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    let other = qhardy().args(["kernel", "eval", "--spec", r#"{"domain":"polydisc","group":"G(2,1,2)"}"#, "--random", "5", "--seed", "12"]).output().unwrap().stdout;
    assert_ne!(a, other);
}

#[test]
fn kernel_points_from_stdin() {
    let points = r#"[{"z": [[0.1, 0.0], [0.2, 0.1]], "w": [[0.3, -0.1], [0.0, 0.2]]}, [[[0.0, 0.0], [0.0, 0.0]], [[0.5, 0.0], [0.0, 0.5]]]]"#;
    let out = qhardy()
        .args(["kernel", "eval", "--spec", r#"{"domain":"polydisc"}"#, "--points", "-"])
        .write_stdin(points)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["method"], "closed-form");
    // the Szegő kernel of the bidisc at z = 0 is 1
    assert!((v[1]["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn singular_points_fall_back_to_the_series() {
    let points = r#"[{"z": [[0.3, 0.0], [0.3, 0.0]], "w": [[0.1, 0.2], [0.4, 0.0]]}]"#;
    let (v, code) = json(&["kernel", "eval", "--spec", r#"{"domain":"polydisc","group":"G(1,1,2)"}"#, "--points", points]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["method"], "series");
}

#[test]
fn window_round_trips_through_recover() {
    let sym = r#"{"dim":2,"terms":[{"c":[1,0],"e":[1,0]},{"c":[1,0],"e":[0,0],"ebar":[1,0]}]}"#;
    let win = qhardy().args(["toeplitz", "window", "--group", "G(1,1,2)", "--symbol", sym, "-D", "5"]).output().unwrap();
    assert!(win.status.success());
    let v: Value = serde_json::from_slice(&win.stdout).unwrap();
    let window = serde_json::json!({
        "group": v["report"]["group"],
        "character": v["report"]["character"],
        "degree_bound": v["report"]["degree_bound"],
        "rows": v["rows"],
        "cols": v["cols"],
        "entries": v["entries"],
    });
    let out = qhardy()
        .args(["toeplitz", "recover", "--group", "G(1,1,2)", "--window", "-"])
        .write_stdin(window.to_string())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let est: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(est["report"]["residual"].as_f64().unwrap() < 1e-9);
    let theta = &est["report"]["theta"]["terms"];
    let mut found = 0;
    for t in theta.as_array().unwrap() {
        let c = t["c"][0].as_f64().unwrap();
        if c.abs() > 1e-9 {
            assert!((c - 1.0).abs() < 1e-9, "{t}");
            found += 1;
        }
    }
    assert_eq!(found, 2);
}

#[test]
fn semd2_agrees_with_the_window() {
    let (v, code) = json(&["toeplitz", "semd2", "--group", "G(1,1,2)", "--symbol", THETA1_BAR, "--symbol", THETA1]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["symbolic"], true);
    assert_eq!(v["report"]["window"], true);
    let (v, code) = json(&["toeplitz", "semd2", "--group", "G(1,1,2)", "--symbol", THETA1, "--symbol", THETA1_BAR]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["symbolic"], false);
    assert_eq!(v["report"]["agree"], true);
}

#[test]
fn csv_output() {
    let out = qhardy().args(["group", "info", "G(2,1,2)", "--output", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("order,8\n"));
    let out = qhardy()
        .args(["toeplitz", "window", "--group", "G(1,1,2)", "--symbol", THETA1, "-D", "2", "--output", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("row,col,re,im\n"));
    let entry = text.lines().find(|l| l.starts_with("\"[0,2]\",\"[0,1]\",")).expect("entry line");
    let re: f64 = entry.split(',').nth(4).unwrap().parse().unwrap();
    assert!((re - 1.0).abs() < 1e-12, "{text}");
}

#[test]
fn invariant_verbs() {
    let (v, code) = json(&["invariant", "basic-map", "G(1,1,2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    let (v, _) = json(&["invariant", "basis", "--group", "G(1,1,2)", "--character", "sgn", "-D", "2"]);
    assert_eq!(v, serde_json::json!([[0, 1], [0, 2], [1, 2]]));
    let t1 = r#"{"dim":2,"terms":[{"c":[1,0],"e":[1,0]}]}"#;
    let (lifted, _) = json(&["invariant", "lift", "--group", "G(1,1,2)", "--poly", t1]);
    let (lowered, code) = json(&["invariant", "lower", "--group", "G(1,1,2)", "--poly", &lifted.to_string()]);
    assert_eq!(code, 0);
    let terms = lowered["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["e"], serde_json::json!([1, 0]));
}

#[test]
fn ellipsoid_constants_are_listed() {
    let (v, code) = json(&["verify", "ellipsoid-constants", "--max-m", "3"]);
    assert_eq!(code, 0);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!((rows[0]["recomputed_sq"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}
