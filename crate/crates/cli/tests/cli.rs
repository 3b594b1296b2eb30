use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn levy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levy"))
        .args(args)
        .env_remove("LEVYSPEC_DIGIT_BUDGET")
        .output()
        .expect("levy runs")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

const SET: [&str; 10] = ["--alpha1", "2", "--alpha2", "3", "--h1", "1", "--h2", "1.5", "--y-spec", "prop1:2"];

#[test]
fn theoretical_diagonal() {
    let v = json(&levy(&[
        "spectrum", "theoretical", "--alpha1", "1", "--alpha2", "1", "--h1", "0.8", "--h2", "0.8", "--y-spec",
        "prop3:2:32",
    ]));
    assert_eq!(v["region"], "K-diagonal");
    assert_eq!(v["value"], 0.8);
    assert_eq!(v["schema"], "levyspec/1");
    assert_eq!(v["config"]["y_spec"], "prop3:2:32");
}

#[test]
fn theoretical_off_diagonal_with_scan() {
    let v = json(&levy(&[
        "spectrum", "theoretical", "--alpha1", "1", "--alpha2", "1", "--h1", "0.8", "--h2", "0.55", "--y-spec",
        "prop3:2:2", "--dichotomy-depth", "100000",
    ]));
    assert_eq!(v["value"], "-inf");
    assert_eq!(v["dichotomy"]["verdict"], "empty-evidence");
}

#[test]
fn delta_of_prop3() {
    let v = json(&levy(&["delta", "--y-spec", "prop3:2:32", "--depth", "100000"]));
    let d = v["estimate"].as_f64().unwrap();
    assert!((d - 2.0).abs() < 1e-3, "{d}");
}

#[test]
fn eval_reports_certificate() {
    let v = json(&levy(&["eval", "--alpha", "1.5", "--x", "1/3", "--y", "rational:1/5", "--tol", "1e-10"]));
    assert!(v["tail_bound"].as_f64().unwrap() <= 1e-10);
    assert!(v["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn digits_csv_has_header() {
    let o = levy(&["digits", "--y-spec", "rational:1/3", "--n", "4", "--format", "csv"]);
    let s = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[2].starts_with("# config: {"));
    assert_eq!(&lines[3..], ["index,digit", "1,0", "2,1", "3,0", "4,1"]);
}

#[test]
fn build_y_lists_ones() {
    let v = json(&levy(&["build-y", "--mode", "prop3", "--eta", "2", "--l1", "3", "--depth", "50"]));
    assert_eq!(v["ones"], serde_json::json!([6, 12, 24, 48]));
    assert_eq!(v["stream"]["prefix_hex"].as_str().unwrap().len(), 50);
}

fn sample(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("point.json");
    let mut args = vec!["cantor", "sample"];
    args.extend(SET);
    args.extend(["--seed", "11", "--out", p.to_str().unwrap()]);
    let o = levy(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn point_file_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let p = sample(dir.path());
    let o = levy(&["cantor", "verify", "--point-file", p.to_str().unwrap()]);
    assert_eq!(json(&o)["pass"], true);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    // the zero run of length m_0 = 32 right after n_0 = 32
    let mut hex: Vec<u8> = v["prefix_hex"].as_str().unwrap().bytes().collect();
    hex[32 + 32] = b'0';
    v["prefix_hex"] = String::from_utf8(hex).unwrap().into();
    let t = dir.path().join("tampered.json");
    std::fs::write(&t, v.to_string()).unwrap();
    let o = levy(&["cantor", "verify", "--point-file", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let mut short = v.clone();
    short["prefix_hex"] = "0101".into();
    std::fs::write(&t, short.to_string()).unwrap();
    assert_eq!(levy(&["cantor", "verify", "--point-file", t.to_str().unwrap()]).status.code(), Some(3));

    std::fs::write(&t, "{").unwrap();
    assert_eq!(levy(&["cantor", "verify", "--point-file", t.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(levy(&["delta", "--y-spec", "prop3:x"]).status.code(), Some(1));
    assert_eq!(levy(&["nonsense"]).status.code(), Some(1));
    assert_eq!(levy(&["spectrum", "empirical", "--alpha1", "1", "--alpha2", "1", "--y-spec", "ae"]).status.code(), Some(1));
    assert_eq!(levy(&["delta", "--y-spec", "ae"]).status.code(), Some(2));
    assert_eq!(levy(&["eval", "--alpha=-1", "--x", "0.5"]).status.code(), Some(2));
    assert_eq!(levy(&["digits", "--y-spec", "random:1", "--n", "2000000"]).status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_levy"))
        .args(["digits", "--y-spec", "random:1", "--n", "2000000"])
        .env("LEVYSPEC_DIGIT_BUDGET", "3000000")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn empirical_is_reproducible() {
    let args = [
        "spectrum", "empirical", "--alpha1", "1", "--alpha2", "1", "--y-spec", "prop1:2", "--samples", "120",
        "--depth", "1024", "--seed", "9", "--cantor", "0.5,0.5", "--cantor-fraction", "0.5",
    ];
    let a = levy(&args);
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let b = levy(&one);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let s = String::from_utf8(a.stdout).unwrap();
    assert!(s.lines().any(|l| l == "h1_bin,h2_bin,count,dim_est,dim_theory"));
}

#[test]
fn count_and_localdim() {
    let mut args = vec!["cantor", "count"];
    args.extend(SET);
    args.extend(["--n", "40", "--prefix-hex", "0000"]);
    let v = json(&levy(&args));
    assert_eq!(v["free"], 30);
    assert_eq!(v["count"], "1073741824");
    assert_eq!(v["cylinder"]["plain"], "1/16");

    let mut args = vec!["cantor", "localdim"];
    args.extend(SET);
    args.extend(["--levels", "4"]);
    let o = levy(&args);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn haar_rows_match_closed_form() {
    let o = levy(&["haar", "--alpha", "0.5", "--j-max", "6"]);
    let s = String::from_utf8(o.stdout).unwrap();
    for l in s.lines().skip(4) {
        let ratio: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-12, "{l}");
    }
}

#[test]
fn selftest_single_criterion() {
    let v = json(&levy(&["selftest", "--criteria", "1"]));
    assert_eq!(v["passed"], 1);
    assert_eq!(v["failed"], 0);
    assert_eq!(levy(&["selftest", "--criteria", "99"]).status.code(), Some(1));
}
