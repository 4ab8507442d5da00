use std::process::Command;

fn klab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_klab")).args(args).output().expect("spawn klab");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn count_all_methods_agree() {
    let (code, out, _) = klab(&["count", "--c", "25", "--q", "6", "--h1", "5", "--h2", "5", "--method", "all"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], serde_json::Value::Bool(true));
    let counts = v["counts"].as_object().unwrap();
    assert_eq!(counts.len(), 3);
    assert!(counts.values().all(|x| x == &counts["brute"]));
}

#[test]
fn bound_reports_composite_profile() {
    let (code, out, _) = klab(&["bound", "--c", "49", "--M", "7", "--N", "7", "--d", "7", "--dp", "7", "--e", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let saving = v["composite_max_term_saving"].as_f64().unwrap();
    assert!((saving - 1.0 / 12.0).abs() < 1e-9);
}

#[test]
fn kloosterman_value() {
    let (code, out, _) = klab(&["kloosterman", "--c", "3", "--m", "1", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("-1"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(klab(&["frobnicate"]).0, 2);
    assert_eq!(klab(&["count", "--c", "12", "--q", "2", "--h1", "1", "--h2", "1", "--a1", "2"]).0, 2);
    assert_eq!(klab(&["bound", "--c", "12", "--M", "3", "--N", "3", "--d", "2", "--dp", "1", "--e", "6"]).0, 2);
}

#[test]
fn selftest_single_suite_is_deterministic() {
    let a = klab(&["selftest", "--suite", "1", "--seed", "7"]);
    let b = klab(&["selftest", "--suite", "1", "--seed", "7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn bridge_intervals_comma_form() {
    let (code, out, _) = klab(&["verify", "bridge", "--c", "49", "--intervals", "7,7,1,0.05", "--narrow"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["setup"]["c"], 49);
    assert_eq!(klab(&["verify", "bridge", "--c", "49", "--intervals", "7,7,1"]).0, 2);
}
