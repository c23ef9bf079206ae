use serde_json::Value;
use std::process::Command;

fn twistl(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistl")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn lvalue_delta_central() {
    let (code, out) = twistl(&["lvalue"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["value_re"].as_f64().unwrap() - 0.7921228386).abs() < 1e-9);
}

#[test]
fn twisted_lvalue_independent_of_y() {
    let a: Value = serde_json::from_str(&twistl(&["lvalue", "--n", "2", "--char", "chi[2]", "--y", "10"]).1).unwrap();
    let b: Value = serde_json::from_str(&twistl(&["lvalue", "--n", "2", "--char", "chi[2]", "--y", "60"]).1).unwrap();
    let (x, y) = (a["value_re"].as_f64().unwrap(), b["value_re"].as_f64().unwrap());
    assert!((x - y).abs() < 1e-9 * x.abs(), "{x} {y}");
}

#[test]
fn gauss_sum_records() {
    let (code, out) = twistl(&["gauss-sum", "--p", "7", "--n", "1"]);
    assert_eq!(code, 0);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!((r["norm_sq"].as_f64().unwrap() - 7.0).abs() < 1e-9);
        assert!(r["character_label"].as_str().unwrap().starts_with("chi["));
    }
}

#[test]
fn character_table_csv() {
    let (code, out) = twistl(&["gauss-sum", "--n", "2", "--csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "label,conductor_exponent,order,gen0");
    assert_eq!(lines.len(), 11);
}

#[test]
fn cone_count_matches_library() {
    let (code, out) = twistl(&["cone-count", "--n", "2", "--x", "1000"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["min_norm"].as_u64(), Some(24));
    assert_eq!(v["count"].as_u64(), Some(40));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(twistl(&["lvalue", "--field", "no-such-field"]).0, 2);
    assert_eq!(twistl(&["lvalue", "--n", "2", "--char", "chi[1,2]"]).0, 2);
    assert_eq!(twistl(&["lav-scan", "--a", "5"]).0, 2);
    assert_eq!(twistl(&["cone-count"]).0, 2);
}
