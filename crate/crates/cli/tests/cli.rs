use std::process::{Command, Output};

use serde_json::Value;

fn mtv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtv"))
        .args(args)
        .output()
        .expect("run mtv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn value_re(rec: &Value) -> f64 {
    rec["value_re"].as_str().unwrap().parse().unwrap()
}

fn t_single(n: u32) -> f64 {
    let o = mtv(&["eval", &format!("t[{}]", n), "--json"]);
    value_re(&json_lines(&o)[0])
}

#[test]
fn eval_t2_is_pi_squared_over_eight() {
    let o = mtv(&["eval", "t[2]", "--digits", "30"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("1.2337005501361698273543113749"), "{}", s);
    assert!(s.contains("error <="));
}

#[test]
fn eval_record_fields() {
    let o = mtv(&["eval", "t[2]", "--json"]);
    let rec = &json_lines(&o)[0];
    for key in [
        "word",
        "kind",
        "value_re",
        "value_im",
        "error_bound",
        "M_used",
    ] {
        assert!(rec.get(key).is_some(), "missing {}", key);
    }
    assert_eq!(rec["kind"], "t");
    assert!(rec["error_bound"].as_f64().unwrap() < 1e-30);
}

#[test]
fn eval_depth_four_matches_product_formula() {
    let o = mtv(&["eval", "t[2,2,1,2]", "--json"]);
    let v = value_re(&json_lines(&o)[0]);
    let expected = -15.0 / 32.0 * t_single(7) - t_single(3) * t_single(4) / 14.0
        + 111.0 / 248.0 * t_single(2) * t_single(5);
    assert!((v - expected).abs() < 1e-15, "{} vs {}", v, expected);
}

#[test]
fn reversed_flag_reads_outermost_first() {
    let a = stdout(&mtv(&["eval", "t[2,2,1,2]", "--json"]));
    let b = stdout(&mtv(&["eval", "t[2,1,2,2]", "--reversed", "--json"]));
    assert_eq!(a, b);
    let c = stdout(&mtv(&["eval", "t[2,1,2,2]", "--json"]));
    assert_ne!(a, c);
}

#[test]
fn json_round_trip_and_text_agreement() {
    for w in ["t[3,2,2,3]", "z[2,-3]", "z[1@1/3,2]"] {
        let rec = json_lines(&mtv(&["eval", w, "--json", "--digits", "25"]))[0].clone();
        let again = json_lines(&mtv(&[
            "eval",
            rec["word"].as_str().unwrap(),
            "--json",
            "--digits",
            "25",
        ]))[0]
            .clone();
        assert_eq!(rec, again);
        let text = stdout(&mtv(&["eval", w, "--digits", "25"]));
        assert!(
            text.contains(rec["value_re"].as_str().unwrap()),
            "{} / {}",
            text,
            rec
        );
    }
}

#[test]
fn interpolated_value() {
    let rec = json_lines(&mtv(&["eval", "t[2,1,2]", "--r", "1/2", "--json"]))[0].clone();
    assert_eq!(rec["r"], "1/2");
    assert!((value_re(&rec) - 0.5 * t_single(5)).abs() < 1e-15);
}

#[test]
fn reg_prints_polynomial_and_value() {
    let o = mtv(&["reg", "t[1]", "--json"]);
    assert!(o.status.success());
    let rec = &json_lines(&o)[0];
    assert!((value_re(rec) - std::f64::consts::LN_2).abs() < 1e-15);
    assert!(rec.get("reg").is_some());
    let text = stdout(&mtv(&["reg", "z[2,1]"]));
    assert!(text.contains("T"), "{}", text);
}

#[test]
fn conjecture_check_at_n_zero_and_one() {
    for n in ["0", "1"] {
        let o = mtv(&[
            "check",
            "conjecture-thalf",
            "--n",
            n,
            "--digits",
            "30",
            "--json",
        ]);
        assert!(o.status.success());
        let rec = &json_lines(&o)[0];
        assert!(rec["residual"].as_f64().unwrap() < 1e-25);
    }
}

#[test]
fn relation_json_carries_residual() {
    let o = mtv(&["relation", "--word", "t[1,1,2]", "--json"]);
    assert!(o.status.success());
    let rec = &json_lines(&o)[0];
    assert!(rec["relation"].as_str().unwrap().contains("t[1,1,2]"));
    assert!(rec["residual"].as_f64().unwrap() < 1e-25);
    assert_eq!(rec["ok"], true);
    for via in ["antipode", "half-parity"] {
        let word = if via == "antipode" {
            "t[2,3]"
        } else {
            "t[3,2]"
        };
        let o = mtv(&["relation", "--word", word, "--via", via]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
}

#[test]
fn verify_truncated_samples() {
    let o = mtv(&[
        "verify",
        "truncated",
        "--m",
        "2",
        "--phases",
        "1/3,1/5",
        "--M",
        "40",
        "--samples",
        "5",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("ok")).count(), 5);
}

#[test]
fn verify_symmetry_two_phases() {
    let o = mtv(&[
        "verify", "symmetry", "--phases", "0,1/2", "--digits", "20", "--cutoff", "16", "--json",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(json_lines(&o)[0]["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn verify_series_and_tables() {
    let o = mtv(&["verify", "series", "Gt2", "--order", "6", "--digits", "25"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = mtv(&["series", "Gt2", "--order", "4", "--json"]);
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 3);
    let o = mtv(&["table", "t3223", "--n", "0..2", "--digits", "25"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
    assert!(mtv(&["series", "list"]).status.success());
}

#[test]
fn exit_statuses() {
    assert_eq!(mtv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mtv(&["eval", "q[2]"]).status.code(), Some(2));
    assert_eq!(mtv(&["eval", "t[2,x]"]).status.code(), Some(2));
    assert_eq!(mtv(&["series", "Nope"]).status.code(), Some(2));
    assert_eq!(mtv(&["eval", "t[1]"]).status.code(), Some(3));
    assert_eq!(
        mtv(&["check", "conjecture-thalf", "--n", "0", "--tol", "1e-300"])
            .status
            .code(),
        Some(1)
    );
}
