//! End-to-end tests of the command-line surface.

use std::process::Command;

fn rrcf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rrcf"))
}

fn stdout_of(args: &[&str]) -> String {
    let out = rrcf().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "rrcf {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

#[test]
fn qexp_prints_l_expansion() {
    let out = stdout_of(&["qexp", "--function", "l", "--order", "8"]);
    assert_eq!(
        out.trim(),
        "1 + 2*q - 4*q^3 - 2*q^4 + 6*q^5 + 8*q^6 - 4*q^7 + O(q^8)"
    );
}

#[test]
fn qexp_spec_and_function_agree() {
    let via_fn = stdout_of(&["qexp", "--function", "l", "--order", "12"]);
    let via_spec = stdout_of(&[
        "qexp",
        "--spec",
        "geneta 10: {1: -2, 2: 3, 3: 2, 4: -3}",
        "--order",
        "12",
    ]);
    assert_eq!(via_fn, via_spec);
}

#[test]
fn qexp_json_roundtrips() {
    let out = stdout_of(&["qexp", "--function", "r", "--order", "10", "--json"]);
    let parsed = rrcf::qseries::PuiseuxSeries::from_json(out.trim()).unwrap();
    assert_eq!(
        parsed.leading_exponent().unwrap(),
        rrcf::qseries::Exponent::new(1, 5)
    );
    assert_eq!(parsed.to_json(), out.trim());
}

#[test]
fn cusps_listing_matches_library() {
    let out = stdout_of(&["cusps", "--N", "10"]);
    let lines: Vec<&str> = out.trim().lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.contains(&"1/0 width=1"));
    assert!(lines.contains(&"3/10 width=1"));
    assert!(lines.contains(&"1/5 width=2"));
    let out = stdout_of(&["cusps", "--N", "10", "--kind", "gamma0"]);
    assert_eq!(out.trim().lines().count(), 4);
}

#[test]
fn orders_table_shows_pole_data() {
    let out = stdout_of(&[
        "orders",
        "--spec",
        "eta 10: {1: 6, 5: -6}",
        "--N",
        "10",
    ]);
    assert!(out.contains("1/5 order=-2"));
    assert!(out.contains("1/0 order=-1"));
    assert!(out.contains("total pole degree: 3"));
}

#[test]
fn modeq_level_two_text_and_json() {
    let out = stdout_of(&["modeq", "--level", "2"]);
    assert_eq!(out.trim(), "1 + X - 2*X*Y - X*Y^2 + X^2*Y^2");
    let json = stdout_of(&["modeq", "--level", "2", "--json"]);
    let poly = rrcf::modeq::BivarPoly::from_sparse_json(json.trim()).unwrap();
    assert_eq!(poly, rrcf::modeq::expected_level2());
}

#[test]
fn modeq_verification_flag() {
    let out = rrcf()
        .args(["modeq", "--level", "2", "--verify", "120"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("verified"));
}

#[test]
fn classpoly_gaussian_field() {
    let out = stdout_of(&["classpoly", "--disc", "-4", "--prec", "192"]);
    assert_eq!(
        out.trim(),
        "1 - 26*X + 62*X^2 - 458*X^3 - 130*X^4 + 458*X^5 + 62*X^6 + 26*X^7 + X^8"
    );
    let json = stdout_of(&["classpoly", "--disc", "-4", "--prec", "192", "--json"]);
    let value: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(value["disc"], -4);
    assert_eq!(value["N"], 10);
    assert_eq!(value["coeffs"].as_array().unwrap().len(), 9);
    assert_eq!(value["roots"].as_array().unwrap().len(), 8);
}

#[test]
fn eval_l_at_i() {
    let out = stdout_of(&["eval", "--function", "l", "--tau", "i", "--prec", "128"]);
    assert!(out.starts_with("1.00373485"), "got {out}");
}

#[test]
fn eval_honors_env_default_precision() {
    let out = rrcf()
        .env("RRMOD_DEFAULT_PREC", "64")
        .args(["eval", "--function", "l", "--tau", "i"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // 64-bit precision certifies ~14 digits
    let digits = text.trim().split('.').nth(1).unwrap_or("").len();
    assert!(digits < 20, "expected short output, got {text}");
}

#[test]
fn usage_errors_exit_2() {
    let out = rrcf()
        .args(["eval", "--function", "l", "--tau", "not-a-number"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = rrcf()
        .args(["classpoly", "--disc", "-7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = rrcf().args(["qexp"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = rrcf()
        .args(["eval", "--function", "l", "--tau", "-i"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_passes_and_exits_zero() {
    let out = rrcf().args(["verify-suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 20);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
