use std::process::{Command, Output};

fn nilcons(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcons")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn decompose_g2_second_root() {
    let out = nilcons(&["decompose", "--preset", "g2c-g2", "--j", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["gradation"]["1"], 8);
    assert_eq!(v["gradation"]["2"], 2);
}

#[test]
fn decompose_grassmannian_first_root() {
    let v = json(&nilcons(&["decompose", "--preset", "so-2-np2", "--n", "1", "--j", "1"]));
    assert_eq!(v["dimN"], 3);
}

#[test]
fn bad_arguments_exit_one() {
    for args in [
        vec!["decompose", "--preset", "g2c-g2", "--j", "3"],
        vec!["decompose", "--preset", "nope", "--j", "1"],
        vec!["decompose", "--preset", "so-2-np2", "--j", "1"],
        vec!["decompose", "--j", "1"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "root:a7"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "rows:[[1,"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "kahler:x"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "root:a2"],
        vec!["nilcheck", "--preset", "g2c-g2", "--j", "1", "--seed", "-4", "--v", "full"],
        vec!["frobnicate"],
    ] {
        let out = nilcons(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn nilcheck_full_level_passes() {
    let out = nilcons(&["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "full"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["singularOrbitDim"], 10);
}

#[test]
fn nilcheck_kahler_half_fails() {
    let out = nilcons(&["nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "kahler:1/2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["conditionI"]["value"], "NotTransitive");
}

#[test]
fn nilcheck_highest_line_hint() {
    let out = nilcons(&["nilcheck", "--preset", "g2c-g2", "--j", "2", "--v", "root:3a1+a2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hint"], "orbit-equivalent to H^Λ_{1,1}");
}

#[test]
fn nilcheck_output_is_deterministic() {
    let args = ["nilcheck", "--preset", "so-2-np2", "--n", "2", "--j", "2", "--v", "tensor:e1f1,e2f1", "--seed", "7"];
    let a = nilcons(&args);
    let b = nilcons(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_grassmannian_six() {
    let out = nilcons(&["verify-paper", "--preset", "so-2-np2", "--n", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["allPassed"], true);
    let ac7 = v["criteria"].as_array().unwrap().iter().find(|c| c["id"] == "AC7").unwrap();
    assert!(ac7["checks"].as_array().unwrap().iter().any(|c| c["case"] == "b2 n=6 H^Λ_{1,5}"));
}

#[test]
fn text_format_lists_criteria() {
    let out = nilcons(&["verify-paper", "--preset", "sl3c-su3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS AC10")));
    assert!(text.lines().any(|l| l.starts_with("SKIP AC4")));
}
