use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_multisecant")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stderr)
}

fn temp_json(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("multisecant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn parabola_tangent_equations() {
    let (code, v, _) = run(&["oh-eqs", "--builtin", "parabola", "--profile", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["num_equations"], 2);
    assert_eq!(v["variables"], serde_json::json!(["u1", "v1", "z1"]));
    assert_eq!(v["profile"], "(2)");
}

#[test]
fn report_keys_are_sorted() {
    let out = Command::new(env!("CARGO_BIN_EXE_multisecant"))
        .args(["oh-eqs", "--builtin", "twisted-cubic", "--profile", "1,1"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = top.clone();
    sorted.sort_unstable();
    assert_eq!(top, sorted);
}

#[test]
fn input_file_over_a_prime_field() {
    let p = temp_json(
        "conic.json",
        r#"{"variables": ["x", "z"], "generators": ["x - z^2"], "field": "GF(7)"}"#,
    );
    let (code, v, err) = run(&["smooth-at", "--input", p.to_str().unwrap(), "--profile", "2", "--points", "0"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["agree"], true);
}

#[test]
fn malformed_polynomial_reports_position() {
    let p = temp_json("bad.json", r#"{"variables": ["x", "z"], "generators": ["x - z^^2"], "field": "QQ"}"#);
    let (code, _, err) = run(&["oh-eqs", "--input", p.to_str().unwrap(), "--profile", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn malformed_json_reports_line_and_column() {
    let p = temp_json("broken.json", "{\"variables\": [\"x\", \"z\"],\n  \"generators\": [\"x\" \"z\"]}");
    let (code, _, err) = run(&["oh-eqs", "--input", p.to_str().unwrap(), "--profile", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["census", "--builtin", "parabola", "--primes", "12"]).0, 2);
    assert_eq!(run(&["oh-eqs", "--builtin", "parabola", "--profile", "0"]).0, 2);
    let (code, _, err) = run(&["oh-eqs", "--builtin", "klein", "--profile", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("twisted-cubic"));
}

#[test]
fn gallery_listing_and_show() {
    let (code, v, _) = run(&["gallery", "list"]);
    assert_eq!(code, 0);
    let text = v.to_string();
    for name in multisecant::gallery::BUILTIN_NAMES {
        assert!(text.contains(name), "{name} missing from {text}");
    }
    let (code, a, _) = run(&["gallery", "show", "projected-veronese-p4"]);
    assert_eq!(code, 0);
    let (_, b, _) = run(&["gallery", "show", "projected-veronese-p4"]);
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("multisecant-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cover.json");
    let (code, _, _) = run(&["secant-cover", "--builtin", "parabola", "--primes", "5,7", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["cover"]["estimate"]["dimension"], 2, "{v}");
}
