use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PR_BOX_DIGEST: &str = "b9ecd1ee3a271b954223882c22b790b18a842e2745d1dd15c517f978656150be";

fn nosig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nosig"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_ns_exit_codes() {
    let ok = nosig(&["check-ns", "tests/golden/pr_box.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("no-signalling: holds"));

    let bad = nosig(&["check-ns", "tests/golden/signalling.json"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("1 signalling pair"));
    assert!(text.contains("  {a0,b0}  {a0,b1}  {a0=0}: 1 != 0; {a0=1}: 0 != 1\n"));

    let mass = nosig(&["check-ns", "tests/malformed/mass_17_16.json"]);
    assert_eq!(mass.status.code(), Some(2));
    assert!(stderr(&mass).contains("entries: total mass is 17/16, expected 1"));
}

#[test]
fn realize_exit_codes() {
    let signed = nosig(&["--format", "machine", "realize", "tests/golden/pr_box.json"]);
    assert_eq!(signed.status.code(), Some(0));
    assert_eq!(json(&signed)["result"]["negativity"], "1/2");

    let nonneg = nosig(&["realize", "tests/golden/pr_box.json", "--require-nonneg"]);
    assert_eq!(nonneg.status.code(), Some(1));

    let det = nosig(&["--format", "machine", "realize", "tests/golden/deterministic.json"]);
    assert_eq!(det.status.code(), Some(0));
    let result = &json(&det)["result"];
    assert_eq!(result["negativity"], "0");
    let hidden = result["hidden_dist"].as_array().unwrap();
    assert_eq!(hidden.len(), 1);
    assert_eq!(hidden[0]["weight"], "1");

    let any = nosig(&["realize", "tests/golden/random_ns_7.json", "--method", "any"]);
    assert_eq!(any.status.code(), Some(0));
    let signalling = nosig(&["realize", "tests/golden/random_signalling_3.json"]);
    assert_eq!(signalling.status.code(), Some(1));
}

#[test]
fn realize_writes_a_loadable_schv_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let run = nosig(&["realize", "tests/golden/pr_box.json", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden("pr_box_realized.json"));
    let lambda = nosig(&["check-independence", out.to_str().unwrap(), "--which", "lambda"]);
    assert_eq!(lambda.status.code(), Some(0));
}

#[test]
fn independence_verdicts() {
    let s3 = nosig(&["--format", "machine", "check-independence", "tests/golden/section3.json"]);
    assert_eq!(s3.status.code(), Some(1));
    let checks = json(&s3)["result"]["checks"].clone();
    assert_eq!(checks[0]["holds"], true);
    assert_eq!(checks[1]["holds"], false);
    assert_eq!(checks[1]["witness"]["section"], serde_json::json!({"a": "x0"}));

    let embedded = nosig(&["check-independence", "tests/golden/pr_box_realized.json", "--which", "parameter"]);
    assert_eq!(embedded.status.code(), Some(0));
    let product = nosig(&["check-independence", "tests/golden/deterministic_realized.json", "--which", "lambda"]);
    assert_eq!(product.status.code(), Some(0));
    let random = nosig(&["check-independence", "tests/golden/random_schv_5.json", "--which", "lambda"]);
    assert_eq!(random.status.code(), Some(1));

    let mismatch = nosig(&["check-independence", "tests/golden/pr_box.json", "--which", "lambda"]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(stderr(&mismatch).contains("kind mismatch"));
}

#[test]
fn dimension_reports() {
    for (file, want) in [
        ("chsh.scenario.json", "9 / 9 / 9 PASS"),
        ("triangle.scenario.json", "7 / 7 / 7 PASS"),
        ("single_context.scenario.json", "4 / 4 / 4 PASS"),
        ("bell_1_3_2.scenario.json", "4 / 4 / 4 PASS"),
    ] {
        let o = nosig(&["dimension", &format!("tests/golden/{file}")]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert!(stdout(&o).contains(want), "{file}");
    }
    let capped = nosig(&["dimension", "tests/golden/chsh.scenario.json", "--enumeration-cap", "15"]);
    assert_eq!(capped.status.code(), Some(3));
    assert!(stderr(&capped).contains("16 global assignments"));
}

#[test]
fn generate_matches_golden_files() {
    let pr = nosig(&["generate", "pr-box"]);
    assert_eq!(pr.status.code(), Some(0));
    let digest = nosig_cli::report::sha256_hex(&pr.stdout);
    assert_eq!(digest, format!("sha256:{PR_BOX_DIGEST}"));
    assert_eq!(stdout(&pr), golden("pr_box.json"));

    let chsh = nosig(&["generate", "bell", "--parties", "2", "--settings", "2", "--outcomes", "2"]);
    assert_eq!(stdout(&chsh), golden("chsh.scenario.json"));
    assert_eq!(stdout(&nosig(&["generate", "section3"])), golden("section3.json"));
    assert_eq!(stdout(&nosig(&["generate", "random-ns", "--seed", "7"])), golden("random_ns_7.json"));
}

#[test]
fn generate_is_deterministic() {
    let a = nosig(&["generate", "random-ns", "--seed", "7"]);
    let b = nosig(&["generate", "random-ns", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = nosig(&["generate", "random-ns", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generate_errors() {
    let unknown = nosig(&["generate", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("registered generators: bell, single-context"));
    let bad_param = nosig(&["generate", "pr-box", "--seed", "3"]);
    assert_eq!(bad_param.status.code(), Some(2));
    let bad_value = nosig(&["generate", "random-ns", "--seed", "x"]);
    assert_eq!(bad_value.status.code(), Some(2));
}

#[test]
fn machine_reports_are_byte_stable() {
    let cases: [(&str, &[&str]); 6] = [
        ("check_ns_pr_box.json", &["check-ns", "tests/golden/pr_box.json"]),
        ("check_ns_signalling.json", &["check-ns", "tests/golden/signalling.json"]),
        ("realize_pr_box.json", &["realize", "tests/golden/pr_box.json"]),
        ("realize_pr_box_nonneg.json", &["realize", "tests/golden/pr_box.json", "--require-nonneg"]),
        ("independence_section3.json", &["check-independence", "tests/golden/section3.json"]),
        ("dimension_triangle.json", &["dimension", "tests/golden/triangle.scenario.json"]),
    ];
    for (frozen, args) in cases {
        let mut full = vec!["--format", "machine"];
        full.extend_from_slice(args);
        let first = nosig(&full);
        let second = nosig(&full);
        assert_eq!(first.stdout, second.stdout, "{frozen}");
        assert_eq!(stdout(&first), golden(&format!("reports/{frozen}")), "{frozen}");
    }
}

#[test]
fn report_goes_to_out_when_given() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = nosig(&["--format", "machine", "--out", out.to_str().unwrap(), "dimension", "tests/golden/chsh.scenario.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["result"]["verdict"], "PASS");
}

#[test]
fn scenario_may_be_referenced_by_relative_path() {
    let dir = tempfile::tempdir().unwrap();
    let root = PathBuf::from(dir.path());
    std::fs::create_dir(root.join("s")).unwrap();
    std::fs::write(root.join("s/chsh.json"), golden("chsh.scenario.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&golden("pr_box.json")).unwrap();
    doc["scenario"] = serde_json::json!("s/chsh.json");
    std::fs::write(root.join("m.json"), doc.to_string()).unwrap();
    let o = nosig(&["check-ns", root.join("m.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_input_code() {
    assert_eq!(nosig(&[]).status.code(), Some(2));
    assert_eq!(nosig(&["check-ns"]).status.code(), Some(2));
    assert_eq!(nosig(&["--format", "xml", "dimension", "x"]).status.code(), Some(2));
    assert_eq!(nosig(&["check-ns", "tests/golden/missing.json"]).status.code(), Some(2));
}
