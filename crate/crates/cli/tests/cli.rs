use std::path::PathBuf;
use std::process::Command;

use genformal_cli::report::{Report, Status};

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(format!("{name}.json"))
}

fn genformal(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_genformal")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_core_passes_and_writes_json() {
    let dir = std::env::temp_dir().join(format!("genformal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("report.json");
    let cp3 = scene("cp3");
    let (code, stdout, _) =
        genformal(&["verify", cp3.to_str().unwrap(), "--suite", "core", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let report = Report::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(report.passed());
    assert_eq!(report.suite, "core");
    assert_eq!(report.get("core.gk-positivity").unwrap().status, Status::Pass);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
}

#[test]
fn failing_identity_exits_one_with_witness() {
    let (code, stdout, _) = genformal(&["verify", scene("broken_moment").to_str().unwrap(), "--suite", "equivariant"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAIL  equivariant.moment-map"), "{stdout}");
    assert!(stdout.contains("bullet (1)"), "{stdout}");
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("genformal-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"version\": 1,\n  \"name\": }").unwrap();
    let (code, _, stderr) = genformal(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");
    let (code, _, _) = genformal(&["verify", scene("cp3").to_str().unwrap(), "--suite", "nope"]);
    assert_eq!(code, 2);
    let (code, _, stderr) = genformal(&["type", scene("cp3").to_str().unwrap(), "--at", "{\"z0\":\"2\"}"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("level"), "{stderr}");
}

#[test]
fn type_reports_both_strata() {
    let cp3 = scene("cp3");
    let (code, stdout, _) = genformal(&["type", cp3.to_str().unwrap(), "--at", "{\"z0\":\"1\",\"z2\":\"1\"}"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("J_ε: upstairs 4, quotient 3"), "{stdout}");
    let (_, stdout, _) = genformal(&["type", cp3.to_str().unwrap(), "--at", "{\"z0\":\"1\",\"z1\":\"1\"}"]);
    assert!(stdout.contains("J_ε: upstairs 2, quotient 1"), "{stdout}");
    assert!(stdout.contains("J_ω: upstairs 0, quotient 0"), "{stdout}");
}

#[test]
fn hodge_tables_and_unverified_hypotheses() {
    let (code, stdout, _) = genformal(&["hodge", scene("blowup3").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("     0  1¹  0¹  2¹  0¹  2¹  0¹  1¹"), "{stdout}");
    assert!(stdout.contains("total 6"), "{stdout}");
    let (_, stdout, _) = genformal(&["hodge", scene("cp3_flat").to_str().unwrap()]);
    assert!(stdout.contains("note:"), "{stdout}");
    let (code, _, stderr) = genformal(&["hodge", scene("cp3_nonisolated").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("not isolated"), "{stderr}");
}
