mod common;

use std::process::{Command, Output};

use versal::cli::Report;

fn versal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_versal")).args(args).output().unwrap()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("versal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(versal(&["resolve", "-e", "ring x:1; ideal x^2;"]).status.code(), Some(0));
    assert_eq!(versal(&["resolve", "-e", "ring x:1; ideal x^2"]).status.code(), Some(1));
    assert_eq!(versal(&["resolve", "-e", "ring x:1; ideal x;"]).status.code(), Some(2));
    assert_eq!(versal(&["resolve", "-e", "ring x:1 y:1; ideal x*y + x^3;"]).status.code(), Some(2));
    assert_eq!(versal(&["resolve", "--depth", "1", "-e", "ring x:1; ideal x^2;"]).status.code(), Some(2));
    assert_eq!(versal(&["deform", "/nonexistent/input.ideal"]).status.code(), Some(1));
}

#[test]
fn syntax_error_reports_position() {
    let out = versal(&["tangent", "-e", "ring x:1;\nideal x^2 ++ 1;"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 12"), "{err}");
}

#[test]
fn tangent_report_for_a1() {
    let out = versal(&["tangent", "-e", "ring x:1; ideal x^2;"]);
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((report.t1.len(), report.t2.len()), (1, 0));
}

#[test]
fn json_has_stable_top_level_keys() {
    let out = versal(&["deform", "-e", "ring x:1; ideal x^2;"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["parameters", "family", "kuranishi", "t1", "t2", "caveats"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["kuranishi"], serde_json::json!([]));
    assert_eq!(v["family"], serde_json::json!([[["t0", "1/1"], ["x^2", "1/1"]]]));
}

#[test]
fn saved_report_verifies_and_corruption_is_caught() {
    let saved = scratch("cubic.json");
    let out = versal(&["deform", "-o", saved.to_str().unwrap(), common::corpus_dir().join("twisted_cubic.ideal").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let verified = versal(&["verify", saved.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&verified.stdout).unwrap();
    assert!(report.flatness.unwrap().passed);

    let mut report: Report = serde_json::from_str(&std::fs::read_to_string(&saved).unwrap()).unwrap();
    let value = &mut report.perturbation[0].derivation[0].value[0].1;
    *value = if value == "1/1" { "2/1".into() } else { "1/1".into() };
    let corrupt = scratch("corrupt.json");
    std::fs::write(&corrupt, serde_json::to_string(&report).unwrap()).unwrap();
    let out = versal(&["verify", corrupt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.flatness.unwrap().witness.is_some());
}

#[test]
fn reports_round_trip_on_the_corpus() {
    for (name, _) in common::corpus() {
        let path = common::corpus_dir().join(format!("{name}.ideal"));
        let out = versal(&["deform", "--order", "3", path.to_str().unwrap()]);
        let text = String::from_utf8(out.stdout).unwrap();
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(versal::cli::serialize(&report, versal::cli::Format::Json), text, "{name}");
    }
}

#[test]
fn text_format_lists_family_and_caveats() {
    let out = versal(&["deform", "--format", "text", "-e", "ring x:2 y:3; ideal x^3 + y^2;"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("t0 + x*t1 + y^2 + x^3"), "{text}");
    assert!(text.contains("caveats"));
    assert!(text.contains("flatness: pass"));
}

#[test]
fn command_line_overrides_file_options() {
    let path = common::corpus_dir().join("pinkham.ideal");
    let out = versal(&["resolve", "--depth", "2", path.to_str().unwrap()]);
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.input.depth, 2);
    assert_eq!(report.input.weight_bound, 4);
}
