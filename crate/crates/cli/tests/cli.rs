use std::process::{Command, Output};

fn translogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_translogic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("translogic-cli-{}-{name}", std::process::id()))
}

#[test]
fn translate_prints_the_image() {
    let o = translogic(&["translate", "Tl", "(-> p q)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(-> p (-> p q))");
    let o = translogic(&["translate", "Tg", "(not p)"]);
    assert_eq!(stdout(&o).trim(), "(box (not (box p)))");
}

#[test]
fn unknown_names_and_bad_bounds_are_usage_errors() {
    let o = translogic(&["translate", "Nope", "p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown translation"));
    assert_eq!(translogic(&["verify", "suite", "nope"]).status.code(), Some(2));
    assert_eq!(translogic(&["--bounds", "max_nodes=x", "verify", "suite", "connectives"]).status.code(), Some(2));
    assert_eq!(translogic(&["--bounds", "colour=3", "verify", "suite", "connectives"]).status.code(), Some(2));
    assert_eq!(translogic(&["verify", "edge", "CPL->S4", "--via", "Tc"]).status.code(), Some(2));
}

#[test]
fn malformed_formulas_are_parse_errors() {
    let o = translogic(&["translate", "Tl", "(-> p"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("parse error"));
    // `and` is outside the source signature of Tl.
    assert_eq!(translogic(&["translate", "Tl", "(and p q)"]).status.code(), Some(3));
}

#[test]
fn classify_prints_labels() {
    let o = translogic(&["classify", "Tl"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "structural, compositional, grammatical shape, definitional shape, general-recursive, GR^C");
    assert!(stdout(&translogic(&["classify", "Tprime"])).starts_with("opaque"));
}

#[test]
fn suites_lists_every_section() {
    let o = translogic(&["suites"]);
    let text = stdout(&o);
    let listed: Vec<&str> = text.lines().collect();
    for s in translogic::suite::SECTIONS {
        assert!(listed.contains(&s), "{s}");
    }
    assert!(listed.contains(&"full"));
}

#[test]
fn verify_writes_a_json_report() {
    let o = translogic(&["verify", "suite", "connectives", "--no-elapsed"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["suite"], "connectives");
    assert!(stderr(&o).contains("PASS connectives"));

    let path = temp_path("report.json");
    let o = translogic(&["verify", "--suite", "connectives", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["suite"], "connectives");
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_edge_checks_one_translation() {
    let o = translogic(&["verify", "edge", "CPL-not-imp->L3", "--via", "Tl", "--no-elapsed"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["sections"].as_array().unwrap().len(), 1);
}

#[test]
fn failed_expectations_exit_with_a_mismatch() {
    let path = temp_path("user.cat");
    std::fs::write(&path, "translation Tmine\n  source CPL\n  target L3\n  opaque idx p\n  expect opaque no\nend\n").unwrap();
    let o = translogic(&["--catalog", path.to_str().unwrap(), "verify", "suite", "catalog-expectations"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL catalog-expectations"));
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let run = |workers: &str| {
        let o = translogic(&["--workers", workers, "--bounds", "max_nodes=3", "verify", "suite", "fragment-embedding", "--no-elapsed"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        o.stdout
    };
    assert_eq!(run("1"), run("3"));
}
