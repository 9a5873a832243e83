use std::process::{Command, Output};

use clap::CommandFactory;
use jetgroups::cli::{Cli, VERBS};

fn jetgroups(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetgroups"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn exp_of_quadratic_field() {
    let o = jetgroups(&["exp", "--n", "1", "--K", "4", "(x^2)*d/dx"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(x + x^2 + x^3 + x^4)");
}

#[test]
fn log_of_non_unipotent_jet_fails_with_domain_error() {
    let o = jetgroups(&["log", "--n", "1", "--K", "4", "(2*x)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not unipotent"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn syntax_errors_exit_with_code_two() {
    let o = jetgroups(&["log", "--n", "1", "--K", "4", "x +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1:4"), "{}", stderr(&o));
}

#[test]
fn verify_g2_succeeds() {
    let o = jetgroups(&["verify-g2", "--K", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("computed 5"));
    let o = jetgroups(&["--json", "verify-g2", "--K", "4"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["result"]["computed"], 5);
    assert_eq!(doc["result"]["status"], "verified");
}

#[test]
fn verify_gn_reports_seven_for_three_layers() {
    let o = jetgroups(&["--json", "verify-gn", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["result"]["computed"], 7);
    let levels: Vec<u64> = doc["result"]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["level"].as_u64().unwrap())
        .collect();
    assert!(levels.contains(&6));
}

#[test]
fn every_verb_is_a_subcommand() {
    let cmd = Cli::command();
    let mut names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_string()).collect();
    names.sort();
    let mut verbs: Vec<String> = VERBS.iter().map(|s| s.to_string()).collect();
    verbs.sort();
    assert_eq!(names, verbs);
    for verb in VERBS {
        let o = jetgroups(&[verb, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{verb}");
    }
}

#[test]
fn sample_invocations_of_each_verb() {
    let cases: [(&[&str], &str); 12] = [
        (&["log", "--n", "1", "--K", "3", "(x + x^2)"], "(x^2 - x^3)*d/dx"),
        (&["compose", "--n", "1", "--K", "3", "(x + x^2)", "(x + x^2)"], "(x + 2*x^2 + 2*x^3)"),
        (&["invert", "--n", "2", "--K", "3", "(x + y^2, y)"], "(x - y^2, y)"),
        (&["invert", "[[1, 2], [0, 1]]"], "[[1, -2], [0, 1]]"),
        (&["bracket", "--n", "1", "--K", "4", "(x^2)*d/dx", "x*d/dx"], "(-x^2)*d/dx"),
        (&["bch", "--n", "1", "--K", "3", "(x^2)*d/dx", "(x^3)*d/dx"], "(x^2 + x^3)*d/dx"),
        (&["pullback", "--n", "1", "--K", "3", "(x + x^2)", "x^2"], "x^2 + 2*x^3"),
        (&["pullback", "--n", "1", "--K", "3", "(2*x)", "(x^2)*d/dx"], "(2*x^2)*d/dx"),
        (&["delta", "--n", "1", "--K", "4", "x", "(x/(1-x))"], "x^2 + x^3 + x^4"),
        (&["delta", "--power", "1"], "c(1,1,1) = 1"),
        (&["derived-finite", "L"], "derived length: 4"),
        (&["kolchin", "[[1, 0], [1, 1]]"], "P = "),
    ];
    for (args, expected) in cases {
        let o = jetgroups(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).contains(expected), "{args:?} gave {}", stdout(&o));
    }
    let o = jetgroups(&["represent", "--n", "1", "--K", "2", "(x + x^2)"]);
    assert_eq!(stdout(&o), "basis: x, x^2\n[1, 0]\n[1, 1]\nmultiplicative: true\nunipotent: true\n");
    let o = jetgroups(&["exp", "--n", "1", "--K", "3", "--t", "-1", "(x + x^2)"]);
    assert_eq!(stdout(&o).trim(), "(x - x^2 + 2*x^3)");
}

#[test]
fn domain_errors_from_other_verbs() {
    let o = jetgroups(&["kolchin", "[[2, 0], [0, 1]]"]);
    assert_eq!(o.status.code(), Some(1));
    let o = jetgroups(&["bch", "--n", "2", "--K", "3", "y*d/dx", "x*d/dy"]);
    assert_eq!(o.status.code(), Some(1));
    let o = jetgroups(&["invert", "[[1, 1], [1, 1]]"]);
    assert_eq!(o.status.code(), Some(1));
    let o = jetgroups(&["--json", "log", "--n", "1", "--K", "2", "(2*x)"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["ok"], false);
    assert_eq!(doc["error"]["exit_code"], 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "bch", "--n", "2", "--K", "3", "(y^2)*d/dx", "(x^2)*d/dy"];
    let a = jetgroups(&args);
    let b = jetgroups(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn file_inputs_accept_text_and_json() {
    let dir = std::env::temp_dir().join(format!("jetgroups-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = dir.join("phi.txt");
    std::fs::write(&text, "(x + x^2,\n y)").unwrap();
    let arg = format!("@{}", text.display());
    let o = jetgroups(&["--json", "invert", "--n", "2", "--K", "3", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let json_file = dir.join("inv.json");
    std::fs::write(&json_file, doc["result"].to_string()).unwrap();
    let arg2 = format!("@{}", json_file.display());
    let o = jetgroups(&["compose", "--n", "2", "--K", "3", &arg, &arg2]);
    assert_eq!(stdout(&o).trim(), "(x, y)");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "(x,\n  y +)").unwrap();
    let o = jetgroups(&["invert", "--n", "2", "--K", "3", &format!("@{}", bad.display())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:6"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}
