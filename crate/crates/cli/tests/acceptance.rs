//! CLI acceptance: determinism (criterion 12) and the exit-code contract.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gaugequad"));
    c.env_remove("GAUGEQUAD_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// 12. Two runs of a CLI command with the same seed produce byte-identical
/// JSON, across every report-producing subcommand.
#[test]
fn criterion_12_determinism() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["integrate", "--fn", "x*sin(x)", "--eps-min", "1e-3", "--seed", "7"],
        vec!["integrate", "--fn", "corpus:dirichlet", "--eps-min", "1e-4", "--seed", "7"],
        vec!["darboux", "--fn", "corpus:geometric-step", "--report", "json"],
        vec!["variation", "--h", "cell-length", "--eps-min", "1e-2", "--seed", "3", "--report", "json"],
        vec!["improper", "--fn", "exp(-x)", "--mode", "halfline", "--eps-min", "1e-2", "--seed", "5"],
        vec!["converge", "--family", "corpus:staircase-4-1-1", "--theorem", "4.1.1", "--eps-min", "1e-2", "--nmax", "8", "--seed", "11"],
        vec!["tonelli", "--family", "corpus:separable-xy", "--order", "both", "--eps-min", "1e-2", "--seed", "9"],
        vec!["corpus", "export"],
    ];
    for args in commands {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty(), "{args:?} produced no output");
        assert_eq!(a.stdout, b.stdout, "outputs differ for {args:?}");
    }
    println!("ACCEPTANCE 12 (CLI determinism): PASS");
}

#[test]
fn failing_verdicts_still_exit_zero() {
    let out = run(&[
        "converge", "--family", "corpus:staircase-4-1-1", "--theorem", "4.1.1",
        "--eps-min", "1e-2", "--nmax", "8", "--seed", "11",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"holds\": false"), "{text}");
    assert!(text.contains("does not tend to a limit"), "{text}");
}

#[test]
fn bad_arguments_exit_one() {
    for args in [
        vec!["nonsense-subcommand"],
        vec!["integrate"],                            // missing --fn
        vec!["integrate", "--fn", "x", "--bogus"],    // unknown flag
        vec!["integrate", "--fn", "1 +"],             // expression parse error
        vec!["integrate", "--fn", "x", "--eps-min", "0"], // empty schedule
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    // parse errors report the offending position
    let out = run(&["integrate", "--fn", "sin(x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 5"));
}

#[test]
fn operational_errors_exit_two_with_error_name() {
    let out = run(&["integrate", "--fn", "corpus:no-such-entry"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownCorpusEntry"));

    // expressions carry no oscillation oracle, so darboux refuses them
    let out = run(&["darboux", "--fn", "x*x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("OracleRequired"));
}

#[test]
fn env_seed_overrides_flag() {
    let flag = run(&["integrate", "--fn", "x", "--eps-min", "1e-2", "--seed", "99"]);
    let env = bin()
        .args(["integrate", "--fn", "x", "--eps-min", "1e-2", "--seed", "7"])
        .env("GAUGEQUAD_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout, "env seed must reproduce the flag run");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["integrate", "--help"]).status.code(), Some(0));
}

#[test]
fn dump_division_writes_fine_division_csv() {
    let dir = std::env::temp_dir().join("gaugequad-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("division.csv");
    let out = run(&[
        "integrate", "--fn", "x", "--eps-min", "1e-2", "--seed", "1",
        "--dump-division", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,tag"));
    assert!(lines.count() >= 50, "expected a fine division");
}

#[test]
fn report_embeds_version_config_and_schedule() {
    let out = run(&["integrate", "--fn", "x", "--eps-min", "1e-2", "--seed", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    assert_eq!(v["command"], "integrate");
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["schedule"].as_array().unwrap().len(), 2);
    // computed reals are 17-significant-digit decimal strings
    let value = v["result"]["value"].as_str().unwrap();
    assert!(value.contains('e') && value.len() >= 19, "{value}");
}
