use std::path::PathBuf;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
}

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Run {
    let mut argv = vec!["factorum".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = factorum::cli::run(argv, &mut input, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap() }
}

fn run(args: &[&str]) -> Run {
    run_with_stdin(args, "")
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("bad json {e}: {}", r.stdout))
}

fn verify_text(cert: &str) -> Run {
    run_with_stdin(&["verify", "-"], cert)
}

fn solver_runs() -> Vec<Vec<String>> {
    let k13 = data("k13.json");
    let c4 = data("c4.json");
    let nine = data("nine.json");
    let nine_h = data("nine_sponge.json");
    let star = data("star_spec.json");
    let boxed = data("box.json");
    let box_h = data("box_sponge.json");
    let graph_sys = format!("graph:{nine}");
    let cmds: Vec<Vec<&str>> = vec![
        vec!["match", &k13],
        vec!["match", &c4],
        vec!["konig", &c4],
        vec!["konig", &k13],
        vec!["tutte-test", &k13],
        vec!["tutte-test", &c4, "--seed", "7"],
        vec!["tutte-test", &c4, "--edmonds"],
        vec!["tjoin", &c4, "-t", "0,2"],
        vec!["tjoin", &k13, "-t", "a,b,c,d", "--x0", "c"],
        vec!["factor", &k13],
        vec!["factor", &k13, "--spec", &star],
        vec!["orient", &c4],
        vec!["orient", &k13],
        vec!["general-factor", &nine, "--sponge", &nine_h, "--trace"],
        vec!["jump", "--system", &boxed, "--sponge", &box_h],
        vec!["jump", "--system", &graph_sys, "--sponge", &nine_h, "--trace"],
    ];
    cmds.into_iter().map(|c| c.into_iter().map(String::from).collect()).collect()
}

#[test]
fn match_k13() {
    let r = run(&["match", &data("k13.json")]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert_eq!(v["nu"], 1);
    assert_eq!(v["missed"], 2);
    assert_eq!(v["barrier"], serde_json::json!(["c"]));
    assert_eq!(v["command"], "match");
    assert_eq!(v["seed"], 0);
    assert!(v["version"].is_string());
}

#[test]
fn general_factor_nine_parallel() {
    let r = run(&["general-factor", &data("nine.json"), "--sponge", &data("nine_sponge.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["deficiency"], 1);
}

#[test]
fn tampered_barrier_fails_verify() {
    let r = run(&["match", &data("k13.json")]);
    let mut v = json(&r);
    v["barrier"] = serde_json::json!(["a"]);
    let out = verify_text(&v.to_string());
    assert_eq!(out.code, 2);
    assert_eq!(json(&out)["verified"], false);
}

#[test]
fn tampered_deficiency_fails_verify() {
    let r = run(&["general-factor", &data("nine.json"), "--sponge", &data("nine_sponge.json")]);
    let mut v = json(&r);
    v["deficiency"] = serde_json::json!(0);
    assert_eq!(verify_text(&v.to_string()).code, 2);

    let r = run(&["factor", &data("k13.json")]);
    let mut v = json(&r);
    v["cut"]["U"] = serde_json::json!([]);
    assert_eq!(verify_text(&v.to_string()).code, 2);

    let r = run(&["tjoin", &data("c4.json"), "-t", "0,2"]);
    let mut v = json(&r);
    v["join"] = serde_json::json!([0, 1, 2, 3]);
    assert_eq!(verify_text(&v.to_string()).code, 2);
}

#[test]
fn every_solver_output_verifies() {
    for args in solver_runs() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = run(&argv);
        assert_eq!(r.code, 0, "{argv:?}: {}", r.stdout);
        let v = verify_text(&r.stdout);
        assert_eq!(v.code, 0, "{argv:?}: {}", v.stdout);
        assert_eq!(json(&v)["verified"], true);
    }
}

#[test]
fn output_is_reproducible() {
    for args in solver_runs() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&argv).stdout, run(&argv).stdout, "{argv:?}");
    }
}

#[test]
fn stdin_and_dimacs() {
    let text = std::fs::read_to_string(data("c4.json")).unwrap();
    let a = run_with_stdin(&["match", "-"], &text);
    assert_eq!(a.code, 0);
    assert_eq!(json(&a)["nu"], 2);
    let dimacs = "c four-cycle\np edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n";
    let b = run_with_stdin(&["match", "-"], dimacs);
    assert_eq!(b.code, 0, "{}", b.stdout);
    assert_eq!(json(&b)["nu"], 2);
}

#[test]
fn input_errors_exit_1() {
    let cases: [(&[&str], &str); 4] = [
        (&["match", "-"], "{not json"),
        (&["match", "-"], r#"{"n": 2, "edges": [[0, 5]]}"#),
        (&["match", "-"], r#"{"n": 2, "edges": [], "colour": 1}"#),
        (&["general-factor", "-", "--sponge", "/nonexistent/h.json"], r#"{"n": 1, "edges": []}"#),
    ];
    for (args, stdin) in cases {
        let r = run_with_stdin(args, stdin);
        assert_eq!(r.code, 1, "{args:?} {stdin}");
        assert_eq!(json(&r)["exit_code"], 1);
    }
    assert_eq!(run(&["no-such-command"]).code, 1);
}

#[test]
fn contract_violations_exit_2() {
    let tri = r#"{"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]}"#;
    assert_eq!(run_with_stdin(&["konig", "-"], tri).code, 2);
    assert_eq!(run_with_stdin(&["tjoin", "-", "-t", "0"], tri).code, 2);
}

#[test]
fn pretty_is_not_json() {
    let r = run(&["--pretty", "match", &data("k13.json")]);
    assert_eq!(r.code, 0);
    assert!(serde_json::from_str::<Value>(&r.stdout).is_err());
    assert!(r.stdout.contains("missed"));
}

#[test]
fn selftest_single_criterion() {
    let r = run(&["selftest", "--criterion", "6"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(json(&r)["passed"], true);
}
