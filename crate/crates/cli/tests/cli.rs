use std::path::PathBuf;
use std::process::{Command, Output};

use posfo_cli::format::{GraphSpec, NfaSpec};
use serde_json::Value;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Fixture {
        Fixture { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn posfo(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posfo")).args(args.iter().map(|a| a.as_ref())).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)));
    assert_eq!(v["v"], 1, "every document is versioned");
    v
}

const AB: &str = r#"{"letters":["a","b"],"order":[["a","b"]]}"#;
const A_STAR: &str = r#"{"alphabet":{"letters":["a","b"],"order":[["a","b"]]},"states":1,"initial":[0],"final":[0],"transitions":[[0,"a",0]]}"#;
const RIGHT_MOVER: &str = r#"{"gamma":["0"],"states":{"Q1":["q1"],"Q2":["q2"],"Q3":["q3"]},
  "delta":[["q1","0","q2","0","R"],["q2","0","q3","0","R"],["q3","0","q1","0","R"]]}"#;
const BOUNCE: &str = r#"{"gamma":["0","1"],"states":["p","q","r"],
  "delta":[["p","0","q","1","R"],["q","0","r","1","L"],["q","1","r","1","L"],["r","1","p","1","R"]]}"#;

#[test]
fn check_monotone_verdicts() {
    let f = Fixture::new();
    let astar = f.file("astar.json", A_STAR);
    let out = posfo(&[&"check-monotone", &"--nfa", &astar]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not monotone"));

    let alph = f.file("ab.json", AB);
    let re = f.file("abstar.re", "(concat (star any) (lit b) (star any))");
    let out = posfo(&[&"check-monotone", &"--regex", &re, &"--alphabet", &alph]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).trim(), "monotone");

    let out = posfo(&[&"--json", &"check-monotone", &"--nfa", &astar]);
    let v = json(&out);
    assert_eq!(v["monotone"], false);
    assert_eq!(v["accepted"], serde_json::json!(["a"]));
}

#[test]
fn closure_output_round_trips_and_is_monotone() {
    let f = Fixture::new();
    let astar = f.file("astar.json", A_STAR);
    let closed = f.path("closed.json");
    assert_eq!(code(&posfo(&[&"closure", &"--nfa", &astar, &"--out", &closed])), 0);
    let spec: NfaSpec = serde_json::from_str(&std::fs::read_to_string(&closed).unwrap()).unwrap();
    assert_eq!(spec.v, Some(1));
    assert_eq!(code(&posfo(&[&"check-monotone", &"--nfa", &closed])), 0);

    let out = posfo(&[&"--json", &"canonical", &"--nfa", &closed]);
    let v = json(&out);
    let back: NfaSpec = serde_json::from_value(v).unwrap();
    assert!(back.build().unwrap().equivalent(&spec.build().unwrap()).unwrap());
}

#[test]
fn monoid_commands() {
    let f = Fixture::new();
    let alph = f.file("ab.json", r#"{"letters":["a","b"]}"#);
    let even = f.file("even.re", "(star (concat (lit a) (lit a)))");
    let out = posfo(&[&"aperiodic", &"--regex", &even, &"--alphabet", &alph]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("not aperiodic"));
    let out = posfo(&[&"eggbox", &"--regex", &even, &"--alphabet", &alph]);
    assert_eq!(code(&out), 0);
    assert!(!stdout(&out).is_empty());
}

#[test]
fn eval_single_letter_word() {
    let f = Fixture::new();
    let formula = f.file("f.txt", "exists x. exists y. x<=y & a(x) & b(y)");
    let word = f.file("w.json", r#"["{a,b}"]"#);
    let out = posfo(&[&"eval", &"--formula", &formula, &"--word", &word]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "true");
    let word = f.file("w2.json", r#"["{b}", "{a}"]"#);
    assert_eq!(code(&posfo(&[&"eval", &"--formula", &formula, &"--word", &word])), 1);
}

#[test]
fn malformed_inputs_name_path_and_position() {
    let f = Fixture::new();
    let bad = f.file("bad.json", "{\"states\": 1,\n  \"initial\": [0,]\n}");
    let out = posfo(&[&"check-monotone", &"--nfa", &bad]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:2:"), "{err}");

    let formula = f.file("f.txt", "exists x.\n  a(x) &");
    let word = f.file("w.json", r#"["{a}"]"#);
    let out = posfo(&[&"eval", &"--formula", &formula, &"--word", &word]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("f.txt:2:"));

    assert_eq!(code(&posfo(&[&"no-such-command"])), 2);
    assert_eq!(code(&posfo(&[&"check-monotone"])), 2);
}

#[test]
fn game_solve_exit_code_and_formula() {
    let f = Fixture::new();
    let u = f.file("u.json", r#"["{a}","{b}","{c}","{a}","{b}","{c}"]"#);
    let v = f.file("v.json", r#"["{a,b}","{b,c}","{c,a}","{a,b}","{b,c}"]"#);
    let out = posfo(&[&"game", &"solve", &"--u", &u, &"--v", &v, &"--rounds", &"1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let u = f.file("u2.json", r#"["{a}"]"#);
    let v = f.file("v2.json", r#"["{b}"]"#);
    let phi = f.path("phi.txt");
    let out = posfo(&[&"game", &"solve", &"--u", &u, &"--v", &v, &"--rounds", &"1", &"--formula-out", &phi]);
    assert_eq!(code(&out), 1);
    let formula = std::fs::read_to_string(&phi).unwrap();
    let out = posfo(&[&"eval", &"--formula", &phi, &"--word", &u]);
    assert_eq!(code(&out), 0, "{formula} should hold on u");
    assert_eq!(code(&posfo(&[&"eval", &"--formula", &phi, &"--word", &v])), 1);

    let out = posfo(&[&"game", &"solve", &"--u", &u, &"--v", &v, &"--rounds", &"9"]);
    assert_eq!(code(&out), 2, "rounds beyond the cap are a usage error");
}

#[test]
fn k_suite_report() {
    let f = Fixture::new();
    let dfa = f.path("k.json");
    let out = posfo(&[&"--json", &"k-suite", &"--max-n", &"3", &"--phi-check-len", &"4", &"--emit-dfa", &dfa]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["monotone"], true);
    assert_eq!(v["aperiodic"], true);
    for row in v["lemma44"].as_array().unwrap() {
        assert_eq!(row["duplicator_wins"], true);
        assert_eq!(row["strategy_verified"], true);
    }
    assert_eq!(v["phi_check"]["mismatches"], 0);
    assert_eq!(code(&posfo(&[&"check-monotone", &"--nfa", &dfa])), 0);
}

#[test]
fn graph_commands() {
    let f = Fixture::new();
    let word = f.file("w.json", r#"["{a}","{b,c}","{c}"]"#);
    for undirected in [false, true] {
        let g = f.path("g.json");
        let mut args: Vec<&dyn AsRef<std::ffi::OsStr>> = vec![&"graph", &"encode", &"--word", &word, &"--out", &g];
        if undirected {
            args.push(&"--undirected");
        }
        assert_eq!(code(&posfo(&args)), 0);
        assert_eq!(code(&posfo(&[&"graph", &"check", &"--graph", &g])), 0);
        let out = posfo(&[&"--json", &"graph", &"decode", &"--graph", &g]);
        assert_eq!(json(&out)["word"], serde_json::json!(["{a}", "{b,c}", "{c}"]));

        let mut spec: GraphSpec = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
        let (x, y) = spec.edges[0];
        spec.edges.retain(|&e| e != (x, y) && e != (y, x));
        let broken = f.file("broken.json", &serde_json::to_string(&spec).unwrap());
        assert_eq!(code(&posfo(&[&"graph", &"check", &"--graph", &broken])), 1);
    }

    let u = f.file("u.json", r#"["{a}","{b}","{c}","{a}","{b}","{c}"]"#);
    let v = f.file("v.json", r#"["{a,b}","{b,c}","{c,a}","{a,b}","{b,c}"]"#);
    let (gu, gv) = (f.path("gu.json"), f.path("gv.json"));
    posfo(&[&"graph", &"encode", &"--word", &u, &"--out", &gu]);
    posfo(&[&"graph", &"encode", &"--word", &v, &"--out", &gv]);
    let out = posfo(&[&"graph", &"game", &"--left", &gu, &"--right", &gv, &"--rounds", &"1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn mortality_commands() {
    let f = Fixture::new();
    let mover = f.file("mover.json", RIGHT_MOVER);
    let lm = f.path("lm.json");
    assert_eq!(code(&posfo(&[&"mortality", &"build", &"--tm", &mover, &"--out", &lm])), 0);
    assert_eq!(code(&posfo(&[&"check-monotone", &"--nfa", &lm])), 0);

    let out = posfo(&[&"--json", &"mortality", &"witness", &"--tm", &mover, &"--n", &"1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let words = &v["words"];
    let (u, w) = (f.file("u.json", &words["u"].to_string()), f.file("v.json", &words["v"].to_string()));
    let out = posfo(&[&"mortality", &"analyze", &"--tm", &mover, &"--word", &u]);
    assert_eq!(code(&out), 0, "u is in L_M");
    let out = posfo(&[&"--json", &"mortality", &"analyze", &"--tm", &mover, &"--word", &w]);
    assert_eq!(code(&out), 1, "v is not in L_M");
    let report = json(&out);
    assert!(report["ambiguous"].as_array().unwrap().iter().any(|a| a["coherent"] == false));

    let bounce = f.file("bounce.json", BOUNCE);
    let out = posfo(&[&"--json", &"mortality", &"witness", &"--tm", &bounce]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["conclusive"], true);
}

#[test]
fn int_game_commands() {
    let out = posfo(&[&"int-game", &"solve", &"--n", &"1", &"--u", &"1 1 0", &"--v", &"(1,0) (1,0)", &"--rounds", &"4"]);
    assert_eq!(code(&out), 1, "Spoiler wins: {}", stdout(&out));
    assert!(stdout(&out).contains("Spoiler wins"));

    let out = posfo(&[&"--json", &"int-game", &"sweep", &"--n", &"1", &"--max-len", &"4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["arenas"].as_u64().unwrap() > 0);
    assert!(v["failures"].as_array().unwrap().is_empty());

    let out = posfo(&[&"int-game", &"solve", &"--n", &"1", &"--u", &"1 x", &"--v", &"(1,0)", &"--rounds", &"1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn help_mentions_every_command() {
    let out = posfo(&[&"--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for cmd in ["check-monotone", "closure", "canonical", "aperiodic", "eggbox", "eval", "game", "k-suite", "graph", "mortality", "int-game", "serve"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
}
