//! Exit-code and file-format contract of the command-line binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lsys-infer"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("lsys-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).expect("create temp dir");
        TempDir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.join(name);
        fs::write(&path, contents).expect("write temp file");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

#[test]
fn infer_exact_success() {
    let dir = TempDir::new("infer-ok");
    let seq = dir.file("t.seq", "a\nab\nabab\n");
    let out = run(&["infer", p(&seq)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("axiom: a"), "{text}");
    assert!(text.contains("a -> ab"), "{text}");
    assert!(text.contains("b -> ab"), "{text}");
}

#[test]
fn infer_exact_infeasible() {
    let dir = TempDir::new("infer-inf");
    let seq = dir.file("t.seq", "aa\nab\n");
    for backend in ["exact", "sat-internal"] {
        let out = run(&["infer", "--backend", backend, p(&seq)]);
        assert_eq!(out.status.code(), Some(1), "backend {backend}");
        assert_eq!(stdout(&out), "INFEASIBLE\n");
    }
}

#[test]
fn infer_qaoa_paths() {
    let dir = TempDir::new("infer-qaoa");
    let seq = dir.file("ok.seq", "ab\nba\n");
    let out = run(&["infer", "--backend", "qaoa", "--p", "3", "--seed", "8", p(&seq)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let bad = dir.file("bad.seq", "aa\nab\n");
    let out = run(&["infer", "--backend", "qaoa", "--seed", "8", p(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).starts_with("UNVERIFIED"));

    // Cap exceeded: resource exit code.
    let out = run(&["infer", "--backend", "qaoa", "--qubit-cap", "4", p(&seq)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn infer_usage_errors() {
    let out = run(&["infer", "/nonexistent/file.seq"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = TempDir::new("infer-usage");
    let seq = dir.file("bad.seq", "a b\nc\n");
    let out = run(&["infer", p(&seq)]);
    assert_eq!(out.status.code(), Some(2));

    // Single-word sequence: no derivation step.
    let seq = dir.file("short.seq", "a\n");
    let out = run(&["infer", p(&seq)]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["infer", "--backend", "bogus", p(&seq)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infer_json_report() {
    let dir = TempDir::new("infer-json");
    let seq = dir.file("t.seq", "ab\nba\n");
    let out = run(&["infer", "--json", p(&seq)]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(parsed["outcome"]["kind"], "system");
    assert_eq!(parsed["stats"]["k"], 2);
    assert_eq!(parsed["backend"], "exact-structured");
}

#[test]
fn export_formats() {
    let dir = TempDir::new("export");
    let seq = dir.file("t.seq", "ab\nba\n");

    let cnf = dir.path("t.cnf");
    let out = run(&["export", "--cnf", p(&seq), "-o", p(&cnf)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&cnf).unwrap();
    assert!(text.contains("p cnf 6 14\n"), "{text}");

    // Byte determinism.
    let cnf2 = dir.path("t2.cnf");
    run(&["export", "--cnf", p(&seq), "-o", p(&cnf2)]);
    assert_eq!(fs::read(&cnf).unwrap(), fs::read(&cnf2).unwrap());

    let single = dir.file("s.seq", "a\na\n");
    let dot = dir.path("s.dot");
    let out = run(&["export", "--dot", p(&single), "-o", p(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.contains("v0 [label=\"(0,1,1,2)\"]"), "{text}");

    let qubo = dir.path("t.qubo.json");
    let out = run(&["export", "--qubo", p(&seq), "-o", p(&qubo)]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&qubo).unwrap()).unwrap();
    assert_eq!(parsed["n"], 6);
    assert_eq!(parsed["rows"][0][0], -1);
    assert_eq!(parsed["lambda"], 2.0);

    let gj = dir.path("t.graph.json");
    let out = run(&["export", "--graph-json", p(&seq), "-o", p(&gj)]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&gj).unwrap()).unwrap();
    assert_eq!(parsed["k"], 2);
    assert_eq!(parsed["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 12);

    // Exactly one format is required.
    let out = run(&["export", p(&seq), "-o", p(&cnf)]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["export", "--dot", "--cnf", p(&seq), "-o", p(&cnf)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_compatibility() {
    let dir = TempDir::new("verify");
    let seq = dir.file("t.seq", "a\nab\nabab\n");
    let good = dir.file("good.sys", "axiom: a\na -> ab\nb -> ab\n");
    let bad = dir.file("bad.sys", "axiom: a\na -> ba\nb -> ab\n");

    let out = run(&["verify", p(&seq), p(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "COMPATIBLE\n");

    let out = run(&["verify", p(&seq), p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "INCOMPATIBLE\n");

    let broken = dir.file("broken.sys", "no axiom here\n");
    let out = run(&["verify", p(&seq), p(&broken)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = TempDir::new("gen");
    let out1 = dir.path("a");
    let out2 = dir.path("b");
    for (prefix, seed) in [(&out1, "7"), (&out2, "7")] {
        let out = run(&["gen", "--alphabet", "2", "--steps", "2", "--seed", seed, "-o", p(prefix)]);
        assert_eq!(out.status.code(), Some(0));
    }
    let seq1 = fs::read(out1.with_extension("seq")).unwrap();
    let seq2 = fs::read(out2.with_extension("seq")).unwrap();
    assert_eq!(seq1, seq2);
    assert_eq!(
        fs::read(out1.with_extension("sys")).unwrap(),
        fs::read(out2.with_extension("sys")).unwrap()
    );

    // The emitted system is compatible with the emitted sequence.
    let out = run(&[
        "verify",
        p(&out1.with_extension("seq")),
        p(&out1.with_extension("sys")),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // And inference on the sequence succeeds.
    let out = run(&["infer", p(&out1.with_extension("seq"))]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decode_models() {
    let dir = TempDir::new("decode");
    let seq = dir.file("t.seq", "ab\nba\n");

    let unsat = dir.file("unsat.model", "s UNSATISFIABLE\n");
    let out = run(&["decode", p(&seq), p(&unsat)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "INFEASIBLE\n");

    // Model picking (0,1,1,2) and (0,2,2,3): variables 2 and 5.
    let model = dir.file("ok.model", "v -1 2 -3 -4 5 -6 0\n");
    let out = run(&["decode", p(&seq), p(&model)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("a -> b"), "{text}");
    assert!(text.contains("b -> a"), "{text}");

    let empty = dir.file("empty.model", "v -1 -2 -3 -4 -5 -6 0\n");
    let out = run(&["decode", p(&seq), p(&empty)]);
    assert_eq!(out.status.code(), Some(2));
}
