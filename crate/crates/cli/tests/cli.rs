use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsilon"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A throwaway system file that removes itself.
struct TempFile(std::path::PathBuf);

impl TempFile {
    fn new(text: &str) -> Self {
        use std::sync::atomic::{AtomicUsize, Ordering};
        static N: AtomicUsize = AtomicUsize::new(0);
        let name = format!(
            "epsilon-cli-{}-{}.ars",
            std::process::id(),
            N.fetch_add(1, Ordering::Relaxed)
        );
        let p = std::env::temp_dir().join(name);
        std::fs::File::create(&p)
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        TempFile(p)
    }

    fn as_str(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

#[test]
fn normalize_single_existential() {
    let o = run(&["normalize", "-e", "exists x. P(x)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "P(eps x. P(x))\nsteps: 1\n");
}

#[test]
fn innermost_trace_has_one_line_per_quantifier() {
    let o = run(&[
        "normalize",
        "-e",
        "exists x. exists y. R(x,y)",
        "--strategy",
        "innermost",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let steps: Vec<&str> = out.lines().filter(|l| l.starts_with("step ")).collect();
    assert_eq!(steps.len(), 2);
    assert!(steps[0].starts_with("step 1: step1 at [0] quantifier exists y → "));
    assert!(out.ends_with("steps: 2\n"));
}

#[test]
fn quantifier_free_input_is_unchanged() {
    let o = run(&["normalize", "-e", "P(c)"]);
    assert_eq!(stdout(&o), "P(c)\nsteps: 0\n");
}

#[test]
fn json_schema() {
    let o = run(&[
        "normalize",
        "-e",
        "exists x. Q & forall y. P(y)",
        "--strategy",
        "parallel",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["start"], "exists x. Q & forall y. P(y)");
    assert_eq!(v["final"], "Q & P(eps y. ~P(y))");
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    for s in steps {
        for key in ["pos", "kind", "q", "binder", "after"] {
            assert!(s.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(v["stats"]["steps"], 1);
    assert_eq!(v["stats"]["quantifiers"], 2);
    assert_eq!(v["stats"]["epsCount"], 1);
    assert_eq!(v["stats"]["epsDepth"], 1);
}

#[test]
fn random_needs_a_seed_and_is_reproducible() {
    assert_eq!(
        run(&["normalize", "-e", "exists x. P(x)", "--strategy", "random"])
            .status
            .code(),
        Some(1)
    );
    let args = [
        "normalize",
        "-e",
        "exists x. forall y. exists z. R(x, z) | r(y)",
        "--strategy",
        "random",
        "--seed",
        "7",
        "--trace",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn parse_error_exits_1() {
    let o = run(&["normalize", "-e", "exists x. P(x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    assert_eq!(run(&["normalize"]).status.code(), Some(1));
}

#[test]
fn blown_fuse_exits_2_with_prefix() {
    let o = run(&[
        "normalize",
        "-e",
        "exists x. exists y. R(x,y)",
        "--strategy",
        "outermost",
        "--fuse",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("formula: exists x. exists y. R(x, y)"));
    assert!(err.contains("step 1: step1 at []"));
}

#[test]
fn confluence_run_is_clean_and_deterministic() {
    let args = [
        "check-confluence",
        "--count",
        "150",
        "--seed",
        "42",
        "--format",
        "json",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a.stdout, run(&seq).stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["summary"]["formulas"], 150);
    assert_eq!(v["summary"]["violating_formulas"], 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 150);
}

#[test]
fn empty_confluence_run() {
    let o = run(&["check-confluence", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations          0"));
}

#[test]
fn violations_exit_3_with_a_minimized_formula() {
    // A one-step fuse makes every formula with two quantifiers a violation.
    let o = run(&[
        "check-confluence",
        "--count",
        "40",
        "--fuse",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = v["counterexample"]["minimized"].as_str().unwrap();
    let quantifiers = m.matches("exists").count() + m.matches("forall").count();
    assert_eq!(quantifiers, 2, "{m}");
}

#[test]
fn ars_check_r1_only_system() {
    let f = TempFile::new("# a chain with a joinable peak\n4\n1 0 1\n1 0 2\n1 1 3\n1 2 3\n");
    let o = run(&["ars-check", f.as_str(), "--source", "0", "--nf", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("holds").count(), 4);
    assert!(out.contains("conclusion (←₄ well-founded): true"));
}

#[test]
fn ars_check_rejects_a_normal_source() {
    let f = TempFile::new("1\n");
    let o = run(&["ars-check", f.as_str(), "--source", "0", "--nf", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not in the domain"));
}

#[test]
fn ars_check_failing_condition_exits_4() {
    let f = TempFile::new("3\n0 0 1\n0 1 0\n1 1 2\n");
    let o = run(&[
        "ars-check",
        f.as_str(),
        "--source",
        "0",
        "--nf",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cond1"], false);
    assert_eq!(v["conclusion_well_founded"], false);
}

#[test]
fn ars_check_bad_file_exits_1() {
    let f = TempFile::new("2\n0 0 5\n");
    assert_eq!(
        run(&["ars-check", f.as_str(), "--source", "0", "--nf", "1"])
            .status
            .code(),
        Some(1)
    );
    let f = TempFile::new("2\n7 0 1\n");
    assert_eq!(
        run(&["ars-check", f.as_str(), "--source", "0", "--nf", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn stats_table() {
    let o = run(&["stats", "--max-n", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    let column = |strategy: &str, key: &str| -> Vec<String> {
        rows.iter()
            .filter(|r| r["strategy"] == strategy)
            .map(|r| r[key].to_string())
            .collect()
    };
    assert_eq!(
        column("innermost", "steps"),
        ["\"0\"", "\"1\"", "\"2\"", "\"3\""]
    );
    assert_eq!(
        column("outermost", "steps"),
        ["\"0\"", "\"1\"", "\"4\"", "\"29\""]
    );
    assert_eq!(column("innermost", "epsDepth"), ["0", "1", "3", "7"]);
}
