//! End-to-end tests of the `gtt` binary. JSON outputs are compared against
//! files in `tests/golden`; set `GTT_UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn example(name: &str) -> String {
    root().join("examples").join(name).to_string_lossy().into_owned()
}

fn fixture(name: &str) -> String {
    root().join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn gtt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtt")).args(args).env_remove("GTT_FUEL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Absolute paths would make goldens machine-specific.
fn normalize(s: &str) -> String {
    s.replace(&root().to_string_lossy().into_owned(), "<root>")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let o = gtt(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}\n{}{}", stdout(&o), stderr(&o));
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    assert!(got.get("command").is_some() && got.get("ok").is_some(), "schema: {got}");
    let text = normalize(&serde_json::to_string_pretty(&got).unwrap()) + "\n";
    let path: PathBuf = root().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("GTT_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "golden mismatch for {name}");
}

#[test]
fn json_goldens() {
    let (id, plus, bad) = (example("id.gtt"), example("plus.gtt"), fixture("bad.gtt"));
    golden("check_id", &["check", &id, "--format", "json"], 0);
    golden("check_bad", &["check", &bad, "--modality", "linear", "--format", "json"], 1);
    golden("usage_plus_linear", &["usage", &plus, "plus", "--modality", "linear", "--format", "json"], 0);
    golden("extract_idnz", &["extract", &id, "idNZ", "--emit", "json"], 0);
    golden("extract_idnz_strict", &["extract", &id, "idNZ", "--strict", "--format", "json"], 0);
    golden("eval_plus23", &["eval", &plus, "plus23", "--format", "json"], 0);
    golden("run_plus23", &["run", &plus, "plus23", "--modality", "linear", "--format", "json"], 0);
    golden("run_timeout", &["run", &plus, "plus23", "--fuel", "3", "--format", "json"], 1);
    golden("laws_erasure", &["laws", "--format", "json"], 0);
    golden("suite_counterexample", &["suite", "counterexample", "--format", "json"], 0);
}

#[test]
fn text_outputs() {
    let (id, plus) = (example("id.gtt"), example("plus.gtt"));
    let o = gtt(&["check", &id, "--modality", "erasure"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("ok ")), "{}", stdout(&o));

    let o = gtt(&["run", &plus, "plus23", "--modality", "linear"]);
    assert_eq!(stdout(&o), "source=5 target(cbn)=5 target(cbv)=5 AGREE\n");

    for (flags, want) in [
        (&["--modality", "linear"][..], "[k↦1, n↦1]\n"),
        (&["--modality", "linear", "--nr", "bad"][..], "[k↦w, n↦w]\n"),
        (&["--modality", "erasure"][..], "[k↦w, n↦w]\n"),
    ] {
        let mut args = vec!["usage", plus.as_str(), "plus"];
        args.extend_from_slice(flags);
        assert_eq!(stdout(&gtt(&args)), want, "{flags:?}");
    }

    assert_eq!(stdout(&gtt(&["extract", &id, "idNZ"])), "(\\x0. x0) 0\n");
    assert_eq!(stdout(&gtt(&["extract", &id, "idNZ", "--strict"])), "(\\x0. \\x1. x1) ! 0\n");
    assert_eq!(stdout(&gtt(&["eval", &plus, "plus23"])), "5\n");
}

#[test]
fn errors_carry_spans_and_exit_codes() {
    let bad = fixture("bad.gtt");
    let o = gtt(&["check", &bad, "--modality", "linear"]);
    assert_eq!(o.status.code(), Some(1));
    let err = normalize(&stderr(&o));
    assert!(err.contains("<root>/tests/fixtures/bad.gtt:3:"), "{err}");

    let o = gtt(&["check", &fixture("syntax.gtt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("syntax.gtt:2:"), "{}", stderr(&o));

    // configuration problems are usage errors
    for args in [
        &["check", &bad, "--modality", "nope"][..],
        &["check", &bad, "--modality", "erasure", "--nr", "bad"][..],
        &["check", &bad, "--modality", "trivial", "--modes", "moded"][..],
        &["check", &bad, "--lattice", "x.lat"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(gtt(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(gtt(&["usage", &example("plus.gtt"), "missing"]).status.code(), Some(1));
}

#[test]
fn fuel_comes_from_the_environment() {
    let plus = example("plus.gtt");
    let o = Command::new(env!("CARGO_BIN_EXE_gtt")).args(["eval", &plus, "plus23"]).env("GTT_FUEL", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "timeout\n");
    // never AGREE when a side times out
    let o = gtt(&["run", &plus, "plus23", "--fuel", "3"]);
    assert!(stdout(&o).ends_with("DISAGREE\n"), "{}", stdout(&o));
}

#[test]
fn pragmas_set_defaults_and_flags_override() {
    let f = fixture("linear.gtt");
    assert_eq!(stdout(&gtt(&["usage", &f, "plus"])), "[k↦1, n↦1]\n");
    assert_eq!(stdout(&gtt(&["usage", &f, "plus", "--modality", "erasure"])), "[k↦w, n↦w]\n");
}

#[test]
fn parallel_checking_matches_sequential() {
    let f = fixture("many.gtt");
    let a = gtt(&["check", &f, "--format", "json"]);
    let b = gtt(&["check", &f, "--format", "json", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn lattice_files() {
    let f = fixture("lmh.lat");
    let o = gtt(&["laws", "--modality", "lattice", "--lattice", &f]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let o = gtt(&["suite", "noninterference"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&f).exists());
}
