//! Acceptance gate: one PASS/FAIL line per criterion, then a single
//! assertion that all of them hold. Run with `--nocapture` to see the table.

use gtt::config::{Config, ModeStructure, Strictness};
use gtt::extract::{erase, read_numeral, t_app, t_lam, Target, TargetNumeral};
use gtt::grades::{check_division_laws, check_laws, enumerate_nr, nr_unique_check, well_behaved_zero, Modality};
use gtt::harness::{self, Report, SuiteOptions};
use gtt::reduce::Fuel;
use std::path::PathBuf;

// Pinned sizes and tolerances. Grade arithmetic is exact table lookup, so
// every law check has zero tolerance.
const MIN_TERMS: usize = 1000;
const CONTEXTS_PER_TERM: usize = 200;
const MIN_STEPS: usize = 500;
const MIN_BETA: usize = 200;
const FUEL: u64 = 1_000_000;
const MIN_NI_SAMPLES: usize = 50;
const NR_GUARD: usize = 8;
const SEED: u64 = 0;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn expect(&mut self, what: &str, ok: bool) {
        if !ok {
            self.ok = false;
            self.notes.push(what.to_string());
        }
    }

    fn report(&mut self, r: &Report) {
        for c in r.failures() {
            self.ok = false;
            self.notes.push(format!("{}/{}: {}", c.suite, c.case, c.witness.clone().unwrap_or_default()));
        }
    }

    fn stat_at_least(&mut self, r: &Report, key: &str, min: usize) {
        let got = r.stats.get(key).copied().unwrap_or(0);
        self.expect(&format!("{}: {key}={got} < {min}", r.suite), got as usize >= min);
    }
}

fn opts() -> SuiteOptions {
    SuiteOptions {
        seed: SEED,
        principality_terms: MIN_TERMS,
        contexts_per_term: CONTEXTS_PER_TERM,
        preservation_steps: MIN_STEPS,
        beta_instances: MIN_BETA,
        noninterference_samples: MIN_NI_SAMPLES,
        fuel: FUEL,
        ..SuiteOptions::default()
    }
}

fn example(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gtt::cli::run(std::iter::once("gtt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap().trim_end().to_string())
}

fn suite(id: &str, cfg: &Config) -> Report {
    harness::run_suite(id, cfg, &opts()).expect("known suite")
}

fn instances() -> Vec<(Modality, bool)> {
    vec![
        (Modality::erasure(), true),
        (Modality::affine(), true),
        (Modality::linear(), true),
        (Modality::linear_or_affine(), true),
        (Modality::trivial(), false),
        (Modality::lmh(), true),
    ]
}

fn modality_laws() -> Outcome {
    let mut o = Outcome::new();
    for (m, wbz) in instances() {
        let laws = check_laws(&m);
        o.expect(&format!("{} laws:\n{}", m.name(), laws.render()), laws.all_hold());
        let z = well_behaved_zero(&m);
        o.expect(&format!("{} well-behaved zero should be {wbz}", m.name()), z.all_hold() == wbz);
    }
    o
}

fn nr_uniqueness() -> Outcome {
    let mut o = Outcome::new();
    o.expect("erasure nr unique", nr_unique_check(&Modality::erasure(), NR_GUARD) == Ok(true));
    let tables = enumerate_nr(&Modality::linear(), 2, NR_GUARD).map(|e| e.tables(2).len()).unwrap_or(0);
    o.expect(&format!("linear: {tables} lawful nr tables"), tables >= 2);
    o
}

fn worked_examples() -> Outcome {
    let mut o = Outcome::new();
    let (id, plus) = (example("id.gtt"), example("plus.gtt"));
    let (code, out) = cli(&["check", &id, "--modality", "erasure"]);
    o.expect(&format!("check id: {out}"), code == 0);
    let (_, out) = cli(&["usage", &id, "id", "--modality", "erasure"]);
    o.expect(&format!("usage id: {out}"), out == "[A↦0, x↦w]");

    // erase(id ℕ zero): (λx. x) zero and ((λy. λx. x) ↯) zero
    let m = Modality::erasure();
    let file = gtt::frontend::parse(&std::fs::read_to_string(&id).unwrap()).unwrap();
    let t = gtt::frontend::resolve(&file, "idNZ", &m).unwrap().term();
    let ns = erase(&m, Strictness::NonStrict, ModeStructure::Plain, &t);
    let st = erase(&m, Strictness::Strict, ModeStructure::Plain, &t);
    let want_ns = t_app(t_lam(Target::Var(0)), Target::Zero);
    let want_st = t_app(t_app(t_lam(t_lam(Target::Var(0))), Target::Undefined), Target::Zero);
    o.expect(&format!("non-strict extraction {}", ns.pretty()), ns == want_ns);
    o.expect(&format!("strict extraction {}", st.pretty()), st == want_st);
    for (s, x) in [(Strictness::NonStrict, &ns), (Strictness::Strict, &st)] {
        let v = read_numeral(x, s, &mut Fuel(FUEL));
        o.expect(&format!("{s:?} evaluation {v:?}"), matches!(v, TargetNumeral::Value(0)));
    }

    for (flags, want) in [
        (&["--modality", "linear"][..], "[k↦1, n↦1]"),
        (&["--modality", "linear", "--nr", "bad"][..], "[k↦w, n↦w]"),
        (&["--modality", "erasure"][..], "[k↦w, n↦w]"),
    ] {
        let mut args = vec!["usage", plus.as_str(), "plus"];
        args.extend_from_slice(flags);
        let (_, out) = cli(&args);
        o.expect(&format!("usage plus {flags:?}: {out}"), out == want);
    }
    let (_, out) = cli(&["run", &plus, "plus23", "--modality", "linear"]);
    o.expect(&format!("run plus23: {out}"), out == "source=5 target(cbn)=5 target(cbv)=5 AGREE");
    o
}

fn principality() -> Outcome {
    let mut o = Outcome::new();
    for m in [Modality::erasure(), Modality::linear(), Modality::affine()] {
        let r = suite("principality", &Config::new(m));
        o.report(&r);
        o.stat_at_least(&r, "terms", MIN_TERMS);
        o.stat_at_least(&r, "contexts", MIN_TERMS * CONTEXTS_PER_TERM);
    }
    o
}

fn substitution_and_reduction() -> Outcome {
    let mut o = Outcome::new();
    for m in [Modality::erasure(), Modality::linear()] {
        let cfg = Config::new(m);
        let r = suite("preservation", &cfg);
        o.report(&r);
        o.stat_at_least(&r, "steps", MIN_STEPS);
        let r = suite("substitution", &cfg);
        o.report(&r);
        o.stat_at_least(&r, "beta-instances", MIN_BETA);
    }
    o
}

fn erasure_soundness() -> Outcome {
    let mut o = Outcome::new();
    for m in [Modality::erasure(), Modality::linear(), Modality::affine()] {
        for strict in [false, true] {
            let mut cfg = Config::new(m.clone());
            if strict {
                cfg.strictness = Strictness::Strict;
            }
            o.report(&suite("soundness", &cfg));
        }
    }
    o
}

fn counterexample() -> Outcome {
    let mut o = Outcome::new();
    let r = suite("counterexample", &Config::new(Modality::erasure()));
    o.report(&r);
    for case in ["rejected-without-erased-matches", "accepted-with-erased-matches", "source-stuck", "extraction-evaluates-to-0"] {
        o.expect(&format!("{case} missing"), r.get(case).is_some());
    }
    o
}

fn division_and_noninterference() -> Outcome {
    let mut o = Outcome::new();
    let chain = Modality::chain(&["a", "b", "c", "d"]).unwrap();
    for m in [Modality::erasure(), Modality::lmh(), chain] {
        let rep = check_division_laws(&m);
        o.expect(&format!("{} division laws:\n{}", m.name(), rep.render()), rep.all_hold());
    }
    let r = suite("noninterference", &Config::new(Modality::lmh()));
    o.report(&r);
    o.stat_at_least(&r, "samples", MIN_NI_SAMPLES);
    o
}

fn moded() -> Outcome {
    let mut o = Outcome::new();
    for m in [Modality::erasure(), Modality::linear()] {
        let cfg = Config::new(m).moded();
        o.report(&suite("moded", &cfg));
        o.report(&suite("moded-soundness", &cfg));
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("modality laws", modality_laws),
        ("nr uniqueness", nr_uniqueness),
        ("worked examples", worked_examples),
        ("principality and decidability", principality),
        ("substitution and subject reduction", substitution_and_reduction),
        ("erasure soundness", erasure_soundness),
        ("erased-match counterexample", counterexample),
        ("division and non-interference", division_and_noninterference),
        ("moded system", moded),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} {}. {name}", if o.ok { "PASS" } else { "FAIL" }, i + 1);
        for n in &o.notes {
            println!("     {n}");
        }
        if !o.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
