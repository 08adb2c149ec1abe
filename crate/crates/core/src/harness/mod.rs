//! Executable evidence: seeded suites that exercise the algebra, the usage
//! engines, reduction and extraction, each producing a [`Report`].

pub mod corpus;
pub mod gen;
pub mod oracle;

use crate::config::{Config, ModeStructure, Strictness};
use crate::extract::{self, erase, TargetNumeral};
use crate::grades::{
    check_division_laws, check_laws, enumerate_nr, nr_unique_check, well_behaved_zero, Modality, UsageCtx,
    NR_ENUM_GUARD,
};
use crate::reduce::{read_numeral, reduction_trace, Fuel, Numeral};
use crate::syntax::{pretty, Strength, Subst, Term};
use crate::typecheck::check_term;
use crate::usage::{check_usage, check_usage_moded, infer_subst_matrix, infer_usage, infer_usage_moded, Mode};
use gen::{Gen, Sample};
use oracle::Sampler;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Recorded, not asserted.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub suite: String,
    pub case: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
    pub stats: BTreeMap<String, u64>,
}

/// Failing witnesses kept per property; the count is always exact.
const MAX_WITNESSES: usize = 10;

impl Report {
    fn new(suite: &str, seed: u64) -> Report {
        Report { suite: suite.into(), seed, cases: Vec::new(), stats: BTreeMap::new() }
    }

    fn push(&mut self, case: impl Into<String>, verdict: Verdict, witness: Option<String>) {
        self.cases.push(Case { suite: self.suite.clone(), case: case.into(), verdict, witness });
    }

    fn check(&mut self, case: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        let w = if ok { None } else { Some(witness()) };
        self.push(case, if ok { Verdict::Pass } else { Verdict::Fail }, w);
    }

    fn stat(&mut self, key: &str, v: u64) {
        *self.stats.entry(key.into()).or_default() += v;
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn get(&self, case: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.case == case)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "INFO",
            };
            let _ = write!(out, "{v} {}/{}", c.suite, c.case);
            if let Some(w) = &c.witness {
                let _ = write!(out, "  -- {w}");
            }
            out.push('\n');
        }
        if !self.stats.is_empty() {
            let stats: Vec<String> = self.stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{}: {}", self.suite, stats.join(" "));
        }
        out
    }
}

/// Sizes of the randomised suites.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub principality_terms: usize,
    pub contexts_per_term: usize,
    pub preservation_steps: usize,
    pub beta_instances: usize,
    pub closed_programs: usize,
    pub open_programs: usize,
    pub noninterference_samples: usize,
    pub fuel: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            principality_terms: 1000,
            contexts_per_term: 200,
            preservation_steps: 500,
            beta_instances: 200,
            closed_programs: 300,
            open_programs: 150,
            noninterference_samples: 60,
            fuel: 1_000_000,
        }
    }
}

pub const SUITES: &[&str] = &[
    "laws",
    "division",
    "principality",
    "preservation",
    "substitution",
    "soundness",
    "moded-soundness",
    "counterexample",
    "noninterference",
    "moded",
];

pub fn run_suite(id: &str, cfg: &Config, opts: &SuiteOptions) -> Option<Report> {
    Some(match id {
        "laws" => run_law_suite(cfg),
        "division" => run_division_suite(cfg),
        "principality" => run_principality_suite(cfg, opts),
        "preservation" => run_preservation_suite(cfg, opts),
        "substitution" => run_substitution_suite(cfg, opts),
        "soundness" => run_soundness_suite(cfg, opts),
        "moded-soundness" => run_soundness_suite(&cfg.clone().moded(), opts),
        "counterexample" => run_counterexample_suite(cfg, opts),
        "noninterference" => run_noninterference_suite(opts),
        "moded" => run_moded_suite(cfg),
        _ => return None,
    })
}

fn standard_instances() -> Vec<(Modality, bool)> {
    // (instance, expected well-behaved zero)
    vec![
        (Modality::erasure(), true),
        (Modality::affine(), true),
        (Modality::linear(), true),
        (Modality::linear_or_affine(), true),
        (Modality::trivial(), false),
        (Modality::lmh(), true),
    ]
}

// ---------------------------------------------------------------------------
// Algebra

pub fn run_law_suite(cfg: &Config) -> Report {
    let mut r = Report::new("laws", cfg.seed);
    let mut instances = standard_instances();
    instances.push((Modality::linear_bad(), true));
    if !instances.iter().any(|(m, _)| m.name() == cfg.m().name()) {
        instances.push((cfg.m().clone(), well_behaved_zero(cfg.m()).all_hold()));
    }
    for (m, wbz) in &instances {
        let laws = check_laws(m);
        r.check(format!("{}/laws", m.name()), laws.all_hold(), || laws.render());
        let z = well_behaved_zero(m);
        r.check(format!("{}/well-behaved-zero={wbz}", m.name()), z.all_hold() == *wbz, || z.render());
    }
    match nr_unique_check(&Modality::erasure(), NR_ENUM_GUARD) {
        Ok(u) => r.check("erasure/nr-unique", u, || "another lawful nr exists".into()),
        Err(e) => r.push("erasure/nr-unique", Verdict::Fail, Some(e.to_string())),
    }
    match enumerate_nr(&Modality::linear(), 2, NR_ENUM_GUARD) {
        Ok(en) => {
            let n = en.tables(2).len();
            r.check("linear/nr-not-unique", n >= 2, || format!("found {n} lawful nr tables"));
        }
        Err(e) => r.push("linear/nr-not-unique", Verdict::Fail, Some(e.to_string())),
    }
    r
}

pub fn run_division_suite(cfg: &Config) -> Report {
    let mut r = Report::new("division", cfg.seed);
    let mut instances: Vec<Modality> = standard_instances().into_iter().map(|(m, _)| m).collect();
    if !instances.iter().any(|m| m.name() == cfg.m().name()) {
        instances.push(cfg.m().clone());
    }
    for m in &instances {
        let rep = check_division_laws(m);
        // the laws are derived for bounded distributive lattices
        if m.is_lattice() {
            r.check(format!("{}/division-laws", m.name()), rep.all_hold(), || rep.render());
        } else {
            let held: Vec<&str> = rep.results.iter().filter(|l| l.holds).map(|l| l.law).collect();
            r.push(
                format!("{}/division-laws", m.name()),
                Verdict::Info,
                Some(format!("not a lattice; laws holding: {}", held.join(", "))),
            );
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Usage

fn show(cfg: &Config, s: &Sample) -> String {
    let names: Vec<String> = (0..s.ctx.len()).map(|i| format!("h{i}")).collect();
    format!("{} : {}", pretty(cfg.m(), &s.term, &names), pretty(cfg.m(), &s.ty, &[]))
}

const WEAKEN_SCHEDULE: [f64; 4] = [0.25, 0.1, 0.02, 0.0];

pub fn run_principality_suite(cfg: &Config, opts: &SuiteOptions) -> Report {
    let mut r = Report::new("principality", opts.seed);
    let m = cfg.m();
    let mut gen = Gen::new(cfg, opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let (mut self_fail, mut dom_fail, mut acc_fail) = (Vec::new(), Vec::new(), Vec::new());
    let (mut terms, mut contexts, mut short) = (0u64, 0u64, 0u64);
    for _ in 0..opts.principality_terms {
        let Some(s) = gen.any() else { break };
        terms += 1;
        let n = s.ctx.len();
        if check_usage(cfg, &s.usage, &s.term).is_err() {
            self_fail.push(show(cfg, &s));
        }
        let mut sampler = Sampler::new(cfg, &mut rng);
        let mut got = 0;
        // deep terms rarely survive heavy weakening; anneal towards plain derivations
        for k in 0..200 * opts.contexts_per_term {
            if got == opts.contexts_per_term {
                break;
            }
            sampler.weaken = WEAKEN_SCHEDULE[(k / (10 * opts.contexts_per_term)).min(WEAKEN_SCHEDULE.len() - 1)];
            let Some(g) = sampler.sample(&s.term, n, Mode::One) else { continue };
            got += 1;
            if !g.le(m, &s.usage) {
                dom_fail.push(format!("{} ⊢ {} not below {}", g.render(m, None), show(cfg, &s), s.usage.render(m, None)));
            }
            if check_usage(cfg, &g, &s.term).is_err() {
                acc_fail.push(format!("{} rejected for {}", g.render(m, None), show(cfg, &s)));
            }
        }
        contexts += got as u64;
        if got < opts.contexts_per_term {
            short += 1;
        }
    }
    r.stat("terms", terms);
    r.stat("contexts", contexts);
    r.stat("terms-short-of-contexts", short);
    r.check("enough-terms", terms as usize >= opts.principality_terms, || format!("only {terms} terms generated"));
    r.check("enough-contexts-per-term", short == 0, || format!("{short} terms got fewer than {}", opts.contexts_per_term));
    for (name, fails) in [("inferred-checks", self_fail), ("dominates-derivable", dom_fail), ("checker-accepts-derivable", acc_fail)] {
        let k = fails.len();
        r.check(name, k == 0, || format!("{k} violations, e.g. {}", fails[..k.min(MAX_WITNESSES)].join(" | ")));
    }
    r
}

pub fn run_preservation_suite(cfg: &Config, opts: &SuiteOptions) -> Report {
    let mut r = Report::new("preservation", opts.seed);
    let mut gen = Gen::new(cfg, opts.seed);
    let (mut steps, mut ty_fail, mut use_fail) = (0usize, Vec::new(), Vec::new());
    let mut tries = 0;
    while steps < opts.preservation_steps && tries < 50 * opts.preservation_steps {
        tries += 1;
        let s = match tries % 3 {
            0 => gen.closed_nat(),
            1 => {
                let n = gen.rng().gen_range(1..=2);
                gen.open_nat(n)
            }
            _ => gen.any(),
        };
        let Some(s) = s else { continue };
        let trace = reduction_trace(&s.term, &mut Fuel(opts.fuel), 40);
        for t in trace.iter().skip(1) {
            steps += 1;
            if check_term(cfg, &s.ctx, t, &s.ty).is_err() {
                ty_fail.push(format!("{} ~> {}", show(cfg, &s), pretty(cfg.m(), t, &[])));
            }
            if check_usage(cfg, &s.usage, t).is_err() {
                use_fail.push(format!("{} ~> {}", show(cfg, &s), pretty(cfg.m(), t, &[])));
            }
        }
    }
    r.stat("steps", steps as u64);
    r.check("enough-steps", steps >= opts.preservation_steps, || format!("only {steps} steps"));
    for (name, fails) in [("typing-preserved", ty_fail), ("usage-preserved", use_fail)] {
        let k = fails.len();
        r.check(name, k == 0, || format!("{k} violations, e.g. {}", fails[..k.min(MAX_WITNESSES)].join(" | ")));
    }
    r
}

/// β-redexes `(λ[p] b) @[p] a` (possibly under an ascription) with the size
/// of their local scope.
fn beta_instances(t: &Term, n: usize, out: &mut Vec<(Term, Term, usize)>) {
    if let Term::App { p, fun, arg } = t {
        let lam: &Term = match &**fun {
            Term::Ann { term, .. } => term,
            f => f,
        };
        if let Term::Lam { p: p2, body } = lam {
            if p == p2 {
                out.push(((**body).clone(), (**arg).clone(), n));
            }
        }
    }
    t.for_each_child(&mut |_, c, k| beta_instances(c, n + k, out));
}

pub fn run_substitution_suite(cfg: &Config, opts: &SuiteOptions) -> Report {
    let mut r = Report::new("substitution", opts.seed);
    let m = cfg.m();
    let mut gen = Gen::new(cfg, opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xbe7a);
    let (mut count, mut checked, mut fails) = (0usize, 0usize, Vec::new());
    let mut tries = 0;
    while count < opts.beta_instances && tries < 100 * opts.beta_instances {
        tries += 1;
        let Some(s) = (if tries % 2 == 0 { gen.any() } else { gen.closed_nat() }) else { continue };
        let mut found = Vec::new();
        beta_instances(&s.term, s.ctx.len(), &mut found);
        for (body, arg, n) in found {
            let sigma = Subst::single(arg.clone());
            let (Ok(psi), Ok(gamma)) = (infer_subst_matrix(cfg, &sigma, n + 1, n), infer_usage(cfg, &body, n + 1))
            else {
                continue;
            };
            count += 1;
            let result = sigma.apply(&body);
            // the principal context and a few derivable ones below it
            let mut sampler = Sampler::new(cfg, &mut rng);
            let mut gammas = vec![gamma];
            gammas.extend((0..4).filter_map(|_| sampler.sample(&body, n + 1, Mode::One)));
            for g in gammas {
                checked += 1;
                let gp = psi.apply(m, &g);
                if check_usage(cfg, &gp, &result).is_err() {
                    fails.push(format!(
                        "{} ▸ {} with [{}] gives {}",
                        g.render(m, None),
                        pretty(m, &body, &[]),
                        pretty(m, &arg, &[]),
                        gp.render(m, None)
                    ));
                }
            }
        }
    }
    r.stat("beta-instances", count as u64);
    r.stat("contexts-checked", checked as u64);
    r.check("enough-instances", count >= opts.beta_instances, || format!("only {count} instances"));
    let k = fails.len();
    r.check("substituted-context-checks", k == 0, || {
        format!("{k} violations, e.g. {}", fails[..k.min(MAX_WITNESSES)].join(" | "))
    });
    r
}

// ---------------------------------------------------------------------------
// Extraction

/// The three observations of a ℕ-program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub source: Numeral,
    pub cbn: TargetNumeral,
    pub cbv: TargetNumeral,
}

impl RunResult {
    pub fn agree(&self) -> bool {
        match (&self.source, &self.cbn, &self.cbv) {
            (Numeral::Value(a), TargetNumeral::Value(b), TargetNumeral::Value(c)) => a == b && b == c,
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        let src = match &self.source {
            Numeral::Value(n) => n.to_string(),
            Numeral::Stuck(_) => "stuck".into(),
            Numeral::Timeout => "timeout".into(),
        };
        let tgt = |t: &TargetNumeral| match t {
            TargetNumeral::Value(n) => n.to_string(),
            TargetNumeral::Stuck(_) => "stuck".into(),
            TargetNumeral::Timeout => "timeout".into(),
        };
        format!(
            "source={src} target(cbn)={} target(cbv)={} {}",
            tgt(&self.cbn),
            tgt(&self.cbv),
            if self.agree() { "AGREE" } else { "DISAGREE" }
        )
    }
}

/// Evaluates a program in the source and, after non-strict and strict
/// extraction, under call-by-name and call-by-value.
pub fn run_program(cfg: &Config, t: &Term, fuel: u64) -> RunResult {
    let m = cfg.m();
    let source = read_numeral(t, &mut Fuel(fuel));
    let ns = erase(m, Strictness::NonStrict, cfg.modes, t);
    let st = erase(m, Strictness::Strict, cfg.modes, t);
    RunResult {
        source,
        cbn: extract::read_numeral(&ns, Strictness::NonStrict, &mut Fuel(fuel)),
        cbv: extract::read_numeral(&st, Strictness::Strict, &mut Fuel(fuel)),
    }
}

pub fn run_soundness_suite(cfg: &Config, opts: &SuiteOptions) -> Report {
    let name = if cfg.modes == ModeStructure::Moded { "moded-soundness" } else { "soundness" };
    let mut r = Report::new(name, opts.seed);
    if !well_behaved_zero(cfg.m()).all_hold() {
        r.push("precondition", Verdict::Info, Some(format!("{} has no well-behaved zero; skipped", cfg.m().name())));
        return r;
    }
    let m = cfg.m();
    let mut disagree = Vec::new();
    let mut erased_occurs = Vec::new();
    let mut count = 0u64;
    let mut record = |label: String, res: RunResult| {
        count += 1;
        if !res.agree() {
            disagree.push(format!("{label}: {}", res.render()));
        }
    };
    // named programs, where the instance can spell them
    if let Ok(progs) = corpus::nat_programs(m) {
        for (d, want) in progs {
            if check_term(cfg, &[], &d.term, &d.ty).is_err() || check_usage(cfg, &UsageCtx(vec![]), &d.term).is_err() {
                r.push(format!("named/{}", d.name), Verdict::Info, Some("not accepted under this configuration".into()));
                continue;
            }
            let res = run_program(cfg, &d.term, opts.fuel);
            let ok = res.agree() && res.source == Numeral::Value(want);
            r.check(format!("named/{}", d.name), ok, || res.render());
            record(d.name.clone(), res);
        }
    }
    let mut gen = Gen::new(cfg, opts.seed);
    let mut closed = 0;
    for _ in 0..opts.closed_programs {
        let Some(s) = gen.closed_nat() else { break };
        closed += 1;
        let res = run_program(cfg, &s.term, opts.fuel);
        record(show(cfg, &s), res);
    }
    // open programs: all hypotheses erased, erased matches off
    let ocfg = cfg.clone().no_erased_matches();
    let mut ogen = Gen::new(&ocfg, opts.seed.wrapping_add(1));
    let mut open = 0;
    for i in 0..opts.open_programs {
        let Some(s) = ogen.open_nat(1 + i % 3) else { break };
        open += 1;
        let ns = erase(m, Strictness::NonStrict, cfg.modes, &s.term);
        let st = erase(m, Strictness::Strict, cfg.modes, &s.term);
        // erasure completeness: 0-graded variables are gone
        for v in 0..s.ctx.len() {
            if ns.mentions(v) || st.mentions(v) {
                erased_occurs.push(format!("#{v} in extraction of {}", show(cfg, &s)));
            }
        }
        let res = run_program(&ocfg, &s.term, opts.fuel);
        record(show(cfg, &s), res);
    }
    r.stat("closed-programs", closed as u64);
    r.stat("open-programs", open as u64);
    r.stat("programs", count);
    r.check("enough-programs", closed >= opts.closed_programs && open >= opts.open_programs, || {
        format!("closed={closed} open={open}")
    });
    let k = disagree.len();
    r.check("source=cbn=cbv", k == 0, || format!("{k} disagreements, e.g. {}", disagree[..k.min(MAX_WITNESSES)].join(" | ")));
    let k = erased_occurs.len();
    r.check("erased-variables-absent", k == 0, || erased_occurs[..k.min(MAX_WITNESSES)].join(" | "));
    r
}

pub fn run_counterexample_suite(cfg: &Config, opts: &SuiteOptions) -> Report {
    let mut r = Report::new("counterexample", opts.seed);
    let base = Config { restrictions: crate::config::Restrictions::allow_all(cfg.m()), ..cfg.clone() };
    let (ctx, t) = corpus::erased_match(&base);
    let m = base.m();
    let zeros = UsageCtx::zeros(m, 1);
    let shown = pretty(m, &t, &["p".into()]);
    let strict_cfg = base.clone().no_erased_matches();
    r.check("rejected-without-erased-matches", check_usage(&strict_cfg, &zeros, &t).is_err(), || {
        format!("{shown} accepted")
    });
    let typed = check_term(&base, &ctx, &t, &Term::Nat);
    let used = check_usage(&base, &zeros, &t);
    r.check("accepted-with-erased-matches", typed.is_ok() && used.is_ok(), || format!("{typed:?} {used:?}"));
    let src = read_numeral(&t, &mut Fuel(opts.fuel));
    r.check("source-stuck", matches!(src, Numeral::Stuck(_)), || format!("{src:?}"));
    let res = run_program(&base, &t, opts.fuel);
    let zero = matches!(res.cbn, TargetNumeral::Value(0)) && matches!(res.cbv, TargetNumeral::Value(0));
    r.check("extraction-evaluates-to-0", zero, || res.render());
    r.push(
        "soundness-hypotheses",
        Verdict::Info,
        Some(format!("{} -- expected divergence of hypotheses (erased match in a non-empty context)", res.render())),
    );
    r
}

pub fn run_noninterference_suite(opts: &SuiteOptions) -> Report {
    let mut r = Report::new("noninterference", opts.seed);
    let cfg = Config { seed: opts.seed, ..Config::new(Modality::lmh()).no_erased_matches() };
    let mut gen = Gen::new(&cfg, opts.seed);
    let (mut samples, mut fails) = (0usize, Vec::new());
    for i in 0..opts.noninterference_samples {
        let Some(s) = gen.open_nat(1 + i % 3) else { break };
        let n = s.ctx.len();
        let subst = |gen: &mut Gen| -> Subst<Term> {
            Subst { terms: (0..n).map(|j| gen.closed_inhabitant(&s.ctx[n - 1 - j])).collect(), shift: 0 }
        };
        let (s1, s2) = (subst(&mut gen), subst(&mut gen));
        let a = read_numeral(&s1.apply(&s.term), &mut Fuel(opts.fuel));
        let b = read_numeral(&s2.apply(&s.term), &mut Fuel(opts.fuel));
        samples += 1;
        let ok = matches!((&a, &b), (Numeral::Value(x), Numeral::Value(y)) if x == y);
        if !ok {
            fails.push(format!("{}: {a:?} vs {b:?}", show(&cfg, &s)));
        }
    }
    r.stat("samples", samples as u64);
    r.check("enough-samples", samples >= opts.noninterference_samples, || format!("only {samples}"));
    let k = fails.len();
    r.check("high-inputs-do-not-affect-output", k == 0, || fails[..k.min(MAX_WITNESSES)].join(" | "));
    r
}

/// Mode-specific facts: projections in the erased mode, and the moded
/// erasure cases.
pub fn run_moded_suite(cfg: &Config) -> Report {
    let mut r = Report::new("moded", cfg.seed);
    let base = cfg.clone().moded();
    if base.validate().is_err() {
        r.push("precondition", Verdict::Info, Some(format!("{} has no well-behaved zero; skipped", base.m().name())));
        return r;
    }
    let m = base.m();
    let (z, one) = (m.zero(), m.one());
    use crate::extract::{loop_term, t_app, t_lam, Target};
    use crate::syntax as s;
    let x = s::fst(z, s::var(0));
    let at1 = infer_usage_moded(&base, &x, 1, Mode::One);
    r.check("fst[0]-rejected-in-mode-1", at1.is_err(), || format!("{at1:?}"));
    let at0 = check_usage_moded(&base, &UsageCtx::zeros(m, 1), &x, Mode::Zero);
    r.check("fst[0]-accepted-in-mode-0", at0.is_ok(), || format!("{at0:?}"));
    let er = |t: &Term| erase(m, Strictness::NonStrict, ModeStructure::Moded, t);
    let pair = s::pair(Strength::Strong, z, Term::Zero, s::numeral(1));
    r.check("erase-pair[0]", er(&pair) == er(&s::numeral(1)), || er(&pair).pretty());
    r.check("erase-fst[0]", er(&x) == loop_term(), || er(&x).pretty());
    let y = s::snd(z, s::var(0));
    r.check("erase-snd[0]", er(&y) == Target::Var(0), || er(&y).pretty());
    let w = m.omega().unwrap_or(one);
    let pr = s::prodrec(w, z, z, Term::Nat, s::var(0), s::suc(s::var(0)));
    let want = t_app(t_lam(Target::Suc(Box::new(Target::Var(0)))), Target::Var(0));
    r.check("erase-prodrec[w,p=0]", er(&pr) == want, || er(&pr).pretty());
    let pr1 = s::prodrec(w, z, z, Term::Nat, s::var(0), s::var(1));
    let want1 = t_app(t_lam(loop_term()), Target::Var(0));
    r.check("erase-prodrec[w,p=0]-first-is-loop", er(&pr1) == want1, || er(&pr1).pretty());
    r
}

/// All suites in order.
pub fn run_all(cfg: &Config, opts: &SuiteOptions) -> Vec<Report> {
    SUITES.iter().filter_map(|id| run_suite(id, cfg, opts)).collect()
}
