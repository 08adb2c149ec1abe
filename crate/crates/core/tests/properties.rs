//! Property tests over the public API. Random terms come from two sources:
//! an untyped, scope-correct builder for the syntactic properties and the
//! harness's type-directed generator for the semantic ones.

use gtt::config::{Config, Strictness};
use gtt::extract::erase;
use gtt::frontend::parse_term;
use gtt::grades::{Grade, Modality, SubstMatrix, UsageCtx};
use gtt::harness::gen::Gen;
use gtt::harness::{run_suite, SuiteOptions};
use gtt::reduce::{whnf_step, Step};
use gtt::syntax::{self as s, pretty, Strength, Subst, Term, Wk};
use gtt::typecheck::Checker;
use gtt::usage::{check_usage, infer_usage, infer_usage_moded, Mode};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<Modality> {
    vec![
        Modality::erasure(),
        Modality::affine(),
        Modality::linear(),
        Modality::linear_or_affine(),
        Modality::trivial(),
        Modality::lmh(),
    ]
}

fn instance(i: usize) -> Modality {
    let all = instances();
    all[i % all.len()].clone()
}

fn grade(m: &Modality, rng: &mut impl Rng) -> Grade {
    let e: Vec<Grade> = m.elements().collect();
    *e.choose(rng).unwrap()
}

fn ctx(m: &Modality, n: usize, rng: &mut impl Rng) -> UsageCtx {
    UsageCtx((0..n).map(|_| grade(m, rng)).collect())
}

/// An arbitrary raw term with free variables below `n`.
fn raw(m: &Modality, rng: &mut ChaCha8Rng, n: usize, depth: usize) -> Term {
    let g = |rng: &mut ChaCha8Rng| grade(m, rng);
    let k = |rng: &mut ChaCha8Rng| if rng.gen() { Strength::Weak } else { Strength::Strong };
    if depth == 0 {
        return match rng.gen_range(0..7) {
            0 if n > 0 => s::var(rng.gen_range(0..n)),
            1 => Term::U,
            2 => Term::Nat,
            3 => Term::Empty,
            4 => Term::Unit(k(rng)),
            5 => Term::Star(k(rng)),
            _ => Term::Zero,
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..16) {
        0 => s::pi(g(rng), g(rng), raw(m, rng, n, d), raw(m, rng, n + 1, d)),
        1 => {
            let kk = k(rng);
            s::sigma(kk, g(rng), g(rng), raw(m, rng, n, d), raw(m, rng, n + 1, d))
        }
        2 => s::lam(g(rng), raw(m, rng, n + 1, d)),
        3 => s::app(g(rng), raw(m, rng, n, d), raw(m, rng, n, d)),
        4 => {
            let kk = k(rng);
            s::pair(kk, g(rng), raw(m, rng, n, d), raw(m, rng, n, d))
        }
        5 => s::fst(g(rng), raw(m, rng, n, d)),
        6 => s::snd(g(rng), raw(m, rng, n, d)),
        7 => s::prodrec(g(rng), g(rng), g(rng), raw(m, rng, n + 1, d), raw(m, rng, n, d), raw(m, rng, n + 2, d)),
        8 => s::suc(raw(m, rng, n, d)),
        9 => s::natrec(
            g(rng),
            g(rng),
            g(rng),
            raw(m, rng, n + 1, d),
            raw(m, rng, n, d),
            raw(m, rng, n + 2, d),
            raw(m, rng, n, d),
        ),
        10 => s::emptyrec(g(rng), raw(m, rng, n, d), raw(m, rng, n, d)),
        11 => s::unitrec(g(rng), g(rng), raw(m, rng, n + 1, d), raw(m, rng, n, d), raw(m, rng, n, d)),
        12 => s::ann(raw(m, rng, n, d), raw(m, rng, n, d)),
        13 => s::numeral(rng.gen_range(0..4)),
        _ => raw(m, rng, n, 0),
    }
}

fn raw_wk(rng: &mut ChaCha8Rng, len: usize) -> Wk {
    (0..len).fold(Wk::Id, |w, _| if rng.gen() { w.step() } else { w.lift() })
}

fn raw_subst(m: &Modality, rng: &mut ChaCha8Rng, target: usize) -> Subst<Term> {
    let k = rng.gen_range(0..4);
    Subst { terms: (0..k).map(|_| raw(m, rng, target, 2)).collect(), shift: rng.gen_range(0..3) }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("h{i}")).collect()
}

fn erasure_cfg() -> Config {
    Config::new(Modality::erasure())
}

fn gen_cfgs() -> Vec<Config> {
    vec![erasure_cfg(), Config::new(Modality::linear()), Config::new(Modality::affine())]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn addition_and_multiplication_are_monotone(i in 0usize..6, seed: u64) {
        let m = instance(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q, r) = (grade(&m, &mut rng), grade(&m, &mut rng), grade(&m, &mut rng));
        if m.le(p, q) {
            prop_assert!(m.le(m.add(p, r), m.add(q, r)));
            prop_assert!(m.le(m.add(r, p), m.add(r, q)));
            prop_assert!(m.le(m.mul(p, r), m.mul(q, r)));
            prop_assert!(m.le(m.mul(r, p), m.mul(r, q)));
        }
    }

    #[test]
    fn matrix_application_is_linear(i in 0usize..6, rows in 0usize..5, cols in 0usize..5, seed: u64) {
        let m = instance(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = SubstMatrix { rows: (0..rows).map(|_| ctx(&m, cols, &mut rng)).collect(), cols };
        let (g, d, p) = (ctx(&m, rows, &mut rng), ctx(&m, rows, &mut rng), grade(&m, &mut rng));
        prop_assert_eq!(psi.apply(&m, &g.add(&m, &d)), psi.apply(&m, &g).add(&m, &psi.apply(&m, &d)));
        prop_assert_eq!(psi.apply(&m, &g.scale(&m, p)), psi.apply(&m, &g).scale(&m, p));
    }

    #[test]
    fn substitution_after_weakening_composes(seed: u64, n in 0usize..4) {
        let m = Modality::linear();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = raw(&m, &mut rng, n, 4);
        let rho = raw_wk(&mut rng, n + 2);
        let sigma = raw_subst(&m, &mut rng, 3);
        prop_assert_eq!(sigma.apply(&rho.apply(&t)), sigma.compose_wk(&rho).apply(&t));
        let tau = raw_subst(&m, &mut rng, 3);
        prop_assert_eq!(sigma.apply(&tau.apply(&t)), sigma.compose(&tau).apply(&t));
    }

    #[test]
    fn renamings_compose(seed: u64, n in 0usize..4) {
        let m = Modality::erasure();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = raw(&m, &mut rng, n, 4);
        let (a, b) = (raw_wk(&mut rng, n + 1), raw_wk(&mut rng, n + 1));
        prop_assert_eq!(a.apply(&b.apply(&t)), a.compose(&b).apply(&t));
    }

    #[test]
    fn weakening_respects_scope(seed: u64, n in 0usize..4, k in 0usize..3) {
        let m = Modality::affine();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = raw(&m, &mut rng, n, 4);
        prop_assert!(t.scoped_in(n));
        prop_assert!(Subst::<Term>::wk(k).apply(&t).scoped_in(n + k));
        let sigma = Subst { terms: (0..n).map(|_| raw(&m, &mut rng, k, 2)).collect(), shift: 0 };
        prop_assert!(sigma.apply(&t).scoped_in(k));
    }

    #[test]
    fn printing_then_parsing_is_identity(i in 0usize..6, seed: u64, n in 0usize..3) {
        let m = instance(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = raw(&m, &mut rng, n, 5);
        let scope = names(n);
        let text = pretty(&m, &t, &scope);
        let back = parse_term(&text, &m, &scope);
        prop_assert_eq!(back.as_ref().ok(), Some(&t), "printed: {}", text);
    }

    #[test]
    fn variable_use_is_never_zero(i in 0usize..6, seed: u64, n in 1usize..5) {
        let m = instance(i);
        if !gtt::grades::well_behaved_zero(&m).all_hold() {
            return Ok(());
        }
        let cfg = Config::new(m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ctx(&m, n, &mut rng);
        let x = rng.gen_range(0..n);
        if check_usage(&cfg, &g, &s::var(x)).is_ok() {
            prop_assert_ne!(g.get(x), m.zero());
        }
    }

    #[test]
    fn agreement_needs_three_equal_numerals(a in 0u64..3, b in 0u64..3, c in 0u64..3, stuck in 0u8..4) {
        use gtt::extract::TargetNumeral as T;
        use gtt::reduce::Numeral as N;
        let mut r = gtt::harness::RunResult { source: N::Value(a), cbn: T::Value(b), cbv: T::Value(c) };
        match stuck {
            1 => r.source = N::Timeout,
            2 => r.cbn = T::Timeout,
            3 => r.cbv = T::Stuck(gtt::extract::Target::Undefined),
            _ => {}
        }
        let agrees = stuck == 0 && a == b && b == c;
        prop_assert_eq!(r.agree(), agrees);
        prop_assert_eq!(r.render().ends_with(" AGREE"), agrees);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn checking_is_idempotent_and_inference_principal(c in 0usize..3, seed: u64) {
        let cfg = &gen_cfgs()[c];
        let mut gen = Gen::new(cfg, seed);
        let Some(x) = gen.any() else { return Ok(()) };
        let mut a = Checker::with_context(cfg, x.ctx.clone());
        let mut b = Checker::with_context(cfg, x.ctx.clone());
        prop_assert_eq!(a.check(&x.term, &x.ty), Ok(()));
        prop_assert_eq!(a.check(&x.term, &x.ty), b.check(&x.term, &x.ty));
        let inferred = infer_usage(cfg, &x.term, x.ctx.len()).unwrap();
        prop_assert_eq!(&inferred, &x.usage);
        prop_assert!(check_usage(cfg, &inferred, &x.term).is_ok());
    }

    #[test]
    fn conversion_is_reflexive_and_symmetric(c in 0usize..3, seed: u64) {
        let cfg = &gen_cfgs()[c];
        let mut gen = Gen::new(cfg, seed);
        let Some(x) = gen.any() else { return Ok(()) };
        let mut ch = Checker::with_context(cfg, x.ctx.clone());
        prop_assert_eq!(ch.conv_type(&x.ty, &x.ty), Ok(true));
        prop_assert_eq!(ch.conv_term(&x.term, &x.term, &x.ty), Ok(true));
        if let Step::Stepped(u) = whnf_step(&x.term) {
            let there = ch.conv_term(&x.term, &u, &x.ty);
            let back = ch.conv_term(&u, &x.term, &x.ty);
            prop_assert_eq!(&there, &Ok(true));
            prop_assert_eq!(there, back);
        }
    }

    #[test]
    fn steps_are_deterministic_and_preserve_types_and_usage(c in 0usize..3, seed: u64) {
        let cfg = &gen_cfgs()[c];
        let mut gen = Gen::new(cfg, seed);
        let Some(x) = gen.any() else { return Ok(()) };
        let mut t = x.term.clone();
        for _ in 0..20 {
            let Step::Stepped(u) = whnf_step(&t) else { break };
            prop_assert_eq!(Step::Stepped(u.clone()), whnf_step(&t));
            let mut ch = Checker::with_context(cfg, x.ctx.clone());
            prop_assert_eq!(ch.check(&u, &x.ty), Ok(()), "{:?}", u);
            if let Ok(a) = ch.infer(&u) {
                prop_assert_eq!(ch.conv_type(&a, &x.ty), Ok(true));
            }
            prop_assert!(check_usage(cfg, &x.usage, &u).is_ok());
            t = u;
        }
    }

    #[test]
    fn erased_variables_do_not_survive_extraction(c in 0usize..3, seed: u64, n in 1usize..4) {
        let cfg = gen_cfgs()[c].clone().no_erased_matches();
        let mut gen = Gen::new(&cfg, seed);
        let Some(x) = gen.open_nat(n) else { return Ok(()) };
        for st in [Strictness::NonStrict, Strictness::Strict] {
            let e = erase(cfg.m(), st, cfg.modes, &x.term);
            for i in 0..n {
                prop_assert!(!e.mentions(i));
            }
        }
    }

    #[test]
    fn moded_and_plain_usage_agree_on_unit_pairs(c in 0usize..3, seed: u64) {
        let cfg = &gen_cfgs()[c];
        let mut gen = Gen::new(cfg, seed);
        let Some(x) = gen.any() else { return Ok(()) };
        if !unit_pairs(cfg.m(), &x.term) {
            return Ok(());
        }
        let moded = cfg.clone().moded();
        prop_assert_eq!(infer_usage_moded(&moded, &x.term, x.ctx.len(), Mode::One).ok(), Some(x.usage));
    }
}

/// The fragment where the two systems coincide literally: pair-like grades
/// are 1 and there is no `star&`. Other grades are free, since a zero
/// argument at mode `1ᵐ` costs `0·γ = 0` either way and motives never reach
/// the inferred context.
fn unit_pairs(m: &Modality, t: &Term) -> bool {
    let one = m.one();
    let here = match t {
        Term::Sigma { p, .. } | Term::Pair { p, .. } | Term::Fst { p, .. } | Term::Snd { p, .. } => *p == one,
        Term::Prodrec { p, .. } => *p == one,
        Term::Star(Strength::Strong) => false,
        _ => true,
    };
    let mut ok = here;
    t.for_each_child(&mut |_, c, _| ok = ok && unit_pairs(m, c));
    ok
}

#[test]
fn reports_are_reproducible() {
    let opts = SuiteOptions {
        principality_terms: 50,
        contexts_per_term: 20,
        preservation_steps: 50,
        beta_instances: 20,
        closed_programs: 20,
        open_programs: 10,
        noninterference_samples: 10,
        ..SuiteOptions::default()
    };
    for cfg in gen_cfgs() {
        for id in ["principality", "preservation", "substitution", "soundness", "noninterference"] {
            let a = run_suite(id, &cfg, &opts).unwrap();
            let b = run_suite(id, &cfg, &opts).unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{id}");
        }
    }
}
