//! Call-by-name weak-head reduction of source terms, and numeral readback
//! that also reduces under `suc`.

use crate::syntax::{subst1, subst2, Strength, Term};
use serde::Serialize;
use thiserror::Error;

/// Shape of a weak-head normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WhnfKind {
    Lam,
    Pair,
    Zero,
    Suc,
    Star,
    TypeFormer,
    /// An eliminator (or variable) blocked on a variable.
    Neutral,
}

/// Why a term is neither a redex nor a weak-head normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StuckKind {
    /// An eliminator applied to an introduction form of the wrong type.
    BadElimination,
    /// A λ applied with a different grade than it was built with.
    GradeMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Stepped(Term),
    Whnf {
        kind: WhnfKind,
        /// For neutrals: the blocking variable.
        head: Option<usize>,
    },
    Stuck(StuckKind),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("fuel exhausted")]
    Timeout,
    #[error("stuck: {0:?}")]
    Stuck(StuckKind),
}

/// Step budget shared by a whole evaluation.
#[derive(Clone, Copy, Debug)]
pub struct Fuel(pub u64);

impl Fuel {
    pub fn burn(&mut self) -> Result<(), ReduceError> {
        if self.0 == 0 {
            return Err(ReduceError::Timeout);
        }
        self.0 -= 1;
        Ok(())
    }
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

fn whnf_of(kind: WhnfKind) -> Step {
    Step::Whnf { kind, head: None }
}

/// One weak-head step.
pub fn whnf_step(t: &Term) -> Step {
    use Term::*;
    match t {
        U | Nat | Empty | Unit(_) | Pi { .. } | Sigma { .. } => whnf_of(WhnfKind::TypeFormer),
        Lam { .. } => whnf_of(WhnfKind::Lam),
        Pair { .. } => whnf_of(WhnfKind::Pair),
        Zero => whnf_of(WhnfKind::Zero),
        Suc(_) => whnf_of(WhnfKind::Suc),
        Star(_) => whnf_of(WhnfKind::Star),
        Var(i) => Step::Whnf { kind: WhnfKind::Neutral, head: Some(*i) },
        Ann { term, .. } => Step::Stepped((**term).clone()),
        App { p, fun, arg } => match &**fun {
            Lam { p: p2, body } if p2 == p => Step::Stepped(subst1::<Term>(body, arg)),
            Lam { .. } => Step::Stuck(StuckKind::GradeMismatch),
            Ann { term, ty } => match (&**term, &**ty) {
                (Lam { p: p2, body }, Pi { dom, cod, .. }) if p2 == p => {
                    let a = keep(arg, dom);
                    Step::Stepped(keep(&subst1::<Term>(body, &a), &subst1::<Term>(cod, &a)))
                }
                _ => congruence(fun, |f| Term::App { p: *p, fun: Box::new(f), arg: arg.clone() }),
            },
            _ => congruence(fun, |f| Term::App { p: *p, fun: Box::new(f), arg: arg.clone() }),
        },
        Fst { p, pair } => match &**pair {
            Pair { k: Strength::Strong, fst, .. } => Step::Stepped((**fst).clone()),
            Ann { term, ty } => match (&**term, &**ty) {
                (Pair { k: Strength::Strong, fst, .. }, Sigma { fst: a, .. }) => Step::Stepped(keep(fst, a)),
                _ => congruence(pair, |x| Term::Fst { p: *p, pair: Box::new(x) }),
            },
            _ => congruence(pair, |x| Term::Fst { p: *p, pair: Box::new(x) }),
        },
        Snd { p, pair } => match &**pair {
            Pair { k: Strength::Strong, snd, .. } => Step::Stepped((**snd).clone()),
            Ann { term, ty } => match (&**term, &**ty) {
                (Pair { k: Strength::Strong, fst, snd, .. }, Sigma { fst: a, snd: b, .. }) => {
                    let x = keep(fst, a);
                    Step::Stepped(keep(snd, &subst1::<Term>(b, &x)))
                }
                _ => congruence(pair, |x| Term::Snd { p: *p, pair: Box::new(x) }),
            },
            _ => congruence(pair, |x| Term::Snd { p: *p, pair: Box::new(x) }),
        },
        Prodrec { r, p, q, motive, scrut, body } => match &**scrut {
            Pair { k: Strength::Weak, fst, snd, .. } => {
                let out = subst2::<Term>(body, fst, snd);
                Step::Stepped(keep(&out, &subst1::<Term>(motive, scrut)))
            }
            Ann { term, ty } if matches!(&**term, Pair { k: Strength::Weak, .. }) => match (&**term, &**ty) {
                (Pair { fst, snd, .. }, Sigma { fst: a, snd: b, .. }) => {
                    let x = keep(fst, a);
                    let y = keep(snd, &subst1::<Term>(b, &x));
                    Step::Stepped(keep(&subst2::<Term>(body, &x, &y), &subst1::<Term>(motive, scrut)))
                }
                _ => Step::Stepped(Term::Prodrec {
                    r: *r,
                    p: *p,
                    q: *q,
                    motive: motive.clone(),
                    scrut: term.clone(),
                    body: body.clone(),
                }),
            },
            _ => congruence(scrut, |x| Term::Prodrec {
                r: *r,
                p: *p,
                q: *q,
                motive: motive.clone(),
                scrut: Box::new(x),
                body: body.clone(),
            }),
        },
        Natrec { p, q, r, motive, zero, succ, scrut } => match &**scrut {
            Zero => Step::Stepped(keep(zero, &subst1::<Term>(motive, &Zero))),
            Suc(n) => {
                let rec = Term::Natrec {
                    p: *p,
                    q: *q,
                    r: *r,
                    motive: motive.clone(),
                    zero: zero.clone(),
                    succ: succ.clone(),
                    scrut: n.clone(),
                };
                Step::Stepped(keep(&subst2::<Term>(succ, n, &rec), &subst1::<Term>(motive, scrut)))
            }
            _ => congruence(scrut, |x| Term::Natrec {
                p: *p,
                q: *q,
                r: *r,
                motive: motive.clone(),
                zero: zero.clone(),
                succ: succ.clone(),
                scrut: Box::new(x),
            }),
        },
        Emptyrec { p, motive, scrut } => {
            congruence(scrut, |x| Term::Emptyrec { p: *p, motive: motive.clone(), scrut: Box::new(x) })
        }
        Unitrec { p, q, motive, scrut, body } => match &**scrut {
            Star(Strength::Weak) => Step::Stepped(keep(body, &subst1::<Term>(motive, scrut))),
            _ => congruence(scrut, |x| Term::Unitrec {
                p: *p,
                q: *q,
                motive: motive.clone(),
                scrut: Box::new(x),
                body: body.clone(),
            }),
        },
    }
}

/// Reducts keep an ascription when they would otherwise expose a bare
/// introduction form, so they stay inferable wherever the redex was.
fn keep(t: &Term, ty: &Term) -> Term {
    match t {
        Term::Lam { .. } | Term::Pair { .. } => Term::Ann { term: Box::new(t.clone()), ty: Box::new(ty.clone()) },
        _ => t.clone(),
    }
}

/// Steps the principal argument; an introduction form there is ill-typed.
fn congruence(inner: &Term, rebuild: impl FnOnce(Term) -> Term) -> Step {
    match whnf_step(inner) {
        Step::Stepped(x) => Step::Stepped(rebuild(x)),
        Step::Whnf { kind: WhnfKind::Neutral, head } => Step::Whnf { kind: WhnfKind::Neutral, head },
        Step::Whnf { .. } => Step::Stuck(StuckKind::BadElimination),
        Step::Stuck(k) => Step::Stuck(k),
    }
}

/// Reduces to weak-head normal form. Stuck terms are returned as they are;
/// only running out of fuel is an error.
pub fn whnf(t: &Term, fuel: &mut Fuel) -> Result<Term, ReduceError> {
    let mut cur = t.clone();
    loop {
        match whnf_step(&cur) {
            Step::Stepped(next) => {
                fuel.burn()?;
                cur = next;
            }
            _ => return Ok(cur),
        }
    }
}

/// Result of reading a source term back as a numeral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Numeral {
    Value(u64),
    /// Evaluation reached a non-numeral normal form.
    Stuck(Term),
    Timeout,
}

/// Evaluates to a numeral, reducing under `suc` (the suc-extended
/// reduction). Fuel is shared across the whole readback.
pub fn read_numeral(t: &Term, fuel: &mut Fuel) -> Numeral {
    let mut cur = t.clone();
    let mut n = 0u64;
    loop {
        match whnf(&cur, fuel) {
            Err(_) => return Numeral::Timeout,
            Ok(Term::Zero) => return Numeral::Value(n),
            Ok(Term::Suc(inner)) => {
                n += 1;
                cur = *inner;
            }
            Ok(other) => return Numeral::Stuck(other),
        }
    }
}

/// All single steps of the suc-extended reduction, as a list of successive
/// terms: weak-head steps first, then steps under each `suc`.
pub fn reduction_trace(t: &Term, fuel: &mut Fuel, max: usize) -> Vec<Term> {
    let mut out = vec![t.clone()];
    let mut cur = t.clone();
    let mut sucs = 0;
    while out.len() <= max {
        // peel sucs already normalised
        let mut focus = &cur;
        for _ in 0..sucs {
            match focus {
                Term::Suc(x) => focus = x,
                _ => unreachable!(),
            }
        }
        match whnf_step(focus) {
            Step::Stepped(next) => {
                if fuel.burn().is_err() {
                    break;
                }
                cur = rewrap(next, sucs);
                out.push(cur.clone());
            }
            Step::Whnf { kind: WhnfKind::Suc, .. } => sucs += 1,
            _ => break,
        }
    }
    out
}

fn rewrap(t: Term, sucs: usize) -> Term {
    (0..sucs).fold(t, |acc, _| Term::Suc(Box::new(acc)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grades::Grade;
    use crate::syntax::*;

    const W: Grade = Grade(1);

    #[test]
    fn beta() {
        let t = app(W, lam(W, suc(var(0))), Term::Zero);
        assert_eq!(whnf_step(&t), Step::Stepped(suc(Term::Zero)));
    }

    #[test]
    fn natrec_unfolds() {
        let add1 = natrec(Grade(0), Grade(0), W, Term::Nat, numeral(2), suc(var(0)), numeral(3));
        assert_eq!(read_numeral(&add1, &mut Fuel(1000)), Numeral::Value(5));
    }

    #[test]
    fn neutral_reports_head() {
        let t = fst(W, app(W, var(3), Term::Zero));
        assert_eq!(whnf_step(&t), Step::Whnf { kind: WhnfKind::Neutral, head: Some(3) });
    }

    #[test]
    fn ill_formed_redex_is_stuck() {
        assert_eq!(whnf_step(&app(W, Term::Zero, Term::Zero)), Step::Stuck(StuckKind::BadElimination));
        assert_eq!(whnf_step(&app(W, lam(Grade(0), var(0)), Term::Zero)), Step::Stuck(StuckKind::GradeMismatch));
    }

    #[test]
    fn fuel_runs_out() {
        let big = natrec(Grade(0), Grade(0), W, Term::Nat, numeral(0), suc(var(0)), numeral(50));
        assert_eq!(read_numeral(&big, &mut Fuel(5)), Numeral::Timeout);
    }

    #[test]
    fn trace_reduces_under_suc() {
        let t = suc(app(W, lam(W, var(0)), Term::Zero));
        let tr = reduction_trace(&t, &mut Fuel(100), 10);
        assert_eq!(tr.last(), Some(&numeral(1)));
        assert_eq!(tr.len(), 2);
    }
}
