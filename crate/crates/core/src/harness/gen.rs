//! Type-directed generation of well-typed, well-resourced terms.
//!
//! Types are simple (non-dependent) so that contexts never need shifting;
//! grades are drawn at random and every candidate is filtered through the
//! checker and the usage engine before it is handed out.

use crate::config::{Config, ModeStructure};
use crate::grades::{Grade, UsageCtx};
use crate::syntax::{self as s, Strength, Term};
use crate::typecheck::check_term;
use crate::usage::{check_usage, infer_usage};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Nat,
    Unit(Strength),
    Pi(Grade, Grade, Box<Ty>, Box<Ty>),
    Sigma(Strength, Grade, Grade, Box<Ty>, Box<Ty>),
}

impl Ty {
    /// Closed, so the codomain needs no shifting under its binder.
    pub fn to_term(&self) -> Term {
        match self {
            Ty::Nat => Term::Nat,
            Ty::Unit(k) => Term::Unit(*k),
            Ty::Pi(p, q, a, b) => s::pi(*p, *q, a.to_term(), b.to_term()),
            Ty::Sigma(k, p, q, a, b) => s::sigma(*k, *p, *q, a.to_term(), b.to_term()),
        }
    }
}

/// A generated term with its context (outermost first), type and
/// principal usage context.
#[derive(Clone, Debug)]
pub struct Sample {
    pub ctx: Vec<Term>,
    pub term: Term,
    pub ty: Term,
    pub usage: UsageCtx,
}

#[derive(Clone)]
struct Var {
    ty: Ty,
    relevant: bool,
}

pub struct Gen<'a> {
    cfg: &'a Config,
    rng: ChaCha8Rng,
    pub max_depth: usize,
    pub max_numeral: u64,
    pub max_attempts: usize,
    bottom: Grade,
}

impl<'a> Gen<'a> {
    pub fn new(cfg: &'a Config, seed: u64) -> Gen<'a> {
        let m = cfg.m();
        let bottom = m.elements().fold(m.zero(), |a, b| m.meet(a, b));
        Gen { cfg, rng: ChaCha8Rng::seed_from_u64(seed), max_depth: 4, max_numeral: 3, max_attempts: 10_000, bottom }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn moded(&self) -> bool {
        self.cfg.modes == ModeStructure::Moded
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Biased towards the least grade, which every binder check accepts.
    pub fn grade(&mut self) -> Grade {
        let m = self.cfg.m();
        match self.rng.gen_range(0..10) {
            0..=3 => self.bottom,
            4..=5 => m.zero(),
            6 => m.one(),
            _ => *m.elements().collect::<Vec<_>>().choose(&mut self.rng).unwrap(),
        }
    }

    fn sigma_grade(&mut self) -> Grade {
        if self.moded() {
            self.grade()
        } else {
            self.cfg.m().one()
        }
    }

    fn strength(&mut self) -> Strength {
        if self.chance(0.5) {
            Strength::Strong
        } else {
            Strength::Weak
        }
    }

    pub fn ty(&mut self, depth: usize) -> Ty {
        let roll = if depth == 0 { self.rng.gen_range(0..6) } else { self.rng.gen_range(0..10) };
        match roll {
            0..=4 => Ty::Nat,
            5 => Ty::Unit(self.strength()),
            6..=7 => {
                let (p, q) = (self.grade(), self.grade());
                Ty::Pi(p, q, Box::new(self.ty(depth - 1)), Box::new(self.ty(depth - 1)))
            }
            _ => {
                let (k, p, q) = (self.strength(), self.sigma_grade(), self.grade());
                Ty::Sigma(k, p, q, Box::new(self.ty(depth - 1)), Box::new(self.ty(depth - 1)))
            }
        }
    }

    /// Types that are inhabited and harmless as erased hypotheses.
    fn hyp_ty(&mut self) -> Ty {
        match self.rng.gen_range(0..5) {
            0..=2 => Ty::Nat,
            3 => Ty::Unit(Strength::Weak),
            _ => {
                let (p, q) = (self.sigma_grade(), self.grade());
                Ty::Sigma(Strength::Weak, p, q, Box::new(Ty::Nat), Box::new(Ty::Nat))
            }
        }
    }

    fn vars_of(&self, scope: &[Var], ty: &Ty, erased_pos: bool) -> Vec<usize> {
        let n = scope.len();
        (0..n).filter(|&k| scope[k].ty == *ty && (erased_pos || scope[k].relevant)).map(|k| n - 1 - k).collect()
    }

    /// Wraps introduction forms that end up in inferring positions.
    fn head(&mut self, scope: &[Var], ty: &Ty, depth: usize, erased_pos: bool) -> Term {
        let t = self.term(scope, ty, depth, erased_pos);
        match t {
            Term::Lam { .. } | Term::Pair { .. } => s::ann(t, ty.to_term()),
            _ => t,
        }
    }

    fn term(&mut self, scope: &[Var], ty: &Ty, depth: usize, erased_pos: bool) -> Term {
        let vars = self.vars_of(scope, ty, erased_pos);
        if !vars.is_empty() && self.chance(if depth == 0 { 0.6 } else { 0.25 }) {
            return s::var(*vars.choose(&mut self.rng).unwrap());
        }
        if depth > 0 && self.chance(0.4) {
            if let Some(t) = self.elim(scope, ty, depth - 1, erased_pos) {
                return t;
            }
        }
        self.intro(scope, ty, depth, erased_pos)
    }

    fn intro(&mut self, scope: &[Var], ty: &Ty, depth: usize, erased_pos: bool) -> Term {
        let d = depth.saturating_sub(1);
        match ty {
            Ty::Nat => {
                if depth > 0 && self.chance(0.3) {
                    s::suc(self.term(scope, ty, d, erased_pos))
                } else {
                    s::numeral(self.rng.gen_range(0..=self.max_numeral))
                }
            }
            Ty::Unit(k) => Term::Star(*k),
            Ty::Pi(p, _, a, b) => {
                let mut inner = scope.to_vec();
                inner.push(Var { ty: (**a).clone(), relevant: *p != self.cfg.m().zero() });
                s::lam(*p, self.term(&inner, b, d, erased_pos))
            }
            Ty::Sigma(k, p, _, a, b) => {
                let fst_erased = erased_pos || (self.moded() && *p == self.cfg.m().zero());
                let x = self.term(scope, a, d, fst_erased);
                let y = self.term(scope, b, d, erased_pos);
                s::pair(*k, *p, x, y)
            }
        }
    }

    fn elim(&mut self, scope: &[Var], ty: &Ty, d: usize, erased_pos: bool) -> Option<Term> {
        let m = self.cfg.m();
        let r = self.cfg.restrictions.clone();
        match self.rng.gen_range(0..7) {
            0 | 1 => {
                let (p, q) = (self.grade(), self.grade());
                let a = self.ty(1);
                let fty = Ty::Pi(p, q, Box::new(a.clone()), Box::new(ty.clone()));
                let f = self.head(scope, &fty, d, erased_pos);
                let arg = self.term(scope, &a, d, erased_pos || p == m.zero());
                Some(s::app(p, f, arg))
            }
            2 => {
                let (p, q) = (self.sigma_grade(), self.grade());
                let other = self.ty(1);
                let first = self.chance(0.5);
                let (a, b) = if first { (ty.clone(), other) } else { (other, ty.clone()) };
                let sty = Ty::Sigma(Strength::Strong, p, q, Box::new(a), Box::new(b));
                let pair_erased = erased_pos || (first && self.moded() && p == m.zero());
                let t = self.head(scope, &sty, d, pair_erased);
                Some(if first { s::fst(p, t) } else { s::snd(p, t) })
            }
            3 => {
                let rr = self.grade();
                if !r.prodrec_ok(rr) {
                    return None;
                }
                let (p, q, q2) = (self.sigma_grade(), self.grade(), self.grade());
                let (a, b) = (self.ty(1), self.ty(1));
                let sty = Ty::Sigma(Strength::Weak, p, q2, Box::new(a.clone()), Box::new(b.clone()));
                let t = self.head(scope, &sty, d, erased_pos || rr == m.zero());
                let mut inner = scope.to_vec();
                let rel = rr != m.zero();
                inner.push(Var { ty: a, relevant: rel && p != m.zero() });
                inner.push(Var { ty: b, relevant: rel });
                let u = self.term(&inner, ty, d, erased_pos);
                Some(s::prodrec(rr, p, q, ty.to_term(), t, u))
            }
            4 | 5 => {
                let (p, q, rr) = (self.grade(), self.grade(), self.grade());
                let z = self.term(scope, ty, d, erased_pos);
                let mut inner = scope.to_vec();
                inner.push(Var { ty: Ty::Nat, relevant: p != m.zero() });
                inner.push(Var { ty: ty.clone(), relevant: rr != m.zero() });
                let sc = self.term(&inner, ty, d, erased_pos);
                let n = self.term(scope, &Ty::Nat, d, erased_pos);
                Some(s::natrec(p, q, rr, ty.to_term(), z, sc, n))
            }
            _ => {
                let (p, q) = (self.grade(), self.grade());
                if !r.unitrec_ok(p) {
                    return None;
                }
                let t = self.term(scope, &Ty::Unit(Strength::Weak), d, erased_pos || p == m.zero());
                let u = self.term(scope, ty, d, erased_pos);
                Some(s::unitrec(p, q, ty.to_term(), t, u))
            }
        }
    }

    fn accept(&self, ctx: &[Term], t: &Term, ty: &Term) -> Option<UsageCtx> {
        check_term(self.cfg, ctx, t, ty).ok()?;
        infer_usage(self.cfg, t, ctx.len()).ok()
    }

    /// A closed program of type ℕ.
    pub fn closed_nat(&mut self) -> Option<Sample> {
        self.open_nat(0)
    }

    /// A ℕ-program in a context of `n` hypotheses, all of grade 0.
    pub fn open_nat(&mut self, n: usize) -> Option<Sample> {
        for _ in 0..self.max_attempts {
            let scope: Vec<Var> = (0..n).map(|_| Var { ty: self.hyp_ty(), relevant: false }).collect();
            let depth = self.rng.gen_range(1..=self.max_depth);
            let t = self.term(&scope, &Ty::Nat, depth, false);
            let ctx: Vec<Term> = scope.iter().map(|v| v.ty.to_term()).collect();
            if let Some(usage) = self.accept(&ctx, &t, &Term::Nat) {
                let zeros = UsageCtx::zeros(self.cfg.m(), n);
                if check_usage(self.cfg, &zeros, &t).is_ok() {
                    return Some(Sample { ctx, term: t, ty: Term::Nat, usage });
                }
            }
        }
        None
    }

    /// A term of a random type in a random context with mixed relevance.
    pub fn any(&mut self) -> Option<Sample> {
        for _ in 0..self.max_attempts {
            let n = self.rng.gen_range(0..=3);
            let scope: Vec<Var> = (0..n)
                .map(|_| {
                    let ty = self.ty(1);
                    Var { ty, relevant: self.chance(0.7) }
                })
                .collect();
            let ty = self.ty(2);
            let depth = self.rng.gen_range(1..=self.max_depth);
            let t = self.term(&scope, &ty, depth, false);
            let ctx: Vec<Term> = scope.iter().map(|v| v.ty.to_term()).collect();
            let ty = ty.to_term();
            if let Some(usage) = self.accept(&ctx, &t, &ty) {
                return Some(Sample { ctx, term: t, ty, usage });
            }
        }
        None
    }

    /// A closed numeral-valued program to plug in for a hypothesis.
    pub fn closed_inhabitant(&mut self, ty: &Term) -> Term {
        match ty {
            Term::Unit(k) => Term::Star(*k),
            Term::Sigma { k, p, fst, snd, .. } => {
                s::pair(*k, *p, self.closed_inhabitant(fst), self.closed_inhabitant(snd))
            }
            _ => {
                if self.chance(0.5) {
                    if let Some(s) = self.closed_nat() {
                        return s.term;
                    }
                }
                s::numeral(self.rng.gen_range(0..=5))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grades::Modality;

    #[test]
    fn generates_closed_programs() {
        let cfg = Config::new(Modality::linear());
        let mut g = Gen::new(&cfg, 7);
        for _ in 0..20 {
            let s = g.closed_nat().expect("generator found a program");
            assert!(s.usage.is_empty());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = Config::new(Modality::erasure());
        let a: Vec<Term> = {
            let mut g = Gen::new(&cfg, 3);
            (0..5).map(|_| g.any().unwrap().term).collect()
        };
        let b: Vec<Term> = {
            let mut g = Gen::new(&cfg, 3);
            (0..5).map(|_| g.any().unwrap().term).collect()
        };
        assert_eq!(a, b);
    }
}
