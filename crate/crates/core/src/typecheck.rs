//! Bidirectional type checking with weak-head-directed conversion and
//! type-directed η for Π, strong Σ and the strong unit type.

use crate::config::{Config, ModeStructure};
use crate::reduce::{whnf, Fuel, ReduceError};
use crate::syntax::{app, fst, pair, pretty, shift, subst1, subst_top_keep, suc, var, wk1, Strength, Term};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeErrorKind {
    Mismatch,
    NotAFunction,
    NotAPair,
    IllegalProjection,
    Universe,
    Unbound,
    GradeAnnotationMismatch,
    RestrictionViolation,
    NotAType,
    CannotInfer,
    Timeout,
}

/// A type error located by the child-index path from the checked root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<u8>,
    pub message: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

impl std::error::Error for TypeError {}

type TcResult<T> = Result<T, TypeError>;

/// Checker state: the typing context (outermost first), a fuel budget for
/// reductions and the current error path.
pub struct Checker<'a> {
    cfg: &'a Config,
    ctx: Vec<Term>,
    names: Vec<String>,
    fuel: Fuel,
    path: Vec<u8>,
}

impl<'a> Checker<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Checker { cfg, ctx: Vec::new(), names: Vec::new(), fuel: Fuel(cfg.fuel), path: Vec::new() }
    }

    /// Starts from context `Γ` (types listed outermost first, each in the
    /// scope of its predecessors).
    pub fn with_context(cfg: &'a Config, ctx: Vec<Term>) -> Self {
        let names = (0..ctx.len()).map(|i| format!("x{i}")).collect();
        Checker { cfg, ctx, names, fuel: Fuel(cfg.fuel), path: Vec::new() }
    }

    pub fn context(&self) -> &[Term] {
        &self.ctx
    }

    fn err(&self, kind: TypeErrorKind, message: String) -> TypeError {
        TypeError { kind, path: self.path.clone(), message }
    }

    fn show(&self, t: &Term) -> String {
        pretty(self.cfg.m(), t, &self.names)
    }

    fn push(&mut self, ty: Term) {
        self.ctx.push(ty);
        self.names.push(format!("x{}", self.names.len()));
    }

    fn pop(&mut self) {
        self.ctx.pop();
        self.names.pop();
    }

    fn under<R>(&mut self, tys: Vec<Term>, f: impl FnOnce(&mut Self) -> R) -> R {
        let n = tys.len();
        for t in tys {
            self.push(t);
        }
        let r = f(self);
        for _ in 0..n {
            self.pop();
        }
        r
    }

    fn at<R>(&mut self, child: u8, f: impl FnOnce(&mut Self) -> TcResult<R>) -> TcResult<R> {
        self.path.push(child);
        let r = f(self)?;
        self.path.pop();
        Ok(r)
    }

    fn lookup(&self, i: usize) -> Option<Term> {
        let n = self.ctx.len();
        (i < n).then(|| shift::<Term>(&self.ctx[n - 1 - i], i + 1, 0))
    }

    fn whnf(&mut self, t: &Term) -> TcResult<Term> {
        whnf(t, &mut self.fuel).map_err(|e| match e {
            ReduceError::Timeout => self.err(TypeErrorKind::Timeout, "reduction ran out of fuel".into()),
            ReduceError::Stuck(k) => self.err(TypeErrorKind::Mismatch, format!("stuck term ({k:?})")),
        })
    }

    fn plain(&self) -> bool {
        self.cfg.modes == ModeStructure::Plain
    }

    fn check_former(&self, k: Option<Strength>, p: crate::grades::Grade, q: crate::grades::Grade) -> TcResult<()> {
        let m = self.cfg.m();
        let r = &self.cfg.restrictions;
        if !r.pisigma_ok(p, q) {
            return Err(self.err(
                TypeErrorKind::RestrictionViolation,
                format!("Π/Σ grades ({}, {}) are not allowed", m.grade_name(p), m.grade_name(q)),
            ));
        }
        if let Some(k) = k {
            let allowed = match k {
                Strength::Strong => r.strong_sigma,
                Strength::Weak => r.weak_sigma,
            };
            if !allowed {
                return Err(self.err(TypeErrorKind::RestrictionViolation, format!("Σ{} is disabled", k.symbol())));
            }
            self.plain_sigma_grade(p)?;
        }
        Ok(())
    }

    fn plain_sigma_grade(&self, p: crate::grades::Grade) -> TcResult<()> {
        let m = self.cfg.m();
        if self.plain() && p != m.one() {
            return Err(self.err(
                TypeErrorKind::RestrictionViolation,
                format!("Σ grade must be 1 without modes, found {}", m.grade_name(p)),
            ));
        }
        Ok(())
    }

    fn check_unit(&self, k: Strength) -> TcResult<()> {
        let r = &self.cfg.restrictions;
        let ok = match k {
            Strength::Strong => r.strong_unit,
            Strength::Weak => r.weak_unit,
        };
        if ok {
            Ok(())
        } else {
            Err(self.err(TypeErrorKind::RestrictionViolation, format!("Unit{} is disabled", k.symbol())))
        }
    }

    fn grades_match(&self, what: &str, annotated: crate::grades::Grade, expected: crate::grades::Grade) -> TcResult<()> {
        if annotated == expected {
            return Ok(());
        }
        let m = self.cfg.m();
        Err(self.err(
            TypeErrorKind::GradeAnnotationMismatch,
            format!("{what} annotated {} but the type says {}", m.grade_name(annotated), m.grade_name(expected)),
        ))
    }

    /// `Γ ⊢ A`.
    pub fn check_type(&mut self, a: &Term) -> TcResult<()> {
        match a {
            Term::U | Term::Nat | Term::Empty => Ok(()),
            Term::Unit(k) => self.check_unit(*k),
            Term::Pi { p, q, dom, cod } => {
                self.check_former(None, *p, *q)?;
                self.at(0, |s| s.check_type(dom))?;
                self.under(vec![(**dom).clone()], |s| s.at(1, |s| s.check_type(cod)))
            }
            Term::Sigma { k, p, q, fst, snd } => {
                self.check_former(Some(*k), *p, *q)?;
                self.at(0, |s| s.check_type(fst))?;
                self.under(vec![(**fst).clone()], |s| s.at(1, |s| s.check_type(snd)))
            }
            _ => {
                let ty = self.infer(a)?;
                let ty = self.whnf(&ty)?;
                if ty == Term::U {
                    Ok(())
                } else {
                    Err(self.err(TypeErrorKind::NotAType, format!("{} is not a type", self.show(a))))
                }
            }
        }
    }

    /// `Γ ⊢ t : A`.
    pub fn check(&mut self, t: &Term, a: &Term) -> TcResult<()> {
        match t {
            Term::Lam { p, body } => {
                let ty = self.whnf(a)?;
                let Term::Pi { p: p2, cod, dom, .. } = &ty else {
                    return Err(self.err(
                        TypeErrorKind::Mismatch,
                        format!("a function was given where {} was expected", self.show(a)),
                    ));
                };
                self.grades_match("λ", *p, *p2)?;
                self.under(vec![(**dom).clone()], |s| s.at(0, |s| s.check(body, cod)))
            }
            Term::Pair { k, p, fst: t1, snd: t2 } => {
                let ty = self.whnf(a)?;
                match &ty {
                    Term::Sigma { k: k2, p: p2, fst: a1, snd: b, .. } if k2 == k => {
                        self.grades_match("pair", *p, *p2)?;
                        self.plain_sigma_grade(*p)?;
                        self.at(0, |s| s.check(t1, a1))?;
                        let b1 = subst1::<Term>(b, t1);
                        self.at(1, |s| s.check(t2, &b1))
                    }
                    _ => Err(self.err(
                        TypeErrorKind::Mismatch,
                        format!("a {}-pair was given where {} was expected", k.symbol(), self.show(a)),
                    )),
                }
            }
            _ => {
                let ty = self.infer(t)?;
                if self.conv_type(&ty, a)? {
                    Ok(())
                } else {
                    Err(self.err(
                        TypeErrorKind::Mismatch,
                        format!(
                            "{} has type {} but {} was expected",
                            self.show(t),
                            self.show(&ty),
                            self.show(a)
                        ),
                    ))
                }
            }
        }
    }

    /// Infers the type of an inferable term.
    pub fn infer(&mut self, t: &Term) -> TcResult<Term> {
        use Term::*;
        match t {
            U => Err(self.err(TypeErrorKind::Universe, "U is not a term of any universe".into())),
            Nat | Empty => Ok(U),
            Unit(k) => {
                self.check_unit(*k)?;
                Ok(U)
            }
            Pi { p, q, dom, cod } => {
                self.check_former(None, *p, *q)?;
                self.at(0, |s| s.check(dom, &U))?;
                self.under(vec![(**dom).clone()], |s| s.at(1, |s| s.check(cod, &U)))?;
                Ok(U)
            }
            Sigma { k, p, q, fst, snd } => {
                self.check_former(Some(*k), *p, *q)?;
                self.at(0, |s| s.check(fst, &U))?;
                self.under(vec![(**fst).clone()], |s| s.at(1, |s| s.check(snd, &U)))?;
                Ok(U)
            }
            Var(i) => self
                .lookup(*i)
                .ok_or_else(|| self.err(TypeErrorKind::Unbound, format!("variable #{i} is not in scope"))),
            Lam { .. } | Pair { .. } => Err(self.err(
                TypeErrorKind::CannotInfer,
                format!("cannot infer a type for {}; add an ascription", self.show(t)),
            )),
            App { p, fun, arg } => {
                let tf = self.at(0, |s| s.infer(fun))?;
                let tf = self.whnf(&tf)?;
                let Pi { p: p2, dom, cod, .. } = &tf else {
                    return Err(self.err(
                        TypeErrorKind::NotAFunction,
                        format!("{} has type {}, not a function type", self.show(fun), self.show(&tf)),
                    ));
                };
                self.grades_match("application", *p, *p2)?;
                self.at(1, |s| s.check(arg, dom))?;
                Ok(subst1::<Term>(cod, arg))
            }
            Fst { p, pair: x } | Snd { p, pair: x } => {
                let tx = self.at(0, |s| s.infer(x))?;
                let tx = self.whnf(&tx)?;
                let Sigma { k, p: p2, fst: a, snd: b, .. } = &tx else {
                    return Err(self.err(
                        TypeErrorKind::NotAPair,
                        format!("{} has type {}, not a Σ-type", self.show(x), self.show(&tx)),
                    ));
                };
                if *k == Strength::Weak {
                    return Err(self.err(
                        TypeErrorKind::IllegalProjection,
                        "projections need a strong Σ-type; use prodrec".into(),
                    ));
                }
                self.grades_match("projection", *p, *p2)?;
                Ok(match t {
                    Fst { .. } => (**a).clone(),
                    _ => subst1::<Term>(b, &fst(*p, (**x).clone())),
                })
            }
            Prodrec { r: _, p, q: _, motive, scrut, body } => {
                let ts = self.at(1, |s| s.infer(scrut))?;
                let ts = self.whnf(&ts)?;
                let Sigma { k, p: p2, fst: a, snd: b, .. } = &ts else {
                    return Err(self.err(
                        TypeErrorKind::NotAPair,
                        format!("{} has type {}, not a Σ-type", self.show(scrut), self.show(&ts)),
                    ));
                };
                if *k == Strength::Strong {
                    return Err(self.err(
                        TypeErrorKind::IllegalProjection,
                        "prodrec needs a weak Σ-type; use fst/snd".into(),
                    ));
                }
                self.grades_match("prodrec", *p, *p2)?;
                self.under(vec![ts.clone()], |s| s.at(0, |s| s.check_type(motive)))?;
                let want = subst_top_keep::<Term>(motive, &pair(Strength::Weak, *p, var(1), var(0)), 2);
                self.under(vec![(**a).clone(), (**b).clone()], |s| s.at(2, |s| s.check(body, &want)))?;
                Ok(subst1::<Term>(motive, scrut))
            }
            Zero => Ok(Nat),
            Suc(n) => {
                self.at(0, |s| s.check(n, &Nat))?;
                Ok(Nat)
            }
            Natrec { motive, zero, succ, scrut, .. } => {
                self.under(vec![Nat], |s| s.at(0, |s| s.check_type(motive)))?;
                let zt = subst1::<Term>(motive, &Zero);
                self.at(1, |s| s.check(zero, &zt))?;
                let st = subst_top_keep::<Term>(motive, &suc(var(1)), 2);
                self.under(vec![Nat, (**motive).clone()], |s| s.at(2, |s| s.check(succ, &st)))?;
                self.at(3, |s| s.check(scrut, &Nat))?;
                Ok(subst1::<Term>(motive, scrut))
            }
            Emptyrec { motive, scrut, .. } => {
                self.at(0, |s| s.check_type(motive))?;
                self.at(1, |s| s.check(scrut, &Empty))?;
                Ok((**motive).clone())
            }
            Star(k) => {
                self.check_unit(*k)?;
                Ok(Unit(*k))
            }
            Unitrec { motive, scrut, body, .. } => {
                self.check_unit(Strength::Weak)?;
                self.under(vec![Unit(Strength::Weak)], |s| s.at(0, |s| s.check_type(motive)))?;
                self.at(1, |s| s.check(scrut, &Unit(Strength::Weak)))?;
                let bt = subst1::<Term>(motive, &Star(Strength::Weak));
                self.at(2, |s| s.check(body, &bt))?;
                Ok(subst1::<Term>(motive, scrut))
            }
            Ann { term, ty } => {
                self.at(1, |s| s.check_type(ty))?;
                self.at(0, |s| s.check(term, ty))?;
                Ok((**ty).clone())
            }
        }
    }

    // -----------------------------------------------------------------------
    // Conversion

    /// `Γ ⊢ A ≡ B`.
    pub fn conv_type(&mut self, a: &Term, b: &Term) -> TcResult<bool> {
        if a == b {
            return Ok(true);
        }
        let a = self.whnf(a)?;
        let b = self.whnf(b)?;
        use Term::*;
        Ok(match (&a, &b) {
            (U, U) | (Nat, Nat) | (Empty, Empty) => true,
            (Unit(k1), Unit(k2)) => k1 == k2,
            (Pi { p: p1, q: q1, dom: d1, cod: c1 }, Pi { p: p2, q: q2, dom: d2, cod: c2 }) => {
                p1 == p2
                    && q1 == q2
                    && self.conv_type(d1, d2)?
                    && self.under(vec![(**d1).clone()], |s| s.conv_type(c1, c2))?
            }
            (
                Sigma { k: k1, p: p1, q: q1, fst: a1, snd: b1 },
                Sigma { k: k2, p: p2, q: q2, fst: a2, snd: b2 },
            ) => {
                k1 == k2
                    && p1 == p2
                    && q1 == q2
                    && self.conv_type(a1, a2)?
                    && self.under(vec![(**a1).clone()], |s| s.conv_type(b1, b2))?
            }
            _ if is_elim(&a) && is_elim(&b) => self.conv_neutral(&a, &b)?.is_some(),
            _ => false,
        })
    }

    /// `Γ ⊢ t ≡ u : A`.
    pub fn conv_term(&mut self, t: &Term, u: &Term, a: &Term) -> TcResult<bool> {
        if t == u {
            return Ok(true);
        }
        use Term::*;
        let a = self.whnf(a)?;
        match &a {
            Pi { p, dom, cod, .. } => {
                let (t1, u1) = (app(*p, wk1::<Term>(t), var(0)), app(*p, wk1::<Term>(u), var(0)));
                return self.under(vec![(**dom).clone()], |s| s.conv_term(&t1, &u1, cod));
            }
            Sigma { k: Strength::Strong, p, fst: a1, snd: b, .. } => {
                let (f1, f2) = (fst(*p, t.clone()), fst(*p, u.clone()));
                if !self.conv_term(&f1, &f2, a1)? {
                    return Ok(false);
                }
                let bt = subst1::<Term>(b, &f1);
                return self.conv_term(&Term::Snd { p: *p, pair: Box::new(t.clone()) }, &Term::Snd {
                    p: *p,
                    pair: Box::new(u.clone()),
                }, &bt);
            }
            Unit(Strength::Strong) => return Ok(true),
            _ => {}
        }
        let t = self.whnf(t)?;
        let u = self.whnf(u)?;
        Ok(match (&a, &t, &u) {
            (U, _, _) => self.conv_type(&t, &u)?,
            (Nat, Zero, Zero) => true,
            (Nat, Suc(x), Suc(y)) => self.conv_term(x, y, &Nat)?,
            (
                Sigma { k: Strength::Weak, fst: a1, snd: b, .. },
                Pair { p: p1, fst: x1, snd: x2, .. },
                Pair { p: p2, fst: y1, snd: y2, .. },
            ) => p1 == p2 && self.conv_term(x1, y1, a1)? && self.conv_term(x2, y2, &subst1::<Term>(b, x1))?,
            (Unit(Strength::Weak), Star(_), Star(_)) => true,
            _ if is_elim(&t) && is_elim(&u) => self.conv_neutral(&t, &u)?.is_some(),
            _ => false,
        })
    }

    /// Compares two neutrals, returning their common type.
    fn conv_neutral(&mut self, t: &Term, u: &Term) -> TcResult<Option<Term>> {
        use Term::*;
        Ok(match (t, u) {
            (Var(i), Var(j)) if i == j => self.lookup(*i),
            (App { p: p1, fun: f, arg: x }, App { p: p2, fun: g, arg: y }) if p1 == p2 => {
                let Some(tf) = self.conv_neutral_whnf(f, g)? else { return Ok(None) };
                let tf = self.whnf(&tf)?;
                match &tf {
                    Pi { dom, cod, .. } if self.conv_term(x, y, dom)? => Some(subst1::<Term>(cod, x)),
                    _ => None,
                }
            }
            (Fst { p: p1, pair: x }, Fst { p: p2, pair: y }) if p1 == p2 => {
                match self.sigma_of(x, y)? {
                    Some(Sigma { fst: a, .. }) => Some(*a),
                    _ => None,
                }
            }
            (Snd { p: p1, pair: x }, Snd { p: p2, pair: y }) if p1 == p2 => match self.sigma_of(x, y)? {
                Some(Sigma { snd: b, .. }) => Some(subst1::<Term>(&b, &fst(*p1, (**x).clone()))),
                _ => None,
            },
            (
                Natrec { p: p1, q: q1, r: r1, motive: m1, zero: z1, succ: s1, scrut: n1 },
                Natrec { p: p2, q: q2, r: r2, motive: m2, zero: z2, succ: s2, scrut: n2 },
            ) if (p1, q1, r1) == (p2, q2, r2) => {
                if self.conv_neutral_whnf(n1, n2)?.is_none()
                    || !self.under(vec![Nat], |s| s.conv_type(m1, m2))?
                    || !self.conv_term(z1, z2, &subst1::<Term>(m1, &Zero))?
                {
                    return Ok(None);
                }
                let st = subst_top_keep::<Term>(m1, &suc(var(1)), 2);
                if !self.under(vec![Nat, (**m1).clone()], |s| s.conv_term(s1, s2, &st))? {
                    return Ok(None);
                }
                Some(subst1::<Term>(m1, n1))
            }
            (
                Prodrec { r: r1, p: p1, q: q1, motive: m1, scrut: x, body: b1 },
                Prodrec { r: r2, p: p2, q: q2, motive: m2, scrut: y, body: b2 },
            ) if (r1, p1, q1) == (r2, p2, q2) => {
                let Some(ts) = self.conv_neutral_whnf(x, y)? else { return Ok(None) };
                let ts = self.whnf(&ts)?;
                let Sigma { fst: a, snd: b, .. } = &ts else { return Ok(None) };
                if !self.under(vec![ts.clone()], |s| s.conv_type(m1, m2))? {
                    return Ok(None);
                }
                let want = subst_top_keep::<Term>(m1, &pair(Strength::Weak, *p1, var(1), var(0)), 2);
                if !self.under(vec![(**a).clone(), (**b).clone()], |s| s.conv_term(b1, b2, &want))? {
                    return Ok(None);
                }
                Some(subst1::<Term>(m1, x))
            }
            (Emptyrec { p: p1, motive: m1, scrut: x }, Emptyrec { p: p2, motive: m2, scrut: y }) if p1 == p2 => {
                if self.conv_neutral_whnf(x, y)?.is_none() || !self.conv_type(m1, m2)? {
                    return Ok(None);
                }
                Some((**m1).clone())
            }
            (
                Unitrec { p: p1, q: q1, motive: m1, scrut: x, body: b1 },
                Unitrec { p: p2, q: q2, motive: m2, scrut: y, body: b2 },
            ) if (p1, q1) == (p2, q2) => {
                if self.conv_neutral_whnf(x, y)?.is_none()
                    || !self.under(vec![Unit(Strength::Weak)], |s| s.conv_type(m1, m2))?
                    || !self.conv_term(b1, b2, &subst1::<Term>(m1, &Star(Strength::Weak)))?
                {
                    return Ok(None);
                }
                Some(subst1::<Term>(m1, x))
            }
            _ => None,
        })
    }

    fn conv_neutral_whnf(&mut self, t: &Term, u: &Term) -> TcResult<Option<Term>> {
        let t = self.whnf(t)?;
        let u = self.whnf(u)?;
        if is_elim(&t) && is_elim(&u) {
            self.conv_neutral(&t, &u)
        } else {
            Ok(None)
        }
    }

    fn sigma_of(&mut self, x: &Term, y: &Term) -> TcResult<Option<Term>> {
        let Some(ty) = self.conv_neutral_whnf(x, y)? else { return Ok(None) };
        let ty = self.whnf(&ty)?;
        Ok(matches!(ty, Term::Sigma { .. }).then_some(ty))
    }
}

fn is_elim(t: &Term) -> bool {
    matches!(
        t,
        Term::Var(_)
            | Term::App { .. }
            | Term::Fst { .. }
            | Term::Snd { .. }
            | Term::Prodrec { .. }
            | Term::Natrec { .. }
            | Term::Emptyrec { .. }
            | Term::Unitrec { .. }
    )
}

/// Checks `Γ ⊢ t : A` from scratch.
pub fn check_term(cfg: &Config, ctx: &[Term], t: &Term, a: &Term) -> TcResult<()> {
    let mut c = Checker::with_context(cfg, ctx.to_vec());
    c.check(t, a)
}

pub fn check_type(cfg: &Config, ctx: &[Term], a: &Term) -> TcResult<()> {
    Checker::with_context(cfg, ctx.to_vec()).check_type(a)
}

pub fn infer_type(cfg: &Config, ctx: &[Term], t: &Term) -> TcResult<Term> {
    Checker::with_context(cfg, ctx.to_vec()).infer(t)
}

/// Checks that each context entry is a type in the scope of the earlier ones.
pub fn check_context(cfg: &Config, ctx: &[Term]) -> TcResult<()> {
    let mut c = Checker::new(cfg);
    for ty in ctx {
        c.check_type(ty)?;
        c.push(ty.clone());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grades::Modality;
    use crate::syntax::*;

    fn cfg() -> Config {
        Config::new(Modality::erasure())
    }

    #[test]
    fn polymorphic_identity() {
        let c = cfg();
        let (z, w) = (c.m().zero(), c.m().one());
        let id = lam(z, lam(w, var(0)));
        let ty = pi(z, z, Term::U, pi(w, z, var(0), var(1)));
        check_type(&c, &[], &ty).unwrap();
        check_term(&c, &[], &id, &ty).unwrap();
        let use_it = app(w, app(z, ann(id, ty), Term::Nat), Term::Zero);
        assert_eq!(infer_type(&c, &[], &use_it).unwrap(), Term::Nat);
    }

    #[test]
    fn grade_mismatch_is_reported() {
        let c = cfg();
        let (z, w) = (c.m().zero(), c.m().one());
        let e = check_term(&c, &[], &lam(z, var(0)), &pi(w, z, Term::Nat, Term::Nat)).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::GradeAnnotationMismatch);
    }

    #[test]
    fn weak_projection_rejected() {
        let c = cfg();
        let w = c.m().one();
        let ctx = [sigma(Strength::Weak, w, w, Term::Nat, Term::Nat)];
        assert_eq!(infer_type(&c, &ctx, &fst(w, var(0))).unwrap_err().kind, TypeErrorKind::IllegalProjection);
    }

    #[test]
    fn plain_sigma_needs_grade_one() {
        let c = cfg();
        let (z, w) = (c.m().zero(), c.m().one());
        let e = check_type(&c, &[], &sigma(Strength::Strong, z, w, Term::Nat, Term::Nat)).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::RestrictionViolation);
        check_type(&cfg().moded(), &[], &sigma(Strength::Strong, z, w, Term::Nat, Term::Nat)).unwrap();
    }

    #[test]
    fn eta_for_functions_and_strong_unit() {
        let c = cfg();
        let w = c.m().one();
        let fty = pi(w, w, Term::Nat, Term::Nat);
        let mut ch = Checker::with_context(&c, vec![fty.clone()]);
        let eta = lam(w, app(w, var(1), var(0)));
        assert!(ch.conv_term(&var(0), &eta, &fty).unwrap());
        let mut ch = Checker::with_context(&c, vec![Term::Unit(Strength::Strong)]);
        assert!(ch.conv_term(&var(0), &Term::Star(Strength::Strong), &Term::Unit(Strength::Strong)).unwrap());
        let mut ch = Checker::with_context(&c, vec![Term::Unit(Strength::Weak)]);
        assert!(!ch.conv_term(&var(0), &Term::Star(Strength::Weak), &Term::Unit(Strength::Weak)).unwrap());
    }

    #[test]
    fn error_paths_point_into_the_term() {
        let c = cfg();
        let w = c.m().one();
        let t = app(w, ann(lam(w, var(0)), pi(w, w, Term::Nat, Term::Nat)), Term::Star(Strength::Weak));
        let e = infer_type(&c, &[], &t).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Mismatch);
        assert_eq!(e.path, vec![1]);
    }

    #[test]
    fn universe_has_no_type() {
        assert_eq!(infer_type(&cfg(), &[], &Term::U).unwrap_err().kind, TypeErrorKind::Universe);
    }
}
