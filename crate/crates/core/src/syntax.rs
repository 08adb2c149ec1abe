//! Core terms in de Bruijn form, weakenings, substitutions and a printer.
//!
//! Binding structure: the codomain of Π/Σ, the body of λ and every motive
//! bind one variable; the successor branch of `natrec` binds the predecessor
//! (`#1`) and the recursive result (`#0`); the body of `prodrec` binds the
//! first (`#1`) and second (`#0`) components.

use crate::grades::{Grade, Modality};

/// Strong (`&`, with projections and η) or weak (`@`, eliminated by
/// matching) Σ- and unit types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strength {
    Strong,
    Weak,
}

impl Strength {
    pub fn symbol(self) -> &'static str {
        match self {
            Strength::Strong => "&",
            Strength::Weak => "@",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    U,
    Nat,
    Empty,
    Unit(Strength),
    Pi { p: Grade, q: Grade, dom: Box<Term>, cod: Box<Term> },
    Sigma { k: Strength, p: Grade, q: Grade, fst: Box<Term>, snd: Box<Term> },
    Var(usize),
    Lam { p: Grade, body: Box<Term> },
    App { p: Grade, fun: Box<Term>, arg: Box<Term> },
    Pair { k: Strength, p: Grade, fst: Box<Term>, snd: Box<Term> },
    Fst { p: Grade, pair: Box<Term> },
    Snd { p: Grade, pair: Box<Term> },
    Prodrec { r: Grade, p: Grade, q: Grade, motive: Box<Term>, scrut: Box<Term>, body: Box<Term> },
    Zero,
    Suc(Box<Term>),
    Natrec { p: Grade, q: Grade, r: Grade, motive: Box<Term>, zero: Box<Term>, succ: Box<Term>, scrut: Box<Term> },
    Emptyrec { p: Grade, motive: Box<Term>, scrut: Box<Term> },
    Star(Strength),
    Unitrec { p: Grade, q: Grade, motive: Box<Term>, scrut: Box<Term>, body: Box<Term> },
    /// `(t : A)`: switches from checking to inference.
    Ann { term: Box<Term>, ty: Box<Term> },
}

fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

// Smart constructors.
pub fn var(i: usize) -> Term {
    Term::Var(i)
}
pub fn pi(p: Grade, q: Grade, dom: Term, cod: Term) -> Term {
    Term::Pi { p, q, dom: bx(dom), cod: bx(cod) }
}
pub fn sigma(k: Strength, p: Grade, q: Grade, fst: Term, snd: Term) -> Term {
    Term::Sigma { k, p, q, fst: bx(fst), snd: bx(snd) }
}
pub fn lam(p: Grade, body: Term) -> Term {
    Term::Lam { p, body: bx(body) }
}
pub fn app(p: Grade, fun: Term, arg: Term) -> Term {
    Term::App { p, fun: bx(fun), arg: bx(arg) }
}
pub fn pair(k: Strength, p: Grade, fst: Term, snd: Term) -> Term {
    Term::Pair { k, p, fst: bx(fst), snd: bx(snd) }
}
pub fn fst(p: Grade, t: Term) -> Term {
    Term::Fst { p, pair: bx(t) }
}
pub fn snd(p: Grade, t: Term) -> Term {
    Term::Snd { p, pair: bx(t) }
}
pub fn prodrec(r: Grade, p: Grade, q: Grade, motive: Term, scrut: Term, body: Term) -> Term {
    Term::Prodrec { r, p, q, motive: bx(motive), scrut: bx(scrut), body: bx(body) }
}
pub fn suc(t: Term) -> Term {
    Term::Suc(bx(t))
}
pub fn natrec(p: Grade, q: Grade, r: Grade, motive: Term, zero: Term, succ: Term, scrut: Term) -> Term {
    Term::Natrec { p, q, r, motive: bx(motive), zero: bx(zero), succ: bx(succ), scrut: bx(scrut) }
}
pub fn emptyrec(p: Grade, motive: Term, scrut: Term) -> Term {
    Term::Emptyrec { p, motive: bx(motive), scrut: bx(scrut) }
}
pub fn unitrec(p: Grade, q: Grade, motive: Term, scrut: Term, body: Term) -> Term {
    Term::Unitrec { p, q, motive: bx(motive), scrut: bx(scrut), body: bx(body) }
}
pub fn ann(term: Term, ty: Term) -> Term {
    Term::Ann { term: bx(term), ty: bx(ty) }
}
pub fn numeral(n: u64) -> Term {
    (0..n).fold(Term::Zero, |t, _| suc(t))
}

impl Term {
    /// `suc^n zero` → `n`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut t = self;
        let mut n = 0;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Suc(u) => {
                    n += 1;
                    t = u;
                }
                _ => return None,
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_child(&mut |_, c, _| n += c.size());
        n + 1
    }

    /// Visits immediate children with their position index and the number
    /// of variables each binds.
    pub fn for_each_child<'a>(&'a self, f: &mut impl FnMut(u8, &'a Term, usize)) {
        use Term::*;
        match self {
            U | Nat | Empty | Unit(_) | Var(_) | Zero | Star(_) => {}
            Pi { dom, cod, .. } => {
                f(0, dom, 0);
                f(1, cod, 1);
            }
            Sigma { fst, snd, .. } => {
                f(0, fst, 0);
                f(1, snd, 1);
            }
            Lam { body, .. } => f(0, body, 1),
            App { fun, arg, .. } => {
                f(0, fun, 0);
                f(1, arg, 0);
            }
            Pair { fst, snd, .. } => {
                f(0, fst, 0);
                f(1, snd, 0);
            }
            Fst { pair, .. } | Snd { pair, .. } => f(0, pair, 0),
            Prodrec { motive, scrut, body, .. } => {
                f(0, motive, 1);
                f(1, scrut, 0);
                f(2, body, 2);
            }
            Suc(t) => f(0, t, 0),
            Natrec { motive, zero, succ, scrut, .. } => {
                f(0, motive, 1);
                f(1, zero, 0);
                f(2, succ, 2);
                f(3, scrut, 0);
            }
            Emptyrec { motive, scrut, .. } => {
                f(0, motive, 0);
                f(1, scrut, 0);
            }
            Unitrec { motive, scrut, body, .. } => {
                f(0, motive, 1);
                f(1, scrut, 0);
                f(2, body, 0);
            }
            Ann { term, ty } => {
                f(0, term, 0);
                f(1, ty, 0);
            }
        }
    }

    /// True iff every free variable is below `n`.
    pub fn scoped_in(&self, n: usize) -> bool {
        match self {
            Term::Var(i) => *i < n,
            _ => {
                let mut ok = true;
                self.for_each_child(&mut |_, c, b| ok &= c.scoped_in(n + b));
                ok
            }
        }
    }

    /// Whether variable `i` occurs free.
    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Term::Var(j) => *j == i,
            _ => {
                let mut hit = false;
                self.for_each_child(&mut |_, c, b| hit |= c.mentions(i + b));
                hit
            }
        }
    }

    /// The subterm at a child-index path.
    pub fn at_path(&self, path: &[u8]) -> Option<&Term> {
        let Some((&first, rest)) = path.split_first() else { return Some(self) };
        let mut found = None;
        self.for_each_child(&mut |i, c, _| {
            if i == first {
                found = Some(c);
            }
        });
        found?.at_path(rest)
    }
}

/// Syntax with variables that can be renamed and substituted. Implemented
/// by source terms and by the untyped target language.
pub trait Binding: Sized + Clone {
    fn var(i: usize) -> Self;
    /// Rebuilds the term, replacing each variable occurrence `i` found under
    /// `depth` local binders (counting from the start) with `f(i, depth)`.
    fn map_vars(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Self) -> Self;
}

impl Binding for Term {
    fn var(i: usize) -> Self {
        Term::Var(i)
    }

    fn map_vars(&self, d: usize, f: &mut dyn FnMut(usize, usize) -> Self) -> Self {
        use Term::*;
        let mut go = |t: &Term, b: usize| bx(t.map_vars(d + b, f));
        match self {
            Var(i) => f(*i, d),
            U | Nat | Empty | Unit(_) | Zero | Star(_) => self.clone(),
            Pi { p, q, dom, cod } => Pi { p: *p, q: *q, dom: go(dom, 0), cod: go(cod, 1) },
            Sigma { k, p, q, fst, snd } => Sigma { k: *k, p: *p, q: *q, fst: go(fst, 0), snd: go(snd, 1) },
            Lam { p, body } => Lam { p: *p, body: go(body, 1) },
            App { p, fun, arg } => App { p: *p, fun: go(fun, 0), arg: go(arg, 0) },
            Pair { k, p, fst, snd } => Pair { k: *k, p: *p, fst: go(fst, 0), snd: go(snd, 0) },
            Fst { p, pair } => Fst { p: *p, pair: go(pair, 0) },
            Snd { p, pair } => Snd { p: *p, pair: go(pair, 0) },
            Prodrec { r, p, q, motive, scrut, body } => Prodrec {
                r: *r,
                p: *p,
                q: *q,
                motive: go(motive, 1),
                scrut: go(scrut, 0),
                body: go(body, 2),
            },
            Suc(t) => Suc(go(t, 0)),
            Natrec { p, q, r, motive, zero, succ, scrut } => Natrec {
                p: *p,
                q: *q,
                r: *r,
                motive: go(motive, 1),
                zero: go(zero, 0),
                succ: go(succ, 2),
                scrut: go(scrut, 0),
            },
            Emptyrec { p, motive, scrut } => Emptyrec { p: *p, motive: go(motive, 0), scrut: go(scrut, 0) },
            Unitrec { p, q, motive, scrut, body } => Unitrec {
                p: *p,
                q: *q,
                motive: go(motive, 1),
                scrut: go(scrut, 0),
                body: go(body, 0),
            },
            Ann { term, ty } => Ann { term: go(term, 0), ty: go(ty, 0) },
        }
    }
}

/// Adds `by` to every variable at or above `cutoff`.
pub fn shift<T: Binding>(t: &T, by: usize, cutoff: usize) -> T {
    if by == 0 {
        return t.clone();
    }
    t.map_vars(0, &mut |i, d| if i < d + cutoff { T::var(i) } else { T::var(i + by) })
}

pub fn wk1<T: Binding>(t: &T) -> T {
    shift(t, 1, 0)
}

/// Order-preserving renamings: `Γ.Δ ⊇ Γ` built from `id`, `step`, `lift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wk {
    Id,
    Step(Box<Wk>),
    Lift(Box<Wk>),
}

impl Wk {
    pub fn step(self) -> Wk {
        Wk::Step(Box::new(self))
    }

    pub fn lift(self) -> Wk {
        Wk::Lift(Box::new(self))
    }

    pub fn apply_var(&self, i: usize) -> usize {
        match self {
            Wk::Id => i,
            Wk::Step(r) => r.apply_var(i) + 1,
            Wk::Lift(r) => {
                if i == 0 {
                    0
                } else {
                    r.apply_var(i - 1) + 1
                }
            }
        }
    }

    pub fn apply<T: Binding>(&self, t: &T) -> T {
        t.map_vars(0, &mut |i, d| if i < d { T::var(i) } else { T::var(self.apply_var(i - d) + d) })
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Wk) -> Wk {
        match (self, other) {
            (Wk::Id, r) => r.clone(),
            (Wk::Step(a), r) => a.compose(r).step(),
            (Wk::Lift(a), Wk::Id) => Wk::Lift(a.clone()),
            (Wk::Lift(a), Wk::Step(b)) => a.compose(b).step(),
            (Wk::Lift(a), Wk::Lift(b)) => a.compose(b).lift(),
        }
    }

    fn steps_and_lifts(&self) -> (usize, usize) {
        match self {
            Wk::Id => (0, 0),
            Wk::Step(r) => {
                let (s, l) = r.steps_and_lifts();
                (s + 1, l)
            }
            Wk::Lift(r) => {
                let (s, l) = r.steps_and_lifts();
                (s, l + 1)
            }
        }
    }
}

/// A substitution in normal form: explicit images for the first variables
/// followed by a shifted identity. `σ(i) = terms[i]` for `i < terms.len()`,
/// otherwise `#(i - terms.len() + shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subst<T> {
    pub terms: Vec<T>,
    pub shift: usize,
}

impl<T: Binding> Subst<T> {
    pub fn id() -> Self {
        Subst { terms: Vec::new(), shift: 0 }
    }

    /// The weakening by `k` variables as a substitution.
    pub fn wk(k: usize) -> Self {
        Subst { terms: Vec::new(), shift: k }
    }

    /// `(σ, t)`: `t` for variable 0, `σ(i)` for `i + 1`.
    pub fn cons(mut self, t: T) -> Self {
        self.terms.insert(0, t);
        self
    }

    /// `t[u]`.
    pub fn single(u: T) -> Self {
        Self::id().cons(u)
    }

    /// `t[a, b]`: `a` for `#1`, `b` for `#0`.
    pub fn double(a: T, b: T) -> Self {
        Self::id().cons(a).cons(b)
    }

    pub fn get(&self, i: usize) -> T {
        match self.terms.get(i) {
            Some(t) => t.clone(),
            None => T::var(i - self.terms.len() + self.shift),
        }
    }

    pub fn lift(&self) -> Self {
        Subst { terms: self.terms.iter().map(wk1).collect(), shift: self.shift + 1 }.cons(T::var(0))
    }

    pub fn apply(&self, t: &T) -> T {
        if self.terms.is_empty() {
            return shift(t, self.shift, 0);
        }
        t.map_vars(0, &mut |i, d| if i < d { T::var(i) } else { shift(&self.get(i - d), d, 0) })
    }

    /// `σ ∘ ρ`, i.e. `i ↦ σ(ρ(i))`.
    pub fn compose_wk(&self, rho: &Wk) -> Self {
        let (steps, lifts) = rho.steps_and_lifts();
        let n = lifts.max(self.terms.len());
        let terms = (0..n).map(|i| self.get(rho.apply_var(i))).collect::<Vec<_>>();
        // beyond n, ρ(i) = i + steps ≥ terms.len()
        Subst { shift: n + steps + self.shift - self.terms.len(), terms }
    }

    /// `σ ∘ τ`, i.e. `i ↦ τ(i)[σ]`.
    pub fn compose(&self, tau: &Subst<T>) -> Self {
        let n = tau.terms.len() + self.terms.len();
        let terms = (0..n).map(|i| self.apply(&tau.get(i))).collect();
        Subst { terms, shift: tau.shift + self.shift }
    }
}

/// `t[u]`.
pub fn subst1<T: Binding>(t: &T, u: &T) -> T {
    Subst::single(u.clone()).apply(t)
}

/// `t[a, b]`: `a` for `#1`, `b` for `#0`.
pub fn subst2<T: Binding>(t: &T, a: &T, b: &T) -> T {
    Subst::double(a.clone(), b.clone()).apply(t)
}

/// Replaces `#0` in a term living under one extra binder, keeping the
/// binder: the substitution `(↑², u)` used for motives in successor cases.
pub fn subst_top_keep<T: Binding>(t: &T, u: &T, extra: usize) -> T {
    Subst::<T>::wk(extra).cons(u.clone()).apply(t)
}

// ---------------------------------------------------------------------------
// Printing

/// Renders a term in surface syntax. `scope` names the free variables,
/// outermost first; bound variables get fresh `x<level>` names.
pub fn pretty(m: &Modality, t: &Term, scope: &[String]) -> String {
    let mut names = scope.to_vec();
    let mut out = String::new();
    Printer { m, names: &mut names }.term(t, 0, &mut out);
    out
}

struct Printer<'a> {
    m: &'a Modality,
    names: &'a mut Vec<String>,
}

impl Printer<'_> {
    fn g(&self, p: Grade) -> &str {
        self.m.grade_name(p)
    }

    fn fresh(&self) -> String {
        let mut k = self.names.len();
        loop {
            let cand = format!("x{k}");
            if !self.names.contains(&cand) {
                return cand;
            }
            k += 1;
        }
    }

    fn bind(&mut self, n: usize, body: impl FnOnce(&mut Self, &[String])) {
        let mut fresh = Vec::new();
        for _ in 0..n {
            let x = self.fresh();
            self.names.push(x.clone());
            fresh.push(x);
        }
        body(self, &fresh);
        for _ in 0..n {
            self.names.pop();
        }
    }

    fn var_name(&self, i: usize) -> String {
        let n = self.names.len();
        if i < n {
            self.names[n - 1 - i].clone()
        } else {
            format!("#{i}")
        }
    }

    // prec: 0 = binder form allowed, 1 = application, 2 = prefix, 3 = atom
    fn term(&mut self, t: &Term, prec: u8, out: &mut String) {
        use Term::*;
        let need = match t {
            Pi { .. } | Sigma { .. } | Lam { .. } => 0,
            App { .. } => 1,
            Suc(_) if t.as_numeral().is_none() => 2,
            Fst { .. } | Snd { .. } | Prodrec { .. } | Natrec { .. } | Emptyrec { .. } | Unitrec { .. } => 2,
            _ => 3,
        };
        if need < prec {
            out.push('(');
            self.term(t, 0, out);
            out.push(')');
            return;
        }
        match t {
            U => out.push('U'),
            Nat => out.push_str("Nat"),
            Empty => out.push_str("Empty"),
            Unit(k) => {
                out.push_str("Unit");
                out.push_str(k.symbol());
            }
            Star(k) => {
                out.push_str("star");
                out.push_str(k.symbol());
            }
            Zero => out.push('0'),
            Var(i) => out.push_str(&self.var_name(*i)),
            Pi { p, q, dom, cod } => {
                out.push_str(&format!("Pi[{},{}] (", self.g(*p), self.g(*q)));
                self.binder_ann(dom, cod, " -> ", out);
            }
            Sigma { k, p, q, fst, snd } => {
                out.push_str(&format!("Sig{}[{},{}] (", k.symbol(), self.g(*p), self.g(*q)));
                self.binder_ann(fst, snd, " ** ", out);
            }
            Lam { p, body } => {
                out.push_str(&format!("\\[{}] ", self.g(*p)));
                self.bind(1, |s, xs| {
                    out.push_str(&format!("{}. ", xs[0]));
                    s.term(body, 0, out);
                });
            }
            App { p, fun, arg } => {
                self.term(fun, 1, out);
                out.push_str(&format!(" @[{}] ", self.g(*p)));
                self.term(arg, 2, out);
            }
            Pair { k, p, fst, snd } => {
                out.push('(');
                self.term(fst, 0, out);
                out.push_str(&format!(" ,{}[{}] ", k.symbol(), self.g(*p)));
                self.term(snd, 0, out);
                out.push(')');
            }
            Fst { p, pair } => {
                out.push_str(&format!("fst[{}] ", self.g(*p)));
                self.term(pair, 2, out);
            }
            Snd { p, pair } => {
                out.push_str(&format!("snd[{}] ", self.g(*p)));
                self.term(pair, 2, out);
            }
            Suc(inner) => match t.as_numeral() {
                Some(n) => out.push_str(&n.to_string()),
                None => {
                    out.push_str("suc ");
                    self.term(inner, 2, out);
                }
            },
            Prodrec { r, p, q, motive, scrut, body } => {
                out.push_str(&format!("prodrec[{},{},{}] ", self.g(*r), self.g(*p), self.g(*q)));
                self.motive(motive, out);
                out.push(' ');
                self.term(scrut, 3, out);
                out.push(' ');
                self.branch2(body, out);
            }
            Natrec { p, q, r, motive, zero, succ, scrut } => {
                out.push_str(&format!("natrec[{},{},{}] ", self.g(*p), self.g(*q), self.g(*r)));
                self.motive(motive, out);
                out.push(' ');
                self.term(zero, 3, out);
                out.push(' ');
                self.branch2(succ, out);
                out.push(' ');
                self.term(scrut, 3, out);
            }
            Emptyrec { p, motive, scrut } => {
                out.push_str(&format!("emptyrec[{}] ", self.g(*p)));
                self.term(motive, 3, out);
                out.push(' ');
                self.term(scrut, 3, out);
            }
            Unitrec { p, q, motive, scrut, body } => {
                out.push_str(&format!("unitrec[{},{}] ", self.g(*p), self.g(*q)));
                self.motive(motive, out);
                out.push(' ');
                self.term(scrut, 3, out);
                out.push(' ');
                self.term(body, 3, out);
            }
            Ann { term, ty } => {
                out.push('(');
                self.term(term, 0, out);
                out.push_str(" : ");
                self.term(ty, 0, out);
                out.push(')');
            }
        }
    }

    fn binder_ann(&mut self, dom: &Term, cod: &Term, sep: &str, out: &mut String) {
        self.bind(1, |s, xs| {
            out.push_str(&format!("{} : ", xs[0]));
            s.names.pop();
            s.term(dom, 0, out);
            s.names.push(xs[0].clone());
            out.push(')');
            out.push_str(sep);
            s.term(cod, 0, out);
        });
    }

    fn motive(&mut self, motive: &Term, out: &mut String) {
        self.bind(1, |s, xs| {
            out.push_str(&format!("({}. ", xs[0]));
            s.term(motive, 0, out);
            out.push(')');
        });
    }

    fn branch2(&mut self, body: &Term, out: &mut String) {
        self.bind(2, |s, xs| {
            out.push_str(&format!("({} {}. ", xs[0], xs[1]));
            s.term(body, 0, out);
            out.push(')');
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_substitution_hits_only_index_zero() {
        let t = app(Grade(0), var(0), var(1));
        assert_eq!(subst1(&t, &Term::Zero), app(Grade(0), Term::Zero, var(0)));
    }

    #[test]
    fn substitution_under_binder_shifts() {
        // (λ. #1)[#0] = λ. #1
        let t = lam(Grade(0), var(1));
        assert_eq!(subst1(&t, &var(0)), lam(Grade(0), var(1)));
        // (λ. #1)[zero] = λ. zero
        assert_eq!(subst1(&t, &Term::Zero), lam(Grade(0), Term::Zero));
    }

    #[test]
    fn double_substitution_order() {
        let t = pair(Strength::Weak, Grade(0), var(1), var(0));
        assert_eq!(subst2(&t, &numeral(1), &numeral(2)), pair(Strength::Weak, Grade(0), numeral(1), numeral(2)));
    }

    #[test]
    fn weakening_actions() {
        let r = Wk::Id.step().lift();
        assert_eq!(r.apply_var(0), 0);
        assert_eq!(r.apply_var(1), 2);
        assert_eq!(Wk::Id.step().apply_var(3), 4);
    }

    #[test]
    fn numerals_round_trip() {
        assert_eq!(numeral(4).as_numeral(), Some(4));
        assert_eq!(suc(var(0)).as_numeral(), None);
    }

    #[test]
    fn scope_checks() {
        assert!(lam(Grade(0), var(0)).scoped_in(0));
        assert!(!lam(Grade(0), var(1)).scoped_in(0));
        assert!(natrec(Grade(0), Grade(0), Grade(0), Term::Nat, var(0), var(2), var(0)).scoped_in(1));
    }
}
