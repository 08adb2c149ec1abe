//! Erasure into an untyped λ-calculus with pairs, naturals and units, plus
//! call-by-name and call-by-value evaluators for the result.

use crate::config::{ModeStructure, Strictness};
use crate::grades::Modality;
use crate::reduce::{Fuel, ReduceError};
use crate::syntax::{subst1, subst2, Binding, Strength, Term};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Var(usize),
    Lam(Box<Target>),
    App(Box<Target>, Box<Target>),
    Pair(Box<Target>, Box<Target>),
    Fst(Box<Target>),
    Snd(Box<Target>),
    /// Body binds the first (`#1`) and second (`#0`) components.
    Prodrec(Box<Target>, Box<Target>),
    Zero,
    Suc(Box<Target>),
    /// Successor branch binds the predecessor (`#1`) and the result (`#0`).
    Natrec(Box<Target>, Box<Target>, Box<Target>),
    Unitrec(Box<Target>, Box<Target>),
    Star,
    /// `↯`: a value standing for erased content.
    Undefined,
}

use Target as T;

fn b(t: Target) -> Box<Target> {
    Box::new(t)
}

pub fn t_lam(body: Target) -> Target {
    T::Lam(b(body))
}
pub fn t_app(f: Target, a: Target) -> Target {
    T::App(b(f), b(a))
}

/// `(λx. x x) (λx. x x)`.
pub fn loop_term() -> Target {
    let w = t_lam(t_app(T::Var(0), T::Var(0)));
    t_app(w.clone(), w)
}

impl Binding for Target {
    fn var(i: usize) -> Self {
        T::Var(i)
    }

    fn map_vars(&self, d: usize, f: &mut dyn FnMut(usize, usize) -> Self) -> Self {
        let mut go = |t: &Target, k: usize| b(t.map_vars(d + k, f));
        match self {
            T::Var(i) => f(*i, d),
            T::Zero | T::Star | T::Undefined => self.clone(),
            T::Lam(x) => T::Lam(go(x, 1)),
            T::App(x, y) => T::App(go(x, 0), go(y, 0)),
            T::Pair(x, y) => T::Pair(go(x, 0), go(y, 0)),
            T::Fst(x) => T::Fst(go(x, 0)),
            T::Snd(x) => T::Snd(go(x, 0)),
            T::Prodrec(x, y) => T::Prodrec(go(x, 0), go(y, 2)),
            T::Suc(x) => T::Suc(go(x, 0)),
            T::Natrec(z, s, n) => T::Natrec(go(z, 0), go(s, 2), go(n, 0)),
            T::Unitrec(x, y) => T::Unitrec(go(x, 0), go(y, 0)),
        }
    }
}

impl Target {
    pub fn is_value(&self) -> bool {
        matches!(self, T::Lam(_) | T::Pair(..) | T::Zero | T::Suc(_) | T::Star | T::Undefined)
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            T::Zero => Some(0),
            T::Suc(x) => x.as_numeral().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn mentions(&self, i: usize) -> bool {
        let mut hit = false;
        self.map_vars(0, &mut |j, d| {
            hit |= j == i + d;
            T::Var(j)
        });
        hit
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.map_vars(0, &mut |j, _| {
            n += 1;
            T::Var(j)
        });
        // count non-variable nodes too
        n + self.nodes()
    }

    fn nodes(&self) -> usize {
        match self {
            T::Var(_) => 0,
            T::Zero | T::Star | T::Undefined => 1,
            T::Lam(x) | T::Fst(x) | T::Snd(x) | T::Suc(x) => 1 + x.nodes(),
            T::App(x, y) | T::Pair(x, y) | T::Prodrec(x, y) | T::Unitrec(x, y) => 1 + x.nodes() + y.nodes(),
            T::Natrec(x, y, z) => 1 + x.nodes() + y.nodes() + z.nodes(),
        }
    }

    /// Stable JSON AST: `{"node": .., "children": [..]}`, variables carry
    /// `"index"`.
    pub fn to_json(&self) -> Value {
        let node = |name: &str, kids: &[&Target]| {
            json!({ "node": name, "children": kids.iter().map(|k| k.to_json()).collect::<Vec<_>>() })
        };
        match self {
            T::Var(i) => json!({ "node": "var", "index": i }),
            T::Lam(x) => node("lam", &[x]),
            T::App(x, y) => node("app", &[x, y]),
            T::Pair(x, y) => node("pair", &[x, y]),
            T::Fst(x) => node("fst", &[x]),
            T::Snd(x) => node("snd", &[x]),
            T::Prodrec(x, y) => node("prodrec", &[x, y]),
            T::Zero => node("zero", &[]),
            T::Suc(x) => node("suc", &[x]),
            T::Natrec(x, y, z) => node("natrec", &[x, y, z]),
            T::Unitrec(x, y) => node("unitrec", &[x, y]),
            T::Star => node("star", &[]),
            T::Undefined => node("undefined", &[]),
        }
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.print(0, 0, &mut out);
        out
    }

    // prec: 0 top, 1 application head, 2 argument
    fn print(&self, depth: usize, prec: u8, out: &mut String) {
        let name = |i: usize| if i < depth { format!("x{}", depth - 1 - i) } else { format!("#{}", i - depth) };
        let need = match self {
            T::Lam(_) => 0,
            T::App(..) | T::Fst(_) | T::Snd(_) | T::Prodrec(..) | T::Natrec(..) | T::Unitrec(..) => 1,
            T::Suc(_) if self.as_numeral().is_none() => 1,
            _ => 2,
        };
        if need < prec {
            out.push('(');
            self.print(depth, 0, out);
            out.push(')');
            return;
        }
        match self {
            T::Var(i) => out.push_str(&name(*i)),
            T::Lam(x) => {
                out.push_str(&format!("\\x{depth}. "));
                x.print(depth + 1, 0, out);
            }
            T::App(f, a) => {
                f.print(depth, 1, out);
                out.push(' ');
                a.print(depth, 2, out);
            }
            T::Pair(x, y) => {
                out.push('(');
                x.print(depth, 0, out);
                out.push_str(", ");
                y.print(depth, 0, out);
                out.push(')');
            }
            T::Fst(x) | T::Snd(x) => {
                out.push_str(if matches!(self, T::Fst(_)) { "fst " } else { "snd " });
                x.print(depth, 2, out);
            }
            T::Prodrec(x, y) => {
                out.push_str("prodrec ");
                x.print(depth, 2, out);
                out.push_str(&format!(" (x{} x{}. ", depth, depth + 1));
                y.print(depth + 2, 0, out);
                out.push(')');
            }
            T::Zero => out.push('0'),
            T::Suc(x) => match self.as_numeral() {
                Some(n) => out.push_str(&n.to_string()),
                None => {
                    out.push_str("suc ");
                    x.print(depth, 2, out);
                }
            },
            T::Natrec(z, s, n) => {
                out.push_str("natrec ");
                z.print(depth, 2, out);
                out.push_str(&format!(" (x{} x{}. ", depth, depth + 1));
                s.print(depth + 2, 0, out);
                out.push_str(") ");
                n.print(depth, 2, out);
            }
            T::Unitrec(x, y) => {
                out.push_str("unitrec ");
                x.print(depth, 2, out);
                out.push(' ');
                y.print(depth, 2, out);
            }
            T::Star => out.push_str("star"),
            T::Undefined => out.push('!'),
        }
    }
}

// ---------------------------------------------------------------------------
// Erasure

/// Erasure settings: which erasure function and which `0` to test against.
#[derive(Clone, Copy)]
pub struct Eraser<'a> {
    pub m: &'a Modality,
    pub strictness: Strictness,
    pub modes: ModeStructure,
}

impl Eraser<'_> {
    fn strict(&self) -> bool {
        self.strictness == Strictness::Strict
    }

    fn erased(&self, p: crate::grades::Grade) -> bool {
        p == self.m.zero()
    }

    fn moded(&self) -> bool {
        self.modes == ModeStructure::Moded
    }

    /// Replacement for types and other erased code.
    fn junk(&self) -> Target {
        if self.strict() {
            T::Undefined
        } else {
            loop_term()
        }
    }

    pub fn erase(&self, t: &Term) -> Target {
        use Term::*;
        match t {
            U | Nat | Empty | Unit(_) | Pi { .. } | Sigma { .. } => self.junk(),
            Var(i) => T::Var(*i),
            Lam { p, body } => {
                let eb = self.erase(body);
                if self.erased(*p) && !self.strict() {
                    subst1(&eb, &loop_term())
                } else {
                    t_lam(eb)
                }
            }
            App { p, fun, arg } => {
                let ef = self.erase(fun);
                if self.erased(*p) {
                    if self.strict() {
                        t_app(ef, T::Undefined)
                    } else {
                        ef
                    }
                } else {
                    t_app(ef, self.erase(arg))
                }
            }
            Pair { p, fst, snd, .. } => {
                if self.moded() && self.erased(*p) {
                    return self.erase(snd);
                }
                let (a, c) = (self.erase(fst), self.erase(snd));
                if self.strict() {
                    let mk = t_lam(t_lam(T::Pair(b(T::Var(1)), b(T::Var(0)))));
                    t_app(t_app(mk, a), c)
                } else {
                    T::Pair(b(a), b(c))
                }
            }
            Fst { p, pair } => {
                if self.moded() && self.erased(*p) {
                    loop_term()
                } else {
                    T::Fst(b(self.erase(pair)))
                }
            }
            Snd { p, pair } => {
                if self.moded() && self.erased(*p) {
                    self.erase(pair)
                } else {
                    T::Snd(b(self.erase(pair)))
                }
            }
            Prodrec { r, p, scrut, body, .. } => {
                let eu = self.erase(body);
                if self.erased(*r) {
                    subst2(&eu, &loop_term(), &loop_term())
                } else if self.moded() && self.erased(*p) {
                    // (λ u)[loop] applied to the erased pair, which is just
                    // its second component
                    t_app(subst1(&t_lam(eu), &loop_term()), self.erase(scrut))
                } else {
                    T::Prodrec(b(self.erase(scrut)), b(eu))
                }
            }
            Zero => T::Zero,
            Suc(x) => {
                let ex = self.erase(x);
                if self.strict() {
                    t_app(t_lam(T::Suc(b(T::Var(0)))), ex)
                } else {
                    T::Suc(b(ex))
                }
            }
            Natrec { zero, succ, scrut, .. } => {
                T::Natrec(b(self.erase(zero)), b(self.erase(succ)), b(self.erase(scrut)))
            }
            Emptyrec { .. } => loop_term(),
            Star(_) => T::Star,
            Unitrec { p, scrut, body, .. } => {
                if self.erased(*p) {
                    self.erase(body)
                } else {
                    T::Unitrec(b(self.erase(scrut)), b(self.erase(body)))
                }
            }
            Ann { term, .. } => self.erase(term),
        }
    }
}

pub fn erase(m: &Modality, strictness: Strictness, modes: ModeStructure, t: &Term) -> Target {
    Eraser { m, strictness, modes }.erase(t)
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TStep {
    Stepped(Target),
    Value,
    Stuck,
}

/// One step of target reduction under the given strategy.
pub fn step(t: &Target, s: Strictness) -> TStep {
    let strict = s == Strictness::Strict;
    let cong = |x: &Target, rebuild: &dyn Fn(Target) -> Target| match step(x, s) {
        TStep::Stepped(y) => TStep::Stepped(rebuild(y)),
        _ => TStep::Stuck,
    };
    match t {
        T::Lam(_) | T::Pair(..) | T::Zero | T::Suc(_) | T::Star | T::Undefined => TStep::Value,
        T::Var(_) => TStep::Stuck,
        T::App(f, a) => {
            if !f.is_value() {
                return cong(f, &|g| T::App(b(g), a.clone()));
            }
            if strict && !a.is_value() {
                return cong(a, &|x| T::App(f.clone(), b(x)));
            }
            match &**f {
                T::Lam(body) => TStep::Stepped(subst1(&**body, &**a)),
                _ => TStep::Stuck,
            }
        }
        T::Fst(x) => match &**x {
            T::Pair(a, _) => TStep::Stepped((**a).clone()),
            y if y.is_value() => TStep::Stuck,
            _ => cong(x, &|y| T::Fst(b(y))),
        },
        T::Snd(x) => match &**x {
            T::Pair(_, c) => TStep::Stepped((**c).clone()),
            y if y.is_value() => TStep::Stuck,
            _ => cong(x, &|y| T::Snd(b(y))),
        },
        T::Prodrec(x, u) => match &**x {
            T::Pair(a, c) => TStep::Stepped(subst2(&**u, &**a, &**c)),
            y if y.is_value() => TStep::Stuck,
            _ => cong(x, &|y| T::Prodrec(b(y), u.clone())),
        },
        T::Natrec(z, sc, n) => match &**n {
            T::Zero => TStep::Stepped((**z).clone()),
            T::Suc(v) => {
                let rec = T::Natrec(z.clone(), sc.clone(), v.clone());
                TStep::Stepped(subst2(&**sc, &**v, &rec))
            }
            y if y.is_value() => TStep::Stuck,
            _ => cong(n, &|y| T::Natrec(z.clone(), sc.clone(), b(y))),
        },
        T::Unitrec(x, u) => match &**x {
            T::Star => TStep::Stepped((**u).clone()),
            y if y.is_value() => TStep::Stuck,
            _ => cong(x, &|y| T::Unitrec(b(y), u.clone())),
        },
    }
}

/// Evaluates to a value (or a stuck term).
pub fn eval(t: &Target, s: Strictness, fuel: &mut Fuel) -> Result<Target, ReduceError> {
    let mut cur = t.clone();
    loop {
        match step(&cur, s) {
            TStep::Stepped(next) => {
                fuel.burn()?;
                cur = next;
            }
            _ => return Ok(cur),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetNumeral {
    Value(u64),
    Stuck(Target),
    Timeout,
}

/// Reads a numeral from a target program. Call-by-name keeps reducing under
/// `suc`; call-by-value requires the value to be a numeral already.
pub fn read_numeral(t: &Target, s: Strictness, fuel: &mut Fuel) -> TargetNumeral {
    let mut cur = t.clone();
    let mut n = 0u64;
    loop {
        let v = match eval(&cur, s, fuel) {
            Ok(v) => v,
            Err(_) => return TargetNumeral::Timeout,
        };
        match v {
            T::Zero => return TargetNumeral::Value(n),
            T::Suc(x) => match s {
                Strictness::Strict => {
                    return match x.as_numeral() {
                        Some(k) => TargetNumeral::Value(n + k + 1),
                        None => TargetNumeral::Stuck(T::Suc(x)),
                    }
                }
                Strictness::NonStrict => {
                    n += 1;
                    cur = *x;
                }
            },
            other => return TargetNumeral::Stuck(other),
        }
    }
}

/// Helpers for strength-sensitive callers.
pub fn is_strong(k: Strength) -> bool {
    k == Strength::Strong
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    fn id_nat_zero(m: &Modality) -> Term {
        let (z, w) = (m.zero(), m.one());
        let id = lam(z, lam(w, var(0)));
        app(w, app(z, id, Term::Nat), Term::Zero)
    }

    #[test]
    fn paper_identity_erasures() {
        let m = Modality::erasure();
        let t = id_nat_zero(&m);
        let ns = erase(&m, Strictness::NonStrict, ModeStructure::Plain, &t);
        assert_eq!(ns, t_app(t_lam(T::Var(0)), T::Zero));
        let st = erase(&m, Strictness::Strict, ModeStructure::Plain, &t);
        assert_eq!(st, t_app(t_app(t_lam(t_lam(T::Var(0))), T::Undefined), T::Zero));
        for (x, s) in [(ns, Strictness::NonStrict), (st, Strictness::Strict)] {
            assert_eq!(read_numeral(&x, s, &mut Fuel(100)), TargetNumeral::Value(0));
        }
    }

    #[test]
    fn loop_steps_to_itself() {
        for s in [Strictness::NonStrict, Strictness::Strict] {
            assert_eq!(step(&loop_term(), s), TStep::Stepped(loop_term()));
            assert_eq!(read_numeral(&loop_term(), s, &mut Fuel(50)), TargetNumeral::Timeout);
        }
    }

    #[test]
    fn cbn_ignores_diverging_argument() {
        let t = t_app(t_lam(T::Zero), loop_term());
        assert_eq!(read_numeral(&t, Strictness::NonStrict, &mut Fuel(10)), TargetNumeral::Value(0));
        assert_eq!(read_numeral(&t, Strictness::Strict, &mut Fuel(10)), TargetNumeral::Timeout);
    }

    #[test]
    fn strict_suc_must_wrap_numeral() {
        let t = T::Suc(b(t_app(t_lam(T::Var(0)), T::Zero)));
        assert!(matches!(read_numeral(&t, Strictness::Strict, &mut Fuel(10)), TargetNumeral::Stuck(_)));
        assert_eq!(read_numeral(&t, Strictness::NonStrict, &mut Fuel(10)), TargetNumeral::Value(1));
    }

    #[test]
    fn json_and_text_forms() {
        let t = t_app(t_lam(T::Var(0)), T::Undefined);
        assert_eq!(t.pretty(), "(\\x0. x0) !");
        assert_eq!(
            t.to_json(),
            json!({"node":"app","children":[{"node":"lam","children":[{"node":"var","index":0}]},{"node":"undefined","children":[]}]})
        );
    }

    #[test]
    fn moded_pair_erasure() {
        let m = Modality::erasure();
        let (z, w) = (m.zero(), m.one());
        let p = pair(Strength::Strong, z, Term::Zero, numeral(1));
        let e = erase(&m, Strictness::NonStrict, ModeStructure::Moded, &p);
        assert_eq!(e, T::Suc(b(T::Zero)));
        let f = fst(z, var(0));
        assert_eq!(erase(&m, Strictness::NonStrict, ModeStructure::Moded, &f), loop_term());
        let s = snd(z, var(0));
        assert_eq!(erase(&m, Strictness::NonStrict, ModeStructure::Moded, &s), T::Var(0));
        let s = snd(w, var(0));
        assert_eq!(erase(&m, Strictness::NonStrict, ModeStructure::Moded, &s), T::Snd(b(T::Var(0))));
    }
}
