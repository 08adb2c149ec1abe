//! Usage inference and checking.
//!
//! Two engines: the plain one (one mode, Σ-family grades fixed to 1) and the
//! moded one with modes `0ᵐ`/`1ᵐ`. Both compute the principal usage context
//! `⌈t⌉` while verifying the binder and restriction side conditions of every
//! subterm, so `γ ▸ t` holds iff inference succeeds and `γ ≤ ⌈t⌉`.

use crate::config::{Config, ModeStructure};
use crate::grades::{Grade, Modality, SubstMatrix, UsageCtx};
use crate::syntax::{Strength, Subst, Term};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Zero,
    One,
}

impl Mode {
    /// `⌜m⌝`.
    pub fn grade(self, m: &Modality) -> Grade {
        match self {
            Mode::Zero => m.zero(),
            Mode::One => m.one(),
        }
    }

    /// `⌞p⌟`.
    pub fn of_grade(m: &Modality, p: Grade) -> Mode {
        if p == m.zero() {
            Mode::Zero
        } else {
            Mode::One
        }
    }

    /// `m ᵐ· p`.
    pub fn scale(self, m: &Modality, p: Grade) -> Mode {
        match self {
            Mode::Zero => Mode::Zero,
            Mode::One => Mode::of_grade(m, p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UsageErrorKind {
    /// A binder's annotation exceeds what its body allows.
    BinderGrade,
    /// A projection at a grade the mode forbids.
    Projection,
    Restriction,
    StarStrongNotInferable,
    /// The requested context is not below the inferred one.
    NotBounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UsageError {
    pub kind: UsageErrorKind,
    pub path: Vec<u8>,
    pub message: String,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

impl std::error::Error for UsageError {}

type UResult<T> = Result<T, UsageError>;

struct Engine<'a> {
    cfg: &'a Config,
    path: Vec<u8>,
}

impl<'a> Engine<'a> {
    fn m(&self) -> &'a Modality {
        self.cfg.m()
    }

    fn err(&self, kind: UsageErrorKind, message: String) -> UsageError {
        UsageError { kind, path: self.path.clone(), message }
    }

    fn at<R>(&mut self, child: u8, f: impl FnOnce(&mut Self) -> UResult<R>) -> UResult<R> {
        self.path.push(child);
        let r = f(self)?;
        self.path.pop();
        Ok(r)
    }

    /// Requires `want ≤ have` for a bound variable.
    fn binder(&self, what: &str, want: Grade, have: Grade) -> UResult<()> {
        let m = self.m();
        if m.le(want, have) {
            Ok(())
        } else {
            Err(self.err(
                UsageErrorKind::BinderGrade,
                format!(
                    "{what} is annotated {} but its uses need {} (and {} ≰ {})",
                    m.grade_name(want),
                    m.grade_name(have),
                    m.grade_name(want),
                    m.grade_name(have)
                ),
            ))
        }
    }

    fn restriction(&self, ok: bool, what: &str, p: Grade) -> UResult<()> {
        if ok {
            Ok(())
        } else {
            Err(self.err(
                UsageErrorKind::Restriction,
                format!("{what} at grade {} is not allowed", self.m().grade_name(p)),
            ))
        }
    }

    fn star_strong(&self, n: usize) -> UResult<UsageCtx> {
        if self.m().zero_is_greatest() {
            Ok(UsageCtx::zeros(self.m(), n))
        } else {
            Err(self.err(
                UsageErrorKind::StarStrongNotInferable,
                "star& accepts any context, so it has no principal one here".into(),
            ))
        }
    }

    // -----------------------------------------------------------------------
    // Plain rules

    fn plain(&mut self, t: &Term, n: usize) -> UResult<UsageCtx> {
        use Term::*;
        let m = self.m();
        let r = &self.cfg.restrictions;
        Ok(match t {
            U | Nat | Empty | Unit(_) | Zero | Star(Strength::Weak) => UsageCtx::zeros(m, n),
            Star(Strength::Strong) => self.star_strong(n)?,
            Var(i) => UsageCtx::unit(m, n, *i),
            Pi { p, q, dom, cod } => {
                let ga = self.at(0, |s| s.plain(dom, n))?;
                let d = self.at(1, |s| s.plain(cod, n + 1))?;
                self.binder("Π codomain variable", *q, d.head())?;
                ga.scale(m, *p).add(m, &d.tail())
            }
            Sigma { q, fst, snd, .. } => {
                let ga = self.at(0, |s| s.plain(fst, n))?;
                let d = self.at(1, |s| s.plain(snd, n + 1))?;
                self.binder("Σ second-component variable", *q, d.head())?;
                ga.add(m, &d.tail())
            }
            Lam { p, body } => {
                let d = self.at(0, |s| s.plain(body, n + 1))?;
                self.binder("λ-bound variable", *p, d.head())?;
                d.tail()
            }
            App { p, fun, arg } => {
                let g = self.at(0, |s| s.plain(fun, n))?;
                let d = self.at(1, |s| s.plain(arg, n))?;
                g.add(m, &d.scale(m, *p))
            }
            Pair { k, fst, snd, .. } => {
                let g = self.at(0, |s| s.plain(fst, n))?;
                let d = self.at(1, |s| s.plain(snd, n))?;
                match k {
                    Strength::Weak => g.add(m, &d),
                    Strength::Strong => g.meet(m, &d),
                }
            }
            Fst { pair, .. } | Snd { pair, .. } => self.at(0, |s| s.plain(pair, n))?,
            Suc(x) => self.at(0, |s| s.plain(x, n))?,
            Prodrec { r: rg, q, motive, scrut, body, .. } => {
                self.restriction(r.prodrec_ok(*rg), "prodrec", *rg)?;
                let eta = self.at(0, |s| s.plain(motive, n + 1))?;
                self.binder("prodrec motive variable", *q, eta.head())?;
                let g = self.at(1, |s| s.plain(scrut, n))?;
                let d = self.at(2, |s| s.plain(body, n + 2))?;
                self.binder("prodrec second component", *rg, d.get(0))?;
                self.binder("prodrec first component", *rg, d.get(1))?;
                g.scale(m, *rg).add(m, &d.tail().tail())
            }
            Natrec { p, q, r: rr, motive, zero, succ, scrut } => {
                let eta = self.at(0, |s| s.plain(motive, n + 1))?;
                self.binder("natrec motive variable", *q, eta.head())?;
                let gz = self.at(1, |s| s.plain(zero, n))?;
                let d = self.at(2, |s| s.plain(succ, n + 2))?;
                self.binder("natrec recursive result", *rr, d.get(0))?;
                self.binder("natrec predecessor", *p, d.get(1))?;
                let gn = self.at(3, |s| s.plain(scrut, n))?;
                UsageCtx::nr(m, *p, *rr, &gz, &d.tail().tail(), &gn)
            }
            Emptyrec { p, motive, scrut } => {
                self.restriction(r.emptyrec_ok(*p), "emptyrec", *p)?;
                self.at(0, |s| s.plain(motive, n))?;
                self.at(1, |s| s.plain(scrut, n))?.scale(m, *p)
            }
            Unitrec { p, q, motive, scrut, body } => {
                self.restriction(r.unitrec_ok(*p), "unitrec", *p)?;
                let eta = self.at(0, |s| s.plain(motive, n + 1))?;
                self.binder("unitrec motive variable", *q, eta.head())?;
                let g = self.at(1, |s| s.plain(scrut, n))?;
                let d = self.at(2, |s| s.plain(body, n))?;
                g.scale(m, *p).add(m, &d)
            }
            Ann { term, .. } => self.at(0, |s| s.plain(term, n))?,
        })
    }

    // -----------------------------------------------------------------------
    // Moded rules

    fn moded(&mut self, t: &Term, n: usize, md: Mode) -> UResult<UsageCtx> {
        use Term::*;
        let m = self.m();
        let r = &self.cfg.restrictions;
        let top = md.grade(m);
        Ok(match t {
            U | Nat | Empty | Unit(_) | Zero | Star(Strength::Weak) => UsageCtx::zeros(m, n),
            Star(Strength::Strong) => match md {
                Mode::Zero => UsageCtx::zeros(m, n),
                Mode::One => self.star_strong(n)?,
            },
            Var(i) => UsageCtx::unit(m, n, *i).scale(m, top),
            Pi { p, q, dom: a, cod: b } | Sigma { p, q, fst: a, snd: b, .. } => {
                let ga = self.at(0, |s| s.moded(a, n, md.scale(m, *p)))?;
                let d = self.at(1, |s| s.moded(b, n + 1, md))?;
                self.binder("bound variable of the type former", m.mul(top, *q), d.head())?;
                ga.scale(m, *p).add(m, &d.tail())
            }
            Lam { p, body } => {
                let d = self.at(0, |s| s.moded(body, n + 1, md))?;
                self.binder("λ-bound variable", m.mul(top, *p), d.head())?;
                d.tail()
            }
            App { p, fun, arg } => {
                let g = self.at(0, |s| s.moded(fun, n, md))?;
                let d = self.at(1, |s| s.moded(arg, n, md.scale(m, *p)))?;
                g.add(m, &d.scale(m, *p))
            }
            Pair { k, p, fst, snd } => {
                let g = self.at(0, |s| s.moded(fst, n, md.scale(m, *p)))?.scale(m, *p);
                let d = self.at(1, |s| s.moded(snd, n, md))?;
                match k {
                    Strength::Weak => g.add(m, &d),
                    Strength::Strong => g.meet(m, &d),
                }
            }
            Fst { p, pair } => {
                let g = self.at(0, |s| s.moded(pair, n, md))?;
                if !m.le(md.scale(m, *p).grade(m), top) {
                    return Err(self.err(
                        UsageErrorKind::Projection,
                        format!("fst[{}] cannot be used in mode {:?}", m.grade_name(*p), md),
                    ));
                }
                g
            }
            Snd { pair, .. } => self.at(0, |s| s.moded(pair, n, md))?,
            Suc(x) => self.at(0, |s| s.moded(x, n, md))?,
            Prodrec { r: rg, p, motive, scrut, body, .. } => {
                self.restriction(r.prodrec_ok(*rg), "prodrec", *rg)?;
                self.motive(motive, n)?;
                let g = self.at(1, |s| s.moded(scrut, n, md.scale(m, *rg)))?;
                let d = self.at(2, |s| s.moded(body, n + 2, md))?;
                self.binder("prodrec second component", m.mul(top, *rg), d.get(0))?;
                self.binder("prodrec first component", m.mul(m.mul(top, *rg), *p), d.get(1))?;
                g.scale(m, *rg).add(m, &d.tail().tail())
            }
            Natrec { p, r: rr, motive, zero, succ, scrut, .. } => {
                self.motive(motive, n)?;
                let gz = self.at(1, |s| s.moded(zero, n, md))?;
                let d = self.at(2, |s| s.moded(succ, n + 2, md))?;
                self.binder("natrec recursive result", m.mul(top, *rr), d.get(0))?;
                self.binder("natrec predecessor", m.mul(top, *p), d.get(1))?;
                let gn = self.at(3, |s| s.moded(scrut, n, md))?;
                UsageCtx::nr(m, *p, *rr, &gz, &d.tail().tail(), &gn)
            }
            Emptyrec { p, motive, scrut } => {
                self.restriction(r.emptyrec_ok(*p), "emptyrec", *p)?;
                self.at(0, |s| s.moded(motive, n, Mode::Zero))?;
                self.at(1, |s| s.moded(scrut, n, md.scale(m, *p)))?.scale(m, *p)
            }
            Unitrec { p, motive, scrut, body, .. } => {
                self.restriction(r.unitrec_ok(*p), "unitrec", *p)?;
                self.motive(motive, n)?;
                let g = self.at(1, |s| s.moded(scrut, n, md.scale(m, *p)))?;
                let d = self.at(2, |s| s.moded(body, n, md))?;
                g.scale(m, *p).add(m, &d)
            }
            Ann { term, .. } => self.at(0, |s| s.moded(term, n, md))?,
        })
    }

    /// Motives are checked in mode `0ᵐ` with the bound variable at grade 0.
    fn motive(&mut self, motive: &Term, n: usize) -> UResult<()> {
        let eta = self.at(0, |s| s.moded(motive, n + 1, Mode::Zero))?;
        self.binder("motive variable", self.m().zero(), eta.head())
    }

    fn infer(&mut self, t: &Term, n: usize, md: Mode) -> UResult<UsageCtx> {
        match self.cfg.modes {
            ModeStructure::Plain => self.plain(t, n),
            ModeStructure::Moded => self.moded(t, n, md),
        }
    }

    /// `γ ▸[m] t`. Decomposes the forms whose rule is invertible so that
    /// `star&` is accepted in checking positions; everything else goes
    /// through inference.
    fn check(&mut self, gamma: &UsageCtx, t: &Term, md: Mode) -> UResult<()> {
        let m = self.m();
        let plain = self.cfg.modes == ModeStructure::Plain;
        match t {
            Term::Star(Strength::Strong) => return Ok(()),
            Term::Lam { p, body } => {
                let p = if plain { *p } else { m.mul(md.grade(m), *p) };
                return self.at(0, |s| s.check(&gamma.snoc(p), body, md));
            }
            Term::Pair { k: Strength::Strong, fst, snd, .. } if plain => {
                self.at(0, |s| s.check(gamma, fst, md))?;
                return self.at(1, |s| s.check(gamma, snd, md));
            }
            Term::Ann { term, .. } => return self.at(0, |s| s.check(gamma, term, md)),
            Term::Suc(x) | Term::Snd { pair: x, .. } => return self.at(0, |s| s.check(gamma, x, md)),
            Term::Fst { pair, .. } if plain => return self.at(0, |s| s.check(gamma, pair, md)),
            _ => {}
        }
        let inferred = self.infer(t, gamma.len(), md)?;
        if gamma.le(m, &inferred) {
            Ok(())
        } else {
            Err(self.err(
                UsageErrorKind::NotBounded,
                format!("{} is not below the uses {}", gamma.render(m, None), inferred.render(m, None)),
            ))
        }
    }
}

/// `⌈t⌉` over a scope of `n` variables, in mode `1ᵐ` when modes are on.
pub fn infer_usage(cfg: &Config, t: &Term, n: usize) -> Result<UsageCtx, UsageError> {
    Engine { cfg, path: Vec::new() }.infer(t, n, Mode::One)
}

/// `⌈t⌉ₘ` with the moded rules regardless of the configured mode structure.
pub fn infer_usage_moded(cfg: &Config, t: &Term, n: usize, md: Mode) -> Result<UsageCtx, UsageError> {
    Engine { cfg, path: Vec::new() }.moded(t, n, md)
}

/// `γ ▸ t`.
pub fn check_usage(cfg: &Config, gamma: &UsageCtx, t: &Term) -> Result<(), UsageError> {
    Engine { cfg, path: Vec::new() }.check(gamma, t, Mode::One)
}

pub fn check_usage_moded(cfg: &Config, gamma: &UsageCtx, t: &Term, md: Mode) -> Result<(), UsageError> {
    let cfg = Config { modes: ModeStructure::Moded, ..cfg.clone() };
    Engine { cfg: &cfg, path: Vec::new() }.check(gamma, t, md)
}

/// `∥σ∥` for `σ` from a scope of `m` variables into one of `n`: row `i`
/// is `⌈σ(i)⌉`.
pub fn infer_subst_matrix(cfg: &Config, sigma: &Subst<Term>, m: usize, n: usize) -> Result<SubstMatrix, UsageError> {
    let rows = (0..m).map(|i| infer_usage(cfg, &sigma.get(i), n)).collect::<Result<Vec<_>, _>>()?;
    Ok(SubstMatrix { rows, cols: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grades::Modality;
    use crate::syntax::*;

    fn names(m: &Modality, c: &UsageCtx) -> Vec<String> {
        c.0.iter().map(|g| m.grade_name(*g).to_string()).collect()
    }

    fn plus_body(m: &Modality) -> Term {
        // natrec[0,0,1] (m. Nat) k (m r. suc r) n   with k = #1, n = #0
        let (z, o) = (m.zero(), m.one());
        natrec(z, z, o, Term::Nat, var(1), suc(var(0)), var(0))
    }

    #[test]
    fn plus_usage_per_instance() {
        for (m, want) in [
            (Modality::linear(), ["1", "1"]),
            (Modality::linear_bad(), ["w", "w"]),
            (Modality::erasure(), ["w", "w"]),
        ] {
            let cfg = Config::new(m.clone());
            let c = infer_usage(&cfg, &plus_body(&m), 2).unwrap();
            assert_eq!(names(&m, &c), want, "{}", m.name());
        }
    }

    #[test]
    fn doubling_under_star_nr_is_linear() {
        let m = Modality::linear_bad();
        let (z, o) = (m.zero(), m.one());
        let t = natrec(z, z, o, Term::Nat, var(0), suc(var(0)), var(0));
        let c = infer_usage(&Config::new(m.clone()), &t, 1).unwrap();
        assert_eq!(names(&m, &c), ["1"]);
        let good = Modality::linear();
        let c = infer_usage(&Config::new(good.clone()), &t, 1).unwrap();
        assert_eq!(names(&good, &c), ["w"]);
    }

    #[test]
    fn lambda_annotation_is_checked() {
        let m = Modality::linear();
        let cfg = Config::new(m.clone());
        let dup = lam(m.one(), app(m.one(), app(m.one(), var(1), var(0)), var(0)));
        let e = infer_usage(&cfg, &dup, 1).unwrap_err();
        assert_eq!(e.kind, UsageErrorKind::BinderGrade);
        assert_eq!(e.path, Vec::<u8>::new());
    }

    #[test]
    fn strong_star_checks_but_does_not_infer() {
        let m = Modality::linear();
        let cfg = Config::new(m.clone());
        assert_eq!(
            infer_usage(&cfg, &Term::Star(Strength::Strong), 1).unwrap_err().kind,
            UsageErrorKind::StarStrongNotInferable
        );
        check_usage(&cfg, &UsageCtx(vec![m.one()]), &Term::Star(Strength::Strong)).unwrap();
        let e = Modality::erasure();
        let c = infer_usage(&Config::new(e.clone()), &Term::Star(Strength::Strong), 1).unwrap();
        assert!(c.is_zero(&e));
    }

    #[test]
    fn moded_fst_zero() {
        let m = Modality::erasure();
        let cfg = Config::new(m.clone()).moded();
        let w = m.one();
        let t = fst(m.zero(), var(0));
        assert_eq!(infer_usage_moded(&cfg, &t, 1, Mode::One).unwrap_err().kind, UsageErrorKind::Projection);
        assert!(infer_usage_moded(&cfg, &t, 1, Mode::Zero).is_ok());
        assert!(infer_usage_moded(&cfg, &fst(w, var(0)), 1, Mode::One).is_ok());
    }

    #[test]
    fn erased_matches_restriction() {
        let m = Modality::erasure();
        let (z, o) = (m.zero(), m.one());
        let t = prodrec(z, o, z, Term::Nat, var(0), Term::Zero);
        let cfg = Config::new(m.clone());
        assert!(infer_usage(&cfg, &t, 1).is_ok());
        let e = infer_usage(&cfg.no_erased_matches(), &t, 1).unwrap_err();
        assert_eq!(e.kind, UsageErrorKind::Restriction);
    }
}
