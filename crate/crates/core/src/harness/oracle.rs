//! Independent oracle for principality: samples contexts that the
//! declarative usage rules derive for a term, applying subsumption at random
//! nodes. Every sampled context must be accepted by the checker and lie
//! below the inferred one.

use crate::config::{Config, ModeStructure};
use crate::grades::{Grade, Modality, UsageCtx};
use crate::syntax::{Strength, Term};
use crate::usage::Mode;
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Sampler<'a, R: Rng> {
    cfg: &'a Config,
    rng: &'a mut R,
    /// Probability of a subsumption step after each rule.
    pub weaken: f64,
}

fn zeros(m: &Modality, n: usize) -> UsageCtx {
    UsageCtx(vec![m.zero(); n])
}

fn unit(m: &Modality, n: usize, i: usize, g: Grade) -> UsageCtx {
    let mut v = vec![m.zero(); n];
    v[i] = g;
    UsageCtx(v)
}

fn pointwise(a: &UsageCtx, b: &UsageCtx, f: impl Fn(Grade, Grade) -> Grade) -> UsageCtx {
    UsageCtx(a.0.iter().zip(&b.0).map(|(&x, &y)| f(x, y)).collect())
}

impl<'a, R: Rng> Sampler<'a, R> {
    pub fn new(cfg: &'a Config, rng: &'a mut R) -> Self {
        Sampler { cfg, rng, weaken: 0.25 }
    }

    fn m(&self) -> &'a Modality {
        self.cfg.m()
    }

    /// A context for `star&`, which any context derives. Half of the draws
    /// prefer maximal grades, which are the ones enclosing binders demand.
    fn star_ctx(&mut self, n: usize) -> UsageCtx {
        let m = self.m();
        let elems: Vec<Grade> = m.elements().collect();
        let maxima: Vec<Grade> =
            elems.iter().copied().filter(|&e| elems.iter().all(|&f| f == e || !m.le(e, f))).collect();
        let pool = if self.rng.gen_bool(0.5) { &maxima } else { &elems };
        UsageCtx((0..n).map(|_| *pool.choose(self.rng).unwrap()).collect())
    }

    fn random_ctx(&mut self, n: usize) -> UsageCtx {
        let elems: Vec<Grade> = self.m().elements().collect();
        UsageCtx((0..n).map(|_| *elems.choose(self.rng).unwrap()).collect())
    }

    /// Subsumption: pass to a pointwise smaller context.
    fn subsume(&mut self, g: UsageCtx) -> UsageCtx {
        if g.0.is_empty() || !self.rng.gen_bool(self.weaken) {
            return g;
        }
        let m = self.m();
        let r = self.random_ctx(g.0.len());
        pointwise(&g, &r, |x, y| m.meet(x, y))
    }

    /// Splits `δ∙h` (the head is index 0) and demands that `δ∙want` be derivable, i.e. `want ≤ h`.
    fn bind(&self, d: UsageCtx, want: Grade) -> Option<UsageCtx> {
        let mut v = d.0;
        if v.is_empty() {
            return None;
        }
        let h = v.remove(0);
        self.m().le(want, h).then_some(UsageCtx(v))
    }

    fn top(&self, md: Mode) -> Grade {
        match md {
            Mode::Zero => self.m().zero(),
            Mode::One => self.m().one(),
        }
    }

    /// `m · p` on modes.
    fn mode_mul(&self, md: Mode, p: Grade) -> Mode {
        if md == Mode::One && p != self.m().zero() {
            Mode::One
        } else {
            Mode::Zero
        }
    }

    /// Mode-aware sampling; in the plain system the mode is always `1ᵐ`
    /// and plays no role.
    pub fn sample(&mut self, t: &Term, n: usize, md: Mode) -> Option<UsageCtx> {
        let g = self.rule(t, n, md)?;
        Some(self.subsume(g))
    }

    fn rule(&mut self, t: &Term, n: usize, md: Mode) -> Option<UsageCtx> {
        use Term::*;
        let m = self.m();
        let moded = self.cfg.modes == ModeStructure::Moded;
        let r = self.cfg.restrictions.clone();
        let top = if moded { self.top(md) } else { m.one() };
        let sc = |g: &UsageCtx, p: Grade| UsageCtx(g.0.iter().map(|&x| m.mul(p, x)).collect());
        let add = |a: &UsageCtx, b: &UsageCtx| pointwise(a, b, |x, y| m.add(x, y));
        let sub = |s: &Self, p: Grade| if moded { s.mode_mul(md, p) } else { Mode::One };
        let bgrade = |p: Grade| if moded { m.mul(top, p) } else { p };
        Some(match t {
            U | Nat | Empty | Unit(_) | Zero | Star(Strength::Weak) => zeros(m, n),
            Star(Strength::Strong) => {
                if moded && md == Mode::Zero {
                    zeros(m, n)
                } else {
                    self.star_ctx(n)
                }
            }
            Var(i) => unit(m, n, *i, top),
            Pi { p, q, dom, cod } => {
                let ga = self.sample(dom, n, sub(self, *p))?;
                let d = self.sample(cod, n + 1, md)?;
                let d = self.bind(d, bgrade(*q))?;
                add(&sc(&ga, *p), &d)
            }
            Sigma { p, q, fst, snd, .. } => {
                let ga = self.sample(fst, n, sub(self, *p))?;
                let d = self.sample(snd, n + 1, md)?;
                let d = self.bind(d, bgrade(*q))?;
                if moded {
                    add(&sc(&ga, *p), &d)
                } else {
                    add(&ga, &d)
                }
            }
            Lam { p, body } => {
                let d = self.sample(body, n + 1, md)?;
                self.bind(d, bgrade(*p))?
            }
            App { p, fun, arg } => {
                let g = self.sample(fun, n, md)?;
                let d = self.sample(arg, n, sub(self, *p))?;
                add(&g, &sc(&d, *p))
            }
            Pair { k, p, fst, snd } => {
                let g = self.sample(fst, n, sub(self, *p))?;
                let g = if moded { sc(&g, *p) } else { g };
                let d = self.sample(snd, n, md)?;
                match k {
                    Strength::Weak => add(&g, &d),
                    Strength::Strong => pointwise(&g, &d, |x, y| m.meet(x, y)),
                }
            }
            Fst { p, pair } => {
                if moded && !m.le(self.top(self.mode_mul(md, *p)), top) {
                    return None;
                }
                self.sample(pair, n, md)?
            }
            Snd { pair, .. } | Suc(pair) => self.sample(pair, n, md)?,
            Prodrec { r: rg, p, q, motive, scrut, body } => {
                if !r.prodrec_ok(*rg) {
                    return None;
                }
                self.motive(motive, n, *q)?;
                let g = self.sample(scrut, n, sub(self, *rg))?;
                let d = self.sample(body, n + 2, md)?;
                let d = self.bind(d, bgrade(*rg))?;
                let first = if moded { m.mul(bgrade(*rg), *p) } else { *rg };
                let d = self.bind(d, first)?;
                add(&sc(&g, *rg), &d)
            }
            Natrec { p, q, r: rr, motive, zero, succ, scrut } => {
                self.motive(motive, n, *q)?;
                let gz = self.sample(zero, n, md)?;
                let d = self.sample(succ, n + 2, md)?;
                let d = self.bind(d, bgrade(*rr))?;
                let d = self.bind(d, bgrade(*p))?;
                let gn = self.sample(scrut, n, md)?;
                UsageCtx((0..n).map(|i| m.nr(*p, *rr, gz.0[i], d.0[i], gn.0[i])).collect())
            }
            Emptyrec { p, motive, scrut } => {
                if !r.emptyrec_ok(*p) {
                    return None;
                }
                self.sample(motive, n, if moded { Mode::Zero } else { Mode::One })?;
                let g = self.sample(scrut, n, sub(self, *p))?;
                sc(&g, *p)
            }
            Unitrec { p, q, motive, scrut, body } => {
                if !r.unitrec_ok(*p) {
                    return None;
                }
                self.motive(motive, n, *q)?;
                let g = self.sample(scrut, n, sub(self, *p))?;
                let d = self.sample(body, n, md)?;
                add(&sc(&g, *p), &d)
            }
            Ann { term, .. } => self.sample(term, n, md)?,
        })
    }

    /// Plain motives bind at their annotation; moded ones are erased and
    /// bind at 0.
    fn motive(&mut self, a: &Term, n: usize, q: Grade) -> Option<()> {
        if self.cfg.modes == ModeStructure::Moded {
            let d = self.sample(a, n + 1, Mode::Zero)?;
            self.bind(d, self.m().zero())?;
        } else {
            let d = self.sample(a, n + 1, Mode::One)?;
            self.bind(d, q)?;
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;
    use crate::usage::infer_usage;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_lie_below_principal() {
        let m = Modality::linear();
        let cfg = Config::new(m.clone());
        let w = m.grade("w").unwrap();
        let t = app(w, var(0), app(m.one(), var(1), var(0)));
        let principal = infer_usage(&cfg, &t, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = Sampler::new(&cfg, &mut rng);
        s.weaken = 0.5;
        for _ in 0..100 {
            let g = s.sample(&t, 2, Mode::One).unwrap();
            assert!(g.le(&m, &principal));
        }
    }
}
