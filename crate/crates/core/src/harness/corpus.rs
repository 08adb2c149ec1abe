//! Named example programs, written in surface syntax. Grade literals use
//! `0`, `1` and `w`, so the corpus elaborates under every instance that has
//! an `ω` (or aliases `1` to it).

use crate::config::Config;
use crate::frontend::{parse, resolve_all, FrontendError};
use crate::grades::Modality;
use crate::syntax::{self as s, Strength, Term};

pub const PRELUDE: &str = r"
def id : Pi[0,0] (A : U) -> Pi[w,0] (x : A) -> A := \[0] A. \[w] x. x
def idNZ : Nat := id @[0] Nat @[w] zero
def plus : Pi[1,0] (k : Nat) -> Pi[1,0] (n : Nat) -> Nat :=
  \[1] k. \[1] n. natrec[0,0,1] (m. Nat) k (m r. suc r) n
def plus23 : Nat := plus @[1] 2 @[1] 3
def double : Pi[w,0] (n : Nat) -> Nat := \[w] n. plus @[1] n @[1] n
def double4 : Nat := double @[w] 4
-- predecessor guarded by an erased proof that its argument is a successor
def IsSuc : Pi[w,0] (n : Nat) -> U := \[w] n. natrec[0,0,0] (x. U) Empty (x ih. Unit@) n
def safePred : Pi[w,0] (n : Nat) -> Pi[0,0] (pf : IsSuc @[w] n) -> Nat :=
  \[w] n. natrec[w,0,0] (x. Pi[0,0] (pf : IsSuc @[w] x) -> Nat)
    (\[0] e. emptyrec[0] Nat e) (x ih. \[0] pf. x) n
def pred3 : Nat := safePred @[w] 3 @[0] star@
def unitW : Nat := unitrec[w,0] (x. Nat) star@ 2
def unitErased : Nat := unitrec[0,0] (x. Nat) star@ 1
def swap : Pi[1,0] (p : Sig@[1,0] (x : Nat) ** Nat) -> Sig@[1,0] (x : Nat) ** Nat :=
  \[1] p. prodrec[1,1,0] (z. Sig@[1,0] (x : Nat) ** Nat) p (a b. (b ,@[1] a))
def swapFst : Nat := prodrec[w,1,0] (z. Nat) (swap @[1] (1 ,@[1] 2)) (a b. plus @[1] a @[1] (plus @[1] b @[1] b))
def strongSnd : Nat := snd[1] ((4 ,&[1] 5) : Sig&[1,0] (x : Nat) ** Nat)
";

/// Expected numerals of the ℕ-valued definitions.
pub const EXPECTED: &[(&str, u64)] = &[
    ("idNZ", 0),
    ("plus23", 5),
    ("double4", 8),
    ("pred3", 2),
    ("unitW", 2),
    ("unitErased", 1),
    ("swapFst", 4),
    ("strongSnd", 5),
];

pub struct Named {
    pub name: String,
    pub ty: Term,
    pub term: Term,
}

/// Elaborates the prelude under `m`.
pub fn prelude(m: &Modality) -> Result<Vec<Named>, FrontendError> {
    let file = parse(PRELUDE)?;
    Ok(resolve_all(&file, m)?
        .into_iter()
        .map(|r| Named { name: r.name.clone(), term: r.term(), ty: r.ty })
        .collect())
}

/// The closed ℕ-programs of the prelude, with their expected values.
pub fn nat_programs(m: &Modality) -> Result<Vec<(Named, u64)>, FrontendError> {
    let all = prelude(m)?;
    Ok(all
        .into_iter()
        .filter_map(|d| EXPECTED.iter().find(|(n, _)| *n == d.name).map(|&(_, v)| (d, v)))
        .collect())
}

/// The erased-match term whose weak head normal form is stuck on a
/// variable: `prodrec[0,1,0] (ℕ) #0 zero` in a context `Σ@[1,0] ℕ ℕ`.
pub fn erased_match(cfg: &Config) -> (Vec<Term>, Term) {
    let m = cfg.m();
    let (z, one) = (m.zero(), m.one());
    let ctx = vec![s::sigma(Strength::Weak, one, z, Term::Nat, Term::Nat)];
    (ctx, s::prodrec(z, one, z, Term::Nat, s::var(0), Term::Zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::{read_numeral, Fuel, Numeral};
    use crate::typecheck::check_term;
    use crate::usage::check_usage;
    use crate::grades::UsageCtx;

    /// The same programs computed with native arithmetic.
    #[test]
    fn expected_values_match_native_oracle() {
        let id = |x: u64| x;
        let plus = |k: u64, n: u64| k + n;
        let double = |n: u64| plus(n, n);
        let pred = |n: u64| n.checked_sub(1).expect("guarded by a successor proof");
        let swap = |(a, b): (u64, u64)| (b, a);
        let (a, b) = swap((1, 2));
        let oracle = [
            ("idNZ", id(0)),
            ("plus23", plus(2, 3)),
            ("double4", double(4)),
            ("pred3", pred(3)),
            ("unitW", 2),
            ("unitErased", 1),
            ("swapFst", plus(a, plus(b, b))),
            ("strongSnd", (4, 5).1),
        ];
        assert_eq!(EXPECTED, &oracle[..]);
    }

    #[test]
    fn prelude_checks_under_instances() {
        for m in [Modality::erasure(), Modality::linear(), Modality::affine(), Modality::linear_or_affine()] {
            let cfg = Config::new(m.clone());
            for d in prelude(&m).unwrap() {
                check_term(&cfg, &[], &d.term, &d.ty).unwrap_or_else(|e| panic!("{} under {}: {e}", d.name, m.name()));
                check_usage(&cfg, &UsageCtx::zeros(&m, 0), &d.term)
                    .unwrap_or_else(|e| panic!("{} under {}: {e}", d.name, m.name()));
            }
            for (d, v) in nat_programs(&m).unwrap() {
                assert_eq!(read_numeral(&d.term, &mut Fuel(100_000)), Numeral::Value(v), "{}", d.name);
            }
        }
    }
}
