//! Modalities: finite grade algebras with addition, multiplication, meet and
//! the five-argument `nr` function used to count natural-number recursion.
//!
//! Every operation is tabulated at construction time, so lookups are O(1)
//! and the law checker can enumerate the whole carrier.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// A grade is an index into its modality's carrier. Grades from different
/// modalities must not be mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Grade(pub u8);

/// Largest carrier accepted by [`Modality::from_tables`]; keeps the
/// exhaustive eight-variable law checks tractable.
pub const MAX_CARRIER: usize = 8;

/// Default guard for [`nr_unique_check`].
pub const NR_ENUM_GUARD: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModalityError {
    #[error("carrier has {0} elements; at most {MAX_CARRIER} are supported")]
    CarrierTooLarge(usize),
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("table `{0}` has the wrong size")]
    BadTable(&'static str),
    #[error("table `{0}` mentions an element outside the carrier")]
    NotClosed(&'static str),
    #[error("unknown modality `{0}`")]
    Unknown(String),
    #[error("the alternative nr function is only defined for `linear`")]
    NoBadNr,
    #[error("lattice: {0}")]
    Lattice(String),
}

#[derive(Clone, Debug)]
pub struct Modality {
    name: String,
    names: Vec<String>,
    aliases: Vec<(String, Grade)>,
    add: Vec<Grade>,
    mul: Vec<Grade>,
    meet: Vec<Grade>,
    nr: Vec<Grade>,
    zero: Grade,
    one: Grade,
    // division[q][p] = p / q, when division by q is supported
    division: Vec<Option<Vec<Grade>>>,
}

impl PartialEq for Modality {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.add == other.add
            && self.mul == other.mul
            && self.meet == other.meet
            && self.nr == other.nr
            && self.zero == other.zero
            && self.one == other.one
    }
}

/// Which `nr` to install on the linear instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NrChoice {
    #[default]
    Good,
    /// The greatest lawful `nr`, built from the star operator. It is lawful
    /// but counts `x + x` as linear and both arguments of addition as `ω`.
    Bad,
}

impl Modality {
    /// Builds a modality from row-major binary tables and an `nr` function.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        name: &str,
        names: &[&str],
        zero: Grade,
        one: Grade,
        add: &[u8],
        mul: &[u8],
        meet: &[u8],
        nr: impl Fn(&BinOps, Grade, Grade, Grade, Grade, Grade) -> Grade,
    ) -> Result<Modality, ModalityError> {
        let n = names.len();
        if n == 0 {
            return Err(ModalityError::EmptyCarrier);
        }
        if n > MAX_CARRIER {
            return Err(ModalityError::CarrierTooLarge(n));
        }
        for (tab, label) in [(add, "add"), (mul, "mul"), (meet, "meet")] {
            if tab.len() != n * n {
                return Err(ModalityError::BadTable(label));
            }
            if tab.iter().any(|&g| g as usize >= n) {
                return Err(ModalityError::NotClosed(label));
            }
        }
        if zero.0 as usize >= n || one.0 as usize >= n {
            return Err(ModalityError::NotClosed("units"));
        }
        let ops = BinOps {
            n,
            add: add.iter().map(|&g| Grade(g)).collect(),
            mul: mul.iter().map(|&g| Grade(g)).collect(),
            meet: meet.iter().map(|&g| Grade(g)).collect(),
            zero,
            one,
            omega: None,
        };
        let ops = BinOps { omega: ops.find_name(names, "w"), ..ops };
        let mut table = Vec::with_capacity(n.pow(5));
        for idx in 0..n.pow(5) {
            let a = tuple::<5>(n, idx);
            let v = nr(&ops, a[0], a[1], a[2], a[3], a[4]);
            if v.0 as usize >= n {
                return Err(ModalityError::NotClosed("nr"));
            }
            table.push(v);
        }
        let mut m = Modality {
            name: name.to_string(),
            names: names.iter().map(|s| s.to_string()).collect(),
            aliases: Vec::new(),
            add: ops.add,
            mul: ops.mul,
            meet: ops.meet,
            nr: table,
            zero,
            one,
            division: Vec::new(),
        };
        m.install_aliases();
        m.division = m.compute_division();
        Ok(m)
    }

    fn install_aliases(&mut self) {
        let mut aliases = Vec::new();
        if let Some(w) = self.names.iter().position(|s| s == "w") {
            aliases.push(("ω".to_string(), Grade(w as u8)));
        }
        if !self.names.iter().any(|s| s == "0") {
            aliases.push(("0".to_string(), self.zero));
        }
        if !self.names.iter().any(|s| s == "1") {
            aliases.push(("1".to_string(), self.one));
        }
        self.aliases = aliases;
    }

    /// Same tables, different `nr`.
    pub fn with_nr(
        &self,
        name: &str,
        nr: impl Fn(&Modality, Grade, Grade, Grade, Grade, Grade) -> Grade,
    ) -> Modality {
        let n = self.size();
        let mut m = self.clone();
        m.name = name.to_string();
        m.nr = (0..n.pow(5))
            .map(|idx| {
                let a = tuple::<5>(n, idx);
                nr(self, a[0], a[1], a[2], a[3], a[4])
            })
            .collect();
        m
    }

    /// Replaces the `nr` table wholesale (row-major over `p r qz qs qn`).
    pub fn with_nr_table(&self, name: &str, table: Vec<Grade>) -> Modality {
        assert_eq!(table.len(), self.size().pow(5));
        let mut m = self.clone();
        m.name = name.to_string();
        m.nr = table;
        m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Grade> + Clone {
        (0..self.size() as u8).map(Grade)
    }

    pub fn zero(&self) -> Grade {
        self.zero
    }

    pub fn one(&self) -> Grade {
        self.one
    }

    /// The element named `w`, if the carrier has one.
    pub fn omega(&self) -> Option<Grade> {
        self.grade("w")
    }

    pub fn add(&self, p: Grade, q: Grade) -> Grade {
        self.add[self.ix2(p, q)]
    }

    pub fn mul(&self, p: Grade, q: Grade) -> Grade {
        self.mul[self.ix2(p, q)]
    }

    pub fn meet(&self, p: Grade, q: Grade) -> Grade {
        self.meet[self.ix2(p, q)]
    }

    pub fn nr(&self, p: Grade, r: Grade, qz: Grade, qs: Grade, qn: Grade) -> Grade {
        let n = self.size();
        let idx = (((p.0 as usize * n + r.0 as usize) * n + qz.0 as usize) * n + qs.0 as usize)
            * n
            + qn.0 as usize;
        self.nr[idx]
    }

    pub fn nr_table(&self) -> &[Grade] {
        &self.nr
    }

    /// `p ≤ q` iff `p = p ∧ q`.
    pub fn le(&self, p: Grade, q: Grade) -> bool {
        self.meet(p, q) == p
    }

    pub fn zero_is_greatest(&self) -> bool {
        self.elements().all(|p| self.le(p, self.zero))
    }

    /// `p / q`: the least `r` with `p ≤ q·r`, when division by `q` is supported.
    pub fn div(&self, p: Grade, q: Grade) -> Option<Grade> {
        self.division[q.0 as usize].as_ref().map(|row| row[p.0 as usize])
    }

    pub fn supports_division_by(&self, q: Grade) -> bool {
        self.division[q.0 as usize].is_some()
    }

    /// True when the modality is a bounded lattice read as a modality:
    /// `+` and `∧` coincide, `·` is the join, `1` the least and `0` the
    /// greatest element.
    pub fn is_lattice(&self) -> bool {
        let els: Vec<Grade> = self.elements().collect();
        els.iter().all(|&p| self.le(self.one, p) && self.le(p, self.zero))
            && els.iter().all(|&p| {
                els.iter().all(|&q| {
                    let j = self.mul(p, q);
                    self.add(p, q) == self.meet(p, q)
                        && self.le(p, j)
                        && self.le(q, j)
                        && els.iter().all(|&u| !(self.le(p, u) && self.le(q, u)) || self.le(j, u))
                })
            })
    }

    pub fn grade_name(&self, g: Grade) -> &str {
        &self.names[g.0 as usize]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a grade literal: an element name or one of the aliases
    /// `0`, `1`, `ω` when those are not element names themselves.
    pub fn grade(&self, lit: &str) -> Option<Grade> {
        if let Some(i) = self.names.iter().position(|s| s == lit) {
            return Some(Grade(i as u8));
        }
        self.aliases.iter().find(|(s, _)| s == lit).map(|&(_, g)| g)
    }

    fn ix2(&self, p: Grade, q: Grade) -> usize {
        p.0 as usize * self.size() + q.0 as usize
    }

    fn compute_division(&self) -> Vec<Option<Vec<Grade>>> {
        self.elements()
            .map(|q| {
                self.elements()
                    .map(|p| {
                        // Galois connection: p/q ≤ r  ⟺  p ≤ q·r
                        self.elements().find(|&cand| {
                            self.elements()
                                .all(|r| self.le(cand, r) == self.le(p, self.mul(q, r)))
                        })
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    pub fn erasure() -> Modality {
        // carrier [0, w]
        let t = [0, 1, 1, 1];
        Modality::from_tables(
            "erasure",
            &["0", "w"],
            Grade(0),
            Grade(1),
            &t,
            &[0, 0, 0, 1],
            &t,
            |o, _p, _r, z, s, n| o.meet(o.meet(z, s), n),
        )
        .expect("erasure tables")
    }

    pub fn affine() -> Modality {
        Self::zero_one_many("affine", &[0, 1, 2, 1, 1, 2, 2, 2, 2])
    }

    pub fn linear() -> Modality {
        Self::zero_one_many("linear", &[0, 2, 2, 2, 1, 2, 2, 2, 2])
    }

    /// Linear types with the star-based `nr`.
    pub fn linear_bad() -> Modality {
        let lin = Self::linear();
        let w = lin.omega().expect("w");
        let star = |m: &Modality, p: Grade, q: Grade, r: Grade| -> Grade {
            match m.grade_name(r) {
                "0" => m.meet(p, q),
                "1" => m.add(p, m.mul(w, q)),
                _ => m.mul(w, m.add(p, q)),
            }
        };
        lin.with_nr("linear (star nr)", |m, p, r, z, s, n| {
            star(m, m.meet(z, n), m.add(s, m.mul(p, n)), r)
        })
    }

    fn zero_one_many(name: &str, meet: &[u8]) -> Modality {
        // carrier [0, 1, w]
        let add = [0, 1, 2, 1, 2, 2, 2, 2, 2];
        let mul = [0, 0, 0, 0, 1, 2, 0, 2, 2];
        Modality::from_tables(name, &["0", "1", "w"], Grade(0), Grade(1), &add, &mul, meet, |o, p, r, z, s, n| {
            let (one, w) = (o.one, o.omega.expect("w"));
            match r.0 {
                0 => o.meet(o.add(o.mul(o.meet(one, p), n), s), o.add(n, z)),
                1 => o.add(o.add(o.mul(o.add(one, p), n), o.mul(w, s)), z),
                _ => o.mul(w, o.add(o.add(n, s), z)),
            }
        })
        .expect("zero-one-many tables")
    }

    pub fn linear_or_affine() -> Modality {
        // carrier [0, 1, 1?, w]
        let add = [0, 1, 2, 3, 1, 3, 3, 3, 2, 3, 3, 3, 3, 3, 3, 3];
        let mul = [0, 0, 0, 0, 0, 1, 2, 3, 0, 2, 2, 3, 0, 3, 3, 3];
        let meet = [0, 2, 2, 3, 2, 1, 2, 3, 2, 2, 2, 3, 3, 3, 3, 3];
        Modality::from_tables(
            "linear-or-affine",
            &["0", "1", "1?", "w"],
            Grade(0),
            Grade(1),
            &add,
            &mul,
            &meet,
            |o, p, r, z, s, n| {
                let (one, aff, w) = (o.one, Grade(2), o.omega.expect("w"));
                match r.0 {
                    0 => o.meet(o.add(o.mul(o.meet(one, p), n), s), o.add(n, z)),
                    1 => o.add(o.add(o.mul(o.add(one, p), n), o.mul(w, s)), z),
                    2 => o.add(o.add(o.mul(o.add(aff, p), n), o.mul(w, s)), o.mul(aff, z)),
                    _ => o.mul(w, o.add(o.add(n, s), z)),
                }
            },
        )
        .expect("linear-or-affine tables")
    }

    pub fn trivial() -> Modality {
        Modality::from_tables("trivial", &["0"], Grade(0), Grade(0), &[0], &[0], &[0], |_, _, _, _, _, _| Grade(0))
            .expect("trivial tables")
    }

    /// A bounded distributive lattice used as a modality: `+` and `∧` are the
    /// lattice meet, `·` the join, `0` the top and `1` the bottom.
    pub fn lattice(decl: &LatticeDecl) -> Result<Modality, ModalityError> {
        let n = decl.elems.len();
        if n > MAX_CARRIER {
            return Err(ModalityError::CarrierTooLarge(n));
        }
        let mut meet = vec![0u8; n * n];
        let mut join = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = decl.bound(a, b, false)? as u8;
                join[a * n + b] = decl.bound(a, b, true)? as u8;
            }
        }
        let names: Vec<&str> = decl.elems.iter().map(String::as_str).collect();
        Modality::from_tables(
            "lattice",
            &names,
            Grade(decl.top as u8),
            Grade(decl.bot as u8),
            &meet,
            &join,
            &meet,
            |o, _p, _r, z, s, n| o.meet(o.meet(z, s), n),
        )
    }

    /// A totally ordered lattice, listed from bottom to top.
    pub fn chain(names: &[&str]) -> Result<Modality, ModalityError> {
        let mut text = format!("elem {}\n", names.join(" "));
        for w in names.windows(2) {
            text.push_str(&format!("cover {} {}\n", w[0], w[1]));
        }
        Modality::lattice(&LatticeDecl::parse(&text)?)
    }

    /// The three-level security lattice `L ≤ M ≤ H`.
    pub fn lmh() -> Modality {
        let mut m = Modality::chain(&["L", "M", "H"]).expect("LMH chain");
        m.name = "lmh".into();
        m
    }

    /// Looks up a built-in instance. `lattice:<chain>` accepts an inline
    /// chain such as `L<M<H`; lattice files go through [`LatticeDecl`].
    pub fn by_name(name: &str, nr: NrChoice) -> Result<Modality, ModalityError> {
        let m = match name {
            "erasure" => Modality::erasure(),
            "affine" => Modality::affine(),
            "linear" => match nr {
                NrChoice::Good => Modality::linear(),
                NrChoice::Bad => return Ok(Modality::linear_bad()),
            },
            "linear-or-affine" => Modality::linear_or_affine(),
            "trivial" => Modality::trivial(),
            "lmh" => Modality::lmh(),
            _ => {
                if let Some(chain) = name.strip_prefix("lattice:") {
                    let parts: Vec<&str> = chain.split('<').map(str::trim).collect();
                    if parts.iter().any(|p| p.is_empty()) {
                        return Err(ModalityError::Lattice(format!("bad chain `{chain}`")));
                    }
                    Modality::chain(&parts)?
                } else {
                    return Err(ModalityError::Unknown(name.to_string()));
                }
            }
        };
        if nr == NrChoice::Bad {
            return Err(ModalityError::NoBadNr);
        }
        Ok(m)
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{{}}}", self.name, self.names.join(", "))
    }
}

/// The binary tables handed to an `nr` builder before the modality exists.
pub struct BinOps {
    n: usize,
    add: Vec<Grade>,
    mul: Vec<Grade>,
    meet: Vec<Grade>,
    pub zero: Grade,
    pub one: Grade,
    pub omega: Option<Grade>,
}

impl BinOps {
    pub fn add(&self, p: Grade, q: Grade) -> Grade {
        self.add[p.0 as usize * self.n + q.0 as usize]
    }
    pub fn mul(&self, p: Grade, q: Grade) -> Grade {
        self.mul[p.0 as usize * self.n + q.0 as usize]
    }
    pub fn meet(&self, p: Grade, q: Grade) -> Grade {
        self.meet[p.0 as usize * self.n + q.0 as usize]
    }
    fn find_name(&self, names: &[&str], lit: &str) -> Option<Grade> {
        names.iter().position(|s| *s == lit).map(|i| Grade(i as u8))
    }
}

/// Decodes `idx` as a base-`n` tuple, most significant digit first.
fn tuple<const K: usize>(n: usize, mut idx: usize) -> [Grade; K] {
    let mut out = [Grade(0); K];
    for slot in out.iter_mut().rev() {
        *slot = Grade((idx % n) as u8);
        idx /= n;
    }
    out
}

/// First tuple (in lexicographic carrier order) violating `pred`.
fn find_counterexample<const K: usize>(n: usize, pred: impl Fn([Grade; K]) -> bool) -> Option<[Grade; K]> {
    (0..n.pow(K as u32)).map(|i| tuple::<K>(n, i)).find(|&a| !pred(a))
}

// ---------------------------------------------------------------------------
// Lattice files

/// A finite lattice given by `elem`, `bot`, `top` and `cover` lines.
#[derive(Clone, Debug)]
pub struct LatticeDecl {
    elems: Vec<String>,
    bot: usize,
    top: usize,
    leq: Vec<Vec<bool>>,
}

impl LatticeDecl {
    pub fn parse(text: &str) -> Result<LatticeDecl, ModalityError> {
        let err = |s: String| ModalityError::Lattice(s);
        let mut elems: Vec<String> = Vec::new();
        let mut covers = Vec::new();
        let (mut bot, mut top) = (None, None);
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                [] => {}
                ["elem", rest @ ..] => elems.extend(rest.iter().map(|s| s.to_string())),
                ["bot", a] => bot = Some(a.to_string()),
                ["top", a] => top = Some(a.to_string()),
                ["cover", a, b] => covers.push((a.to_string(), b.to_string())),
                _ => return Err(err(format!("line {}: cannot parse `{line}`", no + 1))),
            }
        }
        if elems.is_empty() {
            return Err(err("no elements".into()));
        }
        let pos = |s: &str| {
            elems.iter().position(|e| e == s).ok_or_else(|| err(format!("unknown element `{s}`")))
        };
        let n = elems.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &covers {
            leq[pos(a)?][pos(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(err(format!("cycle between `{}` and `{}`", elems[i], elems[j])));
                }
            }
        }
        let extreme = |want_bot: bool| (0..n).find(|&i| (0..n).all(|j| if want_bot { leq[i][j] } else { leq[j][i] }));
        let bot_ix = match bot {
            Some(b) => pos(&b)?,
            None => extreme(true).ok_or_else(|| err("no least element".into()))?,
        };
        let top_ix = match top {
            Some(t) => pos(&t)?,
            None => extreme(false).ok_or_else(|| err("no greatest element".into()))?,
        };
        if !(0..n).all(|j| leq[bot_ix][j]) {
            return Err(err(format!("`{}` is not below every element", elems[bot_ix])));
        }
        if !(0..n).all(|j| leq[j][top_ix]) {
            return Err(err(format!("`{}` is not above every element", elems[top_ix])));
        }
        let decl = LatticeDecl { elems, bot: bot_ix, top: top_ix, leq };
        for a in 0..n {
            for b in 0..n {
                decl.bound(a, b, false)?;
                decl.bound(a, b, true)?;
            }
        }
        Ok(decl)
    }

    /// Greatest lower bound (`upper == false`) or least upper bound.
    fn bound(&self, a: usize, b: usize, upper: bool) -> Result<usize, ModalityError> {
        let n = self.elems.len();
        let rel = |x: usize, y: usize| if upper { self.leq[y][x] } else { self.leq[x][y] };
        let cands: Vec<usize> = (0..n).filter(|&c| rel(c, a) && rel(c, b)).collect();
        cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&d| rel(d, c)))
            .ok_or_else(|| {
                ModalityError::Lattice(format!(
                    "`{}` and `{}` have no {}",
                    self.elems[a],
                    self.elems[b],
                    if upper { "join" } else { "meet" }
                ))
            })
    }
}

// ---------------------------------------------------------------------------
// Law checking

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LawResult {
    pub law: &'static str,
    pub holds: bool,
    /// Variable assignment refuting the law, rendered with element names.
    pub witness: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub modality: String,
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }

    pub fn get(&self, law: &str) -> Option<&LawResult> {
        self.results.iter().find(|r| r.law == law)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{:<24} {}", r.law, if r.holds { "ok" } else { "FAIL" }));
            if let Some(w) = &r.witness {
                let w: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!("  [{}]", w.join(", ")));
            }
            out.push('\n');
        }
        out
    }
}

struct LawCollector<'a> {
    m: &'a Modality,
    results: Vec<LawResult>,
}

impl LawCollector<'_> {
    fn law<const K: usize>(&mut self, law: &'static str, vars: [&str; K], pred: impl Fn([Grade; K]) -> bool) {
        let cex = find_counterexample::<K>(self.m.size(), pred);
        self.results.push(LawResult {
            law,
            holds: cex.is_none(),
            witness: cex.map(|a| {
                vars.iter()
                    .zip(a.iter())
                    .map(|(v, g)| (v.to_string(), self.m.grade_name(*g).to_string()))
                    .collect()
            }),
        });
    }
}

/// Exhaustively checks the modality axioms.
pub fn check_laws(m: &Modality) -> LawReport {
    let mut c = LawCollector { m, results: Vec::new() };
    let (z, o) = (m.zero(), m.one());
    let le = |a, b| m.le(a, b);
    c.law("add-assoc", ["p", "q", "r"], |[p, q, r]| m.add(m.add(p, q), r) == m.add(p, m.add(q, r)));
    c.law("add-comm", ["p", "q"], |[p, q]| m.add(p, q) == m.add(q, p));
    c.law("add-identity", ["p"], |[p]| m.add(z, p) == p && m.add(p, z) == p);
    c.law("mul-assoc", ["p", "q", "r"], |[p, q, r]| m.mul(m.mul(p, q), r) == m.mul(p, m.mul(q, r)));
    c.law("mul-identity", ["p"], |[p]| m.mul(o, p) == p && m.mul(p, o) == p);
    c.law("mul-zero", ["p"], |[p]| m.mul(z, p) == z && m.mul(p, z) == z);
    c.law("mul-distrib-add", ["p", "q", "r"], |[p, q, r]| {
        m.mul(p, m.add(q, r)) == m.add(m.mul(p, q), m.mul(p, r))
            && m.mul(m.add(q, r), p) == m.add(m.mul(q, p), m.mul(r, p))
    });
    c.law("meet-assoc", ["p", "q", "r"], |[p, q, r]| m.meet(m.meet(p, q), r) == m.meet(p, m.meet(q, r)));
    c.law("meet-comm", ["p", "q"], |[p, q]| m.meet(p, q) == m.meet(q, p));
    c.law("meet-idem", ["p"], |[p]| m.meet(p, p) == p);
    c.law("mul-distrib-meet", ["p", "q", "r"], |[p, q, r]| {
        m.mul(p, m.meet(q, r)) == m.meet(m.mul(p, q), m.mul(p, r))
            && m.mul(m.meet(q, r), p) == m.meet(m.mul(q, p), m.mul(r, p))
    });
    c.law("add-distrib-meet", ["p", "q", "r"], |[p, q, r]| {
        m.add(p, m.meet(q, r)) == m.meet(m.add(p, q), m.add(p, r))
            && m.add(m.meet(q, r), p) == m.meet(m.add(q, p), m.add(r, p))
    });
    c.law("add-monotone", ["p", "q", "r"], |[p, q, r]| !le(p, q) || le(m.add(p, r), m.add(q, r)));
    c.law("mul-monotone", ["p", "q", "r"], |[p, q, r]| {
        !le(p, q) || (le(m.mul(p, r), m.mul(q, r)) && le(m.mul(r, p), m.mul(r, q)))
    });
    c.law("nr-base", ["p", "r", "qz", "qs", "qn"], |[p, r, qz, qs, qn]| {
        !le(qn, z) || le(m.nr(p, r, qz, qs, qn), qz)
    });
    c.law("nr-step", ["p", "r", "qz", "qs", "qn"], |[p, r, qz, qs, qn]| {
        let v = m.nr(p, r, qz, qs, qn);
        le(v, m.add(qs, m.add(m.mul(p, qn), m.mul(r, v))))
    });
    c.law("nr-monotone", ["p", "r", "qz", "qs", "qn", "qz'", "qs'", "qn'"], |[p, r, a, b, c2, a2, b2, c3]| {
        !(le(a, a2) && le(b, b2) && le(c2, c3)) || le(m.nr(p, r, a, b, c2), m.nr(p, r, a2, b2, c3))
    });
    c.law("nr-mul-subdistrib", ["p", "r", "qz", "qs", "qn", "q"], |[p, r, qz, qs, qn, q]| {
        le(m.mul(m.nr(p, r, qz, qs, qn), q), m.nr(p, r, m.mul(qz, q), m.mul(qs, q), m.mul(qn, q)))
    });
    c.law(
        "nr-add-subinterchange",
        ["p", "r", "qz", "qs", "qn", "qz'", "qs'", "qn'"],
        |[p, r, a, b, c2, a2, b2, c3]| {
            le(
                m.add(m.nr(p, r, a, b, c2), m.nr(p, r, a2, b2, c3)),
                m.nr(p, r, m.add(a, a2), m.add(b, b2), m.add(c2, c3)),
            )
        },
    );
    LawReport { modality: m.name().to_string(), results: c.results }
}

/// Checks the extra conditions on zero that erasure soundness needs.
pub fn well_behaved_zero(m: &Modality) -> LawReport {
    let mut c = LawCollector { m, results: Vec::new() };
    let z = m.zero();
    c.results.push(LawResult {
        law: "zero-ne-one",
        holds: m.zero() != m.one(),
        witness: (m.zero() == m.one()).then(Vec::new),
    });
    c.law("add-positive", ["p", "q"], |[p, q]| m.add(p, q) != z || (p == z && q == z));
    c.law("meet-positive", ["p", "q"], |[p, q]| m.meet(p, q) != z || (p == z && q == z));
    c.law("nr-positive", ["p", "r", "qz", "qs", "qn"], |[p, r, qz, qs, qn]| {
        m.nr(p, r, qz, qs, qn) != z || (qz == z && qs == z && qn == z)
    });
    c.law("zero-product", ["p", "q"], |[p, q]| m.mul(p, q) != z || p == z || q == z);
    LawReport { modality: m.name().to_string(), results: c.results }
}

/// Division laws, each checked only where the relevant division exists.
/// They are lattice laws: on non-lattice instances some may fail (affine
/// supports division by 0 but `p/0 = ω`).
pub fn check_division_laws(m: &Modality) -> LawReport {
    let mut c = LawCollector { m, results: Vec::new() };
    let (z, o) = (m.zero(), m.one());
    let zp = well_behaved_zero(m).get("zero-product").map(|r| r.holds).unwrap_or(false);
    c.law("div-by-one", ["p"], |[p]| m.div(p, o) == Some(p));
    c.law("div-by-zero", ["p"], |[p]| !m.supports_division_by(z) || m.div(p, z) == Some(o));
    c.law("div-self", ["p"], |[p]| !m.supports_division_by(p) || m.div(p, p) == Some(o));
    c.law("one-div", ["p"], |[p]| !m.supports_division_by(p) || m.div(o, p) == Some(o));
    c.law("zero-div", ["p"], |[p]| !(p != z && zp && m.supports_division_by(p)) || m.div(z, p) == Some(z));
    LawReport { modality: m.name().to_string(), results: c.results }
}

// ---------------------------------------------------------------------------
// Enumerating lawful nr functions

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NrEnumError {
    #[error("carrier has {size} elements; nr enumeration is limited to {guard}")]
    TooLarge { size: usize, guard: usize },
}

/// Lawful `nr` slices: the axioms only relate entries sharing `(p, r)`, so
/// the search runs independently per slice.
#[derive(Clone, Debug)]
pub struct NrEnumeration {
    n: usize,
    /// For each `(p, r)` (row-major), up to `cap` lawful slices of `n³` cells.
    pub slices: Vec<Vec<Vec<Grade>>>,
    pub cap: usize,
}

impl NrEnumeration {
    pub fn unique(&self) -> bool {
        self.slices.iter().all(|s| s.len() == 1)
    }

    /// Builds up to `max` distinct full tables by varying one slice at a time
    /// away from the first solution of each.
    pub fn tables(&self, max: usize) -> Vec<Vec<Grade>> {
        if self.slices.iter().any(|s| s.is_empty()) {
            return Vec::new();
        }
        let base: Vec<usize> = vec![0; self.slices.len()];
        let mut choices = vec![base.clone()];
        for (i, s) in self.slices.iter().enumerate() {
            for k in 1..s.len() {
                if choices.len() >= max {
                    break;
                }
                let mut c = base.clone();
                c[i] = k;
                choices.push(c);
            }
        }
        choices.truncate(max);
        let cube = self.n.pow(3);
        choices
            .iter()
            .map(|c| {
                let mut t = Vec::with_capacity(self.slices.len() * cube);
                for (i, &k) in c.iter().enumerate() {
                    t.extend_from_slice(&self.slices[i][k]);
                }
                t
            })
            .collect()
    }
}

enum Constraint {
    Le(usize, usize),
    MulLe(usize, Grade, usize),
    AddLe(usize, usize, usize),
}

/// Searches for lawful `nr` tables on the `+ · ∧` structure of `m`,
/// keeping at most `cap` solutions per `(p, r)` slice.
pub fn enumerate_nr(m: &Modality, cap: usize, guard: usize) -> Result<NrEnumeration, NrEnumError> {
    let n = m.size();
    if n > guard {
        return Err(NrEnumError::TooLarge { size: n, guard });
    }
    let cube = n * n * n;
    let cell = |a: [Grade; 3]| (a[0].0 as usize * n + a[1].0 as usize) * n + a[2].0 as usize;
    let cells: Vec<[Grade; 3]> = (0..cube).map(|i| tuple::<3>(n, i)).collect();
    // Binary and ternary constraints are the same for every slice.
    let mut by_last: Vec<Vec<Constraint>> = (0..cube).map(|_| Vec::new()).collect();
    for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate() {
            if (0..3).all(|k| m.le(a[k], b[k])) && i != j {
                by_last[i.max(j)].push(Constraint::Le(i, j));
            }
            let s = cell([m.add(a[0], b[0]), m.add(a[1], b[1]), m.add(a[2], b[2])]);
            by_last[i.max(j).max(s)].push(Constraint::AddLe(i, j, s));
        }
        for q in m.elements() {
            let t = cell([m.mul(a[0], q), m.mul(a[1], q), m.mul(a[2], q)]);
            by_last[i.max(t)].push(Constraint::MulLe(i, q, t));
        }
    }
    // With a well-behaved zero, nr must also be positive; without this the
    // erasure semiring admits nr(0, r, 0, 0, ω) = 0.
    let positive = {
        let w = well_behaved_zero(m);
        w.results.iter().filter(|r| r.law != "nr-positive").all(|r| r.holds)
    };
    let mut slices = Vec::with_capacity(n * n);
    for p in m.elements() {
        for r in m.elements() {
            // Unary constraints: base and step.
            let domains: Vec<Vec<Grade>> = cells
                .iter()
                .map(|&[qz, qs, qn]| {
                    m.elements()
                        .filter(|&v| !m.le(qn, m.zero()) || m.le(v, qz))
                        .filter(|&v| m.le(v, m.add(qs, m.add(m.mul(p, qn), m.mul(r, v)))))
                        .filter(|&v| !positive || v != m.zero() || [qz, qs, qn].iter().all(|&q| q == m.zero()))
                        .collect()
                })
                .collect();
            let mut found = Vec::new();
            let mut assign = vec![Grade(0); cube];
            search(m, &domains, &by_last, 0, &mut assign, &mut found, cap);
            slices.push(found);
        }
    }
    Ok(NrEnumeration { n, slices, cap })
}

fn search(
    m: &Modality,
    domains: &[Vec<Grade>],
    by_last: &[Vec<Constraint>],
    i: usize,
    assign: &mut Vec<Grade>,
    found: &mut Vec<Vec<Grade>>,
    cap: usize,
) {
    if found.len() >= cap {
        return;
    }
    if i == domains.len() {
        found.push(assign.clone());
        return;
    }
    for &v in &domains[i] {
        assign[i] = v;
        let ok = by_last[i].iter().all(|c| match *c {
            Constraint::Le(a, b) => m.le(assign[a], assign[b]),
            Constraint::MulLe(a, q, t) => m.le(m.mul(assign[a], q), assign[t]),
            Constraint::AddLe(a, b, s) => m.le(m.add(assign[a], assign[b]), assign[s]),
        });
        if ok {
            search(m, domains, by_last, i + 1, assign, found, cap);
            if found.len() >= cap {
                return;
            }
        }
    }
}

/// True iff exactly one lawful `nr` exists on `m`'s semiring structure.
pub fn nr_unique_check(m: &Modality, guard: usize) -> Result<bool, NrEnumError> {
    Ok(enumerate_nr(m, 2, guard)?.unique())
}

// ---------------------------------------------------------------------------
// Usage contexts

/// A grade per variable in scope; index 0 is the most recently bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UsageCtx(pub Vec<Grade>);

impl UsageCtx {
    pub fn zeros(m: &Modality, n: usize) -> UsageCtx {
        UsageCtx(vec![m.zero(); n])
    }

    /// `e_i`: one at index `i`, zero elsewhere.
    pub fn unit(m: &Modality, n: usize, i: usize) -> UsageCtx {
        let mut c = Self::zeros(m, n);
        c.0[i] = m.one();
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Grade {
        self.0[i]
    }

    pub fn head(&self) -> Grade {
        self.0[0]
    }

    /// Drops the most recent variable.
    pub fn tail(&self) -> UsageCtx {
        UsageCtx(self.0[1..].to_vec())
    }

    /// `γ ∙ p`: binds a new variable with grade `p`.
    pub fn snoc(&self, p: Grade) -> UsageCtx {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(p);
        v.extend_from_slice(&self.0);
        UsageCtx(v)
    }

    fn zip(&self, other: &UsageCtx, f: impl Fn(Grade, Grade) -> Grade) -> UsageCtx {
        assert_eq!(self.len(), other.len(), "usage contexts of different lengths");
        UsageCtx(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, m: &Modality, other: &UsageCtx) -> UsageCtx {
        self.zip(other, |a, b| m.add(a, b))
    }

    pub fn meet(&self, m: &Modality, other: &UsageCtx) -> UsageCtx {
        self.zip(other, |a, b| m.meet(a, b))
    }

    pub fn scale(&self, m: &Modality, p: Grade) -> UsageCtx {
        UsageCtx(self.0.iter().map(|&a| m.mul(p, a)).collect())
    }

    pub fn nr(m: &Modality, p: Grade, r: Grade, z: &UsageCtx, s: &UsageCtx, n: &UsageCtx) -> UsageCtx {
        assert!(z.len() == s.len() && s.len() == n.len());
        UsageCtx((0..z.len()).map(|i| m.nr(p, r, z.0[i], s.0[i], n.0[i])).collect())
    }

    pub fn le(&self, m: &Modality, other: &UsageCtx) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(&a, &b)| m.le(a, b))
    }

    /// Pointwise division, `(γ/q)(x) = γ(x)/q`.
    pub fn div(&self, m: &Modality, q: Grade) -> Option<UsageCtx> {
        self.0.iter().map(|&a| m.div(a, q)).collect::<Option<Vec<_>>>().map(UsageCtx)
    }

    pub fn is_zero(&self, m: &Modality) -> bool {
        self.0.iter().all(|&g| g == m.zero())
    }

    /// Renders as `[x2↦w, x1↦0, x0↦1]`, index 0 rightmost. `names` lists
    /// binder names outermost first.
    pub fn render(&self, m: &Modality, names: Option<&[String]>) -> String {
        let n = self.len();
        let parts: Vec<String> = (0..n)
            .rev()
            .map(|i| {
                let name = match names {
                    Some(ns) if ns.len() == n => ns[n - 1 - i].clone(),
                    _ => format!("x{i}"),
                };
                format!("{name}↦{}", m.grade_name(self.0[i]))
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Rows are the usage contexts of a substitution's components: row `i` is
/// `⌈σ(i)⌉`, over the target scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstMatrix {
    pub rows: Vec<UsageCtx>,
    pub cols: usize,
}

impl SubstMatrix {
    pub fn identity(m: &Modality, n: usize) -> SubstMatrix {
        SubstMatrix { rows: (0..n).map(|i| UsageCtx::unit(m, n, i)).collect(), cols: n }
    }

    /// `γΨ = Σᵢ γ(i)·Ψᵢ`.
    pub fn apply(&self, m: &Modality, gamma: &UsageCtx) -> UsageCtx {
        assert_eq!(gamma.len(), self.rows.len());
        self.rows
            .iter()
            .zip(&gamma.0)
            .fold(UsageCtx::zeros(m, self.cols), |acc, (row, &g)| acc.add(m, &row.scale(m, g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: &Modality, s: &str) -> Grade {
        m.grade(s).unwrap()
    }

    #[test]
    fn erasure_tables() {
        let m = Modality::erasure();
        let (z, w) = (g(&m, "0"), g(&m, "w"));
        assert_eq!(m.add(z, z), z);
        assert_eq!(m.add(z, w), w);
        assert_eq!(m.mul(w, w), w);
        assert_eq!(m.mul(z, w), z);
        assert!(m.le(w, z));
        assert!(!m.le(z, w));
        assert_eq!(m.one(), w);
    }

    #[test]
    fn linear_meet_is_not_affine_meet() {
        let (a, l) = (Modality::affine(), Modality::linear());
        assert_eq!(a.meet(g(&a, "0"), g(&a, "1")), g(&a, "1"));
        assert_eq!(l.meet(g(&l, "0"), g(&l, "1")), g(&l, "w"));
    }

    #[test]
    fn literal_aliases() {
        let e = Modality::erasure();
        assert_eq!(e.grade("1"), Some(e.one()));
        assert_eq!(e.grade("ω"), e.omega());
        let t = Modality::trivial();
        assert_eq!(t.grade("1"), Some(Grade(0)));
        assert_eq!(e.grade("1?"), None);
    }

    #[test]
    fn lattice_parse_and_errors() {
        let decl = LatticeDecl::parse("elem L M H\ncover L M\ncover M H\n").unwrap();
        let m = Modality::lattice(&decl).unwrap();
        assert_eq!(m.grade_name(m.zero()), "H");
        assert_eq!(m.grade_name(m.one()), "L");
        assert!(LatticeDecl::parse("elem a b\n").is_err());
        assert!(LatticeDecl::parse("elem a b\ncover a b\ncover b a\n").is_err());
        assert!(LatticeDecl::parse("frob\n").is_err());
    }

    #[test]
    fn ctx_render_puts_index_zero_right() {
        let m = Modality::erasure();
        let c = UsageCtx(vec![m.one(), m.zero(), m.one()]);
        assert_eq!(c.render(&m, None), "[x2↦w, x1↦0, x0↦w]");
    }

    #[test]
    fn oversized_carrier_rejected() {
        let names: Vec<String> = (0..9).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert!(matches!(Modality::chain(&refs), Err(ModalityError::CarrierTooLarge(9))));
    }
}
