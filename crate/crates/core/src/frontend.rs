//! Surface syntax: `.gtt` files of `def name : A := t` definitions with named
//! binders. Parsing is modality-independent; grade literals are resolved
//! during elaboration, which also inlines earlier definitions.

use crate::grades::{Grade, Modality};
use crate::syntax::{Strength, Term};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontendErrorKind {
    Lex,
    Parse,
    Unbound,
    Grade,
    UnknownDefinition,
    Duplicate,
    Pragma,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct FrontendError {
    pub kind: FrontendErrorKind,
    pub span: Span,
    pub message: String,
}

fn err<T>(kind: FrontendErrorKind, span: Span, message: impl Into<String>) -> Result<T, FrontendError> {
    Err(FrontendError { kind, span, message: message.into() })
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Index(usize),
    Sym(&'static str),
    Eof,
}

const SYMBOLS: [&str; 16] = [":=", "->", "**", "(", ")", "[", "]", ",", ".", ":", "\\", "@", "&", "λ", "→", "×"];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '?'
}

type Lexed = (Vec<(Tok, Span)>, Vec<Pragma>);

fn lex(text: &str) -> Result<Lexed, FrontendError> {
    let mut toks = Vec::new();
    let mut pragmas = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix('#') {
            if rest.starts_with(|c: char| c.is_alphabetic()) {
                let col = line.len() - trimmed.len() + 1;
                let body = rest.split("--").next().unwrap_or("");
                let mut words = body.split_whitespace();
                let key = words.next().unwrap_or("").to_string();
                let value = words.collect::<Vec<_>>().join(" ");
                pragmas.push(Pragma { key, value, span: Span { line: line_no, col } });
                continue;
            }
        }
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            let span = Span { line: line_no, col: i + 1 };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().map(|&(_, c)| c).collect();
            if rest.starts_with("--") {
                break;
            }
            if c.is_ascii_digit() {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                // grade names such as `1?` (at most one)
                if j < chars.len() && chars[j].1 == '?' {
                    toks.push((Tok::Ident(format!("{s}?")), span));
                    i = j + 1;
                    continue;
                }
                let n = s
                    .parse()
                    .or_else(|_| err(FrontendErrorKind::Lex, span, format!("numeral `{s}` too large")))?;
                toks.push((Tok::Num(n), span));
                i = j;
                continue;
            }
            if c == '#' {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return err(FrontendErrorKind::Lex, span, "expected an index after `#`");
                }
                let s: String = chars[i + 1..j].iter().map(|&(_, c)| c).collect();
                let n = s
                    .parse()
                    .or_else(|_| err(FrontendErrorKind::Lex, span, format!("index `#{s}` too large")))?;
                toks.push((Tok::Index(n), span));
                i = j;
                continue;
            }
            if is_ident_start(c) && c != 'λ' {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j].1) && chars[j].1 != 'λ' {
                    j += 1;
                }
                toks.push((Tok::Ident(chars[i..j].iter().map(|&(_, c)| c).collect()), span));
                i = j;
                continue;
            }
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    toks.push((Tok::Sym(s), span));
                    i += s.chars().count();
                }
                None => return err(FrontendErrorKind::Lex, span, format!("unexpected character `{c}`")),
            }
        }
    }
    let end = Span { line: text.lines().count().max(1), col: text.lines().last().map_or(1, |l| l.len() + 1) };
    toks.push((Tok::Eof, end));
    Ok((toks, pragmas))
}

// ---------------------------------------------------------------------------
// Surface AST

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeLit {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

type E = Box<Expr>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Name(String),
    /// A raw de Bruijn index `#i`.
    Index(usize),
    Num(u64),
    U,
    Nat,
    Empty,
    Unit(Strength),
    Star(Strength),
    Pi { p: GradeLit, q: GradeLit, x: String, dom: E, cod: E },
    Sigma { k: Strength, p: GradeLit, q: GradeLit, x: String, fst: E, snd: E },
    Lam { p: GradeLit, x: String, body: E },
    App { p: GradeLit, fun: E, arg: E },
    Pair { k: Strength, p: GradeLit, fst: E, snd: E },
    Fst { p: GradeLit, pair: E },
    Snd { p: GradeLit, pair: E },
    Prodrec { r: GradeLit, p: GradeLit, q: GradeLit, z: String, motive: E, scrut: E, x: String, y: String, body: E },
    Suc(E),
    Natrec { p: GradeLit, q: GradeLit, r: GradeLit, z: String, motive: E, zero: E, x: String, ih: String, succ: E, scrut: E },
    Emptyrec { p: GradeLit, motive: E, scrut: E },
    Unitrec { p: GradeLit, q: GradeLit, z: String, motive: E, scrut: E, body: E },
    Ann { term: E, ty: E },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pragma {
    pub key: String,
    pub value: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub ty: Expr,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceFile {
    pub pragmas: Vec<Pragma>,
    pub defs: Vec<Definition>,
}

/// Settings a file may request with `#key value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileSettings {
    pub modality: Option<String>,
    pub nr_bad: Option<bool>,
    pub moded: Option<bool>,
    pub strict: Option<bool>,
    pub erased_matches: Option<bool>,
    pub emptyrec_zero: Option<bool>,
    pub pisigma_equal: Option<bool>,
}

fn on_off(p: &Pragma, on: &str, off: &str) -> Result<bool, FrontendError> {
    match p.value.as_str() {
        v if v == on => Ok(true),
        v if v == off => Ok(false),
        v => err(FrontendErrorKind::Pragma, p.span, format!("`#{}` expects `{on}` or `{off}`, got `{v}`", p.key)),
    }
}

impl SourceFile {
    pub fn settings(&self) -> Result<FileSettings, FrontendError> {
        let mut s = FileSettings::default();
        for p in &self.pragmas {
            match p.key.as_str() {
                "modality" => s.modality = Some(p.value.clone()),
                "nr" => s.nr_bad = Some(on_off(p, "bad", "good")?),
                "modes" => s.moded = Some(on_off(p, "moded", "plain")?),
                "strict" => s.strict = Some(true),
                "erased-matches" => s.erased_matches = Some(on_off(p, "on", "off")?),
                "emptyrec-zero" => s.emptyrec_zero = Some(on_off(p, "on", "off")?),
                "pisigma" => s.pisigma_equal = Some(on_off(p, "equal", "any")?),
                k => return err(FrontendErrorKind::Pragma, p.span, format!("unknown pragma `#{k}`")),
            }
        }
        Ok(s)
    }

    pub fn def(&self, name: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.name == name)
    }
}

// ---------------------------------------------------------------------------
// Parsing

const KEYWORDS: [&str; 17] = [
    "def", "U", "Nat", "Empty", "Unit", "Pi", "Sig", "fst", "snd", "prodrec", "zero", "suc", "natrec", "emptyrec",
    "star", "unitrec", "Type",
];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Index(i) => format!("`#{i}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        err(
            FrontendErrorKind::Parse,
            self.span(),
            format!("expected {expected}, found {}", Self::describe(self.peek())),
        )
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{k}`"))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("a name"),
        }
    }

    fn grade(&mut self) -> PResult<GradeLit> {
        let span = self.span();
        let text = match self.peek().clone() {
            Tok::Ident(s) => s,
            Tok::Num(n) => n.to_string(),
            _ => return self.fail("a grade"),
        };
        self.bump();
        Ok(GradeLit { text, span })
    }

    fn grades<const N: usize>(&mut self) -> PResult<[GradeLit; N]> {
        self.expect_sym("[")?;
        let mut out = Vec::with_capacity(N);
        for i in 0..N {
            if i > 0 {
                self.expect_sym(",")?;
            }
            out.push(self.grade()?);
        }
        self.expect_sym("]")?;
        Ok(out.try_into().unwrap())
    }

    fn strength(&mut self) -> PResult<Strength> {
        if self.eat_sym("&") {
            Ok(Strength::Strong)
        } else if self.eat_sym("@") {
            Ok(Strength::Weak)
        } else {
            self.fail("`&` or `@`")
        }
    }

    fn file(&mut self) -> PResult<Vec<Definition>> {
        let mut defs: Vec<Definition> = Vec::new();
        while *self.peek() != Tok::Eof {
            let span = self.span();
            self.expect_kw("def")?;
            let name_span = self.span();
            let name = self.name()?;
            if defs.iter().any(|d| d.name == name) {
                return err(FrontendErrorKind::Duplicate, name_span, format!("`{name}` is already defined"));
            }
            self.expect_sym(":")?;
            let ty = self.expr()?;
            self.expect_sym(":=")?;
            let body = self.expr()?;
            defs.push(Definition { name, ty, body, span });
        }
        Ok(defs)
    }

    fn mk(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Binder forms, or an application spine.
    fn expr(&mut self) -> PResult<Expr> {
        let span = self.span();
        if self.is_kw("Pi") {
            self.bump();
            let [p, q] = self.grades()?;
            let (x, dom) = self.annotated_binder()?;
            if !self.eat_sym("->") && !self.eat_sym("→") {
                return self.fail("`->`");
            }
            let cod = self.expr()?;
            return Ok(Self::mk(ExprKind::Pi { p, q, x, dom: Box::new(dom), cod: Box::new(cod) }, span));
        }
        if self.is_kw("Sig") {
            self.bump();
            let k = self.strength()?;
            let [p, q] = self.grades()?;
            let (x, fst) = self.annotated_binder()?;
            if !self.eat_sym("**") && !self.eat_sym("×") {
                return self.fail("`**`");
            }
            let snd = self.expr()?;
            return Ok(Self::mk(ExprKind::Sigma { k, p, q, x, fst: Box::new(fst), snd: Box::new(snd) }, span));
        }
        if self.eat_sym("\\") || self.eat_sym("λ") {
            let [p] = self.grades()?;
            let x = self.name()?;
            self.expect_sym(".")?;
            let body = self.expr()?;
            return Ok(Self::mk(ExprKind::Lam { p, x, body: Box::new(body) }, span));
        }
        self.app()
    }

    fn annotated_binder(&mut self) -> PResult<(String, Expr)> {
        self.expect_sym("(")?;
        let x = self.name()?;
        self.expect_sym(":")?;
        let a = self.expr()?;
        self.expect_sym(")")?;
        Ok((x, a))
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut fun = self.prefix()?;
        while self.is_sym("@") {
            let span = fun.span;
            self.bump();
            let [p] = self.grades()?;
            let arg = if self.starts_binder() { self.expr()? } else { self.prefix()? };
            fun = Self::mk(ExprKind::App { p, fun: Box::new(fun), arg: Box::new(arg) }, span);
        }
        Ok(fun)
    }

    fn starts_binder(&self) -> bool {
        self.is_kw("Pi") || self.is_kw("Sig") || self.is_sym("\\") || self.is_sym("λ")
    }

    fn motive(&mut self) -> PResult<(String, Expr)> {
        self.expect_sym("(")?;
        let x = self.name()?;
        self.expect_sym(".")?;
        let a = self.expr()?;
        self.expect_sym(")")?;
        Ok((x, a))
    }

    fn branch2(&mut self) -> PResult<(String, String, Expr)> {
        self.expect_sym("(")?;
        let x = self.name()?;
        let y = self.name()?;
        self.expect_sym(".")?;
        let a = self.expr()?;
        self.expect_sym(")")?;
        Ok((x, y, a))
    }

    fn prefix(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        let b = Box::new;
        let kind = match kw.as_str() {
            "fst" | "snd" => {
                self.bump();
                let [p] = self.grades()?;
                let pair = b(self.prefix()?);
                if kw == "fst" {
                    ExprKind::Fst { p, pair }
                } else {
                    ExprKind::Snd { p, pair }
                }
            }
            "suc" => {
                self.bump();
                ExprKind::Suc(b(self.prefix()?))
            }
            "prodrec" => {
                self.bump();
                let [r, p, q] = self.grades()?;
                let (z, motive) = self.motive()?;
                let scrut = self.atom()?;
                let (x, y, body) = self.branch2()?;
                ExprKind::Prodrec { r, p, q, z, motive: b(motive), scrut: b(scrut), x, y, body: b(body) }
            }
            "natrec" => {
                self.bump();
                let [p, q, r] = self.grades()?;
                let (z, motive) = self.motive()?;
                let zero = self.atom()?;
                let (x, ih, succ) = self.branch2()?;
                let scrut = self.atom()?;
                ExprKind::Natrec { p, q, r, z, motive: b(motive), zero: b(zero), x, ih, succ: b(succ), scrut: b(scrut) }
            }
            "emptyrec" => {
                self.bump();
                let [p] = self.grades()?;
                let motive = self.atom()?;
                let scrut = self.atom()?;
                ExprKind::Emptyrec { p, motive: b(motive), scrut: b(scrut) }
            }
            "unitrec" => {
                self.bump();
                let [p, q] = self.grades()?;
                let (z, motive) = self.motive()?;
                let scrut = self.atom()?;
                let body = self.atom()?;
                ExprKind::Unitrec { p, q, z, motive: b(motive), scrut: b(scrut), body: b(body) }
            }
            _ => return self.atom(),
        };
        Ok(Self::mk(kind, span))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                ExprKind::Num(n)
            }
            Tok::Index(i) => {
                self.bump();
                ExprKind::Index(i)
            }
            Tok::Ident(s) => match s.as_str() {
                "U" | "Type" => {
                    self.bump();
                    ExprKind::U
                }
                "Nat" => {
                    self.bump();
                    ExprKind::Nat
                }
                "Empty" => {
                    self.bump();
                    ExprKind::Empty
                }
                "zero" => {
                    self.bump();
                    ExprKind::Num(0)
                }
                "Unit" => {
                    self.bump();
                    ExprKind::Unit(self.strength()?)
                }
                "star" => {
                    self.bump();
                    ExprKind::Star(self.strength()?)
                }
                _ => ExprKind::Name(self.name()?),
            },
            Tok::Sym("(") => {
                self.bump();
                let first = self.expr()?;
                if self.eat_sym(")") {
                    return Ok(first);
                }
                if self.eat_sym(":") {
                    let ty = self.expr()?;
                    self.expect_sym(")")?;
                    ExprKind::Ann { term: Box::new(first), ty: Box::new(ty) }
                } else if self.eat_sym(",") {
                    let k = self.strength()?;
                    let [p] = self.grades()?;
                    let snd = self.expr()?;
                    self.expect_sym(")")?;
                    ExprKind::Pair { k, p, fst: Box::new(first), snd: Box::new(snd) }
                } else {
                    return self.fail("`)`, `:` or `,`");
                }
            }
            _ => return self.fail("a term"),
        };
        Ok(Self::mk(kind, span))
    }
}

pub fn parse(text: &str) -> Result<SourceFile, FrontendError> {
    let (toks, pragmas) = lex(text)?;
    let defs = Parser { toks, pos: 0 }.file()?;
    Ok(SourceFile { pragmas, defs })
}

/// Parses a single expression (no definitions).
pub fn parse_expr(text: &str) -> Result<Expr, FrontendError> {
    let (toks, _) = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.fail("end of input");
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Elaboration

/// Maps child-index paths of an elaborated term to source positions.
#[derive(Clone, Debug, Default)]
pub struct SpanTable(Vec<(Vec<u8>, Span)>);

impl SpanTable {
    /// The span of the deepest recorded ancestor of `path`.
    pub fn lookup(&self, path: &[u8]) -> Option<Span> {
        self.0
            .iter()
            .filter(|(p, _)| path.starts_with(p))
            .max_by_key(|(p, _)| p.len())
            .map(|(_, s)| *s)
    }
}

struct Elab<'a> {
    m: &'a Modality,
    defs: &'a HashMap<String, Term>,
    scope: Vec<String>,
    path: Vec<u8>,
    spans: SpanTable,
}

impl Elab<'_> {
    fn grade(&self, g: &GradeLit) -> PResult<Grade> {
        match self.m.grade(&g.text) {
            Some(x) => Ok(x),
            None => err(
                FrontendErrorKind::Grade,
                g.span,
                format!(
                    "grade `{}` is not an element of `{}` (elements: {})",
                    g.text,
                    self.m.name(),
                    self.m.element_names().join(", ")
                ),
            ),
        }
    }

    fn child(&mut self, idx: u8, binders: &[&str], e: &Expr) -> PResult<Term> {
        self.path.push(idx);
        for x in binders {
            self.scope.push(x.to_string());
        }
        let r = self.go(e);
        for _ in binders {
            self.scope.pop();
        }
        self.path.pop();
        r
    }

    fn go(&mut self, e: &Expr) -> PResult<Term> {
        use ExprKind as K;
        self.spans.0.push((self.path.clone(), e.span));
        let b = Box::new;
        Ok(match &e.kind {
            K::Name(x) => match self.scope.iter().rev().position(|y| y == x) {
                Some(i) => Term::Var(i),
                None => match self.defs.get(x) {
                    Some(t) => t.clone(),
                    None => return err(FrontendErrorKind::Unbound, e.span, format!("unbound name `{x}`")),
                },
            },
            K::Index(i) => Term::Var(*i),
            K::Num(n) => crate::syntax::numeral(*n),
            K::U => Term::U,
            K::Nat => Term::Nat,
            K::Empty => Term::Empty,
            K::Unit(k) => Term::Unit(*k),
            K::Star(k) => Term::Star(*k),
            K::Pi { p, q, x, dom, cod } => Term::Pi {
                p: self.grade(p)?,
                q: self.grade(q)?,
                dom: b(self.child(0, &[], dom)?),
                cod: b(self.child(1, &[x], cod)?),
            },
            K::Sigma { k, p, q, x, fst, snd } => Term::Sigma {
                k: *k,
                p: self.grade(p)?,
                q: self.grade(q)?,
                fst: b(self.child(0, &[], fst)?),
                snd: b(self.child(1, &[x], snd)?),
            },
            K::Lam { p, x, body } => Term::Lam { p: self.grade(p)?, body: b(self.child(0, &[x], body)?) },
            K::App { p, fun, arg } => Term::App {
                p: self.grade(p)?,
                fun: b(self.child(0, &[], fun)?),
                arg: b(self.child(1, &[], arg)?),
            },
            K::Pair { k, p, fst, snd } => Term::Pair {
                k: *k,
                p: self.grade(p)?,
                fst: b(self.child(0, &[], fst)?),
                snd: b(self.child(1, &[], snd)?),
            },
            K::Fst { p, pair } => Term::Fst { p: self.grade(p)?, pair: b(self.child(0, &[], pair)?) },
            K::Snd { p, pair } => Term::Snd { p: self.grade(p)?, pair: b(self.child(0, &[], pair)?) },
            K::Prodrec { r, p, q, z, motive, scrut, x, y, body } => Term::Prodrec {
                r: self.grade(r)?,
                p: self.grade(p)?,
                q: self.grade(q)?,
                motive: b(self.child(0, &[z], motive)?),
                scrut: b(self.child(1, &[], scrut)?),
                body: b(self.child(2, &[x, y], body)?),
            },
            K::Suc(x) => Term::Suc(b(self.child(0, &[], x)?)),
            K::Natrec { p, q, r, z, motive, zero, x, ih, succ, scrut } => Term::Natrec {
                p: self.grade(p)?,
                q: self.grade(q)?,
                r: self.grade(r)?,
                motive: b(self.child(0, &[z], motive)?),
                zero: b(self.child(1, &[], zero)?),
                succ: b(self.child(2, &[x, ih], succ)?),
                scrut: b(self.child(3, &[], scrut)?),
            },
            K::Emptyrec { p, motive, scrut } => Term::Emptyrec {
                p: self.grade(p)?,
                motive: b(self.child(0, &[], motive)?),
                scrut: b(self.child(1, &[], scrut)?),
            },
            K::Unitrec { p, q, z, motive, scrut, body } => Term::Unitrec {
                p: self.grade(p)?,
                q: self.grade(q)?,
                motive: b(self.child(0, &[z], motive)?),
                scrut: b(self.child(1, &[], scrut)?),
                body: b(self.child(2, &[], body)?),
            },
            K::Ann { term, ty } => Term::Ann { term: b(self.child(0, &[], term)?), ty: b(self.child(1, &[], ty)?) },
        })
    }
}

/// Elaborates an expression in a scope of named free variables (outermost
/// first).
pub fn elaborate(m: &Modality, e: &Expr, scope: &[String]) -> Result<(Term, SpanTable), FrontendError> {
    let defs = HashMap::new();
    let mut el = Elab { m, defs: &defs, scope: scope.to_vec(), path: Vec::new(), spans: SpanTable::default() };
    let t = el.go(e)?;
    Ok((t, el.spans))
}

/// Parses and elaborates a single term.
pub fn parse_term(text: &str, m: &Modality, scope: &[String]) -> Result<Term, FrontendError> {
    elaborate(m, &parse_expr(text)?, scope).map(|(t, _)| t)
}

/// A fully elaborated definition: closed type and body, earlier
/// definitions inlined as ascriptions `(body : type)`.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: String,
    pub ty: Term,
    pub body: Term,
    pub ty_spans: SpanTable,
    pub body_spans: SpanTable,
    pub span: Span,
    /// Names of the leading λ-binders of the body, outermost first.
    pub lambda_names: Vec<String>,
}

impl Resolved {
    pub fn term(&self) -> Term {
        Term::Ann { term: Box::new(self.body.clone()), ty: Box::new(self.ty.clone()) }
    }
}

fn lambda_names(e: &Expr) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = e;
    while let ExprKind::Lam { x, body, .. } = &cur.kind {
        out.push(x.clone());
        cur = body;
    }
    out
}

/// Elaborates every definition in order.
pub fn resolve_all(file: &SourceFile, m: &Modality) -> Result<Vec<Resolved>, FrontendError> {
    let mut env: HashMap<String, Term> = HashMap::new();
    let mut out = Vec::new();
    for d in &file.defs {
        let mut el = Elab { m, defs: &env, scope: Vec::new(), path: Vec::new(), spans: SpanTable::default() };
        let ty = el.go(&d.ty)?;
        let ty_spans = std::mem::take(&mut el.spans);
        let body = el.go(&d.body)?;
        let body_spans = el.spans;
        let r = Resolved {
            name: d.name.clone(),
            ty,
            body,
            ty_spans,
            body_spans,
            span: d.span,
            lambda_names: lambda_names(&d.body),
        };
        env.insert(d.name.clone(), r.term());
        out.push(r);
    }
    Ok(out)
}

/// Elaborates one definition (and the ones before it).
pub fn resolve(file: &SourceFile, name: &str, m: &Modality) -> Result<Resolved, FrontendError> {
    let Some(idx) = file.defs.iter().position(|d| d.name == name) else {
        return err(FrontendErrorKind::UnknownDefinition, Span::default(), format!("no definition named `{name}`"));
    };
    let prefix = SourceFile { pragmas: Vec::new(), defs: file.defs[..=idx].to_vec() };
    Ok(resolve_all(&prefix, m)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    #[test]
    fn identity() {
        let m = Modality::erasure();
        let t = parse_term("\\[0] A. \\[w] x. x", &m, &[]).unwrap();
        assert_eq!(t, lam(m.zero(), lam(m.grade("w").unwrap(), var(0))));
    }

    #[test]
    fn numerals_desugar() {
        let m = Modality::linear();
        assert_eq!(parse_term("2", &m, &[]).unwrap(), suc(suc(Term::Zero)));
        assert_eq!(parse_term("zero", &m, &[]).unwrap(), Term::Zero);
    }

    #[test]
    fn plus_body() {
        let m = Modality::linear();
        let t = parse_term("natrec[0,0,1] (m. Nat) k (m r. suc r) n", &m, &["k".into(), "n".into()]).unwrap();
        let (z, one) = (m.zero(), m.one());
        assert_eq!(t, natrec(z, z, one, Term::Nat, var(1), suc(var(0)), var(0)));
    }

    #[test]
    fn bad_grade_is_reported() {
        let m = Modality::erasure();
        let e = parse_term("\\[7] x. x", &m, &[]).unwrap_err();
        assert_eq!(e.kind, FrontendErrorKind::Grade);
        assert_eq!(e.span, Span { line: 1, col: 3 });
    }

    #[test]
    fn definitions_inline() {
        let m = Modality::erasure();
        let src = "#modality erasure\n\
                   def id : Pi[0,0] (A : U) -> Pi[w,0] (x : A) -> A := \\[0] A. \\[w] x. x\n\
                   -- a use\n\
                   def idNZ : Nat := id @[0] Nat @[w] zero\n";
        let f = parse(src).unwrap();
        assert_eq!(f.settings().unwrap().modality.as_deref(), Some("erasure"));
        let r = resolve(&f, "idNZ", &m).unwrap();
        let id = resolve(&f, "id", &m).unwrap();
        let w = m.grade("w").unwrap();
        assert_eq!(r.body, app(w, app(m.zero(), id.term(), Term::Nat), Term::Zero));
        assert_eq!(id.lambda_names, vec!["A", "x"]);
        assert!(resolve(&f, "nope", &m).is_err());
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse("def x : Nat :=\n  (zero").unwrap_err();
        assert_eq!(e.kind, FrontendErrorKind::Parse);
        assert_eq!(e.span.line, 2);
        let e = parse("def x : Nat := def").unwrap_err();
        assert_eq!(e.span, Span { line: 1, col: 16 });
        let m = Modality::erasure();
        let f = parse("def x : Nat := y\n").unwrap();
        assert_eq!(resolve(&f, "x", &m).unwrap_err().kind, FrontendErrorKind::Unbound);
    }

    #[test]
    fn span_lookup_uses_nearest_ancestor() {
        let m = Modality::erasure();
        let (_, spans) = elaborate(&m, &parse_expr("\\[w] x. suc 3").unwrap(), &[]).unwrap();
        assert_eq!(spans.lookup(&[0, 0, 0]), Some(Span { line: 1, col: 13 }));
        assert_eq!(spans.lookup(&[0]), Some(Span { line: 1, col: 9 }));
    }
}
