//! The `gtt` command line.

use crate::config::{Config, ModeStructure, PiSigmaRel, Restrictions, Strictness};
use crate::extract::{erase, TargetNumeral};
use crate::frontend::{parse, resolve_all, FileSettings, FrontendError, Resolved, SourceFile, Span};
use crate::grades::{check_division_laws, check_laws, nr_unique_check, well_behaved_zero, LatticeDecl, Modality, NrChoice, UsageCtx, NR_ENUM_GUARD};
use crate::harness::{run_all, run_program, run_suite, SuiteOptions, SUITES};
use crate::reduce::{read_numeral, Fuel, Numeral};
use crate::syntax::{pretty, Term};
use crate::typecheck::{check_term, check_type};
use crate::usage::{check_usage, infer_usage};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gtt", version, about = "Checker, usage inference and extraction for a graded modal type theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type- and usage-check every definition of a file.
    Check { file: PathBuf },
    /// Print the principal usage of a definition's λ-bound variables.
    Usage { file: PathBuf, name: String },
    /// Print the extracted target program.
    Extract {
        file: PathBuf,
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Evaluate a ℕ-valued definition in the source language.
    Eval { file: PathBuf, name: String },
    /// Evaluate a ℕ-valued definition in the source and in both target strategies.
    Run { file: PathBuf, name: String },
    /// Check the algebraic laws of the active modality.
    Laws,
    /// Run a harness suite (or `all`).
    Suite { id: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NrArg {
    Good,
    Bad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModesArg {
    Plain,
    Moded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PiSigmaArg {
    Any,
    Equal,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// erasure, affine, linear, linear-or-affine, trivial, lmh, lattice (with --lattice), or an inline chain such as lattice:L<M<H
    #[arg(long, global = true)]
    pub modality: Option<String>,
    /// Lattice description (with `--modality lattice`).
    #[arg(long, global = true)]
    pub lattice: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub nr: Option<NrArg>,
    #[arg(long, global = true, value_enum)]
    pub modes: Option<ModesArg>,
    /// Strict extraction (and call-by-value evaluation).
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true)]
    pub no_erased_matches: bool,
    #[arg(long, global = true)]
    pub no_emptyrec_zero: bool,
    #[arg(long, global = true, value_enum)]
    pub pisigma: Option<PiSigmaArg>,
    #[arg(long, global = true, env = "GTT_FUEL")]
    pub fuel: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads for per-definition checking.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

/// Errors that abort before any checking happens.
#[derive(Debug)]
pub struct ConfigProblem(pub String);

pub fn build_config(opts: &GlobalOpts, file: &FileSettings) -> Result<Config, ConfigProblem> {
    let name = opts.modality.clone().or_else(|| file.modality.clone()).unwrap_or_else(|| "erasure".into());
    let bad = match opts.nr {
        Some(n) => n == NrArg::Bad,
        None => file.nr_bad.unwrap_or(false),
    };
    let nr = if bad { NrChoice::Bad } else { NrChoice::Good };
    let m = if name == "lattice" {
        let Some(path) = &opts.lattice else {
            return Err(ConfigProblem("--modality lattice needs --lattice FILE".into()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigProblem(format!("cannot read {}: {e}", path.display())))?;
        if bad {
            return Err(ConfigProblem("--nr bad is only defined for the linear modality".into()));
        }
        let decl = LatticeDecl::parse(&text).map_err(|e| ConfigProblem(format!("{}: {e}", path.display())))?;
        Modality::lattice(&decl).map_err(|e| ConfigProblem(e.to_string()))?
    } else {
        if opts.lattice.is_some() {
            return Err(ConfigProblem("--lattice is only meaningful with --modality lattice".into()));
        }
        Modality::by_name(&name, nr).map_err(|e| ConfigProblem(e.to_string()))?
    };
    let mut cfg = Config::new(m);
    let moded = match opts.modes {
        Some(x) => x == ModesArg::Moded,
        None => file.moded.unwrap_or(false),
    };
    if moded {
        cfg.modes = ModeStructure::Moded;
    }
    if opts.strict || file.strict.unwrap_or(false) {
        cfg.strictness = Strictness::Strict;
    }
    let mut r = Restrictions::allow_all(cfg.m());
    if opts.no_erased_matches || file.erased_matches == Some(false) {
        r = r.no_erased_matches(cfg.m());
    }
    if opts.no_emptyrec_zero || file.emptyrec_zero == Some(false) {
        r = r.no_emptyrec_zero(cfg.m());
    }
    let equal = match opts.pisigma {
        Some(p) => p == PiSigmaArg::Equal,
        None => file.pisigma_equal.unwrap_or(false),
    };
    if equal {
        r.pisigma = PiSigmaRel::Equal;
    }
    cfg.restrictions = r;
    if let Some(f) = opts.fuel {
        cfg.fuel = f;
    }
    cfg.seed = opts.seed;
    cfg.validate().map_err(|e| ConfigProblem(e.to_string()))?;
    Ok(cfg)
}

struct Out<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    format: Format,
}

impl Out<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.stdout, "{}", s.as_ref());
    }

    fn err(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.stderr, "{}", s.as_ref());
    }

    fn json(&mut self, v: Value) {
        let _ = writeln!(self.stdout, "{}", serde_json::to_string_pretty(&v).unwrap());
    }
}

fn span_json(s: Option<Span>) -> Value {
    match s {
        Some(s) => json!({ "line": s.line, "col": s.col }),
        None => Value::Null,
    }
}

fn frontend_error(out: &mut Out, file: &Path, command: &str, e: &FrontendError) -> i32 {
    match out.format {
        Format::Text => out.err(format!("{}:{e}", file.display())),
        Format::Json => out.json(json!({
            "command": command,
            "ok": false,
            "error": { "kind": format!("{:?}", e.kind), "message": e.message, "span": span_json(Some(e.span)) }
        })),
    }
    EXIT_FAIL
}

/// Outcome of checking one definition: error kind, message and span.
pub struct DefReport {
    pub name: String,
    pub error: Option<(String, String, Option<Span>)>,
}

/// Type-checks, then usage-checks, one elaborated definition.
pub fn check_def(cfg: &Config, d: &Resolved) -> DefReport {
    let fail = |kind: String, msg: String, span: Option<Span>| DefReport {
        name: d.name.clone(),
        error: Some((kind, msg, span.or(Some(d.span)))),
    };
    if let Err(e) = check_type(cfg, &[], &d.ty) {
        return fail(format!("{:?}", e.kind), e.message, d.ty_spans.lookup(&e.path));
    }
    if let Err(e) = check_term(cfg, &[], &d.body, &d.ty) {
        return fail(format!("{:?}", e.kind), e.message, d.body_spans.lookup(&e.path));
    }
    if let Err(e) = check_usage(cfg, &UsageCtx::zeros(cfg.m(), 0), &d.body) {
        return fail(format!("{:?}", e.kind), e.message, d.body_spans.lookup(&e.path));
    }
    DefReport { name: d.name.clone(), error: None }
}

fn check_all(cfg: &Config, defs: &[Resolved], jobs: usize) -> Vec<DefReport> {
    if jobs <= 1 || defs.len() <= 1 {
        return defs.iter().map(|d| check_def(cfg, d)).collect();
    }
    let chunk = defs.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = defs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|d| check_def(cfg, d)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("checker thread panicked")).collect()
    })
}

struct Loaded {
    cfg: Config,
    defs: Vec<Resolved>,
}

/// Reads, parses and elaborates a file; `Err` carries the exit code.
fn load(out: &mut Out, opts: &GlobalOpts, path: &Path, command: &str) -> Result<Loaded, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            out.err(format!("cannot read {}: {e}", path.display()));
            return Err(EXIT_USAGE);
        }
    };
    let file: SourceFile = parse(&text).map_err(|e| frontend_error(out, path, command, &e))?;
    let settings = file.settings().map_err(|e| frontend_error(out, path, command, &e))?;
    let cfg = build_config(opts, &settings).map_err(|ConfigProblem(msg)| {
        out.err(format!("configuration error: {msg}"));
        EXIT_USAGE
    })?;
    let defs = resolve_all(&file, cfg.m()).map_err(|e| frontend_error(out, path, command, &e))?;
    Ok(Loaded { cfg, defs })
}

fn find<'a>(out: &mut Out, defs: &'a [Resolved], name: &str, path: &Path) -> Result<&'a Resolved, i32> {
    match defs.iter().find(|d| d.name == name) {
        Some(d) => Ok(d),
        None => {
            out.err(format!("{}: no definition named `{name}`", path.display()));
            Err(EXIT_FAIL)
        }
    }
}

fn cmd_check(out: &mut Out, opts: &GlobalOpts, path: &Path) -> i32 {
    let l = match load(out, opts, path, "check") {
        Ok(l) => l,
        Err(c) => return c,
    };
    let reports = check_all(&l.cfg, &l.defs, opts.jobs);
    let ok = reports.iter().all(|r| r.error.is_none());
    match out.format {
        Format::Text => {
            for (r, d) in reports.iter().zip(&l.defs) {
                match &r.error {
                    None => out.line(format!("ok {} : {}", r.name, pretty(l.cfg.m(), &d.ty, &[]))),
                    Some((kind, msg, span)) => {
                        let at = span.map(|s| format!("{}:{s}: ", path.display())).unwrap_or_default();
                        out.line(format!("error {}", r.name));
                        out.err(format!("{at}{}: {kind}: {msg}", r.name));
                    }
                }
            }
        }
        Format::Json => {
            let defs: Vec<Value> = reports
                .iter()
                .map(|r| match &r.error {
                    None => json!({ "name": r.name, "ok": true, "error": null }),
                    Some((kind, msg, span)) => json!({
                        "name": r.name,
                        "ok": false,
                        "error": { "kind": kind, "message": msg, "span": span_json(*span) }
                    }),
                })
                .collect();
            out.json(json!({ "command": "check", "ok": ok, "modality": l.cfg.m().name(), "definitions": defs }));
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_usage(out: &mut Out, opts: &GlobalOpts, path: &Path, name: &str) -> i32 {
    let l = match load(out, opts, path, "usage") {
        Ok(l) => l,
        Err(c) => return c,
    };
    let d = match find(out, &l.defs, name, path) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let m = l.cfg.m();
    let mut body = &d.body;
    let mut path_to_body = Vec::new();
    while let Term::Lam { body: b, .. } = body {
        body = b;
        path_to_body.push(0u8);
    }
    let names = &d.lambda_names;
    match infer_usage(&l.cfg, body, names.len()) {
        Ok(g) => {
            match out.format {
                Format::Text => out.line(g.render(m, Some(names))),
                Format::Json => {
                    let n = names.len();
                    let ctx: Vec<Value> = names
                        .iter()
                        .enumerate()
                        .map(|(k, x)| json!({ "var": x, "grade": m.grade_name(g.get(n - 1 - k)) }))
                        .collect();
                    out.json(json!({ "command": "usage", "ok": true, "name": name, "context": ctx }));
                }
            }
            EXIT_OK
        }
        Err(e) => {
            let mut full = path_to_body;
            full.extend(&e.path);
            let span = d.body_spans.lookup(&full);
            match out.format {
                Format::Text => out.err(format!(
                    "{}:{}: {name}: {:?}: {}",
                    path.display(),
                    span.unwrap_or(d.span),
                    e.kind,
                    e.message
                )),
                Format::Json => out.json(json!({
                    "command": "usage",
                    "ok": false,
                    "name": name,
                    "error": { "kind": format!("{:?}", e.kind), "message": e.message, "span": span_json(span) }
                })),
            }
            EXIT_FAIL
        }
    }
}

fn cmd_extract(out: &mut Out, opts: &GlobalOpts, path: &Path, name: &str, emit: Emit) -> i32 {
    let l = match load(out, opts, path, "extract") {
        Ok(l) => l,
        Err(c) => return c,
    };
    let d = match find(out, &l.defs, name, path) {
        Ok(d) => d,
        Err(c) => return c,
    };
    if let Some((kind, msg, _)) = check_def(&l.cfg, d).error {
        out.err(format!("warning: {name} is not accepted ({kind}: {msg}); extracting anyway"));
    }
    let t = erase(l.cfg.m(), l.cfg.strictness, l.cfg.modes, &d.body);
    let json_mode = emit == Emit::Json || out.format == Format::Json;
    if json_mode {
        out.json(json!({
            "command": "extract",
            "ok": true,
            "name": name,
            "strict": l.cfg.strictness == Strictness::Strict,
            "term": t.to_json(),
        }));
    } else {
        out.line(t.pretty());
    }
    EXIT_OK
}

fn numeral_json(n: &Numeral) -> Value {
    match n {
        Numeral::Value(v) => json!({ "result": "numeral", "value": v }),
        Numeral::Stuck(_) => json!({ "result": "stuck" }),
        Numeral::Timeout => json!({ "result": "timeout" }),
    }
}

fn target_json(n: &TargetNumeral) -> Value {
    match n {
        TargetNumeral::Value(v) => json!({ "result": "numeral", "value": v }),
        TargetNumeral::Stuck(_) => json!({ "result": "stuck" }),
        TargetNumeral::Timeout => json!({ "result": "timeout" }),
    }
}

fn cmd_eval(out: &mut Out, opts: &GlobalOpts, path: &Path, name: &str) -> i32 {
    let l = match load(out, opts, path, "eval") {
        Ok(l) => l,
        Err(c) => return c,
    };
    let d = match find(out, &l.defs, name, path) {
        Ok(d) => d,
        Err(c) => return c,
    };
    let n = read_numeral(&d.body, &mut Fuel(l.cfg.fuel));
    match out.format {
        Format::Text => match &n {
            Numeral::Value(v) => out.line(v.to_string()),
            Numeral::Stuck(t) => out.line(format!("stuck: {}", pretty(l.cfg.m(), t, &[]))),
            Numeral::Timeout => out.line("timeout"),
        },
        Format::Json => {
            let mut v = numeral_json(&n);
            v["command"] = json!("eval");
            v["ok"] = json!(matches!(n, Numeral::Value(_)));
            v["name"] = json!(name);
            out.json(v);
        }
    }
    if matches!(n, Numeral::Value(_)) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_run(out: &mut Out, opts: &GlobalOpts, path: &Path, name: &str) -> i32 {
    let l = match load(out, opts, path, "run") {
        Ok(l) => l,
        Err(c) => return c,
    };
    let d = match find(out, &l.defs, name, path) {
        Ok(d) => d,
        Err(c) => return c,
    };
    if let Some((kind, msg, _)) = check_def(&l.cfg, d).error {
        out.err(format!("warning: {name} is not accepted ({kind}: {msg}); results carry no guarantee"));
    }
    let res = run_program(&l.cfg, &d.body, l.cfg.fuel);
    match out.format {
        Format::Text => out.line(res.render()),
        Format::Json => out.json(json!({
            "command": "run",
            "ok": res.agree(),
            "name": name,
            "source": numeral_json(&res.source),
            "cbn": target_json(&res.cbn),
            "cbv": target_json(&res.cbv),
            "agree": res.agree(),
        })),
    }
    if res.agree() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn no_file_config(out: &mut Out, opts: &GlobalOpts) -> Result<Config, i32> {
    build_config(opts, &FileSettings::default()).map_err(|ConfigProblem(msg)| {
        out.err(format!("configuration error: {msg}"));
        EXIT_USAGE
    })
}

fn cmd_laws(out: &mut Out, opts: &GlobalOpts) -> i32 {
    let cfg = match no_file_config(out, opts) {
        Ok(c) => c,
        Err(c) => return c,
    };
    let m = cfg.m();
    let laws = check_laws(m);
    let wbz = well_behaved_zero(m);
    let div = check_division_laws(m);
    let unique = nr_unique_check(m, NR_ENUM_GUARD).ok();
    match out.format {
        Format::Text => {
            out.line(format!("modality {} ({})", m.name(), m.element_names().join(", ")));
            out.line(laws.render().trim_end());
            out.line(wbz.render().trim_end());
            out.line(div.render().trim_end());
            match unique {
                Some(u) => out.line(format!("nr unique: {u}")),
                None => out.line("nr unique: not enumerated (carrier too large)"),
            }
        }
        Format::Json => {
            let rep = |r: &crate::grades::LawReport| -> Value {
                r.results
                    .iter()
                    .map(|l| {
                        json!({
                            "law": l.law,
                            "holds": l.holds,
                            "witness": l.witness.as_ref().map(|w| w.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>()),
                        })
                    })
                    .collect()
            };
            out.json(json!({
                "command": "laws",
                "ok": laws.all_hold(),
                "modality": m.name(),
                "laws": rep(&laws),
                "well_behaved_zero": rep(&wbz),
                "division": rep(&div),
                "nr_unique": unique,
            }));
        }
    }
    if laws.all_hold() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_suite(out: &mut Out, opts: &GlobalOpts, id: &str) -> i32 {
    let cfg = match no_file_config(out, opts) {
        Ok(c) => c,
        Err(c) => return c,
    };
    let sopts = SuiteOptions { seed: opts.seed, fuel: opts.fuel.unwrap_or(1_000_000), ..SuiteOptions::default() };
    let reports = if id == "all" {
        run_all(&cfg, &sopts)
    } else {
        match run_suite(id, &cfg, &sopts) {
            Some(r) => vec![r],
            None => {
                out.err(format!("unknown suite `{id}` (known: {}, all)", SUITES.join(", ")));
                return EXIT_USAGE;
            }
        }
    };
    let ok = reports.iter().all(|r| r.passed());
    match out.format {
        Format::Text => {
            for r in &reports {
                let _ = write!(out.stdout, "{}", r.render());
            }
        }
        Format::Json => {
            let cases: Vec<Value> = reports.iter().flat_map(|r| r.cases.iter()).map(|c| json!(c)).collect();
            let stats: serde_json::Map<String, Value> =
                reports.iter().map(|r| (r.suite.clone(), json!(r.stats))).collect();
            out.json(json!({ "command": "suite", "ok": ok, "seed": opts.seed, "cases": cases, "stats": stats }));
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Runs the CLI on explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let opts = cli.opts.clone();
    let mut out = Out { stdout, stderr, format: opts.format };
    match &cli.command {
        Command::Check { file } => cmd_check(&mut out, &opts, file),
        Command::Usage { file, name } => cmd_usage(&mut out, &opts, file, name),
        Command::Extract { file, name, emit } => cmd_extract(&mut out, &opts, file, name, *emit),
        Command::Eval { file, name } => cmd_eval(&mut out, &opts, file, name),
        Command::Run { file, name } => cmd_run(&mut out, &opts, file, name),
        Command::Laws => cmd_laws(&mut out, &opts),
        Command::Suite { id } => cmd_suite(&mut out, &opts, id),
    }
}
