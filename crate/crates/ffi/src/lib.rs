//! C ABI for the `gtt` checker.
//!
//! Handles are opaque and owned by the caller: every `*_new`/`*_parse` has a
//! matching `*_free`. Functions return a [`GttStatus`]; on failure the
//! message is available from [`gtt_last_error_message`] on the same thread.
//! Strings handed out through `out` parameters are freed with
//! [`gtt_string_free`].

use gtt::cli::{build_config, check_def, GlobalOpts, ModesArg, NrArg, PiSigmaArg};
use gtt::config::Config;
use gtt::extract::erase;
use gtt::frontend::{parse, resolve_all, FileSettings, Resolved, SourceFile};
use gtt::harness::run_program;
use gtt::reduce::{read_numeral, Fuel, Numeral};
use gtt::syntax::Term;
use gtt::usage::infer_usage;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GttStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    Type = 5,
    Usage = 6,
    NotFound = 7,
    /// A program is stuck, ran out of fuel, or source and target disagree.
    Eval = 8,
    Panic = 9,
}

/// Settings applied on top of a program's pragmas; mirrors the CLI flags.
pub struct GttConfig {
    opts: GlobalOpts,
}

/// A parsed source file.
pub struct GttProgram {
    file: SourceFile,
    settings: FileSettings,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

struct Fail(GttStatus, String);

type Res<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> GttStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GttStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            GttStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(GttStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(GttStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| Fail(GttStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Res<()> {
    if out.is_null() {
        return Err(Fail(GttStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    let c = CString::new(s).map_err(|_| Fail(GttStatus::Panic, "interior NUL in output".into()))?;
    put(out, c.into_raw())
}

fn elaborate(cfg: &GttConfig, prog: &GttProgram) -> Res<(Config, Vec<Resolved>)> {
    let c = build_config(&cfg.opts, &prog.settings).map_err(|e| Fail(GttStatus::Config, e.0))?;
    let defs = resolve_all(&prog.file, c.m()).map_err(|e| Fail(GttStatus::Parse, e.to_string()))?;
    Ok((c, defs))
}

fn find<'a>(defs: &'a [Resolved], name: &str) -> Res<&'a Resolved> {
    defs.iter().find(|d| d.name == name).ok_or_else(|| Fail(GttStatus::NotFound, format!("no definition `{name}`")))
}

fn status_of(kind: &str) -> GttStatus {
    // Debug names of the usage checker's error kinds
    const USAGE: &[&str] = &["BinderGrade", "Projection", "Restriction", "StarStrongNotInferable", "NotBounded"];
    if USAGE.contains(&kind) {
        GttStatus::Usage
    } else {
        GttStatus::Type
    }
}

/// Returns the library version as a static string.
#[no_mangle]
pub extern "C" fn gtt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message of the last failed call on this thread, or an empty string.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gtt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gtt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a configuration for a built-in modality (`erasure`, `affine`,
/// `linear`, `linear-or-affine`, `trivial`, `lmh`, `lattice:a<b<c`). A null
/// name defers to the program's pragma, then to `erasure`.
///
/// # Safety
/// `modality` is null or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gtt_config_new(modality: *const c_char, out: *mut *mut GttConfig) -> GttStatus {
    guard(|| {
        let mut opts = GlobalOpts::default();
        if !modality.is_null() {
            let name = str_arg(modality, "modality")?;
            opts.modality = Some(name.to_string());
            // reject unknown names now rather than at first use
            build_config(&opts, &Default::default()).map_err(|e| Fail(GttStatus::Config, e.0))?;
        }
        put(out, Box::into_raw(Box::new(GttConfig { opts })))
    })
}

/// # Safety
/// `cfg` is null or a handle from [`gtt_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gtt_config_free(cfg: *mut GttConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets a boolean option: `strict`, `moded`, `nr-bad`, `no-erased-matches`,
/// `no-emptyrec-zero`, `pisigma-equal`.
///
/// # Safety
/// `cfg` is a live handle; `key` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gtt_config_set_flag(cfg: *mut GttConfig, key: *const c_char, value: bool) -> GttStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| Fail(GttStatus::NullArgument, "config is null".into()))?;
        let o = &mut cfg.opts;
        match str_arg(key, "key")? {
            "strict" => o.strict = value,
            "moded" => o.modes = Some(if value { ModesArg::Moded } else { ModesArg::Plain }),
            "nr-bad" => o.nr = Some(if value { NrArg::Bad } else { NrArg::Good }),
            "no-erased-matches" => o.no_erased_matches = value,
            "no-emptyrec-zero" => o.no_emptyrec_zero = value,
            "pisigma-equal" => o.pisigma = Some(if value { PiSigmaArg::Equal } else { PiSigmaArg::Any }),
            k => return Err(Fail(GttStatus::Config, format!("unknown option `{k}`"))),
        }
        Ok(())
    })
}

/// Sets the evaluation fuel (reduction steps). Zero restores the default.
///
/// # Safety
/// `cfg` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn gtt_config_set_fuel(cfg: *mut GttConfig, fuel: u64) -> GttStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| Fail(GttStatus::NullArgument, "config is null".into()))?;
        cfg.opts.fuel = (fuel != 0).then_some(fuel);
        Ok(())
    })
}

/// Parses source text. Name resolution and grade literals are checked
/// later, against a configuration.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gtt_program_parse(source: *const c_char, out: *mut *mut GttProgram) -> GttStatus {
    guard(|| {
        let text = str_arg(source, "source")?;
        let file = parse(text).map_err(|e| Fail(GttStatus::Parse, e.to_string()))?;
        let settings = file.settings().map_err(|e| Fail(GttStatus::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(GttProgram { file, settings })))
    })
}

/// # Safety
/// `prog` is null or a handle from [`gtt_program_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gtt_program_free(prog: *mut GttProgram) {
    if !prog.is_null() {
        drop(Box::from_raw(prog));
    }
}

/// Type- and usage-checks every definition; stops at the first rejection.
///
/// # Safety
/// `cfg` and `prog` are live handles.
#[no_mangle]
pub unsafe extern "C" fn gtt_check(cfg: *const GttConfig, prog: *const GttProgram) -> GttStatus {
    guard(|| {
        let (c, defs) = elaborate(handle(cfg, "config")?, handle(prog, "program")?)?;
        for d in &defs {
            if let Some((kind, msg, span)) = check_def(&c, d).error {
                let at = span.map(|s| format!("{s}: ")).unwrap_or_default();
                return Err(Fail(status_of(&kind), format!("{at}{}: {kind}: {msg}", d.name)));
            }
        }
        Ok(())
    })
}

/// Writes the principal usage of a definition's λ-bound variables, e.g.
/// `[k↦1, n↦1]`.
///
/// # Safety
/// `cfg`, `prog` are live handles; `name` is a NUL-terminated string;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gtt_usage(
    cfg: *const GttConfig,
    prog: *const GttProgram,
    name: *const c_char,
    out: *mut *mut c_char,
) -> GttStatus {
    guard(|| {
        let (c, defs) = elaborate(handle(cfg, "config")?, handle(prog, "program")?)?;
        let d = find(&defs, str_arg(name, "name")?)?;
        let mut body = &d.body;
        while let Term::Lam { body: b, .. } = body {
            body = b;
        }
        let names = &d.lambda_names;
        let g = infer_usage(&c, body, names.len()).map_err(|e| Fail(GttStatus::Usage, e.message))?;
        put_string(out, g.render(c.m(), Some(names)))
    })
}

/// Writes the extracted target program, as text or as JSON.
///
/// # Safety
/// As for [`gtt_usage`].
#[no_mangle]
pub unsafe extern "C" fn gtt_extract(
    cfg: *const GttConfig,
    prog: *const GttProgram,
    name: *const c_char,
    json: bool,
    out: *mut *mut c_char,
) -> GttStatus {
    guard(|| {
        let (c, defs) = elaborate(handle(cfg, "config")?, handle(prog, "program")?)?;
        let d = find(&defs, str_arg(name, "name")?)?;
        let t = erase(c.m(), c.strictness, c.modes, &d.body);
        put_string(out, if json { t.to_json().to_string() } else { t.pretty() })
    })
}

/// Evaluates a ℕ-valued definition in the source language.
///
/// # Safety
/// As for [`gtt_usage`], with `out` pointing to a `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn gtt_eval(
    cfg: *const GttConfig,
    prog: *const GttProgram,
    name: *const c_char,
    out: *mut u64,
) -> GttStatus {
    guard(|| {
        let (c, defs) = elaborate(handle(cfg, "config")?, handle(prog, "program")?)?;
        let d = find(&defs, str_arg(name, "name")?)?;
        match read_numeral(&d.body, &mut Fuel(c.fuel)) {
            Numeral::Value(v) => put(out, v),
            Numeral::Stuck(_) => Err(Fail(GttStatus::Eval, "evaluation is stuck".into())),
            Numeral::Timeout => Err(Fail(GttStatus::Eval, "out of fuel".into())),
        }
    })
}

/// Evaluates a definition in the source and both target strategies and
/// writes the verdict line. Returns [`GttStatus::Eval`], with the line still
/// written, when the three do not agree.
///
/// # Safety
/// As for [`gtt_usage`].
#[no_mangle]
pub unsafe extern "C" fn gtt_run(
    cfg: *const GttConfig,
    prog: *const GttProgram,
    name: *const c_char,
    out: *mut *mut c_char,
) -> GttStatus {
    guard(|| {
        let (c, defs) = elaborate(handle(cfg, "config")?, handle(prog, "program")?)?;
        let d = find(&defs, str_arg(name, "name")?)?;
        let res = run_program(&c, &d.body, c.fuel);
        let line = res.render();
        put_string(out, line.clone())?;
        if res.agree() {
            Ok(())
        } else {
            Err(Fail(GttStatus::Eval, line))
        }
    })
}
