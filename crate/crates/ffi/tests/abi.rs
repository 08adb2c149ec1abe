use gtt_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

const SRC: &str = "\
#modality linear
def plus : Pi[1,0] (k : Nat) -> Pi[1,0] (n : Nat) -> Nat :=
  \\[1] k. \\[1] n. natrec[0,0,1] (m. Nat) k (m r. suc r) n
def plus23 : Nat := plus @[1] 2 @[1] 3
def id : Pi[0,0] (A : U) -> Pi[w,0] (x : A) -> A := \\[0] A. \\[w] x. x
def idNZ : Nat := id @[0] Nat @[w] zero
";

struct Handles {
    cfg: *mut GttConfig,
    prog: *mut GttProgram,
}

impl Handles {
    fn new(modality: Option<&str>, src: &str) -> Handles {
        let name = modality.map(|m| CString::new(m).unwrap());
        let src = CString::new(src).unwrap();
        let (mut cfg, mut prog) = (ptr::null_mut(), ptr::null_mut());
        unsafe {
            assert_eq!(gtt_config_new(name.as_ref().map_or(ptr::null(), |n| n.as_ptr()), &mut cfg), GttStatus::Ok);
            assert_eq!(gtt_program_parse(src.as_ptr(), &mut prog), GttStatus::Ok, "{}", last_error());
        }
        Handles { cfg, prog }
    }

    fn flag(&self, key: &str, value: bool) {
        let k = CString::new(key).unwrap();
        assert_eq!(unsafe { gtt_config_set_flag(self.cfg, k.as_ptr(), value) }, GttStatus::Ok);
    }

    fn string_call(
        &self,
        f: unsafe extern "C" fn(*const GttConfig, *const GttProgram, *const c_char, *mut *mut c_char) -> GttStatus,
        name: &str,
    ) -> (GttStatus, Option<String>) {
        let n = CString::new(name).unwrap();
        let mut out = ptr::null_mut();
        let st = unsafe { f(self.cfg, self.prog, n.as_ptr(), &mut out) };
        (st, take(out))
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            gtt_program_free(self.prog);
            gtt_config_free(self.cfg);
        }
    }
}

fn take(p: *mut c_char) -> Option<String> {
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gtt_string_free(p) };
    Some(s)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gtt_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn check_usage_and_run() {
    let h = Handles::new(None, SRC);
    assert_eq!(unsafe { gtt_check(h.cfg, h.prog) }, GttStatus::Ok, "{}", last_error());
    assert_eq!(h.string_call(gtt_usage, "plus"), (GttStatus::Ok, Some("[k↦1, n↦1]".into())));
    assert_eq!(
        h.string_call(gtt_run, "plus23"),
        (GttStatus::Ok, Some("source=5 target(cbn)=5 target(cbv)=5 AGREE".into()))
    );
    h.flag("nr-bad", true);
    assert_eq!(h.string_call(gtt_usage, "plus"), (GttStatus::Ok, Some("[k↦w, n↦w]".into())));
}

#[test]
fn eval_and_extract() {
    let h = Handles::new(Some("erasure"), SRC);
    let n = CString::new("idNZ").unwrap();
    let mut v = 99u64;
    assert_eq!(unsafe { gtt_eval(h.cfg, h.prog, n.as_ptr(), &mut v) }, GttStatus::Ok);
    assert_eq!(v, 0);
    let extract = |json: bool| {
        let mut out = ptr::null_mut();
        let st = unsafe { gtt_extract(h.cfg, h.prog, n.as_ptr(), json, &mut out) };
        (st, take(out).unwrap())
    };
    assert_eq!(extract(false), (GttStatus::Ok, "(\\x0. x0) 0".into()));
    h.flag("strict", true);
    assert_eq!(extract(false).1, "(\\x0. \\x1. x1) ! 0");
    assert!(extract(true).1.starts_with('{'));
}

#[test]
fn errors_are_reported() {
    let h = Handles::new(Some("erasure"), SRC);
    let (st, out) = h.string_call(gtt_usage, "nope");
    assert_eq!((st, out), (GttStatus::NotFound, None));
    assert!(last_error().contains("nope"));

    let bad = Handles::new(Some("linear"), "def dup : Pi[1,0] (x : Nat) -> Nat := \\[1] x. natrec[0,0,0] (m. Nat) x (m r. x) x\n");
    assert_eq!(unsafe { gtt_check(bad.cfg, bad.prog) }, GttStatus::Usage, "{}", last_error());

    let ill = Handles::new(Some("erasure"), "def z : Nat := \\[w] x. x\n");
    assert_eq!(unsafe { gtt_check(ill.cfg, ill.prog) }, GttStatus::Type);

    let src = CString::new("def := oops").unwrap();
    let mut prog = ptr::null_mut();
    assert_eq!(unsafe { gtt_program_parse(src.as_ptr(), &mut prog) }, GttStatus::Parse);
    assert!(prog.is_null());
    assert!(last_error().starts_with("1:"));

    let name = CString::new("no-such-modality").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { gtt_config_new(name.as_ptr(), &mut cfg) }, GttStatus::Config);
    assert!(cfg.is_null());
    let key = CString::new("bogus").unwrap();
    assert_eq!(unsafe { gtt_config_set_flag(h.cfg, key.as_ptr(), true) }, GttStatus::Config);
}

#[test]
fn null_arguments() {
    unsafe {
        assert_eq!(gtt_check(ptr::null(), ptr::null()), GttStatus::NullArgument);
        assert_eq!(gtt_program_parse(ptr::null(), ptr::null_mut()), GttStatus::NullArgument);
        let h = Handles::new(None, SRC);
        let n = CString::new("plus23").unwrap();
        assert_eq!(gtt_eval(h.cfg, h.prog, n.as_ptr(), ptr::null_mut()), GttStatus::NullArgument);
        gtt_string_free(ptr::null_mut());
        gtt_config_free(ptr::null_mut());
        gtt_program_free(ptr::null_mut());
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(gtt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/gtt.h")).unwrap();
    for f in [
        "gtt_version",
        "gtt_last_error_message",
        "gtt_string_free",
        "gtt_config_new",
        "gtt_config_free",
        "gtt_config_set_flag",
        "gtt_config_set_fuel",
        "gtt_program_parse",
        "gtt_program_free",
        "gtt_check",
        "gtt_usage",
        "gtt_extract",
        "gtt_eval",
        "gtt_run",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct GttConfig GttConfig;"));
    assert!(header.contains("GTT_STATUS_NOT_FOUND = 7"));
}

/// Compiles and runs a C client against the static library, when a C
/// compiler and the archive are available.
#[test]
fn c_client_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    // target/<profile>/deps/abi-… -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libgtt_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let tmp = std::env::temp_dir().join(format!("gtt-ffi-smoke-{}", std::process::id()));
    let dir = manifest_dir();
    let status = Command::new(cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&tmp)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&tmp).output().unwrap();
    let _ = std::fs::remove_file(&tmp);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
