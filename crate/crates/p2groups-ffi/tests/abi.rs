use std::ffi::{c_char, CStr, CString};
use std::ptr;

use p2groups_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    assert_eq!(unsafe { p2_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) }, P2Status::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn order(g: *const P2Group) -> u64 {
    let mut n = 0;
    assert_eq!(unsafe { p2_group_order(g, &mut n) }, P2Status::Ok);
    n
}

#[test]
fn build_recognize_and_free() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { p2_group_build(3, 2, true, &mut g) }, P2Status::Ok);
    assert_eq!(order(g), 27);
    let (mut fam, mut idx) = (P2Family::Cyclic, 0);
    assert_eq!(unsafe { p2_group_recognize(g, &mut fam, &mut idx) }, P2Status::Ok);
    assert_eq!((fam, idx), (P2Family::Elementary, 2));
    unsafe { p2_group_free(g) };

    let mut n = ptr::null_mut();
    assert_eq!(unsafe { p2_group_normalizer(3, 1, true, &mut n) }, P2Status::Ok);
    assert_eq!(order(n), 432);
    unsafe { p2_group_free(n) };
}

#[test]
fn generators_and_membership() {
    let gens = [CString::new("(0 1 2 3 4 5 6 7 8)").unwrap(), CString::new("(0 6 3)(1 4 7)").unwrap()];
    let ptrs: Vec<*const c_char> = gens.iter().map(|s| s.as_ptr()).collect();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { p2_group_from_cycles(9, ptrs.as_ptr(), 2, &mut g) }, P2Status::Ok);
    let mut inside = false;
    let x = CString::new("(0 3 6)(1 4 7)(2 5 8)").unwrap();
    assert_eq!(unsafe { p2_group_contains(g, x.as_ptr(), &mut inside) }, P2Status::Ok);
    assert!(inside);
    let y = CString::new("(0 1)").unwrap();
    assert_eq!(unsafe { p2_group_contains(g, y.as_ptr(), &mut inside) }, P2Status::Ok);
    assert!(!inside);
    unsafe { p2_group_free(g) };
}

#[test]
fn large_orders_need_the_string_form() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { p2_group_normalizer(7, 7, false, &mut g) }, P2Status::Ok);
    let mut n = 0;
    let s = unsafe { p2_group_order(g, &mut n) };
    assert!(s == P2Status::Ok || s == P2Status::Overflow);
    let mut needed = 0;
    assert_eq!(
        unsafe { p2_group_order_string(g, ptr::null_mut(), 0, &mut needed) },
        P2Status::BufferTooSmall
    );
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { p2_group_order_string(g, buf.as_mut_ptr(), needed, ptr::null_mut()) }, P2Status::Ok);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string();
    if s == P2Status::Ok {
        assert_eq!(text, n.to_string());
    }
    unsafe { p2_group_free(g) };
}

#[test]
fn errors_map_to_codes() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { p2_group_build(4, 1, false, &mut g) }, P2Status::NotPrime);
    assert!(g.is_null());
    assert!(last_error().contains("not prime"));
    assert_eq!(unsafe { p2_group_build(3, 7, false, &mut g) }, P2Status::InvalidArgument);
    assert_eq!(unsafe { p2_group_build(3, 1, false, ptr::null_mut()) }, P2Status::NullPointer);
    assert_eq!(unsafe { p2_group_order(ptr::null(), ptr::null_mut()) }, P2Status::NullPointer);
    let bad = CString::new("(0 1").unwrap();
    let ptrs = [bad.as_ptr()];
    assert_eq!(unsafe { p2_group_from_cycles(9, ptrs.as_ptr(), 1, &mut g) }, P2Status::Parse);
    let name = unsafe { CStr::from_ptr(p2_status_name(P2Status::Parse)) };
    assert_eq!(name.to_str().unwrap(), "parse error");
    unsafe {
        p2_group_free(ptr::null_mut());
        p2_cayley_free(ptr::null_mut());
    }
}

#[test]
fn cayley_digraphs() {
    let mut c = ptr::null_mut();
    let set = [3usize, 6];
    assert_eq!(unsafe { p2_cayley_new(3, false, set.as_ptr(), 2, &mut c) }, P2Status::Ok);
    let mut normal = true;
    assert_eq!(unsafe { p2_cayley_is_normal(c, &mut normal) }, P2Status::Ok);
    assert!(!normal);
    let mut case = 0;
    assert_eq!(unsafe { p2_cayley_nonnormal_case(c, &mut case) }, P2Status::Ok);
    assert_eq!(case, 2);
    let mut aut = ptr::null_mut();
    assert_eq!(unsafe { p2_cayley_automorphisms(c, &mut aut) }, P2Status::Ok);
    assert_eq!(order(aut), 6u64.pow(3) * 6);
    unsafe {
        p2_group_free(aut);
        p2_cayley_free(c);
    }

    let zero = [0usize];
    assert_eq!(unsafe { p2_cayley_new(3, true, zero.as_ptr(), 1, &mut c) }, P2Status::InvalidArgument);
}

/// Compiles the C smoke program against the generated header and the static
/// library. Skipped when no C compiler or static archive is available.
#[test]
fn c_program_links_against_header() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libp2groups_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || std::process::Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no static library at {} or no C compiler", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("p2groups-smoke-{}", std::process::id()));
    let status = std::process::Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = std::process::Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
