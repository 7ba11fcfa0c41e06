//! C interface to `p2groups`.
//!
//! Groups and Cayley digraphs cross the boundary as opaque handles owned by
//! the caller and released with the matching `*_free` function. Every fallible
//! call returns a [`P2Status`]; on failure the message is kept per thread and
//! can be copied out with [`p2_last_error`]. Panics are caught and reported as
//! [`P2Status::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use p2groups::cayley::{self, CayleyDigraph, GroupKind};
use p2groups::normalizers::{normalizer_p, normalizer_p_prime};
use p2groups::perm::{PermError, PermGroup, Permutation};
use p2groups::pgroups::{build_p, recognize_p_subgroup, Family, PFamily};
use p2groups::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum P2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    Parse = 4,
    Unsupported = 5,
    SearchFailed = 6,
    /// The value does not fit the requested C type.
    Overflow = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// Which family a recognized `p`-group belongs to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum P2Family {
    Cyclic = 0,
    Elementary = 1,
    Wreath = 2,
}

/// A permutation group.
pub struct P2Group(PermGroup);

/// A Cayley digraph of `Z_{p^2}` or `Z_p^2`.
pub struct P2Cayley(CayleyDigraph);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: P2Status, msg: impl Into<String>) -> P2Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn status_of(err: &Error) -> P2Status {
    match err {
        Error::NotPrime(_) => P2Status::NotPrime,
        Error::Invalid(_) => P2Status::InvalidArgument,
        Error::Unsupported(_) => P2Status::Unsupported,
        Error::Search(_) | Error::Perm(PermError::Search(_)) => P2Status::SearchFailed,
        Error::Perm(PermError::Parse(_)) => P2Status::Parse,
        Error::Perm(PermError::LimitExceeded { .. }) => P2Status::Unsupported,
        Error::Perm(_) | Error::Code(_) => P2Status::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), P2Status>) -> P2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => P2Status::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(P2Status::Internal, "panic inside p2groups"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, P2Status>;
}

impl<T, E: Into<Error>> OrStatus<T> for Result<T, E> {
    fn or_status(self) -> Result<T, P2Status> {
        self.map_err(|e| {
            let e = e.into();
            fail(status_of(&e), e.to_string())
        })
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, P2Status> {
    p.as_ref().ok_or_else(|| fail(P2Status::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), P2Status> {
    if out.is_null() {
        return Err(fail(P2Status::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn give<T>(out: *mut *mut T, value: T) -> Result<(), P2Status> {
    write_out(out, Box::into_raw(Box::new(value)))
}

/// Copies `s` plus a terminating NUL into `buf`. `needed` (if non-null)
/// receives the full length including the NUL, so callers can retry.
unsafe fn copy_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), P2Status> {
    if !needed.is_null() {
        needed.write(s.len() + 1);
    }
    if buf.is_null() || len < s.len() + 1 {
        return Err(fail(P2Status::BufferTooSmall, format!("need {} bytes", s.len() + 1)));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn family(elementary: bool) -> Family {
    if elementary {
        Family::Elementary
    } else {
        Family::Cyclic
    }
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn p2_status_name(status: P2Status) -> *const c_char {
    let s: &'static CStr = match status {
        P2Status::Ok => c"ok",
        P2Status::NullPointer => c"null pointer",
        P2Status::InvalidArgument => c"invalid argument",
        P2Status::NotPrime => c"not prime",
        P2Status::Parse => c"parse error",
        P2Status::Unsupported => c"unsupported",
        P2Status::SearchFailed => c"search failed",
        P2Status::Overflow => c"overflow",
        P2Status::BufferTooSmall => c"buffer too small",
        P2Status::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Copies the last error message of the calling thread into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn p2_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> P2Status {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_str(&msg, buf, len, needed) {
        Ok(()) => P2Status::Ok,
        Err(s) => s,
    }
}

/// Builds `P_i` (cyclic) or `P'_i` (elementary) in `S_{p^2}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_group_build(p: usize, i: usize, elementary: bool, out: *mut *mut P2Group) -> P2Status {
    guard(|| give(out, P2Group(build_p(p, i, family(elementary)).or_status()?)))
}

/// The normalizer in `S_{p^2}` of `P_i` or `P'_i`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_group_normalizer(p: usize, i: usize, elementary: bool, out: *mut *mut P2Group) -> P2Status {
    guard(|| {
        let g = if elementary { normalizer_p_prime(p, i) } else { normalizer_p(p, i) };
        give(out, P2Group(g.or_status()?))
    })
}

/// Group of the given degree generated by `count` permutations in cycle
/// notation, e.g. `"(0 1 2)(3 4)"`, on points `0..degree`.
///
/// # Safety
/// `gens` must point to `count` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_group_from_cycles(
    degree: usize,
    gens: *const *const c_char,
    count: usize,
    out: *mut *mut P2Group,
) -> P2Status {
    guard(|| {
        if gens.is_null() && count > 0 {
            return Err(fail(P2Status::NullPointer, "null generator array"));
        }
        let mut perms = Vec::with_capacity(count);
        for k in 0..count {
            let s = *gens.add(k);
            if s.is_null() {
                return Err(fail(P2Status::NullPointer, format!("generator {k} is null")));
            }
            let text = CStr::from_ptr(s)
                .to_str()
                .map_err(|_| fail(P2Status::Parse, format!("generator {k} is not UTF-8")))?;
            perms.push(Permutation::parse_cycles(text, degree).or_status()?);
        }
        give(out, P2Group(PermGroup::new(degree, perms).or_status()?))
    })
}

/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn p2_group_degree(g: *const P2Group, out: *mut usize) -> P2Status {
    guard(|| write_out(out, deref(g)?.0.degree()))
}

/// Group order; fails with `Overflow` when it exceeds `u64`.
///
/// # Safety
/// `g` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_group_order(g: *const P2Group, out: *mut u64) -> P2Status {
    guard(|| {
        let n = deref(g)?.0.order();
        let n = u64::try_from(n).map_err(|_| fail(P2Status::Overflow, format!("order {n} exceeds u64")))?;
        write_out(out, n)
    })
}

/// Group order in decimal, for orders beyond `u64`.
///
/// # Safety
/// `g` must be a live handle or null; see [`p2_last_error`] for `buf`.
#[no_mangle]
pub unsafe extern "C" fn p2_group_order_string(
    g: *const P2Group,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> P2Status {
    guard(|| copy_str(&deref(g)?.0.order().to_string(), buf, len, needed))
}

/// Whether the permutation in cycle notation lies in the group.
///
/// # Safety
/// `g` must be a live handle or null, `cycles` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn p2_group_contains(g: *const P2Group, cycles: *const c_char, out: *mut bool) -> P2Status {
    guard(|| {
        let g = &deref(g)?.0;
        if cycles.is_null() {
            return Err(fail(P2Status::NullPointer, "null permutation"));
        }
        let text = CStr::from_ptr(cycles)
            .to_str()
            .map_err(|_| fail(P2Status::Parse, "permutation is not UTF-8"))?;
        let x = Permutation::parse_cycles(text, g.degree()).or_status()?;
        write_out(out, g.has(&x))
    })
}

/// Identifies a transitive `p`-subgroup of `S_{p^2}` up to conjugacy:
/// its family and index `i` (`p` for the wreath product).
///
/// # Safety
/// `g` must be a live handle or null; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_group_recognize(g: *const P2Group, family: *mut P2Family, index: *mut usize) -> P2Status {
    guard(|| {
        let g = &deref(g)?.0;
        let k = recognize_p_subgroup(g).or_status()?;
        let p = (g.degree() as f64).sqrt().round() as usize;
        let f = match k.family {
            PFamily::Cyclic(_) => P2Family::Cyclic,
            PFamily::Elementary(_) => P2Family::Elementary,
            PFamily::Wreath => P2Family::Wreath,
        };
        write_out(family, f)?;
        write_out(index, k.family.index(p))
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn p2_group_free(g: *mut P2Group) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Cayley digraph of `Z_{p^2}` (`elementary = false`) or `Z_p^2` with
/// connection set `set`. Elements of `Z_p^2` are encoded as `a + b p`.
///
/// # Safety
/// `set` must point to `len` values (or be null with `len = 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_cayley_new(
    p: usize,
    elementary: bool,
    set: *const usize,
    len: usize,
    out: *mut *mut P2Cayley,
) -> P2Status {
    guard(|| {
        let s: &[usize] = if len == 0 {
            &[]
        } else if set.is_null() {
            return Err(fail(P2Status::NullPointer, "null connection set"));
        } else {
            std::slice::from_raw_parts(set, len)
        };
        let kind = if elementary { GroupKind::Elementary } else { GroupKind::Cyclic };
        give(out, P2Cayley(CayleyDigraph::new(p, kind, s).or_status()?))
    })
}

/// Full automorphism group as a new group handle.
///
/// # Safety
/// `c` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_cayley_automorphisms(c: *const P2Cayley, out: *mut *mut P2Group) -> P2Status {
    guard(|| give(out, P2Group(deref(c)?.0.automorphisms())))
}

/// Whether the regular group is normal in the automorphism group.
///
/// # Safety
/// `c` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_cayley_is_normal(c: *const P2Cayley, out: *mut bool) -> P2Status {
    guard(|| write_out(out, cayley::is_normal_cayley(&deref(c)?.0)))
}

/// Which structural case explains nonnormality: 0 when normal, else 1 to 4
/// (complete, wreath product, two lines, coset conditions).
///
/// # Safety
/// `c` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn p2_cayley_nonnormal_case(c: *const P2Cayley, out: *mut u32) -> P2Status {
    guard(|| write_out(out, cayley::nonnormal_case(&deref(c)?.0).number()))
}

/// # Safety
/// `c` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn p2_cayley_free(c: *mut P2Cayley) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
