//! C ABI over `scfq`.
//!
//! Every function returns an [`ScfqStatus`]; on failure the message is
//! available from [`scfq_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`scfq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use scfq::matspace::{ClassLabel, Partition};
use scfq::stablering::{Basis, BasisLabel, MuVec, StableFunction, StableRing};
use scfq::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScfqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BoundExceeded = 3,
    FitFailure = 4,
    TooSmallN = 5,
    UnsupportedField = 6,
    BufferTooSmall = 7,
    Failure = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScfqBasis {
    R = 0,
    Rfr = 1,
    P = 2,
    I = 3,
}

impl From<ScfqBasis> for Basis {
    fn from(b: ScfqBasis) -> Basis {
        match b {
            ScfqBasis::R => Basis::R,
            ScfqBasis::Rfr => Basis::Rfr,
            ScfqBasis::P => Basis::P,
            ScfqBasis::I => Basis::I,
        }
    }
}

/// The stable class function ring over one field.
pub struct ScfqRing(StableRing);

/// A finite combination of generators of one basis.
pub struct ScfqFunction(StableFunction);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> ScfqStatus {
    match e {
        Error::BoundExceeded { .. } => ScfqStatus::BoundExceeded,
        Error::FitFailure(_) => ScfqStatus::FitFailure,
        Error::TooSmallN { .. } => ScfqStatus::TooSmallN,
        Error::UnsupportedField(_) => ScfqStatus::UnsupportedField,
        Error::Parse(_) | Error::InvalidInput(_) | Error::NotSingleBlock(_) | Error::SingularMatrix => {
            ScfqStatus::InvalidInput
        }
        _ => ScfqStatus::Failure,
    }
}

struct Fail(ScfqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ScfqStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any error or panic for [`scfq_last_error`].
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> ScfqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            ScfqStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ScfqStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(ScfqStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn scfq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn scfq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a ring over F_q with default bounds.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scfq_ring_new(q: u32, out: *mut *mut ScfqRing) -> ScfqStatus {
    guard(|| {
        let ring = StableRing::with_defaults(q)?;
        write(out, Box::into_raw(Box::new(ScfqRing(ring))), "out")
    })
}

/// # Safety
/// `ring` must come from [`scfq_ring_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn scfq_ring_free(ring: *mut ScfqRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of conjugacy classes of GL_n(q).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_class_count(ring: *const ScfqRing, n: usize, out: *mut usize) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        write(out, ring.classes(n)?.len(), "out")
    })
}

unsafe fn count(ring: *const ScfqRing, b: *const c_char, g: *const c_char, out: *mut i64, full: bool) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let f = ring.field();
        let b = ClassLabel::parse(text(b, "b")?, f)?;
        let g = ClassLabel::parse(text(g, "g")?, f)?;
        let v = if full { ring.counter().btil_fr(&b, &g)? } else { ring.counter().btil(&b, &g)? };
        let v = i64::try_from(v).map_err(|_| Fail(ScfqStatus::Failure, "count exceeds int64".into()))?;
        write(out, v, "out")
    })
}

/// `#{M : Mg = BM}` for class labels such as `{x+1:2}`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn scfq_btil(ring: *const ScfqRing, b: *const c_char, g: *const c_char, out: *mut i64) -> ScfqStatus {
    count(ring, b, g, out, false)
}

/// As [`scfq_btil`], counting full-rank `M` only.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn scfq_btil_fr(
    ring: *const ScfqRing,
    b: *const c_char,
    g: *const c_char,
    out: *mut i64,
) -> ScfqStatus {
    count(ring, b, g, out, true)
}

/// An empty combination in `basis`.
#[no_mangle]
pub extern "C" fn scfq_function_new(basis: ScfqBasis) -> *mut ScfqFunction {
    Box::into_raw(Box::new(ScfqFunction(StableFunction::zero(basis.into()))))
}

/// # Safety
/// `f` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_free(f: *mut ScfqFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

unsafe fn add(f: *mut ScfqFunction, label: BasisLabel, re: f64, im: f64) -> Result<(), Fail> {
    let f = f.as_mut().ok_or_else(|| null("function"))?;
    f.0.add_term(label, Complex64::new(re, im))?;
    Ok(())
}

/// Adds `c·btil(B, ·)` (basis R) or `c·btil_fr(B, ·)` (basis Rfr).
///
/// # Safety
/// Pointers must be valid; `label` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_add_class(
    ring: *const ScfqRing,
    f: *mut ScfqFunction,
    label: *const c_char,
    re: f64,
    im: f64,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let b = ClassLabel::parse(text(label, "label")?, ring.field())?;
        let basis = f.as_ref().ok_or_else(|| null("function"))?.0.basis();
        let label = match basis {
            Basis::R => BasisLabel::R(b),
            Basis::Rfr => BasisLabel::Rfr(b),
            other => return Err(Fail(ScfqStatus::InvalidInput, format!("class labels do not index basis {other}"))),
        };
        add(f, label, re, im)
    })
}

/// Adds `c·χ∘1` for row `row` of the character table of GL_m.
///
/// # Safety
/// `f` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_add_induced(
    f: *mut ScfqFunction,
    m: usize,
    row: usize,
    re: f64,
    im: f64,
) -> ScfqStatus {
    guard(|| add(f, BasisLabel::P { m, row }, re, im))
}

/// Adds `c·χ_{μ[N]}`; `mu` is `{1.0:2,1|1.1:1}` or a partition such as `2,1`.
///
/// # Safety
/// Pointers must be valid; `mu` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_add_irreducible(
    f: *mut ScfqFunction,
    mu: *const c_char,
    re: f64,
    im: f64,
) -> ScfqStatus {
    guard(|| {
        let s = text(mu, "mu")?.trim();
        let mu = if s.starts_with('{') { MuVec::parse(s)? } else { MuVec::unipotent(Partition::parse(s)?) };
        add(f, BasisLabel::I(mu), re, im)
    })
}

/// Number of terms with nonzero coefficient.
///
/// # Safety
/// `f` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_len(f: *const ScfqFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.terms().len())
}

/// Rewrites `f` in `target`, storing a new handle in `out`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_change_basis(
    ring: *const ScfqRing,
    f: *const ScfqFunction,
    target: ScfqBasis,
    out: *mut *mut ScfqFunction,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let g = ring.change_basis(&handle(f, "function")?.0, target.into())?;
        write(out, Box::into_raw(Box::new(ScfqFunction(g))), "out")
    })
}

/// The product `a·b` in the basis of `a`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_multiply(
    ring: *const ScfqRing,
    a: *const ScfqFunction,
    b: *const ScfqFunction,
    out: *mut *mut ScfqFunction,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let p = ring.multiply(&handle(a, "a")?.0, &handle(b, "b")?.0)?;
        write(out, Box::into_raw(Box::new(ScfqFunction(p))), "out")
    })
}

/// Text form of `f`; release with [`scfq_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_to_string(
    ring: *const ScfqRing,
    f: *const ScfqFunction,
    out: *mut *mut c_char,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        write(out, owned_string(handle(f, "function")?.0.to_text(ring.field())), "out")
    })
}

/// Values of `f` on the classes of GL_n, as interleaved `(re, im)` pairs in
/// `values[0 .. 2*len]`. `*len` receives the class count; if `capacity` (in
/// pairs) is smaller, nothing is written and `BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `values` must be valid for `2*capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn scfq_function_evaluate(
    ring: *const ScfqRing,
    f: *const ScfqFunction,
    n: usize,
    values: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let v = ring.evaluate(&handle(f, "function")?.0, n)?;
        write(len, v.values.len(), "len")?;
        if v.values.len() > capacity {
            return Err(Fail(ScfqStatus::BufferTooSmall, format!("need {} pairs, have {capacity}", v.values.len())));
        }
        if values.is_null() {
            return Err(null("values"));
        }
        for (i, c) in v.values.iter().enumerate() {
            *values.add(2 * i) = c.re;
            *values.add(2 * i + 1) = c.im;
        }
        Ok(())
    })
}

/// Text labels of the classes of GL_n, one per line, in evaluation order.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_class_labels(ring: *const ScfqRing, n: usize, out: *mut *mut c_char) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let labels: Vec<String> = ring.classes(n)?.labels.iter().map(|l| l.to_text(ring.field())).collect();
        write(out, owned_string(labels.join("\n")), "out")
    })
}

/// Runs the four-family span check at level `m` on GL_n.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scfq_verify_filtration(
    ring: *const ScfqRing,
    m: usize,
    n: usize,
    rank: *mut usize,
    pass: *mut bool,
) -> ScfqStatus {
    guard(|| {
        let ring = &handle(ring, "ring")?.0;
        let rep = ring.verify_filtration_equality(m, n)?;
        if !rank.is_null() {
            rank.write(rep.target_rank);
        }
        write(pass, rep.pass, "pass")
    })
}

/// `p_μ` fitted over `qs` and checked at `holdout`, as text.
///
/// # Safety
/// `mu` NUL-terminated; arrays valid for their lengths.
#[no_mangle]
pub unsafe extern "C" fn scfq_pmu(
    mu: *const c_char,
    qs: *const u32,
    qs_len: usize,
    holdout: *const u32,
    holdout_len: usize,
    out: *mut *mut c_char,
) -> ScfqStatus {
    guard(|| {
        let mu = Partition::parse(text(mu, "mu")?)?;
        let slice = |p: *const u32, len: usize, what: &str| -> Result<&[u32], Fail> {
            match (p.is_null(), len) {
                (_, 0) => Ok(&[]),
                (true, _) => Err(null(what)),
                (false, _) => Ok(std::slice::from_raw_parts(p, len)),
            }
        };
        let poly = scfq::nirpoly::p_mu_fit(&mu, slice(qs, qs_len, "qs")?, slice(holdout, holdout_len, "holdout")?)?;
        write(out, owned_string(poly.to_text()), "out")
    })
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn scfq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
