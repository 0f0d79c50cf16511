//! C interface. Every function returns a [`SpringerStatus`]; on failure the message is
//! available from [`springer_last_error`] on the same thread. Handles are opaque and must be
//! released with the matching `_free` function. Strings returned through `char **` are
//! owned by the caller and released with [`springer_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use springer_core::homotopy::json::{from_doc, parse_doc, to_doc, AnyAlgebra, ComplexDoc};
use springer_core::homotopy::{minimize, validate, GradedAlgebra};
use springer_core::nilrep::{enumerate_nilreps, hom_dim};
use springer_core::paving::{count_points, poincare};
use springer_core::{Composition, DimVector, Error, Multisegment, Quiver, Segment};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpringerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    InvalidComplex = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// A quiver of type `A<n>` or `cyclic:<n>`.
pub struct SpringerQuiver {
    quiver: Quiver,
}

/// A validated complex of graded free modules together with its algebra.
pub struct SpringerComplex {
    doc: ComplexDoc,
    generators: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SpringerStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidQuiver(_) | Error::Parse { .. } | Error::Term(_) | Error::Document(_) => SpringerStatus::Parse,
            Error::InvalidComplex(_) | Error::NotChainMap(_) => SpringerStatus::InvalidComplex,
            _ => SpringerStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpringerStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SpringerStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpringerStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SpringerStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SpringerStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn quiver<'a>(q: *const SpringerQuiver) -> Result<&'a Quiver, Failure> {
    q.as_ref().map(|q| &q.quiver).ok_or_else(|| null("quiver"))
}

fn give_string(s: String, dst: &mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(SpringerStatus::Internal, "interior NUL".into()))?;
    *dst = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn springer_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn springer_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `spec` must be a NUL-terminated string and `out_quiver` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn springer_quiver_new(spec: *const c_char, out_quiver: *mut *mut SpringerQuiver) -> SpringerStatus {
    guard(|| {
        let dst = out(out_quiver, "out_quiver")?;
        let q: Quiver = text(spec, "spec")?.parse()?;
        *dst = Box::into_raw(Box::new(SpringerQuiver { quiver: q }));
        Ok(())
    })
}

/// # Safety
/// `q` must be null or a handle from [`springer_quiver_new`], released only once.
#[no_mangle]
pub unsafe extern "C" fn springer_quiver_free(q: *mut SpringerQuiver) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `q` must be a live quiver handle and `out_n` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn springer_quiver_num_vertices(q: *const SpringerQuiver, out_n: *mut usize) -> SpringerStatus {
    guard(|| {
        *out(out_n, "out_n")? = quiver(q)?.num_vertices();
        Ok(())
    })
}

/// Number of isoclasses of nilpotent representations with dimension vector `dim` (`"1,1"`).
///
/// # Safety
/// `q` must be a live quiver handle, `dim` a NUL-terminated string and `out_count` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_orbit_count(
    q: *const SpringerQuiver,
    dim: *const c_char,
    out_count: *mut usize,
) -> SpringerStatus {
    guard(|| {
        let q = quiver(q)?;
        let d = DimVector::parse_for(q, text(dim, "dim")?)?;
        *out(out_count, "out_count")? = enumerate_nilreps(q, &d)?.len();
        Ok(())
    })
}

/// `dim Hom(E(a), E(b))` for segments given by socle vertex and length.
///
/// # Safety
/// `q` must be a live quiver handle and `out_dim` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_hom_dim(
    q: *const SpringerQuiver,
    socle_a: usize,
    len_a: usize,
    socle_b: usize,
    len_b: usize,
    out_dim: *mut usize,
) -> SpringerStatus {
    guard(|| {
        let q = quiver(q)?;
        let (a, b) = (Segment::new(socle_a, len_a), Segment::new(socle_b, len_b));
        a.check(q)?;
        b.check(q)?;
        *out(out_dim, "out_dim")? = hom_dim(q, &a, &b);
        Ok(())
    })
}

unsafe fn rep_comp(q: &Quiver, rep: *const c_char, comp: *const c_char) -> Result<(Multisegment, Composition), Failure> {
    let m = Multisegment::parse(q, text(rep, "rep")?)?;
    let d = m.dim_vector(q);
    let c = Composition::parse(q.num_vertices(), text(comp, "comp")?, Some(&d))?;
    Ok((m, c))
}

/// Poincaré polynomial of the flag fibre: `coeffs[k]` receives the number of cells of
/// dimension `k`. `*out_len` is always set to the required length; if it exceeds `cap`
/// nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `q` must be a live quiver handle, `rep` and `comp` NUL-terminated strings, `coeffs`
/// valid for `cap` writes (or null when `cap` is 0) and `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_poincare(
    q: *const SpringerQuiver,
    rep: *const c_char,
    comp: *const c_char,
    coeffs: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> SpringerStatus {
    guard(|| {
        let q = quiver(q)?;
        let (m, c) = rep_comp(q, rep, comp)?;
        let p = poincare(q, &m, &c)?;
        let len = p.degree().map_or(0, |d| d + 1);
        *out(out_len, "out_len")? = len;
        if len > cap {
            return Err(Failure(SpringerStatus::BufferTooSmall, format!("need {len} coefficients")));
        }
        if len > 0 && coeffs.is_null() {
            return Err(null("coeffs"));
        }
        for k in 0..len {
            *coeffs.add(k) = p.coeff(k);
        }
        Ok(())
    })
}

/// Points of the flag fibre over `F_p`, by direct enumeration.
///
/// # Safety
/// `q` must be a live quiver handle, `rep` and `comp` NUL-terminated strings and
/// `out_count` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_count_points(
    q: *const SpringerQuiver,
    rep: *const c_char,
    comp: *const c_char,
    p: u64,
    out_count: *mut u64,
) -> SpringerStatus {
    guard(|| {
        let q = quiver(q)?;
        let (m, c) = rep_comp(q, rep, comp)?;
        *out(out_count, "out_count")? = count_points(q, &m, &c, p)?;
        Ok(())
    })
}

fn checked<A: GradedAlgebra>(alg: &A, doc: &ComplexDoc) -> Result<usize, Failure> {
    let c = from_doc(alg, doc)?;
    validate(alg, &c)?;
    Ok(c.len())
}

fn minimized<A: GradedAlgebra>(alg: &A, doc: &ComplexDoc) -> Result<ComplexDoc, Failure> {
    let m = minimize(alg, &from_doc(alg, doc)?)?;
    Ok(to_doc(alg, &m.complex))
}

/// Parses and validates a `complex/1` JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_complex` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_complex_from_json(
    json: *const c_char,
    out_complex: *mut *mut SpringerComplex,
) -> SpringerStatus {
    guard(|| {
        let dst = out(out_complex, "out_complex")?;
        let doc = parse_doc(text(json, "json")?)?;
        let generators = match AnyAlgebra::from_descriptor(&doc.algebra)? {
            AnyAlgebra::Klr(a) => checked(&a, &doc)?,
            AnyAlgebra::Smash(a) => checked(&a, &doc)?,
        };
        *dst = Box::into_raw(Box::new(SpringerComplex { doc, generators }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a complex handle, released only once.
#[no_mangle]
pub unsafe extern "C" fn springer_complex_free(c: *mut SpringerComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live complex handle and `out_n` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_complex_num_generators(c: *const SpringerComplex, out_n: *mut usize) -> SpringerStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        *out(out_n, "out_n")? = c.generators;
        Ok(())
    })
}

/// The minimal complex homotopy equivalent to `c`, as a new handle.
///
/// # Safety
/// `c` must be a live complex handle and `out_complex` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_complex_minimize(
    c: *const SpringerComplex,
    out_complex: *mut *mut SpringerComplex,
) -> SpringerStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        let dst = out(out_complex, "out_complex")?;
        let doc = match AnyAlgebra::from_descriptor(&c.doc.algebra)? {
            AnyAlgebra::Klr(a) => minimized(&a, &c.doc)?,
            AnyAlgebra::Smash(a) => minimized(&a, &c.doc)?,
        };
        let generators = doc.generators.len();
        *dst = Box::into_raw(Box::new(SpringerComplex { doc, generators }));
        Ok(())
    })
}

/// The complex as a compact `complex/1` document; free with [`springer_string_free`].
///
/// # Safety
/// `c` must be a live complex handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn springer_complex_to_json(c: *const SpringerComplex, out_json: *mut *mut c_char) -> SpringerStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("complex"))?;
        let dst = out(out_json, "out_json")?;
        *dst = ptr::null_mut();
        let s = springer_core::homotopy::json::to_string(&c.doc);
        give_string(s, dst)
    })
}
