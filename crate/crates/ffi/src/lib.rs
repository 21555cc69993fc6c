//! C interface to `finbundle`.
//!
//! Objects cross the boundary as opaque handles created from JSON documents
//! and released with the matching `*_free` function. Every fallible call
//! returns an [`FbStatus`]; on failure [`fb_last_error_message`] describes
//! what went wrong. Strings handed out by the library are released with
//! [`fb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use finbundle::bundles::{self, ClassTable, FiberBundle};
use finbundle::doc::{self, Document, IsoDoc};
use finbundle::finspace::{Budget, FinSpace};
use finbundle::functorcat::TopFunctor;
use finbundle::grothendieck::groth;
use finbundle::Error;

/// Result of a call. The numbering of 0 to 3 follows the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    /// The question was answered with no: not a bundle, not isomorphic.
    Negative = 1,
    /// The input is not a well-formed document.
    Parse = 2,
    /// The node budget ran out.
    Budget = 3,
    /// The input is well formed but not a valid object, or an argument is out of range.
    Invalid = 4,
    NullPointer = 5,
    /// An internal panic was caught.
    Panic = 6,
}

pub struct FbSpace(Arc<FinSpace>);

pub struct FbFunctor(Arc<TopFunctor>);

pub struct FbBundle(FiberBundle);

pub struct FbClassTable {
    table: ClassTable,
    inconclusive: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(FbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_budget() { FbStatus::Budget } else { FbStatus::Invalid };
        Fail(status, e.to_string())
    }
}

impl From<doc::ParseError> for Fail {
    fn from(e: doc::ParseError) -> Self {
        Fail(FbStatus::Parse, e.0)
    }
}

fn null(what: &str) -> Fail {
    Fail(FbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording failures and catching panics.
fn guard(f: impl FnOnce() -> Result<FbStatus, Fail>) -> FbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            FbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null("input string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(FbStatus::Parse, "input is not UTF-8".into()))
}

unsafe fn parse(json: *const c_char) -> Result<Document, Fail> {
    Ok(Document::parse(read_str(json)?)?)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(FbStatus::Invalid, "output contains a nul byte".into()))?
        .into_raw();
    Ok(())
}

fn budget(n: u64) -> Result<Budget, Fail> {
    if n == 0 {
        Err(Fail(FbStatus::Invalid, "budget must be positive".into()))
    } else {
        Ok(Budget::new(n))
    }
}

fn wrong_kind(d: &Document, want: &str) -> Fail {
    Fail(FbStatus::Invalid, format!("expected a {want} document, got `{}`", d.kind()))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a space document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_space_from_json(json: *const c_char, out: *mut *mut FbSpace) -> FbStatus {
    guard(|| match parse(json)? {
        Document::Space(s) => {
            put(out, FbSpace(Arc::new(doc::space_from_doc(&s)?)))?;
            Ok(FbStatus::Ok)
        }
        other => Err(wrong_kind(&other, "space")),
    })
}

/// # Safety
/// `space` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_space_free(space: *mut FbSpace) {
    free(space)
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_space_len(space: *const FbSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.len())
}

/// Writes whether `x <= y` in the specialization order.
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_space_leq(space: *const FbSpace, x: usize, y: usize, out: *mut bool) -> FbStatus {
    guard(|| {
        let s = &handle(space, "space")?.0;
        if x >= s.len() || y >= s.len() {
            return Err(Fail(FbStatus::Invalid, format!("point out of range for {} points", s.len())));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = s.leq(x, y);
        Ok(FbStatus::Ok)
    })
}

/// Serializes a space; free the result with [`fb_string_free`].
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_space_to_json(space: *const FbSpace, out: *mut *mut c_char) -> FbStatus {
    guard(|| {
        let s = &handle(space, "space")?.0;
        put_string(out, Document::Space(doc::space_to_doc(s)).to_json())?;
        Ok(FbStatus::Ok)
    })
}

/// Parses a functor document and checks the functor laws.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_functor_from_json(json: *const c_char, out: *mut *mut FbFunctor) -> FbStatus {
    guard(|| match parse(json)? {
        Document::Functor(f) => {
            let f = doc::functor_from_doc(&f)?;
            if let Some(v) = f.functoriality_violations().first() {
                return Err(Fail(FbStatus::Invalid, format!("not a functor: {}", v.describe(f.base()))));
            }
            put(out, FbFunctor(Arc::new(f)))?;
            Ok(FbStatus::Ok)
        }
        other => Err(wrong_kind(&other, "functor")),
    })
}

/// # Safety
/// `functor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_functor_free(functor: *mut FbFunctor) {
    free(functor)
}

/// The Grothendieck construction as a JSON document, optionally with its
/// open sets (at most 12 points).
///
/// # Safety
/// `functor` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_groth_json(functor: *const FbFunctor, dump_opens: bool, out: *mut *mut c_char) -> FbStatus {
    guard(|| {
        let g = groth(&handle(functor, "functor")?.0)?;
        if dump_opens && g.space().len() > 12 {
            return Err(Fail(FbStatus::Invalid, "open sets are listed for at most 12 points".into()));
        }
        put_string(out, Document::Groth(doc::groth_to_doc(&g, dump_opens)).to_json())?;
        Ok(FbStatus::Ok)
    })
}

/// Parses a bundle document; charts, if present, are validated.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_bundle_from_json(json: *const c_char, out: *mut *mut FbBundle) -> FbStatus {
    guard(|| match parse(json)? {
        Document::Bundle(b) => {
            put(out, FbBundle(doc::bundle_from_doc(&b)?))?;
            Ok(FbStatus::Ok)
        }
        other => Err(wrong_kind(&other, "bundle")),
    })
}

/// # Safety
/// `bundle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_bundle_free(bundle: *mut FbBundle) {
    free(bundle)
}

/// Searches for trivializations. On success the handle carries them and
/// the call returns `Ok`; `Negative` means the map is not a bundle with the
/// given fiber.
///
/// # Safety
/// `bundle` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn fb_bundle_verify(bundle: *mut FbBundle, node_budget: u64) -> FbStatus {
    guard(|| {
        let b = bundle.as_mut().ok_or_else(|| null("bundle"))?;
        if b.0.is_verified() {
            return Ok(FbStatus::Ok);
        }
        match bundles::verify_bundle(b.0.map(), b.0.fiber(), budget(node_budget)?)? {
            Some(v) => {
                b.0 = v;
                Ok(FbStatus::Ok)
            }
            None => Ok(FbStatus::Negative),
        }
    })
}

/// Looks for an over-base homeomorphism between two verified bundles and,
/// if `witness` is not null, writes an iso document.
///
/// # Safety
/// `first`, `second` must be live handles; `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fb_bundle_iso(
    first: *const FbBundle,
    second: *const FbBundle,
    node_budget: u64,
    witness: *mut *mut c_char,
) -> FbStatus {
    guard(|| {
        let p = &handle(first, "first bundle")?.0;
        let q = &handle(second, "second bundle")?.0;
        let h = bundles::bundle_iso(p, q, budget(node_budget)?)?;
        if !witness.is_null() {
            let d = Document::Iso(IsoDoc {
                isomorphic: h.is_some(),
                first: doc::bundle_to_doc(p),
                second: doc::bundle_to_doc(q),
                witness: h.as_ref().map(doc::label_map),
            });
            put_string(witness, d.to_json())?;
        }
        Ok(if h.is_some() { FbStatus::Ok } else { FbStatus::Negative })
    })
}

/// Classifies bundles over `base` with fiber `fiber`. On `Budget` a partial
/// table is still written to `out` and marked inconclusive.
///
/// # Safety
/// `base`, `fiber` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_classify(
    base: *const FbSpace,
    fiber: *const FbSpace,
    node_budget: u64,
    out: *mut *mut FbClassTable,
) -> FbStatus {
    guard(|| {
        let b = &handle(base, "base")?.0;
        let f = &handle(fiber, "fiber")?.0;
        match bundles::classify(b, f, budget(node_budget)?) {
            Ok(table) => {
                put(out, FbClassTable { table, inconclusive: false })?;
                Ok(FbStatus::Ok)
            }
            Err(Error::ClassificationInconclusive { limit, partial }) => {
                put(out, FbClassTable { table: *partial, inconclusive: true })?;
                set_error(&format!("classification inconclusive: node budget of {limit} exhausted"));
                Ok(FbStatus::Budget)
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Number of classes, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_class_table_len(table: *const FbClassTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.len())
}

/// Number of enumerated functors in class `index`.
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_class_table_class_size(table: *const FbClassTable, index: usize, out: *mut u64) -> FbStatus {
    guard(|| {
        let t = &handle(table, "class table")?.table;
        let c = t
            .classes
            .get(index)
            .ok_or_else(|| Fail(FbStatus::Invalid, format!("class {index} out of range for {}", t.len())))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = c.size;
        Ok(FbStatus::Ok)
    })
}

/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fb_class_table_to_json(table: *const FbClassTable, out: *mut *mut c_char) -> FbStatus {
    guard(|| {
        let t = handle(table, "class table")?;
        put_string(out, Document::ClassTable(doc::class_table_to_doc(&t.table, t.inconclusive)).to_json())?;
        Ok(FbStatus::Ok)
    })
}

/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_class_table_free(table: *mut FbClassTable) {
    free(table)
}
