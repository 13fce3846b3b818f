//! C ABI for the positroid library.
//!
//! Objects cross the boundary as opaque handles created by `*_parse` or
//! `*_from_*` functions and released by the matching `*_free`. Every
//! fallible function returns a [`PositroidStatus`]; on failure a message is
//! available from [`positroid_last_error`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with [`positroid_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use positroid::enumeration::count_cells;
use positroid::exactmath::RationalMatrix;
use positroid::lediagram::{gamma_network, invert_measurement, LeTableau};
use positroid::network::{measure, PlanarDirectedNetwork};
use positroid::plabic::{from_decorated_permutation, is_reduced, matroid, reduce, trips, PlabicNetwork};
use positroid::positroid::{circular_leq, le_from_perm, rank, DecoratedPermutation};
use positroid::Error;

/// Result of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositroidStatus {
    Ok = 0,
    /// Input violates a structural requirement.
    Validation = 1,
    /// Input text is malformed.
    Parse = 2,
    /// Input is well formed but fails a mathematical precondition.
    Precondition = 3,
    /// The library detected an internal inconsistency.
    Internal = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

impl From<&Error> for PositroidStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Validation(_) => PositroidStatus::Validation,
            Error::Parse { .. } => PositroidStatus::Parse,
            Error::Precondition(_) => PositroidStatus::Precondition,
            Error::Internal(_) => PositroidStatus::Internal,
        }
    }
}

/// Opaque planar directed network.
pub struct PositroidNetwork(PlanarDirectedNetwork);

/// Opaque plabic graph with face weights.
pub struct PositroidPlabic(PlabicNetwork);

/// Opaque decorated permutation.
pub struct PositroidPerm(DecoratedPermutation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording failures and containing panics.
fn guard(f: impl FnOnce() -> Result<(), (PositroidStatus, String)>) -> PositroidStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PositroidStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            PositroidStatus::Panic
        }
    }
}

type FfiResult<T> = Result<T, (PositroidStatus, String)>;

fn lib<T>(r: positroid::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (PositroidStatus::from(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err((PositroidStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (PositroidStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(h: *const T) -> FfiResult<&'a T> {
    h.as_ref().ok_or((PositroidStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err((PositroidStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|e| (PositroidStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    write_out(out, Box::into_raw(Box::new(value)))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn positroid_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn positroid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn positroid_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a network file.
#[no_mangle]
pub unsafe extern "C" fn positroid_network_parse(
    text: *const c_char,
    out: *mut *mut PositroidNetwork,
) -> PositroidStatus {
    guard(|| {
        let net = lib(PlanarDirectedNetwork::parse(read_str(text)?))?;
        write_handle(out, PositroidNetwork(net))
    })
}

/// Γ-network of a Le-tableau given in its text format.
#[no_mangle]
pub unsafe extern "C" fn positroid_network_from_le(
    text: *const c_char,
    out: *mut *mut PositroidNetwork,
) -> PositroidStatus {
    guard(|| {
        let t = lib(LeTableau::parse(read_str(text)?))?;
        write_handle(out, PositroidNetwork(gamma_network(&t)))
    })
}

/// Releases a network. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn positroid_network_free(h: *mut PositroidNetwork) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Plücker coordinates of the boundary measurement, in text format.
#[no_mangle]
pub unsafe extern "C" fn positroid_network_measure(
    h: *const PositroidNetwork,
    out: *mut *mut c_char,
) -> PositroidStatus {
    guard(|| {
        let p = lib(measure(&handle(h)?.0))?;
        write_string(out, p.to_text())
    })
}

/// Canonical text form of a network.
#[no_mangle]
pub unsafe extern "C" fn positroid_network_to_text(
    h: *const PositroidNetwork,
    out: *mut *mut c_char,
) -> PositroidStatus {
    guard(|| write_string(out, handle(h)?.0.to_text()))
}

/// Le-tableau text of a totally nonnegative matrix given in text format.
#[no_mangle]
pub unsafe extern "C" fn positroid_invert(matrix: *const c_char, out: *mut *mut c_char) -> PositroidStatus {
    guard(|| {
        let a = lib(RationalMatrix::parse(read_str(matrix)?))?;
        let t = lib(invert_measurement(&a))?;
        write_string(out, t.to_text())
    })
}

/// Parses a plabic file.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_parse(
    text: *const c_char,
    out: *mut *mut PositroidPlabic,
) -> PositroidStatus {
    guard(|| {
        let net = lib(PlabicNetwork::parse(read_str(text)?))?;
        write_handle(out, PositroidPlabic(net.compact()))
    })
}

/// Reduced plabic graph of a decorated permutation, with unit face weights.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_from_perm(
    p: *const PositroidPerm,
    out: *mut *mut PositroidPlabic,
) -> PositroidStatus {
    guard(|| {
        let g = lib(from_decorated_permutation(&handle(p)?.0))?;
        let net = lib(PlabicNetwork::unit(g))?;
        write_handle(out, PositroidPlabic(net))
    })
}

/// Releases a plabic graph. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_free(h: *mut PositroidPlabic) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Canonical text form of a plabic network.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_to_text(h: *const PositroidPlabic, out: *mut *mut c_char) -> PositroidStatus {
    guard(|| write_string(out, handle(h)?.0.to_text()))
}

/// Whether a plabic graph is reduced.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_is_reduced(h: *const PositroidPlabic, out: *mut bool) -> PositroidStatus {
    guard(|| {
        let check = lib(is_reduced(handle(h)?.0.graph()))?;
        write_out(out, check.is_reduced())
    })
}

/// Decorated trip permutation of a plabic graph. Fails with a precondition
/// error when a fixed point has no color.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_trip_perm(
    h: *const PositroidPlabic,
    out: *mut *mut PositroidPerm,
) -> PositroidStatus {
    guard(|| {
        let td = trips(handle(h)?.0.graph());
        let p = td
            .decorated()
            .ok_or((PositroidStatus::Precondition, "trip permutation has an uncolored fixed point".into()))?;
        write_handle(out, PositroidPerm(p))
    })
}

/// Bases of the matroid of a plabic graph, in text format.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_matroid(h: *const PositroidPlabic, out: *mut *mut c_char) -> PositroidStatus {
    guard(|| {
        let m = lib(matroid(handle(h)?.0.graph()))?;
        write_string(out, m.to_text())
    })
}

/// Reduced form of a plabic network as a new handle.
#[no_mangle]
pub unsafe extern "C" fn positroid_plabic_reduce(
    h: *const PositroidPlabic,
    out: *mut *mut PositroidPlabic,
) -> PositroidStatus {
    guard(|| {
        let r = lib(reduce(&handle(h)?.0))?;
        write_handle(out, PositroidPlabic(r.network))
    })
}

/// Parses a decorated permutation in one-line notation.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_parse(text: *const c_char, out: *mut *mut PositroidPerm) -> PositroidStatus {
    guard(|| {
        let p: DecoratedPermutation = lib(read_str(text)?.parse())?;
        write_handle(out, PositroidPerm(p))
    })
}

/// Releases a permutation. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_free(h: *mut PositroidPerm) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// One-line notation of a permutation.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_to_text(h: *const PositroidPerm, out: *mut *mut c_char) -> PositroidStatus {
    guard(|| write_string(out, handle(h)?.0.to_text()))
}

/// Dimension of the cell of a permutation.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_rank(h: *const PositroidPerm, out: *mut usize) -> PositroidStatus {
    guard(|| write_out(out, rank(&handle(h)?.0)))
}

/// Le-diagram of a permutation, in text format.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_to_le(h: *const PositroidPerm, out: *mut *mut c_char) -> PositroidStatus {
    guard(|| {
        let d = lib(le_from_perm(&handle(h)?.0))?;
        write_string(out, d.to_text())
    })
}

/// Whether `a ≤ b` in the circular Bruhat order.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_leq(
    a: *const PositroidPerm,
    b: *const PositroidPerm,
    out: *mut bool,
) -> PositroidStatus {
    guard(|| {
        let le = lib(circular_leq(&handle(a)?.0, &handle(b)?.0))?;
        write_out(out, le)
    })
}

/// Number of cells of the totally nonnegative Grassmannian Gr(k, n).
/// Fails with a validation error when the count does not fit in 64 bits.
#[no_mangle]
pub unsafe extern "C" fn positroid_cell_count(k: usize, n: usize, out: *mut u64) -> PositroidStatus {
    guard(|| {
        let c = count_cells(k, n);
        let c = u64::try_from(&c).map_err(|_| (PositroidStatus::Validation, format!("N({k},{n}) exceeds 64 bits")))?;
        write_out(out, c)
    })
}
