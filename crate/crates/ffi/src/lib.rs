//! C ABI for `mdsegtree`.
//!
//! Trees are opaque heap handles created by `mst_*_new` and released with the
//! matching `mst_*_free`. Every other call returns an [`MstStatus`]; results
//! are written through out-pointers only on `MST_STATUS_OK`. Indices are
//! 0-based and inclusive. Panics never cross the boundary.
//!
//! A handle may be shared by concurrent readers (`*_query`, counters) as long
//! as no update runs at the same time; synchronization is the caller's job.

#![allow(clippy::missing_safety_doc)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use mdsegtree::{Error, Rational, Tree1D, Tree2D, TreeND};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MstStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Overflow = 3,
    Resource = 4,
    Panic = 5,
}

impl From<Error> for MstStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => MstStatus::InvalidArgument,
            Error::Overflow => MstStatus::Overflow,
            Error::Resource(_) => MstStatus::Resource,
        }
    }
}

/// 1D tree over `f64`.
pub struct MstTree1D(Tree1D<f64>);

/// 2D tree over `f64`.
pub struct MstTree2D(Tree2D<f64>);

/// d-dimensional tree over `f64` (1 ≤ d ≤ 4).
pub struct MstTreeND(TreeND<f64>);

/// 2D tree over exact rationals.
pub struct MstExactTree2D(Tree2D<Rational>);

fn guard(f: impl FnOnce() -> Result<(), MstStatus>) -> MstStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MstStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => MstStatus::Panic,
    }
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, MstStatus> {
    p.as_ref().ok_or(MstStatus::NullPointer)
}

unsafe fn handle_mut<'a, T>(p: *mut T) -> Result<&'a mut T, MstStatus> {
    p.as_mut().ok_or(MstStatus::NullPointer)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), MstStatus> {
    if out.is_null() {
        return Err(MstStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

unsafe fn publish<T>(out: *mut *mut T, v: T) -> Result<(), MstStatus> {
    if out.is_null() {
        return Err(MstStatus::NullPointer);
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn mst_status_str(status: MstStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MstStatus::Ok => b"ok\0",
        MstStatus::NullPointer => b"null pointer argument\0",
        MstStatus::InvalidArgument => b"invalid argument\0",
        MstStatus::Overflow => b"arithmetic overflow\0",
        MstStatus::Resource => b"resource limit\0",
        MstStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

// ---- 1D ----

#[no_mangle]
pub unsafe extern "C" fn mst_tree1d_new(n: usize, out: *mut *mut MstTree1D) -> MstStatus {
    guard(|| publish(out, MstTree1D(Tree1D::new(n)?)))
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree1d_free(tree: *mut MstTree1D) {
    release(tree)
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree1d_update(
    tree: *mut MstTree1D,
    lo: usize,
    hi: usize,
    c: f64,
) -> MstStatus {
    guard(|| Ok(handle_mut(tree)?.0.update(lo..=hi, c)?))
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree1d_query(
    tree: *const MstTree1D,
    lo: usize,
    hi: usize,
    out: *mut f64,
) -> MstStatus {
    guard(|| write(out, handle(tree)?.0.query(lo..=hi)?))
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree1d_visits(tree: *const MstTree1D, out: *mut u64) -> MstStatus {
    guard(|| write(out, handle(tree)?.0.visits()))
}

// ---- 2D ----

#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_new(n: usize, m: usize, out: *mut *mut MstTree2D) -> MstStatus {
    guard(|| publish(out, MstTree2D(Tree2D::new(n, m)?)))
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_free(tree: *mut MstTree2D) {
    release(tree)
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_update(
    tree: *mut MstTree2D,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    c: f64,
) -> MstStatus {
    guard(|| Ok(handle_mut(tree)?.0.update(x1..=x2, y1..=y2, c)?))
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_query(
    tree: *const MstTree2D,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    out: *mut f64,
) -> MstStatus {
    guard(|| write(out, handle(tree)?.0.query(x1..=x2, y1..=y2)?))
}

/// Visited node bodies since the last reset. Either out-pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_counters(
    tree: *const MstTree2D,
    update_visits: *mut u64,
    query_visits: *mut u64,
) -> MstStatus {
    guard(|| {
        let c = handle(tree)?.0.counters();
        if !update_visits.is_null() {
            update_visits.write(c.update_visits);
        }
        if !query_visits.is_null() {
            query_visits.write(c.query_visits);
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mst_tree2d_reset_counters(tree: *const MstTree2D) -> MstStatus {
    guard(|| {
        handle(tree)?.0.reset_counters();
        Ok(())
    })
}

// ---- d-dimensional ----

unsafe fn bounds(
    d: usize,
    lo: *const usize,
    hi: *const usize,
) -> Result<Vec<std::ops::RangeInclusive<usize>>, MstStatus> {
    if lo.is_null() || hi.is_null() {
        return Err(MstStatus::NullPointer);
    }
    let (lo, hi) = (slice::from_raw_parts(lo, d), slice::from_raw_parts(hi, d));
    Ok(lo.iter().zip(hi).map(|(&a, &b)| a..=b).collect())
}

/// `dims` points to `d` extents.
#[no_mangle]
pub unsafe extern "C" fn mst_treend_new(
    dims: *const usize,
    d: usize,
    out: *mut *mut MstTreeND,
) -> MstStatus {
    guard(|| {
        if dims.is_null() {
            return Err(MstStatus::NullPointer);
        }
        let dims = slice::from_raw_parts(dims, d);
        publish(out, MstTreeND(TreeND::new(dims)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn mst_treend_free(tree: *mut MstTreeND) {
    release(tree)
}

/// `lo` and `hi` each point to one inclusive bound per dimension.
#[no_mangle]
pub unsafe extern "C" fn mst_treend_update(
    tree: *mut MstTreeND,
    lo: *const usize,
    hi: *const usize,
    c: f64,
) -> MstStatus {
    guard(|| {
        let t = handle_mut(tree)?;
        let b = bounds(t.0.dims().len(), lo, hi)?;
        Ok(t.0.update(&b, c)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn mst_treend_query(
    tree: *const MstTreeND,
    lo: *const usize,
    hi: *const usize,
    out: *mut f64,
) -> MstStatus {
    guard(|| {
        let t = handle(tree)?;
        let b = bounds(t.0.dims().len(), lo, hi)?;
        write(out, t.0.query(&b)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn mst_treend_visits(
    tree: *const MstTreeND,
    update_visits: *mut u64,
    query_visits: *mut u64,
) -> MstStatus {
    guard(|| {
        let (u, q) = handle(tree)?.0.visits();
        if !update_visits.is_null() {
            update_visits.write(u);
        }
        if !query_visits.is_null() {
            query_visits.write(q);
        }
        Ok(())
    })
}

// ---- exact 2D ----

#[no_mangle]
pub unsafe extern "C" fn mst_exact2d_new(
    n: usize,
    m: usize,
    out: *mut *mut MstExactTree2D,
) -> MstStatus {
    guard(|| publish(out, MstExactTree2D(Tree2D::new(n, m)?)))
}

#[no_mangle]
pub unsafe extern "C" fn mst_exact2d_free(tree: *mut MstExactTree2D) {
    release(tree)
}

/// Adds `c_num / c_den` to every cell in the box.
#[no_mangle]
pub unsafe extern "C" fn mst_exact2d_update(
    tree: *mut MstExactTree2D,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    c_num: i64,
    c_den: u64,
) -> MstStatus {
    guard(|| {
        let c = Rational::new(c_num as i128, c_den)?;
        Ok(handle_mut(tree)?.0.update(x1..=x2, y1..=y2, c)?)
    })
}

/// Box sum in lowest terms. Returns `MST_STATUS_OVERFLOW` if the numerator
/// does not fit in 64 bits.
#[no_mangle]
pub unsafe extern "C" fn mst_exact2d_query(
    tree: *const MstExactTree2D,
    x1: usize,
    x2: usize,
    y1: usize,
    y2: usize,
    out_num: *mut i64,
    out_den: *mut u64,
) -> MstStatus {
    guard(|| {
        if out_num.is_null() || out_den.is_null() {
            return Err(MstStatus::NullPointer);
        }
        let v = handle(tree)?.0.query(x1..=x2, y1..=y2)?;
        let num = i64::try_from(v.numer()).map_err(|_| MstStatus::Overflow)?;
        out_num.write(num);
        out_den.write(v.denom());
        Ok(())
    })
}
