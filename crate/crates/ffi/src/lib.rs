//! C ABI over the hyperseg library. Every function returns an [`HsStatus`];
//! results go through out-pointers and objects live behind opaque handles
//! that the caller releases with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use hyperseg::centrality::pseudo_betweenness;
use hyperseg::dhrg::{Connection, DhrgInstance, DhrgModel, Radial};
use hyperseg::metrics::growth_constant;
use hyperseg::rght::{Grid, GridParams, VertexAddress};
use hyperseg::stg::{stg_distance, RghtStg};
use hyperseg::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    BufferTooSmall = 4,
    Runtime = 5,
    Panic = 6,
}

/// A hyperbolic triangulation with its distance oracle.
pub struct HsGrid {
    stg: RghtStg,
}

/// An embedded random graph.
pub struct HsDhrg {
    inst: DhrgInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> HsStatus {
    match e {
        Error::InvalidParams(_) | Error::InvalidAddress(_) | Error::InvalidModel(_) | Error::Parse(_) => {
            HsStatus::InvalidArgument
        }
        Error::OutOfBall { .. } | Error::IndexOutOfRange { .. } | Error::TooLarge(_) => HsStatus::OutOfRange,
        _ => HsStatus::Runtime,
    }
}

fn guard(f: impl FnOnce() -> Result<(), HsStatus>) -> HsStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            HsStatus::Panic
        }
    }
}

fn fail(e: Error) -> HsStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, HsStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer");
        HsStatus::NullPointer
    })
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, HsStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null pointer");
        HsStatus::NullPointer
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, HsStatus> {
    if p.is_null() {
        set_error("null pointer");
        return Err(HsStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        HsStatus::InvalidArgument
    })
}

/// Message for the last failing call on this thread; valid until the next
/// call on this thread.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_new(q: u32, a: u32, b: u32, out: *mut *mut HsGrid) -> HsStatus {
    guard(|| {
        let out = deref_mut(out)?;
        *out = ptr::null_mut();
        let grid = Grid::new(GridParams::new(q, a, b)).map_err(fail)?;
        let stg = RghtStg::new(grid).map_err(fail)?;
        *out = Box::into_raw(Box::new(HsGrid { stg }));
        Ok(())
    })
}

/// # Safety
/// `grid` must come from [`hs_grid_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_free(grid: *mut HsGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_d_bound(grid: *const HsGrid, out: *mut u32) -> HsStatus {
    guard(|| {
        *deref_mut(out)? = deref(grid)?.stg.bound();
        Ok(())
    })
}

/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_growth(grid: *const HsGrid, out: *mut f64) -> HsStatus {
    guard(|| {
        *deref_mut(out)? = growth_constant(deref(grid)?.stg.grid(), 1e-12);
        Ok(())
    })
}

/// `|R_k|`; `OutOfRange` when it does not fit in 64 bits.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_ring_size(grid: *mut HsGrid, k: u32, out: *mut u64) -> HsStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let size = deref_mut(grid)?.stg.grid_mut().ring_size(k);
        *out = u64::try_from(size).map_err(|_| {
            set_error(format!("ring {k} has more than 2^64 vertices"));
            HsStatus::OutOfRange
        })?;
        Ok(())
    })
}

/// Distance between two slash-separated addresses (empty for the root).
///
/// # Safety
/// `grid` must be a live handle, the addresses nul-terminated strings and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_grid_distance(
    grid: *mut HsGrid,
    from: *const c_char,
    to: *const c_char,
    out: *mut u32,
) -> HsStatus {
    guard(|| {
        let stg = &mut deref_mut(grid)?.stg;
        let out = deref_mut(out)?;
        let (from, to) = (text(from)?, text(to)?);
        let v = VertexAddress::from_str(from).and_then(|a| stg.grid_mut().vertex_at(&a)).map_err(fail)?;
        let w = VertexAddress::from_str(to).and_then(|a| stg.grid_mut().vertex_at(&a)).map_err(fail)?;
        let (s, t) = (stg.vertex_node(v), stg.vertex_node(w));
        *out = stg_distance(stg, s, t);
        Ok(())
    })
}

/// Sample `n` vertices with depth weights `exp(alpha r)` and connection
/// probability `1 / (1 + exp(t d + shift))`. The grid handle is not consumed.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn hs_dhrg_generate(
    grid: *const HsGrid,
    n: usize,
    radius: u32,
    alpha: f64,
    t: f64,
    shift: f64,
    seed: u64,
    out: *mut *mut HsDhrg,
) -> HsStatus {
    guard(|| {
        let out = deref_mut(out)?;
        *out = ptr::null_mut();
        let grid = deref(grid)?.stg.grid().clone();
        let model = DhrgModel::new(n, radius, Radial::Exponential { alpha }, Connection::Logistic { t, shift })
            .map_err(fail)?;
        let inst = DhrgInstance::generate(model, grid, seed).map_err(fail)?;
        *out = Box::into_raw(Box::new(HsDhrg { inst }));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from [`hs_dhrg_generate`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_free(graph: *mut HsDhrg) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle and the out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_size(graph: *const HsDhrg, vertices: *mut usize, edges: *mut usize) -> HsStatus {
    guard(|| {
        let inst = &deref(graph)?.inst;
        *deref_mut(vertices)? = inst.n();
        *deref_mut(edges)? = inst.edges().len();
        Ok(())
    })
}

/// Writes edges as `2 * edges` 0-based vertex ids.
///
/// # Safety
/// `graph` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_edges(graph: *const HsDhrg, buf: *mut u32, len: usize) -> HsStatus {
    guard(|| {
        let edges = deref(graph)?.inst.edges();
        if buf.is_null() {
            set_error("null pointer");
            return Err(HsStatus::NullPointer);
        }
        if len < 2 * edges.len() {
            set_error(format!("need room for {} ids", 2 * edges.len()));
            return Err(HsStatus::BufferTooSmall);
        }
        let buf = std::slice::from_raw_parts_mut(buf, len);
        for (slot, &(u, v)) in buf.chunks_exact_mut(2).zip(edges) {
            slot[0] = u as u32;
            slot[1] = v as u32;
        }
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_loglik(graph: *const HsDhrg, out: *mut f64) -> HsStatus {
    guard(|| {
        *deref_mut(out)? = deref(graph)?.inst.loglik();
        Ok(())
    })
}

/// Hill-climbing moves; `out` receives the final log-likelihood.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_local_search(graph: *mut HsDhrg, iters: usize, seed: u64, out: *mut f64) -> HsStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let inst = &mut deref_mut(graph)?.inst;
        inst.local_search(iters, seed).map_err(fail)?;
        *out = inst.loglik();
        Ok(())
    })
}

/// Pseudo-betweenness of every vertex into `buf[0..n]`.
///
/// # Safety
/// `graph` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn hs_dhrg_betweenness(graph: *const HsDhrg, gamma: f64, buf: *mut f64, len: usize) -> HsStatus {
    guard(|| {
        let inst = &deref(graph)?.inst;
        if buf.is_null() {
            set_error("null pointer");
            return Err(HsStatus::NullPointer);
        }
        if len < inst.n() {
            set_error(format!("need room for {} scores", inst.n()));
            return Err(HsStatus::BufferTooSmall);
        }
        let scores = pseudo_betweenness(inst.grid().clone(), inst.positions(), inst.model().radius, gamma)
            .map_err(fail)?
            .scores;
        std::slice::from_raw_parts_mut(buf, len)[..scores.len()].copy_from_slice(&scores);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(hs_grid_new(7, 1, 0, &mut g), HsStatus::Ok);
            let mut d = 0;
            assert_eq!(hs_grid_d_bound(g, &mut d), HsStatus::Ok);
            assert_eq!(d, 2);
            let mut size = 0;
            assert_eq!(hs_grid_ring_size(g, 3, &mut size), HsStatus::Ok);
            assert_eq!(size, 56);
            let (root, v) = (CString::new("").unwrap(), CString::new("0/0").unwrap());
            assert_eq!(hs_grid_distance(g, root.as_ptr(), v.as_ptr(), &mut d), HsStatus::Ok);
            assert_eq!(d, 2);
            let bad = CString::new("x").unwrap();
            assert_eq!(hs_grid_distance(g, bad.as_ptr(), v.as_ptr(), &mut d), HsStatus::InvalidArgument);
            assert!(!CStr::from_ptr(hs_last_error()).to_bytes().is_empty());
            hs_grid_free(g);
        }
    }

    #[test]
    fn errors_and_nulls() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(hs_grid_new(5, 1, 0, &mut g), HsStatus::InvalidArgument);
            assert!(g.is_null());
            assert_eq!(hs_grid_new(7, 1, 0, ptr::null_mut()), HsStatus::NullPointer);
            let mut d = 0;
            assert_eq!(hs_grid_d_bound(ptr::null(), &mut d), HsStatus::NullPointer);
            hs_grid_free(ptr::null_mut());
        }
    }

    #[test]
    fn random_graph() {
        unsafe {
            let mut g = ptr::null_mut();
            assert_eq!(hs_grid_new(7, 1, 0, &mut g), HsStatus::Ok);
            let mut h = ptr::null_mut();
            assert_eq!(hs_dhrg_generate(g, 30, 5, 0.7, 1.0, -4.0, 3, &mut h), HsStatus::Ok);
            let (mut n, mut m) = (0, 0);
            assert_eq!(hs_dhrg_size(h, &mut n, &mut m), HsStatus::Ok);
            assert_eq!(n, 30);
            let mut ids = vec![0u32; 2 * m];
            assert_eq!(hs_dhrg_edges(h, ids.as_mut_ptr(), ids.len()), HsStatus::Ok);
            assert!(ids.chunks(2).all(|e| e[0] < e[1]));
            if m > 0 {
                assert_eq!(hs_dhrg_edges(h, ids.as_mut_ptr(), 1), HsStatus::BufferTooSmall);
            }
            let (mut before, mut after) = (0.0, 0.0);
            assert_eq!(hs_dhrg_loglik(h, &mut before), HsStatus::Ok);
            assert_eq!(hs_dhrg_local_search(h, 100, 1, &mut after), HsStatus::Ok);
            assert!(after >= before);
            let mut scores = vec![0.0; n];
            assert_eq!(hs_dhrg_betweenness(h, 0.5, scores.as_mut_ptr(), n), HsStatus::Ok);
            assert!(scores.iter().all(|&s| s >= 1.0));
            hs_dhrg_free(h);
            hs_grid_free(g);
        }
    }
}
