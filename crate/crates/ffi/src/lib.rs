//! C interface to `sheafrig`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or a
//! sampler and released with the matching `*_free`. Every call returns an
//! [`SrStatus`]; on failure [`sr_last_error`] describes what went wrong on the
//! calling thread. Strings handed out by the library are freed with
//! [`sr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sheafrig::associated::{self, AssociatedSheafSpec, IndependentSheaf};
use sheafrig::graphs::{self, Hypergraph};
use sheafrig::io::{AssociatedSpecJson, FrameworkJson, GraphJson, MotionSpecJson};
use sheafrig::lie::{bar_joint_spec, EuclideanModel};
use sheafrig::motion::{self, MotionSheafSpec};
use sheafrig::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    DimensionMismatch = 4,
    Precondition = 5,
    Budget = 6,
    /// Two independent computations disagreed. Report it.
    Internal = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for SrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch(_) => SrStatus::DimensionMismatch,
            Error::InvalidInput(_) | Error::Json(_) => SrStatus::InvalidInput,
            Error::Precondition(_) => SrStatus::Precondition,
            Error::Budget(_) => SrStatus::Budget,
            Error::Internal(_) => SrStatus::Internal,
            Error::Io(_) => SrStatus::Io,
        }
    }
}

/// A graph or hypergraph with labelled vertices.
pub struct SrGraph(Hypergraph);
pub struct SrMotionSpec(MotionSheafSpec);
pub struct SrAssociatedSpec(AssociatedSheafSpec);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SrVerdict {
    pub h0: usize,
    pub h1: usize,
    pub trivial_dim: usize,
    pub connected: bool,
    pub independent: bool,
    pub rigid: bool,
    pub minimally_rigid: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SrStatus::from(&e), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(body: impl FnOnce() -> Outcome) -> SrStatus {
    let result = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure(SrStatus::Panic, format!("panic: {msg}")))
    });
    match result {
        Ok(()) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SrStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_error(msg);
            status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(SrStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(json: &str) -> Result<T, Failure> {
    serde_json::from_str(json).map_err(|e| Failure(SrStatus::InvalidInput, e.to_string()))
}

fn into_c_string<T: serde::Serialize>(value: &T) -> Result<*mut c_char, Failure> {
    let s = serde_json::to_string(value).map_err(Error::from)?;
    CString::new(s).map(CString::into_raw).map_err(|e| Failure(SrStatus::Internal, e.to_string()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version, a static string. Do not free.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"vertices": [...], "edges": [...]}` or the `"hyperedges"` form.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_from_json(json: *const c_char, out_graph: *mut *mut SrGraph) -> SrStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let g = parse::<GraphJson>(text(json, "json")?)?.to_hypergraph()?;
        *slot = boxed(SrGraph(g));
        Ok(())
    })
}

/// # Safety
/// `g` must be valid; the returned string is freed with [`sr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_graph_to_json(g: *const SrGraph, out_json: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let g = &deref(g, "graph")?.0;
        let j = if g.is_graph() {
            GraphJson::from_multigraph(&g.to_multigraph()?)
        } else {
            GraphJson::from_hypergraph(g)
        };
        *slot = into_c_string(&j)?;
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_free(g: *mut SrGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a valid handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_counts(g: *const SrGraph, out_vertices: *mut usize, out_edges: *mut usize) -> SrStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        *out(out_vertices, "out_vertices")? = g.vertex_count();
        *out(out_edges, "out_edges")? = g.edge_count();
        Ok(())
    })
}

/// (d, ℓ)-sparsity via the pebble game.
///
/// # Safety
/// `g` must be a valid handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sr_is_sparse(g: *const SrGraph, d: usize, l: usize, out_sparse: *mut bool, out_tight: *mut bool) -> SrStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let sparse = out(out_sparse, "out_sparse")?;
        let tight = out(out_tight, "out_tight")?;
        let rep = if g.is_graph() || g.edge_count() == 0 {
            graphs::is_sparse(&g.to_multigraph()?, d, l)?
        } else {
            graphs::is_sparse_hypergraph(g, d, l)?
        };
        *sparse = rep.sparse;
        *tight = rep.tight;
        Ok(())
    })
}

/// A random (n−1, n)-tight multigraph on `vertices` vertices.
///
/// # Safety
/// `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_generate_tight(n: usize, vertices: usize, seed: u64, out_graph: *mut *mut SrGraph) -> SrStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let gen = graphs::generate_tight(n, vertices, seed)?;
        *slot = boxed(SrGraph(gen.graph.to_hypergraph()));
        Ok(())
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_motion_spec_from_json(json: *const c_char, out_spec: *mut *mut SrMotionSpec) -> SrStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        let spec = parse::<MotionSpecJson>(text(json, "json")?)?.to_spec()?;
        *slot = boxed(SrMotionSpec(spec));
        Ok(())
    })
}

/// Motion spec of a bar-joint framework given as framework JSON.
///
/// # Safety
/// `json` must be a nul-terminated string; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_bar_joint_from_json(json: *const c_char, out_spec: *mut *mut SrMotionSpec) -> SrStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        let fw = parse::<FrameworkJson>(text(json, "json")?)?.to_framework()?;
        let spec = bar_joint_spec(&EuclideanModel::new(fw.dim())?, &fw)?;
        *slot = boxed(SrMotionSpec(spec));
        Ok(())
    })
}

/// Generic s-dimensional subspaces of ℚⁿ on each vertex of `g`.
///
/// # Safety
/// `g` must be a valid handle; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_motion_sample(g: *const SrGraph, s: usize, n: usize, seed: u64, out_spec: *mut *mut SrMotionSpec) -> SrStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let slot = out(out_spec, "out_spec")?;
        *slot = boxed(SrMotionSpec(motion::sample_generic_spec(g, s, n, seed)?));
        Ok(())
    })
}

/// # Safety
/// `spec` must be valid; the returned string is freed with [`sr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_motion_spec_to_json(spec: *const SrMotionSpec, out_json: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = into_c_string(&MotionSpecJson::from_spec(&deref(spec, "spec")?.0))?;
        Ok(())
    })
}

/// # Safety
/// `spec` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_motion_spec_free(spec: *mut SrMotionSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `spec` must be a valid handle; `out_verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_motion_analyze(spec: *const SrMotionSpec, out_verdict: *mut SrVerdict) -> SrStatus {
    guard(|| {
        let slot = out(out_verdict, "out_verdict")?;
        let v = motion::analyze(&deref(spec, "spec")?.0)?;
        *slot = SrVerdict {
            h0: v.h0,
            h1: v.h1,
            trivial_dim: v.trivial_dim,
            connected: v.connected,
            independent: v.independent,
            rigid: v.rigid,
            minimally_rigid: v.minimally_rigid,
        };
        Ok(())
    })
}

/// Samples `trials` generic line configurations in ℚⁿ on the graph `g` and
/// compares their independence with sparsity of (n−2)Γ.
///
/// # Safety
/// `g` must be a valid handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sr_main_theorem(g: *const SrGraph, n: usize, trials: usize, seed: u64, out_sparse: *mut bool, out_agrees: *mut bool) -> SrStatus {
    guard(|| {
        let g = deref(g, "graph")?.0.to_multigraph()?;
        let sparse = out(out_sparse, "out_sparse")?;
        let agrees = out(out_agrees, "out_agrees")?;
        let rep = motion::check_main_theorem(&g, n, trials, seed)?;
        *sparse = rep.sparse;
        *agrees = rep.agrees;
        Ok(())
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_associated_from_json(json: *const c_char, out_spec: *mut *mut SrAssociatedSpec) -> SrStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        let spec = parse::<AssociatedSpecJson>(text(json, "json")?)?.to_spec()?;
        *slot = boxed(SrAssociatedSpec(spec));
        Ok(())
    })
}

/// # Safety
/// `spec` must be valid; the returned string is freed with [`sr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sr_associated_to_json(spec: *const SrAssociatedSpec, out_json: *mut *mut c_char) -> SrStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = into_c_string(&AssociatedSpecJson::from_spec(&deref(spec, "spec")?.0))?;
        Ok(())
    })
}

/// # Safety
/// `spec` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_associated_free(spec: *mut SrAssociatedSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// h0 and h1 of the associated sheaf, computed two ways and cross-checked.
///
/// # Safety
/// `spec` must be a valid handle and the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sr_associated_cohomology(spec: *const SrAssociatedSpec, out_h0: *mut usize, out_h1: *mut usize) -> SrStatus {
    guard(|| {
        let spec = &deref(spec, "spec")?.0;
        let h0 = out(out_h0, "out_h0")?;
        let h1 = out(out_h1, "out_h1")?;
        let dims = associated::associated_dims(spec)?;
        *h0 = dims.h0;
        *h1 = dims.h1;
        Ok(())
    })
}

/// An associated sheaf on `g` with h1 = 0, when (n−1, n)-sparsity allows one.
/// If `g` is not sparse the call succeeds with `*out_spec` set to NULL.
///
/// # Safety
/// `g` must be a valid handle; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_build_independent_sheaf(g: *const SrGraph, n: usize, seed: u64, out_spec: *mut *mut SrAssociatedSpec) -> SrStatus {
    guard(|| {
        let g = deref(g, "graph")?.0.to_multigraph()?;
        let slot = out(out_spec, "out_spec")?;
        *slot = match associated::build_independent_sheaf(&g, n, seed)? {
            IndependentSheaf::Built { spec, .. } => boxed(SrAssociatedSpec(spec)),
            IndependentSheaf::NotSparse { .. } => ptr::null_mut(),
        };
        Ok(())
    })
}
