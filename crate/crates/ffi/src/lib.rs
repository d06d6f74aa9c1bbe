//! C interface to `oricolor`.
//!
//! Objects are opaque heap handles released with the matching `*_free`.
//! Fallible functions return an [`OcStatus`]. For anything other than
//! `OC_STATUS_OK`, `OC_STATUS_FAILS` or `OC_STATUS_UNSAT` the thread's last
//! error message is set; read it with [`oc_last_error`]. Panics are caught
//! at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oricolor::colorer::{color, RoutedColoring};
use oricolor::digraph::{verify_homomorphism, HomCheck};
use oricolor::generators::{generate, GenSpec, Model};
use oricolor::homsolver::{solve, Outcome, SolverConfig};
use oricolor::paley::build_paley;
use oricolor::properties::{check_cnk, check_pnk, PMode};
use oricolor::textio::{parse_digraph, parse_target};
use oricolor::tromp::{t9_target, tromp_star_target, tromp_target};
use oricolor::{ColorMap, Error, OrientedGraph, TargetGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcStatus {
    Ok = 0,
    /// A property does not hold or a map is not a homomorphism.
    Fails = 1,
    /// No homomorphism exists.
    Unsat = 2,
    NullArgument = 10,
    InvalidArgument = 11,
    Parse = 12,
    Precondition = 13,
    Unsupported = 14,
    Uncertified = 15,
    BudgetExhausted = 16,
    Contradiction = 17,
    Io = 18,
    Panic = 19,
}

/// An oriented graph.
pub struct OcGraph(OrientedGraph);

/// A target digraph with its structure (anti-twins, landmarks).
pub struct OcTarget(TargetGraph);

/// A verified coloring; components may use different targets.
pub struct OcColoring(RoutedColoring);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OcStatus {
    match e {
        Error::InvalidGraph(_) | Error::MalformedMap(_) | Error::Violation(_) => OcStatus::InvalidArgument,
        Error::Parse { .. } => OcStatus::Parse,
        Error::UnsupportedField { .. } | Error::Unsupported(_) => OcStatus::Unsupported,
        Error::Precondition(_) => OcStatus::Precondition,
        Error::BudgetExhausted { .. } | Error::CliqueBudget(_) => OcStatus::BudgetExhausted,
        Error::TheoremContradiction(_) => OcStatus::Contradiction,
        Error::Uncertified(_) => OcStatus::Uncertified,
        Error::Io(_) => OcStatus::Io,
    }
}

/// Runs `f`, turning errors and panics into a status plus a message.
fn guard(f: impl FnOnce() -> Result<OcStatus, (OcStatus, String)>) -> OcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            OcStatus::Panic
        }
    }
}

fn lib<T>(r: oricolor::Result<T>) -> Result<T, (OcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (OcStatus, String) {
    (OcStatus::NullArgument, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (OcStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (OcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (OcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<OcStatus, (OcStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(OcStatus::Ok)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or
/// 0 when there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn oc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// An edgeless graph on `n` vertices.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_new(n: usize, out: *mut *mut OcGraph) -> OcStatus {
    guard(|| put(out, OcGraph(OrientedGraph::new(n))))
}

/// Parses the digraph text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_parse(text: *const c_char, out: *mut *mut OcGraph) -> OcStatus {
    guard(|| {
        let g = lib(parse_digraph(c_str(text, "text")?))?;
        put(out, OcGraph(g))
    })
}

/// Seeded random graph. `model` is one of the generator model names.
///
/// # Safety
/// `model` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_generate(
    model: *const c_char,
    n: usize,
    param: usize,
    seed: u64,
    out: *mut *mut OcGraph,
) -> OcStatus {
    guard(|| {
        let m: Model = lib(c_str(model, "model")?.parse())?;
        let g = lib(generate(&GenSpec::new(m, n, param, seed)))?;
        put(out, OcGraph(g))
    })
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_add_arc(g: *mut OcGraph, u: usize, v: usize) -> OcStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("graph"))?;
        lib(g.0.add_arc(u, v))?;
        Ok(OcStatus::Ok)
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_order(g: *const OcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_arc_count(g: *const OcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.arc_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_max_degree(g: *const OcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.max_degree())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_graph_free(g: *mut OcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Paley tournament QR_q.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_target_paley(q: u64, out: *mut *mut OcTarget) -> OcStatus {
    guard(|| put(out, OcTarget(TargetGraph::from_paley(lib(build_paley(q))?))))
}

/// Tr(QR_p), or Tr*(QR_p) when `star` is true.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_target_tromp(p: u64, star: bool, out: *mut *mut OcTarget) -> OcStatus {
    guard(|| {
        let t = lib(if star { tromp_star_target(p) } else { tromp_target(p) })?;
        put(out, OcTarget(t))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_target_t9(out: *mut *mut OcTarget) -> OcStatus {
    guard(|| put(out, OcTarget(t9_target())))
}

/// A target in the digraph text format, with optional metadata comments.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_target_parse(text: *const c_char, out: *mut *mut OcTarget) -> OcStatus {
    guard(|| {
        let t = lib(parse_target(c_str(text, "text")?))?;
        put(out, OcTarget(t))
    })
}

/// # Safety
/// `t` must be null or a live target handle.
#[no_mangle]
pub unsafe extern "C" fn oc_target_order(t: *const OcTarget) -> usize {
    t.as_ref().map_or(0, |t| t.0.order())
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_target_free(t: *mut OcTarget) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Exhaustive (or, for Paley targets, symmetry-pruned) check of P(n,k).
/// Returns `OC_STATUS_OK` when it holds and `OC_STATUS_FAILS` otherwise;
/// `min_out` receives the minimum successor count found.
///
/// # Safety
/// `t` must be a live target handle; `min_out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_check_pnk(
    t: *const OcTarget,
    n: usize,
    k: usize,
    pruned: bool,
    min_out: *mut usize,
) -> OcStatus {
    guard(|| {
        let t = borrow(t, "target")?;
        let mode = if pruned { PMode::Pruned } else { PMode::Exhaustive };
        let r = lib(check_pnk(&t.0, n, k, mode))?;
        if !min_out.is_null() {
            *min_out = r.achieved_min.unwrap_or(usize::MAX);
        }
        Ok(if r.holds { OcStatus::Ok } else { OcStatus::Fails })
    })
}

/// Check of C(n,k) over all n-cliques; `min_out` receives `SIZE_MAX` when
/// there is no n-clique.
///
/// # Safety
/// `t` must be a live target handle; `min_out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_check_cnk(t: *const OcTarget, n: usize, k: usize, min_out: *mut usize) -> OcStatus {
    guard(|| {
        let t = borrow(t, "target")?;
        let r = lib(check_cnk(&t.0, n, k))?;
        if !min_out.is_null() {
            *min_out = r.achieved_min.unwrap_or(usize::MAX);
        }
        Ok(if r.holds { OcStatus::Ok } else { OcStatus::Fails })
    })
}

/// Colors `g` and verifies the result. `delta` 0 means the graph's own
/// maximum degree. With `uniform` every component uses the target for Δ.
///
/// # Safety
/// `g` must be a live graph handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_color(g: *const OcGraph, delta: usize, uniform: bool, out: *mut *mut OcColoring) -> OcStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let r = lib(color(&g.0, (delta > 0).then_some(delta), uniform))?;
        put(out, OcColoring(r))
    })
}

/// Number of targets used; 1 when the coloring is uniform.
///
/// # Safety
/// `c` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn oc_coloring_part_count(c: *const OcColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.parts.len())
}

/// Order of the target of part `i`, or 0 when out of range.
///
/// # Safety
/// `c` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn oc_coloring_part_bound(c: *const OcColoring, i: usize) -> usize {
    c.as_ref().and_then(|c| c.0.parts.get(i)).map_or(0, |p| p.bound_claimed)
}

/// Writes the name of the target of part `i` like [`oc_last_error`] does.
///
/// # Safety
/// `c` must be null or a live coloring handle; `buf` null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn oc_coloring_part_target(c: *const OcColoring, i: usize, buf: *mut c_char, len: usize) -> usize {
    let Some(p) = c.as_ref().and_then(|c| c.0.parts.get(i)) else {
        return 0;
    };
    let name = p.target.name();
    if !buf.is_null() && len > 0 {
        let n = name.len().min(len - 1);
        ptr::copy_nonoverlapping(name.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    name.len()
}

/// Color and part index of vertex `v`.
///
/// # Safety
/// `c` must be a live coloring handle; the outputs null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oc_coloring_get(
    c: *const OcColoring,
    v: usize,
    color_out: *mut usize,
    part_out: *mut usize,
) -> OcStatus {
    guard(|| {
        let c = borrow(c, "coloring")?;
        let (Some(&col), Some(&part)) = (c.0.assignment.get(v), c.0.part_of.get(v)) else {
            return Err((OcStatus::InvalidArgument, format!("vertex {v} out of range")));
        };
        if !color_out.is_null() {
            *color_out = col;
        }
        if !part_out.is_null() {
            *part_out = part;
        }
        Ok(OcStatus::Ok)
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_coloring_free(c: *mut OcColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// `OC_STATUS_OK` when `colors` (one entry per vertex) is a homomorphism
/// into `t`, `OC_STATUS_FAILS` otherwise.
///
/// # Safety
/// Handles must be live; `colors` valid for `len` reads.
#[no_mangle]
pub unsafe extern "C" fn oc_verify(g: *const OcGraph, t: *const OcTarget, colors: *const usize, len: usize) -> OcStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let t = borrow(t, "target")?;
        if colors.is_null() {
            return Err(null("colors"));
        }
        let m = ColorMap::new(std::slice::from_raw_parts(colors, len).to_vec(), t.0.name());
        if m.assignment.iter().any(|&c| c >= t.0.order()) {
            return Err((OcStatus::InvalidArgument, "a color is outside the target".into()));
        }
        Ok(match lib(verify_homomorphism(&g.0, &t.0.graph, &m))? {
            HomCheck::Ok => OcStatus::Ok,
            HomCheck::Violation(a) => {
                set_error(format!("arc {a} is not preserved"));
                OcStatus::Fails
            }
        })
    })
}

/// Searches for a homomorphism `g → t` and writes it to `colors_out`
/// (`len` must equal the order of `g`). `budget` 0 means unlimited.
///
/// # Safety
/// Handles must be live; `colors_out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn oc_solve(
    g: *const OcGraph,
    t: *const OcTarget,
    budget: u64,
    colors_out: *mut usize,
    len: usize,
) -> OcStatus {
    guard(|| {
        let g = borrow(g, "graph")?;
        let t = borrow(t, "target")?;
        if colors_out.is_null() {
            return Err(null("colors_out"));
        }
        if len != g.0.order() {
            return Err((
                OcStatus::InvalidArgument,
                format!("buffer holds {len} colors for {} vertices", g.0.order()),
            ));
        }
        let cfg = SolverConfig {
            node_budget: (budget > 0).then_some(budget),
            ..SolverConfig::default()
        };
        match lib(solve(&g.0, &t.0.graph, &cfg))? {
            Outcome::Found(m) => {
                std::slice::from_raw_parts_mut(colors_out, len).copy_from_slice(&m.assignment);
                Ok(OcStatus::Ok)
            }
            Outcome::Unsat => Ok(OcStatus::Unsat),
            Outcome::BudgetExhausted { nodes } => Err((
                OcStatus::BudgetExhausted,
                format!("search budget exhausted after {nodes} nodes"),
            )),
        }
    })
}
