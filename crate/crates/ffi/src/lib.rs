//! C ABI for `crsparse`.
//!
//! Every entry point returns a [`CrsStatus`]; results go through out-pointers.
//! On failure a human-readable message is available from
//! [`crs_last_error_message`] on the calling thread. Graphs and sketches are
//! opaque handles owned by the caller and released with their `_free`
//! functions. Panics never cross the boundary; they surface as
//! [`CrsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use crsparse::{
    additive_error, condition_number_laplacian, effective_resistances, gen_barbell, gen_random,
    r_min_frobenius, r_min_prop2, r_min_spectral, read_graph, sparsify, write_graph, Error,
    IsotropicMetric, Method, SparsifyOutput, WeightedGraph,
};

/// Result code of every `crs_*` function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Disconnected = 5,
    NotPsd = 6,
    Degenerate = 7,
    AssumptionViolated = 8,
    Shape = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Edge sampling scheme.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrsMethod {
    /// Probabilities proportional to edge weight.
    Cr = 0,
    /// Probabilities proportional to weight times effective resistance.
    Er = 1,
}

/// Opaque weighted undirected graph.
pub struct CrsGraph {
    inner: WeightedGraph,
}

/// Opaque result of a sparsification run.
pub struct CrsSketch {
    inner: SparsifyOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CrsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => CrsStatus::Parse,
            Error::Io(_) => CrsStatus::Io,
            Error::DisconnectedGraph { .. } => CrsStatus::Disconnected,
            Error::NotPsd { .. } => CrsStatus::NotPsd,
            Error::DegenerateLaplacian
            | Error::DegenerateDistribution
            | Error::NullQuadraticForm
            | Error::NoEdges => CrsStatus::Degenerate,
            Error::AssumptionViolated(_) => CrsStatus::AssumptionViolated,
            Error::Shape(_) | Error::InvalidBoundary { .. } => CrsStatus::Shape,
            Error::InvalidMatrix | Error::InvalidParameter(_) | Error::Validation(_) => {
                CrsStatus::InvalidArgument
            }
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CrsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CrsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            CrsStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn graph_ref<'a>(g: *const CrsGraph) -> Result<&'a WeightedGraph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn path_arg(path: *const c_char) -> Result<String, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Failure(CrsStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < values.len() {
        return Err(Failure(
            CrsStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

fn boxed_graph(g: WeightedGraph) -> *mut CrsGraph {
    Box::into_raw(Box::new(CrsGraph { inner: g }))
}

/// Message describing the most recent failure on this thread, or null if
/// none. The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn crs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn crs_status_string(status: CrsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CrsStatus::Ok => c"ok",
        CrsStatus::NullPointer => c"null pointer argument",
        CrsStatus::InvalidArgument => c"invalid argument",
        CrsStatus::Parse => c"parse error",
        CrsStatus::Io => c"i/o error",
        CrsStatus::Disconnected => c"graph is disconnected",
        CrsStatus::NotPsd => c"matrix is not positive semidefinite",
        CrsStatus::Degenerate => c"degenerate input",
        CrsStatus::AssumptionViolated => c"assumption violated",
        CrsStatus::Shape => c"shape mismatch",
        CrsStatus::BufferTooSmall => c"buffer too small",
        CrsStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Builds a graph on `n` vertices from `m` edges given as parallel arrays.
/// Duplicate edges are merged by summing weights.
///
/// # Safety
/// `us`, `vs`, `ws` must each point to `m` readable elements (or may be null
/// when `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_new(
    n: usize,
    us: *const usize,
    vs: *const usize,
    ws: *const f64,
    m: usize,
    out: *mut *mut CrsGraph,
) -> CrsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let edges: Vec<(usize, usize, f64)> = if m == 0 {
            Vec::new()
        } else {
            if us.is_null() || vs.is_null() || ws.is_null() {
                return Err(null("edge array"));
            }
            let (us, vs, ws) = (
                std::slice::from_raw_parts(us, m),
                std::slice::from_raw_parts(vs, m),
                std::slice::from_raw_parts(ws, m),
            );
            (0..m).map(|k| (us[k], vs[k], ws[k])).collect()
        };
        let g = WeightedGraph::new(n, edges)?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_read(path: *const c_char, out: *mut *mut CrsGraph) -> CrsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = read_graph(path_arg(path)?)?.graph;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Writes an edge-list file atomically.
///
/// # Safety
/// `g` must be a live graph handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_write(g: *const CrsGraph, path: *const c_char) -> CrsStatus {
    guard(|| Ok(write_graph(graph_ref(g)?, path_arg(path)?)?))
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_free(g: *mut CrsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_num_vertices(g: *const CrsGraph, out: *mut usize) -> CrsStatus {
    guard(|| write_out(out, graph_ref(g)?.n(), "out"))
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_num_edges(g: *const CrsGraph, out: *mut usize) -> CrsStatus {
    guard(|| write_out(out, graph_ref(g)?.m(), "out"))
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_total_weight(g: *const CrsGraph, out: *mut f64) -> CrsStatus {
    guard(|| write_out(out, graph_ref(g)?.total_weight(), "out"))
}

/// Edge `index` in canonical order (`u < v`, sorted).
///
/// # Safety
/// `g` must be a live graph handle; `u`, `v`, `w` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_edge(
    g: *const CrsGraph,
    index: usize,
    u: *mut usize,
    v: *mut usize,
    w: *mut f64,
) -> CrsStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let e = g.edges().get(index).ok_or_else(|| {
            Failure(
                CrsStatus::InvalidArgument,
                format!("edge index {index} out of range 0..{}", g.m()),
            )
        })?;
        write_out(u, e.u, "u")?;
        write_out(v, e.v, "v")?;
        write_out(w, e.w, "w")
    })
}

/// Row-major `n × n` Laplacian into `buf` (capacity `len` values).
///
/// # Safety
/// `g` must be a live graph handle; `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn crs_graph_laplacian(
    g: *const CrsGraph,
    buf: *mut f64,
    len: usize,
) -> CrsStatus {
    guard(|| {
        let l = graph_ref(g)?.laplacian();
        let n = l.n();
        let values: Vec<f64> = (0..n * n).map(|k| l.get(k / n, k % n)).collect();
        fill(buf, len, &values)
    })
}

/// Effective resistance of every edge, in canonical edge order.
///
/// # Safety
/// `g` must be a live graph handle; `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn crs_effective_resistances(
    g: *const CrsGraph,
    buf: *mut f64,
    len: usize,
) -> CrsStatus {
    guard(|| {
        let table = effective_resistances(graph_ref(g)?)?;
        fill(buf, len, table.values())
    })
}

/// `λ_max / λ₂` of the graph Laplacian.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_condition_number(g: *const CrsGraph, out: *mut f64) -> CrsStatus {
    guard(|| {
        write_out(
            out,
            condition_number_laplacian(&graph_ref(g)?.laplacian())?,
            "out",
        )
    })
}

/// Two `K_k` cliques joined by a path of `path_edges` edges.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_gen_barbell(
    k: usize,
    path_edges: usize,
    weight_max: u32,
    seed: u64,
    out: *mut *mut CrsGraph,
) -> CrsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = gen_barbell(k, path_edges, weight_max, seed)?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Erdős–Rényi graph with integer weights in `1..=weight_max`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_gen_random(
    n: usize,
    edge_prob: f64,
    weight_max: u32,
    seed: u64,
    out: *mut *mut CrsGraph,
) -> CrsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = gen_random(n, edge_prob, weight_max, seed)?;
        write_out(out, boxed_graph(g), "out")
    })
}

/// Samples `r` edges with replacement and builds the reweighted sketch.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_sparsify(
    g: *const CrsGraph,
    method: CrsMethod,
    r: usize,
    seed: u64,
    out: *mut *mut CrsSketch,
) -> CrsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let method = match method {
            CrsMethod::Cr => Method::Cr,
            CrsMethod::Er => Method::Er,
        };
        let s = sparsify(graph_ref(g)?, method, r, seed)?;
        write_out(out, Box::into_raw(Box::new(CrsSketch { inner: s })), "out")
    })
}

/// Copies the sketch graph into a new graph handle.
///
/// # Safety
/// `s` must be a live sketch handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_sketch_graph(
    s: *const CrsSketch,
    out: *mut *mut CrsGraph,
) -> CrsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sketch"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, boxed_graph(s.inner.sketch.clone()), "out")
    })
}

/// Fraction of source edges present in the sketch.
///
/// # Safety
/// `s` must be a live sketch handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_sketch_retained_fraction(
    s: *const CrsSketch,
    out: *mut f64,
) -> CrsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sketch"))?;
        write_out(out, s.inner.retained_fraction(), "out")
    })
}

/// Releases a sketch. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crs_sketch_free(s: *mut CrsSketch) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

unsafe fn same_order<'a>(
    g: *const CrsGraph,
    h: *const CrsGraph,
) -> Result<(&'a WeightedGraph, &'a WeightedGraph), Failure> {
    let (g, h) = (graph_ref(g)?, graph_ref(h)?);
    if g.n() != h.n() {
        return Err(Failure(
            CrsStatus::Shape,
            format!("graphs have {} and {} vertices", g.n(), h.n()),
        ));
    }
    Ok((g, h))
}

/// `‖L^{+1/2}(L − L̃)L^{+1/2}‖₂` for a graph `g` and its sketch `h`.
///
/// # Safety
/// `g`, `h` must be live graph handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_isotropic_error(
    g: *const CrsGraph,
    h: *const CrsGraph,
    out: *mut f64,
) -> CrsStatus {
    guard(|| {
        let (g, h) = same_order(g, h)?;
        let metric = IsotropicMetric::with_default_tol(&g.laplacian())?;
        write_out(out, metric.error(&h.laplacian())?, "out")
    })
}

/// `‖L − L̃‖₂` for a graph `g` and its sketch `h`.
///
/// # Safety
/// `g`, `h` must be live graph handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_additive_error(
    g: *const CrsGraph,
    h: *const CrsGraph,
    out: *mut f64,
) -> CrsStatus {
    guard(|| {
        let (g, h) = same_order(g, h)?;
        write_out(out, additive_error(&g.laplacian(), &h.laplacian())?, "out")
    })
}

/// `⌈1/(δ²ε²)⌉`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_r_min_frobenius(eps: f64, delta: f64, out: *mut u64) -> CrsStatus {
    guard(|| write_out(out, r_min_frobenius(eps, delta)?, "out"))
}

/// Trial count for `‖AAᵀ − Y‖₂ ≤ ε` given `frobsq = ‖A‖_F²` and `‖A‖₂ ≤ 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_r_min_spectral(
    frobsq: f64,
    eps: f64,
    delta: f64,
    out: *mut u64,
) -> CrsStatus {
    guard(|| write_out(out, r_min_spectral(frobsq, eps, delta)?, "out"))
}

/// Trial count for the multiplicative guarantee of the weight-proportional
/// sparsifier, given total weight and the largest singular value of the
/// boundary matrix.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crs_r_min_sparsifier(
    total_weight: f64,
    sigma_max: f64,
    eps: f64,
    delta: f64,
    out: *mut u64,
) -> CrsStatus {
    guard(|| {
        write_out(
            out,
            r_min_prop2(total_weight, sigma_max, eps, delta)?,
            "out",
        )
    })
}
