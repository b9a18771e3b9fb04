//! C ABI for the sinklock library.
//!
//! Conventions, mirrored in the generated `include/sinklock.h`:
//!
//! - Handles (`sl_graph`, `sl_orientation`) are opaque; create them with the
//!   matching constructor and release them with the matching `_free`. Handles
//!   are immutable after construction, so sharing one across threads for
//!   reads is safe; create and free on any thread.
//! - Every fallible call returns an [`sl_status`]. `SL_OK` is zero; anything
//!   else leaves a message retrievable with [`sl_last_error_message`], which
//!   is thread-local and valid until the next failing call on that thread.
//! - Output parameters are written only when the call returns `SL_OK`
//!   (except the `written` count of array getters, see below).
//! - Strings returned through `char **` outputs are NUL-terminated, owned by
//!   the caller, and must be released with [`sl_string_free`].
//! - Array getters use a two-call pattern: pass a null buffer to query the
//!   required element count through `written`, then call again with a buffer
//!   of at least that many elements.
//! - Structured inputs (generator specs, delay laws) and outputs (traces,
//!   verification reports) cross the boundary as JSON in the same shape the
//!   `sinklock` CLI reads and writes, so artifacts are interchangeable
//!   between the two.
//!
//! Panics never unwind across the boundary; they are caught and surfaced as
//! `SL_ERR_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sinklock::analytics::{
    degree_sum_expected, expected_rounds_projection, expected_sinks_closed_form, format_rational,
    monte_carlo, prob_positive_closed_form, Relation, Statistic,
};
use sinklock::graph::{Graph, GraphClassSpec};
use sinklock::orientation::{is_acyclic, random_orientation_in_round, sinks, Orientation};
use sinklock::rgm::{default_max_rounds, simulate_central};
use sinklock::trace::{DelaySpec, EngineKind, Trace};
use sinklock::verifier::{verify_classical_trace, verify_orientation_trace};
use sinklock::{distsim, Error};

/// Edge-count cap on exact enumeration, shared with the library.
pub const SL_ENUMERATION_EDGE_CAP: usize = 20;

/// Result of every fallible call. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum sl_status {
    SL_OK = 0,
    /// A required pointer argument was null.
    SL_ERR_NULL_POINTER = 1,
    /// A string argument was not valid UTF-8.
    SL_ERR_UTF8 = 2,
    /// A parameter was out of range or structurally invalid.
    SL_ERR_INVALID_ARGUMENT = 3,
    /// The instance is larger than a documented enumeration cap.
    SL_ERR_CAP_EXCEEDED = 4,
    /// The requested statistic has no closed form for this family.
    SL_ERR_NO_CLOSED_FORM = 5,
    /// A numeric iteration failed to converge.
    SL_ERR_NUMERIC = 6,
    /// The trace is malformed or inconsistent with its own header.
    SL_ERR_TRACE = 7,
    /// The trace is well-formed but breaks an engine protocol rule.
    SL_ERR_PROTOCOL = 8,
    /// JSON input failed to parse or JSON output failed to serialize.
    SL_ERR_JSON = 9,
    /// An underlying I/O operation failed.
    SL_ERR_IO = 10,
    /// The caller's buffer is smaller than `written` requires.
    SL_ERR_BUFFER_TOO_SMALL = 11,
    /// An internal invariant failed; the library caught a panic.
    SL_ERR_INTERNAL = 12,
}

/// Statistic selector for closed forms and Monte Carlo estimation.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum sl_statistic {
    /// E[X], the expected number of sinks in one round.
    SL_STAT_EXPECTED_SINKS = 0,
    /// Pr[X > 0], the probability that a round grants anyone.
    SL_STAT_PROB_POSITIVE = 1,
}

/// How a closed-form value relates to the true statistic.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum sl_relation {
    /// The value is the statistic, exactly.
    SL_REL_EQUALS = 0,
    /// The statistic is at least this value.
    SL_REL_AT_LEAST = 1,
    /// Asymptotic approximation; no error bound is claimed.
    SL_REL_APPROXIMATELY = 2,
}

/// An immutable conflict graph.
#[allow(non_camel_case_types)]
pub struct sl_graph {
    inner: Graph,
}

/// One orientation of a graph's edges with its sinks precomputed.
#[allow(non_camel_case_types)]
pub struct sl_orientation {
    inner: Orientation,
    sinks: Vec<u32>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let owned = CString::new(message.replace('\0', "?")).expect("NUL-free message");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail_with(status: sl_status, message: &str) -> sl_status {
    debug_assert!(status != sl_status::SL_OK);
    set_last_error(message);
    status
}

fn fail(err: &Error) -> sl_status {
    let status = match err {
        Error::InvalidParameter(_) | Error::EdgeList(_) => sl_status::SL_ERR_INVALID_ARGUMENT,
        Error::EnumerationCap { .. } | Error::SizeCap { .. } => sl_status::SL_ERR_CAP_EXCEEDED,
        Error::NoClosedForm(_) => sl_status::SL_ERR_NO_CLOSED_FORM,
        Error::Stalled { .. } => sl_status::SL_ERR_NUMERIC,
        Error::Trace(_) => sl_status::SL_ERR_TRACE,
        Error::Protocol(_) => sl_status::SL_ERR_PROTOCOL,
        Error::Json(_) => sl_status::SL_ERR_JSON,
        Error::Io(_) => sl_status::SL_ERR_IO,
    };
    fail_with(status, &err.to_string())
}

/// Runs `body`, converting library errors and panics into statuses.
fn guarded(body: impl FnOnce() -> Result<sl_status, Error>) -> sl_status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(err)) => fail(&err),
        Err(_) => fail_with(sl_status::SL_ERR_INTERNAL, "internal panic"),
    }
}

/// Borrows a required UTF-8 C string argument.
///
/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, sl_status> {
    if ptr.is_null() {
        return Err(fail_with(
            sl_status::SL_ERR_NULL_POINTER,
            &format!("{what} is null"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail_with(sl_status::SL_ERR_UTF8, &format!("{what} is not UTF-8")))
}

fn required_ref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, sl_status> {
    // Safety: the caller contract of every exported function requires live
    // handles; we can only defend against null.
    unsafe { ptr.as_ref() }.ok_or_else(|| {
        fail_with(
            sl_status::SL_ERR_NULL_POINTER,
            &format!("{what} is null"),
        )
    })
}

fn required_out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, sl_status> {
    unsafe { ptr.as_mut() }.ok_or_else(|| {
        fail_with(
            sl_status::SL_ERR_NULL_POINTER,
            &format!("{what} is null"),
        )
    })
}

/// Fills `buf`/`written` from `src` using the two-call pattern.
unsafe fn fill_u32s(
    src: &[u32],
    buf: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> sl_status {
    let written = match required_out(written, "written") {
        Ok(w) => w,
        Err(status) => return status,
    };
    *written = src.len();
    if buf.is_null() {
        // Count query.
        return sl_status::SL_OK;
    }
    if capacity < src.len() {
        return fail_with(
            sl_status::SL_ERR_BUFFER_TOO_SMALL,
            &format!("need {} elements, buffer holds {capacity}", src.len()),
        );
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    sl_status::SL_OK
}

fn string_out(out: &mut *mut c_char, text: String) -> Result<sl_status, Error> {
    let owned = CString::new(text)
        .map_err(|_| Error::InvalidParameter("output contains a NUL byte".into()))?;
    *out = owned.into_raw();
    Ok(sl_status::SL_OK)
}

fn statistic_of(stat: sl_statistic) -> Statistic {
    match stat {
        sl_statistic::SL_STAT_EXPECTED_SINKS => Statistic::ExpectedSinks,
        sl_statistic::SL_STAT_PROB_POSITIVE => Statistic::ProbPositive,
    }
}

fn relation_of(relation: Relation) -> sl_relation {
    match relation {
        Relation::Equals => sl_relation::SL_REL_EQUALS,
        Relation::AtLeast => sl_relation::SL_REL_AT_LEAST,
        Relation::Approximately => sl_relation::SL_REL_APPROXIMATELY,
    }
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failure on this thread, or an empty string.
///
/// The pointer stays valid until the next failing call on the same thread;
/// copy it out before calling anything else. Never free it.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through a `char **` output.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph on vertices `0..n` from `edge_count` pairs laid out flat
/// as `u0, v0, u1, v1, ...`. Loops, duplicates, and out-of-range endpoints
/// are rejected.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable `uint32_t`s (it may be
/// null when `edge_count` is zero), and `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_from_edges(
    n: u32,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut sl_graph,
) -> sl_status {
    guarded(|| {
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        if edges.is_null() && edge_count > 0 {
            return Ok(fail_with(sl_status::SL_ERR_NULL_POINTER, "edges is null"));
        }
        let flat = if edge_count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs = flat.chunks_exact(2).map(|c| (c[0], c[1]));
        let graph = Graph::new(n as usize, pairs)?;
        *out = Box::into_raw(Box::new(sl_graph { inner: graph }));
        Ok(sl_status::SL_OK)
    })
}

/// Parses the text edge-list format: a `n m` header line followed by one
/// `u v` line per edge.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut sl_graph,
) -> sl_status {
    guarded(|| {
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let text = match required_str(text, "text") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let graph = Graph::from_edge_list(text)?;
        *out = Box::into_raw(Box::new(sl_graph { inner: graph }));
        Ok(sl_status::SL_OK)
    })
}

/// Generates a graph from a JSON spec such as
/// `{"class":"gnp","p":0.02,"n":200,"seed":7}`. `seed` defaults to zero;
/// only the sampled families consume it.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid
/// destination.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_generate(
    spec_json: *const c_char,
    out: *mut *mut sl_graph,
) -> sl_status {
    guarded(|| {
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let spec_json = match required_str(spec_json, "spec_json") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let spec: GraphClassSpec = serde_json::from_str(spec_json)?;
        let graph = sinklock::graph::generate(&spec)?;
        *out = Box::into_raw(Box::new(sl_graph { inner: graph }));
        Ok(sl_status::SL_OK)
    })
}

/// Releases a graph handle.
///
/// # Safety
/// `graph` must be null or a live handle from a constructor; it is dead
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_free(graph: *mut sl_graph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or zero for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_vertex_count(graph: *const sl_graph) -> u32 {
    graph.as_ref().map_or(0, |g| g.inner.vertex_count() as u32)
}

/// Number of edges, or zero for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_edge_count(graph: *const sl_graph) -> u32 {
    graph.as_ref().map_or(0, |g| g.inner.edge_count() as u32)
}

/// Copies the edges flat as `u0, v0, u1, v1, ...` in canonical order.
/// `capacity` counts `uint32_t` slots, so a full copy needs
/// `2 * sl_graph_edge_count()` of them; `written` receives the required
/// slot count. Pass a null `buf` to query the size.
///
/// # Safety
/// `graph` must be a live handle, `buf` null or `capacity` writable slots,
/// and `written` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_graph_edges(
    graph: *const sl_graph,
    buf: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let mut flat = Vec::with_capacity(2 * graph.inner.edge_count());
        for i in 0..graph.inner.edge_count() {
            let (u, v) = graph.inner.edge(i);
            flat.push(u);
            flat.push(v);
        }
        Ok(fill_u32s(&flat, buf, capacity, written))
    })
}

/// Draws the orientation that any engine running on `seed` would use in
/// `round` (rounds are 1-based; round 0 is the plain one-shot draw).
///
/// # Safety
/// `graph` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_orientation_sample(
    graph: *const sl_graph,
    seed: u64,
    round: u64,
    out: *mut *mut sl_orientation,
) -> sl_status {
    guarded(|| {
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let inner = random_orientation_in_round(&graph.inner, seed, round);
        let sinks = sinks(&inner).vertices;
        *out = Box::into_raw(Box::new(sl_orientation { inner, sinks }));
        Ok(sl_status::SL_OK)
    })
}

/// Releases an orientation handle.
///
/// # Safety
/// `orientation` must be null or a live handle; it is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_orientation_free(orientation: *mut sl_orientation) {
    if !orientation.is_null() {
        drop(Box::from_raw(orientation));
    }
}

/// The arc of edge `edge_index` as a `(from, to)` pair.
///
/// # Safety
/// `orientation` must be a live handle; `from` and `to` must be valid
/// destinations.
#[no_mangle]
pub unsafe extern "C" fn sl_orientation_arc(
    orientation: *const sl_orientation,
    edge_index: usize,
    from: *mut u32,
    to: *mut u32,
) -> sl_status {
    guarded(|| {
        let orientation = match required_ref(orientation, "orientation") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let from = match required_out(from, "from") {
            Ok(f) => f,
            Err(status) => return Ok(status),
        };
        let to = match required_out(to, "to") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        if edge_index >= orientation.inner.graph().edge_count() {
            return Ok(fail_with(
                sl_status::SL_ERR_INVALID_ARGUMENT,
                &format!("edge index {edge_index} out of range"),
            ));
        }
        let (f, t) = orientation.inner.arc(edge_index);
        *from = f;
        *to = t;
        Ok(sl_status::SL_OK)
    })
}

/// Copies the sinks (vertices with no outgoing arc) in ascending order,
/// using the same two-call pattern as `sl_graph_edges`; `capacity` and
/// `written` count vertices.
///
/// # Safety
/// `orientation` must be a live handle, `buf` null or `capacity` writable
/// slots, and `written` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_orientation_sinks(
    orientation: *const sl_orientation,
    buf: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> sl_status {
    guarded(|| {
        let orientation = match required_ref(orientation, "orientation") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        Ok(fill_u32s(&orientation.sinks, buf, capacity, written))
    })
}

/// One if the orientation has no directed cycle, zero if it has one,
/// minus one for a null handle.
///
/// # Safety
/// `orientation` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_orientation_is_acyclic(orientation: *const sl_orientation) -> i32 {
    match orientation.as_ref() {
        Some(o) => i32::from(is_acyclic(&o.inner)),
        None => -1,
    }
}

/// Exact E[X] and Pr[X > 0] by enumerating all `2^m` orientations, as
/// doubles. Fails with `SL_ERR_CAP_EXCEEDED` above
/// `SL_ENUMERATION_EDGE_CAP` edges; `sl_exact_stats_json` keeps full
/// precision.
///
/// # Safety
/// `graph` must be a live handle; `expected_sinks` and `prob_positive`
/// must be valid destinations.
#[no_mangle]
pub unsafe extern "C" fn sl_exact_stats(
    graph: *const sl_graph,
    expected_sinks: *mut f64,
    prob_positive: *mut f64,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let expected_sinks = match required_out(expected_sinks, "expected_sinks") {
            Ok(e) => e,
            Err(status) => return Ok(status),
        };
        let prob_positive = match required_out(prob_positive, "prob_positive") {
            Ok(p) => p,
            Err(status) => return Ok(status),
        };
        let stats = sinklock::orientation::enumerate_exact(&graph.inner)?;
        *expected_sinks = rational_f64(&stats.expected_sinks);
        *prob_positive = rational_f64(&stats.prob_positive);
        Ok(sl_status::SL_OK)
    })
}

fn rational_f64(r: &num::BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact enumeration results as JSON with full-precision rationals:
/// `{"expected_sinks":"7/4","prob_positive":"1/1","orientations":"32",
/// "expected_sinks_f64":1.75,"prob_positive_f64":1.0}`.
///
/// # Safety
/// `graph` must be a live handle and `out_json` a valid destination; free
/// the result with `sl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sl_exact_stats_json(
    graph: *const sl_graph,
    out_json: *mut *mut c_char,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let out_json = match required_out(out_json, "out_json") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let stats = sinklock::orientation::enumerate_exact(&graph.inner)?;
        let payload = serde_json::json!({
            "expected_sinks": format_rational(&stats.expected_sinks),
            "prob_positive": format_rational(&stats.prob_positive),
            "orientations": stats.orientation_count.to_string(),
            "expected_sinks_f64": rational_f64(&stats.expected_sinks),
            "prob_positive_f64": rational_f64(&stats.prob_positive),
        });
        string_out(out_json, serde_json::to_string(&payload)?)
    })
}

/// E[X] through the per-vertex degree identity, exact for every graph and
/// cheap even when enumeration is unaffordable.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn sl_degree_sum_expected(
    graph: *const sl_graph,
    out: *mut f64,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        *out = rational_f64(&degree_sum_expected(&graph.inner));
        Ok(sl_status::SL_OK)
    })
}

/// Closed-form value of `statistic` for the family named in `spec_json`
/// (same shape as `sl_graph_generate`; the seed is ignored). `relation`
/// reports whether the value is exact, a lower bound, or an approximation.
/// Families without a form fail with `SL_ERR_NO_CLOSED_FORM`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `value` and `relation`
/// must be valid destinations.
#[no_mangle]
pub unsafe extern "C" fn sl_closed_form(
    spec_json: *const c_char,
    statistic: sl_statistic,
    value: *mut f64,
    relation: *mut sl_relation,
) -> sl_status {
    guarded(|| {
        let spec_json = match required_str(spec_json, "spec_json") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let value = match required_out(value, "value") {
            Ok(v) => v,
            Err(status) => return Ok(status),
        };
        let relation = match required_out(relation, "relation") {
            Ok(r) => r,
            Err(status) => return Ok(status),
        };
        let spec: GraphClassSpec = serde_json::from_str(spec_json)?;
        let form = match statistic_of(statistic) {
            Statistic::ExpectedSinks => expected_sinks_closed_form(&spec.class, spec.n)?,
            Statistic::ProbPositive => prob_positive_closed_form(&spec.class, spec.n)?,
        };
        *value = form.value.to_f64();
        *relation = relation_of(form.relation);
        Ok(sl_status::SL_OK)
    })
}

/// Projected number of rounds to drain an instance of the family named in
/// `spec_json`, from the per-round survivor recurrence.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid
/// destination.
#[no_mangle]
pub unsafe extern "C" fn sl_expected_rounds(
    spec_json: *const c_char,
    out: *mut f64,
) -> sl_status {
    guarded(|| {
        let spec_json = match required_str(spec_json, "spec_json") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let out = match required_out(out, "out") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let spec: GraphClassSpec = serde_json::from_str(spec_json)?;
        *out = expected_rounds_projection(&spec.class, spec.n)?;
        Ok(sl_status::SL_OK)
    })
}

/// Monte Carlo estimate of `statistic` over fresh one-round orientations.
/// `point` receives the sample mean and `std_error` its standard error.
///
/// # Safety
/// `graph` must be a live handle; `point` and `std_error` must be valid
/// destinations.
#[no_mangle]
pub unsafe extern "C" fn sl_monte_carlo(
    graph: *const sl_graph,
    statistic: sl_statistic,
    trials: u64,
    seed: u64,
    point: *mut f64,
    std_error: *mut f64,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let point = match required_out(point, "point") {
            Ok(p) => p,
            Err(status) => return Ok(status),
        };
        let std_error = match required_out(std_error, "std_error") {
            Ok(s) => s,
            Err(status) => return Ok(status),
        };
        let estimate = monte_carlo(&graph.inner, statistic_of(statistic), trials, seed)?;
        *point = estimate.point;
        *std_error = estimate.std_error;
        Ok(sl_status::SL_OK)
    })
}

/// Runs the centralized engine and returns the full run as JSONL (header
/// line, then one event per line). `max_rounds` of zero means the default
/// budget of ten rounds per vertex.
///
/// # Safety
/// `graph` must be a live handle and `out_trace` a valid destination; free
/// the result with `sl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sl_simulate_central(
    graph: *const sl_graph,
    seed: u64,
    max_rounds: u64,
    out_trace: *mut *mut c_char,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let out_trace = match required_out(out_trace, "out_trace") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let budget = if max_rounds == 0 {
            default_max_rounds(graph.inner.vertex_count())
        } else {
            max_rounds
        };
        let run = simulate_central(&graph.inner, seed, budget, None);
        string_out(out_trace, run.trace.to_jsonl()?)
    })
}

/// Runs the message-passing engine under the delay law in `delay_json`
/// (for example `{"dist":"uniform","min":1,"max":9,"seed":3}`; null means
/// instant delivery) and returns the run as JSONL, message events
/// included. `max_rounds` of zero means the default budget.
///
/// # Safety
/// `graph` must be a live handle, `delay_json` null or a NUL-terminated
/// string, and `out_trace` a valid destination; free the result with
/// `sl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sl_simulate_dist(
    graph: *const sl_graph,
    seed: u64,
    max_rounds: u64,
    delay_json: *const c_char,
    out_trace: *mut *mut c_char,
) -> sl_status {
    guarded(|| {
        let graph = match required_ref(graph, "graph") {
            Ok(g) => g,
            Err(status) => return Ok(status),
        };
        let out_trace = match required_out(out_trace, "out_trace") {
            Ok(o) => o,
            Err(status) => return Ok(status),
        };
        let delay = if delay_json.is_null() {
            DelaySpec::zero()
        } else {
            match required_str(delay_json, "delay_json") {
                Ok(t) => serde_json::from_str(t)?,
                Err(status) => return Ok(status),
            }
        };
        let budget = if max_rounds == 0 {
            default_max_rounds(graph.inner.vertex_count())
        } else {
            max_rounds
        };
        let run = distsim::simulate_dist(&graph.inner, seed, budget, &delay, None)?;
        string_out(out_trace, run.trace.to_jsonl()?)
    })
}

/// Verifies a JSONL trace from any engine. `clean` receives one when every
/// check passes and zero otherwise; `report_json` (optional, may be null)
/// receives the engine-specific report. Only traces too malformed to check
/// at all fail with a non-`SL_OK` status.
///
/// # Safety
/// `trace_jsonl` must be a NUL-terminated string; `clean` must be a valid
/// destination; `report_json` must be null or a valid destination, and any
/// string written through it must be freed with `sl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sl_verify_trace(
    trace_jsonl: *const c_char,
    clean: *mut i32,
    report_json: *mut *mut c_char,
) -> sl_status {
    guarded(|| {
        let trace_jsonl = match required_str(trace_jsonl, "trace_jsonl") {
            Ok(t) => t,
            Err(status) => return Ok(status),
        };
        let clean = match required_out(clean, "clean") {
            Ok(c) => c,
            Err(status) => return Ok(status),
        };
        let trace = Trace::from_jsonl(trace_jsonl)?;
        let (is_clean, report) = match trace.header.engine {
            EngineKind::Central | EngineKind::Dist => {
                let report = verify_orientation_trace(&trace)?;
                (report.is_clean(), serde_json::to_string(&report)?)
            }
            EngineKind::Classical => {
                let report = verify_classical_trace(&trace)?;
                (report.is_clean(), serde_json::to_string(&report)?)
            }
        };
        *clean = i32::from(is_clean);
        if let Some(out) = report_json.as_mut() {
            return string_out(out, report);
        }
        Ok(sl_status::SL_OK)
    })
}
