//! Exercises the C ABI from Rust: every call goes through the exported
//! `extern "C"` symbols with raw pointers, exactly as a C caller would.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sinklock_ffi::*;

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(sl_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { sl_string_free(ptr) };
    text
}

fn cstring(text: &str) -> CString {
    CString::new(text).unwrap()
}

fn path_graph(n: u32) -> *mut sl_graph {
    let edges: Vec<u32> = (0..n - 1).flat_map(|v| [v, v + 1]).collect();
    let mut out = ptr::null_mut();
    let status = unsafe {
        sl_graph_from_edges(n, edges.as_ptr(), edges.len() / 2, &mut out)
    };
    assert_eq!(status, sl_status::SL_OK, "{}", last_error());
    assert!(!out.is_null());
    out
}

#[test]
fn version_is_the_crate_version() {
    let version = unsafe { CStr::from_ptr(sl_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn graph_construction_and_getters() {
    let g = path_graph(5);
    unsafe {
        assert_eq!(sl_graph_vertex_count(g), 5);
        assert_eq!(sl_graph_edge_count(g), 4);

        // Two-call pattern: query, then fill.
        let mut needed = 0usize;
        assert_eq!(
            sl_graph_edges(g, ptr::null_mut(), 0, &mut needed),
            sl_status::SL_OK
        );
        assert_eq!(needed, 8);
        let mut buf = vec![0u32; needed];
        assert_eq!(
            sl_graph_edges(g, buf.as_mut_ptr(), buf.len(), &mut needed),
            sl_status::SL_OK
        );
        assert_eq!(buf, vec![0, 1, 1, 2, 2, 3, 3, 4]);

        // Short buffers are refused and report the requirement.
        let mut short = [0u32; 3];
        assert_eq!(
            sl_graph_edges(g, short.as_mut_ptr(), short.len(), &mut needed),
            sl_status::SL_ERR_BUFFER_TOO_SMALL
        );
        assert_eq!(needed, 8);
        assert!(last_error().contains("8"));

        sl_graph_free(g);
    }
}

#[test]
fn edge_list_text_roundtrip() {
    let text = cstring("3 2\n0 1\n1 2\n");
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { sl_graph_from_edge_list(text.as_ptr(), &mut g) },
        sl_status::SL_OK
    );
    unsafe {
        assert_eq!(sl_graph_vertex_count(g), 3);
        assert_eq!(sl_graph_edge_count(g), 2);
        sl_graph_free(g);
    }
}

#[test]
fn generate_from_json_spec() {
    let spec = cstring(r#"{"class":"complete","n":5,"seed":0}"#);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { sl_graph_generate(spec.as_ptr(), &mut g) },
        sl_status::SL_OK
    );
    unsafe {
        assert_eq!(sl_graph_vertex_count(g), 5);
        assert_eq!(sl_graph_edge_count(g), 10);
        sl_graph_free(g);
    }

    // The seed key may be omitted entirely.
    let spec = cstring(r#"{"class":"cycle","n":4}"#);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { sl_graph_generate(spec.as_ptr(), &mut g) },
        sl_status::SL_OK
    );
    unsafe { sl_graph_free(g) };
}

#[test]
fn orientation_matches_the_library_draw() {
    let g = path_graph(6);
    let mut o = ptr::null_mut();
    assert_eq!(
        unsafe { sl_orientation_sample(g, 11, 3, &mut o) },
        sl_status::SL_OK
    );

    let lib_graph =
        sinklock::graph::generate(&sinklock::graph::GraphClassSpec::new(
            sinklock::graph::GraphClass::Path,
            6,
            0,
        ))
        .unwrap();
    let expected = sinklock::orientation::random_orientation_in_round(&lib_graph, 11, 3);
    let expected_sinks = sinklock::orientation::sinks(&expected).vertices;

    unsafe {
        for i in 0..5usize {
            let (mut from, mut to) = (0u32, 0u32);
            assert_eq!(
                sl_orientation_arc(o, i, &mut from, &mut to),
                sl_status::SL_OK
            );
            assert_eq!((from, to), expected.arc(i), "edge {i}");
        }
        let mut count = 0usize;
        assert_eq!(
            sl_orientation_sinks(o, ptr::null_mut(), 0, &mut count),
            sl_status::SL_OK
        );
        let mut buf = vec![0u32; count];
        assert_eq!(
            sl_orientation_sinks(o, buf.as_mut_ptr(), buf.len(), &mut count),
            sl_status::SL_OK
        );
        assert_eq!(buf, expected_sinks);

        // Every path orientation is acyclic.
        assert_eq!(sl_orientation_is_acyclic(o), 1);
        assert_eq!(sl_orientation_is_acyclic(ptr::null()), -1);

        let mut from = 0u32;
        let mut to = 0u32;
        assert_eq!(
            sl_orientation_arc(o, 99, &mut from, &mut to),
            sl_status::SL_ERR_INVALID_ARGUMENT
        );

        sl_orientation_free(o);
        sl_graph_free(g);
    }
}

#[test]
fn exact_stats_and_identities() {
    let g = path_graph(5);
    let mut expected = 0f64;
    let mut prob = 0f64;
    assert_eq!(
        unsafe { sl_exact_stats(g, &mut expected, &mut prob) },
        sl_status::SL_OK
    );
    // Path closed form (n + 2) / 4.
    assert_eq!(expected, 1.75);
    assert_eq!(prob, 1.0);

    let mut degree_sum = 0f64;
    assert_eq!(
        unsafe { sl_degree_sum_expected(g, &mut degree_sum) },
        sl_status::SL_OK
    );
    assert_eq!(degree_sum, 1.75);

    let json = {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sl_exact_stats_json(g, &mut out) },
            sl_status::SL_OK
        );
        take_string(out)
    };
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["expected_sinks"], "7/4");
    assert_eq!(parsed["prob_positive"], "1/1");
    assert_eq!(parsed["orientations"], "16");

    unsafe { sl_graph_free(g) };
}

#[test]
fn enumeration_cap_is_reported() {
    // A complete graph on 8 vertices has 28 edges, above the cap.
    let spec = cstring(r#"{"class":"complete","n":8}"#);
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { sl_graph_generate(spec.as_ptr(), &mut g) },
        sl_status::SL_OK
    );
    let mut expected = 0f64;
    let mut prob = 0f64;
    assert_eq!(
        unsafe { sl_exact_stats(g, &mut expected, &mut prob) },
        sl_status::SL_ERR_CAP_EXCEEDED
    );
    assert!(last_error().contains("cap"), "{}", last_error());
    unsafe { sl_graph_free(g) };
}

#[test]
fn closed_forms_and_projections() {
    let spec = cstring(r#"{"class":"cycle","n":8}"#);
    let mut value = 0f64;
    let mut relation = sl_relation::SL_REL_APPROXIMATELY;
    assert_eq!(
        unsafe {
            sl_closed_form(
                spec.as_ptr(),
                sl_statistic::SL_STAT_EXPECTED_SINKS,
                &mut value,
                &mut relation,
            )
        },
        sl_status::SL_OK
    );
    assert_eq!(value, 2.0);
    assert_eq!(relation, sl_relation::SL_REL_EQUALS);

    let bounded = cstring(r#"{"class":"bounded_degree","k":3,"n":32}"#);
    assert_eq!(
        unsafe {
            sl_closed_form(
                bounded.as_ptr(),
                sl_statistic::SL_STAT_EXPECTED_SINKS,
                &mut value,
                &mut relation,
            )
        },
        sl_status::SL_OK
    );
    assert_eq!(value, 4.0);
    assert_eq!(relation, sl_relation::SL_REL_AT_LEAST);

    // The sampled gnp family has no probability form.
    let gnp = cstring(r#"{"class":"gnp","p":0.5,"n":10}"#);
    assert_eq!(
        unsafe {
            sl_closed_form(
                gnp.as_ptr(),
                sl_statistic::SL_STAT_PROB_POSITIVE,
                &mut value,
                &mut relation,
            )
        },
        sl_status::SL_ERR_NO_CLOSED_FORM
    );

    let mut rounds = 0f64;
    assert_eq!(
        unsafe { sl_expected_rounds(spec.as_ptr(), &mut rounds) },
        sl_status::SL_OK
    );
    assert!(rounds > 1.0 && rounds < 100.0, "{rounds}");
}

#[test]
fn monte_carlo_agrees_with_the_exact_value() {
    let g = path_graph(5);
    let mut point = 0f64;
    let mut se = 0f64;
    assert_eq!(
        unsafe {
            sl_monte_carlo(
                g,
                sl_statistic::SL_STAT_EXPECTED_SINKS,
                20_000,
                9,
                &mut point,
                &mut se,
            )
        },
        sl_status::SL_OK
    );
    assert!((point - 1.75).abs() < 4.0 * se, "point {point} se {se}");
    assert_eq!(
        unsafe {
            sl_monte_carlo(
                g,
                sl_statistic::SL_STAT_EXPECTED_SINKS,
                0,
                9,
                &mut point,
                &mut se,
            )
        },
        sl_status::SL_ERR_INVALID_ARGUMENT
    );
    unsafe { sl_graph_free(g) };
}

#[test]
fn simulate_and_verify_roundtrip() {
    let g = path_graph(8);
    let trace = {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sl_simulate_central(g, 21, 0, &mut out) },
            sl_status::SL_OK
        );
        take_string(out)
    };
    assert!(trace.lines().count() > 8, "unexpectedly small trace");

    let c_trace = cstring(&trace);
    let mut clean = -1i32;
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { sl_verify_trace(c_trace.as_ptr(), &mut clean, &mut report) },
        sl_status::SL_OK
    );
    assert_eq!(clean, 1);
    let report = take_string(report);
    assert!(report.contains("\"structural\":[]"), "{report}");

    // The report argument is optional.
    let mut clean_only = -1i32;
    assert_eq!(
        unsafe { sl_verify_trace(c_trace.as_ptr(), &mut clean_only, ptr::null_mut()) },
        sl_status::SL_OK
    );
    assert_eq!(clean_only, 1);

    // Redirecting a grant to a non-sink is caught, not an error.
    let first_grant = trace
        .lines()
        .find(|l| l.contains(r#""type":"granted""#))
        .expect("trace has grants");
    let sink: u32 = serde_json::from_str::<serde_json::Value>(first_grant).unwrap()["process"]
        .as_u64()
        .unwrap() as u32;
    let tampered = trace.replace(
        &format!(r#""type":"granted","round":1,"process":{sink}}}"#),
        &format!(r#""type":"granted","round":1,"process":{}}}"#, (sink + 1) % 8),
    );
    assert_ne!(tampered, trace, "tamper target missing from trace");
    let c_tampered = cstring(&tampered);
    assert_eq!(
        unsafe { sl_verify_trace(c_tampered.as_ptr(), &mut clean, ptr::null_mut()) },
        sl_status::SL_OK
    );
    assert_eq!(clean, 0);

    unsafe { sl_graph_free(g) };
}

#[test]
fn dist_simulation_verifies_clean() {
    let g = path_graph(6);
    let delay = cstring(r#"{"dist":"uniform","min":1,"max":7,"seed":4}"#);
    let trace = {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sl_simulate_dist(g, 33, 0, delay.as_ptr(), &mut out) },
            sl_status::SL_OK,
            "{}",
            last_error()
        );
        take_string(out)
    };
    assert!(trace.contains("\"coin\""), "no message events in trace");

    let c_trace = cstring(&trace);
    let mut clean = -1i32;
    assert_eq!(
        unsafe { sl_verify_trace(c_trace.as_ptr(), &mut clean, ptr::null_mut()) },
        sl_status::SL_OK
    );
    assert_eq!(clean, 1);

    // A null delay means instant delivery and must also verify.
    let zero_trace = {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { sl_simulate_dist(g, 33, 0, ptr::null(), &mut out) },
            sl_status::SL_OK
        );
        take_string(out)
    };
    let c_zero = cstring(&zero_trace);
    assert_eq!(
        unsafe { sl_verify_trace(c_zero.as_ptr(), &mut clean, ptr::null_mut()) },
        sl_status::SL_OK
    );
    assert_eq!(clean, 1);

    unsafe { sl_graph_free(g) };
}

#[test]
fn error_paths_set_messages() {
    unsafe {
        let mut g = ptr::null_mut();

        // Null required pointers.
        assert_eq!(
            sl_graph_from_edge_list(ptr::null(), &mut g),
            sl_status::SL_ERR_NULL_POINTER
        );
        assert!(last_error().contains("text"));
        let text = cstring("2 1\n0 1\n");
        assert_eq!(
            sl_graph_from_edge_list(text.as_ptr(), ptr::null_mut()),
            sl_status::SL_ERR_NULL_POINTER
        );

        // Malformed JSON and malformed graphs.
        let bad_json = cstring("{not json");
        assert_eq!(
            sl_graph_generate(bad_json.as_ptr(), &mut g),
            sl_status::SL_ERR_JSON
        );
        assert!(!last_error().is_empty());
        let loop_edge = [3u32, 3u32];
        assert_eq!(
            sl_graph_from_edges(5, loop_edge.as_ptr(), 1, &mut g),
            sl_status::SL_ERR_INVALID_ARGUMENT
        );

        // Invalid UTF-8 input.
        let bad_utf8 = [0xffu8, 0xfe, 0x00];
        assert_eq!(
            sl_graph_from_edge_list(bad_utf8.as_ptr() as *const c_char, &mut g),
            sl_status::SL_ERR_UTF8
        );

        // Garbage traces are a trace error, not a crash.
        let garbage = cstring("not a trace");
        let mut clean = 0i32;
        assert_eq!(
            sl_verify_trace(garbage.as_ptr(), &mut clean, ptr::null_mut()),
            sl_status::SL_ERR_TRACE
        );

        // Freeing null is a no-op.
        sl_graph_free(ptr::null_mut());
        sl_orientation_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
}

#[test]
fn cap_constant_matches_the_library() {
    assert_eq!(
        SL_ENUMERATION_EDGE_CAP,
        sinklock::orientation::ENUMERATION_EDGE_CAP
    );
}
