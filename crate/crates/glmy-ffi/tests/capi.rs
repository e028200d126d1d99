//! Exercises the C ABI through the exported symbols.

use std::ffi::{CStr, CString};
use std::ptr;

use glmy_ffi::*;

const EXAMPLE_2: &str = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(glmy_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr).to_string_lossy().into_owned() };
    unsafe { glmy_string_free(ptr) };
    s
}

#[test]
fn digraph_handles_report_graph_data() {
    let text = CString::new(EXAMPLE_2).unwrap();
    let mut graph: *mut GlmyDigraph = ptr::null_mut();
    let status = unsafe { glmy_digraph_parse(text.as_ptr(), &mut graph) };
    assert_eq!(status, GlmyStatus::Ok);
    unsafe {
        assert_eq!(glmy_digraph_vertex_count(graph), 6);
        assert_eq!(glmy_digraph_edge_count(graph), 8);
        assert_eq!(glmy_digraph_max_path_length(graph), 2);
        glmy_digraph_free(graph);
    }
}

#[test]
fn complex_handles_expose_betti_numbers() {
    let text = CString::new(EXAMPLE_2).unwrap();
    let mut graph: *mut GlmyDigraph = ptr::null_mut();
    unsafe {
        assert_eq!(glmy_digraph_parse(text.as_ptr(), &mut graph), GlmyStatus::Ok);
    }
    let mut complex: *mut GlmyComplex = ptr::null_mut();
    unsafe {
        assert_eq!(glmy_complex_build(graph, -1, &mut complex), GlmyStatus::Ok);
        assert_eq!(glmy_complex_top_degree(complex), 2);
        assert_eq!(glmy_complex_gamma_dim(complex, 1), 10);
        assert_eq!(glmy_complex_gamma_dim(complex, 9), 0);

        // size query first, then the actual read
        let mut needed = 0usize;
        assert_eq!(
            glmy_complex_betti(complex, ptr::null_mut(), 0, &mut needed),
            GlmyStatus::BufferTooSmall
        );
        assert_eq!(needed, 3);
        let mut buf = [0u64; 8];
        assert_eq!(
            glmy_complex_betti(complex, buf.as_mut_ptr(), buf.len(), &mut needed),
            GlmyStatus::Ok
        );
        assert_eq!(&buf[..needed], &[1, 1, 0]);

        glmy_complex_free(complex);
        glmy_digraph_free(graph);
    }
}

#[test]
fn analyze_json_round_trips_through_the_c_surface() {
    let text = CString::new(EXAMPLE_2).unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { glmy_analyze_json(text.as_ptr(), &mut out) };
    assert_eq!(status, GlmyStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["betti"], serde_json::json!([1, 1, 0]));
    assert_eq!(json["euler"], serde_json::json!(0));
    assert_eq!(json["max_path_length"], serde_json::json!(2));
}

#[test]
fn qsim_json_estimates_the_golden_degree() {
    let text = CString::new(EXAMPLE_2).unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { glmy_qsim_json(text.as_ptr(), 1, 10_000, 7, 0, &mut out) };
    assert_eq!(status, GlmyStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["betti_hat"], serde_json::json!(1));
    assert_eq!(json["gamma_dim"], serde_json::json!(10));
    assert_eq!(json["phase_bits"], serde_json::json!("exact"));
}

#[test]
fn oracle_check_agrees_over_the_c_surface() {
    let text = CString::new(EXAMPLE_2).unwrap();
    let mut agree = false;
    let status = unsafe { glmy_oracle_check(text.as_ptr(), &mut agree) };
    assert_eq!(status, GlmyStatus::Ok);
    assert!(agree);
}

#[test]
fn encode_path_produces_the_golden_bitstring() {
    let vertices = [0u32, 2, 4];
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status =
        unsafe { glmy_encode_path(6, 6, vertices.as_ptr(), vertices.len(), &mut out) };
    assert_eq!(status, GlmyStatus::Ok);
    assert_eq!(take_string(out), "001000010000011000");
}

#[test]
fn errors_surface_with_messages() {
    // cycle
    let text = CString::new("a->b\nb->a").unwrap();
    let mut graph: *mut GlmyDigraph = ptr::null_mut();
    let status = unsafe { glmy_digraph_parse(text.as_ptr(), &mut graph) };
    assert_eq!(status, GlmyStatus::InvalidInput);
    assert!(last_error().contains("cycle"), "got: {}", last_error());
    assert!(graph.is_null());

    // null argument
    let status = unsafe { glmy_digraph_parse(ptr::null(), &mut graph) };
    assert_eq!(status, GlmyStatus::NullArgument);

    // irregular path
    let vertices = [1u32, 1];
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status =
        unsafe { glmy_encode_path(4, 3, vertices.as_ptr(), vertices.len(), &mut out) };
    assert_eq!(status, GlmyStatus::InvalidInput);
    assert!(last_error().contains("irregular"));

    // out-of-range degree through the one-call runner
    let text = CString::new(EXAMPLE_2).unwrap();
    let status = unsafe { glmy_qsim_json(text.as_ptr(), 42, 10, 0, 0, &mut out) };
    assert_eq!(status, GlmyStatus::InvalidInput);
    assert!(last_error().contains("out of range"));
}

#[test]
fn version_and_free_are_null_safe() {
    let version = unsafe { CStr::from_ptr(glmy_version()) };
    assert!(!version.to_string_lossy().is_empty());
    unsafe {
        glmy_digraph_free(ptr::null_mut());
        glmy_complex_free(ptr::null_mut());
        glmy_string_free(ptr::null_mut());
    }
}
