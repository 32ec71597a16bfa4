use std::ffi::{CStr, CString};
use std::ptr;

use sheafrig_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = sr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const K3: &str = r#"{"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [0, 2]]}"#;

fn graph(json: &str) -> *mut SrGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sr_graph_from_json(c(json).as_ptr(), &mut g) }, SrStatus::Ok);
    g
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(sr_version()) };
    assert_eq!(v.to_str().unwrap(), sheafrig::VERSION);
}

#[test]
fn graph_round_trip_and_sparsity() {
    let g = graph(K3);
    let (mut nv, mut ne) = (0, 0);
    let (mut sparse, mut tight) = (false, false);
    unsafe {
        assert_eq!(sr_graph_counts(g, &mut nv, &mut ne), SrStatus::Ok);
        assert_eq!(sr_is_sparse(g, 2, 3, &mut sparse, &mut tight), SrStatus::Ok);
    }
    assert_eq!((nv, ne, sparse, tight), (3, 3, true, true));
    assert!(sr_last_error().is_null());

    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(sr_graph_to_json(g, &mut json), SrStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        sr_string_free(json);
        let again = graph(&text);
        assert_eq!(sr_is_sparse(again, 1, 1, &mut sparse, &mut tight), SrStatus::Ok);
        assert!(!sparse);
        sr_graph_free(again);
        sr_graph_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut g = ptr::null_mut();
    let bad = c(r#"{"vertices": [0], "edges": [[0, 9]]}"#);
    assert_eq!(unsafe { sr_graph_from_json(bad.as_ptr(), &mut g) }, SrStatus::InvalidInput);
    assert!(g.is_null());
    assert!(last_error().contains("unknown vertex"));

    assert_eq!(unsafe { sr_graph_from_json(ptr::null(), &mut g) }, SrStatus::NullPointer);
    let mut verdict = SrVerdict::default();
    assert_eq!(unsafe { sr_motion_analyze(ptr::null(), &mut verdict) }, SrStatus::NullPointer);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sr_generate_tight(1, 4, 0, &mut out) }, SrStatus::Precondition);
    unsafe {
        sr_graph_free(ptr::null_mut());
        sr_string_free(ptr::null_mut());
    }
}

#[test]
fn bar_joint_triangle_is_minimally_rigid() {
    let fw = c(r#"{"graph": {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["a", "c"]]},
                  "dim": 2, "positions": {"a": [0, 0], "b": [4, 0], "c": [1, 3]}}"#);
    let mut spec = ptr::null_mut();
    let mut v = SrVerdict::default();
    unsafe {
        assert_eq!(sr_bar_joint_from_json(fw.as_ptr(), &mut spec), SrStatus::Ok);
        assert_eq!(sr_motion_analyze(spec, &mut v), SrStatus::Ok);
        sr_motion_spec_free(spec);
    }
    assert_eq!((v.h0, v.h1, v.trivial_dim), (3, 0, 3));
    assert!(v.minimally_rigid);
}

#[test]
fn equal_lines_on_k3() {
    let json = c(r#"{"graph": {"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [0, 2]]},
                    "n": 3, "subspaces": [[[1, 0, 0]], [[1, 0, 0]], [[1, 0, 0]]]}"#);
    let mut spec = ptr::null_mut();
    let mut v = SrVerdict::default();
    unsafe {
        assert_eq!(sr_motion_spec_from_json(json.as_ptr(), &mut spec), SrStatus::Ok);
        assert_eq!(sr_motion_analyze(spec, &mut v), SrStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(sr_motion_spec_to_json(spec, &mut text), SrStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("\"n\":3"));
        sr_string_free(text);
        sr_motion_spec_free(spec);
    }
    assert_eq!(v.h0, 2);
}

#[test]
fn sampled_spec_and_main_theorem() {
    let g = graph(K3);
    let mut spec = ptr::null_mut();
    let mut v = SrVerdict::default();
    let (mut sparse, mut agrees) = (false, false);
    unsafe {
        assert_eq!(sr_motion_sample(g, 1, 3, 11, &mut spec), SrStatus::Ok);
        assert_eq!(sr_motion_analyze(spec, &mut v), SrStatus::Ok);
        assert_eq!(sr_main_theorem(g, 3, 2, 5, &mut sparse, &mut agrees), SrStatus::Ok);
        sr_motion_spec_free(spec);
        sr_graph_free(g);
    }
    assert_eq!((v.h0, v.h1), (3, 0));
    assert!(sparse && agrees);
}

#[test]
fn independent_associated_sheaf() {
    let g = graph(K3);
    let mut spec = ptr::null_mut();
    let (mut h0, mut h1) = (usize::MAX, usize::MAX);
    unsafe {
        assert_eq!(sr_build_independent_sheaf(g, 3, 2, &mut spec), SrStatus::Ok);
        assert!(!spec.is_null());
        assert_eq!(sr_associated_cohomology(spec, &mut h0, &mut h1), SrStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(sr_associated_to_json(spec, &mut text), SrStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(sr_associated_from_json(text, &mut copy), SrStatus::Ok);
        let (mut h0b, mut h1b) = (0, 0);
        assert_eq!(sr_associated_cohomology(copy, &mut h0b, &mut h1b), SrStatus::Ok);
        assert_eq!((h0b, h1b), (h0, h1));
        sr_string_free(text);
        sr_associated_free(copy);
        sr_associated_free(spec);
        sr_graph_free(g);
    }
    assert_eq!(h1, 0);

    // Four parallel edges break (2, 3)-sparsity.
    let fat = graph(r#"{"vertices": [0, 1], "edges": [[0, 1], [0, 1], [0, 1], [0, 1]]}"#);
    let mut none = ptr::null_mut();
    unsafe {
        assert_eq!(sr_build_independent_sheaf(fat, 3, 2, &mut none), SrStatus::Ok);
        sr_graph_free(fat);
    }
    assert!(none.is_null());
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sheafrig.h")).unwrap();
    for name in [
        "sr_version",
        "sr_last_error",
        "sr_string_free",
        "sr_graph_from_json",
        "sr_is_sparse",
        "sr_generate_tight",
        "sr_motion_analyze",
        "sr_main_theorem",
        "sr_associated_cohomology",
        "sr_build_independent_sheaf",
        "SR_STATUS_INTERNAL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/sheafrig.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    assert!(status.success());
}
