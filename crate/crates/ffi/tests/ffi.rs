use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use springer_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(springer_last_error()) }.to_str().unwrap().to_string()
}

fn new_quiver(spec: &str) -> *mut SpringerQuiver {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { springer_quiver_new(c(spec).as_ptr(), &mut q) }, SpringerStatus::Ok);
    q
}

#[test]
fn quiver_handles() {
    let q = new_quiver("cyclic:3");
    let mut n = 0;
    assert_eq!(unsafe { springer_quiver_num_vertices(q, &mut n) }, SpringerStatus::Ok);
    assert_eq!(n, 3);
    assert_eq!(last_error(), "");
    unsafe { springer_quiver_free(q) };

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { springer_quiver_new(c("E8").as_ptr(), &mut bad) }, SpringerStatus::Parse);
    assert!(bad.is_null());
    assert!(last_error().contains("E8"));
    assert_eq!(unsafe { springer_quiver_new(ptr::null(), &mut bad) }, SpringerStatus::NullPointer);
    assert_eq!(unsafe { springer_quiver_num_vertices(ptr::null(), &mut n) }, SpringerStatus::NullPointer);
}

#[test]
fn orbit_counts_and_hom() {
    let q = new_quiver("cyclic:1");
    let mut n = 0;
    assert_eq!(unsafe { springer_orbit_count(q, c("5").as_ptr(), &mut n) }, SpringerStatus::Ok);
    assert_eq!(n, 7);
    let mut h = 0;
    assert_eq!(unsafe { springer_hom_dim(q, 0, 3, 0, 2, &mut h) }, SpringerStatus::Ok);
    assert_eq!(h, 2);
    unsafe { springer_quiver_free(q) };

    let a2 = new_quiver("A2");
    assert_eq!(unsafe { springer_hom_dim(a2, 0, 2, 1, 1, &mut h) }, SpringerStatus::InvalidArgument);
    unsafe { springer_quiver_free(a2) };
}

#[test]
fn poincare_and_counts() {
    let q = new_quiver("cyclic:1");
    let (rep, comp) = (c("(0,2)+(0,1)"), c("1;1;1"));
    let mut len = 0;
    let status = unsafe { springer_poincare(q, rep.as_ptr(), comp.as_ptr(), ptr::null_mut(), 0, &mut len) };
    assert_eq!(status, SpringerStatus::BufferTooSmall);
    assert_eq!(len, 2);
    let mut coeffs = vec![0u64; len];
    let status = unsafe { springer_poincare(q, rep.as_ptr(), comp.as_ptr(), coeffs.as_mut_ptr(), len, &mut len) };
    assert_eq!(status, SpringerStatus::Ok);
    assert_eq!(coeffs, vec![1, 2]);
    for (p, want) in [(2, 5), (3, 7)] {
        let mut count = 0;
        let s = unsafe { springer_count_points(q, rep.as_ptr(), comp.as_ptr(), p, &mut count) };
        assert_eq!(s, SpringerStatus::Ok);
        assert_eq!(count, coeffs[0] + coeffs[1] * p);
        assert_eq!(count, want);
    }
    let mut count = 0;
    let s = unsafe { springer_count_points(q, rep.as_ptr(), comp.as_ptr(), 4, &mut count) };
    assert_eq!(s, SpringerStatus::InvalidArgument);
    assert!(last_error().contains("not a prime"));
    unsafe { springer_quiver_free(q) };
}

#[test]
fn complexes() {
    let doc = c(r#"{"schema":"complex/1","algebra":{"kind":"smash","n":2},
        "generators":[[0,0,0],[0,0,1],[0,1,1]],"differential":[[1,0,"1 + 2*s1"],[2,0,"x1"]]}"#);
    let mut cx = ptr::null_mut();
    assert_eq!(unsafe { springer_complex_from_json(doc.as_ptr(), &mut cx) }, SpringerStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { springer_complex_num_generators(cx, &mut n) }, SpringerStatus::Ok);
    assert_eq!(n, 3);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { springer_complex_minimize(cx, &mut m) }, SpringerStatus::Ok);
    assert_eq!(unsafe { springer_complex_num_generators(m, &mut n) }, SpringerStatus::Ok);
    assert_eq!(n, 1);
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { springer_complex_to_json(m, &mut json) }, SpringerStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(text.starts_with(r#"{"schema":"complex/1""#), "{text}");
    assert!(text.contains(r#""generators":[[0,1,1]]"#), "{text}");
    unsafe {
        springer_string_free(json);
        springer_complex_free(m);
        springer_complex_free(cx);
    }

    let not_square = c(r#"{"schema":"complex/1","algebra":{"kind":"smash","n":2},
        "generators":[[0,0,0],[0,0,1],[0,0,2]],"differential":[[1,0,"1"],[2,1,"1"]]}"#);
    let mut bad = ptr::null_mut();
    let s = unsafe { springer_complex_from_json(not_square.as_ptr(), &mut bad) };
    assert_eq!(s, SpringerStatus::InvalidComplex);
    assert!(bad.is_null());
    let s = unsafe { springer_complex_from_json(c("[1,2").as_ptr(), &mut bad) };
    assert_eq!(s, SpringerStatus::Parse);
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/springer.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["springer_quiver_new", "springer_complex_minimize", "springer_last_error"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let src = std::env::temp_dir().join("springer_header_check.c");
    std::fs::write(
        &src,
        "#include \"springer.h\"\nint main(void) { SpringerQuiver *q = 0; size_t n = 0;\n\
         if (springer_quiver_new(\"A2\", &q) != SPRINGER_STATUS_OK) return 1;\n\
         springer_quiver_num_vertices(q, &n); springer_quiver_free(q); return n == 2 ? 0 : 1; }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(dir.join("include"))
            .arg(&src)
            .status()
            .unwrap();
        assert!(status.success(), "{compiler} rejected the header");
    }
}
