use std::ffi::{CStr, CString};
use std::ptr;

use qtk_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qtk_string_free(s) };
    out
}

fn last_error() -> String {
    let p = qtk_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn field(p: u64, k: u32) -> *mut QtkField {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { qtk_field_new(p, k, &mut f) }, QtkStatus::Ok);
    f
}

#[test]
fn field_lifecycle_and_errors() {
    let f = field(3, 2);
    assert_eq!(unsafe { qtk_field_order(f) }, 9);
    unsafe { qtk_field_free(f) };

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { qtk_field_new(4, 1, &mut g) }, QtkStatus::NotPrime);
    assert!(g.is_null());
    assert!(last_error().contains('4'));
    assert_eq!(unsafe { qtk_field_new(2, 21, &mut g) }, QtkStatus::SizeBound);
    assert_eq!(unsafe { qtk_field_new(2, 1, ptr::null_mut()) }, QtkStatus::NullPointer);
    assert_eq!(unsafe { qtk_field_order(ptr::null()) }, 0);
}

#[test]
fn transform_example() {
    let f = field(3, 1);
    let (mut p, mut r, mut out) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(qtk_poly_parse(f, c("x^2+1").as_ptr(), &mut p), QtkStatus::Ok);
        assert_eq!(qtk_expr_parse(f, c("1,0,1 / 0,1").as_ptr(), &mut r), QtkStatus::Ok);
        let mut dropped = true;
        assert_eq!(qtk_transform(p, r, &mut out, &mut dropped), QtkStatus::Ok);
        assert!(!dropped);
        assert_eq!(qtk_poly_degree(out), 4);
        let mut s = ptr::null_mut();
        assert_eq!(qtk_poly_to_string(out, &mut s), QtkStatus::Ok);
        assert_eq!(take_string(s), "1,0,0,0,1");
        let mut irr = false;
        assert_eq!(qtk_is_irreducible(p, &mut irr), QtkStatus::Ok);
        assert!(irr);
        qtk_poly_free(out);
        qtk_poly_free(p);
        qtk_expr_free(r);
        qtk_field_free(f);
    }
}

#[test]
fn counts() {
    let mut v = 0u64;
    assert_eq!(unsafe { qtk_count_self_reciprocal(3, 2, &mut v) }, QtkStatus::Ok);
    assert_eq!(v, 2);
    assert_eq!(unsafe { qtk_count_self_reciprocal(6, 2, &mut v) }, QtkStatus::NotPrime);
    assert_eq!(unsafe { qtk_count_self_reciprocal(3, 200, &mut v) }, QtkStatus::SizeBound);

    let f = field(3, 1);
    assert_eq!(unsafe { qtk_count_sigma(f, 1, c("2").as_ptr(), &mut v) }, QtkStatus::Ok);
    assert_eq!(v, 2);
    assert_eq!(unsafe { qtk_count_sigma(f, 1, c("0").as_ptr(), &mut v) }, QtkStatus::InvalidArgument);

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qtk_expr_parse(f, c("1,0,1 / 0,1").as_ptr(), &mut r) }, QtkStatus::Ok);
    assert_eq!(unsafe { qtk_count_expr(r, 2, &mut v) }, QtkStatus::Ok);
    assert_eq!(v, 2);
    assert_eq!(unsafe { qtk_count_expr(r, 1, &mut v) }, QtkStatus::InvalidArgument);
    unsafe {
        qtk_expr_free(r);
        qtk_field_free(f);
    }
}

#[test]
fn parse_errors() {
    let f = field(5, 1);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qtk_expr_parse(f, c("1,0,1").as_ptr(), &mut r) }, QtkStatus::Parse);
    // g and h share the factor x
    assert_eq!(unsafe { qtk_expr_parse(f, c("0,0,1 / 0,1").as_ptr(), &mut r) }, QtkStatus::Degenerate);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { qtk_poly_parse(f, ptr::null(), &mut p) }, QtkStatus::NullPointer);
    assert!(last_error().contains("null"));
    unsafe { qtk_field_free(f) };
}

#[test]
fn json_documents() {
    let f = field(3, 1);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qtk_expr_parse(f, c("0,0,1 / 1").as_ptr(), &mut r) }, QtkStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qtk_reduce_json(r, &mut s) }, QtkStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&unsafe { take_string(s) }).unwrap();
    assert_eq!(doc["class"], "SquareClass");
    assert_eq!(doc["canonical"]["kind"], "XPlusSigmaOverX");
    unsafe { qtk_expr_free(r) };

    assert_eq!(unsafe { qtk_expr_parse(f, c("1,0,1 / 0,1").as_ptr(), &mut r) }, QtkStatus::Ok);
    assert_eq!(unsafe { qtk_hverify_json(r, 2, &mut s) }, QtkStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&unsafe { take_string(s) }).unwrap();
    assert_eq!(doc["h_degree"], 10);
    assert!(doc["mismatches"].as_array().unwrap().is_empty());
    unsafe {
        qtk_expr_free(r);
        qtk_field_free(f);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qtk.h")).unwrap();
    for name in [
        "qtk_last_error_message",
        "qtk_string_free",
        "qtk_field_new",
        "qtk_field_order",
        "qtk_field_free",
        "qtk_poly_parse",
        "qtk_poly_to_string",
        "qtk_poly_degree",
        "qtk_poly_free",
        "qtk_is_irreducible",
        "qtk_expr_parse",
        "qtk_expr_free",
        "qtk_transform",
        "qtk_count_self_reciprocal",
        "qtk_count_sigma",
        "qtk_count_expr",
        "qtk_reduce_json",
        "qtk_hverify_json",
        "typedef struct QtkField QtkField",
        "QTK_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from qtk.h");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::env::temp_dir().join(format!("qtk-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(&src, "#include \"qtk.h\"\nint main(void) { QtkField *f = 0; return qtk_field_new(3, 1, &f); }\n").unwrap();
    let status = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
