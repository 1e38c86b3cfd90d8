use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ellquad_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ellquad_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ellquad_last_error()).to_str().unwrap().to_string()
}

unsafe fn new_curve(text: &str, d: i64) -> *mut EllquadCurve {
    let mut c = ptr::null_mut();
    assert_eq!(ellquad_curve_new(cs(text).as_ptr(), d, &mut c), EllquadStatus::Ok);
    c
}

#[test]
fn curve_round_trip_and_invariants() {
    unsafe {
        let c = new_curve("[0,0,0,-1,0]", 1);
        let mut s = ptr::null_mut();
        assert_eq!(ellquad_curve_to_string(c, &mut s), EllquadStatus::Ok);
        assert_eq!(take(s), "[0,0,0,-1,0]");
        assert_eq!(ellquad_curve_discriminant(c, &mut s), EllquadStatus::Ok);
        assert_eq!(take(s), "64");
        assert_eq!(ellquad_curve_j_invariant(c, &mut s), EllquadStatus::Ok);
        assert_eq!(take(s), "1728");
        assert_eq!(ellquad_curve_field_d(c), 1);

        let mut t = ptr::null_mut();
        assert_eq!(ellquad_curve_twist(c, -1, &mut t), EllquadStatus::Ok);
        assert_eq!(ellquad_curve_to_string(t, &mut s), EllquadStatus::Ok);
        assert_eq!(take(s), "[0,0,0,-1,0]");
        ellquad_curve_free(t);
        ellquad_curve_free(c);
    }
}

#[test]
fn torsion_over_gaussian_field() {
    unsafe {
        let c = new_curve("[0,0,0,-1,0]", -1);
        let (mut n1, mut n2) = (0u64, 0u64);
        assert_eq!(ellquad_curve_torsion(c, &mut n1, &mut n2), EllquadStatus::Ok);
        assert_eq!((n1, n2), (2, 4));
        assert_eq!(ellquad_curve_field_d(c), -1);
        ellquad_curve_free(c);
    }
}

#[test]
fn heights_and_independence() {
    unsafe {
        let c = new_curve("[0,0,1,-1,0]", 1);
        let (mut h, mut err) = (0.0, 0.0);
        assert_eq!(
            ellquad_point_height(c, cs("(0;0)").as_ptr(), &mut h, &mut err),
            EllquadStatus::Ok
        );
        assert!((h - 0.0511114082399688).abs() < 1e-15);
        assert!(err < 1e-30);

        let a = cs("(0;0)");
        let b = cs("(1;0)");
        let pts = [a.as_ptr(), b.as_ptr()];
        let (mut v, mut reg) = (-1, 0.0);
        assert_eq!(
            ellquad_points_independent(c, pts.as_ptr(), 2, &mut v, &mut reg),
            EllquadStatus::Ok
        );
        assert_eq!(v, 0);
        assert_eq!(
            ellquad_points_independent(c, pts.as_ptr(), 1, &mut v, ptr::null_mut()),
            EllquadStatus::Ok
        );
        assert_eq!(v, 1);
        ellquad_curve_free(c);
    }
}

#[test]
fn mn_sum_matches_core() {
    use ellquad::curve::rational_curve;
    use ellquad::modp::ap_table;
    use ellquad::sieve::{mn_sum, Variant};
    let e = rational_curve([0, 0, 1, -1, 0]).unwrap();
    let want = mn_sum(&e, -2, &ap_table(&e, 300), Variant::S1).unwrap().sum;
    unsafe {
        let c = new_curve("[0,0,1,-1,0]", 1);
        let mut got = 0.0;
        assert_eq!(
            ellquad_mn_sum(c, -2, 300, EllquadVariant::S1, &mut got),
            EllquadStatus::Ok
        );
        assert_eq!(got, want);
        ellquad_curve_free(c);
    }
}

#[test]
fn errors_report_status_and_message() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(
            ellquad_curve_new(cs("[0,0,0,0,0]").as_ptr(), 1, &mut c),
            EllquadStatus::Domain
        );
        assert!(c.is_null());
        assert!(last_error().contains("singular"), "{}", last_error());
        assert_eq!(ellquad_curve_new(cs("[0,0").as_ptr(), 1, &mut c), EllquadStatus::Domain);
        assert_eq!(
            ellquad_curve_new(cs("[0,0,0,1,0]").as_ptr(), 4, &mut c),
            EllquadStatus::Domain
        );
        assert_eq!(ellquad_curve_new(ptr::null(), 1, &mut c), EllquadStatus::NullPointer);

        let e = new_curve("[0,0,1,-1,0]", 1);
        let (mut h, mut err) = (0.0, 0.0);
        assert_eq!(
            ellquad_point_height(e, cs("(1;1)").as_ptr(), &mut h, &mut err),
            EllquadStatus::NotOnCurve
        );
        assert_eq!(
            ellquad_point_height(e, cs("(1").as_ptr(), &mut h, &mut err),
            EllquadStatus::Parse
        );
        let mut s = ptr::null_mut();
        assert_eq!(ellquad_curve_to_string(ptr::null(), &mut s), EllquadStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(
            ellquad_point_height(e, bad.as_ptr() as *const c_char, &mut h, &mut err),
            EllquadStatus::InvalidUtf8
        );
        ellquad_curve_free(e);
        ellquad_curve_free(ptr::null_mut());
        ellquad_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_small_record_file() {
    let dir = std::env::temp_dir().join(format!("ellquad-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.rec");
    std::fs::write(
        &path,
        "id=a d=1 curve=[0,0,1,-1,0] torsion=1 rank=1 points=(0;0)\nid=b d=1 curve=[0,0,0,-1,0] torsion=4 rank=0\n",
    )
    .unwrap();
    unsafe {
        let (mut failed, mut report) = (99u32, ptr::null_mut());
        let p = cs(path.to_str().unwrap());
        assert_eq!(
            ellquad_verify_records(p.as_ptr(), &mut failed, &mut report),
            EllquadStatus::Ok
        );
        assert_eq!(failed, 1);
        assert!(take(report).contains("record a"));
    }
    std::fs::remove_dir_all(&dir).ok();
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include").join("ellquad.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "ellquad_curve_new",
        "ellquad_last_error",
        "ellquad_string_free",
        "ellquad_verify_records",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let lib = target_dir().join("libellquad_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = std::env::temp_dir().join(format!("ellquad-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests").join("smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("j=1728"), "{stdout}");
    assert!(stdout.contains("torsion=2x4"), "{stdout}");
    assert!(stdout.contains("status=4"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}
