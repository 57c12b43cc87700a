use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use flatgap_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        flatgap_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn corpus(name: &str) -> *mut FlatgapSurface {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { flatgap_surface_from_corpus(name.as_ptr(), &mut s) }, FlatgapStatus::Ok);
    s
}

#[test]
fn torus_round_trip_through_the_c_abi() {
    let s = corpus("torus");
    let mut genus = 0usize;
    let mut area = 0.0;
    unsafe {
        assert_eq!(flatgap_surface_genus(s, &mut genus), FlatgapStatus::Ok);
        assert_eq!(flatgap_surface_area(s, &mut area), FlatgapStatus::Ok);
    }
    assert_eq!((genus, area), (1, 1.0));

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { flatgap_enumerate(s, 2.5, 0, &mut h) }, FlatgapStatus::Ok);
    assert_eq!(unsafe { flatgap_holonomy_len(h) }, 16);
    let (mut x, mut y) = (0.0, 0.0);
    assert_eq!(unsafe { flatgap_holonomy_get(h, 0, &mut x, &mut y) }, FlatgapStatus::Ok);
    assert_eq!(x * x + y * y, 1.0);
    assert_eq!(unsafe { flatgap_holonomy_get(h, 16, &mut x, &mut y) }, FlatgapStatus::OutOfRange);
    let mut zeta = 0.0;
    assert_eq!(unsafe { flatgap_horizontal_gap(h, 2.5, &mut zeta) }, FlatgapStatus::Ok);
    assert!((zeta - 0.5f64.atan()).abs() < 1e-12);
    assert_eq!(unsafe { flatgap_horizontal_gap(h, 3.0, &mut zeta) }, FlatgapStatus::Validation);

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { flatgap_surface_apply_matrix(s, 2.0, 0.0, 0.0, 0.5, &mut t) }, FlatgapStatus::Ok);
    unsafe {
        assert_eq!(flatgap_surface_area(t, &mut area), FlatgapStatus::Ok);
        assert_eq!(area, 1.0);
        flatgap_surface_free(t);
        flatgap_holonomy_free(h);
        flatgap_surface_free(s);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new("nope").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { flatgap_surface_from_corpus(bad.as_ptr(), &mut s) }, FlatgapStatus::Validation);
    assert!(s.is_null());
    assert!(last_error().contains("nope"));

    assert_eq!(unsafe { flatgap_surface_from_corpus(ptr::null(), &mut s) }, FlatgapStatus::NullPointer);
    let junk = CString::new("{").unwrap();
    assert_eq!(unsafe { flatgap_surface_from_json(junk.as_ptr(), &mut s) }, FlatgapStatus::Validation);

    let torus = corpus("torus");
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { flatgap_enumerate(torus, 50.0, 10, &mut h) }, FlatgapStatus::Budget);
    assert!(last_error().contains("budget"));
    unsafe { flatgap_surface_free(torus) };

    let len = unsafe { flatgap_last_error(ptr::null_mut(), 0) };
    assert!(len > 0);
}

#[test]
fn rates_areas_and_bounds() {
    let expr = CString::new("sqrt(log(t+4)*loglog(t+4))").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { flatgap_rate_parse(expr.as_ptr(), &mut r) }, FlatgapStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { flatgap_rate_eval(r, 1.0, &mut v) }, FlatgapStatus::Ok);
    assert_eq!(v, 1.0);
    unsafe { flatgap_rate_free(r) };
    let dec = CString::new("5-log(t)").unwrap();
    assert_eq!(unsafe { flatgap_rate_parse(dec.as_ptr(), &mut r) }, FlatgapStatus::Validation);

    assert_eq!(unsafe { flatgap_trapezoid_area(0.0, 0.5, 2.0, &mut v) }, FlatgapStatus::Ok);
    assert_eq!(v, 0.125);

    let singles = [0.25, 0.25];
    let pairs = [0.25, 0.0, 0.0, 0.25];
    assert_eq!(unsafe { flatgap_chung_erdos_bound(2, singles.as_ptr(), pairs.as_ptr(), &mut v) }, FlatgapStatus::Ok);
    assert_eq!(v, 0.5);
    let broken = [0.25, 0.3, 0.3, 0.25];
    assert_eq!(
        unsafe { flatgap_chung_erdos_bound(2, singles.as_ptr(), broken.as_ptr(), &mut v) },
        FlatgapStatus::Validation
    );
}

#[test]
fn version_string_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(flatgap_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/flatgap.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
    }
    // syntax-check the header with a C compiler when one is available
    let probe = std::env::temp_dir().join(format!("flatgap_probe_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"flatgap.h\"\nint main(void) { return flatgap_version() == 0; }\n").unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-I").arg(dir.join("include")).arg(&probe).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler found; header syntax check skipped"),
    }
    let _ = std::fs::remove_file(probe);
}
