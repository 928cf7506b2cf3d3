use std::ffi::{CStr, CString};
use std::ptr;

use resmirror_ffi::*;

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/resmirror.h")).unwrap();
    for f in [
        "rm_last_error",
        "rm_string_free",
        "rm_geometry_new",
        "rm_geometry_free",
        "rm_two_point",
        "rm_series_generating",
        "rm_series_gw",
        "rm_mirror_map",
        "rm_series_coeff",
        "rm_series_json",
        "rm_series_text",
        "rm_series_free",
        "rm_vsc",
        "rm_j_coefficients",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(h.contains("typedef struct RmGeometry RmGeometry;"));
    assert!(h.contains("RM_STATUS_CACHE_CORRUPTION = 7"));
}

#[test]
fn kf0_series_through_the_abi() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(rm_geometry_new(CString::new("kf0").unwrap().as_ptr(), 0, 1, &mut g), RmStatus::Ok);
        let mut s = ptr::null_mut();
        let (z, w) = (CString::new("z").unwrap(), CString::new("w").unwrap());
        assert_eq!(rm_series_generating(g, z.as_ptr(), w.as_ptr(), 2, &mut s), RmStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(rm_series_coeff(s, 1, 1, &mut out), RmStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "-10");
        rm_string_free(out);
        rm_series_free(s);
        rm_geometry_free(g);
    }
}
