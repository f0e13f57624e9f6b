use std::ffi::{c_char, CStr, CString};
use std::ptr;

use chaoscope_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let text = CStr::from_ptr(s).to_str().unwrap().to_string();
    chaoscope_string_free(s);
    text
}

unsafe fn builtin(name: &str) -> *mut ChaoscopeMap {
    let mut map = ptr::null_mut();
    assert_eq!(
        chaoscope_map_builtin(c(name).as_ptr(), &mut map),
        ChaoscopeStatus::Ok
    );
    map
}

#[test]
fn eval_and_orbit() {
    unsafe {
        let tent = builtin("tent");
        let mut out = ptr::null_mut();
        assert_eq!(
            chaoscope_map_eval(tent, c("1/3").as_ptr(), &mut out),
            ChaoscopeStatus::Ok
        );
        assert_eq!(take(out), "2/3");
        assert_eq!(
            chaoscope_orbit_json(tent, c("1/5").as_ptr(), 3, &mut out),
            ChaoscopeStatus::Ok
        );
        assert_eq!(take(out), r#"["1/5","2/5","4/5","2/5"]"#);
        chaoscope_map_free(tent);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let tent = builtin("tent");
        let mut out = ptr::null_mut();
        assert_eq!(
            chaoscope_map_eval(tent, c("2").as_ptr(), &mut out),
            ChaoscopeStatus::Domain
        );
        let msg = CStr::from_ptr(chaoscope_last_error_message())
            .to_str()
            .unwrap();
        assert!(msg.contains("outside the domain"));
        assert_eq!(
            chaoscope_map_eval(tent, c("x").as_ptr(), &mut out),
            ChaoscopeStatus::Parse
        );
        assert_eq!(
            chaoscope_map_eval(tent, ptr::null(), &mut out),
            ChaoscopeStatus::NullArgument
        );
        assert_eq!(
            chaoscope_map_eval(ptr::null(), c("0").as_ptr(), &mut out),
            ChaoscopeStatus::NullArgument
        );
        let mut map = ptr::null_mut();
        assert_eq!(
            chaoscope_map_builtin(c("nope").as_ptr(), &mut map),
            ChaoscopeStatus::UnknownMap
        );
        assert!(map.is_null());
        assert_eq!(
            chaoscope_map_eval(tent, c("0").as_ptr(), &mut out),
            ChaoscopeStatus::Ok
        );
        take(out);
        assert!(chaoscope_last_error_message().is_null());
        chaoscope_map_free(tent);
    }
}

#[test]
fn json_round_trip_power_and_square_root() {
    unsafe {
        let tent = builtin("tent");
        let mut json = ptr::null_mut();
        assert_eq!(chaoscope_map_to_json(tent, &mut json), ChaoscopeStatus::Ok);
        let text = take(json);
        let mut again = ptr::null_mut();
        assert_eq!(
            chaoscope_map_from_json(c(&text).as_ptr(), &mut again),
            ChaoscopeStatus::Ok
        );

        let mut big = ptr::null_mut();
        assert_eq!(
            chaoscope_map_square_root(again, &mut big),
            ChaoscopeStatus::Ok
        );
        let mut square = ptr::null_mut();
        assert_eq!(
            chaoscope_map_power(big, 2, &mut square),
            ChaoscopeStatus::Ok
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            chaoscope_map_eval(square, c("1/4").as_ptr(), &mut out),
            ChaoscopeStatus::Ok
        );
        assert_eq!(take(out), "1/2");

        let mut pts = ptr::null_mut();
        assert_eq!(
            chaoscope_periodic_points_json(tent, 3, &mut pts),
            ChaoscopeStatus::Ok
        );
        let pts: Vec<String> = serde_json::from_str(&take(pts)).unwrap();
        assert_eq!(pts.len(), 8);

        for m in [tent, again, big, square] {
            chaoscope_map_free(m);
        }
        chaoscope_map_free(ptr::null_mut());
    }
}

#[test]
fn turbulence_search() {
    unsafe {
        let tent = builtin("tent");
        let mut out = ptr::null_mut();
        assert_eq!(
            chaoscope_find_turbulence(tent, &mut out),
            ChaoscopeStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(doc["quadruple"]["c"], "1/2");
        assert_eq!(doc["quadruple"]["b"], "1");

        let quiet = builtin("remark1");
        assert_eq!(
            chaoscope_find_turbulence(quiet, &mut out),
            ChaoscopeStatus::NotFound
        );
        chaoscope_map_free(tent);
        chaoscope_map_free(quiet);
    }
}

#[test]
fn sharkovsky_order() {
    assert!(chaoscope_sharkovsky_precedes(3, 5));
    assert!(chaoscope_sharkovsky_precedes(6, 4));
    assert!(!chaoscope_sharkovsky_precedes(1, 2));
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/chaoscope.h"))
            .unwrap();
    for name in [
        "typedef struct ChaoscopeMap ChaoscopeMap",
        "CHAOSCOPE_STATUS_OK = 0",
        "CHAOSCOPE_STATUS_NOT_FOUND",
        "chaoscope_map_builtin",
        "chaoscope_map_from_json",
        "chaoscope_map_free",
        "chaoscope_map_eval",
        "chaoscope_map_power",
        "chaoscope_map_square_root",
        "chaoscope_orbit_json",
        "chaoscope_find_turbulence",
        "chaoscope_sharkovsky_precedes",
        "chaoscope_string_free",
        "chaoscope_last_error_message",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
