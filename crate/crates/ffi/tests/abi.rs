use std::ffi::CStr;
use std::ptr;

use entpot_ffi::*;

fn horodecki(p: f64) -> *mut EntpotState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { entpot_horodecki(p, &mut s) }, ENTPOT_OK);
    assert!(!s.is_null());
    s
}

#[test]
fn horodecki_measures_through_the_abi() {
    let s = horodecki(0.5);
    let (mut n, mut c, mut e) = (f64::NAN, f64::NAN, f64::NAN);
    unsafe {
        assert_eq!(entpot_negativity(s, &mut n), ENTPOT_OK);
        assert_eq!(entpot_concurrence(s, &mut c), ENTPOT_OK);
        assert_eq!(entpot_ree(s, 0.0, &mut e), ENTPOT_OK);
        entpot_state_free(s);
    }
    // N = √(p² + (1−p)²) − (1−p), C = p
    let n_ref = (0.25f64 + 0.25).sqrt() - 0.5;
    assert!((n - n_ref).abs() < 1e-12, "{n}");
    assert!((c - 0.5).abs() < 1e-12);
    // E_R = (p−2)log₂(1−p/2) + (1−p)log₂(1−p)
    let e_ref = (0.5f64 - 2.0) * (0.75f64).log2() + 0.5 * 0.5f64.log2();
    assert!((e - e_ref).abs() < 1e-8, "{e} vs {e_ref}");
}

#[test]
fn matrix_round_trip_and_validation() {
    let s = horodecki(0.3);
    let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
    assert_eq!(
        unsafe { entpot_state_matrix(s, re.as_mut_ptr(), im.as_mut_ptr()) },
        ENTPOT_OK
    );
    assert!((re[0] - 0.7).abs() < 1e-15);
    // ψ⁻ = (|10⟩ − |01⟩)/√2 puts −p/2 on the |01⟩⟨10| coherence
    assert!((re[6] + 0.15).abs() < 1e-15);
    let mut copy = ptr::null_mut();
    assert_eq!(
        unsafe { entpot_state_from_matrix(re.as_ptr(), im.as_ptr(), &mut copy) },
        ENTPOT_OK
    );
    let mut bad = re;
    bad[0] += 0.5;
    let mut rejected = ptr::null_mut();
    assert_eq!(
        unsafe { entpot_state_from_matrix(bad.as_ptr(), im.as_ptr(), &mut rejected) },
        ENTPOT_ERR_NOT_A_STATE
    );
    assert!(rejected.is_null(), "out-pointer untouched on failure");
    unsafe {
        entpot_state_free(s);
        entpot_state_free(copy);
    }
}

#[test]
fn errors_are_codes_not_crashes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(entpot_horodecki(1.5, &mut s), ENTPOT_ERR_DOMAIN);
        assert_eq!(entpot_horodecki(0.5, ptr::null_mut()), ENTPOT_ERR_NULL);
        assert_eq!(entpot_bs_output(0.5, 0.6, 0.0, 90.0, &mut s), ENTPOT_ERR_DOMAIN);
        assert_eq!(entpot_bell_diagonal(ptr::null(), &mut s), ENTPOT_ERR_NULL);
        let mut v = 0.0;
        assert_eq!(entpot_negativity(ptr::null(), &mut v), ENTPOT_ERR_NULL);
        assert_eq!(entpot_apply_phase_damping(ptr::null_mut(), 0.1, 0.1), ENTPOT_ERR_NULL);
        entpot_state_free(ptr::null_mut());
    }
    assert!(s.is_null());
    for code in 0..=7 {
        let msg = unsafe { CStr::from_ptr(entpot_status_message(code)) };
        assert!(!msg.to_bytes().is_empty());
    }
}

#[test]
fn damping_in_place_matches_closed_forms() {
    // ρ_GH(1, ½) is the singlet; PDC scales the coherence by √((1−κ₁)(1−κ₂))
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(entpot_generalized_horodecki(1.0, 0.5, &mut s), ENTPOT_OK);
        assert_eq!(entpot_apply_phase_damping(s, 0.36, 0.0), ENTPOT_OK);
        let mut c = 0.0;
        assert_eq!(entpot_concurrence(s, &mut c), ENTPOT_OK);
        assert!((c - 0.8).abs() < 1e-12, "{c}");
        // full amplitude damping sends everything to the vacuum
        assert_eq!(entpot_apply_amplitude_damping(s, 1.0, 1.0), ENTPOT_OK);
        let mut n = 1.0;
        assert_eq!(entpot_negativity(s, &mut n), ENTPOT_OK);
        assert!(n.abs() < 1e-15);
        assert_eq!(entpot_apply_amplitude_damping(s, 1.2, 0.0), ENTPOT_ERR_DOMAIN);
        entpot_state_free(s);
    }
}

#[test]
fn potentials_of_pure_inputs() {
    // pure σ(p, √(p(1−p))) gives NP = CP = p
    let mut out = EntpotPotentials::default();
    let p = 0.4f64;
    let x = (p * (1.0 - p)).sqrt();
    assert_eq!(
        unsafe { entpot_potentials(p, x, 0.0, 90.0, 0.0, &mut out) },
        ENTPOT_OK
    );
    assert_eq!(out.converged, 1);
    assert!((out.np - p).abs() < 1e-10 && (out.cp - p).abs() < 1e-10);
    // REE of a pure state is its entanglement entropy
    let lam = (1.0 + (1.0 - p * p).sqrt()) / 2.0;
    let h = -lam * lam.log2() - (1.0 - lam) * (1.0 - lam).log2();
    assert!((out.reep - h).abs() < 1e-8);
}

#[test]
fn tunable_splitter_and_bell_constructors() {
    let mut s = ptr::null_mut();
    let mut c = 0.0;
    unsafe {
        // Fock input on a splitter with T = cos²(θ/2): C = 2√(TR) = sin θ
        assert_eq!(entpot_bs_output(1.0, 0.0, 0.0, 60.0, &mut s), ENTPOT_OK);
        assert_eq!(entpot_concurrence(s, &mut c), ENTPOT_OK);
        entpot_state_free(s);
    }
    assert!((c - 60f64.to_radians().sin()).abs() < 1e-12, "{c}");
    let w = [0.7, 0.1, 0.1, 0.1];
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(entpot_bell_diagonal(w.as_ptr(), &mut b), ENTPOT_OK);
        assert_eq!(entpot_concurrence(b, &mut c), ENTPOT_OK);
        entpot_state_free(b);
    }
    // C = 2λ_max − 1
    assert!((c - 0.4).abs() < 1e-12);
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(entpot_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/entpot.h");
    for sym in [
        "typedef struct EntpotState EntpotState",
        "entpot_bs_output",
        "entpot_horodecki",
        "entpot_generalized_horodecki",
        "entpot_werner",
        "entpot_bell_diagonal",
        "entpot_state_from_matrix",
        "entpot_state_matrix",
        "entpot_apply_phase_damping",
        "entpot_apply_amplitude_damping",
        "entpot_negativity",
        "entpot_concurrence",
        "entpot_ree",
        "entpot_potentials",
        "entpot_special_points",
        "entpot_state_free",
        "entpot_status_message",
        "entpot_version",
        "#define ENTPOT_ERR_NOT_CONVERGED 4",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
