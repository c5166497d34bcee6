//! C ABI over the `entpot` library.
//!
//! Two-qubit states live behind an opaque `EntpotState` handle: constructors
//! allocate one, `entpot_state_free` releases it. Every other function returns
//! an `int32_t` status code (`ENTPOT_OK` on success) and writes results
//! through out-pointers, which are left untouched on failure. Panics never
//! cross the boundary; they surface as `ENTPOT_ERR_PANIC`.
//!
//! Matrices cross the boundary as two row-major `double[16]` arrays holding
//! the real and imaginary parts in the basis |00⟩, |01⟩, |10⟩, |11⟩.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use entpot::boundaries::special_points;
use entpot::channels::{amplitude_damping, phase_damping, AmplitudeDampingParams, PhaseDampingParams};
use entpot::linalg::{ComplexMatrix, C64};
use entpot::measures::{concurrence, negativity, ree_numerical_with, ReeOptions};
use entpot::potentials::{evaluate, GeneralizedPipeline};
use entpot::states::{
    bell_diagonal, generalized_horodecki, horodecki_state, single_qubit, werner,
    BeamSplitterConfig, BellDiagonalWeights, GeneralizedHorodeckiParams, TwoQubitState,
};
use entpot::Error;

pub const ENTPOT_OK: i32 = 0;
/// A required pointer argument was null.
pub const ENTPOT_ERR_NULL: i32 = 1;
/// A parameter lies outside its domain.
pub const ENTPOT_ERR_DOMAIN: i32 = 2;
/// A matrix is not a valid two-qubit density matrix.
pub const ENTPOT_ERR_NOT_A_STATE: i32 = 3;
/// The REE solver stopped before reaching the requested accuracy. The best
/// value found is still written.
pub const ENTPOT_ERR_NOT_CONVERGED: i32 = 4;
/// Any other numerical failure.
pub const ENTPOT_ERR_NUMERICAL: i32 = 5;
/// A Rust panic was caught at the boundary.
pub const ENTPOT_ERR_PANIC: i32 = 6;

/// Opaque two-qubit density matrix.
pub struct EntpotState {
    inner: TwoQubitState,
}

/// NP, CP and REEP of one single-qubit input.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EntpotPotentials {
    pub np: f64,
    pub cp: f64,
    pub reep: f64,
    /// 1 when the REE solve converged.
    pub converged: i32,
}

/// The three special points of the (E_R, N) plane.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EntpotSpecialPoints {
    pub n1: f64,
    pub e1: f64,
    pub n2: f64,
    pub e2: f64,
    pub n3: f64,
    pub e3: f64,
}

fn status_of(err: &Error) -> i32 {
    match err {
        Error::OutOfDomain(_) | Error::UnsupportedPair { .. } | Error::NotTracePreserving(_) => {
            ENTPOT_ERR_DOMAIN
        }
        Error::NotAState(_) | Error::NotHermitian(_) | Error::WrongDimension { .. } => {
            ENTPOT_ERR_NOT_A_STATE
        }
        Error::NotConverged { .. } => ENTPOT_ERR_NOT_CONVERGED,
        _ => ENTPOT_ERR_NUMERICAL,
    }
}

/// Runs `f` behind a panic guard and maps library errors to status codes.
fn guard<F: FnOnce() -> Result<i32, i32>>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) | Ok(Err(code)) => code,
        Err(_) => ENTPOT_ERR_PANIC,
    }
}

fn lib<T>(r: entpot::Result<T>) -> Result<T, i32> {
    r.map_err(|e| status_of(&e))
}

/// Boxes `state` into `*out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn emit_state(out: *mut *mut EntpotState, state: entpot::Result<TwoQubitState>) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(ENTPOT_ERR_NULL);
        }
        let inner = lib(state)?;
        *out = Box::into_raw(Box::new(EntpotState { inner }));
        Ok(ENTPOT_OK)
    })
}

unsafe fn state_ref<'a>(s: *const EntpotState) -> Result<&'a TwoQubitState, i32> {
    s.as_ref().map(|s| &s.inner).ok_or(ENTPOT_ERR_NULL)
}

/// Balanced (θ = 90°) or tunable beam-splitter output of `σ(p, x)` mixed with
/// the vacuum, `x = x_re + i·x_im`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_bs_output(
    p: f64,
    x_re: f64,
    x_im: f64,
    theta_deg: f64,
    out: *mut *mut EntpotState,
) -> i32 {
    let state = (|| {
        let sigma = single_qubit(p, C64::new(x_re, x_im))?;
        GeneralizedPipeline::with_bs(BeamSplitterConfig::from_degrees(theta_deg)?).output(&sigma)
    })();
    emit_state(out, state)
}

/// Horodecki state `p|ψ⁻⟩⟨ψ⁻| + (1−p)|00⟩⟨00|`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_horodecki(p: f64, out: *mut *mut EntpotState) -> i32 {
    emit_state(out, horodecki_state(p))
}

/// Generalized Horodecki state `ρ_GH(p, q)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_generalized_horodecki(
    p: f64,
    q: f64,
    out: *mut *mut EntpotState,
) -> i32 {
    emit_state(
        out,
        GeneralizedHorodeckiParams::new(p, q).map(generalized_horodecki),
    )
}

/// Werner state with negativity `n`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_werner(n: f64, out: *mut *mut EntpotState) -> i32 {
    emit_state(out, werner(n))
}

/// Bell-diagonal state with weights on ψ⁻, ψ⁺, φ⁻, φ⁺.
///
/// # Safety
/// `weights` must be null or point to 4 readable doubles; `out` must be null
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_bell_diagonal(
    weights: *const f64,
    out: *mut *mut EntpotState,
) -> i32 {
    if weights.is_null() {
        return ENTPOT_ERR_NULL;
    }
    let w = std::slice::from_raw_parts(weights, 4);
    emit_state(
        out,
        BellDiagonalWeights::new([w[0], w[1], w[2], w[3]]).map(|w| bell_diagonal(&w)),
    )
}

/// Validates and wraps an arbitrary density matrix.
///
/// # Safety
/// `re` and `im` must be null or point to 16 readable doubles; `out` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_state_from_matrix(
    re: *const f64,
    im: *const f64,
    out: *mut *mut EntpotState,
) -> i32 {
    if re.is_null() || im.is_null() {
        return ENTPOT_ERR_NULL;
    }
    let re = std::slice::from_raw_parts(re, 16);
    let im = std::slice::from_raw_parts(im, 16);
    let data = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
    emit_state(out, TwoQubitState::new(ComplexMatrix::from_row_major(4, data)))
}

/// Copies the density matrix into `re` and `im`.
///
/// # Safety
/// `state` must be null or a live handle; `re` and `im` must be null or valid
/// for 16 writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_state_matrix(
    state: *const EntpotState,
    re: *mut f64,
    im: *mut f64,
) -> i32 {
    guard(|| {
        let s = state_ref(state)?;
        if re.is_null() || im.is_null() {
            return Err(ENTPOT_ERR_NULL);
        }
        for (k, z) in s.matrix().as_slice().iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(ENTPOT_OK)
    })
}

/// Applies independent phase damping `κ₁`, `κ₂` to the two modes, in place.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn entpot_apply_phase_damping(
    state: *mut EntpotState,
    kappa1: f64,
    kappa2: f64,
) -> i32 {
    guard(|| {
        let s = state.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        let params = lib(PhaseDampingParams::new(kappa1, kappa2))?;
        s.inner = lib(phase_damping(&s.inner, &params))?;
        Ok(ENTPOT_OK)
    })
}

/// Applies independent amplitude damping `γ₁`, `γ₂` to the two modes, in place.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn entpot_apply_amplitude_damping(
    state: *mut EntpotState,
    gamma1: f64,
    gamma2: f64,
) -> i32 {
    guard(|| {
        let s = state.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        let params = lib(AmplitudeDampingParams::new(gamma1, gamma2))?;
        s.inner = lib(amplitude_damping(&s.inner, &params))?;
        Ok(ENTPOT_OK)
    })
}

/// Negativity.
///
/// # Safety
/// `state` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_negativity(state: *const EntpotState, out: *mut f64) -> i32 {
    guard(|| {
        let s = state_ref(state)?;
        let out = out.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        *out = negativity(s);
        Ok(ENTPOT_OK)
    })
}

/// Wootters concurrence.
///
/// # Safety
/// `state` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_concurrence(state: *const EntpotState, out: *mut f64) -> i32 {
    guard(|| {
        let s = state_ref(state)?;
        let out = out.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        *out = lib(concurrence(s))?;
        Ok(ENTPOT_OK)
    })
}

/// Relative entropy of entanglement in bits, solved to accuracy `tol`
/// (`tol ≤ 0` selects the default 1e-9). Returns `ENTPOT_ERR_NOT_CONVERGED`
/// with the best value written when the solver stops early.
///
/// # Safety
/// `state` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_ree(state: *const EntpotState, tol: f64, out: *mut f64) -> i32 {
    guard(|| {
        let s = state_ref(state)?;
        let out = out.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        let r = lib(ree_numerical_with(s, &ree_options(tol)))?;
        *out = r.value.max(0.0);
        Ok(if r.converged {
            ENTPOT_OK
        } else {
            ENTPOT_ERR_NOT_CONVERGED
        })
    })
}

fn ree_options(tol: f64) -> ReeOptions {
    let mut opts = ReeOptions::default();
    if tol > 0.0 {
        opts.tol = tol;
    }
    opts
}

/// NP, CP and REEP of `σ(p, x)` through a beam splitter at `theta_deg`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_potentials(
    p: f64,
    x_re: f64,
    x_im: f64,
    theta_deg: f64,
    tol: f64,
    out: *mut EntpotPotentials,
) -> i32 {
    guard(|| {
        let out = out.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        let sigma = lib(single_qubit(p, C64::new(x_re, x_im)))?;
        let bs = lib(BeamSplitterConfig::from_degrees(theta_deg))?;
        let rho = lib(GeneralizedPipeline::with_bs(bs).output(&sigma))?;
        let (t, r) = lib(evaluate(&rho, &ree_options(tol)))?;
        *out = EntpotPotentials {
            np: t.np,
            cp: t.cp,
            reep: t.reep,
            converged: r.converged as i32,
        };
        Ok(ENTPOT_OK)
    })
}

/// Special points of the (E_R, N) plane, bisected to width `tol` in N.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entpot_special_points(tol: f64, out: *mut EntpotSpecialPoints) -> i32 {
    guard(|| {
        let out = out.as_mut().ok_or(ENTPOT_ERR_NULL)?;
        let sp = lib(special_points(tol))?;
        *out = EntpotSpecialPoints {
            n1: sp.n1,
            e1: sp.e1,
            n2: sp.n2,
            e2: sp.e2,
            n3: sp.n3,
            e3: sp.e3,
        };
        Ok(ENTPOT_OK)
    })
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn entpot_state_free(state: *mut EntpotState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn entpot_status_message(code: i32) -> *const c_char {
    let msg: &'static CStr = match code {
        ENTPOT_OK => c"ok",
        ENTPOT_ERR_NULL => c"null pointer argument",
        ENTPOT_ERR_DOMAIN => c"argument out of domain",
        ENTPOT_ERR_NOT_A_STATE => c"not a two-qubit density matrix",
        ENTPOT_ERR_NOT_CONVERGED => c"solver did not converge",
        ENTPOT_ERR_NUMERICAL => c"numerical failure",
        ENTPOT_ERR_PANIC => c"internal panic",
        _ => c"unknown status code",
    };
    msg.as_ptr()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn entpot_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
