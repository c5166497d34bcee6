#ifndef ENTPOT_H
#define ENTPOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ENTPOT_OK 0

// A required pointer argument was null.
#define ENTPOT_ERR_NULL 1

// A parameter lies outside its domain.
#define ENTPOT_ERR_DOMAIN 2

// A matrix is not a valid two-qubit density matrix.
#define ENTPOT_ERR_NOT_A_STATE 3

// The REE solver stopped before reaching the requested accuracy. The best
// value found is still written.
#define ENTPOT_ERR_NOT_CONVERGED 4

// Any other numerical failure.
#define ENTPOT_ERR_NUMERICAL 5

// A Rust panic was caught at the boundary.
#define ENTPOT_ERR_PANIC 6

// Opaque two-qubit density matrix.
typedef struct EntpotState EntpotState;

// NP, CP and REEP of one single-qubit input.
typedef struct EntpotPotentials {
  double np;
  double cp;
  double reep;
  // 1 when the REE solve converged.
  int32_t converged;
} EntpotPotentials;

// The three special points of the (E_R, N) plane.
typedef struct EntpotSpecialPoints {
  double n1;
  double e1;
  double n2;
  double e2;
  double n3;
  double e3;
} EntpotSpecialPoints;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Balanced (θ = 90°) or tunable beam-splitter output of `σ(p, x)` mixed with
// the vacuum, `x = x_re + i·x_im`.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_bs_output(double p,
                         double x_re,
                         double x_im,
                         double theta_deg,
                         struct EntpotState **out);

// Horodecki state `p|ψ⁻⟩⟨ψ⁻| + (1−p)|00⟩⟨00|`.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_horodecki(double p, struct EntpotState **out);

// Generalized Horodecki state `ρ_GH(p, q)`.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_generalized_horodecki(double p, double q, struct EntpotState **out);

// Werner state with negativity `n`.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_werner(double n, struct EntpotState **out);

// Bell-diagonal state with weights on ψ⁻, ψ⁺, φ⁻, φ⁺.
//
// # Safety
// `weights` must be null or point to 4 readable doubles; `out` must be null
// or valid for writes.
int32_t entpot_bell_diagonal(const double *weights, struct EntpotState **out);

// Validates and wraps an arbitrary density matrix.
//
// # Safety
// `re` and `im` must be null or point to 16 readable doubles; `out` must be
// null or valid for writes.
int32_t entpot_state_from_matrix(const double *re, const double *im, struct EntpotState **out);

// Copies the density matrix into `re` and `im`.
//
// # Safety
// `state` must be null or a live handle; `re` and `im` must be null or valid
// for 16 writes.
int32_t entpot_state_matrix(const struct EntpotState *state, double *re, double *im);

// Applies independent phase damping `κ₁`, `κ₂` to the two modes, in place.
//
// # Safety
// `state` must be null or a live handle.
int32_t entpot_apply_phase_damping(struct EntpotState *state, double kappa1, double kappa2);

// Applies independent amplitude damping `γ₁`, `γ₂` to the two modes, in place.
//
// # Safety
// `state` must be null or a live handle.
int32_t entpot_apply_amplitude_damping(struct EntpotState *state, double gamma1, double gamma2);

// Negativity.
//
// # Safety
// `state` must be null or a live handle; `out` null or valid for writes.
int32_t entpot_negativity(const struct EntpotState *state, double *out);

// Wootters concurrence.
//
// # Safety
// `state` must be null or a live handle; `out` null or valid for writes.
int32_t entpot_concurrence(const struct EntpotState *state, double *out);

// Relative entropy of entanglement in bits, solved to accuracy `tol`
// (`tol ≤ 0` selects the default 1e-9). Returns `ENTPOT_ERR_NOT_CONVERGED`
// with the best value written when the solver stops early.
//
// # Safety
// `state` must be null or a live handle; `out` null or valid for writes.
int32_t entpot_ree(const struct EntpotState *state, double tol, double *out);

// NP, CP and REEP of `σ(p, x)` through a beam splitter at `theta_deg`.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_potentials(double p,
                          double x_re,
                          double x_im,
                          double theta_deg,
                          double tol,
                          struct EntpotPotentials *out);

// Special points of the (E_R, N) plane, bisected to width `tol` in N.
//
// # Safety
// `out` must be null or valid for writes.
int32_t entpot_special_points(double tol, struct EntpotSpecialPoints *out);

// Releases a handle. Null is a no-op.
//
// # Safety
// `state` must be null or a handle not yet freed.
void entpot_state_free(struct EntpotState *state);

// Static, NUL-terminated description of a status code.
const char *entpot_status_message(int32_t code);

// Library version, NUL-terminated.
const char *entpot_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTPOT_H */
