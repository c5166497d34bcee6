//! Relative entropy of entanglement by a primal log-barrier Newton method.
//!
//! For two qubits the separable set equals the PPT set, so
//!
//! ```text
//! E_R(ρ) = min { −S(ρ) − Tr ρ log σ  :  σ ⪰ 0, σ^Γ ⪰ 0, Tr σ = 1 }.
//! ```
//!
//! `σ` is parametrized as `I/4 + Σ_k c_k (P_a ⊗ P_b)/4` over the 15 non-identity
//! Pauli products, which fixes the trace and makes `σ^Γ` a sign flip of the
//! coefficients with `P_b = Y`. Each barrier stage minimizes
//! `−Tr ρ ln σ − μ (ln det σ + ln det σ^Γ)` by damped Newton steps with the
//! exact Hessian (second divided differences of `ln` in the eigenbasis of `σ`).
//! A centered iterate is within `8μ` nats of the optimum, so the path is
//! followed until `8μ` drops below the requested tolerance.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};

use crate::error::Result;
use crate::linalg::entropy::{ln_dd1, ln_dd2};
use crate::linalg::{
    hermitian_eig, paulis, relative_entropy, ComplexMatrix, HermitianEigen, C64, ZERO,
};
use crate::states::TwoQubitState;

const DIM: usize = 15;
type Vec15 = SVector<f64, DIM>;
type Mat15 = SMatrix<f64, DIM, DIM>;

/// Barrier parameter of `−ln det σ − ln det σ^Γ`.
const BARRIER_NU: f64 = 8.0;
const MU_START: f64 = 0.1;
const MU_SHRINK: f64 = 0.1;
const INIT_BLEND: f64 = 1e-3;
const MAX_NEWTON_PER_STAGE: usize = 80;
const MAX_HALVINGS: usize = 60;
const ARMIJO: f64 = 1e-4;
/// `ρ` counts as separable when `min eig ρ^Γ` is above `−SEPARABLE_TOL`.
const SEPARABLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReeOptions {
    /// Target absolute accuracy in bits.
    pub tol: f64,
    /// Cap on the total number of Newton steps.
    pub max_iter: usize,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 20_000,
        }
    }
}

/// REE value with the closest separable state found by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReeResult {
    /// `S(ρ‖σ_css)` in bits.
    pub value: f64,
    pub css: TwoQubitState,
    /// Newton steps taken.
    pub iterations: usize,
    pub converged: bool,
    /// Euclidean norm of the last Newton step in Pauli coordinates.
    pub final_step_norm: f64,
}

/// `E_R(ρ)` with default options.
pub fn ree_numerical(rho: &TwoQubitState) -> Result<ReeResult> {
    ree_numerical_with(rho, &ReeOptions::default())
}

pub fn ree_numerical_with(rho: &TwoQubitState, opts: &ReeOptions) -> Result<ReeResult> {
    let pt = hermitian_eig(&rho.partial_transpose())?;
    if pt.min() >= -SEPARABLE_TOL {
        return Ok(ReeResult {
            value: 0.0,
            css: rho.clone(),
            iterations: 0,
            converged: true,
            final_step_norm: 0.0,
        });
    }

    let problem = Problem::new(rho.matrix());
    let mut c = problem.initial_point();
    let mu_final = opts.tol * LN_2 / BARRIER_NU;
    let mut mu = MU_START;
    let mut iterations = 0;
    let mut final_step_norm = f64::NAN;
    let mut last_decrement = f64::INFINITY;
    let mut reached_final = false;

    'path: loop {
        let last_stage = mu <= mu_final;
        let mut value = problem
            .objective(&c, mu)
            .expect("barrier iterates stay strictly feasible");
        for _ in 0..MAX_NEWTON_PER_STAGE {
            if iterations >= opts.max_iter {
                break 'path;
            }
            let Some((grad, hess)) = problem.derivatives(&c, mu) else {
                break;
            };
            let step = solve_newton(&hess, &grad);
            let slope = grad.dot(&step);
            last_decrement = -slope;
            if -slope / 2.0 <= 1e-13 {
                break;
            }
            iterations += 1;
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let trial = c + step * t;
                if let Some(v) = problem.objective(&trial, mu) {
                    if v <= value + ARMIJO * t * slope {
                        c = trial;
                        value = v;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            final_step_norm = step.norm() * t;
            if !accepted {
                // objective no longer resolvable in double precision
                break;
            }
        }
        if last_stage {
            reached_final = true;
            break;
        }
        mu = (mu * MU_SHRINK).max(mu_final);
    }

    let css = TwoQubitState::normalized(problem.sigma(&c));
    let value = relative_entropy(rho.matrix(), css.matrix())?;
    let converged = reached_final && last_decrement / 2.0 <= opts.tol * LN_2;
    Ok(ReeResult {
        value,
        css,
        iterations,
        converged,
        final_step_norm: if final_step_norm.is_nan() {
            0.0
        } else {
            final_step_norm
        },
    })
}

/// `(P_a ⊗ P_b)/4` for the 15 non-identity products, with the sign each picks
/// up under partial transposition of the second factor.
struct PauliBasis {
    ops: Vec<ComplexMatrix>,
    pt_sign: [f64; DIM],
}

fn pauli_basis() -> &'static PauliBasis {
    static BASIS: OnceLock<PauliBasis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let p = paulis();
        let mut ops = Vec::with_capacity(DIM);
        let mut pt_sign = [1.0; DIM];
        for a in 0..4 {
            for b in 0..4 {
                if a == 0 && b == 0 {
                    continue;
                }
                if b == 2 {
                    pt_sign[ops.len()] = -1.0;
                }
                ops.push(p[a].kron(&p[b]).scale(0.25));
            }
        }
        PauliBasis { ops, pt_sign }
    })
}

struct Problem<'a> {
    rho: &'a ComplexMatrix,
    basis: &'static PauliBasis,
}

impl<'a> Problem<'a> {
    fn new(rho: &'a ComplexMatrix) -> Self {
        Self {
            rho,
            basis: pauli_basis(),
        }
    }

    /// Blend of the computational-basis diagonal of `ρ` (a PPT state) with the
    /// maximally mixed state.
    fn initial_point(&self) -> Vec15 {
        let diag: Vec<f64> = (0..4).map(|i| self.rho[(i, i)].re.max(0.0)).collect();
        let total: f64 = diag.iter().sum();
        let blended: Vec<f64> = diag
            .iter()
            .map(|d| (1.0 - INIT_BLEND) * d / total + INIT_BLEND * 0.25)
            .collect();
        let sigma0 = ComplexMatrix::diagonal(&blended);
        // c_k = Tr(σ P_a⊗P_b) = 4 Tr(σ G_k)
        Vec15::from_iterator(
            self.basis
                .ops
                .iter()
                .map(|g| 4.0 * sigma0.trace_product(g).re),
        )
    }

    fn assemble(&self, c: &Vec15, transposed: bool) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(4).scale(0.25);
        for (k, g) in self.basis.ops.iter().enumerate() {
            let w = if transposed {
                c[k] * self.basis.pt_sign[k]
            } else {
                c[k]
            };
            if w != 0.0 {
                m = &m + &g.scale(w);
            }
        }
        m
    }

    fn sigma(&self, c: &Vec15) -> ComplexMatrix {
        self.assemble(c, false)
    }

    fn spectra(&self, c: &Vec15) -> Option<(HermitianEigen, HermitianEigen)> {
        let s = hermitian_eig(&self.assemble(c, false)).ok()?;
        let t = hermitian_eig(&self.assemble(c, true)).ok()?;
        (s.min() > 0.0 && t.min() > 0.0).then_some((s, t))
    }

    /// Barrier objective in nats; `None` outside the open feasible set.
    fn objective(&self, c: &Vec15, mu: f64) -> Option<f64> {
        let (s, t) = self.spectra(c)?;
        let mut f = 0.0;
        for k in 0..4 {
            let v = s.vector(k);
            let weight = quad_form(self.rho, &v);
            f -= weight * s.values[k].ln();
        }
        let barrier: f64 = -s.values.iter().map(|l| l.ln()).sum::<f64>()
            - t.values.iter().map(|l| l.ln()).sum::<f64>();
        let total = f + mu * barrier;
        total.is_finite().then_some(total)
    }

    fn derivatives(&self, c: &Vec15, mu: f64) -> Option<(Vec15, Mat15)> {
        let (s, t) = self.spectra(c)?;
        let lam = &s.values;
        let nu = &t.values;
        let rho_t = self.rho.conjugate_by(&s.vectors);
        let g_s: Vec<ComplexMatrix> = self
            .basis
            .ops
            .iter()
            .map(|g| g.conjugate_by(&s.vectors))
            .collect();
        let g_t: Vec<ComplexMatrix> = self
            .basis
            .ops
            .iter()
            .enumerate()
            .map(|(k, g)| g.conjugate_by(&t.vectors).scale(self.basis.pt_sign[k]))
            .collect();

        // L̃ = Γ ∘ ρ̃ is D ln σ[ρ] in the eigenbasis of σ
        let mut l_t = rho_t.clone();
        for i in 0..4 {
            for j in 0..4 {
                l_t[(i, j)] *= ln_dd1(lam[i], lam[j]);
            }
        }
        let mut dd2 = [[[0.0; 4]; 4]; 4];
        for i in 0..4 {
            for m in 0..4 {
                for j in 0..4 {
                    dd2[i][m][j] = ln_dd2(lam[i], lam[m], lam[j]);
                }
            }
        }
        // A_k[m][j] = Σ_i ln[λ_i, λ_m, λ_j] ρ̃_ji G̃k_im
        let a: Vec<[[C64; 4]; 4]> = g_s
            .iter()
            .map(|gk| {
                let mut out = [[ZERO; 4]; 4];
                for m in 0..4 {
                    for j in 0..4 {
                        let mut acc = ZERO;
                        for i in 0..4 {
                            acc += rho_t[(j, i)] * gk[(i, m)] * dd2[i][m][j];
                        }
                        out[m][j] = acc;
                    }
                }
                out
            })
            .collect();

        let mut grad = Vec15::zeros();
        let mut hess = Mat15::zeros();
        for k in 0..DIM {
            let gk = &g_s[k];
            let hk = &g_t[k];
            let df = -l_t.trace_product(gk).re;
            let mut db = 0.0;
            for i in 0..4 {
                db -= gk[(i, i)].re / lam[i] + hk[(i, i)].re / nu[i];
            }
            grad[k] = df + mu * db;
            for l in 0..=k {
                let gl = &g_s[l];
                let hl = &g_t[l];
                let mut second = ZERO;
                let mut barrier = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        second += a[k][i][j] * gl[(i, j)] + a[l][i][j] * gk[(i, j)];
                        barrier += (gk[(i, j)] * gl[(j, i)]).re / (lam[i] * lam[j])
                            + (hk[(i, j)] * hl[(j, i)]).re / (nu[i] * nu[j]);
                    }
                }
                let h = -second.re + mu * barrier;
                hess[(k, l)] = h;
                hess[(l, k)] = h;
            }
        }
        Some((grad, hess))
    }
}

fn quad_form(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mut acc = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Solves `H d = −g`, regularizing `H` until the Cholesky factorization succeeds.
fn solve_newton(hess: &Mat15, grad: &Vec15) -> Vec15 {
    let scale = (0..DIM).map(|i| hess[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    loop {
        let mut h = *hess;
        for i in 0..DIM {
            h[(i, i)] += shift;
        }
        if let Some(chol) = h.cholesky() {
            return -chol.solve(grad);
        }
        shift = if shift == 0.0 { 1e-14 * scale } else { shift * 10.0 };
        if shift > 1e6 * scale {
            return -grad / scale;
        }
    }
}
