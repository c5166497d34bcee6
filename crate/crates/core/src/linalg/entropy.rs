use std::f64::consts::LN_2;

use super::{hermitian_eig, ComplexMatrix, HermitianEigen, EIG_CLIP, ZERO};
use crate::error::{Error, Result};

/// Eigenvalues at or below this contribute nothing to an entropy sum.
const ENTROPY_FLOOR: f64 = 1e-15;

/// Weight of `ρ` on a null direction of `σ` beyond which `S(ρ‖σ)` is infinite.
const SUPPORT_TOL: f64 = 1e-12;

/// Eigenvalue floor used by the matrix-log derivative.
pub const LOG_FLOOR: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-10;

/// Diagonalizes `rho` and checks it is a density matrix (unit trace, PSD up to
/// [`EIG_CLIP`]). Slightly negative eigenvalues are clipped to zero.
pub(crate) fn state_spectrum(rho: &ComplexMatrix) -> Result<HermitianEigen> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotAState(format!("trace {tr}")));
    }
    let mut eig = hermitian_eig(rho)?;
    if eig.min() < -EIG_CLIP {
        return Err(Error::NotAState(format!(
            "negative eigenvalue {:.3e}",
            eig.min()
        )));
    }
    for v in eig.values.iter_mut() {
        *v = v.max(0.0);
    }
    Ok(eig)
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `S(ρ) = -Tr ρ log₂ ρ` in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = state_spectrum(rho)?;
    Ok(entropy_of_spectrum(&eig.values))
}

/// `S(ρ‖σ) = Tr ρ (log₂ ρ − log₂ σ)` in bits.
///
/// Returns [`Error::SupportViolation`] when `ρ` has weight outside the support
/// of `σ` (the divergence is infinite there).
pub fn relative_entropy(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::WrongDimension {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let rho_eig = state_spectrum(rho)?;
    let sigma_eig = state_spectrum(sigma)?;
    let n = rho.dim();
    let w = &sigma_eig.vectors;
    let mut cross = 0.0;
    for k in 0..n {
        // ⟨w_k|ρ|w_k⟩
        let mut weight = ZERO;
        for i in 0..n {
            for j in 0..n {
                weight += w[(i, k)].conj() * rho[(i, j)] * w[(j, k)];
            }
        }
        let weight = weight.re;
        let mu = sigma_eig.values[k];
        if mu <= 0.0 {
            if weight > SUPPORT_TOL {
                return Err(Error::SupportViolation);
            }
            continue;
        }
        cross += weight * mu.log2();
    }
    let value = -entropy_of_spectrum(&rho_eig.values) - cross;
    Ok(value.max(0.0))
}

/// First divided difference of the natural log, `(ln a − ln b)/(a − b)`.
#[inline]
pub(crate) fn ln_dd1(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() <= 1e-14 * a.max(b) {
        return 2.0 / (a + b);
    }
    (d / b).ln_1p() / d
}

/// Second divided difference of the natural log, `ln[a, b, c]`.
#[inline]
pub(crate) fn ln_dd2(a: f64, b: f64, c: f64) -> f64 {
    let (mut x, mut y, mut z) = (a, b, c);
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    if y < z {
        std::mem::swap(&mut y, &mut z);
    }
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    // x >= y >= z
    if x - z <= 1e-4 * x {
        let m = (x + y + z) / 3.0;
        return -0.5 / (m * m);
    }
    (ln_dd1(x, y) - ln_dd1(y, z)) / (x - z)
}

/// Fréchet derivative of `log₂` at `σ` along `direction` (Daleckii–Krein).
///
/// Eigenvalues of `σ` are floored at [`LOG_FLOOR`]; a spectrum more negative
/// than [`EIG_CLIP`] is rejected.
pub fn log_frechet_derivative(
    sigma: &ComplexMatrix,
    direction: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if sigma.dim() != direction.dim() {
        return Err(Error::WrongDimension {
            expected: sigma.dim(),
            actual: direction.dim(),
        });
    }
    let eig = hermitian_eig(sigma)?;
    if eig.min() < -EIG_CLIP {
        return Err(Error::SingularState(eig.min()));
    }
    let lambda: Vec<f64> = eig.values.iter().map(|&l| l.max(LOG_FLOOR)).collect();
    Ok(frechet_in_eigenbasis(&eig.vectors, &lambda, direction).scale(1.0 / LN_2))
}

/// `V (Γ ∘ V† H V) V†` with `Γ_ij = ln[λ_i, λ_j]` (natural log).
pub(crate) fn frechet_in_eigenbasis(
    vectors: &ComplexMatrix,
    lambda: &[f64],
    direction: &ComplexMatrix,
) -> ComplexMatrix {
    let n = lambda.len();
    let mut h = direction.conjugate_by(vectors);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] *= ln_dd1(lambda[i], lambda[j]);
        }
    }
    let vt = vectors.adjoint();
    h.conjugate_by(&vt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{paulis, C64};

    fn binary_entropy(y: f64) -> f64 {
        -y * y.log2() - (1.0 - y) * (1.0 - y).log2()
    }

    #[test]
    fn entropy_of_pure_projector_is_zero() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let rho = ComplexMatrix::outer(&v);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-14);
    }

    #[test]
    fn entropy_of_maximally_mixed_two_qubits() {
        let rho = ComplexMatrix::identity(4).scale(0.25);
        assert!((von_neumann_entropy(&rho).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_of_diag_three_quarters() {
        let rho = ComplexMatrix::diagonal(&[0.75, 0.25]);
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - binary_entropy(0.75)).abs() < 1e-14);
        assert!((s - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_trace_and_negative_spectrum() {
        assert!(matches!(
            von_neumann_entropy(&ComplexMatrix::diagonal(&[0.7, 0.2])),
            Err(Error::NotAState(_))
        ));
        assert!(matches!(
            von_neumann_entropy(&ComplexMatrix::diagonal(&[1.1, -0.1])),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = ComplexMatrix::diagonal(&[0.3, 0.7]);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-14);

        let h = 0.5f64.sqrt();
        let singlet =
            ComplexMatrix::outer(&[ZERO, C64::new(-h, 0.0), C64::new(h, 0.0), ZERO]);
        let mixed = ComplexMatrix::identity(4).scale(0.25);
        assert!((relative_entropy(&singlet, &mixed).unwrap() - 2.0).abs() < 1e-13);

        let a = ComplexMatrix::diagonal(&[1.0, 0.0]);
        let b = ComplexMatrix::diagonal(&[0.5, 0.5]);
        assert!((relative_entropy(&a, &b).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_support_violation() {
        let a = ComplexMatrix::diagonal(&[0.5, 0.5]);
        let b = ComplexMatrix::diagonal(&[1.0, 0.0]);
        assert_eq!(relative_entropy(&a, &b), Err(Error::SupportViolation));
    }

    #[test]
    fn log_derivative_at_half_identity() {
        let sigma = ComplexMatrix::identity(2).scale(0.5);
        let z = &paulis()[3];
        let d = log_frechet_derivative(&sigma, z).unwrap();
        assert!(d.max_abs_diff(&z.scale(2.0 / LN_2)) < 1e-14);
    }

    #[test]
    fn log_derivative_of_zero_direction() {
        let sigma = ComplexMatrix::diagonal(&[0.2, 0.3, 0.1, 0.4]);
        let d = log_frechet_derivative(&sigma, &ComplexMatrix::zeros(4)).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn divided_differences_match_limits() {
        assert!((ln_dd1(0.3, 0.3) - 1.0 / 0.3).abs() < 1e-12);
        assert!((ln_dd1(0.3, 0.2) - (0.3f64.ln() - 0.2f64.ln()) / 0.1).abs() < 1e-12);
        assert!((ln_dd2(0.5, 0.5, 0.5) + 2.0).abs() < 1e-12);
        // second divided difference against the closed form via first differences
        let (a, b, c) = (0.7, 0.2, 0.05);
        let expect = (ln_dd1(a, b) - ln_dd1(b, c)) / (a - c);
        assert!((ln_dd2(c, a, b) - expect).abs() < 1e-12);
    }
}
