//! Negativity, concurrence (and entanglement of formation), and the relative
//! entropy of entanglement of two-qubit states.

mod ree;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64, ZERO};
use crate::states::TwoQubitState;

pub use ree::{ree_numerical, ree_numerical_with, ReeOptions, ReeResult};

/// Eigenvalues of `ρ` below this fraction of the largest are treated as zero
/// when building the concurrence ensemble.
const ENSEMBLE_CUTOFF: f64 = 1e-14;

/// `N(ρ) = max(0, −2 min eig ρ^Γ)`, clamped to `[0, 1]`.
pub fn negativity(rho: &TwoQubitState) -> f64 {
    let eig = hermitian_eig(&rho.partial_transpose()).expect("ρ^Γ is Hermitian");
    (-2.0 * eig.min()).clamp(0.0, 1.0)
}

/// Wootters concurrence `max(0, 2λ_max − Σλ_j)`.
///
/// The `λ_j` (square roots of the spectrum of `ρ (Y⊗Y) ρ* (Y⊗Y)`) are taken as
/// the singular values of `τ = Wᵀ (Y⊗Y) W` where `ρ = W W†`. Singular values come
/// from the Hermitian dilation `[[0, τ], [τ†, 0]]`, which keeps small `λ_j`
/// accurate to machine precision instead of `√ε`.
pub fn concurrence(rho: &TwoQubitState) -> Result<f64> {
    let eig = hermitian_eig(rho.matrix())?;
    if eig.min() < -1e-8 {
        return Err(Error::NonPhysicalSpectrum(eig.min()));
    }
    let top = eig.max();
    let kept: Vec<usize> = (0..4)
        .filter(|&k| eig.values[k] > ENSEMBLE_CUTOFF * top)
        .collect();
    let r = kept.len();
    // W columns: √μ_k v_k
    let w: Vec<[C64; 4]> = kept
        .iter()
        .map(|&k| {
            let s = eig.values[k].sqrt();
            let mut col = [ZERO; 4];
            for (i, c) in col.iter_mut().enumerate() {
                *c = eig.vectors[(i, k)] * s;
            }
            col
        })
        .collect();
    // Y⊗Y maps |00⟩→−|11⟩, |01⟩→|10⟩, |10⟩→|01⟩, |11⟩→−|00⟩
    let yy = |v: &[C64; 4]| [-v[3], v[2], v[1], -v[0]];
    let mut dilation = ComplexMatrix::zeros(2 * r);
    for i in 0..r {
        for j in 0..r {
            let yw = yy(&w[j]);
            let tau: C64 = (0..4).map(|a| w[i][a] * yw[a]).sum();
            dilation[(i, r + j)] = tau;
            dilation[(r + j, i)] = tau.conj();
        }
    }
    let sv = hermitian_eig(&dilation)?;
    let lambdas: Vec<f64> = sv.values[r..].iter().map(|l| l.max(0.0)).collect();
    let lmax = lambdas.iter().copied().fold(0.0, f64::max);
    let sum: f64 = lambdas.iter().sum();
    Ok((2.0 * lmax - sum).clamp(0.0, 1.0))
}

/// `h(y) = −y log₂ y − (1−y) log₂(1−y)`.
pub fn binary_entropy(y: f64) -> f64 {
    let term = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.log2() };
    term(y) + term(1.0 - y)
}

/// Entanglement of formation from concurrence, `h(½[1 + √(1−C²)])`.
pub fn eof(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::OutOfDomain(format!("concurrence {c}")));
    }
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())))
}

/// Families with a closed-form relative entropy of entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    /// Pure states, parametrized by negativity `N`.
    Pure,
    /// Horodecki states `ρ_H(p)`, parametrized by `p`.
    Horodecki,
    /// Bell-diagonal states, parametrized by negativity `N`.
    BellDiagonal,
}

/// Closed-form REE in bits for the solvable families.
pub fn ree_closed_form(family: ClosedFormFamily, parameter: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&parameter) {
        return Err(Error::OutOfDomain(format!(
            "{family:?} parameter {parameter}"
        )));
    }
    let x = parameter;
    Ok(match family {
        ClosedFormFamily::Pure => eof(x)?,
        ClosedFormFamily::Horodecki => {
            let a = (x - 2.0) * (1.0 - x / 2.0).log2();
            let b = if x < 1.0 { (1.0 - x) * (1.0 - x).log2() } else { 0.0 };
            (a + b).max(0.0)
        }
        ClosedFormFamily::BellDiagonal => 1.0 - binary_entropy((1.0 + x) / 2.0),
    })
}

/// Negativity of a Horodecki state, `√((1−p)² + p²) − (1−p)`.
pub fn horodecki_negativity(p: f64) -> f64 {
    ((1.0 - p).powi(2) + p * p).sqrt() - (1.0 - p)
}

/// Ingredients of the negativity identity
/// `48D + 3N⁴ + 6N³ − 6N²Π′₂ − 4N(3Π′₂ − 2Π′₃) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResidual {
    /// `Π′₂ = Tr[(ρ^Γ)²] − 1`.
    pub pi2: f64,
    /// `Π′₃ = Tr[(ρ^Γ)³] − 1`.
    pub pi3: f64,
    /// `D = det ρ^Γ`.
    pub det: f64,
    pub negativity: f64,
    pub residual: f64,
}

pub fn negativity_moment_residual(rho: &TwoQubitState) -> MomentResidual {
    let eig = hermitian_eig(&rho.partial_transpose()).expect("ρ^Γ is Hermitian");
    let pi2 = eig.values.iter().map(|e| e * e).sum::<f64>() - 1.0;
    let pi3 = eig.values.iter().map(|e| e * e * e).sum::<f64>() - 1.0;
    let det = eig.values.iter().product::<f64>();
    let n = negativity(rho);
    let residual = (48.0 * det + 3.0 * n.powi(4) + 6.0 * n.powi(3) - 6.0 * n * n * pi2
        - 4.0 * n * (3.0 * pi2 - 2.0 * pi3))
        .abs();
    MomentResidual {
        pi2,
        pi3,
        det,
        negativity: n,
        residual,
    }
}
