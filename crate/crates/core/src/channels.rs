//! Local phase-damping and amplitude-damping channels on the two output modes.
//!
//! Generic application goes through Kraus sets that are checked for
//! completeness once, at construction. The closed-form outputs for the input
//! `|ψ_q⟩` are provided separately and agree with the generic path entrywise.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{bell_basis, generalized_horodecki, GeneralizedHorodeckiParams, TwoQubitState};

const COMPLETENESS_TOL: f64 = 1e-12;
/// Below this pure-state weight the ADC output is taken to be `|00⟩⟨00|`.
const DEGENERATE_WEIGHT: f64 = 1e-12;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("{name} = {v}")))
    }
}

/// Single-qubit Kraus operators with `Σ E_i† E_i = I` to `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::NotTracePreserving(1.0));
        }
        let mut sum = ComplexMatrix::zeros(2);
        for e in &ops {
            if e.dim() != 2 {
                return Err(Error::WrongDimension {
                    expected: 2,
                    actual: e.dim(),
                });
            }
            sum = &sum + &(&e.adjoint() * e);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(2));
        if !(defect <= COMPLETENESS_TOL) {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { ops })
    }

    pub fn identity() -> Self {
        Self {
            ops: vec![ComplexMatrix::identity(2)],
        }
    }

    /// `E₀ = |0⟩⟨0| + √(1−κ)|1⟩⟨1|`, `E₁ = √κ|1⟩⟨1|`.
    pub fn phase_damping(kappa: f64) -> Result<Self> {
        check_unit("κ", kappa)?;
        Self::new(vec![
            ComplexMatrix::diagonal(&[1.0, (1.0 - kappa).sqrt()]),
            ComplexMatrix::diagonal(&[0.0, kappa.sqrt()]),
        ])
    }

    /// `E₀ = |0⟩⟨0| + √(1−γ)|1⟩⟨1|`, `E₁ = √γ|0⟩⟨1|`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_unit("γ", gamma)?;
        Self::new(vec![
            ComplexMatrix::diagonal(&[1.0, (1.0 - gamma).sqrt()]),
            ComplexMatrix::from_real_rows([[0.0, gamma.sqrt()], [0.0, 0.0]]),
        ])
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }
}

/// Phase-damping coefficients of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDampingParams {
    pub kappa1: f64,
    pub kappa2: f64,
}

impl PhaseDampingParams {
    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        check_unit("κ₁", kappa1)?;
        check_unit("κ₂", kappa2)?;
        Ok(Self { kappa1, kappa2 })
    }

    pub fn kraus(&self) -> (KrausSet, KrausSet) {
        (
            KrausSet::phase_damping(self.kappa1).expect("validated"),
            KrausSet::phase_damping(self.kappa2).expect("validated"),
        )
    }
}

/// Amplitude-damping coefficients of the two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDampingParams {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl AmplitudeDampingParams {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        check_unit("γ₁", gamma1)?;
        check_unit("γ₂", gamma2)?;
        Ok(Self { gamma1, gamma2 })
    }

    pub fn kraus(&self) -> (KrausSet, KrausSet) {
        (
            KrausSet::amplitude_damping(self.gamma1).expect("validated"),
            KrausSet::amplitude_damping(self.gamma2).expect("validated"),
        )
    }
}

/// `Σ_ij (E_i ⊗ F_j) ρ (E_i ⊗ F_j)†`.
pub fn apply_local_channel(
    rho: &TwoQubitState,
    kraus_q1: &KrausSet,
    kraus_q2: &KrausSet,
) -> Result<TwoQubitState> {
    let mut out = ComplexMatrix::zeros(4);
    for e in &kraus_q1.ops {
        for f in &kraus_q2.ops {
            let k = e.kron(f);
            out = &out + &(&(&k * rho.matrix()) * &k.adjoint());
        }
    }
    let drift = (out.trace().re - 1.0).abs();
    if drift > COMPLETENESS_TOL {
        return Err(Error::NotTracePreserving(drift));
    }
    Ok(TwoQubitState::normalized(out))
}

pub fn phase_damping(rho: &TwoQubitState, params: &PhaseDampingParams) -> Result<TwoQubitState> {
    let (a, b) = params.kraus();
    apply_local_channel(rho, &a, &b)
}

pub fn amplitude_damping(
    rho: &TwoQubitState,
    params: &AmplitudeDampingParams,
) -> Result<TwoQubitState> {
    let (a, b) = params.kraus();
    apply_local_channel(rho, &a, &b)
}

/// Phase-damped `|ψ_q⟩` written in the `|ψ∓⟩` basis:
/// `(½−y)|ψ⁻⟩⟨ψ⁻| + (½+y)|ψ⁺⟩⟨ψ⁺| + (½−q)(|ψ⁻⟩⟨ψ⁺| + h.c.)`,
/// `y = √(q(1−q)(1−κ₁)(1−κ₂))`.
///
/// The cross term carries `½−q` because `|ψ⁻⟩ = (|10⟩ − |01⟩)/√2` here.
pub fn pdc_on_pure(q: f64, kappa1: f64, kappa2: f64) -> Result<TwoQubitState> {
    check_unit("q", q)?;
    PhaseDampingParams::new(kappa1, kappa2)?;
    let y = (q * (1.0 - q) * (1.0 - kappa1) * (1.0 - kappa2)).sqrt();
    let [b1, b2, _, _] = bell_basis();
    let cross = |u: &[C64; 4], v: &[C64; 4]| {
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = u[i] * v[j].conj() + v[i] * u[j].conj();
            }
        }
        m
    };
    let m = &(&ComplexMatrix::outer(&b1).scale(0.5 - y) + &ComplexMatrix::outer(&b2).scale(0.5 + y))
        + &cross(&b1, &b2).scale(0.5 - q);
    Ok(TwoQubitState::normalized(m))
}

/// Amplitude-damped `|ψ_q⟩`, which stays in the generalized Horodecki family:
/// `ρ_GH(w, q′)` with `w = q(1−γ₂) + (1−q)(1−γ₁)` and `q′ = q(1−γ₂)/w`.
///
/// For `w < 1e-12` the output is `|00⟩⟨00|` with `q′ = 0`.
pub fn adc_on_pure(
    q: f64,
    gamma1: f64,
    gamma2: f64,
) -> Result<(TwoQubitState, GeneralizedHorodeckiParams)> {
    check_unit("q", q)?;
    AmplitudeDampingParams::new(gamma1, gamma2)?;
    let kept01 = q * (1.0 - gamma2);
    let w = kept01 + (1.0 - q) * (1.0 - gamma1);
    let params = if w < DEGENERATE_WEIGHT {
        GeneralizedHorodeckiParams { p: 0.0, q: 0.0 }
    } else {
        GeneralizedHorodeckiParams {
            p: w.min(1.0),
            q: (kept01 / w).clamp(0.0, 1.0),
        }
    };
    Ok((generalized_horodecki(params), params))
}

/// Matrix of `|00⟩⟨00|`.
pub fn vacuum_projector() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence, negativity};
    use crate::states::{psi_q, werner};

    #[test]
    fn identity_channel_is_noop() {
        let rho = werner(0.4).unwrap();
        let out = apply_local_channel(&rho, &KrausSet::identity(), &KrausSet::identity()).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn incomplete_kraus_set_is_rejected() {
        let e = ComplexMatrix::diagonal(&[1.0, 0.9]);
        assert!(matches!(
            KrausSet::new(vec![e]),
            Err(Error::NotTracePreserving(_))
        ));
        assert!(KrausSet::phase_damping(1.2).is_err());
    }

    #[test]
    fn full_phase_damping_dephases() {
        let rho = psi_q(0.3).unwrap();
        let out = phase_damping(&rho, &PhaseDampingParams::new(1.0, 1.0).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(out.matrix()[(i, j)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn full_amplitude_damping_gives_vacuum() {
        let rho = werner(0.7).unwrap();
        let out = amplitude_damping(&rho, &AmplitudeDampingParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(&vacuum_projector()) < 1e-15);
    }

    #[test]
    fn pdc_closed_form_matches_kraus() {
        for &(q, k1, k2) in &[(0.5, 0.0, 0.0), (0.2, 0.3, 0.7), (0.9, 1.0, 0.1)] {
            let closed = pdc_on_pure(q, k1, k2).unwrap();
            let kraus = phase_damping(&psi_q(q).unwrap(), &PhaseDampingParams::new(k1, k2).unwrap())
                .unwrap();
            assert!(closed.matrix().max_abs_diff(kraus.matrix()) < 1e-12);
        }
    }

    #[test]
    fn pdc_half_negativity() {
        let rho = pdc_on_pure(0.5, 0.36, 0.0).unwrap();
        assert!((negativity(&rho) - 0.8).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap() - 0.8).abs() < 1e-12);
        assert!(negativity(&pdc_on_pure(0.5, 1.0, 0.4).unwrap()) < 1e-15);
    }

    #[test]
    fn adc_examples() {
        let (rho, par) = adc_on_pure(0.3, 0.0, 0.0).unwrap();
        assert_eq!((par.p, par.q), (1.0, 0.3));
        assert!(rho.matrix().max_abs_diff(psi_q(0.3).unwrap().matrix()) < 1e-15);

        let (rho, par) = adc_on_pure(0.5, 1.0, 1.0).unwrap();
        assert_eq!((par.p, par.q), (0.0, 0.0));
        assert!(rho.matrix().max_abs_diff(&vacuum_projector()) < 1e-15);

        let (rho, par) = adc_on_pure(0.5, 0.2, 0.2).unwrap();
        assert!((par.p - 0.8).abs() < 1e-15 && (par.q - 0.5).abs() < 1e-15);
        let kraus = amplitude_damping(
            &psi_q(0.5).unwrap(),
            &AmplitudeDampingParams::new(0.2, 0.2).unwrap(),
        )
        .unwrap();
        assert!(rho.matrix().max_abs_diff(kraus.matrix()) < 1e-12);
    }
}
