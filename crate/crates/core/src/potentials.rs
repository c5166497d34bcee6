//! Entanglement potentials: the measures of the two-mode state produced when
//! a single-mode state and the vacuum meet on a beam splitter, optionally
//! followed by local damping of the output modes.

use serde::{Deserialize, Serialize};

use crate::channels::{
    amplitude_damping, phase_damping, AmplitudeDampingParams, PhaseDampingParams,
};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::measures::{concurrence, negativity, ree_numerical_with, ReeOptions, ReeResult};
use crate::states::{
    balanced_bs_output, tunable_bs_output, BeamSplitterConfig, SingleQubitState, TwoQubitState,
};

/// Tolerance on the endpoints of the admissible `p` interval of `f(p, N)`.
const ENDPOINT_TOL: f64 = 1e-12;

/// Negativity, concurrence and REE of one output state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialTriple {
    pub np: f64,
    pub cp: f64,
    pub reep: f64,
}

/// Measures of `ρ` together with the REE solver report.
pub fn evaluate(rho: &TwoQubitState, opts: &ReeOptions) -> Result<(PotentialTriple, ReeResult)> {
    let ree = ree_numerical_with(rho, opts)?;
    let triple = PotentialTriple {
        np: negativity(rho),
        cp: concurrence(rho)?,
        reep: ree.value.max(0.0),
    };
    Ok((triple, ree))
}

fn require_converged(
    (triple, ree): (PotentialTriple, ReeResult),
) -> Result<PotentialTriple> {
    if ree.converged {
        Ok(triple)
    } else {
        Err(Error::NotConverged {
            iterations: ree.iterations,
            value: ree.value,
        })
    }
}

/// NP, CP and REEP of `σ` through the balanced lossless splitter.
pub fn standard_potentials(sigma: &SingleQubitState) -> Result<PotentialTriple> {
    standard_potentials_with(sigma, &ReeOptions::default())
}

pub fn standard_potentials_with(
    sigma: &SingleQubitState,
    opts: &ReeOptions,
) -> Result<PotentialTriple> {
    require_converged(evaluate(&balanced_bs_output(sigma), opts)?)
}

/// Beam splitter followed by optional amplitude damping, then optional phase
/// damping, on the two output modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedPipeline {
    pub bs: BeamSplitterConfig,
    pub adc: Option<AmplitudeDampingParams>,
    pub pdc: Option<PhaseDampingParams>,
}

impl Default for GeneralizedPipeline {
    fn default() -> Self {
        Self {
            bs: BeamSplitterConfig::balanced(),
            adc: None,
            pdc: None,
        }
    }
}

impl GeneralizedPipeline {
    pub fn with_bs(bs: BeamSplitterConfig) -> Self {
        Self {
            bs,
            ..Self::default()
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.bs.is_balanced() && self.adc.is_none() && self.pdc.is_none()
    }

    pub fn output(&self, sigma: &SingleQubitState) -> Result<TwoQubitState> {
        let mut rho = if self.bs.is_balanced() {
            balanced_bs_output(sigma)
        } else {
            tunable_bs_output(sigma, &self.bs)
        };
        if let Some(adc) = &self.adc {
            rho = amplitude_damping(&rho, adc)?;
        }
        if let Some(pdc) = &self.pdc {
            rho = phase_damping(&rho, pdc)?;
        }
        Ok(rho)
    }
}

/// GNP, GCP and GREEP of `σ` through `pipe`.
pub fn generalized_potentials(
    sigma: &SingleQubitState,
    pipe: &GeneralizedPipeline,
) -> Result<PotentialTriple> {
    generalized_potentials_with(sigma, pipe, &ReeOptions::default())
}

pub fn generalized_potentials_with(
    sigma: &SingleQubitState,
    pipe: &GeneralizedPipeline,
    opts: &ReeOptions,
) -> Result<PotentialTriple> {
    require_converged(evaluate(&pipe.output(sigma)?, opts)?)
}

/// Upper end `√(2N(N+1)) − N` of the admissible `p` range at negativity `N`;
/// the completely dephased state with this `p` has NP = `N`.
pub fn dephased_endpoint(n: f64) -> f64 {
    (2.0 * n * (n + 1.0)).sqrt() - n
}

/// `|x| = f(p, N) = ½√((1 + p/N)[2N(N+1) − (N+p)²])`, the coherence that gives
/// NP = `N` at mixing parameter `p ∈ [N, √(2N(N+1)) − N]`.
pub fn coherence_from_negativity(p: f64, n: f64) -> Result<f64> {
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::OutOfDomain(format!("negativity N = {n}")));
    }
    let hi = dephased_endpoint(n);
    if !(p >= n - ENDPOINT_TOL && p <= hi + ENDPOINT_TOL) {
        return Err(Error::OutOfDomain(format!(
            "p = {p} outside [{n}, {hi}] for N = {n}"
        )));
    }
    // 2N(N+1) − (N+p)², factored so that it vanishes exactly at the upper end
    let bracket = (hi - p) * (hi + 2.0 * n + p);
    let f = 0.5 * ((1.0 + p / n) * bracket).max(0.0).sqrt();
    // never exceed the purity bound by round-off
    Ok(f.min((p * (1.0 - p)).max(0.0).sqrt()))
}

/// `σ′(p, N, φ) = σ[p, f(p, N) e^{iφ}]`.
pub fn sigma_prime(p: f64, n: f64, phi: f64) -> Result<SingleQubitState> {
    let f = coherence_from_negativity(p, n)?;
    SingleQubitState::new(p.clamp(0.0, 1.0), C64::from_polar(f, phi))
}
