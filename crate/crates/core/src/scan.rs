//! Monte-Carlo scan of single-qubit inputs and containment checks against the
//! boundary families.
//!
//! Record `i` draws from a ChaCha20 stream seeded with the scan seed and
//! positioned on stream `i`, so output does not depend on thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundaries::{
    invert_increasing, optimal_sigma_z, reep_dephased, reep_pure, ree_bell, MeasurePlane,
};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::measures::{eof, horodecki_negativity, ree_closed_form, ClosedFormFamily, ReeOptions};
use crate::potentials::{evaluate, PotentialTriple};
use crate::states::{balanced_bs_output, SingleQubitState};

/// Default containment tolerance.
pub const CONTAINMENT_TOL: f64 = 1e-5;
/// Every `PHI_CHECK_STRIDE`-th record is re-evaluated at `φ = 0`.
const PHI_CHECK_STRIDE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_states: usize,
    pub seed: u64,
    pub ree_tol: f64,
}

impl ScanConfig {
    pub fn new(n_states: usize, seed: u64) -> Self {
        Self {
            n_states,
            seed,
            ree_tol: ReeOptions::default().tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub p: f64,
    pub x_abs: f64,
    pub phi: f64,
    #[serde(flatten)]
    pub potentials: PotentialTriple,
    pub converged: bool,
}

/// `p ~ U[0,1]`, `|x| = u√(p(1−p))` with `u ~ U[0,1]`, `φ ~ U[0, 2π)`.
pub fn sample_state<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitState {
    let p: f64 = rng.random();
    let u: f64 = rng.random();
    let phi: f64 = rng.random::<f64>() * TAU;
    let x_abs = u * (p * (1.0 - p)).sqrt();
    SingleQubitState::new(p, C64::from_polar(x_abs, phi)).expect("|x| ≤ √(p(1−p)) by construction")
}

/// Generator for record `index` of a scan with `seed`.
pub fn record_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Records with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    /// Indices whose REE solve did not converge (kept, flagged).
    pub not_converged: Vec<usize>,
    /// Largest potential change when spot-checked records are re-evaluated at `φ = 0`.
    pub phi_spot_check: f64,
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    if cfg.n_states == 0 {
        return Err(Error::OutOfDomain("n_states must be at least 1".into()));
    }
    let opts = ReeOptions {
        tol: cfg.ree_tol,
        ..ReeOptions::default()
    };
    let evaluated: Vec<(ScanRecord, f64)> = (0..cfg.n_states)
        .into_par_iter()
        .map(|i| {
            let sigma = sample_state(&mut record_rng(cfg.seed, i as u64));
            let (potentials, ree) = evaluate(&balanced_bs_output(&sigma), &opts)?;
            let mut phi_dev = 0.0;
            if i % PHI_CHECK_STRIDE == 0 {
                let real = SingleQubitState::new(sigma.p(), C64::new(sigma.x().norm(), 0.0))?;
                let (t0, _) = evaluate(&balanced_bs_output(&real), &opts)?;
                phi_dev = (t0.np - potentials.np)
                    .abs()
                    .max((t0.cp - potentials.cp).abs())
                    .max((t0.reep - potentials.reep).abs());
            }
            let record = ScanRecord {
                p: sigma.p(),
                x_abs: sigma.x().norm(),
                phi: sigma.phase().rem_euclid(TAU),
                potentials,
                converged: ree.converged,
            };
            Ok((record, phi_dev))
        })
        .collect::<Result<_>>()?;
    let phi_spot_check = evaluated.iter().map(|e| e.1).fold(0.0, f64::max);
    let records: Vec<ScanRecord> = evaluated.into_iter().map(|e| e.0).collect();
    let not_converged = records
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.converged)
        .map(|(i, _)| i)
        .collect();
    Ok(ScanOutcome {
        records,
        not_converged,
        phi_spot_check,
    })
}

/// Upper envelope `N_Z(E)` of the beam-splitter region in the (E_R, N) plane,
/// tabulated on an `N` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaZEnvelope {
    /// `(E_Z(N), N)` pairs, increasing in both coordinates.
    points: Vec<(f64, f64)>,
}

impl SigmaZEnvelope {
    pub fn compute(n_grid: usize) -> Result<Self> {
        let n_grid = n_grid.max(2);
        let mut points: Vec<(f64, f64)> = (1..n_grid)
            .into_par_iter()
            .map(|k| {
                let n = k as f64 / (n_grid - 1) as f64;
                Ok((optimal_sigma_z(n, 1e-7)?.reep, n))
            })
            .collect::<Result<_>>()?;
        points.insert(0, (0.0, 0.0));
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Piecewise-linear `N_Z(E)`.
    pub fn interpolate(&self, e: f64) -> f64 {
        let pts = &self.points;
        if e <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let ((e0, n0), (e1, n1)) = (w[0], w[1]);
            if e <= e1 {
                return if e1 > e0 { n0 + (n1 - n0) * (e - e0) / (e1 - e0) } else { n1 };
            }
        }
        pts[pts.len() - 1].1
    }
}

/// Containment of one plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneReport {
    pub plane: MeasurePlane,
    pub checked: usize,
    /// Largest excursion past the envelope, tolerance included; positive
    /// exactly when `violations` is nonempty.
    pub max_excess: f64,
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub tolerance: f64,
    pub planes: Vec<PlaneReport>,
    /// `max_r [N_r − N_bell(E_r)]` over entangled records; negative means
    /// every record lies strictly below the Bell-diagonal curve.
    pub bell_gap: f64,
    /// Records whose (E_R, N) position needed an exact `σ_Z` optimization.
    pub refined: usize,
}

impl ContainmentReport {
    pub fn is_clean(&self) -> bool {
        self.planes.iter().all(|p| p.violations.is_empty())
    }

    /// `ContainmentViolation` for the first plane with offending records.
    pub fn into_result(self) -> Result<Self> {
        if let Some(bad) = self.planes.iter().find(|p| !p.violations.is_empty()) {
            return Err(Error::ContainmentViolation {
                plane: bad.plane.name().into(),
                offending: bad.violations.clone(),
            });
        }
        Ok(self)
    }
}

/// Records within this distance below the interpolated `σ_Z` envelope are
/// re-checked exactly.
const REFINE_BAND: f64 = 2e-3;

/// Checks scan records against the boundary families in the three planes.
///
/// (N, C): `N_H(C) ≤ N ≤ C`. (E_R, C): `C_pure(E) ≤ C ≤ C_M(E)`.
/// (E_R, N): `N ≤ N_Z(E)`, with the envelope interpolated and ambiguous
/// records resolved by an exact optimization.
pub fn containment_report(
    records: &[ScanRecord],
    envelope: &SigmaZEnvelope,
    tol: f64,
) -> Result<ContainmentReport> {
    let mut nc = PlaneReport {
        plane: MeasurePlane::NC,
        checked: records.len(),
        max_excess: f64::NEG_INFINITY,
        violations: vec![],
    };
    let mut rc = PlaneReport {
        plane: MeasurePlane::ReeC,
        ..nc.clone()
    };
    let horodecki_ree =
        |p: f64| ree_closed_form(ClosedFormFamily::Horodecki, p.clamp(0.0, 1.0)).expect("clamped");
    let pure_ree = |c: f64| eof(c.clamp(0.0, 1.0)).expect("clamped");

    for (i, r) in records.iter().enumerate() {
        let t = &r.potentials;
        let excess = (t.np - t.cp).max(horodecki_negativity(t.cp) - t.np);
        nc.max_excess = nc.max_excess.max(excess - tol);
        if excess > tol {
            nc.violations.push(i);
        }
        let c_lo = invert_increasing(pure_ree, t.reep);
        let c_hi = invert_increasing(horodecki_ree, t.reep);
        let excess = (c_lo - t.cp).max(t.cp - c_hi);
        rc.max_excess = rc.max_excess.max(excess - tol);
        if excess > tol {
            rc.violations.push(i);
        }
    }

    let ambiguous: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.potentials.np > envelope.interpolate(r.potentials.reep) - REFINE_BAND)
        .map(|(i, _)| i)
        .collect();
    let refined = ambiguous.len();
    let exact: Vec<(usize, f64)> = ambiguous
        .into_par_iter()
        .map(|i| {
            let t = records[i].potentials;
            // N > N_Z(E) + tol  ⇔  E < E_Z(N − tol)
            let shifted = t.np - tol;
            if shifted <= 0.0 {
                return Ok((i, f64::NEG_INFINITY));
            }
            let e_z = optimal_sigma_z(shifted, 1e-7)?.reep;
            Ok((i, e_z - t.reep))
        })
        .collect::<Result<_>>()?;
    let mut rn = PlaneReport {
        plane: MeasurePlane::ReeN,
        checked: records.len(),
        // exact margin `E_Z(N − tol) − E` when any record was refined,
        // interpolated N-distance otherwise
        max_excess: if exact.is_empty() {
            records
                .iter()
                .map(|r| r.potentials.np - envelope.interpolate(r.potentials.reep) - tol)
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            exact.iter().map(|(_, d)| *d).fold(f64::NEG_INFINITY, f64::max)
        },
        violations: exact.iter().filter(|(_, d)| *d > 0.0).map(|(i, _)| *i).collect(),
    };
    rn.violations.sort_unstable();

    let bell_gap = records
        .iter()
        .filter(|r| r.potentials.np > 0.0)
        .map(|r| r.potentials.np - invert_increasing(ree_bell, r.potentials.reep))
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(ContainmentReport {
        tolerance: tol,
        planes: vec![nc, rc, rn],
        bell_gap,
        refined,
    })
}

/// REEP of the pure and completely dephased inputs at NP = `N`, for
/// quick reference in reports.
pub fn reference_reep(n: f64) -> (f64, f64) {
    (reep_pure(n), reep_dephased(n))
}
