//! Boundary families of the potential planes and the points where they meet.
//!
//! In the (E_R, N) plane the beam-splitter outputs are bounded above by the
//! optimally dephased family `σ_Z` (minimal REEP at fixed NP), while among all
//! two-qubit states the optimal generalized Horodecki family `ρ_A` (maximal
//! REE at fixed N) and the Bell-diagonal family bound the region. Three
//! special points mark where these families cross or merge.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::measures::{
    binary_entropy, eof, horodecki_negativity, ree_closed_form, ree_numerical_with,
    ClosedFormFamily, ReeOptions,
};
use crate::optimize::{bisect, bisect_predicate, golden_section_min};
use crate::potentials::{coherence_from_negativity, dephased_endpoint};
use crate::states::{
    balanced_bs_output, generalized_horodecki, GeneralizedHorodeckiParams, SingleQubitState,
    TwoQubitState,
};

/// Width of the golden-section bracket in `p`.
const P_TOL: f64 = 1e-7;
/// An optimizer `p` within this distance of an interval end counts as the end.
const ENDPOINT_HIT: f64 = 1e-4;
/// REE accuracy used inside the optimizers.
const INNER_REE_TOL: f64 = 1e-11;

fn inner_opts() -> ReeOptions {
    ReeOptions {
        tol: INNER_REE_TOL,
        ..ReeOptions::default()
    }
}

/// Sign choice in the two-valued inversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `q = f₁(p, N) = [p ± √(p² − N² − 2N(1−p))] / 2p`: the balance at which
/// `ρ_GH(p, q)` has negativity `N`.
pub fn q_from_negativity(p: f64, n: f64, branch: Branch) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) || !(0.0..=1.0).contains(&n) {
        return Err(Error::OutOfDomain(format!("f₁ at p = {p}, N = {n}")));
    }
    let disc = p * p - n * n - 2.0 * n * (1.0 - p);
    if disc < -1e-12 {
        return Err(Error::OutOfDomain(format!(
            "p = {p} below the Horodecki point {} for N = {n}",
            dephased_endpoint(n)
        )));
    }
    let q = (p + branch.sign() * disc.max(0.0).sqrt()) / (2.0 * p);
    Ok(q.clamp(0.0, 1.0))
}

/// `q = f₂(p, C) = ½(1 ± √(1 − (C/p)²))`: the balance at which `ρ_GH(p, q)` has
/// concurrence `C`.
pub fn q_from_concurrence(p: f64, c: f64, branch: Branch) -> Result<f64> {
    if !(c > 0.0 && p > 0.0 && p <= 1.0 && c <= p + 1e-12) {
        return Err(Error::OutOfDomain(format!("f₂ at p = {p}, C = {c}")));
    }
    let r = (c / p).min(1.0);
    Ok(0.5 * (1.0 + branch.sign() * (1.0 - r * r).sqrt()))
}

/// Closed-form negativity of `ρ_GH(p, q)`: `√((1−p)² + 4p²q(1−q)) − (1−p)`.
pub fn gh_negativity(p: f64, q: f64) -> f64 {
    ((1.0 - p).powi(2) + 4.0 * p * p * q * (1.0 - q)).sqrt() - (1.0 - p)
}

/// Closed-form concurrence of `ρ_GH(p, q)`: `2p√(q(1−q))`.
pub fn gh_concurrence(p: f64, q: f64) -> f64 {
    2.0 * p * (q * (1.0 - q)).sqrt()
}

/// REEP of a pure input with NP = `N`.
pub fn reep_pure(n: f64) -> f64 {
    eof(n.clamp(0.0, 1.0)).expect("clamped")
}

/// REEP of the completely dephased input with NP = `N`.
pub fn reep_dephased(n: f64) -> f64 {
    ree_closed_form(ClosedFormFamily::Horodecki, dephased_endpoint(n).clamp(0.0, 1.0))
        .expect("clamped")
}

/// REE of the Bell-diagonal state with negativity `N`.
pub fn ree_bell(n: f64) -> f64 {
    1.0 - binary_entropy((1.0 + n.clamp(0.0, 1.0)) / 2.0)
}

/// Memoized REE of a one-parameter family, keyed by the exact bits of `p`.
struct ReeCache<F> {
    build: F,
    values: HashMap<u64, f64>,
    opts: ReeOptions,
}

impl<F: Fn(f64) -> Result<TwoQubitState>> ReeCache<F> {
    fn new(build: F) -> Self {
        Self {
            build,
            values: HashMap::new(),
            opts: inner_opts(),
        }
    }

    fn get(&mut self, p: f64) -> Result<f64> {
        if let Some(&v) = self.values.get(&p.to_bits()) {
            return Ok(v);
        }
        let r = ree_numerical_with(&(self.build)(p)?, &self.opts)?;
        self.values.insert(p.to_bits(), r.value);
        Ok(r.value)
    }
}

/// Optimally dephased input at a given NP.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSigmaZ {
    pub negativity: f64,
    pub state: SingleQubitState,
    pub p_opt: f64,
    pub x_opt: f64,
    pub reep: f64,
    /// `p_opt` coincides with the completely dephased end of the interval.
    pub at_dephased_end: bool,
}

fn sigma_on_line(p: f64, n: f64) -> Result<SingleQubitState> {
    let x = coherence_from_negativity(p, n)?;
    SingleQubitState::new(p.clamp(0.0, 1.0), C64::new(x, 0.0))
}

/// Input `σ[p, f(p, N)]` that minimizes REEP over `p ∈ [N, √(2N(N+1)) − N]`.
pub fn optimal_sigma_z(n: f64, tol: f64) -> Result<OptimalSigmaZ> {
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::OutOfDomain(format!("negativity N = {n}")));
    }
    let (lo, hi) = (n, dephased_endpoint(n).max(n));
    let mut cache = ReeCache::new(|p| Ok(balanced_bs_output(&sigma_on_line(p, n)?)));
    let min = golden_section_min(|p| cache.get(p), lo, hi, tol.min(P_TOL))?;
    let state = sigma_on_line(min.x, n)?;
    Ok(OptimalSigmaZ {
        negativity: n,
        state,
        p_opt: min.x,
        x_opt: state.x().norm(),
        reep: min.value.max(0.0),
        at_dephased_end: (hi - min.x).abs() < ENDPOINT_HIT,
    })
}

/// REE-maximal generalized Horodecki state at a given negativity.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalRhoA {
    pub negativity: f64,
    pub state: TwoQubitState,
    pub params: GeneralizedHorodeckiParams,
    pub branch: Branch,
    pub ree: f64,
    /// The maximizer is the pure state `p = 1`.
    pub is_pure: bool,
}

/// `ρ_GH[p, f₁(p, N)]` maximizing REE over `p ∈ [√(2N(1+N)) − N, 1]`.
///
/// Both branches of `f₁` are evaluated and the larger REE is kept; exact ties
/// go to the minus branch.
pub fn optimal_rho_a(n: f64, tol: f64) -> Result<OptimalRhoA> {
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::OutOfDomain(format!("negativity N = {n}")));
    }
    let lo = dephased_endpoint(n).min(1.0);
    let gh = |p: f64, branch: Branch| -> Result<TwoQubitState> {
        let q = q_from_negativity(p, n, branch)?;
        Ok(generalized_horodecki(GeneralizedHorodeckiParams::new(p, q)?))
    };
    let mut minus = ReeCache::new(|p| gh(p, Branch::Minus));
    let mut plus = ReeCache::new(|p| gh(p, Branch::Plus));
    let mut best_branch = |p: f64| -> Result<(f64, Branch)> {
        let m = minus.get(p)?;
        let pl = plus.get(p)?;
        Ok(if pl > m { (pl, Branch::Plus) } else { (m, Branch::Minus) })
    };
    let min = golden_section_min(|p| Ok(-best_branch(p)?.0), lo, 1.0, tol.min(P_TOL))?;
    let (ree, branch) = best_branch(min.x)?;
    let q = q_from_negativity(min.x, n, branch)?;
    let params = GeneralizedHorodeckiParams::new(min.x, q)?;
    Ok(OptimalRhoA {
        negativity: n,
        state: generalized_horodecki(params),
        params,
        branch,
        ree: ree.max(0.0),
        is_pure: (1.0 - min.x) < ENDPOINT_HIT,
    })
}

/// The three special points of the (E_R, N) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoints {
    /// Pure and completely dephased inputs have equal REEP at NP = `n1`.
    pub n1: f64,
    pub e1: f64,
    /// `ρ_A` becomes pure for N ≥ `n2`.
    pub n2: f64,
    pub e2: f64,
    /// `σ_Z` becomes completely dephased for NP ≥ `n3`.
    pub n3: f64,
    pub e3: f64,
}

const SPECIAL_LO: f64 = 0.1;
const SPECIAL_HI: f64 = 0.9;

/// Locates the special points by bisection in `N` to width `tol`.
pub fn special_points(tol: f64) -> Result<SpecialPoints> {
    let n1 = bisect(
        |n| Ok(reep_pure(n) - reep_dephased(n)),
        SPECIAL_LO,
        SPECIAL_HI,
        tol.min(1e-10),
    )?;
    let n2 = bisect_predicate(
        |n| Ok(optimal_rho_a(n, P_TOL)?.is_pure),
        SPECIAL_LO,
        SPECIAL_HI,
        tol,
    )?;
    let n3 = bisect_predicate(
        |n| Ok(optimal_sigma_z(n, P_TOL)?.at_dephased_end),
        SPECIAL_LO,
        SPECIAL_HI,
        tol,
    )?;
    Ok(SpecialPoints {
        n1,
        e1: reep_pure(n1),
        n2,
        e2: reep_pure(n2),
        n3,
        e3: reep_dephased(n3),
    })
}

/// Curve families of the boundary plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Pure,
    Horodecki,
    BellDiagonal,
    #[serde(rename = "rho_A")]
    RhoA,
    #[serde(rename = "rho_Z")]
    RhoZ,
    GhFixedP,
}

impl CurveKind {
    pub const ALL: [CurveKind; 6] = [
        CurveKind::Pure,
        CurveKind::Horodecki,
        CurveKind::BellDiagonal,
        CurveKind::RhoA,
        CurveKind::RhoZ,
        CurveKind::GhFixedP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Pure => "pure",
            CurveKind::Horodecki => "horodecki",
            CurveKind::BellDiagonal => "bell_diagonal",
            CurveKind::RhoA => "rho_A",
            CurveKind::RhoZ => "rho_Z",
            CurveKind::GhFixedP => "gh_fixed_p",
        }
    }
}

/// Measure planes, abscissa first. `Profile` is `(N, p_Z)` for the dephasing
/// profile of `σ_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurePlane {
    NC,
    ReeC,
    ReeN,
    Profile,
}

impl MeasurePlane {
    pub fn name(self) -> &'static str {
        match self {
            MeasurePlane::NC => "n-c",
            MeasurePlane::ReeC => "ree-c",
            MeasurePlane::ReeN => "ree-n",
            MeasurePlane::Profile => "profile",
        }
    }

    pub fn axes(self) -> (&'static str, &'static str) {
        match self {
            MeasurePlane::NC => ("N", "C"),
            MeasurePlane::ReeC => ("E_R", "C"),
            MeasurePlane::ReeN => ("E_R", "N"),
            MeasurePlane::Profile => ("N", "p"),
        }
    }
}

/// One point of a boundary curve with the parameters of its state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub abscissa: f64,
    pub ordinate: f64,
    pub param1: f64,
    pub param2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub kind: CurveKind,
    pub plane: MeasurePlane,
    pub axes: (String, String),
    pub samples: Vec<CurveSample>,
}

/// Extra inputs of `boundary_curve_with`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    /// Pure-state weight of the `gh_fixed_p` family.
    pub gh_p: f64,
    pub ree: ReeOptions,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            gh_p: 0.8,
            ree: ReeOptions::default(),
        }
    }
}

const PROFILE_LO: f64 = 0.01;
const PROFILE_HI: f64 = 0.99;

/// Samples a family in a measure plane.
pub fn boundary_curve(kind: CurveKind, n_samples: usize, plane: MeasurePlane) -> Result<BoundaryCurve> {
    boundary_curve_with(kind, n_samples, plane, &CurveOptions::default())
}

pub fn boundary_curve_with(
    kind: CurveKind,
    n_samples: usize,
    plane: MeasurePlane,
    opts: &CurveOptions,
) -> Result<BoundaryCurve> {
    use CurveKind::*;
    use MeasurePlane::*;
    if n_samples < 2 {
        return Err(Error::OutOfDomain(format!("n_samples = {n_samples} < 2")));
    }
    let supported = match kind {
        Pure | Horodecki | BellDiagonal | GhFixedP => plane != Profile,
        RhoA => plane == ReeN,
        RhoZ => matches!(plane, ReeN | Profile),
    };
    if !supported {
        return Err(Error::UnsupportedPair {
            kind: kind.name().into(),
            plane: plane.name().into(),
        });
    }
    let grid = |k: usize| k as f64 / (n_samples - 1) as f64;
    let place = |n: f64, c: f64, e: f64, param1: f64, param2: f64| {
        let (abscissa, ordinate) = match plane {
            NC => (n, c),
            ReeC => (e, c),
            ReeN | Profile => (e, n),
        };
        CurveSample {
            abscissa,
            ordinate,
            param1,
            param2,
        }
    };

    let mut samples: Vec<CurveSample> = match kind {
        Pure => (0..n_samples)
            .map(|k| {
                let n = grid(k);
                place(n, n, reep_pure(n), n, (n * (1.0 - n)).max(0.0).sqrt())
            })
            .collect(),
        Horodecki => (0..n_samples)
            .map(|k| {
                let p = grid(k);
                let e = ree_closed_form(ClosedFormFamily::Horodecki, p).expect("p in [0,1]");
                place(horodecki_negativity(p), p, e, p, 0.0)
            })
            .collect(),
        BellDiagonal => (0..n_samples)
            .map(|k| {
                let n = grid(k);
                place(n, n, ree_bell(n), (1.0 + n) / 2.0, 0.0)
            })
            .collect(),
        GhFixedP => {
            let p = opts.gh_p;
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::OutOfDomain(format!("gh_fixed_p weight {p}")));
            }
            (0..n_samples)
                .into_par_iter()
                .map(|k| {
                    let q = 0.5 * grid(k);
                    let params = GeneralizedHorodeckiParams::new(p, q)?;
                    let e = if plane == NC {
                        0.0
                    } else {
                        ree_numerical_with(&generalized_horodecki(params), &opts.ree)?.value
                    };
                    Ok(place(gh_negativity(p, q), gh_concurrence(p, q), e.max(0.0), p, q))
                })
                .collect::<Result<_>>()?
        }
        RhoA => (0..n_samples)
            .into_par_iter()
            .map(|k| {
                let n = grid(k);
                if n == 0.0 {
                    return Ok(place(0.0, 0.0, 0.0, 0.0, 0.0));
                }
                let a = optimal_rho_a(n, P_TOL)?;
                Ok(place(n, 0.0, a.ree, a.params.p, a.params.q))
            })
            .collect::<Result<_>>()?,
        RhoZ => {
            let n_at = |k: usize| match plane {
                Profile => PROFILE_LO + (PROFILE_HI - PROFILE_LO) * grid(k),
                _ => grid(k),
            };
            (0..n_samples)
                .into_par_iter()
                .map(|k| {
                    let n = n_at(k);
                    if n == 0.0 {
                        return Ok(place(0.0, 0.0, 0.0, 0.0, 0.0));
                    }
                    let z = optimal_sigma_z(n, P_TOL)?;
                    Ok(match plane {
                        Profile => CurveSample {
                            abscissa: n,
                            ordinate: z.p_opt,
                            param1: z.x_opt,
                            param2: z.reep,
                        },
                        _ => place(n, 0.0, z.reep, z.p_opt, z.x_opt),
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    samples.sort_by(|a, b| a.abscissa.total_cmp(&b.abscissa));
    samples.dedup_by(|later, earlier| later.abscissa <= earlier.abscissa);
    for s in &mut samples {
        s.abscissa = s.abscissa.clamp(0.0, 1.0);
        s.ordinate = s.ordinate.clamp(0.0, 1.0);
    }
    let (x, y) = plane.axes();
    Ok(BoundaryCurve {
        kind,
        plane,
        axes: (x.to_string(), y.to_string()),
        samples,
    })
}

/// Inverse of an increasing function on `[0, 1]` by bisection.
pub fn invert_increasing<F: Fn(f64) -> f64>(f: F, target: f64) -> f64 {
    if target <= f(0.0) {
        return 0.0;
    }
    if target >= f(1.0) {
        return 1.0;
    }
    bisect(|t| Ok(f(t) - target), 0.0, 1.0, 1e-14).expect("bracketed by the checks above")
}
