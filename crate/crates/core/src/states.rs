//! Input photon-number qubits, beam-splitter outputs, and the two-qubit
//! boundary families.
//!
//! Two-qubit matrices use the basis `|00⟩, |01⟩, |10⟩, |11⟩` with mode 1 as the
//! first tensor factor. The singlet is `|ψ⁻⟩ = (|10⟩ − |01⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_transpose, ComplexMatrix, Subsystem, C64, ZERO};

const COHERENCE_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;

/// `σ(p, x) = [[1−p, x], [x*, p]]` in the `{|0⟩, |1⟩}` Fock basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    p: f64,
    x: C64,
}

impl SingleQubitState {
    /// Validating constructor; `|x|² ≤ p(1−p)` up to `1e-12`.
    pub fn new(p: f64, x: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfDomain(format!("mixing parameter p = {p}")));
        }
        if !(x.re.is_finite() && x.im.is_finite()) || x.norm_sqr() > p * (1.0 - p) + COHERENCE_TOL
        {
            return Err(Error::OutOfDomain(format!(
                "coherence |x|² = {} exceeds p(1−p) = {}",
                x.norm_sqr(),
                p * (1.0 - p)
            )));
        }
        Ok(Self { p, x })
    }

    pub fn vacuum() -> Self {
        Self { p: 0.0, x: ZERO }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn x(&self) -> C64 {
        self.x
    }

    /// `Arg(x)`; zero for incoherent states.
    pub fn phase(&self) -> f64 {
        self.x.arg()
    }

    pub fn is_vacuum(&self) -> bool {
        self.p == 0.0
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows([
            [C64::new(1.0 - self.p, 0.0), self.x],
            [self.x.conj(), C64::new(self.p, 0.0)],
        ])
    }
}

/// `σ(p, x)`.
pub fn single_qubit(p: f64, x: C64) -> Result<SingleQubitState> {
    SingleQubitState::new(p, x)
}

/// `√(1−p)|0⟩ + e^{iφ}√p|1⟩`, i.e. `σ(p, √(p(1−p)) e^{iφ})`.
pub fn pure_qubit(p: f64, phi: f64) -> Result<SingleQubitState> {
    if !(0.0..=1.0).contains(&p) || !phi.is_finite() {
        return Err(Error::OutOfDomain(format!("pure qubit p = {p}, φ = {phi}")));
    }
    SingleQubitState::new(p, C64::from_polar((p * (1.0 - p)).sqrt(), phi))
}

/// A validated 4x4 density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity (each within `1e-10`),
    /// then divides by the computed trace.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                actual: matrix.dim(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NotAState("non-finite entries".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.min() < -STATE_TOL {
            return Err(Error::NotAState(format!(
                "negative eigenvalue {:.3e}",
                eig.min()
            )));
        }
        Ok(Self::normalized(matrix))
    }

    /// Trusted constructors: normalizes the trace and restores exact Hermiticity.
    pub(crate) fn normalized(matrix: ComplexMatrix) -> Self {
        let tr = matrix.trace().re;
        Self {
            matrix: matrix.hermitian_part().scale(1.0 / tr),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `ρ^Γ` with respect to the second qubit.
    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.matrix, Subsystem::Second).expect("4x4 by construction")
    }

    /// Positive partial transpose (up to `tol` on the smallest eigenvalue of `ρ^Γ`).
    pub fn is_ppt(&self, tol: f64) -> bool {
        hermitian_eig(&self.partial_transpose())
            .map(|e| e.min() >= -tol)
            .unwrap_or(false)
    }

    /// Applies local unitaries `(U₁ ⊗ U₂) ρ (U₁ ⊗ U₂)†`.
    pub fn local_unitary(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Self {
        let u = u1.kron(u2);
        Self::normalized(self.matrix.conjugate_by(&u.adjoint()))
    }

    /// Exchanges the two qubits.
    pub fn swapped(&self) -> Self {
        const PERM: [usize; 4] = [0, 2, 1, 3];
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(PERM[i], PERM[j])] = self.matrix[(i, j)];
            }
        }
        Self { matrix: m }
    }

    /// Random full-rank (or rank-`rank`) state from the induced Ginibre measure.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Self {
        let rank = rank.clamp(1, 4);
        let mut g = vec![ZERO; 4 * rank];
        for z in g.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *z = C64::new(re, im);
        }
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for k in 0..rank {
                    acc += g[i * rank + k] * g[j * rank + k].conj();
                }
                m[(i, j)] = acc;
            }
        }
        Self::normalized(m)
    }
}

/// Beam splitter with angle `θ ∈ [0, π]`: `t = cos(θ/2)`, `r = sin(θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterConfig {
    theta: f64,
}

impl BeamSplitterConfig {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::OutOfDomain(format!("beam-splitter angle θ = {theta}")));
        }
        Ok(Self { theta })
    }

    /// The 50/50 splitter, `θ = π/2`.
    pub fn balanced() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg.to_radians())
    }

    /// Splitter with reflectivity `R = r²`.
    pub fn from_reflectivity(reflectivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reflectivity) {
            return Err(Error::OutOfDomain(format!("reflectivity R = {reflectivity}")));
        }
        Self::new(2.0 * reflectivity.sqrt().asin())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Amplitude transmission coefficient `t`.
    pub fn t(&self) -> f64 {
        if self.is_balanced() {
            FRAC_1_SQRT_2
        } else {
            (self.theta / 2.0).cos()
        }
    }

    /// Amplitude reflection coefficient `r`.
    pub fn r(&self) -> f64 {
        if self.is_balanced() {
            FRAC_1_SQRT_2
        } else {
            (self.theta / 2.0).sin()
        }
    }

    pub fn transmissivity(&self) -> f64 {
        if self.is_balanced() {
            0.5
        } else {
            self.t() * self.t()
        }
    }

    pub fn reflectivity(&self) -> f64 {
        if self.is_balanced() {
            0.5
        } else {
            self.r() * self.r()
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.theta == std::f64::consts::FRAC_PI_2
    }
}

/// Parameters of `ρ_GH(p, q) = p|ψ_q⟩⟨ψ_q| + (1−p)|00⟩⟨00|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedHorodeckiParams {
    /// Weight of the entangled pure component.
    pub p: f64,
    /// Balance of `|ψ_q⟩ = √q|01⟩ + √(1−q)|10⟩`.
    pub q: f64,
}

impl GeneralizedHorodeckiParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfDomain(format!("ρ_GH parameters p = {p}, q = {q}")));
        }
        Ok(Self { p, q })
    }
}

/// Weights on `|ψ⁻⟩, |ψ⁺⟩, |φ⁻⟩, |φ⁺⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalWeights([f64; 4]);

impl BellDiagonalWeights {
    pub fn new(weights: [f64; 4]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfDomain(format!(
                "Bell-diagonal weights {weights:?} (sum {sum})"
            )));
        }
        Ok(Self(weights))
    }

    pub fn weights(&self) -> [f64; 4] {
        self.0
    }

    /// `Λ = max_j λ_j`.
    pub fn lambda_max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// Bell basis in the order `|ψ⁻⟩, |ψ⁺⟩, |φ⁻⟩, |φ⁺⟩`.
pub fn bell_basis() -> [[C64; 4]; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [
        [ZERO, -h, h, ZERO],
        [ZERO, h, h, ZERO],
        [h, ZERO, ZERO, -h],
        [h, ZERO, ZERO, h],
    ]
}

/// Output of a balanced lossless splitter fed with `σ` and vacuum.
pub fn balanced_bs_output(sigma: &SingleQubitState) -> TwoQubitState {
    let p = sigma.p;
    let x = sigma.x * FRAC_1_SQRT_2;
    let xc = x.conj();
    let r = |v: f64| C64::new(v, 0.0);
    TwoQubitState::normalized(ComplexMatrix::from_rows([
        [r(1.0 - p), -x, x, ZERO],
        [-xc, r(p / 2.0), r(-p / 2.0), ZERO],
        [xc, r(-p / 2.0), r(p / 2.0), ZERO],
        [ZERO, ZERO, ZERO, ZERO],
    ]))
}

/// Output of a splitter with angle `θ` fed with `σ` and vacuum.
pub fn tunable_bs_output(sigma: &SingleQubitState, bs: &BeamSplitterConfig) -> TwoQubitState {
    let (p, x) = (sigma.p, sigma.x);
    let (t, r) = (bs.t(), bs.r());
    let re = |v: f64| C64::new(v, 0.0);
    TwoQubitState::normalized(ComplexMatrix::from_rows([
        [re(1.0 - p), -x * r, x * t, ZERO],
        [-x.conj() * r, re(p * r * r), re(-p * r * t), ZERO],
        [x.conj() * t, re(-p * r * t), re(p * t * t), ZERO],
        [ZERO, ZERO, ZERO, ZERO],
    ]))
}

/// Horodecki state `p|ψ⁻⟩⟨ψ⁻| + (1−p)|00⟩⟨00|`.
pub fn horodecki_state(p: f64) -> Result<TwoQubitState> {
    Ok(balanced_bs_output(&single_qubit(p, ZERO)?))
}

/// `ρ_GH(p, q)`.
pub fn generalized_horodecki(params: GeneralizedHorodeckiParams) -> TwoQubitState {
    let GeneralizedHorodeckiParams { p, q } = params;
    let psi = [
        ZERO,
        C64::new(q.sqrt(), 0.0),
        C64::new((1.0 - q).sqrt(), 0.0),
        ZERO,
    ];
    let mut m = ComplexMatrix::outer(&psi).scale(p);
    m[(0, 0)] += C64::new(1.0 - p, 0.0);
    TwoQubitState::normalized(m)
}

/// `Σ λ_i |β_i⟩⟨β_i|`.
pub fn bell_diagonal(w: &BellDiagonalWeights) -> TwoQubitState {
    let basis = bell_basis();
    let mut m = ComplexMatrix::zeros(4);
    for (lambda, beta) in w.0.iter().zip(basis.iter()) {
        if *lambda > 0.0 {
            m = &m + &ComplexMatrix::outer(beta).scale(*lambda);
        }
    }
    TwoQubitState::normalized(m)
}

/// Werner state parametrized by its negativity:
/// `(1+2N)/3 |ψ⁻⟩⟨ψ⁻| + (1−N)/6 I`.
pub fn werner(negativity: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&negativity) {
        return Err(Error::OutOfDomain(format!("Werner negativity {negativity}")));
    }
    let singlet = ComplexMatrix::outer(&bell_basis()[0]).scale((1.0 + 2.0 * negativity) / 3.0);
    let noise = ComplexMatrix::identity(4).scale((1.0 - negativity) / 6.0);
    Ok(TwoQubitState::normalized(&singlet + &noise))
}

/// Werner state as Bell-diagonal weights: `Λ = (1+N)/2` on the singlet.
pub fn werner_weights(negativity: f64) -> Result<BellDiagonalWeights> {
    if !(0.0..=1.0).contains(&negativity) {
        return Err(Error::OutOfDomain(format!("Werner negativity {negativity}")));
    }
    let rest = (1.0 - negativity) / 6.0;
    BellDiagonalWeights::new([1.0 - 3.0 * rest, rest, rest, rest])
}

/// `|ψ_out⟩ = √(1−p)|00⟩ + √(p/2)(|10⟩ − |01⟩)`, the balanced-splitter image of
/// a pure qubit.
pub fn pure_output(p: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain(format!("pure output p = {p}")));
    }
    let a = (p / 2.0).sqrt();
    let psi = [
        C64::new((1.0 - p).sqrt(), 0.0),
        C64::new(-a, 0.0),
        C64::new(a, 0.0),
        ZERO,
    ];
    Ok(TwoQubitState::normalized(ComplexMatrix::outer(&psi)))
}

/// `|ψ_q⟩⟨ψ_q|` with `|ψ_q⟩ = √q|01⟩ + √(1−q)|10⟩`.
pub fn psi_q(q: f64) -> Result<TwoQubitState> {
    let params = GeneralizedHorodeckiParams::new(1.0, q)?;
    Ok(generalized_horodecki(params))
}
