//! Dense complex matrices of small dimension (2x2 and 4x4 in practice),
//! the Hermitian eigensolver, and the entropy primitives built on it.
//!
//! All logarithms returned to callers are base 2.

mod eig;
pub(crate) mod entropy;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eig::{hermitian_eig, HermitianEigen};
pub use entropy::{log_frechet_derivative, relative_entropy, von_neumann_entropy};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Eigenvalues in `[-EIG_CLIP, 0]` are treated as exact zeros.
pub const EIG_CLIP: f64 = 1e-10;

/// Row-major square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; panics if the length is not a square.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "entry count does not match dimension");
        Self { dim, data }
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self {
            dim: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self {
            dim: N,
            data: rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut m = Self::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let s = self[(i, j)];
                for k in 0..b {
                    for l in 0..b {
                        m[(i * b + k, j * b + l)] = s * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim;
        assert_eq!(n, other.dim);
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// `U† · self · U`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(&u.adjoint() * self) * u
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!(n, rhs.dim, "dimension mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Which tensor factor of a two-qubit operator gets transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial transpose `ρ^Γ` of a 4x4 operator in the `|00⟩,|01⟩,|10⟩,|11⟩` basis.
pub fn partial_transpose(rho: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    // ⟨ab|ρ|cd⟩
                    let v = rho[(2 * a + b, 2 * c + d)];
                    let (r, s) = match subsystem {
                        Subsystem::First => (2 * c + b, 2 * a + d),
                        Subsystem::Second => (2 * a + d, 2 * c + b),
                    };
                    out[(r, s)] = v;
                }
            }
        }
    }
    Ok(out)
}

/// The four single-qubit Paulis `I, X, Y, Z`.
pub fn paulis() -> [ComplexMatrix; 4] {
    let i = C64::new(0.0, 1.0);
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]),
        ComplexMatrix::from_rows([[ZERO, -i], [i, ZERO]]),
        ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]),
    ]
}
