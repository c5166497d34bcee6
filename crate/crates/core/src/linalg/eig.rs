use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Symmetry tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `M = V diag(values) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, paired with `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v[(i, k)] * v[(j, k)].conj() * fv[k];
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Rejects inputs whose elementwise asymmetry exceeds [`HERMITIAN_TOL`]; the
/// Hermitian part is what gets diagonalized.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary `J = diag(1, e^{-iα}) · R(θ)` on the
/// `(p, q)` plane, accumulating `v ← v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g; // e^{iα}
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let cph = phase.conj();
    // J = [[c, s], [-s e^{-iα}, c e^{-iα}]]
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = cph * (-s);
    let j_qq = cph * c;

    let n = a.dim();
    // a ← a J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // a ← J† a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::paulis;

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let e = hermitian_eig(&paulis()[2]).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&paulis()[2]) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows([[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn ascending_order_and_pairing() {
        let m = ComplexMatrix::diagonal(&[3.0, -1.0, 2.0, 0.5]);
        let e = hermitian_eig(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
        // eigenvector of -1 is e_1
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }
}
