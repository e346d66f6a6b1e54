//! Dense complex linear algebra for the 2x2 and 4x4 matrices used by the
//! rest of the crate.
//!
//! Storage is row-major. The two-qubit basis is ordered with the first qubit
//! as the slower index, so row `2 * i + j` of a 4x4 matrix carries the label
//! `(i, j)` and `rho[(2*i + j, 2*k + l)]` is the element `rho_{ijkl}`.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Tolerance used when validating Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Which qubit of a two-qubit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

impl TryFrom<usize> for Subsystem {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Subsystem::First),
            2 => Ok(Subsystem::Second),
            other => Err(Error::BadSubsystem(other)),
        }
    }
}

/// Square complex matrix in row-major order with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if let Some(z) = entries
            .iter()
            .find(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite(format!("matrix entry {z}")));
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = Complex::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    /// Returns a copy with `value` written at `(row, col)`.
    pub fn with_entry(&self, row: usize, col: usize, value: Complex) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries[row * self.dim + col] = value;
        Self::new(self.dim, entries)
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Standard matrix product `self * other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(ComplexMatrix {
            dim: n,
            entries: out,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        ComplexMatrix {
            dim: n,
            entries: out,
        }
    }

    /// Kronecker product of two 2x2 matrices, `self[0][0] * other` as the
    /// leading block.
    pub fn kron(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if other.dim != 2 {
            return Err(Error::UnsupportedDimension(other.dim));
        }
        let mut out = vec![Complex::new(0.0, 0.0); 16];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[(2 * i + k) * 4 + (2 * j + l)] = self.get(i, j) * other.get(k, l);
                    }
                }
            }
        }
        Ok(ComplexMatrix {
            dim: 4,
            entries: out,
        })
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Reduced 2x2 matrix of a 4x4 two-qubit operator.
    ///
    /// Keeping the first qubit gives `rho1[i][k] = sum_j rho_{ij,kj}`,
    /// keeping the second gives `rho2[j][l] = sum_i rho_{ij,il}`.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<ComplexMatrix> {
        if self.dim != 4 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let el = |i: usize, j: usize, k: usize, l: usize| self.get(2 * i + j, 2 * k + l);
        let mut out = vec![Complex::new(0.0, 0.0); 4];
        for a in 0..2 {
            for b in 0..2 {
                out[2 * a + b] = match keep {
                    Subsystem::First => el(a, 0, b, 0) + el(a, 1, b, 1),
                    Subsystem::Second => el(0, a, 0, b) + el(1, a, 1, b),
                };
            }
        }
        Ok(ComplexMatrix {
            dim: 2,
            entries: out,
        })
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = Complex::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / d;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Real eigenvalues of a Hermitian matrix in descending order.
    ///
    /// Cyclic Jacobi: each step zeroes one off-diagonal pair with a complex
    /// Givens rotation; sweeps stop once the off-diagonal Frobenius norm drops
    /// below `1e-14` (scaled by the matrix norm when that exceeds 1).
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let n = self.dim;
        // Symmetrize so rounding in the input cannot leak into the rotations.
        let mut a = self.clone();
        for i in 0..n {
            for j in i..n {
                let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
                a.entries[i * n + j] = v;
                a.entries[j * n + i] = v.conj();
            }
        }

        let scale = a
            .entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1.0);
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) < JACOBI_TOL * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, p, q);
                }
            }
        }

        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eig.sort_by(|x, y| y.total_cmp(x));
        Ok(eig)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A <- G^H A G` where `G` zeroes `a_pq`.
///
/// With `a_pq = r e^{i alpha}`, `G = D R` where `D = diag(1, e^{-i alpha})`
/// on `(p, q)` makes the pivot block real symmetric and `R` is the classical
/// real Jacobi rotation for that block.
fn jacobi_rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G restricted to (p, q): [[c, s], [-s e^{-i alpha}, c e^{-i alpha}]]
    let g_pp = Complex::new(c, 0.0);
    let g_pq = Complex::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    // A <- A G (columns p, q)
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.entries[i * n + p] = aip * g_pp + aiq * g_qp;
        a.entries[i * n + q] = aip * g_pq + aiq * g_qq;
    }
    // A <- G^H A (rows p, q)
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.entries[p * n + j] = g_pp.conj() * apj + g_qp.conj() * aqj;
        a.entries[q * n + j] = g_pq.conj() * apj + g_qq.conj() * aqj;
    }
    a.entries[p * n + q] = Complex::new(0.0, 0.0);
    a.entries[q * n + p] = Complex::new(0.0, 0.0);
    a.entries[p * n + p].im = 0.0;
    a.entries[q * n + q].im = 0.0;
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        &self.entries[row * self.dim + col]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sample4() -> ComplexMatrix {
        ComplexMatrix::new(
            4,
            (0..16)
                .map(|k| c(k as f64 * 0.3 - 1.0, (k % 5) as f64 * 0.7))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_zero_products() {
        let m = sample4();
        assert_eq!(ComplexMatrix::identity(4).matmul(&m).unwrap(), m);
        assert_eq!(
            m.matmul(&ComplexMatrix::zeros(4)).unwrap(),
            ComplexMatrix::zeros(4)
        );
    }

    #[test]
    fn matmul_rejects_mismatched_dims() {
        let err = ComplexMatrix::identity(2)
            .matmul(&ComplexMatrix::identity(4))
            .unwrap_err();
        assert_eq!(err, Error::DimensionMismatch(2, 4));
    }

    #[test]
    fn constructor_validates_entries() {
        assert!(matches!(
            ComplexMatrix::new(2, vec![c(0.0, 0.0); 3]),
            Err(Error::EntryCount {
                expected: 4,
                got: 3
            })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let m = sample4();
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(
            ComplexMatrix::identity(2).adjoint(),
            ComplexMatrix::identity(2)
        );
        assert_eq!(m.adjoint().get(1, 3), m.get(3, 1).conj());
    }

    #[test]
    fn kron_of_identities_and_projectors() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));
        let up = ComplexMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(
            up.kron(&up).unwrap(),
            ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(
            i2.kron(&ComplexMatrix::identity(4)).unwrap_err(),
            Error::UnsupportedDimension(4)
        );
    }

    #[test]
    fn kron_block_order() {
        let a = ComplexMatrix::from_real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, &[0.0, 5.0, 6.0, 7.0]).unwrap();
        let k = a.kron(&b).unwrap();
        // leading block is a11 * b, top-right block a12 * b
        assert_eq!(k.get(0, 1), c(5.0, 0.0));
        assert_eq!(k.get(1, 0), c(6.0, 0.0));
        assert_eq!(k.get(0, 3), c(10.0, 0.0));
        assert_eq!(k.get(3, 2), c(24.0, 0.0));
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(ComplexMatrix::identity(4).trace(), c(4.0, 0.0));
    }

    #[test]
    fn partial_trace_of_product_projector() {
        let rho = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            rho.partial_trace(Subsystem::First).unwrap(),
            ComplexMatrix::from_diag(&[1.0, 0.0])
        );
        assert_eq!(
            rho.partial_trace(Subsystem::Second).unwrap(),
            ComplexMatrix::from_diag(&[1.0, 0.0])
        );
    }

    #[test]
    fn partial_trace_index_formulas() {
        let m = sample4();
        let el = |i: usize, j: usize, k: usize, l: usize| {
            m.get(2 * (i - 1) + (j - 1), 2 * (k - 1) + (l - 1))
        };
        let r1 = m.partial_trace(Subsystem::First).unwrap();
        assert_eq!(r1.get(0, 0), el(1, 1, 1, 1) + el(1, 2, 1, 2));
        assert_eq!(r1.get(0, 1), el(1, 1, 2, 1) + el(1, 2, 2, 2));
        assert_eq!(r1.get(1, 0), el(2, 1, 1, 1) + el(2, 2, 1, 2));
        assert_eq!(r1.get(1, 1), el(2, 1, 2, 1) + el(2, 2, 2, 2));
        let r2 = m.partial_trace(Subsystem::Second).unwrap();
        assert_eq!(r2.get(0, 0), el(1, 1, 1, 1) + el(2, 1, 2, 1));
        assert_eq!(r2.get(0, 1), el(1, 1, 1, 2) + el(2, 1, 2, 2));
        assert_eq!(r2.get(1, 0), el(1, 2, 1, 1) + el(2, 2, 2, 1));
        assert_eq!(r2.get(1, 1), el(1, 2, 1, 2) + el(2, 2, 2, 2));
    }

    #[test]
    fn partial_trace_errors() {
        assert_eq!(
            ComplexMatrix::identity(2)
                .partial_trace(Subsystem::First)
                .unwrap_err(),
            Error::UnsupportedDimension(2)
        );
        assert_eq!(Subsystem::try_from(3).unwrap_err(), Error::BadSubsystem(3));
        assert_eq!(Subsystem::try_from(2).unwrap(), Subsystem::Second);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            m.hermitian_eigenvalues(),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eigenvalues_of_complex_hermitian_2x2() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues (5 +- sqrt(9)) / 2 = 4, 1
        let m = ComplexMatrix::new(2, vec![c(2.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(3.0, 0.0)])
            .unwrap();
        let eig = m.hermitian_eigenvalues().unwrap();
        assert_abs_diff_eq!(eig[0], 4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eig[1], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn eigenvalues_of_dense_complex_hermitian_4x4() {
        // H = M + M^H; check the characteristic polynomial via det(H - lambda I)
        let m = sample4();
        let h = ComplexMatrix::new(
            4,
            m.entries()
                .iter()
                .zip(m.adjoint().entries())
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        let eig = h.hermitian_eigenvalues().unwrap();
        assert!(eig.windows(2).all(|w| w[0] >= w[1]));
        assert_abs_diff_eq!(eig.iter().sum::<f64>(), h.trace().re, epsilon = 1e-10);
        for &lambda in &eig {
            let shifted = ComplexMatrix::new(
                4,
                h.entries()
                    .iter()
                    .enumerate()
                    .map(|(k, z)| if k % 5 == 0 { z - lambda } else { *z })
                    .collect(),
            )
            .unwrap();
            assert!(shifted.determinant().norm() < 1e-8, "lambda {lambda}");
        }
    }

    #[test]
    fn determinant_of_triangular_and_permuted() {
        let m = ComplexMatrix::from_real(2, &[0.0, 2.0, 3.0, 0.0]).unwrap();
        assert_abs_diff_eq!(m.determinant().re, -6.0, epsilon = 1e-15);
        assert_eq!(ComplexMatrix::identity(4).determinant(), c(1.0, 0.0));
    }
}
