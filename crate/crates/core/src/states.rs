//! Two-qubit density matrices and the Werner family.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem, HERMITIAN_TOL};

const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;

/// Werner mixing parameter, `-1/3 <= p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParameter(f64);

impl WernerParameter {
    pub const MIN: f64 = -1.0 / 3.0;
    pub const MAX: f64 = 1.0;

    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite(format!("Werner parameter {p}")));
        }
        if !(Self::MIN..=Self::MAX).contains(&p) {
            return Err(Error::ParameterOutOfRange(p));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `p > 1/3`. Metadata only.
    pub fn is_entangled(self) -> bool {
        self.0 > 1.0 / 3.0
    }
}

impl TryFrom<f64> for WernerParameter {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<WernerParameter> for f64 {
    fn from(p: WernerParameter) -> f64 {
        p.0
    }
}

/// A validated 4x4 two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity (all within `1e-10`).
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::UnsupportedDimension(rho.dim()));
        }
        let defect = rho.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min_eig = rho.hermitian_eigenvalues()?[3];
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Reduced single-qubit density matrix of `subsystem`.
    pub fn reduced(&self, subsystem: Subsystem) -> Result<ComplexMatrix> {
        self.rho.partial_trace(subsystem)
    }
}

/// Unvalidated Werner matrix: diagonal `((1+p)/4, (1-p)/4, (1-p)/4, (1+p)/4)`
/// and `p/2` in the two anti-corners.
pub fn werner_matrix(p: f64) -> ComplexMatrix {
    let d = (1.0 + p) / 4.0;
    let e = (1.0 - p) / 4.0;
    let k = p / 2.0;
    #[rustfmt::skip]
    let entries = [
        d,   0.0, 0.0, k,
        0.0, e,   0.0, 0.0,
        0.0, 0.0, e,   0.0,
        k,   0.0, 0.0, d,
    ];
    ComplexMatrix::from_real(4, &entries).expect("finite 4x4 entries")
}

pub fn werner(p: WernerParameter) -> TwoQubitState {
    TwoQubitState {
        rho: werner_matrix(p.value()),
    }
}

/// Analytic spectrum `[(1+3p)/4, (1-p)/4, (1-p)/4, (1-p)/4]` (not sorted).
pub fn werner_spectrum(p: WernerParameter) -> [f64; 4] {
    let p = p.value();
    let rest = (1.0 - p) / 4.0;
    [(1.0 + 3.0 * p) / 4.0, rest, rest, rest]
}

/// Pure product state `|00><00|`.
pub fn product_up_up() -> TwoQubitState {
    TwoQubitState {
        rho: ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Complex;
    use approx::assert_abs_diff_eq;

    fn wp(p: f64) -> WernerParameter {
        WernerParameter::new(p).unwrap()
    }

    fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn parameter_range_is_strict() {
        assert!(WernerParameter::new(-1.0 / 3.0).is_ok());
        assert!(WernerParameter::new(1.0).is_ok());
        assert_eq!(
            WernerParameter::new(1.0 + 1e-12).unwrap_err(),
            Error::ParameterOutOfRange(1.0 + 1e-12)
        );
        assert!(matches!(
            WernerParameter::new(-0.34),
            Err(Error::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            WernerParameter::new(f64::NAN),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn entanglement_threshold() {
        assert!(!wp(1.0 / 3.0).is_entangled());
        assert!(wp(0.34).is_entangled());
        assert!(!wp(-0.2).is_entangled());
    }

    #[test]
    fn werner_at_zero_is_maximally_mixed() {
        assert_eq!(*werner(wp(0.0)).rho(), ComplexMatrix::from_diag(&[0.25; 4]));
    }

    #[test]
    fn werner_at_one() {
        let rho = werner(wp(1.0)).into_matrix();
        let expected = ComplexMatrix::from_real(
            4,
            &[
                0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5,
            ],
        )
        .unwrap();
        assert_eq!(rho, expected);
    }

    #[test]
    fn werner_at_lower_endpoint() {
        let rho = werner(wp(-1.0 / 3.0)).into_matrix();
        let diag: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
        for (got, want) in diag
            .iter()
            .zip([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
        {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(rho.get(0, 3).re, -1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(3, 0).re, -1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn werner_passes_validation_on_dense_grid() {
        for k in 0..=120 {
            let p = -1.0 / 3.0 + (4.0 / 3.0) * k as f64 / 120.0;
            let p = p.min(1.0);
            TwoQubitState::new(werner_matrix(p)).unwrap();
        }
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(werner_spectrum(wp(1.0)), [1.0, 0.0, 0.0, 0.0]);
        let s = werner_spectrum(wp(-1.0 / 3.0));
        assert_abs_diff_eq!(s[0], 0.0, epsilon = 1e-16);
        for v in &s[1..] {
            assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-16);
        }
        let s = werner_spectrum(wp(0.9));
        assert_abs_diff_eq!(s[0], 0.925, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.025, epsilon = 1e-15);
    }

    #[test]
    fn numerical_spectrum_matches_analytic() {
        for p in [-1.0 / 3.0, -0.1, 0.0, 0.5, 0.9, 1.0] {
            let numeric = werner(wp(p)).rho().hermitian_eigenvalues().unwrap();
            let analytic = sorted_desc(werner_spectrum(wp(p)).to_vec());
            for (a, b) in numeric.iter().zip(&analytic) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
        let e = werner(wp(0.5)).rho().hermitian_eigenvalues().unwrap();
        for (a, b) in e.iter().zip([0.625, 0.125, 0.125, 0.125]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduced_states_are_half_identity() {
        let half = ComplexMatrix::from_diag(&[0.5, 0.5]);
        for p in [-1.0 / 3.0, 0.0, 0.37, 1.0] {
            let s = werner(wp(p));
            for sub in [Subsystem::First, Subsystem::Second] {
                assert!(s.reduced(sub).unwrap().max_abs_diff(&half).unwrap() <= 1e-15);
            }
        }
        let r = product_up_up().reduced(Subsystem::First).unwrap();
        assert_eq!(r, ComplexMatrix::from_diag(&[1.0, 0.0]));
    }

    #[test]
    fn validation_rejects_broken_matrices() {
        let rho = werner_matrix(1.0);
        let bumped = rho
            .with_entry(0, 3, Complex::new(0.51, 0.0))
            .unwrap()
            .with_entry(3, 0, Complex::new(0.51, 0.0))
            .unwrap();
        assert!(matches!(
            TwoQubitState::new(bumped),
            Err(Error::NotPositive(_))
        ));

        let skew = rho.with_entry(0, 3, Complex::new(0.4, 0.0)).unwrap();
        assert!(matches!(
            TwoQubitState::new(skew),
            Err(Error::NotHermitian(_))
        ));

        let heavy = ComplexMatrix::from_diag(&[0.5, 0.5, 0.5, 0.0]);
        assert!(matches!(
            TwoQubitState::new(heavy),
            Err(Error::InvalidTrace(_))
        ));

        assert!(matches!(
            TwoQubitState::new(ComplexMatrix::identity(2)),
            Err(Error::UnsupportedDimension(2))
        ));
    }
}
