//! Local SU(2) rotations and spin tomograms of two-qubit states.
//!
//! The tomogram of `rho` for the rotation `U = R(a1) (x) R(a2)` is the
//! diagonal of `U rho U^H` in the basis `|uu>, |ud>, |du>, |dd>` (u = spin
//! projection +1/2, d = -1/2). For the Werner state the diagonal has the
//! closed form
//!
//! ```text
//! w_uu = w_dd = (1 + x) / 4,   w_ud = w_du = (1 - x) / 4,
//! x = p (cos t1 cos t2 + cos(s1 + s2) sin t1 sin t2)
//! ```
//!
//! which does not depend on the `phi` angles and depends on the `psi` angles
//! only through their sum. Both paths are kept: [`tomogram`] is the
//! reference and [`werner_tomogram_closed_form`] the fast path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix};
use crate::states::{TwoQubitState, WernerParameter};

/// Tolerance on probability validation and normalization.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Euler angles `(theta, phi, psi)` of one qubit rotation, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn new(theta: f64, phi: f64, psi: f64) -> Self {
        Self { theta, phi, psi }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.phi.is_finite() && self.psi.is_finite()
    }
}

/// Rotation angles of both qubits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RotationAngles {
    pub qubit1: EulerAngles,
    pub qubit2: EulerAngles,
}

impl RotationAngles {
    pub fn new(qubit1: EulerAngles, qubit2: EulerAngles) -> Self {
        Self { qubit1, qubit2 }
    }

    /// Angles with both `phi` set to zero.
    pub fn from_theta_psi(theta1: f64, theta2: f64, psi1: f64, psi2: f64) -> Self {
        Self {
            qubit1: EulerAngles::new(theta1, 0.0, psi1),
            qubit2: EulerAngles::new(theta2, 0.0, psi2),
        }
    }

    /// `(theta1, theta2)` with the whole `psi` sum carried by qubit 1.
    pub fn from_psi_sum(theta1: f64, theta2: f64, psi_sum: f64) -> Self {
        Self::from_theta_psi(theta1, theta2, psi_sum, 0.0)
    }

    pub fn psi_sum(&self) -> f64 {
        self.qubit1.psi + self.qubit2.psi
    }

    pub fn is_finite(&self) -> bool {
        self.qubit1.is_finite() && self.qubit2.is_finite()
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(format!("rotation angles {self:?}")))
        }
    }
}

/// Joint spin tomogram `(w_uu, w_ud, w_du, w_dd)` with both marginals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tomogram {
    pub joint: [f64; 4],
    /// `(W1(u), W1(d)) = (w_uu + w_ud, w_du + w_dd)`
    pub marginal1: [f64; 2],
    /// `(W2(u), W2(d)) = (w_uu + w_du, w_ud + w_dd)`
    pub marginal2: [f64; 2],
}

impl Tomogram {
    /// Validates the joint distribution and derives the marginals.
    ///
    /// Entries in `[-1e-12, 0)` are treated as rounding residue and set to 0.
    pub fn from_joint(joint: [f64; 4]) -> Result<Self> {
        for &w in &joint {
            if !w.is_finite() || !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&w) {
                return Err(Error::InvalidDistribution(format!(
                    "tomogram entry {w} outside [0, 1]"
                )));
            }
        }
        let total: f64 = joint.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidDistribution(format!(
                "tomogram sums to {total}"
            )));
        }
        let joint = joint.map(|w| w.clamp(0.0, 1.0));
        Ok(Self {
            joint,
            marginal1: [joint[0] + joint[1], joint[2] + joint[3]],
            marginal2: [joint[0] + joint[2], joint[1] + joint[3]],
        })
    }

    pub fn max_abs_diff(&self, other: &Tomogram) -> f64 {
        self.joint
            .iter()
            .zip(&other.joint)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Single-qubit rotation block
///
/// ```text
/// [  cos(t/2) e^{ i(f+s)/2}   sin(t/2) e^{ i(f-s)/2} ]
/// [ -sin(t/2) e^{ i(s-f)/2}   cos(t/2) e^{-i(f+s)/2} ]
/// ```
pub fn rotation_2x2(a: &EulerAngles) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite(format!("Euler angles {a:?}")));
    }
    let (sin_half, cos_half) = (a.theta / 2.0).sin_cos();
    let sum = (a.phi + a.psi) / 2.0;
    let diff = (a.phi - a.psi) / 2.0;
    ComplexMatrix::new(
        2,
        vec![
            Complex::from_polar(cos_half, sum),
            Complex::from_polar(sin_half, diff),
            -Complex::from_polar(sin_half, -diff),
            Complex::from_polar(cos_half, -sum),
        ],
    )
}

/// `R(qubit1) (x) R(qubit2)`.
pub fn local_unitary(a: &RotationAngles) -> Result<ComplexMatrix> {
    rotation_2x2(&a.qubit1)?.kron(&rotation_2x2(&a.qubit2)?)
}

/// Diagonal of `U rho U^H` for the local rotation `U` built from `a`.
pub fn tomogram(state: &TwoQubitState, a: &RotationAngles) -> Result<Tomogram> {
    let u = local_unitary(a)?;
    let rotated = u.matmul(state.rho())?.matmul(&u.adjoint())?;
    let d = rotated.diagonal();
    Tomogram::from_joint([d[0].re, d[1].re, d[2].re, d[3].re])
}

/// `x = p (cos t1 cos t2 + cos(s1 + s2) sin t1 sin t2)`, the single number
/// the rotated Werner tomogram depends on. `|x| <= |p|`.
pub fn werner_correlation(p: WernerParameter, a: &RotationAngles) -> f64 {
    let (t1, t2) = (a.qubit1.theta, a.qubit2.theta);
    p.value() * (t1.cos() * t2.cos() + a.psi_sum().cos() * t1.sin() * t2.sin())
}

/// Werner tomogram for correlation `x`.
pub(crate) fn werner_joint(x: f64) -> [f64; 4] {
    let same = (1.0 + x) / 4.0;
    let flip = (1.0 - x) / 4.0;
    [same, flip, flip, same]
}

pub fn werner_tomogram_closed_form(p: WernerParameter, a: &RotationAngles) -> Result<Tomogram> {
    a.check_finite()?;
    Tomogram::from_joint(werner_joint(werner_correlation(p, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::werner;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn wp(p: f64) -> WernerParameter {
        WernerParameter::new(p).unwrap()
    }

    fn assert_joint(t: &Tomogram, want: [f64; 4], tol: f64) {
        for (g, w) in t.joint.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = tol);
        }
    }

    fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
        let prod = u.matmul(&u.adjoint()).unwrap();
        prod.max_abs_diff(&ComplexMatrix::identity(u.dim()))
            .unwrap()
            < tol
    }

    #[test]
    fn rotation_at_zero_is_identity() {
        let r = rotation_2x2(&EulerAngles::default()).unwrap();
        assert_eq!(r, ComplexMatrix::identity(2));
    }

    #[test]
    fn rotation_by_pi_about_theta() {
        let r = rotation_2x2(&EulerAngles::new(PI, 0.0, 0.0)).unwrap();
        let want = ComplexMatrix::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!(r.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_rejects_nan() {
        assert!(matches!(
            rotation_2x2(&EulerAngles::new(f64::NAN, 0.0, 0.0)),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn rotations_are_unitary() {
        let a = RotationAngles::new(
            EulerAngles::new(0.3, -1.2, 2.9),
            EulerAngles::new(4.1, 0.5, -0.8),
        );
        assert!(is_unitary(&rotation_2x2(&a.qubit1).unwrap(), 1e-12));
        let u = local_unitary(&a).unwrap();
        assert!(is_unitary(&u, 1e-12));
        assert_abs_diff_eq!(u.determinant().norm(), 1.0, epsilon = 1e-12);
        assert_eq!(
            local_unitary(&RotationAngles::default()).unwrap(),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn maximally_mixed_is_rotation_invariant() {
        let a = RotationAngles::new(
            EulerAngles::new(1.0, 2.0, 3.0),
            EulerAngles::new(-0.4, 0.9, 5.0),
        );
        let t = tomogram(&werner(wp(0.0)), &a).unwrap();
        assert_joint(&t, [0.25; 4], 1e-15);
    }

    #[test]
    fn werner_one_unrotated() {
        let t = tomogram(&werner(wp(1.0)), &RotationAngles::default()).unwrap();
        assert_joint(&t, [0.5, 0.0, 0.0, 0.5], 1e-15);
    }

    #[test]
    fn werner_equatorial_rotation_both_paths() {
        let a = RotationAngles::from_theta_psi(FRAC_PI_2, FRAC_PI_2, 0.7, -0.7);
        let want = [0.475, 0.025, 0.025, 0.475];
        assert_joint(&tomogram(&werner(wp(0.9)), &a).unwrap(), want, 1e-14);
        assert_joint(
            &werner_tomogram_closed_form(wp(0.9), &a).unwrap(),
            want,
            1e-15,
        );
    }

    #[test]
    fn closed_form_examples() {
        let p = 0.6;
        let flipped = RotationAngles::from_theta_psi(0.0, PI, 0.0, 0.0);
        assert_joint(
            &werner_tomogram_closed_form(wp(p), &flipped).unwrap(),
            [
                (1.0 - p) / 4.0,
                (1.0 + p) / 4.0,
                (1.0 + p) / 4.0,
                (1.0 - p) / 4.0,
            ],
            1e-15,
        );
        let aligned = RotationAngles::from_theta_psi(FRAC_PI_2, FRAC_PI_2, 0.0, 0.0);
        assert_joint(
            &werner_tomogram_closed_form(wp(1.0), &aligned).unwrap(),
            [0.5, 0.0, 0.0, 0.5],
            1e-15,
        );
        let any = RotationAngles::from_theta_psi(0.3, 1.1, 2.0, -0.5);
        assert_joint(
            &werner_tomogram_closed_form(wp(0.0), &any).unwrap(),
            [0.25; 4],
            0.0,
        );
    }

    #[test]
    fn marginals_follow_joint_sums() {
        let t = Tomogram::from_joint([0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_abs_diff_eq!(t.marginal1[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(t.marginal1[1], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(t.marginal2[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(t.marginal2[1], 0.6, epsilon = 1e-15);
    }

    #[test]
    fn from_joint_clamps_residue_and_rejects_garbage() {
        let t = Tomogram::from_joint([0.5, -1e-13, 1e-13, 0.5]).unwrap();
        assert_eq!(t.joint[1], 0.0);
        assert!(Tomogram::from_joint([0.5, -0.01, 0.01, 0.5]).is_err());
        assert!(Tomogram::from_joint([0.5, 0.5, 0.5, 0.0]).is_err());
    }
}
