//! Maximization of the Werner tomographic information `H~` over rotation
//! angles.
//!
//! With `x = p (cos t1 cos t2 + cos s sin t1 sin t2)`, `s = psi1 + psi2` and
//! `L = ln((1-x)/4) - ln((1+x)/4)` the first partials are
//!
//! ```text
//! dH/dt1 = p/2 (cos t2 sin t1 - cos s cos t1 sin t2) L
//! dH/dt2 = p/2 (cos t1 sin t2 - cos s cos t2 sin t1) L
//! dH/ds1 = dH/ds2 = p/2 sin s sin t1 sin t2 L
//! ```
//!
//! `L` diverges where a tomogram entry vanishes (`|x| = 1`, only reachable
//! for `p = 1`); those points are reported as [`Error::BoundaryOfSupport`].

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::information::h_tilde_from_correlation;
use crate::states::WernerParameter;
use crate::tomography::{werner_correlation, RotationAngles};

/// Central-difference step for [`hessian3`].
pub const HESSIAN_STEP: f64 = 1e-4;
/// Smallest accepted [`maximize_grid`] resolution.
pub const MIN_GRID_RESOLUTION: usize = 8;
/// Grid used to seed [`maximize_refined`].
pub const REFINE_SEED_RESOLUTION: usize = 16;

const ASCENT_GRADIENT_TOL: f64 = 1e-10;
const ASCENT_MAX_ITERATIONS: usize = 10_000;
const ASCENT_MIN_STEP: f64 = 1e-12;
const ARMIJO: f64 = 1e-4;
// Values of H~ are O(1): differences below VALUE_NOISE are rounding, and a
// predicted gain below VALUE_RESOLUTION cannot be confirmed from values.
const VALUE_NOISE: f64 = 1e-15;
const VALUE_RESOLUTION: f64 = 1e-13;

/// Partial derivatives of `H~` with respect to the four angles it depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gradient4 {
    pub d_theta1: f64,
    pub d_theta2: f64,
    pub d_psi1: f64,
    pub d_psi2: f64,
}

impl Gradient4 {
    pub fn max_abs(&self) -> f64 {
        [self.d_theta1, self.d_theta2, self.d_psi1, self.d_psi2]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Analytic gradient of `H~(p, angles)`.
pub fn grad_h_tilde(p: WernerParameter, a: &RotationAngles) -> Result<Gradient4> {
    if !a.is_finite() {
        return Err(Error::NonFinite(format!("rotation angles {a:?}")));
    }
    let pv = p.value();
    let (s1, c1) = a.qubit1.theta.sin_cos();
    let (s2, c2) = a.qubit2.theta.sin_cos();
    let (ss, cs) = a.psi_sum().sin_cos();
    let x = werner_correlation(p, a);
    let minus = (1.0 - x) / 4.0;
    let plus = (1.0 + x) / 4.0;
    if minus <= 0.0 || plus <= 0.0 {
        return Err(Error::BoundaryOfSupport(x));
    }
    let log_ratio = minus.ln() - plus.ln();
    let half_p = pv / 2.0;
    let d_psi = half_p * ss * s1 * s2 * log_ratio;
    Ok(Gradient4 {
        d_theta1: half_p * (c2 * s1 - cs * c1 * s2) * log_ratio,
        d_theta2: half_p * (c1 * s2 - cs * c2 * s1) * log_ratio,
        d_psi1: d_psi,
        d_psi2: d_psi,
    })
}

/// Second partials of `H~` in `(theta1, theta2, psi1)`.
///
/// Row `i` holds the derivatives of the `i`-th first partial with respect to
/// `theta1`, `theta2`, `psi1`; the `psi1` row is doubled, so
///
/// ```text
/// | H_t1t1   H_t2t1   H_s1t1  |
/// | H_t1t2   H_t2t2   H_s1t2  |
/// | 2H_t1s1  2H_t2s1  2H_s1s1 |
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hessian3 {
    pub entries: [[f64; 3]; 3],
}

impl Hessian3 {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.entries;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Central differences (step [`HESSIAN_STEP`]) of the analytic gradient.
pub fn hessian3(p: WernerParameter, a: &RotationAngles) -> Result<Hessian3> {
    let shifted = |var: usize, h: f64| {
        let mut b = *a;
        match var {
            0 => b.qubit1.theta += h,
            1 => b.qubit2.theta += h,
            _ => b.qubit1.psi += h,
        }
        b
    };
    let mut entries = [[0.0; 3]; 3];
    #[allow(clippy::needless_range_loop)]
    for col in 0..3 {
        let hi = grad_h_tilde(p, &shifted(col, HESSIAN_STEP))?;
        let lo = grad_h_tilde(p, &shifted(col, -HESSIAN_STEP))?;
        let diff = [
            hi.d_theta1 - lo.d_theta1,
            hi.d_theta2 - lo.d_theta2,
            hi.d_psi1 - lo.d_psi1,
        ];
        for (row, d) in diff.iter().enumerate() {
            entries[row][col] = d / (2.0 * HESSIAN_STEP);
        }
    }
    for v in entries[2].iter_mut() {
        *v *= 2.0;
    }
    Ok(Hessian3 { entries })
}

/// Families of critical points of `H~`, restricted to one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StationaryFamily {
    /// `theta1, theta2 in {0, pi}`, any psi.
    BothPoles,
    /// `theta1 = pi/2`, `theta2 in {0, pi}`, any psi.
    EquatorPole,
    /// `theta1 in {0, pi}`, `theta2 = pi/2`, any psi.
    PoleEquator,
    /// `theta1 = theta2 = pi/2`, `psi1 + psi2 in {0, pi/2, pi, 3pi/2}`.
    BothEquator,
    /// `theta1 = pi/2`, any `theta2`, `psi1 + psi2 in {pi/2, 3pi/2}`.
    FirstEquatorFreeSecond,
    /// `theta2 = pi/2`, any `theta1`, `psi1 + psi2 in {pi/2, 3pi/2}`.
    SecondEquatorFreeFirst,
}

impl fmt::Display for StationaryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StationaryFamily::BothPoles => "both-poles",
            StationaryFamily::EquatorPole => "equator-pole",
            StationaryFamily::PoleEquator => "pole-equator",
            StationaryFamily::BothEquator => "both-equator",
            StationaryFamily::FirstEquatorFreeSecond => "first-equator-free-second",
            StationaryFamily::SecondEquatorFreeFirst => "second-equator-free-first",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub family: StationaryFamily,
    pub theta1: f64,
    pub theta2: f64,
    /// `None` when the point is stationary for every `psi1 + psi2`.
    pub psi_sum: Option<f64>,
    pub description: String,
}

impl StationaryPoint {
    fn new(family: StationaryFamily, theta1: f64, theta2: f64, psi_sum: Option<f64>) -> Self {
        let psi = psi_sum.map_or_else(|| "any".to_string(), |s| format!("{s:.6}"));
        Self {
            family,
            theta1,
            theta2,
            psi_sum,
            description: format!("{family}: theta1={theta1:.6} theta2={theta2:.6} psi_sum={psi}"),
        }
    }

    /// Concrete angles; `free_psi_sum` is used when the family leaves the
    /// psi sum unconstrained.
    pub fn angles(&self, free_psi_sum: f64) -> RotationAngles {
        RotationAngles::from_psi_sum(
            self.theta1,
            self.theta2,
            self.psi_sum.unwrap_or(free_psi_sum),
        )
    }
}

/// Number of samples of a free polar angle in [`stationary_points`].
pub const FREE_THETA_SAMPLES: usize = 9;

/// All critical-point families on `theta in [0, pi]`, `psi1 + psi2 in [0, 2pi)`.
pub fn stationary_points() -> Vec<StationaryPoint> {
    use StationaryFamily::*;
    let mut out = Vec::new();
    for (t1, t2) in [(0.0, 0.0), (PI, PI), (0.0, PI), (PI, 0.0)] {
        out.push(StationaryPoint::new(BothPoles, t1, t2, None));
    }
    for t2 in [0.0, PI] {
        out.push(StationaryPoint::new(EquatorPole, FRAC_PI_2, t2, None));
    }
    for t1 in [0.0, PI] {
        out.push(StationaryPoint::new(PoleEquator, t1, FRAC_PI_2, None));
    }
    for s in [0.0, PI, FRAC_PI_2, 3.0 * FRAC_PI_2] {
        out.push(StationaryPoint::new(
            BothEquator,
            FRAC_PI_2,
            FRAC_PI_2,
            Some(s),
        ));
    }
    let free: Vec<f64> = (0..FREE_THETA_SAMPLES)
        .map(|k| PI * k as f64 / (FREE_THETA_SAMPLES - 1) as f64)
        .collect();
    for s in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        for &t in &free {
            out.push(StationaryPoint::new(
                FirstEquatorFreeSecond,
                FRAC_PI_2,
                t,
                Some(s),
            ));
        }
    }
    for s in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        for &t in &free {
            out.push(StationaryPoint::new(
                SecondEquatorFreeFirst,
                t,
                FRAC_PI_2,
                Some(s),
            ));
        }
    }
    out
}

/// Arg max and max of `H~`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub angles: RotationAngles,
    pub value: f64,
}

/// Exhaustive search over `theta_i = pi k / (n - 1)` and
/// `psi1 + psi2 = 2 pi m / n` for `k, m in 0..n`.
///
/// Ties go to the lexicographically smallest `(k1, k2, m)`.
pub fn maximize_grid(p: WernerParameter, resolution: usize) -> Result<Maximum> {
    if resolution < MIN_GRID_RESOLUTION {
        return Err(Error::InvalidResolution {
            min: MIN_GRID_RESOLUTION,
            got: resolution,
        });
    }
    let n = resolution;
    let theta = |k: usize| PI * k as f64 / (n - 1) as f64;
    let psi_sum = |m: usize| TAU * m as f64 / n as f64;
    let at = |idx: usize| {
        let (k1, rest) = (idx / (n * n), idx % (n * n));
        RotationAngles::from_psi_sum(theta(k1), theta(rest / n), psi_sum(rest % n))
    };

    let (value, idx) = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            (
                h_tilde_from_correlation(werner_correlation(p, &at(idx))),
                idx,
            )
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    Ok(Maximum {
        angles: at(idx),
        value,
    })
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn gradient_norm_sq(g: &Gradient4) -> f64 {
    g.d_theta1 * g.d_theta1 + g.d_theta2 * g.d_theta2 + g.d_psi1 * g.d_psi1
}

/// Result of [`ascend`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ascent {
    pub maximum: Maximum,
    pub iterations: usize,
    /// The gradient dropped below `1e-10`, or the iterate reached `|x| = 1`
    /// where `H~` attains its global bound.
    pub converged: bool,
}

/// Gradient ascent in `(theta1, theta2, psi1 + psi2)` with backtracking.
///
/// Each iteration tries a unit step along the gradient and halves it until
/// the Armijo condition holds; once the predicted gain drops below what
/// `f64` values can resolve, a step is accepted when it shrinks the gradient. Stops once `|grad|_inf < 1e-10` or after
/// `10^4` iterations. The returned value never falls below the start value.
pub fn ascend(p: WernerParameter, start: &RotationAngles) -> Result<Ascent> {
    let objective = |a: &RotationAngles| h_tilde_from_correlation(werner_correlation(p, a));
    let mut current = *start;
    let mut value = objective(&current);
    let mut best = Maximum {
        angles: current,
        value,
    };
    let mut converged = false;
    let mut iterations = 0;

    while iterations < ASCENT_MAX_ITERATIONS {
        let g = match grad_h_tilde(p, &current) {
            Ok(g) => g,
            Err(Error::BoundaryOfSupport(_)) => {
                converged = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if g.max_abs() < ASCENT_GRADIENT_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let direction = [g.d_theta1, g.d_theta2, g.d_psi1];
        let slope: f64 = direction.iter().map(|d| d * d).sum();
        let mut step = 1.0;
        let accepted = loop {
            let mut trial = current;
            trial.qubit1.theta += step * direction[0];
            trial.qubit2.theta += step * direction[1];
            trial.qubit1.psi += step * direction[2];
            let trial_value = objective(&trial);
            let ok = if step * slope > VALUE_RESOLUTION {
                trial_value >= value + ARMIJO * step * slope
            } else {
                // Gains below rounding: require a shrinking gradient instead.
                trial_value >= value - VALUE_NOISE
                    && grad_h_tilde(p, &trial).is_ok_and(|gt| gradient_norm_sq(&gt) < slope)
            };
            if ok {
                break Some((trial, trial_value));
            }
            step *= 0.5;
            if step < ASCENT_MIN_STEP {
                break None;
            }
        };
        let Some((next, next_value)) = accepted else {
            break;
        };
        current = next;
        value = next_value;
        if value > best.value {
            best = Maximum {
                angles: current,
                value,
            };
        }
    }

    Ok(Ascent {
        maximum: best,
        iterations,
        converged,
    })
}

/// Grid search at resolution [`REFINE_SEED_RESOLUTION`], then [`ascend`]
/// from the best grid point.
pub fn maximize_refined(p: WernerParameter) -> Result<Maximum> {
    let seed = maximize_grid(p, REFINE_SEED_RESOLUTION)?;
    Ok(ascend(p, &seed.angles)?.maximum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::information::h_tilde;
    use approx::assert_abs_diff_eq;

    fn wp(p: f64) -> WernerParameter {
        WernerParameter::new(p).unwrap()
    }

    // mpmath, 30 digits
    const IT_HALF: f64 = 0.130_812_035_941_136_96;
    const IT_0_9: f64 = 0.494_631_937_214_073;

    /// Independent oracle: central differences of the closed-form `H~`.
    fn fd_gradient(p: WernerParameter, a: &RotationAngles, h: f64) -> [f64; 4] {
        let f = |b: RotationAngles| h_tilde(p, &b).unwrap();
        let mut out = [0.0; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut hi = *a;
            let mut lo = *a;
            match k {
                0 => {
                    hi.qubit1.theta += h;
                    lo.qubit1.theta -= h;
                }
                1 => {
                    hi.qubit2.theta += h;
                    lo.qubit2.theta -= h;
                }
                2 => {
                    hi.qubit1.psi += h;
                    lo.qubit1.psi -= h;
                }
                _ => {
                    hi.qubit2.psi += h;
                    lo.qubit2.psi -= h;
                }
            }
            *slot = (f(hi) - f(lo)) / (2.0 * h);
        }
        out
    }

    #[test]
    fn gradient_vanishes_on_equatorial_family() {
        let g = grad_h_tilde(
            wp(0.7),
            &RotationAngles::from_psi_sum(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
        )
        .unwrap();
        assert!(g.max_abs() < 1e-15, "{g:?}");
    }

    #[test]
    fn gradient_vanishes_for_maximally_mixed() {
        let g = grad_h_tilde(wp(0.0), &RotationAngles::from_theta_psi(0.4, 1.9, 0.3, 2.2)).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = wp(0.5);
        let a = RotationAngles::from_theta_psi(1.0, 0.7, 0.3, 0.2);
        let g = grad_h_tilde(p, &a).unwrap();
        let fd = fd_gradient(p, &a, 1e-5);
        for (an, num) in [g.d_theta1, g.d_theta2, g.d_psi1, g.d_psi2].iter().zip(fd) {
            assert_abs_diff_eq!(*an, num, epsilon = 1e-6);
        }
        assert_eq!(g.d_psi1, g.d_psi2);
    }

    #[test]
    fn gradient_reports_boundary() {
        let err = grad_h_tilde(wp(1.0), &RotationAngles::default()).unwrap_err();
        assert!(matches!(err, Error::BoundaryOfSupport(x) if x == 1.0));
    }

    #[test]
    fn stationary_points_have_zero_gradient() {
        let pts = stationary_points();
        assert_eq!(pts.len(), 4 + 2 + 2 + 4 + 2 * 2 * FREE_THETA_SAMPLES);
        for pt in &pts {
            for free in [0.0, 0.9, 2.5] {
                let g = grad_h_tilde(wp(0.5), &pt.angles(free)).unwrap();
                assert!(g.max_abs() < 1e-10, "{}: {g:?}", pt.description);
            }
        }
    }

    #[test]
    fn stationary_values() {
        let p = wp(0.5);
        let origin = &stationary_points()[0];
        assert_eq!(origin.family, StationaryFamily::BothPoles);
        assert_abs_diff_eq!(
            h_tilde(p, &origin.angles(1.0)).unwrap(),
            IT_HALF,
            epsilon = 1e-15
        );
        let eq_pole = stationary_points()
            .into_iter()
            .find(|s| s.family == StationaryFamily::EquatorPole)
            .unwrap();
        assert_abs_diff_eq!(
            h_tilde(p, &eq_pole.angles(0.0)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn hessian_at_aligned_equator() {
        let p = 0.5;
        let h = hessian3(
            wp(p),
            &RotationAngles::from_psi_sum(FRAC_PI_2, FRAC_PI_2, 0.0),
        )
        .unwrap();
        // mpmath: p/2 (ln((1-p)/4) - ln((1+p)/4)) = -0.274653072167027422848811309231
        assert_abs_diff_eq!(h.get(0, 0), -0.274_653_072_167_027_4, epsilon = 1e-6);
        assert_abs_diff_eq!(h.get(1, 1), -0.274_653_072_167_027_4, epsilon = 1e-6);
        assert_abs_diff_eq!(h.get(2, 2), 2.0 * -0.274_653_072_167_027_4, epsilon = 1e-6);
        assert_abs_diff_eq!(h.get(0, 2), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(h.determinant(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn hessian_at_quarter_turn() {
        for p in [0.3, 0.5, 0.9] {
            let h = hessian3(
                wp(p),
                &RotationAngles::from_psi_sum(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            )
            .unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    let want = if (r, c) == (2, 2) { 2.0 * p * p } else { 0.0 };
                    assert_abs_diff_eq!(h.get(r, c), want, epsilon = 1e-6);
                }
            }
            assert_abs_diff_eq!(h.determinant(), 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn grid_examples() {
        let m = maximize_grid(wp(0.5), 64).unwrap();
        assert_abs_diff_eq!(m.value, IT_HALF, epsilon = 1e-4);
        assert_eq!(maximize_grid(wp(0.0), 16).unwrap().value, 0.0);
        let m = maximize_grid(wp(1.0), 64).unwrap();
        assert_abs_diff_eq!(m.value, std::f64::consts::LN_2, epsilon = 1e-9);
        assert!(matches!(
            maximize_grid(wp(0.5), 7),
            Err(Error::InvalidResolution { .. })
        ));
    }

    #[test]
    fn grid_tie_break_is_smallest_index() {
        // p = 0: every cell ties, so the first grid point wins.
        let m = maximize_grid(wp(0.0), 8).unwrap();
        assert_eq!(m.angles, RotationAngles::from_psi_sum(0.0, 0.0, 0.0));
        let again = maximize_grid(wp(0.37), 24).unwrap();
        assert_eq!(again, maximize_grid(wp(0.37), 24).unwrap());
    }

    #[test]
    fn refined_examples() {
        assert_abs_diff_eq!(
            maximize_refined(wp(0.5)).unwrap().value,
            IT_HALF,
            epsilon = 1e-9
        );
        assert_eq!(maximize_refined(wp(0.0)).unwrap().value, 0.0);
        assert_abs_diff_eq!(
            maximize_refined(wp(0.9)).unwrap().value,
            IT_0_9,
            epsilon = 1e-9
        );
    }

    #[test]
    fn ascent_from_generic_start_reaches_closed_form() {
        for (p, want) in [(0.5, IT_HALF), (0.9, IT_0_9)] {
            let start = RotationAngles::from_theta_psi(0.9, 0.4, 0.8, 0.3);
            let out = ascend(wp(p), &start).unwrap();
            assert!(out.converged, "p={p}: {out:?}");
            assert_abs_diff_eq!(out.maximum.value, want, epsilon = 1e-9);
        }
        let start = RotationAngles::from_theta_psi(2.0, 1.0, 0.5, 0.0);
        let out = ascend(wp(-0.3), &start).unwrap();
        assert_abs_diff_eq!(
            out.maximum.value,
            h_tilde_from_correlation(0.3),
            epsilon = 1e-9
        );
    }

    #[test]
    fn ascent_never_loses_value() {
        let start = RotationAngles::from_theta_psi(1.3, 2.9, 4.0, 0.1);
        let f0 = h_tilde(wp(0.8), &start).unwrap();
        assert!(ascend(wp(0.8), &start).unwrap().maximum.value >= f0);
    }
}
