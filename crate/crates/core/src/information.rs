//! Entropies and mutual informations, all in nats.
//!
//! `I_q = S1 + S2 - S12` is the von Neumann mutual information and
//! `H~ = H1 + H2 - H12` the Shannon mutual information of a spin tomogram.
//! `I_t` is the maximum of `H~` over local rotations and `dI = I_q - I_t`.
//!
//! For the Werner state `H~` only depends on the correlation
//! `x = p (cos t1 cos t2 + cos(s1 + s2) sin t1 sin t2)`:
//!
//! ```text
//! H~(x) = ln 4 + (1+x)/2 ln((1+x)/4) + (1-x)/2 ln((1-x)/4)
//! ```
//!
//! which is even in `x` and increasing in `|x|`, and `|x| <= |p|` with
//! equality at `t1 = t2 = 0` (or `t1 = 0, t2 = pi` for `p < 0`). The
//! closed-form `I_t` is therefore `H~(|p|)`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subsystem};
use crate::maximizer::{maximize_grid, maximize_refined};
use crate::states::{werner, werner_spectrum, TwoQubitState, WernerParameter};
use crate::tomography::{tomogram, werner_correlation, werner_joint, RotationAngles, Tomogram};

const DISTRIBUTION_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-10;

/// Grid resolution used by [`MaximizationMethod::Grid`] when none is given.
pub const DEFAULT_GRID_RESOLUTION: usize = 64;

/// `-w ln w` with `0 ln 0 = 0`.
fn neg_xlnx(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        -w * w.ln()
    }
}

/// Shannon entropy `-sum w_i ln w_i` of a probability vector.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(w) = dist.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {w}")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(dist.iter().map(|&w| neg_xlnx(w)).sum())
}

/// Von Neumann entropy `-Tr rho ln rho` from the Hermitian spectrum.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    let eig = rho.hermitian_eigenvalues()?;
    let min = eig.last().copied().unwrap_or(0.0);
    if min < -DENSITY_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(eig.iter().map(|&l| neg_xlnx(l.clamp(0.0, 1.0))).sum())
}

/// `S12(p)` of the Werner state from its analytic spectrum.
pub fn werner_entropy(p: WernerParameter) -> f64 {
    werner_spectrum(p).iter().map(|&l| neg_xlnx(l)).sum()
}

/// `I_q(p) = 2 ln 2 - S12(p)`; both reduced Werner states are `I/2`.
pub fn quantum_information(p: WernerParameter) -> f64 {
    2.0 * LN_2 - werner_entropy(p)
}

/// `H1 + H2 - H12` of an arbitrary tomogram.
pub fn tomographic_mutual_information(t: &Tomogram) -> Result<f64> {
    Ok(
        shannon_entropy(&t.marginal1)? + shannon_entropy(&t.marginal2)?
            - shannon_entropy(&t.joint)?,
    )
}

/// `H~` of the Werner tomogram with correlation `x`, `|x| <= 1`.
pub fn h_tilde_from_correlation(x: f64) -> f64 {
    let h12: f64 = werner_joint(x).iter().map(|&w| neg_xlnx(w.max(0.0))).sum();
    2.0 * LN_2 - h12
}

/// `H~(p, angles)` of the rotated Werner state.
pub fn h_tilde(p: WernerParameter, a: &RotationAngles) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite(format!("rotation angles {a:?}")));
    }
    Ok(h_tilde_from_correlation(werner_correlation(p, a)))
}

/// How [`tomographic_information`] obtains the maximum of `H~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaximizationMethod {
    /// `H~(|p|)`.
    #[default]
    ClosedForm,
    /// Exhaustive search over a regular angle grid.
    Grid { resolution: usize },
    /// Grid search followed by gradient ascent.
    Gradient,
}

/// `I_t(p) = max over angles of H~(p, angles)`.
pub fn tomographic_information(p: WernerParameter, method: MaximizationMethod) -> Result<f64> {
    match method {
        MaximizationMethod::ClosedForm => Ok(h_tilde_from_correlation(p.value().abs())),
        MaximizationMethod::Grid { resolution } => Ok(maximize_grid(p, resolution)?.value),
        MaximizationMethod::Gradient => Ok(maximize_refined(p)?.value),
    }
}

/// `dI(p) = I_q(p) - I_t(p)` with the closed-form `I_t`.
pub fn delta_i(p: WernerParameter) -> f64 {
    quantum_information(p) - h_tilde_from_correlation(p.value().abs())
}

/// Entropies and informations of one `(state, angles)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoReport {
    pub s1: f64,
    pub s2: f64,
    pub s12: f64,
    pub iq: f64,
    pub h1: f64,
    pub h2: f64,
    pub h12: f64,
    pub h_tilde: f64,
    /// Present when a maximization over angles was performed.
    pub it: Option<f64>,
    /// `iq - it`, present together with `it`.
    pub delta_i: Option<f64>,
    pub tomogram: Tomogram,
}

impl InfoReport {
    /// Evaluates every quantity along the matrix path: eigenvalues for the
    /// von Neumann entropies and `U rho U^H` for the tomogram.
    pub fn for_state(state: &TwoQubitState, a: &RotationAngles, it: Option<f64>) -> Result<Self> {
        let s1 = von_neumann_entropy(&state.reduced(Subsystem::First)?)?;
        let s2 = von_neumann_entropy(&state.reduced(Subsystem::Second)?)?;
        let s12 = von_neumann_entropy(state.rho())?;
        let iq = s1 + s2 - s12;
        let tomogram = tomogram(state, a)?;
        let h1 = shannon_entropy(&tomogram.marginal1)?;
        let h2 = shannon_entropy(&tomogram.marginal2)?;
        let h12 = shannon_entropy(&tomogram.joint)?;
        Ok(Self {
            s1,
            s2,
            s12,
            iq,
            h1,
            h2,
            h12,
            h_tilde: h1 + h2 - h12,
            it,
            delta_i: it.map(|it| iq - it),
            tomogram,
        })
    }

    /// Werner-state report with the closed-form maximum filled in.
    pub fn werner(p: WernerParameter, a: &RotationAngles) -> Result<Self> {
        let it = tomographic_information(p, MaximizationMethod::ClosedForm)?;
        Self::for_state(&werner(p), a, Some(it))
    }

    /// `iq - h_tilde` at the evaluated angles.
    pub fn delta_at_angles(&self) -> f64 {
        self.iq - self.h_tilde
    }
}
