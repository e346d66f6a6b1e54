//! Python bindings. Every function taking `p` validates it and raises
//! `ValueError` on failure.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tomoinfo::information::{self, MaximizationMethod};
use tomoinfo::linalg::{Complex, ComplexMatrix};
use tomoinfo::sweep::{self, SurfaceMode, SweepConfig};
use tomoinfo::tomography::{self, EulerAngles};
use tomoinfo::{maximizer, states, verify as suite, WernerParameter};

fn err(e: tomoinfo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn param(p: f64) -> PyResult<WernerParameter> {
    WernerParameter::new(p).map_err(err)
}

/// `(p, fixture, h_tilde, iq, it, delta_i_fixture, delta_i_max)`.
type ScanTuple = (f64, String, f64, f64, f64, f64, f64);

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Complex>> {
    m.entries()
        .chunks(m.dim())
        .map(<[Complex]>::to_vec)
        .collect()
}

/// Local measurement angles for both qubits.
#[pyclass(frozen, skip_from_py_object, module = "pytomoinfo")]
#[derive(Clone, Copy)]
pub struct RotationAngles(tomography::RotationAngles);

#[pymethods]
impl RotationAngles {
    #[new]
    #[pyo3(signature = (theta1=0.0, theta2=0.0, phi1=0.0, phi2=0.0, psi1=0.0, psi2=0.0))]
    fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64, psi1: f64, psi2: f64) -> Self {
        Self(tomography::RotationAngles::new(
            EulerAngles::new(theta1, phi1, psi1),
            EulerAngles::new(theta2, phi2, psi2),
        ))
    }

    /// `psi1 = psi_sum`, `psi2 = 0`, both `phi = 0`.
    #[staticmethod]
    fn from_psi_sum(theta1: f64, theta2: f64, psi_sum: f64) -> Self {
        Self(tomography::RotationAngles::from_psi_sum(
            theta1, theta2, psi_sum,
        ))
    }

    #[getter]
    fn theta1(&self) -> f64 {
        self.0.qubit1.theta
    }
    #[getter]
    fn theta2(&self) -> f64 {
        self.0.qubit2.theta
    }
    #[getter]
    fn phi1(&self) -> f64 {
        self.0.qubit1.phi
    }
    #[getter]
    fn phi2(&self) -> f64 {
        self.0.qubit2.phi
    }
    #[getter]
    fn psi1(&self) -> f64 {
        self.0.qubit1.psi
    }
    #[getter]
    fn psi2(&self) -> f64 {
        self.0.qubit2.psi
    }
    #[getter]
    fn psi_sum(&self) -> f64 {
        self.0.psi_sum()
    }

    fn __repr__(&self) -> String {
        let (a, b) = (self.0.qubit1, self.0.qubit2);
        format!(
            "RotationAngles(theta1={}, theta2={}, phi1={}, phi2={}, psi1={}, psi2={})",
            a.theta, b.theta, a.phi, b.phi, a.psi, b.psi
        )
    }
}

#[pyclass(frozen, get_all, module = "pytomoinfo")]
pub struct Tomogram {
    joint: [f64; 4],
    marginal1: [f64; 2],
    marginal2: [f64; 2],
}

impl From<tomography::Tomogram> for Tomogram {
    fn from(t: tomography::Tomogram) -> Self {
        Self {
            joint: t.joint,
            marginal1: t.marginal1,
            marginal2: t.marginal2,
        }
    }
}

#[pyclass(frozen, get_all, module = "pytomoinfo")]
pub struct InfoReport {
    s1: f64,
    s2: f64,
    s12: f64,
    iq: f64,
    h1: f64,
    h2: f64,
    h12: f64,
    h_tilde: f64,
    it: Option<f64>,
    delta_i: Option<f64>,
    joint: [f64; 4],
}

#[pyclass(frozen, get_all, module = "pytomoinfo")]
pub struct StationaryPoint {
    family: String,
    theta1: f64,
    theta2: f64,
    /// `None` when any psi sum is stationary.
    psi_sum: Option<f64>,
    description: String,
}

#[pyclass(frozen, get_all, module = "pytomoinfo")]
pub struct Maximum {
    angles: RotationAngles,
    value: f64,
}

impl From<maximizer::Maximum> for Maximum {
    fn from(m: maximizer::Maximum) -> Self {
        Self {
            angles: RotationAngles(m.angles),
            value: m.value,
        }
    }
}

/// Werner density matrix as rows of complex numbers.
#[pyfunction]
fn werner_matrix(p: f64) -> PyResult<Vec<Vec<Complex>>> {
    Ok(matrix_rows(states::werner(param(p)?).rho()))
}

#[pyfunction]
fn werner_spectrum(p: f64) -> PyResult<[f64; 4]> {
    Ok(states::werner_spectrum(param(p)?))
}

/// Tomogram of the Werner state through the matrix path.
#[pyfunction]
fn tomogram(p: f64, angles: &RotationAngles) -> PyResult<Tomogram> {
    tomography::tomogram(&states::werner(param(p)?), &angles.0)
        .map(Tomogram::from)
        .map_err(err)
}

#[pyfunction]
fn werner_tomogram_closed_form(p: f64, angles: &RotationAngles) -> PyResult<Tomogram> {
    tomography::werner_tomogram_closed_form(param(p)?, &angles.0)
        .map(Tomogram::from)
        .map_err(err)
}

#[pyfunction]
fn shannon_entropy(dist: Vec<f64>) -> PyResult<f64> {
    information::shannon_entropy(&dist).map_err(err)
}

/// Entropy of a density matrix given as square rows of complex numbers.
#[pyfunction]
fn von_neumann_entropy(rows: Vec<Vec<Complex>>) -> PyResult<f64> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let m = ComplexMatrix::new(dim, rows.concat()).map_err(err)?;
    information::von_neumann_entropy(&m).map_err(err)
}

#[pyfunction]
fn quantum_information(p: f64) -> PyResult<f64> {
    Ok(information::quantum_information(param(p)?))
}

#[pyfunction]
fn h_tilde(p: f64, angles: &RotationAngles) -> PyResult<f64> {
    information::h_tilde(param(p)?, &angles.0).map_err(err)
}

/// `method` is `"closed-form"`, `"grid"` or `"gradient"`.
#[pyfunction]
#[pyo3(signature = (p, method="closed-form", resolution=information::DEFAULT_GRID_RESOLUTION))]
fn tomographic_information(p: f64, method: &str, resolution: usize) -> PyResult<f64> {
    let method = match method {
        "closed-form" => MaximizationMethod::ClosedForm,
        "grid" => MaximizationMethod::Grid { resolution },
        "gradient" => MaximizationMethod::Gradient,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    information::tomographic_information(param(p)?, method).map_err(err)
}

#[pyfunction]
fn delta_i(p: f64) -> PyResult<f64> {
    Ok(information::delta_i(param(p)?))
}

/// `(d_theta1, d_theta2, d_psi1, d_psi2)`.
#[pyfunction]
fn grad_h_tilde(p: f64, angles: &RotationAngles) -> PyResult<(f64, f64, f64, f64)> {
    let g = maximizer::grad_h_tilde(param(p)?, &angles.0).map_err(err)?;
    Ok((g.d_theta1, g.d_theta2, g.d_psi1, g.d_psi2))
}

/// 3x3 Hessian in `(theta1, theta2, psi1)`.
#[pyfunction]
fn hessian3(p: f64, angles: &RotationAngles) -> PyResult<[[f64; 3]; 3]> {
    Ok(maximizer::hessian3(param(p)?, &angles.0)
        .map_err(err)?
        .entries)
}

#[pyfunction]
#[pyo3(signature = (p, resolution=information::DEFAULT_GRID_RESOLUTION))]
fn maximize_grid(p: f64, resolution: usize) -> PyResult<Maximum> {
    maximizer::maximize_grid(param(p)?, resolution)
        .map(Maximum::from)
        .map_err(err)
}

#[pyfunction]
fn maximize_refined(p: f64) -> PyResult<Maximum> {
    maximizer::maximize_refined(param(p)?)
        .map(Maximum::from)
        .map_err(err)
}

#[pyfunction]
fn stationary_points() -> Vec<StationaryPoint> {
    maximizer::stationary_points()
        .into_iter()
        .map(|s| StationaryPoint {
            family: s.family.to_string(),
            theta1: s.theta1,
            theta2: s.theta2,
            psi_sum: s.psi_sum,
            description: s.description,
        })
        .collect()
}

/// Full report at `(p, angles)` with the closed-form maximum.
#[pyfunction]
fn info_report(p: f64, angles: &RotationAngles) -> PyResult<InfoReport> {
    let r = information::InfoReport::werner(param(p)?, &angles.0).map_err(err)?;
    Ok(InfoReport {
        s1: r.s1,
        s2: r.s2,
        s12: r.s12,
        iq: r.iq,
        h1: r.h1,
        h2: r.h2,
        h12: r.h12,
        h_tilde: r.h_tilde,
        it: r.it,
        delta_i: r.delta_i,
        joint: r.tomogram.joint,
    })
}

/// Runs the check suite; returns `([(name, passed, detail)], notes)`.
#[pyfunction]
#[pyo3(signature = (perturb_corner=0.0))]
fn verify(perturb_corner: f64) -> (Vec<(String, bool, String)>, Vec<String>) {
    let r = suite::run(suite::VerifyOptions {
        corner_perturbation: perturb_corner,
    });
    let checks = r
        .checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect();
    (checks, r.notes)
}

/// Rows `(p, fixture, h_tilde, iq, it, delta_i_fixture, delta_i_max)`.
#[pyfunction]
#[pyo3(signature = (p_min=WernerParameter::MIN, p_max=WernerParameter::MAX, p_count=101, fixtures=Vec::new()))]
fn scan_p(
    p_min: f64,
    p_max: f64,
    p_count: usize,
    fixtures: Vec<String>,
) -> PyResult<Vec<ScanTuple>> {
    let config = SweepConfig {
        p_min,
        p_max,
        p_count,
        fixtures,
        ..SweepConfig::default()
    };
    config.validate().map_err(err)?;
    let rows = sweep::scan_p(&config).map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.p,
                r.fixture,
                r.h_tilde,
                r.iq,
                r.it,
                r.delta_i_fixture,
                r.delta_i_max,
            )
        })
        .collect())
}

/// `(first, second, delta_i)` rows; `mode` is `"theta-theta"` (uses `p`) or
/// `"theta-p"` (uses `theta2` and the `p` range).
#[pyfunction]
#[pyo3(signature = (
    mode="theta-theta", p=0.5, psi_sum=0.0, resolution=information::DEFAULT_GRID_RESOLUTION,
    theta2=0.0, p_min=WernerParameter::MIN, p_max=WernerParameter::MAX, p_count=101
))]
#[allow(clippy::too_many_arguments)]
fn surface(
    mode: &str,
    p: f64,
    psi_sum: f64,
    resolution: usize,
    theta2: f64,
    p_min: f64,
    p_max: f64,
    p_count: usize,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let rows = match mode.parse::<SurfaceMode>().map_err(err)? {
        SurfaceMode::ThetaTheta => sweep::surface_theta_theta(param(p)?, psi_sum, resolution),
        SurfaceMode::ThetaP => {
            sweep::surface_theta_p(theta2, psi_sum, p_min, p_max, p_count, resolution)
        }
    }
    .map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.first, r.second, r.delta))
        .collect())
}

#[pymodule]
pub fn pytomoinfo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RotationAngles>()?;
    m.add_class::<Tomogram>()?;
    m.add_class::<InfoReport>()?;
    m.add_class::<StationaryPoint>()?;
    m.add_class::<Maximum>()?;
    m.add("P_MIN", WernerParameter::MIN)?;
    m.add("P_MAX", WernerParameter::MAX)?;
    m.add_function(wrap_pyfunction!(werner_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(werner_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(tomogram, m)?)?;
    m.add_function(wrap_pyfunction!(werner_tomogram_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_information, m)?)?;
    m.add_function(wrap_pyfunction!(h_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(tomographic_information, m)?)?;
    m.add_function(wrap_pyfunction!(delta_i, m)?)?;
    m.add_function(wrap_pyfunction!(grad_h_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(hessian3, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_grid, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_refined, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_points, m)?)?;
    m.add_function(wrap_pyfunction!(info_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(scan_p, m)?)?;
    m.add_function(wrap_pyfunction!(surface, m)?)?;
    Ok(())
}
