//! Tomographic-probability analysis of the two-qubit Werner state.
//!
//! The crate computes spin tomograms of locally rotated two-qubit states,
//! Shannon and von Neumann entropies, the quantum mutual information
//! `I_q = S1 + S2 - S12`, the tomographic mutual information
//! `H~ = H1 + H2 - H12` together with its maximum `I_t` over local rotation
//! angles, and the gap `dI = I_q - I_t >= 0`.
//!
//! Module map:
//!
//! - [`linalg`]: dense 2x2 / 4x4 complex matrices and a Jacobi eigensolver.
//! - [`states`]: the Werner family and two-qubit density-matrix validation.
//! - [`tomography`]: SU(2) rotations, tomogram extraction and the closed-form
//!   Werner tomogram.
//! - [`information`]: entropies and informations.
//! - [`maximizer`]: analytic gradient, stationary points, Hessian checks and
//!   numerical maximization of `H~`.
//! - [`sweep`]: parameter scans and deterministic CSV output.
//! - [`verify`]: the self-check suite run by `tomoinfo verify`.

#![forbid(unsafe_code)]

mod error;

pub mod information;
pub mod linalg;
pub mod maximizer;
pub mod states;
pub mod sweep;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};
pub use information::{
    delta_i, h_tilde, quantum_information, shannon_entropy, tomographic_information,
    von_neumann_entropy, InfoReport, MaximizationMethod,
};
pub use linalg::{Complex, ComplexMatrix, Subsystem};
pub use maximizer::{
    grad_h_tilde, hessian3, maximize_grid, maximize_refined, stationary_points, Gradient4,
    Hessian3, Maximum, StationaryFamily, StationaryPoint,
};
pub use states::{werner, werner_spectrum, TwoQubitState, WernerParameter};
pub use tomography::{
    local_unitary, rotation_2x2, tomogram, werner_tomogram_closed_form, EulerAngles,
    RotationAngles, Tomogram,
};
