//! Self-check suite: structural invariants of every module plus the
//! reference limit values, each reported as a named pass/fail [`Check`].
//!
//! Random samples come from a fixed seed, so two runs give the same report.

use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::information::{
    delta_i, h_tilde, h_tilde_from_correlation, quantum_information, shannon_entropy,
    tomographic_information, von_neumann_entropy, werner_entropy, MaximizationMethod,
};
use crate::linalg::{Complex, ComplexMatrix, Subsystem};
use crate::maximizer::{
    grad_h_tilde, hessian3, maximize_grid, maximize_refined, stationary_points,
};
use crate::states::{werner_matrix, werner_spectrum, TwoQubitState, WernerParameter};
use crate::sweep::{
    linspace, scan_p, surface_minimum, surface_theta_theta, write_scan_csv, SweepConfig,
};
use crate::tomography::{
    local_unitary, rotation_2x2, tomogram, werner_correlation, werner_tomogram_closed_form,
    EulerAngles, RotationAngles,
};

const SEED: u64 = 0x5EED_7A3B;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Added to both anti-corner entries of every Werner matrix that goes
    /// through the matrix path. Zero for a normal run.
    pub corner_perturbation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Informational lines that are not pass/fail.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

struct Suite {
    options: VerifyOptions,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Suite {
    fn record(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    /// Werner matrix used on the matrix path, with the injected perturbation.
    fn werner_under_test(&self, p: f64) -> Result<ComplexMatrix> {
        let rho = werner_matrix(p);
        let d = self.options.corner_perturbation;
        if d == 0.0 {
            return Ok(rho);
        }
        let k = Complex::new(p / 2.0 + d, 0.0);
        rho.with_entry(0, 3, k)?.with_entry(3, 0, k)
    }

    fn werner_state(&self, p: f64) -> Result<TwoQubitState> {
        TwoQubitState::new(self.werner_under_test(p)?)
    }
}

fn wp(p: f64) -> Result<WernerParameter> {
    WernerParameter::new(p)
}

fn random_angles(rng: &mut StdRng) -> RotationAngles {
    let mut e = || {
        EulerAngles::new(
            rng.random_range(-TAU..TAU),
            rng.random_range(-TAU..TAU),
            rng.random_range(-TAU..TAU),
        )
    };
    let q1 = e();
    let q2 = e();
    RotationAngles::new(q1, q2)
}

fn random_p(rng: &mut StdRng) -> f64 {
    rng.random_range(WernerParameter::MIN..=WernerParameter::MAX)
}

fn p_grid(count: usize) -> Vec<f64> {
    linspace(WernerParameter::MIN, WernerParameter::MAX, count)
}

fn within(worst: f64, tol: f64) -> (bool, String) {
    (
        worst <= tol,
        format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    )
}

/// Runs every check and returns the report.
pub fn run(options: VerifyOptions) -> VerifyReport {
    let mut s = Suite {
        options,
        checks: Vec::new(),
        notes: Vec::new(),
    };
    let mut rng = StdRng::seed_from_u64(SEED);

    linalg_checks(&mut s, &mut rng);
    state_checks(&mut s);
    tomography_checks(&mut s, &mut rng);
    information_checks(&mut s, &mut rng);
    maximizer_checks(&mut s, &mut rng);
    limit_checks(&mut s);
    sweep_checks(&mut s);

    VerifyReport {
        checks: s.checks,
        notes: s.notes,
    }
}

fn linalg_checks(s: &mut Suite, rng: &mut StdRng) {
    let samples: Vec<(f64, RotationAngles)> = (0..200)
        .map(|_| (random_p(rng), random_angles(rng)))
        .collect();
    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for (p, a) in &samples {
            let u = local_unitary(a)?;
            let r = u.matmul(&s.werner_under_test(*p)?)?.matmul(&u.adjoint())?;
            worst = worst
                .max((r.trace() - Complex::new(1.0, 0.0)).norm())
                .max(r.hermiticity_defect());
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("rotated state trace and Hermiticity", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let r = |rng: &mut StdRng| {
                rotation_2x2(&EulerAngles::new(
                    rng.random_range(-TAU..TAU),
                    rng.random_range(-TAU..TAU),
                    rng.random_range(-TAU..TAU),
                ))
            };
            let (a, b, c, d) = (r(rng)?, r(rng)?, r(rng)?, r(rng)?);
            let lhs = a.kron(&b)?.matmul(&c.kron(&d)?)?;
            let rhs = a.matmul(&c)?.kron(&b.matmul(&d)?)?;
            worst = worst.max(lhs.max_abs_diff(&rhs)?);
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("kron mixed-product property", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for p in p_grid(101) {
            let rho = s.werner_under_test(p)?;
            for sub in [Subsystem::First, Subsystem::Second] {
                worst = worst.max((rho.partial_trace(sub)?.trace() - rho.trace()).norm());
            }
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("partial trace preserves trace", outcome);
}

fn state_checks(s: &mut Suite) {
    let outcome = (|| {
        let grid = p_grid(101);
        for &p in &grid {
            s.werner_state(p)?;
        }
        Ok((true, format!("{} values of p validated", grid.len())))
    })();
    s.record("Werner state validation", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for p in p_grid(101) {
            let numeric = s.werner_under_test(p)?.hermitian_eigenvalues()?;
            let mut analytic = werner_spectrum(wp(p)?).to_vec();
            analytic.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in numeric.iter().zip(&analytic) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(within(worst, 1e-10))
    })();
    s.record("Werner spectrum match", outcome);

    let outcome = (|| {
        let half = ComplexMatrix::from_diag(&[0.5, 0.5]);
        let mut worst: f64 = 0.0;
        for p in p_grid(101) {
            let st = s.werner_state(p)?;
            for sub in [Subsystem::First, Subsystem::Second] {
                worst = worst.max(st.reduced(sub)?.max_abs_diff(&half)?);
            }
        }
        Ok(within(worst, 1e-15))
    })();
    s.record("Werner reduced states are I/2", outcome);
}

fn tomography_checks(s: &mut Suite, rng: &mut StdRng) {
    let samples: Vec<(f64, RotationAngles)> = (0..1000)
        .map(|_| (random_p(rng), random_angles(rng)))
        .collect();

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for (p, a) in &samples {
            let matrix = tomogram(&s.werner_state(*p)?, a)?;
            let closed = werner_tomogram_closed_form(wp(*p)?, a)?;
            worst = worst.max(matrix.max_abs_diff(&closed));
        }
        Ok(within(worst, 1e-12))
    })();
    s.record(
        "tomogram matrix path vs closed form (1000 samples)",
        outcome,
    );

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for (p, a) in samples.iter().take(200) {
            let base = tomogram(&s.werner_state(*p)?, a)?;
            let mut b = *a;
            b.qubit1.phi += rng.random_range(-PI..PI);
            b.qubit2.phi += rng.random_range(-PI..PI);
            worst = worst.max(base.max_abs_diff(&tomogram(&s.werner_state(*p)?, &b)?));
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("tomogram independent of phi", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for (p, a) in samples.iter().take(200) {
            let base = tomogram(&s.werner_state(*p)?, a)?;
            let shift = rng.random_range(-PI..PI);
            let mut b = *a;
            b.qubit1.psi += shift;
            b.qubit2.psi -= shift;
            worst = worst.max(base.max_abs_diff(&tomogram(&s.werner_state(*p)?, &b)?));
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("tomogram depends on psi sum only", outcome);

    let outcome = (|| {
        let mut worst_norm: f64 = 0.0;
        let mut worst_marginal: f64 = 0.0;
        for (p, a) in samples.iter().take(300) {
            let t = tomogram(&s.werner_state(*p)?, a)?;
            worst_norm = worst_norm.max((t.joint.iter().sum::<f64>() - 1.0).abs());
            for m in t.marginal1.iter().chain(&t.marginal2) {
                worst_marginal = worst_marginal.max((m - 0.5).abs());
            }
        }
        Ok((
            worst_norm <= 1e-12 && worst_marginal <= 1e-12,
            format!("normalization {worst_norm:.3e}, marginal uniformity {worst_marginal:.3e} (tol 1e-12)"),
        ))
    })();
    s.record("tomogram normalization and uniform marginals", outcome);
}

fn information_checks(s: &mut Suite, rng: &mut StdRng) {
    let outcome = (|| {
        let mut worst: f64 = f64::NEG_INFINITY;
        for _ in 0..500 {
            let (p, a) = (random_p(rng), random_angles(rng));
            let t = tomogram(&s.werner_state(p)?, &a)?;
            let excess = shannon_entropy(&t.joint)?
                - shannon_entropy(&t.marginal1)?
                - shannon_entropy(&t.marginal2)?;
            worst = worst.max(excess);
        }
        Ok((
            worst <= 1e-12,
            format!("max H12 - H1 - H2 = {worst:.3e} (tol 1e-12)"),
        ))
    })();
    s.record("classical subadditivity", outcome);

    let outcome = (|| {
        let mut worst: f64 = f64::NEG_INFINITY;
        for p in p_grid(101) {
            let st = s.werner_state(p)?;
            let s1 = von_neumann_entropy(&st.reduced(Subsystem::First)?)?;
            let s2 = von_neumann_entropy(&st.reduced(Subsystem::Second)?)?;
            worst = worst.max(von_neumann_entropy(st.rho())? - s1 - s2);
        }
        Ok((
            worst <= 1e-12,
            format!("max S12 - S1 - S2 = {worst:.3e} (tol 1e-12)"),
        ))
    })();
    s.record("quantum subadditivity", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for p in p_grid(101) {
            let numeric = von_neumann_entropy(&s.werner_under_test(p)?)?;
            worst = worst.max((numeric - werner_entropy(wp(p)?)).abs());
        }
        Ok(within(worst, 1e-10))
    })();
    s.record("von Neumann entropy vs closed form", outcome);

    let outcome = (|| {
        let mut worst: f64 = f64::NEG_INFINITY;
        for _ in 0..2000 {
            let p = wp(random_p(rng))?;
            let it = tomographic_information(p, MaximizationMethod::ClosedForm)?;
            worst = worst.max(h_tilde(p, &random_angles(rng))? - it);
        }
        Ok((
            worst <= 1e-9,
            format!("max H~ - I_t = {worst:.3e} (tol 1e-9)"),
        ))
    })();
    s.record("I_t dominates H~", outcome);

    let outcome = (|| {
        let mut worst: f64 = f64::INFINITY;
        for p in p_grid(1001) {
            worst = worst.min(delta_i(wp(p)?));
        }
        Ok((worst >= -1e-9, format!("min dI = {worst:.6} (tol -1e-9)")))
    })();
    s.record("dI nonnegative on dense p grid", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let p = wp(random_p(rng))?;
            let (t1, t2, ps) = (
                rng.random_range(0.0..PI),
                rng.random_range(0.0..PI),
                rng.random_range(0.0..TAU),
            );
            // theta2 -> pi - theta2 together with psi sum -> psi sum + pi flips x
            let a = RotationAngles::from_psi_sum(t1, t2, ps);
            let b = RotationAngles::from_psi_sum(t1, PI - t2, ps + PI);
            let (xa, xb) = (werner_correlation(p, &a), werner_correlation(p, &b));
            worst = worst
                .max((xa + xb).abs())
                .max((h_tilde(p, &a)? - h_tilde(p, &b)?).abs());
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("H~ even in x", outcome);
}

fn maximizer_checks(s: &mut Suite, rng: &mut StdRng) {
    let outcome = (|| {
        let mut worst: f64 = 0.0;
        let mut exact_psi = true;
        let h = 1e-5;
        for _ in 0..500 {
            let p = wp(rng.random_range(-0.33..0.99))?;
            let a = random_angles(rng);
            let g = grad_h_tilde(p, &a)?;
            exact_psi &= g.d_psi1 == g.d_psi2;
            let f = |b: &RotationAngles| h_tilde(p, b);
            let mut fd = [0.0; 4];
            for (k, slot) in fd.iter_mut().enumerate() {
                let (mut hi, mut lo) = (a, a);
                let (ph, pl) = match k {
                    0 => (&mut hi.qubit1.theta, &mut lo.qubit1.theta),
                    1 => (&mut hi.qubit2.theta, &mut lo.qubit2.theta),
                    2 => (&mut hi.qubit1.psi, &mut lo.qubit1.psi),
                    _ => (&mut hi.qubit2.psi, &mut lo.qubit2.psi),
                };
                *ph += h;
                *pl -= h;
                *slot = (f(&hi)? - f(&lo)?) / (2.0 * h);
            }
            for (an, num) in [g.d_theta1, g.d_theta2, g.d_psi1, g.d_psi2].iter().zip(fd) {
                worst = worst.max((an - num).abs());
            }
        }
        let (ok, detail) = within(worst, 1e-6);
        Ok((
            ok && exact_psi,
            format!("{detail}; d_psi1 == d_psi2 exactly: {exact_psi}"),
        ))
    })();
    s.record(
        "analytic gradient vs finite differences (500 points)",
        outcome,
    );

    let outcome = (|| {
        let mut worst_grad: f64 = 0.0;
        let mut worst_det: f64 = 0.0;
        for p in [0.3, 0.5, 0.9] {
            for pt in stationary_points() {
                for free in [0.0, 1.1] {
                    let a = pt.angles(free);
                    worst_grad = worst_grad.max(grad_h_tilde(wp(p)?, &a)?.max_abs());
                    worst_det = worst_det.max(hessian3(wp(p)?, &a)?.determinant().abs());
                }
            }
        }
        Ok((
            worst_grad < 1e-10 && worst_det <= 1e-6,
            format!(
                "max |grad| {worst_grad:.3e} (tol 1e-10), max |det| {worst_det:.3e} (tol 1e-6)"
            ),
        ))
    })();
    s.record("stationary points are degenerate", outcome);

    let outcome = (|| {
        let mut worst_refined: f64 = 0.0;
        let mut worst_grid: f64 = 0.0;
        for p in p_grid(21) {
            let p = wp(p)?;
            let closed = tomographic_information(p, MaximizationMethod::ClosedForm)?;
            worst_refined = worst_refined.max((maximize_refined(p)?.value - closed).abs());
            worst_grid = worst_grid.max((maximize_grid(p, 64)?.value - closed).abs());
        }
        Ok((
            worst_refined < 1e-8 && worst_grid < 1e-4,
            format!("refined {worst_refined:.3e} (tol 1e-8), grid-64 {worst_grid:.3e} (tol 1e-4)"),
        ))
    })();
    s.record(
        "maximizers agree with closed-form I_t (21 p values)",
        outcome,
    );

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let p = wp(random_p(rng))?;
            let at = |t1: f64, t2: f64, f1: f64, f2: f64| {
                h_tilde(
                    p,
                    &RotationAngles::new(
                        EulerAngles::new(t1, f1, 0.3),
                        EulerAngles::new(t2, f2, 1.7),
                    ),
                )
            };
            let base = at(0.0, 0.0, 0.0, 0.0)?;
            worst = worst.max((at(PI, PI, 0.0, 0.0)? - base).abs()).max(
                (at(
                    0.0,
                    0.0,
                    rng.random_range(-PI..PI),
                    rng.random_range(-PI..PI),
                )? - base)
                    .abs(),
            );
        }
        Ok(within(worst, 1e-12))
    })();
    s.record("plateau at theta1 = theta2 in {0, pi}", outcome);
}

fn limit_checks(s: &mut Suite) {
    let ln3 = 3f64.ln();
    let ln4 = 4f64.ln();
    let outcome = (|| {
        let (lo, hi) = (wp(-1.0 / 3.0)?, wp(1.0)?);
        let dashed = |p: WernerParameter| -> Result<f64> {
            Ok(quantum_information(p)
                - h_tilde(p, &RotationAngles::from_psi_sum(FRAC_PI_2, PI, 0.0))?)
        };
        let pairs = [
            ("I_q(1)", quantum_information(hi), ln4),
            ("I_q(-1/3)", quantum_information(lo), ln4 - ln3),
            (
                "S12(1)",
                von_neumann_entropy(&s.werner_under_test(1.0)?)?,
                0.0,
            ),
            (
                "S12(-1/3)",
                von_neumann_entropy(&s.werner_under_test(-1.0 / 3.0)?)?,
                ln3,
            ),
            ("dI(1)", delta_i(hi), LN_2),
            ("dI(-1/3)", delta_i(lo), LN_2 / 3.0),
            ("dashed dI(1)", dashed(hi)?, ln4),
            ("dashed dI(-1/3)", dashed(lo)?, ln4 - ln3),
            (
                "I_t(-1/3)",
                h_tilde_from_correlation(1.0 / 3.0),
                5.0 / 3.0 * LN_2 - ln3,
            ),
        ];
        let mut worst: f64 = 0.0;
        let mut detail = Vec::new();
        for (name, got, want) in pairs {
            worst = worst.max((got - want).abs());
            detail.push(format!("{name}={got:.9}"));
        }
        let (ok, dev) = within(worst, 1e-9);
        Ok((ok, format!("{}; {dev}", detail.join(" "))))
    })();
    s.record("limit constants", outcome);

    let outcome = (|| {
        let mut worst: f64 = 0.0;
        for p in [0.3, 0.5, 0.9] {
            let aligned = hessian3(
                wp(p)?,
                &RotationAngles::from_psi_sum(FRAC_PI_2, FRAC_PI_2, 0.0),
            )?;
            let quarter = hessian3(
                wp(p)?,
                &RotationAngles::from_psi_sum(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            )?;
            let corner = p / 2.0 * (((1.0 - p) / 4.0).ln() - ((1.0 + p) / 4.0).ln());
            worst = worst
                .max(aligned.determinant().abs())
                .max(quarter.determinant().abs())
                .max((aligned.get(0, 0) - corner).abs())
                .max((quarter.get(2, 2) - 2.0 * p * p).abs());
        }
        Ok(within(worst, 1e-6))
    })();
    s.record(
        "Hessian determinants at equatorial stationary points",
        outcome,
    );

    let outcome = (|| {
        let thetas = linspace(0.0, TAU, 64);
        let mut worst: f64 = f64::INFINITY;
        for p in p_grid(101) {
            let p = wp(p)?;
            let iq = quantum_information(p);
            worst = worst.min(delta_i(p));
            for &t1 in &thetas {
                for &t2 in &thetas {
                    for ps in [0.0, FRAC_PI_2, PI, 1.0] {
                        let x = werner_correlation(p, &RotationAngles::from_psi_sum(t1, t2, ps));
                        worst = worst.min(iq - h_tilde_from_correlation(x));
                    }
                }
            }
        }
        Ok((
            worst >= -1e-9,
            format!("min over 101 p x 64^2 angles = {worst:.6} (tol -1e-9)"),
        ))
    })();
    s.record("nonnegativity sweep", outcome);
}

fn sweep_checks(s: &mut Suite) {
    let outcome = (|| {
        let p = wp(0.999)?;
        let min = surface_minimum(&surface_theta_theta(p, 0.0, 129)?).unwrap_or(f64::NAN);
        let target = delta_i(p);
        Ok((
            (min - target).abs() <= 1e-3,
            format!("p=0.999 surface minimum {min:.6}, closed form {target:.6} (tol 1e-3)"),
        ))
    })();
    s.record("p=0.999 surface minimum", outcome);

    if let Ok(p) = wp(0.9) {
        if let Ok(rows) = surface_theta_theta(p, 0.0, 129) {
            let min = surface_minimum(&rows).unwrap_or(f64::NAN);
            s.notes.push(format!(
                "p=0.9 surface minimum is {min:.6} (= I_q - I_t); a visual reading of about 0.65 for this surface does not match the closed form"
            ));
        }
    }

    let outcome = (|| {
        let cfg = SweepConfig {
            p_count: 41,
            ..SweepConfig::default()
        };
        let render = || -> Result<Vec<u8>> {
            let mut buf = Vec::new();
            write_scan_csv(&scan_p(&cfg)?, &mut buf).expect("writing to a Vec cannot fail");
            Ok(buf)
        };
        let (a, b) = (render()?, render()?);
        Ok((a == b, format!("{} bytes, identical: {}", a.len(), a == b)))
    })();
    s.record("scan CSV is deterministic", outcome);
}
