//! Parameter scans over `p` and the rotation angles, with CSV output.
//!
//! CSV files have a header row, `,` separators and every number printed with
//! 12 significant digits (see [`format_sig`]); rows come out in loop order,
//! so the same configuration always produces byte-identical output.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::information::{
    h_tilde_from_correlation, quantum_information, tomographic_information,
    tomographic_mutual_information, MaximizationMethod, DEFAULT_GRID_RESOLUTION,
};
use crate::maximizer::MIN_GRID_RESOLUTION;
use crate::states::{werner, WernerParameter};
use crate::tomography::{tomogram, werner_correlation, RotationAngles};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `v` with 12 significant digits, in positional notation when the
/// decimal exponent lies in `-5..12` and in scientific notation otherwise.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// `count` evenly spaced points from `min` to `max`, both endpoints exact.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count)
            .map(|k| {
                if k == count - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStyle {
    /// `|x| = |p|`, where `H~` reaches `I_t`.
    Solid,
    /// `x = 0`, where `H~` vanishes.
    Dashed,
}

/// A named angle setting used by [`scan_p`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub line: LineStyle,
    pub theta1: f64,
    pub theta2: f64,
    pub psi_sum: f64,
}

impl Fixture {
    fn new(name: &str, line: LineStyle, theta1: f64, theta2: f64, psi_sum: f64) -> Self {
        Self {
            name: name.to_string(),
            line,
            theta1,
            theta2,
            psi_sum,
        }
    }

    pub fn angles(&self) -> RotationAngles {
        RotationAngles::from_psi_sum(self.theta1, self.theta2, self.psi_sum)
    }
}

/// The eight stationary settings plotted against `p`: three on which `H~`
/// equals `I_t` and five on which it vanishes.
pub fn builtin_fixtures() -> Vec<Fixture> {
    use LineStyle::*;
    vec![
        Fixture::new("pi_pi_0", Solid, PI, PI, 0.0),
        Fixture::new("halfpi_halfpi_0", Solid, FRAC_PI_2, FRAC_PI_2, 0.0),
        Fixture::new("pi_pi_halfpi", Solid, PI, PI, FRAC_PI_2),
        Fixture::new("halfpi_pi_0", Dashed, FRAC_PI_2, PI, 0.0),
        Fixture::new("pi_halfpi_0", Dashed, PI, FRAC_PI_2, 0.0),
        Fixture::new("halfpi_pi_halfpi", Dashed, FRAC_PI_2, PI, FRAC_PI_2),
        Fixture::new("pi_halfpi_halfpi", Dashed, PI, FRAC_PI_2, FRAC_PI_2),
        Fixture::new(
            "halfpi_halfpi_halfpi",
            Dashed,
            FRAC_PI_2,
            FRAC_PI_2,
            FRAC_PI_2,
        ),
    ]
}

pub fn fixture_by_name(name: &str) -> Option<Fixture> {
    builtin_fixtures().into_iter().find(|f| f.name == name)
}

/// Configuration of a `p` scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub p_min: f64,
    pub p_max: f64,
    pub p_count: usize,
    /// Fixture names; empty selects all built-in fixtures.
    pub fixtures: Vec<String>,
    pub resolution: usize,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_min: WernerParameter::MIN,
            p_max: WernerParameter::MAX,
            p_count: 101,
            fixtures: Vec::new(),
            resolution: DEFAULT_GRID_RESOLUTION,
            output: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_min.is_finite() && self.p_max.is_finite()) {
            return Err(Error::InvalidConfig("p range must be finite".into()));
        }
        if self.p_min < WernerParameter::MIN || self.p_max > WernerParameter::MAX {
            return Err(Error::InvalidConfig(format!(
                "p range [{}, {}] leaves [-1/3, 1]",
                self.p_min, self.p_max
            )));
        }
        if self.p_min > self.p_max {
            return Err(Error::InvalidConfig("p-min exceeds p-max".into()));
        }
        if self.p_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "p-count {} < 2",
                self.p_count
            )));
        }
        if self.resolution < MIN_GRID_RESOLUTION {
            return Err(Error::InvalidResolution {
                min: MIN_GRID_RESOLUTION,
                got: self.resolution,
            });
        }
        self.resolved_fixtures().map(|_| ())
    }

    pub fn resolved_fixtures(&self) -> Result<Vec<Fixture>> {
        if self.fixtures.is_empty() {
            return Ok(builtin_fixtures());
        }
        self.fixtures
            .iter()
            .map(|name| {
                fixture_by_name(name)
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown fixture {name:?}")))
            })
            .collect()
    }

    pub fn p_values(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.p_count)
    }
}

/// One `(p, fixture)` row of a `p` scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub fixture: String,
    pub h_tilde: f64,
    pub iq: f64,
    pub it: f64,
    /// `iq - h_tilde` at the fixture angles.
    pub delta_i_fixture: f64,
    /// `iq - it`.
    pub delta_i_max: f64,
}

pub const SCAN_HEADER: &str = "p,fixture,h_tilde,iq,it,delta_i_fixture,delta_i_max";

/// Rows ordered by `p` ascending, then fixture order. `H~` is evaluated on
/// the matrix path.
pub fn scan_p(config: &SweepConfig) -> Result<Vec<ScanRow>> {
    config.validate()?;
    let fixtures = config.resolved_fixtures()?;
    let ps = config.p_values();
    let rows: Result<Vec<Vec<ScanRow>>> = ps
        .par_iter()
        .map(|&p| {
            let wp = WernerParameter::new(p)?;
            let state = werner(wp);
            let iq = quantum_information(wp);
            let it = tomographic_information(wp, MaximizationMethod::ClosedForm)?;
            fixtures
                .iter()
                .map(|f| {
                    let t = tomogram(&state, &f.angles())?;
                    let h = tomographic_mutual_information(&t)?;
                    Ok(ScanRow {
                        p,
                        fixture: f.name.clone(),
                        h_tilde: h,
                        iq,
                        it,
                        delta_i_fixture: iq - h,
                        delta_i_max: iq - it,
                    })
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SCAN_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_sig(r.p),
            r.fixture,
            format_sig(r.h_tilde),
            format_sig(r.iq),
            format_sig(r.it),
            format_sig(r.delta_i_fixture),
            format_sig(r.delta_i_max),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceMode {
    /// `(theta1, theta2)` over `[0, 2pi]^2` at fixed `p` and psi sum.
    #[default]
    ThetaTheta,
    /// `(theta1, p)` at fixed `theta2` and psi sum.
    ThetaP,
}

impl SurfaceMode {
    pub fn header(self) -> &'static str {
        match self {
            SurfaceMode::ThetaTheta => "theta1,theta2,delta_i",
            SurfaceMode::ThetaP => "theta1,p,delta_i",
        }
    }
}

impl fmt::Display for SurfaceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceMode::ThetaTheta => "theta-theta",
            SurfaceMode::ThetaP => "theta-p",
        })
    }
}

impl FromStr for SurfaceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta-theta" => Ok(SurfaceMode::ThetaTheta),
            "theta-p" => Ok(SurfaceMode::ThetaP),
            other => Err(Error::InvalidConfig(format!(
                "unknown surface mode {other:?}"
            ))),
        }
    }
}

/// One surface cell: two coordinates and `iq - h_tilde` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub first: f64,
    pub second: f64,
    pub delta: f64,
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidResolution {
            min: 2,
            got: resolution,
        });
    }
    Ok(())
}

/// `iq - H~` on `theta1, theta2 = 2 pi k / (n - 1)`, `k in 0..n`, outer loop
/// `theta1`.
pub fn surface_theta_theta(
    p: WernerParameter,
    psi_sum: f64,
    resolution: usize,
) -> Result<Vec<SurfaceRow>> {
    check_resolution(resolution)?;
    if !psi_sum.is_finite() {
        return Err(Error::NonFinite(format!("psi sum {psi_sum}")));
    }
    let thetas = linspace(0.0, TAU, resolution);
    let iq = quantum_information(p);
    Ok(thetas
        .iter()
        .flat_map(|&t1| {
            thetas.iter().map(move |&t2| {
                let x = werner_correlation(p, &RotationAngles::from_psi_sum(t1, t2, psi_sum));
                SurfaceRow {
                    first: t1,
                    second: t2,
                    delta: iq - h_tilde_from_correlation(x),
                }
            })
        })
        .collect())
}

/// `iq - H~` over `theta1 in [0, 2pi]` (outer loop) and `p` in
/// `[p_min, p_max]` at fixed `theta2` and psi sum.
pub fn surface_theta_p(
    theta2: f64,
    psi_sum: f64,
    p_min: f64,
    p_max: f64,
    p_count: usize,
    resolution: usize,
) -> Result<Vec<SurfaceRow>> {
    check_resolution(resolution)?;
    check_resolution(p_count)?;
    if !(theta2.is_finite() && psi_sum.is_finite()) {
        return Err(Error::NonFinite(format!(
            "theta2 {theta2}, psi sum {psi_sum}"
        )));
    }
    let ps = linspace(p_min, p_max, p_count)
        .into_iter()
        .map(WernerParameter::new)
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(resolution * p_count);
    for t1 in linspace(0.0, TAU, resolution) {
        let angles = RotationAngles::from_psi_sum(t1, theta2, psi_sum);
        for &p in &ps {
            let x = werner_correlation(p, &angles);
            rows.push(SurfaceRow {
                first: t1,
                second: p.value(),
                delta: quantum_information(p) - h_tilde_from_correlation(x),
            });
        }
    }
    Ok(rows)
}

pub fn write_surface_csv<W: Write>(
    mode: SurfaceMode,
    rows: &[SurfaceRow],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "{}", mode.header())?;
    for r in rows {
        writeln!(
            out,
            "{},{},{}",
            format_sig(r.first),
            format_sig(r.second),
            format_sig(r.delta)
        )?;
    }
    Ok(())
}

/// Smallest `delta` over the rows.
pub fn surface_minimum(rows: &[SurfaceRow]) -> Option<f64> {
    rows.iter().map(|r| r.delta).min_by(f64::total_cmp)
}
