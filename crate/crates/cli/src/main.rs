//! `tomoinfo` command line: single-point reports, `p` scans, `Delta I`
//! surfaces and the built-in verification suite.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use tomoinfo::information::{
    tomographic_information, InfoReport, MaximizationMethod, DEFAULT_GRID_RESOLUTION,
};
use tomoinfo::maximizer::maximize_refined;
use tomoinfo::sweep::{
    format_sig, scan_p, surface_minimum, surface_theta_p, surface_theta_theta, write_scan_csv,
    write_surface_csv, SurfaceMode, SweepConfig,
};
use tomoinfo::tomography::{EulerAngles, RotationAngles};
use tomoinfo::verify::{self, VerifyOptions};
use tomoinfo::WernerParameter;

#[derive(Debug, Parser)]
#[command(
    name = "tomoinfo",
    version,
    about = "Tomographic and von Neumann mutual information of two-qubit Werner states"
)]
struct Cli {
    /// TOML file with default values; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every entropy and information quantity at one `(p, angles)` point.
    Report(Settings),
    /// CSV of `H~`, `I_q`, `I_t` and `Delta I` over a `p` range for the built-in fixtures.
    ScanP(Settings),
    /// CSV of `I_q - H~` over a `(theta1, theta2)` or `(theta1, p)` grid.
    Surface(Settings),
    /// Run the property and limit checks.
    Verify(VerifyArgs),
}

/// Every tunable value; shared by flags and the config file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct Settings {
    /// Werner parameter in [-1/3, 1].
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi2: Option<f64>,
    /// Sets psi1 to this value and psi2 to 0; the tomogram depends only on the sum.
    #[arg(long, allow_hyphen_values = true)]
    psi_sum: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    p_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_max: Option<f64>,
    #[arg(long)]
    p_count: Option<usize>,
    /// Fixture name; repeat or comma-separate for several. Default: all.
    #[arg(long, value_delimiter = ',')]
    fixture: Option<Vec<String>>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Surface axes: theta-theta or theta-p.
    #[arg(long)]
    mode: Option<SurfaceMode>,
}

impl Settings {
    /// Fills every unset field from `file`.
    fn or(self, file: Settings) -> Settings {
        Settings {
            p: self.p.or(file.p),
            theta1: self.theta1.or(file.theta1),
            theta2: self.theta2.or(file.theta2),
            phi1: self.phi1.or(file.phi1),
            phi2: self.phi2.or(file.phi2),
            psi1: self.psi1.or(file.psi1),
            psi2: self.psi2.or(file.psi2),
            psi_sum: self.psi_sum.or(file.psi_sum),
            resolution: self.resolution.or(file.resolution),
            p_min: self.p_min.or(file.p_min),
            p_max: self.p_max.or(file.p_max),
            p_count: self.p_count.or(file.p_count),
            fixture: self.fixture.or(file.fixture),
            out: self.out.or(file.out),
            mode: self.mode.or(file.mode),
        }
    }

    fn p(&self) -> anyhow::Result<WernerParameter> {
        let p = self.p.context("--p is required")?;
        WernerParameter::new(p).with_context(|| format!("invalid --p {p}"))
    }

    fn angles(&self) -> RotationAngles {
        let (psi1, psi2) = match self.psi_sum {
            Some(s) => (s, 0.0),
            None => (self.psi1.unwrap_or(0.0), self.psi2.unwrap_or(0.0)),
        };
        RotationAngles::new(
            EulerAngles::new(self.theta1.unwrap_or(0.0), self.phi1.unwrap_or(0.0), psi1),
            EulerAngles::new(self.theta2.unwrap_or(0.0), self.phi2.unwrap_or(0.0), psi2),
        )
    }

    fn resolution(&self) -> usize {
        self.resolution.unwrap_or(DEFAULT_GRID_RESOLUTION)
    }

    fn sweep(&self) -> SweepConfig {
        let d = SweepConfig::default();
        SweepConfig {
            p_min: self.p_min.unwrap_or(d.p_min),
            p_max: self.p_max.unwrap_or(d.p_max),
            p_count: self.p_count.unwrap_or(d.p_count),
            fixtures: self.fixture.clone().unwrap_or_default(),
            resolution: self.resolution(),
            output: self.out.clone(),
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Add this amount to both anti-corner entries of the Werner matrix to
    /// check that the suite notices.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    perturb_corner: f64,
}

fn load_config(path: Option<&Path>) -> anyhow::Result<Settings> {
    let Some(path) = path else {
        return Ok(Settings::default());
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report(s: &Settings) -> anyhow::Result<()> {
    let p = s.p()?;
    let angles = s.angles();
    if !angles.is_finite() {
        bail!("angles must be finite");
    }
    let r = InfoReport::werner(p, &angles)?;
    let grid = tomographic_information(
        p,
        MaximizationMethod::Grid {
            resolution: s.resolution(),
        },
    )?;
    let refined = maximize_refined(p)?;
    let mut out = output(s.out.as_deref())?;
    let line = |out: &mut dyn Write, k: &str, v: f64| writeln!(out, "{k:<18} {}", format_sig(v));
    line(&mut out, "p", p.value())?;
    for (k, v) in [
        ("theta1", angles.qubit1.theta),
        ("phi1", angles.qubit1.phi),
        ("psi1", angles.qubit1.psi),
        ("theta2", angles.qubit2.theta),
        ("phi2", angles.qubit2.phi),
        ("psi2", angles.qubit2.psi),
    ] {
        line(&mut out, k, v)?;
    }
    for (i, w) in r.tomogram.joint.iter().enumerate() {
        line(&mut out, &format!("w{}", i + 1), *w)?;
    }
    line(&mut out, "S1", r.s1)?;
    line(&mut out, "S2", r.s2)?;
    line(&mut out, "S12", r.s12)?;
    line(&mut out, "I_q", r.iq)?;
    line(&mut out, "H1", r.h1)?;
    line(&mut out, "H2", r.h2)?;
    line(&mut out, "H12", r.h12)?;
    line(&mut out, "H_tilde", r.h_tilde)?;
    line(&mut out, "delta_at_angles", r.delta_at_angles())?;
    line(&mut out, "I_t", r.it.unwrap_or(f64::NAN))?;
    line(&mut out, "I_t_grid", grid)?;
    line(&mut out, "I_t_refined", refined.value)?;
    line(&mut out, "delta_I", r.delta_i.unwrap_or(f64::NAN))?;
    out.flush()?;
    Ok(())
}

fn scan(s: &Settings) -> anyhow::Result<()> {
    let config = s.sweep();
    config.validate()?;
    let rows = scan_p(&config)?;
    let mut out = output(config.output.as_deref())?;
    write_scan_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn surface(s: &Settings) -> anyhow::Result<()> {
    let mode = s.mode.unwrap_or_default();
    let psi_sum = s.psi_sum.unwrap_or(0.0);
    let rows = match mode {
        SurfaceMode::ThetaTheta => surface_theta_theta(s.p()?, psi_sum, s.resolution())?,
        SurfaceMode::ThetaP => {
            let c = s.sweep();
            surface_theta_p(
                s.theta2.unwrap_or(0.0),
                psi_sum,
                c.p_min,
                c.p_max,
                c.p_count,
                c.resolution,
            )?
        }
    };
    let mut out = output(s.out.as_deref())?;
    write_surface_csv(mode, &rows, &mut out)?;
    out.flush()?;
    if let Some(min) = surface_minimum(&rows) {
        eprintln!("minimum delta_i {}", format_sig(min));
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> bool {
    let report = verify::run(VerifyOptions {
        corner_perturbation: args.perturb_corner,
    });
    for check in &report.checks {
        println!("{check}");
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    println!(
        "summary: {} passed, {} failed, {} total",
        report.passed(),
        report.failed(),
        report.checks.len()
    );
    report.all_passed()
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Report(s) => report(&s.or(file)).map(|_| true),
        Command::ScanP(s) => scan(&s.or(file)).map(|_| true),
        Command::Surface(s) => surface(&s.or(file)).map(|_| true),
        Command::Verify(args) => Ok(run_verify(&args)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
