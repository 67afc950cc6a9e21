use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;

use clap::Args;
use num_complex::Complex64;
use serde::Serialize;
use thermest_core::bounds::{rld_inverse_2param, rld_inverse_3param, ThetaPoint};
use thermest_core::fock::{
    concentration_cutoff, cutoff_for, displaced_thermal_density, numeric_rld_fisher,
    povm_probability, thermal_density, verify_concentration_n2, verify_concentration_n3, Povm,
    RldFamily, DEFAULT_TAIL_TOL,
};
use thermest_core::states::{heterodyne_pdf, photon_pmf, DisplacedThermalParams};
use thermest_core::Error;

use crate::manifest::FORMAT_VERSION;
use crate::point::PointArgs;
use crate::{emit, to_json, CliError, CliResult, OutputArgs};

pub const HETERODYNE_TOL: f64 = 1e-6;
pub const PHOTON_TOL: f64 = 1e-12;
pub const CONCENTRATION_TOL: f64 = 1e-6;
pub const RLD_TOL: f64 = 1e-3;
pub const RLD_STEP: f64 = 1e-4;
/// Heterodyne grid: both quadratures on this many points in `[−A, A]`.
const GRID_POINTS: usize = 5;
const GRID_HALF_WIDTH: f64 = 2.1;

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub n_mean: f64,
    #[command(flatten)]
    pub point: PointArgs,
    /// Fock cutoff; chosen from the tail rule when absent.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Add the three-copy concentration check.
    #[arg(long)]
    pub deep: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_deviation,
            tolerance,
            // NaN deviations fail
            pass: max_deviation <= tolerance,
        }
    }
}

#[derive(Serialize)]
struct OracleReport {
    format_version: &'static str,
    n_mean: f64,
    zeta: [f64; 2],
    cutoff: usize,
    heterodyne_cutoff: usize,
    pass: bool,
    checks: Vec<CheckResult>,
}

fn grid() -> Vec<f64> {
    let step = 2.0 * GRID_HALF_WIDTH / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS)
        .map(|i| -GRID_HALF_WIDTH + step * i as f64)
        .collect()
}

fn max_entry_deviation(
    a: &thermest_core::linalg::ComplexMatrix,
    b: &thermest_core::linalg::ComplexMatrix,
) -> f64 {
    (a - b).max_abs()
}

pub fn run(args: OracleArgs) -> CliResult<()> {
    let n_mean = args.n_mean;
    let zeta = args.point.zeta(Complex64::new(0.5, 0.0))?;
    let params = DisplacedThermalParams::new(zeta, n_mean)?;
    let copies: f64 = if args.deep { 3.0 } else { 2.0 };
    let required = cutoff_for(n_mean, copies.sqrt() * zeta.norm(), DEFAULT_TAIL_TOL);
    let d = match args.cutoff {
        Some(d) if d < required => {
            let tail = (n_mean / (n_mean + 1.0)).powi(d as i32);
            return Err(Error::Cutoff {
                message: format!(
                    "cutoff {d} violates the truncation tail bound {DEFAULT_TAIL_TOL:e} \
                     (thermal tail {tail:.3e})"
                ),
                required_cutoff: required,
            }
            .into());
        }
        Some(d) => d,
        None => required,
    };

    let mut checks = Vec::new();

    // the grid reaches |α| ≈ 3, beyond the state's own support
    let reach = zeta.norm() + GRID_HALF_WIDTH * std::f64::consts::SQRT_2;
    let d_het = d.max(cutoff_for(n_mean, reach, DEFAULT_TAIL_TOL));
    let rho = displaced_thermal_density(zeta, n_mean, d_het)?;
    let mut het = 0.0f64;
    for &re in &grid() {
        for &im in &grid() {
            let alpha = Complex64::new(re, im);
            let oracle = povm_probability(&rho, Povm::Heterodyne(alpha));
            het = het.max((heterodyne_pdf(&params, alpha) - oracle).abs());
        }
    }
    checks.push(CheckResult::new("heterodyne_pdf", het, HETERODYNE_TOL));

    let thermal = thermal_density(n_mean, d)?;
    let mut photon = 0.0f64;
    for k in 0..d {
        let oracle = povm_probability(&thermal, Povm::Photon(k));
        photon = photon.max((photon_pmf(n_mean, k as i64)? - oracle).abs());
    }
    checks.push(CheckResult::new("photon_pmf", photon, PHOTON_TOL));

    // an explicit cutoff is used as given; otherwise the tighter concentration tail
    let d_conc = |copies| {
        args.cutoff
            .unwrap_or_else(|| concentration_cutoff(zeta, n_mean, copies))
    };
    let n2 = verify_concentration_n2(zeta, n_mean, d_conc(2))?;
    checks.push(CheckResult::new(
        "concentration_n2",
        n2.dist_first.max(n2.dist_second),
        CONCENTRATION_TOL,
    ));
    checks.push(CheckResult::new(
        "cascade_angle_n2",
        (n2.phi - FRAC_PI_4).abs(),
        0.0,
    ));
    if args.deep {
        let n3 = verify_concentration_n3(zeta, n_mean, d_conc(3))?;
        checks.push(CheckResult::new(
            "concentration_n3",
            n3.dist_first.max(n3.dist_second),
            CONCENTRATION_TOL,
        ));
    }

    let theta = ThetaPoint::from_zeta(zeta, n_mean)?;
    let j2 = numeric_rld_fisher(RldFamily::TwoParam, &theta, d, RLD_STEP)?.inverse()?;
    checks.push(CheckResult::new(
        "rld_inverse_2param",
        max_entry_deviation(&j2, &rld_inverse_2param(n_mean)?),
        RLD_TOL,
    ));
    let j3 = numeric_rld_fisher(RldFamily::ThreeParam, &theta, d, RLD_STEP)?.inverse()?;
    checks.push(CheckResult::new(
        "rld_inverse_3param",
        max_entry_deviation(&j3, &rld_inverse_3param(n_mean)?),
        RLD_TOL,
    ));

    let pass = checks.iter().all(|c| c.pass);
    let report = OracleReport {
        format_version: FORMAT_VERSION,
        n_mean,
        zeta: [zeta.re, zeta.im],
        cutoff: d,
        heterodyne_cutoff: d_het,
        pass,
        checks,
    };
    let text = if args.output.json {
        to_json(&report)
    } else {
        let mut s = String::new();
        writeln!(s, "N = {n_mean}, zeta = {zeta}, cutoff = {d}").unwrap();
        for c in &report.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                s,
                "{verdict} {:<20} max deviation {:.3e} (tolerance {:.0e})",
                c.name, c.max_deviation, c.tolerance
            )
            .unwrap();
        }
        s
    };
    emit(&args.output, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed(
            report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.to_string())
                .collect(),
        ))
    }
}
