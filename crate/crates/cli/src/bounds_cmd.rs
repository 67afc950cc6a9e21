use std::fmt::Write as _;

use clap::Args;
use num_complex::Complex64;
use serde::Serialize;
use thermest_core::bounds::{
    c_r_closed_2param, c_r_closed_3param, c_r_general, optimal_gaussian_tradeoff,
    rld_inverse_2param, rld_inverse_3param, GaussianTradeoff, WeightMatrix,
};
use thermest_core::Error;

use crate::manifest::FORMAT_VERSION;
use crate::point::PointArgs;
use crate::{emit, to_json, CliResult, OutputArgs};

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Mean photon number N.
    #[arg(long, default_value_t = 1.0)]
    pub n_mean: f64,
    /// Weight matrix: preset name (identity2, identity3) or text file.
    #[arg(long)]
    pub weight: Option<String>,
    /// Photon number known: two-parameter problem.
    #[arg(long)]
    pub known_n: bool,
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct BoundsReport {
    format_version: &'static str,
    n_mean: f64,
    /// Echoed only; the bounds do not depend on the displacement.
    zeta: [f64; 2],
    known_n: bool,
    weight: Vec<Vec<f64>>,
    c_r_general: f64,
    c_r_closed: Option<f64>,
    difference: Option<f64>,
    gaussian: Option<GaussianTradeoff>,
}

pub fn run(args: BoundsArgs) -> CliResult<()> {
    let zeta = args.point.zeta(Complex64::new(0.0, 0.0))?;
    let default_weight = if args.known_n {
        "identity2"
    } else {
        "identity3"
    };
    let weight = WeightMatrix::load(args.weight.as_deref().unwrap_or(default_weight))?;
    let known_n = weight.dim() == 2;
    if args.known_n && !known_n {
        return Err(Error::Domain("--known-n needs a 2x2 weight matrix".into()).into());
    }
    let n = args.n_mean;

    let (j_inv, closed) = if known_n {
        let (g1, g2, g3) = weight.leading_coefficients();
        (
            rld_inverse_2param(n)?,
            Some(c_r_closed_2param(g1, g2, g3, n)?.value),
        )
    } else {
        let closed = match weight.block_coefficients() {
            Some((g0, g1, g2, g3)) => Some(c_r_closed_3param(g0, g1, g2, g3, n)?.value),
            None => None,
        };
        (rld_inverse_3param(n)?, closed)
    };
    let general = c_r_general(&weight, &j_inv)?.value;
    let (g1, g2, g3) = weight.leading_coefficients();
    let gaussian = if g1 > 0.0 {
        Some(optimal_gaussian_tradeoff(g1, g2, g3, n)?)
    } else {
        None
    };

    let g = weight.matrix();
    let report = BoundsReport {
        format_version: FORMAT_VERSION,
        n_mean: n,
        zeta: [zeta.re, zeta.im],
        known_n,
        weight: (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| g[(i, j)]).collect())
            .collect(),
        c_r_general: general,
        c_r_closed: closed,
        difference: closed.map(|c| general - c),
        gaussian,
    };

    if args.output.json {
        return emit(&args.output, &to_json(&report));
    }
    let mut text = String::new();
    let problem = if known_n { "N known" } else { "N unknown" };
    writeln!(text, "N = {n}, {problem}").unwrap();
    writeln!(text, "C_R (general formula) = {general:.12}").unwrap();
    match closed {
        Some(c) => {
            writeln!(text, "C_R (closed form)     = {c:.12}").unwrap();
            writeln!(text, "difference            = {:.3e}", general - c).unwrap();
        }
        None => writeln!(
            text,
            "C_R (closed form)     = n/a (weight not block diagonal)"
        )
        .unwrap(),
    }
    if let Some(t) = gaussian {
        writeln!(
            text,
            "squeezed heterodyne: r = {:.9}, angle = {:.9}, Tr G V = {:.12}",
            t.squeeze_r, t.squeeze_angle, t.achieved
        )
        .unwrap();
    }
    emit(&args.output, &text)
}
