//! Browser bindings: a bound calculator, measurement-law tables and a small
//! Monte Carlo comparison. Every export returns JSON text or a flat array.

use num_complex::Complex64;
use serde::Serialize;
use thermest_core::bounds::{
    c_r_closed_2param, c_r_closed_3param, c_r_general, optimal_gaussian_tradeoff,
    rld_inverse_2param, rld_inverse_3param, GaussianTradeoff, ThetaPoint, WeightMatrix,
};
use thermest_core::estimator::{
    compare_to_bounds, monte_carlo_mse, ExperimentConfig, ProtocolKind,
};
use thermest_core::states::{heterodyne_pdf, photon_pmf, DisplacedThermalParams};
use thermest_core::{Error, Result};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive: the demo runs on the main thread.
pub const MAX_DEMO_WORK: usize = 20_000_000;

#[derive(Debug, Serialize)]
pub struct BoundsView {
    pub c_r_general: f64,
    pub c_r_closed: f64,
    pub gaussian: Option<GaussianTradeoff>,
}

/// Weight `[[g1+g2, g3], [g3, g1−g2]]`, extended by `g0` on the photon-number
/// coordinate unless `known_n`.
pub fn bounds_view(
    n_mean: f64,
    g0: f64,
    g1: f64,
    g2: f64,
    g3: f64,
    known_n: bool,
) -> Result<BoundsView> {
    let (general, closed) = if known_n {
        let w = WeightMatrix::from_two_param(g1, g2, g3)?;
        (
            c_r_general(&w, &rld_inverse_2param(n_mean)?)?.value,
            c_r_closed_2param(g1, g2, g3, n_mean)?.value,
        )
    } else {
        let w = WeightMatrix::from_block(g0, g1, g2, g3)?;
        (
            c_r_general(&w, &rld_inverse_3param(n_mean)?)?.value,
            c_r_closed_3param(g0, g1, g2, g3, n_mean)?.value,
        )
    };
    let gaussian = if g1 > 0.0 {
        Some(optimal_gaussian_tradeoff(g1, g2, g3, n_mean)?)
    } else {
        None
    };
    Ok(BoundsView {
        c_r_general: general,
        c_r_closed: closed,
        gaussian,
    })
}

/// Heterodyne density on a `points × points` grid over `[−w, w]²`, row-major
/// with the imaginary part indexing rows.
pub fn husimi_grid(
    zeta: Complex64,
    n_mean: f64,
    half_width: f64,
    points: usize,
) -> Result<Vec<f64>> {
    if !(2..=512).contains(&points) {
        return Err(Error::Domain(format!(
            "grid size must lie in 2..=512, got {points}"
        )));
    }
    let params = DisplacedThermalParams::new(zeta, n_mean)?;
    let step = 2.0 * half_width / (points - 1) as f64;
    let mut out = Vec::with_capacity(points * points);
    for row in 0..points {
        let im = half_width - step * row as f64;
        for col in 0..points {
            let re = -half_width + step * col as f64;
            out.push(heterodyne_pdf(&params, Complex64::new(re, im)));
        }
    }
    Ok(out)
}

pub fn photon_table(n_mean: f64, k_max: usize) -> Result<Vec<f64>> {
    (0..=k_max as i64).map(|k| photon_pmf(n_mean, k)).collect()
}

#[derive(Debug, Serialize)]
pub struct RatioView {
    pub n_trace_gv: f64,
    pub se: f64,
    pub c_r: f64,
    pub ratio: f64,
    pub ratio_se: f64,
    pub exact_n_trace: Option<f64>,
    pub asymptotic_ratio: f64,
}

pub fn ratio_view(
    protocol: &str,
    n_mean: f64,
    zeta: Complex64,
    n_copies: usize,
    trials: usize,
    seed: u64,
) -> Result<RatioView> {
    let protocol: ProtocolKind = protocol.parse()?;
    if n_copies.saturating_mul(trials) > MAX_DEMO_WORK {
        return Err(Error::Domain(format!(
            "copies x trials is limited to {MAX_DEMO_WORK} in the browser"
        )));
    }
    let config = ExperimentConfig {
        protocol,
        theta: ThetaPoint::from_zeta(zeta, n_mean)?,
        n_copies,
        trials,
        seed,
        weight: WeightMatrix::identity(protocol.dim())?,
        clip_nonneg: false,
    };
    let mse = monte_carlo_mse(&config)?;
    let cmp = compare_to_bounds(&mse, &config)?;
    Ok(RatioView {
        n_trace_gv: cmp.n_trace_gv,
        se: cmp.se,
        c_r: cmp.c_r,
        ratio: cmp.ratio,
        ratio_se: cmp.ratio_se,
        exact_n_trace: cmp.exact_n_trace,
        asymptotic_ratio: cmp.asymptotic_ratio,
    })
}

fn js_err(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serialisable view")
}

#[wasm_bindgen]
pub fn bounds(
    n_mean: f64,
    g0: f64,
    g1: f64,
    g2: f64,
    g3: f64,
    known_n: bool,
) -> Result<String, JsValue> {
    bounds_view(n_mean, g0, g1, g2, g3, known_n)
        .map(|v| to_json(&v))
        .map_err(js_err)
}

#[wasm_bindgen]
pub fn husimi(
    zeta_re: f64,
    zeta_im: f64,
    n_mean: f64,
    half_width: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    husimi_grid(Complex64::new(zeta_re, zeta_im), n_mean, half_width, points).map_err(js_err)
}

#[wasm_bindgen]
pub fn photon_counts(n_mean: f64, k_max: usize) -> Result<Vec<f64>, JsValue> {
    photon_table(n_mean, k_max).map_err(js_err)
}

#[wasm_bindgen]
pub fn simulate_ratio(
    protocol: &str,
    n_mean: f64,
    zeta_re: f64,
    zeta_im: f64,
    n_copies: usize,
    trials: usize,
    seed: u32,
) -> Result<String, JsValue> {
    ratio_view(
        protocol,
        n_mean,
        Complex64::new(zeta_re, zeta_im),
        n_copies,
        trials,
        seed as u64,
    )
    .map(|v| to_json(&v))
    .map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_agree() {
        let v = bounds_view(1.0, 1.0, 1.0, 0.0, 0.0, false).unwrap();
        assert!((v.c_r_general - 6.0).abs() < 1e-12 && (v.c_r_closed - 6.0).abs() < 1e-12);
        let k = bounds_view(1.0, 0.0, 1.0, 0.3, -0.2, true).unwrap();
        assert!((k.gaussian.unwrap().achieved - k.c_r_closed).abs() < 1e-9);
    }

    #[test]
    fn husimi_grid_peaks_at_displacement() {
        let zeta = Complex64::new(1.0, 0.0);
        let grid = husimi_grid(zeta, 0.5, 2.0, 5).unwrap();
        let (argmax, _) =
            grid.iter().enumerate().fold(
                (0, f64::MIN),
                |best, (i, &p)| if p > best.1 { (i, p) } else { best },
            );
        // row 2 (im = 0), column 3 (re = 1)
        assert_eq!(argmax, 2 * 5 + 3);
        assert!(husimi_grid(zeta, 0.5, 2.0, 1).is_err());
    }

    #[test]
    fn photon_table_is_geometric() {
        let t = photon_table(1.0, 3).unwrap();
        assert_eq!(t, vec![0.5, 0.25, 0.125, 0.0625]);
    }

    #[test]
    fn ratio_view_runs_and_limits_work() {
        let v = ratio_view("known-n", 1.0, Complex64::new(0.2, 0.0), 10, 2000, 1).unwrap();
        assert!((v.ratio - 1.0).abs() < 5.0 * v.ratio_se);
        assert!(ratio_view(
            "collective",
            1.0,
            Complex64::new(0.0, 0.0),
            1000,
            1_000_000,
            1
        )
        .is_err());
        assert!(ratio_view("bogus", 1.0, Complex64::new(0.0, 0.0), 10, 100, 1).is_err());
    }
}
