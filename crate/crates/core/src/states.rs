//! Outcome laws of heterodyne and photon counting on displaced thermal
//! states, with samplers and the outcome-level concentration map.
//!
//! Heterodyne on `ρ_{ζ,N}` yields the Husimi function
//! `Q(α) = exp(−|α−ζ|²/(N+1)) / (π(N+1))`; photon counting on the centred
//! state `ρ_{0,N}` yields the geometric law `P(k) = N^k / (N+1)^{k+1}`. Both
//! are certified against the Fock-space construction in [`crate::fock`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::check_n_mean;
use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplacedThermalParams {
    pub zeta: Complex64,
    pub n_mean: f64,
}

impl DisplacedThermalParams {
    pub fn new(zeta: Complex64, n_mean: f64) -> Result<Self> {
        check_n_mean(n_mean)?;
        if !zeta.re.is_finite() || !zeta.im.is_finite() {
            return Err(Error::domain("amplitude must be finite"));
        }
        Ok(Self { zeta, n_mean })
    }

    pub fn centred(n_mean: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), n_mean)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneSample {
    pub alpha: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PhotonCount(pub u64);

/// Density of the heterodyne outcome with respect to `d²α`.
pub fn heterodyne_pdf(params: &DisplacedThermalParams, alpha: Complex64) -> f64 {
    let width = params.n_mean + 1.0;
    (-(alpha - params.zeta).norm_sqr() / width).exp() / (PI * width)
}

/// `α = ζ + g` with `g` circular complex Gaussian, `E|g|² = N + 1`.
pub fn sample_heterodyne(params: &DisplacedThermalParams, rng: &mut RngStream) -> HeterodyneSample {
    let sigma = (0.5 * (params.n_mean + 1.0)).sqrt();
    let (x, y) = rng.next_normal_pair();
    HeterodyneSample {
        alpha: params.zeta + Complex64::new(sigma * x, sigma * y),
    }
}

/// `P^N(k) = (1/(N+1)) (N/(N+1))^k`.
pub fn photon_pmf(n_mean: f64, k: i64) -> Result<f64> {
    check_n_mean(n_mean)?;
    if k < 0 {
        return Err(Error::domain(format!("photon count must be >= 0, got {k}")));
    }
    Ok(geometric_pmf(n_mean, k as u64))
}

pub(crate) fn geometric_pmf(n_mean: f64, k: u64) -> f64 {
    let p0 = 1.0 / (n_mean + 1.0);
    let ratio = n_mean / (n_mean + 1.0);
    p0 * ratio.powf(k as f64)
}

/// Inverse CDF of `P^N`: `k = ⌊ln(1−u) / ln(N/(N+1))⌋` for `u ∈ [0, 1)`.
pub fn photon_from_uniform(n_mean: f64, u: f64) -> PhotonCount {
    debug_assert!((0.0..1.0).contains(&u));
    let log_ratio = (n_mean / (n_mean + 1.0)).ln();
    // 1 - u ≥ 2^-53 for generated uniforms; clamp anyway for hand-fed values
    let tail = (1.0 - u).max(f64::MIN_POSITIVE);
    let k = (tail.ln() / log_ratio).floor();
    // saturating float-to-int conversion
    PhotonCount(k as u64)
}

pub fn sample_photon(n_mean: f64, rng: &mut RngStream) -> PhotonCount {
    photon_from_uniform(n_mean, rng.next_f64())
}

/// Outcome-level effect of the beam-splitter cascade on `n` copies: the
/// first mode carries `√n ζ`, the remaining `n − 1` modes are centred.
pub fn concentrate(
    params: &DisplacedThermalParams,
    n: usize,
) -> Result<(DisplacedThermalParams, DisplacedThermalParams)> {
    if n < 1 {
        return Err(Error::domain("concentration needs at least one copy"));
    }
    let first = DisplacedThermalParams::new(params.zeta * (n as f64).sqrt(), params.n_mean)?;
    let rest = DisplacedThermalParams::centred(params.n_mean)?;
    Ok((first, rest))
}
