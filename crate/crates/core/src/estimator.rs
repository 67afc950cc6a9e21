//! Estimation protocols for `n` copies of `ρ_{ζ,N}` and their Monte Carlo
//! mean-square-error matrices.
//!
//! All protocols are simulated at the level of measurement outcomes. For the
//! collective protocol this relies on the beam-splitter cascade mapping the
//! product input exactly onto `ρ_{√n ζ,N} ⊗ ρ_{0,N}^{⊗(n−1)}`, which
//! [`crate::fock::verify_concentration_n2`] certifies numerically.
//!
//! Errors are measured in the `(θ¹, θ², N)` coordinates, `θ¹ + iθ² = √2 ζ`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    c_r_closed_2param, c_r_closed_3param, c_r_general, rld_inverse_2param, rld_inverse_3param,
    ThetaPoint, WeightMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::rng::RngStream;
use crate::states::{
    concentrate, sample_heterodyne, sample_photon, DisplacedThermalParams, PhotonCount,
};

/// Trials are generated in blocks of this size; statistics are reduced in
/// trial order after each block, so results do not depend on the thread
/// count.
const BLOCK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    /// Beam-splitter concentration, heterodyne on the first mode, photon
    /// counting on the rest.
    #[serde(rename = "collective")]
    CollectiveConcentration,
    /// Heterodyne on every copy; amplitude from the sample mean, photon number
    /// from the sample variance.
    #[serde(rename = "separable")]
    SeparableHeterodyne,
    /// Heterodyne on every copy with the photon number known.
    #[serde(rename = "known-n")]
    KnownNHeterodyne,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [
        ProtocolKind::CollectiveConcentration,
        ProtocolKind::SeparableHeterodyne,
        ProtocolKind::KnownNHeterodyne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::CollectiveConcentration => "collective",
            ProtocolKind::SeparableHeterodyne => "separable",
            ProtocolKind::KnownNHeterodyne => "known-n",
        }
    }

    /// Number of estimated coordinates.
    pub fn dim(self) -> usize {
        match self {
            ProtocolKind::CollectiveConcentration | ProtocolKind::SeparableHeterodyne => 3,
            ProtocolKind::KnownNHeterodyne => 2,
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown protocol {s:?} (expected collective, separable or known-n)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub zeta_hat: Complex64,
    /// `None` when the photon number is known.
    pub n_hat: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub theta: ThetaPoint,
    pub n_copies: usize,
    pub trials: usize,
    pub seed: u64,
    pub weight: WeightMatrix,
    /// Clip negative photon-number estimates to zero. Off by default: the
    /// figure of merit is the MSE of the raw estimator.
    pub clip_nonneg: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_copies < 2 {
            return Err(Error::domain(format!(
                "need at least 2 copies, got {}",
                self.n_copies
            )));
        }
        if self.trials < 1 {
            return Err(Error::domain("need at least one trial"));
        }
        if self.weight.dim() != self.protocol.dim() {
            return Err(Error::domain(format!(
                "protocol {} estimates {} coordinates but the weight matrix is {}x{}",
                self.protocol,
                self.protocol.dim(),
                self.weight.dim(),
                self.weight.dim()
            )));
        }
        Ok(())
    }

    fn params(&self) -> DisplacedThermalParams {
        DisplacedThermalParams {
            zeta: self.theta.zeta(),
            n_mean: self.theta.n_mean,
        }
    }
}

/// Maximum-likelihood estimate of `N` from i.i.d. counts with law `P^N`.
///
/// The log-likelihood `Σ log P^N(kᵢ)` is stationary only at the sample mean;
/// for an all-zero sample the supremum is approached as `N → 0` and `0` is
/// returned.
pub fn mle_geometric(counts: &[PhotonCount]) -> Result<f64> {
    if counts.is_empty() {
        return Err(Error::domain("maximum likelihood needs at least one count"));
    }
    let total: u64 = counts.iter().map(|c| c.0).sum();
    Ok(total as f64 / counts.len() as f64)
}

fn clip(n_hat: f64, config: &ExperimentConfig) -> f64 {
    if config.clip_nonneg {
        n_hat.max(0.0)
    } else {
        n_hat
    }
}

pub fn run_collective_trial(config: &ExperimentConfig, rng: &mut RngStream) -> Estimate {
    let n = config.n_copies;
    let (first, rest) = concentrate(&config.params(), n).expect("n_copies >= 2 was validated");
    let alpha = sample_heterodyne(&first, rng).alpha;
    let zeta_hat = alpha / (n as f64).sqrt();
    // sample mean of the n − 1 counts, which is the maximum-likelihood value
    let total: u64 = (1..n).map(|_| sample_photon(rest.n_mean, rng).0).sum();
    let n_hat = total as f64 / (n - 1) as f64;
    Estimate {
        zeta_hat,
        n_hat: Some(clip(n_hat, config)),
    }
}

pub fn run_separable_trial(config: &ExperimentConfig, rng: &mut RngStream) -> Estimate {
    let n = config.n_copies;
    let params = config.params();
    let samples: Vec<Complex64> = (0..n)
        .map(|_| sample_heterodyne(&params, rng).alpha)
        .collect();
    let mean = samples.iter().sum::<Complex64>() / n as f64;
    let spread: f64 = samples.iter().map(|a| (a - mean).norm_sqr()).sum();
    // E|α − ζ|² = N + 1
    let n_hat = spread / (n - 1) as f64 - 1.0;
    Estimate {
        zeta_hat: mean,
        n_hat: Some(clip(n_hat, config)),
    }
}

pub fn run_known_n_trial(config: &ExperimentConfig, rng: &mut RngStream) -> Estimate {
    let n = config.n_copies;
    let params = config.params();
    let sum: Complex64 = (0..n).map(|_| sample_heterodyne(&params, rng).alpha).sum();
    Estimate {
        zeta_hat: sum / n as f64,
        n_hat: None,
    }
}

pub fn run_trial(config: &ExperimentConfig, rng: &mut RngStream) -> Estimate {
    match config.protocol {
        ProtocolKind::CollectiveConcentration => run_collective_trial(config, rng),
        ProtocolKind::SeparableHeterodyne => run_separable_trial(config, rng),
        ProtocolKind::KnownNHeterodyne => run_known_n_trial(config, rng),
    }
}

/// One Monte Carlo trial with its squared coordinate errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub zeta_hat_re: f64,
    pub zeta_hat_im: f64,
    pub n_hat: Option<f64>,
    pub err_sq_theta1: f64,
    pub err_sq_theta2: f64,
    pub err_sq_n: Option<f64>,
}

impl TrialRecord {
    pub const CSV_HEADER: &'static str =
        "trial,zeta_hat_re,zeta_hat_im,n_hat,err_sq_theta1,err_sq_theta2,err_sq_n";

    /// One CSV row; absent fields are left empty.
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.trial,
            self.zeta_hat_re,
            self.zeta_hat_im,
            opt(self.n_hat),
            self.err_sq_theta1,
            self.err_sq_theta2,
            opt(self.err_sq_n)
        )
    }
}

/// Error vector `θ̂ − θ` in `(θ¹, θ²[, N])` coordinates.
fn error_vector(estimate: &Estimate, theta: &ThetaPoint) -> ([f64; 3], usize) {
    let e1 = SQRT_2 * estimate.zeta_hat.re - theta.theta1;
    let e2 = SQRT_2 * estimate.zeta_hat.im - theta.theta2;
    match estimate.n_hat {
        Some(n_hat) => ([e1, e2, n_hat - theta.n_mean], 3),
        None => ([e1, e2, 0.0], 2),
    }
}

/// Empirical MSE matrix `V` with the weighted, copy-scaled trace `n Tr G V`.
#[derive(Debug, Clone, Serialize)]
pub struct MseMatrix {
    pub dim: usize,
    #[serde(serialize_with = "serialize_rows")]
    pub entries: RealMatrix,
    pub trials: usize,
    pub n_copies: usize,
    /// `n · Tr G V`.
    pub n_trace_gv: f64,
    /// Standard error of `n_trace_gv` from the spread of per-trial quadratic
    /// forms; `NaN` (serialised as `null`) for a single trial.
    pub se_trace: f64,
}

fn serialize_rows<S: serde::Serializer>(
    m: &RealMatrix,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        let row: Vec<f64> = (0..m.cols()).map(|j| m[(i, j)]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

#[derive(Default)]
struct Accumulator {
    outer: [[f64; 3]; 3],
    q_sum: f64,
    q_sq_sum: f64,
    count: usize,
}

/// Runs `config.trials` independent trials; trial `t` draws from
/// `RngStream::new(seed, t)`. `on_record` sees every trial in index order.
pub fn monte_carlo_with_records(
    config: &ExperimentConfig,
    mut on_record: impl FnMut(&TrialRecord) -> Result<()>,
) -> Result<MseMatrix> {
    config.validate()?;
    let d = config.protocol.dim();
    let g = config.weight.matrix();
    let scale = config.n_copies as f64;
    let mut acc = Accumulator::default();
    let mut start = 0usize;
    while start < config.trials {
        let end = (start + BLOCK).min(config.trials);
        let block: Vec<Estimate> = (start..end)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(config.seed, t as u64);
                run_trial(config, &mut rng)
            })
            .collect();
        for (offset, estimate) in block.iter().enumerate() {
            let (e, dim) = error_vector(estimate, &config.theta);
            debug_assert_eq!(dim, d);
            let mut q = 0.0;
            for i in 0..d {
                for j in 0..d {
                    acc.outer[i][j] += e[i] * e[j];
                    q += g[(i, j)] * e[i] * e[j];
                }
            }
            q *= scale;
            acc.q_sum += q;
            acc.q_sq_sum += q * q;
            acc.count += 1;
            on_record(&TrialRecord {
                trial: (start + offset) as u64,
                zeta_hat_re: estimate.zeta_hat.re,
                zeta_hat_im: estimate.zeta_hat.im,
                n_hat: estimate.n_hat,
                err_sq_theta1: e[0] * e[0],
                err_sq_theta2: e[1] * e[1],
                err_sq_n: estimate.n_hat.map(|_| e[2] * e[2]),
            })?;
        }
        start = end;
    }

    let trials = acc.count as f64;
    let entries = RealMatrix::from_fn(d, d, |i, j| acc.outer[i][j] / trials);
    let n_trace_gv = scale * (g * &entries).trace();
    let se_trace = if acc.count > 1 {
        let mean = acc.q_sum / trials;
        let var = (acc.q_sq_sum - trials * mean * mean).max(0.0) / (trials - 1.0);
        (var / trials).sqrt()
    } else {
        f64::NAN
    };
    Ok(MseMatrix {
        dim: d,
        entries,
        trials: acc.count,
        n_copies: config.n_copies,
        n_trace_gv,
        se_trace,
    })
}

pub fn monte_carlo_mse(config: &ExperimentConfig) -> Result<MseMatrix> {
    monte_carlo_with_records(config, |_| Ok(()))
}

/// Exact `n Tr G V` at finite `n` for the unclipped estimators.
///
/// The two amplitude coordinates have error variance `(N+1)/n` each and are
/// uncorrelated with each other and with the photon-number error, whose
/// variance is `N(N+1)/(n−1)` (collective) or `(N+1)²/(n−1)` (separable).
pub fn exact_n_trace(config: &ExperimentConfig) -> Option<f64> {
    if config.clip_nonneg {
        return None;
    }
    let g = config.weight.matrix();
    let n_mean = config.theta.n_mean;
    let n = config.n_copies as f64;
    let amplitude = (g[(0, 0)] + g[(1, 1)]) * (n_mean + 1.0);
    let photon_var = match config.protocol {
        ProtocolKind::CollectiveConcentration => n_mean * (n_mean + 1.0) / (n - 1.0),
        ProtocolKind::SeparableHeterodyne => (n_mean + 1.0).powi(2) / (n - 1.0),
        ProtocolKind::KnownNHeterodyne => return Some(amplitude),
    };
    Some(amplitude + g[(2, 2)] * n * photon_var)
}

/// `lim_{n→∞} n Tr G V` for the unclipped estimators.
pub fn asymptotic_n_trace(protocol: ProtocolKind, weight: &WeightMatrix, n_mean: f64) -> f64 {
    let g = weight.matrix();
    let amplitude = (g[(0, 0)] + g[(1, 1)]) * (n_mean + 1.0);
    match protocol {
        ProtocolKind::CollectiveConcentration => amplitude + g[(2, 2)] * n_mean * (n_mean + 1.0),
        ProtocolKind::SeparableHeterodyne => amplitude + g[(2, 2)] * (n_mean + 1.0).powi(2),
        ProtocolKind::KnownNHeterodyne => amplitude,
    }
}

/// Empirical weighted MSE set against the RLD bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundComparison {
    pub n_trace_gv: f64,
    pub se: f64,
    /// `C_R(G)` from the general matrix formula.
    pub c_r: f64,
    /// Closed-form `C_R(G)` when `G` has the block form.
    pub c_r_closed: Option<f64>,
    /// `n Tr G V / C_R(G)`.
    pub ratio: f64,
    pub ratio_se: f64,
    pub exact_n_trace: Option<f64>,
    pub asymptotic_ratio: f64,
    /// Whether the empirical value lies within three standard errors of the
    /// exact finite-`n` value.
    pub consistent_with_exact: Option<bool>,
}

pub fn compare_to_bounds(mse: &MseMatrix, config: &ExperimentConfig) -> Result<BoundComparison> {
    let n_mean = config.theta.n_mean;
    let (j_inv, closed) = match config.protocol.dim() {
        2 => {
            let (g1, g2, g3) = config.weight.leading_coefficients();
            (
                rld_inverse_2param(n_mean)?,
                Some(c_r_closed_2param(g1, g2, g3, n_mean)?.value),
            )
        }
        _ => {
            let closed = match config.weight.block_coefficients() {
                Some((g0, g1, g2, g3)) => Some(c_r_closed_3param(g0, g1, g2, g3, n_mean)?.value),
                None => None,
            };
            (rld_inverse_3param(n_mean)?, closed)
        }
    };
    let c_r = c_r_general(&config.weight, &j_inv)?.value;
    let exact = exact_n_trace(config);
    let consistent = exact.and_then(|x| {
        mse.se_trace
            .is_finite()
            .then(|| (mse.n_trace_gv - x).abs() <= 3.0 * mse.se_trace)
    });
    Ok(BoundComparison {
        n_trace_gv: mse.n_trace_gv,
        se: mse.se_trace,
        c_r,
        c_r_closed: closed,
        ratio: mse.n_trace_gv / c_r,
        ratio_se: mse.se_trace / c_r,
        exact_n_trace: exact,
        asymptotic_ratio: asymptotic_n_trace(config.protocol, &config.weight, n_mean) / c_r,
        consistent_with_exact: consistent,
    })
}
