//! Cramér-Rao type bounds for the displaced thermal family.
//!
//! The RLD bound for a weight matrix `G` is
//!
//! ```text
//! C_R(G) = Tr G Re J⁻¹ + Tr |√G Im J⁻¹ √G|
//! ```
//!
//! where `J⁻¹` is the inverse RLD Fisher information. It is evaluated two
//! ways: by the general matrix formula (`c_r_general`) and by the closed forms
//! for the known-photon-number (`c_r_closed_2param`) and unknown-photon-number
//! (`c_r_closed_3param`) problems. Agreement of the two routes is one of the
//! main consistency checks of the crate.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix, SymmetricEigen};

/// Eigenvalues down to this (negative) value are treated as round-off and
/// clamped to zero.
pub const PSD_TOL: f64 = -1e-12;

/// Parameter point `(θ¹, θ², N)` with complex amplitude `ζ = (θ¹ + iθ²)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaPoint {
    pub theta1: f64,
    pub theta2: f64,
    pub n_mean: f64,
}

impl ThetaPoint {
    pub fn new(theta1: f64, theta2: f64, n_mean: f64) -> Result<Self> {
        check_n_mean(n_mean)?;
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::domain("theta coordinates must be finite"));
        }
        Ok(Self {
            theta1,
            theta2,
            n_mean,
        })
    }

    pub fn from_zeta(zeta: Complex64, n_mean: f64) -> Result<Self> {
        Self::new(SQRT_2 * zeta.re, SQRT_2 * zeta.im, n_mean)
    }

    pub fn zeta(&self) -> Complex64 {
        Complex64::new(self.theta1, self.theta2) * FRAC_1_SQRT_2
    }
}

pub(crate) fn check_n_mean(n_mean: f64) -> Result<()> {
    if n_mean > 0.0 && n_mean.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "mean photon number must be positive and finite, got {n_mean}"
        )))
    }
}

/// Symmetric positive semidefinite weight matrix of order 2 or 3.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    entries: RealMatrix,
}

impl WeightMatrix {
    /// Validates and symmetrizes `entries`.
    ///
    /// Asymmetry above `1e-12` (relative to the largest entry) is rejected;
    /// eigenvalues below [`PSD_TOL`] are rejected.
    pub fn new(entries: RealMatrix) -> Result<Self> {
        let d = entries.rows();
        if !entries.is_square() || !(d == 2 || d == 3) {
            return Err(Error::domain(format!(
                "weight matrix must be 2x2 or 3x3, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        if entries.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("weight matrix entries must be finite"));
        }
        let scale = entries.max_abs().max(1.0);
        if entries.asymmetry() > 1e-12 * scale {
            return Err(Error::domain(format!(
                "weight matrix is not symmetric (defect {:e})",
                entries.asymmetry()
            )));
        }
        let entries = entries.symmetrized();
        let min_eig = SymmetricEigen::new(&entries)?.values[0];
        if min_eig < PSD_TOL * scale {
            return Err(Error::domain(format!(
                "weight matrix is not positive semidefinite (smallest eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(RealMatrix::identity(dim))
    }

    /// `[[g₁+g₂, g₃], [g₃, g₁−g₂]]`.
    pub fn from_two_param(g1: f64, g2: f64, g3: f64) -> Result<Self> {
        Self::new(RealMatrix::from_row_major(
            2,
            2,
            vec![g1 + g2, g3, g3, g1 - g2],
        )?)
    }

    /// `[[g₁+g₂, g₃, 0], [g₃, g₁−g₂, 0], [0, 0, g₀]]`.
    pub fn from_block(g0: f64, g1: f64, g2: f64, g3: f64) -> Result<Self> {
        Self::new(RealMatrix::from_row_major(
            3,
            3,
            vec![g1 + g2, g3, 0.0, g3, g1 - g2, 0.0, 0.0, 0.0, g0],
        )?)
    }

    /// Named presets: `identity2`, `identity3`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "identity2" => Self::identity(2).ok(),
            "identity3" => Self::identity(3).ok(),
            _ => None,
        }
    }

    /// Parses `d` followed by `d²` whitespace-separated row-major entries.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let dim: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty weight matrix text".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
        if !(dim == 2 || dim == 3) {
            return Err(Error::Parse(format!("dimension must be 2 or 3, got {dim}")));
        }
        let values = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != dim * dim {
            return Err(Error::Parse(format!(
                "expected {} entries after the dimension, found {}",
                dim * dim,
                values.len()
            )));
        }
        Self::new(RealMatrix::from_row_major(dim, dim, values)?)
    }

    /// Resolves a preset name, falling back to reading a text file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(w) = Self::preset(name_or_path) {
            return Ok(w);
        }
        let text = std::fs::read_to_string(Path::new(name_or_path)).map_err(|e| {
            std::io::Error::new(e.kind(), format!("weight file {name_or_path:?}: {e}"))
        })?;
        Self::parse_text(&text)
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.entries
    }

    /// `(g₁, g₂, g₃)` of the leading 2×2 block.
    pub fn leading_coefficients(&self) -> (f64, f64, f64) {
        let g = &self.entries;
        (
            0.5 * (g[(0, 0)] + g[(1, 1)]),
            0.5 * (g[(0, 0)] - g[(1, 1)]),
            g[(0, 1)],
        )
    }

    /// `(g₀, g₁, g₂, g₃)` when the matrix has the amplitude/photon-number
    /// block form, i.e. zero coupling between the first two coordinates and
    /// the third.
    pub fn block_coefficients(&self) -> Option<(f64, f64, f64, f64)> {
        if self.dim() != 3 {
            return None;
        }
        let g = &self.entries;
        if g[(0, 2)] != 0.0 || g[(1, 2)] != 0.0 {
            return None;
        }
        let (g1, g2, g3) = self.leading_coefficients();
        Some((g[(2, 2)], g1, g2, g3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// General matrix formula.
    RldCr,
    /// Closed form, photon number known.
    Closed2Param,
    /// Closed form, photon number unknown.
    Closed3Param,
    /// Optimised heterodyne with squeezed ancilla.
    GaussianOpt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: f64,
    /// Mean photon number the bound was evaluated at, when the route knows it.
    pub n_mean: Option<f64>,
}

/// Inverse RLD Fisher information with the photon number known:
/// `[[N+½, i/2], [−i/2, N+½]]`.
pub fn rld_inverse_2param(n_mean: f64) -> Result<ComplexMatrix> {
    check_n_mean(n_mean)?;
    let d = Complex64::new(n_mean + 0.5, 0.0);
    let off = Complex64::new(0.0, 0.5);
    Ok(ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => off,
        (1, 0) => off.conj(),
        _ => d,
    }))
}

/// Inverse RLD Fisher information with the photon number unknown: the
/// 2-parameter block plus `N(N+1)` for the photon-number coordinate.
pub fn rld_inverse_3param(n_mean: f64) -> Result<ComplexMatrix> {
    let block = rld_inverse_2param(n_mean)?;
    Ok(ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (2, 2) => Complex64::new(n_mean * (n_mean + 1.0), 0.0),
        (i, j) if i < 2 && j < 2 => block[(i, j)],
        _ => Complex64::new(0.0, 0.0),
    }))
}

/// Principal square root of a symmetric positive semidefinite matrix.
pub fn sqrt_psd(m: &RealMatrix) -> Result<RealMatrix> {
    if !m.is_square() {
        return Err(Error::domain("square root needs a square matrix"));
    }
    let scale = m.max_abs().max(1.0);
    if m.asymmetry() > 1e-12 * scale {
        return Err(Error::domain(format!(
            "matrix is not symmetric (defect {:e})",
            m.asymmetry()
        )));
    }
    let eig = SymmetricEigen::new(m)?;
    if let Some(&low) = eig.values.first() {
        if low < PSD_TOL * scale {
            return Err(Error::domain(format!(
                "matrix is indefinite (smallest eigenvalue {low:e})"
            )));
        }
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()).symmetrized())
}

/// Sum of singular values of a square complex matrix.
///
/// Computed from the spectrum of the Hermitian dilation `[[0, M], [M†, 0]]`,
/// whose eigenvalues are `±σᵢ`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain("trace norm needs a square matrix"));
    }
    let n = m.rows();
    let zero = Complex64::new(0.0, 0.0);
    let dilation = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)].conj(),
        _ => zero,
    });
    let values = crate::linalg::hermitian_eigenvalues(&dilation)?;
    Ok(0.5 * values.iter().map(|l| l.abs()).sum::<f64>())
}

/// Sum of singular values of a square real matrix.
pub fn trace_norm_real(m: &RealMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain("trace norm needs a square matrix"));
    }
    let n = m.rows();
    let dilation = RealMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)],
        _ => 0.0,
    });
    let eig = SymmetricEigen::new(&dilation)?;
    Ok(0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>())
}

/// `Tr G Re J⁻¹ + Tr |√G Im J⁻¹ √G|`.
pub fn c_r_general(weight: &WeightMatrix, j_inv: &ComplexMatrix) -> Result<BoundValue> {
    let d = weight.dim();
    if j_inv.rows() != d || j_inv.cols() != d {
        return Err(Error::domain(format!(
            "weight is {d}x{d} but the inverse Fisher matrix is {}x{}",
            j_inv.rows(),
            j_inv.cols()
        )));
    }
    if j_inv.hermiticity_defect() > 1e-12 * j_inv.max_abs().max(1.0) {
        return Err(Error::domain("inverse Fisher matrix is not Hermitian"));
    }
    let g = weight.matrix();
    let re = j_inv.real_part();
    let im = j_inv.imag_part();
    let root = sqrt_psd(g)?;
    let sandwich = &(&root * &im) * &root;
    let value = (g * &re).trace() + trace_norm_real(&sandwich)?;
    Ok(BoundValue {
        kind: BoundKind::RldCr,
        value,
        n_mean: None,
    })
}

fn check_two_param_weight(g1: f64, g2: f64, g3: f64) -> Result<f64> {
    let disc = g1 * g1 - g2 * g2 - g3 * g3;
    let scale = (g1 * g1).max(1.0);
    if g1 < 0.0 || disc < PSD_TOL * scale || !disc.is_finite() {
        return Err(Error::domain(format!(
            "weight (g1={g1}, g2={g2}, g3={g3}) is not positive semidefinite: \
             need g1 >= 0 and g1^2 >= g2^2 + g3^2"
        )));
    }
    Ok(disc.max(0.0))
}

/// `2(N+½) g₁ + √(g₁² − g₂² − g₃²)`.
pub fn c_r_closed_2param(g1: f64, g2: f64, g3: f64, n_mean: f64) -> Result<BoundValue> {
    check_n_mean(n_mean)?;
    let disc = check_two_param_weight(g1, g2, g3)?;
    Ok(BoundValue {
        kind: BoundKind::Closed2Param,
        value: 2.0 * (n_mean + 0.5) * g1 + disc.sqrt(),
        n_mean: Some(n_mean),
    })
}

/// `g₀ N(N+1) + 2(N+½) g₁ + √(g₁² − g₂² − g₃²)`.
pub fn c_r_closed_3param(g0: f64, g1: f64, g2: f64, g3: f64, n_mean: f64) -> Result<BoundValue> {
    check_n_mean(n_mean)?;
    if g0 < 0.0 || !g0.is_finite() {
        return Err(Error::domain(format!("g0 must be non-negative, got {g0}")));
    }
    let disc = check_two_param_weight(g1, g2, g3)?;
    Ok(BoundValue {
        kind: BoundKind::Closed3Param,
        value: g0 * n_mean * (n_mean + 1.0) + 2.0 * (n_mean + 0.5) * g1 + disc.sqrt(),
        n_mean: Some(n_mean),
    })
}

/// Result of optimising a squeezed-ancilla heterodyne for a 2×2 weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianTradeoff {
    /// Squeezing parameter `r`; the ancilla covariance is
    /// `½ R(φ) diag(e^{2r}, e^{−2r}) R(φ)ᵀ`.
    pub squeeze_r: f64,
    /// Rotation angle `φ`.
    pub squeeze_angle: f64,
    /// Minimal `Tr G (Σ_ρ + Σ_m)`.
    pub achieved: f64,
    pub iterations: usize,
}

/// Bracket half-width for the squeezing search. Round-off in the smaller
/// weight eigenvalue is amplified by `e^{2|r|}`; at `|r| = 8` that stays
/// below `1e-8`, while the cost missed for an optimum outside the bracket is
/// at most `½ λ_max e^{−16}`.
const SQUEEZE_BRACKET: f64 = 8.0;
const GOLDEN_MAX_ITER: usize = 200;
const GOLDEN_TOL: f64 = 1e-12;

/// Per-copy weighted error `Tr G (Σ_ρ + Σ_m)` of heterodyne with a squeezed
/// vacuum ancilla, in the `(θ¹, θ²)` coordinates. `Σ_ρ = (N+½) I`.
pub fn squeezed_heterodyne_cost(weight: &RealMatrix, n_mean: f64, r: f64, angle: f64) -> f64 {
    let (s, c) = angle.sin_cos();
    let rot = RealMatrix::from_row_major(2, 2, vec![c, -s, s, c]).expect("2x2");
    let diag = RealMatrix::from_diagonal(&[0.5 * (2.0 * r).exp(), 0.5 * (-2.0 * r).exp()]);
    let sigma_m = &(&rot * &diag) * &rot.transpose();
    let sigma_rho = RealMatrix::identity(2).scale(n_mean + 0.5);
    (weight * &(&sigma_rho + &sigma_m)).trace()
}

/// Minimises [`squeezed_heterodyne_cost`] over the squeezing parameter, with
/// the rotation aligned to the eigenvectors of `G`'s traceless part.
pub fn optimal_gaussian_tradeoff(
    g1: f64,
    g2: f64,
    g3: f64,
    n_mean: f64,
) -> Result<GaussianTradeoff> {
    check_n_mean(n_mean)?;
    check_two_param_weight(g1, g2, g3)?;
    if g1 <= 0.0 {
        return Err(Error::domain("optimal trade-off needs g1 > 0"));
    }
    let weight = RealMatrix::from_row_major(2, 2, vec![g1 + g2, g3, g3, g1 - g2])?;
    // R(φ)ᵀ G R(φ) = diag(g₁ + ρ, g₁ − ρ) with ρ = √(g₂² + g₃²)
    let angle = 0.5 * g3.atan2(g2);
    let cost = |r: f64| squeezed_heterodyne_cost(&weight, n_mean, r, angle);

    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (-SQUEEZE_BRACKET, SQUEEZE_BRACKET);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = cost(x1);
    let mut f2 = cost(x2);
    let mut iterations = 0;
    while hi - lo > GOLDEN_TOL {
        if iterations == GOLDEN_MAX_ITER {
            return Err(Error::numerical(format!(
                "golden-section search stalled after {GOLDEN_MAX_ITER} iterations: \
                 bracket [{lo}, {hi}], costs ({f1}, {f2})"
            )));
        }
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = cost(x2);
        }
    }
    let r = 0.5 * (lo + hi);
    Ok(GaussianTradeoff {
        squeeze_r: r,
        squeeze_angle: angle,
        achieved: cost(r),
        iterations,
    })
}
