//! Truncated Fock-space oracle.
//!
//! States and circuits are built explicitly as dense matrices on the span of
//! `|0⟩ … |D−1⟩` and used to check the analytic shortcuts taken elsewhere:
//! the heterodyne and photon-counting laws in [`crate::states`], the
//! beam-splitter concentration that the estimator simulates at outcome level,
//! and the inverse RLD Fisher matrices in [`crate::bounds`].
//!
//! Two-mode operators use the index `(m, n) ↦ m·D + n`, with `m` the photon
//! number of the first mode.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{check_n_mean, ThetaPoint};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, trace_distance, ComplexMatrix, RealMatrix};
use crate::states::geometric_pmf;

/// Default truncation tail for the cutoff rule.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
/// Tail used when choosing the cutoff for concentration checks. Truncation
/// errors of the output marginals are roughly a hundred times the per-mode
/// tail, so `DEFAULT_TAIL_TOL` would leave trace distances near `1e-6`.
pub const CONCENTRATION_TAIL_TOL: f64 = 1e-10;
/// Thermal weight below which Fock levels are dropped when a truncated
/// density is assembled from the untruncated operator.
const WORK_TAIL_TOL: f64 = 1e-18;
/// Largest working dimension used internally.
const MAX_WORK_CUTOFF: usize = 600;
/// Condition number above which `ρ⁻¹` is not trusted.
pub const MAX_CONDITION: f64 = 1e12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-mode operator on the truncated space.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub cutoff: usize,
    pub matrix: ComplexMatrix,
    /// Bound on the probability mass lost to truncation (zero for operators
    /// that are not states).
    pub tail: f64,
}

impl FockOperator {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Checks the density invariants: Hermitian within `1e-12`, trace in
    /// `[1 − tail − 1e-12, 1 + 1e-12]`, eigenvalues `≥ −1e-10`.
    pub fn check_density(&self) -> Result<()> {
        let defect = self.matrix.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::numerical(format!(
                "density not Hermitian (defect {defect:e})"
            )));
        }
        let tr = self.trace();
        if tr > 1.0 + 1e-12 || tr < 1.0 - self.tail - 1e-12 {
            return Err(Error::numerical(format!(
                "density trace {tr} outside [1 - {:e}, 1]",
                self.tail
            )));
        }
        let low = hermitian_eigenvalues(&self.matrix)?[0];
        if low < -1e-10 {
            return Err(Error::numerical(format!("density has eigenvalue {low:e}")));
        }
        Ok(())
    }
}

/// Two-mode operator on the truncated space, index `(m, n) ↦ m·D + n`.
#[derive(Debug, Clone)]
pub struct TwoModeOperator {
    pub cutoff: usize,
    pub matrix: ComplexMatrix,
}

impl TwoModeOperator {
    pub fn product(first: &FockOperator, second: &FockOperator) -> Result<Self> {
        if first.cutoff != second.cutoff {
            return Err(Error::domain("product of operators with different cutoffs"));
        }
        Ok(Self {
            cutoff: first.cutoff,
            matrix: first.matrix.kron(&second.matrix),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

fn check_cutoff(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::domain(format!("cutoff must be at least 2, got {d}")))
    } else {
        Ok(())
    }
}

/// `⟨m|a|n⟩ = √n δ_{m,n−1}`.
pub fn annihilation(d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    let matrix = ComplexMatrix::from_fn(d, d, |m, n| {
        if m + 1 == n {
            Complex64::new((n as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    Ok(FockOperator {
        cutoff: d,
        matrix,
        tail: 0.0,
    })
}

/// Smallest `D` with `(N/(N+1))^D < tol`.
pub fn thermal_cutoff(n_mean: f64, tol: f64) -> usize {
    let ratio = n_mean / (n_mean + 1.0);
    ((tol.ln() / ratio.ln()).floor() as usize + 1).max(2)
}

/// Smallest `D` with Poisson tail `P(K ≥ D) < tol` for mean `|z|²`.
pub fn coherent_cutoff(abs_z: f64, tol: f64) -> usize {
    let lambda = abs_z * abs_z;
    if lambda == 0.0 {
        return 2;
    }
    let mut term = (-lambda).exp();
    let mut cdf = term;
    let mut k = 0usize;
    while 1.0 - cdf >= tol && k < MAX_WORK_CUTOFF {
        k += 1;
        term *= lambda / k as f64;
        cdf += term;
        // guard against the cdf saturating below 1 in floating point
        if term < tol * 1e-3 && k as f64 > lambda {
            break;
        }
    }
    (k + 1).max(2)
}

/// Cutoff rule: both the thermal tail and the Poisson tail of the largest
/// displacement fall below `tol`.
pub fn cutoff_for(n_mean: f64, max_abs_zeta: f64, tol: f64) -> usize {
    thermal_cutoff(n_mean, tol).max(coherent_cutoff(max_abs_zeta, tol))
}

/// `diag(P^N(0), …, P^N(D−1))` with tail `(N/(N+1))^D`.
pub fn thermal_density(n_mean: f64, d: usize) -> Result<FockOperator> {
    check_n_mean(n_mean)?;
    check_cutoff(d)?;
    let matrix = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(geometric_pmf(n_mean, i as u64), 0.0)
        } else {
            ZERO
        }
    });
    Ok(FockOperator {
        cutoff: d,
        matrix,
        tail: (n_mean / (n_mean + 1.0)).powi(d as i32),
    })
}

fn log_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        out.push(out[k - 1] + (k as f64).ln());
    }
    out
}

/// `L_k^{(a)}(x)` for `k = 0..=kmax` by the three-term recurrence.
fn laguerre_column(kmax: usize, a: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(1.0 + a - x);
    }
    for j in 1..kmax {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * out[j] - (jf + a) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Matrix elements `⟨m|D(ζ)|n⟩` of the untruncated displacement operator for
/// `m < rows`, `n < cols`.
fn displacement_elements(zeta: Complex64, rows: usize, cols: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rows, cols);
    let x = zeta.norm_sqr();
    if x == 0.0 {
        for i in 0..rows.min(cols) {
            out[(i, i)] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let lf = log_factorials(rows.max(cols));
    let ln_abs = zeta.norm().ln();
    let phase = zeta / zeta.norm();
    let minus_conj_phase = -phase.conj();
    // m ≥ n: √(n!/m!) ζ^{m−n} e^{−x/2} L_n^{(m−n)}(x)
    for delta in 0..rows {
        let lag = laguerre_column(cols.min(rows - delta).saturating_sub(1), delta as f64, x);
        let ph = phase.powu(delta as u32);
        for (n, l) in lag.iter().enumerate() {
            let m = n + delta;
            if m >= rows || n >= cols {
                break;
            }
            let log_mag = 0.5 * (lf[n] - lf[m]) + delta as f64 * ln_abs - 0.5 * x;
            out[(m, n)] = ph * (log_mag.exp() * l);
        }
    }
    // m < n: √(m!/n!) (−ζ*)^{n−m} e^{−x/2} L_m^{(n−m)}(x)
    for delta in 1..cols {
        let lag = laguerre_column(rows.min(cols - delta).saturating_sub(1), delta as f64, x);
        let ph = minus_conj_phase.powu(delta as u32);
        for (m, l) in lag.iter().enumerate() {
            let n = m + delta;
            if n >= cols || m >= rows {
                break;
            }
            let log_mag = 0.5 * (lf[m] - lf[n]) + delta as f64 * ln_abs - 0.5 * x;
            out[(m, n)] = ph * (log_mag.exp() * l);
        }
    }
    out
}

/// Displacement operator restricted to the first `D` Fock levels.
pub fn displacement_operator(zeta: Complex64, d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    if zeta.norm_sqr() > d as f64 / 4.0 {
        log::warn!(
            "displacement |zeta|^2 = {} is large for cutoff {d}; truncation leakage is significant",
            zeta.norm_sqr()
        );
    }
    Ok(FockOperator {
        cutoff: d,
        matrix: displacement_elements(zeta, d, d),
        tail: 0.0,
    })
}

/// Projection of `ρ_{ζ,N} = D(ζ) ρ_{0,N} D(ζ)†` onto the first `D` levels.
///
/// The thermal sum runs over a working dimension large enough that the
/// dropped thermal weight is below `1e-18`, so the result is the exact
/// truncation of the untruncated state rather than a product of truncated
/// factors.
pub fn displaced_thermal_density(zeta: Complex64, n_mean: f64, d: usize) -> Result<FockOperator> {
    check_n_mean(n_mean)?;
    check_cutoff(d)?;
    let work = thermal_cutoff(n_mean, WORK_TAIL_TOL)
        .max(d)
        .min(MAX_WORK_CUTOFF.max(d));
    let disp = displacement_elements(zeta, d, work);
    let weights: Vec<f64> = (0..work).map(|k| geometric_pmf(n_mean, k as u64)).collect();
    let mut matrix = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        for n in m..d {
            let mut acc = ZERO;
            for k in 0..work {
                acc += disp[(m, k)] * weights[k] * disp[(n, k)].conj();
            }
            matrix[(m, n)] = acc;
            matrix[(n, m)] = acc.conj();
        }
    }
    if matrix
        .as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::numerical(format!(
            "displaced thermal density overflowed (zeta={zeta}, N={n_mean}, D={d})"
        )));
    }
    let tail = (1.0 - matrix.trace().re).max(0.0);
    Ok(FockOperator {
        cutoff: d,
        matrix,
        tail,
    })
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

/// Truncated `ρ_{ζ,N}` by direct quadrature of the coherent-state mixture
/// `(1/πN) ∫ exp(−|ζ−α|²/N) |α⟩⟨α| d²α` on a polar grid centred at `ζ`.
///
/// Independent of the displacement-operator construction; used as its
/// cross-check.
pub fn displaced_thermal_by_quadrature(
    zeta: Complex64,
    n_mean: f64,
    d: usize,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<FockOperator> {
    check_n_mean(n_mean)?;
    check_cutoff(d)?;
    // e^{-R²/N} < 1e-20
    let radius = (46.0 * n_mean).sqrt();
    let (rs, ws) = gauss_legendre(radial_nodes, 0.0, radius);
    let dtheta = 2.0 * PI / angular_nodes as f64;
    let inv_sqrt: Vec<f64> = (0..d).map(|k| 1.0 / ((k + 1) as f64).sqrt()).collect();
    let mut acc = vec![ZERO; d * d];
    let mut v = vec![ZERO; d];
    for (&r, &w) in rs.iter().zip(&ws) {
        let radial = w * r * dtheta * (-r * r / n_mean).exp() / (PI * n_mean);
        for j in 0..angular_nodes {
            let alpha = zeta + Complex64::from_polar(r, j as f64 * dtheta);
            v[0] = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            for k in 1..d {
                v[k] = v[k - 1] * alpha * inv_sqrt[k - 1];
            }
            for m in 0..d {
                let vm = v[m] * radial;
                for n in m..d {
                    acc[m * d + n] += vm * v[n].conj();
                }
            }
        }
    }
    let mut matrix = ComplexMatrix::zeros(d, d);
    for m in 0..d {
        for n in m..d {
            matrix[(m, n)] = acc[m * d + n];
            matrix[(n, m)] = acc[m * d + n].conj();
        }
    }
    let tail = (1.0 - matrix.trace().re).max(0.0);
    Ok(FockOperator {
        cutoff: d,
        matrix,
        tail,
    })
}

/// Truncated coherent vector `⟨k|α⟩ = e^{−|α|²/2} α^k / √k!`.
pub fn coherent_vector(alpha: Complex64, d: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(d);
    v.push(Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0));
    for k in 1..d {
        let prev = v[k - 1];
        v.push(prev * alpha / (k as f64).sqrt());
    }
    v
}

/// Number of Taylor terms allowed before the exponential is declared
/// non-convergent.
const EXPM_MAX_TERMS: usize = 60;

/// `exp(A)` by scaling and squaring with a truncated Taylor series whose
/// remainder is below `1e-16` relative to the identity.
fn expm(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.rows();
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = a.scale(scale);
    let mut term = RealMatrix::identity(n);
    let mut sum = RealMatrix::identity(n);
    let mut converged = false;
    for k in 1..=EXPM_MAX_TERMS {
        term = (&term * &scaled).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.frobenius_norm() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numerical(format!(
            "Taylor series for the matrix exponential did not converge in {EXPM_MAX_TERMS} terms"
        )));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// First-mode photon numbers present in the total-photon block `s`.
fn block_range(s: usize, d: usize) -> std::ops::RangeInclusive<usize> {
    let lo = s.saturating_sub(d - 1);
    let hi = s.min(d - 1);
    lo..=hi
}

/// `exp φ(a†b − ab†)` on the truncated two-mode space.
///
/// The generator conserves the total photon number, so the exponential is
/// assembled block by block; each block generator is real antisymmetric and
/// its exponential is orthogonal.
pub fn beam_splitter(phi: f64, d: usize) -> Result<TwoModeOperator> {
    check_cutoff(d)?;
    let mut matrix = ComplexMatrix::zeros(d * d, d * d);
    for s in 0..=(2 * d - 2) {
        let range = block_range(s, d);
        let lo = *range.start();
        let size = range.end() - lo + 1;
        let mut gen = RealMatrix::zeros(size, size);
        for m in range.clone() {
            let j = m - lo;
            let n = s - m;
            // a†b |m, n⟩ = √(m+1)√n |m+1, n−1⟩
            if m < *range.end() {
                gen[(j + 1, j)] += phi * ((m + 1) as f64).sqrt() * (n as f64).sqrt();
            }
            // −ab† |m, n⟩ = −√m √(n+1) |m−1, n+1⟩
            if m > lo {
                gen[(j - 1, j)] -= phi * (m as f64).sqrt() * ((n + 1) as f64).sqrt();
            }
        }
        let block = expm(&gen)?;
        for (i, mi) in range.clone().enumerate() {
            for (j, mj) in range.clone().enumerate() {
                let row = mi * d + (s - mi);
                let col = mj * d + (s - mj);
                matrix[(row, col)] = Complex64::new(block[(i, j)], 0.0);
            }
        }
    }
    Ok(TwoModeOperator { cutoff: d, matrix })
}

/// `U ρ U†` for Hermitian `ρ` and sparse `U`.
pub fn conjugate(u: &TwoModeOperator, rho: &TwoModeOperator) -> TwoModeOperator {
    // U·(U·ρ)† = UρU† when ρ is Hermitian; both products have the sparse
    // operand on the left
    let half = &u.matrix * &rho.matrix;
    TwoModeOperator {
        cutoff: rho.cutoff,
        matrix: &u.matrix * &half.adjoint(),
    }
}

pub fn partial_trace(op: &TwoModeOperator, keep: Mode) -> FockOperator {
    let d = op.cutoff;
    let matrix = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| match keep {
                Mode::First => op.matrix[(i * d + k, j * d + k)],
                Mode::Second => op.matrix[(k * d + i, k * d + j)],
            })
            .sum()
    });
    FockOperator {
        cutoff: d,
        matrix,
        tail: 0.0,
    }
}

/// Mixing angle of the `i`-th beam splitter in the concentration cascade,
/// `arctan(1/√i)`.
pub fn cascade_angle(i: usize) -> f64 {
    (1.0 / (i as f64).sqrt()).atan()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub cutoff: usize,
    pub phi: f64,
    /// Trace distance of the first output marginal from `ρ_{√n ζ, N}`.
    pub dist_first: f64,
    /// Trace distance of the remaining marginal(s) from `ρ_{0, N}` (largest).
    pub dist_second: f64,
    /// Frobenius distance of the joint output from the product of its
    /// marginals.
    pub product_defect: f64,
    /// `|Tr ρ_out² − Tr ρ₁² · Tr ρ₂²|`.
    pub purity_gap: f64,
}

fn check_concentration_cutoff(zeta: Complex64, n_mean: f64, d: usize, copies: usize) -> Result<()> {
    let required = cutoff_for(
        n_mean,
        (copies as f64).sqrt() * zeta.norm(),
        DEFAULT_TAIL_TOL,
    );
    if d < required {
        let thermal_tail = (n_mean / (n_mean + 1.0)).powi(d as i32);
        return Err(Error::Cutoff {
            message: format!(
                "cutoff {d} leaves truncation tails above {DEFAULT_TAIL_TOL:e} \
                 (thermal tail {thermal_tail:e})"
            ),
            required_cutoff: required,
        });
    }
    Ok(())
}

fn concentration_step(
    first: &FockOperator,
    second: &FockOperator,
    phi: f64,
) -> Result<(TwoModeOperator, FockOperator, FockOperator)> {
    let d = first.cutoff;
    let joint = TwoModeOperator::product(first, second)?;
    let out = conjugate(&beam_splitter(phi, d)?, &joint);
    let m1 = partial_trace(&out, Mode::First);
    let m2 = partial_trace(&out, Mode::Second);
    Ok((out, m1, m2))
}

fn product_diagnostics(out: &TwoModeOperator, m1: &FockOperator, m2: &FockOperator) -> (f64, f64) {
    let prod = m1.matrix.kron(&m2.matrix);
    let defect = (&out.matrix - &prod).frobenius_norm();
    let purity_out = (&out.matrix * &out.matrix.adjoint()).trace().re;
    let gap = (purity_out - m1.purity() * m2.purity()).abs();
    (defect, gap)
}

/// Cutoff for a `copies`-mode concentration check at tail
/// [`CONCENTRATION_TAIL_TOL`].
pub fn concentration_cutoff(zeta: Complex64, n_mean: f64, copies: usize) -> usize {
    cutoff_for(
        n_mean,
        (copies as f64).sqrt() * zeta.norm(),
        CONCENTRATION_TAIL_TOL,
    )
}

/// Applies `exp (π/4)(a†b − ab†)` to `ρ_{ζ,N} ⊗ ρ_{ζ,N}` and measures how far
/// the output is from `ρ_{√2ζ,N} ⊗ ρ_{0,N}`.
pub fn verify_concentration_n2(
    zeta: Complex64,
    n_mean: f64,
    d: usize,
) -> Result<ConcentrationReport> {
    check_n_mean(n_mean)?;
    check_cutoff(d)?;
    check_concentration_cutoff(zeta, n_mean, d, 2)?;
    let phi = cascade_angle(1);
    let input = displaced_thermal_density(zeta, n_mean, d)?;
    let (out, m1, m2) = concentration_step(&input, &input, phi)?;
    let target_first = displaced_thermal_density(zeta * 2f64.sqrt(), n_mean, d)?;
    let target_rest = thermal_density(n_mean, d)?;
    let (product_defect, purity_gap) = product_diagnostics(&out, &m1, &m2);
    Ok(ConcentrationReport {
        cutoff: d,
        phi,
        dist_first: trace_distance(&m1.matrix, &target_first.matrix)?,
        dist_second: trace_distance(&m2.matrix, &target_rest.matrix)?,
        product_defect,
        purity_gap,
    })
}

/// Three-copy cascade: `φ₁ = π/4` on modes (1, 2), then `φ₂ = arctan(1/√2)`
/// on modes (1, 3).
///
/// The second stage acts on the first-mode marginal of the first stage; this
/// is exact when the first-stage output is a product state, which the report
/// quantifies through `product_defect`.
pub fn verify_concentration_n3(
    zeta: Complex64,
    n_mean: f64,
    d: usize,
) -> Result<ConcentrationReport> {
    check_n_mean(n_mean)?;
    check_cutoff(d)?;
    check_concentration_cutoff(zeta, n_mean, d, 3)?;
    let input = displaced_thermal_density(zeta, n_mean, d)?;
    let (out1, a1, a2) = concentration_step(&input, &input, cascade_angle(1))?;
    let (defect1, gap1) = product_diagnostics(&out1, &a1, &a2);
    let phi = cascade_angle(2);
    let (out2, b1, b3) = concentration_step(&a1, &input, phi)?;
    let (defect2, gap2) = product_diagnostics(&out2, &b1, &b3);
    let target_first = displaced_thermal_density(zeta * 3f64.sqrt(), n_mean, d)?;
    let target_rest = thermal_density(n_mean, d)?;
    let rest = trace_distance(&a2.matrix, &target_rest.matrix)?
        .max(trace_distance(&b3.matrix, &target_rest.matrix)?);
    Ok(ConcentrationReport {
        cutoff: d,
        phi,
        dist_first: trace_distance(&b1.matrix, &target_first.matrix)?,
        dist_second: rest,
        product_defect: defect1.max(defect2),
        purity_gap: gap1.max(gap2),
    })
}

/// Parameterisation used for the numerical RLD Fisher matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RldFamily {
    /// `(θ¹, θ²)` with the photon number known.
    TwoParam,
    /// `(θ¹, θ², N)`.
    ThreeParam,
}

impl RldFamily {
    pub fn dim(self) -> usize {
        match self {
            RldFamily::TwoParam => 2,
            RldFamily::ThreeParam => 3,
        }
    }
}

fn density_at(theta: [f64; 3], d: usize) -> Result<ComplexMatrix> {
    let point = ThetaPoint::new(theta[0], theta[1], theta[2])?;
    Ok(displaced_thermal_density(point.zeta(), point.n_mean, d)?.matrix)
}

/// RLD Fisher matrix from the right logarithmic derivatives `ρ L̃_i = ∂ρ/∂θ^i`,
/// using central differences of step `h` on the truncated family.
///
/// Entries are `J̃_{ij} = tr L̃_j† ρ L̃_i`. This index order reproduces the
/// inverse matrices of [`crate::bounds::rld_inverse_2param`] and
/// [`crate::bounds::rld_inverse_3param`] (`+i/2` in the upper off-diagonal);
/// the opposite order `tr L̃_i† ρ L̃_j` is the complex conjugate, see
/// [`numeric_rld_fisher_literal`]. The RLD bound depends only on `|Im J̃⁻¹|`
/// and is the same for both.
pub fn numeric_rld_fisher(
    family: RldFamily,
    theta: &ThetaPoint,
    d: usize,
    h: f64,
) -> Result<ComplexMatrix> {
    let (rho, logs) = right_log_derivatives(family, theta, d, h)?;
    let dim = logs.len();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        (&(&logs[j].adjoint() * &rho) * &logs[i]).trace()
    }))
}

/// Same as [`numeric_rld_fisher`] with entries `tr L̃_i† ρ L̃_j`; equals its
/// complex conjugate.
pub fn numeric_rld_fisher_literal(
    family: RldFamily,
    theta: &ThetaPoint,
    d: usize,
    h: f64,
) -> Result<ComplexMatrix> {
    let (rho, logs) = right_log_derivatives(family, theta, d, h)?;
    let dim = logs.len();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        (&(&logs[i].adjoint() * &rho) * &logs[j]).trace()
    }))
}

/// `ρ` and `L̃_i = ρ⁻¹ ∂ρ/∂θ^i` for each coordinate of the family.
fn right_log_derivatives(
    family: RldFamily,
    theta: &ThetaPoint,
    d: usize,
    h: f64,
) -> Result<(ComplexMatrix, Vec<ComplexMatrix>)> {
    check_cutoff(d)?;
    if !(1e-5..=1e-3).contains(&h) {
        return Err(Error::domain(format!(
            "difference step must lie in [1e-5, 1e-3], got {h}"
        )));
    }
    if theta.n_mean <= h {
        return Err(Error::domain(
            "photon number too small for the difference step",
        ));
    }
    let base = [theta.theta1, theta.theta2, theta.n_mean];
    let rho = density_at(base, d)?;
    let spectrum = hermitian_eigenvalues(&rho)?;
    let (low, high) = (spectrum[0], spectrum[spectrum.len() - 1]);
    if low <= 0.0 || high / low > MAX_CONDITION {
        return Err(Error::numerical(format!(
            "truncated density is ill-conditioned (eigenvalues {low:e} .. {high:e}); \
             increase N or reduce the cutoff {d}"
        )));
    }
    let dim = family.dim();
    let mut logs = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut plus = base;
        let mut minus = base;
        plus[i] += h;
        minus[i] -= h;
        let diff = &density_at(plus, d)? - &density_at(minus, d)?;
        let derivative = diff.scale(Complex64::new(0.5 / h, 0.0)).hermitian_part();
        logs.push(rho.solve(&derivative)?);
    }
    Ok((rho, logs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Povm {
    Photon(usize),
    Heterodyne(Complex64),
}

/// `tr ρ M` for photon counting (probability) and heterodyne (density with
/// respect to `d²α`, i.e. `⟨α|ρ|α⟩/π`).
pub fn povm_probability(rho: &FockOperator, outcome: Povm) -> f64 {
    match outcome {
        Povm::Photon(k) if k < rho.cutoff => rho.matrix[(k, k)].re,
        Povm::Photon(_) => 0.0,
        Povm::Heterodyne(alpha) => {
            let v = coherent_vector(alpha, rho.cutoff);
            let mut acc = ZERO;
            for (m, vm) in v.iter().enumerate() {
                for (n, vn) in v.iter().enumerate() {
                    acc += vm.conj() * rho.matrix[(m, n)] * vn;
                }
            }
            acc.re / PI
        }
    }
}
