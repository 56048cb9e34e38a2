//! The α-modification of penalized estimates.
//!
//! Given a fit with predictions `ŷ = Xβ̂` on centered data, the modification
//! rescales the estimate by the least-squares multiplier of its own
//! predictions, `α̂ = ŷᵀy / ŷᵀŷ`. The support never changes; only the
//! magnitude does.
//!
//! Alongside the estimator this module exposes the closed-form quantities
//! used to reason about it:
//!
//! * orthogonal designs: the convex-combination form of `α̂β̂_{λ,j}`
//!   ([`orthogonal_alpha_closed_form`]) and the bound on its distance from
//!   the OLS estimate ([`ols_distance_bound`]);
//! * general designs under sign recovery: the closed-form Lasso solution
//!   ([`sign_recovery_fit`]) and the limiting deviation `G_j`
//!   ([`sign_recovery_limit`]);
//! * the SNR condition under which α-modified prediction error is expected
//!   to beat plain prediction error ([`snr_margin`]).

use nalgebra::{DMatrix, DVector};

use crate::data::{least_squares, StandardizedData, Support};
use crate::error::{Error, Result};
use crate::solver::FitResult;

/// `‖ŷ‖₂` below which predictions are treated as zero.
pub const ZERO_PREDICTION_TOL: f64 = 1e-14;

/// `ŷᵀy / ŷᵀŷ`, the minimizer of `‖y − αŷ‖²`.
///
/// Returns exactly 1 when round-off would make `‖y − α̂ŷ‖` exceed
/// `‖y − ŷ‖`, which happens only for `α̂` within a few ulps of 1.
pub fn alpha_hat(y: &DVector<f64>, y_hat: &DVector<f64>) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::DimensionMismatch(format!(
            "response length {} vs prediction length {}",
            y.len(),
            y_hat.len()
        )));
    }
    let yy = y_hat.norm_squared();
    if yy.sqrt() < ZERO_PREDICTION_TOL {
        return Err(Error::ZeroPredictions);
    }
    let alpha = y_hat.dot(y) / yy;
    if (y - y_hat * alpha).norm() > (y - y_hat).norm() {
        return Ok(1.0);
    }
    Ok(alpha)
}

/// A fit together with its α-modified coefficients and predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaFit {
    pub base: FitResult,
    pub alpha: f64,
    pub beta_mod: DVector<f64>,
    pub fitted_mod: DVector<f64>,
}

pub fn alpha_modify(data: &StandardizedData, fit: &FitResult) -> Result<AlphaFit> {
    let alpha = alpha_hat(data.y(), &fit.fitted)?;
    Ok(AlphaFit {
        base: fit.clone(),
        alpha,
        beta_mod: &fit.beta * alpha,
        fitted_mod: &fit.fitted * alpha,
    })
}

/// `(|bⱼ| − λ)₊` for every coordinate.
pub fn shrunk_magnitudes(beta_ols: &[f64], lambda: f64) -> Vec<f64> {
    beta_ols.iter().map(|b| (b.abs() - lambda).max(0.0)).collect()
}

/// Output of [`orthogonal_alpha_closed_form`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub alpha_beta: f64,
    pub w1: f64,
    pub w2: f64,
}

/// `α̂β̂_{λ,j*}` for an orthogonal design (`XᵀX = nI`) as
/// `w₁·b_{j*} + (1 − w₁)·β̂_{λ,j*} + w₂·β̂_{λ,j*}` with
/// `w₁ = d²_{j*}/Σd²`, `w₂ = λ Σ_{j≠j*} dⱼ / Σd²` and `dⱼ = (|bⱼ| − λ)₊`,
/// where `b` is the OLS estimate.
pub fn orthogonal_alpha_closed_form(
    beta_ols: &[f64],
    lambda: f64,
    j_star: usize,
) -> Result<ClosedForm> {
    closed_form_signed(beta_ols, lambda, j_star, 1.0)
}

/// `w2_sign = -1` reproduces a sign error in the additive term; used by the
/// verification harness to check that its suites catch faults.
pub(crate) fn closed_form_signed(
    beta_ols: &[f64],
    lambda: f64,
    j_star: usize,
    w2_sign: f64,
) -> Result<ClosedForm> {
    check_index(beta_ols.len(), j_star)?;
    let d = shrunk_magnitudes(beta_ols, lambda);
    let total: f64 = d.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::AllShrunkToZero);
    }
    let others: f64 = d
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != j_star)
        .map(|(_, v)| v)
        .sum();
    let w1 = d[j_star] * d[j_star] / total;
    let w2 = w2_sign * lambda * others / total;
    let b = beta_ols[j_star];
    let lasso = b.signum() * d[j_star];
    Ok(ClosedForm {
        alpha_beta: w1 * b + (1.0 - w1) * lasso + w2 * lasso,
        w1,
        w2,
    })
}

/// `α̂` for an orthogonal design computed directly from the OLS estimate:
/// `Σ dⱼ|bⱼ| / Σ dⱼ²`.
pub fn orthogonal_alpha(beta_ols: &[f64], lambda: f64) -> Result<f64> {
    let d = shrunk_magnitudes(beta_ols, lambda);
    let den: f64 = d.iter().map(|v| v * v).sum();
    if den == 0.0 {
        return Err(Error::AllShrunkToZero);
    }
    let num: f64 = d.iter().zip(beta_ols).map(|(v, b)| v * b.abs()).sum();
    Ok(num / den)
}

/// `λ · max(1, (√(u²v + v²) − v) / (2v))` with `u = Σ_{j≠j*} dⱼ` and
/// `v = Σ_{j≠j*} dⱼ²`: a bound on `|α̂β̂_{λ,j*} − b_{j*}|` that holds for every
/// value of `b_{j*}` on an orthogonal design.
pub fn ols_distance_bound(beta_ols: &[f64], lambda: f64, j_star: usize) -> Result<f64> {
    check_index(beta_ols.len(), j_star)?;
    let d = shrunk_magnitudes(beta_ols, lambda);
    let (u, v) = d
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != j_star)
        .fold((0.0, 0.0), |(u, v), (_, &dj)| (u + dj, v + dj * dj));
    if v == 0.0 {
        return Err(Error::PreconditionViolated(
            "no coordinate other than j* exceeds lambda".into(),
        ));
    }
    let second = ((u * u * v + v * v).sqrt() - v) / (2.0 * v);
    Ok(lambda * second.max(1.0))
}

/// Summary of the orthogonal-design quantities for one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalDiagnostics {
    pub d: Vec<f64>,
    pub w1: f64,
    pub w2: f64,
    /// [`ols_distance_bound`], or 0 when `j*` is the only active coordinate (the
    /// modification then recovers OLS exactly).
    pub bound: f64,
    /// Limiting deviation for large `|b_{j*}|`; zero for orthogonal designs.
    pub g_limit: f64,
}

pub fn orthogonal_diagnostics(
    beta_ols: &[f64],
    lambda: f64,
    j_star: usize,
) -> Result<OrthogonalDiagnostics> {
    let cf = orthogonal_alpha_closed_form(beta_ols, lambda, j_star)?;
    let bound = match ols_distance_bound(beta_ols, lambda, j_star) {
        Ok(b) => b,
        Err(Error::PreconditionViolated(_)) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(OrthogonalDiagnostics {
        d: shrunk_magnitudes(beta_ols, lambda),
        w1: cf.w1,
        w2: cf.w2,
        bound,
        g_limit: 0.0,
    })
}

fn check_index(len: usize, j: usize) -> Result<()> {
    if j >= len {
        return Err(Error::DimensionMismatch(format!(
            "index {j} out of range for length {len}"
        )));
    }
    Ok(())
}

struct SignedSubmodel {
    ols: DVector<f64>,
    /// `(X_Mᵀ X_M)⁻¹ s`
    gram_inv_s: DVector<f64>,
}

fn signed_submodel(
    data: &StandardizedData,
    support: &Support,
    signs: &[f64],
) -> Result<SignedSubmodel> {
    if support.is_empty() || support.len() != signs.len() {
        return Err(Error::DimensionMismatch(format!(
            "support has {} indices, sign vector has {}",
            support.len(),
            signs.len()
        )));
    }
    if signs.iter().any(|s| s.abs() != 1.0) {
        return Err(Error::PreconditionViolated("signs must be ±1".into()));
    }
    let xm: DMatrix<f64> = data.x().select_columns(support.indices());
    let ols = least_squares(xm.clone(), data.y())?;
    let gram = xm.transpose() * &xm;
    let chol = gram
        .cholesky()
        .ok_or(Error::RankDeficient { rcond: 0.0 })?;
    let gram_inv_s = chol.solve(&DVector::from_column_slice(signs));
    Ok(SignedSubmodel { ols, gram_inv_s })
}

/// Lasso solution on the columns of `support` when the sign vector `signs`
/// is known: `b_OLS − nλ (X_Mᵀ X_M)⁻¹ s`. Returned in support order.
pub fn sign_recovery_fit(
    data: &StandardizedData,
    support: &Support,
    signs: &[f64],
    lambda: f64,
) -> Result<DVector<f64>> {
    let sub = signed_submodel(data, support, signs)?;
    let n = data.n() as f64;
    let beta = &sub.ols - &sub.gram_inv_s * (n * lambda);
    if let Some(pos) = beta
        .iter()
        .zip(signs)
        .position(|(b, s)| b.signum() != *s || *b == 0.0)
    {
        return Err(Error::SignMismatch(pos));
    }
    Ok(beta)
}

/// Limiting deviation `G_{j*} = λ(s_{j*} − n·s̃_{j*})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignRecoveryLimit {
    pub g: f64,
    /// Row `j*` of `(X_Mᵀ X_M)⁻¹` applied to `s`.
    pub s_tilde: f64,
    /// `|1 − s_{j*}/(n s̃_{j*})| < 1`, i.e. the limit is closer to OLS than
    /// the Lasso estimate is.
    pub improves_on_lasso: bool,
}

/// `j_star` is a position within `support`.
pub fn sign_recovery_limit(
    data: &StandardizedData,
    support: &Support,
    signs: &[f64],
    lambda: f64,
    j_star: usize,
) -> Result<SignRecoveryLimit> {
    check_index(support.len(), j_star)?;
    sign_recovery_fit(data, support, signs, lambda)?;
    let sub = signed_submodel(data, support, signs)?;
    let n = data.n() as f64;
    let s_tilde = sub.gram_inv_s[j_star];
    let s = signs[j_star];
    let ratio = s / (n * s_tilde);
    Ok(SignRecoveryLimit {
        g: lambda * (s - n * s_tilde),
        s_tilde,
        improves_on_lasso: s_tilde != 0.0 && (1.0 - ratio).abs() < 1.0,
    })
}

/// Both sides of the SNR condition for expected Mod-APE ≤ expected APE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrMargin {
    /// `α*² / mean((‖β̂‖₂ − α*)²)` with `α* = ‖β*‖₂`.
    pub lhs: f64,
    /// `β*ᵀXᵀXβ* / σ²`.
    pub rhs: f64,
}

impl SnrMargin {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// The expectation in the condition is replaced by a Monte Carlo mean over
/// `norm_samples` (draws of `‖β̂_λ‖₂`).
pub fn snr_margin(
    data: &StandardizedData,
    beta_star: &DVector<f64>,
    sigma2: f64,
    norm_samples: &[f64],
) -> Result<SnrMargin> {
    if beta_star.len() != data.p() {
        return Err(Error::DimensionMismatch(format!(
            "beta_star has length {}, design has {} columns",
            beta_star.len(),
            data.p()
        )));
    }
    if norm_samples.is_empty() {
        return Err(Error::PreconditionViolated("no norm samples".into()));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::PreconditionViolated("sigma2 must be positive".into()));
    }
    let alpha_star = beta_star.norm();
    if alpha_star == 0.0 {
        return Err(Error::PreconditionViolated("beta_star is zero".into()));
    }
    let msd = norm_samples
        .iter()
        .map(|s| (s - alpha_star).powi(2))
        .sum::<f64>()
        / norm_samples.len() as f64;
    if msd == 0.0 {
        return Err(Error::DegenerateSamples);
    }
    let xb = data.x() * beta_star;
    Ok(SnrMargin {
        lhs: alpha_star * alpha_star / msd,
        rhs: xb.norm_squared() / sigma2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ols_submodel, standardize, RawData};
    use crate::solver::{coordinate_descent, CdOptions, Penalty};
    use approx::assert_relative_eq;

    fn hadamard(n_log2: u32) -> DMatrix<f64> {
        let h2 = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        let mut h = h2.clone();
        for _ in 1..n_log2 {
            h = h.kronecker(&h2);
        }
        let n = h.nrows();
        h.columns(1, n - 1).into_owned()
    }

    /// Orthogonal design whose OLS estimate is `b` (plus an orthogonal residual).
    fn orthogonal_data(b: &[f64]) -> StandardizedData {
        let x = hadamard(3);
        let mut beta = DVector::zeros(7);
        for (j, v) in b.iter().enumerate() {
            beta[j] = *v;
        }
        // Unused columns absorb nothing: y lies in span of the first b.len() columns
        // plus a multiple of the last column; the last column's OLS value is 0.1.
        let y = &x * &beta + x.column(6) * 0.1;
        standardize(&RawData::new(y, x).unwrap()).unwrap()
    }

    #[test]
    fn alpha_hat_examples() {
        let y = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        assert_relative_eq!(alpha_hat(&y, &y).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(alpha_hat(&y, &(&y * 0.5)).unwrap(), 2.0, epsilon = 1e-15);
        assert!(matches!(
            alpha_hat(&y, &DVector::zeros(3)),
            Err(Error::ZeroPredictions)
        ));
    }

    #[test]
    fn closed_form_worked_example() {
        let cf = orthogonal_alpha_closed_form(&[3.0, -2.0], 1.0, 0).unwrap();
        assert_relative_eq!(cf.w1, 0.8, epsilon = 1e-15);
        assert_relative_eq!(cf.w2, 0.2, epsilon = 1e-15);
        assert_relative_eq!(cf.alpha_beta, 3.2, epsilon = 1e-14);
        assert_relative_eq!(orthogonal_alpha(&[3.0, -2.0], 1.0).unwrap(), 1.6, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_matches_algorithm_on_explicit_design() {
        let d = orthogonal_data(&[3.0, -2.0]);
        let fit = coordinate_descent(&d, 1.0, Penalty::Lasso, None, CdOptions::default()).unwrap();
        let af = alpha_modify(&d, &fit).unwrap();
        assert_relative_eq!(af.alpha, 1.6, epsilon = 1e-12);
        assert_relative_eq!(af.beta_mod[0], 3.2, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_edge_cases() {
        let single = orthogonal_alpha_closed_form(&[4.0, 0.5, -0.2], 1.0, 0).unwrap();
        assert_relative_eq!(single.alpha_beta, 4.0, epsilon = 1e-14);
        let zero = orthogonal_alpha_closed_form(&[4.0, 0.5, -3.0], 1.0, 1).unwrap();
        assert_eq!(zero.alpha_beta, 0.0);
        assert!(matches!(
            orthogonal_alpha_closed_form(&[0.5, -0.2], 1.0, 0),
            Err(Error::AllShrunkToZero)
        ));
    }

    #[test]
    fn ols_distance_bound_examples() {
        // d_{-j*} = (2, 1): u = 3, v = 5, second term (√70 − 5)/10
        let b = [7.0, 3.0, -2.0];
        let second = (70f64.sqrt() - 5.0) / 10.0;
        assert_relative_eq!(second, 0.33666, epsilon = 1e-5);
        assert_eq!(ols_distance_bound(&b, 1.0, 0).unwrap(), 1.0);
        assert!(matches!(
            ols_distance_bound(&[5.0, 0.5], 1.0, 0),
            Err(Error::PreconditionViolated(_))
        ));
        // many tiny d: u²/v large pushes the bound above λ
        let mut many = vec![0.0; 41];
        for v in many.iter_mut().skip(1) {
            *v = 1.01;
        }
        let bound = ols_distance_bound(&many, 1.0, 0).unwrap();
        let (u, v) = (40.0 * 0.01, 40.0 * 0.0001);
        assert!(u * u / v > 8.0);
        assert!(bound > 1.0);
        // far tail: deviation vanishes
        let mut far = [0.0, 3.0, -2.0];
        far[0] = 1e6;
        let dev = (orthogonal_alpha_closed_form(&far, 1.0, 0).unwrap().alpha_beta - 1e6).abs();
        assert!(dev < 1e-3, "{dev}");
    }

    #[test]
    fn dense_scan_stays_within_distance_bound() {
        let others = [3.0, -2.0];
        let lambda = 1.0;
        let bound = ols_distance_bound(&[0.0, 3.0, -2.0], lambda, 0).unwrap();
        let mut worst = 0.0f64;
        let mut b = lambda;
        while b < 1e6 {
            let v = [b, others[0], others[1]];
            let ab = orthogonal_alpha_closed_form(&v, lambda, 0).unwrap().alpha_beta;
            worst = worst.max((ab - b).abs());
            b *= 1.001;
        }
        assert!(worst <= bound, "{worst} > {bound}");
    }

    #[test]
    fn scaled_ols_is_recovered() {
        let x = DMatrix::from_row_slice(
            6,
            3,
            &[
                1.0, 0.2, -1.0, 2.0, 1.5, 0.3, -0.5, 0.7, 2.2, 0.1, -1.3, 0.9, 1.7, 0.0, -0.4,
                -2.2, 0.9, 1.1,
            ],
        );
        let y = DVector::from_vec(vec![1.2, 2.5, -0.3, 0.4, 1.9, -2.0]);
        let d = standardize(&RawData::new(y, x).unwrap()).unwrap();
        let s = Support::new(vec![0, 2], 3).unwrap();
        let ols = ols_submodel(&d, &s).unwrap();
        let mut beta = DVector::zeros(3);
        beta[0] = 0.5 * ols[0];
        beta[2] = 0.5 * ols[1];
        let fit = FitResult::assemble(&d, 0.1, Penalty::Lasso, beta, 0);
        let af = alpha_modify(&d, &fit).unwrap();
        assert_relative_eq!(af.beta_mod[0], ols[0], epsilon = 1e-10);
        assert_relative_eq!(af.beta_mod[2], ols[1], epsilon = 1e-10);
        assert_eq!(Support::from_beta(&af.beta_mod), fit.support);
    }

    #[test]
    fn sign_recovery_on_orthogonal_design() {
        let d = orthogonal_data(&[3.0, -2.0, 1.5]);
        let s = Support::new(vec![0, 1, 2], 7).unwrap();
        let signs = [1.0, -1.0, 1.0];
        let fit = sign_recovery_fit(&d, &s, &signs, 0.5).unwrap();
        assert_relative_eq!(fit[0], 2.5, epsilon = 1e-12);
        assert_relative_eq!(fit[1], -1.5, epsilon = 1e-12);
        assert_relative_eq!(fit[2], 1.0, epsilon = 1e-12);
        assert!(matches!(
            sign_recovery_fit(&d, &s, &signs, 2.0),
            Err(Error::SignMismatch(2))
        ));
        let lim = sign_recovery_limit(&d, &s, &signs, 0.5, 0).unwrap();
        assert!(lim.g.abs() < 1e-10);
    }

    #[test]
    fn snr_margin_examples() {
        let d = orthogonal_data(&[3.0, -2.0]);
        let mut beta = DVector::zeros(7);
        beta[0] = 3.0;
        beta[1] = -4.0;
        let half = beta.norm() / 2.0;
        let m = snr_margin(&d, &beta, 1.0, &[half, half]).unwrap();
        assert_relative_eq!(m.lhs, 4.0, epsilon = 1e-12);
        let noisy = snr_margin(&d, &beta, 1e300, &[half]).unwrap();
        assert!(noisy.rhs < 1e-290 && !noisy.holds());
        assert!(matches!(
            snr_margin(&d, &beta, 1.0, &[beta.norm()]),
            Err(Error::DegenerateSamples)
        ));
    }
}
