use nalgebra::DVector;

use super::{coordinate_descent, solve_restricted, CdOptions, FitResult, Penalty};
use crate::data::{least_squares, StandardizedData};
use crate::error::{Error, Result};

/// Two-stage Relaxed Lasso: the Lasso at `lambda` fixes the support, then
/// the Lasso restricted to that support is refit at penalty `lambda·phi`.
/// `phi = 0` means the unpenalized least-squares refit.
pub fn relaxed_lasso(
    data: &StandardizedData,
    lambda: f64,
    phi: f64,
    opts: CdOptions,
) -> Result<FitResult> {
    Penalty::RelaxedLasso { phi }.validate()?;
    let base = coordinate_descent(data, lambda, Penalty::Lasso, None, opts)?;
    relaxed_from_fit(data, &base, phi, opts)
}

/// Second stage of [`relaxed_lasso`] given an existing Lasso fit.
pub fn relaxed_from_fit(
    data: &StandardizedData,
    base: &FitResult,
    phi: f64,
    opts: CdOptions,
) -> Result<FitResult> {
    relaxed_warm(data, base, phi, &base.beta, opts)
}

fn relaxed_warm(
    data: &StandardizedData,
    base: &FitResult,
    phi: f64,
    warm: &DVector<f64>,
    opts: CdOptions,
) -> Result<FitResult> {
    let penalty = Penalty::RelaxedLasso { phi };
    penalty.validate()?;
    if base.support.is_empty() {
        return Err(Error::EmptySupport(base.lambda));
    }
    if phi == 0.0 {
        let cols = base.support.indices();
        if cols.len() > data.n() {
            return Err(Error::RankDeficient { rcond: 0.0 });
        }
        let coef = least_squares(data.x().select_columns(cols), data.y())?;
        let mut beta = DVector::zeros(data.p());
        for (&j, &b) in cols.iter().zip(coef.iter()) {
            beta[j] = b;
        }
        return Ok(FitResult::assemble(data, base.lambda, penalty, beta, 0));
    }
    solve_restricted(
        data,
        base.support.indices(),
        base.lambda,
        penalty,
        Some(warm),
        opts,
    )
}

/// Relaxed fits for a descending `phi` grid at one Lasso fit, each warm
/// started from the previous.
pub fn relaxed_path_at(
    data: &StandardizedData,
    base: &FitResult,
    phis: &[f64],
    opts: CdOptions,
) -> Vec<Result<FitResult>> {
    let mut warm = base.beta.clone();
    phis.iter()
        .map(|&phi| {
            let res = relaxed_warm(data, base, phi, &warm, opts);
            match &res {
                Ok(fit) => warm = fit.beta.clone(),
                Err(Error::NotConverged { last, .. }) => warm = last.beta.clone(),
                Err(_) => {}
            }
            res
        })
        .collect()
}
