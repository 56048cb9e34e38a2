use nalgebra::DVector;

use super::{dot, FitResult, Penalty};
use crate::data::StandardizedData;

/// Smallest `λ` at which the Lasso solution is identically zero:
/// `maxⱼ |xⱼᵀy| / n`.
pub fn lambda_max(data: &StandardizedData) -> f64 {
    let n = data.n() as f64;
    (0..data.p())
        .map(|j| dot(data.column(j), data.y().as_slice()).abs() / n)
        .fold(0.0, f64::max)
}

/// Largest violation of the Lasso subgradient conditions at `beta`.
///
/// For active `j` the gradient term `xⱼᵀ(y − Xβ)/n` must equal
/// `λ·sign(βⱼ)`; for inactive `j` its magnitude must not exceed `λ`.
pub fn kkt_violation(data: &StandardizedData, lambda: f64, beta: &DVector<f64>) -> f64 {
    let n = data.n() as f64;
    let resid = data.y() - data.x() * beta;
    (0..data.p())
        .map(|j| {
            let g = dot(data.column(j), resid.as_slice()) / n;
            if beta[j] != 0.0 {
                (g - lambda * beta[j].signum()).abs()
            } else {
                (g.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// `dP_λ(a)/da` for `a > 0`.
fn penalty_slope(a: f64, lambda: f64, penalty: Penalty) -> f64 {
    match penalty {
        Penalty::Lasso => lambda,
        Penalty::RelaxedLasso { phi } => lambda * phi,
        Penalty::Mcp { gamma } => (lambda - a / gamma).max(0.0),
        Penalty::Scad { gamma } => {
            if a <= lambda {
                lambda
            } else {
                ((gamma * lambda - a) / (gamma - 1.0)).max(0.0)
            }
        }
    }
}

/// Largest violation of the first-order conditions of `fit`.
///
/// Nonzero coordinates must satisfy `xⱼᵀr/n = P'_λ(|βⱼ|)·sign(βⱼ)` and zero
/// coordinates `|xⱼᵀr/n| ≤ λ`. For the Relaxed Lasso only the nonzero
/// coordinates are checked, since the admissible set is the first-stage
/// support.
pub fn stationarity_violation(data: &StandardizedData, fit: &FitResult) -> f64 {
    let n = data.n() as f64;
    let resid = data.y() - &fit.fitted;
    let relaxed = matches!(fit.penalty, Penalty::RelaxedLasso { .. });
    (0..data.p())
        .map(|j| {
            let b = fit.beta[j];
            let g = dot(data.column(j), resid.as_slice()) / n;
            if b != 0.0 {
                (g - penalty_slope(b.abs(), fit.lambda, fit.penalty) * b.signum()).abs()
            } else if relaxed {
                0.0
            } else {
                (g.abs() - fit.lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{standardize, RawData};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn data() -> StandardizedData {
        let x = DMatrix::from_row_slice(
            6,
            3,
            &[
                1.0, 0.2, -1.0, 2.0, 1.5, 0.3, -0.5, 0.7, 2.2, 0.1, -1.3, 0.9, 1.7, 0.0, -0.4,
                -2.2, 0.9, 1.1,
            ],
        );
        let y = DVector::from_vec(vec![1.2, 2.5, -0.3, 0.4, 1.9, -2.0]);
        standardize(&RawData::new(y, x).unwrap()).unwrap()
    }

    #[test]
    fn orthogonal_response_gives_zero_lambda_max() {
        let x = DMatrix::from_row_slice(4, 1, &[1.0, -1.0, 1.0, -1.0]);
        let y = DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]);
        let d = standardize(&RawData::new(y, x).unwrap()).unwrap();
        assert_eq!(lambda_max(&d), 0.0);
    }

    #[test]
    fn single_column_lambda_max() {
        let x = DMatrix::from_row_slice(4, 1, &[1.0, -1.0, 1.0, -1.0]);
        let y = DVector::from_vec(vec![3.0, -3.0, 3.0, -3.0]);
        let d = standardize(&RawData::new(y, x).unwrap()).unwrap();
        assert_relative_eq!(lambda_max(&d), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_vector_violations() {
        let d = data();
        let lmax = lambda_max(&d);
        let zero = DVector::zeros(3);
        assert_eq!(kkt_violation(&d, lmax, &zero), 0.0);
        assert_eq!(kkt_violation(&d, 2.0 * lmax, &zero), 0.0);
        assert_relative_eq!(kkt_violation(&d, 0.5 * lmax, &zero), 0.5 * lmax, epsilon = 1e-14);
    }

    #[test]
    fn converged_fits_are_stationary() {
        let d = data();
        let lam = 0.3 * lambda_max(&d);
        for pen in [Penalty::Lasso, Penalty::scad(), Penalty::mcp()] {
            let fit = crate::solver::coordinate_descent(&d, lam, pen, None, Default::default()).unwrap();
            assert!(stationarity_violation(&d, &fit) < 1e-8, "{pen:?}");
        }
        let lasso = crate::solver::coordinate_descent(&d, lam, Penalty::Lasso, None, Default::default()).unwrap();
        assert_relative_eq!(
            stationarity_violation(&d, &lasso),
            kkt_violation(&d, lam, &lasso.beta),
            epsilon = 1e-15
        );
    }
}
