use nalgebra::DVector;

use super::{coordinate_descent, kkt_violation, CdOptions, FitResult, Penalty};
use crate::data::{StandardizedData, Support};
use crate::error::{Error, Result};

/// Fits along a strictly descending `λ` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath {
    pub penalty: Penalty,
    pub lambdas: Vec<f64>,
    pub betas: Vec<DVector<f64>>,
    pub supports: Vec<Support>,
    pub n_iter: Vec<usize>,
    /// Lasso subgradient violation per point (`None` for non-convex penalties).
    pub kkt: Option<Vec<f64>>,
}

impl SolutionPath {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Refit point `k` as a [`FitResult`] (fitted values and objective).
    pub fn fit_at(&self, data: &StandardizedData, k: usize) -> FitResult {
        FitResult::assemble(
            data,
            self.lambdas[k],
            self.penalty,
            self.betas[k].clone(),
            self.n_iter[k],
        )
    }
}

/// `count` values `exp(t)` with `t` equally spaced from `hi` down to `lo`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![hi.exp()],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count).map(|k| (hi - step * k as f64).exp()).collect()
        }
    }
}

/// 250 log-spaced values from `e¹⁰` down to `e⁻²⁰`, restricted to
/// `(0, λ_max)` and headed by `λ_max` itself.
pub fn default_lambda_grid(lambda_max: f64) -> Result<Vec<f64>> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::BadGrid);
    }
    let mut grid = vec![lambda_max];
    grid.extend(log_spaced(-20.0, 10.0, 250).into_iter().filter(|&l| l < lambda_max));
    Ok(grid)
}

/// 100 log-spaced `φ` values from 1 down to `e⁻¹⁰`.
pub fn default_phi_grid() -> Vec<f64> {
    log_spaced(-10.0, 0.0, 100)
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid.iter().any(|l| !(*l > 0.0) || !l.is_finite())
        || grid.windows(2).any(|w| !(w[0] > w[1]))
    {
        return Err(Error::BadGrid);
    }
    Ok(())
}

/// Per-point fits with warm starts. A point that fails to converge is
/// reported as an error but its last iterate still seeds the next point.
///
/// Once the support reaches `n − 1` (the rank of the centered design) the
/// fit interpolates and the solution is no longer unique; every remaining
/// point is reported as [`Error::Saturated`].
pub(crate) fn path_fits(
    data: &StandardizedData,
    grid: &[f64],
    penalty: Penalty,
    opts: CdOptions,
) -> Result<Vec<Result<FitResult>>> {
    validate_grid(grid)?;
    let cap = data.n() - 1;
    let mut warm: Option<DVector<f64>> = None;
    let mut out = Vec::with_capacity(grid.len());
    let mut saturated = false;
    for &lambda in grid {
        if saturated {
            out.push(Err(Error::Saturated { lambda }));
            continue;
        }
        let mut res = coordinate_descent(data, lambda, penalty, warm.as_ref(), opts);
        match &res {
            Ok(fit) => {
                saturated = cap <= data.p() && fit.support.len() >= cap;
                warm = Some(fit.beta.clone());
            }
            Err(Error::NotConverged { last, .. }) => {
                if cap <= data.p() && last.support.len() >= cap {
                    saturated = true;
                    res = Err(Error::Saturated { lambda });
                } else {
                    warm = Some(last.beta.clone());
                }
            }
            Err(_) => {}
        }
        out.push(res);
    }
    Ok(out)
}

/// Warm-started path for any coordinate-descent penalty. The path stops
/// early, and is shorter than `grid`, once the support saturates.
pub fn fit_path(
    data: &StandardizedData,
    grid: &[f64],
    penalty: Penalty,
    opts: CdOptions,
) -> Result<SolutionPath> {
    let fits = path_fits(data, grid, penalty, opts)?;
    let mut path = SolutionPath {
        penalty,
        lambdas: Vec::with_capacity(grid.len()),
        betas: Vec::with_capacity(grid.len()),
        supports: Vec::with_capacity(grid.len()),
        n_iter: Vec::with_capacity(grid.len()),
        kkt: matches!(penalty, Penalty::Lasso).then(Vec::new),
    };
    for (index, res) in fits.into_iter().enumerate() {
        if let Err(Error::Saturated { .. }) = res {
            break;
        }
        let fit = res.map_err(|e| Error::PathNotConverged {
            index,
            lambda: grid[index],
            source: Box::new(e),
        })?;
        if let Some(k) = path.kkt.as_mut() {
            k.push(kkt_violation(data, fit.lambda, &fit.beta));
        }
        path.lambdas.push(fit.lambda);
        path.supports.push(fit.support);
        path.n_iter.push(fit.n_iter);
        path.betas.push(fit.beta);
    }
    Ok(path)
}

/// Lasso path over `grid`.
pub fn lasso_path(data: &StandardizedData, grid: &[f64], opts: CdOptions) -> Result<SolutionPath> {
    fit_path(data, grid, Penalty::Lasso, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{standardize, RawData};
    use crate::solver::{lambda_max, soft_threshold};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn default_grid_shape() {
        let g = default_lambda_grid(3.0).unwrap();
        assert_eq!(g[0], 3.0);
        assert!(validate_grid(&g).is_ok());
        assert!(g.iter().skip(1).all(|&l| l < 3.0));
        assert_relative_eq!(*g.last().unwrap(), (-20.0f64).exp(), max_relative = 1e-12);
        // e^10 .. e^-20 in 250 steps; those below 3 remain
        let below = log_spaced(-20.0, 10.0, 250).into_iter().filter(|&l| l < 3.0).count();
        assert_eq!(g.len(), below + 1);
        let phi = default_phi_grid();
        assert_eq!(phi.len(), 100);
        assert_eq!(phi[0], 1.0);
        assert_relative_eq!(phi[99], (-10.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[]).is_err());
        assert!(validate_grid(&[1.0, 1.0]).is_err());
        assert!(validate_grid(&[1.0, 2.0]).is_err());
        assert!(validate_grid(&[1.0, 0.0]).is_err());
        assert!(default_lambda_grid(0.0).is_err());
    }

    #[test]
    fn single_point_grid_at_lambda_max() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.3, -1.0, 2.0, 0.5, -0.2, 2.0, 1.0]);
        let y = DVector::from_vec(vec![1.0, -2.0, 0.5, 1.5]);
        let d = standardize(&RawData::new(y, x).unwrap()).unwrap();
        let path = lasso_path(&d, &[lambda_max(&d)], CdOptions::default()).unwrap();
        assert_eq!(path.len(), 1);
        assert!(path.supports[0].is_empty());
    }

    #[test]
    fn two_point_orthogonal_path() {
        let x = crate::solver::tests::hadamard8();
        let y = DVector::from_vec(vec![3.0, -1.0, 0.5, 2.2, -0.7, 1.1, -2.5, 0.4]);
        let d = standardize(&RawData::new(y, x).unwrap()).unwrap();
        let ols = d.x().transpose() * d.y() / 8.0;
        let path = lasso_path(&d, &[0.6, 0.1], CdOptions::default()).unwrap();
        for (k, &l) in path.lambdas.iter().enumerate() {
            for j in 0..7 {
                assert_relative_eq!(path.betas[k][j], soft_threshold(ols[j], l), epsilon = 1e-12);
            }
            assert!(path.kkt.as_ref().unwrap()[k] < 1e-7);
        }
    }
}
