//! Penalized least squares by cyclic coordinate descent.
//!
//! All fits minimize `(2n)⁻¹‖y − Xβ‖² + Σⱼ P_λ(βⱼ)` on a
//! [`StandardizedData`] set. Because every column satisfies `‖xⱼ‖² = n`,
//! the coordinate update is the scalar thresholding rule of the penalty
//! applied to `xⱼᵀr/n + βⱼ` (see [`threshold`]).
//!
//! The sweep schedule is the usual active-set scheme: a full sweep over
//! all admissible columns, then sweeps over the nonzero coordinates until
//! they settle, then another full sweep. The fit is accepted once a full
//! sweep moves no coefficient by more than `tol`.
//!
//! For SCAD and MCP only a stationary point is guaranteed.

mod kkt;
mod path;
mod relaxed;
pub mod threshold;

pub use kkt::{kkt_violation, lambda_max, stationarity_violation};
pub(crate) use path::path_fits;
pub use path::{
    default_lambda_grid, default_phi_grid, fit_path, lasso_path, log_spaced, validate_grid,
    SolutionPath,
};
pub use relaxed::{relaxed_lasso, relaxed_from_fit, relaxed_path_at};
pub use threshold::{nonconvex_threshold, penalty_value, soft_threshold};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::{StandardizedData, Support};
use crate::error::{Error, Result};

pub const DEFAULT_SCAD_GAMMA: f64 = 3.7;
pub const DEFAULT_MCP_GAMMA: f64 = 3.0;

/// Penalty family. `RelaxedLasso` uses `phi = 0` as the unpenalized
/// (least squares) refit sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Penalty {
    Lasso,
    RelaxedLasso { phi: f64 },
    Scad { gamma: f64 },
    Mcp { gamma: f64 },
}

impl Penalty {
    pub fn scad() -> Self {
        Penalty::Scad {
            gamma: DEFAULT_SCAD_GAMMA,
        }
    }

    pub fn mcp() -> Self {
        Penalty::Mcp {
            gamma: DEFAULT_MCP_GAMMA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Penalty::Lasso => Ok(()),
            Penalty::RelaxedLasso { phi } if (0.0..=1.0).contains(&phi) => Ok(()),
            Penalty::RelaxedLasso { phi } => Err(Error::InvalidPenalty(format!(
                "relaxed lasso phi must lie in [0, 1], got {phi}"
            ))),
            Penalty::Scad { gamma } if gamma > 2.0 => Ok(()),
            Penalty::Scad { gamma } => Err(Error::InvalidPenalty(format!(
                "SCAD gamma must exceed 2, got {gamma}"
            ))),
            Penalty::Mcp { gamma } if gamma > 1.0 => Ok(()),
            Penalty::Mcp { gamma } => Err(Error::InvalidPenalty(format!(
                "MCP gamma must exceed 1, got {gamma}"
            ))),
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, Penalty::Lasso | Penalty::RelaxedLasso { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Penalty::Lasso => "lasso",
            Penalty::RelaxedLasso { .. } => "relaxed",
            Penalty::Scad { .. } => "scad",
            Penalty::Mcp { .. } => "mcp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdOptions {
    /// Largest coefficient change allowed in the final full sweep.
    pub tol: f64,
    /// Cap on the number of sweeps (full and active-set combined).
    pub max_iter: usize,
}

impl Default for CdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 10_000,
        }
    }
}

/// A single penalized fit on standardized data.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub lambda: f64,
    pub phi: Option<f64>,
    pub penalty: Penalty,
    pub beta: DVector<f64>,
    pub support: Support,
    /// `Xβ` on the standardized design.
    pub fitted: DVector<f64>,
    pub objective: f64,
    pub n_iter: usize,
}

impl FitResult {
    pub(crate) fn assemble(
        data: &StandardizedData,
        lambda: f64,
        penalty: Penalty,
        beta: DVector<f64>,
        n_iter: usize,
    ) -> Self {
        let fitted = data.x() * &beta;
        let objective = objective(data, lambda, penalty, &beta, &fitted);
        let phi = match penalty {
            Penalty::RelaxedLasso { phi } => Some(phi),
            _ => None,
        };
        Self {
            lambda,
            phi,
            penalty,
            support: Support::from_beta(&beta),
            beta,
            fitted,
            objective,
            n_iter,
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.beta.lp_norm(1)
    }
}

/// `(2n)⁻¹‖y − ŷ‖² + Σ P_λ(βⱼ)`.
pub fn objective(
    data: &StandardizedData,
    lambda: f64,
    penalty: Penalty,
    beta: &DVector<f64>,
    fitted: &DVector<f64>,
) -> f64 {
    let n = data.n() as f64;
    let rss = (data.y() - fitted).norm_squared();
    rss / (2.0 * n) + beta.iter().map(|&b| penalty_value(b, lambda, penalty)).sum::<f64>()
}

/// Coordinate descent at a single `lambda`.
///
/// `RelaxedLasso` is not accepted here; use [`relaxed_lasso`], which needs
/// the Lasso support first.
pub fn coordinate_descent(
    data: &StandardizedData,
    lambda: f64,
    penalty: Penalty,
    warm: Option<&DVector<f64>>,
    opts: CdOptions,
) -> Result<FitResult> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidLambda(lambda));
    }
    penalty.validate()?;
    if let Penalty::RelaxedLasso { .. } = penalty {
        return Err(Error::InvalidPenalty(
            "relaxed lasso needs a two-stage fit; call relaxed_lasso".into(),
        ));
    }
    let cols: Vec<usize> = (0..data.p()).collect();
    solve_restricted(data, &cols, lambda, penalty, warm, opts)
}

/// Coordinate descent over the admissible columns `cols`; all other
/// coefficients are held at zero.
/// Inner sweeps between attempts to solve the active set exactly.
const POLISH_EVERY: usize = 20;

/// Active-set step for the convex penalties: solve the ℓ₁ problem on
/// `active` with the current signs held fixed, walking back to the first
/// sign change and dropping that coordinate until the solution keeps every
/// sign. The following full sweep checks the remaining coordinates.
fn polish_active(
    data: &StandardizedData,
    active: &[usize],
    level: f64,
    beta: &mut [f64],
    resid: &mut [f64],
) -> bool {
    let n = data.n() as f64;
    let mut set: Vec<usize> = active.to_vec();
    while !set.is_empty() && set.len() < data.n() {
        let xa = DMatrix::from_fn(data.n(), set.len(), |i, k| data.column(set[k])[i]);
        let Some(chol) = xa.tr_mul(&xa).cholesky() else {
            return false;
        };
        let signs = DVector::from_iterator(set.len(), set.iter().map(|&j| beta[j].signum()));
        let sol = chol.solve(&(xa.tr_mul(data.y()) - signs.scale(n * level)));
        if sol.iter().any(|b| !b.is_finite()) {
            return false;
        }
        // largest step toward `sol` that keeps the signs
        let mut step = 1.0;
        let mut blocking = None;
        for (k, &j) in set.iter().enumerate() {
            if sol[k] * signs[k] <= 0.0 {
                let t = beta[j] / (beta[j] - sol[k]);
                if t < step {
                    step = t;
                    blocking = Some(k);
                }
            }
        }
        for (k, &j) in set.iter().enumerate() {
            beta[j] += step * (sol[k] - beta[j]);
        }
        match blocking {
            None => {
                sync_residual(data, &set, beta, resid);
                return true;
            }
            Some(k) => {
                beta[set[k]] = 0.0;
                set.remove(k);
            }
        }
    }
    sync_residual(data, &set, beta, resid);
    true
}

fn sync_residual(data: &StandardizedData, set: &[usize], beta: &[f64], resid: &mut [f64]) {
    resid.copy_from_slice(data.y().as_slice());
    for &j in set {
        let b = beta[j];
        for (r, x) in resid.iter_mut().zip(data.column(j)) {
            *r -= x * b;
        }
    }
}

pub(crate) fn solve_restricted(
    data: &StandardizedData,
    cols: &[usize],
    lambda: f64,
    penalty: Penalty,
    warm: Option<&DVector<f64>>,
    opts: CdOptions,
) -> Result<FitResult> {
    let n = data.n();
    let p = data.p();
    // divide rather than multiply by 1/n so that z at β = 0 rounds exactly
    // like lambda_max and the Lasso solution there is exactly zero
    let nf = n as f64;

    let mut beta = vec![0.0; p];
    if let Some(w) = warm {
        if w.len() != p {
            return Err(Error::DimensionMismatch(format!(
                "warm start has length {}, expected {p}",
                w.len()
            )));
        }
        for &j in cols {
            beta[j] = w[j];
        }
    }
    let mut resid: Vec<f64> = data.y().iter().copied().collect();
    for &j in cols {
        if beta[j] != 0.0 {
            let b = beta[j];
            for (r, x) in resid.iter_mut().zip(data.column(j)) {
                *r -= x * b;
            }
        }
    }

    let update = |j: usize, beta: &mut [f64], resid: &mut [f64]| -> f64 {
        let xj = data.column(j);
        let old = beta[j];
        let z = dot(xj, resid) / nf + old;
        let new = nonconvex_threshold(z, lambda, penalty);
        let delta = new - old;
        if delta != 0.0 {
            beta[j] = new;
            for (r, x) in resid.iter_mut().zip(xj) {
                *r -= x * delta;
            }
        }
        delta.abs()
    };

    let convex_level = match penalty {
        Penalty::Lasso => Some(lambda),
        Penalty::RelaxedLasso { phi } => Some(lambda * phi),
        _ => None,
    };
    let mut n_iter = 0;
    let mut active: Vec<usize> = Vec::with_capacity(cols.len());
    let converged = 'outer: loop {
        let mut max_change = 0.0f64;
        for &j in cols {
            max_change = max_change.max(update(j, &mut beta, &mut resid));
        }
        n_iter += 1;
        if max_change < opts.tol {
            break true;
        }
        if n_iter >= opts.max_iter {
            break false;
        }
        active.clear();
        active.extend(cols.iter().copied().filter(|&j| beta[j] != 0.0));
        let mut inner = 0;
        loop {
            let mut max_change = 0.0f64;
            for &j in &active {
                max_change = max_change.max(update(j, &mut beta, &mut resid));
            }
            n_iter += 1;
            inner += 1;
            if max_change < opts.tol {
                break;
            }
            if let Some(t) = convex_level {
                if inner % POLISH_EVERY == 0 && polish_active(data, &active, t, &mut beta, &mut resid) {
                    break;
                }
            }
            if n_iter >= opts.max_iter {
                break 'outer false;
            }
        }
    };

    let fit = FitResult::assemble(data, lambda, penalty, DVector::from_vec(beta), n_iter);
    if converged {
        Ok(fit)
    } else {
        Err(Error::NotConverged {
            max_iter: opts.max_iter,
            last: Box::new(fit),
        })
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
