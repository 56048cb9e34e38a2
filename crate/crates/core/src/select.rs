//! Tuning-parameter selection.
//!
//! K-fold cross-validation scores every grid point under three metrics at
//! once:
//!
//! * **APE**: mean squared validation error, `‖y_k − ŷ_k‖² / n_k`;
//! * **AR2**: `1 − Corr(y_k, ŷ_k)²`, blind to the scale of the predictions;
//! * **Mod-APE**: squared error of `α̂_train·ŷ_k`, where `α̂_train` is the
//!   α-modification multiplier of the training-fold fit.
//!
//! Each training fold is re-standardized and its transform applied to the
//! validation rows, so nothing about the validation fold leaks into the fit.
//! Selection uses the minimum, the one-standard-error rule (largest `λ`
//! whose mean is within one SE of the minimum, SE taken at the minimizer),
//! or for `(λ, φ)` grids the smallest-ℓ₁ model within one SE.
//!
//! Information criteria (AIC, AICc, BIC, ERIC, GCV) select along a single
//! full-data path instead.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphamod::alpha_hat;
use crate::data::{standardize, StandardizedData};
use crate::error::{Error, Result};
use crate::rng;
use crate::solver::path_fits;
use crate::solver::{relaxed_path_at, CdOptions, FitResult, Penalty, SolutionPath};

/// AR2 values are rounded to a multiple of this quantum so that the
/// round-off from rescaling the predictions does not reach the reported
/// value. A value lying within round-off of a rounding boundary can still
/// move by one quantum.
pub const AR2_QUANTUM: f64 = 1.0 / (1u64 << 32) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Ape,
    Ar2,
    ModApe,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Ape, Metric::Ar2, Metric::ModApe];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Ape => "ape",
            Metric::Ar2 => "ar2",
            Metric::ModApe => "modape",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ape" => Ok(Metric::Ape),
            "ar2" => Ok(Metric::Ar2),
            "modape" | "mod-ape" | "mod_ape" | "mod" => Ok(Metric::ModApe),
            _ => Err(Error::Config {
                field: "metric".into(),
                reason: format!("unknown metric `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Min,
    OneSe,
    RelaxedOneSe,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::Min => "min",
            Rule::OneSe => "onese",
            Rule::RelaxedOneSe => "relaxed-onese",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Rule::Min),
            "onese" | "1se" | "one-se" => Ok(Rule::OneSe),
            "relaxed-onese" | "relaxed1se" | "relaxed-1se" => Ok(Rule::RelaxedOneSe),
            _ => Err(Error::Config {
                field: "rule".into(),
                reason: format!("unknown rule `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SelectionRule {
    pub metric: Metric,
    pub rule: Rule,
}

/// Assignment of observations to `k` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    assignments: Vec<usize>,
    k: usize,
    seed: u64,
}

impl FoldPlan {
    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `(training rows, validation rows)` of fold `f`, each ascending.
    pub fn split(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        let (mut train, mut val) = (Vec::new(), Vec::new());
        for (i, &a) in self.assignments.iter().enumerate() {
            if a == f {
                val.push(i);
            } else {
                train.push(i);
            }
        }
        (train, val)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }
}

/// Balanced random folds: a seeded permutation of `0..n` dealt round-robin,
/// so fold sizes differ by at most one.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 || k > n {
        return Err(Error::BadK { n, k });
    }
    let perm = rng::permutation(n, &mut rng::stream(seed, 0));
    let mut assignments = vec![0; n];
    for (pos, &i) in perm.iter().enumerate() {
        assignments[i] = pos % k;
    }
    Ok(FoldPlan {
        assignments,
        k,
        seed,
    })
}

/// Validation-fold scores of one fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics {
    pub ape: f64,
    pub ar2: f64,
    pub modape: f64,
    /// Predictions had zero norm or zero variance: AR2 is set to 1 and
    /// Mod-APE to the error of the mean-only prediction.
    pub degenerate: bool,
}

impl FoldMetrics {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::Ape => self.ape,
            Metric::Ar2 => self.ar2,
            Metric::ModApe => self.modape,
        }
    }
}

/// Scores for a validation fold. Both vectors are expressed relative to the
/// training fold's response center; `alpha_train` is `None` when the
/// training fit has no α̂ (zero predictions).
pub fn fold_metrics(
    y_val: &DVector<f64>,
    yhat_val: &DVector<f64>,
    alpha_train: Option<f64>,
) -> Result<FoldMetrics> {
    let nk = y_val.len();
    if nk != yhat_val.len() {
        return Err(Error::DimensionMismatch(format!(
            "validation response has {nk} rows, predictions {}",
            yhat_val.len()
        )));
    }
    if nk < 2 {
        return Err(Error::TooSmall {
            what: "validation observations",
            min: 2,
            got: nk,
        });
    }
    let nf = nk as f64;
    let ape = (y_val - yhat_val).norm_squared() / nf;
    let mean_only = y_val.norm_squared() / nf;

    let norm = yhat_val.norm();
    let corr = correlation(y_val, yhat_val);
    let degenerate = norm < crate::alphamod::ZERO_PREDICTION_TOL || corr.is_none();

    if degenerate {
        return Ok(FoldMetrics {
            ape,
            ar2: 1.0,
            modape: mean_only,
            degenerate: true,
        });
    }
    let r = corr.unwrap_or(0.0);
    let ar2 = quantize((1.0 - r * r).clamp(0.0, 1.0));
    let modape = match alpha_train {
        Some(a) => (y_val - yhat_val * a).norm_squared() / nf,
        None => mean_only,
    };
    Ok(FoldMetrics {
        ape,
        ar2,
        modape,
        degenerate: false,
    })
}

fn quantize(v: f64) -> f64 {
    (v / AR2_QUANTUM).round() * AR2_QUANTUM
}

/// Pearson correlation with both vectors centered at their own means;
/// `None` when either has zero variance.
fn correlation(a: &DVector<f64>, b: &DVector<f64>) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    let scale_b = b.amax();
    let scale_a = a.amax();
    if saa.sqrt() <= 1e-14 * scale_a * n.sqrt() || sbb.sqrt() <= 1e-14 * scale_b * n.sqrt() {
        return None;
    }
    Some(sab / (saa.sqrt() * sbb.sqrt()))
}

/// Grid for cross-validation. `phis` is required for the Relaxed Lasso and
/// ignored otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct CvGrid {
    pub lambdas: Vec<f64>,
    pub phis: Option<Vec<f64>>,
}

impl CvGrid {
    pub fn lambdas(lambdas: Vec<f64>) -> Self {
        Self {
            lambdas,
            phis: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub lambda: f64,
    pub phi: Option<f64>,
}

/// Mean and standard error of one metric at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub mean: f64,
    pub se: f64,
    pub n_folds_used: usize,
    /// Some fold failed or produced degenerate predictions.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvTable {
    pub points: Vec<GridPoint>,
    pub ape: Vec<MetricStat>,
    pub ar2: Vec<MetricStat>,
    pub modape: Vec<MetricStat>,
    /// `‖β̂‖₁` of the full-data fit at each point (NaN if that fit failed).
    pub l1_norm: Vec<f64>,
    pub support_size: Vec<usize>,
    pub k: usize,
    pub penalty: Penalty,
    /// Full-data Lasso-stage coefficients per `λ` (standardized scale).
    pub full_betas: Vec<Option<DVector<f64>>>,
}

impl CvTable {
    pub fn stats(&self, m: Metric) -> &[MetricStat] {
        match m {
            Metric::Ape => &self.ape,
            Metric::Ar2 => &self.ar2,
            Metric::ModApe => &self.modape,
        }
    }

    pub fn has_phi(&self) -> bool {
        self.points.first().is_some_and(|p| p.phi.is_some())
    }

    /// Position of `λ` for point `idx` in the lambda grid.
    pub fn lambda_index(&self, idx: usize) -> usize {
        match self.points.iter().filter(|p| p.phi.is_some()).count() {
            0 => idx,
            _ => {
                let per = self.points.len() / self.full_betas.len().max(1);
                idx / per.max(1)
            }
        }
    }

    /// Full-data fit at point `idx`.
    pub fn full_fit(
        &self,
        data: &StandardizedData,
        idx: usize,
        opts: CdOptions,
    ) -> Result<FitResult> {
        let li = self.lambda_index(idx);
        let beta = self.full_betas[li]
            .clone()
            .ok_or_else(|| Error::PreconditionViolated("full-data fit failed".into()))?;
        let point = self.points[idx];
        let base_penalty = match self.penalty {
            Penalty::RelaxedLasso { .. } => Penalty::Lasso,
            p => p,
        };
        let base = FitResult::assemble(data, point.lambda, base_penalty, beta, 0);
        match point.phi {
            None => Ok(base),
            Some(_) if base.support.is_empty() => Ok(base),
            Some(phi) => crate::solver::relaxed_from_fit(data, &base, phi, opts),
        }
    }

    /// Long format: one row per grid point and metric.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        wtr.write_record(["lambda", "phi", "metric", "mean", "se", "n_folds_used", "flagged"])
            .map_err(io)?;
        for (i, pt) in self.points.iter().enumerate() {
            for m in Metric::ALL {
                let s = self.stats(m)[i];
                wtr.write_record([
                    format!("{:.17e}", pt.lambda),
                    pt.phi.map(|v| format!("{v:.17e}")).unwrap_or_default(),
                    m.to_string(),
                    format!("{:.17e}", s.mean),
                    format!("{:.17e}", s.se),
                    s.n_folds_used.to_string(),
                    s.flagged.to_string(),
                ])
                .map_err(io)?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Per-grid-point metrics of one fold; `None` marks a failed fit.
type FoldRow = Vec<Option<FoldMetrics>>;

/// K-fold cross-validation of `penalty` over `grid`.
pub fn cv_evaluate(
    data: &StandardizedData,
    grid: &CvGrid,
    plan: &FoldPlan,
    penalty: Penalty,
    opts: CdOptions,
) -> Result<CvTable> {
    crate::solver::validate_grid(&grid.lambdas)?;
    if plan.assignments.len() != data.n() {
        return Err(Error::DimensionMismatch(format!(
            "fold plan covers {} rows, data has {}",
            plan.assignments.len(),
            data.n()
        )));
    }
    if let Some(f) = plan.fold_sizes().iter().position(|&s| s < 2) {
        return Err(Error::BadFoldSizeForAR2 { fold: f });
    }
    let phis = match penalty {
        Penalty::RelaxedLasso { .. } => {
            let phis = grid.phis.clone().ok_or_else(|| Error::Config {
                field: "phi".into(),
                reason: "relaxed lasso needs a phi grid".into(),
            })?;
            if phis.is_empty() || phis.windows(2).any(|w| !(w[0] > w[1])) {
                return Err(Error::BadGrid);
            }
            Some(phis)
        }
        _ => {
            penalty.validate()?;
            None
        }
    };
    let points: Vec<GridPoint> = match &phis {
        None => grid
            .lambdas
            .iter()
            .map(|&lambda| GridPoint { lambda, phi: None })
            .collect(),
        Some(phis) => grid
            .lambdas
            .iter()
            .flat_map(|&lambda| {
                phis.iter().map(move |&phi| GridPoint {
                    lambda,
                    phi: Some(phi),
                })
            })
            .collect(),
    };

    let raw = data.as_raw();
    let fold_rows: Vec<FoldRow> = (0..plan.k)
        .into_par_iter()
        .map(|f| {
            let (train_idx, val_idx) = plan.split(f);
            evaluate_fold(&raw, &train_idx, &val_idx, grid, phis.as_deref(), penalty, opts)
                .unwrap_or_else(|_| vec![None; points.len()])
        })
        .collect();

    // Full-data Lasso-stage path for ℓ₁ norms, support sizes and later refits.
    let stage_penalty = match penalty {
        Penalty::RelaxedLasso { .. } => Penalty::Lasso,
        p => p,
    };
    let full = path_fits(data, &grid.lambdas, stage_penalty, opts)?;
    let full_betas: Vec<Option<DVector<f64>>> =
        full.iter().map(|r| r.as_ref().ok().map(|f| f.beta.clone())).collect();
    let mut l1_norm = Vec::with_capacity(points.len());
    let mut support_size = Vec::with_capacity(points.len());
    for res in &full {
        match (&phis, res) {
            (None, Ok(fit)) => {
                l1_norm.push(fit.l1_norm());
                support_size.push(fit.support.len());
            }
            (None, Err(_)) => {
                l1_norm.push(f64::NAN);
                support_size.push(0);
            }
            (Some(phis), Ok(fit)) => {
                if fit.support.is_empty() {
                    l1_norm.extend(std::iter::repeat_n(0.0, phis.len()));
                    support_size.extend(std::iter::repeat_n(0, phis.len()));
                } else {
                    for r in relaxed_path_at(data, fit, phis, opts) {
                        match r {
                            Ok(rf) => {
                                l1_norm.push(rf.l1_norm());
                                support_size.push(rf.support.len());
                            }
                            Err(_) => {
                                l1_norm.push(f64::NAN);
                                support_size.push(fit.support.len());
                            }
                        }
                    }
                }
            }
            (Some(phis), Err(_)) => {
                l1_norm.extend(std::iter::repeat_n(f64::NAN, phis.len()));
                support_size.extend(std::iter::repeat_n(0, phis.len()));
            }
        }
    }

    let aggregate = |m: Metric| -> Vec<MetricStat> {
        (0..points.len())
            .map(|i| {
                let vals: Vec<&FoldMetrics> =
                    fold_rows.iter().filter_map(|row| row[i].as_ref()).collect();
                let values: Vec<f64> = vals.iter().map(|fm| fm.get(m)).collect();
                let (mean, se) = mean_se(&values);
                MetricStat {
                    mean,
                    se,
                    n_folds_used: values.len(),
                    flagged: values.len() < plan.k || vals.iter().any(|fm| fm.degenerate),
                }
            })
            .collect()
    };

    Ok(CvTable {
        ape: aggregate(Metric::Ape),
        ar2: aggregate(Metric::Ar2),
        modape: aggregate(Metric::ModApe),
        points,
        l1_norm,
        support_size,
        k: plan.k,
        penalty,
        full_betas,
    })
}

fn evaluate_fold(
    raw: &crate::data::RawData,
    train_idx: &[usize],
    val_idx: &[usize],
    grid: &CvGrid,
    phis: Option<&[f64]>,
    penalty: Penalty,
    opts: CdOptions,
) -> Result<FoldRow> {
    let train = standardize(&raw.select_rows(train_idx)?)?;
    let val = raw.select_rows(val_idx)?;
    let x_val = train.transform_x(val.x())?;
    let y_val = val.y().add_scalar(-train.y_center());

    let score = |fit: &FitResult| -> Option<FoldMetrics> {
        let yhat = &x_val * &fit.beta;
        let alpha = alpha_hat(train.y(), &fit.fitted).ok();
        fold_metrics(&y_val, &yhat, alpha).ok()
    };
    let zero_score = || fold_metrics(&y_val, &DVector::zeros(y_val.len()), None).ok();

    let stage_penalty = match penalty {
        Penalty::RelaxedLasso { .. } => Penalty::Lasso,
        p => p,
    };
    let fits = path_fits(&train, &grid.lambdas, stage_penalty, opts)?;
    let mut row = Vec::new();
    for res in fits {
        match (phis, res) {
            (None, Ok(fit)) => row.push(score(&fit)),
            (None, Err(_)) => row.push(None),
            (Some(phis), Ok(fit)) if fit.support.is_empty() => {
                row.extend(std::iter::repeat_n(zero_score(), phis.len()))
            }
            (Some(phis), Ok(fit)) => {
                for r in relaxed_path_at(&train, &fit, phis, opts) {
                    row.push(r.ok().and_then(|rf| score(&rf)));
                }
            }
            (Some(phis), Err(_)) => row.extend(std::iter::repeat_n(None, phis.len())),
        }
    }
    Ok(row)
}

/// Mean and `sd / √m` with the `m − 1` denominator (SE 0 for a single value).
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, (var / m as f64).sqrt())
}

/// Prefer larger `λ`, then larger `φ`.
fn prefer(a: &GridPoint, b: &GridPoint) -> Ordering {
    a.lambda
        .total_cmp(&b.lambda)
        .then_with(|| a.phi.unwrap_or(0.0).total_cmp(&b.phi.unwrap_or(0.0)))
}

/// Index of the selected grid point. Only points scored on every fold are
/// eligible.
pub fn select(table: &CvTable, rule: SelectionRule) -> Result<usize> {
    let stats = table.stats(rule.metric);
    let usable: Vec<usize> = (0..table.points.len())
        .filter(|&i| stats[i].n_folds_used == table.k && stats[i].mean.is_finite())
        .collect();
    let &first = usable.first().ok_or(Error::AllDegenerate)?;
    let argmin = usable.iter().copied().fold(first, |best, i| {
        match stats[i].mean.total_cmp(&stats[best].mean) {
            Ordering::Less => i,
            Ordering::Equal if prefer(&table.points[i], &table.points[best]).is_gt() => i,
            _ => best,
        }
    });
    if rule.rule == Rule::Min {
        return Ok(argmin);
    }
    let threshold = stats[argmin].mean + stats[argmin].se;
    let within = usable.into_iter().filter(|&i| stats[i].mean <= threshold);
    match rule.rule {
        Rule::Min => unreachable!(),
        Rule::OneSe => Ok(within
            .max_by(|&a, &b| prefer(&table.points[a], &table.points[b]))
            .unwrap_or(argmin)),
        Rule::RelaxedOneSe => {
            if !table.has_phi() {
                return Err(Error::InvalidRule("relaxed-onese"));
            }
            Ok(within
                .filter(|&i| table.l1_norm[i].is_finite())
                .min_by(|&a, &b| {
                    table.l1_norm[a]
                        .total_cmp(&table.l1_norm[b])
                        .then_with(|| prefer(&table.points[b], &table.points[a]))
                })
                .unwrap_or(argmin))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Criterion {
    Aic,
    Aicc,
    Bic,
    Eric { nu: f64 },
    Gcv,
}

impl Criterion {
    pub fn eric() -> Self {
        Criterion::Eric { nu: 0.5 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Aic => "aic",
            Criterion::Aicc => "aicc",
            Criterion::Bic => "bic",
            Criterion::Eric { .. } => "eric",
            Criterion::Gcv => "gcv",
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "aicc" => Ok(Criterion::Aicc),
            "bic" => Ok(Criterion::Bic),
            "eric" => Ok(Criterion::eric()),
            "gcv" => Ok(Criterion::Gcv),
            _ => Err(Error::Config {
                field: "criterion".into(),
                reason: format!("unknown criterion `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcSelection {
    pub index: usize,
    pub lambda: f64,
    /// Criterion value per path point; `None` where it is undefined
    /// (degenerate degrees of freedom or zero residual variance).
    pub values: Vec<Option<f64>>,
}

/// Criterion value for one path point with `k` active coefficients.
pub fn ic_value(
    criterion: Criterion,
    n: usize,
    k: usize,
    rss: f64,
    lambda: f64,
    sigma2: Option<f64>,
) -> Option<f64> {
    let nf = n as f64;
    let kf = k as f64;
    let s2_hat = rss / nf;
    if criterion == Criterion::Gcv {
        if k >= n {
            return None;
        }
        return Some(s2_hat / (1.0 - kf / nf).powi(2));
    }
    let fit_term = match sigma2 {
        Some(s2) => rss / s2,
        None if s2_hat > 0.0 => nf * s2_hat.ln(),
        None => return None,
    };
    let penalty = match criterion {
        Criterion::Aic => 2.0 * kf,
        Criterion::Aicc => {
            if k + 1 >= n {
                return None;
            }
            2.0 * kf + (2.0 * kf * kf + 2.0 * kf) / (nf - kf - 1.0)
        }
        Criterion::Bic => kf * nf.ln(),
        Criterion::Eric { nu } => {
            let s2 = sigma2.unwrap_or(s2_hat);
            if k == 0 {
                0.0
            } else {
                2.0 * nu * kf * (nf * s2 / lambda).ln()
            }
        }
        Criterion::Gcv => unreachable!(),
    };
    Some(fit_term + penalty)
}

/// Select a path point by information criterion. `sigma2` fixes the error
/// variance; otherwise `σ̂²_λ = RSS/n` is used throughout.
pub fn ic_select(
    data: &StandardizedData,
    path: &SolutionPath,
    criterion: Criterion,
    sigma2: Option<f64>,
) -> Result<IcSelection> {
    if path.is_empty() {
        return Err(Error::BadGrid);
    }
    if let Criterion::Eric { nu } = criterion {
        if !(nu > 0.0) {
            return Err(Error::Config {
                field: "nu".into(),
                reason: format!("ERIC nu must be positive, got {nu}"),
            });
        }
    }
    let values: Vec<Option<f64>> = path
        .betas
        .iter()
        .zip(&path.lambdas)
        .zip(&path.supports)
        .map(|((beta, &lambda), s)| {
            let rss = (data.y() - data.x() * beta).norm_squared();
            ic_value(criterion, data.n(), s.len(), rss, lambda, sigma2)
        })
        .collect();
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            // strict improvement keeps the earlier (larger) λ on ties
            if best.is_none_or(|b| *v < values[b].unwrap()) {
                best = Some(i);
            }
        }
    }
    let index = best.ok_or(Error::AllDegenerate)?;
    Ok(IcSelection {
        index,
        lambda: path.lambdas[index],
        values,
    })
}
