//! Monte Carlo experiments for support recovery.
//!
//! A replication draws a design, a sparse coefficient vector and two
//! independent error vectors: one for fitting and cross-validation and one
//! held out. Every configured method then runs on the same data, and
//! Hamming distance, false positives and negatives, FDR, model size and
//! prediction bias are recorded. Replication `r` reads only
//! `rng::stream(seed, r)`, so results do not depend on scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphamod::alpha_hat;
use crate::data::{sigma_from_snr, standardize, Covariance, RawData, StandardizedData, Support};
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};
use crate::select::{
    cv_evaluate, ic_select, make_folds, mean_se, select, Criterion, CvGrid, CvTable, Metric,
    Rule, SelectionRule,
};
use crate::solver::{
    default_lambda_grid, default_phi_grid, fit_path, lambda_max, CdOptions, FitResult, Penalty,
};

/// Shape and scale of the Gamma law for active coefficient magnitudes.
pub const BETA_GAMMA_SHAPE: f64 = 10.0;
pub const BETA_GAMMA_SCALE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorDist {
    Gaussian,
    /// Laplace with scale `σ/√2`, so the variance is still `σ²`.
    Laplace,
}

impl FromStr for ErrorDist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(ErrorDist::Gaussian),
            "laplace" => Ok(ErrorDist::Laplace),
            _ => Err(Error::Config {
                field: "error_dist".into(),
                reason: format!("unknown error distribution `{s}`"),
            }),
        }
    }
}

/// A selection procedure evaluated in every replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MethodSpec {
    Cv {
        penalty: Penalty,
        metric: Metric,
        rule: Rule,
        /// Report the α-modified estimate (affects prediction bias and
        /// holdout error, not the support).
        alpha_modified: bool,
    },
    Ic {
        criterion: Criterion,
        alpha_modified: bool,
    },
}

impl MethodSpec {
    pub fn cv(penalty: Penalty, metric: Metric, rule: Rule) -> Self {
        MethodSpec::Cv {
            penalty,
            metric,
            rule,
            alpha_modified: false,
        }
    }

    pub fn alpha_modified(self) -> Self {
        match self {
            MethodSpec::Cv {
                penalty,
                metric,
                rule,
                ..
            } => MethodSpec::Cv {
                penalty,
                metric,
                rule,
                alpha_modified: true,
            },
            MethodSpec::Ic { criterion, .. } => MethodSpec::Ic {
                criterion,
                alpha_modified: true,
            },
        }
    }

    pub fn is_alpha_modified(&self) -> bool {
        match *self {
            MethodSpec::Cv { alpha_modified, .. } | MethodSpec::Ic { alpha_modified, .. } => {
                alpha_modified
            }
        }
    }
}

/// `penalty-metric-rule[-alpha]` or `ic-criterion[-alpha]`, e.g.
/// `lasso-ar2-onese` or `ic-bic`.
impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodSpec::Cv {
                penalty,
                metric,
                rule,
                ..
            } => write!(f, "{}-{}-{}", penalty.name(), metric, rule)?,
            MethodSpec::Ic { criterion, .. } => write!(f, "ic-{}", criterion.name())?,
        }
        if self.is_alpha_modified() {
            f.write_str("-alpha")?;
        }
        Ok(())
    }
}

impl FromStr for MethodSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::Config {
            field: "methods".into(),
            reason,
        };
        let lower = s.trim().to_ascii_lowercase();
        let (body, alpha) = match lower.strip_suffix("-alpha") {
            Some(b) => (b, true),
            None => (lower.as_str(), false),
        };
        let parts: Vec<&str> = body.splitn(3, '-').collect();
        let spec = match parts.as_slice() {
            ["ic", crit] => MethodSpec::Ic {
                criterion: crit.parse().map_err(|_| bad(format!("unknown criterion in `{s}`")))?,
                alpha_modified: false,
            },
            [pen, metric, rule] => {
                let penalty = match *pen {
                    "lasso" => Penalty::Lasso,
                    "relaxed" => Penalty::RelaxedLasso { phi: 1.0 },
                    "scad" => Penalty::scad(),
                    "mcp" => Penalty::mcp(),
                    _ => return Err(bad(format!("unknown penalty in `{s}`"))),
                };
                MethodSpec::cv(
                    penalty,
                    metric.parse().map_err(|_| bad(format!("unknown metric in `{s}`")))?,
                    rule.parse().map_err(|_| bad(format!("unknown rule in `{s}`")))?,
                )
            }
            _ => return Err(bad(format!("cannot parse method `{s}`"))),
        };
        Ok(if alpha { spec.alpha_modified() } else { spec })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub p_star: usize,
    pub snr: f64,
    pub cov: Covariance,
    pub error_dist: ErrorDist,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<MethodSpec>,
    pub k_folds: usize,
    /// Use this magnitude for every active coefficient instead of Gamma
    /// draws (signs stay positive).
    pub beta_value: Option<f64>,
    /// Fix `σ` instead of deriving it from `snr`.
    pub sigma: Option<f64>,
    /// Draw the design once and reuse it in every replication.
    pub fixed_design: bool,
    /// Number of `φ` values for Relaxed Lasso methods.
    pub phi_count: usize,
}

impl SimConfig {
    pub fn new(n: usize, p: usize, p_star: usize, snr: f64) -> Self {
        SimConfig {
            n,
            p,
            p_star,
            snr,
            cov: Covariance::Identity,
            error_dist: ErrorDist::Gaussian,
            reps: 100,
            seed: 0,
            methods: Vec::new(),
            k_folds: 10,
            beta_value: None,
            sigma: None,
            fixed_design: false,
            phi_count: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| {
            Err(Error::Config {
                field: field.into(),
                reason,
            })
        };
        if self.n < 2 {
            return bad("n", format!("need at least 2 observations, got {}", self.n));
        }
        if self.p < 1 {
            return bad("p", "need at least one predictor".into());
        }
        if self.p_star > self.p {
            return bad("p_star", format!("{} exceeds p = {}", self.p_star, self.p));
        }
        if self.reps < 1 {
            return bad("reps", "need at least one replication".into());
        }
        if self.sigma.is_none() && !(self.snr > 0.0 && self.snr.is_finite()) {
            return bad("snr", format!("must be positive, got {}", self.snr));
        }
        if let Some(s) = self.sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return bad("sigma", format!("must be nonnegative, got {s}"));
            }
        }
        if let Some(b) = self.beta_value {
            if !b.is_finite() {
                return bad("beta_value", format!("must be finite, got {b}"));
            }
        }
        if self.k_folds < 2 || self.k_folds > self.n {
            return bad("k_folds", format!("must lie in [2, n], got {}", self.k_folds));
        }
        if self.methods.is_empty() {
            return bad("methods", "no methods configured".into());
        }
        if self.phi_count < 1 {
            return bad("phi_count", "need at least one phi value".into());
        }
        for m in &self.methods {
            if let MethodSpec::Cv { penalty, rule, .. } = m {
                if !matches!(penalty, Penalty::RelaxedLasso { .. }) {
                    penalty.validate()?;
                }
                if *rule == Rule::RelaxedOneSe && !matches!(penalty, Penalty::RelaxedLasso { .. }) {
                    return bad("methods", format!("`{m}`: relaxed-onese needs the relaxed penalty"));
                }
            }
        }
        self.cov.validate()
    }
}

/// `n × p` design with i.i.d. rows. Compound-symmetric rows use the
/// one-factor form `√ρ·z₀ + √(1−ρ)·zⱼ`. With `p = 1` both covariances give
/// the same draws.
pub fn gen_design<R: Rng + ?Sized>(n: usize, p: usize, cov: Covariance, rng: &mut R) -> DMatrix<f64> {
    // a single column has Σ = [1] either way; draw it identically
    let cov = if p == 1 { Covariance::Identity } else { cov };
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        match cov {
            Covariance::Identity => {
                for j in 0..p {
                    x[(i, j)] = StandardNormal.sample(rng);
                }
            }
            Covariance::CompoundSymmetric { rho } => {
                let z0: f64 = StandardNormal.sample(rng);
                let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
                for j in 0..p {
                    let z: f64 = StandardNormal.sample(rng);
                    x[(i, j)] = a * z0 + b * z;
                }
            }
        }
    }
    x
}

/// First `p_star` entries: Gamma(10, 0.25) magnitudes with fair random
/// signs; the rest zero.
pub fn gen_beta<R: Rng + ?Sized>(p: usize, p_star: usize, rng: &mut R) -> DVector<f64> {
    let gamma = Gamma::new(BETA_GAMMA_SHAPE, BETA_GAMMA_SCALE).expect("valid Gamma parameters");
    let mut beta = DVector::zeros(p);
    for j in 0..p_star.min(p) {
        let m = gamma.sample(rng);
        beta[j] = if rng.random_bool(0.5) { m } else { -m };
    }
    beta
}

/// `n` i.i.d. errors with standard deviation `sigma`.
pub fn gen_errors<R: Rng + ?Sized>(n: usize, sigma: f64, dist: ErrorDist, rng: &mut R) -> DVector<f64> {
    match dist {
        ErrorDist::Gaussian => DVector::from_fn(n, |_, _| {
            let z: f64 = StandardNormal.sample(rng);
            sigma * z
        }),
        ErrorDist::Laplace => {
            let b = sigma / std::f64::consts::SQRT_2;
            DVector::from_fn(n, |_, _| {
                let u: f64 = rng.random::<f64>() - 0.5;
                -b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            })
        }
    }
}

/// `y = Xβ* + ε`.
pub fn gen_response<R: Rng + ?Sized>(
    x: &DMatrix<f64>,
    beta_star: &DVector<f64>,
    sigma: f64,
    dist: ErrorDist,
    rng: &mut R,
) -> DVector<f64> {
    x * beta_star + gen_errors(x.nrows(), sigma, dist, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportMetrics {
    pub hd: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    /// `fp / max(size, 1)`.
    pub fdr: f64,
    pub size: usize,
}

pub fn support_metrics(beta_star: &DVector<f64>, beta_hat: &DVector<f64>) -> Result<SupportMetrics> {
    if beta_star.len() != beta_hat.len() {
        return Err(Error::DimensionMismatch(format!(
            "true coefficients have length {}, estimate {}",
            beta_star.len(),
            beta_hat.len()
        )));
    }
    let (mut fp, mut fneg, mut size) = (0, 0, 0);
    for (t, e) in beta_star.iter().zip(beta_hat.iter()) {
        let (truth, est) = (*t != 0.0, *e != 0.0);
        size += est as usize;
        fp += (est && !truth) as usize;
        fneg += (truth && !est) as usize;
    }
    Ok(SupportMetrics {
        hd: fp + fneg,
        false_pos: fp,
        false_neg: fneg,
        fdr: fp as f64 / size.max(1) as f64,
        size,
    })
}

/// `‖Xβ* − Xβ̂‖₂`.
pub fn prediction_bias(x: &DMatrix<f64>, beta_star: &DVector<f64>, beta_hat: &DVector<f64>) -> Result<f64> {
    if x.ncols() != beta_star.len() || x.ncols() != beta_hat.len() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} columns, coefficients {} and {}",
            x.ncols(),
            beta_star.len(),
            beta_hat.len()
        )));
    }
    Ok((x * (beta_star - beta_hat)).norm())
}

/// One method in one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub support: SupportMetrics,
    /// Selected support equals the true one.
    pub recovered: bool,
    pub pb: f64,
    /// Mean squared error on the held-out response.
    pub holdout_ape: f64,
    pub lambda: f64,
    pub phi: Option<f64>,
    /// Multiplier applied to the estimate (1 unless α-modified).
    pub alpha: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub rep: usize,
    pub sigma: f64,
    /// One entry per configured method, in order; `Err` holds the message.
    pub outcomes: Vec<std::result::Result<MethodOutcome, String>>,
}

pub const OUTCOME_METRICS: [&str; 9] =
    ["hd", "fp", "fn", "fdr", "size", "pb", "recovered", "holdout_ape", "alpha"];

impl MethodOutcome {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "hd" => self.support.hd as f64,
            "fp" => self.support.false_pos as f64,
            "fn" => self.support.false_neg as f64,
            "fdr" => self.support.fdr,
            "size" => self.support.size as f64,
            "pb" => self.pb,
            "recovered" => self.recovered as u8 as f64,
            "holdout_ape" => self.holdout_ape,
            "alpha" => self.alpha,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: String,
    pub metric: String,
    pub mean: f64,
    pub se: f64,
    pub reps_used: usize,
    /// Fewer than two usable replications, so the SE is not informative.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub config: SimConfig,
    pub replications: Vec<Replication>,
    pub summary: Vec<SummaryRow>,
}

impl Experiment {
    pub fn row(&self, method: &str, metric: &str) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|r| r.method == method && r.metric == metric)
    }

    /// `(replication, method, message)` for every failed method run.
    pub fn failures(&self) -> Vec<(usize, String, String)> {
        let mut out = Vec::new();
        for r in &self.replications {
            for (m, o) in self.config.methods.iter().zip(&r.outcomes) {
                if let Err(e) = o {
                    out.push((r.rep, m.to_string(), e.clone()));
                }
            }
        }
        out
    }

    /// Columns `method, metric, mean, se, reps_used`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        wtr.write_record(["method", "metric", "mean", "se", "reps_used"])
            .map_err(io)?;
        for row in &self.summary {
            wtr.write_record([
                row.method.clone(),
                row.metric.clone(),
                format!("{:.17e}", row.mean),
                format!("{:.17e}", row.se),
                row.reps_used.to_string(),
            ])
            .map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Run every replication and aggregate.
pub fn run_experiment(config: &SimConfig) -> Result<Experiment> {
    config.validate()?;
    let shared_design = config.fixed_design.then(|| {
        let mut rng = rng::stream(config.seed, rng::SHARED_STREAM);
        gen_design(config.n, config.p, config.cov, &mut rng)
    });
    let replications: Vec<Replication> = (0..config.reps)
        .into_par_iter()
        .map(|r| run_replication(config, r, shared_design.as_ref()))
        .collect::<Result<_>>()?;
    let summary = summarize(&config.methods, &replications);
    Ok(Experiment {
        config: config.clone(),
        replications,
        summary,
    })
}

fn summarize(methods: &[MethodSpec], reps: &[Replication]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for (mi, m) in methods.iter().enumerate() {
        let ok: Vec<&MethodOutcome> = reps
            .iter()
            .filter_map(|r| r.outcomes[mi].as_ref().ok())
            .collect();
        for metric in OUTCOME_METRICS {
            let values: Vec<f64> = ok.iter().filter_map(|o| o.metric(metric)).collect();
            let (mean, se) = mean_se(&values);
            rows.push(SummaryRow {
                method: m.to_string(),
                metric: metric.to_string(),
                mean,
                se,
                reps_used: values.len(),
                degenerate: values.len() < 2,
            });
        }
    }
    rows
}

/// Data of one replication.
struct RepData {
    x: DMatrix<f64>,
    beta_star: DVector<f64>,
    y_holdout: DVector<f64>,
    std: StandardizedData,
    grid: Vec<f64>,
    fold_seed: u64,
}

fn run_replication(config: &SimConfig, r: usize, shared: Option<&DMatrix<f64>>) -> Result<Replication> {
    let mut rng: SimRng = rng::stream(config.seed, r as u64);
    let x = match shared {
        Some(x) => x.clone(),
        None => gen_design(config.n, config.p, config.cov, &mut rng),
    };
    let beta_star = match config.beta_value {
        Some(v) => {
            let mut b = DVector::zeros(config.p);
            b.rows_mut(0, config.p_star).fill(v);
            b
        }
        None => gen_beta(config.p, config.p_star, &mut rng),
    };
    let sigma = match config.sigma {
        Some(s) => s,
        None => sigma_from_snr(&beta_star, config.cov, config.snr)?,
    };
    let mean = &x * &beta_star;
    let y = &mean + gen_errors(config.n, sigma, config.error_dist, &mut rng);
    let y_holdout = &mean + gen_errors(config.n, sigma, config.error_dist, &mut rng);
    let fold_seed = rng.next_u64();

    let std = standardize(&RawData::new(y, x.clone())?)?;
    let lmax = lambda_max(&std);
    let outcomes = if lmax > 0.0 {
        let rd = RepData {
            grid: default_lambda_grid(lmax)?,
            x,
            beta_star,
            y_holdout,
            std,
            fold_seed,
        };
        let mut tables: Vec<(Penalty, CvTable)> = Vec::new();
        config
            .methods
            .iter()
            .map(|m| run_method(config, &rd, m, &mut tables).map_err(|e| e.to_string()))
            .collect()
    } else {
        vec![Err("response has no correlation with any predictor".to_string()); config.methods.len()]
    };
    Ok(Replication {
        rep: r,
        sigma,
        outcomes,
    })
}

fn run_method(
    config: &SimConfig,
    rd: &RepData,
    method: &MethodSpec,
    tables: &mut Vec<(Penalty, CvTable)>,
) -> Result<MethodOutcome> {
    let start = Instant::now();
    let opts = CdOptions::default();
    let (fit, phi) = match *method {
        MethodSpec::Cv {
            penalty,
            metric,
            rule,
            ..
        } => {
            if !tables.iter().any(|(p, _)| *p == penalty) {
                let plan = make_folds(config.n, config.k_folds, rd.fold_seed)?;
                let grid = CvGrid {
                    lambdas: rd.grid.clone(),
                    phis: matches!(penalty, Penalty::RelaxedLasso { .. }).then(|| {
                        if config.phi_count == 100 {
                            default_phi_grid()
                        } else {
                            crate::solver::log_spaced(-10.0, 0.0, config.phi_count)
                        }
                    }),
                };
                let table = cv_evaluate(&rd.std, &grid, &plan, penalty, opts)?;
                tables.push((penalty, table));
            }
            let table = &tables.iter().find(|(p, _)| *p == penalty).expect("cached").1;
            let idx = select(table, SelectionRule { metric, rule })?;
            (table.full_fit(&rd.std, idx, opts)?, table.points[idx].phi)
        }
        MethodSpec::Ic { criterion, .. } => {
            let path = fit_path(&rd.std, &rd.grid, Penalty::Lasso, opts)?;
            let sel = ic_select(&rd.std, &path, criterion, None)?;
            (path.fit_at(&rd.std, sel.index), None)
        }
    };
    evaluate_fit(rd, &fit, phi, method.is_alpha_modified(), start)
}

fn evaluate_fit(
    rd: &RepData,
    fit: &FitResult,
    phi: Option<f64>,
    alpha_modified: bool,
    start: Instant,
) -> Result<MethodOutcome> {
    let alpha = if alpha_modified {
        match alpha_hat(rd.std.y(), &fit.fitted) {
            Ok(a) => a,
            Err(Error::ZeroPredictions) => 1.0,
            Err(e) => return Err(e),
        }
    } else {
        1.0
    };
    let (_, slopes) = rd.std.coefficients_to_raw(&(&fit.beta * alpha));
    let support = support_metrics(&rd.beta_star, &slopes)?;
    let pb = prediction_bias(&rd.x, &rd.beta_star, &slopes)?;
    let pred = (&fit.fitted * alpha).add_scalar(rd.std.y_center());
    let holdout_ape = (&rd.y_holdout - pred).norm_squared() / rd.y_holdout.len() as f64;
    let recovered = Support::from_beta(&slopes) == Support::from_beta(&rd.beta_star);
    Ok(MethodOutcome {
        support,
        recovered,
        pb,
        holdout_ape,
        lambda: fit.lambda,
        phi,
        alpha,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn support_metric_examples() {
        let star = DVector::from_vec(vec![0.0, 1.0, 1.0, 0.0]);
        let hat = DVector::from_vec(vec![0.0, 0.0, 2.0, -1.0]);
        let m = support_metrics(&star, &hat).unwrap();
        assert_eq!((m.hd, m.false_pos, m.false_neg, m.size), (2, 1, 1, 2));
        assert_eq!(m.fdr, 0.5);
        let same = support_metrics(&star, &star).unwrap();
        assert_eq!((same.hd, same.false_pos, same.false_neg, same.size), (0, 0, 0, 2));
        let star5 = DVector::from_fn(8, |i, _| if i < 5 { 1.0 } else { 0.0 });
        let empty = support_metrics(&star5, &DVector::zeros(8)).unwrap();
        assert_eq!((empty.hd, empty.fdr), (5, 0.0));
    }

    #[test]
    fn prediction_bias_examples() {
        let mut rng = rng::stream(4, 0);
        let x = gen_design(20, 4, Covariance::Identity, &mut rng);
        let b = gen_beta(4, 2, &mut rng);
        assert_eq!(prediction_bias(&x, &b, &b).unwrap(), 0.0);
        assert_relative_eq!(
            prediction_bias(&x, &b, &DVector::zeros(4)).unwrap(),
            (&x * &b).norm(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_noise_and_zero_sparsity() {
        let mut rng = rng::stream(1, 0);
        let x = gen_design(5, 3, Covariance::Identity, &mut rng);
        let b = DVector::from_vec(vec![1.0, 0.0, -2.0]);
        assert_eq!(gen_response(&x, &b, 0.0, ErrorDist::Gaussian, &mut rng), &x * &b);
        assert!(gen_beta(6, 0, &mut rng).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn method_names_round_trip() {
        for s in ["lasso-ar2-onese", "scad-ape-min", "lasso-modape-onese-alpha", "ic-bic", "relaxed-ape-relaxed-onese"] {
            let m: MethodSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("lasso-foo-min".parse::<MethodSpec>().is_err());
    }

    #[test]
    fn config_validation_names_field() {
        let mut c = SimConfig::new(20, 10, 11, 5.0);
        c.methods.push("lasso-ape-min".parse().unwrap());
        match c.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "p_star"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_replication_is_degenerate() {
        let mut c = SimConfig::new(30, 8, 2, 5.0);
        c.reps = 1;
        c.k_folds = 5;
        c.methods.push("lasso-ape-onese".parse().unwrap());
        let e = run_experiment(&c).unwrap();
        let row = e.row("lasso-ape-onese", "hd").unwrap();
        assert_eq!(row.se, 0.0);
        assert!(row.degenerate);
        assert_eq!(row.reps_used, 1);
    }
}
