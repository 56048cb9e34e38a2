//! Randomized property checks for the solver and the α-modification.
//!
//! Each [`Property`] draws its own instances from a seeded stream, checks
//! one inequality or identity per instance, and reports the number of
//! passing cases, the worst margin (negative beyond tolerance means a
//! failure) and the first counterexample found.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::alphamod::{
    alpha_hat, alpha_modify, closed_form_signed, ols_distance_bound, sign_recovery_fit,
    sign_recovery_limit,
};
use crate::data::{ols_submodel, standardize, Covariance, RawData, StandardizedData, Support};
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};
use crate::simlab::gen_design;
use crate::solver::{
    coordinate_descent, kkt_violation, lambda_max, nonconvex_threshold, penalty_value,
    CdOptions, Penalty,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    /// Convex-penalty fits never have `α̂ < 1`.
    AlphaAtLeastOne,
    /// A fit proportional to the submodel OLS estimate is mapped back onto it.
    OlsDirection,
    /// On orthogonal designs `α̂β̂` equals the `w₁`/`w₂` closed form.
    OrthogonalClosedForm,
    /// On orthogonal designs `|α̂β̂_{j*} − b_{j*}|` stays within the bound and
    /// vanishes for large `|b_{j*}|`.
    OlsDistanceBound,
    /// Under sign recovery the deviation from OLS tends to `G_{j*}`.
    SignRecoveryLimit,
    /// Coordinate descent reaches the global Lasso minimum.
    SolverOracle,
    /// SCAD and MCP scalar updates are exact minimizers.
    NonconvexThreshold,
    /// `‖y − α̂ŷ‖ ≤ ‖y − ŷ‖`.
    AlphaOptimality,
    /// Median estimation error of the α-modified Lasso does not grow with `n`
    /// when `λ ∝ n^{-1/2}`.
    ConsistencyTrend,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::AlphaAtLeastOne,
        Property::OlsDirection,
        Property::OrthogonalClosedForm,
        Property::OlsDistanceBound,
        Property::SignRecoveryLimit,
        Property::SolverOracle,
        Property::NonconvexThreshold,
        Property::AlphaOptimality,
        Property::ConsistencyTrend,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::AlphaAtLeastOne => "alpha-at-least-one",
            Property::OlsDirection => "ols-direction",
            Property::OrthogonalClosedForm => "orthogonal-closed-form",
            Property::OlsDistanceBound => "ols-distance-bound",
            Property::SignRecoveryLimit => "sign-recovery-limit",
            Property::SolverOracle => "solver-oracle",
            Property::NonconvexThreshold => "nonconvex-threshold",
            Property::AlphaOptimality => "alpha-optimality",
            Property::ConsistencyTrend => "consistency-trend",
        }
    }

    /// Instances drawn when no count is given.
    pub fn default_count(&self) -> usize {
        match self {
            Property::AlphaAtLeastOne => 1000,
            Property::OlsDirection => 500,
            Property::OrthogonalClosedForm => 500,
            Property::OlsDistanceBound => 10_000,
            Property::SignRecoveryLimit => 20,
            Property::SolverOracle => 200,
            Property::NonconvexThreshold => 1000,
            Property::AlphaOptimality => 1000,
            Property::ConsistencyTrend => 50,
        }
    }

    /// A case fails when its margin is below `-tolerance`.
    pub fn tolerance(&self) -> f64 {
        match self {
            Property::AlphaAtLeastOne => 1e-10,
            Property::OlsDirection => 1e-10,
            Property::OrthogonalClosedForm => 1e-10,
            Property::OlsDistanceBound => 1e-9,
            Property::SignRecoveryLimit => 1e-2,
            Property::SolverOracle => 1e-8,
            Property::NonconvexThreshold => 1e-6,
            Property::AlphaOptimality => 0.0,
            Property::ConsistencyTrend => 0.0,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config {
                field: "property".into(),
                reason: format!("unknown property `{s}`"),
            })
    }
}

/// Deliberate defects for checking that the suites detect errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of `w₂` in the orthogonal closed form.
    FlipW2Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides [`Property::default_count`].
    pub count: Option<usize>,
    pub fault: Fault,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20240601,
            count: None,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub cases: usize,
    pub passed: usize,
    pub worst_margin: f64,
    pub counterexample: Option<String>,
    pub elapsed_ms: f64,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

struct Tally {
    property: Property,
    cases: usize,
    passed: usize,
    worst: f64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(property: Property) -> Self {
        Tally {
            property,
            cases: 0,
            passed: 0,
            worst: f64::INFINITY,
            counterexample: None,
        }
    }

    fn record(&mut self, margin: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let ok = margin >= -self.property.tolerance();
        if ok {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
        if !(margin >= self.worst) {
            self.worst = margin;
        }
    }

    fn finish(self, start: Instant) -> PropertyReport {
        PropertyReport {
            property: self.property,
            cases: self.cases,
            passed: self.passed,
            worst_margin: self.worst,
            counterexample: self.counterexample,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Run one property.
pub fn run_property(property: Property, opts: &VerifyOptions) -> Result<PropertyReport> {
    let count = opts.count.unwrap_or(property.default_count());
    let mut rng = rng::stream(opts.seed, property as u64);
    let start = Instant::now();
    let mut t = Tally::new(property);
    match property {
        Property::AlphaAtLeastOne => alpha_at_least_one(&mut t, count, &mut rng)?,
        Property::OlsDirection => ols_direction(&mut t, count, &mut rng)?,
        Property::OrthogonalClosedForm => orthogonal_closed_form(&mut t, count, &mut rng, opts.fault)?,
        Property::OlsDistanceBound => distance_bound(&mut t, count, &mut rng, opts.fault)?,
        Property::SignRecoveryLimit => recovery_limit(&mut t, count, &mut rng)?,
        Property::SolverOracle => solver_oracle(&mut t, count, &mut rng)?,
        Property::NonconvexThreshold => nonconvex(&mut t, count, &mut rng),
        Property::AlphaOptimality => alpha_optimality(&mut t, count, &mut rng)?,
        Property::ConsistencyTrend => consistency_trend(&mut t, count, &mut rng)?,
    }
    Ok(t.finish(start))
}

/// Run every property in [`Property::ALL`] order.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<PropertyReport>> {
    Property::ALL.iter().map(|&p| run_property(p, opts)).collect()
}

fn vec_str(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    format!("[{}]", items.join(","))
}

fn normal(rng: &mut SimRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Gaussian design, sparse signal and noise; returns standardized data.
fn random_problem(rng: &mut SimRng, n: usize, p: usize) -> Result<StandardizedData> {
    let x = gen_design(n, p, Covariance::Identity, rng);
    let k = rng.random_range(1..=p.min(5));
    let mut beta = DVector::zeros(p);
    for j in 0..k {
        beta[j] = rng.random_range(0.5..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    }
    let sigma = rng.random_range(0.2..2.0);
    let y = &x * &beta + DVector::from_fn(n, |_, _| sigma * normal(rng));
    standardize(&RawData::new(y, x)?)
}

fn lasso_at(data: &StandardizedData, lambda: f64) -> Result<crate::solver::FitResult> {
    coordinate_descent(data, lambda, Penalty::Lasso, None, CdOptions::default())
}

fn alpha_at_least_one(t: &mut Tally, count: usize, rng: &mut SimRng) -> Result<()> {
    while t.cases < count {
        let n = rng.random_range(20..=100);
        let p = rng.random_range(2..=50);
        let data = random_problem(rng, n, p)?;
        let lambda = lambda_max(&data) * rng.random_range(0.01..1.0);
        let fit = lasso_at(&data, lambda)?;
        if fit.support.is_empty() {
            continue;
        }
        let a = alpha_hat(data.y(), &fit.fitted)?;
        t.record(a - 1.0, || format!("n={n} p={p} lambda={lambda:e} alpha={a:e}"));
    }
    Ok(())
}

fn ols_direction(t: &mut Tally, count: usize, rng: &mut SimRng) -> Result<()> {
    while t.cases < count {
        let n = rng.random_range(10..=60);
        let p = rng.random_range(1..=8);
        let data = random_problem(rng, n, p)?;
        let k = rng.random_range(1..=p);
        let mut idx: Vec<usize> = rng::permutation(p, rng).into_iter().take(k).collect();
        idx.sort_unstable();
        let support = Support::new(idx, p)?;
        let ols = ols_submodel(&data, &support)?;
        if ols.iter().any(|v| *v == 0.0) {
            continue;
        }
        let c = rng.random_range(0.05..0.95);
        let mut beta = DVector::zeros(p);
        for (pos, &j) in support.indices().iter().enumerate() {
            beta[j] = c * ols[pos];
        }
        let fit = crate::solver::FitResult::assemble(&data, 0.1, Penalty::Lasso, beta, 0);
        let af = alpha_modify(&data, &fit)?;
        let err = support
            .indices()
            .iter()
            .enumerate()
            .map(|(pos, &j)| (af.beta_mod[j] - ols[pos]).abs() / ols[pos].abs().max(1.0))
            .fold(0.0, f64::max);
        let same_support = Support::from_beta(&af.beta_mod) == fit.support;
        let margin = if same_support { -err } else { f64::NEG_INFINITY };
        t.record(margin, || {
            format!("n={n} p={p} support={:?} c={c} err={err:e}", support.indices())
        });
    }
    Ok(())
}

/// Centered design with `XᵀX = nI`.
fn orthogonal_design(rng: &mut SimRng, n: usize, p: usize) -> DMatrix<f64> {
    let mut z = DMatrix::from_fn(n, p, |_, _| normal(rng));
    for mut col in z.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
    }
    let q = z.qr().q();
    q * (n as f64).sqrt()
}

fn orthogonal_closed_form(t: &mut Tally, count: usize, rng: &mut SimRng, fault: Fault) -> Result<()> {
    let w2_sign = if fault == Fault::FlipW2Sign { -1.0 } else { 1.0 };
    while t.cases < count {
        let p = rng.random_range(1..=10);
        let n = rng.random_range(p + 2..=40);
        let x = orthogonal_design(rng, n, p);
        let b = DVector::from_fn(p, |_, _| rng.random_range(-4.0..4.0));
        let y = &x * &b + DVector::from_fn(n, |_, _| 0.3 * normal(rng));
        let data = standardize(&RawData::new(y, x)?)?;
        let ols: Vec<f64> = (data.x().tr_mul(data.y()) / n as f64).iter().copied().collect();
        let top = ols.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if top == 0.0 {
            continue;
        }
        let lambda = top * rng.random_range(0.02..0.98);
        let fit = lasso_at(&data, lambda)?;
        let af = alpha_modify(&data, &fit)?;
        let mut err = 0.0f64;
        for j in 0..p {
            let cf = closed_form_signed(&ols, lambda, j, w2_sign)?;
            err = err.max((af.beta_mod[j] - cf.alpha_beta).abs() / ols[j].abs().max(1.0));
        }
        t.record(-err, || {
            format!("n={n} beta_ols={} lambda={lambda:e} err={err:e}", vec_str(&ols))
        });
    }
    Ok(())
}

fn distance_bound(t: &mut Tally, count: usize, rng: &mut SimRng, fault: Fault) -> Result<()> {
    let w2_sign = if fault == Fault::FlipW2Sign { -1.0 } else { 1.0 };
    while t.cases < count {
        let p = rng.random_range(2..=10);
        let lambda = rng.random_range(0.05..3.0);
        let mut b: Vec<f64> = (0..p)
            .map(|_| rng.random_range(-4.0..4.0) * lambda)
            .collect();
        let j_star = rng.random_range(0..p);
        // the precondition: another coordinate exceeds λ
        let other = (j_star + rng.random_range(1..p)) % p;
        if b[other].abs() <= lambda {
            let sign = if b[other] < 0.0 { -1.0 } else { 1.0 };
            b[other] = sign * lambda * rng.random_range(1.05..5.0);
        }
        // b_{j*} over several magnitudes, including the far tail
        b[j_star] = match t.cases % 4 {
            0 => rng.random_range(-3.0..3.0) * lambda,
            1 => rng.random_range(1.0..30.0) * lambda * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
            2 => 10f64.powf(rng.random_range(0.0..6.0)),
            _ => 1e6,
        };
        let bound = ols_distance_bound(&b, lambda, j_star)?;
        let cf = closed_form_signed(&b, lambda, j_star, w2_sign)?;
        let dev = (cf.alpha_beta - b[j_star]).abs();
        let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut margin = (bound - dev) / scale;
        if b[j_star] == 1e6 && dev >= 1e-3 {
            margin = margin.min(1e-3 - dev);
        }
        t.record(margin, || {
            format!(
                "beta_ols={} lambda={lambda:e} j_star={j_star} deviation={dev:e} bound={bound:e}",
                vec_str(&b)
            )
        });
    }
    Ok(())
}

fn recovery_limit(t: &mut Tally, count: usize, rng: &mut SimRng) -> Result<()> {
    let (n, p) = (40, 3);
    let opts = CdOptions::default();
    let mut attempts = 0;
    while t.cases < count {
        attempts += 1;
        if attempts > 50 * count.max(1) {
            return Err(Error::PreconditionViolated(
                "could not draw sign-recovering instances".into(),
            ));
        }
        // alternate correlated and orthogonal designs
        let orthogonal = t.cases % 4 == 3;
        let x = if orthogonal {
            orthogonal_design(rng, n, p)
        } else {
            let rho = rng.random_range(0.2..0.7);
            gen_design(n, p, Covariance::CompoundSymmetric { rho }, rng)
        };
        let eps = DVector::from_fn(n, |_, _| 0.5 * normal(rng));
        let j_star = rng.random_range(0..p);
        let mut beta: DVector<f64> = DVector::from_fn(p, |_, _| {
            rng.random_range(1.0..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
        });
        let lambda = rng.random_range(0.01..0.08);
        let support = Support::new((0..p).collect(), p)?;
        let sign_star = beta[j_star].signum();
        let mut last = None;
        let mut valid = true;
        for mag in [1e2, 1e3, 1e4] {
            beta[j_star] = sign_star * mag;
            let y = &x * &beta + &eps;
            let data = standardize(&RawData::new(y, x.clone())?)?;
            let signs: Vec<f64> = beta.iter().map(|v| v.signum()).collect();
            let closed = match sign_recovery_fit(&data, &support, &signs, lambda) {
                Ok(b) => b,
                Err(Error::SignMismatch(_)) => {
                    valid = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            let fit = coordinate_descent(&data, lambda, Penalty::Lasso, None, opts)?;
            // the closed form is the Lasso solution when signs are recovered
            if Support::from_beta(&fit.beta).len() != p
                || (0..p).any(|j| (fit.beta[j] - closed[j]).abs() > 1e-8 * closed[j].abs().max(1.0))
            {
                valid = false;
                break;
            }
            let limit = sign_recovery_limit(&data, &support, &signs, lambda, j_star)?;
            let ols = ols_submodel(&data, &support)?;
            let a = alpha_hat(data.y(), &fit.fitted)?;
            last = Some((a * fit.beta[j_star] - ols[j_star], limit.g));
        }
        if !valid {
            continue;
        }
        let (diff, g) = last.expect("sweep ran");
        let mut margin = -(diff - g).abs();
        let mut note = String::new();
        if orthogonal {
            // G vanishes on orthogonal designs
            if g.abs() > 1e-10 {
                margin = f64::NEG_INFINITY;
            }
            note = " orthogonal".to_string();
        }
        t.record(margin, || {
            format!("lambda={lambda:e} j_star={j_star} difference={diff:e} G={g:e}{note}")
        });
    }
    Ok(())
}

/// Exact global Lasso minimum for tiny `p`: every sign pattern in
/// `{−1, 0, +1}^p` is solved in closed form and infeasible ones discarded;
/// the best point of a dense grid is included as well.
fn lasso_oracle(data: &StandardizedData, lambda: f64) -> f64 {
    let (n, p) = (data.n(), data.p());
    let nf = n as f64;
    let obj = |b: &DVector<f64>| {
        let r = data.y() - data.x() * b;
        r.norm_squared() / (2.0 * nf) + lambda * b.abs().sum()
    };
    let mut best = obj(&DVector::zeros(p));
    for code in 0..3usize.pow(p as u32) {
        let mut signs = vec![0.0; p];
        let mut c = code;
        for s in signs.iter_mut() {
            *s = [0.0, 1.0, -1.0][c % 3];
            c /= 3;
        }
        let cols: Vec<usize> = (0..p).filter(|&j| signs[j] != 0.0).collect();
        if cols.is_empty() {
            continue;
        }
        let xs = data.x().select_columns(&cols);
        let s = DVector::from_iterator(cols.len(), cols.iter().map(|&j| signs[j]));
        let Some(chol) = xs.tr_mul(&xs).cholesky() else {
            continue;
        };
        let sol = chol.solve(&(xs.tr_mul(data.y()) - s.scale(nf * lambda)));
        if sol.iter().zip(s.iter()).any(|(b, s)| b * s <= 0.0) {
            continue;
        }
        let mut b = DVector::zeros(p);
        for (k, &j) in cols.iter().enumerate() {
            b[j] = sol[k];
        }
        best = best.min(obj(&b));
    }
    // dense grid around the OLS-scale box
    let half = data.y().norm() / nf.sqrt() * 2.0;
    let steps = 40usize;
    let mut idx = vec![0usize; p];
    loop {
        let b = DVector::from_iterator(p, idx.iter().map(|&i| -half + 2.0 * half * i as f64 / steps as f64));
        best = best.min(obj(&b));
        let mut k = 0;
        while k < p {
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == p {
            break;
        }
    }
    best
}

fn solver_oracle(t: &mut Tally, count: usize, rng: &mut SimRng) -> Result<()> {
    while t.cases < count {
        let p = rng.random_range(1..=3);
        let n = rng.random_range(p + 3..=20);
        let data = random_problem(rng, n, p)?;
        let lambda = lambda_max(&data) * rng.random_range(0.005..1.0);
        let fit = lasso_at(&data, lambda)?;
        let oracle = lasso_oracle(&data, lambda);
        let gap = (fit.objective - oracle).abs();
        let kkt = kkt_violation(&data, lambda, &fit.beta);
        let margin = (-gap).min(-kkt);
        t.record(margin, || {
            format!(
                "n={n} p={p} lambda={lambda:e} cd={:e} oracle={oracle:e} kkt={kkt:e}",
                fit.objective
            )
        });
    }
    Ok(())
}

/// Minimizer of `½(z − b)² + P_λ(b)` by dense grid plus golden-section
/// refinement around the best grid point.
fn scalar_oracle(z: f64, lambda: f64, penalty: Penalty) -> f64 {
    let f = |b: f64| 0.5 * (z - b).powi(2) + penalty_value(b, lambda, penalty);
    let half = z.abs() + lambda + 1.0;
    let steps = 20_000;
    let h = 2.0 * half / steps as f64;
    let mut best = -half;
    for i in 0..=steps {
        let b = -half + h * i as f64;
        if f(b) < f(best) {
            best = b;
        }
    }
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    // the kink at zero can sit inside the bracket
    if f(0.0) <= f(mid) {
        0.0
    } else {
        mid
    }
}

fn nonconvex(t: &mut Tally, count: usize, rng: &mut SimRng) {
    while t.cases < count {
        let lambda = rng.random_range(0.05..3.0);
        let penalty = if t.cases.is_multiple_of(2) {
            Penalty::Scad {
                gamma: rng.random_range(2.2..6.0),
            }
        } else {
            Penalty::Mcp {
                gamma: rng.random_range(1.2..6.0),
            }
        };
        let z = rng.random_range(-8.0..8.0) * lambda;
        let exact = nonconvex_threshold(z, lambda, penalty);
        let oracle = scalar_oracle(z, lambda, penalty);
        let err = (exact - oracle).abs();
        t.record(-err, || {
            format!("z={z:e} lambda={lambda:e} penalty={penalty:?} update={exact:e} oracle={oracle:e}")
        });
    }
}

fn alpha_optimality(t: &mut Tally, count: usize, rng: &mut SimRng) -> Result<()> {
    while t.cases < count {
        let n = rng.random_range(10..=80);
        let p = rng.random_range(1..=40);
        let data = random_problem(rng, n, p)?;
        let lambda = lambda_max(&data) * rng.random_range(0.01..1.0);
        let penalty = match t.cases % 3 {
            0 => Penalty::Lasso,
            1 => Penalty::scad(),
            _ => Penalty::mcp(),
        };
        let fit = match coordinate_descent(&data, lambda, penalty, None, CdOptions::default()) {
            Ok(f) => f,
            Err(Error::NotConverged { last, .. }) => *last,
            Err(e) => return Err(e),
        };
        if fit.support.is_empty() {
            continue;
        }
        let af = alpha_modify(&data, &fit)?;
        let plain = (data.y() - &fit.fitted).norm();
        let modified = (data.y() - &af.fitted_mod).norm();
        t.record(plain - modified, || {
            format!("n={n} p={p} lambda={lambda:e} plain={plain:e} modified={modified:e}")
        });
    }
    Ok(())
}

/// Median `‖α̂β̂ − β*‖₂` over `reps` replications for each sample size.
pub fn consistency_medians(reps: usize, seed: u64) -> Result<Vec<(usize, f64)>> {
    let mut rng = rng::stream(seed, Property::ConsistencyTrend as u64);
    consistency_medians_with(reps, &mut rng)
}

fn consistency_medians_with(reps: usize, rng: &mut SimRng) -> Result<Vec<(usize, f64)>> {
    let p = 10;
    let beta_star = DVector::from_vec(vec![2.0, -1.5, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let lambda0 = 2.0;
    let mut out = Vec::new();
    for n in [200usize, 800, 3200] {
        let lambda = lambda0 / (n as f64).sqrt();
        let mut errs = Vec::with_capacity(reps);
        for _ in 0..reps {
            let x = gen_design(n, p, Covariance::Identity, rng);
            let y = &x * &beta_star + DVector::from_fn(n, |_, _| normal(rng));
            let data = standardize(&RawData::new(y, x)?)?;
            let fit = lasso_at(&data, lambda)?;
            let alpha = if fit.support.is_empty() {
                1.0
            } else {
                alpha_hat(data.y(), &fit.fitted)?
            };
            let (_, slopes) = data.coefficients_to_raw(&(&fit.beta * alpha));
            errs.push((slopes - &beta_star).norm());
        }
        errs.sort_by(f64::total_cmp);
        let m = errs.len();
        let median = if m % 2 == 1 {
            errs[m / 2]
        } else {
            0.5 * (errs[m / 2 - 1] + errs[m / 2])
        };
        out.push((n, median));
    }
    Ok(out)
}

fn consistency_trend(t: &mut Tally, reps: usize, rng: &mut SimRng) -> Result<()> {
    let medians = consistency_medians_with(reps.max(1), rng)?;
    for w in medians.windows(2) {
        let ((n0, m0), (n1, m1)) = (w[0], w[1]);
        t.record(m0 - m1, || format!("median error {m0:e} at n={n0} < {m1:e} at n={n1}"));
    }
    Ok(())
}
