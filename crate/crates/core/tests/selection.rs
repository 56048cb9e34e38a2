use alphalasso::alphamod::snr_margin;
use alphalasso::data::{standardize, Covariance, RawData, StandardizedData};
use alphalasso::rng;
use alphalasso::select::{
    cv_evaluate, fold_metrics, ic_select, make_folds, select, Criterion, CvGrid, Metric, Rule,
    SelectionRule,
};
use alphalasso::simlab::{gen_beta, gen_design, gen_errors, ErrorDist};
use alphalasso::solver::{default_lambda_grid, fit_path, lambda_max, CdOptions, Penalty};
use nalgebra::{DMatrix, DVector};

fn problem(seed: u64, n: usize, p: usize, beta: &DVector<f64>, sigma: f64) -> StandardizedData {
    let mut r = rng::stream(seed, 0);
    let x = gen_design(n, p, Covariance::Identity, &mut r);
    let y = &x * beta + gen_errors(n, sigma, ErrorDist::Gaussian, &mut r);
    standardize(&RawData::new(y, x).unwrap()).unwrap()
}

fn selected_support(d: &StandardizedData, rule: SelectionRule, seed: u64) -> Vec<usize> {
    let grid = CvGrid::lambdas(default_lambda_grid(lambda_max(d)).unwrap());
    let plan = make_folds(d.n(), 10, seed).unwrap();
    let opts = CdOptions::default();
    let table = cv_evaluate(d, &grid, &plan, Penalty::Lasso, opts).unwrap();
    let idx = select(&table, rule).unwrap();
    table.full_fit(d, idx, opts).unwrap().support.indices().to_vec()
}

#[test]
fn null_data_one_se_selects_empty_model() {
    let beta = DVector::zeros(10);
    let mut empty = 0;
    for seed in 0..100 {
        let d = problem(1000 + seed, 50, 10, &beta, 1.0);
        let rule = SelectionRule {
            metric: Metric::Ape,
            rule: Rule::OneSe,
        };
        empty += usize::from(selected_support(&d, rule, seed).is_empty());
    }
    assert!(empty >= 90, "empty support in {empty} of 100 seeds");
}

#[test]
fn toy_design_min_ape_oversizes_and_ar2_recovers() {
    let beta = DVector::from_fn(100, |j, _| if j < 5 { 50.0 } else { 0.0 });
    let truth: Vec<usize> = (0..5).collect();
    let (mut superset, mut exact, seeds) = (0, 0, 20);
    for seed in 0..seeds {
        let d = problem(2000 + seed, 100, 100, &beta, 1.0);
        let min_ape = selected_support(
            &d,
            SelectionRule {
                metric: Metric::Ape,
                rule: Rule::Min,
            },
            seed,
        );
        let ar2 = selected_support(
            &d,
            SelectionRule {
                metric: Metric::Ar2,
                rule: Rule::OneSe,
            },
            seed,
        );
        superset += usize::from(truth.iter().all(|j| min_ape.contains(j)) && min_ape.len() > 5);
        exact += usize::from(ar2 == truth);
    }
    assert!(superset >= 18, "min-APE strict superset in {superset} of {seeds}");
    assert!(exact * 2 > seeds as usize, "AR2-1SE exact in {exact} of {seeds}");
}

#[test]
fn bic_is_sparser_than_aic() {
    let (mut sparser, mut no_denser) = (0, 0);
    for seed in 0..100 {
        let mut r = rng::stream(3000 + seed, 1);
        let beta = gen_beta(40, 5, &mut r);
        let d = problem(3000 + seed, 100, 40, &beta, 1.0);
        let grid = default_lambda_grid(lambda_max(&d)).unwrap();
        let path = fit_path(&d, &grid, Penalty::Lasso, CdOptions::default()).unwrap();
        let size = |c| path.supports[ic_select(&d, &path, c, Some(1.0)).unwrap().index].len();
        let (bic, aic) = (size(Criterion::Bic), size(Criterion::Aic));
        sparser += usize::from(bic < aic);
        no_denser += usize::from(bic <= aic);
    }
    assert_eq!(no_denser, 100);
    assert!(sparser >= 80, "BIC strictly sparser in {sparser} of 100");
}

#[test]
fn leave_one_out_ar2_is_rejected() {
    let d = problem(4000, 12, 3, &DVector::from_vec(vec![1.0, 0.0, -1.0]), 1.0);
    let grid = CvGrid::lambdas(default_lambda_grid(lambda_max(&d)).unwrap());
    let plan = make_folds(12, 12, 0).unwrap();
    let err = cv_evaluate(&d, &grid, &plan, Penalty::Lasso, CdOptions::default()).unwrap_err();
    assert!(matches!(err, alphalasso::Error::BadFoldSizeForAR2 { .. }), "{err}");
}

#[test]
fn direction_recovering_shrinkage_favours_modified_ape() {
    // half the OLS estimate: ‖β̂‖ ≈ α*/2 gives a left side of 4 against ‖Xβ*‖² = 100
    let (n, p) = (60, 3);
    let mut r = rng::stream(5000, 0);
    let x = gen_design(n, p, Covariance::Identity, &mut r);
    let d = standardize(&RawData::new(DVector::zeros(n), x).unwrap()).unwrap();
    let xs: DMatrix<f64> = d.x().clone();
    let dir = DVector::from_vec(vec![1.0, -2.0, 0.5]);
    let beta = &dir * (10.0 / (&xs * &dir).norm());
    let samples = vec![beta.norm() / 2.0; 10];
    let margin = snr_margin(&d, &beta, 1.0, &samples).unwrap();
    assert!((margin.lhs - 4.0).abs() < 1e-9, "{}", margin.lhs);
    assert!((margin.rhs - 100.0).abs() < 1e-9, "{}", margin.rhs);
    assert!(margin.holds());

    let (mut ape, mut modape) = (0.0, 0.0);
    let folds = 500;
    let svd = xs.clone().svd(true, true);
    for _ in 0..folds {
        let y_train = &xs * &beta + gen_errors(n, 1.0, ErrorDist::Gaussian, &mut r);
        let est = svd.solve(&y_train, 1e-12).unwrap() * 0.5;
        let fitted = &xs * &est;
        let alpha = fitted.dot(&y_train) / fitted.norm_squared();
        let y_val = &xs * &beta + gen_errors(n, 1.0, ErrorDist::Gaussian, &mut r);
        let m = fold_metrics(&y_val, &fitted, Some(alpha)).unwrap();
        ape += m.ape;
        modape += m.modape;
    }
    assert!(modape < ape, "mean Mod-APE {} vs APE {}", modape / folds as f64, ape / folds as f64);
}
