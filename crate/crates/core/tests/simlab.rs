use alphalasso::data::{Covariance, RawData};
use alphalasso::rng;
use alphalasso::select::{Metric, Rule};
use alphalasso::simlab::{
    gen_beta, gen_design, gen_errors, gen_response, prediction_bias, run_experiment, ErrorDist,
    MethodSpec, SimConfig,
};
use alphalasso::solver::Penalty;
use nalgebra::{DMatrix, DVector};

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

fn moments(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    (m, var, m4 / (var * var) - 3.0)
}

#[test]
fn identity_design_is_uncorrelated() {
    let mut r = rng::stream(1, 0);
    let x = gen_design(10_000, 2, Covariance::Identity, &mut r);
    let c = correlation(x.column(0).as_slice(), x.column(1).as_slice());
    assert!(c.abs() <= 0.03, "{c}");
}

#[test]
fn compound_symmetric_design_has_target_correlation() {
    let mut r = rng::stream(2, 0);
    let x = gen_design(10_000, 4, Covariance::CompoundSymmetric { rho: 0.75 }, &mut r);
    for i in 0..4 {
        let (_, var, _) = moments(x.column(i).as_slice());
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
        for j in 0..i {
            let c = correlation(x.column(i).as_slice(), x.column(j).as_slice());
            assert!((c - 0.75).abs() <= 0.03, "{c}");
        }
    }
}

#[test]
fn single_column_designs_coincide() {
    let a = gen_design(50, 1, Covariance::Identity, &mut rng::stream(3, 0));
    let b = gen_design(50, 1, Covariance::CompoundSymmetric { rho: 0.75 }, &mut rng::stream(3, 0));
    for (u, v) in a.iter().zip(b.iter()) {
        assert!((u - v).abs() < 1e-12);
    }
}

#[test]
fn gamma_magnitudes_and_balanced_signs() {
    let mut r = rng::stream(4, 0);
    let draws = 100_000;
    let (mut sum, mut pos) = (0.0, 0usize);
    for _ in 0..draws / 10 {
        let b = gen_beta(12, 10, &mut r);
        assert!(b.rows(10, 2).iter().all(|v| *v == 0.0));
        for v in b.rows(0, 10).iter() {
            sum += v.abs();
            pos += usize::from(*v > 0.0);
        }
    }
    let mean = sum / draws as f64;
    let frac = pos as f64 / draws as f64;
    assert!((mean - 2.5).abs() <= 0.02, "mean |beta| {mean}");
    assert!((frac - 0.5).abs() <= 0.01, "positive fraction {frac}");
    assert!(gen_beta(7, 0, &mut r).iter().all(|v| *v == 0.0));
}

#[test]
fn error_moments() {
    let mut r = rng::stream(5, 0);
    let g = gen_errors(100_000, 2.0, ErrorDist::Gaussian, &mut r);
    let (_, var, _) = moments(g.as_slice());
    assert!((var - 4.0).abs() <= 0.1, "gaussian variance {var}");
    let l = gen_errors(100_000, 2.0, ErrorDist::Laplace, &mut r);
    let (_, var, kurt) = moments(l.as_slice());
    assert!((var - 4.0).abs() <= 0.15, "laplace variance {var}");
    assert!((kurt - 3.0).abs() <= 0.3, "laplace excess kurtosis {kurt}");
}

#[test]
fn noiseless_response_is_the_signal() {
    let mut r = rng::stream(6, 0);
    let x = gen_design(20, 5, Covariance::Identity, &mut r);
    let b = gen_beta(5, 3, &mut r);
    let y = gen_response(&x, &b, 0.0, ErrorDist::Gaussian, &mut r);
    assert_eq!(y, &x * &b);
}

#[test]
fn prediction_bias_matches_direct_norm() {
    let mut r = rng::stream(7, 0);
    let x = gen_design(30, 6, Covariance::Identity, &mut r);
    let b = gen_beta(6, 3, &mut r);
    let h = gen_beta(6, 4, &mut r);
    let diff = &x * &b - &x * &h;
    let direct = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((prediction_bias(&x, &b, &h).unwrap() - direct).abs() < 1e-12);
    assert_eq!(prediction_bias(&x, &b, &b).unwrap(), 0.0);
    let zero = DVector::zeros(6);
    assert!((prediction_bias(&x, &b, &zero).unwrap() - (&x * &b).norm()).abs() < 1e-12);
}

fn small_config(seed: u64) -> SimConfig {
    let mut cfg = SimConfig::new(50, 30, 4, 3.0);
    cfg.reps = 8;
    cfg.seed = seed;
    cfg.k_folds = 5;
    cfg.methods = vec![
        MethodSpec::cv(Penalty::Lasso, Metric::Ape, Rule::OneSe),
        MethodSpec::cv(Penalty::Lasso, Metric::Ar2, Rule::Min),
        "ic-bic".parse().unwrap(),
    ];
    cfg
}

#[test]
fn experiments_are_bit_reproducible() {
    // wall-clock runtimes are the only field allowed to differ
    let strip = |mut e: alphalasso::simlab::Experiment| {
        for rep in &mut e.replications {
            for o in rep.outcomes.iter_mut().flatten() {
                o.runtime_ms = 0.0;
            }
        }
        e
    };
    let a = strip(run_experiment(&small_config(8)).unwrap());
    let b = strip(run_experiment(&small_config(8)).unwrap());
    assert_eq!(a, b);
    let c = run_experiment(&small_config(9)).unwrap();
    assert_ne!(a.summary, c.summary);
}

#[test]
fn outcome_invariants_hold() {
    let exp = run_experiment(&small_config(10)).unwrap();
    assert!(exp.failures().is_empty());
    for rep in &exp.replications {
        for o in rep.outcomes.iter().map(|o| o.as_ref().unwrap()) {
            let s = o.support;
            assert_eq!(s.hd, s.false_pos + s.false_neg);
            assert!((0.0..=1.0).contains(&s.fdr));
            assert_eq!(s.fdr, s.false_pos as f64 / s.size.max(1) as f64);
            assert!(o.pb >= 0.0);
        }
    }
}

#[test]
fn methods_share_each_replication() {
    // an IC method listed twice sees identical data, so its outcomes agree
    let mut cfg = small_config(11);
    cfg.methods = vec!["ic-aic".parse().unwrap(), "ic-aic".parse().unwrap()];
    let exp = run_experiment(&cfg).unwrap();
    for rep in &exp.replications {
        let a = rep.outcomes[0].as_ref().unwrap();
        let b = rep.outcomes[1].as_ref().unwrap();
        assert_eq!((a.support, a.pb, a.lambda), (b.support, b.pb, b.lambda));
    }
}

#[test]
fn doubling_signal_and_noise_keeps_support_metrics() {
    let run = |scale: f64| {
        let mut cfg = SimConfig::new(40, 20, 3, 1.0);
        cfg.reps = 200;
        cfg.seed = 12;
        cfg.k_folds = 5;
        cfg.beta_value = Some(1.5 * scale);
        cfg.sigma = Some(1.0 * scale);
        cfg.methods = vec![MethodSpec::cv(Penalty::Lasso, Metric::Ar2, Rule::OneSe)];
        let exp = run_experiment(&cfg).unwrap();
        let row = exp.row("lasso-ar2-onese", "hd").unwrap().clone();
        (row.mean, row.se)
    };
    let (m1, s1) = run(1.0);
    let (m2, s2) = run(2.0);
    let pooled = (s1 * s1 + s2 * s2).sqrt();
    assert!((m1 - m2).abs() < 2.0 * pooled.max(1e-12), "{m1} vs {m2}, pooled se {pooled}");
}

#[test]
fn single_replication_reports_zero_se() {
    let mut cfg = small_config(13);
    cfg.reps = 1;
    let exp = run_experiment(&cfg).unwrap();
    assert!(exp.summary.iter().all(|r| r.se == 0.0 && r.degenerate));
}

#[test]
fn generated_data_standardizes() {
    let mut r = rng::stream(14, 0);
    let x: DMatrix<f64> = gen_design(25, 4, Covariance::Identity, &mut r);
    let y = gen_response(&x, &gen_beta(4, 2, &mut r), 1.0, ErrorDist::Laplace, &mut r);
    let d = alphalasso::data::standardize(&RawData::new(y, x).unwrap()).unwrap();
    for j in 0..4 {
        let ss: f64 = d.column(j).iter().map(|v| v * v).sum();
        assert!((ss - 25.0).abs() < 1e-10);
    }
}
