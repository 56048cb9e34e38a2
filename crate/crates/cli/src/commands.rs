use std::fs::File;

use alphalasso::alphamod::alpha_modify;
use alphalasso::data::{read_csv, standardize, CsvData, ResponseColumn, StandardizedData};
use alphalasso::select::{cv_evaluate, make_folds, select, CvGrid, SelectionRule};
use alphalasso::simlab::{run_experiment, MethodSpec};
use alphalasso::solver::{
    coordinate_descent, default_lambda_grid, fit_path, lambda_max, log_spaced, relaxed_from_fit,
    stationarity_violation, CdOptions, FitResult, Penalty, DEFAULT_MCP_GAMMA, DEFAULT_SCAD_GAMMA,
};
use alphalasso::verify::{run_property, Fault, Property, VerifyOptions};
use alphalasso::Error;

use crate::config;
use crate::failure::{Failure, WithCode, CONFIG, PROPERTY, USAGE};
use crate::header::{emit, Header};
use crate::{CvArgs, DataArgs, FaultKind, FitArgs, PathArgs, PenaltyArgs, PenaltyKind};
use crate::{SimulateArgs, VerifyArgs};

/// Experiments above this many `reps · n · p · methods` need `--full`.
const SIZE_LIMIT: f64 = 2e8;

fn load(args: &DataArgs) -> Result<(CsvData, StandardizedData), Failure> {
    let file = File::open(&args.data)
        .map_err(|e| anyhow::anyhow!("{}: {e}", args.data.display()))
        .code(USAGE)?;
    let response = match &args.response {
        Some(name) => ResponseColumn::Named(name.clone()),
        None => ResponseColumn::Last,
    };
    let csv = read_csv(file, &response)
        .map_err(|e| Failure::new(USAGE, anyhow::Error::new(e).context(args.data.display().to_string())))?;
    let data = standardize(&csv.raw)?;
    Ok((csv, data))
}

fn penalty(args: &PenaltyArgs, phi: Option<f64>) -> Result<Penalty, Failure> {
    let p = match args.penalty {
        PenaltyKind::Lasso => Penalty::Lasso,
        PenaltyKind::Relaxed => Penalty::RelaxedLasso {
            phi: phi.unwrap_or(1.0),
        },
        PenaltyKind::Scad => Penalty::Scad {
            gamma: args.gamma.unwrap_or(DEFAULT_SCAD_GAMMA),
        },
        PenaltyKind::Mcp => Penalty::Mcp {
            gamma: args.gamma.unwrap_or(DEFAULT_MCP_GAMMA),
        },
    };
    p.validate()?;
    Ok(p)
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn describe(p: Penalty) -> String {
    match p {
        Penalty::Lasso => "lasso".into(),
        Penalty::RelaxedLasso { phi } => format!("relaxed (phi = {phi})"),
        Penalty::Scad { gamma } => format!("scad (gamma = {gamma})"),
        Penalty::Mcp { gamma } => format!("mcp (gamma = {gamma})"),
    }
}

fn data_header(h: &mut Header, args: &DataArgs, csv: &CsvData, data: &StandardizedData) {
    h.kv("data", args.data.display())
        .kv("response", &csv.response_name)
        .kv("n", data.n())
        .kv("p", data.p())
        .kv("lambda_max", num(lambda_max(data)));
}

fn support_names(csv: &CsvData, fit: &FitResult) -> String {
    fit.support
        .indices()
        .iter()
        .map(|&j| csv.names[j].as_str())
        .collect::<Vec<_>>()
        .join(";")
}

fn single_fit(data: &StandardizedData, lambda: f64, penalty: Penalty) -> Result<FitResult, Failure> {
    let opts = CdOptions::default();
    Ok(match penalty {
        Penalty::RelaxedLasso { phi } => {
            let base = coordinate_descent(data, lambda, Penalty::Lasso, None, opts)?;
            if base.support.is_empty() {
                base
            } else {
                relaxed_from_fit(data, &base, phi, opts)?
            }
        }
        p => coordinate_descent(data, lambda, p, None, opts)?,
    })
}

fn csv_body(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w).code(USAGE)?;
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}")).code(USAGE)
}

pub fn fit(a: FitArgs) -> Result<(), Failure> {
    let (csv, data) = load(&a.data)?;
    if a.phi.is_some() && a.penalty.penalty != PenaltyKind::Relaxed {
        return Err(Failure::usage("--phi applies to the relaxed penalty only"));
    }
    let penalty = penalty(&a.penalty, a.phi)?;
    let lambda = match (a.lambda, a.lambda_frac) {
        (Some(l), _) => l,
        (None, Some(f)) => f * lambda_max(&data),
        (None, None) => unreachable!("clap requires one of --lambda, --lambda-frac"),
    };
    let fit = single_fit(&data, lambda, penalty)?;
    let modified = match alpha_modify(&data, &fit) {
        Ok(m) => Some(m),
        Err(Error::ZeroPredictions) => None,
        Err(e) => return Err(e.into()),
    };
    let (intercept, slopes) = data.coefficients_to_raw(&fit.beta);
    let raw_mod = modified
        .as_ref()
        .map(|m| data.coefficients_to_raw(&m.beta_mod));

    let mut h = Header::new("fit", a.output.deterministic);
    h.kv("seed", "none");
    data_header(&mut h, &a.data, &csv, &data);
    h.kv("penalty", describe(penalty))
        .kv("lambda", num(lambda))
        .kv("intercept", num(intercept));
    match &modified {
        Some(m) => h.kv("alpha", num(m.alpha)).kv("intercept_modified", num(raw_mod.as_ref().unwrap().0)),
        None => h.kv("alpha", "none (no active set)"),
    };
    h.kv("objective", num(fit.objective))
        .kv("kkt_violation", num(stationarity_violation(&data, &fit)))
        .kv("iterations", fit.n_iter)
        .kv("support_size", fit.support.len())
        .kv("support", support_names(&csv, &fit));

    let body = csv_body(|w| {
        let mut cols = vec!["predictor", "coefficient"];
        if raw_mod.is_some() {
            cols.push("alpha_modified");
        }
        cols.extend(["standardized", "active"]);
        w.write_record(&cols)?;
        for j in 0..data.p() {
            let mut row = vec![csv.names[j].clone(), num(slopes[j])];
            if let Some((_, m)) = &raw_mod {
                row.push(num(m[j]));
            }
            row.push(num(fit.beta[j]));
            row.push(fit.support.contains(j).to_string());
            w.write_record(&row)?;
        }
        Ok(())
    })?;
    emit(a.output.out.as_deref(), &h, &body)
}

pub fn path(a: PathArgs) -> Result<(), Failure> {
    let (csv, data) = load(&a.data)?;
    let penalty = penalty(&a.penalty, None)?;
    if let Penalty::RelaxedLasso { .. } = penalty {
        return Err(Failure::usage(
            "the relaxed Lasso has a two-dimensional grid; use `cv --penalty relaxed`",
        ));
    }
    let grid = default_lambda_grid(lambda_max(&data))?;
    let path = fit_path(&data, &grid, penalty, CdOptions::default())?;

    let mut h = Header::new("path", a.output.deterministic);
    h.kv("seed", "none");
    data_header(&mut h, &a.data, &csv, &data);
    h.kv("penalty", describe(penalty))
        .kv("grid", format!("lambda_max and {} log-spaced values below it", grid.len() - 1))
        .kv("points", path.len());
    if path.len() < grid.len() {
        h.kv("truncated", "support reached n - 1");
    }

    let body = csv_body(|w| {
        let mut cols = vec!["lambda".to_string(), "df".into(), "kkt".into()];
        cols.extend(csv.names.iter().cloned());
        w.write_record(&cols)?;
        for k in 0..path.len() {
            let fit = path.fit_at(&data, k);
            let (_, slopes) = data.coefficients_to_raw(&fit.beta);
            let mut row = vec![
                num(fit.lambda),
                fit.support.len().to_string(),
                num(stationarity_violation(&data, &fit)),
            ];
            row.extend(slopes.iter().map(|&b| num(b)));
            w.write_record(&row)?;
        }
        Ok(())
    })?;
    emit(a.output.out.as_deref(), &h, &body)
}

pub fn cv(a: CvArgs) -> Result<(), Failure> {
    let (csv, data) = load(&a.data)?;
    let penalty = penalty(&a.penalty, None)?;
    let relaxed = matches!(penalty, Penalty::RelaxedLasso { .. });
    if a.phi_count < 1 {
        return Err(Failure::usage("--phi-count must be positive"));
    }
    let grid = CvGrid {
        lambdas: default_lambda_grid(lambda_max(&data))?,
        phis: relaxed.then(|| log_spaced(-10.0, 0.0, a.phi_count)),
    };
    let plan = make_folds(data.n(), a.k, a.seed)?;
    let opts = CdOptions::default();
    let table = cv_evaluate(&data, &grid, &plan, penalty, opts)?;
    let rule = SelectionRule {
        metric: a.metric,
        rule: a.rule,
    };
    let idx = select(&table, rule)?;
    let fit = table.full_fit(&data, idx, opts)?;
    let point = table.points[idx];
    let stat = table.stats(a.metric)[idx];

    let mut summary = format!("selected lambda = {}", num(point.lambda));
    if let Some(phi) = point.phi {
        summary += &format!(", phi = {}", num(phi));
    }
    summary += &format!(
        "; {} = {} (se {}); support size {} [{}]",
        a.metric,
        num(stat.mean),
        num(stat.se),
        fit.support.len(),
        support_names(&csv, &fit)
    );

    let mut h = Header::new("cv", a.output.deterministic);
    h.kv("seed", a.seed);
    data_header(&mut h, &a.data, &csv, &data);
    h.kv("penalty", if relaxed { "relaxed".into() } else { describe(penalty) })
        .kv("metric", a.metric)
        .kv("rule", a.rule)
        .kv("k", a.k)
        .kv("lambda_points", grid.lambdas.len());
    if let Some(phis) = &grid.phis {
        h.kv("phi_points", phis.len());
    }
    h.kv("selection", &summary);

    let mut body = Vec::new();
    table.write_csv(&mut body)?;
    emit(a.output.out.as_deref(), &h, &body)?;
    if a.output.out.is_some() {
        println!("{summary}");
    }
    Ok(())
}

fn work_estimate(cfg: &alphalasso::simlab::SimConfig) -> f64 {
    let fits: usize = cfg
        .methods
        .iter()
        .map(|m| match m {
            MethodSpec::Cv { .. } => cfg.k_folds + 1,
            MethodSpec::Ic { .. } => 1,
        })
        .sum();
    cfg.reps as f64 * cfg.n as f64 * cfg.p as f64 * fits as f64
}

pub fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| anyhow::anyhow!("{}: {e}", a.config.display()))
        .code(USAGE)?;
    let mut cfg = config::parse(&text).map_err(|e| {
        let code = if matches!(e, Error::Parse { .. }) { USAGE } else { CONFIG };
        Failure::new(code, anyhow::Error::new(e).context(a.config.display().to_string()))
    })?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(r) = a.reps {
        cfg.reps = r;
    }
    cfg.validate().code(CONFIG)?;
    if !a.full && work_estimate(&cfg) > SIZE_LIMIT {
        return Err(Failure::new(
            CONFIG,
            anyhow::anyhow!(
                "invalid configuration field `reps`: about {:.1e} coordinate updates per sweep \
                 across all fits; pass --full to run experiments this large",
                work_estimate(&cfg)
            ),
        ));
    }

    let exp = run_experiment(&cfg)?;
    let failures = exp.failures();
    for (rep, method, msg) in &failures {
        eprintln!("replication {rep}: {method}: {msg}");
    }

    let mut h = Header::new("simulate", a.output.deterministic);
    h.kv("config", a.config.display());
    for (k, v) in config::resolved(&cfg) {
        h.kv(k, v);
    }
    h.kv("failures", failures.len());
    if exp.summary.iter().any(|r| r.degenerate) {
        h.kv("degenerate", "true (fewer than two replications for some method; se reported as 0)");
    }
    let mut body = Vec::new();
    exp.write_csv(&mut body)?;
    emit(a.output.out.as_deref(), &h, &body)?;

    if let Some(path) = &a.detail {
        let mut doc = serde_json::json!({
            "seed": cfg.seed,
            "config": config::resolved(&cfg).into_iter().map(|(k, v)| (k.to_string(), serde_json::Value::from(v))).collect::<serde_json::Map<_, _>>(),
            "replications": exp.replications,
            "summary": exp.summary,
        });
        if !a.output.deterministic {
            doc["generated"] = chrono::Utc::now().to_rfc3339().into();
        }
        let mut text = serde_json::to_string_pretty(&doc).code(USAGE)?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
            .code(USAGE)?;
    }
    Ok(())
}

pub fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let props = if a.property.is_empty() {
        Property::ALL.to_vec()
    } else {
        a.property.clone()
    };
    let opts = VerifyOptions {
        seed: a.seed,
        count: a.count,
        fault: match a.inject_fault {
            Some(FaultKind::FlipW2) => Fault::FlipW2Sign,
            None => Fault::None,
        },
    };
    println!("# seed = {}", opts.seed);
    let mut reports = Vec::new();
    for p in props {
        let r = run_property(p, &opts)?;
        println!(
            "{} {:<24} {:>6}/{:<6} worst margin {:+.3e}  ({:.0} ms)",
            if r.ok() { "PASS" } else { "FAIL" },
            r.property.name(),
            r.passed,
            r.cases,
            r.worst_margin,
            r.elapsed_ms
        );
        reports.push(r);
    }
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&serde_json::json!({
            "seed": opts.seed,
            "count": opts.count,
            "reports": reports,
        }))
        .code(USAGE)?;
        std::fs::write(path, text + "\n")
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
            .code(USAGE)?;
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.ok()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        eprintln!(
            "{} failed {} of {} cases; counterexample: {}",
            r.property.name(),
            r.cases - r.passed,
            r.cases,
            r.counterexample.as_deref().unwrap_or("none recorded")
        );
    }
    let names: Vec<&str> = failed.iter().map(|r| r.property.name()).collect();
    Err(Failure::new(
        PROPERTY,
        anyhow::anyhow!("properties failed: {}", names.join(", ")),
    ))
}
