//! Experiment config files.
//!
//! ```text
//! # comment
//! [experiment]
//! reps = 100
//! seed = 7
//!
//! [design]
//! n = 100
//! p = 100
//! p_star = 5
//! snr = 5
//! cov = identity          # or compound-symmetric, with rho = 0.75
//! error_dist = gaussian   # or laplace
//!
//! [selection]
//! k_folds = 10
//!
//! [methods]
//! lasso-ape-onese
//! lasso-ar2-onese
//! ```
//!
//! Keys before the first section header may come from any section.

use std::str::FromStr;

use alphalasso::data::Covariance;
use alphalasso::simlab::{MethodSpec, SimConfig};
use alphalasso::{Error, Result};

const SECTIONS: [(&str, &[&str]); 4] = [
    ("experiment", &["reps", "seed"]),
    (
        "design",
        &[
            "n",
            "p",
            "p_star",
            "snr",
            "cov",
            "rho",
            "error_dist",
            "beta_value",
            "sigma",
            "fixed_design",
        ],
    ),
    ("selection", &["k_folds", "phi_count"]),
    ("methods", &["methods"]),
];

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

fn value<T: FromStr>(field: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| config_err(field, format!("cannot parse `{v}`")))
}

fn strip_comment(line: &str) -> &str {
    line.split(['#', ';']).next().unwrap_or("").trim()
}

/// Parse a config file. Syntax errors are [`Error::Parse`] with the line
/// number; unknown keys and bad values are [`Error::Config`]. The result is
/// not yet validated.
pub fn parse(text: &str) -> Result<SimConfig> {
    let mut cfg = SimConfig::new(0, 0, 0, 0.0);
    let mut n = None;
    let mut p = None;
    let mut cov_name: Option<String> = None;
    let mut rho = 0.75;
    let mut section: Option<&str> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
                line: line_no,
                reason: format!("unterminated section header `{line}`"),
            })?;
            let name = name.trim().to_ascii_lowercase();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .map(|(s, _)| *s)
                    .ok_or_else(|| config_err("section", format!("unknown section `[{name}]`")))?,
            );
            continue;
        }
        let Some((key, val)) = line.split_once('=') else {
            if section == Some("methods") {
                cfg.methods.push(line.parse::<MethodSpec>()?);
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim().to_ascii_lowercase();
        let val = val.trim();
        let allowed = match section {
            Some(s) => SECTIONS.iter().find(|(n, _)| *n == s).unwrap().1.contains(&key.as_str()),
            None => SECTIONS.iter().any(|(_, keys)| keys.contains(&key.as_str())),
        };
        if !allowed {
            return Err(config_err(
                &key,
                match section {
                    Some(s) => format!("unknown key in section [{s}]"),
                    None => "unknown key".to_string(),
                },
            ));
        }
        match key.as_str() {
            "reps" => cfg.reps = value(&key, val)?,
            "seed" => cfg.seed = value(&key, val)?,
            "n" => n = Some(value(&key, val)?),
            "p" => p = Some(value(&key, val)?),
            "p_star" => cfg.p_star = value(&key, val)?,
            "snr" => cfg.snr = value(&key, val)?,
            "cov" => cov_name = Some(val.to_ascii_lowercase()),
            "rho" => rho = value(&key, val)?,
            "error_dist" => cfg.error_dist = val.parse()?,
            "beta_value" => cfg.beta_value = Some(value(&key, val)?),
            "sigma" => cfg.sigma = Some(value(&key, val)?),
            "fixed_design" => cfg.fixed_design = value(&key, val)?,
            "k_folds" => cfg.k_folds = value(&key, val)?,
            "phi_count" => cfg.phi_count = value(&key, val)?,
            "methods" => {
                for m in val.split(',').map(str::trim).filter(|m| !m.is_empty()) {
                    cfg.methods.push(m.parse()?);
                }
            }
            _ => unreachable!("key checked against SECTIONS"),
        }
    }

    cfg.n = n.ok_or_else(|| config_err("n", "missing"))?;
    cfg.p = p.ok_or_else(|| config_err("p", "missing"))?;
    cfg.cov = match cov_name.as_deref() {
        None | Some("identity") => Covariance::Identity,
        Some("compound-symmetric") | Some("compound_symmetric") | Some("cs") => {
            Covariance::CompoundSymmetric { rho }
        }
        Some(other) => return Err(config_err("cov", format!("unknown covariance `{other}`"))),
    };
    Ok(cfg)
}

/// Resolved config as `(key, value)` pairs, in file order.
pub fn resolved(cfg: &SimConfig) -> Vec<(&'static str, String)> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "none".into());
    let (cov, rho) = match cfg.cov {
        Covariance::Identity => ("identity", None),
        Covariance::CompoundSymmetric { rho } => ("compound-symmetric", Some(rho)),
    };
    let mut out = vec![
        ("seed", cfg.seed.to_string()),
        ("reps", cfg.reps.to_string()),
        ("n", cfg.n.to_string()),
        ("p", cfg.p.to_string()),
        ("p_star", cfg.p_star.to_string()),
        ("snr", cfg.snr.to_string()),
        ("cov", cov.to_string()),
    ];
    if let Some(r) = rho {
        out.push(("rho", r.to_string()));
    }
    out.extend([
        ("error_dist", format!("{:?}", cfg.error_dist).to_ascii_lowercase()),
        ("beta_value", opt(cfg.beta_value)),
        ("sigma", opt(cfg.sigma)),
        ("fixed_design", cfg.fixed_design.to_string()),
        ("k_folds", cfg.k_folds.to_string()),
        ("phi_count", cfg.phi_count.to_string()),
        (
            "methods",
            cfg.methods
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        ),
    ]);
    out
}
