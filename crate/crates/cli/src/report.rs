//! Comparison of observed (Monte-Carlo or quadrature) values against
//! asymptotic predictions, and report serialization.

use tailsup_core::RiskParams;

use crate::error::{Result, SimError};
use crate::mc::{mc_ruin, Estimator, ExperimentConfig};
use crate::quad::{quadrature_ruin_bm, EndpointDensity};
use crate::subordinator::SubordinatorSpec;

/// One observed-vs-predicted row of a ratio experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub u: f64,
    pub observed: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub ci_low_ratio: f64,
    pub ci_high_ratio: f64,
    pub estimator: String,
    pub seed: u64,
}

/// Log-slope regression summary against a target rate constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeReport {
    pub u_min: f64,
    pub u_max: f64,
    pub fitted_slope: f64,
    pub target_constant: f64,
    pub rel_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Endpoint density implied by a subordinator spec at horizon `T`, for the
/// quadrature estimator.
pub fn density_for(spec: &SubordinatorSpec, t: f64) -> Result<EndpointDensity> {
    match spec {
        SubordinatorSpec::GammaProc { nu } => Ok(EndpointDensity::Gamma { shape: t / nu }),
        SubordinatorSpec::CompoundPoisson { mu: _, jump } => {
            let crate::subordinator::JumpDist::Pareto { lambda_plus_one, x_min } = *jump;
            Ok(EndpointDensity::Pareto { lambda_plus_one, x_min })
        }
        SubordinatorSpec::Deterministic { rate } => {
            Ok(EndpointDensity::PointMass { y0: rate * t })
        }
        SubordinatorSpec::EndpointOnly { .. } => Err(SimError::UnsupportedSpec(
            "endpoint-only spec has no analytic density",
        )),
    }
}

/// One row per threshold: observed value from the configured estimator,
/// predicted value from the supplied asymptotic evaluator.
pub fn run_ratio_experiment<P: Fn(f64) -> f64>(
    config: &ExperimentConfig,
    predict: P,
) -> Result<Vec<RatioRow>> {
    config.validate()?;
    let label = match config.estimator {
        Estimator::PlainMC => "plain-mc",
        Estimator::ConditionalMC => "conditional-mc",
        Estimator::QuadratureBM => "quadrature-bm",
    };
    let mut rows = Vec::with_capacity(config.u_list.len());
    for &u in &config.u_list {
        let (observed, ci_low, ci_high) = match config.estimator {
            Estimator::QuadratureBM => {
                let density = density_for(&config.subordinator, config.t_horizon)?;
                let p = quadrature_ruin_bm(config.risk.c, &density, u)?.exp();
                (p, p, p)
            }
            _ => {
                let est = mc_ruin(config, u)?;
                (est.p_hat, est.ci_low, est.ci_high)
            }
        };
        let predicted = predict(u);
        if !(predicted > 0.0) {
            return Err(SimError::Domain("prediction must be positive"));
        }
        rows.push(RatioRow {
            u,
            observed,
            predicted,
            ratio: observed / predicted,
            ci_low_ratio: ci_low / predicted,
            ci_high_ratio: ci_high / predicted,
            estimator: label.to_string(),
            seed: config.seed,
        });
    }
    Ok(rows)
}

/// Ordinary least squares of `log observed` on `u^q`.
pub fn run_logslope_experiment(
    points: &[(f64, f64)],
    q: f64,
    target_constant: f64,
) -> Result<SlopeReport> {
    if points.len() < 4 {
        return Err(SimError::InsufficientPoints { needed: 4, got: points.len() });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(u, _)| u.powf(q)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(SimError::Domain("all regressor values identical"));
    }
    let fitted_slope = sxy / sxx;
    let k = target_constant;
    let rel_error = (fitted_slope + k).abs() / k.abs();
    let (u_min, u_max) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &(u, _)| {
        (acc.0.min(u), acc.1.max(u))
    });
    Ok(SlopeReport { u_min, u_max, fitted_slope, target_constant, rel_error })
}

/// Observed log-probabilities for a log-slope experiment, from quadrature.
pub fn quadrature_log_observations(
    risk: &RiskParams,
    spec: &SubordinatorSpec,
    t: f64,
    u_list: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if risk.alpha != 1.0 || risk.theta != 1.0 {
        return Err(SimError::Domain("quadrature observations need alpha = theta = 1"));
    }
    let density = density_for(spec, t)?;
    u_list
        .iter()
        .map(|&u| Ok((u, quadrature_ruin_bm(risk.c, &density, u)?)))
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize rows as CSV or JSON; identical input yields byte-identical
/// output, and floats carry 17 significant digits so parsing round-trips.
pub fn render_report(rows: &[RatioRow], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(SimError::Domain("no rows to render"));
    }
    match format {
        ReportFormat::Csv => {
            let mut out = String::from("u,observed,predicted,ratio,ci_low,ci_high,estimator,seed\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt_float(r.u),
                    fmt_float(r.observed),
                    fmt_float(r.predicted),
                    fmt_float(r.ratio),
                    fmt_float(r.ci_low_ratio),
                    fmt_float(r.ci_high_ratio),
                    r.estimator,
                    r.seed
                ));
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let mut out = String::from("[\n");
            for (i, r) in rows.iter().enumerate() {
                out.push_str(&format!(
                    "  {{\"u\": {}, \"observed\": {}, \"predicted\": {}, \"ratio\": {}, \
                     \"ci_low\": {}, \"ci_high\": {}, \"estimator\": \"{}\", \"seed\": {}}}{}\n",
                    fmt_float(r.u),
                    fmt_float(r.observed),
                    fmt_float(r.predicted),
                    fmt_float(r.ratio),
                    fmt_float(r.ci_low_ratio),
                    fmt_float(r.ci_high_ratio),
                    r.estimator,
                    r.seed,
                    if i + 1 < rows.len() { "," } else { "" }
                ));
            }
            out.push_str("]\n");
            Ok(out)
        }
    }
}

/// Render a slope report in the requested format.
pub fn render_slope_report(report: &SlopeReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => format!(
            "u_min,u_max,fitted_slope,target_constant,rel_error\n{},{},{},{},{}\n",
            fmt_float(report.u_min),
            fmt_float(report.u_max),
            fmt_float(report.fitted_slope),
            fmt_float(report.target_constant),
            fmt_float(report.rel_error)
        ),
        ReportFormat::Json => format!(
            "{{\"u_min\": {}, \"u_max\": {}, \"fitted_slope\": {}, \
             \"target_constant\": {}, \"rel_error\": {}}}\n",
            fmt_float(report.u_min),
            fmt_float(report.u_max),
            fmt_float(report.fitted_slope),
            fmt_float(report.target_constant),
            fmt_float(report.rel_error)
        ),
    }
}

/// Spearman rank correlation; ties get average-free dense ranks (inputs in
/// these experiments are strictly monotone grids, ties do not occur).
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let m = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        num += (a - m) * (b - m);
        dx += (a - m) * (a - m);
        dy += (b - m) * (b - m);
    }
    num / (dx * dy).sqrt()
}
