//! Command-line interface: asymptotic evaluators, simulators, and
//! validation experiments.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure
//! (embedding / factorization / quadrature).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tailsup_core::{
    k1_asymptotic, laplace_motion_rates, prop1_asymptotic, prop2_lograte, prop34_lograte,
    risk_constants, thmlog_rate, thmt_asymptotic, DensitySpec, LocalStructure, OriginBehavior,
    Regime, RegimeResult, RiskParams, SigmaProfile, TailModel,
};

use crate::config::{load_config, parse_f64_list, resolve, resolve_str, ConfigMap};
use crate::error::{Result, SimError};
use crate::fbm::{sample_fbm_path, GridSpec};
use crate::mc::{mc_ruin, Estimator, ExperimentConfig};
use crate::report::{
    render_report, render_slope_report, run_logslope_experiment, run_ratio_experiment,
    quadrature_log_observations, ReportFormat,
};
use crate::subordinator::{endpoint_tail_model, JumpDist, SubordinatorSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tailsup", version, about = "Tail asymptotics and simulation toolkit")]
pub struct Cli {
    /// key=value config file (dotted sections); flags override file values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// write the report to this path instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form asymptotic evaluators
    #[command(subcommand)]
    Asym(AsymCmd),
    /// Risk-process constants and rates
    #[command(subcommand)]
    Risk(RiskCmd),
    /// Stochastic simulation
    #[command(subcommand)]
    Sim(SimCmd),
    /// Observed-vs-predicted validation experiments
    #[command(subcommand)]
    Validate(ValidateCmd),
}

#[derive(Subcommand, Debug)]
pub enum AsymCmd {
    /// Deterministic-interval tail asymptotics at the given thresholds
    K1(K1Args),
    /// Random-interval exact asymptotics with an endpoint tail factor
    #[command(name = "thmT")]
    ThmT(ThmTArgs),
    /// Logarithmic rate and regime for log-power interval tails
    Thmlog(ThmlogArgs),
}

#[derive(Args, Debug)]
pub struct K1Args {
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    pickands: Option<f64>,
    #[arg(long)]
    piterbarg: Option<f64>,
    /// comma-separated thresholds
    #[arg(long, short)]
    u: Option<String>,
}

#[derive(Args, Debug)]
pub struct ThmTArgs {
    #[command(flatten)]
    base: K1Args,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    tail: TailArgs,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    /// endpoint tail family: rv | weibull | logpower
    #[arg(long)]
    tail: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// exponential rate coefficient
    #[arg(long = "L")]
    rate: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

impl TailArgs {
    fn build(&self, map: &ConfigMap) -> Result<TailModel> {
        let family = resolve_str(self.tail.as_deref(), map, "tail.family", None)?;
        match family.as_str() {
            "rv" => Ok(TailModel::regularly_varying(resolve(
                self.lambda,
                map,
                "tail.lambda",
                None,
            )?)),
            "weibull" => Ok(TailModel::weibullian(
                resolve(self.p, map, "tail.p", None)?,
                resolve(self.rate, map, "tail.L", None)?,
                resolve(self.delta, map, "tail.delta", Some(0.0))?,
            )),
            "logpower" => Ok(TailModel::log_power(
                resolve(self.p, map, "tail.p", None)?,
                resolve(self.rate, map, "tail.L", None)?,
            )),
            other => Err(SimError::Config(format!("unknown tail family `{other}`"))),
        }
    }
}

#[derive(Args, Debug)]
pub struct ThmlogArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "L")]
    rate: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    /// constant standard deviation profile (origin value)
    #[arg(long)]
    sigma0: Option<f64>,
    /// power-law origin exponent (enables sigma(t) = coeff t^eta, capped)
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    coeff: Option<f64>,
    #[arg(long)]
    sigma_cap: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum RiskCmd {
    /// Variance-maximizer constants (s0, V0, Q)
    Constants(RiskBaseArgs),
    /// Exact ruin asymptotics at the given thresholds
    Prop1(Prop1Args),
    /// Logarithmic rate for a log-power endpoint tail
    Prop2(Prop2Args),
    /// Logarithmic rate for a discontinuous time change
    Prop34(Prop34Args),
    /// Fractional Laplace motion rates
    Laplace(LaplaceArgs),
}

#[derive(Args, Debug)]
pub struct RiskBaseArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
}

impl RiskBaseArgs {
    fn build(&self, map: &ConfigMap) -> Result<RiskParams> {
        Ok(RiskParams::new(
            resolve(self.alpha, map, "risk.alpha", None)?,
            resolve(self.theta, map, "risk.theta", Some(1.0))?,
            resolve(self.c, map, "risk.c", Some(1.0))?,
        )?)
    }
}

#[derive(Args, Debug)]
pub struct Prop1Args {
    #[command(flatten)]
    base: RiskBaseArgs,
    #[arg(long)]
    pickands: Option<f64>,
    #[command(flatten)]
    tail: TailArgs,
    #[arg(long, short)]
    u: Option<String>,
}

#[derive(Args, Debug)]
pub struct Prop2Args {
    #[command(flatten)]
    base: RiskBaseArgs,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "L")]
    rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct Prop34Args {
    #[command(flatten)]
    base: RiskBaseArgs,
    /// endpoint density family: rv | logpower
    #[arg(long)]
    density: Option<String>,
    #[arg(long)]
    lambda_plus_one: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "L")]
    rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LaplaceArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum SimCmd {
    /// One fractional Brownian motion path
    Fbm(FbmArgs),
    /// Pickands constant estimate
    Pickands(PickandsArgs),
    /// Piterbarg constant estimate
    Piterbarg(PiterbargArgs),
    /// Ruin probability by Monte Carlo
    Ruin(RuinArgs),
}

#[derive(Args, Debug)]
pub struct FbmArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct PickandsArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "S")]
    s: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct PiterbargArgs {
    #[command(flatten)]
    base: PickandsArgs,
    #[arg(long = "R")]
    r: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SubordinatorArgs {
    /// time change: gamma | cp | det
    #[arg(long)]
    subordinator: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    lambda_plus_one: Option<f64>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    time_rate: Option<f64>,
}

impl SubordinatorArgs {
    fn build(&self, map: &ConfigMap) -> Result<SubordinatorSpec> {
        let kind = resolve_str(self.subordinator.as_deref(), map, "subordinator.kind", None)?;
        match kind.as_str() {
            "gamma" => Ok(SubordinatorSpec::GammaProc {
                nu: resolve(self.nu, map, "subordinator.nu", Some(1.0))?,
            }),
            "cp" => Ok(SubordinatorSpec::CompoundPoisson {
                mu: resolve(self.mu, map, "subordinator.mu", None)?,
                jump: JumpDist::Pareto {
                    lambda_plus_one: resolve(
                        self.lambda_plus_one,
                        map,
                        "subordinator.lambda_plus_one",
                        None,
                    )?,
                    x_min: resolve(self.x_min, map, "subordinator.x_min", Some(1.0))?,
                },
            }),
            "det" => Ok(SubordinatorSpec::Deterministic {
                rate: resolve(self.time_rate, map, "subordinator.rate", Some(1.0))?,
            }),
            other => Err(SimError::Config(format!("unknown subordinator `{other}`"))),
        }
    }
}

#[derive(Args, Debug)]
pub struct RuinArgs {
    #[command(flatten)]
    risk: RiskBaseArgs,
    #[command(flatten)]
    sub: SubordinatorArgs,
    #[arg(long = "T")]
    t_horizon: Option<f64>,
    #[arg(long, short)]
    u: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// estimator: plain | conditional
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    confidence: Option<f64>,
}

impl RuinArgs {
    fn build(&self, map: &ConfigMap, allow_quadrature: bool) -> Result<ExperimentConfig> {
        let estimator_name =
            resolve_str(self.estimator.as_deref(), map, "mc.estimator", Some("plain"))?;
        let estimator = match estimator_name.as_str() {
            "plain" => Estimator::PlainMC,
            "conditional" => Estimator::ConditionalMC,
            "quadrature" if allow_quadrature => Estimator::QuadratureBM,
            other => return Err(SimError::Config(format!("unknown estimator `{other}`"))),
        };
        let u_raw = resolve_str(self.u.as_deref(), map, "mc.u_list", None)?;
        let config = ExperimentConfig {
            risk: self.risk.build(map)?,
            subordinator: self.sub.build(map)?,
            t_horizon: resolve(self.t_horizon, map, "mc.T", Some(1.0))?,
            u_list: parse_f64_list(&u_raw)?,
            n: resolve(self.n, map, "mc.n", Some(10_000))?,
            grid_n: resolve(self.grid_n, map, "mc.grid_n", Some(1 << 14))?,
            seed: require_seed(self.seed, map, estimator != Estimator::QuadratureBM)?,
            estimator,
            confidence: resolve(self.confidence, map, "mc.confidence", Some(0.95))?,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand, Debug)]
pub enum ValidateCmd {
    /// Observed/predicted ratio table against the exact asymptotics
    Ratio(RatioArgs),
    /// Log-slope regression against the logarithmic rate constant
    Logslope(LogslopeArgs),
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    #[command(flatten)]
    ruin: RuinArgs,
    #[arg(long)]
    pickands: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LogslopeArgs {
    #[command(flatten)]
    risk: RiskBaseArgs,
    #[command(flatten)]
    sub: SubordinatorArgs,
    #[arg(long = "T")]
    t_horizon: Option<f64>,
    #[arg(long, short)]
    u: Option<String>,
}

/// `--seed` is mandatory for stochastic subcommands; deterministic ones
/// default to 0.
fn require_seed(flag: Option<u64>, map: &ConfigMap, stochastic: bool) -> Result<u64> {
    if stochastic {
        resolve(flag, map, "seed", None)
            .map_err(|_| SimError::Config("--seed is required for stochastic runs".into()))
    } else {
        resolve(flag, map, "seed", Some(0))
    }
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::SubCritical => "SubCritical",
        Regime::Critical => "Critical",
        Regime::SuperCriticalPositiveSigma0 => "SuperCriticalPositiveSigma0",
        Regime::SuperCriticalPowerLaw => "SuperCriticalPowerLaw",
    }
}

fn render_regime(result: &RegimeResult) -> String {
    format!(
        "regime={}\nq={}\nK={}\n",
        regime_name(result.regime),
        result.u_exponent,
        result.constant
    )
}

fn u_list(raw: Option<&str>, map: &ConfigMap, key: &str) -> Result<Vec<f64>> {
    let raw = resolve_str(raw, map, key, None)?;
    let list = parse_f64_list(&raw)?;
    if list.is_empty() {
        return Err(SimError::Config("empty threshold list".into()));
    }
    Ok(list)
}

fn eval_table(u: &[f64], eval: impl Fn(f64) -> f64) -> String {
    let mut out = String::from("u,predicted,log_predicted\n");
    for &u in u {
        let log_v = eval(u);
        out.push_str(&format!("{u:.16e},{:.16e},{log_v:.16e}\n", log_v.exp()));
    }
    out
}

fn k1_structure(args: &K1Args, map: &ConfigMap) -> Result<(LocalStructure, f64, f64)> {
    let ls = LocalStructure::new(
        resolve(args.t0, map, "asym.t0", Some(1.0))?,
        resolve(args.a, map, "asym.a", None)?,
        resolve(args.beta, map, "asym.beta", None)?,
        resolve(args.d, map, "asym.d", None)?,
        resolve(args.alpha, map, "asym.alpha", None)?,
        resolve(args.r, map, "asym.r", Some(1.0))?,
    )?;
    let pickands = resolve(args.pickands, map, "asym.pickands", Some(1.0))?;
    let piterbarg = resolve(args.piterbarg, map, "asym.piterbarg", Some(1.0))?;
    Ok((ls, pickands, piterbarg))
}

/// Run the parsed command, returning the report text.
pub fn run(cli: &Cli) -> Result<String> {
    let map = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigMap::new(),
    };
    let format: ReportFormat = cli.format.into();

    match &cli.command {
        Command::Asym(AsymCmd::K1(args)) => {
            let (ls, pickands, piterbarg) = k1_structure(args, &map)?;
            let expr = k1_asymptotic(&ls, pickands, piterbarg)?;
            let us = u_list(args.u.as_deref(), &map, "asym.u_list")?;
            Ok(eval_table(&us, |u| expr.log_value(u)))
        }
        Command::Asym(AsymCmd::ThmT(args)) => {
            let (ls, pickands, piterbarg) = k1_structure(&args.base, &map)?;
            let gamma = resolve(args.gamma, &map, "asym.gamma", None)?;
            let tail = args.tail.build(&map)?;
            let expr = thmt_asymptotic(&ls, &tail, gamma, pickands, piterbarg)?;
            let us = u_list(args.base.u.as_deref(), &map, "asym.u_list")?;
            Ok(eval_table(&us, |u| expr.log_value(u)))
        }
        Command::Asym(AsymCmd::Thmlog(args)) => {
            let gamma = resolve(args.gamma, &map, "asym.gamma", None)?;
            let p = resolve(args.p, &map, "asym.p", None)?;
            let rate = resolve(args.rate, &map, "asym.L", None)?;
            let t0 = resolve(args.t0, &map, "asym.t0", Some(1.0))?;
            let profile = match (args.eta, args.sigma0) {
                (Some(_), _) => {
                    let eta = resolve(args.eta, &map, "asym.eta", None)?;
                    let coeff = resolve(args.coeff, &map, "asym.coeff", Some(1.0))?;
                    let cap = resolve(args.sigma_cap, &map, "asym.sigma_cap", Some(1.0))?;
                    SigmaProfile::with_running_max(
                        move |t: f64| (coeff * t.powf(eta)).min(cap),
                        move |t: f64| (coeff * t.powf(eta)).min(cap),
                        Some(OriginBehavior::PowerLaw { coeff, exponent: eta }),
                    )
                }
                (None, _) => {
                    let sigma0 = resolve(args.sigma0, &map, "asym.sigma0", None)?;
                    SigmaProfile::with_running_max(
                        move |_| sigma0,
                        move |_| sigma0,
                        Some(OriginBehavior::Positive { sigma0 }),
                    )
                }
            };
            let result = thmlog_rate(&profile, gamma, p, rate, t0)?;
            Ok(render_regime(&result))
        }
        Command::Risk(RiskCmd::Constants(args)) => {
            let params = args.build(&map)?;
            let k = risk_constants(&params);
            Ok(format!("s0={}\nv0={}\nq={}\n", k.s0, k.v0, k.q))
        }
        Command::Risk(RiskCmd::Prop1(args)) => {
            let params = args.base.build(&map)?;
            let pickands = resolve(args.pickands, &map, "asym.pickands", Some(1.0))?;
            let tail = args.tail.build(&map)?;
            let us = u_list(args.u.as_deref(), &map, "asym.u_list")?;
            let mut out = String::from("u,predicted,log_predicted\n");
            for &u in &us {
                let v = prop1_asymptotic(&params, &tail, pickands, u)?;
                out.push_str(&format!("{u:.16e},{v:.16e},{:.16e}\n", v.ln()));
            }
            Ok(out)
        }
        Command::Risk(RiskCmd::Prop2(args)) => {
            let params = args.base.build(&map)?;
            let p = resolve(args.p, &map, "tail.p", None)?;
            let rate = resolve(args.rate, &map, "tail.L", None)?;
            let result = prop2_lograte(&params, p, rate)?;
            Ok(render_regime(&result))
        }
        Command::Risk(RiskCmd::Prop34(args)) => {
            let params = args.base.build(&map)?;
            let family = resolve_str(args.density.as_deref(), &map, "density.family", None)?;
            let density = match family.as_str() {
                "rv" => DensitySpec::RegularlyVaryingDensity {
                    lambda_plus_one: resolve(
                        args.lambda_plus_one,
                        &map,
                        "density.lambda_plus_one",
                        None,
                    )?,
                },
                "logpower" => DensitySpec::LogPowerDensity {
                    p: resolve(args.p, &map, "density.p", None)?,
                    rate: resolve(args.rate, &map, "density.L", None)?,
                },
                other => {
                    return Err(SimError::Config(format!("unknown density family `{other}`")))
                }
            };
            let result = prop34_lograte(&params, &density)?;
            Ok(render_regime(&result))
        }
        Command::Risk(RiskCmd::Laplace(args)) => {
            let alpha = resolve(args.alpha, &map, "risk.alpha", None)?;
            let c = resolve(args.c, &map, "risk.c", Some(1.0))?;
            let result = laplace_motion_rates(alpha, c)?;
            Ok(render_regime(&result))
        }
        Command::Sim(SimCmd::Fbm(args)) => {
            let alpha = resolve(args.alpha, &map, "sim.alpha", None)?;
            let grid = GridSpec::new(
                resolve(args.grid_n, &map, "sim.grid_n", Some(1 << 10))?,
                resolve(args.horizon, &map, "sim.horizon", Some(1.0))?,
            )?;
            let seed = require_seed(args.seed, &map, true)?;
            let path = sample_fbm_path(alpha, grid, seed)?;
            let mut out = String::from("t,value\n");
            for (t, v) in path.times.iter().zip(&path.values) {
                out.push_str(&format!("{t:.16e},{v:.16e}\n"));
            }
            Ok(out)
        }
        Command::Sim(SimCmd::Pickands(args)) => {
            let est = crate::constants::estimate_pickands(
                resolve(args.alpha, &map, "sim.alpha", None)?,
                resolve(args.s, &map, "sim.S", Some(64.0))?,
                resolve(args.n, &map, "sim.n", Some(20_000))?,
                resolve(args.grid_n, &map, "sim.grid_n", Some(1 << 14))?,
                require_seed(args.seed, &map, true)?,
            )?;
            Ok(format!(
                "value,std_error,S,n,seed\n{:.16e},{:.16e},{:.16e},{},{}\n",
                est.value, est.std_error, est.s, est.n, est.seed
            ))
        }
        Command::Sim(SimCmd::Piterbarg(args)) => {
            let est = crate::constants::estimate_piterbarg(
                resolve(args.base.alpha, &map, "sim.alpha", None)?,
                resolve(args.r, &map, "sim.R", None)?,
                resolve(args.base.s, &map, "sim.S", Some(16.0))?,
                resolve(args.base.n, &map, "sim.n", Some(20_000))?,
                resolve(args.base.grid_n, &map, "sim.grid_n", Some(1 << 12))?,
                require_seed(args.base.seed, &map, true)?,
            )?;
            Ok(format!(
                "value,std_error,S,n,seed\n{:.16e},{:.16e},{:.16e},{},{}\n",
                est.value, est.std_error, est.s, est.n, est.seed
            ))
        }
        Command::Sim(SimCmd::Ruin(args)) => {
            let config = args.build(&map, false)?;
            let mut out = String::from("u,p_hat,std_error,ci_low,ci_high,n,grid_n,seed\n");
            for &u in &config.u_list {
                let est = mc_ruin(&config, u)?;
                out.push_str(&format!(
                    "{u:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{}\n",
                    est.p_hat, est.std_error, est.ci_low, est.ci_high, est.n, est.grid_n, est.seed
                ));
            }
            Ok(out)
        }
        Command::Validate(ValidateCmd::Ratio(args)) => {
            let config = args.ruin.build(&map, true)?;
            let pickands = resolve(args.pickands, &map, "asym.pickands", Some(1.0))?;
            let tail = endpoint_tail_model(&config.subordinator, config.t_horizon)?;
            let params = config.risk;
            // predictions come from the closed-form evaluator, errors and
            // all: a failed prediction must fail the run, not be patched
            let mut predictions = Vec::with_capacity(config.u_list.len());
            for &u in &config.u_list {
                predictions.push((u, prop1_asymptotic(&params, &tail, pickands, u)?));
            }
            let rows = run_ratio_experiment(&config, |u| {
                predictions
                    .iter()
                    .find(|&&(pu, _)| pu == u)
                    .map(|&(_, v)| v)
                    .unwrap_or(f64::NAN)
            })?;
            render_report(&rows, format)
        }
        Command::Validate(ValidateCmd::Logslope(args)) => {
            let params = args.risk.build(&map)?;
            let spec = args.sub.build(&map)?;
            let t = resolve(args.t_horizon, &map, "mc.T", Some(1.0))?;
            let us = u_list(args.u.as_deref(), &map, "mc.u_list")?;
            let target = match &spec {
                SubordinatorSpec::GammaProc { .. } => laplace_motion_rates(params.alpha, params.c)?,
                SubordinatorSpec::CompoundPoisson { mu: _, jump } => {
                    let JumpDist::Pareto { lambda_plus_one, .. } = *jump;
                    prop34_lograte(
                        &params,
                        &DensitySpec::RegularlyVaryingDensity { lambda_plus_one },
                    )?
                }
                _ => {
                    return Err(SimError::UnsupportedSpec(
                        "log-slope validation needs a gamma or compound-Poisson time change",
                    ))
                }
            };
            let points = quadrature_log_observations(&params, &spec, t, &us)?;
            let report = run_logslope_experiment(&points, target.u_exponent, target.constant)?;
            Ok(render_slope_report(&report, format))
        }
    }
}

/// Exit code for a failed run: 3 for numeric failures, 2 for everything
/// else (configuration and domain errors).
pub fn exit_code(err: &SimError) -> i32 {
    match err {
        SimError::Embedding { .. }
        | SimError::Factorization { .. }
        | SimError::Quadrature { .. } => 3,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(args).expect("parse");
        run(&cli)
    }

    #[test]
    fn thmlog_subcritical_example() {
        let out = run_args(&[
            "tailsup", "asym", "thmlog", "--gamma", "1", "--p", "1", "--L", "1", "--sigma0", "1",
        ])
        .unwrap();
        assert!(out.contains("regime=SubCritical"), "{out}");
        assert!(out.contains("q=2"));
        assert!(out.contains("K=0.5"));
    }

    #[test]
    fn laplace_critical_example() {
        let out =
            run_args(&["tailsup", "risk", "laplace", "--alpha", "1", "--c", "1"]).unwrap();
        assert!(out.contains("regime=Critical"), "{out}");
        assert!(out.contains("q=1"));
        assert!(out.contains("K=2.732050807568877"), "{out}");
    }

    #[test]
    fn unknown_flag_fails_parse() {
        assert!(Cli::try_parse_from(["tailsup", "risk", "laplace", "--bogus", "1"]).is_err());
    }

    #[test]
    fn seed_required_for_stochastic() {
        let err = run_args(&[
            "tailsup", "sim", "fbm", "--alpha", "1.0", "--grid-n", "8", "--horizon", "1",
        ])
        .unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn config_file_supplies_values_and_flags_override() {
        let dir = std::env::temp_dir().join("tailsup-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("laplace.conf");
        std::fs::write(&path, "risk.alpha=0.5\nrisk.c=1\n").unwrap();
        let from_file = run_args(&[
            "tailsup", "risk", "laplace", "--config", path.to_str().unwrap(),
        ])
        .unwrap();
        assert!(from_file.contains("regime=SubCritical"), "{from_file}");
        let overridden = run_args(&[
            "tailsup", "risk", "laplace", "--config", path.to_str().unwrap(), "--alpha", "1.5",
        ])
        .unwrap();
        assert!(overridden.contains("regime=SuperCriticalPowerLaw"), "{overridden}");
    }

    #[test]
    fn constants_output_unit_case() {
        let out = run_args(&[
            "tailsup", "risk", "constants", "--alpha", "1", "--theta", "1", "--c", "1",
        ])
        .unwrap();
        assert!(out.contains("s0=1"), "{out}");
        assert!(out.contains("v0=0.5"), "{out}");
    }

    #[test]
    fn sim_ruin_deterministic_reports() {
        let a = run_args(&[
            "tailsup", "sim", "ruin", "--alpha", "1", "--theta", "1", "--c", "1",
            "--subordinator", "det", "-u", "0.5,1", "--n", "500", "--grid-n", "64",
            "--seed", "5",
        ])
        .unwrap();
        let b = run_args(&[
            "tailsup", "sim", "ruin", "--alpha", "1", "--theta", "1", "--c", "1",
            "--subordinator", "det", "-u", "0.5,1", "--n", "500", "--grid-n", "64",
            "--seed", "5",
        ])
        .unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("u,p_hat,std_error,ci_low,ci_high,n,grid_n,seed\n"));
    }

    #[test]
    fn validate_logslope_laplace() {
        let out = run_args(&[
            "tailsup", "validate", "logslope", "--alpha", "1", "--theta", "1", "--c", "1",
            "--subordinator", "gamma", "-u", "30,35,40,45,50",
        ])
        .unwrap();
        // fitted slope within 5% of -(1+sqrt(3))
        let line = out.lines().nth(1).unwrap();
        let fields: Vec<f64> =
            line.split(',').map(|s| s.parse().unwrap()).collect();
        let (slope, target, rel) = (fields[2], fields[3], fields[4]);
        assert!((target - 2.732_050_807_568_877).abs() < 1e-12);
        assert!(rel < 0.05, "slope {slope} rel_error {rel}");
    }
}
