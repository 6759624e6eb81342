//! The `pdrich` command line.

pub mod ingest;
pub mod output;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::asymptotics::{self, LimitLaw};
use crate::conditional::{self, IntervalMethod, PredictionQuery, DEFAULT_EXACT_CAP};
use crate::error::{Error, Result};
use crate::fit::{fit_params, BoundaryEdge, FitBounds};
use crate::gof::mean_and_se;
use crate::oracle::{self, RationalParams};
use crate::params::{PDParams, PartitionData};
use crate::pmf::Pmf;
use crate::prior;
use crate::simulate::{self, DeletionConfig, NullChoice, StratumStatus};

use ingest::{ingest, InputFormat};
use output::{render, OutputFormat, Report};

const FIT_TOLERANCE: f64 = 1e-8;

#[derive(Parser, Debug, Clone)]
#[command(name = "pdrich", version, about = "Species richness prediction under Pitman-Yor priors")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Discount parameter in (0,1).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Strength parameter, greater than -alpha.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Pilot sample size (defaults to the input's total count).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Species in the pilot sample (defaults to the input's species count).
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Size of the additional sample.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Moment orders, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub r: Vec<usize>,
    /// Credible level.
    #[arg(long, global = true, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, global = true, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, global = true, env = "PDRICH_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo size: simulation runs or limit-law draws.
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Largest m handled by exact pmf computations.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: usize,
    /// Leave the timestamp out of the report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Species abundance file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = InputFormat::Csv)]
    pub input_format: InputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Asymptotic,
    /// Exact up to the exact cap, asymptotic beyond it.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PmfKind {
    /// New species `K_m`.
    Km,
    /// Observations in new species `S_m`.
    Sm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NullArg {
    Shifted,
    Unshifted,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Empirical-Bayes estimate of (alpha, theta) from the input.
    Fit,
    /// Law, mean and moments of the number of species K_n.
    Kn,
    /// Expected new species in m more draws, with a credible interval.
    Predict,
    /// Exact pmf of K_m or S_m.
    Pmf {
        #[arg(long, value_enum, default_value_t = PmfKind::Km)]
        kind: PmfKind,
    },
    /// Moments of K_m with their large-m approximations.
    Moments,
    /// Limit-law moments and a density grid.
    Asym {
        /// Right end of the density grid (default: mean + 4 sd).
        #[arg(long)]
        z_max: Option<f64>,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Draws from the limit law of K_m / m^alpha.
    LimitSample {
        /// Use the Y1 * X factorization.
        #[arg(long)]
        alt: bool,
    },
    /// Chinese restaurant process runs.
    Simulate,
    /// Stratified chi-square check of the deletion-of-classes law.
    DeletionCheck {
        #[arg(long, value_enum, default_value_t = NullArg::Shifted)]
        null: NullArg,
        #[arg(long, default_value_t = 0.001)]
        significance: f64,
        /// Strata with fewer runs are skipped.
        #[arg(long, default_value_t = 50)]
        min_stratum: usize,
    },
    /// Exact rational pmfs by enumeration (small samples only).
    Oracle,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fit => "fit",
            Command::Kn => "kn",
            Command::Predict => "predict",
            Command::Pmf { .. } => "pmf",
            Command::Moments => "moments",
            Command::Asym { .. } => "asym",
            Command::LimitSample { .. } => "limit-sample",
            Command::Simulate => "simulate",
            Command::DeletionCheck { .. } => "deletion-check",
            Command::Oracle => "oracle",
        }
    }
}

/// Rendered report plus messages meant for stderr.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
}

struct Context<'a> {
    opts: &'a Options,
    data: Option<PartitionData>,
    report: Report,
    warnings: Vec<String>,
}

impl<'a> Context<'a> {
    fn new(opts: &'a Options, command: &str) -> Result<Self> {
        let mut report = Report::new(command);
        let data = match &opts.input {
            Some(path) => {
                let dataset = ingest(path, opts.input_format)?;
                report.input("input", path.display().to_string());
                report.input("input_format", format!("{:?}", opts.input_format).to_lowercase());
                Some(dataset.partition()?)
            }
            None => None,
        };
        Ok(Context { opts, data, report, warnings: Vec::new() })
    }

    fn n(&mut self) -> Result<usize> {
        let n = self
            .opts
            .n
            .or(self.data.as_ref().map(|d| d.n()))
            .ok_or_else(|| Error::InvalidArgument("sample size needed: pass --n or --input".into()))?;
        self.report.input("n", n);
        Ok(n)
    }

    fn k(&mut self) -> Result<usize> {
        let k = self
            .opts
            .k
            .or(self.data.as_ref().map(|d| d.k()))
            .ok_or_else(|| Error::InvalidArgument("species count needed: pass --k or --input".into()))?;
        self.report.input("k", k);
        Ok(k)
    }

    fn m(&mut self) -> Result<usize> {
        let m = self.opts.m.ok_or_else(|| Error::InvalidArgument("--m is required".into()))?;
        self.report.input("m", m);
        Ok(m)
    }

    fn runs(&mut self, default: usize) -> Result<usize> {
        let runs = self.opts.runs.unwrap_or(default);
        if runs == 0 {
            return Err(Error::InvalidArgument("--runs must be at least 1".into()));
        }
        self.report.input("runs", runs);
        Ok(runs)
    }

    fn orders(&mut self, default: &[usize]) -> Vec<usize> {
        let r = if self.opts.r.is_empty() { default.to_vec() } else { self.opts.r.clone() };
        self.report.input("r", r.clone());
        r
    }

    fn seed(&mut self) -> u64 {
        self.report.seed = Some(self.opts.seed);
        self.opts.seed
    }

    /// `--alpha/--theta` when both are given; otherwise the fit of the input,
    /// with any single flag overriding its fitted counterpart.
    fn params(&mut self) -> Result<PDParams> {
        let (alpha, theta, source) = match (self.opts.alpha, self.opts.theta) {
            (Some(a), Some(t)) => (a, t, "flags"),
            (a, t) => {
                let data = self.data.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("parameters needed: pass --alpha and --theta, or --input to fit".into())
                })?;
                let fit = fit_params(data, FitBounds::default(), FIT_TOLERANCE)?;
                let src = if a.is_some() || t.is_some() { "fit+flags" } else { "fit" };
                (a.unwrap_or(fit.params.alpha()), t.unwrap_or(fit.params.theta()), src)
            }
        };
        let params = PDParams::new(alpha, theta)?;
        self.report.input("alpha", alpha).input("theta", theta).input("params_source", source);
        Ok(params)
    }

    fn query(&mut self) -> Result<PredictionQuery> {
        let params = self.params()?;
        let (n, k, m) = (self.n()?, self.k()?, self.m()?);
        PredictionQuery::new(params, n, k, m)
    }

    fn law(&mut self) -> Result<LimitLaw> {
        let params = self.params()?;
        let (n, k) = (self.n()?, self.k()?);
        LimitLaw::new(params, n, k)
    }
}

fn pmf_rows(report: &mut Report, pmf: &Pmf) {
    for (x, p) in pmf.iter() {
        report.row(vec![json!(x), json!(p)]);
    }
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    let mut ctx = Context::new(opts, cli.command.name())?;
    match &cli.command {
        Command::Fit => fit(&mut ctx)?,
        Command::Kn => kn(&mut ctx)?,
        Command::Predict => predict(&mut ctx)?,
        Command::Pmf { kind } => pmf(&mut ctx, *kind)?,
        Command::Moments => moments(&mut ctx)?,
        Command::Asym { z_max, points } => asym(&mut ctx, *z_max, *points)?,
        Command::LimitSample { alt } => limit_sample(&mut ctx, *alt)?,
        Command::Simulate => simulate_cmd(&mut ctx)?,
        Command::DeletionCheck { null, significance, min_stratum } => {
            deletion_check(&mut ctx, *null, *significance, *min_stratum)?
        }
        Command::Oracle => oracle_cmd(&mut ctx)?,
    }
    let timestamp = (!opts.no_timestamp).then(unix_time);
    Ok(Outcome { text: render(&ctx.report, opts.format, timestamp), warnings: ctx.warnings })
}

fn fit(ctx: &mut Context) -> Result<()> {
    let data = ctx.data.clone().ok_or_else(|| Error::InvalidArgument("fit needs --input".into()))?;
    let bounds = FitBounds::default();
    let fit = fit_params(&data, bounds, FIT_TOLERANCE)?;
    let r = &mut ctx.report;
    r.input("n", data.n()).input("k", data.k());
    r.tolerance("search", FIT_TOLERANCE)
        .tolerance("alpha_min", bounds.alpha_min)
        .tolerance("alpha_max", bounds.alpha_max)
        .tolerance("theta_margin", bounds.theta_margin)
        .tolerance("theta_max", bounds.theta_max);
    let edges: Vec<&str> = fit
        .boundary
        .iter()
        .map(|e| match e {
            BoundaryEdge::AlphaLower => "alpha_lower",
            BoundaryEdge::AlphaUpper => "alpha_upper",
            BoundaryEdge::ThetaLower => "theta_lower",
            BoundaryEdge::ThetaUpper => "theta_upper",
        })
        .collect();
    if !edges.is_empty() {
        ctx.warnings.push(format!("fit maximizer lies on the search box edge: {}", edges.join(", ")));
    }
    r.summary("alpha", fit.params.alpha())
        .summary("theta", fit.params.theta())
        .summary("log_likelihood", fit.log_likelihood)
        .summary("grid_best", fit.grid_best)
        .summary("boundary", edges)
        .summary("evaluations", fit.evaluations);
    r.columns(&["step", "alpha", "theta", "log_likelihood"]);
    for (i, (a, t, ll)) in fit.path.iter().enumerate() {
        r.row(vec![json!(i), json!(a), json!(t), json!(ll)]);
    }
    Ok(())
}

fn kn(ctx: &mut Context) -> Result<()> {
    let params = ctx.params()?;
    let n = ctx.n()?;
    let orders = ctx.orders(&[]);
    if n > ctx.opts.exact_cap {
        return Err(Error::CapExceeded { m: n, cap: ctx.opts.exact_cap });
    }
    let pmf = prior::kn_pmf(&params, n)?;
    let moments = orders
        .iter()
        .map(|&r| Ok(json!({"r": r, "value": prior::kn_moment(&params, n, r)?})))
        .collect::<Result<Vec<Value>>>()?;
    let r = &mut ctx.report;
    r.method = Some("exact".into());
    r.summary("mean", prior::kn_mean(&params, n)?).summary("moments", moments);
    r.columns(&["k", "probability"]);
    pmf_rows(r, &pmf);
    Ok(())
}

const DEFAULT_LIMIT_DRAWS: usize = 100_000;

fn resolve_method(ctx: &mut Context, m: usize) -> Result<&'static str> {
    let cap = ctx.opts.exact_cap;
    ctx.report.tolerance("exact_cap", cap);
    match ctx.opts.method {
        Method::Exact if m > cap => Err(Error::CapExceeded { m, cap }),
        Method::Exact => Ok("exact"),
        Method::Asymptotic => Ok("asymptotic"),
        Method::Auto if m > cap => {
            ctx.warnings.push(format!("m = {m} exceeds the exact cap {cap}; using the asymptotic method"));
            Ok("asymptotic")
        }
        Method::Auto => Ok("exact"),
    }
}

fn predict(ctx: &mut Context) -> Result<()> {
    let q = ctx.query()?;
    let level = ctx.opts.level;
    ctx.report.input("level", level);
    let method = resolve_method(ctx, q.m())?;
    let interval = if method == "exact" {
        conditional::credible_interval(&q, level, IntervalMethod::Exact { cap: ctx.opts.exact_cap })?
    } else {
        let samples = ctx.runs(DEFAULT_LIMIT_DRAWS)?;
        let seed = ctx.seed();
        conditional::credible_interval(&q, level, IntervalMethod::Asymptotic { samples, seed })?
    };
    let mean = conditional::km_mean(&q);
    let r = &mut ctx.report;
    r.method = Some(method.into());
    r.summary("mean", mean)
        .summary("lower", interval.lo)
        .summary("upper", interval.hi)
        .summary("coverage", interval.coverage);
    if let Some(u) = interval.unimodal {
        r.summary("unimodal", u);
    }
    if method == "asymptotic" && q.m() > 0 {
        r.summary("asymptotic_mean", asymptotics::km_moment_asymptotic(&q.limit_law(), 1, q.m()));
    }
    r.columns(&["m", "mean", "lower", "upper", "coverage"]);
    r.row(vec![json!(q.m()), json!(mean), json!(interval.lo), json!(interval.hi), json!(interval.coverage)]);
    Ok(())
}

fn pmf(ctx: &mut Context, kind: PmfKind) -> Result<()> {
    let q = ctx.query()?;
    ctx.report.input("kind", if kind == PmfKind::Km { "km" } else { "sm" });
    if ctx.opts.method == Method::Asymptotic {
        return Err(Error::InvalidArgument("pmf is computed exactly; drop --method asymptotic".into()));
    }
    let cap = ctx.opts.exact_cap;
    ctx.report.tolerance("exact_cap", cap);
    let pmf = match kind {
        PmfKind::Km if q.m() > cap => return Err(Error::CapExceeded { m: q.m(), cap }),
        PmfKind::Km => conditional::km_pmf(&q)?,
        PmfKind::Sm => conditional::sm_pmf(&q),
    };
    let r = &mut ctx.report;
    r.method = Some("exact".into());
    r.summary("total", pmf.total()).summary("mean", pmf.mean());
    r.columns(&["value", "probability"]);
    pmf_rows(r, &pmf);
    Ok(())
}

fn moments(ctx: &mut Context) -> Result<()> {
    let q = ctx.query()?;
    let orders = ctx.orders(&[1, 2]);
    let law = q.limit_law();
    let r = &mut ctx.report;
    r.method = Some("exact".into());
    r.columns(&["r", "moment", "asymptotic"]);
    for &order in &orders {
        let exact = conditional::km_moment(&q, order)?;
        let approx = asymptotics::km_moment_asymptotic(&law, order, q.m());
        r.row(vec![json!(order), json!(exact), json!(approx)]);
    }
    r.summary("mean", conditional::km_mean(&q));
    Ok(())
}

fn asym(ctx: &mut Context, z_max: Option<f64>, points: usize) -> Result<()> {
    let law = ctx.law()?;
    let orders = ctx.orders(&[1, 2]);
    let m = ctx.opts.m;
    if let Some(m) = m {
        ctx.report.input("m", m);
    }
    if points == 0 {
        return Err(Error::InvalidArgument("--points must be at least 1".into()));
    }
    let mean = asymptotics::limit_moment(&law, 1);
    let sd = (asymptotics::limit_moment(&law, 2) - mean * mean).max(0.0).sqrt();
    let z_max = z_max.unwrap_or(mean + 4.0 * sd);
    if !(z_max > 0.0 && z_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("--z-max must be positive, got {z_max}")));
    }
    let zs: Vec<f64> = (1..=points).map(|i| z_max * i as f64 / points as f64).collect();
    let density = zs
        .par_iter()
        .map(|&z| asymptotics::limit_density(&law, z))
        .collect::<Result<Vec<f64>>>()?;
    let moments: Vec<Value> = orders
        .iter()
        .map(|&o| {
            let mut v = json!({"r": o, "limit_moment": asymptotics::limit_moment(&law, o)});
            if let Some(m) = m {
                v["km_moment_asymptotic"] = json!(asymptotics::km_moment_asymptotic(&law, o, m));
            }
            v
        })
        .collect();
    let r = &mut ctx.report;
    r.method = Some("asymptotic".into());
    r.tolerance("density_inner_rel", 1e-11);
    r.summary("moments", moments);
    r.columns(&["z", "density"]);
    for (z, f) in zs.iter().zip(density) {
        r.row(vec![json!(z), json!(f)]);
    }
    Ok(())
}

fn limit_sample(ctx: &mut Context, alt: bool) -> Result<()> {
    let law = ctx.law()?;
    let count = ctx.runs(1000)?;
    let seed = ctx.seed();
    let draws = if alt {
        asymptotics::sample_limit_alt(&law, count, seed)?
    } else {
        asymptotics::sample_limit(&law, count, seed)?
    };
    let (mean, se) = mean_and_se(&draws);
    let r = &mut ctx.report;
    r.method = Some("asymptotic".into());
    r.summary("decomposition", if alt { "Y1*X" } else { "Y*W^alpha" })
        .summary("mean", mean)
        .summary("standard_error", se)
        .summary("limit_moment", asymptotics::limit_moment(&law, 1));
    r.columns(&["index", "z"]);
    for (i, z) in draws.into_iter().enumerate() {
        r.row(vec![json!(i), json!(z)]);
    }
    Ok(())
}

fn frequency_rows(report: &mut Report, name: &str, values: &[usize]) {
    let mut counts = std::collections::BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0usize) += 1;
    }
    for (v, c) in counts {
        report.row(vec![json!(name), json!(v), json!(c), json!(c as f64 / values.len() as f64)]);
    }
}

const MAX_CONDITIONING_ATTEMPTS: usize = 100_000;

fn simulate_cmd(ctx: &mut Context) -> Result<()> {
    let params = ctx.params()?;
    let n = ctx.n()?;
    if n == 0 {
        return Err(Error::InvalidArgument("--n must be at least 1".into()));
    }
    let m = ctx.opts.m.unwrap_or(0);
    ctx.report.input("m", m);
    let runs = ctx.runs(10_000)?;
    let seed = ctx.seed();
    let (kn, cont): (Vec<usize>, Vec<simulate::Continuation>) = match ctx.opts.k {
        Some(k) => {
            ctx.report.input("k", k);
            let c = simulate::conditioned_continuations(&params, n, k, m, runs, seed, MAX_CONDITIONING_ATTEMPTS)?;
            (vec![k; runs], c)
        }
        None => (0..runs as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = simulate::run_rng(seed, i);
                let pilot = simulate::crp_sample_with(&params, n, &mut rng);
                (pilot.k(), simulate::continue_sample_with(&pilot, &params, m, &mut rng).0)
            })
            .unzip(),
    };
    let km: Vec<usize> = cont.iter().map(|c| c.k_new).collect();
    let sm: Vec<usize> = cont.iter().map(|c| c.s_new).collect();
    let as_f64 = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    let (kn_mean, kn_se) = mean_and_se(&as_f64(&kn));
    let (km_mean, km_se) = mean_and_se(&as_f64(&km));
    let (sm_mean, sm_se) = mean_and_se(&as_f64(&sm));
    let r = &mut ctx.report;
    r.method = Some("simulation".into());
    r.summary("kn_mean", kn_mean).summary("kn_se", kn_se);
    if m > 0 {
        r.summary("km_mean", km_mean).summary("km_se", km_se).summary("sm_mean", sm_mean).summary("sm_se", sm_se);
    }
    r.columns(&["statistic", "value", "count", "frequency"]);
    frequency_rows(r, "K_n", &kn);
    if m > 0 {
        frequency_rows(r, "K_m", &km);
        frequency_rows(r, "S_m", &sm);
    }
    Ok(())
}

fn deletion_check(ctx: &mut Context, null: NullArg, significance: f64, min_stratum: usize) -> Result<()> {
    let params = ctx.params()?;
    let (n, k, m) = (ctx.n()?, ctx.k()?, ctx.m()?);
    let runs = ctx.runs(100_000)?;
    let seed = ctx.seed();
    let null = match null {
        NullArg::Shifted => NullChoice::Shifted,
        NullArg::Unshifted => NullChoice::Unshifted,
    };
    let config = DeletionConfig { null, min_stratum, ..DeletionConfig::default() };
    let report = simulate::deletion_check(&params, n, k, m, runs, seed, config)?;
    let r = &mut ctx.report;
    r.method = Some("simulation".into());
    r.input("null", if null == NullChoice::Shifted { "shifted" } else { "unshifted" });
    r.tolerance("significance", significance)
        .tolerance("min_stratum", min_stratum)
        .tolerance("min_expected", config.min_expected);
    r.summary("min_p_value", report.min_p_value()).summary("rejected", report.rejects(significance));
    r.columns(&["s", "count", "status", "statistic", "dof", "p_value"]);
    for st in &report.strata {
        let status = match st.status {
            StratumStatus::Tested => "tested",
            StratumStatus::Degenerate => "degenerate",
            StratumStatus::Skipped => "skipped",
        };
        let (stat, dof) = match &st.test {
            Some(t) => (json!(t.statistic), json!(t.dof)),
            None => (Value::Null, Value::Null),
        };
        r.row(vec![json!(st.s), json!(st.count), json!(status), stat, dof, json!(st.p_value())]);
    }
    Ok(())
}

fn oracle_cmd(ctx: &mut Context) -> Result<()> {
    let (alpha, theta) = match (ctx.opts.alpha, ctx.opts.theta) {
        (Some(a), Some(t)) => (a, t),
        _ => return Err(Error::InvalidArgument("oracle needs --alpha and --theta".into())),
    };
    let params = RationalParams::approximate(alpha, theta)?;
    ctx.report.input("alpha", params.alpha().to_string()).input("theta", params.theta().to_string());
    let (label, pmf) = match (ctx.opts.m, ctx.data.clone()) {
        (Some(m), Some(data)) => {
            ctx.report.input("m", m).input("pilot", data.counts().to_vec());
            ("k_new", oracle::exact_km_pmf(&params, data.counts(), m)?.km)
        }
        (Some(_), None) => return Err(Error::InvalidArgument("oracle continuation needs a pilot via --input".into())),
        (None, _) => {
            let n = ctx.n()?;
            ("k", oracle::exact_kn_pmf(&params, n)?)
        }
    };
    let r = &mut ctx.report;
    r.method = Some("enumeration".into());
    r.columns(&[label, "probability", "exact"]);
    for (i, p) in pmf.probs.iter().enumerate() {
        r.row(vec![json!(pmf.support_min + i), json!(oracle::to_f64(p)), json!(p.to_string())]);
    }
    Ok(())
}

/// Parse the process arguments, run, print; returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", outcome.text);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
