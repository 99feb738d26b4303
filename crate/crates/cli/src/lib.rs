//! `cqexp`: compute capacities, Rényi informations, error-exponent curves and
//! random-coding simulations for classical-quantum channels described in JSON.
//!
//! All quantities are computed in bits; `--nats` converts on output only.
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 resource cap.

pub mod output;
pub mod spec;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqexp_core::coding::{
    classical_transition, simulate_trial, simulation_prior, summarize, ModeTag, TrialOutcome, TrialPlan,
};
use cqexp_core::{
    best_type, renyi_mi_channel_prior, Alpha, AlphaRanges, AnalysisConfig, CQChannel, ChannelAnalyzer, Error, Limits,
    Prior, RowStatus,
};
use rayon::prelude::*;
use serde::Serialize;

use output::{emit, fixed6, sig9, Units};

#[derive(Debug, Parser)]
#[command(name = "cqexp", version, about = "Error exponents of classical-quantum channels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit one JSON object per row instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report rates, informations and exponents in nats.
    #[arg(long, global = true)]
    pub nats: bool,
    /// Seed for multistart priors and random codebooks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest dense dimension d^n of an n-use output operator.
    #[arg(long, global = true, default_value_t = Limits::default().max_block_dim)]
    pub max_dim: usize,
    /// Largest number of types or sequences to enumerate.
    #[arg(long, global = true, default_value_t = Limits::default().max_enumeration)]
    pub max_types: u128,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Holevo capacity and an optimal prior.
    Capacity { channel: PathBuf },
    /// Rényi mutual information I_α(N, p), or I_α(N) and its maximizer without --prior.
    Renyi {
        channel: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Comma-separated prior weights.
        #[arg(long, value_delimiter = ',')]
        prior: Option<Vec<f64>>,
    },
    /// Achievability and sphere-packing exponents on a rate grid (rates in bits).
    Exponent {
        channel: PathBuf,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Ranges::Standard)]
        ranges: Ranges,
    },
    /// Best exact PGM error over random codes at rate r (bits) for each blocklength.
    Simulate {
        channel: PathBuf,
        #[arg(long = "r")]
        rate: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Best constant-composition type per blocklength against I_α(N).
    Besttype {
        channel: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ranges {
    Standard,
    Swapped,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => 4,
            Error::NumericalInstability(_) | Error::InfiniteDivergence => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<spec::SpecError> for CliError {
    fn from(e: spec::SpecError) -> Self {
        Self::validation(e.0)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return 2;
            }
            let _ = out.write_all(text.as_bytes());
            return 0;
        }
    };
    match run(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var("CQEXP_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::validation(format!("CQEXP_THREADS must be a non-negative integer, got {v:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError { code: 1, message: e.to_string() })
}

pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> CliResult<()> {
    let g = &cli.global;
    if g.max_dim == 0 || g.max_types == 0 {
        return Err(CliError::validation("caps must be at least 1"));
    }
    let limits = Limits { max_block_dim: g.max_dim, max_enumeration: g.max_types };
    let config = AnalysisConfig { seed: g.seed, ..AnalysisConfig::default() };
    let units = Units { nats: g.nats };
    let pool = thread_pool()?;
    // Commands write into buffers so the worker pool never touches the caller's streams.
    let (mut buf, mut diag) = (Vec::new(), Vec::new());
    let result = pool.install(|| -> CliResult<()> {
        let (out, err) = (&mut buf, &mut diag);
        match &cli.command {
            Command::Capacity { channel } => {
                let channel = spec::load_channel(channel)?;
                capacity(&channel, config, units, g.json, out)
            }
            Command::Renyi { channel, alpha, prior } => {
                let channel = spec::load_channel(channel)?;
                renyi(&channel, config, *alpha, prior.as_deref(), units, g.json, out)
            }
            Command::Exponent { channel, rmin, rmax, steps, ranges } => {
                let channel = spec::load_channel(channel)?;
                let config = AnalysisConfig {
                    ranges: match ranges {
                        Ranges::Standard => AlphaRanges::Standard,
                        Ranges::Swapped => AlphaRanges::Swapped,
                    },
                    ..config
                };
                exponent(&channel, config, *rmin, *rmax, *steps, units, g.json, out, err)
            }
            Command::Simulate { channel, rate, n_list, trials } => {
                let channel = spec::load_channel(channel)?;
                simulate(&channel, config, &limits, *rate, n_list, *trials, g.seed, units, g.json, out, err)
            }
            Command::Besttype { channel, alpha, n_max } => {
                let channel = spec::load_channel(channel)?;
                besttype(&channel, config, &limits, *alpha, *n_max, units, g.json, out)
            }
        }
    });
    err.write_all(&diag)?;
    if result.is_ok() {
        out.write_all(&buf)?;
        out.flush()?;
    }
    result
}

fn join_prior(p: &Prior) -> String {
    p.weights().iter().map(|w| fixed6(*w)).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct CapacityReport<'a> {
    capacity: f64,
    prior: &'a [f64],
    iterations: usize,
    converged: bool,
}

fn capacity(
    channel: &CQChannel,
    config: AnalysisConfig,
    units: Units,
    json: bool,
    out: &mut impl Write,
) -> CliResult<()> {
    let mut analyzer = ChannelAnalyzer::new(channel, config)?;
    let report = analyzer.holevo_capacity()?;
    if !report.converged {
        return Err(CliError::numerical("capacity optimization did not converge"));
    }
    let value = units.info(report.value);
    if json {
        let row = CapacityReport {
            capacity: value,
            prior: report.arg_prior.weights(),
            iterations: report.iterations,
            converged: report.converged,
        };
        serde_json::to_writer(&mut *out, &row).map_err(std::io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "capacity: {}", fixed6(value))?;
        writeln!(out, "prior: {}", join_prior(&report.arg_prior))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RenyiReport<'a> {
    alpha: f64,
    renyi_mi: f64,
    prior: &'a [f64],
    optimized: bool,
}

fn renyi(
    channel: &CQChannel,
    config: AnalysisConfig,
    alpha: f64,
    prior: Option<&[f64]>,
    units: Units,
    json: bool,
    out: &mut impl Write,
) -> CliResult<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::validation(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let (value, prior, optimized) = match prior {
        Some(weights) => {
            if weights.len() != channel.alphabet_size() {
                return Err(CliError::validation(format!(
                    "prior has {} weights but the alphabet has {} letters",
                    weights.len(),
                    channel.alphabet_size()
                )));
            }
            let p = Prior::new(weights.to_vec())?;
            (renyi_mi_channel_prior(channel, &p, Alpha::new(alpha)?)?, p, false)
        }
        None => {
            let report = ChannelAnalyzer::new(channel, config)?.renyi_mi_channel(alpha)?;
            if !report.converged {
                return Err(CliError::numerical("prior optimization did not converge"));
            }
            (report.value, report.arg_prior, true)
        }
    };
    let value = units.info(value);
    if json {
        let row = RenyiReport { alpha, renyi_mi: value, prior: prior.weights(), optimized };
        serde_json::to_writer(&mut *out, &row).map_err(std::io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "renyi_mi: {}", fixed6(value))?;
        writeln!(out, "prior: {}", join_prior(&prior))?;
    }
    Ok(())
}

/// `steps` evenly spaced rates from `rmin` to `rmax` (just `rmin` when `steps == 1`).
pub fn rate_grid(rmin: f64, rmax: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !(rmin > 0.0 && rmin < rmax && rmax.is_finite()) {
        return Err(CliError::validation(format!("need 0 < rmin < rmax, got rmin={rmin}, rmax={rmax}")));
    }
    if steps == 0 {
        return Err(CliError::validation("steps must be at least 1"));
    }
    if steps == 1 {
        return Ok(vec![rmin]);
    }
    Ok((0..steps)
        .map(|i| if i + 1 == steps { rmax } else { rmin + (rmax - rmin) * i as f64 / (steps - 1) as f64 })
        .collect())
}

const SATURATION_WARNING: &str =
    "warning: sphere-packing maximizer sits at the smallest alpha; upper bound may be understated";

pub const EXPONENT_HEADER: [&str; 8] =
    ["r", "lower", "upper", "equal", "alpha_lower", "alpha_upper", "r_c", "capacity"];

#[derive(Serialize)]
struct ExponentJson {
    r: f64,
    lower: f64,
    upper: f64,
    equal: bool,
    above_capacity: bool,
    alpha_lower: f64,
    alpha_upper: f64,
    r_c: f64,
    capacity: f64,
    saturated: bool,
}

#[allow(clippy::too_many_arguments)]
fn exponent(
    channel: &CQChannel,
    config: AnalysisConfig,
    rmin: f64,
    rmax: f64,
    steps: usize,
    units: Units,
    json: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> CliResult<()> {
    let rates = rate_grid(rmin, rmax, steps)?;
    let mut analyzer = ChannelAnalyzer::new(channel, config)?;
    analyzer.warm_up()?;
    let capacity = analyzer.capacity()?;
    let r_c = analyzer.critical_rate()?;
    let rows = rates.par_iter().map(|&r| analyzer.clone().exponent_row(r)).collect::<Result<Vec<_>, Error>>()?;
    if rows.iter().any(|row| row.saturated) {
        writeln!(err, "{SATURATION_WARNING}")?;
    }
    let emitted: Vec<(Vec<String>, ExponentJson)> = rows
        .iter()
        .map(|row| {
            let above = row.status == RowStatus::AboveCapacity;
            let equal = match (above, row.equal()) {
                (true, _) => "above_capacity",
                (false, true) => "1",
                (false, false) => "0",
            };
            let fields = vec![
                sig9(units.info(row.rate)),
                sig9(units.info(row.lower)),
                sig9(units.info(row.upper)),
                equal.to_string(),
                sig9(row.alpha_lower),
                sig9(row.alpha_upper),
                sig9(units.info(r_c)),
                sig9(units.info(capacity)),
            ];
            let json_row = ExponentJson {
                r: units.info(row.rate),
                lower: units.info(row.lower),
                upper: units.info(row.upper),
                equal: row.equal(),
                above_capacity: above,
                alpha_lower: row.alpha_lower,
                alpha_upper: row.alpha_upper,
                r_c: units.info(r_c),
                capacity: units.info(capacity),
                saturated: row.saturated,
            };
            (fields, json_row)
        })
        .collect();
    Ok(emit(out, json, &EXPONENT_HEADER, &emitted)?)
}

pub const SIMULATE_HEADER: [&str; 7] =
    ["n", "M", "best_pe", "mean_pe", "implied_exponent", "lower_bound", "upper_bound"];

#[derive(Serialize)]
struct SimulateJson {
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    best_pe: f64,
    mean_pe: f64,
    /// `null` when the best code is error-free.
    implied_exponent: Option<f64>,
    lower_bound: f64,
    upper_bound: f64,
    best_ml_pe: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    channel: &CQChannel,
    config: AnalysisConfig,
    limits: &Limits,
    rate: f64,
    n_list: &[usize],
    trials: usize,
    seed: u64,
    units: Units,
    json: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> CliResult<()> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(CliError::validation(format!("rate must be positive, got {rate}")));
    }
    if trials == 0 {
        return Err(CliError::validation("trials must be at least 1"));
    }
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(CliError::validation("n-list must hold positive blocklengths"));
    }
    let d = channel.output_dim();
    for &n in n_list {
        let dim = u32::try_from(n).ok().and_then(|e| d.checked_pow(e));
        if dim.map_or(true, |v| v > limits.max_block_dim) {
            return Err(Error::TooLarge {
                what: "n-fold output dimension",
                size: dim.map_or(u128::MAX, |v| v as u128),
                cap: limits.max_block_dim as u128,
            }
            .into());
        }
    }
    let mut analyzer = ChannelAnalyzer::new(channel, config)?;
    let bounds = analyzer.exponent_row(rate)?;
    if bounds.saturated {
        writeln!(err, "{SATURATION_WARNING}")?;
    }
    let prior = simulation_prior(&mut analyzer, rate)?;
    let transition = classical_transition(channel).ok();
    let plans = n_list.iter().map(|&n| TrialPlan::new(n, rate, &prior)).collect::<Result<Vec<_>, Error>>()?;

    let jobs: Vec<(usize, usize, ModeTag)> = (0..plans.len())
        .flat_map(|i| (0..trials).flat_map(move |t| [(i, t, ModeTag::Iid), (i, t, ModeTag::ConstantComposition)]))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(i, t, mode)| simulate_trial(channel, &plans[i], mode, seed, t, transition.as_deref(), limits))
        .collect::<Result<Vec<TrialOutcome>, Error>>()?;

    let per_plan = 2 * trials;
    let rows: Vec<(Vec<String>, SimulateJson)> = plans
        .iter()
        .zip(outcomes.chunks(per_plan))
        .map(|(plan, chunk)| {
            let summary = summarize(plan.n, plan.m, chunk.to_vec());
            let best_ml_pe = summary.trials.iter().filter_map(|t| t.ml_pe).reduce(f64::min);
            let implied = units.info(summary.implied_exponent);
            let fields = vec![
                summary.n.to_string(),
                summary.m.to_string(),
                sig9(summary.best_pe),
                sig9(summary.mean_pe),
                sig9(implied),
                sig9(units.info(bounds.lower)),
                sig9(units.info(bounds.upper)),
            ];
            let json_row = SimulateJson {
                n: summary.n,
                m: summary.m,
                best_pe: summary.best_pe,
                mean_pe: summary.mean_pe,
                implied_exponent: implied.is_finite().then_some(implied),
                lower_bound: units.info(bounds.lower),
                upper_bound: units.info(bounds.upper),
                best_ml_pe,
            };
            (fields, json_row)
        })
        .collect();
    Ok(emit(out, json, &SIMULATE_HEADER, &rows)?)
}

pub const BESTTYPE_HEADER: [&str; 4] = ["n", "best_type", "value_per_use", "I_alpha_target"];

#[derive(Serialize)]
struct BesttypeJson {
    n: usize,
    best_type: Vec<usize>,
    value_per_use: f64,
    #[serde(rename = "I_alpha_target")]
    target: f64,
}

#[allow(clippy::too_many_arguments)]
fn besttype(
    channel: &CQChannel,
    config: AnalysisConfig,
    limits: &Limits,
    alpha: f64,
    n_max: usize,
    units: Units,
    json: bool,
    out: &mut impl Write,
) -> CliResult<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::validation(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if n_max == 0 {
        return Err(CliError::validation("n-max must be at least 1"));
    }
    let a = Alpha::new(alpha)?;
    let best =
        (1..=n_max).into_par_iter().map(|n| best_type(channel, n, a, limits)).collect::<Result<Vec<_>, Error>>()?;
    let target = ChannelAnalyzer::new(channel, config)?.renyi_mi_channel(alpha)?.value;
    let rows: Vec<(Vec<String>, BesttypeJson)> = best
        .into_iter()
        .enumerate()
        .map(|(i, (t, v))| {
            let label = t.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":");
            let fields = vec![(i + 1).to_string(), label, sig9(units.info(v)), sig9(units.info(target))];
            let json_row = BesttypeJson {
                n: i + 1,
                best_type: t.counts().to_vec(),
                value_per_use: units.info(v),
                target: units.info(target),
            };
            (fields, json_row)
        })
        .collect();
    Ok(emit(out, json, &BESTTYPE_HEADER, &rows)?)
}
