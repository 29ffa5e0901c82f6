//! `kilab` subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kilab_core::bandlimited::{bernstein_jackson_check, sinc_collocate};
use kilab_core::catalog::TestFunction;
use kilab_core::collocate::{assemble, solve};
use kilab_core::harness::{InterpolationRoute, SweepConfig};
use kilab_core::kernels::{interpolator_conditions, regularity_sweep, ConditionLimits, KernelFamily, KernelKind};
use kilab_core::sites::{build_perturbed_lattice, scale, PerturbationRule};

use crate::config::{self, SuiteConfig, DEFAULT_SEED};
use crate::format::{fmt_f64, to_csv_string, to_json_string};
use crate::meta::Metadata;
use crate::reports::{bandlimited_json, convergence_csv, convergence_json, kernel_report, read_sites, regularity_report, SiteFile};
use crate::sweep::{run_parallel, SweepSettings};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "kilab", version, about = "Kernel interpolation at perturbed lattice sites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a perturbed lattice window and write it as a site file.
    Sites(SitesArgs),
    /// Check the interpolator conditions for one kernel, or the regularity
    /// conditions along a parameter sweep.
    CheckKernel(CheckKernelArgs),
    /// Interpolate a catalog function and tabulate the error.
    Interpolate(InterpolateArgs),
    /// Run one convergence sweep.
    Converge(ConvergeArgs),
    /// Run acceptance batteries and write their reports.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Zero,
    Sinusoidal,
    SeededUniform,
}

#[derive(Debug, Args)]
pub struct SitesArgs {
    /// Indices run over `-half_width..=half_width`.
    #[arg(long)]
    pub half_width: usize,
    #[arg(long, value_enum, default_value = "sinusoidal")]
    pub rule: RuleArg,
    #[arg(long, default_value_t = 0.2)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    pub frequency: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the Kadec check (the output is then not a Riesz basis in general).
    #[arg(long)]
    pub no_kadec: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckKernelArgs {
    /// gaussian, poisson or inverse_multiquadric (imq).
    #[arg(long)]
    pub kind: String,
    /// Family parameter (λ, α or c); ignored when --sweep is given.
    #[arg(long)]
    pub param: Option<f64>,
    /// Comma-separated parameters for a regularity sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<f64>>,
    #[arg(long, default_value_t = 8)]
    pub j_window: usize,
    #[arg(long, default_value_t = 64)]
    pub density: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    /// gaussian, poisson, inverse_multiquadric (imq) or sinc.
    #[arg(long)]
    pub kernel: String,
    /// Kernel parameter; unused for sinc.
    #[arg(long, default_value_t = 1.0)]
    pub param: f64,
    /// Site file as written by `kilab sites`.
    #[arg(long)]
    pub sites: PathBuf,
    #[arg(long)]
    pub h: f64,
    /// Catalog id of the target function.
    #[arg(long = "fn")]
    pub function: String,
    /// `a:b:n`, n equally spaced points including both ends.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Band-limited report (sinc kernel only).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Seminorm order for the report.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// The report's L2 error is taken on `[-t, t]`.
    #[arg(long, default_value_t = kilab_core::harness::DEFAULT_MEASURE_HALF_WIDTH)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long)]
    pub k: usize,
    /// Derivative order for the W2^j error.
    #[arg(long)]
    pub j: Option<usize>,
    /// gaussian or sinc.
    #[arg(long, default_value = "sinc")]
    pub route: String,
    /// JSON sweep settings (h_list, t, padding, points_per_unit, sites, cap, trust_threshold).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the h list of the settings.
    #[arg(long, value_delimiter = ',')]
    pub h_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Suite config; all twelve default batteries when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sites(a) => sites(a),
        Command::CheckKernel(a) => check_kernel(a),
        Command::Interpolate(a) => interpolate(a),
        Command::Converge(a) => converge(a),
        Command::Suite(a) => suite(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn function(id: &str) -> Result<TestFunction, Error> {
    TestFunction::from_id(id).ok_or_else(|| Error::Usage(format!("unknown catalog id `{id}`")))
}

fn kernel_kind(name: &str) -> Result<KernelKind, Error> {
    KernelKind::from_name(name).ok_or_else(|| Error::Usage(format!("unknown kernel `{name}`")))
}

fn sites(a: SitesArgs) -> Result<u8, Error> {
    let rule = match a.rule {
        RuleArg::Zero => PerturbationRule::Zero,
        RuleArg::Sinusoidal => {
            PerturbationRule::Sinusoidal { amplitude: a.amplitude, frequency: a.frequency, phase: a.phase }
        }
        RuleArg::SeededUniform => PerturbationRule::SeededUniform { amplitude: a.amplitude, seed: a.seed },
    };
    let s = build_perturbed_lattice(a.half_width, &rule, !a.no_kadec)?;
    emit(a.out.as_deref(), &to_json_string(&SiteFile::from_sites(&s)))?;
    Ok(0)
}

fn check_kernel(a: CheckKernelArgs) -> Result<u8, Error> {
    let kind = kernel_kind(&a.kind)?;
    let limits = ConditionLimits::default();
    let (text, pass) = match (&a.sweep, a.param) {
        (Some(params), _) => {
            let r = regularity_sweep(kind, params, a.j_window, a.density, &limits)?;
            (to_json_string(&regularity_report(&r)), r.r1 && r.r2 && r.r3)
        }
        (None, Some(p)) => {
            let kernel = KernelFamily::new(kind, p)?;
            let r = interpolator_conditions(&kernel, a.j_window, a.density, &limits)?;
            (to_json_string(&kernel_report(&kernel, &r)), r.flags.all())
        }
        (None, None) => return Err(Error::Usage("check-kernel needs --param or --sweep".into())),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(if pass { 0 } else { 1 })
}

/// Parses `a:b:n` into `n` equally spaced points.
pub fn parse_eval(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Usage(format!("--eval expects a:b:n, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() || (n > 1 && b < a) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect())
}

fn interpolate(a: InterpolateArgs) -> Result<u8, Error> {
    let g = function(&a.function)?;
    let xs = parse_eval(&a.eval)?;
    let base = read_sites(&a.sites)?;
    let scaled = scale(&base, a.h)?;
    let y: Vec<f64> = scaled.points().iter().map(|&x| g.eval(x)).collect();
    let values = if a.kernel == "sinc" {
        sinc_collocate(&scaled, &y)?.eval_many(&xs)
    } else {
        if a.report.is_some() {
            return Err(Error::Usage("--report is only available with --kernel sinc".into()));
        }
        let kernel = KernelFamily::new(kernel_kind(&a.kernel)?, a.param)?;
        solve(&assemble(kernel, &scaled)?, &y)?.eval_many(&xs)
    };
    let rows: Vec<Vec<String>> = xs
        .iter()
        .zip(&values)
        .map(|(&x, &v)| {
            let t = g.eval(x);
            vec![fmt_f64(x), fmt_f64(v), fmt_f64(t), fmt_f64((v - t).abs())]
        })
        .collect();
    emit(a.out.as_deref(), &to_csv_string(&["x", "interpolant", "target", "abs_error"], &rows))?;
    if let Some(path) = &a.report {
        let r = bernstein_jackson_check(g, a.k, &base, a.h, a.t, kilab_core::harness::DEFAULT_POINTS_PER_UNIT)?;
        let mut json = bandlimited_json(&r);
        let cfg = serde_json::json!({"fn": g.id(), "k": a.k, "h": a.h, "t": a.t, "sites": SiteFile::from_sites(&base)});
        json["metadata"] = serde_json::to_value(Metadata::new(DEFAULT_SEED, &cfg)).expect("metadata serializes");
        fs::write(path, to_json_string(&json)).map_err(|e| Error::io(path, e))?;
    }
    Ok(0)
}

fn converge(a: ConvergeArgs) -> Result<u8, Error> {
    let g = function(&a.function)?;
    let route = InterpolationRoute::from_name(&a.route)
        .ok_or_else(|| Error::Usage(format!("unknown route `{}` (gaussian or sinc)", a.route)))?;
    let mut settings: SweepSettings = match &a.config {
        Some(p) => config::parse(&read(p)?)?,
        None if route == InterpolationRoute::Gaussian => SweepSettings::gaussian(),
        None => SweepSettings::sinc(),
    };
    if let Some(h) = a.h_list {
        settings.h_list = h.try_into().map_err(|e: String| Error::Usage(format!("--h-list: {e}")))?;
    }
    let mut cfg = SweepConfig::new(g, a.k, route, settings.h_list.0.clone());
    settings.apply(&mut cfg);
    cfg.j = a.j;
    let report = run_parallel(&cfg)?;
    emit(a.out.as_deref(), &convergence_csv(&report))?;
    if let Some(path) = &a.json {
        let text = to_json_string(&convergence_json(&cfg, &report, a.seed));
        fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(0)
}

fn suite(a: SuiteArgs) -> Result<u8, Error> {
    let mut config = match &a.config {
        Some(p) => config::parse::<SuiteConfig>(&read(p)?)?,
        None => SuiteConfig::default_suite(),
    };
    if a.threads.is_some() {
        config.threads = a.threads;
    }
    if let Some(s) = a.seed {
        config.seed = s;
    }
    let result = crate::suite::run_and_write(&config, &a.out)?;
    for o in &result.outcomes {
        eprintln!("{}", o.summary_line());
    }
    Ok(if result.pass() { 0 } else { 1 })
}
