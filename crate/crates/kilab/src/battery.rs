//! The twelve acceptance batteries. Thresholds live in [`thresholds`] and are
//! not configurable; configs only move the experiment (h lists, windows, sites).

use std::f64::consts::PI;
use std::time::Instant;

use kilab_core::bandlimited::sinc_collocate;
use kilab_core::catalog::{TestFunction, CATALOG};
use kilab_core::collocate::{assemble_with, interpolate_scaled, solve, spectral_discrepancy, AssemblyOptions};
use kilab_core::harness::{halving_ratios, site_window, stability, InterpolationRoute, SweepConfig};
use kilab_core::kernels::{
    closed_form_band_inf, closed_form_band_sup, interpolator_conditions, regularity_sweep, ConditionLimits, KernelFamily,
    KernelKind,
};
use kilab_core::norms::{compare_routes, divided_bound_check, sample_bound_check};
use kilab_core::sites::{build_perturbed_lattice, riesz_bounds, scale, PerturbationRule, SiteSequence};
use kilab_core::Error as CoreError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{FnId, HList, Positive, SitesConfig};
use crate::reports::{regularity_report, row_json};
use crate::sweep::{run_parallel, zeros_lemma_parallel, SweepSettings};

pub mod thresholds {
    use kilab_core::catalog::TestFunction;

    /// Criterion 1
    pub const RESIDUAL_REL: f64 = 1e-8;
    pub const RESIDUAL_MAX_COND: f64 = 1e12;
    pub const RESIDUAL_MAX_SITES: usize = 512;
    pub const SOLVE_SECONDS: f64 = 1.0;
    /// Criterion 2: `(g, k, lo, hi)`
    pub const SINC_RATE_BANDS: [(TestFunction, usize, f64, f64); 3] = [
        (TestFunction::BSpline3, 3, 2.7, 3.4),
        (TestFunction::BSpline2, 2, 1.7, 2.35),
        (TestFunction::BSpline1, 1, 0.7, 1.4),
    ];
    /// Criterion 3: rate ≥ k − slack
    pub const GAUSSIAN_RATE_SLACK: f64 = 0.35;
    /// Criterion 4: `(g, k, j)`, rate within ±tol of k − j
    pub const DERIVATIVE_CASES: [(TestFunction, usize, usize); 3] =
        [(TestFunction::BSpline3, 3, 1), (TestFunction::BSpline3, 3, 2), (TestFunction::BSpline2, 2, 1)];
    pub const DERIVATIVE_RATE_TOL: f64 = 0.35;
    /// Criterion 5
    pub const STABILITY_SPREAD: f64 = 3.0;
    pub const STABILITY_TREND: f64 = 0.2;
    /// Criterion 6
    pub const CONSTANT_CASES: usize = 100;
    pub const CONSTANT_P: [f64; 3] = [1.0, 2.0, 4.0];
    /// Criterion 7
    pub const BAND_MATCH_REL: f64 = 1e-6;
    /// Criterion 8
    pub const SPECTRAL_REL: f64 = 1e-6;
    pub const SPECTRAL_SITES: usize = 33;
    /// Criterion 9
    pub const RIESZ_ABS: f64 = 1e-12;
    /// Criterion 10
    pub const PARSEVAL_REL: f64 = 1e-6;
    pub const PARSEVAL_MAX_K: usize = 3;
    /// Criterion 11
    pub const ZEROS_LEMMA_SPREAD: f64 = 10.0;
    /// Criterion 12
    pub const SATURATION_FLOOR: f64 = 1e-4;
    pub const HALVING_RATIO: f64 = 4.0;

    /// Wall-clock budget per criterion in seconds, where one is stated.
    pub fn runtime_budget(criterion: u8) -> Option<f64> {
        match criterion {
            2 => Some(120.0),
            3 => Some(180.0),
            6 => Some(60.0),
            _ => None,
        }
    }
}

use thresholds::*;

/// One measured quantity against its pinned threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, measured: f64, threshold: impl Into<String>, pass: bool) -> Self {
        Check { label: label.into(), measured, threshold: threshold.into(), pass }
    }
    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(label, measured, format!("<= {bound:e}"), measured <= bound)
    }
    fn within(label: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self::new(label, measured, format!("in [{lo}, {hi}]"), (lo..=hi).contains(&measured))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryOutcome {
    pub battery: &'static str,
    pub criterion: u8,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Set when the battery could not run to completion.
    pub error: Option<String>,
    pub data: Value,
    /// Wall-clock facts; printed, never written to reports.
    #[serde(skip)]
    pub timing: Vec<(String, f64)>,
}

impl BatteryOutcome {
    /// `criterion  2 rate_sinc: FAIL (1/3 checks) ...`
    pub fn summary_line(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let mut line = format!(
            "criterion {:>2} {}: {} ({passed}/{} checks)",
            self.criterion,
            self.battery,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        for c in self.checks.iter().filter(|c| !c.pass) {
            line.push_str(&format!("; {} = {:.6e} not {}", c.label, c.measured, c.threshold));
        }
        if let Some(e) = &self.error {
            line.push_str(&format!("; error: {e}"));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatteryConfig {
    InterpolationCondition(InterpolationConditionConfig),
    RateSinc(SweepSettings),
    RateGaussian(SweepSettings),
    DerivativeRates(SweepSettings),
    Stability(StabilityConfig),
    ExplicitConstants(ConstantsConfig),
    KernelConditions(KernelConditionsConfig),
    SpectralIdentity(SpectralConfig),
    RieszSanity(RieszConfig),
    Parseval(ParsevalConfig),
    MadychPotter(ZerosLemmaConfig),
    Saturation(SaturationConfig),
}

impl BatteryConfig {
    /// Default battery for criterion `n` (1..=12).
    pub fn for_criterion(n: u8) -> Option<Self> {
        Some(match n {
            1 => BatteryConfig::InterpolationCondition(Default::default()),
            2 => BatteryConfig::RateSinc(SweepSettings::sinc()),
            3 => BatteryConfig::RateGaussian(SweepSettings::gaussian()),
            4 => BatteryConfig::DerivativeRates(SweepSettings::sinc()),
            5 => BatteryConfig::Stability(Default::default()),
            6 => BatteryConfig::ExplicitConstants(Default::default()),
            7 => BatteryConfig::KernelConditions(Default::default()),
            8 => BatteryConfig::SpectralIdentity(Default::default()),
            9 => BatteryConfig::RieszSanity(Default::default()),
            10 => BatteryConfig::Parseval(Default::default()),
            11 => BatteryConfig::MadychPotter(Default::default()),
            12 => BatteryConfig::Saturation(Default::default()),
            _ => return None,
        })
    }

    pub fn all_defaults() -> Vec<Self> {
        (1..=12).filter_map(Self::for_criterion).collect()
    }

    pub fn criterion(&self) -> u8 {
        match self {
            BatteryConfig::InterpolationCondition(_) => 1,
            BatteryConfig::RateSinc(_) => 2,
            BatteryConfig::RateGaussian(_) => 3,
            BatteryConfig::DerivativeRates(_) => 4,
            BatteryConfig::Stability(_) => 5,
            BatteryConfig::ExplicitConstants(_) => 6,
            BatteryConfig::KernelConditions(_) => 7,
            BatteryConfig::SpectralIdentity(_) => 8,
            BatteryConfig::RieszSanity(_) => 9,
            BatteryConfig::Parseval(_) => 10,
            BatteryConfig::MadychPotter(_) => 11,
            BatteryConfig::Saturation(_) => 12,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BatteryConfig::InterpolationCondition(_) => "interpolation_condition",
            BatteryConfig::RateSinc(_) => "rate_sinc",
            BatteryConfig::RateGaussian(_) => "rate_gaussian",
            BatteryConfig::DerivativeRates(_) => "derivative_rates",
            BatteryConfig::Stability(_) => "stability",
            BatteryConfig::ExplicitConstants(_) => "explicit_constants",
            BatteryConfig::KernelConditions(_) => "kernel_conditions",
            BatteryConfig::SpectralIdentity(_) => "spectral_identity",
            BatteryConfig::RieszSanity(_) => "riesz_sanity",
            BatteryConfig::Parseval(_) => "parseval",
            BatteryConfig::MadychPotter(_) => "madych_potter",
            BatteryConfig::Saturation(_) => "saturation",
        }
    }

    /// Runs the battery; numerical errors become a failed outcome, not a panic.
    pub fn run(&self, seed: u64) -> BatteryOutcome {
        let mut timing = Vec::new();
        let start = Instant::now();
        let result = match self {
            BatteryConfig::InterpolationCondition(c) => interpolation_condition(c, &mut timing),
            BatteryConfig::RateSinc(c) => rate_sinc(c),
            BatteryConfig::RateGaussian(c) => rate_gaussian(c),
            BatteryConfig::DerivativeRates(c) => derivative_rates(c),
            BatteryConfig::Stability(c) => stability_battery(c),
            BatteryConfig::ExplicitConstants(c) => explicit_constants(c, seed),
            BatteryConfig::KernelConditions(c) => kernel_conditions(c),
            BatteryConfig::SpectralIdentity(c) => spectral_identity(c),
            BatteryConfig::RieszSanity(c) => riesz_sanity(c),
            BatteryConfig::Parseval(_) => parseval(),
            BatteryConfig::MadychPotter(c) => zeros_lemma(c),
            BatteryConfig::Saturation(c) => saturation(c),
        };
        timing.push(("battery seconds".into(), start.elapsed().as_secs_f64()));
        let (checks, data, error) = match result {
            Ok((checks, data)) => (checks, data, None),
            Err(e) => (Vec::new(), Value::Null, Some(e.to_string())),
        };
        let pass = error.is_none() && !checks.is_empty() && checks.iter().all(|c| c.pass);
        BatteryOutcome { battery: self.name(), criterion: self.criterion(), pass, checks, error, data, timing }
    }
}

type Outcome = Result<(Vec<Check>, Value), CoreError>;

fn sweep_config(g: TestFunction, k: usize, route: InterpolationRoute, settings: &SweepSettings) -> SweepConfig {
    let mut c = SweepConfig::new(g, k, route, settings.h_list.0.clone());
    settings.apply(&mut c);
    c
}

fn fmt_rate(r: Option<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

// ---- 1 ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kind: KernelKindName,
    pub parameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKindName {
    Gaussian,
    Poisson,
    InverseMultiquadric,
}

impl KernelKindName {
    pub fn kind(self) -> KernelKind {
        match self {
            KernelKindName::Gaussian => KernelKind::Gaussian,
            KernelKindName::Poisson => KernelKind::Poisson,
            KernelKindName::InverseMultiquadric => KernelKind::InverseMultiquadric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterpolationConditionConfig {
    pub functions: Vec<FnId>,
    pub gaussian: SweepSettings,
    pub sinc: SweepSettings,
    /// Further kernels collocated at the scaled sites.
    pub other_kernels: Vec<KernelSpec>,
    pub other_h: HList,
}

impl Default for InterpolationConditionConfig {
    fn default() -> Self {
        InterpolationConditionConfig {
            functions: CATALOG.iter().map(|g| FnId(*g)).collect(),
            gaussian: SweepSettings::gaussian(),
            sinc: SweepSettings::sinc(),
            other_kernels: vec![
                KernelSpec { kind: KernelKindName::Poisson, parameter: 1.0 },
                KernelSpec { kind: KernelKindName::InverseMultiquadric, parameter: 1.0 },
            ],
            other_h: HList(vec![1.0, 0.5]),
        }
    }
}

struct Solve {
    label: String,
    n: usize,
    cond: f64,
    residual: f64,
    max_y: f64,
    seconds: f64,
}

fn interpolation_condition(c: &InterpolationConditionConfig, timing: &mut Vec<(String, f64)>) -> Outcome {
    // (label, kernel or None for sinc, h, settings)
    let mut jobs: Vec<(String, Option<KernelFamily>, f64, &SweepSettings)> = Vec::new();
    for &h in &c.gaussian.h_list.0 {
        jobs.push((format!("gaussian h={h}"), Some(KernelFamily::gaussian(1.0)?), h, &c.gaussian));
    }
    for &h in &c.sinc.h_list.0 {
        jobs.push((format!("sinc h={h}"), None, h, &c.sinc));
    }
    for spec in &c.other_kernels {
        let kernel = KernelFamily::new(spec.kind.kind(), spec.parameter)?;
        for &h in &c.other_h.0 {
            jobs.push((format!("{} {} h={h}", spec.kind.kind().name(), spec.parameter), Some(kernel), h, &c.gaussian));
        }
    }
    let solves: Vec<Solve> = jobs
        .par_iter()
        .map(|(label, kernel, h, settings)| -> Result<Vec<Solve>, CoreError> {
            let cfg = sweep_config(TestFunction::Zero, 0, InterpolationRoute::Gaussian, settings);
            let sites = site_window(&cfg, *h)?;
            let scaled = scale(&sites, *h)?;
            let mut out = Vec::new();
            for g in &c.functions {
                let y: Vec<f64> = scaled.points().iter().map(|&x| g.0.eval(x)).collect();
                let max_y = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let start = Instant::now();
                let (cond, residual) = match kernel {
                    Some(k) => {
                        let options = AssemblyOptions { cap: settings.cap, ..AssemblyOptions::default() };
                        let i = solve(&assemble_with(*k, &scaled, &options)?, &y)?;
                        (i.condition_estimate(), i.max_site_residual())
                    }
                    None => {
                        let f = sinc_collocate(&scaled, &y)?;
                        (f.condition_estimate(), f.max_site_residual())
                    }
                };
                out.push(Solve {
                    label: format!("{label} {}", g.0.id()),
                    n: scaled.len(),
                    cond,
                    residual,
                    max_y,
                    seconds: start.elapsed().as_secs_f64(),
                });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let eligible: Vec<&Solve> =
        solves.iter().filter(|s| s.n <= RESIDUAL_MAX_SITES && s.cond <= RESIDUAL_MAX_COND).collect();
    let worst = eligible.iter().map(|s| s.residual / (1.0 + s.max_y)).fold(0.0, f64::max);
    let slowest = solves.iter().map(|s| s.seconds).fold(0.0, f64::max);
    let over_budget = solves.iter().filter(|s| s.seconds > SOLVE_SECONDS).count();
    timing.push(("slowest solve seconds".into(), slowest));
    let checks = vec![
        Check::new("eligible solves", eligible.len() as f64, ">= 1", !eligible.is_empty()),
        Check::at_most("max residual / (1 + max|y|)", worst, RESIDUAL_REL),
        Check::new("solves over the time budget", over_budget as f64, format!("0 (budget {SOLVE_SECONDS} s)"), over_budget == 0),
    ];
    let data = json!({
        "solves": solves.iter().map(|s| json!({
            "label": s.label,
            "n_sites": s.n,
            "cond_est": s.cond,
            "max_site_residual": s.residual,
            "max_abs_y": s.max_y,
            "eligible": s.n <= RESIDUAL_MAX_SITES && s.cond <= RESIDUAL_MAX_COND,
        })).collect::<Vec<_>>(),
    });
    Ok((checks, data))
}

// ---- 2, 3, 4 --------------------------------------------------------------

fn sweep_json(cfg: &SweepConfig, r: &kilab_core::harness::ConvergenceReport) -> Value {
    json!({
        "function": cfg.function.id(),
        "k": cfg.k,
        "j": cfg.j,
        "route": cfg.route.name(),
        "rows": r.rows.iter().map(row_json).collect::<Vec<_>>(),
        "fitted_rate": r.fitted_rate,
        "fitted_rate_w2j": r.fitted_rate_w2j,
        "excluded_rows": r.excluded,
        "fit_note": r.fit_note,
        "tail_bound": r.tail_bound,
    })
}

fn rate_sinc(c: &SweepSettings) -> Outcome {
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    for (g, k, lo, hi) in SINC_RATE_BANDS {
        let cfg = sweep_config(g, k, InterpolationRoute::Sinc, c);
        let r = run_parallel(&cfg)?;
        checks.push(Check::within(format!("{} L2 rate", g.id()), fmt_rate(r.fitted_rate), lo, hi));
        sweeps.push(sweep_json(&cfg, &r));
    }
    Ok((checks, json!({ "sweeps": sweeps })))
}

fn rate_gaussian(c: &SweepSettings) -> Outcome {
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    for (g, k, _, _) in SINC_RATE_BANDS {
        let cfg = sweep_config(g, k, InterpolationRoute::Gaussian, c);
        let r = run_parallel(&cfg)?;
        let floor = k as f64 - GAUSSIAN_RATE_SLACK;
        let rate = fmt_rate(r.fitted_rate);
        checks.push(Check::new(format!("{} L2 rate", g.id()), rate, format!(">= {floor}"), rate >= floor));
        sweeps.push(sweep_json(&cfg, &r));
    }
    Ok((checks, json!({ "sweeps": sweeps })))
}

fn derivative_rates(c: &SweepSettings) -> Outcome {
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    for (g, k, j) in DERIVATIVE_CASES {
        let mut cfg = sweep_config(g, k, InterpolationRoute::Sinc, c);
        cfg.j = Some(j);
        let r = run_parallel(&cfg)?;
        let target = (k - j) as f64;
        checks.push(Check::within(
            format!("{} W2^{j} rate (k={k})", g.id()),
            fmt_rate(r.fitted_rate_w2j),
            target - DERIVATIVE_RATE_TOL,
            target + DERIVATIVE_RATE_TOL,
        ));
        sweeps.push(sweep_json(&cfg, &r));
    }
    Ok((checks, json!({ "sweeps": sweeps })))
}

// ---- 5 ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityConfig {
    pub sinc: SweepSettings,
    pub gaussian: SweepSettings,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { sinc: SweepSettings::sinc(), gaussian: SweepSettings::gaussian() }
    }
}

fn stability_battery(c: &StabilityConfig) -> Outcome {
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    for (route, settings) in [(InterpolationRoute::Sinc, &c.sinc), (InterpolationRoute::Gaussian, &c.gaussian)] {
        for (g, k, _, _) in SINC_RATE_BANDS {
            let cfg = sweep_config(g, k, route, settings);
            let r = run_parallel(&cfg)?;
            let tag = format!("{} {}", route.name(), g.id());
            match stability(&r.rows) {
                Ok(s) => {
                    checks.push(Check::at_most(format!("{tag} ratio max/min"), s.spread, STABILITY_SPREAD));
                    checks.push(Check::new(
                        format!("{tag} ratio trend"),
                        s.trend,
                        format!("in [-{STABILITY_TREND}, {STABILITY_TREND}]"),
                        s.trend.abs() <= STABILITY_TREND,
                    ));
                }
                Err(e) => checks.push(Check::new(format!("{tag} ratio trend"), f64::NAN, e.to_string(), false)),
            }
            sweeps.push(sweep_json(&cfg, &r));
        }
    }
    Ok((checks, json!({ "sweeps": sweeps })))
}

// ---- 6 ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsConfig {
    /// Largest window half-width drawn.
    pub max_half_width: usize,
    /// Smallest `h` drawn.
    pub h_min: Positive,
    /// Largest perturbation amplitude drawn.
    pub max_amplitude: crate::config::Amplitude,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig { max_half_width: 40, h_min: Positive(0.05), max_amplitude: crate::config::Amplitude(0.24) }
    }
}

/// One randomized case, fully determined by `(seed, index)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantCase {
    pub index: usize,
    pub function: &'static str,
    pub k: usize,
    pub p: f64,
    pub h: f64,
    pub half_width: usize,
    pub amplitude: f64,
    pub site_seed: u64,
    pub lemma_lhs: f64,
    pub lemma_rhs: f64,
    pub lemma_pass: bool,
    pub sampling_lhs: f64,
    pub sampling_rhs: f64,
    pub sampling_pass: bool,
}

pub fn constant_case(c: &ConstantsConfig, seed: u64, index: usize) -> Result<ConstantCase, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let k = rng.random_range(1..=3usize);
    let candidates: Vec<TestFunction> = CATALOG.iter().copied().filter(|g| g.admits(k)).collect();
    let g = candidates[rng.random_range(0..candidates.len())];
    let p = CONSTANT_P[rng.random_range(0..CONSTANT_P.len())];
    let amplitude = rng.random_range(0.0..c.max_amplitude.0);
    let site_seed: u64 = rng.random();
    let half_width = rng.random_range((k + 1)..=c.max_half_width.max(k + 1));
    let h = rng.random_range(c.h_min.0.min(1.0)..=1.0);
    let sites = build_perturbed_lattice(half_width, &PerturbationRule::SeededUniform { amplitude, seed: site_seed }, true)?;
    let lemma = divided_bound_check(g, k, &sites, h, p)?;
    let scaled = scale(&sites, h)?;
    let sampling = sample_bound_check(g, scaled.points(), p)?;
    Ok(ConstantCase {
        index,
        function: g.id(),
        k,
        p,
        h,
        half_width,
        amplitude,
        site_seed,
        lemma_lhs: lemma.lhs,
        lemma_rhs: lemma.rhs,
        lemma_pass: lemma.pass,
        sampling_lhs: sampling.lhs,
        sampling_rhs: sampling.rhs,
        sampling_pass: sampling.pass,
    })
}

fn explicit_constants(c: &ConstantsConfig, seed: u64) -> Outcome {
    let cases = (0..CONSTANT_CASES)
        .into_par_iter()
        .map(|i| constant_case(c, seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    let ratio = |l: f64, r: f64| if l == 0.0 { 0.0 } else { l / r };
    let lemma_fail = cases.iter().filter(|c| !c.lemma_pass).count();
    let sampling_fail = cases.iter().filter(|c| !c.sampling_pass).count();
    let worst_lemma = cases.iter().map(|c| ratio(c.lemma_lhs, c.lemma_rhs)).fold(0.0, f64::max);
    let worst_sampling = cases.iter().map(|c| ratio(c.sampling_lhs, c.sampling_rhs)).fold(0.0, f64::max);
    let checks = vec![
        Check::new("cases", cases.len() as f64, format!("= {CONSTANT_CASES}"), cases.len() == CONSTANT_CASES),
        Check::new("divided-difference bound violations", lemma_fail as f64, "= 0", lemma_fail == 0),
        Check::new("sampling bound violations", sampling_fail as f64, "= 0", sampling_fail == 0),
    ];
    let data = json!({
        "worst_lemma_ratio": worst_lemma,
        "worst_sampling_ratio": worst_sampling,
        "cases": cases,
    });
    Ok((checks, data))
}

// ---- 7 ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConditionsConfig {
    pub gaussian_lambdas: Vec<f64>,
    pub poisson_alphas: Vec<f64>,
    pub j_window: usize,
    pub grid_density: usize,
}

impl Default for KernelConditionsConfig {
    fn default() -> Self {
        KernelConditionsConfig {
            gaussian_lambdas: vec![1.0, 0.5, 0.1],
            poisson_alphas: vec![1.0, 2.0, 4.0, 8.0],
            j_window: 8,
            grid_density: 64,
        }
    }
}

fn kernel_conditions(c: &KernelConditionsConfig) -> Outcome {
    let limits = ConditionLimits::default();
    let families = [(KernelKind::Gaussian, &c.gaussian_lambdas), (KernelKind::Poisson, &c.poisson_alphas)];
    let mut checks = Vec::new();
    let mut members = Vec::new();
    let mut sweeps = Vec::new();
    for (kind, params) in families {
        for &p in params.iter() {
            let kernel = KernelFamily::new(kind, p)?;
            let r = interpolator_conditions(&kernel, c.j_window, c.grid_density, &limits)?;
            let tag = format!("{} {p}", kind.name());
            let flags = [r.flags.a1, r.flags.a2, r.flags.a3];
            let failed = flags.iter().filter(|f| !**f).count();
            checks.push(Check::new(format!("{tag} A1-A3 failures"), failed as f64, "= 0", failed == 0));
            let mut worst = 0.0f64;
            for &(j, v) in &r.bands {
                if let Some(exact) = closed_form_band_sup(&kernel, j) {
                    worst = worst.max((v - exact).abs() / exact);
                }
            }
            if let Some(exact) = closed_form_band_inf(&kernel) {
                worst = worst.max((r.m - exact).abs() / exact);
            }
            checks.push(Check::at_most(format!("{tag} band extrema vs closed form"), worst, BAND_MATCH_REL));
            members.push(crate::reports::kernel_report(&kernel, &r));
        }
        let sweep = regularity_sweep(kind, params, c.j_window, c.grid_density, &limits)?;
        let finite = sweep.entries.iter().all(|e| e.report.ratio.is_finite());
        checks.push(Check::new(format!("{} R2 max ratio", kind.name()), sweep.max_ratio, "finite", finite));
        checks.push(Check::new(
            format!("{} R2 ratios decreasing along the sweep", kind.name()),
            if sweep.ratios_decreasing { 1.0 } else { 0.0 },
            "= 1",
            sweep.ratios_decreasing,
        ));
        sweeps.push(regularity_report(&sweep));
    }
    Ok((checks, json!({ "members": members, "sweeps": sweeps })))
}

// ---- 8 ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub functions: Vec<FnId>,
    pub sites: SitesConfig,
    /// Samples cover `[-grid_half_width, grid_half_width)`.
    pub grid_half_width: Positive,
    pub grid_log2: u32,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            functions: vec![FnId(TestFunction::Gauss), FnId(TestFunction::Matern2), FnId(TestFunction::BSpline3)],
            sites: SitesConfig::default(),
            grid_half_width: Positive(32.0),
            grid_log2: 14,
        }
    }
}

fn spectral_identity(c: &SpectralConfig) -> Outcome {
    let sites = build_perturbed_lattice(SPECTRAL_SITES / 2, &c.sites.rule(), true)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for g in &c.functions {
        let interp = interpolate_scaled(&sites, 1.0, g.0)?;
        let d = spectral_discrepancy(&interp, c.grid_half_width.0, 1usize << c.grid_log2, PI)?;
        checks.push(Check::at_most(format!("{} relative L2 on [-pi, pi]", g.0.id()), d, SPECTRAL_REL));
        rows.push(json!({"function": g.0.id(), "relative_l2": d, "cond_est": interp.condition_estimate()}));
    }
    Ok((checks, json!({ "n_sites": sites.len(), "results": rows })))
}

// ---- 9 ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RieszConfig {
    pub half_width: usize,
    pub rejected_amplitudes: Vec<f64>,
    /// A perturbed window whose bounds are recorded for reference.
    pub reference_sites: SitesConfig,
}

impl Default for RieszConfig {
    fn default() -> Self {
        RieszConfig { half_width: 32, rejected_amplitudes: vec![0.25, 0.3], reference_sites: SitesConfig::default() }
    }
}

fn riesz_sanity(c: &RieszConfig) -> Outcome {
    let lattice = SiteSequence::lattice(c.half_width);
    let b = riesz_bounds(&lattice)?;
    let two_pi = 2.0 * PI;
    let mut checks = vec![
        Check::at_most("lattice lower eigenvalue - 2pi", (b.lower - two_pi).abs(), RIESZ_ABS),
        Check::at_most("lattice upper eigenvalue - 2pi", (b.upper - two_pi).abs(), RIESZ_ABS),
    ];
    for &a in &c.rejected_amplitudes {
        let rule = PerturbationRule::sinusoidal(a);
        let rejected = matches!(build_perturbed_lattice(c.half_width, &rule, true), Err(CoreError::KadecViolation { .. }));
        checks.push(Check::new(format!("amplitude {a} rejected"), a, "KadecViolation", rejected));
    }
    let reference = build_perturbed_lattice(c.half_width, &c.reference_sites.rule(), true)?;
    let rb = riesz_bounds(&reference)?;
    let data = json!({
        "lattice": {"lower": b.lower, "upper": b.upper, "basis_constant": b.basis_constant()},
        "reference": {"lower": rb.lower, "upper": rb.upper, "basis_constant": rb.basis_constant(),
                      "q": reference.q(), "Q": reference.big_q(), "kadec_margin": reference.kadec_margin()},
    });
    Ok((checks, data))
}

// ---- 10 -----------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParsevalConfig {}

fn parseval() -> Outcome {
    let mut checks = Vec::new();
    let mut norms = Vec::new();
    for g in CATALOG {
        let top = g.k_max().unwrap_or(PARSEVAL_MAX_K).min(PARSEVAL_MAX_K);
        for k in 0..=top {
            let cmp = compare_routes(g, k)?;
            let met = cmp.relative_gap <= PARSEVAL_REL;
            checks.push(Check::at_most(format!("{} k={k} relative gap", g.id()), cmp.relative_gap, PARSEVAL_REL));
            for (route, value) in [("freq", cmp.frequency), ("space", cmp.space)] {
                norms.push(json!({"id": g.id(), "k": k, "route": route, "value": value, "tolerance_met": met}));
            }
        }
    }
    Ok((checks, json!({ "norms": norms })))
}

// ---- 11 -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZerosLemmaConfig {
    pub function: FnId,
    pub k: usize,
    pub sweep: SweepSettings,
}

impl Default for ZerosLemmaConfig {
    fn default() -> Self {
        // phase 0 puts a site at the origin, where gauss is itself a kernel
        // translate and the residual vanishes identically
        let sweep = SweepSettings { sites: SitesConfig::with_phase(0.5), ..SweepSettings::gaussian() };
        ZerosLemmaConfig { function: FnId(TestFunction::Gauss), k: 2, sweep }
    }
}

fn zeros_lemma(c: &ZerosLemmaConfig) -> Outcome {
    let cfg = sweep_config(c.function.0, c.k, InterpolationRoute::Gaussian, &c.sweep);
    let reports = zeros_lemma_parallel(&cfg)?;
    let trusted: Vec<f64> = reports
        .iter()
        .filter(|r| r.trusted && r.rhs_ratio.is_finite() && r.rhs_ratio > 0.0)
        .map(|r| r.rhs_ratio)
        .collect();
    let max = trusted.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = trusted.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if trusted.len() >= 2 { max / min } else { f64::NAN };
    let checks = vec![
        Check::new("trusted rows", trusted.len() as f64, ">= 2", trusted.len() >= 2),
        Check::at_most("rhs_ratio max/min", spread, ZEROS_LEMMA_SPREAD),
    ];
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "h": r.h, "fill_distance": r.fill_distance, "lhs": r.lhs,
                "seminorm_residual": r.seminorm_residual, "rhs_ratio": r.rhs_ratio, "cond_est": r.cond_est,
                "trusted": r.trusted,
            })
        })
        .collect();
    Ok((checks, json!({ "function": c.function.0.id(), "k": c.k, "rows": rows })))
}

// ---- 12 -----------------------------------------------------------------

/// Padding of the saturation battery's sinc sweep.
pub const SATURATION_PADDING: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaturationConfig {
    pub sinc: SweepSettings,
    pub gaussian: SweepSettings,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        // at P = 8 the missing samples of the 1/x² tail beyond the window,
        // not the interpolation, set the floor near 1e-4
        let sinc = SweepSettings { padding: Positive(SATURATION_PADDING), ..SweepSettings::sinc() };
        let gaussian = SweepSettings { sites: SitesConfig::with_phase(0.5), ..SweepSettings::gaussian() };
        SaturationConfig { sinc, gaussian }
    }
}

fn saturation(c: &SaturationConfig) -> Outcome {
    let band = sweep_config(TestFunction::SincSq, 1, InterpolationRoute::Sinc, &c.sinc);
    let band_report = run_parallel(&band)?;
    let floor = band_report.rows.iter().map(|r| r.err_l2).fold(0.0, f64::max);
    let smooth = sweep_config(TestFunction::Gauss, 2, InterpolationRoute::Gaussian, &c.gaussian);
    let smooth_report = run_parallel(&smooth)?;
    let halvings = halving_ratios(&smooth_report.rows);
    let weakest = halvings.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check::at_most("sinc_sq max err_l2 over the sinc sweep", floor, SATURATION_FLOOR),
        Check::new("gauss halving pairs", halvings.len() as f64, ">= 1", !halvings.is_empty()),
        Check::new(
            "gauss weakest halving ratio",
            weakest,
            format!("> {HALVING_RATIO}"),
            weakest > HALVING_RATIO && weakest.is_finite(),
        ),
    ];
    let data = json!({
        "sinc_sq": sweep_json(&band, &band_report),
        "gauss": sweep_json(&smooth, &smooth_report),
        "halving_ratios": halvings.iter().map(|(h, r)| json!({"h": h, "ratio": r})).collect::<Vec<_>>(),
    });
    Ok((checks, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_are_numbered_and_named() {
        let all = BatteryConfig::all_defaults();
        assert_eq!(all.len(), 12);
        for (i, b) in all.iter().enumerate() {
            assert_eq!(b.criterion() as usize, i + 1);
        }
        assert!(BatteryConfig::for_criterion(13).is_none());
    }

    #[test]
    fn constant_cases_are_reproducible() {
        let c = ConstantsConfig::default();
        let a = constant_case(&c, 7, 3).unwrap();
        assert_eq!(a, constant_case(&c, 7, 3).unwrap());
        assert_ne!(a, constant_case(&c, 7, 4).unwrap());
    }

    #[test]
    fn failing_battery_reports_error() {
        let mut settings = SweepSettings::sinc();
        settings.cap = 3;
        let out = BatteryConfig::RateSinc(settings).run(1);
        assert!(!out.pass);
        assert!(out.error.as_deref().unwrap().contains("sites needed"), "{:?}", out.error);
        assert!(out.summary_line().contains("FAIL"));
    }
}
