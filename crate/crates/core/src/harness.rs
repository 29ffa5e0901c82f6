//! Convergence sweeps over `h`, rate fits, and the stability and
//! zeros-lemma summaries built on them.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::bandlimited::{pw_seminorm, sinc_collocate, BandlimitedInterpolant};
use crate::catalog::TestFunction;
use crate::collocate::{assemble_with, fourier_interpolant, solve, AssemblyOptions, Interpolant, DEFAULT_DENSE_CAP, ILL_CONDITIONED};
use crate::error::{Error, Result};
use crate::kernels::KernelFamily;
use crate::norms::{grid_seminorm, l2_error, sobolev_seminorm};
use crate::quadrature::QuadratureGrid;
use crate::sites::{build_perturbed_lattice, scale, PerturbationRule, SiteSequence};

pub const DEFAULT_MEASURE_HALF_WIDTH: f64 = 4.0;
pub const DEFAULT_PADDING: f64 = 8.0;
pub const DEFAULT_POINTS_PER_UNIT: f64 = 128.0;
/// Rows whose condition estimate exceeds this are left out of rate fits.
pub const DEFAULT_TRUST_THRESHOLD: f64 = 1e12;
/// Length of the periodic grid used for the residual seminorm.
pub const RESIDUAL_GRID_LEN: usize = 1 << 15;
/// Extra room beyond the site window for the residual grid to decay.
const RESIDUAL_GRID_MARGIN: f64 = 8.0;

/// How the interpolant at `hX` is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolationRoute {
    /// Unit Gaussian collocation at the scaled sites.
    Gaussian,
    /// The band-limited interpolant in `PW_{π/h}`.
    Sinc,
}

impl InterpolationRoute {
    pub fn name(&self) -> &'static str {
        match self {
            InterpolationRoute::Gaussian => "gaussian",
            InterpolationRoute::Sinc => "sinc",
        }
    }
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(InterpolationRoute::Gaussian),
            "sinc" => Some(InterpolationRoute::Sinc),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub function: TestFunction,
    /// Seminorm order for the stability ratio.
    pub k: usize,
    /// Derivative order for the `W_2^j` error, if any.
    pub j: Option<usize>,
    pub h_list: Vec<f64>,
    pub rule: PerturbationRule,
    /// Errors are measured on `[-t, t]`.
    pub t: f64,
    /// Sites extend at least this far beyond `[-t, t]` after scaling.
    pub padding: f64,
    pub route: InterpolationRoute,
    pub points_per_unit: f64,
    pub cap: usize,
    pub trust_threshold: f64,
}

impl SweepConfig {
    pub fn new(function: TestFunction, k: usize, route: InterpolationRoute, h_list: Vec<f64>) -> Self {
        SweepConfig {
            function,
            k,
            j: None,
            h_list,
            rule: PerturbationRule::sinusoidal(0.2),
            t: DEFAULT_MEASURE_HALF_WIDTH,
            padding: DEFAULT_PADDING,
            route,
            points_per_unit: DEFAULT_POINTS_PER_UNIT,
            cap: DEFAULT_DENSE_CAP,
            trust_threshold: DEFAULT_TRUST_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.function.check_order(self.k)?;
        if let Some(j) = self.j {
            if j >= self.k {
                return Err(Error::BadParameter(alloc::format!("derivative order {j} must be below k = {}", self.k)));
            }
        }
        if self.h_list.is_empty() || self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::BadSweep);
        }
        for &h in &self.h_list {
            if !(h > 0.0 && h <= 1.0) {
                return Err(Error::BadH(h));
            }
        }
        if !(self.t > 0.0) || !(self.padding >= 0.0) || !(self.points_per_unit > 0.0) {
            return Err(Error::BadWindow);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowFlags {
    pub ill_conditioned: bool,
    /// Excluded from rate fits.
    pub untrusted: bool,
}

impl fmt::Display for RowFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<&str> = Vec::new();
        if self.ill_conditioned {
            parts.push("ill_conditioned");
        }
        if self.untrusted {
            parts.push("untrusted");
        }
        if parts.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&parts.join(";"))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub n_sites: usize,
    pub cond_est: f64,
    /// `‖I g - g‖_{L2[-t, t]}`
    pub err_l2: f64,
    /// `‖(I g - g)^{(j)}‖_{L2[-t, t]}`
    pub err_w2j: Option<f64>,
    /// `|I g|_{W_2^k} / |g|_{W_2^k}`
    pub seminorm_ratio: f64,
    pub site_residual: f64,
    pub fill_distance: f64,
    pub flags: RowFlags,
}

impl ConvergenceRow {
    pub fn trusted(&self) -> bool {
        !self.flags.untrusted
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Slope of `log err_l2` against `log h` over trusted rows.
    pub fitted_rate: Option<f64>,
    pub fitted_rate_w2j: Option<f64>,
    /// Indices of rows left out of the fits.
    pub excluded: Vec<usize>,
    /// `‖g‖_{L2(|x| > t)}`, which the measured errors do not see.
    pub tail_bound: f64,
    /// Why a fit is missing, if it is.
    pub fit_note: Option<String>,
}

/// Sites wide enough that `h·X` covers `[-(t+P), t+P]`:
/// `half_width = ⌈(t+P)/(h q)⌉` with `q` the separation of the rule.
pub fn site_window(config: &SweepConfig, h: f64) -> Result<SiteSequence> {
    let reach = config.t + config.padding;
    // q ≥ 1 - 2A bounds the window from above; refine with the realized q
    let q0 = (1.0 - 2.0 * config.rule.amplitude()).max(f64::EPSILON);
    let probe_half = (reach / (h * q0)).ceil().max(1.0) as usize;
    if 2 * probe_half + 1 > config.cap.max(1) * 64 {
        return Err(Error::CoverageError { needed: 2 * probe_half + 1, cap: config.cap });
    }
    let probe = build_perturbed_lattice(probe_half, &config.rule, true)?;
    let half = (reach / (h * probe.q())).ceil().max(1.0) as usize;
    let needed = 2 * half + 1;
    if needed > config.cap {
        return Err(Error::CoverageError { needed, cap: config.cap });
    }
    let sites = build_perturbed_lattice(half, &config.rule, true)?;
    let scaled = scale(&sites, h)?;
    let (lo, hi) = scaled.span();
    if lo > -reach || hi < reach {
        return Err(Error::CoverageError { needed: needed + 2, cap: config.cap });
    }
    Ok(sites)
}

enum Built {
    Gaussian(Interpolant),
    Sinc(BandlimitedInterpolant),
}

impl Built {
    fn derivative(&self, n: usize, x: f64) -> f64 {
        match self {
            Built::Gaussian(i) => i.derivative(n, x).unwrap_or(f64::NAN),
            Built::Sinc(f) => f.derivative(n, x),
        }
    }
}

fn build(config: &SweepConfig, sites: &SiteSequence, h: f64) -> Result<(Built, f64, f64)> {
    let scaled = scale(sites, h)?;
    let y: Vec<f64> = scaled.points().iter().map(|&x| config.function.eval(x)).collect();
    Ok(match config.route {
        InterpolationRoute::Gaussian => {
            let options = AssemblyOptions { cap: config.cap, ..AssemblyOptions::default() };
            let system = assemble_with(KernelFamily::gaussian(1.0)?, &scaled, &options)?;
            let i = solve(&system, &y)?;
            let (c, r) = (i.condition_estimate(), i.max_site_residual());
            (Built::Gaussian(i), c, r)
        }
        InterpolationRoute::Sinc => {
            let f = sinc_collocate(&scaled, &y)?;
            let (c, r) = (f.condition_estimate(), f.max_site_residual());
            (Built::Sinc(f), c, r)
        }
    })
}

/// `|I g|_{W_2^k}` for a unit Gaussian interpolant, on the frequency side.
fn gaussian_interpolant_seminorm(i: &Interpolant, k: usize) -> Result<f64> {
    // e^{-ξ²/2} ξ^{2k} is far below double precision beyond |ξ| = 16
    let grid = QuadratureGrid::gauss_panels(-16.0, 16.0, 0.125, 32)?;
    let (xs, ws) = grid.points();
    let values = fourier_interpolant(i, &xs)?;
    let sum: f64 = xs
        .iter()
        .zip(&ws)
        .zip(&values)
        .map(|((&xi, &w), v)| w * xi.abs().powi(2 * k as i32) * v.norm_sqr())
        .sum();
    Ok((sum / (2.0 * core::f64::consts::PI)).sqrt())
}

/// One row of the sweep. Rows are independent, so callers may compute them
/// in any order.
pub fn convergence_row(config: &SweepConfig, h: f64) -> Result<ConvergenceRow> {
    config.validate()?;
    let sites = site_window(config, h)?;
    let scaled = scale(&sites, h)?;
    let (built, cond_est, site_residual) = build(config, &sites, h)?;
    let g = config.function;
    let space = QuadratureGrid::simpson(-config.t, config.t, config.points_per_unit)?;
    let err_l2 = l2_error(|x| built.derivative(0, x), |x| g.eval(x), &space);
    let err_w2j = config.j.map(|j| l2_error(
            |x| built.derivative(j, x),
            |x| g.derivative(j, x).unwrap_or(f64::NAN),
            &space,
        ));
    let interp_seminorm = match &built {
        Built::Gaussian(i) => gaussian_interpolant_seminorm(i, config.k)?,
        Built::Sinc(f) => pw_seminorm(f, config.k, &QuadratureGrid::for_band(f.sigma(), h)?)?,
    };
    let g_seminorm = sobolev_seminorm(g, config.k, &g.frequency_grid())?;
    let seminorm_ratio = if g_seminorm == 0.0 {
        if interp_seminorm == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        interp_seminorm / g_seminorm
    };
    let ill_conditioned = cond_est > ILL_CONDITIONED;
    let untrusted = !(cond_est <= config.trust_threshold) || !(err_l2 > 0.0) || !err_l2.is_finite();
    Ok(ConvergenceRow {
        h,
        n_sites: sites.len(),
        cond_est,
        err_l2,
        err_w2j,
        seminorm_ratio,
        site_residual,
        fill_distance: scaled.fill_distance(),
        flags: RowFlags { ill_conditioned, untrusted },
    })
}

/// Fits and exclusions over already computed rows (in `h_list` order).
pub fn summarize(config: &SweepConfig, rows: Vec<ConvergenceRow>) -> ConvergenceReport {
    let excluded: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| !r.trusted()).map(|(i, _)| i).collect();
    let trusted: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.trusted()).collect();
    let hs: Vec<f64> = trusted.iter().map(|r| r.h).collect();
    let l2: Vec<f64> = trusted.iter().map(|r| r.err_l2).collect();
    let (fitted_rate, fit_note) = match fit_rate(&hs, &l2) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(alloc::format!("{e}"))),
    };
    let fitted_rate_w2j = if config.j.is_some() {
        let w: Vec<f64> = trusted.iter().map(|r| r.err_w2j.unwrap_or(f64::NAN)).collect();
        fit_rate(&hs, &w).ok()
    } else {
        None
    };
    ConvergenceReport {
        rows,
        fitted_rate,
        fitted_rate_w2j,
        excluded,
        tail_bound: config.function.l2_tail(config.t),
        fit_note,
    }
}

pub fn run_convergence(config: &SweepConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let rows = config
        .h_list
        .iter()
        .map(|&h| convergence_row(config, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(config, rows))
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_rate(hs: &[f64], errors: &[f64]) -> Result<f64> {
    if hs.len() != errors.len() {
        return Err(Error::LengthMismatch { expected: hs.len(), got: errors.len() });
    }
    if hs.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, have: hs.len() });
    }
    for &e in errors {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NonPositiveError(e));
        }
    }
    for &h in hs {
        if !(h > 0.0) {
            return Err(Error::BadH(h));
        }
    }
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::BadSweep);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// `(h, e(h)/e(h/2))` for every trusted pair of rows exactly a factor two apart.
pub fn halving_ratios(rows: &[ConvergenceRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a in rows.iter().filter(|r| r.trusted()) {
        for b in rows.iter().filter(|r| r.trusted()) {
            if ((a.h / b.h) - 2.0).abs() < 1e-9 {
                out.push((a.h, a.err_l2 / b.err_l2));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySummary {
    /// max/min of the seminorm ratio over trusted rows.
    pub spread: f64,
    /// Slope of `log ratio` against `log h`.
    pub trend: f64,
}

pub fn stability(rows: &[ConvergenceRow]) -> Result<StabilitySummary> {
    let trusted: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.trusted()).collect();
    let ratios: Vec<f64> = trusted.iter().map(|r| r.seminorm_ratio).collect();
    let hs: Vec<f64> = trusted.iter().map(|r| r.h).collect();
    let trend = fit_rate(&hs, &ratios)?;
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(StabilitySummary { spread: max / min, trend })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerosLemmaReport {
    pub h: f64,
    pub fill_distance: f64,
    /// `‖r‖_{L2[-t, t]}` for the residual `r = I g - g`.
    pub lhs: f64,
    /// `|r|_{W_2^k}` from a periodic FFT grid.
    pub seminorm_residual: f64,
    /// `lhs / (fill^k |r|_{W_2^k})`
    pub rhs_ratio: f64,
    pub cond_est: f64,
    /// Untrusted rows carry NaN seminorm and ratio.
    pub trusted: bool,
}

/// The residual vanishes at every site, so its L2 size is controlled by
/// `fill^k` times its own seminorm. Gaussian route only.
pub fn zeros_lemma_check(config: &SweepConfig, h: f64) -> Result<ZerosLemmaReport> {
    config.validate()?;
    if config.route != InterpolationRoute::Gaussian {
        return Err(Error::UnsupportedKernel);
    }
    let sites = site_window(config, h)?;
    let scaled = scale(&sites, h)?;
    let (built, cond_est, _) = build(config, &sites, h)?;
    let g = config.function;
    let residual = |x: f64| built.derivative(0, x) - g.eval(x);
    let space = QuadratureGrid::simpson(-config.t, config.t, config.points_per_unit)?;
    let lhs = space.integrate(|x| residual(x).powi(2)).sqrt();
    let fill = scaled.fill_distance();
    if !(cond_est <= config.trust_threshold) {
        // roundoff dominates the residual; its spectrum says nothing
        let (seminorm_residual, rhs_ratio) = (f64::NAN, f64::NAN);
        return Ok(ZerosLemmaReport { h, fill_distance: fill, lhs, seminorm_residual, rhs_ratio, cond_est, trusted: false });
    }
    let half = config.t + config.padding + RESIDUAL_GRID_MARGIN;
    let n = RESIDUAL_GRID_LEN;
    let dx = 2.0 * half / n as f64;
    let samples: Vec<f64> = (0..n).map(|i| residual(-half + i as f64 * dx)).collect();
    let seminorm_residual = grid_seminorm(&samples, dx, config.k)?;
    let rhs_ratio = if lhs == 0.0 { 0.0 } else { lhs / (fill.powi(config.k as i32) * seminorm_residual) };
    Ok(ZerosLemmaReport { h, fill_distance: fill, lhs, seminorm_residual, rhs_ratio, cond_est, trusted: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn fit_recovers_power_law() {
        let hs = [1.0, 0.5, 0.25, 0.125];
        let es: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powf(2.5)).collect();
        assert_relative_eq!(fit_rate(&hs, &es).unwrap(), 2.5, max_relative = 1e-12);
        assert!(matches!(fit_rate(&hs[..2], &es[..2]), Err(Error::InsufficientData { .. })));
        assert!(matches!(fit_rate(&hs, &[1.0, 0.0, 1.0, 1.0]), Err(Error::NonPositiveError(_))));
    }

    proptest! {
        #[test]
        fn fit_is_scale_invariant(rate in 0.5f64..4.0, c in 1e-6f64..1e3) {
            let hs = [1.0, 0.7, 0.5, 0.35, 0.25];
            let es: Vec<f64> = hs.iter().map(|h: &f64| c * h.powf(rate)).collect();
            prop_assert!((fit_rate(&hs, &es).unwrap() - rate).abs() < 1e-9);
        }
    }

    #[test]
    fn config_invariants() {
        let mut cfg = SweepConfig::new(TestFunction::BSpline2, 2, InterpolationRoute::Sinc, alloc::vec![1.0, 0.5]);
        assert!(cfg.validate().is_ok());
        cfg.h_list = alloc::vec![0.5, 1.0];
        assert_eq!(cfg.validate(), Err(Error::BadSweep));
        cfg.h_list = alloc::vec![1.0, 0.5];
        cfg.j = Some(2);
        assert!(cfg.validate().is_err());
        cfg.j = None;
        cfg.k = 3;
        assert!(matches!(cfg.validate(), Err(Error::SmoothnessExceeded { .. })));
    }

    #[test]
    fn window_covers_padding() {
        let cfg = SweepConfig::new(TestFunction::BSpline2, 2, InterpolationRoute::Sinc, alloc::vec![0.5]);
        let s = site_window(&cfg, 0.25).unwrap();
        let (lo, hi) = scale(&s, 0.25).unwrap().span();
        assert!(lo <= -12.0 && hi >= 12.0);
        let mut tight = cfg.clone();
        tight.cap = 11;
        assert!(matches!(site_window(&tight, 0.25), Err(Error::CoverageError { .. })));
    }

    #[test]
    fn sinc_row_reproduces_band_limited_input() {
        let cfg = SweepConfig::new(TestFunction::SincSq, 1, InterpolationRoute::Sinc, alloc::vec![0.5]);
        let row = convergence_row(&cfg, 0.5).unwrap();
        // the window truncates the slowly decaying sinc_sq samples
        assert!(row.err_l2 < 5e-4, "{row:?}");
        assert!((row.seminorm_ratio - 1.0).abs() < 5e-3, "{row:?}");
        assert_eq!(row.flags, RowFlags::default());
    }

    #[test]
    fn gaussian_rows_and_summary() {
        let mut cfg = SweepConfig::new(TestFunction::BSpline2, 2, InterpolationRoute::Gaussian, alloc::vec![1.0, 0.7, 0.5]);
        cfg.j = Some(1);
        let report = run_convergence(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.fitted_rate.unwrap() > 0.5);
        // not monotone row to row (0.058, 0.0108, 0.0127), but decreasing overall
        assert!(report.rows[2].err_l2 < 0.25 * report.rows[0].err_l2);
        assert_eq!(report.tail_bound, 0.0);
        let s = stability(&report.rows).unwrap();
        assert!(s.spread >= 1.0);
    }

    #[test]
    fn halving_pairs() {
        let row = |h: f64, e: f64| ConvergenceRow {
            h,
            n_sites: 1,
            cond_est: 1.0,
            err_l2: e,
            err_w2j: None,
            seminorm_ratio: 1.0,
            site_residual: 0.0,
            fill_distance: h,
            flags: RowFlags::default(),
        };
        let rows = [row(1.0, 1.0), row(0.7, 0.5), row(0.5, 0.1), row(0.25, 0.001)];
        let r = halving_ratios(&rows);
        assert_eq!(r.len(), 2);
        assert_relative_eq!(r[0].1, 10.0);
        assert_relative_eq!(r[1].1, 100.0);
    }

    #[test]
    fn zeros_lemma_on_gaussian_route() {
        let mut cfg = SweepConfig::new(TestFunction::Gauss, 2, InterpolationRoute::Gaussian, alloc::vec![0.7]);
        cfg.rule = PerturbationRule::Sinusoidal { amplitude: 0.2, frequency: 1.0, phase: 0.5 };
        let r = zeros_lemma_check(&cfg, 0.7).unwrap();
        assert!(r.lhs > 0.0 && r.rhs_ratio.is_finite(), "{r:?}");
        let mut sinc = cfg.clone();
        sinc.route = InterpolationRoute::Sinc;
        assert!(zeros_lemma_check(&sinc, 0.7).is_err());
    }
}
