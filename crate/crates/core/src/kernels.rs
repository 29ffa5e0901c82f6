//! Interpolator kernels: Gaussians, Poisson kernels and inverse
//! multiquadrics, with the band conditions (A1)–(A3) and the family-level
//! regularity conditions (R1)–(R3).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{cosine_transform_half_line, integrate_half_line, panel_points, GaussLegendre};
use crate::special::{bessel_k_half_integer, factorial, gamma};

/// Relative accuracy requested from quadrature-mode transforms.
pub const FOURIER_REL_TOL: f64 = 1e-9;

/// Anything that can be used as a translation-invariant interpolation kernel.
pub trait Kernel {
    fn eval(&self, x: f64) -> f64;
    fn fourier(&self, xi: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Gaussian,
    Poisson,
    InverseMultiquadric,
}

impl KernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::Gaussian => "gaussian",
            KernelKind::Poisson => "poisson",
            KernelKind::InverseMultiquadric => "inverse_multiquadric",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(KernelKind::Gaussian),
            "poisson" => Some(KernelKind::Poisson),
            "inverse_multiquadric" | "imq" => Some(KernelKind::InverseMultiquadric),
            _ => None,
        }
    }

    /// Maps a family parameter to the index α of the regularity conditions
    /// (α → ∞ is the limit in which the interpolants converge).
    pub fn sweep_index(&self, parameter: f64) -> f64 {
        match self {
            KernelKind::Gaussian => 1.0 / parameter,
            KernelKind::Poisson | KernelKind::InverseMultiquadric => parameter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierMode {
    ClosedForm,
    Quadrature,
}

/// A member of one of the three interpolator families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFamily {
    kind: KernelKind,
    parameter: f64,
    beta: f64,
    fourier_mode: FourierMode,
}

pub const DEFAULT_IMQ_BETA: f64 = -1.0;

impl KernelFamily {
    /// `e^{-λx²}`, `λ ∈ (0, 1]`.
    pub fn gaussian(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::BadParameter(alloc::format!("gaussian λ = {lambda} must lie in (0, 1]")));
        }
        Ok(Self { kind: KernelKind::Gaussian, parameter: lambda, beta: 0.0, fourier_mode: FourierMode::ClosedForm })
    }

    /// `√(2/α) α/(α²+x²)`, `α ≥ 1`.
    pub fn poisson(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::BadParameter(alloc::format!("poisson α = {alpha} must be at least 1")));
        }
        Ok(Self { kind: KernelKind::Poisson, parameter: alpha, beta: 0.0, fourier_mode: FourierMode::ClosedForm })
    }

    /// `(x²+c²)^β`, `c ≥ 1`, `β < -1/2`.
    pub fn inverse_multiquadric(c: f64, beta: f64) -> Result<Self> {
        if !(c >= 1.0) || !c.is_finite() {
            return Err(Error::BadParameter(alloc::format!("inverse multiquadric c = {c} must be at least 1")));
        }
        if !(beta < -0.5) {
            return Err(Error::BadParameter(alloc::format!("inverse multiquadric β = {beta} must be below -1/2")));
        }
        let mode = if is_integer(beta) { FourierMode::ClosedForm } else { FourierMode::Quadrature };
        Ok(Self { kind: KernelKind::InverseMultiquadric, parameter: c, beta, fourier_mode: mode })
    }

    pub fn new(kind: KernelKind, parameter: f64) -> Result<Self> {
        match kind {
            KernelKind::Gaussian => Self::gaussian(parameter),
            KernelKind::Poisson => Self::poisson(parameter),
            KernelKind::InverseMultiquadric => Self::inverse_multiquadric(parameter, DEFAULT_IMQ_BETA),
        }
    }

    /// Switches the transform evaluation. Closed forms for the inverse
    /// multiquadric exist only for integer β; other β stay on quadrature.
    pub fn with_fourier_mode(mut self, mode: FourierMode) -> Self {
        self.fourier_mode = match (self.kind, mode) {
            (KernelKind::InverseMultiquadric, FourierMode::ClosedForm) if !is_integer(self.beta) => FourierMode::Quadrature,
            _ => mode,
        };
        self
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }
    pub fn parameter(&self) -> f64 {
        self.parameter
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn fourier_mode(&self) -> FourierMode {
        self.fourier_mode
    }

    fn closed_form(&self, xi: f64) -> f64 {
        let p = self.parameter;
        let xi = xi.abs();
        match self.kind {
            KernelKind::Gaussian => (PI / p).sqrt() * (-xi * xi / (4.0 * p)).exp(),
            KernelKind::Poisson => (2.0 / p).sqrt() * PI * (-p * xi).exp(),
            KernelKind::InverseMultiquadric => {
                let beta = self.beta;
                if xi == 0.0 {
                    return p.powf(2.0 * beta + 1.0) * PI.sqrt() * gamma(-beta - 0.5) / gamma(-beta);
                }
                // (2√π/Γ(-β)) (|ξ|/(2c))^ν K_ν(c|ξ|),  ν = n + 1/2 = -β - 1/2
                let n = (-beta - 1.0).round() as usize;
                let nu = n as f64 + 0.5;
                2.0 * PI.sqrt() / factorial(n) * (xi / (2.0 * p)).powf(nu) * bessel_k_half_integer(n, p * xi)
            }
        }
    }

    fn by_quadrature(&self, xi: f64) -> Result<f64> {
        match self.kind {
            KernelKind::Gaussian => {
                // The integrand is entire; on the line Im x = -ξ/(2λ) it stops oscillating.
                let lambda = self.parameter;
                let shift = xi / (2.0 * lambda);
                let rule = GaussLegendre::new(32);
                let reach = (50.0 / lambda).sqrt();
                let (ts, ws) = panel_points(-reach, reach, 0.5, &rule);
                let sum: f64 = ts
                    .iter()
                    .zip(&ws)
                    .map(|(&t, &w)| {
                        let z = Complex64::new(t, -shift);
                        let e = -lambda * z * z - Complex64::new(0.0, xi) * z;
                        w * e.exp().re
                    })
                    .sum();
                Ok(sum)
            }
            _ => Ok(2.0 * cosine_transform_half_line(|x| self.eval(x), xi, FOURIER_REL_TOL)?),
        }
    }
}

impl Kernel for KernelFamily {
    fn eval(&self, x: f64) -> f64 {
        let p = self.parameter;
        let x2 = x * x;
        match self.kind {
            KernelKind::Gaussian => (-p * x2).exp(),
            KernelKind::Poisson => (2.0 / p).sqrt() * p / (p * p + x2),
            KernelKind::InverseMultiquadric => (x2 + p * p).powf(self.beta),
        }
    }

    fn fourier(&self, xi: f64) -> Result<f64> {
        match self.fourier_mode {
            FourierMode::ClosedForm => Ok(self.closed_form(xi)),
            FourierMode::Quadrature => self.by_quadrature(xi),
        }
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn fourier(&self, xi: f64) -> Result<f64> {
        (**self).fourier(xi)
    }
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

/// Knobs for the interpolator checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionLimits {
    /// A3 passes when `M_J / M_1` is below this.
    pub decay_threshold: f64,
    /// Sampled transform values below `-positivity_slack` fail A2.
    pub positivity_slack: f64,
    /// Relative agreement required between the two A1 quadrature resolutions.
    pub a1_tolerance: f64,
    /// Upper bound on the R2 ratio (a configuration choice).
    pub r2_bound: f64,
}

impl Default for ConditionLimits {
    fn default() -> Self {
        Self { decay_threshold: 1e-3, positivity_slack: 1e-12, a1_tolerance: 1e-8, r2_bound: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionFlags {
    pub a1: bool,
    pub a2: bool,
    pub a3: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.a1 && self.a2 && self.a3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolatorReport {
    pub j_window: usize,
    /// `(j, M_j)` for `j = -J..=J`.
    pub bands: Vec<(i64, f64)>,
    /// Where each band supremum was attained.
    pub band_argmax: Vec<f64>,
    pub m: f64,
    pub m_at: f64,
    pub tail_sum: f64,
    pub ratio: f64,
    /// `M_J / M_1` (worse of the two sides).
    pub decay_ratio: f64,
    /// Geometric ratio fitted to the last three `M_j` and the implied remainder beyond `J`.
    pub fitted_rate: f64,
    pub fitted_remainder: f64,
    pub min_sample: f64,
    pub l1_norm: f64,
    pub transform_integral: f64,
    pub flags: ConditionFlags,
}

impl InterpolatorReport {
    pub fn band(&self, j: i64) -> Option<f64> {
        self.bands.iter().find(|(i, _)| *i == j).map(|(_, v)| *v)
    }
}

struct Extremum {
    value: f64,
    at: f64,
    min_sample: f64,
}

/// Grid extremum of `f` on `[lo, hi]`, refined by zooming around the best node.
fn band_extremum<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, density: usize, maximize: bool) -> Result<Extremum> {
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut best = Extremum { value: f(lo)?, at: lo, min_sample: f64::INFINITY };
    best.min_sample = best.value;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..6 {
        let step = (b - a) / density as f64;
        for i in 0..=density {
            let x = if i == density { b } else { a + step * i as f64 };
            let v = f(x)?;
            best.min_sample = best.min_sample.min(v);
            if better(v, best.value) {
                best.value = v;
                best.at = x;
            }
        }
        a = (best.at - step).max(lo);
        b = (best.at + step).min(hi);
        if b - a < 1e-12 * (1.0 + best.at.abs()) {
            break;
        }
    }
    Ok(best)
}

/// Checks (A1)–(A3) on the bands `[-π + 2πj, π + 2πj]`, `|j| ≤ J`.
pub fn interpolator_conditions<K: Kernel + ?Sized>(
    kernel: &K,
    j_window: usize,
    grid_density: usize,
    limits: &ConditionLimits,
) -> Result<InterpolatorReport> {
    if j_window < 1 {
        return Err(Error::BadWindow);
    }
    if grid_density < 16 {
        return Err(Error::BadParameter(alloc::format!("grid density {grid_density} is below 16 points per period")));
    }
    let jw = j_window as i64;
    let mut bands = Vec::with_capacity(2 * j_window + 1);
    let mut band_argmax = Vec::with_capacity(2 * j_window + 1);
    let mut min_sample = f64::INFINITY;
    for j in -jw..=jw {
        let centre = 2.0 * PI * j as f64;
        let e = band_extremum(|x| kernel.fourier(x), centre - PI, centre + PI, grid_density, true)?;
        min_sample = min_sample.min(e.min_sample);
        bands.push((j, e.value.max(0.0)));
        band_argmax.push(e.at);
    }
    let inf = band_extremum(|x| kernel.fourier(x), -PI, PI, grid_density, false)?;
    min_sample = min_sample.min(inf.min_sample);
    let m = inf.value;

    let side = |sign: i64| -> Vec<f64> {
        (1..=jw).map(|j| bands.iter().find(|(i, _)| *i == sign * j).unwrap().1).collect()
    };
    let (pos, neg) = (side(1), side(-1));
    let tail_sum: f64 = pos.iter().chain(&neg).sum();
    let ratio = if m > 0.0 { tail_sum / m } else { f64::INFINITY };

    let decay = |s: &[f64]| if s[0] > 0.0 { s[s.len() - 1] / s[0] } else if s[s.len() - 1] == 0.0 { 0.0 } else { f64::INFINITY };
    let decay_ratio = decay(&pos).max(decay(&neg));
    let (rate_p, rem_p) = geometric_tail(&pos);
    let (rate_n, rem_n) = geometric_tail(&neg);
    let fitted_rate = rate_p.max(rate_n);
    let fitted_remainder = rem_p + rem_n;

    // A1: φ ∈ L1 and φ̂ ∈ L1, judged by agreement of two quadrature resolutions.
    let coarse = GaussLegendre::new(16);
    let fine = GaussLegendre::new(32);
    let l1_a = 2.0 * integrate_half_line(64, &coarse, |x| kernel.eval(x).abs());
    let l1_b = 2.0 * integrate_half_line(128, &fine, |x| kernel.eval(x).abs());
    let reach = (2 * j_window + 1) as f64 * PI;
    let hat_integral = |rule: &GaussLegendre| -> Result<f64> {
        let (xs, ws) = panel_points(-reach, reach, PI / 4.0, rule);
        let mut s = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            s += w * kernel.fourier(*x)?.abs();
        }
        Ok(s)
    };
    let hat_a = hat_integral(&coarse)?;
    let hat_b = hat_integral(&fine)?;
    let agree = |a: f64, b: f64| a.is_finite() && b.is_finite() && (a - b).abs() <= limits.a1_tolerance * b.abs().max(1e-300);
    let a1 = agree(l1_a, l1_b) && agree(hat_a, hat_b);

    let a2 = min_sample >= -limits.positivity_slack && m > 0.0;
    let a3 = decay_ratio < limits.decay_threshold && fitted_rate < 1.0 && fitted_remainder.is_finite();

    Ok(InterpolatorReport {
        j_window,
        bands,
        band_argmax,
        m,
        m_at: inf.at,
        tail_sum,
        ratio,
        decay_ratio,
        fitted_rate,
        fitted_remainder,
        min_sample,
        l1_norm: l1_b,
        transform_integral: hat_b,
        flags: ConditionFlags { a1, a2, a3 },
    })
}

/// Least-squares geometric ratio through the last three values and the
/// remainder `M_J r/(1-r)` it implies. Underflowed tails count as zero.
fn geometric_tail(side: &[f64]) -> (f64, f64) {
    let n = side.len();
    if n < 3 {
        let last = side[n - 1];
        return if last == 0.0 { (0.0, 0.0) } else if n == 1 { (f64::INFINITY, f64::INFINITY) } else {
            let r = side[1] / side[0];
            if r < 1.0 { (r, last * r / (1.0 - r)) } else { (r, f64::INFINITY) }
        };
    }
    let tail = &side[n - 3..];
    if tail.iter().any(|&v| v <= 0.0) {
        return if tail[2] == 0.0 { (0.0, 0.0) } else { (f64::INFINITY, f64::INFINITY) };
    }
    // slope of ln M over three equally spaced points is (ln M_3 - ln M_1)/2
    let r = ((tail[2].ln() - tail[0].ln()) / 2.0).exp();
    if r < 1.0 {
        (r, tail[2] * r / (1.0 - r))
    } else {
        (r, f64::INFINITY)
    }
}

/// The band supremum from the monotone closed form (gaussian and poisson only):
/// attained at `ξ = 0` for `j = 0`, else at the inner band edge `(2|j|-1)π`.
pub fn closed_form_band_sup(kernel: &KernelFamily, j: i64) -> Option<f64> {
    match kernel.kind() {
        KernelKind::Gaussian | KernelKind::Poisson => {
            let xi = if j == 0 { 0.0 } else { (2 * j.abs() - 1) as f64 * PI };
            Some(kernel.closed_form(xi))
        }
        KernelKind::InverseMultiquadric => None,
    }
}

/// `inf_{|ξ|≤π} φ̂` from the closed form (gaussian and poisson only).
pub fn closed_form_band_inf(kernel: &KernelFamily) -> Option<f64> {
    match kernel.kind() {
        KernelKind::Gaussian | KernelKind::Poisson => Some(kernel.closed_form(PI)),
        KernelKind::InverseMultiquadric => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub parameter: f64,
    pub sweep_index: f64,
    pub report: InterpolatorReport,
    /// `max_ξ m_α / φ̂_α(ξ)` over the fixed R3 grid.
    pub r3_max_sample: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub kind: KernelKind,
    /// Entries in the order the parameters were given.
    pub entries: Vec<SweepEntry>,
    pub max_ratio: f64,
    /// R2 ratios non-increasing as the sweep index α grows.
    pub ratios_decreasing: bool,
    /// R3 samples of the entry with the largest α.
    pub r3_extreme_samples: Vec<(f64, f64)>,
    /// R3 maxima strictly decreasing as α grows.
    pub r3_decreasing: bool,
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
}

/// Number of midpoints in the R3 grid on `[-π, π]`.
pub const R3_GRID: usize = 64;

pub fn regularity_sweep(
    kind: KernelKind,
    parameters: &[f64],
    j_window: usize,
    grid_density: usize,
    limits: &ConditionLimits,
) -> Result<RegularityReport> {
    if parameters.len() < 2 {
        return Err(Error::BadSweep);
    }
    let r3_grid: Vec<f64> = (0..R3_GRID).map(|i| -PI + (i as f64 + 0.5) * 2.0 * PI / R3_GRID as f64).collect();
    let mut entries = Vec::with_capacity(parameters.len());
    let mut extreme: Option<(f64, Vec<(f64, f64)>)> = None;
    for &p in parameters {
        let kernel = KernelFamily::new(kind, p)?;
        let report = interpolator_conditions(&kernel, j_window, grid_density, limits)?;
        let mut samples = Vec::with_capacity(R3_GRID);
        for &xi in &r3_grid {
            samples.push((xi, report.m / kernel.fourier(xi)?));
        }
        let r3_max_sample = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let idx = kind.sweep_index(p);
        if extreme.as_ref().is_none_or(|(a, _)| idx > *a) {
            extreme = Some((idx, samples));
        }
        entries.push(SweepEntry { parameter: p, sweep_index: idx, report, r3_max_sample });
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| entries[a].sweep_index.partial_cmp(&entries[b].sweep_index).unwrap());
    let ratios_decreasing = order
        .windows(2)
        .all(|w| entries[w[1]].report.ratio <= entries[w[0]].report.ratio * (1.0 + 1e-12));
    let r3_decreasing = order.windows(2).all(|w| entries[w[1]].r3_max_sample < entries[w[0]].r3_max_sample);
    let max_ratio = entries.iter().map(|e| e.report.ratio).fold(0.0, f64::max);
    let r1 = entries.iter().all(|e| e.report.flags.all());
    let r2 = max_ratio.is_finite() && max_ratio <= limits.r2_bound;
    Ok(RegularityReport {
        kind,
        entries,
        max_ratio,
        ratios_decreasing,
        r3_extreme_samples: extreme.map(|e| e.1).unwrap_or_default(),
        r3_decreasing,
        r1,
        r2,
        r3: r3_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    struct Notched;
    impl Kernel for Notched {
        fn eval(&self, x: f64) -> f64 {
            (-x * x).exp()
        }
        // vanishes on |ξ| ≤ 1
        fn fourier(&self, xi: f64) -> Result<f64> {
            Ok(if xi.abs() <= 1.0 { 0.0 } else { PI.sqrt() * (-xi * xi / 4.0).exp() })
        }
    }

    #[test]
    fn kernel_values() {
        let g = KernelFamily::gaussian(1.0).unwrap();
        assert_eq!(g.eval(0.0), 1.0);
        assert_relative_eq!(g.eval(1.0), 0.36787944117144233, max_relative = 1e-15);
        let p = KernelFamily::poisson(1.0).unwrap();
        assert_relative_eq!(p.eval(0.0), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(g.fourier(0.0).unwrap(), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(p.fourier(0.0).unwrap(), 2f64.sqrt() * PI, max_relative = 1e-15);
    }

    #[test]
    fn parameter_ranges() {
        assert!(KernelFamily::gaussian(1.5).is_err());
        assert!(KernelFamily::gaussian(0.0).is_err());
        assert!(KernelFamily::poisson(0.5).is_err());
        assert!(KernelFamily::inverse_multiquadric(1.0, -0.5).is_err());
        assert!(KernelFamily::inverse_multiquadric(0.5, -1.0).is_err());
    }

    #[test]
    fn imq_closed_form_and_quadrature() {
        let k = KernelFamily::inverse_multiquadric(1.0, -1.0).unwrap();
        assert_eq!(k.fourier_mode(), FourierMode::ClosedForm);
        assert_relative_eq!(k.fourier(1.0).unwrap(), PI * (-1.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(k.fourier(0.0).unwrap(), PI, max_relative = 1e-14);
        let q = k.with_fourier_mode(FourierMode::Quadrature);
        assert_relative_eq!(q.fourier(1.0).unwrap(), 1.1557273497909217, max_relative = 1e-9);
        // β = -2, c = 2: π(1 + c|ξ|) e^{-c|ξ|} / (2c³)
        let k2 = KernelFamily::inverse_multiquadric(2.0, -2.0).unwrap();
        for xi in [0.0, 0.4, 1.5, 3.0] {
            let exact = PI * (1.0 + 2.0 * xi) * (-2.0 * xi).exp() / 16.0;
            assert_relative_eq!(k2.fourier(xi).unwrap(), exact, max_relative = 1e-13);
            let quad = k2.with_fourier_mode(FourierMode::Quadrature).fourier(xi).unwrap();
            assert_relative_eq!(quad, exact, max_relative = 1e-8);
        }
        // non-integer β stays on quadrature
        let k3 = KernelFamily::inverse_multiquadric(1.0, -1.5).unwrap();
        assert_eq!(k3.with_fourier_mode(FourierMode::ClosedForm).fourier_mode(), FourierMode::Quadrature);
        // (x²+1)^{-3/2} has transform 2|ξ|K_1(|ξ|); at ξ=1, 2K_1(1) = 1.2019372...
        assert_relative_eq!(k3.fourier(1.0).unwrap(), 2.0 * 0.6019072301972346, max_relative = 1e-8);
    }

    #[test]
    fn quadrature_transforms_agree_with_closed_forms() {
        let kernels = [
            KernelFamily::gaussian(1.0).unwrap(),
            KernelFamily::gaussian(0.3).unwrap(),
            KernelFamily::poisson(1.0).unwrap(),
        ];
        for k in kernels {
            let q = k.with_fourier_mode(FourierMode::Quadrature);
            for i in 0..=16 {
                let xi = -4.0 * PI + i as f64 * PI / 2.0;
                let (a, b) = (k.fourier(xi).unwrap(), q.fourier(xi).unwrap());
                assert!((a - b).abs() <= 1e-8 * a, "{k:?} at {xi}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn gaussian_conditions() {
        let k = KernelFamily::gaussian(1.0).unwrap();
        let r = interpolator_conditions(&k, 8, 64, &ConditionLimits::default()).unwrap();
        assert!(r.flags.all(), "{:?}", r.flags);
        let m1 = PI.sqrt() * (-PI * PI / 4.0).exp();
        assert_relative_eq!(r.band(1).unwrap(), m1, max_relative = 1e-12);
        assert_relative_eq!(r.m, m1, max_relative = 1e-12);
        assert_relative_eq!(r.band(1).unwrap() / PI.sqrt(), 0.084804972, max_relative = 1e-7);
        for j in -8..=8i64 {
            let exact = closed_form_band_sup(&k, j).unwrap();
            let got = r.band(j).unwrap();
            assert!((got - exact).abs() <= 1e-6 * exact, "j={j}: {got} vs {exact}");
        }
    }

    #[test]
    fn poisson_conditions() {
        let k = KernelFamily::poisson(1.0).unwrap();
        let r = interpolator_conditions(&k, 8, 64, &ConditionLimits::default()).unwrap();
        assert!(r.flags.all(), "{:?}", r.flags);
        for j in 1..=8i64 {
            let exact = 2f64.sqrt() * PI * (-((2 * j - 1) as f64) * PI).exp();
            assert_relative_eq!(r.band(j).unwrap(), exact, max_relative = 1e-12);
            assert_relative_eq!(r.band(-j).unwrap(), exact, max_relative = 1e-12);
        }
        let geometric = 2.0 / (1.0 - (-2.0 * PI).exp());
        assert_relative_eq!(r.ratio, geometric, max_relative = 1e-9);
    }

    #[test]
    fn vanishing_transform_fails_a2() {
        let r = interpolator_conditions(&Notched, 4, 32, &ConditionLimits::default()).unwrap();
        assert!(!r.flags.a2);
        assert_eq!(r.m, 0.0);
    }

    #[test]
    fn window_and_sweep_errors() {
        let k = KernelFamily::gaussian(1.0).unwrap();
        assert_eq!(interpolator_conditions(&k, 0, 32, &ConditionLimits::default()), Err(Error::BadWindow));
        assert_eq!(
            regularity_sweep(KernelKind::Gaussian, &[1.0], 8, 32, &ConditionLimits::default()),
            Err(Error::BadSweep)
        );
    }

    #[test]
    fn gaussian_sweep() {
        let r = regularity_sweep(KernelKind::Gaussian, &[1.0, 0.5, 0.1], 8, 64, &ConditionLimits::default()).unwrap();
        assert!(r.r1 && r.r2 && r.r3 && r.ratios_decreasing);
        for e in &r.entries {
            let lambda = e.parameter;
            let m = (PI / lambda).sqrt() * (-PI * PI / (4.0 * lambda)).exp();
            assert_relative_eq!(e.report.m, m, max_relative = 1e-12);
        }
    }

    #[test]
    fn poisson_sweep() {
        let r = regularity_sweep(KernelKind::Poisson, &[1.0, 2.0, 4.0, 8.0], 8, 64, &ConditionLimits::default()).unwrap();
        assert!(r.r1 && r.r2 && r.r3 && r.ratios_decreasing);
        for e in &r.entries {
            let exact = 2.0 / (1.0 - (-2.0 * e.parameter * PI).exp());
            assert_relative_eq!(e.report.ratio, exact, max_relative = 1e-9);
        }
    }

    proptest! {
        #[test]
        fn kernels_are_even(x in -50.0f64..50.0, p in 1.0f64..8.0, lambda in 0.01f64..=1.0) {
            for k in [
                KernelFamily::gaussian(lambda).unwrap(),
                KernelFamily::poisson(p).unwrap(),
                KernelFamily::inverse_multiquadric(p, -1.0).unwrap(),
                KernelFamily::inverse_multiquadric(p, -3.0).unwrap(),
            ] {
                prop_assert_eq!(k.eval(x), k.eval(-x));
                prop_assert_eq!(k.fourier(x).unwrap(), k.fourier(-x).unwrap());
            }
        }

        #[test]
        fn transforms_are_nonnegative(xi in -60.0f64..60.0, p in 1.0f64..8.0, lambda in 0.01f64..=1.0) {
            for k in [
                KernelFamily::gaussian(lambda).unwrap(),
                KernelFamily::poisson(p).unwrap(),
                KernelFamily::inverse_multiquadric(p, -1.0).unwrap(),
                KernelFamily::inverse_multiquadric(p, -2.0).unwrap(),
            ] {
                prop_assert!(k.fourier(xi).unwrap() >= -1e-12);
            }
        }
    }
}
