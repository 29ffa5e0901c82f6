//! Test functions with known Sobolev class, closed-form derivatives and
//! closed-form Fourier transforms `ĝ(ξ) = ∫ g(x) e^{-ixξ} dx`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{Adaptive, GaussLegendre, QuadratureGrid};
use crate::special::{binomial, gamma, hermite, sinc};

/// Highest derivative order with a pointwise evaluator.
pub const MAX_DERIVATIVE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestFunction {
    /// `e^{-x²}`
    Gauss,
    /// Centered B-spline of degree 1 (the hat on [-1, 1]).
    BSpline1,
    BSpline2,
    BSpline3,
    /// `e^{-|x|}`
    ExpAbs,
    /// `(1+|x|) e^{-|x|}`
    Matern2,
    /// `(sin(x/2)/(x/2))²`, bandlimited to [-1, 1].
    SincSq,
    /// `g ≡ 0`
    Zero,
}

pub const CATALOG: [TestFunction; 8] = [
    TestFunction::Gauss,
    TestFunction::BSpline1,
    TestFunction::BSpline2,
    TestFunction::BSpline3,
    TestFunction::ExpAbs,
    TestFunction::Matern2,
    TestFunction::SincSq,
    TestFunction::Zero,
];

// Piecewise polynomials in t = |x|, ascending coefficients, each valid up to `.0`.
const HAT: &[(f64, &[f64])] = &[(1.0, &[1.0, -1.0])];
const QUADRATIC: &[(f64, &[f64])] = &[(0.5, &[0.75, 0.0, -1.0]), (1.5, &[1.125, -1.5, 0.5])];
const CUBIC: &[(f64, &[f64])] = &[
    (1.0, &[2.0 / 3.0, 0.0, -1.0, 0.5]),
    (2.0, &[4.0 / 3.0, -2.0, 1.0, -1.0 / 6.0]),
];

impl TestFunction {
    pub fn id(&self) -> &'static str {
        match self {
            TestFunction::Gauss => "gauss",
            TestFunction::BSpline1 => "bspline1",
            TestFunction::BSpline2 => "bspline2",
            TestFunction::BSpline3 => "bspline3",
            TestFunction::ExpAbs => "expabs",
            TestFunction::Matern2 => "matern2",
            TestFunction::SincSq => "sinc_sq",
            TestFunction::Zero => "zero",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        CATALOG.iter().copied().find(|g| g.id() == id)
    }

    /// Largest k with `g ∈ W_2^k`; `None` for infinitely smooth entries.
    pub fn k_max(&self) -> Option<usize> {
        match self {
            TestFunction::BSpline1 => Some(1),
            TestFunction::BSpline2 => Some(2),
            TestFunction::BSpline3 => Some(3),
            TestFunction::ExpAbs => Some(1),
            TestFunction::Matern2 => Some(3),
            TestFunction::Gauss | TestFunction::SincSq | TestFunction::Zero => None,
        }
    }

    pub fn admits(&self, k: usize) -> bool {
        self.k_max().is_none_or(|m| k <= m)
    }

    pub fn check_order(&self, k: usize) -> Result<()> {
        match self.k_max() {
            Some(m) if k > m => Err(Error::SmoothnessExceeded { id: self.id(), k, k_max: m }),
            _ => Ok(()),
        }
    }

    /// Highest order `n` for which [`derivative`](Self::derivative) is available.
    pub fn max_derivative(&self) -> usize {
        self.k_max().unwrap_or(MAX_DERIVATIVE).min(MAX_DERIVATIVE)
    }

    /// Half-width of the spectral support, if `g` is bandlimited.
    pub fn bandwidth(&self) -> Option<f64> {
        match self {
            TestFunction::SincSq => Some(1.0),
            TestFunction::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(0, x).expect("order 0 always exists")
    }

    /// `g^{(n)}(x)`. Piecewise-smooth entries return the one-sided value at kinks.
    pub fn derivative(&self, n: usize, x: f64) -> Option<f64> {
        if n > self.max_derivative() {
            return None;
        }
        let t = x.abs();
        let parity = if n % 2 == 1 && x < 0.0 { -1.0 } else { 1.0 };
        let v = match self {
            TestFunction::Gauss => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * hermite(n, x) * (-x * x).exp()
            }
            TestFunction::BSpline1 => parity * piecewise(HAT, n, t),
            TestFunction::BSpline2 => parity * piecewise(QUADRATIC, n, t),
            TestFunction::BSpline3 => parity * piecewise(CUBIC, n, t),
            TestFunction::ExpAbs => {
                let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                parity * sign * (-t).exp()
            }
            TestFunction::Matern2 => {
                let e = (-t).exp();
                parity
                    * match n {
                        0 => (1.0 + t) * e,
                        1 => -t * e,
                        2 => (t - 1.0) * e,
                        _ => (2.0 - t) * e,
                    }
            }
            TestFunction::SincSq => sinc_sq_derivative(n, x),
            TestFunction::Zero => 0.0,
        };
        Some(v)
    }

    /// `ĝ(ξ)`; every catalog entry is even, so the transform is real.
    pub fn fourier(&self, xi: f64) -> f64 {
        match self {
            TestFunction::Gauss => PI.sqrt() * (-xi * xi / 4.0).exp(),
            TestFunction::BSpline1 => sinc(xi / 2.0).powi(2),
            TestFunction::BSpline2 => sinc(xi / 2.0).powi(3),
            TestFunction::BSpline3 => sinc(xi / 2.0).powi(4),
            TestFunction::ExpAbs => 2.0 / (1.0 + xi * xi),
            TestFunction::Matern2 => 4.0 / (1.0 + xi * xi).powi(2),
            TestFunction::SincSq => 2.0 * PI * (1.0 - xi.abs()).max(0.0),
            TestFunction::Zero => 0.0,
        }
    }

    /// Nonnegative points where some derivative of `g` jumps.
    pub fn breaks(&self) -> &'static [f64] {
        match self {
            TestFunction::BSpline1 => &[1.0],
            TestFunction::BSpline2 => &[0.5, 1.5],
            TestFunction::BSpline3 => &[1.0, 2.0],
            _ => &[],
        }
    }

    /// Half-line extent integrated numerically; beyond it [`spatial_tail_lp`](Self::spatial_tail_lp) takes over.
    pub fn spatial_extent(&self) -> f64 {
        match self {
            TestFunction::Gauss => 12.0,
            TestFunction::BSpline1 => 1.0,
            TestFunction::BSpline2 => 1.5,
            TestFunction::BSpline3 => 2.0,
            TestFunction::ExpAbs | TestFunction::Matern2 => 60.0,
            TestFunction::SincSq => 2000.0,
            TestFunction::Zero => 1.0,
        }
    }

    /// `∫_X^∞ |g^{(n)}|^p dx` beyond `X = spatial_extent()`. Only `sinc_sq` has a
    /// non-negligible remainder there; it is taken from the `2|cos|/x²` envelope.
    pub fn spatial_tail_lp(&self, n: usize, p: f64) -> f64 {
        match self {
            TestFunction::SincSq => {
                let x = self.spatial_extent();
                let mean = if n == 0 {
                    // mean of (1 - cos)^p = 2^p mean of sin^{2p}
                    2f64.powf(p) * gamma(p + 0.5) / (PI.sqrt() * gamma(p + 1.0))
                } else {
                    gamma((p + 1.0) / 2.0) / (PI.sqrt() * gamma(p / 2.0 + 1.0))
                };
                2f64.powf(p) * mean * x.powf(1.0 - 2.0 * p) / (2.0 * p - 1.0)
            }
            _ => 0.0,
        }
    }

    /// `‖g^{(n)}‖_{L_p(ℝ)}` by piecewise adaptive quadrature; `p = ∞` gives a sampled sup.
    pub fn lp_norm_derivative(&self, n: usize, p: f64) -> Result<f64> {
        if n > self.max_derivative() {
            return Err(Error::SmoothnessExceeded {
                id: self.id(),
                k: n,
                k_max: self.max_derivative(),
            });
        }
        if !(p >= 1.0) {
            return Err(Error::BadParameter(alloc::format!("p = {p} must be at least 1")));
        }
        if *self == TestFunction::Zero {
            return Ok(0.0);
        }
        let segments = self.segments();
        if p.is_infinite() {
            let mut sup = 0.0f64;
            for w in segments.windows(2) {
                let (a, b) = (w[0], w[1].min(50.0));
                if b <= a {
                    continue;
                }
                let steps = (((b - a) * 2000.0).ceil() as usize).max(2000);
                for i in 0..=steps {
                    let x = a + (b - a) * i as f64 / steps as f64;
                    // one-sided values at both ends of each piece
                    let x = x.clamp(a + 1e-13 * (1.0 + a.abs()), b - 1e-13 * (1.0 + b.abs()));
                    sup = sup.max(self.derivative(n, x).unwrap().abs());
                }
            }
            return Ok(sup);
        }
        let adaptive = Adaptive::new(1e-15, 1e-11);
        let mut half = 0.0;
        for w in segments.windows(2) {
            let panels = ((w[1] - w[0]).ceil() as usize).max(1);
            let dx = (w[1] - w[0]) / panels as f64;
            for i in 0..panels {
                let lo = w[0] + dx * i as f64;
                let mut f = |x: f64| self.derivative(n, x).unwrap().abs().powf(p);
                half += adaptive.integrate(lo, lo + dx, &mut f)?;
            }
        }
        half += self.spatial_tail_lp(n, p);
        Ok((2.0 * half).powf(1.0 / p))
    }

    /// `‖g‖_{L2(|x| > T)}`, exact or an upper bound.
    pub fn l2_tail(&self, t: f64) -> f64 {
        let t = t.abs();
        match self {
            TestFunction::Gauss => ((PI / 2.0).sqrt() * libm::erfc(2f64.sqrt() * t)).sqrt(),
            TestFunction::BSpline1 | TestFunction::BSpline2 | TestFunction::BSpline3 => {
                let s = self.spatial_extent();
                if t >= s {
                    return 0.0;
                }
                let mut cuts: Vec<f64> = alloc::vec![t];
                cuts.extend(self.breaks().iter().copied().filter(|&b| b > t && b < s));
                cuts.push(s);
                let rule = GaussLegendre::new(8);
                let sq: f64 = cuts.windows(2).map(|w| rule.integrate(w[0], w[1], |x| self.eval(x).powi(2))).sum();
                (2.0 * sq).sqrt()
            }
            TestFunction::ExpAbs => (-t).exp(),
            TestFunction::Matern2 => {
                let u = 1.0 + t;
                (2.0 * (-2.0 * t).exp() * (u * u / 2.0 + u / 2.0 + 0.25)).sqrt()
            }
            TestFunction::SincSq => {
                if t <= 0.0 {
                    (4.0 * PI / 3.0).sqrt()
                } else {
                    (32.0 / (3.0 * t.powi(3))).sqrt()
                }
            }
            TestFunction::Zero => 0.0,
        }
    }

    /// Symmetric frequency grid on which `ξ^{2k}|ĝ|²` is integrated before the tail takes over.
    pub fn frequency_grid(&self) -> QuadratureGrid {
        let grid = match self {
            TestFunction::Gauss => QuadratureGrid::gauss_panels(-16.0, 16.0, 0.5, 32),
            TestFunction::BSpline1 | TestFunction::BSpline2 | TestFunction::BSpline3 => {
                let xi = 2.0 * PI * 64.0;
                QuadratureGrid::gauss_panels(-xi, xi, 0.5 * PI, 32)
            }
            TestFunction::ExpAbs | TestFunction::Matern2 => QuadratureGrid::gauss_panels(-200.0, 200.0, 1.0, 32),
            TestFunction::SincSq | TestFunction::Zero => QuadratureGrid::gauss_panels(-1.0, 1.0, 0.5, 32),
        };
        grid.expect("static grids are valid")
    }

    /// One-sided spectral tail `∫_Ξ^∞ ξ^{2k} |ĝ(ξ)|² dξ` as `(value, uncertainty)`.
    ///
    /// `value` is added to the head integral; `uncertainty` bounds what is left
    /// out (a truncated asymptotic series, or the whole tail when no model is used).
    pub fn spectral_tail(&self, k: usize, xi: f64) -> Result<(f64, f64)> {
        self.check_order(k)?;
        match self {
            TestFunction::Gauss => {
                // ∫_Ξ^∞ ξ^{2k} π e^{-ξ²/2} ≤ π Ξ^{2k-1} e^{-Ξ²/2} / (1 - (2k-1)/Ξ²)
                let d = 1.0 - (2.0 * k as f64 - 1.0) / (xi * xi);
                if xi <= 0.0 || d <= 0.0 {
                    return Ok((0.0, f64::INFINITY));
                }
                Ok((0.0, PI * xi.powi(2 * k as i32 - 1) * (-xi * xi / 2.0).exp() / d))
            }
            TestFunction::BSpline1 => bspline_tail(1, k, xi),
            TestFunction::BSpline2 => bspline_tail(2, k, xi),
            TestFunction::BSpline3 => bspline_tail(3, k, xi),
            TestFunction::ExpAbs => rational_tail(4.0, 2, k, xi),
            TestFunction::Matern2 => rational_tail(16.0, 4, k, xi),
            TestFunction::SincSq => {
                if xi >= 1.0 {
                    return Ok((0.0, 0.0));
                }
                let lo = xi.max(0.0);
                let v = GaussLegendre::new(32)
                    .integrate(lo, 1.0, |s| s.powi(2 * k as i32) * (2.0 * PI * (1.0 - s)).powi(2));
                Ok((v, 0.0))
            }
            TestFunction::Zero => Ok((0.0, 0.0)),
        }
    }

    fn segments(&self) -> Vec<f64> {
        let mut s = alloc::vec![0.0];
        let extent = self.spatial_extent();
        s.extend(self.breaks().iter().copied().filter(|&b| b > 0.0 && b < extent));
        s.push(extent);
        s
    }
}

impl core::fmt::Display for TestFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.id())
    }
}

fn piecewise(pieces: &[(f64, &[f64])], n: usize, t: f64) -> f64 {
    let Some((_, coeffs)) = pieces.iter().find(|(end, _)| t < *end) else {
        return 0.0;
    };
    // Horner on the n-th derivative of Σ c_i t^i
    let mut v = 0.0;
    for (i, c) in coeffs.iter().enumerate().skip(n).rev() {
        let f = ((i - n + 1)..=i).fold(1.0, |acc, j| acc * j as f64);
        v = v * t + c * f;
    }
    v
}

fn sinc_sq_derivative(n: usize, x: f64) -> f64 {
    if x.abs() < 3.0 {
        // 2(1 - cos x)/x² = Σ_m (-1)^m 2 x^{2m} / (2m+2)!
        let mut sum = 0.0;
        let mut fact = 2.0; // (2m+2)! at m = 0
        for m in 0..40usize {
            if m > 0 {
                fact *= ((2 * m + 1) * (2 * m + 2)) as f64;
            }
            let p = 2 * m;
            if p < n {
                continue;
            }
            let sign = if m % 2 == 0 { 2.0 } else { -2.0 };
            let d = ((p - n + 1)..=p).fold(1.0, |acc, j| acc * j as f64);
            sum += sign * d / fact * x.powi((p - n) as i32);
        }
        return sum;
    }
    // Leibniz on 2(1 - cos x) · x^{-2}
    let mut sum = 0.0;
    for i in 0..=n {
        let r = n - i;
        let a = if i == 0 { 1.0 - x.cos() } else { -(x + i as f64 * PI / 2.0).cos() };
        let b = if r.is_multiple_of(2) { 1.0 } else { -1.0 } * ((r + 1) as f64) * ((1..=r).fold(1.0, |acc, j| acc * j as f64))
            * x.powi(-(r as i32) - 2);
        sum += binomial(n, i) * a * b;
    }
    2.0 * sum
}

/// Tail of `ξ^{2k} sinc^{2(m+1)}(ξ/2)` written as
/// `[C(2n,n) + 2 Σ_r (-1)^r C(2n,n-r) cos(rξ)] ξ^{-p}` with `n = m+1`, `p = 2n - 2k`.
fn bspline_tail(m: usize, k: usize, xi: f64) -> Result<(f64, f64)> {
    let n = m + 1;
    let p = 2 * n - 2 * k;
    if p < 2 || !(xi > 0.0) {
        return Err(Error::TailNotConverged { remainder: f64::INFINITY, head: 0.0 });
    }
    let mut value = binomial(2 * n, n) * xi.powi(1 - p as i32) / (p as f64 - 1.0);
    let mut remainder = 0.0f64;
    for r in 1..=n {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let (c, rem) = cosine_power_tail(r as f64, p, xi);
        value += 2.0 * sign * binomial(2 * n, n - r) * c;
        remainder += 2.0 * binomial(2 * n, n - r) * rem;
    }
    Ok((value, remainder))
}

/// `∫_Ξ^∞ cos(rξ) ξ^{-p} dξ` by repeated integration by parts (asymptotic in `rΞ`).
fn cosine_power_tail(r: f64, p: usize, xi: f64) -> (f64, f64) {
    let (s, c) = (r * xi).sin_cos();
    // C_p = -s Ξ^{-p}/r + (p/r) S_{p+1};  S_p = c Ξ^{-p}/r - (p/r) C_{p+1}
    let mut value = 0.0;
    let mut factor = 1.0;
    let mut last = f64::INFINITY;
    for step in 0..24usize {
        let q = p + step;
        let boundary = xi.powi(-(q as i32)) / r;
        // step parity alternates between C and S forms
        let term = match step % 4 {
            0 => -s * boundary,
            1 => c * boundary,
            2 => s * boundary,
            _ => -c * boundary,
        } * factor;
        let bound = boundary.abs() * factor.abs();
        if bound > last {
            break; // asymptotic series started diverging
        }
        value += term;
        last = bound;
        factor *= q as f64 / r;
        if bound < 1e-30 {
            break;
        }
    }
    (value, last)
}

/// Tail of `ξ^{2k} A (1+ξ²)^{-s}` from the expansion in `ξ^{-2}` (needs Ξ > 1).
fn rational_tail(a: f64, s: usize, k: usize, xi: f64) -> Result<(f64, f64)> {
    if !(xi > 1.5) {
        return Err(Error::TailNotConverged { remainder: f64::INFINITY, head: 0.0 });
    }
    let mut value = 0.0;
    let mut last = f64::INFINITY;
    for n in 0..200usize {
        let expo = 2 * k as i32 - 2 * s as i32 + 1 - 2 * n as i32;
        let denom = (2 * s + 2 * n) as f64 - 1.0 - 2.0 * k as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * binomial(n + s - 1, n) * a * xi.powi(expo) / denom;
        value += term;
        last = term.abs();
        if last < 1e-18 * value.abs() {
            break;
        }
    }
    Ok((value, last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn ids_round_trip() {
        for g in CATALOG {
            assert_eq!(TestFunction::from_id(g.id()), Some(g));
        }
        assert_eq!(TestFunction::from_id("nope"), None);
    }

    #[test]
    fn bspline_pieces_are_continuous_and_normalized() {
        for g in [TestFunction::BSpline1, TestFunction::BSpline2, TestFunction::BSpline3] {
            let m = g.k_max().unwrap();
            for &b in g.breaks() {
                for n in 0..m {
                    let lo = g.derivative(n, b - 1e-12).unwrap();
                    let hi = g.derivative(n, b + 1e-12).unwrap();
                    assert!((lo - hi).abs() < 1e-9, "{g} n={n} at {b}: {lo} vs {hi}");
                }
            }
            let rule = GaussLegendre::new(8);
            let mut cuts = alloc::vec![-g.spatial_extent()];
            cuts.extend(g.breaks().iter().rev().map(|b| -b));
            cuts.push(0.0);
            cuts.extend(g.breaks().iter().copied());
            cuts.dedup();
            let area: f64 = cuts.windows(2).map(|w| rule.integrate(w[0], w[1], |x| g.eval(x))).sum();
            assert_relative_eq!(area, 1.0, max_relative = 1e-14);
            assert_relative_eq!(g.fourier(0.0), 1.0);
        }
        assert_relative_eq!(TestFunction::BSpline3.eval(0.0), 2.0 / 3.0);
        assert_relative_eq!(TestFunction::BSpline2.eval(1.0), 0.125);
        assert_eq!(TestFunction::BSpline1.eval(1.5), 0.0);
    }

    #[test]
    fn derivatives_match_central_differences() {
        for g in CATALOG {
            for n in 1..=g.max_derivative() {
                for x in [-2.7, -0.8, 0.3, 1.3, 2.4, 4.1] {
                    if g.breaks().iter().any(|b| (x.abs() - b).abs() < 1e-3) {
                        continue;
                    }
                    let e = 1e-5;
                    let fd = (g.derivative(n - 1, x + e).unwrap() - g.derivative(n - 1, x - e).unwrap()) / (2.0 * e);
                    let exact = g.derivative(n, x).unwrap();
                    assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "{g} n={n} x={x}: {fd} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn sinc_sq_branches_agree() {
        for n in 0..=4 {
            let lo = sinc_sq_derivative(n, 3.0 - 1e-12);
            let hi = sinc_sq_derivative(n, 3.0 + 1e-12);
            assert!((lo - hi).abs() < 1e-11, "n={n}: {lo} vs {hi}");
        }
        assert_eq!(TestFunction::SincSq.eval(0.0), 1.0);
        let x: f64 = 7.3;
        assert_relative_eq!(TestFunction::SincSq.eval(x), ((x / 2.0).sin() / (x / 2.0)).powi(2), max_relative = 1e-13);
    }

    #[test]
    fn transforms_match_direct_quadrature() {
        // ĝ(ξ) = 2 ∫_0^∞ g(x) cos(ξx) dx for even g
        let rule = GaussLegendre::new(32);
        for g in [TestFunction::Gauss, TestFunction::BSpline2, TestFunction::BSpline3, TestFunction::ExpAbs, TestFunction::Matern2] {
            for xi in [0.0, 0.5, 1.7, 4.0] {
                let mut cuts = alloc::vec![0.0];
                cuts.extend(g.breaks().iter().copied());
                let extent = g.spatial_extent();
                let mut total = 0.0;
                let mut lo = 0.0;
                for hi in cuts.into_iter().skip(1).chain(core::iter::once(extent)) {
                    let (xs, ws) = crate::quadrature::panel_points(lo, hi, 0.25, &rule);
                    total += xs.iter().zip(&ws).map(|(&x, &w)| w * g.eval(x) * (xi * x).cos()).sum::<f64>();
                    lo = hi;
                }
                assert!((2.0 * total - g.fourier(xi)).abs() < 1e-10, "{g} at {xi}: {} vs {}", 2.0 * total, g.fourier(xi));
            }
        }
    }

    #[test]
    fn lp_norms_closed_forms() {
        assert_relative_eq!(TestFunction::ExpAbs.lp_norm_derivative(0, 1.0).unwrap(), 2.0, max_relative = 1e-10);
        assert_relative_eq!(TestFunction::ExpAbs.lp_norm_derivative(1, 1.0).unwrap(), 2.0, max_relative = 1e-10);
        assert_relative_eq!(TestFunction::Gauss.lp_norm_derivative(0, 2.0).unwrap(), (PI / 2.0).powf(0.25), max_relative = 1e-12);
        assert_relative_eq!(TestFunction::BSpline1.lp_norm_derivative(1, 2.0).unwrap(), 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(TestFunction::BSpline3.lp_norm_derivative(3, 4.0).unwrap(), (2.0 * 81.0 + 2.0f64).powf(0.25), max_relative = 1e-12);
        assert_relative_eq!(TestFunction::SincSq.lp_norm_derivative(0, 2.0).unwrap(), (4.0 * PI / 3.0).sqrt(), max_relative = 1e-8);
        assert_relative_eq!(TestFunction::Gauss.lp_norm_derivative(0, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(TestFunction::Zero.lp_norm_derivative(2, 1.0), Ok(0.0));
        assert!(matches!(TestFunction::ExpAbs.lp_norm_derivative(2, 2.0), Err(Error::SmoothnessExceeded { .. })));
    }

    #[test]
    fn l2_tails() {
        assert_relative_eq!(TestFunction::Gauss.l2_tail(0.0), (PI / 2.0).powf(0.25), max_relative = 1e-14);
        assert!(TestFunction::Gauss.l2_tail(8.0) < 1e-27);
        assert_eq!(TestFunction::BSpline3.l2_tail(4.0), 0.0);
        assert_relative_eq!(TestFunction::BSpline1.l2_tail(0.0), (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
        let m = TestFunction::Matern2;
        assert_relative_eq!(m.l2_tail(0.0), m.lp_norm_derivative(0, 2.0).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn spectral_tails_match_quadrature() {
        let rule = GaussLegendre::new(32);
        let cases = [
            (TestFunction::BSpline1, 1usize, 40.0),
            (TestFunction::BSpline3, 3, 2.0 * PI * 7.0),
            (TestFunction::BSpline2, 1, 33.3),
            (TestFunction::ExpAbs, 1, 6.0),
            (TestFunction::Matern2, 3, 6.0),
            (TestFunction::Matern2, 2, 8.0),
        ];
        for (g, k, xi) in cases {
            let (tail, unc) = g.spectral_tail(k, xi).unwrap();
            // truncate far out and add the leading ξ^{-p} mean beyond
            let far = 40000.0;
            let (xs, ws) = crate::quadrature::panel_points(xi, far, 0.5, &rule);
            let head: f64 = xs.iter().zip(&ws).map(|(&s, &w)| w * s.powi(2 * k as i32) * g.fourier(s).powi(2)).sum();
            let (rest, _) = g.spectral_tail(k, far).unwrap();
            assert!(((head + rest) - tail).abs() < 1e-9 * tail, "{g} k={k}: {} vs {tail}", head + rest);
            assert!(unc < 1e-9 * tail);
        }
    }

    proptest! {
        #[test]
        fn evaluators_are_even(x in -30.0f64..30.0) {
            for g in CATALOG {
                prop_assert_eq!(g.eval(x), g.eval(-x));
                for n in 0..=g.max_derivative() {
                    let (a, b) = (g.derivative(n, x).unwrap(), g.derivative(n, -x).unwrap());
                    let expected = if n % 2 == 0 { a } else { -a };
                    if x != 0.0 {
                        prop_assert!((b - expected).abs() <= 1e-12 * (1.0 + a.abs()));
                    }
                }
                prop_assert_eq!(g.fourier(x), g.fourier(-x));
            }
        }
    }
}
