//! Sobolev seminorms in frequency and in space, L2 errors on finite
//! intervals, forward divided differences and the two explicit-constant
//! sampling inequalities.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::catalog::TestFunction;
use crate::error::{Error, Result};
use crate::fft::fft_in_place;
use crate::quadrature::QuadratureGrid;
use crate::sites::{separation_bounds, SiteSequence};
use crate::special::factorial;

/// Tail-to-head ratio above which a frequency integral is rejected.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// End-sample magnitude, relative to the peak, tolerated by [`grid_seminorm`].
pub const LEAKAGE_THRESHOLD: f64 = 1e-10;
/// Relative slack granted to the explicit-constant inequalities.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Frequency,
    Space,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Frequency => "freq",
            Route::Space => "space",
        }
    }
}

/// `(1/√(2π)) (∫ |ξ|^{2k} |ĝ(ξ)|² dξ)^{1/2}` with the catalog's closed-form transform.
///
/// `quad` must be symmetric; beyond it the catalog's tail model takes over.
pub fn sobolev_seminorm(g: TestFunction, k: usize, quad: &QuadratureGrid) -> Result<f64> {
    g.check_order(k)?;
    if (quad.a + quad.b).abs() > 1e-12 * quad.b.abs() {
        return Err(Error::BadParameter(alloc::format!(
            "frequency grid [{}, {}] must be symmetric",
            quad.a, quad.b
        )));
    }
    let head = quad.integrate(|xi| xi.powi(2 * k as i32) * g.fourier(xi).powi(2));
    let (tail, uncertainty) = g.spectral_tail(k, quad.b)?;
    let total = head + 2.0 * tail;
    if 2.0 * uncertainty > TAIL_TOLERANCE * total.abs() && 2.0 * uncertainty > 0.0 {
        return Err(Error::TailNotConverged { remainder: 2.0 * uncertainty, head });
    }
    Ok((total.max(0.0) / (2.0 * PI)).sqrt())
}

/// `‖g^{(k)}‖_{L2(ℝ)}` from the pointwise derivative.
pub fn sobolev_seminorm_spatial(g: TestFunction, k: usize) -> Result<f64> {
    g.check_order(k)?;
    g.lp_norm_derivative(k, 2.0)
}

/// Both routes side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormComparison {
    pub id: TestFunction,
    pub k: usize,
    pub frequency: f64,
    pub space: f64,
    pub relative_gap: f64,
}

pub fn compare_routes(g: TestFunction, k: usize) -> Result<SeminormComparison> {
    let frequency = sobolev_seminorm(g, k, &g.frequency_grid())?;
    let space = sobolev_seminorm_spatial(g, k)?;
    let scale = frequency.abs().max(space.abs());
    let relative_gap = if scale == 0.0 { 0.0 } else { (frequency - space).abs() / scale };
    Ok(SeminormComparison { id: g, k, frequency, space, relative_gap })
}

/// `‖f - g‖_{L2}` over the grid's interval.
pub fn l2_error<F: FnMut(f64) -> f64, G: FnMut(f64) -> f64>(mut f: F, mut g: G, quad: &QuadratureGrid) -> f64 {
    quad.integrate(|x| {
        let d = f(x) - g(x);
        d * d
    })
    .max(0.0)
    .sqrt()
}

/// An L2 error on `[-T, T]` together with `‖g‖_{L2(|x|>T)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalError {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn l2_error_against<F: FnMut(f64) -> f64>(f: F, g: TestFunction, quad: &QuadratureGrid) -> IntervalError {
    let value = l2_error(f, |x| g.eval(x), quad);
    let t = quad.a.abs().min(quad.b.abs());
    IntervalError { value, tail_bound: g.l2_tail(t) }
}

/// `‖v‖_{ℓ_p}`, `p = ∞` allowed.
pub fn lp_sequence_norm(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    scale * values.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Forward divided differences `g^{[k]}(hx_j)` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    pub order: usize,
    pub h: f64,
    /// Index of the first site in the window.
    pub index_lo: i64,
    pub values: Vec<f64>,
}

/// All levels `g^{[0]}, …, g^{[k]}` of the recursion
/// `g^{[k]}(hx_j) = (g^{[k-1]}(hx_{j+1}) - g^{[k-1]}(hx_j)) / (h(x_{j+k} - x_j))`.
pub fn divided_difference_levels(points: &[f64], y: &[f64], h: f64, k: usize) -> Result<Vec<Vec<f64>>> {
    if points.len() != y.len() {
        return Err(Error::LengthMismatch { expected: points.len(), got: y.len() });
    }
    if points.len() < k + 1 {
        return Err(Error::WindowTooSmall { len: points.len(), needed: k + 1 });
    }
    if !(h > 0.0) {
        return Err(Error::BadH(h));
    }
    let mut levels = Vec::with_capacity(k + 1);
    levels.push(y.to_vec());
    for order in 1..=k {
        let prev: &Vec<f64> = &levels[order - 1];
        let next: Vec<f64> = (0..prev.len() - 1)
            .map(|j| (prev[j + 1] - prev[j]) / (h * (points[j + order] - points[j])))
            .collect();
        levels.push(next);
    }
    Ok(levels)
}

pub fn divided_differences(sites: &SiteSequence, y: &[f64], h: f64, k: usize) -> Result<DividedDifferenceTable> {
    let mut levels = divided_difference_levels(sites.points(), y, h, k)?;
    Ok(DividedDifferenceTable { order: k, h, index_lo: sites.index_lo(), values: levels.pop().unwrap() })
}

/// One side of an explicit-constant inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl BoundReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, pass: lhs <= rhs * (1.0 + BOUND_SLACK) }
    }
}

/// `‖g^{[k]}‖_{ℓ_p} ≤ (1/(k-1)!) (1/(hq))^{1/p} ‖g^{(k)}‖_{L_p}` given the derivative norm.
pub fn divided_bound(table: &DividedDifferenceTable, q: f64, p: f64, derivative_norm: f64) -> BoundReport {
    let k = table.order.max(1);
    let lhs = lp_sequence_norm(&table.values, p);
    let rhs = (1.0 / (table.h * q)).powf(1.0 / p) * derivative_norm / factorial(k - 1);
    BoundReport::new(lhs, rhs)
}

pub fn divided_bound_check(g: TestFunction, k: usize, sites: &SiteSequence, h: f64, p: f64) -> Result<BoundReport> {
    g.check_order(k)?;
    if k == 0 {
        return Err(Error::BadParameter("divided differences need k ≥ 1".into()));
    }
    let norm = g.lp_norm_derivative(k, p)?;
    divided_bound_check_with_norm(g, k, sites, h, p, norm)
}

/// As [`divided_bound_check`] with `‖g^{(k)}‖_{L_p}` supplied by the caller.
pub fn divided_bound_check_with_norm(
    g: TestFunction,
    k: usize,
    sites: &SiteSequence,
    h: f64,
    p: f64,
    derivative_norm: f64,
) -> Result<BoundReport> {
    let y: Vec<f64> = sites.points().iter().map(|x| g.eval(h * x)).collect();
    let table = divided_differences(sites, &y, h, k)?;
    Ok(divided_bound(&table, sites.q(), p, derivative_norm))
}

/// `‖(g(x_n))‖_{ℓ_p} ≤ 2^{1/p'} (3/(2q))^{1/p} ‖g‖_p + 2^{1/p'} (2q/3)^{1/p'} ‖g'‖_p`.
pub fn sample_bound(samples: &[f64], q: f64, p: f64, g_norm: f64, dg_norm: f64) -> BoundReport {
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let inv_pp = 1.0 - inv_p;
    let c = 2f64.powf(inv_pp);
    let rhs = c * (1.5 / q).powf(inv_p) * g_norm + c * (2.0 * q / 3.0).powf(inv_pp) * dg_norm;
    BoundReport::new(lp_sequence_norm(samples, p), rhs)
}

/// Checks the sampling inequality at the given (already scaled) points.
pub fn sample_bound_check(g: TestFunction, points: &[f64], p: f64) -> Result<BoundReport> {
    let g_norm = g.lp_norm_derivative(0, p)?;
    let dg_norm = g.lp_norm_derivative(1, p)?;
    sample_bound_check_with_norms(g, points, p, g_norm, dg_norm)
}

pub fn sample_bound_check_with_norms(g: TestFunction, points: &[f64], p: f64, g_norm: f64, dg_norm: f64) -> Result<BoundReport> {
    if !(p >= 1.0) {
        return Err(Error::BadParameter(alloc::format!("p = {p} must be at least 1")));
    }
    let (q, _) = separation_bounds(points)?;
    let samples: Vec<f64> = points.iter().map(|&x| g.eval(x)).collect();
    Ok(sample_bound(&samples, q, p, g_norm, dg_norm))
}

/// FFT approximation of `|u|_{W_2^k}` from samples on a uniform grid of spacing `dx`.
///
/// The samples are treated as one period, so they must have decayed at both ends.
pub fn grid_seminorm(samples: &[f64], dx: f64, k: usize) -> Result<f64> {
    let n = samples.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::BadParameter(alloc::format!("grid length {n} is not a power of two")));
    }
    if !(dx > 0.0) {
        return Err(Error::BadParameter(alloc::format!("grid spacing {dx} must be positive")));
    }
    let peak = samples.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let end = samples[0].abs().max(samples[n - 1].abs());
    if end > LEAKAGE_THRESHOLD * peak {
        return Err(Error::BoundaryLeakage { end, peak });
    }
    let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut data)?;
    let dxi = 2.0 * PI / (n as f64 * dx);
    let mut sum = 0.0;
    for (m, u) in data.iter().enumerate() {
        let mm = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
        let xi = mm * dxi;
        sum += xi.abs().powi(2 * k as i32) * (u * dx).norm_sqr();
    }
    Ok((sum * dxi / (2.0 * PI)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CATALOG;
    use crate::sites::{build_perturbed_lattice, PerturbationRule};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seminorm_examples() {
        let g = TestFunction::Gauss;
        assert_relative_eq!(sobolev_seminorm(g, 0, &g.frequency_grid()).unwrap(), (PI / 2.0).powf(0.25), max_relative = 1e-12);
        let b = TestFunction::BSpline1;
        assert_relative_eq!(sobolev_seminorm(b, 1, &b.frequency_grid()).unwrap(), 2f64.sqrt(), max_relative = 1e-10);
        assert!(matches!(sobolev_seminorm(b, 2, &b.frequency_grid()), Err(Error::SmoothnessExceeded { .. })));
    }

    #[test]
    fn matern2_two_frequency_schemes() {
        // ξ⁶ · 16/(1+ξ²)⁴: panels vs. the substitution ξ = tan θ on [0, π/2]
        let g = TestFunction::Matern2;
        let a = sobolev_seminorm(g, 3, &g.frequency_grid()).unwrap();
        let rule = crate::quadrature::GaussLegendre::new(32);
        let (ts, ws) = crate::quadrature::panel_points(0.0, PI / 2.0, PI / 64.0, &rule);
        let half: f64 = ts
            .iter()
            .zip(&ws)
            .map(|(&t, &w)| {
                // ξ⁶/(1+ξ²)⁴ dξ = sin⁶θ dθ
                w * 16.0 * t.sin().powi(6)
            })
            .sum();
        let b = (2.0 * half / (2.0 * PI)).sqrt();
        assert_relative_eq!(a, b, max_relative = 1e-8);
        assert_relative_eq!(b, 2.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn routes_agree_for_catalog() {
        for g in CATALOG {
            let top = g.k_max().unwrap_or(3).min(3);
            for k in 0..=top {
                let c = compare_routes(g, k).unwrap();
                assert!(c.relative_gap <= 1e-6, "{g} k={k}: {c:?}");
            }
        }
    }

    #[test]
    fn tail_rejected_on_short_grid() {
        let g = TestFunction::Gauss;
        let short = QuadratureGrid::gauss_panels(-2.0, 2.0, 0.5, 32).unwrap();
        assert!(matches!(sobolev_seminorm(g, 1, &short), Err(Error::TailNotConverged { .. })));
    }

    #[test]
    fn l2_error_examples() {
        let g = TestFunction::Gauss;
        let quad = QuadratureGrid::simpson(-8.0, 8.0, 64.0).unwrap();
        assert_eq!(l2_error(|x| g.eval(x), |x| g.eval(x), &quad), 0.0);
        let e = l2_error_against(|_| 0.0, g, &quad);
        assert_relative_eq!(e.value, (PI / 2.0).powf(0.25), max_relative = 1e-10);
        assert!(e.tail_bound < 1e-27);

        let quad = QuadratureGrid::simpson(-4.0, 4.0, 64.0).unwrap();
        let (b3, b1) = (TestFunction::BSpline3, TestFunction::BSpline1);
        let got = l2_error(|x| b3.eval(x), |x| b1.eval(x), &quad);
        // piecewise-exact value; Simpson at 64/unit is good to a few 1e-7 here
        assert_relative_eq!(got, 0.21455010144892975, max_relative = 1e-6);
        let fine = QuadratureGrid::simpson(-4.0, 4.0, 1024.0).unwrap();
        let got = l2_error(|x| b3.eval(x), |x| b1.eval(x), &fine);
        assert_relative_eq!(got, 0.21455010144892975, max_relative = 1e-10);
    }

    #[test]
    fn divided_difference_examples() {
        let lattice = SiteSequence::lattice(5);
        let pts = lattice.points();
        let y: Vec<f64> = pts.iter().map(|x| x * x).collect();
        let levels = divided_difference_levels(pts, &y, 1.0, 2).unwrap();
        for (j, v) in levels[1].iter().enumerate() {
            assert_eq!(*v, 2.0 * pts[j] + 1.0);
        }
        assert!(levels[2].iter().all(|&v| v == 1.0));
        assert_eq!(levels[2].len(), pts.len() - 2);
        assert_eq!(
            divided_difference_levels(&[0.0, 1.0], &[0.0, 1.0], 1.0, 2),
            Err(Error::WindowTooSmall { len: 2, needed: 3 })
        );
    }

    #[test]
    fn divided_bound_examples() {
        let r = divided_bound_check(TestFunction::Zero, 1, &SiteSequence::lattice(8), 0.5, 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (0.0, 0.0, true));
        let r = divided_bound_check(TestFunction::Gauss, 1, &SiteSequence::lattice(32), 0.5, 2.0).unwrap();
        assert!(r.pass, "{r:?}");
        assert_relative_eq!(r.rhs, 2f64.sqrt() * (PI / 2.0).powf(0.25), max_relative = 1e-10);
        let s = build_perturbed_lattice(64, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        for h in [1.0, 0.5, 0.25] {
            let r = divided_bound_check(TestFunction::BSpline3, 3, &s, h, 2.0).unwrap();
            assert!(r.pass, "h={h}: {r:?}");
        }
    }

    #[test]
    fn sample_bound_examples() {
        let lattice = SiteSequence::lattice(40);
        let r = sample_bound_check(TestFunction::Zero, lattice.points(), 2.0).unwrap();
        assert!(r.pass && r.lhs == 0.0);

        let r = sample_bound_check(TestFunction::Gauss, lattice.points(), 2.0).unwrap();
        let n = (PI / 2.0).powf(0.25);
        let rhs = 2f64.sqrt() * 1.5f64.sqrt() * n + 2f64.sqrt() * (2.0f64 / 3.0).sqrt() * n;
        assert_relative_eq!(r.rhs, rhs, max_relative = 1e-10);
        let lhs: f64 = (-40..=40).map(|i: i32| (-2.0 * (i * i) as f64).exp()).sum::<f64>().sqrt();
        assert_relative_eq!(r.lhs, lhs, max_relative = 1e-14);
        assert!(r.pass);

        let r = sample_bound_check(TestFunction::ExpAbs, lattice.points(), 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert_relative_eq!(r.lhs, (1.0 + e) / (1.0 - e), max_relative = 1e-12);
        assert_relative_eq!(r.rhs, 1.5 * 2.0 + 2.0, max_relative = 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn grid_seminorm_examples() {
        assert_eq!(grid_seminorm(&[0.0; 64], 0.1, 2).unwrap(), 0.0);
        let n = 1 << 14;
        let dx = 32.0 / n as f64;
        let samples: Vec<f64> = (0..n).map(|i| (-(-16.0 + dx * i as f64).powi(2)).exp()).collect();
        let g = TestFunction::Gauss;
        let exact = sobolev_seminorm(g, 1, &g.frequency_grid()).unwrap();
        assert_relative_eq!(grid_seminorm(&samples, dx, 1).unwrap(), exact, max_relative = 1e-6);
        let flat = [1.0; 64];
        assert!(matches!(grid_seminorm(&flat, 0.1, 1), Err(Error::BoundaryLeakage { .. })));
        assert!(grid_seminorm(&[0.0; 48], 0.1, 1).is_err());
    }

    #[test]
    fn polynomial_exactness() {
        let s = build_perturbed_lattice(10, &PerturbationRule::SeededUniform { amplitude: 0.2, seed: 3 }, true).unwrap();
        for h in [1.0, 0.3] {
            for k in 1..=3usize {
                let y_low: Vec<f64> = s.points().iter().map(|x| (h * x).powi(k as i32 - 1) + 0.5).collect();
                let y_top: Vec<f64> = s.points().iter().map(|x| (h * x).powi(k as i32)).collect();
                let low = divided_difference_levels(s.points(), &y_low, h, k).unwrap();
                let top = divided_difference_levels(s.points(), &y_top, h, k).unwrap();
                assert!(low[k].iter().all(|v| v.abs() < 1e-9), "k={k}");
                assert!(top[k].iter().all(|v| (v - 1.0).abs() < 1e-9), "k={k}");
            }
        }
    }

    #[test]
    fn mean_value_consistency() {
        let s = build_perturbed_lattice(12, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        for g in [TestFunction::Gauss, TestFunction::SincSq] {
            for h in [1.0, 0.4] {
                for k in 2..=4usize {
                    let y: Vec<f64> = s.points().iter().map(|x| g.eval(h * x)).collect();
                    let levels = divided_difference_levels(s.points(), &y, h, k - 1).unwrap();
                    let f = factorial(k - 1);
                    for (j, v) in levels[k - 1].iter().enumerate() {
                        let (a, b) = (h * s.points()[j], h * s.points()[j + k - 1]);
                        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                        for i in 0..=400 {
                            let d = g.derivative(k - 1, a + (b - a) * i as f64 / 400.0).unwrap();
                            lo = lo.min(d);
                            hi = hi.max(d);
                        }
                        let scaled = v * f;
                        assert!(scaled >= lo - 1e-9 && scaled <= hi + 1e-9, "{g} h={h} k={k} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn randomized_explicit_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let funcs = [TestFunction::Gauss, TestFunction::BSpline2, TestFunction::ExpAbs, TestFunction::Matern2];
        for _ in 0..20 {
            let g = funcs[rng.random_range(0..funcs.len())];
            let k = rng.random_range(1..=g.k_max().unwrap_or(3).min(3));
            let p = [1.0, 2.0, 4.0][rng.random_range(0..3)];
            let h = rng.random_range(0.1..=1.0);
            let rule = PerturbationRule::SeededUniform { amplitude: rng.random_range(0.0..0.24), seed: rng.random() };
            let s = build_perturbed_lattice(rng.random_range(8..40), &rule, true).unwrap();
            assert!(divided_bound_check(g, k, &s, h, p).unwrap().pass);
            let scaled: Vec<f64> = s.points().iter().map(|x| h * x).collect();
            assert!(sample_bound_check(g, &scaled, p).unwrap().pass);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn first_differences_of_linear_data_are_slope(
            seed in any::<u64>(), amplitude in 0.0f64..0.24, h in 0.01f64..=1.0,
            slope in -5.0f64..5.0, offset in -5.0f64..5.0,
        ) {
            let s = build_perturbed_lattice(12, &PerturbationRule::SeededUniform { amplitude, seed }, true).unwrap();
            let y: Vec<f64> = s.points().iter().map(|x| slope * h * x + offset).collect();
            let t = divided_differences(&s, &y, h, 1).unwrap();
            prop_assert_eq!(t.values.len(), s.len() - 1);
            for v in t.values {
                prop_assert!((v - slope).abs() <= 1e-9 * (1.0 + slope.abs()) / h);
            }
        }

        #[test]
        fn lp_sequence_norm_is_monotone_in_p(v in proptest::collection::vec(-10.0f64..10.0, 1..30)) {
            let n1 = lp_sequence_norm(&v, 1.0);
            let n2 = lp_sequence_norm(&v, 2.0);
            let n4 = lp_sequence_norm(&v, 4.0);
            let ninf = lp_sequence_norm(&v, f64::INFINITY);
            prop_assert!(n1 >= n2 * (1.0 - 1e-12) && n2 >= n4 * (1.0 - 1e-12) && n4 >= ninf * (1.0 - 1e-12));
        }
    }
}
