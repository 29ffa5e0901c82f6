//! Quadrature rules: composite Gauss–Legendre panels, uniform Simpson grids,
//! half-line mappings and an accelerated oscillatory cosine integral.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over [a, b] with a single application of the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature scheme of a [`QuadratureGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Composite Simpson rule on a uniform grid.
    SimpsonUniform { points_per_unit: f64 },
    /// Composite Gauss–Legendre panels.
    GaussPanels { panel_width: f64, nodes: usize },
}

/// A quadrature rule over a finite interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub a: f64,
    pub b: f64,
    pub scheme: Scheme,
}

impl QuadratureGrid {
    pub fn new(a: f64, b: f64, scheme: Scheme) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::BadParameter(format!("quadrature domain [{a}, {b}] is empty")));
        }
        let ok = match scheme {
            Scheme::SimpsonUniform { points_per_unit } => points_per_unit > 0.0,
            Scheme::GaussPanels { panel_width, nodes } => panel_width > 0.0 && nodes > 0,
        };
        if !ok {
            return Err(Error::BadParameter("quadrature resolution must be positive".into()));
        }
        Ok(Self { a, b, scheme })
    }

    pub fn gauss_panels(a: f64, b: f64, panel_width: f64, nodes: usize) -> Result<Self> {
        Self::new(a, b, Scheme::GaussPanels { panel_width, nodes })
    }

    pub fn simpson(a: f64, b: f64, points_per_unit: f64) -> Result<Self> {
        Self::new(a, b, Scheme::SimpsonUniform { points_per_unit })
    }

    /// Frequency grid over `[-sigma, sigma]` with 32-node panels no wider than `min(1, h)/2`.
    pub fn for_band(sigma: f64, h: f64) -> Result<Self> {
        Self::gauss_panels(-sigma, sigma, 0.5 * h.min(1.0), 32)
    }

    /// Same grid restricted to a sub-interval.
    pub fn restricted(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(a.max(self.a), b.min(self.b), self.scheme)
    }

    /// Materialized nodes and weights.
    pub fn points(&self) -> (Vec<f64>, Vec<f64>) {
        match self.scheme {
            Scheme::SimpsonUniform { points_per_unit } => {
                let mut intervals = ((self.b - self.a) * points_per_unit).ceil() as usize;
                intervals = intervals.max(2);
                if intervals % 2 == 1 {
                    intervals += 1;
                }
                let dx = (self.b - self.a) / intervals as f64;
                let xs = (0..=intervals).map(|i| self.a + dx * i as f64).collect();
                let ws = (0..=intervals)
                    .map(|i| {
                        let c = if i == 0 || i == intervals {
                            1.0
                        } else if i % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        c * dx / 3.0
                    })
                    .collect();
                (xs, ws)
            }
            Scheme::GaussPanels { panel_width, nodes } => {
                panel_points(self.a, self.b, panel_width, &GaussLegendre::new(nodes))
            }
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let (xs, ws) = self.points();
        xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Nodes and weights of composite panels of at most `width` over [a, b].
pub fn panel_points(a: f64, b: f64, width: f64, rule: &GaussLegendre) -> (Vec<f64>, Vec<f64>) {
    let panels = (((b - a) / width).ceil() as usize).max(1);
    let dx = (b - a) / panels as f64;
    let n = rule.nodes.len();
    let mut xs = Vec::with_capacity(panels * n);
    let mut ws = Vec::with_capacity(panels * n);
    for p in 0..panels {
        let lo = a + dx * p as f64;
        let mid = lo + 0.5 * dx;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            xs.push(mid + 0.5 * dx * t);
            ws.push(0.5 * dx * w);
        }
    }
    (xs, ws)
}

/// Composite Gauss–Legendre over [a, b] with panel breaks forced at `breaks`.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    breaks: &[f64],
    width: f64,
    rule: &GaussLegendre,
    mut f: F,
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut total = 0.0;
    let mut lo = a;
    for hi in cuts.into_iter().chain(core::iter::once(b)) {
        if hi > lo {
            let (xs, ws) = panel_points(lo, hi, width, rule);
            total += xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum::<f64>();
        }
        lo = hi;
    }
    total
}

/// Integral over [0, ∞) through x = t/(1-t), composite panels in t.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(panels: usize, rule: &GaussLegendre, mut f: F) -> f64 {
    let (ts, ws) = panel_points(0.0, 1.0, 1.0 / panels as f64, rule);
    ts.iter()
        .zip(&ws)
        .map(|(&t, &w)| {
            let s = 1.0 - t;
            w * f(t / s) / (s * s)
        })
        .sum()
}

/// Adaptive Gauss–Legendre (16 vs 32 nodes) on [a, b].
pub struct Adaptive {
    coarse: GaussLegendre,
    fine: GaussLegendre,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Adaptive {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            coarse: GaussLegendre::new(16),
            fine: GaussLegendre::new(32),
            abs_tol,
            rel_tol,
            max_depth: 40,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> Result<f64> {
        let whole = self.fine.integrate(a, b, &mut *f);
        // halving stalls at kinks inside [a, b]; the few leaves there may use
        // a floor tolerance without moving the total
        let floor = 1e-4 * self.abs_tol.max(self.rel_tol * whole.abs());
        self.recurse(a, b, whole, self.abs_tol, floor, 0, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        fine: f64,
        tol: f64,
        floor: f64,
        depth: usize,
        f: &mut F,
    ) -> Result<f64> {
        let coarse = self.coarse.integrate(a, b, &mut *f);
        let err = (fine - coarse).abs();
        if err <= tol.max(floor).max(self.rel_tol * fine.abs()) || (b - a) < 1e-14 * (1.0 + a.abs()) {
            return Ok(fine);
        }
        if depth >= self.max_depth {
            return Err(Error::QuadratureFailure(format!(
                "adaptive subdivision exhausted on [{a}, {b}] (error {err:e})"
            )));
        }
        let m = 0.5 * (a + b);
        let left = self.fine.integrate(a, m, &mut *f);
        let right = self.fine.integrate(m, b, &mut *f);
        Ok(self.recurse(a, m, left, 0.5 * tol, floor, depth + 1, f)?
            + self.recurse(m, b, right, 0.5 * tol, floor, depth + 1, f)?)
    }
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the last two even-column estimates so the caller can judge convergence.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    if n < 3 {
        let last = *partial.last().unwrap_or(&0.0);
        return (last, partial.first().copied().unwrap_or(last));
    }
    let mut prev = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = cur[cur.len() - 1];
    let mut second = cur[cur.len() - 2];
    let mut col = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            let v = if diff == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / diff };
            next.push(v);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col.is_multiple_of(2) && !cur.is_empty() {
            let last = cur[cur.len() - 1];
            if last.is_finite() {
                second = if cur.len() >= 2 && cur[cur.len() - 2].is_finite() {
                    cur[cur.len() - 2]
                } else {
                    best
                };
                best = last;
            } else {
                break;
            }
        }
    }
    (best, second)
}

/// ∫_0^∞ f(x) cos(ξx) dx for a smooth, eventually monotone decaying `f`.
///
/// Splits at the zeros of cos(ξx), integrates each half period adaptively and
/// accelerates the alternating tail with Wynn's epsilon.
pub fn cosine_transform_half_line<F: FnMut(f64) -> f64>(mut f: F, xi: f64, rel_tol: f64) -> Result<f64> {
    let xi = xi.abs();
    let adaptive = Adaptive::new(1e-300, rel_tol * 1e-3);
    if xi == 0.0 {
        let rule = GaussLegendre::new(32);
        let a = integrate_half_line(64, &rule, &mut f);
        let b = integrate_half_line(128, &rule, &mut f);
        if (a - b).abs() > rel_tol * b.abs().max(1e-300) {
            return Err(Error::QuadratureFailure(format!(
                "half-line integral not converged ({a} vs {b})"
            )));
        }
        return Ok(b);
    }
    let half = PI / xi;
    let head_end = 0.5 * half;
    let mut g = |x: f64| f(x) * (xi * x).cos();
    let head = adaptive.integrate(0.0, head_end, &mut g)?;
    let mut partial = Vec::new();
    let mut sum = head;
    let mut last_est = f64::NAN;
    let mut lo = head_end;
    for k in 0..400 {
        let hi = lo + half;
        sum += adaptive.integrate(lo, hi, &mut g)?;
        partial.push(sum);
        lo = hi;
        if partial.len() >= 8 && k % 2 == 1 {
            let window = &partial[partial.len().saturating_sub(24)..];
            let (est, prev) = wynn_epsilon(window);
            let scale = est.abs().max(1e-300);
            if (est - prev).abs() <= rel_tol * scale && (est - last_est).abs() <= rel_tol * scale {
                return Ok(est);
            }
            last_est = est;
        }
    }
    Err(Error::QuadratureFailure(format!(
        "oscillatory tail at xi = {xi} did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn adaptive_survives_interior_kink() {
        let a = Adaptive::new(1e-15, 1e-11);
        let v = a.integrate(0.0, 1.0, &mut |x: f64| (3.0 * x - 2.0).abs()).unwrap();
        assert_relative_eq!(v, 5.0 / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4));
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert_relative_eq!(v, exact, max_relative = 1e-13);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn simpson_and_panels_agree_on_gaussian() {
        let f = |x: f64| (-x * x).exp();
        let s = QuadratureGrid::simpson(-8.0, 8.0, 64.0).unwrap().integrate(f);
        let g = QuadratureGrid::gauss_panels(-8.0, 8.0, 0.5, 32).unwrap().integrate(f);
        assert_relative_eq!(s, PI.sqrt(), max_relative = 1e-10);
        assert_relative_eq!(g, PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn half_line_mapping_handles_algebraic_decay() {
        let v = integrate_half_line(64, &GaussLegendre::new(32), |x| 1.0 / (1.0 + x * x));
        assert_relative_eq!(v, PI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn cosine_transform_of_lorentzian() {
        for &xi in &[0.0, 0.05, 1.0, 3.7] {
            let v = cosine_transform_half_line(|x| 1.0 / (1.0 + x * x), xi, 1e-10).unwrap();
            assert_relative_eq!(v, 0.5 * PI * (-xi).exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let partial: Vec<f64> = (1..=15)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (est, _) = wynn_epsilon(&partial);
        assert!((est - core::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn bad_grid_rejected() {
        assert!(QuadratureGrid::simpson(1.0, 1.0, 10.0).is_err());
        assert!(QuadratureGrid::gauss_panels(0.0, 1.0, 0.0, 8).is_err());
    }
}
