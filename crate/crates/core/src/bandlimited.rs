//! The Paley–Wiener interpolant `F ∈ PW_{π/h}` of samples at scaled sites,
//! realized by sinc collocation, with its Fourier-side seminorms.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::catalog::TestFunction;
use crate::collocate::DEFAULT_DENSE_CAP;
use crate::error::{Error, Result};
use crate::linalg::SymmetricSystem;
use crate::norms::{l2_error, sobolev_seminorm};
use crate::quadrature::{QuadratureGrid, Scheme};
use crate::sites::{scale, ScaledSites, SiteSequence};
use crate::special::{sinc, sinc_derivative};

/// Relative agreement required between the two resolutions in [`pw_seminorms`].
pub const PW_QUADRATURE_TOL: f64 = 1e-8;

/// `F(x) = Σ c_j sinc(σ(x - hx_j))`, `σ = π/h`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedInterpolant {
    centers: Vec<f64>,
    h: f64,
    sigma: f64,
    coefficients: Vec<f64>,
    samples: Vec<f64>,
    max_site_residual: f64,
    condition_estimate: f64,
}

/// Solves `S c = y` with `S_ij = sinc(σ(hx_i - hx_j))`.
pub fn sinc_collocate(sites: &ScaledSites, samples: &[f64]) -> Result<BandlimitedInterpolant> {
    let n = sites.len();
    if samples.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: samples.len() });
    }
    if n > DEFAULT_DENSE_CAP {
        return Err(Error::WindowTooLarge { len: n, cap: DEFAULT_DENSE_CAP });
    }
    let h = sites.h();
    let sigma = PI / h;
    let x = sites.points();
    let matrix = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { sinc(sigma * (x[i] - x[j])) });
    let system = SymmetricSystem::factor(matrix, 0.0);
    let coefficients = system.solve(samples)?;
    let max_site_residual = system.residual(&coefficients, samples);
    Ok(BandlimitedInterpolant {
        centers: x.to_vec(),
        h,
        sigma,
        coefficients,
        samples: samples.to_vec(),
        max_site_residual,
        condition_estimate: system.condition_estimate(),
    })
}

impl BandlimitedInterpolant {
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
    pub fn max_site_residual(&self) -> f64 {
        self.max_site_residual
    }
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn derivative(&self, n: usize, x: f64) -> f64 {
        let s = self.sigma;
        let sum: f64 = self
            .centers
            .iter()
            .zip(&self.coefficients)
            .map(|(c, a)| a * sinc_derivative(n, s * (x - c)))
            .sum();
        s.powi(n as i32) * sum
    }

    /// `F̂(ξ) = (π/σ) Σ c_j e^{-i hx_j ξ}` on `[-σ, σ]`, zero outside.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        if xi.abs() > self.sigma {
            return Complex64::new(0.0, 0.0);
        }
        let sum: Complex64 = self
            .centers
            .iter()
            .zip(&self.coefficients)
            .map(|(c, a)| Complex64::from_polar(*a, -c * xi))
            .sum();
        sum * (PI / self.sigma)
    }
}

/// `|F|_{W_2^k}` for several `k` from one pass over the frequency nodes.
///
/// The grid is restricted to `[-σ, σ]` and the result is cross-checked
/// against the same panels with half the nodes.
pub fn pw_seminorms(f: &BandlimitedInterpolant, ks: &[usize], quad: &QuadratureGrid) -> Result<Vec<f64>> {
    let s = f.sigma;
    if quad.a > -s || quad.b < s {
        return Err(Error::BadParameter(alloc::format!(
            "frequency grid [{}, {}] does not cover [-{s}, {s}]",
            quad.a, quad.b
        )));
    }
    let mut fine = quad.restricted(-s, s)?;
    // |F̂|² oscillates at up to twice the largest |hx_j|; keep that under a radian or two per panel
    let reach = f.centers.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if let Scheme::GaussPanels { panel_width, nodes } = fine.scheme {
        if reach > 0.0 && panel_width > 1.0 / reach {
            fine = QuadratureGrid::new(-s, s, Scheme::GaussPanels { panel_width: 1.0 / reach, nodes })?;
        }
    }
    let coarse = match fine.scheme {
        Scheme::GaussPanels { panel_width, nodes } => {
            QuadratureGrid::new(-s, s, Scheme::GaussPanels { panel_width, nodes: (nodes / 2).max(4) })?
        }
        Scheme::SimpsonUniform { points_per_unit } => {
            QuadratureGrid::new(-s, s, Scheme::SimpsonUniform { points_per_unit: points_per_unit / 2.0 })?
        }
    };
    let integrate = |grid: &QuadratureGrid| -> Vec<f64> {
        let (xs, ws) = grid.points();
        let mut sums = alloc::vec![0.0; ks.len()];
        for (&xi, &w) in xs.iter().zip(&ws) {
            let p = f.fourier(xi).norm_sqr();
            for (acc, &k) in sums.iter_mut().zip(ks) {
                *acc += w * xi.abs().powi(2 * k as i32) * p;
            }
        }
        sums
    };
    let a = integrate(&fine);
    let b = integrate(&coarse);
    let mut out = Vec::with_capacity(ks.len());
    for (&va, &vb) in a.iter().zip(&b) {
        if (va - vb).abs() > PW_QUADRATURE_TOL * va.abs().max(1e-300) && (va - vb).abs() > 1e-28 {
            return Err(Error::QuadratureFailure(alloc::format!(
                "band integral unresolved: {va:e} vs {vb:e} at half resolution"
            )));
        }
        out.push((va.max(0.0) / (2.0 * PI)).sqrt());
    }
    Ok(out)
}

/// `(1/√(2π)) (∫_{-σ}^{σ} ξ^{2k} |F̂(ξ)|² dξ)^{1/2}`.
pub fn pw_seminorm(f: &BandlimitedInterpolant, k: usize, quad: &QuadratureGrid) -> Result<f64> {
    Ok(pw_seminorms(f, &[k], quad)?[0])
}

/// Interpolates `g` at `h·sites`.
pub fn interpolate_bandlimited(sites: &SiteSequence, h: f64, g: TestFunction) -> Result<BandlimitedInterpolant> {
    let scaled = scale(sites, h)?;
    let y: Vec<f64> = scaled.points().iter().map(|&x| g.eval(x)).collect();
    sinc_collocate(&scaled, &y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinJacksonReport {
    pub h: f64,
    /// `|F|_{W_2^k}`
    pub bernstein_lhs: f64,
    /// `|g|_{W_2^k}`
    pub seminorm_g: f64,
    /// `‖g - F‖_{L2[-T, T]}`
    pub jackson_lhs: f64,
    /// `‖g - F‖ / (h^k |g|_{W_2^k})`
    pub ratio_jackson: f64,
    pub condition: f64,
    pub site_residual: f64,
}

/// Builds `F` from samples of `g` at `h·sites` and measures both inequalities;
/// the L2 error is taken on `[-t, t]` with Simpson at `points_per_unit`.
pub fn bernstein_jackson_check(
    g: TestFunction,
    k: usize,
    sites: &SiteSequence,
    h: f64,
    t: f64,
    points_per_unit: f64,
) -> Result<BernsteinJacksonReport> {
    g.check_order(k)?;
    let f = interpolate_bandlimited(sites, h, g)?;
    let band = QuadratureGrid::for_band(f.sigma(), h)?;
    let bernstein_lhs = pw_seminorm(&f, k, &band)?;
    let seminorm_g = sobolev_seminorm(g, k, &g.frequency_grid())?;
    let space = QuadratureGrid::simpson(-t, t, points_per_unit)?;
    let jackson_lhs = l2_error(|x| f.eval(x), |x| g.eval(x), &space);
    let denom = h.powi(k as i32) * seminorm_g;
    let ratio_jackson = if jackson_lhs == 0.0 { 0.0 } else { jackson_lhs / denom };
    Ok(BernsteinJacksonReport {
        h,
        bernstein_lhs,
        seminorm_g,
        jackson_lhs,
        ratio_jackson,
        condition: f.condition_estimate(),
        site_residual: f.max_site_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sites::{build_perturbed_lattice, PerturbationRule};
    use approx::assert_relative_eq;

    #[test]
    fn lattice_reduces_to_cardinal_series() {
        let s = SiteSequence::lattice(20);
        let scaled = scale(&s, 1.0).unwrap();
        let y: Vec<f64> = s.points().iter().map(|&x| TestFunction::Matern2.eval(x)).collect();
        let f = sinc_collocate(&scaled, &y).unwrap();
        for (c, v) in f.coefficients().iter().zip(&y) {
            assert!((c - v).abs() <= 1e-15, "{c} vs {v}");
        }
        assert!(f.max_site_residual() <= 1e-15);
        let zero = sinc_collocate(&scaled, &alloc::vec![0.0; s.len()]).unwrap();
        assert!(zero.coefficients().iter().all(|&c| c == 0.0));
        assert_eq!(zero.eval(0.37), 0.0);
        let band = QuadratureGrid::for_band(PI, 1.0).unwrap();
        assert_eq!(pw_seminorm(&zero, 2, &band).unwrap(), 0.0);
    }

    #[test]
    fn unit_impulse_has_unit_norm() {
        let s = SiteSequence::lattice(4);
        let mut y = alloc::vec![0.0; s.len()];
        y[4] = 1.0;
        let f = sinc_collocate(&scale(&s, 1.0).unwrap(), &y).unwrap();
        let band = QuadratureGrid::for_band(PI, 1.0).unwrap();
        assert_relative_eq!(pw_seminorm(&f, 0, &band).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn perturbed_sites_are_well_conditioned() {
        let s = build_perturbed_lattice(64, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        let f = interpolate_bandlimited(&s, 0.5, TestFunction::Gauss).unwrap();
        assert!(f.max_site_residual() <= 1e-8);
        assert!(f.condition_estimate() <= 1e6, "{}", f.condition_estimate());
        for (x, y) in f.centers().iter().zip(f.samples()) {
            assert!((f.eval(*x) - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn parseval_for_k_zero() {
        let s = build_perturbed_lattice(24, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        let f = interpolate_bandlimited(&s, 1.0, TestFunction::Gauss).unwrap();
        let band = QuadratureGrid::for_band(f.sigma(), 1.0).unwrap();
        let freq = pw_seminorm(&f, 0, &band).unwrap();
        // F decays like 1/x; integrate far out and add the mean-square envelope of the remainder
        let reach = 4000.0;
        let space = QuadratureGrid::gauss_panels(-reach, reach, 0.5, 16).unwrap();
        let head = space.integrate(|x| f.eval(x).powi(2));
        // far out F(x) ≈ Im(e^{iπx} Σ c_j e^{-iπx_j}) / (πx)
        let r = f
            .coefficients()
            .iter()
            .zip(f.centers())
            .map(|(a, c)| Complex64::from_polar(*a, -PI * c))
            .sum::<Complex64>()
            .norm();
        let tail = r * r / (PI * PI * reach);
        assert_relative_eq!(freq, (head + tail).sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn bandlimited_input_is_reproduced() {
        let s = build_perturbed_lattice(128, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        let r = bernstein_jackson_check(TestFunction::SincSq, 1, &s, 1.0, 4.0, 128.0).unwrap();
        assert!(r.jackson_lhs <= 1e-4, "{r:?}");
        let z = bernstein_jackson_check(TestFunction::Zero, 1, &s, 1.0, 4.0, 64.0).unwrap();
        assert_eq!((z.bernstein_lhs, z.seminorm_g, z.jackson_lhs, z.ratio_jackson), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn band_grid_must_cover() {
        let s = SiteSequence::lattice(4);
        let f = interpolate_bandlimited(&s, 0.5, TestFunction::Gauss).unwrap();
        let narrow = QuadratureGrid::gauss_panels(-1.0, 1.0, 0.25, 32).unwrap();
        assert!(pw_seminorm(&f, 1, &narrow).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let s = build_perturbed_lattice(10, &PerturbationRule::sinusoidal(0.2), true).unwrap();
        let f = interpolate_bandlimited(&s, 0.5, TestFunction::BSpline3).unwrap();
        for n in 1..=3usize {
            for x in [-1.1, 0.0, 0.77] {
                let e = 1e-5;
                let fd = (f.derivative(n - 1, x + e) - f.derivative(n - 1, x - e)) / (2.0 * e);
                assert!((fd - f.derivative(n, x)).abs() < 1e-5 * (1.0 + fd.abs()), "n={n} x={x}");
            }
        }
    }
}
