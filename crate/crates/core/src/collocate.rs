//! Kernel collocation at scaled sites: assembly, solve, evaluation and the
//! closed-form Fourier transform of Gaussian interpolants.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::catalog::TestFunction;
use crate::error::{Error, Result};
use crate::fft::fft_in_place;
use crate::kernels::{Kernel, KernelFamily, KernelKind};
use crate::linalg::{FactorKind, SymmetricSystem};
use crate::sites::{scale, ScaledSites, SiteSequence};
use crate::special::hermite;

pub const DEFAULT_DENSE_CAP: usize = 4096;
/// Condition estimates above this mark a solve as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub cap: usize,
    /// Added to the diagonal; nonzero values break exact interpolation.
    pub jitter: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_DENSE_CAP, jitter: 0.0 }
    }
}

/// The matrix `(φ(hx_i - hx_j))` together with its factorization.
#[derive(Debug, Clone)]
pub struct CollocationSystem {
    kernel: KernelFamily,
    sites: ScaledSites,
    system: SymmetricSystem,
}

pub fn assemble(kernel: KernelFamily, sites: &ScaledSites) -> Result<CollocationSystem> {
    assemble_with(kernel, sites, &AssemblyOptions::default())
}

pub fn assemble_with(kernel: KernelFamily, sites: &ScaledSites, options: &AssemblyOptions) -> Result<CollocationSystem> {
    let n = sites.len();
    if n == 0 {
        return Err(Error::WindowTooSmall { len: 0, needed: 1 });
    }
    if n > options.cap {
        return Err(Error::WindowTooLarge { len: n, cap: options.cap });
    }
    let x = sites.points();
    let matrix = DMatrix::from_fn(n, n, |i, j| kernel.eval(x[i] - x[j]));
    let system = SymmetricSystem::factor(matrix, options.jitter);
    Ok(CollocationSystem { kernel, sites: sites.clone(), system })
}

impl CollocationSystem {
    pub fn kernel(&self) -> &KernelFamily {
        &self.kernel
    }
    pub fn sites(&self) -> &ScaledSites {
        &self.sites
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        self.system.matrix()
    }
    pub fn condition_estimate(&self) -> f64 {
        self.system.condition_estimate()
    }
    pub fn factor_kind(&self) -> Option<FactorKind> {
        self.system.factor_kind()
    }
}

/// Kernel translates `Σ a_j φ(x - hx_j)` with their solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    kernel: KernelFamily,
    centers: Vec<f64>,
    coefficients: Vec<f64>,
    samples: Vec<f64>,
    max_site_residual: f64,
    condition_estimate: f64,
    factor_kind: Option<FactorKind>,
}

pub fn solve(system: &CollocationSystem, y: &[f64]) -> Result<Interpolant> {
    let coefficients = system.system.solve(y)?;
    let max_site_residual = system.system.residual(&coefficients, y);
    Ok(Interpolant {
        kernel: system.kernel,
        centers: system.sites.points().to_vec(),
        coefficients,
        samples: y.to_vec(),
        max_site_residual,
        condition_estimate: system.condition_estimate(),
        factor_kind: system.factor_kind(),
    })
}

/// `I^{hX}(g)`: unit-width Gaussian collocation of `g(hx_j)` at the scaled sites.
pub fn interpolate_scaled(sites: &SiteSequence, h: f64, g: TestFunction) -> Result<Interpolant> {
    let scaled = scale(sites, h)?;
    let y: Vec<f64> = scaled.points().iter().map(|&x| g.eval(x)).collect();
    solve(&assemble(KernelFamily::gaussian(1.0)?, &scaled)?, &y)
}

/// The same interpolant built the dilated way: the `λ = h²` system at the
/// unscaled sites with data `h·g(hx_j)`, coefficients divided by `h`.
pub fn interpolate_dilated(sites: &SiteSequence, h: f64, g: TestFunction) -> Result<Interpolant> {
    let unit = scale(sites, 1.0)?;
    let scaled = scale(sites, h)?;
    let y: Vec<f64> = scaled.points().iter().map(|&x| h * g.eval(x)).collect();
    let inner = solve(&assemble(KernelFamily::gaussian(h * h)?, &unit)?, &y)?;
    let coefficients: Vec<f64> = inner.coefficients.iter().map(|a| a / h).collect();
    let samples: Vec<f64> = y.iter().map(|v| v / h).collect();
    Ok(Interpolant {
        kernel: KernelFamily::gaussian(1.0)?,
        centers: scaled.points().to_vec(),
        coefficients,
        samples,
        max_site_residual: inner.max_site_residual / h,
        condition_estimate: inner.condition_estimate,
        factor_kind: inner.factor_kind,
    })
}

impl Interpolant {
    pub fn kernel(&self) -> &KernelFamily {
        &self.kernel
    }
    pub fn centers(&self) -> &[f64] {
        &self.centers
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
    pub fn ill_conditioned(&self) -> bool {
        self.condition_estimate > ILL_CONDITIONED
    }
    pub fn factor_kind(&self) -> Option<FactorKind> {
        self.factor_kind
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(c, a)| a * self.kernel.eval(x - c))
            .sum()
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    /// n-th derivative; Gaussian kernels only, via
    /// `d^n/dx^n e^{-λx²} = (-√λ)^n H_n(√λ x) e^{-λx²}`.
    pub fn derivative(&self, n: usize, x: f64) -> Result<f64> {
        if self.kernel.kind() != KernelKind::Gaussian {
            return Err(Error::UnsupportedKernel);
        }
        let lambda = self.kernel.parameter();
        let s = lambda.sqrt();
        let scale = (-s).powi(n as i32);
        Ok(self
            .centers
            .iter()
            .zip(&self.coefficients)
            .map(|(c, a)| {
                let t = x - c;
                a * scale * hermite(n, s * t) * (-lambda * t * t).exp()
            })
            .sum())
    }
}

/// `ℱ[interp](ξ) = √(π/λ) e^{-ξ²/(4λ)} Σ_j a_j e^{-i hx_j ξ}`.
pub fn fourier_interpolant(interp: &Interpolant, xis: &[f64]) -> Result<Vec<Complex64>> {
    if interp.kernel.kind() != KernelKind::Gaussian {
        return Err(Error::UnsupportedKernel);
    }
    let lambda = interp.kernel.parameter();
    Ok(xis
        .iter()
        .map(|&xi| {
            let envelope = (PI / lambda).sqrt() * (-xi * xi / (4.0 * lambda)).exp();
            let sum: Complex64 = interp
                .centers
                .iter()
                .zip(&interp.coefficients)
                .map(|(c, a)| Complex64::from_polar(*a, -c * xi))
                .sum();
            sum * envelope
        })
        .collect())
}

/// Relative L2 discrepancy on `[-band, band]` between [`fourier_interpolant`]
/// and the FFT of `n` samples of the interpolant on `[-half, half)`.
pub fn spectral_discrepancy(interp: &Interpolant, half: f64, n: usize, band: f64) -> Result<f64> {
    let a = -half;
    let dx = 2.0 * half / n as f64;
    let mut data: Vec<Complex64> = (0..n).map(|i| Complex64::new(interp.eval(a + dx * i as f64), 0.0)).collect();
    fft_in_place(&mut data)?;
    let mut xis = Vec::new();
    let mut approx = Vec::new();
    for (m, u) in data.iter().enumerate() {
        let mm = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        let xi = 2.0 * PI * mm / (n as f64 * dx);
        if xi.abs() <= band {
            xis.push(xi);
            // undo the shift of the sampling origin to -half
            approx.push(u * dx * Complex64::from_polar(1.0, -xi * a));
        }
    }
    let exact = fourier_interpolant(interp, &xis)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (u, v) in approx.iter().zip(&exact) {
        num += (u - v).norm_sqr();
        den += v.norm_sqr();
    }
    Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
}
