//! Site sequences: perturbed integer lattices, separation and Kadec
//! diagnostics, Gram-matrix frame bounds of the exponential system, and
//! scaling by `h`.
//!
//! Sequences are finite windows `[index_lo, index_hi]` of a conceptually
//! bi-infinite set; every sum and matrix built from them is a truncation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Sup-norm bound on `|x_j - j|` below which the exponentials are a Riesz basis.
pub const KADEC_LIMIT: f64 = 0.25;

/// How the lattice points `j` are displaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationRule {
    Zero,
    /// `δ_j = amplitude · sin(frequency · j + phase)`
    Sinusoidal { amplitude: f64, frequency: f64, phase: f64 },
    /// `δ_j` uniform on `[-amplitude, amplitude]`, drawn from a stream keyed by `(seed, j)`.
    SeededUniform { amplitude: f64, seed: u64 },
}

impl PerturbationRule {
    pub fn sinusoidal(amplitude: f64) -> Self {
        PerturbationRule::Sinusoidal { amplitude, frequency: 1.0, phase: 0.0 }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            PerturbationRule::Zero => 0.0,
            PerturbationRule::Sinusoidal { amplitude, .. } => amplitude,
            PerturbationRule::SeededUniform { amplitude, .. } => amplitude,
        }
    }

    pub fn offset(&self, j: i64) -> f64 {
        match *self {
            PerturbationRule::Zero => 0.0,
            PerturbationRule::Sinusoidal { amplitude, frequency, phase } => {
                amplitude * (frequency * j as f64 + phase).sin()
            }
            PerturbationRule::SeededUniform { amplitude, seed } => {
                if amplitude == 0.0 {
                    return 0.0;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                // zigzag keeps negative indices on their own words
                let key = ((j << 1) ^ (j >> 63)) as u64;
                rng.set_word_pos(2 * key as u128);
                rng.random_range(-amplitude..=amplitude)
            }
        }
    }
}

/// A finite, strictly increasing window of sites with separation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSequence {
    index_lo: i64,
    points: Vec<f64>,
    q: f64,
    big_q: f64,
    kadec_margin: f64,
}

impl SiteSequence {
    /// Validates `points` (indexed from `index_lo`) and computes the metadata.
    ///
    /// A single-point window is allowed; its gaps are reported as infinite.
    pub fn from_points(index_lo: i64, points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::WindowTooSmall { len: 0, needed: 1 });
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::BadParameter(alloc::format!("site {i} is not finite")));
        }
        let (q, big_q) = if points.len() >= 2 {
            separation_bounds(&points)?
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        let kadec_margin = points
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - (index_lo + i as i64) as f64).abs())
            .fold(0.0, f64::max);
        Ok(Self { index_lo, points, q, big_q, kadec_margin })
    }

    /// The integer lattice `-n..=n`.
    pub fn lattice(half_width: usize) -> Self {
        let n = half_width as i64;
        Self::from_points(-n, (-n..=n).map(|j| j as f64).collect()).expect("lattice is increasing")
    }

    pub fn index_lo(&self) -> i64 {
        self.index_lo
    }
    pub fn index_hi(&self) -> i64 {
        self.index_lo + self.points.len() as i64 - 1
    }
    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    /// Minimal adjacent gap.
    pub fn q(&self) -> f64 {
        self.q
    }
    /// Maximal adjacent gap.
    pub fn big_q(&self) -> f64 {
        self.big_q
    }
    /// `max_j |x_j - j|` over the window.
    pub fn kadec_margin(&self) -> f64 {
        self.kadec_margin
    }
}

/// `x_j = j + δ_j` for `j ∈ [-half_width, half_width]`.
pub fn build_perturbed_lattice(
    half_width: usize,
    rule: &PerturbationRule,
    enforce_kadec: bool,
) -> Result<SiteSequence> {
    if half_width == 0 {
        return Err(Error::BadParameter("half_width must be positive".into()));
    }
    let amplitude = rule.amplitude();
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::BadParameter(alloc::format!("amplitude {amplitude} must be nonnegative")));
    }
    if enforce_kadec && amplitude >= KADEC_LIMIT {
        return Err(Error::KadecViolation { amplitude });
    }
    let n = half_width as i64;
    let points = (-n..=n).map(|j| j as f64 + rule.offset(j)).collect();
    let sites = SiteSequence::from_points(-n, points)?;
    if enforce_kadec && sites.kadec_margin >= KADEC_LIMIT {
        return Err(Error::KadecViolation { amplitude: sites.kadec_margin });
    }
    Ok(sites)
}

/// `(q, Q)`: the minimal and maximal adjacent gaps.
pub fn separation_bounds(points: &[f64]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::WindowTooSmall { len: points.len(), needed: 2 });
    }
    let mut q = f64::INFINITY;
    let mut big_q = 0.0f64;
    for (i, w) in points.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if !(gap > 0.0) {
            return Err(Error::NotIncreasing { index: i });
        }
        q = q.min(gap);
        big_q = big_q.max(gap);
    }
    Ok((q, big_q))
}

/// Extreme eigenvalues of the truncated Gram matrix of `e^{-i x_j ξ}` on `[-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszBounds {
    pub lower: f64,
    pub upper: f64,
}

impl RieszBounds {
    /// Single basis constant for exponentials normalized by `1/√(2π)`:
    /// `max(√upper/√(2π), √(2π)/√lower)`.
    pub fn basis_constant(&self) -> f64 {
        let two_pi = 2.0 * PI;
        (self.upper.sqrt() / two_pi.sqrt()).max(two_pi.sqrt() / self.lower.sqrt())
    }
}

/// `G_jk = ∫_{-π}^{π} e^{-i(x_j - x_k)ξ} dξ`.
pub fn gram_matrix(points: &[f64]) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * PI
        } else {
            let d = points[i] - points[j];
            2.0 * (PI * d).sin() / d
        }
    })
}

pub fn riesz_bounds(sites: &SiteSequence) -> Result<RieszBounds> {
    if sites.len() < 2 {
        return Err(Error::WindowTooSmall { len: sites.len(), needed: 2 });
    }
    let eig = gram_matrix(sites.points()).symmetric_eigenvalues();
    let lower = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RieszBounds { lower, upper })
}

/// Sites multiplied by `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSites {
    base: SiteSequence,
    h: f64,
    scaled_points: Vec<f64>,
    fill_distance: f64,
}

impl ScaledSites {
    pub fn base(&self) -> &SiteSequence {
        &self.base
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn points(&self) -> &[f64] {
        &self.scaled_points
    }
    pub fn len(&self) -> usize {
        self.scaled_points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.scaled_points.is_empty()
    }
    /// Half the largest gap of the scaled points: the farthest any point of the
    /// covered interval can be from a site.
    pub fn fill_distance(&self) -> f64 {
        self.fill_distance
    }
    /// `[h·x_lo, h·x_hi]`
    pub fn span(&self) -> (f64, f64) {
        (self.scaled_points[0], self.scaled_points[self.scaled_points.len() - 1])
    }
}

pub fn scale(sites: &SiteSequence, h: f64) -> Result<ScaledSites> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::BadH(h));
    }
    let scaled_points: Vec<f64> = sites.points().iter().map(|x| h * x).collect();
    let fill_distance = scaled_points
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]))
        .fold(0.0, f64::max);
    Ok(ScaledSites { base: sites.clone(), h, scaled_points, fill_distance })
}
