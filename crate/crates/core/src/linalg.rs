//! Dense symmetric solves with a one-norm condition estimate.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};

/// Which factorization backs a [`SymmetricSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Cholesky,
    /// Partial-pivoting LU fallback for matrices that are not numerically positive definite.
    Lu,
}

#[derive(Debug, Clone)]
enum Factor {
    Cholesky(Cholesky<f64, Dyn>),
    Lu(LU<f64, Dyn, Dyn>),
    Singular,
}

/// A symmetric matrix together with its factorization.
#[derive(Debug, Clone)]
pub struct SymmetricSystem {
    matrix: DMatrix<f64>,
    factor: Factor,
    condition_estimate: f64,
}

impl SymmetricSystem {
    /// Factors `matrix`, trying Cholesky first and LU second. `jitter` is added to the diagonal.
    pub fn factor(mut matrix: DMatrix<f64>, jitter: f64) -> Self {
        if jitter != 0.0 {
            for i in 0..matrix.nrows() {
                matrix[(i, i)] += jitter;
            }
        }
        let factor = match Cholesky::new(matrix.clone()) {
            Some(c) => Factor::Cholesky(c),
            None => {
                let lu = LU::new(matrix.clone());
                if lu.is_invertible() {
                    Factor::Lu(lu)
                } else {
                    Factor::Singular
                }
            }
        };
        let mut system = Self { matrix, factor, condition_estimate: f64::INFINITY };
        if !matches!(system.factor, Factor::Singular) {
            system.condition_estimate = system.one_norm_condest();
        }
        system
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn factor_kind(&self) -> Option<FactorKind> {
        match self.factor {
            Factor::Cholesky(_) => Some(FactorKind::Cholesky),
            Factor::Lu(_) => Some(FactorKind::Lu),
            Factor::Singular => None,
        }
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: rhs.len() });
        }
        let b = DVector::from_column_slice(rhs);
        let x = match &self.factor {
            Factor::Cholesky(c) => c.solve(&b),
            Factor::Lu(lu) => lu.solve(&b).ok_or(Error::SingularSystem)?,
            Factor::Singular => return Err(Error::SingularSystem),
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        Ok(x.as_slice().to_vec())
    }

    /// max_i |(A x)_i - y_i|
    pub fn residual(&self, x: &[f64], y: &[f64]) -> f64 {
        let ax = &self.matrix * DVector::from_column_slice(x);
        ax.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    fn one_norm(&self) -> f64 {
        (0..self.matrix.ncols())
            .map(|j| self.matrix.column(j).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Hager's estimate of ‖A⁻¹‖₁ (A symmetric, so A⁻ᵀ = A⁻¹), times ‖A‖₁.
    fn one_norm_condest(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        let mut x = alloc::vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = match self.solve(&x) {
                Ok(y) => y,
                Err(_) => return f64::INFINITY,
            };
            est = y.iter().map(|v| v.abs()).sum::<f64>();
            let signs: Vec<f64> = y.iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = match self.solve(&signs) {
                Ok(z) => z,
                Err(_) => return f64::INFINITY,
            };
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, -1.0), |acc, e| if e.1 > acc.1 { e } else { acc });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        // Higham's alternating test vector guards against the basic iteration stalling.
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0))
            })
            .collect();
        if let Ok(w) = self.solve(&alt) {
            let alt_est = 2.0 * w.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
            est = est.max(alt_est);
        }
        (self.one_norm() * est).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exact_one_norm_cond(m: &DMatrix<f64>) -> f64 {
        let inv = m.clone().try_inverse().unwrap();
        let norm = |a: &DMatrix<f64>| {
            (0..a.ncols())
                .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0, f64::max)
        };
        norm(m) * norm(&inv)
    }

    #[test]
    fn condest_matches_exact_for_small_spd() {
        let m = DMatrix::from_fn(6, 6, |i, j| (-((i as f64 - j as f64).powi(2)) * 0.5).exp());
        let sys = SymmetricSystem::factor(m.clone(), 0.0);
        assert_eq!(sys.factor_kind(), Some(FactorKind::Cholesky));
        let exact = exact_one_norm_cond(&m);
        assert!(sys.condition_estimate() <= exact * (1.0 + 1e-10));
        assert!(sys.condition_estimate() >= exact / 3.0);
    }

    #[test]
    fn indefinite_matrix_falls_back_to_lu() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let sys = SymmetricSystem::factor(m, 0.0);
        assert_eq!(sys.factor_kind(), Some(FactorKind::Lu));
        let x = sys.solve(&[2.0, 3.0]).unwrap();
        assert_relative_eq!(x[0], 3.0);
        assert_relative_eq!(x[1], 2.0);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let sys = SymmetricSystem::factor(m, 0.0);
        assert_eq!(sys.solve(&[1.0, 0.0]), Err(Error::SingularSystem));
        assert!(sys.condition_estimate().is_infinite());
    }
}
