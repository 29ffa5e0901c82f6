//! Small special-function helpers: `sin t / t` with derivatives, binomials,
//! half-integer Bessel K.

use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// Below this |t| the derivative formulas switch to the Taylor series.
const SERIES_CUTOFF: f64 = 2.0;

/// `sin t / t`, equal to 1 at the origin.
pub fn sinc(t: f64) -> f64 {
    sinc_derivative(0, t)
}

/// n-th derivative of `sin t / t`.
pub fn sinc_derivative(n: usize, t: f64) -> f64 {
    if t.abs() < SERIES_CUTOFF {
        // Σ_m (-1)^m t^{2m} / (2m+1)!, differentiated termwise
        let mut sum = 0.0;
        for m in 0..40usize {
            let p = 2 * m;
            if p < n {
                continue;
            }
            let mut c = if m % 2 == 0 { 1.0 } else { -1.0 };
            c /= factorial(p + 1);
            c *= falling(p, n);
            let term = c * t.powi((p - n) as i32);
            sum += term;
            if p > n + 8 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // Leibniz on sin(t) · t^{-1}
    let mut sum = 0.0;
    for i in 0..=n {
        let r = n - i;
        let inv = if r.is_multiple_of(2) { 1.0 } else { -1.0 } * factorial(r) * t.powi(-(r as i32) - 1);
        sum += binomial(n, i) * (t + i as f64 * FRAC_PI_2).sin() * inv;
    }
    sum
}

/// Physicists' Hermite polynomial `H_n`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * x);
    if n == 0 {
        return a;
    }
    for i in 1..n {
        let c = 2.0 * x * b - 2.0 * i as f64 * a;
        a = b;
        b = c;
    }
    b
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// n (n-1) ... (n-k+1)
pub fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `K_{n+1/2}(z)` for z > 0, from the terminating series
/// `√(π/(2z)) e^{-z} Σ_{k≤n} (n+k)! / (k!(n-k)!) (2z)^{-k}`.
pub fn bessel_k_half_integer(n: usize, z: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..=n {
        sum += factorial(n + k) / (factorial(k) * factorial(n - k)) * (2.0 * z).powi(-(k as i32));
    }
    (PI / (2.0 * z)).sqrt() * (-z).exp() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        for t in [0.3, 1.9, 2.0, 2.1, 7.5, -13.0] {
            assert_relative_eq!(sinc(t), t.sin() / t, max_relative = 1e-14);
        }
        assert!(sinc(PI).abs() < 1e-16);
    }

    #[test]
    fn sinc_derivatives_match_differences() {
        for n in 1..=4usize {
            for t in [0.0, 0.7, 1.99, 2.01, 5.3, -9.1] {
                let e = 1e-4;
                let fd = (sinc_derivative(n - 1, t + e) - sinc_derivative(n - 1, t - e)) / (2.0 * e);
                assert!((sinc_derivative(n, t) - fd).abs() < 1e-7, "n={n} t={t}");
            }
        }
        // continuity across the series cutoff
        for n in 0..=4usize {
            let lo = sinc_derivative(n, SERIES_CUTOFF * (1.0 - 1e-12));
            let hi = sinc_derivative(n, SERIES_CUTOFF * (1.0 + 1e-12));
            assert!((lo - hi).abs() < 1e-11, "n={n}: {lo} vs {hi}");
        }
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(falling(5, 2), 20.0);
    }

    #[test]
    fn half_integer_bessel() {
        // K_{1/2}(z) = √(π/(2z)) e^{-z};  K_{3/2}(z) = K_{1/2}(z)(1 + 1/z)
        for z in [0.1, 1.0, 4.0] {
            let k12 = (PI / (2.0 * z)).sqrt() * (-z).exp();
            assert_relative_eq!(bessel_k_half_integer(0, z), k12, max_relative = 1e-14);
            assert_relative_eq!(bessel_k_half_integer(1, z), k12 * (1.0 + 1.0 / z), max_relative = 1e-14);
        }
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
    }
}
