//! Radix-2 complex FFT, forward sign convention `e^{-i 2π mn / N}`.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

use crate::error::{Error, Result};

pub fn fft_in_place(data: &mut [Complex64]) -> Result<()> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::BadParameter(alloc::format!("FFT length {n} is not a power of two")));
    }
    let bits = n.trailing_zeros();
    if bits > 0 {
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
    }
    let mut len = 2;
    while len <= n {
        let angle = -2.0 * PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // direct twiddles keep the rounding error independent of n
                let w = Complex64::new((angle * k as f64).cos(), (angle * k as f64).sin());
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
    Ok(())
}
