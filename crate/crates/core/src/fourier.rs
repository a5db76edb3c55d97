//! Radix-2 complex FFT, enough for gridded Fourier transforms of charge
//! profiles. Power-of-two lengths only; callers pad.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// In-place iterative Cooley-Tukey transform. Forward uses the e^{-i k x}
/// convention; `inverse` flips the sign and divides by the length.
pub fn fft(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            data.swap(i, j);
        }
        let mut bit = n >> 1;
        while bit > 0 && j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * core::f64::consts::PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        let mut start = 0;
        while start < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
                w *= wlen;
            }
            start += len;
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// 2D transform of row-major data (n_rows x n_cols), rows then columns.
pub fn fft2(data: &mut [Complex64], n_rows: usize, n_cols: usize, inverse: bool) {
    assert_eq!(data.len(), n_rows * n_cols);
    for r in 0..n_rows {
        fft(&mut data[r * n_cols..(r + 1) * n_cols], inverse);
    }
    let mut col = Vec::with_capacity(n_rows);
    for c in 0..n_cols {
        col.clear();
        for r in 0..n_rows {
            col.push(data[r * n_cols + c]);
        }
        fft(&mut col, inverse);
        for r in 0..n_rows {
            data[r * n_cols + c] = col[r];
        }
    }
}
