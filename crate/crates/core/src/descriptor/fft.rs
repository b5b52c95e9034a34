//! Iterative radix-2 decimation-in-time FFT.

use num_complex::Complex;

use crate::scalar::Real;

fn bit_reverse_permute<T>(data: &mut [T]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
}

/// In-place unnormalized forward transform `X[k] = Σ x[t]·e^{−2πi·kt/n}`.
///
/// # Panics
///
/// If the length is not a power of two.
pub fn fft_in_place<T: Real>(data: &mut [Complex<T>]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length {n} is not a power of two");
    bit_reverse_permute(data);

    // Twiddles for the largest stage; smaller stages stride through them.
    let tau = T::TAU();
    let twiddles: Vec<Complex<T>> = (0..n / 2)
        .map(|k| {
            let angle = -tau * T::from_usize(k) / T::from_usize(n);
            let (s, c) = angle.sin_cos();
            Complex::new(c, s)
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}
