//! Periodic Fourier multipliers `‖ω‖^{±γ}` on 1-D and 2-D grids.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Smallest `m ≥ n` whose only prime factors are 2, 3 and 5.
pub fn fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Angular frequency of bin `k` on a periodic axis of `n` nodes spaced `h`.
pub fn angular_frequency(k: usize, n: usize, h: f64) -> f64 {
    let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    TAU * signed / (n as f64 * h)
}

/// In-place forward or inverse FFT over every axis; inverse is normalised.
fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let nx = shape[0];
    let fx = if inverse {
        planner.plan_fft_inverse(nx)
    } else {
        planner.plan_fft_forward(nx)
    };
    fx.process(data);
    if shape.len() == 2 {
        let ny = shape[1];
        let fy = if inverse {
            planner.plan_fft_inverse(ny)
        } else {
            planner.plan_fft_forward(ny)
        };
        let mut column = vec![Complex64::default(); ny];
        for i in 0..nx {
            for j in 0..ny {
                column[j] = data[i + nx * j];
            }
            fy.process(&mut column);
            for j in 0..ny {
                data[i + nx * j] = column[j];
            }
        }
    }
    if inverse {
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Multiplies the periodic extension of `values` by `‖ω‖^{power}` in Fourier.
///
/// With a negative power the zero-frequency bin is set to 0, which selects
/// the zero-mean left inverse.
pub fn multiply_norm_power(values: &[f64], shape: &[usize], step: f64, power: f64) -> Vec<f64> {
    debug_assert_eq!(values.len(), shape.iter().product::<usize>());
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut buf, shape, false);
    let nx = shape[0];
    let wx: Vec<f64> = (0..nx).map(|k| angular_frequency(k, nx, step)).collect();
    let wy: Vec<f64> = match shape.get(1) {
        Some(&ny) => (0..ny).map(|k| angular_frequency(k, ny, step)).collect(),
        None => vec![0.0],
    };
    for (j, y) in wy.iter().enumerate() {
        for (i, x) in wx.iter().enumerate() {
            let norm = (x * x + y * y).sqrt();
            let idx = i + nx * j;
            buf[idx] *= if norm == 0.0 { 0.0 } else { norm.powf(power) };
        }
    }
    fft_nd(&mut buf, shape, true);
    buf.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_lengths() {
        assert_eq!(fast_len(1), 1);
        assert_eq!(fast_len(7), 8);
        assert_eq!(fast_len(301), 320);
        assert_eq!(fast_len(1000), 1000);
    }

    #[test]
    fn frequencies_wrap() {
        let h = 0.5;
        assert_eq!(angular_frequency(0, 8, h), 0.0);
        assert!((angular_frequency(1, 8, h) - TAU / 4.0).abs() < 1e-15);
        assert!((angular_frequency(7, 8, h) + TAU / 4.0).abs() < 1e-15);
    }

    #[test]
    fn multiply_then_divide_restores_zero_mean_data() {
        let shape = [24usize, 30usize];
        let n = shape[0] * shape[1];
        let mut v: Vec<f64> = (0..n).map(|k| ((k * 37 % 101) as f64).sin()).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let up = multiply_norm_power(&v, &shape, 0.1, 1.5);
        let back = multiply_norm_power(&up, &shape, 0.1, -1.5);
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn constant_is_annihilated() {
        let out = multiply_norm_power(&[2.0; 16], &[16], 1.0, 1.0);
        assert!(out.iter().all(|x| x.abs() < 1e-14));
    }
}
