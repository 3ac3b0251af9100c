//! Jump amplitudes and Poisson counts.

use std::f64::consts::PI;

use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

use super::RngStream;
use crate::exponents::JumpLaw;

/// Means up to this value use sequential-search inversion; above it, PTRS.
pub const INVERSION_LIMIT: f64 = 30.0;

/// One amplitude from `jumps`.
///
/// Gaussian by Box–Muller, Laplace as a scaled difference of two unit
/// exponentials, Cauchy as `s·tan(π(U − ½))`, variance-gamma as a difference
/// of two gamma variates.
pub fn sample_jump(jumps: &JumpLaw, rng: &mut RngStream) -> f64 {
    match *jumps {
        JumpLaw::Gaussian { variance } => variance.sqrt() * rng.standard_normal(),
        JumpLaw::Laplace { scale } => {
            scale * (rng.standard_exponential() - rng.standard_exponential())
        }
        JumpLaw::Cauchy { scale } => scale * (PI * (rng.uniform() - 0.5)).tan(),
        JumpLaw::VarianceGamma { shape, scale } => {
            let g = Gamma::new(shape, scale).expect("validated jump law");
            g.sample(rng) - g.sample(rng)
        }
    }
}

/// Poisson variate with the given mean (`mean ≥ 0`).
pub fn sample_poisson(mean: f64, rng: &mut RngStream) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean <= INVERSION_LIMIT {
        poisson_inversion(mean, rng)
    } else {
        poisson_ptrs(mean, rng)
    }
}

fn poisson_inversion(mean: f64, rng: &mut RngStream) -> u64 {
    let mut u = rng.uniform();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    loop {
        if u <= p {
            return k;
        }
        u -= p;
        k += 1;
        p *= mean / k as f64;
        // the residual mass beyond this point is below double resolution
        if p == 0.0 {
            return k;
        }
    }
}

/// Hörmann's transformed rejection with squeeze (PTRS).
fn poisson_ptrs(mean: f64, rng: &mut RngStream) -> u64 {
    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mean + k * loglam - ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(law: JumpLaw, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| sample_jump(&law, &mut rng)).collect()
    }

    #[test]
    fn gaussian_mean() {
        let v = 2.0;
        let x = draws(JumpLaw::Gaussian { variance: v }, 100_000, 1);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        assert!(mean.abs() < 4.0 * (v / 1e5).sqrt());
    }

    #[test]
    fn laplace_variance() {
        let b = 0.7;
        let x = draws(JumpLaw::Laplace { scale: b }, 100_000, 2);
        let var = x.iter().map(|a| a * a).sum::<f64>() / x.len() as f64;
        assert!((var / (2.0 * b * b) - 1.0).abs() < 0.05);
    }

    #[test]
    fn cauchy_median_of_magnitude() {
        let s = 3.0;
        let mut x: Vec<f64> = draws(JumpLaw::Cauchy { scale: s }, 100_000, 3)
            .into_iter()
            .map(f64::abs)
            .collect();
        x.sort_by(f64::total_cmp);
        let med = 0.5 * (x[49_999] + x[50_000]);
        assert!((med / s - 1.0).abs() < 0.05);
    }

    #[test]
    fn variance_gamma_variance() {
        let (k, th) = (0.25, 2.0);
        let x = draws(JumpLaw::VarianceGamma { shape: k, scale: th }, 100_000, 4);
        let var = x.iter().map(|a| a * a).sum::<f64>() / x.len() as f64;
        assert!((var / (2.0 * k * th * th) - 1.0).abs() < 0.05);
    }

    fn poisson_moments(mean: f64, n: usize) -> (f64, f64) {
        let mut rng = RngStream::new(11, mean.to_bits());
        let x: Vec<f64> = (0..n).map(|_| sample_poisson(mean, &mut rng) as f64).collect();
        let m = x.iter().sum::<f64>() / n as f64;
        let v = x.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        (m, v)
    }

    #[test]
    fn poisson_both_regimes() {
        for mean in [0.3, 5.0, 29.0, 31.0, 250.0, 1e5] {
            let n = 50_000;
            let (m, v) = poisson_moments(mean, n);
            assert!((m - mean).abs() < 5.0 * (mean / n as f64).sqrt(), "mean {mean}: {m}");
            // var of the sample variance ≈ (μ₄ − σ⁴)/n = (mean + 2 mean²)/n
            let sd_v = ((mean + 2.0 * mean * mean) / n as f64).sqrt();
            assert!((v - mean).abs() < 5.0 * sd_v, "var {mean}: {v}");
        }
    }

    #[test]
    fn poisson_zero_mean() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(sample_poisson(0.0, &mut rng), 0);
        assert_eq!(sample_poisson(1e-12, &mut rng), 0);
    }
}
