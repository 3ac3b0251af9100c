//! Goodness-of-fit statistics: Kolmogorov–Smirnov and chi-square.

use statrs::distribution::{Cauchy, ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::exponents::JumpLaw;
use crate::noise::{sample_jump, sample_poisson, RngStream};
use crate::synthesis::GridRealization;

/// Asymptotic Kolmogorov tail `P(K > t) = 2 Σ (−1)^{k−1} e^{−2k²t²}`.
pub fn kolmogorov_tail(t: f64) -> f64 {
    // Below 0.2 the tail equals 1 to double precision.
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value of a KS distance `d` for effective sample size `n`, with
/// Stephens' finite-sample correction.
pub fn ks_pvalue(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample KS against a continuous CDF.
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if sample.is_empty() {
        return Err(Error::param("KS test on an empty sample"));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_pvalue(d, n),
    })
}

/// Two-sample KS; ties are handled by stepping past equal values together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("KS test on an empty sample"));
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_pvalue(d, na * nb / (na + nb)),
    })
}

/// Target law for a marginal `s(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetLaw {
    Normal { variance: f64 },
    Cauchy { scale: f64 },
    /// Draws from a brute-force reference sampler.
    Empirical(Vec<f64>),
}

/// KS of `sample` against `target`.
pub fn gof(sample: &[f64], target: &TargetLaw) -> Result<KsResult> {
    match target {
        TargetLaw::Normal { variance } => {
            let law = Normal::new(0.0, variance.sqrt()).map_err(|e| Error::param(e.to_string()))?;
            ks_test(sample, |x| law.cdf(x))
        }
        TargetLaw::Cauchy { scale } => {
            let law = Cauchy::new(0.0, *scale).map_err(|e| Error::param(e.to_string()))?;
            ks_test(sample, |x| law.cdf(x))
        }
        TargetLaw::Empirical(draws) => ks_two_sample(sample, draws),
    }
}

/// Values `sᵢ(t)` at the node nearest to `t`.
pub fn marginal_values(ensemble: &[GridRealization], t: f64) -> Result<Vec<f64>> {
    let first = ensemble.first().ok_or_else(|| Error::param("empty ensemble"))?;
    let grid = first.grid();
    if grid.dim() != 1 {
        return Err(Error::param("marginals are taken on 1-D realizations"));
    }
    let j = grid.nearest(0, t);
    if j < 0 || j as usize >= grid.len() {
        return Err(Error::param(format!("t = {t} outside the grid")));
    }
    ensemble
        .iter()
        .map(|r| {
            if r.grid().same_as(grid) {
                Ok(r.samples()[j as usize])
            } else {
                Err(Error::GridMismatch("ensemble members on different grids".into()))
            }
        })
        .collect()
}

/// p-value of the KS test of `{sᵢ(t)}` against `target`.
pub fn marginal_gof(ensemble: &[GridRealization], t: f64, target: &TargetLaw) -> Result<f64> {
    Ok(gof(&marginal_values(ensemble, t)?, target)?.p_value)
}

/// Direct draws of `Σ_{k ≤ N} aₖ` with `N ~ Poisson(mean)`.
pub fn compound_sum_draws(mean: f64, jumps: &JumpLaw, count: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..count)
        .map(|_| {
            let n = sample_poisson(mean, rng);
            (0..n).map(|_| sample_jump(jumps, rng)).sum()
        })
        .collect()
}

/// Chi-square goodness of fit of observed counts against `Poisson(mean)`.
/// Cells are merged from both tails until each expects at least 5.
pub fn poisson_count_gof(counts: &[u64], mean: f64) -> Result<f64> {
    if counts.is_empty() || mean.is_nan() || mean <= 0.0 {
        return Err(Error::param("count test needs data and a positive mean"));
    }
    let n = counts.len() as f64;
    let max = *counts.iter().max().unwrap_or(&0) as usize;
    let top = max.max((mean + 10.0 * mean.sqrt() + 10.0) as usize);
    let ln_gamma = statrs::function::gamma::ln_gamma;
    let pmf: Vec<f64> = (0..=top)
        .map(|k| (k as f64 * mean.ln() - mean - ln_gamma(k as f64 + 1.0)).exp())
        .collect();
    let mut observed = vec![0.0; top + 1];
    for &c in counts {
        observed[c as usize] += 1.0;
    }
    // Cells: [0, a], (a, b) singly, [b, ∞).
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for k in 0..=top {
        acc.0 += observed[k];
        acc.1 += n * pmf[k];
        if acc.1 >= 5.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    let tail_expected = n * (1.0 - pmf.iter().sum::<f64>()).max(0.0);
    acc.1 += tail_expected;
    if let Some(last) = cells.last_mut() {
        last.0 += acc.0;
        last.1 += acc.1;
    } else {
        cells.push(acc);
    }
    if cells.len() < 2 {
        return Err(Error::param("too few cells for a chi-square test"));
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let chi = ChiSquared::new((cells.len() - 1) as f64).map_err(|e| Error::param(e.to_string()))?;
    Ok(1.0 - chi.cdf(stat))
}

/// Sample variance and its standard error `√((m₄ − m₂²)/M)`.
pub fn variance_with_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / m;
    (m2 * m / (m - 1.0), ((m4 - m2 * m2) / m).max(0.0).sqrt())
}
