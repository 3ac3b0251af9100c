//! The λ-ladder convergence study: poissonized noise against the limit law.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::bank::TestFunctionBank;
use super::cf::{analytic_cf, cf_from_pairings, pairing, weighted, CfEstimate};
use crate::error::{Error, Result};
use crate::exponents::LevyExponent;
use crate::grid::Grid;
use crate::kv::fmt_f64;
use crate::operators::OperatorSpec;
use crate::synthesis::{ensemble_map, Generator, PoissonSpec};

/// Rungs whose mean error is below this many standard errors are noise.
pub const BIAS_THRESHOLD_SE: f64 = 3.0;

/// Slack, in combined standard errors, allowed in the monotone-decay check.
pub const MONOTONE_SLACK_SE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CfRow {
    /// `f64::INFINITY` marks the limit-reference generator.
    pub lambda: f64,
    pub phi: String,
    pub empirical: CfEstimate,
    pub analytic: Complex64,
}

impl CfRow {
    pub fn abs_err(&self) -> f64 {
        (self.empirical.value - self.analytic).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RungSummary {
    pub lambda: f64,
    pub mean_err: f64,
    pub mean_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CFReport {
    pub operator: OperatorSpec,
    pub family: LevyExponent,
    pub ladder: Vec<f64>,
    pub ensemble: u64,
    pub seed: u64,
    pub rows: Vec<CfRow>,
    /// Some analytic value was computed with a truncated tail.
    pub tail_truncated: bool,
}

/// Seed of rung `k`, decorrelated from the base seed.
fn rung_seed(seed: u64, k: usize) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64 + 1)
}

/// Pairings `⟨sᵢ, φⱼ⟩` of `m` realizations, indexed `[i][j]`.
fn pairings(generator: &Generator, m: u64, seed: u64, weighted_bank: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    ensemble_map(generator, m, seed, |_, s| {
        weighted_bank.iter().map(|w| pairing(s.samples(), w)).collect::<Vec<f64>>()
    })
}

fn estimates(pairs: &[Vec<f64>], j: usize) -> CfEstimate {
    let column: Vec<f64> = pairs.iter().map(|p| p[j]).collect();
    cf_from_pairings(&column)
}

fn analytic_values(
    f: &LevyExponent,
    op: &OperatorSpec,
    bank: &TestFunctionBank,
) -> Result<(Vec<Complex64>, bool)> {
    let mut values = Vec::with_capacity(bank.len());
    let mut truncated = false;
    for phi in bank.functions() {
        let a = analytic_cf(f, op, bank.grid(), &phi.values, None)?;
        truncated |= a.tail_truncated;
        values.push(a.value);
    }
    Ok((values, truncated))
}

/// For each rung `λ`: `M` realizations driven by `f.poissonize(λ)`, the
/// empirical CF of every bank function, and the distance to the analytic CF
/// of the limit exponent `f`.
pub fn convergence_study(
    f: &LevyExponent,
    op: &OperatorSpec,
    ladder: &[f64],
    m: u64,
    bank: &TestFunctionBank,
    seed: u64,
) -> Result<CFReport> {
    if ladder.len() < 3 {
        return Err(Error::param(format!("ladder needs at least 3 rungs, got {}", ladder.len())));
    }
    if ladder.iter().any(|l| !(l.is_finite() && *l > 0.0)) || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("ladder must be positive and strictly ascending"));
    }
    let grid: &Grid = bank.grid();
    let weighted_bank = bank
        .functions()
        .iter()
        .map(|phi| weighted(grid, &phi.values))
        .collect::<Result<Vec<_>>>()?;
    let (analytic, tail_truncated) = analytic_values(f, op, bank)?;
    let mut rows = Vec::with_capacity(ladder.len() * bank.len());
    for (k, &lambda) in ladder.iter().enumerate() {
        let generator = Generator::Poisson(PoissonSpec {
            op: *op,
            grid: grid.clone(),
            rate: lambda,
            jumps: f.poissonize(lambda)?.jump_law()?,
            margin: None,
        });
        let pairs = pairings(&generator, m, rung_seed(seed, k), &weighted_bank)?;
        for (j, phi) in bank.functions().iter().enumerate() {
            rows.push(CfRow {
                lambda,
                phi: phi.name.clone(),
                empirical: estimates(&pairs, j),
                analytic: analytic[j],
            });
        }
    }
    Ok(CFReport {
        operator: *op,
        family: f.clone(),
        ladder: ladder.to_vec(),
        ensemble: m,
        seed,
        rows,
        tail_truncated,
    })
}

/// Empirical CF of exact limit paths against the analytic value (`L = D`).
pub fn self_consistency(f: &LevyExponent, m: u64, bank: &TestFunctionBank, seed: u64) -> Result<Vec<CfRow>> {
    let op = OperatorSpec::Derivative { order: 1 };
    let grid = bank.grid();
    let generator = Generator::Reference {
        family: f.clone(),
        op,
        grid: grid.clone(),
    };
    let weighted_bank = bank
        .functions()
        .iter()
        .map(|phi| weighted(grid, &phi.values))
        .collect::<Result<Vec<_>>>()?;
    let (analytic, _) = analytic_values(f, &op, bank)?;
    let pairs = pairings(&generator, m, seed, &weighted_bank)?;
    Ok(bank
        .functions()
        .iter()
        .enumerate()
        .map(|(j, phi)| CfRow {
            lambda: f64::INFINITY,
            phi: phi.name.clone(),
            empirical: estimates(&pairs, j),
            analytic: analytic[j],
        })
        .collect())
}

impl CFReport {
    fn rows_at(&self, lambda: f64) -> impl Iterator<Item = &CfRow> {
        self.rows.iter().filter(move |r| r.lambda == lambda)
    }

    pub fn rung_summaries(&self) -> Vec<RungSummary> {
        self.ladder
            .iter()
            .map(|&lambda| {
                let (mut err, mut se, mut n) = (0.0, 0.0, 0.0);
                for r in self.rows_at(lambda) {
                    err += r.abs_err();
                    se += r.empirical.se;
                    n += 1.0;
                }
                RungSummary {
                    lambda,
                    mean_err: err / n,
                    mean_se: se / n,
                }
            })
            .collect()
    }

    /// Rungs in the bias-dominated regime.
    pub fn fitted_rungs(&self) -> Vec<RungSummary> {
        self.rung_summaries()
            .into_iter()
            .filter(|r| r.mean_err > BIAS_THRESHOLD_SE * r.mean_se)
            .collect()
    }

    /// Least-squares slope of `log(mean error)` against `log λ` over the
    /// bias-dominated rungs; [`Error::NoiseFloor`] when fewer than two rungs
    /// qualify.
    pub fn slope(&self) -> Result<f64> {
        let fit = self.fitted_rungs();
        if fit.len() < 2 {
            return Err(Error::NoiseFloor);
        }
        let xs: Vec<f64> = fit.iter().map(|r| r.lambda.ln()).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.mean_err.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Ok(sxy / sxx)
    }

    /// Every test function's error is non-increasing along the ladder, up to
    /// [`MONOTONE_SLACK_SE`] combined standard errors per step.
    pub fn monotone(&self) -> bool {
        let names: Vec<&str> = self.rows_at(self.ladder[0]).map(|r| r.phi.as_str()).collect();
        names.iter().all(|name| {
            let series: Vec<&CfRow> = self.rows.iter().filter(|r| r.phi == *name).collect();
            series.windows(2).all(|w| {
                let slack = MONOTONE_SLACK_SE * (w[0].empirical.se.powi(2) + w[1].empirical.se.powi(2)).sqrt();
                w[1].abs_err() <= w[0].abs_err() + slack
            })
        })
    }

    /// `|empirical| ≤ 1 + 3·SE` and `|analytic| ≤ 1` on every row.
    pub fn moduli_bounded(&self) -> bool {
        self.rows.iter().all(|r| {
            r.empirical.value.norm() <= 1.0 + 3.0 * r.empirical.se + 1e-12 && r.analytic.norm() <= 1.0 + 1e-12
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,phi,re_emp,im_emp,se,re_ana,im_ana,abs_err\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                fmt_f64(r.lambda),
                r.phi,
                r.empirical.value.re,
                r.empirical.value.im,
                r.empirical.se,
                r.analytic.re,
                r.analytic.im,
                r.abs_err()
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "characteristic-functional convergence study");
        let _ = writeln!(out, "operator:  {}", self.operator.to_compact());
        let _ = writeln!(out, "exponent:  {}", self.family.to_kv().to_inline());
        let _ = writeln!(out, "ensemble:  {} per rung, seed {}", self.ensemble, self.seed);
        let _ = writeln!(out, "functions: {}", self.rows_at(self.ladder[0]).count());
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>10} {:>14} {:>14} {:>8}", "lambda", "mean_abs_err", "mean_se", "err/se");
        for r in self.rung_summaries() {
            let _ = writeln!(
                out,
                "{:>10} {:>14.6e} {:>14.6e} {:>8.2}",
                fmt_f64(r.lambda),
                r.mean_err,
                r.mean_se,
                r.mean_err / r.mean_se
            );
        }
        let _ = writeln!(out);
        match self.slope() {
            Ok(s) => {
                let used: Vec<String> = self.fitted_rungs().iter().map(|r| fmt_f64(r.lambda)).collect();
                let _ = writeln!(out, "fitted slope: {s:.4} (rungs {})", used.join(", "));
            }
            Err(_) => {
                let _ = writeln!(out, "fitted slope: NOISE_FLOOR (fewer than two rungs above 3 SE)");
            }
        }
        let _ = writeln!(out, "monotone decay: {}", if self.monotone() { "yes" } else { "no" });
        let _ = writeln!(out, "moduli bounded: {}", if self.moduli_bounded() { "yes" } else { "no" });
        if self.tail_truncated {
            let _ = writeln!(out, "warning: analytic CF tail truncated at the margin");
        }
        out
    }
}
