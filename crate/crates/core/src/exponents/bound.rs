//! Numeric witnesses for `|f(ξ)| ≤ ν₁|ξ|^{p_min} + ν₂|ξ|^{p_max}` and for the
//! poissonization contraction `|f_n| ≤ √2 |f|`.

use std::f64::consts::SQRT_2;

use super::{Exponent, LevyExponent};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentBoundParams {
    pub p_min: f64,
    pub p_max: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Moment witnesses `p_min ≤ p ≤ q ≤ p_max`.
    pub p: f64,
    pub q: f64,
}

impl ExponentBoundParams {
    pub fn bound(&self, xi: f64) -> f64 {
        let a = xi.abs();
        self.nu1 * a.powf(self.p_min) + self.nu2 * a.powf(self.p_max)
    }
}

/// `per_sign` log-spaced magnitudes in `[lo, hi]`, followed by their negatives.
pub fn log_grid(lo: f64, hi: f64, per_sign: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_sign >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    let pos: Vec<f64> = (0..per_sign)
        .map(|k| (a + (b - a) * k as f64 / (per_sign - 1) as f64).exp())
        .collect();
    pos.iter().copied().chain(pos.iter().map(|x| -x)).collect()
}

struct Constraint {
    a: f64,
    b: f64,
    c: f64,
}

fn constraints(f: &dyn Exponent, p_min: f64, p_max: f64, grid: &[f64]) -> Option<Vec<Constraint>> {
    let mut out = Vec::with_capacity(grid.len());
    for &xi in grid {
        let c = f.eval(xi).norm();
        if xi == 0.0 {
            if c > 0.0 {
                return None;
            }
            continue;
        }
        let m = xi.abs();
        out.push(Constraint {
            a: m.powf(p_min),
            b: m.powf(p_max),
            c,
        });
    }
    Some(out)
}

/// Smallest `ν₂` that makes `ν₁` feasible.
fn nu2_for(cons: &[Constraint], nu1: f64) -> f64 {
    cons.iter()
        .map(|k| (k.c - k.a * nu1) / k.b)
        .fold(0.0, f64::max)
}

/// Minimises `ν₁ + ν₂` over the constraint set. The objective restricted to
/// feasible `ν₂(ν₁)` is convex and piecewise linear, so a golden-section
/// search over `ν₁` converges to the optimum.
fn solve(cons: &[Constraint], same_power: bool) -> (f64, f64) {
    if cons.is_empty() {
        return (0.0, 0.0);
    }
    if same_power {
        let k = cons.iter().map(|k| k.c / k.a).fold(0.0, f64::max);
        return (0.5 * k, 0.5 * k);
    }
    let upper = cons.iter().map(|k| k.c / k.a).fold(0.0, f64::max);
    let objective = |nu1: f64| nu1 + nu2_for(cons, nu1);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, upper);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
        if hi - lo <= 1e-15 * upper.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let mut best = (0.0, objective(0.0));
    for cand in [lo, hi, 0.5 * (lo + hi), upper] {
        let v = objective(cand);
        if v < best.1 {
            best = (cand, v);
        }
    }
    let nu1 = best.0;
    (nu1, nu2_for(cons, nu1))
}

fn grid_extremes(grid: &[f64]) -> Option<(f64, f64)> {
    let mags = grid.iter().map(|x| x.abs()).filter(|&m| m > 0.0);
    let lo = mags.clone().fold(f64::INFINITY, f64::min);
    let hi = mags.fold(0.0, f64::max);
    (hi > 0.0).then_some((lo, hi))
}

/// Finds constants `ν₁, ν₂ ≥ 0` with the least sum such that
/// `|f(ξ)| ≤ ν₁|ξ|^{p_min} + ν₂|ξ|^{p_max}` on every grid point.
///
/// A finite grid always admits *some* constants, so feasibility is judged by
/// stability: the grid is extended by one decade on both ends and the bound
/// is rejected when the optimal sum grows by more than half. That is the
/// numeric signature of `|f(ξ)|/|ξ|^p` being unbounded near 0 or ∞.
pub fn certify_bound(
    f: &dyn Exponent,
    p_min: f64,
    p_max: f64,
    grid: &[f64],
) -> Result<ExponentBoundParams> {
    if !(p_min > 0.0 && p_min <= p_max && p_max <= 2.0) {
        return Err(Error::param(format!(
            "need 0 < p_min <= p_max <= 2, got ({p_min}, {p_max})"
        )));
    }
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("xi grid must be nonempty and finite"));
    }
    let infeasible = Error::InfeasibleBound { p_min, p_max };
    let same_power = p_min == p_max;
    let cons = constraints(f, p_min, p_max, grid).ok_or_else(|| infeasible.clone())?;
    let (nu1, nu2) = solve(&cons, same_power);

    if let Some((lo, hi)) = grid_extremes(grid) {
        let mut extended = grid.to_vec();
        extended.extend_from_slice(&[lo / 10.0, -lo / 10.0, hi * 10.0, -hi * 10.0]);
        let ext = constraints(f, p_min, p_max, &extended).ok_or_else(|| infeasible.clone())?;
        let (e1, e2) = solve(&ext, same_power);
        if e1 + e2 > 1.5 * (nu1 + nu2) + f64::MIN_POSITIVE {
            return Err(infeasible);
        }
    }

    // absorb rounding so the returned pair is feasible on every grid point
    let slack = cons
        .iter()
        .map(|k| (k.c - k.a * nu1 - k.b * nu2) / k.b)
        .fold(0.0, f64::max);
    Ok(ExponentBoundParams {
        p_min,
        p_max,
        nu1,
        nu2: nu2 + slack,
        p: p_min,
        q: p_max,
    })
}

/// `|n(e^{f(ξ)/n} − 1)| ≤ √2 |f(ξ)|` on every grid point.
pub fn contraction_holds(f: &LevyExponent, n: f64, grid: &[f64]) -> Result<bool> {
    let fn_ = f.poissonize(n)?;
    Ok(grid.iter().all(|&xi| {
        let lhs = fn_.eval(xi).norm();
        let rhs = SQRT_2 * f.eval(xi).norm();
        lhs <= rhs * (1.0 + 1e-12)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::JumpLaw;

    fn grid() -> Vec<f64> {
        log_grid(1e-3, 1e3, 200)
    }

    #[test]
    fn gaussian_quadratic_bound() {
        let f = LevyExponent::gaussian(1.0).unwrap();
        let b = certify_bound(&f, 2.0, 2.0, &grid()).unwrap();
        assert!(b.nu1 + b.nu2 >= 0.5 - 1e-12);
        assert!((b.nu1 + b.nu2 - 0.5).abs() < 1e-9);
        for xi in grid() {
            assert!(f.eval(xi).norm() <= b.bound(xi) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn cauchy_linear_bound() {
        let f = LevyExponent::cauchy(1.0).unwrap();
        let b = certify_bound(&f, 1.0, 1.0, &grid()).unwrap();
        assert!((b.nu1 + b.nu2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cauchy_quadratic_bound_is_infeasible() {
        let f = LevyExponent::cauchy(1.0).unwrap();
        assert_eq!(
            certify_bound(&f, 2.0, 2.0, &grid()),
            Err(Error::InfeasibleBound { p_min: 2.0, p_max: 2.0 })
        );
        // |ξ| > ν ξ² at ξ = 10⁻³ unless ν ≥ 10³
        assert!(f.eval(1e-3).norm() > 999.0 * 1e-6);
    }

    #[test]
    fn mixed_powers() {
        let laplace = LevyExponent::laplace(1.0).unwrap();
        let b = certify_bound(&laplace, 1.0, 2.0, &grid()).unwrap();
        for xi in grid() {
            assert!(laplace.eval(xi).norm() <= b.bound(xi) * (1.0 + 1e-9));
        }
        let cp = LevyExponent::compound_poisson(4.0, JumpLaw::Gaussian { variance: 0.25 }).unwrap();
        let b = certify_bound(&cp, 1.0, 2.0, &grid()).unwrap();
        assert!(b.nu1 >= 0.0 && b.nu2 >= 0.0);
        for xi in grid() {
            assert!(cp.eval(xi).norm() <= b.bound(xi) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = LevyExponent::gaussian(1.0).unwrap();
        assert!(certify_bound(&f, 0.0, 2.0, &grid()).is_err());
        assert!(certify_bound(&f, 2.0, 1.0, &grid()).is_err());
        assert!(certify_bound(&f, 1.0, 2.5, &grid()).is_err());
        assert!(certify_bound(&f, 1.0, 2.0, &[]).is_err());
    }

    #[test]
    fn contraction_examples() {
        let g = grid();
        let gauss = LevyExponent::gaussian(1.0).unwrap();
        assert!(contraction_holds(&gauss, 1.0, &g).unwrap());
        assert!(contraction_holds(&gauss, 1.0, &[0.0]).unwrap());
        let cauchy = LevyExponent::cauchy(2.0).unwrap();
        assert!(contraction_holds(&cauchy, 5.0, &g).unwrap());
        assert!(contraction_holds(&cauchy, 0.0, &g).is_err());
    }
}
