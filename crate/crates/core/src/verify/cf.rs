//! Characteristic functionals: Monte Carlo estimates and analytic values.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::grid::Grid;
use crate::operators::spectral::multiply_norm_power;
use crate::operators::{apply_t, Inversion, OperatorSpec};
use crate::synthesis::GridRealization;

/// Smallest ensemble accepted by [`empirical_cf`].
pub const MIN_ENSEMBLE: usize = 100;

/// Relative level of `|f(Tφ)|` at the noise-domain edge that flags a
/// truncated tail.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// `φ` multiplied by the trapezoid weights, so that `⟨s, φ⟩` is a dot product.
pub fn weighted(grid: &Grid, phi: &[f64]) -> Result<Vec<f64>> {
    if phi.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "test function has {} samples, grid has {} nodes",
            phi.len(),
            grid.len()
        )));
    }
    Ok(grid.trapezoid_weights().iter().zip(phi).map(|(w, p)| w * p).collect())
}

/// `⟨s, φ⟩` by the trapezoid rule, with `φ` already [`weighted`].
pub fn pairing(s: &[f64], weighted_phi: &[f64]) -> f64 {
    s.iter().zip(weighted_phi).map(|(a, b)| a * b).sum()
}

/// A Monte Carlo mean of `e^{i⟨s,φ⟩}` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfEstimate {
    pub value: Complex64,
    pub se: f64,
}

/// Mean of `e^{i·p}` over `pairings`; the standard error is the sample
/// standard deviation of the complex summand over `√M`.
pub fn cf_from_pairings(pairings: &[f64]) -> CfEstimate {
    let m = pairings.len() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for &p in pairings {
        sum += Complex64::new(p.cos(), p.sin());
    }
    let mean = sum / m;
    let mut ss = 0.0;
    for &p in pairings {
        ss += (Complex64::new(p.cos(), p.sin()) - mean).norm_sqr();
    }
    let se = if pairings.len() > 1 { (ss / (m - 1.0) / m).sqrt() } else { 0.0 };
    CfEstimate { value: mean, se }
}

/// `(1/M) Σᵢ exp(i⟨sᵢ, φ⟩)` over an ensemble on `grid`.
pub fn empirical_cf(ensemble: &[GridRealization], grid: &Grid, phi: &[f64]) -> Result<CfEstimate> {
    if ensemble.len() < MIN_ENSEMBLE {
        return Err(Error::param(format!(
            "ensemble of {} realizations; at least {MIN_ENSEMBLE} required",
            ensemble.len()
        )));
    }
    if let Some(r) = ensemble.iter().find(|r| !r.grid().same_as(grid)) {
        return Err(Error::GridMismatch(format!(
            "realization grid {:?} differs from test-function grid {:?}",
            r.grid().shape(),
            grid.shape()
        )));
    }
    let w = weighted(grid, phi)?;
    let p: Vec<f64> = ensemble.iter().map(|r| pairing(r.samples(), &w)).collect();
    Ok(cf_from_pairings(&p))
}

/// `exp(∫ f(Tφ(x)) dx)` over the noise domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticCf {
    pub value: Complex64,
    /// `|f(Tφ)|` at the edge of the noise domain exceeds
    /// [`TAIL_TOLERANCE`] times its peak.
    pub tail_truncated: bool,
}

/// Analytic characteristic functional `P̂_w(Tφ)` with the integral taken on
/// the synthesis grid extended over the noise domain (the margin for
/// exponential kernels, the periodic torus for the fractional Laplacian).
pub fn analytic_cf(
    f: &dyn Exponent,
    op: &OperatorSpec,
    grid: &Grid,
    phi: &[f64],
    margin: Option<f64>,
) -> Result<AnalyticCf> {
    let layout = op.noise_layout(grid, margin)?;
    if phi.len() != grid.len() {
        return Err(Error::GridMismatch("test function length differs from grid".into()));
    }
    let h = grid.step();
    let d = grid.dim();
    let (shape, tphi, weights) = match op.inversion() {
        Inversion::ClosedForm => {
            let offset: Vec<usize> = layout.left.iter().map(|m| (m / h - 1e-9).ceil().max(0.0) as usize).collect();
            let shape: Vec<usize> = grid.shape().iter().zip(&offset).map(|(n, o)| n + o).collect();
            let origin: Vec<f64> = grid.origin().iter().zip(&offset).map(|(o, c)| o - *c as f64 * h).collect();
            let ext = Grid::from_parts(origin, h, shape.clone())?;
            let embedded = embed(grid, phi, &shape, &offset);
            let tphi = apply_t(op, &ext, &embedded)?;
            (shape, tphi, ext.trapezoid_weights())
        }
        Inversion::Spectral => {
            let sp = layout.spectral.expect("spectral layout");
            let OperatorSpec::FractionalLaplacian { gamma, .. } = *op else {
                unreachable!("spectral inversion is only used by the fractional Laplacian")
            };
            let embedded = embed(grid, phi, &sp.shape, &sp.left_cells);
            let tphi = multiply_norm_power(&embedded, &sp.shape, h, -gamma);
            let n: usize = sp.shape.iter().product();
            (sp.shape, tphi, vec![h.powi(d as i32); n])
        }
    };
    let mut integral = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut edge = 0.0f64;
    let nx = shape[0];
    for (k, (&t, &w)) in tphi.iter().zip(&weights).enumerate() {
        let v = f.eval(t);
        integral += v * w;
        let a = v.norm();
        peak = peak.max(a);
        let at_lower_edge = k % nx == 0 || (d == 2 && k / nx == 0);
        let at_upper_edge = k % nx == nx - 1 || (d == 2 && k / nx == shape[1] - 1);
        if at_lower_edge || (op.inversion() == Inversion::Spectral && at_upper_edge) {
            edge = edge.max(a);
        }
    }
    // Pure-derivative families are pinned: the noise lives on the window
    // only, so a nonzero `Tφ(lo)` is not a truncated tail.
    let tail_truncated = !op.is_pinned() && edge > TAIL_TOLERANCE * peak;
    Ok(AnalyticCf {
        value: integral.exp(),
        tail_truncated,
    })
}

fn embed(grid: &Grid, phi: &[f64], shape: &[usize], offset: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; shape.iter().product()];
    let nx = grid.shape()[0];
    for (k, &v) in phi.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let idx = match shape.len() {
            1 => i + offset[0],
            _ => (i + offset[0]) + shape[0] * (j + offset[1]),
        };
        out[idx] = v;
    }
    out
}

/// Smallest eigenvalue of the Hermitian matrix `[ĉf(φⱼ − φₖ)]` for three test
/// functions; positive-definiteness requires it to be nonnegative.
pub fn psd_min_eigenvalue(
    f: &dyn Exponent,
    op: &OperatorSpec,
    grid: &Grid,
    phis: [&[f64]; 3],
    margin: Option<f64>,
) -> Result<f64> {
    let mut m = Matrix3::<Complex64>::zeros();
    for j in 0..3 {
        for k in 0..3 {
            let diff: Vec<f64> = phis[j].iter().zip(phis[k]).map(|(a, b)| a - b).collect();
            m[(j, k)] = analytic_cf(f, op, grid, &diff, margin)?.value;
        }
    }
    // Symmetrize away rounding so the eigen solver sees an exact Hermitian.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min))
}
