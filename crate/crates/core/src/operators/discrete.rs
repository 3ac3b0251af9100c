//! Grid versions of `T`, `L*` and `L`.
//!
//! Causal families act axis by axis with 1-D recursions. The fractional
//! Laplacian acts through periodic Fourier multipliers; `T` and `L*` embed the
//! grid in a zero-padded torus large enough that the zeroed DC bin costs less
//! than [`DC_TOLERANCE`] of the peak.

use super::spectral::{fast_len, multiply_norm_power};
use super::{CausalKernel, OperatorSpec};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Smallest number of samples a test function support may span.
pub const MIN_SUPPORT_SAMPLES: usize = 16;

/// Target for `|mean of φ on the padded torus| / max|φ|`.
const DC_TOLERANCE: f64 = 2.5e-4;

/// Upper bound on padded torus size, in nodes.
const MAX_PADDED_NODES: usize = 1 << 23;

/// Runs `f` on every 1-D line of `values` parallel to `axis`.
fn for_each_line(values: &mut [f64], shape: &[usize], axis: usize, mut f: impl FnMut(&mut [f64])) {
    match (shape.len(), axis) {
        (1, _) => f(values),
        (_, 0) => values.chunks_mut(shape[0]).for_each(f),
        _ => {
            let (nx, ny) = (shape[0], shape[1]);
            let mut line = vec![0.0; ny];
            for i in 0..nx {
                for j in 0..ny {
                    line[j] = values[i + nx * j];
                }
                f(&mut line);
                for j in 0..ny {
                    values[i + nx * j] = line[j];
                }
            }
        }
    }
}

fn check_len(grid: &Grid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("grid function has non-finite samples"));
    }
    Ok(())
}

/// Fewest samples spanned by the nonzero support along any axis, or `None`
/// when `phi` vanishes identically.
fn support_span(grid: &Grid, phi: &[f64]) -> Option<usize> {
    let shape = grid.shape();
    let mut lo = vec![usize::MAX; shape.len()];
    let mut hi = vec![0usize; shape.len()];
    for (k, &v) in phi.iter().enumerate() {
        if v != 0.0 {
            let idx = [k % shape[0], if shape.len() > 1 { k / shape[0] } else { 0 }];
            for a in 0..shape.len() {
                lo[a] = lo[a].min(idx[a]);
                hi[a] = hi[a].max(idx[a]);
            }
        }
    }
    if lo[0] == usize::MAX {
        return None;
    }
    (0..shape.len()).map(|a| hi[a] - lo[a] + 1).min()
}

fn check_support(grid: &Grid, phi: &[f64]) -> Result<bool> {
    match support_span(grid, phi) {
        None => Ok(false),
        Some(span) if span < MIN_SUPPORT_SAMPLES => Err(Error::GridTooCoarse {
            samples: span,
            required: MIN_SUPPORT_SAMPLES,
        }),
        Some(_) => Ok(true),
    }
}

/// `∫ₓ^∞ k(t − x) φ(t) dt` by backward trapezoid recursion.
fn tail_integral(kernel: CausalKernel, h: f64, line: &mut [f64]) {
    match kernel {
        CausalKernel::Power(order) => {
            for _ in 0..order {
                let mut acc = 0.0;
                let mut next = line[line.len() - 1];
                line[line.len() - 1] = 0.0;
                for j in (0..line.len() - 1).rev() {
                    let cur = line[j];
                    acc += 0.5 * h * (cur + next);
                    next = cur;
                    line[j] = acc;
                }
            }
        }
        CausalKernel::Exp(alpha) => {
            let decay = (-alpha * h).exp();
            let mut acc = 0.0;
            let mut next = line[line.len() - 1];
            line[line.len() - 1] = 0.0;
            for j in (0..line.len() - 1).rev() {
                let cur = line[j];
                acc = decay * acc + 0.5 * h * (cur + decay * next);
                next = cur;
                line[j] = acc;
            }
        }
    }
}

/// Fourth-order central difference; second order next to the ends.
fn central_difference(h: f64, line: &mut [f64]) {
    let n = line.len();
    let f = line.to_vec();
    for j in 0..n {
        line[j] = if j >= 2 && j + 2 < n {
            (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h)
        } else if j >= 1 && j + 1 < n {
            (f[j + 1] - f[j - 1]) / (2.0 * h)
        } else {
            0.0
        };
    }
}

/// `(−D + αI)` or `(−D)ᴺ` on one line.
fn adjoint_line(kernel: CausalKernel, h: f64, line: &mut [f64]) {
    match kernel {
        CausalKernel::Power(order) => {
            for _ in 0..order {
                central_difference(h, line);
                line.iter_mut().for_each(|v| *v = -*v);
            }
        }
        CausalKernel::Exp(alpha) => {
            let orig = line.to_vec();
            central_difference(h, line);
            for (v, o) in line.iter_mut().zip(orig) {
                *v = -*v + alpha * o;
            }
        }
    }
}

/// `(D + αI)` or `Dᴺ` on one line by forward differences; the trailing nodes
/// that lack a right neighbour are set to zero.
fn forward_line(kernel: CausalKernel, h: f64, line: &mut [f64]) {
    let n = line.len();
    let passes = match kernel {
        CausalKernel::Power(order) => order as usize,
        CausalKernel::Exp(_) => 1,
    };
    for _ in 0..passes {
        for j in 0..n - 1 {
            let d = (line[j + 1] - line[j]) / h;
            line[j] = match kernel {
                CausalKernel::Exp(alpha) => d + alpha * line[j],
                CausalKernel::Power(_) => d,
            };
        }
    }
    for v in line.iter_mut().skip(n.saturating_sub(passes)) {
        *v = 0.0;
    }
}

/// Torus shape for zero-padding `phi` so that its mean is small.
fn padded_shape(grid: &Grid, phi: &[f64]) -> Vec<usize> {
    let d = grid.dim();
    let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let total: f64 = phi.iter().sum::<f64>().abs();
    let wanted = if peak > 0.0 { total / (DC_TOLERANCE * peak) } else { 0.0 };
    let per_axis_cap = (MAX_PADDED_NODES as f64).powf(1.0 / d as f64).floor() as usize;
    let per_axis = wanted.powf(1.0 / d as f64).ceil();
    grid.shape()
        .iter()
        .map(|&n| {
            let target = (per_axis.min(1e9) as usize).max(2 * n);
            fast_len(target.min(per_axis_cap.max(2 * n)))
        })
        .collect()
}

fn embed(grid: &Grid, values: &[f64], shape: &[usize]) -> (Vec<f64>, Vec<usize>) {
    let offset: Vec<usize> = shape.iter().zip(grid.shape()).map(|(m, n)| (m - n) / 2).collect();
    let mut out = vec![0.0; shape.iter().product()];
    let nx = grid.shape()[0];
    for (k, &v) in values.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let idx = match shape.len() {
            1 => i + offset[0],
            _ => (i + offset[0]) + shape[0] * (j + offset[1]),
        };
        out[idx] = v;
    }
    (out, offset)
}

fn crop(grid: &Grid, padded: &[f64], shape: &[usize], offset: &[usize]) -> Vec<f64> {
    let nx = grid.shape()[0];
    (0..grid.len())
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            match shape.len() {
                1 => padded[i + offset[0]],
                _ => padded[(i + offset[0]) + shape[0] * (j + offset[1])],
            }
        })
        .collect()
}

/// Applies a chain of spectral powers to `phi` on a common padded torus.
fn padded_spectral(grid: &Grid, phi: &[f64], powers: &[f64]) -> Vec<f64> {
    let shape = padded_shape(grid, phi);
    let (mut work, offset) = embed(grid, phi, &shape);
    for &p in powers {
        work = multiply_norm_power(&work, &shape, grid.step(), p);
    }
    crop(grid, &work, &shape, &offset)
}

fn check_dim(op: &OperatorSpec, grid: &Grid) -> Result<()> {
    op.validate()?;
    if op.dim() != grid.dim() {
        return Err(Error::GridMismatch(format!(
            "operator {} acts in dimension {}, grid has {}",
            op.name(),
            op.dim(),
            grid.dim()
        )));
    }
    Ok(())
}

/// The left inverse `T` of `L*` applied to a sampled test function.
///
/// Causal families integrate the right tail, `∫ₓ^∞ ρ_L(t − x) φ(t) dt`, axis
/// by axis. The fractional Laplacian divides by `‖ω‖^γ` with the DC bin set
/// to zero.
pub fn apply_t(op: &OperatorSpec, grid: &Grid, phi: &[f64]) -> Result<Vec<f64>> {
    check_dim(op, grid)?;
    check_len(grid, phi)?;
    if !check_support(grid, phi)? {
        return Ok(vec![0.0; phi.len()]);
    }
    match (op.kernels(), op) {
        (Some(kernels), _) => {
            let mut out = phi.to_vec();
            for (axis, k) in kernels.into_iter().enumerate() {
                for_each_line(&mut out, grid.shape(), axis, |line| tail_integral(k, grid.step(), line));
            }
            Ok(out)
        }
        (None, OperatorSpec::FractionalLaplacian { gamma, .. }) => {
            Ok(padded_spectral(grid, phi, &[-gamma]))
        }
        (None, _) => unreachable!("only the fractional Laplacian lacks causal kernels"),
    }
}

/// The adjoint `L*` on a sampled test function (central differences for the
/// causal families).
pub fn apply_adjoint(op: &OperatorSpec, grid: &Grid, phi: &[f64]) -> Result<Vec<f64>> {
    check_dim(op, grid)?;
    check_len(grid, phi)?;
    match (op.kernels(), op) {
        (Some(kernels), _) => {
            let mut out = phi.to_vec();
            for (axis, k) in kernels.into_iter().enumerate() {
                for_each_line(&mut out, grid.shape(), axis, |line| adjoint_line(k, grid.step(), line));
            }
            Ok(out)
        }
        (None, OperatorSpec::FractionalLaplacian { gamma, .. }) => {
            Ok(padded_spectral(grid, phi, &[*gamma]))
        }
        (None, _) => unreachable!("only the fractional Laplacian lacks causal kernels"),
    }
}

/// `L` applied to grid samples: forward differences (plus `α·s`) for causal
/// families, periodic multiplication by `‖ω‖^γ` for the fractional Laplacian.
pub fn apply_l_discrete(op: &OperatorSpec, grid: &Grid, s: &[f64]) -> Result<Vec<f64>> {
    check_dim(op, grid)?;
    check_len(grid, s)?;
    match (op.kernels(), op) {
        (Some(kernels), _) => {
            let mut out = s.to_vec();
            for (axis, k) in kernels.into_iter().enumerate() {
                for_each_line(&mut out, grid.shape(), axis, |line| forward_line(k, grid.step(), line));
            }
            Ok(out)
        }
        (None, OperatorSpec::FractionalLaplacian { gamma, .. }) => {
            Ok(multiply_norm_power(s, grid.shape(), grid.step(), *gamma))
        }
        (None, _) => unreachable!("only the fractional Laplacian lacks causal kernels"),
    }
}

/// The pair `(L*, T)` for one operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointInverse {
    op: OperatorSpec,
}

impl AdjointInverse {
    pub fn new(op: OperatorSpec) -> Result<Self> {
        op.validate()?;
        Ok(Self { op })
    }

    pub fn operator(&self) -> &OperatorSpec {
        &self.op
    }

    pub fn apply(&self, grid: &Grid, phi: &[f64]) -> Result<Vec<f64>> {
        apply_t(&self.op, grid, phi)
    }

    pub fn apply_adjoint(&self, grid: &Grid, phi: &[f64]) -> Result<Vec<f64>> {
        apply_adjoint(&self.op, grid, phi)
    }

    /// `‖T L*φ − φ‖_∞ / ‖φ‖_∞`.
    pub fn identity_residual(&self, grid: &Grid, phi: &[f64]) -> Result<f64> {
        check_dim(&self.op, grid)?;
        check_len(grid, phi)?;
        if !check_support(grid, phi)? {
            return Ok(0.0);
        }
        let back = match self.op {
            OperatorSpec::FractionalLaplacian { gamma, .. } => {
                padded_spectral(grid, phi, &[gamma, -gamma])
            }
            _ => apply_t(&self.op, grid, &apply_adjoint(&self.op, grid, phi)?)?,
        };
        let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = back
            .iter()
            .zip(phi)
            .fold(0.0f64, |m, (b, p)| m.max((b - p).abs()));
        Ok(err / peak)
    }
}
