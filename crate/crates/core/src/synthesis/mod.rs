//! Random L-splines `s = p₀ + Σ aₖ ρ_L(· − xₖ)` sampled on grids, and exact
//! reference paths of the limiting Lévy processes.
//!
//! Causal families are synthesized exactly in `O(K + G)`: each impulse is
//! deposited on the first node at or after it, weighted by the kernel's
//! value over the sub-bin offset, and a per-axis recursion propagates the
//! kernel between nodes. The fractional Laplacian rasterizes impulses on a
//! periodic grid and divides by `‖ω‖^γ`.

mod ensemble;
mod io;
mod recursive;
mod reference;

pub use ensemble::{ensemble, ensemble_map, Generator, PoissonSpec};
pub use reference::reference_levy_path;

use crate::error::{Error, Result};
use crate::exponents::LevyExponent;
use crate::grid::Grid;
use crate::noise::ImpulseField;
use crate::operators::spectral::multiply_norm_power;
use crate::operators::{apply_l_discrete, Inversion, OperatorSpec};

/// Impulse count above which [`synthesize_direct`] refuses to run.
pub const DIRECT_LIMIT: usize = 10_000;

/// Where a realization came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Poisson { rate: f64, seed: u64, stream: u64 },
    Reference { family: LevyExponent, seed: u64, stream: u64 },
}

impl Provenance {
    pub fn seed(&self) -> u64 {
        match self {
            Provenance::Poisson { seed, .. } | Provenance::Reference { seed, .. } => *seed,
        }
    }

    pub fn stream(&self) -> u64 {
        match self {
            Provenance::Poisson { stream, .. } | Provenance::Reference { stream, .. } => *stream,
        }
    }
}

/// Samples of a process on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRealization {
    grid: Grid,
    samples: Vec<f64>,
    provenance: Provenance,
    operator: OperatorSpec,
}

impl GridRealization {
    pub fn new(grid: Grid, samples: Vec<f64>, provenance: Provenance, operator: OperatorSpec) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(k) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("sample {k} is not finite")));
        }
        Ok(Self {
            grid,
            samples,
            provenance,
            operator,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn operator(&self) -> &OperatorSpec {
        &self.operator
    }

    /// `L s` on the grid, see [`apply_l_discrete`].
    pub fn apply_l(&self) -> Result<Vec<f64>> {
        apply_l_discrete(&self.operator, &self.grid, &self.samples)
    }

    /// Bins `j` of a 1-D realization with `s(x_{j+1}) ≠ s(x_j)`: a jump in
    /// `(x_j, x_{j+1}]`.
    pub fn jump_bins(&self) -> Vec<usize> {
        if self.grid.dim() != 1 {
            return Vec::new();
        }
        self.samples
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] != w[0])
            .map(|(j, _)| j)
            .collect()
    }
}

/// First node index at or after `x` along an axis, with a small tolerance so
/// that an impulse sitting on a node lands on it.
pub(crate) fn node_at_or_after(lo: f64, h: f64, x: f64) -> i64 {
    ((x - lo) / h - 1e-9).ceil() as i64
}

/// The grid bin (per axis, `j` such that `xₖ ∈ (x_j, x_{j+1}]`) of every
/// impulse that influences the window of a pinned causal synthesis.
pub fn impulse_bins(field: &ImpulseField, grid: &Grid) -> Vec<Vec<usize>> {
    let h = grid.step();
    field
        .iter()
        .filter_map(|(x, _)| {
            let mut bin = Vec::with_capacity(x.len());
            for (a, &xa) in x.iter().enumerate() {
                let lo = grid.origin()[a];
                if xa <= lo {
                    return None;
                }
                let j = node_at_or_after(lo, h, xa);
                if j < 1 || j as usize >= grid.shape()[a] {
                    return None;
                }
                bin.push(j as usize - 1);
            }
            Some(bin)
        })
        .collect()
}

fn check_dims(field: &ImpulseField, op: &OperatorSpec, grid: &Grid) -> Result<()> {
    op.validate()?;
    if field.dim() != grid.dim() || op.dim() != grid.dim() {
        return Err(Error::GridMismatch(format!(
            "field in dimension {}, operator {} in dimension {}, grid in dimension {}",
            field.dim(),
            op.name(),
            op.dim(),
            grid.dim()
        )));
    }
    Ok(())
}

fn margin_error(op: &OperatorSpec, declared: f64, required: f64) -> Error {
    Error::MarginTooSmall {
        operator: op.name().to_string(),
        declared,
        required,
    }
}

/// Grid realization of `s = L⁻¹w` for the impulses of `field`.
///
/// The field's box fixes the margin. Pure-derivative families keep only the
/// impulses above the lower corner, which pins `s(lo) = 0`; exponential
/// families need `e^{−α·margin} ≤ MARGIN_TOL`; the fractional Laplacian
/// expects the torus returned by [`OperatorSpec::noise_domain`].
pub fn synthesize_spline(field: &ImpulseField, op: &OperatorSpec, grid: &Grid) -> Result<GridRealization> {
    check_dims(field, op, grid)?;
    let window = grid.domain();
    let required = op.required_margin(&window);
    let noise = field.domain();
    let samples = match op.inversion() {
        Inversion::ClosedForm => {
            let declared = (0..grid.dim())
                .map(|a| window.lo()[a] - noise.lo()[a])
                .fold(f64::INFINITY, f64::min);
            if declared < required - 1e-9 * required.max(1.0) {
                return Err(margin_error(op, declared.max(0.0), required));
            }
            if (0..grid.dim()).any(|a| noise.hi()[a] < window.hi()[a] - 1e-9 * grid.step()) {
                return Err(Error::GridMismatch("noise box does not cover the grid".into()));
            }
            recursive::synthesize(field, op, grid)
        }
        Inversion::Spectral => spectral_synthesis(field, op, grid, required)?,
    };
    GridRealization::new(
        grid.clone(),
        samples,
        Provenance::Poisson {
            rate: field.rate(),
            seed: field.seed(),
            stream: field.stream(),
        },
        *op,
    )
}

fn spectral_synthesis(field: &ImpulseField, op: &OperatorSpec, grid: &Grid, required: f64) -> Result<Vec<f64>> {
    let OperatorSpec::FractionalLaplacian { gamma, .. } = *op else {
        unreachable!("spectral inversion is only used by the fractional Laplacian")
    };
    let h = grid.step();
    let noise = field.domain();
    let window = grid.domain();
    let d = grid.dim();
    let mut shape = Vec::with_capacity(d);
    let mut left_cells = Vec::with_capacity(d);
    let mut declared = f64::INFINITY;
    for a in 0..d {
        let cells = noise.extent(a) / h;
        let m = cells.round();
        let left = (window.lo()[a] - noise.lo()[a]) / h - 0.5;
        let l = left.round();
        if (cells - m).abs() > 1e-6 || (left - l).abs() > 1e-6 || l < 0.0 {
            return Err(Error::GridMismatch(
                "noise box is not the periodic domain of the grid; use OperatorSpec::noise_domain".into(),
            ));
        }
        let (m, l) = (m as usize, l as usize);
        let n = grid.shape()[a];
        if m < n + l {
            return Err(Error::GridMismatch("noise box does not cover the grid".into()));
        }
        let right = m - n - l;
        declared = declared.min((l.min(right) as f64 + 0.5) * h);
        shape.push(m);
        left_cells.push(l);
    }
    if declared < required * (1.0 - 1e-9) {
        return Err(margin_error(op, declared, required));
    }
    let total: usize = shape.iter().product();
    let mut mass = vec![0.0; total];
    let scale = h.powi(d as i32).recip();
    for (x, a) in field.iter() {
        let mut flat = 0;
        let mut stride = 1;
        for ax in 0..d {
            let i = (((x[ax] - noise.lo()[ax]) / h).floor().max(0.0) as usize).min(shape[ax] - 1);
            flat += i * stride;
            stride *= shape[ax];
        }
        mass[flat] += a * scale;
    }
    let torus = multiply_norm_power(&mass, &shape, h, -gamma);
    let nx = grid.shape()[0];
    Ok((0..grid.len())
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            match d {
                1 => torus[i + left_cells[0]],
                _ => torus[(i + left_cells[0]) + shape[0] * (j + left_cells[1])],
            }
        })
        .collect())
}

/// `Σₖ aₖ ρ_L(x − xₖ)` evaluated node by node, with the same pinning as
/// [`synthesize_spline`]. Quadratic cost; kept as a cross-check.
pub fn synthesize_direct(field: &ImpulseField, op: &OperatorSpec, grid: &Grid) -> Result<GridRealization> {
    check_dims(field, op, grid)?;
    if field.len() > DIRECT_LIMIT {
        return Err(Error::TooManyImpulses {
            expected: field.len() as f64,
            limit: DIRECT_LIMIT as f64,
        });
    }
    let lo = grid.origin().to_vec();
    let kept: Vec<(&[f64], f64)> = field
        .iter()
        .filter(|(x, _)| !op.is_pinned() || x.iter().zip(&lo).all(|(xa, la)| xa > la))
        .collect();
    let mut samples = Vec::with_capacity(grid.len());
    let mut rel = vec![0.0; grid.dim()];
    for k in 0..grid.len() {
        let p = grid.point(k);
        let mut acc = 0.0;
        for (x, a) in &kept {
            for ax in 0..p.len() {
                // Offsets within rounding of zero count as on the node.
                let d = p[ax] - x[ax];
                rel[ax] = if d.abs() < 1e-9 * grid.step() { 0.0 } else { d };
            }
            acc += a * op.green(&rel)?;
        }
        samples.push(acc);
    }
    GridRealization::new(
        grid.clone(),
        samples,
        Provenance::Poisson {
            rate: field.rate(),
            seed: field.seed(),
            stream: field.stream(),
        },
        *op,
    )
}
