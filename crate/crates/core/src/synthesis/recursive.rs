//! Exact `O(K + G)` synthesis for causal kernels.
//!
//! An impulse `a` at `x` first reaches node `j = ⌈(x − lo)/h⌉`, at offset
//! `δ = x_j − x ∈ [0, h)`. Impulses below `lo` (margin of exponential
//! kernels) enter at node 0 with `δ = lo − x`. Between nodes the kernel
//! states evolve in closed form:
//!
//! - `x^{N−1}/(N−1)!`: states `S_r = Σ a (x − xₖ)^r / r!`, shifted by the
//!   binomial rule `S_r(x + h) = Σ_{q≤r} S_q h^{r−q}/(r−q)!`;
//! - `e^{−αx}`: one state multiplied by `e^{−αh}`.

use super::node_at_or_after;
use crate::grid::Grid;
use crate::noise::ImpulseField;
use crate::operators::{CausalKernel, OperatorSpec};

fn factorial(r: usize) -> f64 {
    (1..=r).map(|k| k as f64).product()
}

/// Node and sub-bin weight where an impulse enters one axis, or `None` when
/// it lies beyond the last node or (for pinned operators) at or below `lo`.
fn entry(lo: f64, h: f64, n: usize, x: f64, pinned: bool) -> Option<(usize, f64)> {
    if pinned && x <= lo {
        return None;
    }
    if x < lo {
        return Some((0, lo - x));
    }
    let j = node_at_or_after(lo, h, x).max(0) as usize;
    if j >= n {
        return None;
    }
    Some((j, (lo + j as f64 * h - x).max(0.0)))
}

fn single_state_weight(k: CausalKernel, delta: f64) -> f64 {
    match k {
        CausalKernel::Power(_) => 1.0,
        CausalKernel::Exp(alpha) => (-alpha * delta).exp(),
    }
}

/// Prefix recursion of a single-state kernel along one line.
fn propagate(k: CausalKernel, h: f64, line: &mut [f64]) {
    match k {
        CausalKernel::Power(_) => {
            for j in 1..line.len() {
                line[j] += line[j - 1];
            }
        }
        CausalKernel::Exp(alpha) => {
            let decay = (-alpha * h).exp();
            for j in 1..line.len() {
                line[j] += decay * line[j - 1];
            }
        }
    }
}

pub(super) fn synthesize(field: &ImpulseField, op: &OperatorSpec, grid: &Grid) -> Vec<f64> {
    let kernels = op.kernels().expect("causal operator");
    let pinned = op.is_pinned();
    let h = grid.step();
    match (grid.dim(), kernels[0]) {
        (1, CausalKernel::Power(order)) if order > 1 => power_line(field, order as usize, grid, pinned),
        (1, k) => {
            let (lo, n) = (grid.origin()[0], grid.shape()[0]);
            let mut line = vec![0.0; n];
            for (x, a) in field.iter() {
                if let Some((j, delta)) = entry(lo, h, n, x[0], pinned) {
                    line[j] += a * single_state_weight(k, delta);
                }
            }
            propagate(k, h, &mut line);
            line
        }
        _ => {
            let (nx, ny) = (grid.shape()[0], grid.shape()[1]);
            let mut mass = vec![0.0; nx * ny];
            for (x, a) in field.iter() {
                let ex = entry(grid.origin()[0], h, nx, x[0], pinned);
                let ey = entry(grid.origin()[1], h, ny, x[1], pinned);
                if let (Some((i, dx)), Some((j, dy))) = (ex, ey) {
                    mass[i + nx * j] += a * single_state_weight(kernels[0], dx) * single_state_weight(kernels[1], dy);
                }
            }
            for row in mass.chunks_mut(nx) {
                propagate(kernels[0], h, row);
            }
            let mut column = vec![0.0; ny];
            for i in 0..nx {
                for j in 0..ny {
                    column[j] = mass[i + nx * j];
                }
                propagate(kernels[1], h, &mut column);
                for j in 0..ny {
                    mass[i + nx * j] = column[j];
                }
            }
            mass
        }
    }
}

fn power_line(field: &ImpulseField, order: usize, grid: &Grid, pinned: bool) -> Vec<f64> {
    let (lo, h, n) = (grid.origin()[0], grid.step(), grid.shape()[0]);
    // inject[j * order + r]
    let mut inject = vec![0.0; n * order];
    for (x, a) in field.iter() {
        if let Some((j, delta)) = entry(lo, h, n, x[0], pinned) {
            let mut term = a;
            for r in 0..order {
                inject[j * order + r] += term;
                term *= delta / (r + 1) as f64;
            }
        }
    }
    let shift: Vec<f64> = (0..order).map(|p| h.powi(p as i32) / factorial(p)).collect();
    let mut state = inject[..order].to_vec();
    let mut next = vec![0.0; order];
    let mut out = Vec::with_capacity(n);
    out.push(state[order - 1]);
    for j in 1..n {
        for r in 0..order {
            next[r] = (0..=r).map(|q| state[q] * shift[r - q]).sum::<f64>() + inject[j * order + r];
        }
        std::mem::swap(&mut state, &mut next);
        out.push(state[order - 1]);
    }
    out
}
