//! Axis-aligned boxes and uniform grids on them.

use crate::error::{Error, Result};
use crate::kv::{fmt_f64, parse_f64};

/// The box `[lo_0, hi_0] × … × [lo_{d-1}, hi_{d-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.len() > 2 {
            return Err(Error::param("box must have 1 or 2 axes"));
        }
        for (a, b) in lo.iter().zip(&hi) {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::param(format!("degenerate box axis [{a}, {b}]")));
            }
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    pub fn contains_domain(&self, other: &Domain) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|a| other.lo[a] >= self.lo[a] && other.hi[a] <= self.hi[a])
    }

    /// Grows axis `a` by `left[a]` below and `right[a]` above.
    pub fn enlarged(&self, left: &[f64], right: &[f64]) -> Domain {
        Domain {
            lo: self.lo.iter().zip(left).map(|(l, m)| l - m).collect(),
            hi: self.hi.iter().zip(right).map(|(h, m)| h + m).collect(),
        }
    }

    /// `lo..hi;lo..hi`, exact to the bit.
    pub fn to_text(&self) -> String {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("{}..{}", fmt_f64(*a), fmt_f64(*b)))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Accepts `lo..hi` or `lo:hi` per axis, axes separated by `;` or `,`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for part in text.split([';', ',']) {
            let part = part.trim();
            let (a, b) = part
                .split_once("..")
                .or_else(|| part.split_once(':'))
                .ok_or_else(|| Error::parse(0, format!("bad box axis `{part}`")))?;
            let a = parse_f64(a).ok_or_else(|| Error::parse(0, format!("bad box bound `{a}`")))?;
            let b = parse_f64(b).ok_or_else(|| Error::parse(0, format!("bad box bound `{b}`")))?;
            lo.push(a);
            hi.push(b);
        }
        Domain::new(lo, hi)
    }
}

/// Uniform grid with nodes `lo + j·step`, `j = 0..shape[axis]`, on every axis.
///
/// Samples are stored with axis 0 varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    origin: Vec<f64>,
    step: f64,
    shape: Vec<usize>,
}

impl Grid {
    /// Covers `domain` with nodes from `lo` up to the last node not beyond `hi`.
    pub fn on(domain: &Domain, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::param(format!("grid step must be positive, got {step}")));
        }
        let mut shape = Vec::with_capacity(domain.dim());
        for a in 0..domain.dim() {
            let cells = (domain.extent(a) / step + 1e-9).floor();
            if !(1.0..=1e8).contains(&cells) {
                return Err(Error::param(format!(
                    "step {step} gives {cells} cells on axis {a}"
                )));
            }
            shape.push(cells as usize + 1);
        }
        let total: f64 = shape.iter().map(|&n| n as f64).product();
        if total > 2e8 {
            return Err(Error::param(format!("grid of {total:.0} nodes is too large")));
        }
        Ok(Self {
            origin: domain.lo().to_vec(),
            step,
            shape,
        })
    }

    pub fn from_parts(origin: Vec<f64>, step: f64, shape: Vec<usize>) -> Result<Self> {
        if origin.len() != shape.len() || origin.is_empty() || origin.len() > 2 {
            return Err(Error::param("grid must have 1 or 2 axes"));
        }
        if !(step.is_finite() && step > 0.0) || origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::param("grid origin and step must be finite"));
        }
        if shape.iter().any(|&n| n < 2) {
            return Err(Error::param("grid needs at least two nodes per axis"));
        }
        let total: f64 = shape.iter().map(|&n| n as f64).product();
        if total > 2e8 {
            return Err(Error::param(format!("grid of {total:.0} nodes is too large")));
        }
        Ok(Self {
            origin,
            step,
            shape,
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coord(&self, axis: usize, j: usize) -> f64 {
        self.origin[axis] + j as f64 * self.step
    }

    /// Coordinates of every node along `axis`.
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis]).map(|j| self.coord(axis, j)).collect()
    }

    /// The box spanned by the first and last nodes.
    pub fn domain(&self) -> Domain {
        Domain {
            lo: self.origin.clone(),
            hi: (0..self.dim())
                .map(|a| self.coord(a, self.shape[a] - 1))
                .collect(),
        }
    }

    /// Flat index of a multi-index (axis 0 fastest).
    pub fn index(&self, idx: &[usize]) -> usize {
        match idx.len() {
            1 => idx[0],
            _ => idx[0] + self.shape[0] * idx[1],
        }
    }

    /// Coordinates of flat node `k`.
    pub fn point(&self, k: usize) -> Vec<f64> {
        match self.dim() {
            1 => vec![self.coord(0, k)],
            _ => vec![
                self.coord(0, k % self.shape[0]),
                self.coord(1, k / self.shape[0]),
            ],
        }
    }

    /// Index of the node at or nearest to `x` along `axis`, unclamped.
    pub fn nearest(&self, axis: usize, x: f64) -> i64 {
        ((x - self.origin[axis]) / self.step).round() as i64
    }

    /// Trapezoid weights for the full grid (tensor product in 2-D).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let w1: Vec<Vec<f64>> = self
            .shape
            .iter()
            .map(|&n| {
                let mut w = vec![self.step; n];
                w[0] *= 0.5;
                w[n - 1] *= 0.5;
                w
            })
            .collect();
        match self.dim() {
            1 => w1[0].clone(),
            _ => {
                let mut out = Vec::with_capacity(self.len());
                for wy in &w1[1] {
                    for wx in &w1[0] {
                        out.push(wx * wy);
                    }
                }
                out
            }
        }
    }

    /// Same node set (up to a relative tolerance on coordinates).
    pub fn same_as(&self, other: &Grid) -> bool {
        let tol = 1e-9 * self.step;
        self.shape == other.shape
            && (self.step - other.step).abs() <= tol
            && self
                .origin
                .iter()
                .zip(&other.origin)
                .all(|(a, b)| (a - b).abs() <= tol.max(1e-12))
    }
}
