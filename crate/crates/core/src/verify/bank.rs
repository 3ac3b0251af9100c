//! Test functions `φ` sampled on a grid.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operators::{apply_t, OperatorSpec};

/// `exp(1 − 1/(1 − r²))` for `|r| < 1`, else 0; peak 1 at `r = 0`.
pub fn bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Derivative of [`bump`] with respect to `r`.
pub fn bump_derivative(r: f64) -> f64 {
    if r.abs() < 1.0 {
        let q = 1.0 - r * r;
        bump(r) * (-2.0 * r / (q * q))
    } else {
        0.0
    }
}

/// 1-D layout, as fractions of the box: (center, half-width).
const LINE_LAYOUT: [(f64, f64); 5] = [(0.2, 0.05), (0.4, 0.1), (0.5, 0.03), (0.7, 0.08), (0.85, 0.06)];

/// 2-D layout, as fractions of the box: (center x, center y, radius).
const PLANE_LAYOUT: [(f64, f64, f64); 5] = [
    (0.5, 0.5, 0.25),
    (0.3, 0.3, 0.22),
    (0.7, 0.3, 0.2),
    (0.3, 0.7, 0.2),
    (0.68, 0.68, 0.24),
];

/// Peak of `ψ` in the derivative bank, large enough that `|f(ψ)|` is O(1).
pub const DERIVATIVE_BANK_AMPLITUDE: f64 = 2.5;

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named test functions on a common grid, each vanishing on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionBank {
    grid: Grid,
    functions: Vec<TestFunction>,
}

fn on_boundary(grid: &Grid, k: usize) -> bool {
    let nx = grid.shape()[0];
    let i = k % nx;
    if i == 0 || i == nx - 1 {
        return true;
    }
    grid.dim() == 2 && {
        let j = k / nx;
        j == 0 || j == grid.shape()[1] - 1
    }
}

impl TestFunctionBank {
    pub fn new(grid: Grid, functions: Vec<TestFunction>) -> Result<Self> {
        for f in &functions {
            if f.values.len() != grid.len() {
                return Err(Error::GridMismatch(format!("test function `{}` has the wrong length", f.name)));
            }
            if f.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::param(format!("test function `{}` is not finite", f.name)));
            }
            if (0..grid.len()).any(|k| on_boundary(&grid, k) && f.values[k] != 0.0) {
                return Err(Error::param(format!("test function `{}` touches the box boundary", f.name)));
            }
        }
        Ok(Self { grid, functions })
    }

    /// Five smooth bumps of peak 1 at fixed relative positions in the box.
    pub fn bumps(grid: &Grid) -> Result<Self> {
        let dom = grid.domain();
        let functions = match grid.dim() {
            1 => LINE_LAYOUT
                .iter()
                .map(|&(fc, fw)| {
                    let (c, w) = (dom.lo()[0] + fc * dom.extent(0), fw * dom.extent(0));
                    TestFunction {
                        name: format!("bump(c={c},w={w})"),
                        values: grid.axis(0).iter().map(|&x| bump((x - c) / w)).collect(),
                    }
                })
                .collect(),
            _ => PLANE_LAYOUT
                .iter()
                .map(|&(fx, fy, fr)| {
                    let cx = dom.lo()[0] + fx * dom.extent(0);
                    let cy = dom.lo()[1] + fy * dom.extent(1);
                    let r = fr * dom.extent(0).min(dom.extent(1));
                    TestFunction {
                        name: format!("bump(c=({cx},{cy}),r={r})"),
                        values: (0..grid.len())
                            .map(|k| {
                                let p = grid.point(k);
                                bump(((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt() / r)
                            })
                            .collect(),
                    }
                })
                .collect(),
        };
        Self::new(grid.clone(), functions)
    }

    /// `φ = −ψ′` for the five 1-D bumps `ψ` scaled by
    /// [`DERIVATIVE_BANK_AMPLITUDE`]. For `L = D` the left inverse maps these
    /// back onto compactly supported `ψ`, so no mass leaks past the lower
    /// boundary.
    pub fn derivative_bumps(grid: &Grid) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::param("derivative bank is one-dimensional"));
        }
        let dom = grid.domain();
        let functions = LINE_LAYOUT
            .iter()
            .map(|&(fc, fw)| {
                let (c, w) = (dom.lo()[0] + fc * dom.extent(0), fw * dom.extent(0));
                TestFunction {
                    name: format!("dbump(c={c},w={w})"),
                    values: grid
                        .axis(0)
                        .iter()
                        .map(|&x| -DERIVATIVE_BANK_AMPLITUDE * bump_derivative((x - c) / w) / w)
                        .collect(),
                }
            })
            .collect();
        Self::new(grid.clone(), functions)
    }

    /// Indicator of `[a, b]` on a 1-D grid.
    pub fn indicator(grid: &Grid, a: f64, b: f64) -> Result<TestFunction> {
        if grid.dim() != 1 || a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
            return Err(Error::param("indicator needs a 1-D grid and a < b"));
        }
        Ok(TestFunction {
            name: format!("indicator({a},{b})"),
            values: grid.axis(0).iter().map(|&x| if x >= a && x <= b { 1.0 } else { 0.0 }).collect(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn functions(&self) -> &[TestFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `Tφ` of every function for `op`.
    pub fn transformed(&self, op: &OperatorSpec) -> Result<Vec<Vec<f64>>> {
        self.functions.iter().map(|f| apply_t(op, &self.grid, &f.values)).collect()
    }
}
