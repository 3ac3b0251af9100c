//! Spline-admissible whitening operators.
//!
//! | descriptor                         | operator            | Green's function           |
//! |------------------------------------|---------------------|----------------------------|
//! | `operator=D n=N`                   | `Dᴺ`                | `x^{N−1} u(x) / (N−1)!`    |
//! | `operator=DaI alpha=α`             | `D + αI`            | `e^{−αx} u(x)`             |
//! | `operator=DxDy`                    | `D_x D_y`           | `u(x) u(y)`                |
//! | `operator=DaIxDaIy alpha=α`        | `(D_x+αI)(D_y+αI)`  | `e^{−α(x+y)} u(x) u(y)`    |
//! | `operator=frac_laplacian gamma=γ`  | `(−Δ)^{γ/2}`        | spectral inversion only    |
//!
//! The Heaviside convention is `u(0) = 1`.

mod discrete;
pub mod spectral;

pub use discrete::{apply_adjoint, apply_l_discrete, apply_t, AdjointInverse, MIN_SUPPORT_SAMPLES};

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid};
use crate::kv::{fmt_f64, KvBlock};

/// Tail level `e^{−α·margin}` that sizes the margin of exponential kernels.
pub const MARGIN_TOL: f64 = 1e-8;

/// Spectral synthesis pads every side by at least this fraction of the window.
pub const SPECTRAL_MARGIN_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSpec {
    /// `Dᴺ` on the line.
    Derivative { order: u32 },
    /// `D + αI` on the line.
    DerivativeAlpha { alpha: f64 },
    /// `D_{x_1} ⋯ D_{x_d}`.
    SeparableD { dim: usize },
    /// `(D_x + αI)(D_y + αI)` in the plane.
    SeparableDAlpha { alpha: f64 },
    /// `(−Δ)^{γ/2}` in dimension `dim`.
    FractionalLaplacian { gamma: f64, dim: usize },
}

/// How `L⁻¹` is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inversion {
    ClosedForm,
    Spectral,
}

/// One-dimensional causal factor of a closed-form operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CausalKernel {
    /// `x^{N−1} u(x) / (N−1)!`
    Power(u32),
    /// `e^{−αx} u(x)`
    Exp(f64),
}

impl CausalKernel {
    pub(crate) fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            CausalKernel::Power(1) => 1.0,
            CausalKernel::Power(n) => {
                let k = n - 1;
                let fact: f64 = (1..=k).map(f64::from).product();
                x.powi(k as i32) / fact
            }
            CausalKernel::Exp(alpha) => (-alpha * x).exp(),
        }
    }
}

/// Where the noise driving a windowed realization must be sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseLayout {
    /// Extension below `lo` on each axis.
    pub left: Vec<f64>,
    /// Extension above `hi` on each axis.
    pub right: Vec<f64>,
    /// Periodic grid for the spectral path.
    pub spectral: Option<SpectralLayout>,
}

/// The window grid sits at node offset `left_cells` inside a periodic grid of
/// `shape` nodes, whose torus is the noise domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLayout {
    pub left_cells: Vec<usize>,
    pub shape: Vec<usize>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {v}")))
    }
}

impl OperatorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OperatorSpec::Derivative { order } if order == 0 || order > 16 => {
                Err(Error::param(format!("derivative order must be in 1..=16, got {order}")))
            }
            OperatorSpec::SeparableD { dim } if dim == 0 || dim > 2 => {
                Err(Error::param(format!("separable operators support d = 1, 2; got {dim}")))
            }
            OperatorSpec::FractionalLaplacian { dim, .. } if dim == 0 || dim > 2 => {
                Err(Error::param(format!("fractional Laplacian supports d = 1, 2; got {dim}")))
            }
            OperatorSpec::DerivativeAlpha { alpha } | OperatorSpec::SeparableDAlpha { alpha } => {
                positive("alpha", alpha)
            }
            OperatorSpec::FractionalLaplacian { gamma, .. } => positive("gamma", gamma),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            OperatorSpec::Derivative { .. } | OperatorSpec::DerivativeAlpha { .. } => 1,
            OperatorSpec::SeparableD { dim } | OperatorSpec::FractionalLaplacian { dim, .. } => dim,
            OperatorSpec::SeparableDAlpha { .. } => 2,
        }
    }

    pub fn inversion(&self) -> Inversion {
        match self {
            OperatorSpec::FractionalLaplacian { .. } => Inversion::Spectral,
            _ => Inversion::ClosedForm,
        }
    }

    pub fn is_causal(&self) -> bool {
        self.inversion() == Inversion::ClosedForm
    }

    /// Pure-derivative families: the null space contains the constants, and
    /// realizations are pinned to vanish on the lower boundary.
    pub fn is_pinned(&self) -> bool {
        matches!(self, OperatorSpec::Derivative { .. } | OperatorSpec::SeparableD { .. })
    }

    /// The per-axis causal factors of a closed-form operator.
    pub(crate) fn kernels(&self) -> Option<Vec<CausalKernel>> {
        match *self {
            OperatorSpec::Derivative { order } => Some(vec![CausalKernel::Power(order)]),
            OperatorSpec::DerivativeAlpha { alpha } => Some(vec![CausalKernel::Exp(alpha)]),
            OperatorSpec::SeparableD { dim } => Some(vec![CausalKernel::Power(1); dim]),
            OperatorSpec::SeparableDAlpha { alpha } => Some(vec![CausalKernel::Exp(alpha); 2]),
            OperatorSpec::FractionalLaplacian { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorSpec::Derivative { .. } => "D",
            OperatorSpec::DerivativeAlpha { .. } => "DaI",
            OperatorSpec::SeparableD { dim: 1 } => "D",
            OperatorSpec::SeparableD { .. } => "DxDy",
            OperatorSpec::SeparableDAlpha { .. } => "DaIxDaIy",
            OperatorSpec::FractionalLaplacian { .. } => "frac_laplacian",
        }
    }

    /// Green's function `ρ_L(x)` of a closed-form operator.
    pub fn green(&self, x: &[f64]) -> Result<f64> {
        let kernels = self
            .kernels()
            .ok_or_else(|| Error::UnsupportedClosedForm(self.name().to_string()))?;
        if x.len() != kernels.len() {
            return Err(Error::param(format!(
                "point has {} coordinates, operator acts in dimension {}",
                x.len(),
                kernels.len()
            )));
        }
        Ok(kernels.iter().zip(x).map(|(k, &xi)| k.eval(xi)).product())
    }

    /// Smallest margin (per side) that the synthesis of a window needs.
    pub fn required_margin(&self, window: &Domain) -> f64 {
        match *self {
            OperatorSpec::Derivative { .. } | OperatorSpec::SeparableD { .. } => 0.0,
            OperatorSpec::DerivativeAlpha { alpha } | OperatorSpec::SeparableDAlpha { alpha } => {
                (1.0 / MARGIN_TOL).ln() / alpha
            }
            OperatorSpec::FractionalLaplacian { .. } => {
                let widest = (0..window.dim()).map(|a| window.extent(a)).fold(0.0, f64::max);
                SPECTRAL_MARGIN_FRACTION * widest
            }
        }
    }

    /// Noise domain for realizations on `grid`; `declared` defaults to
    /// [`required_margin`](Self::required_margin).
    pub fn noise_layout(&self, grid: &Grid, declared: Option<f64>) -> Result<NoiseLayout> {
        self.validate()?;
        if grid.dim() != self.dim() {
            return Err(Error::GridMismatch(format!(
                "operator {} acts in dimension {}, grid has {}",
                self.name(),
                self.dim(),
                grid.dim()
            )));
        }
        let window = grid.domain();
        let required = self.required_margin(&window);
        let margin = declared.unwrap_or(required);
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::param(format!("margin must be nonnegative, got {margin}")));
        }
        if margin < required * (1.0 - 1e-12) {
            return Err(Error::MarginTooSmall {
                operator: self.name().to_string(),
                declared: margin,
                required,
            });
        }
        let d = grid.dim();
        let h = grid.step();
        match self.inversion() {
            Inversion::ClosedForm => Ok(NoiseLayout {
                left: vec![margin; d],
                right: vec![0.0; d],
                spectral: None,
            }),
            Inversion::Spectral => {
                let mut left_cells = Vec::with_capacity(d);
                let mut shape = Vec::with_capacity(d);
                let mut left = Vec::with_capacity(d);
                let mut right = Vec::with_capacity(d);
                for a in 0..d {
                    let n = grid.shape()[a];
                    let cells = (margin / h - 1e-9).ceil().max(0.0) as usize;
                    let m = spectral::fast_len(n + 2 * cells);
                    let right_cells = m - n - cells;
                    left_cells.push(cells);
                    shape.push(m);
                    left.push(cells as f64 * h + 0.5 * h);
                    right.push(right_cells as f64 * h + 0.5 * h);
                }
                Ok(NoiseLayout {
                    left,
                    right,
                    spectral: Some(SpectralLayout { left_cells, shape }),
                })
            }
        }
    }

    /// The box the noise must cover so that `grid` can be synthesized.
    pub fn noise_domain(&self, grid: &Grid, declared: Option<f64>) -> Result<Domain> {
        let layout = self.noise_layout(grid, declared)?;
        Ok(grid.domain().enlarged(&layout.left, &layout.right))
    }

    pub fn write_kv(&self, b: &mut KvBlock) {
        b.set("operator", self.name());
        match *self {
            OperatorSpec::Derivative { order } => b.set("n", order.to_string()),
            OperatorSpec::DerivativeAlpha { alpha } | OperatorSpec::SeparableDAlpha { alpha } => {
                b.set("alpha", fmt_f64(alpha))
            }
            OperatorSpec::FractionalLaplacian { gamma, dim } => {
                b.set("gamma", fmt_f64(gamma));
                b.set("dim", dim.to_string());
            }
            OperatorSpec::SeparableD { .. } => {}
        }
    }

    pub fn to_kv(&self) -> KvBlock {
        let mut b = KvBlock::new();
        self.write_kv(&mut b);
        b
    }

    /// Reads `operator=` and its parameters; `dim` defaults to 1 for the
    /// fractional Laplacian.
    pub fn from_kv(b: &KvBlock) -> Result<Self> {
        let op = match b.require("operator")? {
            "D" => OperatorSpec::Derivative {
                order: b.u64("n")?.unwrap_or(1).min(u32::MAX as u64) as u32,
            },
            "DaI" => OperatorSpec::DerivativeAlpha {
                alpha: b.require_f64("alpha")?,
            },
            "DxDy" => OperatorSpec::SeparableD { dim: 2 },
            "DaIxDaIy" => OperatorSpec::SeparableDAlpha {
                alpha: b.require_f64("alpha")?,
            },
            "frac_laplacian" => OperatorSpec::FractionalLaplacian {
                gamma: b.require_f64("gamma")?,
                dim: b.u64("dim")?.unwrap_or(1).min(64) as usize,
            },
            name @ ("frac_derivative" | "Dgamma" | "polyharmonic") => {
                return Err(Error::UnsupportedOperator(
                    name.to_string(),
                    "listed in the catalog but not simulated".to_string(),
                ))
            }
            other => return Err(Error::parse(0, format!("unknown operator `{other}`"))),
        };
        op.validate()?;
        Ok(op)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KvBlock::parse(text)?)
    }

    /// Single-token form for file headers: `DaI:alpha=0.1`.
    pub fn to_compact(&self) -> String {
        let mut kv = self.to_kv();
        kv.remove("operator");
        let params = kv.to_inline().replace(' ', ",");
        if params.is_empty() {
            self.name().to_string()
        } else {
            format!("{}:{}", self.name(), params)
        }
    }

    pub fn parse_compact(token: &str) -> Result<Self> {
        let (name, params) = token.split_once(':').unwrap_or((token, ""));
        let text = format!("operator={} {}", name, params.replace(',', " "));
        Self::parse(&text)
    }
}
