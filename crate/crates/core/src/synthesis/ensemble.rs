//! Realization generators and order-deterministic parallel ensembles.

use rayon::prelude::*;

use super::{reference_levy_path, synthesize_spline, GridRealization};
use crate::error::{Error, Result};
use crate::exponents::{JumpLaw, LevyExponent};
use crate::grid::Grid;
use crate::noise::{merge_margin, sample_impulse_field, ImpulseField, RngStream};
use crate::operators::OperatorSpec;

/// Compound-Poisson noise pushed through `L⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSpec {
    pub op: OperatorSpec,
    pub grid: Grid,
    pub rate: f64,
    pub jumps: JumpLaw,
    /// Margin per side; `None` uses the operator's own rule.
    pub margin: Option<f64>,
}

impl PoissonSpec {
    /// Noise on the window, then the margin drawn from derived streams, so
    /// the impulses inside the window do not depend on the margin.
    pub fn field(&self, seed: u64, stream: u64) -> Result<ImpulseField> {
        let layout = self.op.noise_layout(&self.grid, self.margin)?;
        let window = self.grid.domain();
        let mut rng = RngStream::new(seed, stream);
        let inner = sample_impulse_field(&window, self.rate, &self.jumps, &mut rng)?;
        merge_margin(&inner, &layout.left, &layout.right, &self.jumps)
    }

    pub fn realize_with_field(&self, seed: u64, stream: u64) -> Result<(ImpulseField, GridRealization)> {
        let field = self.field(seed, stream)?;
        let s = synthesize_spline(&field, &self.op, &self.grid)?;
        Ok((field, s))
    }
}

/// Anything that produces one realization per `(seed, stream)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Poisson(PoissonSpec),
    Reference {
        family: LevyExponent,
        op: OperatorSpec,
        grid: Grid,
    },
}

impl Generator {
    pub fn grid(&self) -> &Grid {
        match self {
            Generator::Poisson(p) => &p.grid,
            Generator::Reference { grid, .. } => grid,
        }
    }

    pub fn realize(&self, seed: u64, stream: u64) -> Result<GridRealization> {
        match self {
            Generator::Poisson(p) => p.realize_with_field(seed, stream).map(|(_, s)| s),
            Generator::Reference { family, op, grid } => {
                reference_levy_path(family, op, grid, &mut RngStream::new(seed, stream))
            }
        }
    }
}

/// Realizations `0..m` (stream index = position), reduced by `f` in
/// parallel; results come back in stream order.
pub fn ensemble_map<T, F>(generator: &Generator, m: u64, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, GridRealization) -> T + Sync,
{
    if m == 0 {
        return Err(Error::param("ensemble size must be at least 1"));
    }
    (0..m)
        .into_par_iter()
        .map(|i| generator.realize(seed, i).map(|s| f(i, s)))
        .collect()
}

pub fn ensemble(generator: &Generator, m: u64, seed: u64) -> Result<Vec<GridRealization>> {
    ensemble_map(generator, m, seed, |_, s| s)
}
