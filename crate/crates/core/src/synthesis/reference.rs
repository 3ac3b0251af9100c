//! Exact grid samples of a Lévy process (the `L = D` limit).

use super::{GridRealization, Provenance};
use crate::error::{Error, Result};
use crate::exponents::LevyExponent;
use crate::grid::Grid;
use crate::noise::{sample_jump, sample_poisson, RngStream};
use crate::operators::OperatorSpec;

fn is_first_derivative(op: &OperatorSpec) -> bool {
    matches!(
        op,
        OperatorSpec::Derivative { order: 1 } | OperatorSpec::SeparableD { dim: 1 }
    )
}

/// Cumulative sum of i.i.d. increments with characteristic function
/// `e^{h·f(ξ)}`, starting from `s(lo) = 0`.
///
/// Gaussian and Cauchy increments are exact stable draws, Laplace increments
/// are variance-gamma, and compound-Poisson increments add a Poisson number
/// of jumps.
pub fn reference_levy_path(
    family: &LevyExponent,
    op: &OperatorSpec,
    grid: &Grid,
    rng: &mut RngStream,
) -> Result<GridRealization> {
    if !is_first_derivative(op) || grid.dim() != 1 {
        return Err(Error::UnsupportedReference(op.name().to_string()));
    }
    family.validate()?;
    let h = grid.step();
    let n = grid.len();
    let mut samples = Vec::with_capacity(n);
    let mut s = 0.0;
    samples.push(s);
    match family.impulsive() {
        Some((rate, jumps)) => {
            for _ in 1..n {
                let count = sample_poisson(rate * h, rng);
                for _ in 0..count {
                    s += sample_jump(&jumps, rng);
                }
                samples.push(s);
            }
        }
        None => {
            let law = family.increment_law(h)?;
            for _ in 1..n {
                s += sample_jump(&law, rng);
                samples.push(s);
            }
        }
    }
    GridRealization::new(
        grid.clone(),
        samples,
        Provenance::Reference {
            family: family.clone(),
            seed: rng.seed(),
            stream: rng.index(),
        },
        *op,
    )
}
