//! Impulsive noise `w = Σ aₙ δ(· − xₙ)` restricted to a box.

mod csv;
mod rng;
mod variates;

pub use rng::RngStream;
pub use variates::{sample_jump, sample_poisson, INVERSION_LIMIT};

use crate::error::{Error, Result};
use crate::exponents::JumpLaw;
use crate::grid::Domain;

/// Largest expected impulse count a single field may request.
pub const MAX_EXPECTED_IMPULSES: f64 = 1e9;

/// A realization of compound-Poisson noise on `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseField {
    domain: Domain,
    rate: f64,
    seed: u64,
    stream: u64,
    /// Flattened locations, `dim` coordinates per impulse.
    positions: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl ImpulseField {
    /// Builds a field from explicit impulses; every location must lie in `domain`.
    pub fn from_impulses(
        domain: Domain,
        rate: f64,
        seed: u64,
        stream: u64,
        impulses: &[(Vec<f64>, f64)],
    ) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::param(format!("rate must be positive, got {rate}")));
        }
        let dim = domain.dim();
        let mut positions = Vec::with_capacity(impulses.len() * dim);
        let mut amplitudes = Vec::with_capacity(impulses.len());
        for (x, a) in impulses {
            if !domain.contains(x) {
                return Err(Error::param(format!("impulse at {x:?} outside box")));
            }
            if !a.is_finite() {
                return Err(Error::param("non-finite amplitude"));
            }
            positions.extend_from_slice(x);
            amplitudes.push(*a);
        }
        Ok(Self {
            domain,
            rate,
            seed,
            stream,
            positions,
            amplitudes,
        })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn location(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.positions[k * d..(k + 1) * d]
    }

    pub fn amplitude(&self, k: usize) -> f64 {
        self.amplitudes[k]
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.positions
            .chunks_exact(self.dim())
            .zip(self.amplitudes.iter().copied())
    }

    /// Number of impulses inside `region` (closed box).
    pub fn count_in(&self, region: &Domain) -> usize {
        self.iter().filter(|(x, _)| region.contains(x)).count()
    }

    fn push_sampled(&mut self, region: &Domain, jumps: &JumpLaw, rng: &mut RngStream) -> Result<()> {
        let mean = self.rate * region.volume();
        if mean > MAX_EXPECTED_IMPULSES {
            return Err(Error::TooManyImpulses {
                expected: mean,
                limit: MAX_EXPECTED_IMPULSES,
            });
        }
        let n = sample_poisson(mean, rng) as usize;
        let dim = region.dim();
        let start = self.amplitudes.len();
        self.positions.reserve(n * dim);
        self.amplitudes.reserve(n);
        for _ in 0..n {
            for a in 0..dim {
                let u = rng.uniform();
                let x = region.lo()[a] + u * region.extent(a);
                // u < 1 can still round up to hi; keep the point in the box
                self.positions.push(x.min(region.hi()[a]));
            }
        }
        for _ in 0..n {
            self.amplitudes.push(sample_jump(jumps, rng));
        }
        debug_assert_eq!(self.amplitudes.len(), start + n);
        Ok(())
    }
}

/// Draws `N ~ Poisson(rate·vol)`, then `N` uniform locations, then `N`
/// amplitudes, all from `rng`.
pub fn sample_impulse_field(
    domain: &Domain,
    rate: f64,
    jumps: &JumpLaw,
    rng: &mut RngStream,
) -> Result<ImpulseField> {
    jumps.validate()?;
    let mut field = ImpulseField::from_impulses(domain.clone(), rate, rng.seed(), rng.index(), &[])?;
    field.push_sampled(domain, jumps, rng)?;
    Ok(field)
}

/// Extends `field` to `domain` grown by `left[a]` below and `right[a]` above
/// each axis, drawing the impulses of the added region independently.
///
/// The original impulses are kept, so the field restricted to its old box is
/// unchanged; the added region is tiled into disjoint boxes, each sampled
/// from its own stream derived from the field's `(seed, stream)`.
pub fn merge_margin(
    field: &ImpulseField,
    left: &[f64],
    right: &[f64],
    jumps: &JumpLaw,
) -> Result<ImpulseField> {
    let dim = field.dim();
    if left.len() != dim || right.len() != dim {
        return Err(Error::param("margin must have one entry per axis"));
    }
    if left.iter().chain(right).any(|m| !(m.is_finite() && *m >= 0.0)) {
        return Err(Error::param("margins must be finite and nonnegative"));
    }
    jumps.validate()?;
    let inner = field.domain().clone();
    let outer = inner.enlarged(left, right);
    let mut out = field.clone();
    out.domain = outer.clone();

    // Slabs: along axis a, the parts below and above the inner box, spanning
    // the inner range on axes < a and the outer range on axes > a.
    let base = RngStream::new(field.seed(), field.stream());
    let mut tag = 0u64;
    for a in 0..dim {
        for (side, width) in [(0usize, left[a]), (1usize, right[a])] {
            tag += 1;
            if width <= 0.0 {
                continue;
            }
            let mut lo = Vec::with_capacity(dim);
            let mut hi = Vec::with_capacity(dim);
            for b in 0..dim {
                if b == a {
                    if side == 0 {
                        lo.push(outer.lo()[b]);
                        hi.push(inner.lo()[b]);
                    } else {
                        lo.push(inner.hi()[b]);
                        hi.push(outer.hi()[b]);
                    }
                } else if b < a {
                    lo.push(inner.lo()[b]);
                    hi.push(inner.hi()[b]);
                } else {
                    lo.push(outer.lo()[b]);
                    hi.push(outer.hi()[b]);
                }
            }
            let slab = Domain::new(lo, hi)?;
            let mut rng = base.derive(tag);
            out.push_sampled(&slab, jumps, &mut rng)?;
        }
    }
    Ok(out)
}
