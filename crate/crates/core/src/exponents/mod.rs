//! Lévy exponents of the white noises the toolkit simulates.
//!
//! Every exponent here is symmetric with zero drift, so `f(ξ)` is real and
//! non-positive; values are still returned as [`Complex64`] because that is
//! what characteristic functionals consume.

mod bound;
mod descriptor;

pub use bound::{certify_bound, contraction_holds, log_grid, ExponentBoundParams};

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Anything with a Lévy exponent `ξ ↦ f(ξ)`.
pub trait Exponent {
    fn eval(&self, xi: f64) -> Complex64;
}

/// `e^z − 1` without cancellation for small `z`.
pub(crate) fn exp_m1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let re = z.re.exp_m1() * c - 2.0 * half * half;
    let im = z.re.exp() * s;
    Complex64::new(re, im)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Law of the amplitudes of an impulsive noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLaw {
    /// Centered normal with the given variance.
    Gaussian { variance: f64 },
    /// Density `e^{-|t|/b} / 2b`.
    Laplace { scale: f64 },
    /// Density `s / (π (s² + t²))`.
    Cauchy { scale: f64 },
    /// Difference of two independent `Gamma(shape, scale)` variables.
    ///
    /// This is the law with characteristic function `(1 + scale²ξ²)^{-shape}`,
    /// i.e. the Laplace law observed at time `shape`.
    VarianceGamma { shape: f64, scale: f64 },
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpLaw::Gaussian { variance } => positive("jump variance", variance),
            JumpLaw::Laplace { scale } | JumpLaw::Cauchy { scale } => positive("jump scale", scale),
            JumpLaw::VarianceGamma { shape, scale } => {
                positive("jump shape", shape)?;
                positive("jump scale", scale)
            }
        }
    }

    /// Characteristic function `P̂(ξ) = E[e^{iξa}]`.
    pub fn cf(&self, xi: f64) -> Complex64 {
        let v = match *self {
            JumpLaw::Gaussian { variance } => (-0.5 * variance * xi * xi).exp(),
            JumpLaw::Laplace { scale } => 1.0 / (1.0 + scale * scale * xi * xi),
            JumpLaw::Cauchy { scale } => (-scale * xi.abs()).exp(),
            JumpLaw::VarianceGamma { shape, scale } => {
                (-shape * (scale * scale * xi * xi).ln_1p()).exp()
            }
        };
        Complex64::new(v, 0.0)
    }

    /// Some `ε > 0` with `∫|t|^ε P(dt) < ∞`.
    pub fn finite_moment_order(&self) -> f64 {
        match self {
            JumpLaw::Cauchy { .. } => 0.5,
            _ => 2.0,
        }
    }

    /// `E[a²]`, infinite for Cauchy.
    pub fn second_moment(&self) -> f64 {
        match *self {
            JumpLaw::Gaussian { variance } => variance,
            JumpLaw::Laplace { scale } => 2.0 * scale * scale,
            JumpLaw::Cauchy { .. } => f64::INFINITY,
            JumpLaw::VarianceGamma { shape, scale } => 2.0 * shape * scale * scale,
        }
    }

    /// Probability density, where it has a simple closed form.
    pub fn density(&self, t: f64) -> Option<f64> {
        match *self {
            JumpLaw::Gaussian { variance } => {
                Some((-0.5 * t * t / variance).exp() / (2.0 * PI * variance).sqrt())
            }
            JumpLaw::Laplace { scale } => Some((-t.abs() / scale).exp() / (2.0 * scale)),
            JumpLaw::Cauchy { scale } => Some(scale / (PI * (scale * scale + t * t))),
            JumpLaw::VarianceGamma { .. } => None,
        }
    }
}

/// The catalog of white-noise exponents.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyExponent {
    /// `−σ²ξ²/2`
    Gaussian { sigma2: f64 },
    /// `−log(1 + σ²ξ²/2)`
    Laplace { sigma2: f64 },
    /// `−c|ξ|`
    Cauchy { c: f64 },
    /// `λ(P̂(ξ) − 1)`
    CompoundPoisson { rate: f64, jumps: JumpLaw },
}

impl LevyExponent {
    pub fn gaussian(sigma2: f64) -> Result<Self> {
        positive("sigma2", sigma2)?;
        Ok(LevyExponent::Gaussian { sigma2 })
    }

    pub fn laplace(sigma2: f64) -> Result<Self> {
        positive("sigma2", sigma2)?;
        Ok(LevyExponent::Laplace { sigma2 })
    }

    pub fn cauchy(c: f64) -> Result<Self> {
        positive("c", c)?;
        Ok(LevyExponent::Cauchy { c })
    }

    pub fn compound_poisson(rate: f64, jumps: JumpLaw) -> Result<Self> {
        positive("rate", rate)?;
        jumps.validate()?;
        Ok(LevyExponent::CompoundPoisson { rate, jumps })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyExponent::Gaussian { sigma2 } | LevyExponent::Laplace { sigma2 } => {
                positive("sigma2", *sigma2)
            }
            LevyExponent::Cauchy { c } => positive("c", *c),
            LevyExponent::CompoundPoisson { rate, jumps } => {
                positive("rate", *rate)?;
                jumps.validate()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LevyExponent::Gaussian { .. } => "gaussian",
            LevyExponent::Laplace { .. } => "laplace",
            LevyExponent::Cauchy { .. } => "cauchy",
            LevyExponent::CompoundPoisson { .. } => "compound_poisson",
        }
    }

    /// Whether the noise has finite variance (moment statistics make sense).
    pub fn has_finite_variance(&self) -> bool {
        match self {
            LevyExponent::Cauchy { .. } => false,
            LevyExponent::CompoundPoisson { jumps, .. } => jumps.second_moment().is_finite(),
            _ => true,
        }
    }

    /// `f_n(ξ) = n(e^{f(ξ)/n} − 1)`: compound-Poisson noise of rate `n`
    /// whose jumps have exponent `f/n`.
    pub fn poissonize(&self, n: f64) -> Result<PoissonizedExponent> {
        positive("poissonization order n", n)?;
        PoissonizedExponent::new(self.clone(), n, 1.0 / n)
    }

    /// The compound-Poisson companions listed next to each family in the
    /// usual noise table: Gauss-Poisson, Laplace-Poisson, Cauchy-Poisson.
    ///
    /// They coincide with [`poissonize`](Self::poissonize) for the Gaussian
    /// and Cauchy families. Laplace-Poisson uses Laplace jumps of variance
    /// `σ²/λ`, whose exponent `λ(1/(1 + σ²ξ²/2λ) − 1)` tends to the *Gaussian*
    /// exponent as `λ → ∞`; use `poissonize` to approach the Laplace noise.
    pub fn table_poisson(&self, rate: f64) -> Result<LevyExponent> {
        positive("rate", rate)?;
        let jumps = match *self {
            LevyExponent::Gaussian { sigma2 } => JumpLaw::Gaussian {
                variance: sigma2 / rate,
            },
            LevyExponent::Laplace { sigma2 } => JumpLaw::Laplace {
                scale: (sigma2 / (2.0 * rate)).sqrt(),
            },
            LevyExponent::Cauchy { c } => JumpLaw::Cauchy { scale: c / rate },
            LevyExponent::CompoundPoisson { .. } => {
                return Err(Error::param("table companion of a compound-Poisson exponent"))
            }
        };
        LevyExponent::compound_poisson(rate, jumps)
    }

    /// Exponent at time `t`, i.e. `t·f`, as a jump law (the law of an
    /// increment of the Lévy process over a step of length `t`).
    pub fn increment_law(&self, t: f64) -> Result<JumpLaw> {
        positive("time", t)?;
        match *self {
            LevyExponent::Gaussian { sigma2 } => Ok(JumpLaw::Gaussian {
                variance: t * sigma2,
            }),
            LevyExponent::Laplace { sigma2 } => Ok(JumpLaw::VarianceGamma {
                shape: t,
                scale: (0.5 * sigma2).sqrt(),
            }),
            LevyExponent::Cauchy { c } => Ok(JumpLaw::Cauchy { scale: t * c }),
            LevyExponent::CompoundPoisson { .. } => Err(Error::param(
                "increments of a compound-Poisson exponent are not a catalog law",
            )),
        }
    }

    /// Rate and jump law, when this exponent is impulsive.
    pub fn impulsive(&self) -> Option<(f64, JumpLaw)> {
        match *self {
            LevyExponent::CompoundPoisson { rate, jumps } => Some((rate, jumps)),
            _ => None,
        }
    }

    pub fn triplet(&self) -> LevyTriplet {
        match *self {
            LevyExponent::Gaussian { sigma2 } => LevyTriplet {
                drift: 0.0,
                gaussian_variance: sigma2,
                measure: LevyMeasure::Zero,
            },
            LevyExponent::Laplace { sigma2 } => LevyTriplet {
                drift: 0.0,
                gaussian_variance: 0.0,
                measure: LevyMeasure::Laplace { sigma2 },
            },
            LevyExponent::Cauchy { c } => LevyTriplet {
                drift: 0.0,
                gaussian_variance: 0.0,
                measure: LevyMeasure::Cauchy { c },
            },
            LevyExponent::CompoundPoisson { rate, jumps } => LevyTriplet {
                // rate · ∫_{|t|<1} t P(dt), zero for the symmetric jump laws
                drift: 0.0,
                gaussian_variance: 0.0,
                measure: LevyMeasure::Scaled { rate, jumps },
            },
        }
    }
}

impl Exponent for LevyExponent {
    fn eval(&self, xi: f64) -> Complex64 {
        let v = match *self {
            LevyExponent::Gaussian { sigma2 } => -0.5 * sigma2 * xi * xi,
            LevyExponent::Laplace { sigma2 } => -(0.5 * sigma2 * xi * xi).ln_1p(),
            LevyExponent::Cauchy { c } => -c * xi.abs(),
            LevyExponent::CompoundPoisson { rate, jumps } => {
                return (jumps.cf(xi) - 1.0) * rate;
            }
        };
        Complex64::new(v, 0.0)
    }
}

/// `f_{λ,τ}(ξ) = λ(e^{τ f(ξ)} − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonizedExponent {
    base: LevyExponent,
    rate: f64,
    tau: f64,
}

impl PoissonizedExponent {
    pub fn new(base: LevyExponent, rate: f64, tau: f64) -> Result<Self> {
        base.validate()?;
        positive("rate", rate)?;
        positive("tau", tau)?;
        Ok(Self { base, rate, tau })
    }

    pub fn base(&self) -> &LevyExponent {
        &self.base
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The law with characteristic function `e^{τ f}`.
    pub fn jump_law(&self) -> Result<JumpLaw> {
        self.base.increment_law(self.tau)
    }

    /// The same noise as an explicit compound-Poisson exponent.
    pub fn as_compound_poisson(&self) -> Result<LevyExponent> {
        LevyExponent::compound_poisson(self.rate, self.jump_law()?)
    }

    /// `(λ μ_P, 0, λ P)` with `P` the jump law.
    pub fn triplet(&self) -> Result<LevyTriplet> {
        Ok(LevyTriplet {
            drift: 0.0,
            gaussian_variance: 0.0,
            measure: LevyMeasure::Scaled {
                rate: self.rate,
                jumps: self.jump_law()?,
            },
        })
    }
}

impl Exponent for PoissonizedExponent {
    fn eval(&self, xi: f64) -> Complex64 {
        exp_m1(self.base.eval(xi) * self.tau) * self.rate
    }
}

/// Lévy measures of the catalog, named rather than integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevyMeasure {
    Zero,
    /// `e^{−√2|t|/σ} / |t| dt`
    Laplace { sigma2: f64 },
    /// `c / (π t²) dt`
    Cauchy { c: f64 },
    /// `λ P`
    Scaled { rate: f64, jumps: JumpLaw },
}

impl LevyMeasure {
    /// Density of the measure at `t ≠ 0`, where closed form is available.
    pub fn density(&self, t: f64) -> Option<f64> {
        if t == 0.0 {
            return Some(0.0);
        }
        match *self {
            LevyMeasure::Zero => Some(0.0),
            LevyMeasure::Laplace { sigma2 } => {
                Some((-SQRT_2 * t.abs() / sigma2.sqrt()).exp() / t.abs())
            }
            LevyMeasure::Cauchy { c } => Some(c / (PI * t * t)),
            LevyMeasure::Scaled { rate, jumps } => jumps.density(t).map(|p| rate * p),
        }
    }

    /// `V({0})`; zero for every measure of the catalog.
    pub fn mass_at_zero(&self) -> f64 {
        0.0
    }

    /// `∫ min(1, t²) V(dt) < ∞`. Every catalog family satisfies it: the
    /// Laplace density is `O(1/|t|)` at the origin and exponentially small in
    /// the tails, the Cauchy density is `O(1/t²)` in the tails, and `λP` is a
    /// finite measure.
    pub fn is_levy_measure(&self) -> bool {
        true
    }
}

/// `(μ, σ², V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyTriplet {
    pub drift: f64,
    pub gaussian_variance: f64,
    pub measure: LevyMeasure,
}
