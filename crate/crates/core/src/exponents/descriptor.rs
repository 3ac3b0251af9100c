//! `key=value` descriptors for exponents and jump laws.
//!
//! ```text
//! family=gaussian sigma2=1
//! family=compound_poisson rate=3 jumps=laplace scale=0.5
//! family=poissonized base=cauchy c=1 rate=4 tau=0.25
//! ```

use super::{JumpLaw, LevyExponent, PoissonizedExponent};
use crate::error::{Error, Result};
use crate::kv::{fmt_f64, KvBlock};

fn req(b: &KvBlock, key: &str) -> Result<f64> {
    b.require_f64(key)
}

impl JumpLaw {
    pub fn write_kv(&self, b: &mut KvBlock) {
        match *self {
            JumpLaw::Gaussian { variance } => {
                b.set("jumps", "gaussian");
                b.set("variance", fmt_f64(variance));
            }
            JumpLaw::Laplace { scale } => {
                b.set("jumps", "laplace");
                b.set("scale", fmt_f64(scale));
            }
            JumpLaw::Cauchy { scale } => {
                b.set("jumps", "cauchy");
                b.set("scale", fmt_f64(scale));
            }
            JumpLaw::VarianceGamma { shape, scale } => {
                b.set("jumps", "variance_gamma");
                b.set("shape", fmt_f64(shape));
                b.set("scale", fmt_f64(scale));
            }
        }
    }

    pub fn from_kv(b: &KvBlock) -> Result<Self> {
        let law = match b.require("jumps")? {
            "gaussian" => JumpLaw::Gaussian {
                variance: req(b, "variance")?,
            },
            "laplace" => JumpLaw::Laplace {
                scale: req(b, "scale")?,
            },
            "cauchy" => JumpLaw::Cauchy {
                scale: req(b, "scale")?,
            },
            "variance_gamma" => JumpLaw::VarianceGamma {
                shape: req(b, "shape")?,
                scale: req(b, "scale")?,
            },
            other => return Err(Error::parse(0, format!("unknown jump law `{other}`"))),
        };
        law.validate()?;
        Ok(law)
    }
}

impl LevyExponent {
    pub fn write_kv(&self, b: &mut KvBlock) {
        match self {
            LevyExponent::Gaussian { sigma2 } => {
                b.set("family", "gaussian");
                b.set("sigma2", fmt_f64(*sigma2));
            }
            LevyExponent::Laplace { sigma2 } => {
                b.set("family", "laplace");
                b.set("sigma2", fmt_f64(*sigma2));
            }
            LevyExponent::Cauchy { c } => {
                b.set("family", "cauchy");
                b.set("c", fmt_f64(*c));
            }
            LevyExponent::CompoundPoisson { rate, jumps } => {
                b.set("family", "compound_poisson");
                b.set("rate", fmt_f64(*rate));
                jumps.write_kv(b);
            }
        }
    }

    pub fn to_kv(&self) -> KvBlock {
        let mut b = KvBlock::new();
        self.write_kv(&mut b);
        b
    }

    /// Reads `family=` (or `exponent=`, as used in run configurations).
    pub fn from_kv(b: &KvBlock) -> Result<Self> {
        let family = b
            .get("family")
            .or_else(|| b.get("exponent"))
            .ok_or_else(|| Error::parse(0, "missing key `family`"))?;
        Self::from_family(family, b)
    }

    fn from_family(family: &str, b: &KvBlock) -> Result<Self> {
        match family {
            "gaussian" => LevyExponent::gaussian(req(b, "sigma2")?),
            "laplace" => LevyExponent::laplace(req(b, "sigma2")?),
            "cauchy" => LevyExponent::cauchy(req(b, "c")?),
            "compound_poisson" => {
                LevyExponent::compound_poisson(req(b, "rate")?, JumpLaw::from_kv(b)?)
            }
            other => Err(Error::parse(0, format!("unknown exponent family `{other}`"))),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KvBlock::parse(text)?)
    }
}

impl PoissonizedExponent {
    pub fn to_kv(&self) -> KvBlock {
        let mut base = self.base().to_kv();
        let family = base.remove("family").unwrap_or_default();
        let mut b = KvBlock::new();
        b.set("family", "poissonized");
        b.set("base", family);
        for key in base.keys().map(str::to_string).collect::<Vec<_>>() {
            b.set(&key, base.get(&key).unwrap_or_default());
        }
        b.set("rate", fmt_f64(self.rate()));
        b.set("tau", fmt_f64(self.tau()));
        b
    }

    pub fn from_kv(b: &KvBlock) -> Result<Self> {
        if b.get("family") != Some("poissonized") {
            return Err(Error::parse(0, "expected family=poissonized"));
        }
        let base_family = b.require("base")?;
        if base_family == "compound_poisson" {
            // the base's own `rate` would clash with the poissonization rate
            return Err(Error::parse(0, "compound-Poisson bases are not serializable"));
        }
        let base = LevyExponent::from_family(base_family, b)?;
        PoissonizedExponent::new(base, req(b, "rate")?, req(b, "tau")?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_descriptor_text() {
        let f = LevyExponent::parse("family=gaussian sigma2=1.0").unwrap();
        assert_eq!(f, LevyExponent::Gaussian { sigma2: 1.0 });
        let f = LevyExponent::parse("exponent=cauchy\nc=2").unwrap();
        assert_eq!(f, LevyExponent::Cauchy { c: 2.0 });
        let f = LevyExponent::parse("family=compound_poisson rate=3 jumps=laplace scale=0.5").unwrap();
        assert_eq!(f.impulsive(), Some((3.0, JumpLaw::Laplace { scale: 0.5 })));
    }

    #[test]
    fn rejects_bad_descriptors() {
        for text in [
            "",
            "family=stable alpha=1.5",
            "family=gaussian",
            "family=gaussian sigma2=-1",
            "family=cauchy c=0",
            "family=compound_poisson rate=1 jumps=uniform",
            "family=compound_poisson rate=1 jumps=gaussian variance=nan",
        ] {
            assert!(LevyExponent::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn poissonized_round_trip() {
        let p = LevyExponent::laplace(2.0).unwrap().poissonize(16.0).unwrap();
        let text = p.to_kv().to_text();
        let back = PoissonizedExponent::from_kv(&KvBlock::parse(&text).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    fn any_law() -> impl Strategy<Value = JumpLaw> {
        prop_oneof![
            (1e-6f64..1e6).prop_map(|variance| JumpLaw::Gaussian { variance }),
            (1e-6f64..1e6).prop_map(|scale| JumpLaw::Laplace { scale }),
            (1e-6f64..1e6).prop_map(|scale| JumpLaw::Cauchy { scale }),
            (1e-6f64..1e3, 1e-6f64..1e3)
                .prop_map(|(shape, scale)| JumpLaw::VarianceGamma { shape, scale }),
        ]
    }

    fn any_exponent() -> impl Strategy<Value = LevyExponent> {
        prop_oneof![
            (1e-6f64..1e6).prop_map(|sigma2| LevyExponent::Gaussian { sigma2 }),
            (1e-6f64..1e6).prop_map(|sigma2| LevyExponent::Laplace { sigma2 }),
            (1e-6f64..1e6).prop_map(|c| LevyExponent::Cauchy { c }),
            (1e-6f64..1e6, any_law())
                .prop_map(|(rate, jumps)| LevyExponent::CompoundPoisson { rate, jumps }),
        ]
    }

    proptest! {
        #[test]
        fn descriptor_round_trip(f in any_exponent()) {
            let text = f.to_kv().to_text();
            prop_assert_eq!(LevyExponent::parse(&text).unwrap(), f);
        }
    }
}
