//! `RunConfig`: everything a run needs, as a flat `key=value` file.
//!
//! ```text
//! command=generate
//! operator=DaI
//! alpha=0.1
//! family=cauchy
//! c=1.0
//! box=0.0..10.0
//! step=0.001
//! lambda=3.0
//! ensemble=1
//! seed=7
//! format=csv
//! companion=table
//! outdir=out
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use levyspline::kv::{fmt_f64, parse_f64, KvBlock};
use levyspline::{Domain, Error, LevyExponent, OperatorSpec, Result};

/// Environment variable read when no seed is given anywhere else.
pub const SEED_ENV: &str = "LEVYSPLINE_SEED";

const KEYS: &[&str] = &[
    "command", "operator", "n", "alpha", "gamma", "dim", "family", "exponent", "sigma2", "c", "rate", "jumps",
    "variance", "scale", "shape", "box", "step", "margin", "lambda", "ladder", "ensemble", "seed", "threads",
    "format", "outdir", "input", "companion",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Generate,
    Reference,
    Verify,
    Plotdata,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Bin,
}

/// Which compound-Poisson noise `generate` draws for rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Companion {
    /// Gauss-, Laplace- and Cauchy-Poisson noise of the usual noise table.
    Table,
    /// `f_λ = λ(e^{f/λ} − 1)`, converging to the exponent itself.
    Poissonized,
}

macro_rules! text_enum {
    ($ty:ty { $($variant:ident => $text:literal),* $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $text),* })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok(Self::$variant),)*
                    other => Err(Error::Parse { line: 0, message: format!("unknown value `{other}`") }),
                }
            }
        }
    };
}

text_enum!(Command {
    Generate => "generate",
    Reference => "reference",
    Verify => "verify",
    Plotdata => "plotdata",
    Selftest => "selftest",
});
text_enum!(Format { Csv => "csv", Bin => "bin" });
text_enum!(Companion { Table => "table", Poissonized => "poissonized" });

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub operator: OperatorSpec,
    pub exponent: LevyExponent,
    pub domain: Domain,
    pub step: f64,
    pub margin: Option<f64>,
    pub lambda: Option<f64>,
    pub ladder: Vec<f64>,
    pub ensemble: u64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub format: Format,
    pub companion: Companion,
    pub outdir: PathBuf,
    pub input: Option<PathBuf>,
}

fn parse_value<T: FromStr<Err = Error>>(kv: &KvBlock, key: &str) -> Result<Option<T>> {
    kv.get(key).map(str::parse).transpose()
}

fn opt_f64(kv: &KvBlock, key: &str) -> Result<Option<f64>> {
    kv.f64(key)
}

/// `1,4,16,64` into numbers.
pub fn parse_ladder(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_f64(t).ok_or_else(|| Error::Parse { line: 0, message: format!("bad ladder rung `{t}`") }))
        .collect()
}

impl RunConfig {
    /// Builds a configuration from merged file and flag values. `command` is
    /// required; the rest falls back to defaults, the seed to `env_seed`.
    pub fn from_kv(kv: &KvBlock, env_seed: Option<&str>) -> Result<Self> {
        kv.check_keys(KEYS)?;
        let command: Command = parse_value(kv, "command")?
            .ok_or_else(|| Error::Parse { line: 0, message: "missing key `command`".into() })?;

        let mut op_kv = KvBlock::new();
        for key in ["operator", "n", "alpha", "gamma", "dim"] {
            if let Some(v) = kv.get(key) {
                op_kv.set(key, v);
            }
        }
        if op_kv.get("operator").is_none() {
            op_kv.set("operator", "D");
        }
        let operator = OperatorSpec::from_kv(&op_kv)?;

        let exponent = if kv.get("family").is_some() || kv.get("exponent").is_some() {
            let mut e = kv.clone();
            if let Some(family) = kv.get("exponent") {
                e.remove("exponent");
                e.set("family", family);
            }
            if e.get("family") == Some("gaussian") || e.get("family") == Some("laplace") {
                if e.get("sigma2").is_none() {
                    e.set("sigma2", "1.0");
                }
            } else if e.get("family") == Some("cauchy") && e.get("c").is_none() {
                e.set("c", "1.0");
            }
            LevyExponent::from_kv(&e)?
        } else {
            LevyExponent::gaussian(kv.f64("sigma2")?.unwrap_or(1.0))?
        };

        let dim = operator.dim();
        let domain = match kv.get("box") {
            Some(text) => {
                let d = Domain::parse(text)?;
                if d.dim() == dim {
                    d
                } else if d.dim() == 1 {
                    Domain::cube(dim, d.lo()[0], d.hi()[0])?
                } else {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("box has {} axes, operator {} acts in {dim}", d.dim(), operator.name()),
                    });
                }
            }
            None => Domain::cube(dim, 0.0, 10.0)?,
        };

        let step = opt_f64(kv, "step")?.unwrap_or(0.01);
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
        }
        let margin = opt_f64(kv, "margin")?;
        if margin.is_some_and(|m| m < 0.0) {
            return Err(Error::InvalidParameter("margin must be nonnegative".into()));
        }
        let lambda = opt_f64(kv, "lambda")?;
        if lambda.is_some_and(|l| l <= 0.0) {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        let ladder = kv.get("ladder").map(parse_ladder).transpose()?.unwrap_or_default();
        let ensemble = kv.u64("ensemble")?.unwrap_or(1);
        if ensemble == 0 {
            return Err(Error::InvalidParameter("ensemble must be at least 1".into()));
        }
        let seed = match kv.u64("seed")? {
            Some(s) => s,
            None => match env_seed {
                Some(text) => text.trim().parse().map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("{SEED_ENV} is not an unsigned integer: `{text}`"),
                })?,
                None => 0,
            },
        };
        let threads = kv.u64("threads")?.map(|t| t as usize);
        if threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be at least 1".into()));
        }
        Ok(Self {
            command,
            operator,
            exponent,
            domain,
            step,
            margin,
            lambda,
            ladder,
            ensemble,
            seed,
            threads,
            format: parse_value(kv, "format")?.unwrap_or(Format::Csv),
            companion: parse_value(kv, "companion")?.unwrap_or(Companion::Table),
            outdir: kv.get("outdir").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out")),
            input: kv.get("input").map(PathBuf::from),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KvBlock::parse(text)?, None)
    }

    pub fn to_kv(&self) -> KvBlock {
        let mut kv = KvBlock::new();
        kv.set("command", self.command.to_string());
        self.operator.write_kv(&mut kv);
        self.exponent.write_kv(&mut kv);
        kv.set("box", self.domain.to_text());
        kv.set("step", fmt_f64(self.step));
        if let Some(m) = self.margin {
            kv.set("margin", fmt_f64(m));
        }
        if let Some(l) = self.lambda {
            kv.set("lambda", fmt_f64(l));
        }
        if !self.ladder.is_empty() {
            kv.set("ladder", self.ladder.iter().map(|l| fmt_f64(*l)).collect::<Vec<_>>().join(","));
        }
        kv.set("ensemble", self.ensemble.to_string());
        kv.set("seed", self.seed.to_string());
        if let Some(t) = self.threads {
            kv.set("threads", t.to_string());
        }
        kv.set("format", self.format.to_string());
        kv.set("companion", self.companion.to_string());
        kv.set("outdir", self.outdir.display().to_string());
        if let Some(input) = &self.input {
            kv.set("input", input.display().to_string());
        }
        kv
    }

    /// The resolved configuration, one pair per line.
    pub fn to_text(&self) -> String {
        format!("# levyspline resolved configuration\n{}", self.to_kv().to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::parse("command=generate lambda=3").unwrap();
        assert_eq!(c.operator, OperatorSpec::Derivative { order: 1 });
        assert_eq!(c.exponent, LevyExponent::gaussian(1.0).unwrap());
        assert_eq!(c.domain, Domain::interval(0.0, 10.0).unwrap());
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn seed_falls_back_to_environment_value() {
        let kv = KvBlock::parse("command=generate").unwrap();
        assert_eq!(RunConfig::from_kv(&kv, Some("42")).unwrap().seed, 42);
        let kv = KvBlock::parse("command=generate seed=5").unwrap();
        assert_eq!(RunConfig::from_kv(&kv, Some("42")).unwrap().seed, 5);
        assert!(RunConfig::from_kv(&KvBlock::parse("command=generate").unwrap(), Some("x")).is_err());
    }

    #[test]
    fn one_axis_box_is_replicated() {
        let c = RunConfig::parse("command=generate operator=frac_laplacian gamma=1.5 dim=2 box=0:10").unwrap();
        assert_eq!(c.domain, Domain::cube(2, 0.0, 10.0).unwrap());
    }

    #[test]
    fn resolved_text_round_trips() {
        let c = RunConfig::parse(
            "command=verify operator=DaI alpha=0.1 exponent=cauchy c=2 ladder=1,4,16 ensemble=300 seed=3 margin=200 \
             threads=2 format=bin companion=poissonized outdir=/tmp/x",
        )
        .unwrap();
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "lambda=3",
            "command=explode",
            "command=generate typo=1",
            "command=generate format=png",
            "command=generate ensemble=0",
            "command=generate step=-1",
            "command=generate operator=DxDy box=0:1;0:1;0:1",
        ] {
            assert!(RunConfig::parse(text).is_err(), "{text}");
        }
    }
}
