//! Realization files.
//!
//! CSV: a `#` header line then one `x[,y],value` row per node, axis 0
//! varying fastest:
//!
//! ```text
//! # dim=1 box=0.0..10.0 step=0.01 operator=D:n=1 provenance=poisson:lambda=3.0 seed=7 stream=0
//! 0.0000000000000000e0,0.0000000000000000e0
//! ```
//!
//! Binary: the same header line in a sidecar text file, and the samples as
//! little-endian `f64` in node order.

use super::{GridRealization, Provenance};
use crate::error::{Error, Result};
use crate::exponents::LevyExponent;
use crate::grid::{Domain, Grid};
use crate::kv::{fmt_f64, parse_f64, KvBlock};
use crate::operators::OperatorSpec;

const HEADER_KEYS: [&str; 7] = ["dim", "box", "step", "operator", "provenance", "seed", "stream"];

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

impl Provenance {
    /// Single-token form: `poisson:lambda=3.0` or
    /// `reference:family=gaussian,sigma2=1.0`.
    pub fn to_compact(&self) -> String {
        match self {
            Provenance::Poisson { rate, .. } => format!("poisson:lambda={}", fmt_f64(*rate)),
            Provenance::Reference { family, .. } => {
                format!("reference:{}", family.to_kv().to_inline().replace(' ', ","))
            }
        }
    }

    pub fn parse_compact(token: &str, seed: u64, stream: u64) -> Result<Self> {
        let (kind, params) = token
            .split_once(':')
            .ok_or_else(|| Error::parse(1, format!("bad provenance `{token}`")))?;
        let kv = KvBlock::parse(&params.replace(',', " "))?;
        match kind {
            "poisson" => {
                kv.check_keys(&["lambda"])?;
                let rate = kv.require_f64("lambda")?;
                if rate <= 0.0 {
                    return Err(Error::parse(1, "lambda must be positive"));
                }
                Ok(Provenance::Poisson { rate, seed, stream })
            }
            "reference" => Ok(Provenance::Reference {
                family: LevyExponent::from_kv(&kv)?,
                seed,
                stream,
            }),
            other => Err(Error::parse(1, format!("unknown provenance `{other}`"))),
        }
    }
}

impl GridRealization {
    pub fn header(&self) -> String {
        format!(
            "# dim={} box={} step={} operator={} provenance={} seed={} stream={}",
            self.grid.dim(),
            self.grid.domain().to_text(),
            fmt_f64(self.grid.step()),
            self.operator.to_compact(),
            self.provenance.to_compact(),
            self.provenance.seed(),
            self.provenance.stream()
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.grid.dim() + 1) * (self.samples.len() + 1));
        out.push_str(&self.header());
        out.push('\n');
        for (k, v) in self.samples.iter().enumerate() {
            for c in self.grid.point(k) {
                out.push_str(&sci(c));
                out.push(',');
            }
            out.push_str(&sci(*v));
            out.push('\n');
        }
        out
    }

    /// Sidecar header text and the raw sample bytes.
    pub fn to_bin(&self) -> (String, Vec<u8>) {
        let mut bytes = Vec::with_capacity(8 * self.samples.len());
        for v in &self.samples {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        (format!("{}\n", self.header()), bytes)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty realization file"))?;
        let (grid, provenance, operator) = parse_header(first)?;
        let dim = grid.dim();
        let tol = 1e-6 * grid.step();
        let mut samples = Vec::with_capacity(grid.len());
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let k = samples.len();
            if k >= grid.len() {
                return Err(Error::parse(idx + 1, "more rows than grid nodes"));
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != dim + 1 {
                return Err(Error::parse(idx + 1, format!("expected {} columns", dim + 1)));
            }
            let mut vals = Vec::with_capacity(dim + 1);
            for c in cols {
                vals.push(parse_f64(c).ok_or_else(|| Error::parse(idx + 1, format!("bad number `{c}`")))?);
            }
            let node = grid.point(k);
            if node.iter().zip(&vals).any(|(a, b)| (a - b).abs() > tol + 1e-12 * a.abs()) {
                return Err(Error::parse(idx + 1, "row coordinates do not match the grid"));
            }
            samples.push(vals[dim]);
        }
        if samples.len() != grid.len() {
            return Err(Error::parse(
                1,
                format!("{} rows for a grid of {} nodes", samples.len(), grid.len()),
            ));
        }
        GridRealization::new(grid, samples, provenance, operator)
    }

    pub fn from_bin(header: &str, bytes: &[u8]) -> Result<Self> {
        let first = header
            .lines()
            .next()
            .ok_or_else(|| Error::parse(1, "empty header file"))?;
        let (grid, provenance, operator) = parse_header(first)?;
        if bytes.len() != 8 * grid.len() {
            return Err(Error::parse(
                0,
                format!("{} bytes for a grid of {} nodes", bytes.len(), grid.len()),
            ));
        }
        let samples = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        GridRealization::new(grid, samples, provenance, operator)
    }
}

fn parse_header(line: &str) -> Result<(Grid, Provenance, OperatorSpec)> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::parse(1, "missing `#` header"))?;
    let kv = KvBlock::parse(body).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(1, message),
        other => other,
    })?;
    kv.check_keys(&HEADER_KEYS)?;
    let dim = kv.u64("dim")?.ok_or_else(|| Error::parse(1, "missing dim"))?;
    let domain = Domain::parse(kv.require("box")?)?;
    if domain.dim() as u64 != dim {
        return Err(Error::parse(1, "dim disagrees with box"));
    }
    let step = kv.require_f64("step")?;
    let grid = Grid::on(&domain, step)?;
    let operator = OperatorSpec::parse_compact(kv.require("operator")?)?;
    if operator.dim() != grid.dim() {
        return Err(Error::parse(1, "operator dimension disagrees with box"));
    }
    let seed = kv.u64("seed")?.ok_or_else(|| Error::parse(1, "missing seed"))?;
    let stream = kv.u64("stream")?.unwrap_or(0);
    let provenance = Provenance::parse_compact(kv.require("provenance")?, seed, stream)?;
    Ok((grid, provenance, operator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::JumpLaw;
    use crate::synthesis::{Generator, PoissonSpec};

    fn sample(dim: usize, op: OperatorSpec) -> GridRealization {
        let grid = Grid::on(&Domain::cube(dim, 0.0, 2.0).unwrap(), 0.1).unwrap();
        Generator::Poisson(PoissonSpec {
            op,
            grid,
            rate: 2.0,
            jumps: JumpLaw::Cauchy { scale: 0.5 },
            margin: None,
        })
        .realize(17, 3)
        .unwrap()
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let cases = [
            sample(1, OperatorSpec::DerivativeAlpha { alpha: 0.5 }),
            sample(2, OperatorSpec::SeparableD { dim: 2 }),
            sample(2, OperatorSpec::FractionalLaplacian { gamma: 1.5, dim: 2 }),
        ];
        for r in cases {
            assert_eq!(GridRealization::from_csv(&r.to_csv()).unwrap(), r);
            let (h, b) = r.to_bin();
            assert_eq!(GridRealization::from_bin(&h, &b).unwrap(), r);
        }
    }

    #[test]
    fn reference_provenance_round_trip() {
        let p = Provenance::Reference {
            family: LevyExponent::compound_poisson(2.0, JumpLaw::VarianceGamma { shape: 0.5, scale: 1.0 }).unwrap(),
            seed: 4,
            stream: 9,
        };
        assert_eq!(Provenance::parse_compact(&p.to_compact(), 4, 9).unwrap(), p);
    }

    #[test]
    fn header_layout() {
        let r = sample(1, OperatorSpec::Derivative { order: 1 });
        assert_eq!(
            r.header(),
            "# dim=1 box=0.0..2.0 step=0.1 operator=D:n=1 provenance=poisson:lambda=2.0 seed=17 stream=3"
        );
    }

    #[test]
    fn rejects_malformed() {
        let good = sample(1, OperatorSpec::Derivative { order: 1 }).to_csv();
        let truncated: String = good.lines().take(5).map(|l| format!("{l}\n")).collect();
        for text in [
            String::new(),
            "# dim=1".to_string(),
            truncated,
            good.replace("operator=D:n=1", "operator=Q"),
            good.replace("provenance=poisson", "provenance=nowhere"),
            format!("{good}1.0,2.0\n"),
        ] {
            assert!(GridRealization::from_csv(&text).is_err());
        }
        let (h, b) = sample(1, OperatorSpec::Derivative { order: 1 }).to_bin();
        assert!(GridRealization::from_bin(&h, &b[..b.len() - 1]).is_err());
    }
}
