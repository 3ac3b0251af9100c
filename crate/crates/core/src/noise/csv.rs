//! ImpulseField CSV:
//!
//! ```text
//! # dim=2 box=0.0..10.0;0.0..10.0 lambda=0.1 seed=7 stream=0
//! 1.2500000000000000e0,3.0000000000000000e0,-4.1000000000000003e-1
//! ```

use super::ImpulseField;
use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::kv::{fmt_f64, parse_f64, KvBlock};

/// 17 significant digits, enough to reproduce every `f64` exactly.
pub(crate) fn fmt_sci(x: f64) -> String {
    format!("{x:.16e}")
}

impl ImpulseField {
    pub fn header(&self) -> String {
        format!(
            "# dim={} box={} lambda={} seed={} stream={}",
            self.dim(),
            self.domain().to_text(),
            fmt_f64(self.rate()),
            self.seed(),
            self.stream()
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.dim() + 1) * (self.len() + 1));
        out.push_str(&self.header());
        out.push('\n');
        for (x, a) in self.iter() {
            for c in x {
                out.push_str(&fmt_sci(*c));
                out.push(',');
            }
            out.push_str(&fmt_sci(a));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty impulse file"))?;
        let header = first
            .strip_prefix('#')
            .ok_or_else(|| Error::parse(1, "missing `#` header"))?;
        let kv = KvBlock::parse(header).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(1, message),
            other => other,
        })?;
        kv.check_keys(&["dim", "box", "lambda", "seed", "stream"])?;
        let dim = kv.u64("dim")?.ok_or_else(|| Error::parse(1, "missing dim"))? as usize;
        let domain = Domain::parse(kv.require("box")?)?;
        if domain.dim() != dim {
            return Err(Error::parse(1, "dim disagrees with box"));
        }
        let rate = kv.require_f64("lambda")?;
        let seed = kv.u64("seed")?.ok_or_else(|| Error::parse(1, "missing seed"))?;
        let stream = kv.u64("stream")?.unwrap_or(0);

        let mut impulses = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != dim + 1 {
                return Err(Error::parse(idx + 1, format!("expected {} columns", dim + 1)));
            }
            let mut vals = Vec::with_capacity(dim + 1);
            for c in cols {
                vals.push(parse_f64(c).ok_or_else(|| Error::parse(idx + 1, format!("bad number `{c}`")))?);
            }
            let a = vals.pop().unwrap_or_default();
            if !domain.contains(&vals) {
                return Err(Error::parse(idx + 1, "impulse outside box"));
            }
            impulses.push((vals, a));
        }
        ImpulseField::from_impulses(domain, rate, seed, stream, &impulses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::JumpLaw;
    use crate::noise::{sample_impulse_field, RngStream};

    #[test]
    fn round_trip_is_exact() {
        for dim in [1, 2] {
            let d = Domain::cube(dim, -1.5, 10.0).unwrap();
            let law = JumpLaw::Cauchy { scale: 0.3 };
            let f = sample_impulse_field(&d, 0.7, &law, &mut RngStream::new(31, 4)).unwrap();
            let text = f.to_csv();
            assert!(text.starts_with("# dim="));
            assert_eq!(ImpulseField::from_csv(&text).unwrap(), f);
        }
    }

    #[test]
    fn header_layout() {
        let d = Domain::interval(0.0, 10.0).unwrap();
        let f = ImpulseField::from_impulses(d, 3.0, 7, 0, &[(vec![2.0], 3.0)]).unwrap();
        let text = f.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# dim=1 box=0.0..10.0 lambda=3.0 seed=7 stream=0"));
        assert_eq!(lines.next(), Some("2.0000000000000000e0,3.0000000000000000e0"));
    }

    #[test]
    fn rejects_malformed() {
        for text in [
            "",
            "dim=1 box=0..1 lambda=1 seed=0",
            "# dim=1 box=0..1 lambda=1",
            "# dim=2 box=0..1 lambda=1 seed=0",
            "# dim=1 box=0..1 lambda=1 seed=0 extra=3",
            "# dim=1 box=0..1 lambda=-1 seed=0",
            "# dim=1 box=0..1 lambda=1 seed=0\n0.5",
            "# dim=1 box=0..1 lambda=1 seed=0\n2.0,1.0",
            "# dim=1 box=0..1 lambda=1 seed=0\n0.5,nan",
        ] {
            assert!(ImpulseField::from_csv(text).is_err(), "{text:?}");
        }
    }
}
