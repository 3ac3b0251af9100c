//! Whitespace-separated `key=value` blocks with `#` comments.
//!
//! Used for exponent and operator descriptors and for run configurations.
//! Pairs may share a line (`operator=DaI alpha=0.1`) or sit one per line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvBlock {
    pairs: Vec<(String, String, usize)>,
}

impl KvBlock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut block = KvBlock::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            for token in line.split_whitespace() {
                let (key, value) = token
                    .split_once('=')
                    .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got `{token}`")))?;
                if key.is_empty() {
                    return Err(Error::parse(line_no, "empty key"));
                }
                if block.get(key).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate key `{key}`")));
                }
                block.pairs.push((key.to_string(), value.to_string(), line_no));
            }
        }
        Ok(block)
    }

    /// Inserts or replaces a value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.pairs.iter_mut().find(|(k, _, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.pairs.push((key.to_string(), value, 0)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        let pos = self.pairs.iter().position(|(k, _, _)| k == key)?;
        Some(self.pairs.remove(pos).1)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(k, _, _)| k.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn line_of(&self, key: &str) -> usize {
        self.pairs
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, l)| *l)
            .unwrap_or(0)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(0, format!("missing key `{key}`")))
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse_f64(v)
                .map(Some)
                .ok_or_else(|| Error::parse(self.line_of(key), format!("`{key}`: not a number: `{v}`"))),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?
            .ok_or_else(|| Error::parse(0, format!("missing key `{key}`")))
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::parse(self.line_of(key), format!("`{key}`: not an unsigned integer: `{v}`"))),
        }
    }

    /// Rejects keys outside `allowed`, so typos do not pass silently.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _, line) in &self.pairs {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::parse(*line, format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }

    /// One pair per line, in insertion order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v, _) in &self.pairs {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// All pairs on a single line separated by spaces.
    pub fn to_inline(&self) -> String {
        self.pairs
            .iter()
            .map(|(k, v, _)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses a finite float. `inf`/`nan` are refused everywhere in this crate.
pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Shortest representation that parses back to the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}
