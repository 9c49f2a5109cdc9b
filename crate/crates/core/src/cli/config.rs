// Copyright 2026 nic-engine contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` config files.
//!
//! Keys are the long flag names without the leading dashes; `-` and `_` are
//! interchangeable. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Every key a config file may set.
pub const KEYS: [&str; 19] = [
    "omega-c",
    "omega-h",
    "gamma-c",
    "gamma-h",
    "lambda",
    "p",
    "t-cold",
    "t-hot",
    "sweep",
    "output",
    "format",
    "scheme",
    "model",
    "kind",
    "rel-tol",
    "argmax-tol",
    "defect-tol",
    "coefficient-tol",
    "samples",
];

/// Canonical form of a key: lower case, `_` folded to `-`.
pub fn canonical_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Parsed file contents keyed by canonical key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key = value, got {raw:?}",
                    n + 1
                )));
            };
            let key = canonical_key(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "line {}: unknown key {key:?}",
                    n + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn text(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("{key}: not a number: {v:?}")))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_key_spelling() {
        let cfg = ConfigFile::parse("# header\n\nomega_h = 12 # trailing\nT-COLD=3\n").unwrap();
        assert_eq!(cfg.number("omega-h").unwrap(), Some(12.0));
        assert_eq!(cfg.number("t-cold").unwrap(), Some(3.0));
        assert_eq!(cfg.number("lambda").unwrap(), None);
    }

    #[test]
    fn bad_lines_are_config_errors() {
        assert!(ConfigFile::parse("lambda 0.1").unwrap_err().is_config());
        assert!(ConfigFile::parse("colour = red").unwrap_err().is_config());
        let cfg = ConfigFile::parse("p = half").unwrap();
        assert!(cfg.number("p").unwrap_err().is_config());
    }
}
