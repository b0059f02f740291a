use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::Fail;

/// Values from a `key = value` config file. Blank lines and lines starting
/// with `#` are ignored.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, Fail> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Fail::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Fail> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Fail::Usage(format!("config line {}: expected key = value", i + 1))
            })?;
            values.insert(k.trim().to_string(), v.trim().trim_matches('"').to_string());
        }
        Ok(Settings { values })
    }

    /// The flag value if given, else the config value, else `None`.
    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Fail> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Fail::Usage(format!("config key '{key}': cannot parse '{raw}'"))),
        }
    }

    pub fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Fail> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    pub fn req<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, Fail> {
        self.opt(flag, key)?
            .ok_or_else(|| Fail::Usage(format!("missing --{key} (flag or config key)")))
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, Fail> {
        Ok(flag || self.opt::<bool>(None, key)?.unwrap_or(false))
    }
}

/// Comma-separated numbers.
pub fn number_list(s: &str) -> Result<Vec<f64>, Fail> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Fail::Usage(format!("'{t}' is not a number")))
        })
        .collect()
}
