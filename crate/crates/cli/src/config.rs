use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// `key = value` settings; blank lines and `#` comments are ignored.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "domain",
    "facts",
    "target",
    "radius",
    "distance",
    "match",
    "kernel-points",
    "hash-bits",
    "loss",
    "epochs",
    "eta",
    "lambda",
    "seed",
    "folds",
    "repetitions",
    "loo",
    "slice-key",
    "slice-interpretation",
    "frame",
    "max-negatives",
    "jobs",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
            let k = k.trim().replace('_', "-");
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", n + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    /// `flag` if given, else the parsed config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config `{key}`: {e}"))),
        }
    }

    /// Repeatable flag values, else the comma-separated config value.
    pub fn list(&self, flag: &[String], key: &str) -> Vec<String> {
        if !flag.is_empty() {
            return flag.to_vec();
        }
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let c = ConfigFile::parse("radius = 2\n# comment\ntarget = a, b\nmax_negatives=5\n").unwrap();
        assert_eq!(c.pick::<usize>(None, "radius").unwrap(), Some(2));
        assert_eq!(c.pick(Some(1usize), "radius").unwrap(), Some(1));
        assert_eq!(c.list(&[], "target"), ["a", "b"]);
        assert_eq!(c.pick::<usize>(None, "max-negatives").unwrap(), Some(5));
        assert_eq!(c.pick::<usize>(None, "distance").unwrap(), None);
    }

    #[test]
    fn bad_lines() {
        assert!(ConfigFile::parse("radius 2").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("radius = two")
            .unwrap()
            .pick::<usize>(None, "radius")
            .is_err());
    }
}
