//! `key = value` settings file.

use std::path::{Path, PathBuf};

use zhgec::model::{Dialect, Granularity};

/// Environment variable naming the directory that holds `config`.
pub const CONFIG_DIR_VAR: &str = "ZHGEC_CONFIG_DIR";
const FILE_NAME: &str = "config";

/// Settings read from a config file. Unset keys stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub lexicon: Option<PathBuf>,
    pub dialect: Option<Dialect>,
    pub granularity: Option<Granularity>,
    pub beta: Option<f64>,
    pub threads: Option<usize>,
    pub wo_window: Option<usize>,
}

impl Config {
    /// Parses config text. Relative lexicon paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Config, String> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| format!("config line {}: {msg}", i + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| at("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| at(format!("{key}: {v:?} is not a number")));
            let count = |v: &str| v.parse::<usize>().map_err(|_| at(format!("{key}: {v:?} is not a count")));
            match key {
                "alpha1" => c.alpha1 = Some(num(value)?),
                "alpha2" => c.alpha2 = Some(num(value)?),
                "beta" => c.beta = Some(num(value)?),
                "threads" => c.threads = Some(count(value)?),
                "wo_window" => c.wo_window = Some(count(value)?),
                "lexicon" => c.lexicon = Some(base.join(value)),
                "dialect" => c.dialect = Some(value.parse().map_err(|e| at(format!("{e}")))?),
                "granularity" => c.granularity = Some(value.parse().map_err(|e| at(format!("{e}")))?),
                other => return Err(at(format!("unknown key {other:?}"))),
            }
        }
        Ok(c)
    }

    /// Reads `explicit` if given, otherwise `config` in the directory named by
    /// the environment or the user config directory. A missing default file
    /// is not an error.
    pub fn load(explicit: Option<&Path>) -> Result<Config, String> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => match default_dir() {
                Some(dir) if dir.join(FILE_NAME).is_file() => dir.join(FILE_NAME),
                _ => return Ok(Config::default()),
            },
        };
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        Config::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CONFIG_DIR_VAR) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CONFIG_HOME") {
        return Some(PathBuf::from(d).join("zhgec"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".config").join("zhgec"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = Config::parse("# thresholds\nalpha1 = 0.8\ndialect = cherrant\nlexicon = words.tsv\n", Path::new("/etc/z")).unwrap();
        assert_eq!(c.alpha1, Some(0.8));
        assert_eq!(c.dialect, Some(Dialect::Cherrant));
        assert_eq!(c.lexicon, Some(PathBuf::from("/etc/z/words.tsv")));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(Config::parse("colour = red", Path::new(".")).unwrap_err().contains("line 1"));
        assert!(Config::parse("alpha1 = high", Path::new(".")).is_err());
        assert!(Config::parse("alpha1", Path::new(".")).is_err());
    }
}
