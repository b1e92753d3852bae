//! Parameter lookup over command-line flags layered on a TOML config file.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use shadowpath::angle::parse_radians;

/// Failure category, mapped one-to-one onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Circuit(String),
    Unstable(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Config(_) => 2,
            Failure::Circuit(_) => 3,
            Failure::Unstable(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Circuit(m) => write!(f, "circuit error: {m}"),
            Failure::Unstable(m) => write!(f, "numerical instability: {m}"),
            Failure::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Keys a config file may set. Each matches a long flag.
pub const KNOWN_KEYS: &[&str] = &[
    "seed",
    "engine",
    "out",
    "format",
    "threads",
    "alpha",
    "beta",
    "peek",
    "blocked",
    "angles",
    "signs",
    "shots",
    "file",
    "source",
    "from",
    "to",
    "points",
    "free",
    "cases",
    "potential",
    "omega",
    "potential-file",
    "grid",
    "x0",
    "sigma",
    "k0",
    "initial",
    "epsilon",
    "time",
    "every",
    "hbar",
    "mass",
    "dense",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Flag,
    File,
}

#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, (String, Origin)>,
    /// Every value actually consulted, defaults included, for the output header.
    used: RefCell<BTreeMap<String, String>>,
}

impl Settings {
    pub fn load(file: Option<&Path>) -> Result<Self, Failure> {
        let mut settings = Settings::default();
        let Some(path) = file else {
            return Ok(settings);
        };
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("--config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| Failure::Config(format!("--config {}: {e}", path.display())))?;
        for (key, value) in table {
            let key = key.replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Failure::Config(format!(
                    "--config {}: unknown key `{key}`",
                    path.display()
                )));
            }
            let text = match value {
                toml::Value::String(s) => s,
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                toml::Value::Boolean(b) => b.to_string(),
                toml::Value::Array(items) => items
                    .iter()
                    .map(|v| match v {
                        toml::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
                other => {
                    return Err(Failure::Config(format!(
                        "--config: key `{key}` has unsupported value {other}"
                    )));
                }
            };
            settings.values.insert(key, (text, Origin::File));
        }
        Ok(settings)
    }

    /// Flags win over file values.
    pub fn flag(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), (v, Origin::Flag));
        }
    }

    pub fn switch(&mut self, key: &str, on: bool) {
        if on {
            self.flag(key, Some("true".into()));
        }
    }

    fn raw(&self, key: &str) -> Option<&(String, Origin)> {
        self.values.get(key)
    }

    fn invalid(&self, key: &str, message: impl fmt::Display) -> Failure {
        let origin = match self.raw(key).map(|(_, o)| *o) {
            Some(Origin::File) => " (from config file)",
            _ => "",
        };
        let value = self.raw(key).map(|(v, _)| v.as_str()).unwrap_or("");
        Failure::Config(format!("invalid value `{value}` for --{key}{origin}: {message}"))
    }

    fn note(&self, key: &str, value: String) {
        self.used.borrow_mut().insert(key.to_string(), value);
    }

    pub fn text(&self, key: &str) -> Option<String> {
        let v = self.raw(key).map(|(v, _)| v.clone());
        if let Some(v) = &v {
            self.note(key, v.clone());
        }
        v
    }

    pub fn text_or(&self, key: &str, default: &str) -> String {
        self.text(key).unwrap_or_else(|| {
            self.note(key, default.to_string());
            default.to_string()
        })
    }

    fn parsed<T: fmt::Display>(
        &self,
        key: &str,
        default: Option<T>,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, Failure> {
        match self.raw(key) {
            Some((v, _)) => {
                let value = parse(v.trim()).map_err(|m| self.invalid(key, m))?;
                self.note(key, v.clone());
                Ok(Some(value))
            }
            None => {
                if let Some(d) = &default {
                    self.note(key, d.to_string());
                }
                Ok(default)
            }
        }
    }

    pub fn angle(&self, key: &str, default: f64) -> Result<f64, Failure> {
        Ok(self
            .parsed(key, Some(default), |s| parse_radians(s).map_err(|e| e.to_string()))?
            .unwrap())
    }

    pub fn number(&self, key: &str, default: f64) -> Result<f64, Failure> {
        let parse = |s: &str| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err("expected a finite number".to_string()),
        };
        Ok(self.parsed(key, Some(default), parse)?.unwrap())
    }

    pub fn count(&self, key: &str, default: u64) -> Result<u64, Failure> {
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| "expected a non-negative integer".to_string())
        };
        Ok(self.parsed(key, Some(default), parse)?.unwrap())
    }

    pub fn optional_count(&self, key: &str) -> Result<Option<u64>, Failure> {
        self.parsed(key, None, |s| {
            s.parse::<u64>()
                .map_err(|_| "expected a non-negative integer".to_string())
        })
    }

    pub fn boolean(&self, key: &str) -> Result<bool, Failure> {
        let parse = |s: &str| s.parse::<bool>().map_err(|_| "expected true or false".to_string());
        Ok(self.parsed(key, Some(false), parse)?.unwrap())
    }

    /// Comma-separated angle list of exactly `n` entries.
    pub fn angle_list(&self, key: &str, n: usize, default: &str) -> Result<Vec<f64>, Failure> {
        let text = self.text_or(key, default);
        let values: Result<Vec<f64>, _> = text.split(',').map(|s| parse_radians(s.trim())).collect();
        let values = values.map_err(|e| self.invalid(key, e))?;
        if values.len() != n {
            return Err(self.invalid(
                key,
                format!("expected {n} comma-separated values, found {}", values.len()),
            ));
        }
        Ok(values)
    }

    /// Picks one of `choices`; the first is the default.
    pub fn choice(&self, key: &str, choices: &[&str]) -> Result<String, Failure> {
        let v = self.text_or(key, choices[0]);
        if choices.contains(&v.as_str()) {
            Ok(v)
        } else {
            Err(self.invalid(key, format!("expected one of {}", choices.join(", "))))
        }
    }

    pub fn fail(&self, key: &str, message: impl fmt::Display) -> Failure {
        self.invalid(key, message)
    }

    /// The consulted values as TOML, one key per line, sorted. The output
    /// path and thread cap are left out; neither changes the results.
    pub fn render(&self, command: &str) -> String {
        let mut table: BTreeMap<String, String> = self.used.borrow().clone();
        table.remove("out");
        table.remove("threads");
        table.insert("command".into(), command.into());
        toml::to_string(&table).expect("string table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "alpha = \"pi/2\"\nshots = 10\n").unwrap();
        let mut s = Settings::load(Some(&path)).unwrap();
        s.flag("alpha", Some("pi".into()));
        assert_eq!(s.angle("alpha", 0.0).unwrap(), std::f64::consts::PI);
        assert_eq!(s.count("shots", 0).unwrap(), 10);
        assert!(s.render("run mz").contains("alpha = \"pi\""));
    }

    #[test]
    fn bad_values_name_the_flag() {
        let mut s = Settings::default();
        s.flag("alpha", Some("banana".into()));
        let msg = s.angle("alpha", 0.0).unwrap_err().to_string();
        assert!(msg.contains("--alpha"), "{msg}");
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "alpah = 1\n").unwrap();
        assert!(matches!(Settings::load(Some(&path)), Err(Failure::Config(_))));
    }
}
