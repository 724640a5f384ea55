//! Flat `key = value` settings merged from defaults, a config file and flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use regulab::QuadratureSpec;

/// Keys shared by every subcommand.
pub const QUADRATURE_KEYS: [(&str, &str); 4] = [
    ("quadrature.rel_tol", "1e-10"),
    ("quadrature.abs_tol", "1e-14"),
    ("quadrature.max_subdivisions", "2000"),
    ("quadrature.tail_truncation_multiple", "60"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    /// Wraps a library error, attributing it to `flag`.
    pub fn from_core(flag: &str, err: regulab::Error) -> Self {
        let code = if err.is_numerical() { 3 } else { 2 };
        CliError {
            code,
            message: format!("{flag}: {err}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Output and quadrature settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub output_format: OutputFormat,
    /// `None` writes to standard output.
    pub output_path: Option<String>,
    pub quadrature: QuadratureSpec,
    /// Every run is deterministic; kept so the resolved config says so.
    pub deterministic: bool,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str, origin: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::validation(format!(
                "--config: {origin}:{}: expected 'key = value', got '{line}'",
                n + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::validation(format!("--config: {origin}:{}: empty key", n + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("--config: cannot read {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

/// A resolved, fully explicit set of settings for one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Merges `defaults ← config ← flags`; later sources win.
    ///
    /// `keys` lists the keys the subcommand understands with their defaults
    /// (`None` means no default). Config keys outside that list are rejected.
    pub fn resolve(
        keys: &[(&str, Option<&str>)],
        config: &BTreeMap<String, String>,
        flags: &[(&str, Option<String>)],
    ) -> CliResult<Settings> {
        let mut known: Vec<(&str, Option<&str>)> = keys.to_vec();
        known.extend(QUADRATURE_KEYS.iter().map(|&(k, d)| (k, Some(d))));
        known.push(("format", Some("csv")));

        let mut values = BTreeMap::new();
        for &(k, d) in &known {
            if let Some(d) = d {
                values.insert(k.to_string(), d.to_string());
            }
        }
        for (k, v) in config {
            if !known.iter().any(|&(name, _)| name == k) {
                return Err(CliError::validation(format!("--config: unknown key '{k}'")));
            }
            values.insert(k.clone(), v.clone());
        }
        for (k, v) in flags {
            if let Some(v) = v {
                values.insert(k.to_string(), v.clone());
            }
        }
        Ok(Settings { values })
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> CliResult<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::validation(format!("{} is required", flag_name(key))))
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        parse_f64(self.raw(key)?, key)
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| CliError::validation(format!("{}: expected a non-negative integer, got '{raw}'", flag_name(key))))
    }

    pub fn bool(&self, key: &str) -> CliResult<bool> {
        match self.raw(key)? {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(CliError::validation(format!(
                "{}: expected true or false, got '{other}'",
                flag_name(key)
            ))),
        }
    }

    pub fn list(&self, key: &str) -> CliResult<Vec<f64>> {
        parse_list(self.raw(key)?, key)
    }

    /// `start:stop:count`, inclusive and evenly spaced.
    pub fn grid(&self, key: &str) -> CliResult<Vec<f64>> {
        parse_grid(self.raw(key)?, key)
    }

    pub fn run_config(&self) -> CliResult<RunConfig> {
        let output_format = match self.raw("format")? {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(CliError::validation(format!("--format: expected csv or json, got '{other}'")));
            }
        };
        let quadrature = QuadratureSpec {
            rel_tol: self.f64("quadrature.rel_tol")?,
            abs_tol: self.f64("quadrature.abs_tol")?,
            max_subdivisions: self.usize("quadrature.max_subdivisions")?,
            tail_truncation_multiple: self.f64("quadrature.tail_truncation_multiple")?,
            oscillation: None,
        };
        quadrature
            .validate()
            .map_err(|e| CliError::from_core("--config (quadrature.*)", e))?;
        Ok(RunConfig {
            output_format,
            output_path: self.values.get("out").cloned(),
            quadrature,
            deterministic: true,
        })
    }

    /// Everything that determines the output, in key order. `out` and
    /// `config` only say where things go and are left out.
    pub fn resolved(&self) -> Vec<(String, String)> {
        self.values
            .iter()
            .filter(|(k, _)| k.as_str() != "out" && k.as_str() != "config")
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

pub fn flag_name(key: &str) -> String {
    if key.starts_with("quadrature.") {
        format!("{key} (config)")
    } else {
        format!("--{key}")
    }
}

pub fn parse_f64(raw: &str, key: &str) -> CliResult<f64> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::validation(format!(
            "{}: expected a finite number, got '{raw}'",
            flag_name(key)
        ))),
    }
}

pub fn parse_list(raw: &str, key: &str) -> CliResult<Vec<f64>> {
    raw.split(',').map(|p| parse_f64(p, key)).collect()
}

pub fn parse_grid(raw: &str, key: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::validation(format!(
            "{}: expected start:stop:count, got '{raw}'",
            flag_name(key)
        )));
    }
    let start = parse_f64(parts[0], key)?;
    let stop = parse_f64(parts[1], key)?;
    let count: usize = parts[2].trim().parse().map_err(|_| {
        CliError::validation(format!("{}: count must be a positive integer, got '{}'", flag_name(key), parts[2]))
    })?;
    match count {
        0 => Err(CliError::validation(format!("{}: count must be at least 1", flag_name(key)))),
        1 => Ok(vec![start]),
        n => Ok((0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(parse_grid("0:1:5", "grid").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.3:9:1", "grid").unwrap(), vec![0.3]);
        assert!(parse_grid("0:1", "grid").is_err());
        assert!(parse_grid("0:1:0", "grid").is_err());
        assert!(parse_grid("0:nan:3", "grid").is_err());
    }

    #[test]
    fn config_comments_and_sections() {
        let text = "# header\nlambda = 2  # trailing\n\nquadrature.rel_tol=1e-9\n";
        let m = parse_config_text(text, "t").unwrap();
        assert_eq!(m["lambda"], "2");
        assert_eq!(m["quadrature.rel_tol"], "1e-9");
        assert!(parse_config_text("lambda 2", "t").is_err());
    }

    #[test]
    fn later_sources_win() {
        let keys = [("lambda", Some("1")), ("tau", Some("0.05"))];
        let mut cfg = BTreeMap::new();
        cfg.insert("lambda".to_string(), "2".to_string());
        cfg.insert("tau".to_string(), "0.1".to_string());
        let s = Settings::resolve(&keys, &cfg, &[("lambda", Some("3".into())), ("tau", None)]).unwrap();
        assert_eq!(s.f64("lambda").unwrap(), 3.0);
        assert_eq!(s.f64("tau").unwrap(), 0.1);
        cfg.insert("bogus".to_string(), "1".to_string());
        assert!(Settings::resolve(&keys, &cfg, &[]).is_err());
    }

    #[test]
    fn errors_name_the_flag() {
        let s = Settings::resolve(&[("lambda", Some("x"))], &BTreeMap::new(), &[]).unwrap();
        assert!(s.f64("lambda").unwrap_err().message.starts_with("--lambda"));
        assert!(s.raw("V").unwrap_err().message.contains("--V is required"));
    }
}
