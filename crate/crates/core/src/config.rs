//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! seed = 7
//! samples = 50
//! suites = clifford, projectors
//! format = both
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SUITE_NAMES: [&str; 9] = [
    "clifford",
    "projectors",
    "poincare",
    "irreps",
    "cpt",
    "modes",
    "lattice",
    "so4",
    "equivalence",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Markdown,
    Both,
}

impl OutputFormat {
    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    pub fn markdown(self) -> bool {
        matches!(self, OutputFormat::Markdown | OutputFormat::Both)
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "both" => Ok(OutputFormat::Both),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format '{other}' (json, markdown, both)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "markdown",
            OutputFormat::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol_exact: f64,
    pub tol_fd: f64,
    pub fd_step: f64,
    pub momentum_min: f64,
    pub momentum_max: f64,
    pub suites: Vec<String>,
    pub format: OutputFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1977,
            samples: 100,
            tol_exact: 1e-10,
            tol_fd: 1e-6,
            fd_step: 1e-4,
            momentum_min: 0.1,
            momentum_max: 10.0,
            suites: SUITE_NAMES.iter().map(|s| s.to_string()).collect(),
            format: OutputFormat::Both,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse '{}'", v.trim())))
}

pub fn parse_suite_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

impl SuiteConfig {
    /// Overlay one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "seed" => self.seed = parse_num(key, value)?,
            "samples" => self.samples = parse_num(key, value)?,
            "tol_exact" => self.tol_exact = parse_num(key, value)?,
            "tol_fd" => self.tol_fd = parse_num(key, value)?,
            "fd_step" => self.fd_step = parse_num(key, value)?,
            "momentum_min" => self.momentum_min = parse_num(key, value)?,
            "momentum_max" => self.momentum_max = parse_num(key, value)?,
            "suites" => self.suites = parse_suite_list(value),
            "format" => self.format = value.parse()?,
            other => return Err(Error::InvalidConfig(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn parse_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::InvalidConfig(format!("line {}: {}", n + 1, strip_prefix(&e))))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut cfg = Self::default();
        cfg.parse_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        for (k, v) in [
            ("tol_exact", self.tol_exact),
            ("tol_fd", self.tol_fd),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{k} must be positive, got {v}")));
            }
        }
        if !(self.momentum_min > 0.0 && self.momentum_max >= self.momentum_min && self.momentum_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "momentum range must be positive and ordered, got ({}, {})",
                self.momentum_min, self.momentum_max
            )));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidConfig("no suites selected".into()));
        }
        for s in &self.suites {
            if !SUITE_NAMES.contains(&s.as_str()) {
                return Err(Error::UnknownSuite {
                    name: s.clone(),
                    valid: SUITE_NAMES.join(", "),
                });
            }
        }
        Ok(())
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::InvalidConfig(m) => m.clone(),
        other => other.to_string(),
    }
}
