//! Run configuration: defaults, then a `key = value` file, then the
//! solver environment override, then command-line flags.

use std::path::Path;
use std::str::FromStr;

use crate::biquad::Strategy;
use crate::error::{Error, Result};
use crate::thue::{BoundedBackend, ExternalBackend, ExternalSolver, ThueBackend, DEFAULT_SEARCH_BOUND};

pub const DEFAULT_HEIGHT_BOUND: u64 = 10_000;
pub const SOLVER_ENV: &str = "BIQUAD_EXTERNAL_SOLVER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Output {
    #[default]
    Text,
    Json,
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Output::Text),
            "json" => Ok(Output::Json),
            _ => Err(Error::Domain(format!("unknown output format `{s}`, expected text or json"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub search_bound: u64,
    pub height_bound: u64,
    pub external_solver: Option<String>,
    pub output: Output,
    /// Worker threads; `None` leaves the choice to the thread pool.
    pub jobs: Option<usize>,
    pub strategy: Strategy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            search_bound: DEFAULT_SEARCH_BOUND,
            height_bound: DEFAULT_HEIGHT_BOUND,
            external_solver: None,
            output: Output::Text,
            jobs: None,
            strategy: Strategy::Auto,
        }
    }
}

fn positive(key: &str, value: &str) -> Result<u64> {
    match value.parse::<u64>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::Domain(format!("{key} must be a positive integer, got `{value}`"))),
    }
}

impl RunConfig {
    /// Applies one setting; keys use the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "bound" | "search_bound" => self.search_bound = positive(key, value)?,
            "height-bound" | "height_bound" => self.height_bound = positive(key, value)?,
            "external-solver" | "external_solver" => {
                self.external_solver = Some(value.to_string()).filter(|v| !v.is_empty())
            }
            "format" | "output" => self.output = value.parse()?,
            "jobs" => self.jobs = Some(positive(key, value)? as usize),
            "strategy" => self.strategy = value.parse()?,
            _ => return Err(Error::Domain(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Domain(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_env(&mut self) {
        if let Ok(cmd) = std::env::var(SOLVER_ENV) {
            if !cmd.trim().is_empty() {
                self.external_solver = Some(cmd);
            }
        }
    }

    pub fn backend(&self) -> Result<Box<dyn ThueBackend>> {
        Ok(match &self.external_solver {
            Some(cmd) => Box::new(ExternalBackend::new(ExternalSolver::parse(cmd)?, self.search_bound)),
            None => Box::new(BoundedBackend {
                bound: self.search_bound,
            }),
        })
    }
}
