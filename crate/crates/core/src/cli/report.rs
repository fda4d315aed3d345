//! JSON run reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Error of one region of the reconstruction at one truncation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub n_max: usize,
    pub region: String,
    pub nodes: usize,
    pub l2: f64,
    /// `l2` over the reference norm on the same nodes (absolute when that is zero).
    pub relative_l2: f64,
    pub max: f64,
}

/// Whole-interval errors at one truncation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_max: usize,
    pub relative_l2: f64,
    pub max_seam: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub timings: Vec<StageTiming>,
    pub regions: Vec<RegionRow>,
    pub convergence: Vec<ConvergenceRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        Self {
            command: command.to_string(),
            config: config.clone(),
            timings: Vec::new(),
            regions: Vec::new(),
            convergence: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            files: Vec::new(),
            passed: true,
        }
    }

    /// Runs `f`, recording its wall time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming {
            stage: stage.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    /// Records `value <= tolerance` under `name`, replacing an earlier
    /// verdict of the same name.
    pub fn check(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        let passed = value <= tolerance;
        let entry = Check {
            name: name.to_string(),
            value,
            tolerance,
            passed,
        };
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => *c = entry,
            None => self.checks.push(entry),
        }
        self.passed = self.checks.iter().all(|c| c.passed);
        passed
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("report serialises");
        fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
