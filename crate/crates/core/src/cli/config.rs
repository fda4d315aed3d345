//! Experiment configuration: JSON file, then command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::domain::DelayParameter;
use crate::potentials::TestPotential;

/// Settings shared by all subcommands. Missing JSON fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub a: f64,
    /// Truncation order `N` of the spectra.
    pub nmax: usize,
    /// Cells of `[a, π]` when sampling a built-in potential.
    pub m_pot: usize,
    /// Cells of the auxiliary grids, and of the reconstruction grid.
    pub m_aux: usize,
    /// Built-in potential name (`P0`, `P1`, `P2`) or path of a potential CSV.
    pub potential: Option<String>,
    pub spectra: Option<PathBuf>,
    pub known: Option<PathBuf>,
    pub out: PathBuf,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    /// Overrides the command's default pass/fail threshold.
    pub tolerance: Option<f64>,
    /// Truncation orders of the round-trip experiment.
    pub ladder: Vec<usize>,
    pub oracle_samples: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            a: 1.1,
            nmax: 50,
            m_pot: 2000,
            m_aux: 2000,
            potential: None,
            spectra: None,
            known: None,
            out: PathBuf::from("."),
            lambda_min: -10.0,
            lambda_max: 10.0,
            lambda_step: 0.5,
            tolerance: None,
            ladder: vec![25, 50, 100, 200],
            oracle_samples: 50,
            seed: 20240601,
        }
    }
}

/// Command-line values; `Some` replaces the configured value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub a: Option<f64>,
    pub nmax: Option<usize>,
    pub m_pot: Option<usize>,
    pub m_aux: Option<usize>,
    pub potential: Option<String>,
    pub spectra: Option<PathBuf>,
    pub known: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_step: Option<f64>,
    pub tolerance: Option<f64>,
    pub ladder: Option<Vec<usize>>,
}

/// Where the potential comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Builtin(TestPotential),
    File(PathBuf),
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Defaults, then the file at `path` if any, then `overrides`; validated.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if let Some(v) = &o.$f { self.$f = v.clone(); })*
            };
        }
        take!(
            a,
            nmax,
            m_pot,
            m_aux,
            out,
            lambda_min,
            lambda_max,
            lambda_step,
            ladder
        );
        if o.potential.is_some() {
            self.potential.clone_from(&o.potential);
        }
        if o.spectra.is_some() {
            self.spectra.clone_from(&o.spectra);
        }
        if o.known.is_some() {
            self.known.clone_from(&o.known);
        }
        if o.tolerance.is_some() {
            self.tolerance = o.tolerance;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if let Err(e) = DelayParameter::new(self.a) {
            return bad(e.to_string());
        }
        for (name, v) in [
            ("nmax", self.nmax),
            ("m_pot", self.m_pot),
            ("m_aux", self.m_aux),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        let step_ok = self.lambda_step.is_finite() && self.lambda_step > 0.0;
        if !step_ok
            || !self.lambda_min.is_finite()
            || !self.lambda_max.is_finite()
            || self.lambda_max < self.lambda_min
        {
            return bad(format!(
                "λ-grid [{}, {}] with step {} is not a valid range",
                self.lambda_min, self.lambda_max, self.lambda_step
            ));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t <= 0.0 {
                return bad(format!("tolerance must be positive, got {t}"));
            }
        }
        if self.ladder.is_empty() || self.ladder.contains(&0) {
            return bad("ladder must hold positive truncation orders".into());
        }
        if self.oracle_samples == 0 {
            return bad("oracle_samples must be positive".into());
        }
        Ok(())
    }

    pub fn delay(&self) -> DelayParameter {
        DelayParameter::new(self.a).expect("validated")
    }

    pub fn potential_source(&self) -> Result<PotentialSource, CliError> {
        let s = self
            .potential
            .as_deref()
            .ok_or_else(|| CliError::Config("no potential given (use --potential)".into()))?;
        Ok(match TestPotential::from_str(s) {
            Ok(p) => PotentialSource::Builtin(p),
            Err(_) => PotentialSource::File(PathBuf::from(s)),
        })
    }

    /// `λ_min, λ_min + step, …` up to `λ_max` inclusive.
    pub fn lambda_grid(&self) -> Vec<f64> {
        let count =
            ((self.lambda_max - self.lambda_min) / self.lambda_step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.lambda_min + k as f64 * self.lambda_step)
            .collect()
    }
}
