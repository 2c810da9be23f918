//! Flat `key = value` experiment configuration.
//!
//! Grammar: UTF-8 text, one `key = value` pair per line, `#` starts a
//! comment, blank lines ignored. Unknown keys, malformed values and
//! out-of-range values are rejected with the offending line number.

use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::teleport::{LostPolicy, NoiseSite};

/// Epsilon grid: `steps` evenly spaced points from `min` to `max`
/// inclusive (a single step collapses to `min`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonGrid {
    pub min: f64,
    pub max: f64,
    pub steps: u32,
}

impl EpsilonGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Json => write!(f, "json"),
        }
    }
}

/// Declarative description of a fidelity sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials_per_point: u32,
    pub epsilon_grid: EpsilonGrid,
    pub n_dofs: u32,
    pub noise_sites: Vec<NoiseSite>,
    pub lost_policy: LostPolicy,
    /// Destination only; not part of the serialized config echo, so the
    /// emitted bytes do not depend on where they are written.
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials_per_point: 70,
            epsilon_grid: EpsilonGrid { min: 0.0, max: 0.5, steps: 11 },
            n_dofs: 2,
            noise_sites: NoiseSite::ALL.to_vec(),
            lost_policy: LostPolicy::MaximallyMixed,
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

fn parse_site(name: &str) -> Option<NoiseSite> {
    match name {
        "after_multiplex" => Some(NoiseSite::AfterMultiplex),
        "after_transmission" => Some(NoiseSite::AfterTransmission),
        "after_demultiplex" => Some(NoiseSite::AfterDemultiplex),
        _ => None,
    }
}

fn site_name(site: NoiseSite) -> &'static str {
    match site {
        NoiseSite::AfterMultiplex => "after_multiplex",
        NoiseSite::AfterTransmission => "after_transmission",
        NoiseSite::AfterDemultiplex => "after_demultiplex",
    }
}

fn policy_name(policy: LostPolicy) -> &'static str {
    match policy {
        LostPolicy::MaximallyMixed => "maximally_mixed",
        LostPolicy::ConditionOnSurvival => "condition_on_survival",
    }
}

impl ExperimentConfig {
    /// Parse the flat key=value format; absent keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(line_no, format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|s| s == key) {
                return Err(config_err(line_no, format!("duplicate key {key}")));
            }
            seen.push(key.to_string());
            match key {
                "seed" => {
                    config.seed = value
                        .parse()
                        .map_err(|_| config_err(line_no, format!("seed: invalid integer {value:?}")))?;
                }
                "trials" => {
                    let trials: u32 = value
                        .parse()
                        .map_err(|_| config_err(line_no, format!("trials: invalid integer {value:?}")))?;
                    if trials < 1 {
                        return Err(config_err(line_no, "trials must be at least 1"));
                    }
                    config.trials_per_point = trials;
                }
                "epsilon_min" | "epsilon_max" => {
                    let eps: f64 = value
                        .parse()
                        .map_err(|_| config_err(line_no, format!("{key}: invalid number {value:?}")))?;
                    if !(0.0..=1.0).contains(&eps) {
                        return Err(config_err(line_no, format!("{key} = {value} outside [0, 1]")));
                    }
                    if key == "epsilon_min" {
                        config.epsilon_grid.min = eps;
                    } else {
                        config.epsilon_grid.max = eps;
                    }
                }
                "epsilon_steps" => {
                    let steps: u32 = value.parse().map_err(|_| {
                        config_err(line_no, format!("epsilon_steps: invalid integer {value:?}"))
                    })?;
                    if steps < 1 {
                        return Err(config_err(line_no, "epsilon_steps must be at least 1"));
                    }
                    config.epsilon_grid.steps = steps;
                }
                "n_dofs" => {
                    let n: u32 = value
                        .parse()
                        .map_err(|_| config_err(line_no, format!("n_dofs: invalid integer {value:?}")))?;
                    if !(1..=4).contains(&n) {
                        return Err(config_err(line_no, format!("n_dofs = {n} outside 1..=4")));
                    }
                    config.n_dofs = n;
                }
                "noise_sites" => {
                    let sites: Vec<NoiseSite> = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|name| {
                            parse_site(name).ok_or_else(|| {
                                config_err(line_no, format!("unknown noise site {name:?}"))
                            })
                        })
                        .collect::<Result<_>>()?;
                    config.noise_sites = sites;
                }
                "lost_policy" => {
                    config.lost_policy = match value {
                        "maximally_mixed" => LostPolicy::MaximallyMixed,
                        "condition_on_survival" => LostPolicy::ConditionOnSurvival,
                        other => {
                            return Err(config_err(line_no, format!("unknown lost policy {other:?}")))
                        }
                    };
                }
                "output_path" => {
                    if value.is_empty() {
                        return Err(config_err(line_no, "output_path must not be empty"));
                    }
                    config.output_path = Some(PathBuf::from(value));
                }
                "output_format" => {
                    config.output_format = match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => {
                            return Err(config_err(line_no, format!("unknown output format {other:?}")))
                        }
                    };
                }
                other => return Err(config_err(line_no, format!("unknown key {other:?}"))),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials_per_point < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        let grid = &self.epsilon_grid;
        if !(0.0..=1.0).contains(&grid.min) || !(0.0..=1.0).contains(&grid.max) {
            return Err(Error::InvalidArgument(
                "epsilon grid bounds must lie in [0, 1]".into(),
            ));
        }
        if grid.min > grid.max {
            return Err(Error::InvalidArgument(format!(
                "epsilon_min {} exceeds epsilon_max {}",
                grid.min, grid.max
            )));
        }
        if grid.steps < 1 {
            return Err(Error::InvalidArgument("epsilon_steps must be at least 1".into()));
        }
        if !(1..=4).contains(&self.n_dofs) {
            return Err(Error::InvalidArgument(format!(
                "n_dofs = {} outside 1..=4",
                self.n_dofs
            )));
        }
        if self.epsilon_grid.max > 0.0 && self.noise_sites.is_empty() {
            return Err(Error::InvalidArgument(
                "noise_sites must be nonempty when the grid reaches epsilon > 0".into(),
            ));
        }
        Ok(())
    }

    /// Canonical serialization; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("trials = {}\n", self.trials_per_point));
        out.push_str(&format!("epsilon_min = {}\n", self.epsilon_grid.min));
        out.push_str(&format!("epsilon_max = {}\n", self.epsilon_grid.max));
        out.push_str(&format!("epsilon_steps = {}\n", self.epsilon_grid.steps));
        out.push_str(&format!("n_dofs = {}\n", self.n_dofs));
        let sites: Vec<&str> = self.noise_sites.iter().map(|&s| site_name(s)).collect();
        out.push_str(&format!("noise_sites = {}\n", sites.join(", ")));
        out.push_str(&format!("lost_policy = {}\n", policy_name(self.lost_policy)));
        if let Some(path) = &self.output_path {
            out.push_str(&format!("output_path = {}\n", path.display()));
        }
        out.push_str(&format!("output_format = {}\n", self.output_format));
        out
    }
}
