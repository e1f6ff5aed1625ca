//! Batch experiments behind `dualball-lab`.
//!
//! Each run reads an [`ExperimentConfig`], evaluates its samples in parallel
//! (sample `k` of grid point `i` draws from stream `i·samples + k`), collects
//! them in index order and renders one CSV table. Nothing is written until the
//! whole table exists.

mod experiments;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::retract::HandleDescriptor;
use crate::space::SpaceSpec;

pub use experiments::{run_bpb, run_continuity, run_lemma, run_modulus, run_perturbation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Modulus,
    RetractionContinuity,
    Bpb,
    Perturbation,
    ConvexLemma,
}

impl Experiment {
    /// CLI subcommand running this experiment.
    pub fn subcommand(self) -> &'static str {
        match self {
            Experiment::Modulus => "modulus",
            Experiment::RetractionContinuity => "continuity",
            Experiment::Bpb => "bpb",
            Experiment::Perturbation => "perturb",
            Experiment::ConvexLemma => "lemma",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub space: SpaceSpec,
    /// `t` or `ε` values, strictly increasing in `(0, 1]`.
    pub grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub output_path: PathBuf,
    /// Retraction for the continuity run; truncation on `space` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handle: Option<HandleDescriptor>,
    /// Number of points of `K` for the perturbation run.
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    3
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.grid.is_empty() {
            return bad("grid is empty".into());
        }
        if self.grid.iter().any(|g| !(*g > 0.0 && *g <= 1.0)) {
            return bad("grid values must lie in (0, 1]".into());
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("grid must be strictly increasing".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.points == 0 {
            return bad("points must be at least 1".into());
        }
        if self.handle.is_some() && self.experiment != Experiment::RetractionContinuity {
            return bad("handle is only used by the retraction-continuity experiment".into());
        }
        let open_grid = matches!(self.experiment, Experiment::Bpb | Experiment::Perturbation | Experiment::ConvexLemma);
        if open_grid && self.grid.last() == Some(&1.0) {
            return bad("grid values must be below 1 for this experiment".into());
        }
        if matches!(self.experiment, Experiment::Bpb | Experiment::Perturbation) && !is_smooth(&self.space) {
            return bad(format!("{} is not smooth; use an lp leaf with 1 < p < ∞", self.space));
        }
        self.space.validate().map_err(|e| Error::ConfigInvalid(e.to_string()))
    }

    /// Sidecar path: the output path with a `.json` extension.
    pub fn sidecar_path(&self) -> PathBuf {
        self.output_path.with_extension("json")
    }
}

fn is_smooth(spec: &SpaceSpec) -> bool {
    match spec {
        SpaceSpec::Lp { p, dim } => *dim == 1 || (*p > 1.0 && p.is_finite()),
        SpaceSpec::Sup { dim } => *dim == 1,
        _ => false,
    }
}

/// A rendered table plus the count of rows whose `pass` column is false.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub csv: String,
    pub rows: usize,
    pub failures: usize,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Dispatch on `config.experiment`.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    match config.experiment {
        Experiment::Modulus => run_modulus(config),
        Experiment::RetractionContinuity => run_continuity(config),
        Experiment::Bpb => run_bpb(config),
        Experiment::Perturbation => run_perturbation(config),
        Experiment::ConvexLemma => run_lemma(config),
    }
}

/// Write the CSV and the JSON config sidecar.
pub fn write_outputs(config: &ExperimentConfig, report: &RunReport) -> Result<()> {
    let sidecar = serde_json::to_string_pretty(config)? + "\n";
    if let Some(dir) = config.output_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&config.output_path, &report.csv)?;
    fs::write(config.sidecar_path(), sidecar)?;
    Ok(())
}
