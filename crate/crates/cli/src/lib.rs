//! Configuration parsing, experiment dispatch and report emission for the
//! `curvelab` command-line runner.

pub mod config;
pub mod emit;
pub mod experiments;

use std::path::{Path, PathBuf};
use std::time::Instant;

use curvelab_core::ExperimentReport;

pub use config::{parse_config, ConfigError, ConfigErrors, CurveSpec, ExperimentConfig};
pub use experiments::{run, Experiment};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration {path}:\n{errors}")]
    Config { path: PathBuf, errors: ConfigErrors },
    #[error(transparent)]
    Emit(#[from] emit::EmitError),
    #[error("experiment failed: {0}")]
    Experiment(#[from] curvelab_core::Error),
}

/// Command-line overrides applied on top of a configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Paths written by [`run_to_dir`].
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub meta: PathBuf,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let mut cfg = parse_config(&text).map_err(|errors| CliError::Config { path: path.to_path_buf(), errors })?;
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    if let Some(b) = overrides.budget {
        cfg.budget = Some(b);
    }
    if let Some(o) = &overrides.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

/// Runs an experiment and writes `<name>.csv`, `<name>.svg` and `<name>.meta`.
pub fn run_to_dir(cfg: &ExperimentConfig) -> Result<(ExperimentReport, Outputs), CliError> {
    let start = Instant::now();
    let report = run(cfg)?;
    let wall = start.elapsed().as_secs_f64();
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)
        .map_err(|source| emit::EmitError { path: dir.clone(), source })?;
    let name = cfg.experiment.name();
    let outputs = Outputs {
        csv: dir.join(format!("{name}.csv")),
        svg: dir.join(format!("{name}.svg")),
        meta: dir.join(format!("{name}.meta")),
    };
    emit::emit_csv(&report, &outputs.csv)?;
    emit::emit_svg(&report, &outputs.svg)?;
    emit::emit_meta(&report, cfg.seed, wall, &outputs.meta)?;
    Ok((report, outputs))
}
