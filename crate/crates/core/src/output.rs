//! Trajectory CSV files and JSON run manifests.
//!
//! Floats are written in shortest round-trip form, so reading a trajectory
//! back yields bit-identical samples.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioFile;
use crate::error::{Error, Result};
use crate::sim::{compute_metrics, Metrics, Sample, ScenarioResult, Termination};

/// Column order of trajectory files.
pub const CSV_HEADER: [&str; 10] = [
    "t",
    "v",
    "omega",
    "lambda",
    "e_L",
    "mu",
    "torque_cmd",
    "torque_applied",
    "d_hat",
    "delta_e_actual",
];

pub fn write_csv(samples: &[Sample], path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for s in samples {
        w.serialize(s).map_err(csv_err)?;
    }
    if samples.is_empty() {
        w.write_record(CSV_HEADER).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Provenance record written next to each trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub tool_version: String,
    /// Fully resolved scenario, every default filled in.
    pub config: ScenarioFile,
    pub road: String,
    pub policy: String,
    pub use_ndob: bool,
    /// Predefined settling time of the policy, when it has one.
    pub settling_time: Option<f64>,
    pub lockup_threshold: f64,
    pub metrics: Metrics,
    pub termination: Termination,
    pub rows: usize,
    pub boundary_clamps: usize,
    pub wall_clock_s: f64,
    pub csv: PathBuf,
}

impl RunManifest {
    pub fn new(
        config: &ScenarioFile,
        result: &ScenarioResult,
        elapsed: Duration,
        csv: PathBuf,
    ) -> Self {
        let variant = config.variant();
        Self {
            name: result.name.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            road: config.road_label().to_string(),
            policy: variant.label().to_string(),
            use_ndob: config.use_ndob().unwrap_or(false),
            settling_time: variant.settling_time(),
            lockup_threshold: config.sim.lockup_threshold,
            metrics: result.metrics,
            termination: result.termination.clone(),
            rows: result.samples.len(),
            boundary_clamps: result.boundary_clamps,
            wall_clock_s: elapsed.as_secs_f64(),
            csv,
        }
    }

    /// Metrics recomputed from a trajectory with this run's threshold and
    /// settling time.
    pub fn recompute_metrics(&self, samples: &[Sample]) -> Metrics {
        compute_metrics(samples, self.lockup_threshold, self.settling_time)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::to_writer_pretty(BufWriter::new(file), self).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Paths of the files written for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFiles {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
pub fn write_run(
    dir: &Path,
    config: &ScenarioFile,
    result: &ScenarioResult,
    elapsed: Duration,
) -> Result<RunFiles> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let csv = dir.join(format!("{}.csv", result.name));
    let manifest = dir.join(format!("{}.json", result.name));
    write_csv(&result.samples, &csv)?;
    let file_name = PathBuf::from(csv.file_name().expect("joined path has a file name"));
    RunManifest::new(config, result, elapsed, file_name).write(&manifest)?;
    Ok(RunFiles { csv, manifest })
}
