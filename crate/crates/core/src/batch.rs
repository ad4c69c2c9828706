//! Batches of independent runs and the five-attack comparison suite.
//!
//! Runs share nothing, so with the `parallel` feature they are spread over the
//! rayon pool. Results come back in input order either way.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::config::{MuHatKey, RoadPreset, ScenarioFile, VariantKey};
use crate::error::{Error, Result};
use crate::sim::{first_crossing, run_scenario, ScenarioResult, Termination};

/// A named scenario document queued for a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchItem {
    pub name: String,
    pub config: ScenarioFile,
}

#[derive(Debug)]
pub struct BatchOutcome {
    pub item: BatchItem,
    pub result: Result<ScenarioResult>,
    pub elapsed: Duration,
}

fn run_one(item: &BatchItem) -> BatchOutcome {
    let start = Instant::now();
    let result = item
        .config
        .build(&item.name)
        .and_then(|sc| run_scenario(&sc));
    BatchOutcome {
        item: item.clone(),
        result,
        elapsed: start.elapsed(),
    }
}

pub fn run_batch_sequential(items: &[BatchItem]) -> Vec<BatchOutcome> {
    items.iter().map(run_one).collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_parallel(items: &[BatchItem]) -> Vec<BatchOutcome> {
    use rayon::prelude::*;
    items.par_iter().map(run_one).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn run_batch(items: &[BatchItem]) -> Vec<BatchOutcome> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(items)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(items)
    }
}

/// The five attacks compared on one road: a constant brake torque, the
/// power-law and exponential laws without observer, and both with observer.
/// All use `μ̂ = 0`, `k = 0` and the remaining settings of `base`.
pub fn five_attacks(base: &ScenarioFile, road: RoadPreset) -> Vec<BatchItem> {
    let base = base.clone().with_road(road);
    let entries = [
        ("constant", VariantKey::Constant, false),
        ("phi_p", VariantKey::Prop1, false),
        ("phi_1", VariantKey::Prop3, false),
        ("phi_p_ndob", VariantKey::Prop1, true),
        ("phi_1_ndob", VariantKey::Prop3, true),
    ];
    entries
        .into_iter()
        .map(|(label, variant, ndob)| {
            let mut config = base.clone();
            config.attack.variant = variant;
            config.attack.k = 0.0;
            config.attack.k_a = 0.0;
            config.attack.mu_hat = MuHatKey::Zero;
            config.attack.use_ndob = Some(ndob);
            config.ndob.enabled = None;
            BatchItem {
                name: format!("{}_{label}", road.label()),
                config,
            }
        })
        .collect()
}

/// One line of a batch summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub name: String,
    pub success: bool,
    pub time_to_lockup: Option<f64>,
    pub max_lambda: f64,
    pub final_v: f64,
    pub termination: String,
}

impl SummaryRow {
    pub fn from_outcome(outcome: &BatchOutcome) -> Self {
        match &outcome.result {
            Ok(r) => Self {
                name: r.name.clone(),
                success: r.metrics.success,
                time_to_lockup: r.metrics.time_to_lockup,
                max_lambda: r.samples.iter().map(|s| s.lambda).fold(0.0, f64::max),
                final_v: r.metrics.final_v,
                termination: termination_label(&r.termination),
            },
            Err(e) => Self {
                name: outcome.item.name.clone(),
                success: false,
                time_to_lockup: None,
                max_lambda: f64::NAN,
                final_v: f64::NAN,
                termination: format!("error: {e}"),
            },
        }
    }
}

fn termination_label(t: &Termination) -> String {
    match t {
        Termination::TimeLimit => "time_limit".into(),
        Termination::SpeedFloor => "speed_floor".into(),
        Termination::SustainedLockup => "sustained_lockup".into(),
        Termination::Failed(why) => format!("failed: {why}"),
    }
}

/// First time `λ` reaches `threshold` in a finished run.
pub fn crossing_time(result: &ScenarioResult, threshold: f64) -> Option<f64> {
    first_crossing(&result.samples, threshold)
}

pub fn write_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Fixed-width text table of a batch.
pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<28} {:>7} {:>12} {:>8} {:>9}  termination",
        "run", "success", "t_lockup [s]", "max λ", "v_end"
    );
    for r in rows {
        let t = r
            .time_to_lockup
            .map_or("-".to_string(), |t| format!("{t:.4}"));
        let _ = writeln!(
            out,
            "{:<28} {:>7} {:>12} {:>8.4} {:>9.3}  {}",
            r.name, r.success, t, r.max_lambda, r.final_v, r.termination
        );
    }
    out
}
