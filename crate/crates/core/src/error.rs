use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain where the model is defined.
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A parameter or configuration value violated an invariant.
    #[error("invalid `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("disturbance {channel} = {value} exceeds its declared bound {bound} at t = {t}")]
    DisturbanceBound {
        channel: &'static str,
        t: f64,
        value: f64,
        bound: f64,
    },

    /// Speed fell below the floor where the slip dynamics stay well conditioned.
    #[error("speed {v} m/s is below the floor {v_floor} m/s")]
    SpeedFloor { v: f64, v_floor: f64 },

    #[error("integration failed at t = {t}: {reason} (state {state:?})")]
    Integration {
        t: f64,
        reason: String,
        state: Vec<f64>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed scenario document: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}
