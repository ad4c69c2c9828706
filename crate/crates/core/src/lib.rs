//! Simulation toolkit for wheel-lockup attacks on quarter-car braking
//! dynamics.
//!
//! The pipeline is: [`traction`] dynamics driven by a [`friction`] curve,
//! brake commands shaped by the [`actuator`] lag and deadtime, predefined-time
//! [`attack`] policies optionally assisted by the disturbance observer in
//! [`ndob`], all advanced by fixed-step RK4 in [`sim`]. [`config`], [`output`]
//! and [`batch`] turn that into reproducible experiments.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod actuator;
pub mod attack;
pub mod batch;
pub mod config;
pub mod error;
pub mod friction;
pub mod integrate;
pub mod ndob;
pub mod output;
pub mod sim;
pub mod traction;

pub use error::{Error, Result};
