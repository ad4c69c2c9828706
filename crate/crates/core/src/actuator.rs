//! Friction brake response: first-order lag behind a pure transport delay.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lag and deadtime of the friction brake, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActuatorParams {
    pub time_constant: f64,
    pub deadtime: f64,
    /// Optional saturation `[0, max]` on the commanded torque.
    pub clamp_max: Option<f64>,
}

impl ActuatorParams {
    pub const IDEAL: Self = Self {
        time_constant: 0.0,
        deadtime: 0.0,
        clamp_max: None,
    };

    pub fn is_ideal(&self) -> bool {
        self.time_constant == 0.0 && self.deadtime == 0.0 && self.clamp_max.is_none()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_constant.is_finite() && self.time_constant >= 0.0) {
            return Err(Error::config(
                "actuator.tau_f_ms",
                format!("must be >= 0, got {} s", self.time_constant),
            ));
        }
        if !(self.deadtime.is_finite() && self.deadtime >= 0.0) {
            return Err(Error::config(
                "actuator.delta_f_ms",
                format!("must be >= 0, got {} s", self.deadtime),
            ));
        }
        if let Some(max) = self.clamp_max {
            if !(max.is_finite() && max >= 0.0) {
                return Err(Error::config(
                    "actuator.clamp_max",
                    format!("must be >= 0, got {max}"),
                ));
            }
        }
        Ok(())
    }
}

impl Default for ActuatorParams {
    fn default() -> Self {
        Self {
            time_constant: 0.016,
            deadtime: 0.015,
            clamp_max: None,
        }
    }
}

/// Discrete-time brake actuator sampled at a fixed step.
///
/// The lag is discretized exactly for piecewise-constant commands, so the
/// only approximation is rounding the deadtime to whole steps.
#[derive(Debug, Clone)]
pub struct ActuatorModel {
    params: ActuatorParams,
    dt: f64,
    decay: f64,
    applied: f64,
    delay_line: VecDeque<f64>,
}

impl ActuatorModel {
    pub fn new(params: ActuatorParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config("sim.dt", format!("must be > 0, got {dt}")));
        }
        if params.deadtime > 0.0 && dt > params.deadtime {
            return Err(Error::config(
                "sim.dt",
                format!(
                    "step {dt} s exceeds the brake deadtime {} s",
                    params.deadtime
                ),
            ));
        }
        let slots = (params.deadtime / dt).round() as usize;
        let residual = (params.deadtime - slots as f64 * dt).abs();
        if residual > dt / 10.0 {
            log::warn!(
                "deadtime {} s rounded to {slots} steps of {dt} s (off by {residual} s)",
                params.deadtime
            );
        }
        let decay = if params.time_constant > 0.0 {
            (-dt / params.time_constant).exp()
        } else {
            0.0
        };
        Ok(Self {
            params,
            dt,
            decay,
            applied: 0.0,
            delay_line: std::iter::repeat_n(0.0, slots).collect(),
        })
    }

    pub fn params(&self) -> ActuatorParams {
        self.params
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn delay_slots(&self) -> usize {
        self.delay_line.len()
    }

    /// Torque currently applied to the wheel.
    pub fn applied(&self) -> f64 {
        self.applied
    }

    /// Feeds one command sample and returns the applied torque one step later.
    pub fn step(&mut self, command: f64) -> Result<f64> {
        if !command.is_finite() {
            return Err(Error::domain("torque command", command, "finite"));
        }
        let command = match self.params.clamp_max {
            Some(max) => command.clamp(0.0, max),
            None => command,
        };
        let delayed = if self.delay_line.is_empty() {
            command
        } else {
            self.delay_line.push_back(command);
            self.delay_line
                .pop_front()
                .expect("delay line is non-empty")
        };
        self.applied = if self.params.time_constant > 0.0 {
            self.decay * self.applied + (1.0 - self.decay) * delayed
        } else {
            delayed
        };
        Ok(self.applied)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn lagged(tau: f64, delta: f64, dt: f64) -> ActuatorModel {
        ActuatorModel::new(
            ActuatorParams {
                time_constant: tau,
                deadtime: delta,
                clamp_max: None,
            },
            dt,
        )
        .unwrap()
    }

    #[test]
    fn ideal_actuator_passes_through() {
        let mut a = ActuatorModel::new(ActuatorParams::IDEAL, 1e-3).unwrap();
        assert_eq!(a.step(5.0).unwrap(), 5.0);
        assert_eq!(a.step(-3.25).unwrap(), -3.25);
    }

    #[test]
    fn first_lag_step_matches_exact_discretization() {
        let mut a = lagged(0.016, 0.0, 1e-3);
        // 1 - e^{-1/16}
        assert_relative_eq!(
            a.step(1.0).unwrap(),
            0.060_586_937_186_524_21,
            max_relative = 1e-12
        );
    }

    #[test]
    fn deadtime_holds_initial_output() {
        let mut a = lagged(0.016, 0.015, 1e-3);
        assert_eq!(a.delay_slots(), 15);
        for _ in 0..15 {
            assert_eq!(a.step(1.0).unwrap(), 0.0);
        }
        assert_relative_eq!(
            a.step(1.0).unwrap(),
            1.0 - (-1.0f64 / 16.0).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn delayed_lag_matches_fine_continuous_integration() {
        // Brute force: integrate τ ẏ = -y + u(t - δ) with explicit Euler at 1 µs.
        let (tau, delta) = (0.016, 0.015);
        let fine = 1e-6;
        let mut y = 0.0;
        let mut reference = Vec::new();
        let mut t = 0.0;
        for k in 1..=60_000 {
            let u = if t >= delta { 1.0 } else { 0.0 };
            y += fine / tau * (u - y);
            t = k as f64 * fine;
            if k % 1000 == 0 {
                reference.push(y);
            }
        }
        let mut a = lagged(tau, delta, 1e-3);
        for expected in reference {
            let got = a.step(1.0).unwrap();
            assert!((got - expected).abs() < 5e-4, "{got} vs {expected}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut a = lagged(0.016, 0.0, 1e-3);
        assert!(a.step(f64::NAN).is_err());
        assert!(ActuatorModel::new(ActuatorParams::IDEAL, -1e-3).is_err());
        assert!(ActuatorModel::new(ActuatorParams::IDEAL, 0.0).is_err());
        assert!(ActuatorModel::new(ActuatorParams::default(), 0.02).is_err());
    }

    #[test]
    fn optional_clamp_limits_command() {
        let mut a = ActuatorModel::new(
            ActuatorParams {
                clamp_max: Some(10.0),
                ..ActuatorParams::IDEAL
            },
            1e-3,
        )
        .unwrap();
        assert_eq!(a.step(50.0).unwrap(), 10.0);
        assert_eq!(a.step(-4.0).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn converges_to_constant_command_exponentially(
            c in -100.0f64..100.0, tau_ms in 1.0f64..50.0, steps in 1usize..500,
        ) {
            let dt = 1e-3;
            let tau = tau_ms * 1e-3;
            let mut a = lagged(tau, 0.0, dt);
            let mut y = 0.0;
            for _ in 0..steps {
                y = a.step(c).unwrap();
            }
            let envelope = c.abs() * (-(steps as f64) * dt / tau).exp();
            prop_assert!((y - c).abs() <= envelope * (1.0 + 1e-9) + 1e-12);
        }

        #[test]
        fn pass_through_is_bit_identical(cmds in proptest::collection::vec(-1e6f64..1e6, 1..50)) {
            let mut a = ActuatorModel::new(ActuatorParams::IDEAL, 1e-4).unwrap();
            for c in cmds {
                prop_assert_eq!(a.step(c).unwrap().to_bits(), c.to_bits());
            }
        }
    }
}
