//! Nonlinear disturbance observer on the lockup error dynamics.
//!
//! The observer estimates the lumped disturbance `Δ'_e` in
//! `ė_L = u + Δ'_e - d̂` from attacker-side signals only: the lockup error,
//! the virtual control, the measured speed, and the adversary's own friction
//! model. Nothing here can see the true road or vehicle parameters.
//!
//! With the auxiliary variable `p = L e_L` and output `d̂ = z + p`, the
//! [`ObserverForm::Tracking`] form satisfies `d/dt (d̂ - Δ'_e) = -L (d̂ - Δ'_e)`
//! for a constant disturbance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObserverForm {
    /// `ż = -L z - L (u - d̂ + p)`: nominal error dynamics `ė_L = u - d̂`.
    #[default]
    Tracking,
    /// `ż = -L z - L {u + (g_α/v)(-d̂ + ν̂ μ̂(λ) + p)}`. Does not converge to
    /// `Δ'_e` unless `v = g_α`; kept for comparison runs.
    Published,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObserverInit {
    /// `z(0) = 0`, so the estimate starts at `L e_L(0)`.
    #[default]
    ZeroState,
    /// `z(0) = -L e_L(0)`, so the estimate starts at zero.
    ZeroOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdobParams {
    /// Observer gain `L_d` (1/s).
    pub gain: f64,
    pub form: ObserverForm,
    pub init: ObserverInit,
}

impl Default for NdobParams {
    fn default() -> Self {
        Self {
            gain: 2.65,
            form: ObserverForm::Tracking,
            init: ObserverInit::ZeroState,
        }
    }
}

impl NdobParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return Err(Error::config(
                "ndob.L_d",
                format!("must be > 0, got {}", self.gain),
            ));
        }
        Ok(())
    }
}

/// Attacker-side signals the observer consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdobInputs {
    pub e_l: f64,
    /// Virtual control `u` (1/s).
    pub u: f64,
    pub v: f64,
    pub g_alpha: f64,
    /// The adversary's `μ̂(λ)` at the current slip.
    pub mu_hat: f64,
    pub nu_hat: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NdobState {
    params: NdobParams,
    v_floor: f64,
    z: f64,
    p: f64,
    d_hat: f64,
}

impl NdobState {
    pub fn new(params: NdobParams, e_l0: f64, v_floor: f64) -> Result<Self> {
        params.validate()?;
        let z = match params.init {
            ObserverInit::ZeroOutput => -params.gain * e_l0,
            ObserverInit::ZeroState => 0.0,
        };
        let mut obs = Self {
            params,
            v_floor,
            z,
            p: 0.0,
            d_hat: 0.0,
        };
        obs.set_state(z, e_l0);
        Ok(obs)
    }

    pub fn params(&self) -> NdobParams {
        self.params
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn aux(&self) -> f64 {
        self.p
    }

    /// Current disturbance estimate `d̂ = z + L e_L`.
    pub fn d_hat(&self) -> f64 {
        self.d_hat
    }

    /// Installs a new internal state and refreshes the output from `e_l`.
    pub fn set_state(&mut self, z: f64, e_l: f64) {
        self.z = z;
        self.p = self.params.gain * e_l;
        self.d_hat = self.z + self.p;
    }

    /// `dz/dt` at internal state `z`, with `p` and `d̂` recomputed from `e_L`.
    pub fn derivative_at(&self, z: f64, inputs: &NdobInputs) -> Result<f64> {
        if !(inputs.v > self.v_floor) {
            return Err(Error::SpeedFloor {
                v: inputs.v,
                v_floor: self.v_floor,
            });
        }
        let l = self.params.gain;
        let p = l * inputs.e_l;
        let d_hat = z + p;
        let nominal = match self.params.form {
            ObserverForm::Tracking => inputs.u - d_hat + p,
            ObserverForm::Published => {
                inputs.u + inputs.g_alpha / inputs.v * (-d_hat + inputs.nu_hat * inputs.mu_hat + p)
            }
        };
        Ok(-l * z - l * nominal)
    }

    pub fn derivative(&self, inputs: &NdobInputs) -> Result<f64> {
        self.derivative_at(self.z, inputs)
    }

    /// Advances the observer alone by one RK4 step with `inputs` held, then
    /// refreshes the output from `e_l_next`.
    pub fn step(&mut self, inputs: &NdobInputs, e_l_next: f64, dt: f64) -> Result<f64> {
        if !(dt > 0.0) {
            return Err(Error::domain("dt", dt, "(0, ∞)"));
        }
        let z = self.z;
        let k1 = self.derivative_at(z, inputs)?;
        let k2 = self.derivative_at(z + 0.5 * dt * k1, inputs)?;
        let k3 = self.derivative_at(z + 0.5 * dt * k2, inputs)?;
        let k4 = self.derivative_at(z + dt * k3, inputs)?;
        self.set_state(z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), e_l_next);
        Ok(self.d_hat)
    }
}
