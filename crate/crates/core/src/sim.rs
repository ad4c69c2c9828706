//! Closed-loop simulation of plant, brake actuator, attack policy and observer.
//!
//! The plant (and the observer when enabled) are co-integrated with RK4. The
//! brake command and the applied torque are zero-order held over each step.

use serde::{Deserialize, Serialize};

use crate::actuator::{ActuatorModel, ActuatorParams};
use crate::attack::AttackPolicy;
use crate::error::{Error, Result};
use crate::integrate::rk4_step;
use crate::ndob::{NdobInputs, NdobParams, NdobState};
use crate::traction::{slip_from_speeds, Plant, TractionState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateSystem {
    /// Integrate `(v, λ)`.
    #[default]
    VLambda,
    /// Integrate `(v, ω)` and derive `λ`.
    VOmega,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_max: f64,
    pub v0: f64,
    pub lambda0: f64,
    pub lockup_threshold: f64,
    pub v_floor: f64,
    pub coordinates: CoordinateSystem,
    /// Consecutive samples above the threshold that count as sustained lockup.
    pub sustain_steps: usize,
    /// Stop as soon as lockup is sustained.
    pub stop_on_lockup: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            t_max: 3.0,
            v0: 30.0,
            lambda0: 0.0,
            lockup_threshold: 0.99,
            v_floor: 0.5,
            coordinates: CoordinateSystem::VLambda,
            sustain_steps: 50,
            stop_on_lockup: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config(
                "sim.dt",
                format!("must be > 0, got {}", self.dt),
            ));
        }
        if !(self.t_max.is_finite() && self.t_max > self.dt) {
            return Err(Error::config(
                "sim.t_max",
                format!("must exceed dt = {}, got {}", self.dt, self.t_max),
            ));
        }
        if !(self.v_floor.is_finite() && self.v_floor > 0.0) {
            return Err(Error::config(
                "sim.v_floor",
                format!("must be > 0, got {}", self.v_floor),
            ));
        }
        if !(self.v0.is_finite() && self.v0 > self.v_floor) {
            return Err(Error::config(
                "sim.v0",
                format!("must exceed v_floor = {}, got {}", self.v_floor, self.v0),
            ));
        }
        if !(self.lockup_threshold > 0.0 && self.lockup_threshold <= 1.0) {
            return Err(Error::config(
                "sim.lockup_threshold",
                format!("must lie in (0, 1], got {}", self.lockup_threshold),
            ));
        }
        if !(self.lambda0 >= 0.0 && self.lambda0 < self.lockup_threshold) {
            return Err(Error::config(
                "sim.lambda0",
                format!(
                    "must lie in [0, lockup_threshold = {}), got {}",
                    self.lockup_threshold, self.lambda0
                ),
            ));
        }
        Ok(())
    }

    /// Number of integration steps needed to reach `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Everything needed for one closed-loop run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub plant: Plant,
    pub actuator: ActuatorParams,
    pub policy: AttackPolicy,
    pub ndob: NdobParams,
    pub sim: SimConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.plant.vehicle.validate()?;
        self.actuator.validate()?;
        self.policy.validate()?;
        if self.policy.use_ndob {
            self.ndob.validate()?;
        }
        self.sim.validate()
    }
}

/// One logged row, taken at the start of an integration step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub v: f64,
    pub omega: f64,
    pub lambda: f64,
    #[serde(rename = "e_L")]
    pub e_l: f64,
    pub mu: f64,
    /// Commanded dimensionless brake torque.
    pub torque_cmd: f64,
    /// Applied dimensionless brake torque, held over the step.
    pub torque_applied: f64,
    pub d_hat: f64,
    /// Lumped disturbance on the lockup error computed from the true plant.
    #[serde(rename = "delta_e_actual")]
    pub delta_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum Termination {
    TimeLimit,
    SpeedFloor,
    SustainedLockup,
    Failed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub time_to_lockup: Option<f64>,
    pub success: bool,
    pub final_v: f64,
    pub peak_command: f64,
    /// `T_c - time_to_lockup` for predefined-time policies.
    pub settling_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub name: String,
    pub samples: Vec<Sample>,
    pub metrics: Metrics,
    pub termination: Termination,
    /// Steps on which a slip or wheel-speed boundary clamp was applied.
    pub boundary_clamps: usize,
}

impl ScenarioResult {
    pub fn failed(&self) -> bool {
        matches!(self.termination, Termination::Failed(_))
    }
}

/// First crossing of `threshold` by `λ`, linearly interpolated between samples.
pub fn first_crossing(samples: &[Sample], threshold: f64) -> Option<f64> {
    let first = samples.first()?;
    if first.lambda >= threshold {
        return Some(first.t);
    }
    samples.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (b.lambda >= threshold)
            .then(|| a.t + (threshold - a.lambda) / (b.lambda - a.lambda) * (b.t - a.t))
    })
}

pub fn compute_metrics(samples: &[Sample], threshold: f64, settling_time: Option<f64>) -> Metrics {
    let time_to_lockup = first_crossing(samples, threshold);
    Metrics {
        time_to_lockup,
        success: time_to_lockup.is_some(),
        final_v: samples.last().map_or(f64::NAN, |s| s.v),
        peak_command: samples
            .iter()
            .map(|s| s.torque_cmd.abs())
            .fold(0.0, f64::max),
        settling_margin: settling_time.zip(time_to_lockup).map(|(t_c, t)| t_c - t),
    }
}

enum Outcome {
    Continue,
    Stop(Termination),
}

struct Runner<'a> {
    scenario: &'a Scenario,
    actuator: ActuatorModel,
    observer: Option<NdobState>,
    clamps: usize,
}

impl<'a> Runner<'a> {
    fn radius(&self) -> f64 {
        self.scenario.plant.vehicle.radius
    }

    /// Slip-coordinate state of the integration vector, projected onto the
    /// braking domain.
    fn traction_state(&self, y: &[f64; 3]) -> Result<TractionState> {
        let v = y[0];
        let lambda = match self.scenario.sim.coordinates {
            CoordinateSystem::VLambda => y[1].clamp(0.0, 1.0),
            CoordinateSystem::VOmega => {
                slip_from_speeds(v, y[1].clamp(0.0, v / self.radius()), self.radius())?
                    .clamp(0.0, 1.0)
            }
        };
        Ok(TractionState { v, lambda })
    }

    fn derivative(&self, t: f64, y: &[f64; 3], applied: f64, u: f64) -> Result<[f64; 3]> {
        let sc = self.scenario;
        let sim = &sc.sim;
        if !(y[0] > sim.v_floor) {
            return Err(Error::SpeedFloor {
                v: y[0],
                v_floor: sim.v_floor,
            });
        }
        let state = self.traction_state(y)?;
        let (dv, dx) = match sim.coordinates {
            CoordinateSystem::VLambda => {
                let (dv, mut dl) = sc.plant.rhs_v_lambda(t, state, applied, sim.v_floor)?;
                // Slip is confined to [0, 1]: a locked wheel cannot spin
                // backwards and the driving regime is not modelled.
                if (y[1] >= 1.0 && dl > 0.0) || (y[1] <= 0.0 && dl < 0.0) {
                    dl = 0.0;
                }
                (dv, dl)
            }
            CoordinateSystem::VOmega => {
                let r = self.radius();
                let omega = state.omega(r);
                let torque = sc.plant.vehicle.upsilon_to_torque(applied);
                let (dv, mut dw) = sc.plant.rhs_v_omega(t, state.v, omega, torque)?;
                if y[1] <= 0.0 && dw < 0.0 {
                    dw = 0.0;
                } else if r * y[1] >= y[0] && r * dw > dv {
                    dw = dv / r;
                }
                (dv, dw)
            }
        };
        let dz = match &self.observer {
            Some(obs) => {
                let adversary = &sc.policy.adversary;
                obs.derivative_at(
                    y[2],
                    &NdobInputs {
                        e_l: state.lockup_error(),
                        u,
                        v: state.v,
                        g_alpha: sc.plant.vehicle.g_alpha(),
                        mu_hat: adversary.mu_hat.eval_unchecked(state.lambda),
                        nu_hat: adversary.nu_hat,
                    },
                )?
            }
            None => 0.0,
        };
        Ok([dv, dx, dz])
    }

    fn clamp(&mut self, y: &mut [f64; 3]) {
        let hi = match self.scenario.sim.coordinates {
            CoordinateSystem::VLambda => 1.0,
            CoordinateSystem::VOmega => y[0] / self.radius(),
        };
        if y[1] < 0.0 || y[1] > hi {
            y[1] = y[1].clamp(0.0, hi.max(0.0));
            self.clamps += 1;
        }
    }

    fn step(
        &mut self,
        n: usize,
        y: &mut [f64; 3],
        samples: &mut Vec<Sample>,
        above: &mut usize,
    ) -> Result<Outcome> {
        let sc = self.scenario;
        let sim = &sc.sim;
        let t = n as f64 * sim.dt;
        if y[0] <= sim.v_floor {
            return Ok(Outcome::Stop(Termination::SpeedFloor));
        }
        let state = self.traction_state(y)?;
        let g_alpha = sc.plant.vehicle.g_alpha();
        let e_l = state.lockup_error();
        let u = sc.policy.variant.control(e_l);
        let d_hat = self.observer.as_ref().map(NdobState::d_hat);
        let cmd = sc.policy.command(state, g_alpha, d_hat)?;
        let applied = self.actuator.step(cmd)?;
        let adversary = &sc.policy.adversary;
        let lumped = sc.plant.lumped_disturbance(
            t,
            state,
            &adversary.mu_hat,
            adversary.nu_hat,
            sim.v_floor,
        )?;
        samples.push(Sample {
            t,
            v: state.v,
            omega: state.omega(self.radius()),
            lambda: state.lambda,
            e_l,
            mu: sc.plant.friction.eval(state.lambda)?,
            torque_cmd: cmd,
            torque_applied: applied,
            d_hat: d_hat.unwrap_or(0.0),
            delta_e: lumped.total,
        });

        *above = if state.lambda >= sim.lockup_threshold {
            *above + 1
        } else {
            0
        };
        if sim.stop_on_lockup && *above >= sim.sustain_steps.max(1) {
            return Ok(Outcome::Stop(Termination::SustainedLockup));
        }
        if n + 1 >= sim.steps() {
            return Ok(Outcome::Stop(Termination::TimeLimit));
        }

        let next = rk4_step(t, y, sim.dt, |t, y| self.derivative(t, y, applied, u));
        let mut next = match next {
            Ok(next) => next,
            Err(Error::SpeedFloor { .. }) => return Ok(Outcome::Stop(Termination::SpeedFloor)),
            Err(e) => return Err(e),
        };
        self.clamp(&mut next);
        *y = next;
        let e_next = self.traction_state(y)?.lockup_error();
        if let Some(obs) = self.observer.as_mut() {
            obs.set_state(y[2], e_next);
        }
        Ok(Outcome::Continue)
    }
}

/// Runs one scenario to completion.
///
/// Configuration errors are returned as `Err`; anything that goes wrong while
/// integrating ends the run early with [`Termination::Failed`] and whatever
/// was logged up to that point.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioResult> {
    scenario.validate()?;
    let sim = scenario.sim;
    let vehicle = scenario.plant.vehicle;
    let initial = TractionState::new(sim.v0, sim.lambda0)?;
    let observer = if scenario.policy.use_ndob {
        Some(NdobState::new(
            scenario.ndob,
            initial.lockup_error(),
            sim.v_floor,
        )?)
    } else {
        None
    };
    let mut runner = Runner {
        scenario,
        actuator: ActuatorModel::new(scenario.actuator, sim.dt)?,
        observer,
        clamps: 0,
    };
    let x0 = match sim.coordinates {
        CoordinateSystem::VLambda => initial.lambda,
        CoordinateSystem::VOmega => initial.omega(vehicle.radius),
    };
    let mut y = [
        initial.v,
        x0,
        runner.observer.as_ref().map_or(0.0, NdobState::z),
    ];

    let mut samples = Vec::with_capacity(sim.steps());
    let mut above = 0;
    let mut n = 0;
    let termination = loop {
        match runner.step(n, &mut y, &mut samples, &mut above) {
            Ok(Outcome::Continue) => n += 1,
            Ok(Outcome::Stop(reason)) => break reason,
            Err(e) => break Termination::Failed(e.to_string()),
        }
    };
    let metrics = compute_metrics(
        &samples,
        sim.lockup_threshold,
        scenario.policy.variant.settling_time(),
    );
    Ok(ScenarioResult {
        name: scenario.name.clone(),
        samples,
        metrics,
        termination,
        boundary_clamps: runner.clamps,
    })
}
