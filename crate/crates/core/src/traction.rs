//! Single-wheel longitudinal braking dynamics.
//!
//! Two coordinate systems are supported: wheel speed `(v, ω)` and wheel slip
//! `(v, λ)`. Torques in the slip coordinates are dimensionless,
//! `Υ = r T / (J g_α)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::friction::FrictionModel;

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Quarter-car physical constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams {
    /// Quarter-car mass (kg).
    pub mass: f64,
    /// Wheel radius (m).
    pub radius: f64,
    /// Wheel inertia (kg·m²).
    pub inertia: f64,
    /// Road slope (rad).
    pub slope: f64,
    /// Gravitational acceleration (m/s²).
    pub gravity: f64,
}

impl VehicleParams {
    pub fn new(mass: f64, radius: f64, inertia: f64, slope: f64, gravity: f64) -> Result<Self> {
        let params = Self {
            mass,
            radius,
            inertia,
            slope,
            gravity,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("vehicle.M", self.mass),
            ("vehicle.r", self.radius),
            ("vehicle.J", self.inertia),
            ("vehicle.g", self.gravity),
        ];
        for (key, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(key, format!("must be > 0, got {value}")));
            }
        }
        if !(self.slope.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config(
                "vehicle.alpha_deg",
                format!(
                    "slope must lie strictly within ±90°, got {} rad",
                    self.slope
                ),
            ));
        }
        Ok(())
    }

    /// `g cos(α)`.
    #[inline]
    pub fn g_alpha(&self) -> f64 {
        self.gravity * self.slope.cos()
    }

    /// Vehicle-to-wheel inertia ratio `M r² / J`.
    #[inline]
    pub fn nu(&self) -> f64 {
        self.mass * self.radius * self.radius / self.inertia
    }

    /// Physical brake torque (N·m) to dimensionless torque.
    #[inline]
    pub fn torque_to_upsilon(&self, torque: f64) -> f64 {
        self.radius * torque / (self.inertia * self.g_alpha())
    }

    #[inline]
    pub fn upsilon_to_torque(&self, upsilon: f64) -> f64 {
        upsilon * self.inertia * self.g_alpha() / self.radius
    }
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 250.0,
            radius: 0.3,
            inertia: 1.5,
            slope: 0.0,
            gravity: STANDARD_GRAVITY,
        }
    }
}

/// Time-varying signal behind a disturbance channel.
#[derive(Clone, Default)]
pub enum Signal {
    #[default]
    Zero,
    Constant(f64),
    /// `amplitude · sin(2π f t + phase)`.
    Sinusoid {
        amplitude: f64,
        frequency_hz: f64,
        phase: f64,
    },
    /// Arbitrary `(t, state) -> value`; the state is `v` for the force channel
    /// and `ω` for the torque channel.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signal::Zero => f.write_str("Zero"),
            Signal::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Signal::Sinusoid {
                amplitude,
                frequency_hz,
                phase,
            } => f
                .debug_struct("Sinusoid")
                .field("amplitude", amplitude)
                .field("frequency_hz", frequency_hz)
                .field("phase", phase)
                .finish(),
            Signal::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Signal {
    #[inline]
    fn value(&self, t: f64, x: f64) -> f64 {
        match self {
            Signal::Zero => 0.0,
            Signal::Constant(c) => *c,
            Signal::Sinusoid {
                amplitude,
                frequency_hz,
                phase,
            } => amplitude * (std::f64::consts::TAU * frequency_hz * t + phase).sin(),
            Signal::Custom(f) => f(t, x),
        }
    }

    /// Largest magnitude a built-in signal can take, `None` for custom ones.
    fn peak(&self) -> Option<f64> {
        match self {
            Signal::Zero => Some(0.0),
            Signal::Constant(c) => Some(c.abs()),
            Signal::Sinusoid { amplitude, .. } => Some(amplitude.abs()),
            Signal::Custom(_) => None,
        }
    }
}

/// A disturbance channel together with its declared uniform bound.
#[derive(Debug, Clone, Default)]
pub struct BoundedDisturbance {
    signal: Signal,
    bound: f64,
}

impl BoundedDisturbance {
    pub fn new(channel: &'static str, signal: Signal, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::config(
                channel,
                format!("declared bound must be finite and >= 0, got {bound}"),
            ));
        }
        if let Some(peak) = signal.peak() {
            if !peak.is_finite() || peak > bound {
                return Err(Error::config(
                    channel,
                    format!("signal peak {peak} exceeds declared bound {bound}"),
                ));
            }
        }
        Ok(Self { signal, bound })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.signal, Signal::Zero)
    }

    /// Samples the channel and checks it against the declared bound.
    pub fn sample(&self, channel: &'static str, t: f64, x: f64) -> Result<f64> {
        let value = self.signal.value(t, x);
        if !(value.abs() <= self.bound) {
            return Err(Error::DisturbanceBound {
                channel,
                t,
                value,
                bound: self.bound,
            });
        }
        Ok(value)
    }
}

/// Unmodelled force on the vehicle and torque on the wheel.
#[derive(Debug, Clone, Default)]
pub struct DisturbanceSpec {
    /// `Δ_v(t, v)` in N.
    pub force: BoundedDisturbance,
    /// `Δ_ω(t, ω)` in N·m.
    pub torque: BoundedDisturbance,
}

impl DisturbanceSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.force.is_zero() && self.torque.is_zero()
    }

    pub fn force_at(&self, t: f64, v: f64) -> Result<f64> {
        self.force.sample("delta_v", t, v)
    }

    pub fn torque_at(&self, t: f64, omega: f64) -> Result<f64> {
        self.torque.sample("delta_w", t, omega)
    }
}

/// Braking state in slip coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TractionState {
    pub v: f64,
    pub lambda: f64,
}

impl TractionState {
    pub fn new(v: f64, lambda: f64) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain("v", v, "(0, ∞)"));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain("lambda", lambda, "[0, 1]"));
        }
        Ok(Self { v, lambda })
    }

    #[inline]
    pub fn omega(&self, radius: f64) -> f64 {
        self.v * (1.0 - self.lambda) / radius
    }

    /// `λ - 1`; zero exactly on the lockup manifold.
    #[inline]
    pub fn lockup_error(&self) -> f64 {
        self.lambda - 1.0
    }
}

/// Negative slip this close to zero is rounding, not a driving wheel.
const SLIP_ROUNDOFF: f64 = 1e-12;

/// Longitudinal slip `(v - rω) / max(v, rω)`.
pub fn slip_from_speeds(v: f64, omega: f64, radius: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::domain("v", v, "(0, ∞)"));
    }
    if !(omega >= 0.0) {
        return Err(Error::domain("omega", omega, "[0, ∞)"));
    }
    let rim = radius * omega;
    Ok((v - rim) / v.max(rim))
}

/// Inverse of [`slip_from_speeds`] in the braking regime.
pub fn speeds_from_slip(state: TractionState, radius: f64) -> (f64, f64) {
    (state.v, state.omega(radius))
}

/// Dimensionless disturbance terms entering the slip equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDisturbance {
    /// `Δ_v / (M g_α)`.
    pub force: f64,
    /// `r Δ_ω / (J g_α)`.
    pub torque: f64,
}

/// Lumped disturbance acting on the lockup error dynamics, in 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedDisturbance {
    /// `(g_α / v) e_L (μ + Υ_Δv)`, vanishing on the lockup manifold.
    pub vanishing: f64,
    /// Vanishing part plus model mismatch and wheel torque disturbance.
    pub total: f64,
}

/// The physical plant: vehicle, true road friction, and disturbances.
#[derive(Debug, Clone)]
pub struct Plant {
    pub vehicle: VehicleParams,
    pub friction: FrictionModel,
    pub disturbances: DisturbanceSpec,
}

impl Plant {
    pub fn new(
        vehicle: VehicleParams,
        friction: FrictionModel,
        disturbances: DisturbanceSpec,
    ) -> Self {
        Self {
            vehicle,
            friction,
            disturbances,
        }
    }

    pub fn scaled_disturbance(&self, t: f64, v: f64, omega: f64) -> Result<ScaledDisturbance> {
        let p = &self.vehicle;
        let g_alpha = p.g_alpha();
        Ok(ScaledDisturbance {
            force: self.disturbances.force_at(t, v)? / (p.mass * g_alpha),
            torque: p.radius * self.disturbances.torque_at(t, omega)? / (p.inertia * g_alpha),
        })
    }

    /// `(dv/dt, dω/dt)` for brake torque `torque` in N·m.
    pub fn rhs_v_omega(&self, t: f64, v: f64, omega: f64, torque: f64) -> Result<(f64, f64)> {
        let p = &self.vehicle;
        let mut lambda = slip_from_speeds(v, omega, p.radius)?;
        // ω = v (1 - λ) / r can land a few ulps above v / r at zero slip.
        if (-SLIP_ROUNDOFF..0.0).contains(&lambda) {
            lambda = 0.0;
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain("lambda", lambda, "[0, 1] (braking regime)"));
        }
        let mu = self.friction.eval_unchecked(lambda);
        let g_alpha = p.g_alpha();
        let delta_v = self.disturbances.force_at(t, v)?;
        let delta_w = self.disturbances.torque_at(t, omega)?;
        let dv = -g_alpha * mu - delta_v / p.mass;
        let domega =
            p.mass * g_alpha * p.radius / p.inertia * mu - torque / p.inertia - delta_w / p.inertia;
        Ok((dv, domega))
    }

    /// `(dv/dt, dλ/dt)` for dimensionless applied torque `upsilon`.
    ///
    /// Returns [`Error::SpeedFloor`] when `v < v_floor`.
    pub fn rhs_v_lambda(
        &self,
        t: f64,
        state: TractionState,
        upsilon: f64,
        v_floor: f64,
    ) -> Result<(f64, f64)> {
        let TractionState { v, lambda } = state;
        if !(v >= v_floor) || v <= 0.0 {
            return Err(Error::SpeedFloor { v, v_floor });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain("lambda", lambda, "[0, 1]"));
        }
        let p = &self.vehicle;
        let g_alpha = p.g_alpha();
        let mu = self.friction.eval_unchecked(lambda);
        let dist = self.scaled_disturbance(t, v, state.omega(p.radius))?;
        let dv = -g_alpha * mu - dist.force * g_alpha;
        let dlambda = g_alpha / v
            * ((lambda - 1.0 - p.nu()) * mu + upsilon + dist.torque + (lambda - 1.0) * dist.force);
        Ok((dv, dlambda))
    }

    /// Lumped disturbance seen by the lockup error for an adversary whose
    /// model is `nu_hat · mu_hat(λ)`.
    pub fn lumped_disturbance(
        &self,
        t: f64,
        state: TractionState,
        mu_hat: &FrictionModel,
        nu_hat: f64,
        v_floor: f64,
    ) -> Result<LumpedDisturbance> {
        let TractionState { v, lambda } = state;
        if !(v > v_floor) {
            return Err(Error::SpeedFloor { v, v_floor });
        }
        let p = &self.vehicle;
        let g_alpha = p.g_alpha();
        let mu = self.friction.eval(lambda)?;
        let mu_hat = mu_hat.eval(lambda)?;
        let dist = self.scaled_disturbance(t, v, state.omega(p.radius))?;
        let scale = g_alpha / v;
        let vanishing = scale * state.lockup_error() * (mu + dist.force);
        let total = vanishing + scale * (nu_hat * mu_hat - p.nu() * mu) + scale * dist.torque;
        Ok(LumpedDisturbance { vanishing, total })
    }
}
