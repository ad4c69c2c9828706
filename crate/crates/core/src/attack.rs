//! Predefined-time brake attack policies.
//!
//! Each policy maps the lockup error `e_L = λ - 1` to a virtual control `u`
//! (1/s) on the error dynamics. [`attack_torque`] turns `u` into the
//! dimensionless brake command using the adversary's plant model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::friction::FrictionModel;
use crate::traction::{TractionState, VehicleParams};

/// `sign(x)` with `sign(0) = 0`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::config(
            "attack.p",
            format!("must lie in (0, 1), got {p}"),
        ));
    }
    Ok(())
}

/// `exp(|x|^p) / p · |x|^(1-p) · sign(x)`.
pub fn phi_p(x: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(phi_p_unchecked(x, p))
}

#[inline]
fn phi_p_unchecked(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let a = x.abs();
    (a.powf(p)).exp() / p * a.powf(1.0 - p) * sign(x)
}

/// `exp(|x|) · sign(x)`.
#[inline]
pub fn phi_1(x: f64) -> f64 {
    x.abs().exp() * sign(x)
}

fn check_min_speed(v_min: f64) -> Result<()> {
    if !(v_min > 0.0) {
        return Err(Error::config(
            "attack.v_min_assumed",
            format!("must be > 0, got {v_min}"),
        ));
    }
    Ok(())
}

/// Gain bound for the perfect-knowledge policy: `(M g_α μ_max + Δ̄_v) / (M v_min)`.
pub fn gain_bound_kstar_prime(
    vehicle: &VehicleParams,
    mu_max: f64,
    bar_delta_v: f64,
    v_min: f64,
) -> Result<f64> {
    check_min_speed(v_min)?;
    Ok((vehicle.mass * vehicle.g_alpha() * mu_max + bar_delta_v) / (vehicle.mass * v_min))
}

/// Inputs to [`gain_bound_kstar`] beyond the vehicle constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainBoundInputs {
    pub mu_max: f64,
    pub mu_hat_max: f64,
    pub nu: f64,
    pub nu_hat: f64,
    pub bar_delta_v: f64,
    pub bar_delta_w: f64,
    pub v_min: f64,
}

/// Gain bound dominating the non-vanishing lumped disturbance.
pub fn gain_bound_kstar(vehicle: &VehicleParams, b: GainBoundInputs) -> Result<f64> {
    let first = gain_bound_kstar_prime(vehicle, b.mu_max, b.bar_delta_v, b.v_min)?;
    let g_alpha = vehicle.g_alpha();
    let mismatch = b.nu_hat * b.mu_hat_max
        + b.nu * b.mu_max
        + vehicle.radius * b.bar_delta_w / (vehicle.inertia * g_alpha);
    Ok(first + g_alpha / b.v_min * mismatch)
}

/// `-(1/T_c + k p) Φ_p(e_L)`.
pub fn control_prop1(e_l: f64, t_c: f64, p: f64, k: f64) -> f64 {
    -(1.0 / t_c + k * p) * phi_p_unchecked(e_l, p)
}

/// `-k_a sign(e_L) - Φ_p(e_L) / T_c`. With `boundary_layer = Some(ε)` the sign
/// is replaced by `e_L / ε` inside `|e_L| < ε`.
pub fn control_prop2(e_l: f64, t_c: f64, p: f64, k_a: f64, boundary_layer: Option<f64>) -> f64 {
    let switching = match boundary_layer {
        Some(eps) if e_l.abs() < eps => e_l / eps,
        _ => sign(e_l),
    };
    -k_a * switching - phi_p_unchecked(e_l, p) / t_c
}

/// `-(1/T_c + k_a) Φ_1(e_L)`.
pub fn control_prop3(e_l: f64, t_c: f64, k_a: f64) -> f64 {
    -(1.0 / t_c + k_a) * phi_1(e_l)
}

/// What the attacker believes about the plant.
#[derive(Debug, Clone)]
pub struct AdversaryModel {
    pub nu_hat: f64,
    pub mu_hat: FrictionModel,
    /// Lowest speed the attacker expects during the attack (m/s).
    pub v_min_assumed: f64,
    pub bar_delta_v_assumed: f64,
    pub bar_delta_w_assumed: f64,
}

impl AdversaryModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu_hat.is_finite() && self.nu_hat >= 0.0) {
            return Err(Error::config(
                "attack.nu_hat",
                format!("must be >= 0, got {}", self.nu_hat),
            ));
        }
        check_min_speed(self.v_min_assumed)?;
        for (key, value) in [
            ("attack.bar_delta_v_assumed", self.bar_delta_v_assumed),
            ("attack.bar_delta_w_assumed", self.bar_delta_w_assumed),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::config(key, format!("must be >= 0, got {value}")));
            }
        }
        Ok(())
    }
}

/// Controller family and gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PolicyVariant {
    /// `Φ_p` law with the `k p` robustness term.
    Prop1 { t_c: f64, p: f64, k: f64 },
    /// `Φ_p` law plus a switching term; requires `0 < T_c < 1`.
    Prop2 {
        t_c: f64,
        p: f64,
        k_a: f64,
        boundary_layer: Option<f64>,
    },
    /// `Φ_1` law, any `T_c > 0`.
    Prop3 { t_c: f64, k_a: f64 },
    /// Open-loop constant dimensionless torque.
    ConstantTorque { upsilon: f64 },
}

impl PolicyVariant {
    pub fn validate(&self) -> Result<()> {
        let settling = |t_c: f64| {
            if !(t_c.is_finite() && t_c > 0.0) {
                return Err(Error::config(
                    "attack.T_c",
                    format!("must be > 0, got {t_c}"),
                ));
            }
            Ok(())
        };
        let gain = |key: &str, k: f64| {
            if !(k.is_finite() && k >= 0.0) {
                return Err(Error::config(key, format!("must be >= 0, got {k}")));
            }
            Ok(())
        };
        match *self {
            PolicyVariant::Prop1 { t_c, p, k } => {
                settling(t_c)?;
                check_exponent(p)?;
                gain("attack.k", k)
            }
            PolicyVariant::Prop2 {
                t_c,
                p,
                k_a,
                boundary_layer,
            } => {
                settling(t_c)?;
                if t_c >= 1.0 {
                    return Err(Error::config(
                        "attack.T_c",
                        format!("the switching Φ_p policy requires 0 < T_c < 1, got {t_c}"),
                    ));
                }
                check_exponent(p)?;
                if let Some(eps) = boundary_layer {
                    if !(eps.is_finite() && eps > 0.0) {
                        return Err(Error::config(
                            "attack.boundary_layer",
                            format!("must be > 0, got {eps}"),
                        ));
                    }
                }
                gain("attack.k_a", k_a)
            }
            PolicyVariant::Prop3 { t_c, k_a } => {
                settling(t_c)?;
                gain("attack.k_a", k_a)
            }
            PolicyVariant::ConstantTorque { upsilon } => {
                if !upsilon.is_finite() {
                    return Err(Error::config(
                        "attack.upsilon_const",
                        format!("must be finite, got {upsilon}"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Settling time for the predefined-time variants.
    pub fn settling_time(&self) -> Option<f64> {
        match *self {
            PolicyVariant::Prop1 { t_c, .. }
            | PolicyVariant::Prop2 { t_c, .. }
            | PolicyVariant::Prop3 { t_c, .. } => Some(t_c),
            PolicyVariant::ConstantTorque { .. } => None,
        }
    }

    /// Virtual control on the lockup error; zero for the open-loop variant.
    pub fn control(&self, e_l: f64) -> f64 {
        match *self {
            PolicyVariant::Prop1 { t_c, p, k } => control_prop1(e_l, t_c, p, k),
            PolicyVariant::Prop2 {
                t_c,
                p,
                k_a,
                boundary_layer,
            } => control_prop2(e_l, t_c, p, k_a, boundary_layer),
            PolicyVariant::Prop3 { t_c, k_a } => control_prop3(e_l, t_c, k_a),
            PolicyVariant::ConstantTorque { .. } => 0.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PolicyVariant::Prop1 { .. } => "prop1",
            PolicyVariant::Prop2 { .. } => "prop2",
            PolicyVariant::Prop3 { .. } => "prop3",
            PolicyVariant::ConstantTorque { .. } => "constant",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AttackPolicy {
    pub variant: PolicyVariant,
    pub adversary: AdversaryModel,
    pub use_ndob: bool,
}

impl AttackPolicy {
    pub fn validate(&self) -> Result<()> {
        self.variant.validate()?;
        self.adversary.validate()?;
        if self.use_ndob && matches!(self.variant, PolicyVariant::ConstantTorque { .. }) {
            return Err(Error::config(
                "ndob.enabled",
                "the constant-torque policy has no feedback to compensate",
            ));
        }
        Ok(())
    }

    /// Brake command for the current state given the observer estimate.
    pub fn command(&self, state: TractionState, g_alpha: f64, d_hat: Option<f64>) -> Result<f64> {
        match self.variant {
            PolicyVariant::ConstantTorque { upsilon } => Ok(upsilon),
            variant => {
                let u = variant.control(state.lockup_error());
                attack_torque(u, state, &self.adversary, g_alpha, d_hat)
            }
        }
    }
}

/// Dimensionless brake command `(v/g_α)(u - d̂) + ν̂ μ̂(λ)`.
///
/// Scaling `d̂` by `v/g_α` makes the closed-loop lockup error obey
/// `ė_L = u + Δ'_e - d̂` exactly under an ideal actuator.
pub fn attack_torque(
    u: f64,
    state: TractionState,
    adversary: &AdversaryModel,
    g_alpha: f64,
    d_hat: Option<f64>,
) -> Result<f64> {
    let d_hat = d_hat.unwrap_or(0.0);
    if !(u.is_finite() && d_hat.is_finite() && state.v.is_finite()) {
        return Err(Error::domain("attack input", u + d_hat + state.v, "finite"));
    }
    let feedforward = adversary.nu_hat * adversary.mu_hat.eval(state.lambda)?;
    Ok(state.v / g_alpha * (u - d_hat) + feedforward)
}
