//! Scenario documents.
//!
//! A scenario is a TOML document with the sections `vehicle`, `road`,
//! `disturbance`, `actuator`, `attack`, `ndob` and `sim`. Every key is
//! optional; omitted keys take the reference parameter set. Unknown keys are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::actuator::ActuatorParams;
use crate::attack::{
    gain_bound_kstar, gain_bound_kstar_prime, AdversaryModel, AttackPolicy, GainBoundInputs,
    PolicyVariant,
};
use crate::error::{Error, Result};
use crate::friction::{BurckhardtParams, FrictionKind, FrictionModel};
use crate::ndob::{NdobParams, ObserverForm, ObserverInit};
use crate::sim::{CoordinateSystem, Scenario, SimConfig};
use crate::traction::{BoundedDisturbance, DisturbanceSpec, Plant, Signal, VehicleParams};

/// Reference parameter set.
pub mod defaults {
    pub const MASS: f64 = 250.0;
    pub const RADIUS: f64 = 0.3;
    pub const INERTIA: f64 = 1.5;
    pub const SLOPE_DEG: f64 = 0.0;
    pub const GRAVITY: f64 = 9.81;
    pub const TAU_F_MS: f64 = 16.0;
    pub const DELTA_F_MS: f64 = 15.0;
    pub const T_C: f64 = 0.95;
    pub const P: f64 = 0.15;
    pub const K: f64 = 0.0;
    pub const L_D: f64 = 2.65;
    pub const NU_HAT: f64 = 15.0;
    /// Open-loop brake torque of the naive attack (≈ 490 N·m).
    pub const UPSILON_CONST: f64 = 10.0;
    /// Attacker's assumed minimum speed as a fraction of the initial speed.
    pub const V_MIN_FRACTION: f64 = 0.3;
    pub const BOUNDARY_LAYER: f64 = 1e-3;
}

/// Lower bounds on the switching gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainBounds {
    pub k_star_prime: f64,
    pub k_star: f64,
    pub inputs: GainBoundInputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadPreset {
    DryAsphalt,
    WetAsphalt,
}

impl RoadPreset {
    pub fn params(self) -> BurckhardtParams {
        match self {
            RoadPreset::DryAsphalt => BurckhardtParams::DRY_ASPHALT,
            RoadPreset::WetAsphalt => BurckhardtParams::WET_ASPHALT,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RoadPreset::DryAsphalt => "dry_asphalt",
            RoadPreset::WetAsphalt => "wet_asphalt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadKind {
    Burckhardt,
    Zero,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisturbanceKind {
    Zero,
    Constant,
    Sinusoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKey {
    Prop1,
    Prop2,
    Prop3,
    Constant,
}

/// The adversary's friction estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuHatKey {
    Zero,
    DryAsphalt,
    WetAsphalt,
    /// Same curve as the true road.
    True,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleSection {
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(alias = "R")]
    pub r: f64,
    #[serde(rename = "J")]
    pub inertia: f64,
    pub alpha_deg: f64,
    pub g: f64,
}

impl Default for VehicleSection {
    fn default() -> Self {
        Self {
            mass: defaults::MASS,
            r: defaults::RADIUS,
            inertia: defaults::INERTIA,
            alpha_deg: defaults::SLOPE_DEG,
            g: defaults::GRAVITY,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoadSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<RoadKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<RoadPreset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    /// `[[λ, μ], ...]` knots for `kind = "table"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisturbanceSection {
    pub kind: DisturbanceKind,
    /// Fraction of the declared bounds actually injected, in `[0, 1]`.
    pub amplitude: f64,
    /// Sinusoid frequency (Hz).
    pub frequency: f64,
    /// Declared bound on the vehicle force disturbance (N).
    pub bound_v: f64,
    /// Declared bound on the wheel torque disturbance (N·m).
    pub bound_w: f64,
}

impl Default for DisturbanceSection {
    fn default() -> Self {
        Self {
            kind: DisturbanceKind::Zero,
            amplitude: 1.0,
            frequency: 1.0,
            bound_v: 0.0,
            bound_w: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActuatorSection {
    pub tau_f_ms: f64,
    pub delta_f_ms: f64,
    pub ideal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamp_max: Option<f64>,
}

impl Default for ActuatorSection {
    fn default() -> Self {
        Self {
            tau_f_ms: defaults::TAU_F_MS,
            delta_f_ms: defaults::DELTA_F_MS,
            ideal: false,
            clamp_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackSection {
    pub variant: VariantKey,
    #[serde(rename = "T_c")]
    pub t_c: f64,
    pub p: f64,
    pub k: f64,
    pub k_a: f64,
    /// Same switch as `ndob.enabled`; both may be given if they agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub use_ndob: Option<bool>,
    pub nu_hat: f64,
    pub mu_hat: MuHatKey,
    pub upsilon_const: f64,
    /// Defaults to a fixed fraction of `sim.v0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_min_assumed: Option<f64>,
    /// Defaults to `disturbance.bound_v`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bar_delta_v_assumed: Option<f64>,
    /// Defaults to `disturbance.bound_w`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bar_delta_w_assumed: Option<f64>,
    /// Width of the optional linear zone replacing `sign` in the switching law.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_layer: Option<f64>,
}

impl Default for AttackSection {
    fn default() -> Self {
        Self {
            variant: VariantKey::Prop3,
            t_c: defaults::T_C,
            p: defaults::P,
            k: defaults::K,
            k_a: defaults::K,
            use_ndob: None,
            nu_hat: defaults::NU_HAT,
            mu_hat: MuHatKey::Zero,
            upsilon_const: defaults::UPSILON_CONST,
            v_min_assumed: None,
            bar_delta_v_assumed: None,
            bar_delta_w_assumed: None,
            boundary_layer: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NdobSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enabled: Option<bool>,
    #[serde(rename = "L_d")]
    pub gain: f64,
    pub init: ObserverInit,
    pub form: ObserverForm,
}

impl Default for NdobSection {
    fn default() -> Self {
        Self {
            enabled: None,
            gain: defaults::L_D,
            init: ObserverInit::ZeroState,
            form: ObserverForm::Tracking,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub t_max: f64,
    pub v0: f64,
    pub lambda0: f64,
    pub lockup_threshold: f64,
    pub v_floor: f64,
    pub coordinate_system: CoordinateSystem,
    pub sustain_steps: usize,
    pub stop_on_lockup: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = SimConfig::default();
        Self {
            dt: d.dt,
            t_max: d.t_max,
            v0: d.v0,
            lambda0: d.lambda0,
            lockup_threshold: d.lockup_threshold,
            v_floor: d.v_floor,
            coordinate_system: d.coordinates,
            sustain_steps: d.sustain_steps,
            stop_on_lockup: d.stop_on_lockup,
        }
    }
}

/// A parsed scenario document. Round-trips through [`ScenarioFile::to_toml`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub vehicle: VehicleSection,
    pub road: RoadSection,
    pub disturbance: DisturbanceSection,
    pub actuator: ActuatorSection,
    pub attack: AttackSection,
    pub ndob: NdobSection,
    pub sim: SimSection,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.build("scenario")?;
    Ok(file)
}

impl ScenarioFile {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario documents always serialize")
    }

    pub fn with_road(mut self, preset: RoadPreset) -> Self {
        self.road = RoadSection {
            preset: Some(preset),
            ..RoadSection::default()
        };
        self
    }

    pub fn vehicle(&self) -> Result<VehicleParams> {
        let v = &self.vehicle;
        VehicleParams::new(v.mass, v.r, v.inertia, v.alpha_deg.to_radians(), v.g)
    }

    /// Label for the configured road, e.g. `dry_asphalt`.
    pub fn road_label(&self) -> &'static str {
        match (self.road.preset, self.road.kind) {
            (Some(p), _) => p.label(),
            (None, Some(RoadKind::Burckhardt)) => "burckhardt",
            (None, Some(RoadKind::Zero)) => "zero",
            (None, Some(RoadKind::Table)) => "table",
            (None, None) => RoadPreset::DryAsphalt.label(),
        }
    }

    pub fn road(&self) -> Result<FrictionModel> {
        let r = &self.road;
        let has_coeffs = r.c1.is_some() || r.c2.is_some() || r.c3.is_some();
        if let Some(preset) = r.preset {
            if has_coeffs
                || r.table.is_some()
                || matches!(r.kind, Some(k) if k != RoadKind::Burckhardt)
            {
                return Err(Error::config(
                    "road.preset",
                    "a preset cannot be combined with explicit coefficients, a table, or another kind",
                ));
            }
            return FrictionModel::burckhardt(preset.params());
        }
        match r.kind {
            None if !has_coeffs && r.table.is_none() => {
                FrictionModel::burckhardt(BurckhardtParams::DRY_ASPHALT)
            }
            None | Some(RoadKind::Burckhardt) => {
                let get = |key: &'static str, v: Option<f64>| {
                    v.ok_or_else(|| Error::config(key, "required for a Burckhardt road"))
                };
                let params = BurckhardtParams::new(
                    get("road.c1", r.c1)?,
                    get("road.c2", r.c2)?,
                    get("road.c3", r.c3)?,
                )?;
                FrictionModel::burckhardt(params)
            }
            Some(RoadKind::Zero) => Ok(FrictionModel::zero()),
            Some(RoadKind::Table) => {
                let table = r
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::config("road.table", "required for kind = \"table\""))?;
                FrictionModel::new(FrictionKind::Tabulated(
                    table.iter().map(|&[l, m]| (l, m)).collect(),
                ))
            }
        }
    }

    pub fn disturbances(&self) -> Result<DisturbanceSpec> {
        let d = &self.disturbance;
        if !(0.0..=1.0).contains(&d.amplitude) {
            return Err(Error::config(
                "disturbance.amplitude",
                format!(
                    "fraction of the declared bound must lie in [0, 1], got {}",
                    d.amplitude
                ),
            ));
        }
        if !(d.frequency.is_finite() && d.frequency >= 0.0) {
            return Err(Error::config(
                "disturbance.frequency",
                format!("must be >= 0, got {}", d.frequency),
            ));
        }
        let signal = |bound: f64| match d.kind {
            DisturbanceKind::Zero => Signal::Zero,
            DisturbanceKind::Constant => Signal::Constant(d.amplitude * bound),
            DisturbanceKind::Sinusoid => Signal::Sinusoid {
                amplitude: d.amplitude * bound,
                frequency_hz: d.frequency,
                phase: 0.0,
            },
        };
        Ok(DisturbanceSpec {
            force: BoundedDisturbance::new("disturbance.bound_v", signal(d.bound_v), d.bound_v)?,
            torque: BoundedDisturbance::new("disturbance.bound_w", signal(d.bound_w), d.bound_w)?,
        })
    }

    pub fn actuator(&self) -> Result<ActuatorParams> {
        let a = &self.actuator;
        let params = if a.ideal {
            ActuatorParams {
                clamp_max: a.clamp_max,
                ..ActuatorParams::IDEAL
            }
        } else {
            ActuatorParams {
                time_constant: a.tau_f_ms * 1e-3,
                deadtime: a.delta_f_ms * 1e-3,
                clamp_max: a.clamp_max,
            }
        };
        params.validate()?;
        Ok(params)
    }

    pub fn use_ndob(&self) -> Result<bool> {
        match (self.attack.use_ndob, self.ndob.enabled) {
            (Some(a), Some(b)) if a != b => Err(Error::config(
                "attack.use_ndob",
                format!("disagrees with ndob.enabled ({a} vs {b})"),
            )),
            (Some(x), _) | (None, Some(x)) => Ok(x),
            (None, None) => Ok(self.attack.variant != VariantKey::Constant),
        }
    }

    pub fn v_min_assumed(&self) -> f64 {
        self.attack
            .v_min_assumed
            .unwrap_or(defaults::V_MIN_FRACTION * self.sim.v0)
    }

    pub fn variant(&self) -> PolicyVariant {
        let a = &self.attack;
        match a.variant {
            VariantKey::Prop1 => PolicyVariant::Prop1 {
                t_c: a.t_c,
                p: a.p,
                k: a.k,
            },
            VariantKey::Prop2 => PolicyVariant::Prop2 {
                t_c: a.t_c,
                p: a.p,
                k_a: a.k_a,
                boundary_layer: a.boundary_layer,
            },
            VariantKey::Prop3 => PolicyVariant::Prop3 {
                t_c: a.t_c,
                k_a: a.k_a,
            },
            VariantKey::Constant => PolicyVariant::ConstantTorque {
                upsilon: a.upsilon_const,
            },
        }
    }

    pub fn adversary(&self, road: &FrictionModel) -> AdversaryModel {
        let a = &self.attack;
        AdversaryModel {
            nu_hat: a.nu_hat,
            mu_hat: match a.mu_hat {
                MuHatKey::Zero => FrictionModel::zero(),
                MuHatKey::DryAsphalt => FrictionModel::dry_asphalt(),
                MuHatKey::WetAsphalt => FrictionModel::wet_asphalt(),
                MuHatKey::True => road.clone(),
            },
            v_min_assumed: self.v_min_assumed(),
            bar_delta_v_assumed: a.bar_delta_v_assumed.unwrap_or(self.disturbance.bound_v),
            bar_delta_w_assumed: a.bar_delta_w_assumed.unwrap_or(self.disturbance.bound_w),
        }
    }

    pub fn sim(&self) -> SimConfig {
        let s = &self.sim;
        SimConfig {
            dt: s.dt,
            t_max: s.t_max,
            v0: s.v0,
            lambda0: s.lambda0,
            lockup_threshold: s.lockup_threshold,
            v_floor: s.v_floor,
            coordinates: s.coordinate_system,
            sustain_steps: s.sustain_steps,
            stop_on_lockup: s.stop_on_lockup,
        }
    }

    /// `(k*', k*)` for the configured vehicle, road and attacker assumptions.
    pub fn gain_bounds(&self) -> Result<GainBounds> {
        let vehicle = self.vehicle()?;
        let road = self.road()?;
        let adversary = self.adversary(&road);
        adversary.validate()?;
        let inputs = GainBoundInputs {
            mu_max: road.mu_max(),
            mu_hat_max: adversary.mu_hat.mu_max(),
            nu: vehicle.nu(),
            nu_hat: adversary.nu_hat,
            bar_delta_v: adversary.bar_delta_v_assumed,
            bar_delta_w: adversary.bar_delta_w_assumed,
            v_min: adversary.v_min_assumed,
        };
        Ok(GainBounds {
            k_star_prime: gain_bound_kstar_prime(
                &vehicle,
                inputs.mu_max,
                inputs.bar_delta_v,
                inputs.v_min,
            )?,
            k_star: gain_bound_kstar(&vehicle, inputs)?,
            inputs,
        })
    }

    /// Builds and validates the typed scenario.
    pub fn build(&self, name: &str) -> Result<Scenario> {
        let road = self.road()?;
        let use_ndob = self.use_ndob()?;
        let scenario = Scenario {
            name: name.to_string(),
            plant: Plant::new(self.vehicle()?, road.clone(), self.disturbances()?),
            actuator: self.actuator()?,
            policy: AttackPolicy {
                variant: self.variant(),
                adversary: self.adversary(&road),
                use_ndob,
            },
            ndob: NdobParams {
                gain: self.ndob.gain,
                form: self.ndob.form,
                init: self.ndob.init,
            },
            sim: self.sim(),
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_reference_scenario() {
        let file = parse_scenario("").unwrap();
        let sc = file.build("default").unwrap();
        assert!(
            matches!(sc.policy.variant, PolicyVariant::Prop3 { t_c, k_a } if t_c == 0.95 && k_a == 0.0)
        );
        assert!(sc.policy.use_ndob);
        assert!(sc.policy.adversary.mu_hat.is_zero());
        assert_eq!(sc.policy.adversary.nu_hat, 15.0);
        assert_eq!(sc.plant.friction, FrictionModel::dry_asphalt());
        assert_eq!(sc.plant.vehicle.nu(), 15.0);
        assert_eq!(sc.actuator.time_constant, 0.016);
        assert_eq!(sc.actuator.deadtime, 0.015);
        assert_eq!(sc.ndob.gain, 2.65);
        assert_eq!(sc.sim, SimConfig::default());
        assert_eq!(file.road_label(), "dry_asphalt");
    }

    #[test]
    fn prop2_with_long_settling_time_is_rejected() {
        let err = parse_scenario("[attack]\nvariant = \"prop2\"\nT_c = 1.5\n").unwrap_err();
        match err {
            Error::Config { key, message } => {
                assert_eq!(key, "attack.T_c");
                assert!(message.contains("0 < T_c < 1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uppercase_radius_alias_gives_table_inertia_ratio() {
        let file = parse_scenario("[vehicle]\nM = 250\nR = 0.3\nJ = 1.5\n").unwrap();
        assert_eq!(file.vehicle().unwrap().nu(), 15.0);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_scenario("[attack]\nvelocity = 3\n").unwrap_err();
        assert!(err.to_string().contains("velocity"), "{err}");
        let err = parse_scenario("[warp]\nx = 1\n").unwrap_err();
        assert!(err.to_string().contains("warp"), "{err}");
    }

    #[test]
    fn type_mismatch_is_named() {
        let err = parse_scenario("[sim]\ndt = \"fast\"\n").unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
    }

    #[test]
    fn conflicting_observer_switches() {
        let err =
            parse_scenario("[attack]\nuse_ndob = true\n[ndob]\nenabled = false\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "attack.use_ndob"));
        let ok = parse_scenario("[attack]\nuse_ndob = false\n").unwrap();
        assert!(!ok.use_ndob().unwrap());
    }

    #[test]
    fn constant_variant_defaults_to_no_observer() {
        let f = parse_scenario("[attack]\nvariant = \"constant\"\n").unwrap();
        assert!(!f.use_ndob().unwrap());
    }

    #[test]
    fn road_variants() {
        let wet = parse_scenario("[road]\npreset = \"wet_asphalt\"\n").unwrap();
        assert_eq!(wet.road().unwrap(), FrictionModel::wet_asphalt());
        let custom =
            parse_scenario("[road]\nkind = \"burckhardt\"\nc1 = 1.0\nc2 = 20.0\nc3 = 0.1\n")
                .unwrap();
        assert!(custom.road().unwrap().mu_max() > 0.8);
        let table = parse_scenario(
            "[road]\nkind = \"table\"\ntable = [[0.0, 0.0], [0.2, 1.0], [1.0, 0.6]]\n",
        )
        .unwrap();
        assert_eq!(table.road().unwrap().mu_max(), 1.0);
        assert!(parse_scenario("[road]\nkind = \"burckhardt\"\nc1 = 1.0\n").is_err());
        assert!(parse_scenario("[road]\npreset = \"dry_asphalt\"\nc1 = 1.0\n").is_err());
        assert!(parse_scenario("[road]\nkind = \"table\"\n").is_err());
    }

    #[test]
    fn disturbance_amplitude_is_a_fraction_of_the_bound() {
        let f = parse_scenario(
            "[disturbance]\nkind = \"sinusoid\"\namplitude = 0.5\nbound_v = 100\nbound_w = 10\n",
        )
        .unwrap();
        let d = f.disturbances().unwrap();
        assert_eq!(d.force.bound(), 100.0);
        assert!(
            matches!(d.torque.signal(), Signal::Sinusoid { amplitude, .. } if *amplitude == 5.0)
        );
        assert!(parse_scenario("[disturbance]\namplitude = 1.5\n").is_err());
    }

    #[test]
    fn serialize_parse_is_a_fixed_point() {
        let docs = [
            "",
            "[attack]\nvariant = \"prop2\"\nT_c = 0.5\nk_a = 20\nboundary_layer = 0.001\n[disturbance]\nkind = \"sinusoid\"\nbound_v = 100\nbound_w = 10\n",
            "[road]\nkind = \"table\"\ntable = [[0.0, 0.0], [1.0, 0.5]]\n[sim]\ncoordinate_system = \"v_omega\"\n",
            "[actuator]\nideal = true\n[attack]\nmu_hat = \"true\"\nv_min_assumed = 8.0\n[ndob]\nenabled = false\nform = \"published\"\n",
        ];
        for doc in docs {
            let first = parse_scenario(doc).unwrap();
            let again = parse_scenario(&first.to_toml()).unwrap();
            assert_eq!(first, again, "{doc}");
            assert_eq!(again.to_toml(), first.to_toml());
        }
    }

    #[test]
    fn gain_bounds_for_reference_vehicle() {
        let f = parse_scenario("[attack]\nv_min_assumed = 10\n").unwrap();
        let g = f.gain_bounds().unwrap();
        let mu_max = FrictionModel::dry_asphalt().mu_max();
        assert!((g.k_star_prime - 9.81 * mu_max / 10.0).abs() < 1e-12);
        assert!((g.k_star - g.k_star_prime - 0.981 * 15.0 * mu_max).abs() < 1e-12);
        assert!(g.k_star_prime <= g.k_star);
    }

    #[test]
    fn v_min_defaults_to_fraction_of_initial_speed() {
        let f = parse_scenario("[sim]\nv0 = 40\n").unwrap();
        assert_eq!(f.v_min_assumed(), 12.0);
    }
}
