//! Airframe, payload and thrust to the `a_max` input of the safe-velocity model.
//!
//! Drag is not modelled. Thrust is static pull per rotor summed over rotors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{safe_velocity, BodyDynamics};
use crate::units::{
    GramForce, Grams, Hertz, Kilograms, Meters, MetersPerSecond, MetersPerSecondSquared, Newtons,
    Seconds, Watts, GRAVITY,
};

/// Linear heatsink mass per watt of TDP.
pub const HEATSINK_GRAMS_PER_WATT: f64 = 5.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirframeSpec {
    /// Frame, motors and ESCs.
    pub base_mass: Grams,
    pub rotor_count: u32,
    /// Static thrust of a single motor.
    pub per_rotor_pull: GramForce,
    pub control_rate: Hertz,
}

impl AirframeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_mass.is_finite() && self.base_mass.value() > 0.0) {
            return Err(Error::invalid("base_mass", "must be > 0"));
        }
        if self.rotor_count == 0 {
            return Err(Error::invalid("rotor_count", "must be >= 1"));
        }
        if !(self.per_rotor_pull.is_finite() && self.per_rotor_pull.value() > 0.0) {
            return Err(Error::invalid("per_rotor_pull", "must be > 0"));
        }
        if !(self.control_rate.is_finite() && self.control_rate.value() > 0.0) {
            return Err(Error::invalid("control_rate", "must be > 0"));
        }
        Ok(())
    }

    pub fn total_pull(&self) -> GramForce {
        self.per_rotor_pull * f64::from(self.rotor_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadKind {
    Compute,
    Sensor,
    Battery,
    Heatsink,
    CalibrationWeight,
    Other,
}

impl fmt::Display for PayloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PayloadKind::Compute => "compute",
            PayloadKind::Sensor => "sensor",
            PayloadKind::Battery => "battery",
            PayloadKind::Heatsink => "heatsink",
            PayloadKind::CalibrationWeight => "calibration_weight",
            PayloadKind::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadItem {
    pub name: String,
    pub mass: Grams,
    pub kind: PayloadKind,
}

impl PayloadItem {
    pub fn new(name: impl Into<String>, mass: Grams, kind: PayloadKind) -> Self {
        Self {
            name: name.into(),
            mass,
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassBudget {
    pub total_mass: Kilograms,
    pub total_thrust: Newtons,
    pub thrust_to_weight: f64,
}

impl MassBudget {
    pub fn new(total_mass: Kilograms, total_thrust: Newtons) -> Result<Self> {
        if !(total_mass.is_finite() && total_mass.value() > 0.0) {
            return Err(Error::invalid("total_mass", "must be > 0"));
        }
        if !(total_thrust.is_finite() && total_thrust.value() >= 0.0) {
            return Err(Error::invalid("total_thrust", "must be >= 0"));
        }
        Ok(Self {
            total_mass,
            total_thrust,
            thrust_to_weight: total_thrust.value() / total_mass.weight().value(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccelerationStrategy {
    /// Climb headroom: `(T − m·g) / m`.
    #[default]
    VerticalHeadroom,
    /// Horizontal acceleration while holding altitude: `g·sqrt((T/mg)² − 1)`.
    PitchLimited,
}

impl fmt::Display for AccelerationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccelerationStrategy::VerticalHeadroom => "vertical_headroom",
            AccelerationStrategy::PitchLimited => "pitch_limited",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AccelerationModel {
    pub strategy: AccelerationStrategy,
    /// Takes precedence over `strategy` when present.
    pub declared_a_max: Option<MetersPerSecondSquared>,
}

impl AccelerationModel {
    pub fn with_strategy(strategy: AccelerationStrategy) -> Self {
        Self {
            strategy,
            declared_a_max: None,
        }
    }

    pub fn declared(a_max: MetersPerSecondSquared) -> Result<Self> {
        if !(a_max.is_finite() && a_max.value() > 0.0) {
            return Err(Error::invalid("declared_a_max", "must be > 0"));
        }
        Ok(Self {
            strategy: AccelerationStrategy::default(),
            declared_a_max: Some(a_max),
        })
    }
}

pub fn heatsink_mass(tdp: Watts) -> Grams {
    heatsink_mass_with(tdp, HEATSINK_GRAMS_PER_WATT)
}

/// Heatsink mass under a platform-specific coefficient (grams per watt).
pub fn heatsink_mass_with(tdp: Watts, grams_per_watt: f64) -> Grams {
    Grams(tdp.value() * grams_per_watt)
}

pub fn mass_budget(airframe: &AirframeSpec, payload: &[PayloadItem]) -> Result<MassBudget> {
    airframe.validate()?;
    if let Some(bad) = payload
        .iter()
        .find(|p| !(p.mass.is_finite() && p.mass.value() >= 0.0))
    {
        return Err(Error::invalid(
            "payload.mass_g",
            format!("item \"{}\" has mass {}", bad.name, bad.mass.value()),
        ));
    }
    let grams = airframe.base_mass + payload.iter().map(|p| p.mass).sum();
    MassBudget::new(grams.to_kilograms(), airframe.total_pull().to_newtons())
}

/// Maximum acceleration implied by a mass budget.
///
/// Exactly zero headroom yields `0`; thrust below weight is a cannot-climb error.
pub fn estimate_a_max(
    budget: &MassBudget,
    model: &AccelerationModel,
) -> Result<MetersPerSecondSquared> {
    if let Some(a) = model.declared_a_max {
        return Ok(a);
    }
    let ratio = budget.thrust_to_weight;
    if ratio < 1.0 {
        return Err(Error::CannotClimb {
            thrust_to_weight: ratio,
            strategy: model.strategy,
        });
    }
    let a = match model.strategy {
        AccelerationStrategy::VerticalHeadroom => {
            let m = budget.total_mass.value();
            (budget.total_thrust.value() - m * GRAVITY) / m
        }
        AccelerationStrategy::PitchLimited => GRAVITY * (ratio * ratio - 1.0).sqrt(),
    };
    Ok(MetersPerSecondSquared(a.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayloadVelocityPoint {
    pub payload_mass: Grams,
    pub v_safe: MetersPerSecond,
}

/// Velocity against added payload mass; points past the climb limit are cut off and reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadVelocityCurve {
    pub points: Vec<PayloadVelocityPoint>,
    /// First swept mass with no thrust headroom, and its thrust-to-weight ratio.
    pub truncated_at: Option<(Grams, f64)>,
}

/// Sweeps extra payload mass on top of `base_payload` and evaluates `v_safe` at a fixed period.
pub fn payload_velocity_curve(
    airframe: &AirframeSpec,
    base_payload: &[PayloadItem],
    sweep_mass: &[Grams],
    sense_range: Meters,
    action_period: Seconds,
    model: &AccelerationModel,
) -> Result<PayloadVelocityCurve> {
    if sweep_mass
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::invalid(
            "sweep_mass",
            "masses must be strictly increasing",
        ));
    }
    let mut items = base_payload.to_vec();
    items.push(PayloadItem::new(
        "swept payload",
        Grams::ZERO,
        PayloadKind::Other,
    ));
    let mut points = Vec::with_capacity(sweep_mass.len());
    for &mass in sweep_mass {
        if let Some(last) = items.last_mut() {
            last.mass = mass;
        }
        let budget = mass_budget(airframe, &items)?;
        let a = match estimate_a_max(&budget, model) {
            Ok(a) if a.value() > 0.0 => a,
            Ok(_) | Err(Error::CannotClimb { .. }) => {
                return Ok(PayloadVelocityCurve {
                    points,
                    truncated_at: Some((mass, budget.thrust_to_weight)),
                });
            }
            Err(e) => return Err(e),
        };
        let dyn_ = BodyDynamics::new(a, sense_range)?;
        points.push(PayloadVelocityPoint {
            payload_mass: mass,
            v_safe: safe_velocity(&dyn_, action_period)?,
        });
    }
    Ok(PayloadVelocityCurve {
        points,
        truncated_at: None,
    })
}
