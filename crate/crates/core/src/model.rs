//! Closed-form F-1 relations between pipeline timing, body dynamics and safe velocity.
//!
//! A vehicle that senses an obstacle `d` meters ahead must decide and then brake
//! at `a_max` before reaching it. With one action period `T` spent reacting, the
//! fastest safe speed is
//!
//! ```text
//! v_safe(T) = a_max * (sqrt(T² + 2d/a_max) - T)
//! ```
//!
//! which approaches `sqrt(2 d a_max)` as `T → 0`. The functions here are pure and
//! operate on SI quantities only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Hertz, Meters, MetersPerSecond, MetersPerSecondSquared, Seconds};

/// Default knee threshold: the knee is where `v_safe` reaches this fraction of the asymptote.
pub const DEFAULT_KNEE_THRESHOLD: f64 = 0.985;

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

/// Periods of the three sense-compute-control stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineTiming {
    pub sensor_period: Seconds,
    pub compute_period: Seconds,
    pub control_period: Seconds,
}

impl PipelineTiming {
    pub fn new(sensor: Seconds, compute: Seconds, control: Seconds) -> Result<Self> {
        check_positive("sensor_period", sensor.value())?;
        check_positive("compute_period", compute.value())?;
        check_positive("control_period", control.value())?;
        Ok(Self {
            sensor_period: sensor,
            compute_period: compute,
            control_period: control,
        })
    }

    pub fn from_rates(sensor: Hertz, compute: Hertz, control: Hertz) -> Result<Self> {
        check_positive("sensor_rate", sensor.value())?;
        check_positive("compute_rate", compute.value())?;
        check_positive("control_rate", control.value())?;
        Self::new(sensor.to_period(), compute.to_period(), control.to_period())
    }

    pub fn sensor_rate(&self) -> Hertz {
        self.sensor_period.to_rate()
    }

    pub fn compute_rate(&self) -> Hertz {
        self.compute_period.to_rate()
    }

    pub fn control_rate(&self) -> Hertz {
        self.control_period.to_rate()
    }

    /// Stage rates in pipeline order (sensor, compute, control).
    pub fn rates(&self) -> [Hertz; 3] {
        [self.sensor_rate(), self.compute_rate(), self.control_rate()]
    }

    pub fn action_timing(&self, mode: PipelineMode) -> ActionTiming {
        let period = match mode {
            PipelineMode::Overlapped => action_period_bounds(self).0,
            PipelineMode::Serial => action_period_bounds(self).1,
        };
        ActionTiming::from_period(period)
    }
}

/// How the three stages compose into one action period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineMode {
    /// Fully overlapped stages: the slowest stage sets the pace.
    #[default]
    Overlapped,
    /// Stages run back to back: periods add up.
    Serial,
}

/// Maximum acceleration and obstacle sensing distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyDynamics {
    pub a_max: MetersPerSecondSquared,
    pub sense_range: Meters,
}

impl BodyDynamics {
    pub fn new(a_max: MetersPerSecondSquared, sense_range: Meters) -> Result<Self> {
        check_positive("a_max", a_max.value())?;
        if !(sense_range.is_finite() && sense_range.value() >= 0.0) {
            return Err(Error::invalid(
                "sense_range",
                format!("must be finite and >= 0, got {}", sense_range.value()),
            ));
        }
        Ok(Self { a_max, sense_range })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionTiming {
    #[serde(rename = "action_period_s")]
    pub action_period: Seconds,
    #[serde(rename = "action_throughput_hz")]
    pub action_throughput: Hertz,
}

impl ActionTiming {
    pub fn from_period(period: Seconds) -> Self {
        Self {
            action_period: period,
            action_throughput: period.to_rate(),
        }
    }

    pub fn from_rate(rate: Hertz) -> Self {
        Self {
            action_period: rate.to_period(),
            action_throughput: rate,
        }
    }
}

/// Throughput beyond which extra decision rate buys (almost) no velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KneePoint {
    #[serde(rename = "knee_throughput_hz")]
    pub knee_throughput: Hertz,
    #[serde(rename = "knee_velocity_mps")]
    pub knee_velocity: MetersPerSecond,
    #[serde(rename = "asymptote_velocity_mps")]
    pub asymptote_velocity: MetersPerSecond,
    pub threshold: f64,
}

/// Lower and upper bounds on the action period: the slowest stage and the sum of all stages.
pub fn action_period_bounds(timing: &PipelineTiming) -> (Seconds, Seconds) {
    let periods = [
        timing.sensor_period,
        timing.compute_period,
        timing.control_period,
    ];
    let lower = periods
        .iter()
        .copied()
        .fold(Seconds::ZERO, |acc, p| if p > acc { p } else { acc });
    let upper = periods.iter().copied().sum();
    (lower, upper)
}

/// Upper bound on action throughput: the slowest stage rate.
pub fn action_throughput(timing: &PipelineTiming) -> Hertz {
    let [s, c, k] = timing.rates();
    Hertz(s.value().min(c.value()).min(k.value()))
}

/// Fastest speed that still allows stopping within the sensing range.
///
/// `action_period == 0` is accepted and yields the asymptote.
pub fn safe_velocity(dyn_: &BodyDynamics, action_period: Seconds) -> Result<MetersPerSecond> {
    let t = action_period.value();
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativePeriod(t));
    }
    let d = dyn_.sense_range.value();
    let a = dyn_.a_max.value();
    if t.is_infinite() || d == 0.0 {
        return Ok(MetersPerSecond(0.0));
    }
    // Rationalized form of a·(s − T); avoids cancellation when T² dominates 2d/a.
    let s = (t * t + 2.0 * d / a).sqrt();
    Ok(MetersPerSecond(2.0 * d / (s + t)))
}

/// Analytic slope dv/dT of [`safe_velocity`]; strictly negative whenever `d > 0`.
pub fn safe_velocity_slope(dyn_: &BodyDynamics, action_period: Seconds) -> Result<f64> {
    let v = safe_velocity(dyn_, action_period)?.value();
    let t = action_period.value();
    let s = (t * t + 2.0 * dyn_.sense_range.value() / dyn_.a_max.value()).sqrt();
    if s == 0.0 {
        return Ok(0.0);
    }
    // a·(T/s − 1) == −v/s because v = a·(s − T).
    Ok(-v / s)
}

/// Limit of [`safe_velocity`] as the action period goes to zero: `sqrt(2 d a_max)`.
pub fn asymptote_velocity(dyn_: &BodyDynamics) -> MetersPerSecond {
    MetersPerSecond((2.0 * dyn_.sense_range.value() * dyn_.a_max.value()).sqrt())
}

/// Action period at which [`safe_velocity`] equals `velocity`.
pub fn action_period_for_velocity(
    dyn_: &BodyDynamics,
    velocity: MetersPerSecond,
) -> Result<Seconds> {
    let v = velocity.value();
    let roof = asymptote_velocity(dyn_).value();
    if !(v > 0.0 && v < roof) {
        return Err(Error::UnattainableVelocity {
            velocity: v,
            asymptote: roof,
        });
    }
    let t = dyn_.sense_range.value() / v - v / (2.0 * dyn_.a_max.value());
    Ok(Seconds(t.max(0.0)))
}

/// Knee defined as the throughput at which `v_safe` reaches `threshold · V∞`.
pub fn knee_point(dyn_: &BodyDynamics, threshold: f64) -> Result<KneePoint> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(
            "knee_threshold",
            format!("must lie in (0, 1), got {threshold}"),
        ));
    }
    if dyn_.sense_range.value() == 0.0 {
        return Err(Error::DegenerateRange);
    }
    let roof = asymptote_velocity(dyn_);
    let knee_velocity = roof * threshold;
    let period = action_period_for_velocity(dyn_, knee_velocity)?;
    Ok(KneePoint {
        knee_throughput: period.to_rate(),
        knee_velocity,
        asymptote_velocity: roof,
        threshold,
    })
}

/// Solves the safe-velocity relation for `a_max` given one observed (v, T) point.
pub fn calibrate_a_max(
    velocity: MetersPerSecond,
    action_period: Seconds,
    sense_range: Meters,
) -> Result<MetersPerSecondSquared> {
    let (v, t, d) = (velocity.value(), action_period.value(), sense_range.value());
    check_positive("velocity", v)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NegativePeriod(t));
    }
    let travel = v * t;
    if !(d.is_finite() && d > travel) {
        return Err(Error::ImpossibleCalibration { travel, range: d });
    }
    Ok(MetersPerSecondSquared(v * v / (2.0 * (d - travel))))
}
