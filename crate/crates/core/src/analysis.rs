//! Full F-1 analyses of resolved UAV configurations.
//!
//! An analysis places the configuration's action throughput on its roofline,
//! says which subsystem binds the safe velocity, and how far the compute (or the
//! binding stage) sits from the knee-point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{AlgorithmPerf, ComputePlatform, PresetStore, SensorSpec};
use crate::error::{Error, Result};
use crate::model::{
    knee_point, safe_velocity, ActionTiming, BodyDynamics, KneePoint, PipelineMode, PipelineTiming,
};
use crate::physics::{
    estimate_a_max, mass_budget, AccelerationModel, AirframeSpec, MassBudget, PayloadItem,
    PayloadKind,
};
use crate::units::{
    GramForce, Grams, Hertz, Meters, MetersPerSecond, MetersPerSecondSquared, Watts,
};

/// Half-width of the band around a gap of 1 that counts as a balanced design.
pub const BALANCED_TOLERANCE: f64 = 0.05;

/// A fully resolved UAV: every knob bound to a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavConfiguration {
    pub name: String,
    pub airframe: AirframeSpec,
    /// Payload other than the compute stack and the sensor.
    pub payload: Vec<PayloadItem>,
    pub compute: ComputePlatform,
    pub algorithm: AlgorithmPerf,
    pub sensor: SensorSpec,
    pub acceleration: AccelerationModel,
    pub knee_threshold: f64,
    pub pipeline: PipelineMode,
}

impl UavConfiguration {
    /// "uav / compute / algorithm", used for legends and listings.
    pub fn label(&self) -> String {
        format!(
            "{} / {} / {}",
            self.name, self.compute.name, self.algorithm.algorithm
        )
    }

    pub fn pipeline_timing(&self) -> Result<PipelineTiming> {
        PipelineTiming::from_rates(
            self.sensor.framerate,
            self.algorithm.throughput,
            self.airframe.control_rate,
        )
    }

    pub fn action_timing(&self) -> Result<ActionTiming> {
        Ok(self.pipeline_timing()?.action_timing(self.pipeline))
    }

    /// Every carried mass, with the compute board, its heatsink and the sensor made explicit.
    pub fn payload_items(&self) -> Vec<PayloadItem> {
        let mut items = self.payload.clone();
        items.extend(self.compute.payload_items());
        items.push(PayloadItem::new(
            self.sensor.name.clone(),
            self.sensor.mass,
            PayloadKind::Sensor,
        ));
        items
    }

    pub fn payload_mass(&self) -> Grams {
        self.payload_items().iter().map(|p| p.mass).sum()
    }

    pub fn mass_budget(&self) -> Result<MassBudget> {
        mass_budget(&self.airframe, &self.payload_items())
    }

    /// `a_max` for this configuration; zero headroom is reported as cannot-climb.
    pub fn a_max(&self) -> Result<MetersPerSecondSquared> {
        let budget = self.mass_budget()?;
        let a = estimate_a_max(&budget, &self.acceleration)?;
        if a.value() > 0.0 {
            Ok(a)
        } else {
            Err(Error::CannotClimb {
                thrust_to_weight: budget.thrust_to_weight,
                strategy: self.acceleration.strategy,
            })
        }
    }

    pub fn body_dynamics(&self) -> Result<BodyDynamics> {
        BodyDynamics::new(self.a_max()?, self.sensor.range)
    }

    /// Copy of `self` with one knob set to `value`.
    pub fn with_knob(&self, knob: Knob, value: &KnobValue, store: &PresetStore) -> Result<Self> {
        let mut cfg = self.clone();
        if knob == Knob::Algorithm {
            let KnobValue::Label(name) = value else {
                return Err(Error::invalid("algorithm", "expects an algorithm name"));
            };
            let row = store.algorithm(name, &cfg.compute.name).ok_or_else(|| {
                Error::config(
                    "algorithm",
                    format!(
                        "no measured throughput for \"{name}\" on \"{}\"",
                        cfg.compute.name
                    ),
                )
            })?;
            cfg.algorithm = AlgorithmPerf {
                platform: cfg.compute.name.clone(),
                ..row.value.clone()
            };
            return Ok(cfg);
        }
        let KnobValue::Number(x) = *value else {
            return Err(Error::invalid(knob.field(), "expects a number"));
        };
        let positive = |x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(Error::invalid(
                    knob.field(),
                    format!("must be > 0, got {x}"),
                ))
            }
        };
        let non_negative = |x: f64| {
            if x.is_finite() && x >= 0.0 {
                Ok(x)
            } else {
                Err(Error::invalid(
                    knob.field(),
                    format!("must be >= 0, got {x}"),
                ))
            }
        };
        match knob {
            Knob::SensorFramerate => cfg.sensor.framerate = Hertz(positive(x)?),
            Knob::SensorRange => cfg.sensor.range = Meters(positive(x)?),
            Knob::ComputeTdp => {
                cfg.compute.tdp = Watts(non_negative(x)?);
                cfg.compute.heatsink_mass = None;
            }
            Knob::ComputeRuntime => {
                cfg.algorithm.throughput = Hertz(1.0 / positive(x)?);
            }
            Knob::DroneWeight => cfg.airframe.base_mass = Grams(positive(x)?),
            Knob::RotorPull => cfg.airframe.per_rotor_pull = GramForce(positive(x)?),
            Knob::PayloadWeight => {
                let fixed = cfg.compute.stack_mass() + cfg.sensor.mass;
                let rest = non_negative(x)? - fixed.value();
                if rest < 0.0 {
                    return Err(Error::invalid(
                        knob.field(),
                        format!(
                            "{x} g is lighter than the compute stack and sensor ({} g)",
                            fixed.value()
                        ),
                    ));
                }
                cfg.payload = vec![PayloadItem::new("payload", Grams(rest), PayloadKind::Other)];
            }
            Knob::Algorithm => unreachable!("handled above"),
        }
        Ok(cfg)
    }
}

/// Pipeline stage, in pipeline order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Sensor,
    Compute,
    Control,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Sensor => "sensor",
            Stage::Compute => "compute",
            Stage::Control => "control",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    PhysicsBound,
    ComputeBound,
    SensorBound,
    ControlBound,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::PhysicsBound => "PhysicsBound",
            BoundKind::ComputeBound => "ComputeBound",
            BoundKind::SensorBound => "SensorBound",
            BoundKind::ControlBound => "ControlBound",
        })
    }
}

impl From<Stage> for BoundKind {
    fn from(stage: Stage) -> Self {
        match stage {
            Stage::Sensor => BoundKind::SensorBound,
            Stage::Compute => BoundKind::ComputeBound,
            Stage::Control => BoundKind::ControlBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundClass {
    pub kind: BoundKind,
    /// Slowest pipeline stage (earliest stage on ties).
    pub limiting_stage: Stage,
    #[serde(rename = "ceiling_velocity_mps")]
    pub ceiling_velocity: MetersPerSecond,
    #[serde(rename = "limiting_rate_hz")]
    pub limiting_rate: Hertz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapDirection {
    UnderProvisioned,
    OverProvisioned,
    Balanced,
}

impl fmt::Display for GapDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapDirection::UnderProvisioned => "under_provisioned",
            GapDirection::OverProvisioned => "over_provisioned",
            GapDirection::Balanced => "balanced",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationGap {
    /// Always >= 1.
    pub ratio: f64,
    pub direction: GapDirection,
    /// Stage the ratio refers to.
    pub stage: Stage,
}

/// Ratio between a component rate and the knee rate, folded to be >= 1.
pub fn optimization_gap(component_rate: Hertz, knee_rate: Hertz) -> Result<(f64, GapDirection)> {
    for (field, v) in [("component_rate", component_rate), ("knee_rate", knee_rate)] {
        if !(v.is_finite() && v.value() > 0.0) {
            return Err(Error::invalid(
                field,
                format!("must be > 0, got {}", v.value()),
            ));
        }
    }
    let r = component_rate.value() / knee_rate.value();
    let ratio = r.max(1.0 / r);
    let direction = if (ratio - 1.0).abs() <= BALANCED_TOLERANCE {
        GapDirection::Balanced
    } else if r > 1.0 {
        GapDirection::OverProvisioned
    } else {
        GapDirection::UnderProvisioned
    };
    Ok((ratio, direction))
}

fn limiting_stage(timing: &PipelineTiming) -> (Stage, Hertz) {
    let rates = timing.rates();
    let stages = [Stage::Sensor, Stage::Compute, Stage::Control];
    let mut best = 0;
    for i in 1..3 {
        // strict comparison keeps the earliest stage on ties
        if rates[i].value() < rates[best].value() {
            best = i;
        }
    }
    (stages[best], rates[best])
}

/// Classifies which subsystem bounds the safe velocity, with fully overlapped stages.
pub fn classify_bound(
    timing: &PipelineTiming,
    knee: &KneePoint,
    dyn_: &BodyDynamics,
) -> Result<BoundClass> {
    classify_bound_with(timing, PipelineMode::Overlapped, knee, dyn_)
}

pub fn classify_bound_with(
    timing: &PipelineTiming,
    mode: PipelineMode,
    knee: &KneePoint,
    dyn_: &BodyDynamics,
) -> Result<BoundClass> {
    let action = timing.action_timing(mode);
    let (stage, rate) = limiting_stage(timing);
    let kind = if action.action_throughput >= knee.knee_throughput {
        BoundKind::PhysicsBound
    } else {
        stage.into()
    };
    Ok(BoundClass {
        kind,
        limiting_stage: stage,
        ceiling_velocity: safe_velocity(dyn_, action.action_period)?,
        limiting_rate: rate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRates {
    pub sensor_hz: Hertz,
    pub compute_hz: Hertz,
    pub control_hz: Hertz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Analysis {
    pub label: String,
    pub knee: KneePoint,
    #[serde(rename = "f_action_hz")]
    pub f_action: Hertz,
    #[serde(rename = "v_safe_mps")]
    pub v_safe: MetersPerSecond,
    pub bound: BoundClass,
    pub gap: OptimizationGap,
    pub recommendations: Vec<String>,
    pub stage_rates: StageRates,
    #[serde(rename = "a_max_mps2")]
    pub a_max: MetersPerSecondSquared,
    #[serde(rename = "sense_range_m")]
    pub sense_range: Meters,
    pub thrust_to_weight: f64,
    #[serde(rename = "payload_mass_g")]
    pub payload_mass: Grams,
    #[serde(rename = "heatsink_mass_g")]
    pub heatsink_mass: Grams,
    #[serde(rename = "compute_tdp_w")]
    pub compute_tdp: Watts,
}

pub fn analyze(config: &UavConfiguration) -> Result<F1Analysis> {
    let timing = config.pipeline_timing()?;
    let budget = config.mass_budget()?;
    let dyn_ = config.body_dynamics()?;
    let knee = knee_point(&dyn_, config.knee_threshold)?;
    let action = timing.action_timing(config.pipeline);
    let v_safe = safe_velocity(&dyn_, action.action_period)?;
    let bound = classify_bound_with(&timing, config.pipeline, &knee, &dyn_)?;

    let (stage, rate) = match bound.kind {
        BoundKind::PhysicsBound => (Stage::Compute, timing.compute_rate()),
        _ => (bound.limiting_stage, action.action_throughput),
    };
    let (ratio, direction) = optimization_gap(rate, knee.knee_throughput)?;

    let mut analysis = F1Analysis {
        label: config.label(),
        knee,
        f_action: action.action_throughput,
        v_safe,
        bound,
        gap: OptimizationGap {
            ratio,
            direction,
            stage,
        },
        recommendations: Vec::new(),
        stage_rates: StageRates {
            sensor_hz: timing.sensor_rate(),
            compute_hz: timing.compute_rate(),
            control_hz: timing.control_rate(),
        },
        a_max: dyn_.a_max,
        sense_range: dyn_.sense_range,
        thrust_to_weight: budget.thrust_to_weight,
        payload_mass: config.payload_mass(),
        heatsink_mass: config.compute.effective_heatsink_mass(),
        compute_tdp: config.compute.tdp,
    };
    analysis.recommendations = recommendations(&analysis);
    Ok(analysis)
}

/// Rule-based optimization tips for an analysis.
pub fn recommendations(analysis: &F1Analysis) -> Vec<String> {
    let gap = &analysis.gap;
    let knee_hz = analysis.knee.knee_throughput.value();
    match gap.direction {
        GapDirection::Balanced => vec![format!(
            "balanced design: {} throughput is within {:.0}% of the knee-point ({:.1} Hz)",
            gap.stage,
            BALANCED_TOLERANCE * 100.0,
            knee_hz
        )],
        GapDirection::UnderProvisioned => vec![format!(
            "improve {} throughput by {:.1}x ({:.3} Hz -> {:.1} Hz) to reach the knee-point",
            gap.stage,
            gap.ratio,
            analysis.f_action.value(),
            knee_hz
        )],
        GapDirection::OverProvisioned => {
            let mut tips = vec![format!(
                "trade {:.1}x excess compute throughput for lower TDP / heatsink mass \
                 (heatsink {:.0} g at {} W)",
                gap.ratio,
                analysis.heatsink_mass.value(),
                analysis.compute_tdp.value()
            )];
            if analysis.bound.kind == BoundKind::PhysicsBound {
                tips.push(format!(
                    "physics-bound: increase thrust-to-weight (now {:.3}) or reduce payload \
                     ({:.0} g) to raise the roofline",
                    analysis.thrust_to_weight,
                    analysis.payload_mass.value()
                ));
            }
            tips
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Log,
    Linear,
}

/// Inclusive frequency grid; endpoints are reproduced exactly.
pub fn frequency_grid(min: Hertz, max: Hertz, samples: usize, scale: Scale) -> Result<Vec<Hertz>> {
    let (lo, hi) = (min.value(), max.value());
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::invalid(
            "f_range",
            format!("need 0 < min < max, got ({lo}, {hi})"),
        ));
    }
    if samples < 2 {
        return Err(Error::invalid(
            "samples",
            format!("need at least 2, got {samples}"),
        ));
    }
    let last = samples - 1;
    Ok((0..samples)
        .map(|i| {
            if i == 0 {
                return min;
            }
            if i == last {
                return max;
            }
            let t = i as f64 / last as f64;
            Hertz(match scale {
                Scale::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
                Scale::Linear => lo + t * (hi - lo),
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(rename = "f_action_hz")]
    pub f_action: Hertz,
    #[serde(rename = "v_safe_mps")]
    pub v_safe: MetersPerSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoofSegment {
    #[serde(rename = "velocity_mps")]
    pub velocity: MetersPerSecond,
    #[serde(rename = "from_hz")]
    pub from: Hertz,
    #[serde(rename = "to_hz")]
    pub to: Hertz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ceiling {
    pub label: String,
    pub stage: Stage,
    #[serde(rename = "rate_hz")]
    pub rate: Hertz,
    #[serde(rename = "velocity_mps")]
    pub velocity: MetersPerSecond,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RooflineSeries {
    pub label: String,
    pub scale: Scale,
    pub curve: Vec<CurvePoint>,
    pub roof: RoofSegment,
    pub knee: KneePoint,
    pub ceilings: Vec<Ceiling>,
}

/// Roofline of bare dynamics, without pipeline ceilings.
pub fn dynamics_series(
    label: impl Into<String>,
    dyn_: &BodyDynamics,
    threshold: f64,
    grid: &[Hertz],
    scale: Scale,
) -> Result<RooflineSeries> {
    let knee = knee_point(dyn_, threshold)?;
    let curve = grid
        .iter()
        .map(|&f| {
            Ok(CurvePoint {
                f_action: f,
                v_safe: safe_velocity(dyn_, f.to_period())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let to = grid.last().copied().unwrap_or(knee.knee_throughput);
    Ok(RooflineSeries {
        label: label.into(),
        scale,
        curve,
        roof: RoofSegment {
            velocity: knee.asymptote_velocity,
            from: knee.knee_throughput,
            to: if to > knee.knee_throughput {
                to
            } else {
                knee.knee_throughput
            },
        },
        knee,
        ceilings: Vec::new(),
    })
}

fn series_on_grid(
    config: &UavConfiguration,
    grid: &[Hertz],
    scale: Scale,
) -> Result<RooflineSeries> {
    let dyn_ = config.body_dynamics()?;
    let mut series = dynamics_series(config.label(), &dyn_, config.knee_threshold, grid, scale)?;
    let timing = config.pipeline_timing()?;
    let stages = [
        (
            Stage::Sensor,
            timing.sensor_rate(),
            config.sensor.name.as_str(),
        ),
        (
            Stage::Compute,
            timing.compute_rate(),
            config.algorithm.algorithm.as_str(),
        ),
        (Stage::Control, timing.control_rate(), "control"),
    ];
    for (stage, rate, name) in stages {
        series.ceilings.push(Ceiling {
            label: format!("{stage}: {name}"),
            stage,
            rate,
            velocity: safe_velocity(&dyn_, rate.to_period())?,
        });
    }
    Ok(series)
}

/// Sampled roofline for a configuration, with one ceiling marker per pipeline stage.
pub fn roofline_series(
    config: &UavConfiguration,
    f_range: (Hertz, Hertz),
    samples: usize,
    scale: Scale,
) -> Result<RooflineSeries> {
    let grid = frequency_grid(f_range.0, f_range.1, samples, scale)?;
    series_on_grid(config, &grid, scale)
}

/// Design knobs that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Knob {
    SensorFramerate,
    SensorRange,
    ComputeTdp,
    Algorithm,
    ComputeRuntime,
    DroneWeight,
    RotorPull,
    PayloadWeight,
}

impl Knob {
    pub const ALL: [Knob; 8] = [
        Knob::SensorFramerate,
        Knob::SensorRange,
        Knob::ComputeTdp,
        Knob::Algorithm,
        Knob::ComputeRuntime,
        Knob::DroneWeight,
        Knob::RotorPull,
        Knob::PayloadWeight,
    ];

    /// Name used on the command line and in sweep requests.
    pub fn field(self) -> &'static str {
        match self {
            Knob::SensorFramerate => "sensor_framerate_hz",
            Knob::SensorRange => "sensor_range_m",
            Knob::ComputeTdp => "compute_tdp_w",
            Knob::Algorithm => "algorithm",
            Knob::ComputeRuntime => "compute_runtime_s",
            Knob::DroneWeight => "drone_weight_g",
            Knob::RotorPull => "rotor_pull_gf",
            Knob::PayloadWeight => "payload_weight_g",
        }
    }
}

impl std::str::FromStr for Knob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Knob::ALL
            .into_iter()
            .find(|k| {
                let field = k.field();
                key == field || field.rsplit_once('_').is_some_and(|(stem, _)| key == stem)
            })
            .ok_or_else(|| {
                let names: Vec<_> = Knob::ALL.iter().map(|k| k.field()).collect();
                Error::invalid(
                    "knob",
                    format!("unknown knob \"{s}\"; expected one of {}", names.join(", ")),
                )
            })
    }
}

impl fmt::Display for Knob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.field())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KnobValue {
    Number(f64),
    Label(String),
}

impl KnobValue {
    /// Numbers when the text parses as one, labels otherwise.
    pub fn parse(text: &str) -> Self {
        match text.trim().parse::<f64>() {
            Ok(x) => KnobValue::Number(x),
            Err(_) => KnobValue::Label(text.trim().to_string()),
        }
    }
}

impl fmt::Display for KnobValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnobValue::Number(x) => write!(f, "{x}"),
            KnobValue::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepError {
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thrust_to_weight: Option<f64>,
}

impl From<&Error> for SweepError {
    fn from(e: &Error) -> Self {
        Self {
            message: e.to_string(),
            thrust_to_weight: match e {
                Error::CannotClimb {
                    thrust_to_weight, ..
                } => Some(*thrust_to_weight),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutcome {
    Analysis(F1Analysis),
    Error(SweepError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub knob: Knob,
    pub value: KnobValue,
    #[serde(flatten)]
    pub outcome: SweepOutcome,
}

impl SweepPoint {
    pub fn analysis(&self) -> Option<&F1Analysis> {
        match &self.outcome {
            SweepOutcome::Analysis(a) => Some(a),
            SweepOutcome::Error(_) => None,
        }
    }
}

/// One analysis per value, in input order; failures are recorded in place.
pub fn sweep(
    config: &UavConfiguration,
    knob: Knob,
    values: &[KnobValue],
    store: &PresetStore,
) -> Vec<SweepPoint> {
    values
        .iter()
        .map(|value| {
            let outcome = match config
                .with_knob(knob, value, store)
                .and_then(|c| analyze(&c))
            {
                Ok(a) => SweepOutcome::Analysis(a),
                Err(e) => SweepOutcome::Error(SweepError::from(&e)),
            };
            SweepPoint {
                knob,
                value: value.clone(),
                outcome,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub grid: Vec<Hertz>,
    pub series: Vec<RooflineSeries>,
    pub analyses: Vec<F1Analysis>,
}

/// Overlays several configurations on one shared frequency grid.
pub fn compare(
    configs: &[UavConfiguration],
    f_range: (Hertz, Hertz),
    samples: usize,
    scale: Scale,
) -> Result<Comparison> {
    if configs.is_empty() {
        return Err(Error::invalid("configs", "need at least one configuration"));
    }
    let grid = frequency_grid(f_range.0, f_range.1, samples, scale)?;
    let mut series = Vec::with_capacity(configs.len());
    let mut analyses = Vec::with_capacity(configs.len());
    for cfg in configs {
        series.push(series_on_grid(cfg, &grid, scale)?);
        analyses.push(analyze(cfg)?);
    }
    Ok(Comparison {
        grid,
        series,
        analyses,
    })
}
