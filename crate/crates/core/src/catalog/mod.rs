//! Preset components and measurements, plus configuration documents.
//!
//! The store is immutable once built. User overlays produce a new store in which
//! entries with a matching key replace the built-in ones.

mod builtin;
pub mod config;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{calibrate_a_max, DEFAULT_KNEE_THRESHOLD};
use crate::physics::{
    heatsink_mass_with, AirframeSpec, PayloadItem, PayloadKind, HEATSINK_GRAMS_PER_WATT,
};
use crate::units::{
    GramForce, Grams, Hertz, Meters, MetersPerSecond, MetersPerSecondSquared, Seconds, Watts,
};

pub use builtin::builtin_presets;
pub use config::{load_config, serialize_config, ConfigDocument, DocumentFormat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputePlatform {
    pub name: String,
    pub tdp: Watts,
    pub board_mass: Grams,
    /// Explicit heatsink mass; when absent it is derived from `tdp`.
    pub heatsink_mass: Option<Grams>,
}

impl ComputePlatform {
    pub fn effective_heatsink_mass(&self) -> Grams {
        self.heatsink_mass
            .unwrap_or_else(|| heatsink_mass_with(self.tdp, HEATSINK_GRAMS_PER_WATT))
    }

    /// Board plus heatsink as payload items.
    pub fn payload_items(&self) -> [PayloadItem; 2] {
        [
            PayloadItem::new(self.name.clone(), self.board_mass, PayloadKind::Compute),
            PayloadItem::new(
                format!("{} heatsink", self.name),
                self.effective_heatsink_mass(),
                PayloadKind::Heatsink,
            ),
        ]
    }

    pub fn stack_mass(&self) -> Grams {
        self.board_mass + self.effective_heatsink_mass()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    pub name: String,
    pub framerate: Hertz,
    pub range: Meters,
    pub mass: Grams,
}

/// Measured compute rate of an autonomy algorithm on one platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmPerf {
    pub algorithm: String,
    pub platform: String,
    pub throughput: Hertz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedAcceleration {
    pub a_max: MetersPerSecondSquared,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavPreset {
    pub name: String,
    pub airframe: AirframeSpec,
    pub payload: Vec<PayloadItem>,
    pub calibrated_a_max: Option<CalibratedAcceleration>,
    pub sense_range: Meters,
    pub reference_compute: Option<String>,
    pub reference_sensor: Option<String>,
    pub reference_algorithm: Option<String>,
}

/// A catalog value together with where its numbers come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry<T> {
    pub value: T,
    pub provenance: String,
}

impl<T> Entry<T> {
    fn new(value: T, provenance: impl Into<String>) -> Self {
        Self {
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PresetStore {
    platforms: Vec<Entry<ComputePlatform>>,
    sensors: Vec<Entry<SensorSpec>>,
    algorithms: Vec<Entry<AlgorithmPerf>>,
    uavs: Vec<Entry<UavPreset>>,
}

fn find<'a, T>(
    entries: &'a [Entry<T>],
    name: &str,
    key: impl Fn(&T) -> &str,
) -> Option<&'a Entry<T>> {
    entries.iter().find(|e| key(&e.value) == name).or_else(|| {
        entries
            .iter()
            .find(|e| key(&e.value).eq_ignore_ascii_case(name))
    })
}

fn upsert<T>(entries: &mut Vec<Entry<T>>, entry: Entry<T>, same: impl Fn(&T, &T) -> bool) {
    match entries.iter_mut().find(|e| same(&e.value, &entry.value)) {
        Some(slot) => *slot = entry,
        None => entries.push(entry),
    }
}

impl PresetStore {
    pub fn platforms(&self) -> &[Entry<ComputePlatform>] {
        &self.platforms
    }

    pub fn sensors(&self) -> &[Entry<SensorSpec>] {
        &self.sensors
    }

    pub fn algorithms(&self) -> &[Entry<AlgorithmPerf>] {
        &self.algorithms
    }

    pub fn uavs(&self) -> &[Entry<UavPreset>] {
        &self.uavs
    }

    pub fn platform(&self, name: &str) -> Option<&Entry<ComputePlatform>> {
        find(&self.platforms, name, |p| &p.name)
    }

    pub fn sensor(&self, name: &str) -> Option<&Entry<SensorSpec>> {
        find(&self.sensors, name, |s| &s.name)
    }

    pub fn uav(&self, name: &str) -> Option<&Entry<UavPreset>> {
        find(&self.uavs, name, |u| &u.name)
    }

    pub fn algorithm(&self, algorithm: &str, platform: &str) -> Option<&Entry<AlgorithmPerf>> {
        let exact = self
            .algorithms
            .iter()
            .find(|e| e.value.algorithm == algorithm && e.value.platform == platform);
        exact.or_else(|| {
            self.algorithms.iter().find(|e| {
                e.value.algorithm.eq_ignore_ascii_case(algorithm)
                    && e.value.platform.eq_ignore_ascii_case(platform)
            })
        })
    }

    pub(crate) fn insert_platform(
        &mut self,
        value: ComputePlatform,
        provenance: impl Into<String>,
    ) {
        upsert(
            &mut self.platforms,
            Entry::new(value, provenance),
            |a, b| a.name == b.name,
        );
    }

    pub(crate) fn insert_sensor(&mut self, value: SensorSpec, provenance: impl Into<String>) {
        upsert(&mut self.sensors, Entry::new(value, provenance), |a, b| {
            a.name == b.name
        });
    }

    pub(crate) fn insert_algorithm(&mut self, value: AlgorithmPerf, provenance: impl Into<String>) {
        upsert(
            &mut self.algorithms,
            Entry::new(value, provenance),
            |a, b| a.algorithm == b.algorithm && a.platform == b.platform,
        );
    }

    pub(crate) fn insert_uav(&mut self, value: UavPreset, provenance: impl Into<String>) {
        upsert(&mut self.uavs, Entry::new(value, provenance), |a, b| {
            a.name == b.name
        });
    }

    /// All names, grouped by kind, in catalog order.
    pub fn names(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        out.extend(self.uavs.iter().map(|e| ("uav", e.value.name.clone())));
        out.extend(
            self.platforms
                .iter()
                .map(|e| ("compute", e.value.name.clone())),
        );
        out.extend(
            self.sensors
                .iter()
                .map(|e| ("sensor", e.value.name.clone())),
        );
        out.extend(self.algorithms.iter().map(|e| {
            (
                "algorithm",
                format!("{} @ {}", e.value.algorithm, e.value.platform),
            )
        }));
        out
    }

    pub fn to_document(&self) -> PresetDocument {
        PresetDocument {
            platforms: self.platforms.iter().map(PlatformRecord::from).collect(),
            sensors: self.sensors.iter().map(SensorRecord::from).collect(),
            algorithms: self.algorithms.iter().map(AlgorithmRecord::from).collect(),
            uavs: self.uavs.iter().map(UavRecord::from).collect(),
        }
    }

    /// Returns a new store with `doc` merged over `self`; overlay entries win.
    pub fn with_overlay(&self, doc: &PresetDocument) -> Result<PresetStore> {
        let mut store = self.clone();
        for (i, p) in doc.platforms.iter().enumerate() {
            let path = format!("platforms[{i}]");
            non_negative(&format!("{path}.tdp_w"), p.tdp_w)?;
            non_negative(&format!("{path}.board_mass_g"), p.board_mass_g)?;
            if let Some(h) = p.heatsink_mass_g {
                non_negative(&format!("{path}.heatsink_mass_g"), h)?;
            }
            store.insert_platform(
                ComputePlatform {
                    name: p.name.clone(),
                    tdp: Watts(p.tdp_w),
                    board_mass: Grams(p.board_mass_g),
                    heatsink_mass: p.heatsink_mass_g.map(Grams),
                },
                p.provenance.clone(),
            );
        }
        for (i, s) in doc.sensors.iter().enumerate() {
            let path = format!("sensors[{i}]");
            positive(&format!("{path}.framerate_hz"), s.framerate_hz)?;
            positive(&format!("{path}.range_m"), s.range_m)?;
            non_negative(&format!("{path}.mass_g"), s.mass_g)?;
            store.insert_sensor(
                SensorSpec {
                    name: s.name.clone(),
                    framerate: Hertz(s.framerate_hz),
                    range: Meters(s.range_m),
                    mass: Grams(s.mass_g),
                },
                s.provenance.clone(),
            );
        }
        for (i, a) in doc.algorithms.iter().enumerate() {
            positive(&format!("algorithms[{i}].throughput_hz"), a.throughput_hz)?;
            store.insert_algorithm(
                AlgorithmPerf {
                    algorithm: a.algorithm.clone(),
                    platform: a.platform.clone(),
                    throughput: Hertz(a.throughput_hz),
                },
                a.provenance.clone(),
            );
        }
        for (i, u) in doc.uavs.iter().enumerate() {
            let path = format!("uavs[{i}]");
            let airframe = AirframeSpec {
                base_mass: Grams(u.base_mass_g),
                rotor_count: u.rotor_count,
                per_rotor_pull: GramForce(u.rotor_pull_gf),
                control_rate: Hertz(u.control_rate_hz),
            };
            airframe
                .validate()
                .map_err(|e| Error::config(&path, e.to_string()))?;
            positive(&format!("{path}.sense_range_m"), u.sense_range_m)?;
            let calibrated_a_max = match u.calibrated_a_max_mps2 {
                Some(a) => {
                    positive(&format!("{path}.calibrated_a_max_mps2"), a)?;
                    Some(CalibratedAcceleration {
                        a_max: MetersPerSecondSquared(a),
                        provenance: u.provenance.clone(),
                    })
                }
                None => None,
            };
            store.insert_uav(
                UavPreset {
                    name: u.name.clone(),
                    airframe,
                    payload: u
                        .payload
                        .iter()
                        .map(config::PayloadSection::to_item)
                        .collect(),
                    calibrated_a_max,
                    sense_range: Meters(u.sense_range_m),
                    reference_compute: u.reference_compute.clone(),
                    reference_sensor: u.reference_sensor.clone(),
                    reference_algorithm: u.reference_algorithm.clone(),
                },
                u.provenance.clone(),
            );
        }
        Ok(store)
    }

    /// Loads a TOML or JSON preset document from disk and merges it over `self`.
    pub fn with_overlay_file(&self, path: &Path) -> Result<PresetStore> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(
                path.display().to_string(),
                format!("cannot read preset file: {e}"),
            )
        })?;
        let doc = PresetDocument::parse(&text)?;
        self.with_overlay(&doc)
    }
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be > 0, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be >= 0, got {v}")))
    }
}

/// `a_max` that places the knee at `knee_throughput` for the given range and threshold.
///
/// Inverts the knee construction: `T_k = sqrt(d / 2a) · (1/θ − θ)`.
pub fn a_max_for_knee(
    knee_throughput: Hertz,
    threshold: f64,
    sense_range: Meters,
) -> Result<MetersPerSecondSquared> {
    positive("knee_throughput", knee_throughput.value())?;
    positive("sense_range", sense_range.value())?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid("knee_threshold", "must lie in (0, 1)"));
    }
    let spread = (1.0 / threshold - threshold) * knee_throughput.value();
    Ok(MetersPerSecondSquared(
        sense_range.value() / 2.0 * spread * spread,
    ))
}

/// Back-solves `a_max` for a preset from one (velocity, period, range) anchor.
pub fn backsolve_preset_dynamics(
    velocity: MetersPerSecond,
    action_period: Seconds,
    sense_range: Meters,
) -> Result<MetersPerSecondSquared> {
    calibrate_a_max(velocity, action_period, sense_range)
}

/// Knee threshold used when calibrating presets from published knee throughputs.
pub const CALIBRATION_THRESHOLD: f64 = DEFAULT_KNEE_THRESHOLD;

// Serialized forms, used for listings and overlay files.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PresetDocument {
    #[serde(default)]
    pub platforms: Vec<PlatformRecord>,
    #[serde(default)]
    pub sensors: Vec<SensorRecord>,
    #[serde(default)]
    pub algorithms: Vec<AlgorithmRecord>,
    #[serde(default)]
    pub uavs: Vec<UavRecord>,
}

impl PresetDocument {
    pub fn parse(text: &str) -> Result<Self> {
        config::parse_document(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformRecord {
    pub name: String,
    pub tdp_w: f64,
    pub board_mass_g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatsink_mass_g: Option<f64>,
    /// Effective heatsink mass (explicit or TDP-derived); informational.
    #[serde(default, skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub effective_heatsink_mass_g: Option<f64>,
    #[serde(default)]
    pub provenance: String,
}

impl From<&Entry<ComputePlatform>> for PlatformRecord {
    fn from(e: &Entry<ComputePlatform>) -> Self {
        Self {
            name: e.value.name.clone(),
            tdp_w: e.value.tdp.value(),
            board_mass_g: e.value.board_mass.value(),
            heatsink_mass_g: e.value.heatsink_mass.map(Grams::value),
            effective_heatsink_mass_g: Some(e.value.effective_heatsink_mass().value()),
            provenance: e.provenance.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorRecord {
    pub name: String,
    pub framerate_hz: f64,
    pub range_m: f64,
    #[serde(default)]
    pub mass_g: f64,
    #[serde(default)]
    pub provenance: String,
}

impl From<&Entry<SensorSpec>> for SensorRecord {
    fn from(e: &Entry<SensorSpec>) -> Self {
        Self {
            name: e.value.name.clone(),
            framerate_hz: e.value.framerate.value(),
            range_m: e.value.range.value(),
            mass_g: e.value.mass.value(),
            provenance: e.provenance.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmRecord {
    pub algorithm: String,
    pub platform: String,
    pub throughput_hz: f64,
    #[serde(default)]
    pub provenance: String,
}

impl From<&Entry<AlgorithmPerf>> for AlgorithmRecord {
    fn from(e: &Entry<AlgorithmPerf>) -> Self {
        Self {
            algorithm: e.value.algorithm.clone(),
            platform: e.value.platform.clone(),
            throughput_hz: e.value.throughput.value(),
            provenance: e.provenance.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavRecord {
    pub name: String,
    pub base_mass_g: f64,
    pub rotor_count: u32,
    pub rotor_pull_gf: f64,
    pub control_rate_hz: f64,
    #[serde(default)]
    pub payload: Vec<config::PayloadSection>,
    pub sense_range_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrated_a_max_mps2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_compute: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_sensor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_algorithm: Option<String>,
    #[serde(default)]
    pub provenance: String,
}

impl From<&Entry<UavPreset>> for UavRecord {
    fn from(e: &Entry<UavPreset>) -> Self {
        let u = &e.value;
        let provenance = match &u.calibrated_a_max {
            Some(c) => format!("{}; a_max: {}", e.provenance, c.provenance),
            None => e.provenance.clone(),
        };
        Self {
            name: u.name.clone(),
            base_mass_g: u.airframe.base_mass.value(),
            rotor_count: u.airframe.rotor_count,
            rotor_pull_gf: u.airframe.per_rotor_pull.value(),
            control_rate_hz: u.airframe.control_rate.value(),
            payload: u
                .payload
                .iter()
                .map(config::PayloadSection::from_item)
                .collect(),
            sense_range_m: u.sense_range.value(),
            calibrated_a_max_mps2: u.calibrated_a_max.as_ref().map(|c| c.a_max.value()),
            reference_compute: u.reference_compute.clone(),
            reference_sensor: u.reference_sensor.clone(),
            reference_algorithm: u.reference_algorithm.clone(),
            provenance,
        }
    }
}
