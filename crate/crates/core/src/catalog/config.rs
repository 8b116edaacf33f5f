//! Configuration documents: preset references, custom knobs, or a mix of both.
//!
//! ```toml
//! [uav]
//! name = "AscTec Pelican"
//!
//! [compute]
//! name = "Nvidia TX2"
//!
//! [algorithm]
//! name = "SPA-package-delivery"
//!
//! [sensor]
//! name = "RGB-D-60"
//!
//! [model]
//! acceleration_strategy = "vertical_headroom"
//! knee_threshold = 0.985
//! ```
//!
//! Custom fields override the fields of a named preset. A given `payload` list
//! replaces the preset's default payload. JSON documents with the same keys are
//! accepted as well.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::UavConfiguration;
use crate::error::{Error, Result};
use crate::model::{PipelineMode, DEFAULT_KNEE_THRESHOLD};
use crate::physics::{
    AccelerationModel, AccelerationStrategy, AirframeSpec, PayloadItem, PayloadKind,
};
use crate::units::{GramForce, Grams, Hertz, Meters, MetersPerSecondSquared, Watts};

use super::{AlgorithmPerf, ComputePlatform, PresetStore, SensorSpec, UavPreset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentFormat {
    Toml,
    Json,
}

impl DocumentFormat {
    /// JSON when the text starts with `{`, TOML otherwise.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            DocumentFormat::Json
        } else {
            DocumentFormat::Toml
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uav: Option<UavSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensor: Option<SensorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compute: Option<ComputeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<AlgorithmSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Vec<PayloadSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_mass_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotor_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotor_pull_gf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_rate_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framerate_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tdp_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub board_mass_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatsink_mass_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadSection {
    pub name: String,
    pub mass_g: f64,
    #[serde(default = "other_kind")]
    pub kind: PayloadKind,
}

fn other_kind() -> PayloadKind {
    PayloadKind::Other
}

impl PayloadSection {
    pub fn to_item(&self) -> PayloadItem {
        PayloadItem::new(self.name.clone(), Grams(self.mass_g), self.kind)
    }

    pub fn from_item(item: &PayloadItem) -> Self {
        Self {
            name: item.name.clone(),
            mass_g: item.mass.value(),
            kind: item.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `vertical_headroom`, `pitch_limited`, or `calibrated` (use the UAV preset's calibrated `a_max`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceleration_strategy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knee_threshold: Option<f64>,
    /// Declared `a_max`; overrides any strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_max_mps2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineMode>,
}

pub(crate) fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T> {
    match DocumentFormat::sniff(text) {
        DocumentFormat::Json => {
            let mut de = serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(&mut de).map_err(|e| {
                let path = e.path().to_string();
                Error::config(path, e.into_inner().to_string())
            })
        }
        DocumentFormat::Toml => {
            let value: toml::Table = toml::from_str(text)
                .map_err(|e| Error::config(".", format!("malformed document: {}", e.message())))?;
            serde_path_to_error::deserialize(toml::Value::Table(value)).map_err(|e| {
                let path = e.path().to_string();
                Error::config(path, e.into_inner().message().to_string())
            })
        }
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents always serialize to TOML")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config documents always serialize to JSON")
    }

    pub fn render(&self, format: DocumentFormat) -> String {
        match format {
            DocumentFormat::Toml => self.to_toml(),
            DocumentFormat::Json => self.to_json(),
        }
    }
}

fn positive(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(
            path,
            format!("must be a positive number, got {v}"),
        ))
    }
}

fn non_negative(path: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::config(
            path,
            format!("must be a non-negative number, got {v}"),
        ))
    }
}

fn missing(path: &str) -> Error {
    Error::config(path, "missing required knob")
}

fn required(path: &str, value: Option<f64>, preset: Option<f64>) -> Result<f64> {
    value.or(preset).ok_or_else(|| missing(path))
}

/// Resolves a configuration document against a preset store.
pub fn load_config(text: &str, store: &PresetStore) -> Result<UavConfiguration> {
    resolve(&ConfigDocument::parse(text)?, store)
}

/// Resolves an already parsed document.
pub fn resolve(doc: &ConfigDocument, store: &PresetStore) -> Result<UavConfiguration> {
    let uav_section = doc.uav.clone().unwrap_or_default();
    let preset = resolve_uav_preset(&uav_section, store)?;

    let airframe = AirframeSpec {
        base_mass: Grams(positive(
            "uav.base_mass_g",
            required(
                "uav.base_mass_g",
                uav_section.base_mass_g,
                preset.map(|p| p.airframe.base_mass.value()),
            )?,
        )?),
        rotor_count: match uav_section
            .rotor_count
            .or(preset.map(|p| p.airframe.rotor_count))
        {
            Some(0) => return Err(Error::config("uav.rotor_count", "must be at least 1")),
            Some(n) => n,
            None => return Err(missing("uav.rotor_count")),
        },
        per_rotor_pull: GramForce(positive(
            "uav.rotor_pull_gf",
            required(
                "uav.rotor_pull_gf",
                uav_section.rotor_pull_gf,
                preset.map(|p| p.airframe.per_rotor_pull.value()),
            )?,
        )?),
        control_rate: Hertz(positive(
            "uav.control_rate_hz",
            required(
                "uav.control_rate_hz",
                uav_section.control_rate_hz,
                preset.map(|p| p.airframe.control_rate.value()),
            )?,
        )?),
    };
    let uav_name = uav_section
        .name
        .clone()
        .or_else(|| preset.map(|p| p.name.clone()))
        .unwrap_or_else(|| "custom".to_string());

    let payload = match &doc.payload {
        Some(items) => items
            .iter()
            .enumerate()
            .map(|(i, p)| {
                non_negative(&format!("payload[{i}].mass_g"), p.mass_g)?;
                Ok(p.to_item())
            })
            .collect::<Result<Vec<_>>>()?,
        None => preset.map(|p| p.payload.clone()).unwrap_or_default(),
    };

    let compute = resolve_compute(doc.compute.as_ref(), preset, store)?;
    let sensor = resolve_sensor(doc.sensor.as_ref(), preset, store)?;
    let algorithm = resolve_algorithm(doc.algorithm.as_ref(), preset, &compute, store)?;

    let model = doc.model.clone().unwrap_or_default();
    let knee_threshold = match model.knee_threshold {
        Some(t) if t > 0.0 && t < 1.0 => t,
        Some(t) => {
            return Err(Error::config(
                "model.knee_threshold",
                format!("must lie strictly between 0 and 1, got {t}"),
            ))
        }
        None => DEFAULT_KNEE_THRESHOLD,
    };
    let acceleration = match model.a_max_mps2 {
        Some(a) => AccelerationModel::declared(MetersPerSecondSquared(positive(
            "model.a_max_mps2",
            a,
        )?))?,
        None => match model.acceleration_strategy.as_deref() {
            None | Some("vertical_headroom") => {
                AccelerationModel::with_strategy(AccelerationStrategy::VerticalHeadroom)
            }
            Some("pitch_limited") => {
                AccelerationModel::with_strategy(AccelerationStrategy::PitchLimited)
            }
            Some("calibrated") => {
                let calibrated = preset.and_then(|p| p.calibrated_a_max.as_ref()).ok_or_else(|| {
                    Error::config(
                        "model.acceleration_strategy",
                        "\"calibrated\" requires a UAV preset with a calibrated a_max",
                    )
                })?;
                AccelerationModel::declared(calibrated.a_max)?
            }
            Some(other) => {
                return Err(Error::config(
                    "model.acceleration_strategy",
                    format!(
                        "unknown strategy \"{other}\"; expected vertical_headroom, pitch_limited or calibrated"
                    ),
                ))
            }
        },
    };

    Ok(UavConfiguration {
        name: uav_name,
        airframe,
        payload,
        compute,
        algorithm,
        sensor,
        acceleration,
        knee_threshold,
        pipeline: model.pipeline.unwrap_or_default(),
    })
}

fn resolve_uav_preset<'a>(
    section: &UavSection,
    store: &'a PresetStore,
) -> Result<Option<&'a UavPreset>> {
    let Some(name) = &section.name else {
        return Ok(None);
    };
    if let Some(entry) = store.uav(name) {
        return Ok(Some(&entry.value));
    }
    let fields = [
        ("uav.base_mass_g", section.base_mass_g.is_some()),
        ("uav.rotor_count", section.rotor_count.is_some()),
        ("uav.rotor_pull_gf", section.rotor_pull_gf.is_some()),
        ("uav.control_rate_hz", section.control_rate_hz.is_some()),
    ];
    // a partly custom airframe under an unknown name reports its first gap
    match fields.iter().find(|(_, present)| !present) {
        None => Ok(None),
        Some((path, _)) if fields.iter().any(|(_, present)| *present) => Err(missing(path)),
        Some(_) => Err(Error::UnknownPreset {
            path: "uav.name".into(),
            kind: "uav",
            name: name.clone(),
        }),
    }
}

fn resolve_compute(
    section: Option<&ComputeSection>,
    uav: Option<&UavPreset>,
    store: &PresetStore,
) -> Result<ComputePlatform> {
    let fallback;
    let section = match section {
        Some(s) => s,
        None => {
            let name = uav
                .and_then(|u| u.reference_compute.clone())
                .ok_or_else(|| missing("compute"))?;
            fallback = ComputeSection {
                name: Some(name),
                ..Default::default()
            };
            &fallback
        }
    };
    let complete = section.tdp_w.is_some() && section.board_mass_g.is_some();
    let preset = match &section.name {
        Some(name) => match store.platform(name) {
            Some(e) => Some(&e.value),
            None if complete => None,
            None => {
                return Err(Error::UnknownPreset {
                    path: "compute.name".into(),
                    kind: "compute",
                    name: name.clone(),
                })
            }
        },
        None => None,
    };
    let heatsink_mass = match section.heatsink_mass_g {
        Some(h) => Some(Grams(non_negative("compute.heatsink_mass_g", h)?)),
        // A custom TDP re-derives the heatsink unless one is given explicitly.
        None if section.tdp_w.is_some() => None,
        None => preset.and_then(|p| p.heatsink_mass),
    };
    Ok(ComputePlatform {
        name: section
            .name
            .clone()
            .or_else(|| preset.map(|p| p.name.clone()))
            .unwrap_or_else(|| "custom".into()),
        tdp: Watts(non_negative(
            "compute.tdp_w",
            required(
                "compute.tdp_w",
                section.tdp_w,
                preset.map(|p| p.tdp.value()),
            )?,
        )?),
        board_mass: Grams(non_negative(
            "compute.board_mass_g",
            required(
                "compute.board_mass_g",
                section.board_mass_g,
                preset.map(|p| p.board_mass.value()),
            )?,
        )?),
        heatsink_mass,
    })
}

fn resolve_sensor(
    section: Option<&SensorSection>,
    uav: Option<&UavPreset>,
    store: &PresetStore,
) -> Result<SensorSpec> {
    let fallback;
    let section = match section {
        Some(s) => s,
        None => {
            let name = uav
                .and_then(|u| u.reference_sensor.clone())
                .ok_or_else(|| missing("sensor"))?;
            fallback = SensorSection {
                name: Some(name),
                ..Default::default()
            };
            &fallback
        }
    };
    let complete = section.framerate_hz.is_some() && section.range_m.is_some();
    let preset = match &section.name {
        Some(name) => match store.sensor(name) {
            Some(e) => Some(&e.value),
            None if complete => None,
            None => {
                return Err(Error::UnknownPreset {
                    path: "sensor.name".into(),
                    kind: "sensor",
                    name: name.clone(),
                })
            }
        },
        None => None,
    };
    Ok(SensorSpec {
        name: section
            .name
            .clone()
            .or_else(|| preset.map(|p| p.name.clone()))
            .unwrap_or_else(|| "custom".into()),
        framerate: Hertz(positive(
            "sensor.framerate_hz",
            required(
                "sensor.framerate_hz",
                section.framerate_hz,
                preset.map(|p| p.framerate.value()),
            )?,
        )?),
        range: Meters(positive(
            "sensor.range_m",
            required(
                "sensor.range_m",
                section.range_m,
                preset.map(|p| p.range.value()),
            )?,
        )?),
        mass: Grams(non_negative(
            "sensor.mass_g",
            section
                .mass_g
                .or(preset.map(|p| p.mass.value()))
                .unwrap_or(0.0),
        )?),
    })
}

fn resolve_algorithm(
    section: Option<&AlgorithmSection>,
    uav: Option<&UavPreset>,
    compute: &ComputePlatform,
    store: &PresetStore,
) -> Result<AlgorithmPerf> {
    let fallback;
    let section = match section {
        Some(s) => s,
        None => {
            let name = uav
                .and_then(|u| u.reference_algorithm.clone())
                .ok_or_else(|| missing("algorithm"))?;
            fallback = AlgorithmSection {
                name: Some(name),
                ..Default::default()
            };
            &fallback
        }
    };
    let custom_rate = match (section.throughput_hz, section.runtime_s) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "algorithm",
                "give either runtime_s or throughput_hz, not both",
            ))
        }
        (Some(hz), None) => Some(positive("algorithm.throughput_hz", hz)?),
        (None, Some(s)) => Some(1.0 / positive("algorithm.runtime_s", s)?),
        (None, None) => None,
    };
    let name = section.name.clone();
    match (custom_rate, name) {
        (Some(hz), name) => Ok(AlgorithmPerf {
            algorithm: name.unwrap_or_else(|| "custom".into()),
            platform: compute.name.clone(),
            throughput: Hertz(hz),
        }),
        (None, Some(name)) => store
            .algorithm(&name, &compute.name)
            .map(|e| AlgorithmPerf {
                platform: compute.name.clone(),
                ..e.value.clone()
            })
            .ok_or_else(|| {
                Error::config(
                    "algorithm.name",
                    format!(
                        "no measured throughput for \"{name}\" on \"{}\"; give throughput_hz or runtime_s",
                        compute.name
                    ),
                )
            }),
        (None, None) => Err(Error::config(
            "algorithm",
            "missing required knob: name, runtime_s or throughput_hz",
        )),
    }
}

/// Fully custom document that resolves back to `config` exactly.
pub fn serialize_config(config: &UavConfiguration) -> ConfigDocument {
    ConfigDocument {
        uav: Some(UavSection {
            name: Some(config.name.clone()),
            base_mass_g: Some(config.airframe.base_mass.value()),
            rotor_count: Some(config.airframe.rotor_count),
            rotor_pull_gf: Some(config.airframe.per_rotor_pull.value()),
            control_rate_hz: Some(config.airframe.control_rate.value()),
        }),
        sensor: Some(SensorSection {
            name: Some(config.sensor.name.clone()),
            framerate_hz: Some(config.sensor.framerate.value()),
            range_m: Some(config.sensor.range.value()),
            mass_g: Some(config.sensor.mass.value()),
        }),
        compute: Some(ComputeSection {
            name: Some(config.compute.name.clone()),
            tdp_w: Some(config.compute.tdp.value()),
            board_mass_g: Some(config.compute.board_mass.value()),
            heatsink_mass_g: config.compute.heatsink_mass.map(Grams::value),
        }),
        algorithm: Some(AlgorithmSection {
            name: Some(config.algorithm.algorithm.clone()),
            runtime_s: None,
            throughput_hz: Some(config.algorithm.throughput.value()),
        }),
        payload: Some(
            config
                .payload
                .iter()
                .map(PayloadSection::from_item)
                .collect(),
        ),
        model: Some(ModelSection {
            acceleration_strategy: Some(config.acceleration.strategy.to_string()),
            knee_threshold: Some(config.knee_threshold),
            a_max_mps2: config.acceleration.declared_a_max.map(|a| a.value()),
            pipeline: Some(config.pipeline),
        }),
    }
}
