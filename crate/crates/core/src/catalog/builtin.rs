use crate::physics::{AirframeSpec, PayloadItem, PayloadKind};
use crate::units::{
    GramForce, Grams, Hertz, Kilograms, Meters, MetersPerSecond, MetersPerSecondSquared, Seconds,
    Watts, GRAVITY,
};

use super::{
    a_max_for_knee, backsolve_preset_dynamics, AlgorithmPerf, CalibratedAcceleration,
    ComputePlatform, PresetStore, SensorSpec, UavPreset, CALIBRATION_THRESHOLD,
};

const CONTROL_RATE: Hertz = Hertz(1000.0);

/// Validation fleet (UAV-A to UAV-D): T = 0.1 s and d = 3 m.
const VALIDATION_PERIOD: Seconds = Seconds(0.1);
const VALIDATION_RANGE: Meters = Meters(3.0);

/// Range used to back-solve `a_max` from published knee throughputs.
const KNEE_CALIBRATION_RANGE: Meters = Meters(4.5);

fn platform(name: &str, tdp: f64, board: f64, heatsink: Option<f64>) -> ComputePlatform {
    ComputePlatform {
        name: name.to_string(),
        tdp: Watts(tdp),
        board_mass: Grams(board),
        heatsink_mass: heatsink.map(Grams),
    }
}

fn sensor(name: &str, fps: f64, range: f64, mass: f64) -> SensorSpec {
    SensorSpec {
        name: name.to_string(),
        framerate: Hertz(fps),
        range: Meters(range),
        mass: Grams(mass),
    }
}

fn perf(algorithm: &str, platform: &str, hz: f64) -> AlgorithmPerf {
    AlgorithmPerf {
        algorithm: algorithm.to_string(),
        platform: platform.to_string(),
        throughput: Hertz(hz),
    }
}

fn battery(grams: f64) -> PayloadItem {
    PayloadItem::new("battery", Grams(grams), PayloadKind::Battery)
}

/// Per-rotor pull that gives `a_max` of vertical headroom at the reference take-off mass.
fn pull_for_acceleration(
    reference_mass: Grams,
    rotor_count: u32,
    a_max: MetersPerSecondSquared,
) -> GramForce {
    let m: Kilograms = reference_mass.to_kilograms();
    let thrust = crate::units::Newtons(m.value() * (GRAVITY + a_max.value()));
    thrust.to_gram_force() / f64::from(rotor_count)
}

/// Validation drones: 1030 g frame on four ~435 g motors; payload totals 590/800/640/690 g.
fn table_one(store: &mut PresetStore) {
    let frame = AirframeSpec {
        base_mass: Grams(1030.0),
        rotor_count: 4,
        per_rotor_pull: GramForce(435.0),
        control_rate: CONTROL_RATE,
    };
    // Battery mass is what remains of the fleet payload total once the Ras-Pi4 stack (70 g) is removed.
    let rows: [(&str, &str, Vec<PayloadItem>, f64); 4] = [
        ("UAV-A", "Ras-Pi4", vec![battery(520.0)], 2.13),
        ("UAV-B", "UpBoard", vec![battery(520.0)], 1.51),
        (
            "UAV-C",
            "Ras-Pi4",
            vec![
                battery(520.0),
                PayloadItem::new(
                    "calibration weight",
                    Grams(50.0),
                    PayloadKind::CalibrationWeight,
                ),
            ],
            1.58,
        ),
        (
            "UAV-D",
            "Ras-Pi4",
            vec![
                battery(520.0),
                PayloadItem::new(
                    "calibration weight",
                    Grams(100.0),
                    PayloadKind::CalibrationWeight,
                ),
            ],
            1.53,
        ),
    ];
    for (name, compute, payload, velocity) in rows {
        let a_max = backsolve_preset_dynamics(
            MetersPerSecond(velocity),
            VALIDATION_PERIOD,
            VALIDATION_RANGE,
        )
        .expect("validation anchors are below the sensing range");
        store.insert_uav(
            UavPreset {
                name: name.to_string(),
                airframe: frame,
                payload,
                calibrated_a_max: Some(CalibratedAcceleration {
                    a_max,
                    provenance: format!(
                        "calibrated: back-solved from predicted {velocity} m/s at T = 0.1 s, d = 3 m"
                    ),
                }),
                sense_range: VALIDATION_RANGE,
                reference_compute: Some(compute.to_string()),
                reference_sensor: Some("Validation-rig".to_string()),
                reference_algorithm: Some("Validation-controller".to_string()),
            },
            "published: validation drone (1030 g base, 4 x 435 g pull); \
             battery/compute split assumed",
        );
    }
}

struct KneeCalibrated {
    name: &'static str,
    knee_hz: f64,
    rotor_count: u32,
    base_mass: f64,
    payload: Vec<PayloadItem>,
    compute: &'static str,
    sensor: &'static str,
    algorithm: &'static str,
    note: &'static str,
}

fn knee_calibrated(store: &mut PresetStore, preset: KneeCalibrated) {
    let compute = &store
        .platform(preset.compute)
        .expect("reference compute is registered first")
        .value;
    let sensor = &store
        .sensor(preset.sensor)
        .expect("reference sensor is registered first")
        .value;
    let reference_mass = Grams(preset.base_mass)
        + preset.payload.iter().map(|p| p.mass).sum()
        + compute.stack_mass()
        + sensor.mass;
    let a_max = a_max_for_knee(
        Hertz(preset.knee_hz),
        CALIBRATION_THRESHOLD,
        KNEE_CALIBRATION_RANGE,
    )
    .expect("published knee throughputs are positive");
    let airframe = AirframeSpec {
        base_mass: Grams(preset.base_mass),
        rotor_count: preset.rotor_count,
        per_rotor_pull: pull_for_acceleration(reference_mass, preset.rotor_count, a_max),
        control_rate: CONTROL_RATE,
    };
    store.insert_uav(
        UavPreset {
            name: preset.name.to_string(),
            airframe,
            payload: preset.payload,
            calibrated_a_max: Some(CalibratedAcceleration {
                a_max,
                provenance: format!(
                    "calibrated: back-solved from a {} Hz knee at threshold {}, d = 4.5 m, \
                     with {} + {}",
                    preset.knee_hz, CALIBRATION_THRESHOLD, preset.compute, preset.sensor
                ),
            }),
            sense_range: KNEE_CALIBRATION_RANGE,
            reference_compute: Some(preset.compute.to_string()),
            reference_sensor: Some(preset.sensor.to_string()),
            reference_algorithm: Some(preset.algorithm.to_string()),
        },
        format!("calibrated: {}", preset.note),
    );
}

/// The built-in preset store.
pub fn builtin_presets() -> PresetStore {
    let mut store = PresetStore::default();

    store.insert_platform(
        platform("Intel NCS", 0.9, 47.0, None),
        "published: sub-1 W USB form factor, about 47 g",
    );
    store.insert_platform(
        platform("Nvidia TX2", 15.0, 85.0, None),
        "assumed: 15 W module TDP, 85 g module",
    );
    store.insert_platform(
        platform("Nvidia AGX", 30.0, 280.0, None),
        "published: 30 W TDP, 280 g without heatsink; 162 g heatsink at 30 W",
    );
    store.insert_platform(
        platform("Nvidia AGX (15W)", 15.0, 280.0, None),
        "hypothetical: AGX at 15 W TDP, same board, throughput unchanged",
    );
    store.insert_platform(
        platform("Ras-Pi4", 6.4, 46.0, Some(24.0)),
        "assumed: 70 g stack so the published payload totals hold",
    );
    store.insert_platform(
        platform("UpBoard", 12.0, 200.0, Some(80.0)),
        "derived: 210 g heavier than the Ras-Pi4 stack (UAV-B vs UAV-A)",
    );
    store.insert_platform(
        platform("PULP", 0.064, 5.0, None),
        "published: 64 mW; board mass assumed",
    );
    store.insert_platform(
        platform("Navion-SoC", 0.002, 2.0, None),
        "published: 2 mW SLAM stage; chip mass assumed",
    );

    store.insert_sensor(
        sensor("RGB-D-60", 60.0, 4.5, 72.0),
        "published: RGB-D at 60 FPS, 4.5 m range; mass assumed",
    );
    store.insert_sensor(
        sensor("RGB-D-90", 90.0, 4.5, 72.0),
        "published: RGB-D at 90 FPS, 4.5 m range; mass assumed",
    );
    store.insert_sensor(
        sensor("RGB-NN-depth", 11.0, 10.0, 72.0),
        "published: RGB with 91 ms NN depth on TX2 (11 FPS), conservative 10 m range",
    );
    store.insert_sensor(
        sensor("Nano-cam-60", 60.0, 4.5, 2.0),
        "assumed: 60 FPS nano-UAV camera so the sensor never binds; 4.5 m range",
    );
    store.insert_sensor(
        sensor("Validation-rig", 60.0, 3.0, 0.0),
        "assumed: validation setup, 3 m range; mass already in the payload total",
    );

    let rows = [
        (
            "DroNet",
            "Nvidia TX2",
            178.0,
            "published: DroNet at 178 Hz on TX2",
        ),
        (
            "TrailNet",
            "Nvidia TX2",
            55.0,
            "published: TrailNet at 55 Hz on TX2",
        ),
        (
            "SPA-package-delivery",
            "Nvidia TX2",
            1.1,
            "published: SPA pipeline at 1.1 Hz on TX2",
        ),
        (
            "DroNet",
            "Nvidia AGX",
            230.0,
            "published: DroNet at 230 FPS on AGX",
        ),
        (
            "DroNet",
            "Nvidia AGX (15W)",
            230.0,
            "hypothetical: TDP halved without throughput loss",
        ),
        (
            "DroNet",
            "Intel NCS",
            150.0,
            "published: DroNet at 150 FPS on NCS",
        ),
        (
            "DroNet",
            "PULP",
            6.0,
            "published: PULP-DroNet at 6 Hz, 64 mW",
        ),
        (
            "SPA-Navion",
            "Navion-SoC",
            1.23,
            "published: Navion SPA pipeline at 810 ms, 1.23 Hz",
        ),
        (
            "DroNet",
            "Ras-Pi4",
            13.0,
            "derived: 43 Hz Pelican knee / 3.3x published gap",
        ),
        (
            "TrailNet",
            "Ras-Pi4",
            43.0 / 110.0,
            "derived: 43 Hz Pelican knee / 110x published gap",
        ),
        (
            "CAD2RL",
            "Ras-Pi4",
            43.0 / 660.0,
            "derived: 43 Hz Pelican knee / 660x published gap",
        ),
        (
            "Validation-controller",
            "Ras-Pi4",
            10.0,
            "assumed: validation action rate, T = 0.1 s",
        ),
        (
            "Validation-controller",
            "UpBoard",
            10.0,
            "assumed: validation action rate, T = 0.1 s",
        ),
    ];
    for (algorithm, platform_name, hz, provenance) in rows {
        store.insert_algorithm(perf(algorithm, platform_name, hz), provenance);
    }

    table_one(&mut store);

    knee_calibrated(
        &mut store,
        KneeCalibrated {
            name: "AscTec Pelican",
            knee_hz: 43.0,
            rotor_count: 4,
            base_mass: 362.0,
            payload: vec![battery(300.0)],
            compute: "Nvidia TX2",
            sensor: "RGB-D-60",
            algorithm: "DroNet",
            note: "43 Hz knee with TX2; 900 g reference take-off mass chosen so a second TX2 \
                   costs about a third of the safe velocity",
        },
    );
    knee_calibrated(
        &mut store,
        KneeCalibrated {
            name: "DJI Spark",
            knee_hz: 30.0,
            rotor_count: 4,
            base_mass: 1146.0,
            payload: vec![battery(300.0)],
            compute: "Nvidia TX2",
            sensor: "RGB-D-60",
            algorithm: "DroNet",
            note: "30 Hz knee with TX2; 1684 g reference take-off mass chosen so AGX 30 W -> 15 W \
                   raises the safe velocity by about 75%",
        },
    );
    knee_calibrated(
        &mut store,
        KneeCalibrated {
            name: "nano-UAV",
            knee_hz: 26.0,
            rotor_count: 4,
            base_mass: 27.0,
            payload: vec![battery(9.0)],
            compute: "PULP",
            sensor: "Nano-cam-60",
            algorithm: "DroNet",
            note: "26 Hz knee with PULP; airframe mass assumed",
        },
    );

    store
}
