//! Closed forms checked against brute-force bisection, and reference values
//! frozen from the bisection oracle.

mod common;

use common::{oracle, rel};
use skyline_core::catalog::{a_max_for_knee, backsolve_preset_dynamics};
use skyline_core::model::*;
use skyline_core::physics::{
    estimate_a_max, mass_budget, AccelerationModel, AirframeSpec, PayloadItem, PayloadKind,
};
use skyline_core::units::*;

fn dyn_(a: f64, d: f64) -> BodyDynamics {
    BodyDynamics::new(MetersPerSecondSquared(a), Meters(d)).unwrap()
}

// Values below were produced by the bisection oracle in `common::oracle`.
const V_50_10_1S: f64 = 9.16079783099616;
const V_50_10_5S: f64 = 1.9920633670830519;
const ROOF_50_10: f64 = 31.622776601683796;
const KNEE_50_10_HZ: f64 = 104.61271184772104;
const A_FOR_KNEE_43: f64 = 3.8014607309193673;
const A_FOR_KNEE_30: f64 = 1.850359468808802;
const A_FOR_KNEE_26: f64 = 1.389825556571921;
const CAL_UAV: [(f64, f64); 4] = [
    (2.13, 0.8139397201291714),
    (1.51, 0.4001579501579501),
    (1.58, 0.4391977480647432),
    (1.53, 0.4111169652265543),
];
const V_UAV_A_PHYSICS: f64 = 2.016658689625274;
const V_UAV_C_PHYSICS: f64 = 1.530146118818402;

#[test]
fn frozen_values_still_match_the_oracle() {
    assert!(rel(oracle::safe_velocity(50.0, 10.0, 1.0), V_50_10_1S) < 1e-12);
    assert!(rel(oracle::safe_velocity(50.0, 10.0, 5.0), V_50_10_5S) < 1e-12);
    assert!(rel(oracle::safe_velocity(50.0, 10.0, 0.0), ROOF_50_10) < 1e-12);
    assert!(rel(oracle::knee(50.0, 10.0, 0.985).0, KNEE_50_10_HZ) < 1e-9);
    for (v, a) in CAL_UAV {
        assert!(rel(oracle::calibrate(v, 0.1, 3.0), a) < 1e-9);
    }
}

#[test]
fn safe_velocity_matches_frozen_values() {
    let d = dyn_(50.0, 10.0);
    assert!(rel(safe_velocity(&d, Seconds(1.0)).unwrap().value(), V_50_10_1S) < 1e-12);
    assert!(rel(safe_velocity(&d, Seconds(5.0)).unwrap().value(), V_50_10_5S) < 1e-12);
    assert!(rel(asymptote_velocity(&d).value(), ROOF_50_10) < 1e-12);
    assert_eq!(
        safe_velocity(&d, Seconds(0.0)).unwrap(),
        asymptote_velocity(&d)
    );
}

#[test]
fn knee_matches_oracle() {
    for (a, d) in [(50.0, 10.0), (3.8, 4.5), (0.2, 1.0), (90.0, 0.3)] {
        let k = knee_point(&dyn_(a, d), 0.985).unwrap();
        let (f, v) = oracle::knee(a, d, 0.985);
        assert!(rel(k.knee_throughput.value(), f) < 1e-8, "{a} {d}");
        assert!(rel(k.knee_velocity.value(), v) < 1e-12);
    }
    let k = knee_point(&dyn_(50.0, 10.0), 0.985).unwrap();
    assert!(rel(k.knee_throughput.value(), KNEE_50_10_HZ) < 1e-9);
}

#[test]
fn knee_backsolve_matches_frozen_values() {
    for (fk, a) in [
        (43.0, A_FOR_KNEE_43),
        (30.0, A_FOR_KNEE_30),
        (26.0, A_FOR_KNEE_26),
    ] {
        let got = a_max_for_knee(Hertz(fk), 0.985, Meters(4.5))
            .unwrap()
            .value();
        assert!(rel(got, a) < 1e-9, "{fk}: {got} vs {a}");
    }
}

#[test]
fn calibration_matches_frozen_values() {
    for (v, a) in CAL_UAV {
        let got = backsolve_preset_dynamics(MetersPerSecond(v), Seconds(0.1), Meters(3.0)).unwrap();
        assert!(rel(got.value(), a) < 1e-12);
        let t = action_period_for_velocity(&dyn_(a, 3.0), MetersPerSecond(v)).unwrap();
        assert!((t.value() - 0.1).abs() < 1e-12);
    }
}

#[test]
fn inversion_and_slope_match_oracle() {
    for (a, d, t) in [(50.0, 10.0, 0.3), (0.8, 3.0, 0.1), (5.0, 0.5, 2.0)] {
        let dd = dyn_(a, d);
        let v = safe_velocity(&dd, Seconds(t)).unwrap();
        let back = action_period_for_velocity(&dd, v).unwrap().value();
        assert!(rel(back, oracle::period_for_velocity(a, d, v.value())) < 1e-8);
        let slope = safe_velocity_slope(&dd, Seconds(t)).unwrap();
        let fd = oracle::central_difference(|x| oracle::safe_velocity(a, d, x), t, 1e-4 * t);
        assert!(rel(slope, fd) < 1e-5, "{slope} vs {fd}");
    }
}

#[test]
fn physics_path_for_validation_drones() {
    let airframe = AirframeSpec {
        base_mass: Grams(1030.0),
        rotor_count: 4,
        per_rotor_pull: GramForce(435.0),
        control_rate: Hertz(1000.0),
    };
    for (payload, expected) in [(590.0, V_UAV_A_PHYSICS), (640.0, V_UAV_C_PHYSICS)] {
        let items = [PayloadItem::new(
            "payload",
            Grams(payload),
            PayloadKind::Other,
        )];
        let budget = mass_budget(&airframe, &items).unwrap();
        let a = estimate_a_max(&budget, &AccelerationModel::default()).unwrap();
        // brute force: net force over mass
        let m = (1030.0 + payload) / 1000.0;
        let net = 4.0 * 435.0 / 1000.0 * GRAVITY - m * GRAVITY;
        assert!(rel(a.value(), net / m) < 1e-12);
        let v = safe_velocity(&dyn_(a.value(), 3.0), Seconds(0.1))
            .unwrap()
            .value();
        assert!(rel(v, expected) < 1e-9);
    }
}
