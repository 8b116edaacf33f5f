//! Shared helpers for integration tests: brute-force oracles, fixtures and the
//! randomized property suites.
#![allow(dead_code)]

use std::path::PathBuf;

use skyline_core::analysis::UavConfiguration;
use skyline_core::catalog::{builtin_presets, load_config};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn load_fixture(name: &str) -> UavConfiguration {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    load_config(&text, &builtin_presets()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Brute-force references that never use the closed forms under test.
pub mod oracle {
    /// Bisection for the root of a function that changes sign exactly once on `[lo, hi]`.
    pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let lo_sign = f(lo) > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (f(mid) > 0.0) == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Distance covered reacting for `t` seconds at `v` and then braking at `a`.
    pub fn stopping_distance(v: f64, t: f64, a: f64) -> f64 {
        v * t + v * v / (2.0 * a)
    }

    /// Largest velocity whose stopping distance fits within `d`.
    pub fn safe_velocity(a: f64, d: f64, t: f64) -> f64 {
        let hi = (2.0 * a * d).sqrt() * 2.0 + 1.0;
        bisect(|v| stopping_distance(v, t, a) - d, 0.0, hi)
    }

    /// Action period at which [`safe_velocity`] equals `v`.
    pub fn period_for_velocity(a: f64, d: f64, v: f64) -> f64 {
        bisect(|t| safe_velocity(a, d, t) - v, 0.0, d / v)
    }

    /// Deceleration at which `v` is exactly safe for period `t` and range `d`.
    pub fn calibrate(v: f64, t: f64, d: f64) -> f64 {
        let mut hi = 1.0;
        while safe_velocity(hi, d, t) < v {
            hi *= 2.0;
        }
        bisect(|a| safe_velocity(a, d, t) - v, 1e-12, hi)
    }

    /// (knee throughput, knee velocity) found by bisection on the sampled curve.
    pub fn knee(a: f64, d: f64, theta: f64) -> (f64, f64) {
        let roof = safe_velocity(a, d, 0.0);
        let target = theta * roof;
        let t = bisect(|t| safe_velocity(a, d, t) - target, 0.0, d / target);
        (1.0 / t, target)
    }

    pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }
}

pub mod suites {
    use std::io::Write;

    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestCaseError, TestRunner};

    use skyline_core::analysis::{
        analyze, classify_bound, dynamics_series, frequency_grid, roofline_series, BoundKind,
        GapDirection, Scale, UavConfiguration, BALANCED_TOLERANCE,
    };
    use skyline_core::catalog::{AlgorithmPerf, ComputePlatform, SensorSpec};
    use skyline_core::cli::{run, CliEnv};
    use skyline_core::model::{
        action_period_bounds, action_period_for_velocity, action_throughput, calibrate_a_max,
        knee_point, safe_velocity, safe_velocity_slope, BodyDynamics, PipelineMode, PipelineTiming,
    };
    use skyline_core::physics::{
        payload_velocity_curve, AccelerationModel, AirframeSpec, PayloadItem, PayloadKind,
    };
    use skyline_core::units::*;
    use skyline_core::{report, F1Analysis};

    use super::{oracle, rel};

    pub const CASES: u32 = 256;

    pub type Suite = fn(u32) -> Result<(), String>;

    /// Every suite, by name.
    pub const ALL: [(&str, Suite); 8] = [
        ("velocity monotonicity", monotonicity),
        ("inversion roundtrips", inversion),
        ("slope vs finite difference", derivative),
        ("min-rate bottleneck identity", bottleneck),
        ("payload sweep strictly decreasing", payload_sweep),
        ("classification/gap consistency", classification),
        ("roofline series shape", series_shape),
        ("deterministic CLI JSON and SVG", cli_determinism),
    ];

    fn runner(cases: u32) -> TestRunner {
        TestRunner::new(Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        })
    }

    fn check<S: Strategy>(
        cases: u32,
        strategy: S,
        test: impl Fn(S::Value) -> Result<(), TestCaseError>,
    ) -> Result<(), String> {
        runner(cases)
            .run(&strategy, test)
            .map_err(|e| e.to_string())
    }

    fn dyn_(a: f64, d: f64) -> BodyDynamics {
        BodyDynamics::new(MetersPerSecondSquared(a), Meters(d)).unwrap()
    }

    fn v(a: f64, d: f64, t: f64) -> f64 {
        safe_velocity(&dyn_(a, d), Seconds(t)).unwrap().value()
    }

    fn accel() -> impl Strategy<Value = f64> {
        0.1f64..100.0
    }

    fn range() -> impl Strategy<Value = f64> {
        0.1f64..100.0
    }

    fn period() -> impl Strategy<Value = f64> {
        1e-3f64..10.0
    }

    pub fn monotonicity(cases: u32) -> Result<(), String> {
        check(
            cases,
            (accel(), range(), period(), 1.01f64..10.0),
            |(a, d, t, k)| {
                let base = v(a, d, t);
                prop_assert!(v(a, d, t * k) < base);
                prop_assert!(v(a * k, d, t) > base);
                prop_assert!(v(a, d * k, t) > base);
                prop_assert!(base < v(a, d, 0.0));
                let o = oracle::safe_velocity(a, d, t);
                prop_assert!(rel(base, o) < 1e-9, "closed form {base} vs oracle {o}");
                Ok(())
            },
        )
    }

    pub fn inversion(cases: u32) -> Result<(), String> {
        check(cases, (accel(), range(), period()), |(a, d, t)| {
            let d_ = dyn_(a, d);
            let vel = safe_velocity(&d_, Seconds(t)).unwrap();
            let back = action_period_for_velocity(&d_, vel).unwrap().value();
            prop_assert!(rel(back, t) < 1e-9, "T {t} -> {back}");
            let a_back = calibrate_a_max(vel, Seconds(t), Meters(d)).unwrap().value();
            prop_assert!(rel(a_back, a) < 1e-9, "a {a} -> {a_back}");
            let t_oracle = oracle::period_for_velocity(a, d, vel.value());
            prop_assert!(rel(back, t_oracle) < 1e-7);
            Ok(())
        })
    }

    pub fn derivative(cases: u32) -> Result<(), String> {
        check(cases, (accel(), range(), period()), |(a, d, t)| {
            let analytic = safe_velocity_slope(&dyn_(a, d), Seconds(t)).unwrap();
            let h = t * 1e-4;
            let numeric = oracle::central_difference(|x| v(a, d, x), t, h);
            prop_assert!(analytic < 0.0);
            prop_assert!(rel(analytic, numeric) < 1e-6, "{analytic} vs {numeric}");
            Ok(())
        })
    }

    pub fn bottleneck(cases: u32) -> Result<(), String> {
        let rate = || 0.1f64..2000.0;
        check(cases, (rate(), rate(), rate()), |(s, c, k)| {
            let timing = PipelineTiming::from_rates(Hertz(s), Hertz(c), Hertz(k)).unwrap();
            let periods = [1.0 / s, 1.0 / c, 1.0 / k];
            let slowest = periods.iter().copied().fold(0.0, f64::max);
            let f = action_throughput(&timing).value();
            prop_assert!(rel(f, s.min(c).min(k)) < 1e-12);
            let (lo, hi) = action_period_bounds(&timing);
            prop_assert!(rel(lo.value(), slowest) < 1e-12);
            prop_assert!(rel(hi.value(), periods.iter().sum::<f64>()) < 1e-12);
            prop_assert!(lo <= hi);
            let serial = timing.action_timing(PipelineMode::Serial);
            prop_assert!(rel(serial.action_period.value(), hi.value()) < 1e-12);
            let d = dyn_(3.0, 4.5);
            let knee = knee_point(&d, 0.985).unwrap();
            let b = classify_bound(&timing, &knee, &d).unwrap();
            prop_assert!(rel(b.limiting_rate.value(), f) < 1e-12);
            Ok(())
        })
    }

    fn masses() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(1.0f64..200.0, 1..12).prop_map(|steps| {
            let mut total = 0.0;
            steps
                .into_iter()
                .map(|s| {
                    total += s;
                    total
                })
                .collect()
        })
    }

    pub fn payload_sweep(cases: u32) -> Result<(), String> {
        check(
            cases,
            (
                100.0f64..2000.0,
                1.05f64..4.0,
                2u32..9,
                masses(),
                0.5f64..10.0,
                0.01f64..1.0,
            ),
            |(base, tw, rotors, sweep, d, t)| {
                let airframe = AirframeSpec {
                    base_mass: Grams(base),
                    rotor_count: rotors,
                    per_rotor_pull: GramForce(base * tw / rotors as f64),
                    control_rate: Hertz(1000.0),
                };
                let masses: Vec<Grams> = sweep.iter().copied().map(Grams).collect();
                let curve = payload_velocity_curve(
                    &airframe,
                    &[],
                    &masses,
                    Meters(d),
                    Seconds(t),
                    &AccelerationModel::default(),
                )
                .unwrap();
                prop_assert!(curve.points.windows(2).all(|w| w[1].v_safe < w[0].v_safe));
                let cutoff = base * (tw - 1.0);
                let expected = sweep.iter().filter(|&&m| m < cutoff).count();
                match curve.truncated_at {
                    None => prop_assert_eq!(curve.points.len(), sweep.len()),
                    Some((m, ratio)) => {
                        prop_assert!(ratio <= 1.0 + 1e-12);
                        prop_assert!(m.value() >= cutoff * (1.0 - 1e-12));
                        prop_assert!(curve.points.len().abs_diff(expected) <= 1);
                    }
                }
                Ok(())
            },
        )
    }

    /// Configuration with a declared `a_max` and free stage rates.
    pub fn synthetic_config(
        a: f64,
        d: f64,
        rates: (f64, f64, f64),
        extra_mass: f64,
    ) -> UavConfiguration {
        UavConfiguration {
            name: "synthetic".into(),
            airframe: AirframeSpec {
                base_mass: Grams(1000.0),
                rotor_count: 4,
                per_rotor_pull: GramForce(1000.0),
                control_rate: Hertz(rates.2),
            },
            payload: vec![PayloadItem::new(
                "cargo",
                Grams(extra_mass),
                PayloadKind::Other,
            )],
            compute: ComputePlatform {
                name: "board".into(),
                tdp: Watts(5.0),
                board_mass: Grams(50.0),
                heatsink_mass: None,
            },
            algorithm: AlgorithmPerf {
                algorithm: "algo".into(),
                platform: "board".into(),
                throughput: Hertz(rates.1),
            },
            sensor: SensorSpec {
                name: "sensor".into(),
                framerate: Hertz(rates.0),
                range: Meters(d),
                mass: Grams(10.0),
            },
            acceleration: AccelerationModel::declared(MetersPerSecondSquared(a)).unwrap(),
            knee_threshold: 0.985,
            pipeline: PipelineMode::Overlapped,
        }
    }

    fn check_analysis(an: &F1Analysis) -> Result<(), TestCaseError> {
        let physics = an.bound.kind == BoundKind::PhysicsBound;
        if an.f_action >= an.knee.knee_throughput {
            prop_assert!(physics);
        }
        prop_assert!(an.gap.ratio >= 1.0);
        let balanced = (an.gap.ratio - 1.0).abs() <= BALANCED_TOLERANCE;
        prop_assert_eq!(balanced, an.gap.direction == GapDirection::Balanced);
        if an.gap.direction == GapDirection::UnderProvisioned {
            prop_assert!(!physics);
        }
        if physics {
            prop_assert!(an.gap.direction != GapDirection::UnderProvisioned);
        } else {
            prop_assert!(an.gap.direction != GapDirection::OverProvisioned);
            prop_assert_eq!(an.bound.limiting_rate, an.f_action);
        }
        prop_assert!(an.bound.ceiling_velocity <= an.knee.asymptote_velocity);
        prop_assert_eq!(an.recommendations.is_empty(), false);
        Ok(())
    }

    pub fn classification(cases: u32) -> Result<(), String> {
        let rate = || 0.1f64..500.0;
        check(
            cases,
            (accel(), range(), rate(), rate(), rate(), 1.0f64..50.0),
            |(a, d, s, c, k, faster)| {
                let an = analyze(&synthetic_config(a, d, (s, c, k), 0.0)).unwrap();
                check_analysis(&an)?;

                // compute exactly at the knee with faster sensor and control
                let fk = an.knee.knee_throughput.value();
                let at_knee =
                    synthetic_config(a, d, (fk * (1.0 + faster), fk, fk * (1.0 + faster)), 0.0);
                let an = analyze(&at_knee).unwrap();
                check_analysis(&an)?;
                prop_assert_eq!(an.bound.kind, BoundKind::PhysicsBound);
                prop_assert_eq!(an.gap.direction, GapDirection::Balanced);
                prop_assert!((an.gap.ratio - 1.0).abs() <= 1e-9);
                Ok(())
            },
        )
    }

    pub fn series_shape(cases: u32) -> Result<(), String> {
        check(
            cases,
            (accel(), range(), 2usize..300, any::<bool>(), 0.0f64..3000.0),
            |(a, d, samples, log, extra)| {
                let d_ = dyn_(a, d);
                let knee = knee_point(&d_, 0.985).unwrap();
                let fk = knee.knee_throughput.value();
                let scale = if log { Scale::Log } else { Scale::Linear };
                let range = (Hertz(fk / 100.0), Hertz(fk * 10.0));
                let grid = frequency_grid(range.0, range.1, samples, scale).unwrap();
                prop_assert_eq!(grid.len(), samples);
                prop_assert_eq!(grid[0], range.0);
                prop_assert_eq!(grid[samples - 1], range.1);
                let s = dynamics_series("s", &d_, 0.985, &grid, scale).unwrap();
                prop_assert!(s.curve.windows(2).all(|w| w[1].v_safe >= w[0].v_safe));
                let last = s.curve.last().unwrap();
                let roof = s.roof.velocity.value();
                prop_assert!(last.v_safe.value() <= roof);
                // distance to the roof is bounded by a * T at the last sample
                prop_assert!(roof - last.v_safe.value() <= a / last.f_action.value());

                // heavier configuration never lies above the lighter one
                let light = synthetic_config(a, d, (60.0, 60.0, 1000.0), 0.0);
                let mut heavy = synthetic_config(a, d, (60.0, 60.0, 1000.0), extra);
                heavy.acceleration = AccelerationModel::default();
                let mut light_phys = light.clone();
                light_phys.acceleration = AccelerationModel::default();
                let r = (Hertz(0.5), Hertz(500.0));
                if let (Ok(l), Ok(h)) = (
                    roofline_series(&light_phys, r, 50, Scale::Log),
                    roofline_series(&heavy, r, 50, Scale::Log),
                ) {
                    for (pl, ph) in l.curve.iter().zip(&h.curve) {
                        prop_assert_eq!(pl.f_action, ph.f_action);
                        prop_assert!(ph.v_safe <= pl.v_safe);
                    }
                }
                Ok(())
            },
        )
    }

    fn cli(args: &[&str]) -> (i32, Vec<u8>) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["skyline"];
        argv.extend_from_slice(args);
        let code = run(argv, &CliEnv::default(), &mut out, &mut err);
        (code, out)
    }

    pub fn cli_determinism(cases: u32) -> Result<(), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let rate = || 0.5f64..500.0;
        check(
            cases,
            (
                1.0f64..60.0,
                0.5f64..30.0,
                rate(),
                rate(),
                rate(),
                2usize..60,
            ),
            |(a, d, s, c, k, samples)| {
                let path = dir.path().join("cfg.toml");
                let mut f = std::fs::File::create(&path).unwrap();
                write!(
                    f,
                    "[uav]\nname = \"prop\"\nbase_mass_g = 1000\nrotor_count = 4\nrotor_pull_gf = 500\n\
                     control_rate_hz = {k}\n[sensor]\nname = \"s\"\nframerate_hz = {s}\nrange_m = {d}\n\
                     mass_g = 0\n[compute]\nname = \"c\"\ntdp_w = 1\nboard_mass_g = 0\n\
                     [algorithm]\nname = \"alg\"\nthroughput_hz = {c}\n[model]\na_max_mps2 = {a}\n"
                )
                .unwrap();
                drop(f);
                let p = path.to_str().unwrap();

                let (code, first) = cli(&["analyze", p, "--format", "json"]);
                prop_assert_eq!(code, 0);
                let (_, second) = cli(&["analyze", p, "--format", "json"]);
                prop_assert_eq!(&first, &second);
                let parsed: F1Analysis = serde_json::from_slice(&first).unwrap();
                prop_assert_eq!(report::to_json(&parsed).into_bytes(), first);

                let n = samples.to_string();
                let args = [
                    "plot",
                    p,
                    p,
                    "--fmin",
                    "0.1",
                    "--fmax",
                    "1000",
                    "--samples",
                    n.as_str(),
                ];
                let (code, svg1) = cli(&args);
                prop_assert_eq!(code, 0);
                let (_, svg2) = cli(&args);
                prop_assert_eq!(&svg1, &svg2);
                let svg = String::from_utf8(svg1).unwrap();
                prop_assert!(svg.starts_with("<?xml"));
                prop_assert!(svg.trim_end().ends_with("</svg>"));
                prop_assert_eq!(svg.matches("<g").count(), svg.matches("</g>").count());
                prop_assert_eq!(svg.matches("class=\"curve\"").count(), 2);
                Ok(())
            },
        )
    }
}
