//! Text, JSON and CSV encodings of analyses and sweeps.
//!
//! Every floating-point number leaving the crate through these encoders is
//! rounded to 12 significant digits, so output is byte-stable across platforms.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::analysis::{F1Analysis, SweepOutcome, SweepPoint};

/// Significant digits kept in emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Formats a number for CSV and text tables.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serializes to a JSON value with every float rounded.
pub fn to_value<T: Serialize + ?Sized>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report types always serialize");
    round_value(&mut v);
    v
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(value)).expect("values always serialize");
    s.push('\n');
    s
}

pub fn analysis_text(a: &F1Analysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", a.label);
    let rows: [(&str, String); 10] = [
        ("f_action", format!("{:.3} Hz", a.f_action.value())),
        ("v_safe", format!("{:.3} m/s", a.v_safe.value())),
        (
            "knee",
            format!(
                "{:.2} Hz at {:.3} m/s (threshold {})",
                a.knee.knee_throughput.value(),
                a.knee.knee_velocity.value(),
                a.knee.threshold
            ),
        ),
        (
            "asymptote",
            format!("{:.3} m/s", a.knee.asymptote_velocity.value()),
        ),
        (
            "bound",
            format!(
                "{} ({} stage at {:.3} Hz)",
                a.bound.kind,
                a.bound.limiting_stage,
                a.bound.limiting_rate.value()
            ),
        ),
        (
            "gap",
            format!("{:.1}x {} ({})", a.gap.ratio, a.gap.direction, a.gap.stage),
        ),
        (
            "stage rates",
            format!(
                "sensor {} Hz, compute {} Hz, control {} Hz",
                fmt_num(a.stage_rates.sensor_hz.value()),
                fmt_num(a.stage_rates.compute_hz.value()),
                fmt_num(a.stage_rates.control_hz.value())
            ),
        ),
        (
            "a_max",
            format!(
                "{:.4} m/s^2 over {} m",
                a.a_max.value(),
                fmt_num(a.sense_range.value())
            ),
        ),
        ("thrust/weight", format!("{:.4}", a.thrust_to_weight)),
        (
            "payload",
            format!(
                "{} g (heatsink {} g at {} W)",
                fmt_num(a.payload_mass.value()),
                fmt_num(a.heatsink_mass.value()),
                fmt_num(a.compute_tdp.value())
            ),
        ),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "  {k:<14} {v}");
    }
    let _ = writeln!(s, "recommendations:");
    for r in &a.recommendations {
        let _ = writeln!(s, "  - {r}");
    }
    s
}

pub const ANALYSIS_CSV_HEADER: [&str; 13] = [
    "label",
    "f_action_hz",
    "v_safe_mps",
    "knee_throughput_hz",
    "knee_velocity_mps",
    "asymptote_velocity_mps",
    "bound",
    "limiting_stage",
    "gap",
    "gap_direction",
    "a_max_mps2",
    "thrust_to_weight",
    "recommendations",
];

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)
            .expect("in-memory CSV writes cannot fail");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush cannot fail"))
        .expect("CSV input is UTF-8")
}

pub fn analyses_csv(analyses: &[F1Analysis]) -> String {
    let mut rows = vec![ANALYSIS_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
    for a in analyses {
        rows.push(vec![
            a.label.clone(),
            fmt_num(a.f_action.value()),
            fmt_num(a.v_safe.value()),
            fmt_num(a.knee.knee_throughput.value()),
            fmt_num(a.knee.knee_velocity.value()),
            fmt_num(a.knee.asymptote_velocity.value()),
            a.bound.kind.to_string(),
            a.bound.limiting_stage.to_string(),
            fmt_num(a.gap.ratio),
            a.gap.direction.to_string(),
            fmt_num(a.a_max.value()),
            fmt_num(a.thrust_to_weight),
            a.recommendations.join("; "),
        ]);
    }
    csv_string(rows)
}

pub const SWEEP_CSV_HEADER: [&str; 5] = ["knob_value", "f_action_hz", "v_safe_mps", "bound", "gap"];

/// Bound column value for points that could not be analyzed.
pub fn failed_bound_label(point: &SweepPoint) -> &'static str {
    match &point.outcome {
        SweepOutcome::Error(e) if e.thrust_to_weight.is_some() => "CannotClimb",
        _ => "Invalid",
    }
}

/// One row per point; failed points keep their row with empty numeric cells.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut rows = vec![SWEEP_CSV_HEADER.iter().map(|s| s.to_string()).collect()];
    for p in points {
        let value = match &p.value {
            crate::analysis::KnobValue::Number(x) => fmt_num(*x),
            crate::analysis::KnobValue::Label(l) => l.clone(),
        };
        rows.push(match p.analysis() {
            Some(a) => vec![
                value,
                fmt_num(a.f_action.value()),
                fmt_num(a.v_safe.value()),
                a.bound.kind.to_string(),
                fmt_num(a.gap.ratio),
            ],
            None => vec![
                value,
                String::new(),
                String::new(),
                failed_bound_label(p).into(),
                String::new(),
            ],
        });
    }
    csv_string(rows)
}

pub fn sweep_text(points: &[SweepPoint]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>16} {:>12} {:>10} {:>14} {:>8}",
        "value", "f_action_hz", "v_safe_mps", "bound", "gap"
    );
    for p in points {
        match &p.outcome {
            SweepOutcome::Analysis(a) => {
                let _ = writeln!(
                    s,
                    "{:>16} {:>12.3} {:>10.4} {:>14} {:>8.2}",
                    p.value.to_string(),
                    a.f_action.value(),
                    a.v_safe.value(),
                    a.bound.kind.to_string(),
                    a.gap.ratio
                );
            }
            SweepOutcome::Error(e) => {
                let _ = writeln!(s, "{:>16} error: {}", p.value.to_string(), e.message);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(123456789012345.0), 123456789012000.0);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-2.5e-300), -2.5e-300);
    }

    #[test]
    fn json_numbers_are_rounded_recursively() {
        let v = serde_json::json!({"a": [1.0 / 3.0, {"b": 2.0 / 3.0}], "n": 7});
        assert_eq!(
            serde_json::to_string(&to_value(&v)).unwrap(),
            r#"{"a":[0.333333333333,{"b":0.666666666667}],"n":7}"#
        );
    }
}
