//! Self-contained SVG rendering of roofline overlays.
//!
//! Output depends only on the input series, so identical inputs give identical bytes.

use std::fmt::Write as _;

use crate::analysis::{Comparison, CurvePoint, RooflineSeries, Scale};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// One curve to draw, with an optional operating point.
#[derive(Debug, Clone, Copy)]
pub struct PlotSeries<'a> {
    pub series: &'a RooflineSeries,
    pub operating_point: Option<CurvePoint>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick step of 1, 2 or 5 times a power of ten giving about `target` ticks.
fn nice_step(max: f64, target: f64) -> f64 {
    let raw = max / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let m = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    format!("{r}")
}

struct Axes {
    fmin: f64,
    fmax: f64,
    vmax: f64,
    scale: Scale,
}

impl Axes {
    fn x(&self, f: f64) -> f64 {
        let t = match self.scale {
            Scale::Log => (f.log10() - self.fmin.log10()) / (self.fmax.log10() - self.fmin.log10()),
            Scale::Linear => (f - self.fmin) / (self.fmax - self.fmin),
        };
        LEFT + t * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - v / self.vmax * (HEIGHT - TOP - BOTTOM)
    }

    fn contains(&self, f: f64) -> bool {
        f >= self.fmin && f <= self.fmax
    }
}

/// Renders several roofline series on shared axes.
pub fn render(plots: &[PlotSeries<'_>]) -> String {
    let all_f = plots
        .iter()
        .flat_map(|p| p.series.curve.iter().map(|c| c.f_action.value()));
    let fmin = all_f.clone().fold(f64::INFINITY, f64::min);
    let fmax = all_f.fold(f64::NEG_INFINITY, f64::max);
    let (fmin, fmax) = if fmin.is_finite() && fmax > fmin {
        (fmin, fmax)
    } else {
        (1.0, 10.0)
    };
    let vtop = plots
        .iter()
        .map(|p| p.series.roof.velocity.value())
        .fold(0.0, f64::max);
    let vstep = nice_step(if vtop > 0.0 { vtop * 1.1 } else { 1.0 }, 5.0);
    let vmax = (if vtop > 0.0 { vtop * 1.1 } else { 1.0 } / vstep).ceil() * vstep;
    let scale = plots.first().map(|p| p.series.scale).unwrap_or_default();
    let ax = Axes {
        fmin,
        fmax,
        vmax,
        scale,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // grid and ticks
    let _ = writeln!(
        s,
        r##"<g class="axes" stroke="#cccccc" stroke-width="0.5">"##
    );
    let mut xticks = Vec::new();
    match scale {
        Scale::Log => {
            let mut e = fmin.log10().ceil() as i32;
            while 10f64.powi(e) <= fmax * (1.0 + 1e-12) {
                xticks.push(10f64.powi(e));
                e += 1;
            }
        }
        Scale::Linear => {
            let step = nice_step(fmax - fmin, 8.0);
            let mut k = (fmin / step).ceil();
            while k * step <= fmax * (1.0 + 1e-12) {
                xticks.push(k * step);
                k += 1.0;
            }
        }
    }
    for &f in &xticks {
        let x = ax.x(f);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            TOP,
            HEIGHT - BOTTOM
        );
    }
    let mut vticks = Vec::new();
    let mut k = 0.0;
    while k * vstep <= vmax * (1.0 + 1e-12) {
        vticks.push(k * vstep);
        k += 1.0;
    }
    for &v in &vticks {
        let y = ax.y(v);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            WIDTH - RIGHT
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(s, r#"<g class="tick-labels" fill="black">"#);
    for &f in &xticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ax.x(f),
            HEIGHT - BOTTOM + 15.0,
            tick_label(f)
        );
    }
    for &v in &vticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            ax.y(v) + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Action throughput (Hz)</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">Safe velocity (m/s)</text>"#,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0
    );
    let _ = writeln!(s, "</g>");

    for (i, p) in plots.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let series = p.series;
        let _ = writeln!(
            s,
            r#"<g class="series" data-label="{}" stroke="{color}" fill="{color}">"#,
            escape(&series.label)
        );

        for c in &series.ceilings {
            let f = c.rate.value();
            if ax.contains(f) {
                let x = ax.x(f);
                let _ = writeln!(
                    s,
                    r#"<line class="ceiling" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke-dasharray="2 3" stroke-width="0.8" opacity="0.6"/>"#,
                    ax.y(c.velocity.value()),
                    HEIGHT - BOTTOM
                );
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}" stroke="none" font-size="9" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
                    x - 3.0,
                    HEIGHT - BOTTOM - 4.0,
                    x - 3.0,
                    HEIGHT - BOTTOM - 4.0,
                    escape(&c.label)
                );
            }
        }

        let roof = &series.roof;
        let from = roof.from.value().clamp(fmin, fmax);
        let _ = writeln!(
            s,
            r#"<line class="roof" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-dasharray="6 4" stroke-width="1"/>"#,
            ax.x(from),
            ax.y(roof.velocity.value()),
            ax.x(fmax),
            ax.y(roof.velocity.value())
        );

        let mut points = String::new();
        for (j, c) in series.curve.iter().enumerate() {
            if j > 0 {
                points.push(' ');
            }
            let _ = write!(
                points,
                "{:.2},{:.2}",
                ax.x(c.f_action.value()),
                ax.y(c.v_safe.value())
            );
        }
        let _ = writeln!(
            s,
            r#"<polyline class="curve" points="{points}" fill="none" stroke-width="2"/>"#
        );

        let k = &series.knee;
        if ax.contains(k.knee_throughput.value()) {
            let _ = writeln!(
                s,
                r#"<circle class="knee" cx="{:.2}" cy="{:.2}" r="4" fill="white" stroke-width="2"/>"#,
                ax.x(k.knee_throughput.value()),
                ax.y(k.knee_velocity.value())
            );
        }
        if let Some(op) = p.operating_point {
            if ax.contains(op.f_action.value()) {
                let _ = writeln!(
                    s,
                    r#"<circle class="operating-point" cx="{:.2}" cy="{:.2}" r="3.5"/>"#,
                    ax.x(op.f_action.value()),
                    ax.y(op.v_safe.value())
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r#"<g class="legend">"#);
    for (i, p) in plots.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            LEFT + 10.0,
            LEFT + 30.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{} (knee {:.1} Hz, {:.2} m/s)</text>"#,
            LEFT + 36.0,
            y + 4.0,
            escape(&p.series.label),
            p.series.knee.knee_throughput.value(),
            p.series.knee.knee_velocity.value()
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

/// Renders a comparison, marking each configuration's operating point.
pub fn render_comparison(cmp: &Comparison) -> String {
    let plots: Vec<_> = cmp
        .series
        .iter()
        .zip(&cmp.analyses)
        .map(|(series, a)| PlotSeries {
            series,
            operating_point: Some(CurvePoint {
                f_action: a.f_action,
                v_safe: a.v_safe,
            }),
        })
        .collect();
    render(&plots)
}
