//! Command-line front end; `src/bin/skyline.rs` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 runtime failure (e.g. the server could not bind),
//! 2 invalid configuration or arguments, 3 the configuration cannot climb,
//! 4 the output file could not be written.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    analyze, compare, sweep, Knob, KnobValue, Scale, SweepOutcome, UavConfiguration,
};
use crate::catalog::{builtin_presets, load_config, PresetStore};
use crate::error::Error;
use crate::units::Hertz;
use crate::{report, service, svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CANNOT_CLIMB: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;

/// Environment variable naming a preset document merged over the builtins.
pub const PRESET_PATH_VAR: &str = "SKYLINE_PRESET_PATH";

#[derive(Debug, Parser)]
#[command(
    name = "skyline",
    version,
    about = "F-1 roofline bottleneck analysis for UAVs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one configuration file (TOML or JSON).
    Analyze {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Analyze a configuration once per value of one knob.
    Sweep(SweepArgs),
    /// Render roofline curves of one or more configurations as SVG.
    Plot(PlotArgs),
    /// List or inspect catalog entries.
    Presets(PresetsArgs),
    /// Run the HTTP/JSON service.
    Serve {
        #[arg(long, default_value = service::DEFAULT_ADDR)]
        addr: IpAddr,
        #[arg(long, default_value_t = service::DEFAULT_PORT)]
        port: u16,
        /// Browser origin allowed by CORS; repeat for several, `*` for any.
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// One of sensor_framerate_hz, sensor_range_m, compute_tdp_w, algorithm,
    /// compute_runtime_s, drone_weight_g, rotor_pull_gf, payload_weight_g.
    #[arg(long)]
    pub knob: String,
    /// Comma-separated values, numbers or names.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "steps"], required_unless_present = "from")]
    pub values: Vec<String>,
    #[arg(long, requires_all = ["to", "steps"], allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, requires = "from", allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long, requires = "from")]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(required = true)]
    pub configs: Vec<PathBuf>,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub fmin: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub fmax: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Logarithmic frequency axis (default); `--logx=false` for linear.
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub logx: bool,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    #[arg(long, conflicts_with = "show", required_unless_present = "show")]
    pub list: bool,
    #[arg(long)]
    pub show: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Process-level inputs other than arguments.
#[derive(Debug, Clone, Default)]
pub struct CliEnv {
    pub preset_path: Option<PathBuf>,
}

impl CliEnv {
    pub fn from_process() -> Self {
        Self {
            preset_path: std::env::var_os(PRESET_PATH_VAR)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CannotClimb { .. } => EXIT_CANNOT_CLIMB,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn context(mut self, what: &Path) -> Self {
        self.message = format!("{}: {}", what.display(), self.message);
        self
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, env: &CliEnv, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_VALIDATION
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, env, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_store(env: &CliEnv) -> CliResult<PresetStore> {
    let store = builtin_presets();
    match &env.preset_path {
        None => Ok(store),
        Some(p) => store
            .with_overlay_file(p)
            .map_err(|e| Failure::from(e).context(p)),
    }
}

fn read_config(path: &Path, store: &PresetStore) -> CliResult<UavConfiguration> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            format!("{}: cannot read: {e}", path.display()),
        )
    })?;
    load_config(&text, store).map_err(|e| Failure::from(e).context(path))
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes()).map_err(|e| {
        Failure::new(
            EXIT_FAILURE,
            format!("cannot write to standard output: {e}"),
        )
    })
}

fn execute(command: Command, env: &CliEnv, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Analyze { config, format } => {
            let store = load_store(env)?;
            let cfg = read_config(&config, &store)?;
            let a = analyze(&cfg).map_err(|e| Failure::from(e).context(&config))?;
            let text = match format {
                Format::Text => report::analysis_text(&a),
                Format::Json => report::to_json(&a),
                Format::Csv => report::analyses_csv(std::slice::from_ref(&a)),
            };
            emit(out, &text)
        }
        Command::Sweep(args) => cmd_sweep(args, env, out, err),
        Command::Plot(args) => cmd_plot(args, env, out),
        Command::Presets(args) => cmd_presets(args, env, out),
        Command::Serve {
            addr,
            port,
            cors_origins,
        } => {
            let store = load_store(env)?;
            let rt = tokio::runtime::Runtime::new()
                .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot start runtime: {e}")))?;
            rt.block_on(service::serve(
                SocketAddr::new(addr, port),
                store,
                &cors_origins,
            ))
            .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot serve on {addr}:{port}: {e}")))
        }
    }
}

/// Evenly spaced values from `from` to `to` inclusive.
pub fn linear_values(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    to
                } else {
                    from + (to - from) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn cmd_sweep(args: SweepArgs, env: &CliEnv, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let knob: Knob = args.knob.parse()?;
    let store = load_store(env)?;
    let cfg = read_config(&args.config, &store)?;
    let values: Vec<KnobValue> = match (args.from, args.to, args.steps) {
        (Some(from), Some(to), Some(steps)) => {
            if steps == 0 {
                return Err(Failure::new(EXIT_VALIDATION, "--steps must be at least 1"));
            }
            linear_values(from, to, steps)
                .into_iter()
                .map(KnobValue::Number)
                .collect()
        }
        _ => args.values.iter().map(|v| KnobValue::parse(v)).collect(),
    };
    let points = sweep(&cfg, knob, &values, &store);
    for p in &points {
        if let SweepOutcome::Error(e) = &p.outcome {
            let _ = writeln!(err, "warning: {knob} = {}: {}", p.value, e.message);
        }
    }
    let text = match args.format {
        Format::Csv => report::sweep_csv(&points),
        Format::Json => report::to_json(&json!({"knob": knob, "points": points})),
        Format::Text => report::sweep_text(&points),
    };
    emit(out, &text)
}

fn cmd_plot(args: PlotArgs, env: &CliEnv, out: &mut dyn Write) -> CliResult {
    let store = load_store(env)?;
    let configs = args
        .configs
        .iter()
        .map(|p| read_config(p, &store))
        .collect::<CliResult<Vec<_>>>()?;
    let scale = if args.logx { Scale::Log } else { Scale::Linear };
    let cmp = compare(
        &configs,
        (Hertz(args.fmin), Hertz(args.fmax)),
        args.samples,
        scale,
    )?;
    let svg = svg::render_comparison(&cmp);
    match args.out.as_deref() {
        None => emit(out, &svg),
        Some(p) if p == Path::new("-") => emit(out, &svg),
        Some(p) => std::fs::write(p, svg)
            .map_err(|e| Failure::new(EXIT_OUTPUT, format!("{}: cannot write: {e}", p.display()))),
    }
}

fn cmd_presets(args: PresetsArgs, env: &CliEnv, out: &mut dyn Write) -> CliResult {
    let store = load_store(env)?;
    let doc = store.to_document();
    if args.list {
        return emit(
            out,
            &match args.format {
                Format::Json => report::to_json(&doc),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let _ = w.write_record(["kind", "name", "provenance"]);
                    for (kind, name, prov) in listing(&store) {
                        let _ = w.write_record([kind, name.as_str(), prov.as_str()]);
                    }
                    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
                }
                Format::Text => listing(&store)
                    .into_iter()
                    .map(|(kind, name, prov)| format!("{kind:<10} {name:<28} {prov}\n"))
                    .collect(),
            },
        );
    }
    let name = args.show.unwrap_or_default();
    let matches = json!({
        "uavs": doc.uavs.iter().filter(|r| r.name.eq_ignore_ascii_case(&name)).collect::<Vec<_>>(),
        "platforms": doc.platforms.iter().filter(|r| r.name.eq_ignore_ascii_case(&name)).collect::<Vec<_>>(),
        "sensors": doc.sensors.iter().filter(|r| r.name.eq_ignore_ascii_case(&name)).collect::<Vec<_>>(),
        "algorithms": doc.algorithms.iter().filter(|r| r.algorithm.eq_ignore_ascii_case(&name)).collect::<Vec<_>>(),
    });
    let found = matches.as_object().is_some_and(|m| {
        m.values()
            .any(|v| v.as_array().is_some_and(|a| !a.is_empty()))
    });
    if !found {
        return Err(Failure::new(
            EXIT_VALIDATION,
            format!("no preset named \"{name}\""),
        ));
    }
    let text = match args.format {
        Format::Json | Format::Csv => report::to_json(&matches),
        Format::Text => show_text(&store, &name),
    };
    emit(out, &text)
}

fn listing(store: &PresetStore) -> Vec<(&'static str, String, String)> {
    let mut rows = Vec::new();
    rows.extend(
        store
            .uavs()
            .iter()
            .map(|e| ("uav", e.value.name.clone(), e.provenance.clone())),
    );
    rows.extend(
        store
            .platforms()
            .iter()
            .map(|e| ("compute", e.value.name.clone(), e.provenance.clone())),
    );
    rows.extend(
        store
            .sensors()
            .iter()
            .map(|e| ("sensor", e.value.name.clone(), e.provenance.clone())),
    );
    rows.extend(store.algorithms().iter().map(|e| {
        (
            "algorithm",
            format!("{} @ {}", e.value.algorithm, e.value.platform),
            e.provenance.clone(),
        )
    }));
    rows
}

fn show_text(store: &PresetStore, name: &str) -> String {
    let n = report::fmt_num;
    let mut s = String::new();
    for e in store
        .uavs()
        .iter()
        .filter(|e| e.value.name.eq_ignore_ascii_case(name))
    {
        let u = &e.value;
        let payload: Vec<String> = u
            .payload
            .iter()
            .map(|p| format!("{} {} g ({})", p.name, n(p.mass.value()), p.kind))
            .collect();
        s += &format!(
            "uav {}: base {} g, {} rotors x {} gf, control {} Hz, sense range {} m\n",
            u.name,
            n(u.airframe.base_mass.value()),
            u.airframe.rotor_count,
            n(u.airframe.per_rotor_pull.value()),
            n(u.airframe.control_rate.value()),
            n(u.sense_range.value())
        );
        s += &format!("  payload: {}\n", payload.join(", "));
        if let Some(c) = &u.calibrated_a_max {
            s += &format!(
                "  calibrated a_max {} m/s^2 ({})\n",
                n(c.a_max.value()),
                c.provenance
            );
        }
        for (label, r) in [
            ("compute", &u.reference_compute),
            ("sensor", &u.reference_sensor),
            ("algorithm", &u.reference_algorithm),
        ] {
            if let Some(r) = r {
                s += &format!("  reference {label}: {r}\n");
            }
        }
        s += &format!("  provenance: {}\n", e.provenance);
    }
    for e in store
        .platforms()
        .iter()
        .filter(|e| e.value.name.eq_ignore_ascii_case(name))
    {
        let p = &e.value;
        s += &format!(
            "compute {}: tdp {} W, board {} g, heatsink {} g\n  provenance: {}\n",
            p.name,
            n(p.tdp.value()),
            n(p.board_mass.value()),
            n(p.effective_heatsink_mass().value()),
            e.provenance
        );
    }
    for e in store
        .sensors()
        .iter()
        .filter(|e| e.value.name.eq_ignore_ascii_case(name))
    {
        let v = &e.value;
        s += &format!(
            "sensor {}: {} Hz, range {} m, mass {} g\n  provenance: {}\n",
            v.name,
            n(v.framerate.value()),
            n(v.range.value()),
            n(v.mass.value()),
            e.provenance
        );
    }
    for e in store
        .algorithms()
        .iter()
        .filter(|e| e.value.algorithm.eq_ignore_ascii_case(name))
    {
        s += &format!(
            "algorithm {} on {}: {} Hz\n  provenance: {}\n",
            e.value.algorithm,
            e.value.platform,
            n(e.value.throughput.value()),
            e.provenance
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_values_hit_endpoints() {
        assert_eq!(linear_values(30.0, 15.0, 2), vec![30.0, 15.0]);
        assert_eq!(linear_values(5.0, 9.0, 1), vec![5.0]);
        assert_eq!(linear_values(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn parser_accepts_documented_flags() {
        Cli::try_parse_from([
            "skyline",
            "sweep",
            "c.toml",
            "--knob",
            "compute_tdp_w",
            "--values",
            "30,15",
        ])
        .unwrap();
        Cli::try_parse_from([
            "skyline", "sweep", "c.toml", "--knob", "x", "--from", "1", "--to", "2", "--steps", "3",
        ])
        .unwrap();
        Cli::try_parse_from([
            "skyline", "plot", "a.toml", "b.toml", "--out", "x.svg", "--logx",
        ])
        .unwrap();
        Cli::try_parse_from([
            "skyline",
            "plot",
            "a.toml",
            "--logx=false",
            "--fmin",
            "1",
            "--fmax",
            "10",
        ])
        .unwrap();
        Cli::try_parse_from(["skyline", "presets", "--show", "Nvidia AGX"]).unwrap();
        Cli::try_parse_from(["skyline", "serve", "--addr", "0.0.0.0", "--port", "9000"]).unwrap();
        assert!(Cli::try_parse_from(["skyline", "presets"]).is_err());
        assert!(Cli::try_parse_from(["skyline", "presets", "--list", "--show", "x"]).is_err());
        assert!(Cli::try_parse_from(["skyline", "sweep", "c.toml", "--knob", "x"]).is_err());
    }

    #[test]
    fn serve_defaults() {
        let cli = Cli::try_parse_from(["skyline", "serve"]).unwrap();
        match cli.command {
            Command::Serve {
                addr,
                port,
                cors_origins,
            } => {
                assert_eq!(addr.to_string(), "127.0.0.1");
                assert_eq!(port, 8045);
                assert!(cors_origins.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }
}
