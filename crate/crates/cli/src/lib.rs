//! `qgem` command line: witness values, grid scans and minimal-width searches.
//!
//! Exit codes: 0 on success, 1 when a target witness is unreachable, 2 on
//! bad arguments or configs.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qgem_core::config::{ConfigError, ExperimentConfig, Geometry};
use qgem_core::quantum::{witness_expectation_with, Bipartition, QuantumError};
use qgem_core::scan::{
    grid_scan, min_delta_x_with, threshold_curve, write_curve_csv, write_grid_csv, ScanError,
    ScanSpec, SearchOptions,
};
use qgem_core::units::{parse_quantity, Dimension};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_CROSSING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qgem", version, about = "Entanglement witness calculator for gravitationally coupled qubits")]
struct Cli {
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Witness expectation for a single configuration.
    Witness(ConfigArgs),
    /// Witness over a (gamma, delta_x) grid, written as CSV.
    Scan(SpecArgs),
    /// Smallest superposition width that reaches the target witness.
    MinDx(MinDxArgs),
    /// Minimal width for every gamma of the spec's gamma axis, written as CSV.
    Curve(SpecArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// JSON config; individual flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    geometry: Option<Geometry>,
    #[arg(long, value_parser = mass)]
    mass: Option<f64>,
    #[arg(long, value_parser = length)]
    dmin: Option<f64>,
    #[arg(long, value_parser = length)]
    dx: Option<f64>,
    #[arg(long, value_parser = time)]
    tau: Option<f64>,
    #[arg(long, value_parser = frequency)]
    gamma: Option<f64>,
    /// Partition such as `1|2` or `13|2`; the single qubit is transposed.
    #[arg(long)]
    bipartition: Option<String>,
}

#[derive(Debug, Args)]
struct MinDxArgs {
    /// JSON config; its delta_x and gamma are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    geometry: Option<Geometry>,
    #[arg(long, value_parser = mass)]
    mass: Option<f64>,
    #[arg(long, value_parser = length)]
    dmin: Option<f64>,
    #[arg(long, value_parser = time)]
    tau: Option<f64>,
    /// One or more decoherence rates, comma-separated or repeated.
    #[arg(long, value_parser = frequency, value_delimiter = ',', required = true)]
    gamma: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    target_w: f64,
    #[arg(long)]
    bipartition: Option<String>,
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    target_w: Option<f64>,
    #[arg(long)]
    bipartition: Option<String>,
}

fn mass(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Mass).map_err(|e| e.to_string())
}

fn length(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Length).map_err(|e| e.to_string())
}

fn time(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Time).map_err(|e| e.to_string())
}

fn frequency(s: &str) -> Result<f64, String> {
    parse_quantity(s, Dimension::Frequency).map_err(|e| e.to_string())
}

/// Failure of one invocation, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    NoCrossing(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::NoCrossing(_) => EXIT_NO_CROSSING,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::NoCrossing(m) => m,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e.field() {
            Some(field) if !e.to_string().contains(field) => Failure::Usage(format!("{field}: {e}")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<QuantumError> for Failure {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::Config(c) => c.into(),
            QuantumError::InvalidBipartition(_) | QuantumError::SubsystemOutOfRange { .. } => {
                Failure::Usage(format!("bipartition: {e}"))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::NoCrossing { .. } => Failure::NoCrossing(e.to_string()),
            ScanError::Config(c) => c.into(),
            ScanError::Quantum(q) => q.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parse `argv` (including the program name), run the command and return the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };

    // Buffer stdout so the command can run inside a pool; partial output is
    // still flushed when the command fails.
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("threads: must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut buffer)),
            Err(e) => Err(Failure::Usage(format!("threads: {e}"))),
        },
        None => dispatch(cli.command, &mut buffer),
    };
    let _ = out.write_all(&buffer).and_then(|_| out.flush());
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Witness(args) => witness(args, out),
        Command::Scan(args) => scan(args, out),
        Command::MinDx(args) => min_dx(args, out),
        Command::Curve(args) => curve(args, out),
    }
}

fn read_file(path: &Path, what: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{what}: cannot read {}: {e}", path.display())))
}

/// Fields collected from an optional config file plus flag overrides.
#[derive(Default)]
struct Partial {
    geometry: Option<Geometry>,
    mass: Option<f64>,
    d_min: Option<f64>,
    delta_x: Option<f64>,
    tau: Option<f64>,
    gamma: Option<f64>,
    base: Option<ExperimentConfig>,
}

impl Partial {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let cfg = ExperimentConfig::from_json_str(&read_file(path, "config")?)?;
        Ok(Self {
            geometry: Some(cfg.geometry),
            mass: Some(cfg.mass),
            d_min: Some(cfg.d_min),
            delta_x: Some(cfg.delta_x),
            tau: Some(cfg.tau),
            gamma: Some(cfg.gamma),
            base: Some(cfg),
        })
    }

    fn resolve(self) -> Result<ExperimentConfig, Failure> {
        fn need<T>(v: Option<T>, field: &'static str) -> Result<T, Failure> {
            v.ok_or_else(|| Failure::Usage(format!("{field}: missing (pass --{} or --config)", flag(field))))
        }
        let mut cfg = ExperimentConfig::new(
            need(self.geometry, "geometry")?,
            need(self.mass, "mass")?,
            need(self.d_min, "d_min")?,
            need(self.delta_x, "delta_x")?,
            need(self.tau, "tau")?,
            need(self.gamma, "gamma")?,
        );
        if let Some(base) = self.base {
            cfg.constants = base.constants;
        }
        Ok(cfg.validate()?)
    }
}

fn flag(field: &str) -> &str {
    match field {
        "d_min" => "dmin",
        "delta_x" => "dx",
        other => other,
    }
}

fn bipartition(text: Option<&str>, geometry: Geometry) -> Result<Bipartition, Failure> {
    let n = geometry.n_qubits();
    match text {
        Some(t) => Ok(Bipartition::parse(t, n)?),
        None => Ok(Bipartition::default_for(n)),
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json output serializes");
    writeln!(out, "{text}").map_err(|e| Failure::Usage(format!("stdout: {e}")))
}

fn witness(args: ConfigArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut p = Partial::load(args.config.as_deref())?;
    p.geometry = args.geometry.or(p.geometry);
    p.mass = args.mass.or(p.mass);
    p.d_min = args.dmin.or(p.d_min);
    p.delta_x = args.dx.or(p.delta_x);
    p.tau = args.tau.or(p.tau);
    p.gamma = args.gamma.or(p.gamma);
    let cfg = p.resolve()?;
    let b = bipartition(args.bipartition.as_deref(), cfg.geometry)?;
    let r = witness_expectation_with(&cfg, b)?;
    let eigenvector: Vec<[f64; 2]> = r.eigenvector.iter().map(|c| [c.re, c.im]).collect();
    emit(
        out,
        &json!({
            "witness": r.lambda_min,
            "entangled": r.entangled,
            "bipartition": r.bipartition.to_string(),
            "degenerate_minimum": r.degenerate_minimum,
            "pt_spectrum": r.pt_spectrum,
            "eigenvector": eigenvector,
            "closed_form": r.closed_form,
            "closed_form_gap": r.closed_form_gap,
            "config": cfg.to_json_value(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn min_dx(args: MinDxArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut p = Partial::load(args.config.as_deref())?;
    p.geometry = args.geometry.or(p.geometry);
    p.mass = args.mass.or(p.mass);
    p.d_min = args.dmin.or(p.d_min);
    p.tau = args.tau.or(p.tau);
    p.delta_x = Some(0.0);
    p.gamma = Some(args.gamma[0]);
    let base = p.resolve()?;
    let options = SearchOptions {
        bipartition: Some(bipartition(args.bipartition.as_deref(), base.geometry)?),
        ..SearchOptions::default()
    };

    let mut results = Vec::with_capacity(args.gamma.len());
    let mut first_miss = None;
    for &gamma in &args.gamma {
        match min_delta_x_with(&base, gamma, args.target_w, &options) {
            Ok(t) => results.push(json!({
                "gamma": gamma,
                "status": "ok",
                "min_delta_x": t.delta_x,
                "witness": t.witness,
                "half_phase": t.half_phase,
                "config": base.with_gamma(gamma).with_delta_x(t.delta_x).to_json_value(),
            })),
            Err(e @ ScanError::NoCrossing { min_witness, searched_to, .. }) => {
                first_miss.get_or_insert_with(|| e.to_string());
                results.push(json!({
                    "gamma": gamma,
                    "status": "no_crossing",
                    "min_delta_x": null,
                    "min_witness": min_witness,
                    "searched_to": searched_to,
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(
        out,
        &json!({
            "target_w": args.target_w,
            "results": results,
            "config": base.to_json_value(),
        }),
    )?;
    match first_miss {
        Some(message) => Err(Failure::NoCrossing(message)),
        None => Ok(EXIT_OK),
    }
}

fn load_spec(args: &SpecArgs) -> Result<ScanSpec, Failure> {
    let mut spec = ScanSpec::from_json_str(&read_file(&args.spec, "spec")?)?;
    if let Some(t) = args.target_w {
        spec.target_w = t;
    }
    if let Some(b) = args.bipartition.as_deref() {
        spec.bipartition = Some(bipartition(Some(b), spec.geometry)?);
    }
    spec.validate()?;
    Ok(spec)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("out: cannot create {}: {e}", path.display())))
}

fn write_failed(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("out: writing {} failed: {e}", path.display()))
}

fn scan(args: SpecArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(&args)?;
    let rows = grid_scan(&spec)?;
    write_grid_csv(&rows, create(&args.out)?).map_err(|e| write_failed(&args.out, e))?;
    emit(
        out,
        &json!({
            "out": args.out.display().to_string(),
            "rows": rows.len(),
            "config": spec.to_json_value(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn curve(args: SpecArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(&args)?;
    let points = threshold_curve(&spec)?;
    write_curve_csv(&spec, &points, create(&args.out)?).map_err(|e| write_failed(&args.out, e))?;
    let missing = points.iter().filter(|p| p.threshold.is_none()).count();
    emit(
        out,
        &json!({
            "out": args.out.display().to_string(),
            "rows": points.len(),
            "no_crossing": missing,
            "config": spec.to_json_value(),
        }),
    )?;
    Ok(EXIT_OK)
}
