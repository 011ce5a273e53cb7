use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unruh_lab::output::{
    figure_files, format_value, render, render_csv, render_json, OutputFormat, OutputKind, CSV_HEADER,
    DEFAULT_PRECISION,
};
use unruh_lab::sweep::{evaluate, run_sweep_with_threads, uniform_grid, DEFAULT_GAMMA_POINTS};
use unruh_lab::unruh::gamma_from_acceleration;
use unruh_lab::verify;
use unruh_lab::{
    figure_preset, AccelerationParams, AdditivityForm, ChannelSpec, Error, Family, Figure, Measure,
    Region, SweepRecord, SweepSpec,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;
const THREADS_VAR: &str = "UNRUH_LAB_THREADS";

#[derive(Parser)]
#[command(name = "unruh-lab", version, about = "Fermionic channels between an inertial and an accelerated observer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one channel state and print its record.
    Point(PointArgs),
    /// Evaluate a custom grid.
    Sweep(SweepArgs),
    /// Write the data series of one figure preset.
    Figure(FigureArgs),
    /// Run the acceptance checks.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Additivity {
    ConditionalSum,
    Printed,
}

impl From<Additivity> for AdditivityForm {
    fn from(a: Additivity) -> Self {
        match a {
            Additivity::ConditionalSum => AdditivityForm::ConditionalSum,
            Additivity::Printed => AdditivityForm::Printed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    MutualInfo,
    CondEntropy,
    SsaValue,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::MutualInfo => Measure::MutualInformation,
            MeasureArg::CondEntropy => Measure::ConditionalEntropy,
            MeasureArg::SsaValue => Measure::StrongAdditivity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PointFormat {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
#[group(id = "gamma_source", required = true, multiple = false)]
struct GammaSource {
    /// Acceleration angle in radians, in [0, pi/4].
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Acceleration angle in degrees, in [0, 45].
    #[arg(long, allow_hyphen_values = true)]
    gamma_degrees: Option<f64>,
    /// Frequency, acceleration and speed of light as `omega,a,c`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    acceleration: Option<Vec<f64>>,
}

impl GammaSource {
    fn resolve(&self) -> Result<f64, Failure> {
        match (self.gamma, self.gamma_degrees, &self.acceleration) {
            (Some(g), _, _) => Ok(g),
            (_, Some(d), _) => Ok(d.to_radians()),
            (_, _, Some(v)) if v.len() == 3 => Ok(gamma_from_acceleration(v[0], v[1], v[2])?),
            (_, _, Some(_)) => Err(Failure::Usage("--acceleration takes omega,a,c".into())),
            _ => unreachable!("clap requires one gamma source"),
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value = "bob-i")]
    region: Region,
    #[command(flatten)]
    gamma: GammaSource,
    #[arg(long = "qr", default_value_t = 1.0, allow_hyphen_values = true)]
    q_r: f64,
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    alpha: f64,
    /// Werner fidelity.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<f64>,
    /// Also evaluate the strong-additivity functional in this form.
    #[arg(long, value_enum)]
    additivity: Option<Additivity>,
    #[arg(long, value_enum, default_value = "text")]
    format: PointFormat,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    families: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "bob-i,bob-ii")]
    regions: Vec<Region>,
    /// Explicit gamma grid (radians); overrides the uniform grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    gamma_min: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    gamma_max: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA_POINTS)]
    gamma_points: usize,
    #[arg(long = "qr", value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    q_r: Vec<f64>,
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    alpha: f64,
    /// Werner fidelities.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Vec<f64>,
    #[arg(long, value_enum, default_value = "conditional-sum")]
    additivity: Additivity,
    /// Measure written by the plot format.
    #[arg(long, value_enum, default_value = "mutual-info")]
    measure: MeasureArg,
    /// csv, json or plot.
    #[arg(long, default_value = "csv")]
    format: OutputKind,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    which: Figure,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// csv, json or plot.
    #[arg(long, default_value = "csv")]
    format: OutputKind,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn io_failure(what: &str, e: io::Error) -> Failure {
    Failure::Io(format!("{what}: {e}"))
}

fn threads() -> Result<usize, Failure> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{THREADS_VAR} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn cmd_point(args: PointArgs) -> Result<(), Failure> {
    let format = OutputFormat::new(OutputKind::Csv, args.precision)?;
    let gamma = args.gamma.resolve()?;
    let accel = AccelerationParams::new(gamma, args.q_r)?;
    let spec = ChannelSpec::from_parts(args.family, args.alpha, args.f, accel)?;
    let additivity = args.additivity.map(AdditivityForm::from);
    let record = evaluate(&spec, args.region, additivity)?;
    let p = format.precision();
    let text = match args.format {
        PointFormat::Text => {
            let mut s = String::new();
            for key in CSV_HEADER {
                let v = match key {
                    "family" => record.family.slug().to_string(),
                    "region" => record.region.slug().to_string(),
                    _ => record_field(&record, key)
                        .map(|x| format_value(x, p))
                        .unwrap_or_default(),
                };
                s.push_str(&format!("{key}={v}\n"));
            }
            s
        }
        PointFormat::Csv => render_csv(&[record], p),
        PointFormat::Json => render_json(&[record], p),
    };
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| io_failure("stdout", e))
}

fn record_field(r: &SweepRecord, key: &str) -> Option<f64> {
    match key {
        "gamma" => Some(r.gamma),
        "q_r" => Some(r.q_r),
        "alpha" => r.alpha,
        "f" => r.f,
        "s_a" => Some(r.s_a),
        "s_b" => Some(r.s_b),
        "s_ab" => Some(r.s_ab),
        "mutual_info" => Some(r.mutual_info),
        "cond_entropy" => Some(r.cond_entropy),
        "ssa_value" => r.ssa_value,
        _ => None,
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let format = OutputFormat::new(args.format, args.precision)?;
    let gamma_grid = match args.gamma {
        Some(g) => g,
        None => {
            if args.gamma_points == 0 {
                return Err(Failure::Usage("--gamma-points must be positive".into()));
            }
            uniform_grid(args.gamma_min, args.gamma_max, args.gamma_points)
        }
    };
    let measure = Measure::from(args.measure);
    let mut measures = vec![Measure::MutualInformation, Measure::ConditionalEntropy];
    if measure == Measure::StrongAdditivity || args.families.contains(&Family::Werner) {
        measures.push(Measure::StrongAdditivity);
    }
    let spec = SweepSpec {
        families: args.families,
        gamma_grid,
        q_r_grid: args.q_r,
        alpha: args.alpha,
        f_grid: args.f,
        regions: args.regions,
        measures,
        additivity: args.additivity.into(),
    };
    let records = run_sweep_with_threads(&spec, threads()?)?;
    let text = if format.kind() == OutputKind::PlotData {
        plot_blocks(&records, measure, format)
    } else {
        render(&records, format, measure)
    };
    match args.output {
        Some(path) => fs::write(&path, text).map_err(|e| io_failure(&path.display().to_string(), e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure("stdout", e)),
    }
}

/// One `#`-labelled block per series, blank-line separated.
fn plot_blocks(records: &[SweepRecord], measure: Measure, format: OutputFormat) -> String {
    let key = |r: &SweepRecord| (r.family, r.region, r.q_r.to_bits(), r.f.map(f64::to_bits));
    let mut keys = Vec::new();
    for r in records {
        if !keys.contains(&key(r)) {
            keys.push(key(r));
        }
    }
    let mut blocks = Vec::new();
    for k in keys {
        let series: Vec<SweepRecord> = records.iter().filter(|r| key(r) == k).cloned().collect();
        let first = &series[0];
        let mut label = format!("# {} {} q_r={}", first.family, first.region, first.q_r);
        if let Some(f) = first.f {
            label.push_str(&format!(" f={f}"));
        }
        blocks.push(format!("{label}\n{}", render(&series, format, measure)));
    }
    blocks.join("\n\n")
}

fn cmd_figure(args: FigureArgs) -> Result<(), Failure> {
    let format = OutputFormat::new(args.format, args.precision)?;
    let spec = figure_preset(args.which);
    let records = run_sweep_with_threads(&spec, threads()?)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| io_failure(&args.out_dir.display().to_string(), e))?;
    for file in figure_files(args.which, &spec, &records, format) {
        let path = args.out_dir.join(&file.name);
        fs::write(&path, &file.contents).map_err(|e| io_failure(&path.display().to_string(), e))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_verify() -> Result<(), Failure> {
    let threads = threads()?;
    let outcomes = if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?
            .install(verify::run_all)
    } else {
        verify::run_all()
    };
    for o in &outcomes {
        println!("{o}");
    }
    println!("{}", verify::additivity_form_report());
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        Err(Failure::Verify)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Point(a) => cmd_point(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Verify => cmd_verify(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.domain_param().is_some() {
                ExitCode::from(EXIT_DOMAIN)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
