//! Rendering of sweep records as CSV, JSON and plot-ready series.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::sweep::{Figure, Measure, SweepRecord, SweepSpec};

pub const CSV_HEADER: [&str; 12] = [
    "family",
    "region",
    "gamma",
    "q_r",
    "alpha",
    "f",
    "s_a",
    "s_b",
    "s_ab",
    "mutual_info",
    "cond_entropy",
    "ssa_value",
];

pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Csv,
    Json,
    PlotData,
}

impl OutputKind {
    pub fn extension(self) -> &'static str {
        match self {
            OutputKind::Csv => "csv",
            OutputKind::Json => "json",
            OutputKind::PlotData => "dat",
        }
    }
}

impl FromStr for OutputKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputKind::Csv),
            "json" => Ok(OutputKind::Json),
            "plot" | "plotdata" => Ok(OutputKind::PlotData),
            _ => Err(format!("unknown format `{s}` (csv, json, plot)")),
        }
    }
}

/// Output kind plus the number of digits printed after the decimal point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormat {
    kind: OutputKind,
    precision: usize,
}

impl OutputFormat {
    pub fn new(kind: OutputKind, precision: usize) -> Result<Self> {
        if !(6..=17).contains(&precision) {
            return Err(Error::domain("precision", precision as f64, "[6, 17]"));
        }
        Ok(OutputFormat { kind, precision })
    }

    pub fn kind(&self) -> OutputKind {
        self.kind
    }

    pub fn precision(&self) -> usize {
        self.precision
    }
}

impl Default for OutputFormat {
    fn default() -> Self {
        OutputFormat {
            kind: OutputKind::Csv,
            precision: DEFAULT_PRECISION,
        }
    }
}

/// Fixed-point rendering that never prints `-0`.
pub fn format_value(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn opt(x: Option<f64>, precision: usize) -> String {
    x.map(|v| format_value(v, precision)).unwrap_or_default()
}

fn csv_fields(r: &SweepRecord, p: usize) -> [String; 12] {
    [
        r.family.slug().to_string(),
        r.region.slug().to_string(),
        format_value(r.gamma, p),
        format_value(r.q_r, p),
        opt(r.alpha, p),
        opt(r.f, p),
        format_value(r.s_a, p),
        format_value(r.s_b, p),
        format_value(r.s_ab, p),
        format_value(r.mutual_info, p),
        format_value(r.cond_entropy, p),
        opt(r.ssa_value, p),
    ]
}

pub fn render_csv(records: &[SweepRecord], precision: usize) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("write to memory");
    for r in records {
        w.write_record(csv_fields(r, precision)).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ASCII output")
}

fn json_number(x: f64, precision: usize) -> Value {
    let rounded: f64 = format_value(x, precision).parse().expect("formatted float parses");
    Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

pub fn record_to_json(r: &SweepRecord, precision: usize) -> Value {
    let num = |x: f64| json_number(x, precision);
    let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
    let mut m = Map::new();
    m.insert("family".into(), Value::String(r.family.slug().into()));
    m.insert("region".into(), Value::String(r.region.slug().into()));
    m.insert("gamma".into(), num(r.gamma));
    m.insert("q_r".into(), num(r.q_r));
    m.insert("alpha".into(), opt(r.alpha));
    m.insert("f".into(), opt(r.f));
    m.insert("s_a".into(), num(r.s_a));
    m.insert("s_b".into(), num(r.s_b));
    m.insert("s_ab".into(), num(r.s_ab));
    m.insert("mutual_info".into(), num(r.mutual_info));
    m.insert("cond_entropy".into(), num(r.cond_entropy));
    m.insert("ssa_value".into(), opt(r.ssa_value));
    Value::Object(m)
}

pub fn render_json(records: &[SweepRecord], precision: usize) -> String {
    let arr = Value::Array(records.iter().map(|r| record_to_json(r, precision)).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("serializable");
    s.push('\n');
    s
}

/// Whitespace-separated `(gamma, value)` rows for one measure.
pub fn render_plot(records: &[SweepRecord], measure: Measure, precision: usize) -> String {
    let mut s = format!("# gamma {}\n", measure.slug());
    for r in records {
        if let Some(v) = r.measure(measure) {
            s.push_str(&format_value(r.gamma, precision));
            s.push(' ');
            s.push_str(&format_value(v, precision));
            s.push('\n');
        }
    }
    s
}

pub fn render(records: &[SweepRecord], format: OutputFormat, measure: Measure) -> String {
    match format.kind {
        OutputKind::Csv => render_csv(records, format.precision),
        OutputKind::Json => render_json(records, format.precision),
        OutputKind::PlotData => render_plot(records, measure, format.precision),
    }
}

/// Grid values in file names: four decimals, trailing zeros dropped.
fn name_value(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// One output file: name and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFile {
    pub name: String,
    pub contents: String,
}

impl fmt::Display for SeriesFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Splits a figure's records into one series per `(family, region, q_r[, f])`,
/// named `<figure>_<family>_<region>_qr<q>[_f<f>].<ext>`, each with one
/// row per gamma point.
pub fn figure_files(
    figure: Figure,
    spec: &SweepSpec,
    records: &[SweepRecord],
    format: OutputFormat,
) -> Vec<SeriesFile> {
    let mut files = Vec::new();
    for &family in &spec.families {
        let fs: Vec<Option<f64>> = if family == crate::unruh::Family::Werner {
            spec.f_grid.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for &region in &spec.regions {
            for &q_r in &spec.q_r_grid {
                for &f in &fs {
                    let series: Vec<SweepRecord> = records
                        .iter()
                        .filter(|r| r.family == family && r.region == region && r.q_r == q_r && r.f == f)
                        .cloned()
                        .collect();
                    let mut name = format!(
                        "{}_{}_{}_qr{}",
                        figure.slug(),
                        family.slug(),
                        region.slug(),
                        name_value(q_r)
                    );
                    if let Some(f) = f {
                        name.push_str(&format!("_f{}", name_value(f)));
                    }
                    name.push('.');
                    name.push_str(format.kind.extension());
                    files.push(SeriesFile {
                        name,
                        contents: render(&series, format, figure.measure()),
                    });
                }
            }
        }
    }
    files
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{figure_preset, run_sweep, uniform_grid};
    use crate::unruh::{Family, Region};

    fn record() -> SweepRecord {
        SweepRecord {
            family: Family::QuantumSingleRail,
            region: Region::BobI,
            gamma: 0.0,
            q_r: 1.0,
            alpha: Some(std::f64::consts::FRAC_PI_4),
            f: None,
            s_a: 1.0,
            s_b: 1.0,
            s_ab: -1e-17,
            mutual_info: 2.0,
            cond_entropy: -1.0,
            ssa_value: None,
        }
    }

    #[test]
    fn fixed_point_without_negative_zero() {
        assert_eq!(format_value(2.0, 12), "2.000000000000");
        assert_eq!(format_value(-1e-17, 6), "0.000000");
        assert_eq!(format_value(-0.5, 6), "-0.500000");
    }

    #[test]
    fn precision_domain() {
        assert!(OutputFormat::new(OutputKind::Csv, 5).is_err());
        assert!(OutputFormat::new(OutputKind::Csv, 18).is_err());
        assert!(OutputFormat::new(OutputKind::Json, 17).is_ok());
    }

    #[test]
    fn csv_schema() {
        let s = render_csv(&[record()], 6);
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "family,region,gamma,q_r,alpha,f,s_a,s_b,s_ab,mutual_info,cond_entropy,ssa_value"
        );
        assert_eq!(
            lines.next().unwrap(),
            "quantum-single,bob-i,0.000000,1.000000,0.785398,,1.000000,1.000000,0.000000,2.000000,-1.000000,"
        );
        assert!(lines.next().is_none());
    }

    #[test]
    fn empty_csv_keeps_header() {
        assert_eq!(render_csv(&[], 12).lines().count(), 1);
    }

    #[test]
    fn json_nulls_for_missing_columns() {
        let v: Value = serde_json::from_str(&render_json(&[record()], 12)).unwrap();
        assert_eq!(v[0]["f"], Value::Null);
        assert_eq!(v[0]["mutual_info"], serde_json::json!(2.0));
        assert_eq!(v[0]["family"], "quantum-single");
    }

    #[test]
    fn plot_rows() {
        let s = render_plot(&[record()], Measure::ConditionalEntropy, 6);
        assert_eq!(s, "# gamma cond_entropy\n0.000000 -1.000000\n");
    }

    #[test]
    fn figure_file_names() {
        let mut spec = figure_preset(Figure::Fig4);
        spec.gamma_grid = uniform_grid(0.0, std::f64::consts::FRAC_PI_4, 3);
        let recs = run_sweep(&spec).unwrap();
        let files = figure_files(Figure::Fig4, &spec, &recs, OutputFormat::default());
        assert_eq!(files.len(), 16);
        assert_eq!(files[0].name, "fig4_werner_bob-i_qr1_f0.95.csv");
        assert_eq!(files[15].name, "fig4_werner_bob-i_qr0.25_f0.33.csv");
        assert!(files.iter().all(|f| f.contents.lines().count() == 4));
    }

    #[test]
    fn name_values() {
        assert_eq!(name_value(1.0), "1");
        assert_eq!(name_value(std::f64::consts::FRAC_1_SQRT_2), "0.7071");
        assert_eq!(name_value(0.7), "0.7");
    }
}
