//! The `tonevis` command line front end.
//!
//! All subcommands read and write PGM files. Reports are `key=value` lines with
//! six significant digits. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure |
//! | 2 | bad command line |
//! | 3 | malformed input (PGM, control points, grid axis) |
//! | 4 | a curve maps an occupied tone outside `[0, 255]` |
//! | 5 | every search candidate was rejected |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::curves::{
    apply_curve, curve_from_points, eq7_curve, validate_range, ControlPointCurve, RangeMode,
    ToneCurve, TransformParams,
};
use crate::error::{CurveError, PgmError, SearchError};
use crate::functionals::{brightness_mean, report, VisibilityReport};
use crate::image::{load_pgm, save_pgm, BrightnessImage};
use crate::optimizer::{optimize_with, trace_to_csv, Axis, SearchGrid, SearchOptions};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_RANGE: u8 = 4;
pub const EXIT_INFEASIBLE: u8 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "tonevis",
    version,
    about = "Maximize image visibility with tone-curve variations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print mean, variance, sub-means and visibility of an image.
    Analyze { input: PathBuf },
    /// Apply a power-law or control-point curve and write the result.
    Apply {
        input: PathBuf,
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "reject")]
        mode: RangeMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a curve's lookup table as `tone,value` CSV.
    Curve {
        #[command(flatten)]
        curve: CurveArgs,
        /// Image whose mean becomes the pivot when --pivot is absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the parameter lattice for the most visible variation.
    Optimize {
        input: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Write every candidate as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the enhanced image.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the 256-bin histogram as `tone,count` CSV.
    Histogram {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, requires_all = ["a2", "alpha", "beta"], conflicts_with = "points")]
    pub a1: Option<f64>,
    #[arg(long, requires_all = ["a1", "alpha", "beta"], conflicts_with = "points")]
    pub a2: Option<f64>,
    #[arg(long, requires_all = ["a1", "a2", "beta"], conflicts_with = "points")]
    pub alpha: Option<f64>,
    #[arg(long, requires_all = ["a1", "a2", "alpha"], conflicts_with = "points")]
    pub beta: Option<f64>,
    /// Override the pivot (default: the input image mean). Not part of the original method.
    #[arg(long, conflicts_with = "points")]
    pub pivot: Option<f64>,
    /// Control points `t0,v0;t1,v1;...;255,v`.
    #[arg(long)]
    pub points: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "0:5:0.1")]
    pub grid_a1: String,
    #[arg(long, default_value = "0:3:0.1")]
    pub grid_a2: String,
    #[arg(long, default_value = "0.1:1:0.1")]
    pub grid_alpha: String,
    #[arg(long, default_value = "0.1:1:0.1")]
    pub grid_beta: String,
}

impl GridArgs {
    pub fn to_grid(&self) -> Result<SearchGrid, SearchError> {
        Ok(SearchGrid {
            a1: self.grid_a1.parse::<Axis>()?,
            a2: self.grid_a2.parse::<Axis>()?,
            alpha: self.grid_alpha.parse::<Axis>()?,
            beta: self.grid_beta.parse::<Axis>()?,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Pgm { path: PathBuf, source: PgmError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Curve(CurveError),
    #[error(transparent)]
    Search(SearchError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } => EXIT_IO,
            Self::Usage(_) => EXIT_USAGE,
            Self::Pgm { .. } => EXIT_PARSE,
            Self::Curve(CurveError::OutOfRange { .. }) => EXIT_RANGE,
            Self::Curve(_) => EXIT_PARSE,
            Self::Search(SearchError::NoFeasibleVariation { .. }) => EXIT_INFEASIBLE,
            Self::Search(SearchError::Workers(_)) => EXIT_USAGE,
            Self::Search(_) => EXIT_PARSE,
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        Self::Curve(e)
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        Self::Search(e)
    }
}

/// Formats `x` with six significant digits, keeping trailing zeros (`1.00000`, `127.500`).
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to six digits decides the decimal count
    let sci = format!("{x:.5e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Renders a report as `key=value` lines, each key prefixed by `prefix`.
pub fn format_report(prefix: &str, r: &VisibilityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{prefix}mean={}", sig6(r.mean));
    let _ = writeln!(s, "{prefix}variance={}", sig6(r.variance));
    let _ = writeln!(s, "{prefix}sub_mean_low={}", sig6(r.sub_mean_low));
    let _ = writeln!(s, "{prefix}sub_mean_high={}", sig6(r.sub_mean_high));
    let _ = writeln!(s, "{prefix}count_low={}", r.count_low);
    let _ = writeln!(s, "{prefix}count_high={}", r.count_high);
    let _ = writeln!(s, "{prefix}visibility={}", sig6(r.visibility));
    s
}

fn read_image(path: &Path) -> Result<BrightnessImage, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_pgm(&bytes).map_err(|source| CliError::Pgm {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text.as_bytes()),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Builds the curve described by `args`. `pivot_source` supplies the pivot when
/// `--pivot` is not given.
fn build_curve(
    args: &CurveArgs,
    pivot_source: Option<&BrightnessImage>,
) -> Result<ToneCurve, CliError> {
    if let Some(points) = &args.points {
        let cp: ControlPointCurve = points.parse()?;
        return Ok(curve_from_points(&cp));
    }
    let (Some(a1), Some(a2), Some(alpha), Some(beta)) = (args.a1, args.a2, args.alpha, args.beta)
    else {
        return Err(CliError::Usage(
            "give either --a1 --a2 --alpha --beta or --points".to_string(),
        ));
    };
    let pivot = match (args.pivot, pivot_source) {
        (Some(p), _) => p,
        (None, Some(img)) => brightness_mean(img),
        (None, None) => {
            return Err(CliError::Usage(
                "power-law curve needs --pivot or --input".to_string(),
            ))
        }
    };
    let params = TransformParams::new(a1, a2, alpha, beta, pivot)?;
    Ok(eq7_curve(&params))
}

/// Executes one parsed command, writing reports to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze { input } => {
            let image = read_image(input)?;
            let mut text = format!("width={}\nheight={}\n", image.width(), image.height());
            text.push_str(&format_report("", &report(&image)));
            emit(out, None, &text)
        }
        Command::Histogram { input, out: path } => {
            let image = read_image(input)?;
            emit(out, path.as_deref(), &image.histogram().to_csv())
        }
        Command::Curve {
            curve,
            input,
            out: path,
        } => {
            let source = input.as_deref().map(read_image).transpose()?;
            let curve = build_curve(curve, source.as_ref())?;
            emit(out, path.as_deref(), &curve.to_csv())
        }
        Command::Apply {
            input,
            curve,
            mode,
            out: path,
        } => {
            let image = read_image(input)?;
            let curve = build_curve(curve, Some(&image))?;
            let curve = validate_range(&curve, &image.histogram(), *mode)?;
            let varied = apply_curve(&image, &curve)?;
            write_file(path, &save_pgm(&varied))?;
            let mut text = format!("curve={}\n", curve.label());
            text.push_str(&format_report("before.", &report(&image)));
            text.push_str(&format_report("after.", &report(&varied)));
            emit(out, None, &text)
        }
        Command::Optimize {
            input,
            grid,
            trace,
            out: path,
            workers,
        } => {
            let image = read_image(input)?;
            let grid = grid.to_grid()?;
            let options = SearchOptions {
                workers: *workers,
                record_trace: trace.is_some(),
            };
            let result = optimize_with(&image, &grid, &options)?;
            if let (Some(trace_path), Some(entries)) = (trace, &result.trace) {
                write_file(trace_path, trace_to_csv(entries).as_bytes())?;
            }
            if let Some(path) = path {
                let enhanced = apply_curve(&image, &result.best_curve())?;
                write_file(path, &save_pgm(&enhanced))?;
            }
            let before = report(&image);
            let p = &result.best_params;
            let mut text = String::new();
            let _ = writeln!(text, "a1={}", sig6(p.a1));
            let _ = writeln!(text, "a2={}", sig6(p.a2));
            let _ = writeln!(text, "alpha={}", sig6(p.alpha));
            let _ = writeln!(text, "beta={}", sig6(p.beta));
            let _ = writeln!(text, "pivot={}", sig6(p.pivot));
            let _ = writeln!(text, "visibility_before={}", sig6(before.visibility));
            let _ = writeln!(
                text,
                "visibility_after={}",
                sig6(result.best_report.visibility)
            );
            let _ = writeln!(text, "variance_before={}", sig6(before.variance));
            let _ = writeln!(text, "variance_after={}", sig6(result.best_report.variance));
            let _ = writeln!(text, "candidates_total={}", result.candidates_total);
            let _ = writeln!(text, "candidates_rejected={}", result.candidates_rejected);
            emit(out, None, &text)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "tonevis: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats() {
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(127.5), "127.500");
        assert_eq!(sig6(16256.25), "16256.2");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(9.999999), "10.0000");
        assert_eq!(sig6(4.5), "4.50000");
        assert_eq!(sig6(0.30000000000000004), "0.300000");
        assert_eq!(sig6(1234567.0), "1234567");
    }

    #[test]
    fn usage_errors() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["tonevis"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(
            run(
                ["tonevis", "apply", "x.pgm", "--a1", "1", "--out", "y.pgm"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
        assert_eq!(
            run(
                [
                    "tonevis",
                    "apply",
                    "x.pgm",
                    "--a1",
                    "1",
                    "--a2",
                    "1",
                    "--alpha",
                    "1",
                    "--beta",
                    "1",
                    "--points",
                    "0,0;255,255",
                    "--out",
                    "y.pgm"
                ],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
    }

    #[test]
    fn curve_needs_a_pivot() {
        let cli = Cli::try_parse_from([
            "tonevis", "curve", "--a1", "1", "--a2", "1", "--alpha", "1", "--beta", "1",
        ])
        .unwrap();
        let err = execute(&cli, &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn curve_exports_lut() {
        let mut out = Vec::new();
        let code = run(
            ["tonevis", "curve", "--points", "0,0;128,200;255,255"],
            &mut out,
            &mut Vec::new(),
        );
        assert_eq!(code, 0);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 256);
        assert!(text.lines().any(|l| l == "64,100"));
    }
}
