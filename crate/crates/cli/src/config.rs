//! Job configuration: command-line flags merged over an optional TOML file.
//!
//! A flag always wins over the file. The cache directory falls back to
//! `$WEBLIN_CACHE_DIR` and then to `.weblin-cache`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use linearize::{GridSpec, Tolerances};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use polyalg::Tolerance;
use serde::Deserialize;
use symexpr::{fmt_rational, EvalMode};
use webgeom::{Gauge, Point, WebChart};

use crate::error::CliError;

/// Flags shared by every web-level subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct JobArgs {
    /// Third foliation `f(x, y) = c`, e.g. "(x+y)*exp(-x)".
    #[arg(long = "f", value_name = "EXPR")]
    pub f: Option<String>,
    /// Base point "x,y" with rational or decimal coordinates.
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Arithmetic: exact (rational, with float fallback) or float.
    #[arg(long, value_name = "exact|float")]
    pub mode: Option<String>,
    /// Frame gauge: unit, gradient, or an expression for the scale.
    #[arg(long)]
    pub gauge: Option<String>,
    /// Grid spacing.
    #[arg(long = "grid-h")]
    pub grid_h: Option<f64>,
    /// Grid nodes per side (odd).
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    /// Relative tolerance for floating-point zero tests.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Uniform tolerance for all verification residuals, replacing the h^4 scaling.
    #[arg(long = "verify-tol")]
    pub verify_tol: Option<f64>,
    /// Neighborhood sampling radius.
    #[arg(long)]
    pub radius: Option<String>,
    /// Number of neighborhood sample points.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tower cache directory.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long = "report-out")]
    pub report_out: Option<PathBuf>,
    /// TOML file with the same keys (underscores for dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Extra flags of `integrate` and `verify`.
#[derive(Args, Clone, Debug, Default)]
pub struct FieldArgs {
    /// Initial base value at the point.
    #[arg(long, allow_hyphen_values = true)]
    pub s0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<f64>,
    /// Write the grid table here.
    #[arg(long = "dump-out")]
    pub dump_out: Option<PathBuf>,
}

/// Keys accepted in a configuration file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub f: Option<String>,
    pub point: Option<String>,
    pub mode: Option<String>,
    pub gauge: Option<String>,
    pub grid_h: Option<f64>,
    pub grid_n: Option<usize>,
    pub tol: Option<f64>,
    pub verify_tol: Option<f64>,
    pub radius: Option<String>,
    pub samples: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub s0: Option<String>,
    pub t0: Option<f64>,
    pub z0: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }
}

/// Largest number of neighborhood samples; the offsets are fixed.
pub const MAX_SAMPLES: usize = 8;

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub f: String,
    pub chart: WebChart,
    pub point: Point,
    pub mode: EvalMode,
    pub gauge: Gauge,
    pub grid: GridSpec,
    pub tol: Tolerance,
    pub verify_tol: Option<f64>,
    pub radius: BigRational,
    pub samples: usize,
    pub cache_dir: PathBuf,
    pub s0: Option<BigRational>,
    pub t0: f64,
    pub z0: f64,
}

impl JobConfig {
    /// A job with default settings for `f` at `point`.
    pub fn new(f: &str, point: &str) -> Result<JobConfig, CliError> {
        let args = JobArgs { f: Some(f.into()), point: Some(point.into()), ..JobArgs::default() };
        JobConfig::resolve(&args, &FieldArgs::default())
    }

    pub fn resolve(args: &JobArgs, field: &FieldArgs) -> Result<JobConfig, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let f = args.f.clone().or(file.f).ok_or_else(|| CliError::Input("no web given (--f)".into()))?;
        let chart = WebChart::parse(&f).map_err(|e| CliError::Input(format!("cannot read f: {e}")))?;
        let point = parse_point(args.point.as_deref().or(file.point.as_deref()).unwrap_or("0,0"))?;
        let mode = match args.mode.as_deref().or(file.mode.as_deref()).unwrap_or("exact") {
            "exact" => EvalMode::Exact,
            "float" => EvalMode::Float,
            other => return Err(CliError::Input(format!("unknown mode `{other}`"))),
        };
        let gauge_src = args.gauge.clone().or(file.gauge).unwrap_or_else(|| "unit".into());
        let gauge = Gauge::parse(&gauge_src).map_err(|e| CliError::Input(format!("cannot read gauge: {e}")))?;
        let default = GridSpec::default();
        let grid = GridSpec {
            h: args.grid_h.or(file.grid_h).unwrap_or(default.h),
            n: args.grid_n.or(file.grid_n).unwrap_or(default.n),
        };
        if !(grid.h > 0.0 && grid.h.is_finite()) || grid.n.is_multiple_of(2) {
            return Err(CliError::Input(format!("grid needs h > 0 and odd n (h = {}, n = {})", grid.h, grid.n)));
        }
        let rel = args.tol.or(file.tol).unwrap_or(Tolerance::default().rel);
        let verify_tol = args.verify_tol.or(file.verify_tol);
        if !(rel > 0.0) || verify_tol.is_some_and(|t| !(t > 0.0)) {
            return Err(CliError::Input("tolerances must be positive".into()));
        }
        let radius = parse_rational(args.radius.as_deref().or(file.radius.as_deref()).unwrap_or("1/10"))?;
        if !radius.is_positive() {
            return Err(CliError::Input("radius must be positive".into()));
        }
        let samples = args.samples.or(file.samples).unwrap_or(5);
        if samples > MAX_SAMPLES {
            return Err(CliError::Input(format!("at most {MAX_SAMPLES} neighborhood samples")));
        }
        let cache_dir = args.cache_dir.clone().or(file.cache_dir).unwrap_or_else(obstruction::default_cache_dir);
        let s0 = field.s0.as_deref().or(file.s0.as_deref()).map(parse_rational).transpose()?;
        let cfg = JobConfig {
            f,
            chart,
            point,
            mode,
            gauge,
            grid,
            tol: Tolerance { rel },
            verify_tol,
            radius,
            samples,
            cache_dir,
            s0,
            t0: field.t0.or(file.t0).unwrap_or(0.0),
            z0: field.z0.or(file.z0).unwrap_or(0.0),
        };
        cfg.chart.check_point(&cfg.point, cfg.mode).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(cfg)
    }

    pub fn tolerances(&self) -> Tolerances {
        match self.verify_tol {
            Some(t) => Tolerances::uniform(t),
            None => Tolerances::scaled(self.grid.h),
        }
    }

    pub fn point_f64(&self) -> (f64, f64) {
        self.point.to_f64()
    }
}

/// Reads `p/q`, an integer, or a plain decimal such as `-0.05`, exactly.
pub fn parse_rational(src: &str) -> Result<BigRational, CliError> {
    let s = src.trim();
    let bad = || CliError::Input(format!("`{src}` is not a rational number"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let q = BigRational::new(numer, BigInt::from(10u32).pow(frac.len() as u32));
        return Ok(if negative { -q } else { q });
    }
    let q = BigRational::from_str(s).map_err(|_| bad())?;
    if q.denom().is_zero() {
        return Err(bad());
    }
    Ok(q)
}

/// Reads `x,y`, optionally in parentheses.
pub fn parse_point(src: &str) -> Result<Point, CliError> {
    let inner = src.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = inner.split_once(',').ok_or_else(|| CliError::Input(format!("point `{src}` must be written x,y")))?;
    Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
}

pub fn fmt_point(p: &Point) -> [String; 2] {
    [fmt_rational(&p.x), fmt_rational(&p.y)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-0.05").unwrap(), BigRational::new((-1).into(), 20.into()));
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
        let p = parse_point("(1/20, -1/30)").unwrap();
        assert_eq!(fmt_point(&p), ["1/20".to_string(), "-1/30".to_string()]);
    }
}
