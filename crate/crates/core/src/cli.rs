//! Command-line front end. Each subcommand wraps one library operation and
//! writes a single CSV, JSON or SVG artifact.
//!
//! Exit codes: 0 success, 2 argument error, 3 precondition violation,
//! 4 resource ceiling, 5 numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::densities::{Cdf, DistributionModel};
use crate::ec::{self, CurveSpec, PointCount};
use crate::equidist::{self, Histogram, WeylSumReport};
use crate::error::Error;
use crate::experiments::{self, SequenceSource};
use crate::poly::{self, IntPolynomial, SalemVerdict};
use crate::svg::{Curve, Plot};

/// Version of the CSV column layouts below. Bumped whenever a column is
/// added, removed or reordered.
///
/// | subcommand    | columns                                          |
/// |---------------|--------------------------------------------------|
/// | trace-seq     | `n,alpha_n`                                      |
/// | sweep         | `p,a1,alpha1,supersingular`                      |
/// | discrepancy   | `N,d_star,et_bound`                              |
/// | summatory     | `x,sum_real,sum_imag,prediction,relative_gap`    |
/// | histogram     | `lo,hi,count`                                    |
/// | density       | `t,pdf` or `t,cdf`                               |
/// | salem         | `n,frac_power`                                   |
/// | power-sums    | `n,s_n`                                          |
/// | point-count   | `p,count,trace,character_sum`                    |
/// | lang-trotter  | `r,x,count,ratio`                                |
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Points on the sampling grid of density curves.
pub const DENSITY_GRID: usize = 512;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Parser, Debug)]
#[command(name = "frobtrace", version, about = "Trace-of-Frobenius sequences and equidistribution diagnostics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for prime sweeps and sample sorting.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArg {
    /// Coefficients A,B of y^2 = x^3 + Ax + B.
    #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
    pub curve: CurveSpec,
}

#[derive(Args, Debug, Clone)]
pub struct FixedPrimeArgs {
    #[command(flatten)]
    pub curve: CurveArg,
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Fractional bits kept for the Frobenius angle.
    #[arg(long, default_value_t = ec::DEFAULT_ANGLE_BITS)]
    pub angle_bits: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Uniform,
    Arcsine,
    GenArcsine,
    Semicircle,
    CmMixture,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Salem degree for gen-arcsine (scale d − 1).
    #[arg(long, conflicts_with = "scale")]
    pub d: Option<u32>,
    /// Explicit gen-arcsine scale.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hi: f64,
}

impl ModelArgs {
    fn model(&self) -> Result<DistributionModel, Error> {
        match self.model {
            ModelKind::Uniform => DistributionModel::uniform(self.lo, self.hi),
            ModelKind::Arcsine => Ok(DistributionModel::Arcsine),
            ModelKind::Semicircle => Ok(DistributionModel::Semicircle),
            ModelKind::CmMixture => Ok(DistributionModel::CmMixture),
            ModelKind::GenArcsine => match (self.d, self.scale) {
                (_, Some(s)) => DistributionModel::gen_arcsine_scaled(s),
                (Some(d), None) => DistributionModel::gen_arcsine(d),
                (None, None) => Err(Error::pre("gen-arcsine needs --d or --scale")),
            },
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LadderSource {
    /// (1 + αₙ)/2 for the given curve and prime.
    Trace,
    /// frac(n·φ), φ the golden ratio.
    Golden,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Pdf,
    Cdf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// αₙ = cos(nθ) for n = 1..N (csv: n,alpha_n).
    TraceSeq {
        #[command(flatten)]
        at: FixedPrimeArgs,
        #[arg(short = 'N', long = "count")]
        n: usize,
    },
    /// #E(F_p), the trace a₁ and the character sum.
    PointCount {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(short = 'p', long = "prime")]
        p: u64,
    },
    /// θ = arccos(a₁ / 2√p) in extended precision.
    Angle {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "curve")]
        a1: Option<i64>,
        #[arg(long, value_parser = parse_curve, allow_hyphen_values = true, conflicts_with = "a1")]
        curve: Option<CurveSpec>,
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(long, default_value_t = ec::DEFAULT_ANGLE_BITS)]
        angle_bits: u32,
        /// Decimal digits printed for θ.
        #[arg(long, default_value_t = 40)]
        digits: usize,
    },
    /// Mean of e^{2πik uₙ} over uₙ = αₙ (or (1+αₙ)/2 with --unit).
    Weyl {
        #[command(flatten)]
        at: FixedPrimeArgs,
        #[arg(short = 'N', long = "count")]
        n: usize,
        #[arg(short = 'k', allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        unit: bool,
    },
    /// Partial sums Σ_{n≤x} e^{−2πik αₙ} against J₀(2πk)·x.
    Summatory {
        #[command(flatten)]
        at: FixedPrimeArgs,
        #[arg(short = 'k', allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        ladder: Vec<u64>,
    },
    /// Star discrepancy and Erdős–Turán bound over a ladder of N (csv: N,d_star,et_bound).
    Discrepancy {
        #[arg(long, value_enum, default_value = "trace")]
        source: LadderSource,
        #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
        curve: Option<CurveSpec>,
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        ladder: Vec<usize>,
        #[arg(short = 'H', long = "cutoff", default_value_t = 10)]
        cutoff: u32,
    },
    /// Kolmogorov–Smirnov distance of αₙ from a model law.
    Ks {
        #[command(flatten)]
        at: FixedPrimeArgs,
        #[arg(short = 'N', long = "count")]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Histogram of αₙ.
    Histogram {
        #[command(flatten)]
        at: FixedPrimeArgs,
        #[arg(short = 'N', long = "count")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        bins: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Density or distribution function of a model on a 512-point grid.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "pdf")]
        kind: CurveKind,
    },
    /// Salem classification and the mod-1 power sequence of the dominant root.
    Salem {
        /// Integer coefficients, leading term first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Vec<i64>,
        #[arg(short = 'N', long = "count", default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Exact power sums of the roots (csv: n,s_n).
    PowerSums {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Vec<i64>,
        #[arg(short = 'N', long = "count")]
        n: usize,
    },
    /// a₁ for every prime 5 ≤ p ≤ X (csv: p,a1,alpha1,supersingular).
    Sweep {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(short = 'X', long = "bound")]
        x: u64,
    },
    /// Fraction of primes with α₁ in [a, b] against a model law.
    SatoTate {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(short = 'X', long = "bound")]
        x: u64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Number of primes p ≤ X with a₁ = r.
    LangTrotter {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(short = 'X', long = "bound")]
        x: u64,
        #[arg(short = 'r', allow_hyphen_values = true)]
        r: i64,
    },
    /// Distribution of αₙ at a single prime.
    FixedPrime {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'N', long = "count")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        bins: usize,
    },
}

fn parse_curve(s: &str) -> Result<CurveSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected A,B but got {s:?}"));
    }
    let a = parts[0].parse::<i64>().map_err(|e| e.to_string())?;
    let b = parts[1].parse::<i64>().map_err(|e| e.to_string())?;
    CurveSpec::new(a, b).map_err(|e| e.to_string())
}

/// Failure of a CLI run, carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e.exit_code() {
            3 => "precondition",
            4 => "resource",
            _ => "numeric",
        };
        CliError {
            code: e.exit_code(),
            kind,
            message: e.to_string(),
        }
    }
}

fn arg_error(msg: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        kind: "argument",
        message: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSeqReport {
    pub curve: CurveSpec,
    pub p: u64,
    pub a1: i64,
    pub start_index: u64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCountReport {
    pub curve: CurveSpec,
    #[serde(flatten)]
    pub count: PointCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub a1: i64,
    pub p: u64,
    pub bits: u32,
    pub theta: f64,
    pub theta_decimal: String,
    pub err_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub model: DistributionModel,
    pub n: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub model: DistributionModel,
    pub kind: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalemReport {
    pub poly: Vec<i64>,
    pub verdict: SalemVerdict,
    pub requested: usize,
    pub certified: usize,
    pub ks_vs_uniform: Option<f64>,
    pub histogram: Option<Histogram>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumsReport {
    pub poly: Vec<i64>,
    /// Decimal strings: the sums grow without bound.
    pub sums: Vec<String>,
}

/// A rendered artifact plus the format it was rendered in.
struct Artifact(Vec<u8>);

fn json<T: Serialize>(v: &T) -> Result<Artifact, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError {
        code: 5,
        kind: "numeric",
        message: e.to_string(),
    })?;
    s.push('\n');
    Ok(Artifact(s.into_bytes()))
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Artifact, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError {
        code: 5,
        kind: "numeric",
        message: e.to_string(),
    };
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError {
        code: 5,
        kind: "numeric",
        message: e.to_string(),
    })?;
    Ok(Artifact(bytes))
}

fn svg(plot: Plot) -> Artifact {
    Artifact(plot.render().into_bytes())
}

fn pick(requested: Option<Format>, allowed: &[Format], name: &str) -> Result<Format, CliError> {
    let f = requested.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(arg_error(format!(
            "{name} does not support --format {}",
            format!("{f:?}").to_lowercase()
        )))
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

fn prime_ok(p: u64) -> Result<(), Error> {
    if p <= 3 || !ec::is_prime(p) {
        return Err(Error::pre(format!("p = {p} must be a prime greater than 3")));
    }
    Ok(())
}

fn positive(n: usize, what: &str) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::pre(format!("{what} must be at least 1")));
    }
    Ok(())
}

impl RunConfig {
    /// Checks the numeric arguments against the library preconditions
    /// before any computation starts.
    pub fn validate(&self) -> Result<(), Error> {
        if self.threads == 0 {
            return Err(Error::pre("--threads must be at least 1"));
        }
        match &self.command {
            Command::TraceSeq { at, n } | Command::Ks { at, n, .. } | Command::Histogram { at, n, .. } => {
                prime_ok(at.p)?;
                positive(*n, "N")?;
            }
            Command::Weyl { at, n, k, .. } => {
                prime_ok(at.p)?;
                positive(*n, "N")?;
                if *k == 0 {
                    return Err(Error::pre("k must be nonzero"));
                }
            }
            Command::Summatory { at, k, ladder } => {
                prime_ok(at.p)?;
                if *k == 0 {
                    return Err(Error::pre("k must be nonzero"));
                }
                if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::pre("ladder must be positive and strictly ascending"));
                }
            }
            Command::PointCount { p, .. } | Command::Angle { p, .. } => prime_ok(*p)?,
            Command::FixedPrime { p, n, .. } => {
                prime_ok(*p)?;
                positive(*n, "N")?;
            }
            Command::Discrepancy { ladder, cutoff, .. } => {
                if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::pre("ladder must be positive and strictly ascending"));
                }
                if *cutoff == 0 {
                    return Err(Error::pre("H must be at least 1"));
                }
            }
            Command::Salem { poly, n, bins } => {
                IntPolynomial::from_descending(poly)?;
                positive(*n, "N")?;
                positive(*bins, "bins")?;
            }
            Command::PowerSums { poly, n } => {
                if !IntPolynomial::from_descending(poly)?.is_monic() {
                    return Err(Error::pre("power sums need a monic polynomial"));
                }
                positive(*n, "N")?;
            }
            Command::Sweep { x, .. } | Command::LangTrotter { x, .. } => {
                if *x > experiments::MAX_SWEEP_BOUND {
                    return Err(Error::Resource {
                        what: "X",
                        value: *x,
                        ceiling: experiments::MAX_SWEEP_BOUND,
                    });
                }
            }
            Command::SatoTate { x, a, b, model, .. } => {
                if *x > experiments::MAX_SWEEP_BOUND {
                    return Err(Error::Resource {
                        what: "X",
                        value: *x,
                        ceiling: experiments::MAX_SWEEP_BOUND,
                    });
                }
                if !(-1.0 <= *a && a < b && *b <= 1.0) {
                    return Err(Error::pre("need -1 <= a < b <= 1"));
                }
                model.model()?;
            }
            Command::Density { model, .. } => {
                model.model()?;
            }
        }
        if let Command::Ks { model, .. } = &self.command {
            model.model()?;
        }
        Ok(())
    }
}

fn trace_angle(at: &FixedPrimeArgs) -> Result<ec::FrobeniusAngle, Error> {
    let pc = ec::count_points(&at.curve.curve, at.p)?;
    ec::frobenius_angle_with_bits(pc.trace, at.p, at.angle_bits)
}

fn density_points(model: &DistributionModel, kind: CurveKind) -> Result<Vec<(f64, f64)>, Error> {
    let (lo, hi) = model.domain();
    let step = (hi - lo) / DENSITY_GRID as f64;
    (0..DENSITY_GRID)
        .map(|i| {
            // Cell midpoints keep the grid off the endpoint poles.
            let t = lo + (i as f64 + 0.5) * step;
            let v = match kind {
                CurveKind::Pdf if t == 0.0 && *model == DistributionModel::CmMixture => 0.5 * std::f64::consts::FRAC_1_PI,
                CurveKind::Pdf => model.pdf(t)?,
                CurveKind::Cdf => model.cdf(t)?,
            };
            Ok((t, v))
        })
        .collect()
}

fn plot_y_max(points: &[(f64, f64)], cap: f64) -> f64 {
    let m = points.iter().map(|p| p.1).fold(0.0f64, f64::max);
    (m * 1.1).min(cap).max(0.1)
}

fn execute(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let fmt = cfg.format;
    match &cfg.command {
        Command::TraceSeq { at, n } => {
            let f = pick(fmt, &[Format::Csv, Format::Json], "trace-seq")?;
            let angle = trace_angle(at)?;
            let seq = ec::normalized_trace_sequence(&angle, *n)?;
            match f {
                Format::Csv => csv(
                    &["n", "alpha_n"],
                    seq.indexed().map(|(i, v)| vec![i.to_string(), fmt_f(v)]),
                ),
                _ => json(&TraceSeqReport {
                    curve: at.curve.curve,
                    p: at.p,
                    a1: angle.a1(),
                    start_index: seq.start_index(),
                    values: seq.into_values(),
                }),
            }
        }
        Command::PointCount { curve, p } => {
            let f = pick(fmt, &[Format::Json, Format::Csv], "point-count")?;
            let pc = ec::count_points(&curve.curve, *p)?;
            match f {
                Format::Csv => csv(
                    &["p", "count", "trace", "character_sum"],
                    [vec![
                        pc.p.to_string(),
                        pc.count.to_string(),
                        pc.trace.to_string(),
                        pc.character_sum.to_string(),
                    ]],
                ),
                _ => json(&PointCountReport {
                    curve: curve.curve,
                    count: pc,
                }),
            }
        }
        Command::Angle {
            a1,
            curve,
            p,
            angle_bits,
            digits,
        } => {
            pick(fmt, &[Format::Json], "angle")?;
            let a1 = match (a1, curve) {
                (Some(a), _) => *a,
                (None, Some(c)) => ec::count_points(c, *p)?.trace,
                (None, None) => return Err(arg_error("angle needs --a1 or --curve")),
            };
            let angle = ec::frobenius_angle_with_bits(a1, *p, *angle_bits)?;
            json(&AngleReport {
                a1,
                p: *p,
                bits: *angle_bits,
                theta: angle.theta_f64(),
                theta_decimal: angle.theta().to_decimal(*digits),
                err_bound: angle.err_bound(),
            })
        }
        Command::Weyl { at, n, k, unit } => {
            pick(fmt, &[Format::Json], "weyl")?;
            let angle = trace_angle(at)?;
            let mut seq = ec::normalized_trace_sequence(&angle, *n)?;
            if *unit {
                seq = equidist::map_to_unit(&seq)?;
            }
            let r: WeylSumReport = equidist::weyl_sum(&seq, *k)?;
            json(&r)
        }
        Command::Summatory { at, k, ladder } => {
            let f = pick(fmt, &[Format::Csv, Format::Json], "summatory")?;
            let angle = trace_angle(at)?;
            let pts = experiments::summatory_check(&angle, *k, ladder)?;
            match f {
                Format::Csv => csv(
                    &["x", "sum_real", "sum_imag", "prediction", "relative_gap"],
                    pts.iter().map(|p| {
                        vec![
                            p.x.to_string(),
                            fmt_f(p.sum_real),
                            fmt_f(p.sum_imag),
                            fmt_f(p.prediction),
                            fmt_f(p.relative_gap),
                        ]
                    }),
                ),
                _ => json(&pts),
            }
        }
        Command::Discrepancy {
            source,
            curve,
            p,
            ladder,
            cutoff,
        } => {
            let f = pick(fmt, &[Format::Csv, Format::Json], "discrepancy")?;
            let src = match source {
                LadderSource::Golden => SequenceSource::golden_rotation(),
                LadderSource::Trace => {
                    let (Some(c), Some(p)) = (curve, p) else {
                        return Err(arg_error("--source trace needs --curve and -p"));
                    };
                    prime_ok(*p)?;
                    let pc = ec::count_points(c, *p)?;
                    SequenceSource::UnitTrace(ec::frobenius_angle(pc.trace, *p)?)
                }
            };
            let r = experiments::discrepancy_ladder(&src, ladder, *cutoff)?;
            match f {
                Format::Csv => csv(
                    &["N", "d_star", "et_bound"],
                    r.points
                        .iter()
                        .map(|d| vec![d.n.to_string(), fmt_f(d.d_star), fmt_f(d.et_bound)]),
                ),
                _ => json(&r),
            }
        }
        Command::Ks { at, n, model } => {
            pick(fmt, &[Format::Json], "ks")?;
            let m = model.model()?;
            let seq = ec::normalized_trace_sequence(&trace_angle(at)?, *n)?;
            json(&KsReport {
                model: m,
                n: *n,
                distance: equidist::ks_distance(&seq, &m)?,
            })
        }
        Command::Histogram { at, n, bins, lo, hi } => {
            let f = pick(fmt, &[Format::Csv, Format::Json, Format::Svg], "histogram")?;
            let seq = ec::normalized_trace_sequence(&trace_angle(at)?, *n)?;
            let h = equidist::histogram(&seq, *bins, *lo, *hi)?;
            match f {
                Format::Csv => csv(
                    &["lo", "hi", "count"],
                    h.counts.iter().enumerate().map(|(i, c)| {
                        vec![fmt_f(h.bin_edges[i]), fmt_f(h.bin_edges[i + 1]), c.to_string()]
                    }),
                ),
                Format::Json => json(&h),
                Format::Svg => Ok(histogram_plot(
                    format!("alpha_n for {} at p = {}, N = {n}", at.curve.curve, at.p),
                    h,
                    (*lo, *hi),
                    Some(&DistributionModel::Arcsine),
                )?),
            }
        }
        Command::Density { model, kind } => {
            let f = pick(fmt, &[Format::Csv, Format::Json, Format::Svg], "density")?;
            let m = model.model()?;
            let pts = density_points(&m, *kind)?;
            let kind_name = match kind {
                CurveKind::Pdf => "pdf",
                CurveKind::Cdf => "cdf",
            };
            match f {
                Format::Csv => csv(
                    &["t", kind_name],
                    pts.iter().map(|&(t, v)| vec![fmt_f(t), fmt_f(v)]),
                ),
                Format::Json => json(&DensityReport {
                    model: m,
                    kind: kind_name.into(),
                    points: pts,
                }),
                Format::Svg => {
                    let (lo, hi) = m.domain();
                    let pad = 0.25 * (hi - lo);
                    let y_max = match kind {
                        CurveKind::Pdf => plot_y_max(&pts, 3.0),
                        CurveKind::Cdf => 1.0,
                    };
                    Ok(svg(Plot {
                        title: format!("{kind_name} of {}", m.name()),
                        x_label: "z".into(),
                        y_label: kind_name.into(),
                        x_range: (lo - pad, hi + pad),
                        y_range: (0.0, y_max),
                        curves: vec![Curve {
                            label: m.name(),
                            points: pts,
                        }],
                        bars: None,
                    }))
                }
            }
        }
        Command::Salem { poly: coeffs, n, bins } => {
            let f = pick(fmt, &[Format::Json, Format::Csv, Format::Svg], "salem")?;
            let p = IntPolynomial::from_descending(coeffs)?;
            let verdict = poly::salem_classify(&p);
            let mod1 = poly::power_mod1_sequence(&p, *n);
            match f {
                Format::Csv => {
                    let m = mod1?;
                    csv(
                        &["n", "frac_power"],
                        m.sequence.indexed().map(|(i, v)| vec![i.to_string(), fmt_f(v)]),
                    )
                }
                Format::Svg => {
                    let m = mod1?;
                    let h = equidist::histogram(&m.sequence, *bins, 0.0, 1.0)?;
                    histogram_plot(format!("frac(alpha^n) for {p}, N = {}", m.certified), h, (0.0, 1.0), None)
                }
                Format::Json => {
                    let (certified, ks, hist) = match mod1 {
                        Ok(m) => {
                            let u = DistributionModel::uniform(0.0, 1.0)?;
                            (
                                m.certified,
                                Some(equidist::ks_distance(&m.sequence, &u)?),
                                Some(equidist::histogram(&m.sequence, *bins, 0.0, 1.0)?),
                            )
                        }
                        Err(Error::Precondition(_)) => (0, None, None),
                        Err(e) => return Err(e.into()),
                    };
                    json(&SalemReport {
                        poly: coeffs.clone(),
                        verdict,
                        requested: *n,
                        certified,
                        ks_vs_uniform: ks,
                        histogram: hist,
                    })
                }
            }
        }
        Command::PowerSums { poly: coeffs, n } => {
            let f = pick(fmt, &[Format::Csv, Format::Json], "power-sums")?;
            let p = IntPolynomial::from_descending(coeffs)?;
            let sums = poly::newton_power_sums(&p, *n)?;
            match f {
                Format::Csv => csv(
                    &["n", "s_n"],
                    sums.iter().enumerate().map(|(i, s)| vec![i.to_string(), s.to_string()]),
                ),
                _ => json(&PowerSumsReport {
                    poly: coeffs.clone(),
                    sums: sums.iter().map(|s| s.to_string()).collect(),
                }),
            }
        }
        Command::Sweep { curve, x } => {
            let f = pick(fmt, &[Format::Csv, Format::Json, Format::Svg], "sweep")?;
            let r = sweep(cfg, &curve.curve, *x)?;
            match f {
                Format::Csv => csv(
                    &["p", "a1", "alpha1", "supersingular"],
                    r.good().map(|(p, a1, al)| {
                        vec![p.to_string(), a1.to_string(), fmt_f(al), (a1 == 0).to_string()]
                    }),
                ),
                Format::Json => json(&r),
                Format::Svg => {
                    let h = equidist::histogram(&r.alpha_sequence()?, 40, -1.0, 1.0)?;
                    histogram_plot(
                        format!("alpha_1 over primes <= {x} for {}", curve.curve),
                        h,
                        (-1.0, 1.0),
                        Some(&DistributionModel::Semicircle),
                    )
                }
            }
        }
        Command::SatoTate {
            curve,
            x,
            a,
            b,
            model,
        } => {
            pick(fmt, &[Format::Json], "sato-tate")?;
            let m = model.model()?;
            let r = sweep(cfg, &curve.curve, *x)?;
            json(&experiments::sato_tate_test(&r, *a, *b, &m)?)
        }
        Command::LangTrotter { curve, x, r } => {
            let f = pick(fmt, &[Format::Json, Format::Csv], "lang-trotter")?;
            let sw = sweep(cfg, &curve.curve, *x)?;
            let lt = experiments::lang_trotter_counts(&sw, *r);
            match f {
                Format::Csv => csv(
                    &["r", "x", "count", "ratio"],
                    [vec![lt.r.to_string(), lt.x.to_string(), lt.count.to_string(), fmt_f(lt.ratio)]],
                ),
                _ => json(&lt),
            }
        }
        Command::FixedPrime { curve, p, n, bins } => {
            let f = pick(fmt, &[Format::Json, Format::Svg], "fixed-prime")?;
            let r = experiments::fixed_prime_distribution_with_bins(&curve.curve, *p, *n, *bins)?;
            match f {
                Format::Svg => histogram_plot(
                    format!("alpha_n for {} at p = {p}, N = {n}", curve.curve),
                    r.histogram,
                    (-1.0, 1.0),
                    Some(&DistributionModel::Arcsine),
                ),
                _ => json(&r),
            }
        }
    }
}

fn sweep(cfg: &RunConfig, curve: &CurveSpec, x: u64) -> Result<experiments::PrimeSweepReport, CliError> {
    if x >= 100_000 {
        eprintln!("frobtrace: counting points for every prime up to {x} ...");
    }
    Ok(experiments::prime_sweep_with_threads(curve, x, cfg.threads)?)
}

fn histogram_plot(
    title: String,
    h: Histogram,
    range: (f64, f64),
    overlay: Option<&DistributionModel>,
) -> Result<Artifact, CliError> {
    let mut curves = Vec::new();
    let mut y_max = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 / (h.total.max(1) as f64 * (h.bin_edges[i + 1] - h.bin_edges[i])))
        .fold(0.0f64, f64::max);
    if let Some(m) = overlay {
        let pts = density_points(m, CurveKind::Pdf)?;
        y_max = y_max.max(plot_y_max(&pts, 3.0));
        curves.push(Curve {
            label: m.name(),
            points: pts,
        });
    }
    Ok(svg(Plot {
        title,
        x_label: "value".into(),
        y_label: "density".into(),
        x_range: range,
        y_range: (0.0, (y_max * 1.1).min(6.0).max(0.1)),
        curves,
        bars: Some(h),
    }))
}

fn emit(cfg: &RunConfig, art: &Artifact) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, &art.0)
            .map_err(|e| arg_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&art.0)
                .and_then(|_| out.flush())
                .map_err(|e| arg_error(format!("cannot write to stdout: {e}")))
        }
    }
}

fn report_error(e: &CliError) {
    let body = serde_json::json!({ "error": e.kind, "message": e.message });
    eprintln!("{body}");
}

/// Parses `argv`, runs one subcommand, and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = cfg.validate() {
        let e = CliError::from(e);
        report_error(&e);
        return e.code;
    }
    // The global pool is configured at most once per process; later calls
    // (e.g. repeated runs inside one test binary) keep the first setting.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global();
    match execute(&cfg).and_then(|art| emit(&cfg, &art)) {
        Ok(()) => 0,
        Err(e) => {
            report_error(&e);
            e.code
        }
    }
}
