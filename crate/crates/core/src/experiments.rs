//! End-to-end measurements built from the lower modules.

use serde::{Deserialize, Serialize};

use crate::densities::{weyl_limit, Cdf, DistributionModel, NeumaierSum};
use crate::ec::{self, CurveSpec, FrobeniusAngle};
use crate::equidist::{self, DiscrepancyReport, Histogram};
use crate::error::{Error, Result};
use crate::hiprec::{turn_to_f64, TurnFraction};
use crate::sequence::RealSequence;

/// Largest sweep bound accepted by [`prime_sweep`].
pub const MAX_SWEEP_BOUND: u64 = 1_000_000;

/// Longest sequence [`fixed_prime_distribution`] will build.
pub const MAX_FIXED_PRIME_SAMPLES: usize = 10_000_000;

/// Samples with `|αₙ|` below this count as zeros.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Primes `5 ≤ p ≤ bound` (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 5 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (5..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p: u64,
    pub good_reduction: bool,
    /// Absent at primes of bad reduction.
    pub a1: Option<i64>,
    pub alpha1: Option<f64>,
    pub supersingular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeSweepReport {
    pub curve: CurveSpec,
    pub x: u64,
    pub records: Vec<SweepRecord>,
    /// Number of good primes in `[5, x]`.
    pub prime_count: usize,
}

impl PrimeSweepReport {
    pub fn good(&self) -> impl Iterator<Item = (u64, i64, f64)> + '_ {
        self.records
            .iter()
            .filter_map(|r| Some((r.p, r.a1?, r.alpha1?)))
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| !r.good_reduction)
            .map(|r| r.p)
            .collect()
    }

    /// The normalized traces `a₁/(2√p)` of the good primes, in prime order.
    pub fn alpha_sequence(&self) -> Result<RealSequence> {
        RealSequence::new(
            self.good().map(|(_, _, a)| a).collect(),
            1,
            (-1.0, 1.0),
            format!("alpha_1 over primes <= {} for {}", self.x, self.curve),
        )
    }

    pub fn supersingular_fraction(&self) -> Option<f64> {
        if self.prime_count == 0 {
            return None;
        }
        let ss = self.records.iter().filter(|r| r.supersingular).count();
        Some(ss as f64 / self.prime_count as f64)
    }
}

fn sweep_record(curve: &CurveSpec, p: u64) -> Result<SweepRecord> {
    if !curve.good_reduction(p)? {
        return Ok(SweepRecord {
            p,
            good_reduction: false,
            a1: None,
            alpha1: None,
            supersingular: false,
        });
    }
    let pc = ec::count_points(curve, p)?;
    Ok(SweepRecord {
        p,
        good_reduction: true,
        a1: Some(pc.trace),
        alpha1: Some(pc.trace as f64 / (2.0 * (p as f64).sqrt())),
        supersingular: ec::is_supersingular_trace(pc.trace, p),
    })
}

/// Traces of every prime `5 ≤ p ≤ x`, in increasing order of `p`.
pub fn prime_sweep(curve: &CurveSpec, x: u64) -> Result<PrimeSweepReport> {
    prime_sweep_with_threads(curve, x, 1)
}

/// As [`prime_sweep`], fanning the primes out over `threads` workers. The
/// report is identical for every thread count.
pub fn prime_sweep_with_threads(
    curve: &CurveSpec,
    x: u64,
    threads: usize,
) -> Result<PrimeSweepReport> {
    if x > MAX_SWEEP_BOUND {
        return Err(Error::Resource {
            what: "X",
            value: x,
            ceiling: MAX_SWEEP_BOUND,
        });
    }
    let primes = primes_up_to(x);
    let records: Result<Vec<SweepRecord>> = if threads <= 1 {
        primes.iter().map(|&p| sweep_record(curve, p)).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
        pool.install(|| primes.par_iter().map(|&p| sweep_record(curve, p)).collect())
    };
    let records = records?;
    let prime_count = records.iter().filter(|r| r.good_reduction).count();
    Ok(PrimeSweepReport {
        curve: *curve,
        x,
        records,
        prime_count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatoTateResult {
    pub a: f64,
    pub b: f64,
    pub empirical: f64,
    pub predicted: f64,
    pub gap: f64,
}

/// Fraction of good primes with `α₁ ∈ [a, b]` against the model's mass.
pub fn sato_tate_test(
    report: &PrimeSweepReport,
    a: f64,
    b: f64,
    model: &DistributionModel,
) -> Result<SatoTateResult> {
    if !(-1.0 <= a && a < b && b <= 1.0) {
        return Err(Error::pre(format!("need -1 <= a < b <= 1, got [{a}, {b}]")));
    }
    if report.prime_count == 0 {
        return Err(Error::pre("sweep has no good primes"));
    }
    let hits = report
        .good()
        .filter(|&(_, _, al)| (a..=b).contains(&al))
        .count();
    let empirical = hits as f64 / report.prime_count as f64;
    let predicted = model.mass(a, b)?;
    Ok(SatoTateResult {
        a,
        b,
        empirical,
        predicted,
        gap: (empirical - predicted).abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LangTrotterReport {
    pub r: i64,
    pub x: u64,
    pub count: u64,
    /// `count / (√x / ln x)`.
    pub ratio: f64,
}

/// Number of good primes `p ≤ x` with `a₁ = r`.
pub fn lang_trotter_counts(report: &PrimeSweepReport, r: i64) -> LangTrotterReport {
    let count = report.good().filter(|&(_, a1, _)| a1 == r).count() as u64;
    let x = report.x as f64;
    let scale = if report.x >= 2 { x.sqrt() / x.ln() } else { 0.0 };
    LangTrotterReport {
        r,
        x: report.x,
        count,
        ratio: if scale > 0.0 { count as f64 / scale } else { 0.0 },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPrimeReport {
    pub curve: CurveSpec,
    pub p: u64,
    pub a1: i64,
    pub n: usize,
    pub supersingular: bool,
    pub zero_fraction: f64,
    /// Samples exactly equal to +1 and −1.
    pub plus_one: u64,
    pub minus_one: u64,
    pub ks_vs_arcsine: f64,
    pub ks_vs_uniform: f64,
    pub histogram: Histogram,
}

/// Distribution of `αₙ = cos(nθ_p)`, `n = 1..=len`, at one fixed prime.
pub fn fixed_prime_distribution(
    curve: &CurveSpec,
    p: u64,
    len: usize,
) -> Result<FixedPrimeReport> {
    fixed_prime_distribution_with_bins(curve, p, len, 100)
}

pub fn fixed_prime_distribution_with_bins(
    curve: &CurveSpec,
    p: u64,
    len: usize,
    bins: usize,
) -> Result<FixedPrimeReport> {
    if len > MAX_FIXED_PRIME_SAMPLES {
        return Err(Error::Resource {
            what: "N",
            value: len as u64,
            ceiling: MAX_FIXED_PRIME_SAMPLES as u64,
        });
    }
    let pc = ec::count_points(curve, p)?;
    let angle = ec::frobenius_angle(pc.trace, p)?;
    let seq = ec::normalized_trace_sequence(&angle, len)?;
    let v = seq.values();
    let zeros = v.iter().filter(|a| a.abs() < ZERO_THRESHOLD).count();
    let uniform = DistributionModel::uniform(-1.0, 1.0)?;
    Ok(FixedPrimeReport {
        curve: *curve,
        p,
        a1: pc.trace,
        n: len,
        supersingular: angle.is_supersingular(),
        zero_fraction: zeros as f64 / len as f64,
        plus_one: v.iter().filter(|&&a| a == 1.0).count() as u64,
        minus_one: v.iter().filter(|&&a| a == -1.0).count() as u64,
        ks_vs_arcsine: equidist::ks_distance(&seq, &DistributionModel::Arcsine)?,
        ks_vs_uniform: equidist::ks_distance(&seq, &uniform)?,
        histogram: equidist::histogram(&seq, bins, -1.0, 1.0)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummatoryPoint {
    pub x: u64,
    pub sum_real: f64,
    pub sum_imag: f64,
    pub prediction: f64,
    /// `|Σ − J₀(2πk)·x| / x`.
    pub relative_gap: f64,
}

/// Partial sums `Σ_{n≤x} e^{−2πik cos(nθ)}` at each `x` of an ascending
/// ladder, against the main term `J₀(2πk)·x`.
pub fn summatory_check(
    angle: &FrobeniusAngle,
    k: i64,
    ladder: &[u64],
) -> Result<Vec<SummatoryPoint>> {
    let j0 = weyl_limit(k)?;
    if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::pre("ladder must be non-empty, positive and strictly ascending"));
    }
    let top = *ladder.last().expect("non-empty");
    if top as usize > ec::DEFAULT_SEQUENCE_CEILING {
        return Err(Error::Resource {
            what: "x",
            value: top,
            ceiling: ec::DEFAULT_SEQUENCE_CEILING as u64,
        });
    }
    let kf = k as f64;
    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    let mut out = Vec::with_capacity(ladder.len());
    let mut n = 0u64;
    for &x in ladder {
        while n < x {
            n += 1;
            let alpha = angle.cos_multiple(n);
            let (s, c) = (std::f64::consts::TAU * (kf * alpha).rem_euclid(1.0)).sin_cos();
            re.add(c);
            im.add(-s);
        }
        let (sr, si) = (re.value(), im.value());
        let prediction = j0 * x as f64;
        out.push(SummatoryPoint {
            x,
            sum_real: sr,
            sum_imag: si,
            prediction,
            relative_gap: (sr - prediction).hypot(si) / x as f64,
        });
    }
    Ok(out)
}

/// Where the samples of a discrepancy ladder come from. Every source
/// produces values in `[0, 1]`.
#[derive(Clone, Debug)]
pub enum SequenceSource {
    /// `(1 + cos(nθ))/2` for a Frobenius angle.
    UnitTrace(FrobeniusAngle),
    /// `frac(n·t)` for a fixed rotation.
    Rotation(TurnFraction),
    Samples(RealSequence),
}

impl SequenceSource {
    pub fn golden_rotation() -> Self {
        SequenceSource::Rotation(TurnFraction::golden())
    }

    pub fn build(&self, len: usize) -> Result<RealSequence> {
        match self {
            SequenceSource::UnitTrace(angle) => {
                equidist::map_to_unit(&ec::normalized_trace_sequence(angle, len)?)
            }
            SequenceSource::Rotation(t) => {
                if len > ec::DEFAULT_SEQUENCE_CEILING {
                    return Err(Error::Resource {
                        what: "N",
                        value: len as u64,
                        ceiling: ec::DEFAULT_SEQUENCE_CEILING as u64,
                    });
                }
                let values = (1..=len as u64).map(|n| turn_to_f64(t.multiple(n))).collect();
                RealSequence::new(values, 1, (0.0, 1.0), "rotation frac(n t)")
            }
            SequenceSource::Samples(s) => {
                if len > s.len() {
                    return Err(Error::pre(format!(
                        "requested {len} samples from a sequence of {}",
                        s.len()
                    )));
                }
                let p = s.prefix(len);
                RealSequence::new(p.values().to_vec(), p.start_index(), (0.0, 1.0), p.source_tag())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub points: Vec<DiscrepancyReport>,
    /// Least-squares slope of `ln D*_N` against `ln N`; absent for fewer
    /// than two usable points.
    pub trend_exponent: Option<f64>,
    /// Root-mean-square residual of that fit.
    pub trend_residual: Option<f64>,
}

pub fn discrepancy_ladder(
    source: &SequenceSource,
    ladder: &[usize],
    cutoff: u32,
) -> Result<LadderReport> {
    if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::pre("ladder must be non-empty, positive and strictly ascending"));
    }
    let full = source.build(*ladder.last().expect("non-empty"))?;
    let points = ladder
        .iter()
        .map(|&n| equidist::discrepancy_report(&full.prefix(n), cutoff))
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|r| r.d_star > 0.0)
        .map(|r| ((r.n as f64).ln(), r.d_star.ln()))
        .collect();
    let (trend_exponent, trend_residual) = match least_squares(&xy) {
        Some((slope, rms)) => (Some(slope), Some(rms)),
        None => (None, None),
    };
    Ok(LadderReport {
        points,
        trend_exponent,
        trend_residual,
    })
}

/// Slope and RMS residual of the least-squares line through `xy`.
fn least_squares(xy: &[(f64, f64)]) -> Option<(f64, f64)> {
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xy
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    Some((slope, (rss / n).sqrt()))
}

/// KS distance of the sweep's α₁ sample from `model`.
pub fn sweep_ks(report: &PrimeSweepReport, model: &dyn Cdf) -> Result<f64> {
    equidist::ks_distance(&report.alpha_sequence()?, model)
}
