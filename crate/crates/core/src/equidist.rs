//! Equidistribution diagnostics on finite samples.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{Cdf, NeumaierSum};
use crate::error::{Error, Result};
use crate::sequence::RealSequence;

/// Largest sample the discrepancy routines accept.
pub const MAX_DISCREPANCY_SAMPLES: usize = 100_000_000;

/// Fixed block size for partial Weyl sums; partial sums are combined in
/// block order, so the result does not depend on the thread count.
const WEYL_BLOCK: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylSumReport {
    pub k: i64,
    pub n: usize,
    /// Real part of `(1/N) Σ e^{2πik uₙ}`.
    pub sum_real: f64,
    pub sum_imag: f64,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub d_star: f64,
    pub et_bound: f64,
    pub et_cutoff: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples inside `[lo, hi]`; equals the sum of `counts`.
    pub total: u64,
    pub underflow: u64,
    pub overflow: u64,
}

/// `u = (t + 1)/2`, taking `[−1, 1]` onto `[0, 1]`.
pub fn map_to_unit(seq: &RealSequence) -> Result<RealSequence> {
    if seq.is_empty() {
        return Err(Error::pre("cannot map an empty sequence"));
    }
    let (lo, hi) = seq.range();
    if lo < -1.0 || hi > 1.0 {
        return Err(Error::pre(format!("range [{lo}, {hi}] is not inside [-1, 1]")));
    }
    let values = seq.values().iter().map(|&t| (t + 1.0) * 0.5).collect();
    RealSequence::new(
        values,
        seq.start_index(),
        (0.0, 1.0),
        format!("unit({})", seq.source_tag()),
    )
}

/// `(1/N) Σ e^{2πik uₙ}` with compensated block sums.
pub fn weyl_sum(seq: &RealSequence, k: i64) -> Result<WeylSumReport> {
    if k == 0 {
        return Err(Error::pre("frequency k must be nonzero"));
    }
    if seq.is_empty() {
        return Err(Error::pre("Weyl sum of an empty sequence"));
    }
    let kf = k as f64;
    let blocks: Vec<(NeumaierSum, NeumaierSum)> = seq
        .values()
        .par_chunks(WEYL_BLOCK)
        .map(|chunk| {
            let mut re = NeumaierSum::default();
            let mut im = NeumaierSum::default();
            for &u in chunk {
                let (s, c) = (TAU * (kf * u).rem_euclid(1.0)).sin_cos();
                re.add(c);
                im.add(s);
            }
            (re, im)
        })
        .collect();
    let (re, im) = pairwise_merge(blocks);
    let n = seq.len();
    let sum_real = re.value() / n as f64;
    let sum_imag = im.value() / n as f64;
    Ok(WeylSumReport {
        k,
        n,
        sum_real,
        sum_imag,
        modulus: sum_real.hypot(sum_imag).min(1.0),
    })
}

fn pairwise_merge(mut parts: Vec<(NeumaierSum, NeumaierSum)>) -> (NeumaierSum, NeumaierSum) {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|pair| {
                let mut a = pair[0];
                if let Some(b) = pair.get(1) {
                    a.0.merge(&b.0);
                    a.1.merge(&b.1);
                }
                a
            })
            .collect();
    }
    parts.pop().unwrap_or_default()
}

fn sorted_unit_samples(seq: &RealSequence) -> Result<Vec<f64>> {
    if seq.is_empty() {
        return Err(Error::pre("discrepancy of an empty sequence"));
    }
    if seq.len() > MAX_DISCREPANCY_SAMPLES {
        return Err(Error::Resource {
            what: "N",
            value: seq.len() as u64,
            ceiling: MAX_DISCREPANCY_SAMPLES as u64,
        });
    }
    if let Some(x) = seq.values().iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::pre(format!("sample {x} outside [0, 1]")));
    }
    let mut v = seq.values().to_vec();
    v.par_sort_by(f64::total_cmp);
    Ok(v)
}

/// Exact star discrepancy `max_i max(i/N − x₍ᵢ₎, x₍ᵢ₎ − (i−1)/N)`.
pub fn star_discrepancy(seq: &RealSequence) -> Result<f64> {
    let v = sorted_unit_samples(seq)?;
    Ok(sorted_ks(&v, |x| Ok(x))?.min(1.0))
}

/// `sup` of the sorted-sample formula against an arbitrary cdf.
fn sorted_ks(sorted: &[f64], cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        worst = worst.max(above).max(below);
    }
    Ok(worst)
}

/// `5 (1/(H+1) + Σ_{k≤H} (1/k) |(1/N) Σₙ e^{2πik xₙ}|)`.
pub fn erdos_turan_bound(seq: &RealSequence, cutoff: u32) -> Result<f64> {
    if cutoff == 0 {
        return Err(Error::pre("Erdős–Turán cutoff must be at least 1"));
    }
    let mut sum = NeumaierSum::default();
    for k in 1..=cutoff {
        sum.add(weyl_sum(seq, k as i64)?.modulus / k as f64);
    }
    Ok(5.0 * (1.0 / (cutoff as f64 + 1.0) + sum.value()))
}

pub fn discrepancy_report(seq: &RealSequence, cutoff: u32) -> Result<DiscrepancyReport> {
    Ok(DiscrepancyReport {
        n: seq.len(),
        d_star: star_discrepancy(seq)?,
        et_bound: erdos_turan_bound(seq, cutoff)?,
        et_cutoff: cutoff,
    })
}

/// Kolmogorov–Smirnov distance between the sample and `model`.
pub fn ks_distance(seq: &RealSequence, model: &dyn Cdf) -> Result<f64> {
    if seq.is_empty() {
        return Err(Error::pre("KS distance of an empty sequence"));
    }
    let (lo, hi) = model.domain();
    let mut v = seq.values().to_vec();
    if let Some(x) = v.iter().find(|x| !(lo..=hi).contains(*x)) {
        return Err(Error::pre(format!(
            "sample {x} outside the model domain [{lo}, {hi}]"
        )));
    }
    v.par_sort_by(f64::total_cmp);
    sorted_ks(&v, |x| model.cdf(x))
}

/// Empirical cdf of a sample, taking the midpoint of each jump.
#[derive(Clone, Debug)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(seq: &RealSequence) -> Self {
        let mut sorted = seq.values().to_vec();
        sorted.sort_by(f64::total_cmp);
        EmpiricalCdf { sorted }
    }
}

impl Cdf for EmpiricalCdf {
    fn cdf(&self, t: f64) -> Result<f64> {
        let below = self.sorted.partition_point(|&x| x < t);
        let upto = self.sorted.partition_point(|&x| x <= t);
        Ok((below + upto) as f64 / (2.0 * self.sorted.len() as f64))
    }

    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Equal-width bins over `[lo, hi]`, each left-closed except the last.
pub fn histogram(seq: &RealSequence, bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::pre("histogram needs at least one bin"));
    }
    if !(lo < hi) {
        return Err(Error::pre(format!("histogram range [{lo}, {hi}] is empty")));
    }
    let width = (hi - lo) / bins as f64;
    let bin_edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0u64; bins];
    let (mut underflow, mut overflow) = (0u64, 0u64);
    for &x in seq.values() {
        if x < lo {
            underflow += 1;
        } else if x > hi {
            overflow += 1;
        } else {
            let mut i = (((x - lo) / width) as usize).min(bins - 1);
            // Guard against rounding in the division near an edge.
            while i > 0 && x < bin_edges[i] {
                i -= 1;
            }
            while i + 1 < bins && x >= bin_edges[i + 1] {
                i += 1;
            }
            counts[i] += 1;
        }
    }
    Ok(Histogram {
        total: counts.iter().sum(),
        bin_edges,
        counts,
        underflow,
        overflow,
    })
}
