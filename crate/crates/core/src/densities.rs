//! Reference laws on `[−1, 1]` and the Bessel function `J₀`.
//!
//! The generalized arcsine family is parameterized by its scale `s`:
//! `f(z) = 1 / (2 s asin(1/s) √(1 − (z/s)²))` on `[−1, 1]`. A degree-`d`
//! Salem polynomial uses `s = d − 1`; `s = 1` is the plain arcsine law.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything with a cumulative distribution function on a closed interval.
pub trait Cdf {
    fn cdf(&self, t: f64) -> Result<f64>;
    fn domain(&self) -> (f64, f64);
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionModel {
    Uniform { lo: f64, hi: f64 },
    Arcsine,
    GenArcsine { scale: f64 },
    Semicircle,
    /// Mass ½ at 0 plus ½ of the arcsine law.
    CmMixture,
}

impl DistributionModel {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::pre(format!("uniform law needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(DistributionModel::Uniform { lo, hi })
    }

    /// Generalized arcsine approximation for a Salem number of degree `d`
    /// (even, at least 4): scale `d − 1`.
    pub fn gen_arcsine(d: u32) -> Result<Self> {
        if d < 4 || d % 2 == 1 {
            return Err(Error::pre(format!("degree {d} must be even and at least 4")));
        }
        Ok(DistributionModel::GenArcsine { scale: (d - 1) as f64 })
    }

    /// Generalized arcsine with an explicit scale `s ≥ 1`.
    pub fn gen_arcsine_scaled(scale: f64) -> Result<Self> {
        if !(scale >= 1.0) || !scale.is_finite() {
            return Err(Error::pre(format!("scale {scale} must be at least 1")));
        }
        Ok(DistributionModel::GenArcsine { scale })
    }

    pub fn name(&self) -> String {
        match self {
            DistributionModel::Uniform { lo, hi } => format!("uniform[{lo},{hi}]"),
            DistributionModel::Arcsine => "arcsine".into(),
            DistributionModel::GenArcsine { scale } => format!("gen-arcsine(scale={scale})"),
            DistributionModel::Semicircle => "semicircle".into(),
            DistributionModel::CmMixture => "cm-mixture".into(),
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let (lo, hi) = Cdf::domain(self);
        if t.is_nan() || t < lo || t > hi {
            return Err(Error::pre(format!("{t} outside the domain [{lo}, {hi}] of {}", self.name())));
        }
        Ok(())
    }

    /// Density of the continuous part.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        match *self {
            DistributionModel::Uniform { lo, hi } => Ok(1.0 / (hi - lo)),
            DistributionModel::Arcsine => arcsine_pdf(t),
            DistributionModel::GenArcsine { scale } => {
                if scale == 1.0 {
                    return arcsine_pdf(t);
                }
                let u = t / scale;
                Ok(1.0 / (gen_arcsine_norm(scale) * (1.0 - u * u).sqrt()))
            }
            DistributionModel::Semicircle => Ok(2.0 * FRAC_1_PI * (1.0 - t * t).max(0.0).sqrt()),
            DistributionModel::CmMixture => {
                if t == 0.0 {
                    return Err(Error::pre("cm-mixture has an atom at 0; no density there"));
                }
                Ok(0.5 * arcsine_pdf(t)?)
            }
        }
    }

    /// `P(X < t)`; differs from [`cdf`](Cdf::cdf) only at an atom.
    pub fn cdf_left(&self, t: f64) -> Result<f64> {
        match self {
            DistributionModel::CmMixture if t == 0.0 => Ok(0.25),
            _ => self.cdf(t),
        }
    }

    /// `P(a ≤ X ≤ b)`.
    pub fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if a > b {
            return Err(Error::pre(format!("empty interval [{a}, {b}]")));
        }
        Ok(self.cdf(b)? - self.cdf_left(a)?)
    }

    /// `t` with `cdf(t) = q`, for the continuous laws.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::pre(format!("quantile level {q} outside [0, 1]")));
        }
        match *self {
            DistributionModel::Uniform { lo, hi } => Ok(lo + q * (hi - lo)),
            DistributionModel::Arcsine => Ok((PI * (q - 0.5)).sin()),
            DistributionModel::GenArcsine { scale } => {
                Ok(scale * ((2.0 * q - 1.0) * (1.0 / scale).asin()).sin())
            }
            _ => {
                // Bisection on the monotone cdf.
                let (mut lo, mut hi) = (-1.0f64, 1.0f64);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid)? < q {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }
}

fn arcsine_pdf(t: f64) -> Result<f64> {
    if t.abs() >= 1.0 {
        return Err(Error::pre(format!("arcsine density has a pole at {t}")));
    }
    Ok(FRAC_1_PI / (1.0 - t * t).sqrt())
}

/// `2 s asin(1/s)`, the integral of `1/√(1 − (z/s)²)` over `[−1, 1]`.
fn gen_arcsine_norm(scale: f64) -> f64 {
    2.0 * scale * (1.0 / scale).asin()
}

fn arcsine_cdf(t: f64) -> f64 {
    0.5 + t.clamp(-1.0, 1.0).asin() * FRAC_1_PI
}

impl Cdf for DistributionModel {
    fn domain(&self) -> (f64, f64) {
        match *self {
            DistributionModel::Uniform { lo, hi } => (lo, hi),
            _ => (-1.0, 1.0),
        }
    }

    fn cdf(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(match *self {
            DistributionModel::Uniform { lo, hi } => (t - lo) / (hi - lo),
            DistributionModel::Arcsine => arcsine_cdf(t),
            DistributionModel::GenArcsine { scale } => {
                0.5 + (t / scale).asin() / (2.0 * (1.0 / scale).asin())
            }
            DistributionModel::Semicircle => {
                0.5 + (t * (1.0 - t * t).max(0.0).sqrt() + t.asin()) * FRAC_1_PI
            }
            DistributionModel::CmMixture => {
                let jump = if t >= 0.0 { 0.5 } else { 0.0 };
                0.5 * arcsine_cdf(t) + jump
            }
        }
        .clamp(0.0, 1.0))
    }
}

/// `f_d(z) = 1 / (2(d−1) asin(1/(d−1)) √(1 − (z/(d−1))²))`; tends to ½ as
/// `d` grows.
pub fn gen_arcsine_limit_check(d: u32, z: f64) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(Error::pre(format!("|z| = {} exceeds 1", z.abs())));
    }
    DistributionModel::gen_arcsine(d)?.pdf(z)
}

/// Above this argument `J₀` switches from its Maclaurin series to the
/// Hankel asymptotic expansion.
pub const BESSEL_SEAM: f64 = 12.0;

const BESSEL_MAX_ARG: f64 = 1e6;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Numeric(format!("J0 argument {z} is not finite")));
    }
    let x = z.abs();
    if x > BESSEL_MAX_ARG {
        return Err(Error::pre(format!("|z| = {x} exceeds {BESSEL_MAX_ARG:e}")));
    }
    Ok(if x <= BESSEL_SEAM {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    })
}

/// Σ (−1)^m (x/2)^{2m} / (m!)², compensated.
pub(crate) fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = NeumaierSum::default();
    sum.add(term);
    let mut m = 1.0;
    while term.abs() > 1e-18 || m < 4.0 {
        term *= -q / (m * m);
        sum.add(term);
        m += 1.0;
    }
    sum.value()
}

/// Hankel expansion `√(2/πx) (P cos χ − Q sin χ)`, χ = x − π/4, summed
/// until the terms stop shrinking.
pub(crate) fn j0_asymptotic(x: f64) -> f64 {
    let mut p = 0.0;
    let mut q = 0.0;
    let mut b = 1.0f64;
    let mut k = 0u32;
    loop {
        match k % 4 {
            0 => p += b,
            1 => q -= b,
            2 => p -= b,
            _ => q += b,
        }
        let odd = (2 * k + 1) as f64;
        let next = b * odd * odd / ((k + 1) as f64 * 8.0 * x);
        if next >= b || next < 1e-17 {
            break;
        }
        b = next;
        k += 1;
    }
    let (s, c) = x.sin_cos();
    // cos(x − π/4) = (cos x + sin x)/√2, sin(x − π/4) = (sin x − cos x)/√2
    let cos_chi = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let sin_chi = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J₀(2π|k|)`, the mean of `e^{2πik cos(nθ)}` for an irrational angle.
pub fn weyl_limit(k: i64) -> Result<f64> {
    if k == 0 {
        return Err(Error::pre("frequency k must be nonzero"));
    }
    bessel_j0(std::f64::consts::TAU * k.unsigned_abs() as f64)
}

/// Main term `J₀(2πk) · x` of `Σ_{n ≤ x} e^{−2πik cos(nθ)}`.
pub fn summatory_prediction(k: i64, x: u64) -> Result<f64> {
    Ok(weyl_limit(k)? * x as f64)
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Adds another partial sum, keeping both compensation terms.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
