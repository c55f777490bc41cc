//! Integer polynomials and their roots.
//!
//! Roots come from Aberth–Ehrlich simultaneous iteration started on the
//! Cauchy-bound circle. Each root carries an inclusion radius
//! `d·|p(z)| / |∏_{j≠i}(z − z_j)|` (the disk around `z` of that radius
//! contains a true root whenever it does not meet the other disks), which
//! feeds the error bounds used for real-axis snapping, power sums, and the
//! certified length of mod-1 power sequences.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::RealSequence;

/// Iteration budget for the simultaneous root iteration.
pub const ROOT_ITERATIONS: usize = 200;

/// Relative residual every returned root must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Band around the unit circle within which a root counts as "on" it.
pub const UNIT_CIRCLE_TOLERANCE: f64 = 1e-9;

/// Absolute error budget for mod-1 power sequence samples.
pub const MOD1_ERROR_BUDGET: f64 = 1e-9;

/// Angular offset of the starting points, in radians.
const START_OFFSET: f64 = 0.4;

/// Exact polynomial with `i64` coefficients in ascending degree order.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
    roots: OnceLock<RootSet>,
}

impl TryFrom<Vec<i64>> for IntPolynomial {
    type Error = Error;
    fn try_from(coeffs: Vec<i64>) -> Result<Self> {
        IntPolynomial::new(coeffs)
    }
}

impl From<IntPolynomial> for Vec<i64> {
    fn from(p: IntPolynomial) -> Vec<i64> {
        p.coeffs
    }
}

impl PartialEq for IntPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for IntPolynomial {}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("IntPolynomial").field(&self.coeffs).finish()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.unsigned_abs();
            match (k, m) {
                (0, _) => write!(f, "{m}")?,
                (1, 1) => f.write_str("T")?,
                (1, _) => write!(f, "{m}T")?,
                (_, 1) => write!(f, "T^{k}")?,
                _ => write!(f, "{m}T^{k}")?,
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; the result must have degree ≥ 1.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::pre("polynomial must have degree at least 1"));
        }
        Ok(IntPolynomial {
            coeffs,
            roots: OnceLock::new(),
        })
    }

    /// Coefficients listed from the leading term down.
    pub fn from_descending(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("degree >= 1")
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// gcd of the coefficients.
    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    /// Coefficient list equals its reverse.
    pub fn is_self_reciprocal(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// `T^d p(1/T)`. Fails when the constant term is zero.
    pub fn reversed(&self) -> Result<Self> {
        Self::new(self.coeffs.iter().rev().copied().collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    /// Σ |a_k| |z|^k, the natural scale of a rounding error in `eval(z)`.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * r + (c as f64).abs())
    }

    /// Roots, computed once and cached.
    pub fn roots(&self) -> Result<&RootSet> {
        if let Some(r) = self.roots.get() {
            return Ok(r);
        }
        let r = find_roots(self)?;
        Ok(self.roots.get_or_init(|| r))
    }
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let q = rem[k + dd];
        quot[k] = q;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] = d
                .checked_mul(q)
                .and_then(|t| rem[k + j].checked_sub(t))
                .ok_or_else(|| Error::Numeric("coefficient overflow".into()))?;
        }
    }
    if rem.iter().any(|&r| r != 0) {
        return Err(Error::Numeric("inexact polynomial division".into()));
    }
    Ok(quot)
}

/// The `n`-th cyclotomic polynomial, `1 ≤ n ≤ 100`, by dividing `Tⁿ − 1`
/// by every `Φ_d` with `d | n`, `d < n`.
pub fn cyclotomic(n: u32) -> Result<IntPolynomial> {
    if !(1..=100).contains(&n) {
        return Err(Error::pre(format!("cyclotomic index {n} outside 1..=100")));
    }
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut table: Vec<(u32, Vec<i64>)> = Vec::with_capacity(divisors.len());
    for &m in &divisors {
        let mut c = vec![0i64; m as usize + 1];
        c[0] = -1;
        c[m as usize] = 1;
        for (d, phi) in &table {
            if m % d == 0 {
                c = poly_div_exact(&c, phi)?;
            }
        }
        table.push((m, c));
    }
    IntPolynomial::new(table.pop().expect("n is its own divisor").1)
}

/// Adds `c` to the constant coefficient.
pub fn shift_constant(poly: &IntPolynomial, c: i64) -> Result<IntPolynomial> {
    let mut coeffs = poly.coeffs.clone();
    coeffs[0] = coeffs[0]
        .checked_add(c)
        .ok_or_else(|| Error::Numeric("coefficient overflow".into()))?;
    IntPolynomial::new(coeffs)
}

/// All complex roots with their inclusion radii and conjugate pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    roots: Vec<Complex64>,
    radii: Vec<f64>,
    residual_bound: f64,
    /// `pairing[i] = Some(j)` when `roots[j]` is the conjugate of
    /// `roots[i]`; `None` for roots on the real axis.
    pairing: Vec<Option<usize>>,
}

impl RootSet {
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    pub fn pairing(&self) -> &[Option<usize>] {
        &self.pairing
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Roots with zero imaginary part, ascending.
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|z| z.im == 0.0)
            .map(|z| z.re)
            .collect()
    }

    /// Whether the inclusion disk of root `i` is disjoint from every other.
    pub fn is_isolated(&self, i: usize) -> bool {
        (0..self.roots.len()).all(|j| {
            j == i || (self.roots[i] - self.roots[j]).norm() > self.radii[i] + self.radii[j]
        })
    }
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(c[c.len() - 1], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c[..c.len() - 1].iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Per-root inclusion radii for the monic-normalized coefficients `c`.
fn inclusion_radii(c: &[f64], roots: &[Complex64]) -> Vec<f64> {
    let d = roots.len();
    let eps = f64::EPSILON;
    (0..d)
        .map(|i| {
            let z = roots[i];
            let (p, _) = horner_with_derivative(c, z);
            let scale = c.iter().rev().fold(0.0, |acc, &a| acc * z.norm() + a.abs());
            let p_abs = p.norm() + 2.0 * d as f64 * eps * scale;
            let prod: f64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z - roots[j]).norm())
                .product();
            if prod == 0.0 {
                f64::INFINITY
            } else {
                d as f64 * p_abs / prod
            }
        })
        .collect()
}

/// All complex roots of `poly`.
pub fn find_roots(poly: &IntPolynomial) -> Result<RootSet> {
    // Exact zero roots are split off: near 0 the relative residual of a
    // power of T is always 1, so the iteration cannot certify them.
    let zeros = poly.coeffs.iter().take_while(|&&a| a == 0).count();
    if zeros > 0 {
        let (mut z, mut r, bound) = if zeros == poly.degree() {
            (Vec::new(), Vec::new(), 0.0)
        } else {
            let rs = find_roots(&IntPolynomial::new(poly.coeffs[zeros..].to_vec())?)?;
            (rs.roots, rs.radii, rs.residual_bound)
        };
        z.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        r.extend(std::iter::repeat_n(0.0, zeros));
        let (roots, radii, pairing) = tidy_conjugates(z, r);
        return Ok(RootSet {
            roots,
            radii,
            residual_bound: bound,
            pairing,
        });
    }
    let d = poly.degree();
    let lead = poly.leading() as f64;
    let c: Vec<f64> = poly.coeffs.iter().map(|&a| a as f64 / lead).collect();
    let cauchy = 1.0 + c[..d].iter().fold(0.0f64, |m, a| m.max(a.abs()));

    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / d as f64 + START_OFFSET;
            Complex64::from_polar(cauchy, angle)
        })
        .collect();

    let relative_residual = |z: &[Complex64]| {
        z.iter()
            .map(|&zi| poly.eval(zi).norm() / poly.magnitude_scale(zi).max(f64::MIN_POSITIVE))
            .fold(0.0f64, f64::max)
    };

    let mut settled = 0;
    for _ in 0..ROOT_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (p, dp) = horner_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step <= 4.0 * f64::EPSILON {
            // A couple of extra sweeps once the steps stall.
            settled += 1;
            if settled >= 2 {
                break;
            }
        }
    }

    let radii = inclusion_radii(&c, &z);
    let (roots, radii, pairing) = tidy_conjugates(z, radii);

    let residual = relative_residual(&roots);
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::NonConvergence {
            best_residual: residual,
        });
    }
    let scale = roots
        .iter()
        .map(|&r| poly.magnitude_scale(r))
        .fold(1.0f64, f64::max);
    Ok(RootSet {
        roots,
        radii,
        residual_bound: RESIDUAL_TOLERANCE * scale,
        pairing,
    })
}

/// Snaps roots whose inclusion disk meets the real axis, pairs the rest
/// into exact conjugates, and sorts by (re, im).
fn tidy_conjugates(
    z: Vec<Complex64>,
    radii: Vec<f64>,
) -> (Vec<Complex64>, Vec<f64>, Vec<Option<usize>>) {
    let mut items: Vec<(Complex64, f64)> = z
        .into_iter()
        .zip(radii)
        .map(|(zi, r)| {
            if zi.im.abs() <= r {
                (Complex64::new(zi.re, 0.0), r)
            } else {
                (zi, r)
            }
        })
        .collect();

    let upper: Vec<usize> = (0..items.len()).filter(|&i| items[i].0.im > 0.0).collect();
    let mut lower: Vec<usize> = (0..items.len()).filter(|&i| items[i].0.im < 0.0).collect();
    let mut unmatched = Vec::new();
    for &u in &upper {
        let target = items[u].0.conj();
        let best = lower
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (items[*a.1].0 - target).norm();
                let db = (items[*b.1].0 - target).norm();
                da.total_cmp(&db)
            })
            .map(|(k, &l)| (k, l));
        match best {
            Some((k, l)) => {
                lower.swap_remove(k);
                let mean = (items[u].0 + items[l].0.conj()) * 0.5;
                let r = items[u].1.max(items[l].1);
                items[u] = (mean, r);
                items[l] = (mean.conj(), r);
            }
            None => unmatched.push(u),
        }
    }
    // Anything left without a partner sits on the real axis.
    for i in unmatched.into_iter().chain(lower) {
        items[i].0.im = 0.0;
    }

    items.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let roots: Vec<Complex64> = items.iter().map(|x| x.0).collect();
    let radii: Vec<f64> = items.iter().map(|x| x.1).collect();
    let pairing = (0..roots.len())
        .map(|i| {
            if roots[i].im == 0.0 {
                None
            } else {
                (0..roots.len()).find(|&j| j != i && roots[j] == roots[i].conj())
            }
        })
        .collect();
    (roots, radii, pairing)
}

/// Exact power sums `s_n = Σ αᵢⁿ`, `n = 0..=count`, by Newton's identities.
pub fn newton_power_sums(poly: &IntPolynomial, count: usize) -> Result<Vec<BigInt>> {
    if !poly.is_monic() {
        return Err(Error::pre("power sums need a monic polynomial"));
    }
    let d = poly.degree();
    // p(T) = T^d + c_{d-1}T^{d-1} + … + c_0; write b_i = c_{d-i}.
    let b: Vec<BigInt> = (0..=d).map(|i| BigInt::from(poly.coeffs[d - i])).collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(count + 1);
    s.push(BigInt::from(d));
    for n in 1..=count {
        let mut acc = BigInt::from(0);
        for i in 1..=n.min(d) {
            if i < n {
                acc -= &b[i] * &s[n - i];
            } else {
                acc -= &b[i] * BigInt::from(n);
            }
        }
        s.push(acc);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SalemReason {
    NotMonic,
    DegreeLt4,
    OddDegree,
    NoRealRootGt1,
    ConjugateOutsideDisk,
    NoConjugateOnCircle,
    RootFailure,
}

impl fmt::Display for SalemReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalemVerdict {
    pub is_salem: bool,
    pub tau: Option<f64>,
    pub reasons: Vec<SalemReason>,
    /// Real root > 1 with every other conjugate in the closed unit disk,
    /// without requiring one on the circle (this admits Pisot numbers).
    pub passes_without_circle_condition: bool,
    pub self_reciprocal: bool,
    /// Irreducibility is never checked; the caller vouches for it.
    pub irreducibility_assumed: bool,
}

/// Classifies the dominant root of a monic polynomial as Salem or not.
pub fn salem_classify(poly: &IntPolynomial) -> SalemVerdict {
    let d = poly.degree();
    let self_reciprocal = poly.is_self_reciprocal();
    let mut reasons = Vec::new();
    let monic = poly.is_monic();
    if !monic {
        reasons.push(SalemReason::NotMonic);
    }
    if d < 4 {
        reasons.push(SalemReason::DegreeLt4);
    }
    if d % 2 == 1 {
        reasons.push(SalemReason::OddDegree);
    }
    let verdict = |reasons: Vec<SalemReason>, tau, loose| SalemVerdict {
        is_salem: reasons.is_empty(),
        tau,
        reasons,
        passes_without_circle_condition: loose,
        self_reciprocal,
        irreducibility_assumed: true,
    };
    let roots = match poly.roots() {
        Ok(r) => r,
        Err(_) => {
            reasons.push(SalemReason::RootFailure);
            return verdict(reasons, None, false);
        }
    };
    let tau_idx = (0..roots.len())
        .filter(|&i| roots.roots[i].im == 0.0 && roots.roots[i].re > 1.0 + UNIT_CIRCLE_TOLERANCE)
        .max_by(|&i, &j| roots.roots[i].re.total_cmp(&roots.roots[j].re));
    let Some(tau_idx) = tau_idx else {
        reasons.push(SalemReason::NoRealRootGt1);
        let outside = roots
            .roots
            .iter()
            .any(|z| z.norm() > 1.0 + UNIT_CIRCLE_TOLERANCE);
        if outside {
            reasons.push(SalemReason::ConjugateOutsideDisk);
        }
        return verdict(reasons, None, false);
    };
    let tau = roots.roots[tau_idx].re;
    let others = || {
        roots
            .roots
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != tau_idx)
            .map(|(_, z)| z.norm())
    };
    let in_disk = others().all(|m| m <= 1.0 + UNIT_CIRCLE_TOLERANCE);
    if !in_disk {
        reasons.push(SalemReason::ConjugateOutsideDisk);
    }
    // A palindromic polynomial pairs every root with its reciprocal, so once
    // the others sit in the closed disk all but 1/τ lie on the circle.
    let on_circle = (self_reciprocal && d >= 4)
        || others().any(|m| (m - 1.0).abs() <= UNIT_CIRCLE_TOLERANCE);
    if !on_circle {
        reasons.push(SalemReason::NoConjugateOnCircle);
    }
    let loose = monic && d >= 4 && d % 2 == 0 && in_disk;
    verdict(reasons, Some(tau), loose)
}

/// `frac(αⁿ)` for the dominant real root α, with the length up to which
/// every sample is within [`MOD1_ERROR_BUDGET`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mod1Sequence {
    pub sequence: RealSequence,
    pub requested: usize,
    pub certified: usize,
    pub dominant_root: f64,
}

/// `frac(αⁿ)` for `n = 1..=count`, where α is the unique real root of
/// largest modulus (required to exceed 1).
///
/// The power sum `s_n = Σ αᵢⁿ` is an integer, so `αⁿ ≡ −Σ_{i≠0} αᵢⁿ (mod 1)`;
/// only the bounded conjugate powers are evaluated in floating point.
pub fn power_mod1_sequence(poly: &IntPolynomial, count: usize) -> Result<Mod1Sequence> {
    if !poly.is_monic() {
        return Err(Error::pre("mod-1 power sequence needs a monic polynomial"));
    }
    if count == 0 {
        return Err(Error::pre("sequence length must be at least 1"));
    }
    let rs = poly.roots()?;
    let dom = (0..rs.len())
        .max_by(|&i, &j| rs.roots[i].norm().total_cmp(&rs.roots[j].norm()))
        .expect("degree >= 1");
    let alpha = rs.roots[dom];
    let dominant_ok = alpha.im == 0.0
        && alpha.norm() - rs.radii[dom] > 1.0
        && (0..rs.len()).all(|j| {
            j == dom || rs.roots[j].norm() + rs.radii[j] < alpha.norm() - rs.radii[dom]
        });
    if !dominant_ok {
        return Err(Error::pre(format!(
            "{poly} has no unique dominant real root of modulus > 1"
        )));
    }

    let others: Vec<(Complex64, f64)> = (0..rs.len())
        .filter(|&j| j != dom)
        .map(|j| (rs.roots[j], rs.radii[j]))
        .collect();
    let eps = f64::EPSILON;
    let mut powers: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); others.len()];
    let mut values = Vec::with_capacity(count);
    for n in 1..=count {
        let mut c = 0.0;
        let mut err = eps;
        for (k, &(z, r)) in others.iter().enumerate() {
            powers[k] *= z;
            c += powers[k].re;
            let nf = n as f64;
            // Root uncertainty propagated through the n-th power, plus the
            // rounding of n successive complex products.
            err += nf * (z.norm() + r).powf(nf - 1.0) * r + 4.0 * (nf + 1.0) * eps * z.norm().powf(nf);
        }
        if err >= MOD1_ERROR_BUDGET {
            break;
        }
        let mut v = (-c).rem_euclid(1.0);
        if v >= 1.0 {
            v = 0.0;
        }
        values.push(v);
    }
    let certified = values.len();
    if certified == 0 {
        return Err(Error::Numeric(
            "no mod-1 sample can be certified within the error budget".into(),
        ));
    }
    Ok(Mod1Sequence {
        sequence: RealSequence::new(values, 1, (0.0, 1.0), format!("frac(alpha^n) for {poly}"))?,
        requested: count,
        certified,
        dominant_root: alpha.re,
    })
}
