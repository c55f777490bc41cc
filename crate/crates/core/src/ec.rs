//! Elliptic curves `y² = x³ + Ax + B` reduced modulo primes `p > 3`:
//! brute-force point counts, the trace recurrence over `F_{p^n}`, the
//! Frobenius angle, and the normalized power sequence `αₙ = cos(nθ)`.
//!
//! Traces follow `a₁ = p + 1 − #E(F_p)`. The raw character sum
//! `Σ χ(x³ + Ax + B)` is the negative of that and is reported alongside it;
//! every distribution statement downstream is invariant under `a₁ → −a₁`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hiprec::{self, cos_turn, Fixed, TurnFraction};
use crate::sequence::RealSequence;

/// Largest prime `count_points` will enumerate by default.
pub const DEFAULT_PRIME_CEILING: u64 = 1 << 26;

/// Longest sequence the generators will materialize by default.
pub const DEFAULT_SEQUENCE_CEILING: usize = 100_000_000;

/// Fractional bits kept for θ by default.
pub const DEFAULT_ANGLE_BITS: u32 = 256;

/// Minimum accepted angle precision.
pub const MIN_ANGLE_BITS: u32 = 160;

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if p <= 3 {
        return Err(Error::pre(format!("p = {p}: characteristic must exceed 3")));
    }
    if !is_prime(p) {
        return Err(Error::pre(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Short Weierstrass model `y² = x³ + Ax + B` over ℚ, nonsingular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct CurveSpec {
    a: i64,
    b: i64,
}

#[derive(Deserialize)]
struct RawCurve {
    a: i64,
    b: i64,
}

impl TryFrom<RawCurve> for CurveSpec {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        CurveSpec::new(raw.a, raw.b)
    }
}

impl CurveSpec {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let c = CurveSpec { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::pre(format!(
                "y^2 = x^3 + {a}x + {b} is singular (discriminant 0)"
            )));
        }
        Ok(c)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Δ = −16(4A³ + 27B²).
    pub fn discriminant(&self) -> BigInt {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        let inner = BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b;
        inner * -16
    }

    /// Whether the model stays nonsingular mod `p`. Tested through Δ mod p,
    /// which can misjudge non-minimal models; no conductor is computed.
    pub fn good_reduction(&self, p: u64) -> Result<bool> {
        check_prime(p)?;
        Ok(!(self.discriminant() % BigInt::from(p)).is_zero())
    }

    fn reduced(&self, p: u64) -> (u64, u64) {
        let m = p as i128;
        (
            (self.a as i128).rem_euclid(m) as u64,
            (self.b as i128).rem_euclid(m) as u64,
        )
    }

    /// Evaluates `x³ + Ax + B mod p` for reduced coefficients.
    #[inline]
    fn rhs(a: u64, b: u64, x: u64, p: u64) -> u64 {
        let x2 = x * x % p;
        ((x2 * x) % p + a * x % p + b) % p
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// `#E(F_p)` together with the trace and the raw quadratic-character sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub p: u64,
    pub count: u64,
    pub trace: i64,
    /// Σ_{x mod p} χ(x³ + Ax + B), equal to `−trace`.
    pub character_sum: i64,
}

impl PointCount {
    pub fn satisfies_hasse(&self) -> bool {
        within_hasse(self.trace, self.p)
    }
}

/// `a² ≤ 4p`, i.e. `|a| ≤ 2√p`.
pub fn within_hasse(a1: i64, p: u64) -> bool {
    (a1 as i128) * (a1 as i128) <= 4 * p as i128
}

fn check_hasse(a1: i64, p: u64) -> Result<()> {
    if within_hasse(a1, p) {
        Ok(())
    } else {
        Err(Error::HasseViolation { a1, p })
    }
}

/// Counts points by tabulating square roots mod `p` and summing over `x`.
pub fn count_points(curve: &CurveSpec, p: u64) -> Result<PointCount> {
    count_points_with_ceiling(curve, p, DEFAULT_PRIME_CEILING)
}

pub fn count_points_with_ceiling(curve: &CurveSpec, p: u64, ceiling: u64) -> Result<PointCount> {
    check_prime(p)?;
    if p > ceiling {
        return Err(Error::Resource {
            what: "p",
            value: p,
            ceiling,
        });
    }
    if !curve.good_reduction(p)? {
        return Err(Error::BadReduction {
            a: curve.a,
            b: curve.b,
            p,
        });
    }
    let pu = p as usize;
    // roots[v] = number of y with y² ≡ v.
    let mut roots = vec![0u8; pu];
    roots[0] = 1;
    let mut sq = 0u64;
    for y in 1..=(p - 1) / 2 {
        // (y)² = (y−1)² + 2y − 1
        sq = (sq + 2 * y - 1) % p;
        roots[sq as usize] = 2;
    }
    let (a, b) = curve.reduced(p);
    let mut affine: u64 = 0;
    for x in 0..p {
        affine += roots[CurveSpec::rhs(a, b, x, p) as usize] as u64;
    }
    let count = affine + 1;
    let trace = p as i64 + 1 - count as i64;
    Ok(PointCount {
        p,
        count,
        trace,
        character_sum: affine as i64 - p as i64,
    })
}

/// `aₙ = τⁿ + τ̄ⁿ` from `a₀ = 2`, `a₁`, and `aₙ = a₁aₙ₋₁ − p·aₙ₋₂`.
pub fn trace_power(a1: i64, p: u64, n: u32) -> Result<BigInt> {
    Ok(trace_powers(a1, p, n)?.pop().expect("non-empty"))
}

/// `[a₀, a₁, …, a_n]`.
pub fn trace_powers(a1: i64, p: u64, n: u32) -> Result<Vec<BigInt>> {
    check_hasse(a1, p)?;
    let t = BigInt::from(a1);
    let q = BigInt::from(p);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BigInt::from(2));
    if n >= 1 {
        out.push(t.clone());
    }
    for k in 2..=n as usize {
        let next = &t * &out[k - 1] - &q * &out[k - 2];
        out.push(next);
    }
    Ok(out)
}

/// `a₁ = 0`, the supersingular case for `p ≥ 5`.
pub fn is_supersingular_trace(a1: i64, _p: u64) -> bool {
    a1 == 0
}

/// θ = arccos(a₁ / 2√p) ∈ [0, π], held in binary fixed point, plus the
/// 192-bit turn `θ / 2π` used to reduce `nθ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusAngle {
    a1: i64,
    p: u64,
    theta: Fixed,
    err_bound: f64,
    turn: TurnFraction,
}

pub fn frobenius_angle(a1: i64, p: u64) -> Result<FrobeniusAngle> {
    frobenius_angle_with_bits(a1, p, DEFAULT_ANGLE_BITS)
}

pub fn frobenius_angle_with_bits(a1: i64, p: u64, bits: u32) -> Result<FrobeniusAngle> {
    check_prime(p)?;
    check_hasse(a1, p)?;
    if bits < MIN_ANGLE_BITS {
        return Err(Error::pre(format!(
            "angle precision {bits} bits is below the minimum {MIN_ANGLE_BITS}"
        )));
    }
    let work = bits.max(192) + 64;
    // θ = atan2(√(4p − a₁²), a₁); both legs are exact integers up to the sqrt.
    let leg = 4 * p as i128 - (a1 as i128) * (a1 as i128);
    let y = Fixed::from_int(leg, work).sqrt();
    let x = Fixed::from_int(a1, work);
    let theta_w = hiprec::atan2(&y, &x);
    let turn = if a1 == 0 {
        TurnFraction::from_parts(TurnFraction::QUARTER, 0)
    } else {
        TurnFraction::from_fixed(&theta_w.div(&hiprec::pi(work).shl(1)))
    };
    Ok(FrobeniusAngle {
        a1,
        p,
        theta: theta_w.with_bits(bits),
        // Working error is a few ulps at `work` bits; the final truncation
        // contributes one ulp at `bits`.
        err_bound: 2f64.powi(-(bits as i32 - 1)),
        turn,
    })
}

impl FrobeniusAngle {
    pub fn a1(&self) -> i64 {
        self.a1
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn theta(&self) -> &Fixed {
        &self.theta
    }

    pub fn theta_f64(&self) -> f64 {
        self.theta.to_f64()
    }

    pub fn err_bound(&self) -> f64 {
        self.err_bound
    }

    pub fn turn(&self) -> TurnFraction {
        self.turn
    }

    pub fn is_supersingular(&self) -> bool {
        self.a1 == 0
    }

    /// `cos(nθ)`, reducing `nθ` modulo 2π through the stored turn.
    #[inline]
    pub fn cos_multiple(&self, n: u64) -> f64 {
        cos_turn(self.turn.multiple(n))
    }
}

/// `αₙ = cos(nθ)` for `n = 1..=len`.
pub fn normalized_trace_sequence(angle: &FrobeniusAngle, len: usize) -> Result<RealSequence> {
    normalized_trace_sequence_with_ceiling(angle, len, DEFAULT_SEQUENCE_CEILING)
}

pub fn normalized_trace_sequence_with_ceiling(
    angle: &FrobeniusAngle,
    len: usize,
    ceiling: usize,
) -> Result<RealSequence> {
    if len == 0 {
        return Err(Error::pre("sequence length must be at least 1"));
    }
    if len > ceiling {
        return Err(Error::Resource {
            what: "N",
            value: len as u64,
            ceiling: ceiling as u64,
        });
    }
    let values = (1..=len as u64).map(|n| angle.cos_multiple(n)).collect();
    RealSequence::new(
        values,
        1,
        (-1.0, 1.0),
        format!("alpha_n a1={} p={}", angle.a1, angle.p),
    )
}

/// `aₙ / (2 p^{n/2})` evaluated from the exact integer `aₙ` in fixed point.
pub fn normalized_from_exact(a_n: &BigInt, p: u64, n: u32, bits: u32) -> f64 {
    let half = BigInt::from(p).pow(n / 2);
    let mut den = Fixed::from_int(half * 2, bits);
    if n % 2 == 1 {
        den = den.mul(&Fixed::from_int(p, bits).sqrt());
    }
    let sign = if a_n.is_negative() { -1.0 } else { 1.0 };
    sign * Fixed::from_int(a_n.abs(), bits).div(&den).to_f64()
}
