//! Binary fixed-point reals on top of `BigInt`, sized for the handful of
//! transcendental constants the crate needs at a few hundred bits: π,
//! `atan`, and the Frobenius angle. Also holds [`TurnFraction`], the
//! 192-bit representation of `θ / 2π` that drives argument reduction of
//! `nθ` for sequence generation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guard bits carried by the transcendental routines on top of the
/// requested precision.
const GUARD_BITS: u32 = 48;

/// A real number `mant / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { mant: BigInt::zero(), bits }
    }

    pub fn from_int(v: impl Into<BigInt>, bits: u32) -> Self {
        Fixed { mant: v.into() << bits, bits }
    }

    /// `num / den`, truncated toward zero.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, bits: u32) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Fixed { mant: (num.into() << bits) / den, bits }
    }

    pub fn from_mantissa(mant: BigInt, bits: u32) -> Self {
        Fixed { mant, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Re-expresses the value with a different number of fractional bits
    /// (truncating toward −∞ when narrowing).
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => &self.mant >> (self.bits - bits),
        };
        Fixed { mant, bits }
    }

    fn check(&self, other: &Fixed) {
        assert_eq!(self.bits, other.bits, "mixed fixed-point precisions");
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: &self.mant + &other.mant, bits: self.bits }
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: &self.mant - &other.mant, bits: self.bits }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { mant: -&self.mant, bits: self.bits }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: (&self.mant * &other.mant) >> self.bits, bits: self.bits }
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        self.check(other);
        assert!(!other.mant.is_zero(), "fixed-point division by zero");
        Fixed { mant: (&self.mant << self.bits) / &other.mant, bits: self.bits }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Fixed {
        Fixed { mant: &self.mant * k.into(), bits: self.bits }
    }

    pub fn div_int(&self, k: impl Into<BigInt>) -> Fixed {
        Fixed { mant: &self.mant / k.into(), bits: self.bits }
    }

    pub fn shl(&self, k: u32) -> Fixed {
        Fixed { mant: &self.mant << k, bits: self.bits }
    }

    pub fn shr(&self, k: u32) -> Fixed {
        Fixed { mant: &self.mant >> k, bits: self.bits }
    }

    /// Floor of the square root. Panics on negative input.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.is_negative(), "sqrt of negative fixed-point value");
        let scaled = &self.mant << self.bits;
        Fixed { mant: scaled.sqrt(), bits: self.bits }
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        &self.mant >> self.bits
    }

    /// Nearest `f64` (one rounding from the mantissa conversion).
    pub fn to_f64(&self) -> f64 {
        // Trim the mantissa first so the conversion never overflows.
        let excess = self.mant.bits().saturating_sub(64) as u32;
        let shift = excess.min(self.bits);
        let m = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(-((self.bits - shift) as i32))
    }

    /// Decimal expansion truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.is_negative();
        let m = self.mant.abs();
        let int = &m >> self.bits;
        let mut frac = m - (&int << self.bits);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int.to_string());
        out.push('.');
        for _ in 0..digits {
            frac *= 10u32;
            let d = &frac >> self.bits;
            frac -= &d << self.bits;
            out.push_str(&d.to_string());
        }
        out
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.bits as f64 * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal(f.precision().unwrap_or(digits)))
    }
}

/// Σ (−1)^k / ((2k+1) m^(2k+1)) scaled by 2^bits, i.e. atan(1/m).
fn atan_inv_int(m: u32, bits: u32) -> BigInt {
    let m2 = BigInt::from(m) * m;
    let mut power = (BigInt::one() << bits) / m;
    let mut sum = BigInt::zero();
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &m2;
        k += 1;
    }
    sum
}

/// π to `bits` fractional bits (Machin's formula).
pub fn pi(bits: u32) -> Fixed {
    let w = bits + GUARD_BITS;
    let mant = atan_inv_int(5, w) * 16 - atan_inv_int(239, w) * 4;
    Fixed { mant, bits: w }.with_bits(bits)
}

/// Arctangent of an arbitrary fixed-point value.
pub fn atan(x: &Fixed) -> Fixed {
    let bits = x.bits;
    let w = bits + GUARD_BITS;
    let xw = x.with_bits(w);
    atan_working(&xw).with_bits(bits)
}

fn atan_working(x: &Fixed) -> Fixed {
    let w = x.bits;
    if x.is_negative() {
        return atan_working(&x.neg()).neg();
    }
    let one = Fixed::from_int(1, w);
    if x.mant > one.mant {
        // atan(x) = π/2 − atan(1/x)
        let inv = one.div(x);
        return pi(w).shr(1).sub(&atan_working(&inv));
    }
    // Halve the argument eight times: atan(x) = 2 atan(x / (1 + sqrt(1 + x²))).
    const HALVINGS: u32 = 8;
    let mut y = x.clone();
    for _ in 0..HALVINGS {
        let r = one.add(&y.mul(&y)).sqrt();
        y = y.div(&one.add(&r));
    }
    let y2 = y.mul(&y);
    let mut power = y.clone();
    let mut sum = Fixed::zero(w);
    let mut k: u32 = 0;
    while !power.is_zero() {
        let term = power.div_int(2 * k + 1);
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(&y2);
        k += 1;
    }
    sum.shl(HALVINGS)
}

/// Angle of the point `(x, y)` in `(−π, π]`.
pub fn atan2(y: &Fixed, x: &Fixed) -> Fixed {
    let bits = y.bits;
    y.check(x);
    if x.is_zero() {
        return match y.mant.sign() {
            Sign::Minus => pi(bits).shr(1).neg(),
            Sign::NoSign => Fixed::zero(bits),
            Sign::Plus => pi(bits).shr(1),
        };
    }
    let w = bits + GUARD_BITS;
    let (yw, xw) = (y.with_bits(w), x.with_bits(w));
    let base = atan_working(&yw.div(&xw).abs());
    let p = pi(w);
    let angle = match (xw.is_negative(), yw.is_negative()) {
        (false, false) => base,
        (false, true) => base.neg(),
        (true, false) => p.sub(&base),
        (true, true) => base.sub(&p),
    };
    angle.with_bits(bits)
}

/// A point on the circle `ℝ/ℤ` stored as a 192-bit binary fraction
/// `(hi · 2^64 + lo) / 2^192`.
///
/// Integer multiples `n · t mod 1` are exact modulo the storage
/// truncation, so the reduction error of `nθ` grows only as `n · 2^-192`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TurnFraction {
    hi: u128,
    lo: u64,
}

impl TurnFraction {
    pub const QUARTER: u128 = 1 << 126;
    pub const HALF: u128 = 1 << 127;

    pub fn from_parts(hi: u128, lo: u64) -> Self {
        TurnFraction { hi, lo }
    }

    /// Reduces a fixed-point value mod 1 and keeps the top 192 bits.
    pub fn from_fixed(x: &Fixed) -> Self {
        let x = x.with_bits(x.bits.max(192));
        let one = BigInt::one() << x.bits;
        let mut m = x.mant.clone() % &one;
        if m.is_negative() {
            m += &one;
        }
        let m = m >> (x.bits - 192);
        let m: BigUint = m.to_biguint().expect("non-negative after reduction");
        let digits = m.to_u64_digits();
        let limb = |i: usize| digits.get(i).copied().unwrap_or(0);
        TurnFraction {
            hi: ((limb(2) as u128) << 64) | limb(1) as u128,
            lo: limb(0),
        }
    }

    /// Golden-ratio rotation `frac(φ)` with φ = (1 + √5)/2.
    pub fn golden() -> Self {
        let five = Fixed::from_int(5, 256);
        let phi = Fixed::from_int(1, 256).add(&five.sqrt()).shr(1);
        Self::from_fixed(&phi)
    }

    /// Top 128 bits of `n · self mod 1`.
    #[inline]
    pub fn multiple(&self, n: u64) -> u128 {
        let carry = ((self.lo as u128) * (n as u128)) >> 64;
        self.hi.wrapping_mul(n as u128).wrapping_add(carry)
    }

    pub fn to_f64(&self) -> f64 {
        turn_to_f64(self.hi)
    }
}

/// A 128-bit turn as a fraction in `[0, 1)`.
#[inline]
pub fn turn_to_f64(t: u128) -> f64 {
    t as f64 * 2f64.powi(-128)
}

/// `cos(2π t)` for a 128-bit turn. The multiples of a quarter turn come
/// out exact.
#[inline]
pub fn cos_turn(t: u128) -> f64 {
    // cos is even: fold onto [0, 1/2].
    let t = if t > TurnFraction::HALF { t.wrapping_neg() } else { t };
    match t {
        0 => 1.0,
        TurnFraction::QUARTER => 0.0,
        TurnFraction::HALF => -1.0,
        _ => (std::f64::consts::TAU * turn_to_f64(t)).cos(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

    #[test]
    fn pi_digits() {
        assert_eq!(pi(256).to_decimal(50), PI_50);
        assert_eq!(pi(64).to_f64(), std::f64::consts::PI);
    }

    #[test]
    fn atan_of_one_is_quarter_pi() {
        let q = atan(&Fixed::from_int(1, 200));
        let diff = q.sub(&pi(200).shr(2)).abs();
        assert!(diff.mantissa() < &BigInt::from(1u32 << 8));
    }

    #[test]
    fn atan_matches_f64() {
        for &(n, d) in &[(1, 3), (-7, 2), (22, 7), (1, 1000), (-1000, 1)] {
            let x = Fixed::from_ratio(n, d, 128);
            let got = atan(&x).to_f64();
            let want = (n as f64 / d as f64).atan();
            assert!((got - want).abs() < 1e-15, "{n}/{d}: {got} vs {want}");
        }
    }

    #[test]
    fn atan2_quadrants() {
        let b = 128;
        let one = Fixed::from_int(1, b);
        let m1 = one.neg();
        let quarter = std::f64::consts::FRAC_PI_4;
        assert!((atan2(&one, &one).to_f64() - quarter).abs() < 1e-15);
        assert!((atan2(&one, &m1).to_f64() - 3.0 * quarter).abs() < 1e-15);
        assert!((atan2(&m1, &m1).to_f64() + 3.0 * quarter).abs() < 1e-15);
        assert!((atan2(&one, &Fixed::zero(b)).to_f64() - 2.0 * quarter).abs() < 1e-15);
    }

    #[test]
    fn sqrt_two() {
        let r = Fixed::from_int(2, 200).sqrt();
        assert_eq!(r.to_decimal(40), "1.4142135623730950488016887242096980785696");
    }

    #[test]
    fn turn_multiples_wrap_exactly() {
        let quarter = TurnFraction::from_parts(TurnFraction::QUARTER, 0);
        let seq: Vec<f64> = (1..=8).map(|n| cos_turn(quarter.multiple(n))).collect();
        assert_eq!(seq, vec![0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn golden_turn() {
        let g = TurnFraction::golden();
        assert!((g.to_f64() - 0.618_033_988_749_894_8).abs() < 2e-16);
        // n·φ mod 1 for a large n, checked against 256-bit arithmetic.
        let n: u64 = 123_456_789;
        let five = Fixed::from_int(5, 256);
        let phi = Fixed::from_int(1, 256).add(&five.sqrt()).shr(1);
        let prod = phi.mul_int(n);
        let frac = prod.sub(&Fixed::from_int(prod.floor(), 256)).to_f64();
        assert!((turn_to_f64(g.multiple(n)) - frac).abs() < 1e-16);
    }
}
