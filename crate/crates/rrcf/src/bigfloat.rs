//! Arbitrary-precision binary floating point and complex arithmetic.
//!
//! [`BigFloat`] stores `mant * 2^exp` with a normalized `prec`-bit mantissa;
//! binary operations raise both operands to the larger precision, so
//! precisions never mix silently. Rounding is round-to-nearest on the
//! mantissa, good to half an ulp per operation; the numeric pipelines run
//! with guard bits and certify fewer digits than they carry.
//!
//! The transcendental kernels (`pi`, `ln2`, `exp`, `sin_cos`) work on
//! fixed-point `BigInt` values with explicit scale, the classical way:
//! Machin's formula for pi, argument reduction by `ln 2` (respectively
//! `2 pi`) followed by Taylor series.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Minimum working precision in bits.
pub const MIN_PREC: u32 = 8;

/// Arbitrary-precision binary float `mant * 2^exp` with `prec`-bit mantissa.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits_of(m: &BigInt) -> u64 {
    m.magnitude().bits()
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(MIN_PREC),
        }
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        BigFloat {
            mant: v,
            exp: 0,
            prec: prec.max(MIN_PREC),
        }
        .normalized()
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(v), prec)
    }

    pub fn from_rational(v: &BigRational, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        if v.is_zero() {
            return Self::zero(prec);
        }
        let num = Self::from_bigint(v.numer().clone(), prec + 4);
        let den = Self::from_bigint(v.denom().clone(), prec + 4);
        num.div(&den).with_prec(prec)
    }

    /// Parse a plain decimal literal (`-12.034e-2` style exponents allowed).
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Self> {
        Ok(Self::from_rational(&parse_decimal(s)?, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Exponent of the leading bit: value is in `[2^(k-1), 2^k)` for the
    /// returned `k` (None for zero).
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + bits_of(&self.mant) as i64)
        }
    }

    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = bits_of(&self.mant);
        let prec = self.prec as u64;
        if bits > prec {
            let shift = bits - prec;
            let (sign, mag) = (self.mant.sign(), self.mant.magnitude().clone());
            let kept = &mag >> shift;
            let rem = &mag - (&kept << shift);
            let half = num_bigint::BigUint::from(1u32) << (shift - 1);
            let mut kept = kept;
            // round half away from zero: cheap and within the error budget
            if rem >= half {
                kept += 1u32;
            }
            self.mant = BigInt::from_biguint(sign, kept);
            self.exp += shift as i64;
            // carry may push us one bit past prec
            if bits_of(&self.mant) > prec {
                self.mant >>= 1;
                self.exp += 1;
            }
        } else if bits < prec {
            let shift = prec - bits;
            self.mant <<= shift;
            self.exp -= shift as i64;
        }
    }

    /// Same value rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut out = self.clone();
        out.prec = prec.max(MIN_PREC);
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exact scale by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.exp - lo.exp;
        // Far-apart operands: the small one is below half an ulp of the
        // result; dropping it stays inside the rounding budget.
        let hi_mag = hi.magnitude_exponent().unwrap();
        let lo_mag = lo.magnitude_exponent().unwrap();
        if hi_mag - lo_mag > prec as i64 + 8 {
            return hi.with_prec(prec);
        }
        let mant = (&hi.mant << diff as u64) + &lo.mant;
        BigFloat {
            mant,
            exp: lo.exp,
            prec,
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec,
        }
        .normalized()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigFloat {
            mant: &self.mant * BigInt::from(k),
            exp: self.exp,
            prec: self.prec,
        }
        .normalized()
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        assert!(!other.is_zero(), "division by zero BigFloat");
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = prec as i64 + 4;
        let num = &self.mant << shift as u64;
        let mant = num / &other.mant;
        BigFloat {
            mant,
            exp: self.exp - other.exp - shift,
            prec,
        }
        .normalized()
    }

    pub fn recip(&self) -> Self {
        Self::from_i64(1, self.prec).div(self)
    }

    /// Square root (requires a nonnegative value).
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let target_bits = 2 * (self.prec as i64 + 4);
        let bits = bits_of(&self.mant) as i64;
        let mut shift = (target_bits - bits).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mant << shift as u64;
        let root = scaled.sqrt();
        BigFloat {
            mant: root,
            exp: (self.exp - shift) / 2,
            prec: self.prec,
        }
        .normalized()
    }

    /// Total-order comparison (exact).
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::NoSign | Sign::Plus) => return Ordering::Less,
            (Sign::NoSign, Sign::Plus) => return Ordering::Less,
            (Sign::Plus, Sign::NoSign | Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // same nonzero sign: compare exactly via aligned mantissas
        let d = self.exp - other.exp;
        let (a, b) = if d >= 0 {
            (&self.mant << d as u64, other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << (-d) as u64)
        };
        a.cmp(&b)
    }

    /// Nearest integer (ties toward +infinity).
    pub fn round_bigint(&self) -> BigInt {
        let half = BigFloat {
            mant: BigInt::one(),
            exp: -1,
            prec: self.prec,
        };
        self.add(&half).floor_bigint()
    }

    /// Floor to a BigInt.
    pub fn floor_bigint(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            // num-bigint shr is an arithmetic (flooring) shift
            &self.mant >> (-self.exp) as u64
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bits_of(&self.mant);
        let take = bits.min(53);
        let top = (&self.mant >> (bits - take)).to_i64().unwrap_or(0) as f64;
        let e = self.exp as f64 + (bits - take) as f64;
        top * 2f64.powf(e)
    }

    /// Fixed-point decimal string with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let ten_d = BigInt::from(10).pow(digits);
        let scaled = if self.exp >= 0 {
            (&self.mant << self.exp as u64) * &ten_d
        } else {
            use num_integer::Integer;
            let num = &self.mant * &ten_d;
            let den = BigInt::one() << (-self.exp) as u64;
            // round to nearest: floor((2 num + den) / (2 den))
            let q = ((num << 1u32) + &den).div_floor(&(den << 1u32));
            return format_scaled_decimal(&q, digits);
        };
        format_scaled_decimal(&scaled, digits)
    }
}

fn format_scaled_decimal(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.is_negative();
    let mag = scaled.magnitude().to_string();
    let mag = if mag.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let split = mag.len() - digits as usize;
    let (int_part, frac_part) = mag.split_at(split);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2) as u32;
        write!(f, "{}", self.to_decimal(digits.min(60)))
    }
}

/// Parse a decimal literal with optional exponent into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let neg = int_part.starts_with('-');
    let int_clean = int_part.trim_start_matches(['-', '+']);
    if !int_clean.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || (int_clean.is_empty() && frac_part.is_empty())
    {
        return Err(Error::Parse(format!("bad decimal literal {s:?}")));
    }
    let digits = format!("{int_clean}{frac_part}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad digits {digits:?}")))?
    };
    if neg {
        num = -num;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(num * ten.pow(shift as u32))
    } else {
        BigRational::new(num, ten.pow((-shift) as u32))
    })
}

// --- fixed-point transcendental kernels ------------------------------------

/// `pi * 2^scale`, by Machin's formula.
fn pi_fixed(scale: u64) -> BigInt {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let a = atan_inv_fixed(5, scale + 8);
    let b = atan_inv_fixed(239, scale + 8);
    let v = (a << 4u32) - (b << 2u32);
    v >> 8u32
}

/// `atan(1/n) * 2^scale` for integer `n >= 2`.
fn atan_inv_fixed(n: u64, scale: u64) -> BigInt {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term = (BigInt::one() << scale) / BigInt::from(n);
    let mut acc = term.clone();
    let mut k: u64 = 1;
    loop {
        term = &term / &n2;
        if term.is_zero() {
            break;
        }
        let contrib = &term / BigInt::from(2 * k + 1);
        if contrib.is_zero() {
            break;
        }
        if k % 2 == 1 {
            acc -= contrib;
        } else {
            acc += contrib;
        }
        k += 1;
    }
    acc
}

/// `ln 2 * 2^scale` via `2 atanh(1/3)`.
fn ln2_fixed(scale: u64) -> BigInt {
    let nine = BigInt::from(9);
    let mut term = (BigInt::one() << (scale + 8)) * BigInt::from(2) / BigInt::from(3);
    let mut acc = term.clone();
    let mut k: u64 = 1;
    loop {
        term = &term / &nine;
        if term.is_zero() {
            break;
        }
        let contrib = &term / BigInt::from(2 * k + 1);
        if contrib.is_zero() {
            break;
        }
        acc += contrib;
        k += 1;
    }
    acc >> 8u32
}

/// `pi` to `prec` bits.
pub fn pi(prec: u32) -> BigFloat {
    let scale = prec as u64 + 16;
    BigFloat {
        mant: pi_fixed(scale),
        exp: -(scale as i64),
        prec,
    }
    .normalized()
}

fn to_fixed(x: &BigFloat, scale: u64) -> BigInt {
    // round(x * 2^scale)
    let sh = x.exp + scale as i64;
    if sh >= 0 {
        &x.mant << sh as u64
    } else {
        let down = (-sh) as u64;
        let two = (&x.mant >> (down - 1)) + BigInt::one();
        two >> 1u32
    }
}

/// `e^x` to `prec` bits.
pub fn exp(x: &BigFloat, prec: u32) -> BigFloat {
    let scale = prec as u64 + 32;
    if x.is_zero() {
        return BigFloat::from_i64(1, prec);
    }
    let x_fx = to_fixed(x, scale);
    let ln2 = ln2_fixed(scale);
    // n = round(x / ln2)
    let n: BigInt = {
        let two_x = &x_fx << 1u32;
        let q = two_x / &ln2;
        let q: BigInt = if q.is_negative() { q - 1 } else { q + 1 };
        q >> 1u32
    };
    let r = &x_fx - &n * &ln2;
    // e^r by Taylor, |r| <= ln2/2 + rounding
    let one = BigInt::one() << scale;
    let mut term = one.clone();
    let mut acc = one;
    let mut k: u64 = 1;
    loop {
        term = (&term * &r) >> scale;
        term = &term / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        acc += &term;
        k += 1;
        assert!(k < 10_000, "exp Taylor must terminate");
    }
    let n_i64 = n.to_i64().expect("exp exponent in range");
    BigFloat {
        mant: acc,
        exp: n_i64 - scale as i64,
        prec,
    }
    .normalized()
}

/// `(sin x, cos x)` to `prec` bits.
pub fn sin_cos(x: &BigFloat, prec: u32) -> (BigFloat, BigFloat) {
    let extra = x.magnitude_exponent().unwrap_or(0).max(0) as u64;
    let scale = prec as u64 + 32 + extra;
    let x_fx = to_fixed(x, scale);
    let two_pi = pi_fixed(scale) << 1u32;
    let k: BigInt = {
        let two_x = &x_fx << 1u32;
        let q = two_x / &two_pi;
        let q: BigInt = if q.is_negative() { q - 1 } else { q + 1 };
        q >> 1u32
    };
    let r = &x_fx - &k * &two_pi;
    // Taylor for sin and cos on |r| <= pi
    let r2 = (&r * &r) >> scale;
    let mut sin_acc = r.clone();
    let mut term = r;
    let mut n: u64 = 1;
    loop {
        term = (&term * &r2) >> scale;
        term = &term / BigInt::from((n + 1) * (n + 2));
        if term.is_zero() {
            break;
        }
        if (n / 2).is_multiple_of(2) {
            sin_acc -= &term;
        } else {
            sin_acc += &term;
        }
        n += 2;
        assert!(n < 100_000, "sin Taylor must terminate");
    }
    let mut cos_acc = BigInt::one() << scale;
    let mut term = BigInt::one() << scale;
    let mut n: u64 = 0;
    loop {
        term = (&term * &r2) >> scale;
        term = &term / BigInt::from((n + 1) * (n + 2));
        if term.is_zero() {
            break;
        }
        if (n / 2).is_multiple_of(2) {
            cos_acc -= &term;
        } else {
            cos_acc += &term;
        }
        n += 2;
        assert!(n < 100_000, "cos Taylor must terminate");
    }
    let make = |m: BigInt| {
        BigFloat {
            mant: m,
            exp: -(scale as i64),
            prec,
        }
        .normalized()
    };
    (make(sin_acc), make(cos_acc))
}

/// Arbitrary-precision complex number; both parts share one precision.
#[derive(Clone, Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        let prec = re.prec().max(im.prec());
        BigComplex {
            re: re.with_prec(prec),
            im: im.with_prec(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: BigFloat::zero(prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex {
            re: BigFloat::from_i64(1, prec),
            im: BigFloat::zero(prec),
        }
    }

    pub fn from_f64_parts(re: f64, im: f64, prec: u32) -> Self {
        let conv = |x: f64| {
            BigFloat::from_rational(
                &BigRational::from_float(x).unwrap_or_else(BigRational::zero),
                prec,
            )
        };
        BigComplex {
            re: conv(re),
            im: conv(im),
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        BigComplex { re, im }
    }

    pub fn mul_float(&self, s: &BigFloat) -> Self {
        BigComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = other.abs2();
        assert!(!d.is_zero(), "division by zero BigComplex");
        let num = self.mul(&other.conj());
        BigComplex {
            re: num.re.div(&d),
            im: num.im.div(&d),
        }
    }

    /// `|z|^2`.
    pub fn abs2(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// `|z|`.
    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt()
    }

    /// Integer power (negative allowed for nonzero values).
    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.prec());
        }
        let mut base = if e < 0 {
            Self::one(self.prec()).div(self)
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc: Option<BigComplex> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return Self::zero(prec);
        }
        let r = self.abs();
        let half = BigFloat::from_i64(1, prec).shl(-1);
        let t = r.add(&self.re.abs()).mul(&half).sqrt();
        if !self.re.is_negative() {
            BigComplex {
                re: t.clone(),
                im: self.im.div(&t.mul_i64(2)),
            }
        } else {
            let re = self.im.abs().div(&t.mul_i64(2));
            let im = if self.im.is_negative() { t.neg() } else { t };
            BigComplex { re, im }
        }
    }

    /// Distance `|self - other|`.
    pub fn dist(&self, other: &Self) -> BigFloat {
        self.sub(other).abs()
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, self.im.neg())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Apply an integer fractional-linear map `(a tau + b)/(c tau + d)`.
pub fn mobius(m: &[i64; 4], tau: &BigComplex) -> BigComplex {
    let prec = tau.prec();
    let to = |v: i64| BigFloat::from_i64(v, prec);
    let num = tau.mul_float(&to(m[0])).add(&BigComplex::new(to(m[1]), BigFloat::zero(prec)));
    let den = tau.mul_float(&to(m[2])).add(&BigComplex::new(to(m[3]), BigFloat::zero(prec)));
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";

    #[test]
    fn pi_digits() {
        let p = pi(256);
        let s = p.to_decimal(50);
        assert_eq!(s, PI_50);
    }

    #[test]
    fn exp_of_one_digits() {
        let e = exp(&BigFloat::from_i64(1, 256), 256);
        assert_eq!(
            e.to_decimal(40),
            "2.7182818284590452353602874713526624977572"
        );
    }

    #[test]
    fn exp_negative_argument() {
        let x = BigFloat::from_i64(-3, 192);
        let v = exp(&x, 192);
        let recip = exp(&BigFloat::from_i64(3, 192), 192).recip();
        let diff = v.sub(&recip).abs();
        assert!(diff.to_f64() < 1e-50, "diff = {}", diff.to_f64());
    }

    #[test]
    fn sqrt_of_two() {
        let two = BigFloat::from_i64(2, 256);
        let s = two.sqrt();
        assert_eq!(
            s.to_decimal(40),
            "1.4142135623730950488016887242096980785697"
        );
    }

    #[test]
    fn sin_cos_standard_points() {
        let prec = 200;
        let p = pi(prec);
        // sin(pi/6) = 1/2, cos(pi/3) = 1/2
        let (s, _) = sin_cos(&p.div(&BigFloat::from_i64(6, prec)), prec);
        let half = BigFloat::from_i64(1, prec).shl(-1);
        assert!(s.sub(&half).abs().to_f64() < 1e-50);
        let (_, c) = sin_cos(&p.div(&BigFloat::from_i64(3, prec)), prec);
        assert!(c.sub(&half).abs().to_f64() < 1e-50);
        // sin^2 + cos^2 = 1 at an awkward point
        let x = BigFloat::from_decimal_str("17.325", prec).unwrap();
        let (sx, cx) = sin_cos(&x, prec);
        let one = BigFloat::from_i64(1, prec);
        let lhs = sx.mul(&sx).add(&cx.mul(&cx));
        assert!(lhs.sub(&one).abs().to_f64() < 1e-50);
    }

    #[test]
    fn rounding_and_precision_mixing() {
        let a = BigFloat::from_i64(1, 64);
        let b = BigFloat::from_decimal_str("1e-30", 256).unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.prec(), 256);
        // the tiny part must survive at 256 bits
        assert!(sum.sub(&BigFloat::from_i64(1, 256)).abs().to_f64() > 1e-31);
    }

    #[test]
    fn decimal_output_negative_small() {
        let x = BigFloat::from_decimal_str("-0.03125", 128).unwrap();
        assert_eq!(x.to_decimal(5), "-0.03125");
        let y = BigFloat::from_decimal_str("12.5e1", 128).unwrap();
        assert_eq!(y.to_decimal(2), "125.00");
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(
            parse_decimal("0.25").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(
            parse_decimal("-3").unwrap(),
            BigRational::from_integer(BigInt::from(-3))
        );
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
    }

    #[test]
    fn complex_arithmetic_and_sqrt() {
        let prec = 192;
        let i = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec));
        let m1 = i.mul(&i);
        assert!(m1.add(&BigComplex::one(prec)).abs().to_f64() < 1e-50);
        // sqrt(-1) = i (principal)
        let s = BigComplex::new(BigFloat::from_i64(-1, prec), BigFloat::zero(prec)).sqrt();
        assert!(s.sub(&i).abs().to_f64() < 1e-50);
        // sqrt(z)^2 = z in a generic spot
        let z = BigComplex::from_f64_parts(-2.5, 3.75, prec);
        let r = z.sqrt();
        assert!(r.mul(&r).sub(&z).abs().to_f64() < 1e-45);
        // powi round trip
        let w = BigComplex::from_f64_parts(1.25, -0.5, prec);
        let p = w.powi(5).mul(&w.powi(-5));
        assert!(p.sub(&BigComplex::one(prec)).abs().to_f64() < 1e-45);
    }

    #[test]
    fn mobius_known_point() {
        let prec = 128;
        let tau = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec));
        // [0 -1; 1 0] sends i to i
        let out = mobius(&[0, -1, 1, 0], &tau);
        assert!(out.sub(&tau).abs().to_f64() < 1e-30);
    }

    #[test]
    fn round_and_floor() {
        let x = BigFloat::from_decimal_str("2.75", 128).unwrap();
        assert_eq!(x.floor_bigint(), BigInt::from(2));
        assert_eq!(x.round_bigint(), BigInt::from(3));
        let y = BigFloat::from_decimal_str("-2.75", 128).unwrap();
        assert_eq!(y.floor_bigint(), BigInt::from(-3));
        assert_eq!(y.round_bigint(), BigInt::from(-3));
        let z = BigFloat::from_decimal_str("-2.25", 128).unwrap();
        assert_eq!(z.round_bigint(), BigInt::from(-2));
    }

    #[test]
    fn cmp_far_apart_values() {
        let a = BigFloat::from_decimal_str("1e40", 128).unwrap();
        let b = BigFloat::from_decimal_str("1e-40", 128).unwrap();
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        assert_eq!(b.cmp_value(&a.neg()), Ordering::Greater);
        assert_eq!(a.cmp_value(&a.clone()), Ordering::Equal);
    }
}
