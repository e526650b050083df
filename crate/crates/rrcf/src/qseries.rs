//! Exact arithmetic on truncated Puiseux series in `q` with rational
//! coefficients.
//!
//! A [`PuiseuxSeries`] stores coefficients for the exponents
//! `val/denom, (val+1)/denom, ..., (trunc-1)/denom`; everything at exponent
//! `>= trunc/denom` is unknown. All coefficients are exact rationals; there is
//! no floating point anywhere on the symbolic paths.
//!
//! Truncation propagation follows the usual rules: sums are trusted to the
//! smaller of the two truncations, a product `s1*s2` is trusted up to
//! `min(T1 + v2, T2 + v1)` in the common exponent scale.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

/// Rational number with machine-sized parts, used for exponents.
pub type Exponent = Ratio<i64>;

/// Truncated Puiseux series in `q^(1/denom)` with exact rational coefficients.
///
/// Invariants maintained by every constructor and operation:
/// - `denom >= 1` and `val <= trunc`, with `coeffs.len() == trunc - val`;
/// - a nonzero series has `coeffs[0] != 0` (leading coefficient) and its
///   exponent data reduced by the gcd of `denom`, `trunc` and all exponents
///   carrying nonzero coefficients;
/// - the zero series has `val == trunc` and no stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    denom: u32,
    val: i64,
    trunc: i64,
    coeffs: Vec<BigRational>,
}

fn big_zero() -> BigRational {
    BigRational::zero()
}

impl PuiseuxSeries {
    /// Build a series from raw parts. Coefficients are for exponents
    /// `(val + i)/denom`; `trunc` must equal `val + coeffs.len()`.
    pub fn from_parts(denom: u32, val: i64, coeffs: Vec<BigRational>, trunc: i64) -> Self {
        assert!(denom >= 1, "denominator must be positive");
        assert_eq!(
            trunc - val,
            coeffs.len() as i64,
            "stored coefficient count must equal trunc - val"
        );
        let mut s = PuiseuxSeries {
            denom,
            val,
            trunc,
            coeffs,
        };
        s.normalize();
        s
    }

    /// The zero series, known to vanish through exponents `< trunc`.
    pub fn zero(trunc: i64) -> Self {
        PuiseuxSeries {
            denom: 1,
            val: trunc,
            trunc,
            coeffs: Vec::new(),
        }
    }

    /// The constant series `c`, trusted through exponent `< trunc`.
    pub fn constant(c: impl Into<BigRational>, trunc: i64) -> Self {
        assert!(trunc > 0, "constant series needs trunc > 0");
        let mut coeffs = vec![big_zero(); trunc as usize];
        coeffs[0] = c.into();
        Self::from_parts(1, 0, coeffs, trunc)
    }

    /// The series `1`, trusted through exponent `< trunc`.
    pub fn one(trunc: i64) -> Self {
        Self::constant(BigRational::one(), trunc)
    }

    /// The monomial `c * q^(num/den)`, trusted through `num/den + span`.
    pub fn monomial(c: impl Into<BigRational>, num: i64, den: u32, span: i64) -> Self {
        assert!(den >= 1 && span >= 1);
        let mut coeffs = vec![big_zero(); span as usize];
        coeffs[0] = c.into();
        Self::from_parts(den, num, coeffs, num + span)
    }

    /// Exponent denominator `D`.
    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// Leading stored exponent numerator (in units of `1/denom`).
    pub fn val(&self) -> i64 {
        self.val
    }

    /// Truncation exponent numerator (in units of `1/denom`).
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Truncation exponent as a rational.
    pub fn trunc_exponent(&self) -> Exponent {
        Exponent::new(self.trunc, self.denom as i64)
    }

    /// Stored coefficients, leading first.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading exponent `val/denom` of a nonzero series.
    pub fn leading_exponent(&self) -> Result<Exponent> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(Exponent::new(self.val, self.denom as i64))
    }

    /// Leading coefficient of a nonzero series.
    pub fn leading_coefficient(&self) -> Result<&BigRational> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        Ok(&self.coeffs[0])
    }

    /// Coefficient at the rational exponent `num/den`.
    ///
    /// Returns `None` when the exponent is at or past the truncation;
    /// exponents below it that are not representable in the stored grid are
    /// known to be zero.
    pub fn coeff_at(&self, num: i64, den: u32) -> Option<BigRational> {
        let d = self.denom as i64;
        let dd = den as i64;
        // exponent num/den compared against grid k/denom: k = num * denom / den
        let prod = num * d;
        let (k, rem) = (prod.div_euclid(dd), prod.rem_euclid(dd));
        if k >= self.trunc || (rem != 0 && (k + 1) > self.trunc) {
            // Non-grid exponents are decided by the open interval they fall in.
            if Exponent::new(num, dd) >= self.trunc_exponent() {
                return None;
            }
        }
        if rem != 0 {
            return if Exponent::new(num, dd) < self.trunc_exponent() {
                Some(big_zero())
            } else {
                None
            };
        }
        if k >= self.trunc {
            return None;
        }
        if k < self.val {
            return Some(big_zero());
        }
        Some(self.coeffs[(k - self.val) as usize].clone())
    }

    /// Coefficient at the integer exponent `k` (`None` when unknown).
    pub fn coeff_int(&self, k: i64) -> Option<BigRational> {
        self.coeff_at(k, 1)
    }

    fn normalize(&mut self) {
        // Strip leading zeros.
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.trunc;
        } else {
            // Strip nothing at the tail: trailing zeros are known zeros.
            debug_assert!(!self.coeffs[0].is_zero());
        }
        // Reduce the exponent denominator by the gcd of everything it scales.
        let mut g = self.denom as i64;
        g = g.gcd(&self.trunc);
        if self.coeffs.is_empty() {
            // val == trunc already accounted for.
        } else {
            for (i, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    g = g.gcd(&(self.val + i as i64));
                    if g == 1 {
                        break;
                    }
                }
            }
        }
        if g > 1 && self.val % g == 0 {
            let gd = g;
            let new_len = ((self.trunc - self.val) / gd) as usize;
            let mut new_coeffs = vec![big_zero(); new_len];
            for (i, c) in std::mem::take(&mut self.coeffs).into_iter().enumerate() {
                if !c.is_zero() {
                    debug_assert_eq!((self.val + i as i64) % gd, 0);
                    new_coeffs[i / gd as usize] = c;
                }
            }
            self.denom /= gd as u32;
            if self.denom == 0 {
                self.denom = 1;
            }
            self.val /= gd;
            self.trunc /= gd;
            self.coeffs = new_coeffs;
        }
        if self.coeffs.is_empty() && self.denom > 1 {
            let g = (self.denom as i64).gcd(&self.trunc);
            self.denom /= g as u32;
            self.val /= g;
            self.trunc /= g;
        }
    }

    /// Rewrite on the exponent grid `1/(denom*m)`; represents the same value.
    pub fn rebase(&self, m: u32) -> Self {
        assert!(m >= 1);
        if m == 1 {
            return self.clone();
        }
        let mi = m as i64;
        let mut coeffs = vec![big_zero(); ((self.trunc - self.val) * mi) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = c.clone();
        }
        PuiseuxSeries {
            denom: self.denom * m,
            val: self.val * mi,
            trunc: self.trunc * mi,
            coeffs,
        }
    }

    fn to_common(&self, other: &Self) -> (Self, Self) {
        let l = (self.denom as i64).lcm(&(other.denom as i64)) as u32;
        (self.rebase(l / self.denom), other.rebase(l / other.denom))
    }

    /// Coefficient-wise sum, trusted to the smaller truncation.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.to_common(other);
        let trunc = a.trunc.min(b.trunc);
        let val = a.val.min(b.val).min(trunc);
        let mut coeffs = vec![big_zero(); (trunc - val) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            let e = a.val + i as i64;
            if e < trunc {
                coeffs[(e - val) as usize] += c;
            }
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let e = b.val + i as i64;
            if e < trunc {
                coeffs[(e - val) as usize] += c;
            }
        }
        Self::from_parts(a.denom, val, coeffs, trunc)
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        PuiseuxSeries {
            denom: self.denom,
            val: self.val,
            trunc: self.trunc,
            coeffs,
        }
    }

    /// Difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Scalar multiple.
    pub fn mul_scalar(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return PuiseuxSeries {
                denom: self.denom,
                val: self.trunc,
                trunc: self.trunc,
                coeffs: Vec::new(),
            };
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        PuiseuxSeries {
            denom: self.denom,
            val: self.val,
            trunc: self.trunc,
            coeffs,
        }
    }

    /// Cauchy product. The result is trusted up to `min(T1+v2, T2+v1)` in the
    /// common exponent scale.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.to_common(other);
        let val = a.val + b.val;
        let trunc = (a.trunc + b.val).min(b.trunc + a.val);
        let len = (trunc - val).max(0) as usize;
        let mut coeffs = vec![big_zero(); len];
        // Iterate the sparser operand on the outside and skip zeros.
        let (x, y) = if a.coeffs.iter().filter(|c| !c.is_zero()).count()
            <= b.coeffs.iter().filter(|c| !c.is_zero()).count()
        {
            (&a, &b)
        } else {
            (&b, &a)
        };
        for (i, ci) in x.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let jmax = len.saturating_sub(i).min(y.coeffs.len());
            for (j, cj) in y.coeffs.iter().enumerate().take(jmax) {
                if cj.is_zero() {
                    continue;
                }
                coeffs[i + j] += ci * cj;
            }
        }
        Self::from_parts(a.denom, val, coeffs, trunc)
    }

    /// Multiplicative inverse of a nonzero series.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        let n = self.coeffs.len();
        let a0 = &self.coeffs[0];
        let inv0 = BigRational::one() / a0;
        let mut b = vec![big_zero(); n];
        b[0] = inv0.clone();
        for k in 1..n {
            let mut acc = big_zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !b[k - j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            b[k] = -acc * &inv0;
        }
        // s = c0 q^{v/D} (1 + u) with n known coefficients; the reciprocal is
        // trusted for the same number of terms starting at exponent -v.
        Ok(Self::from_parts(
            self.denom,
            -self.val,
            b,
            -self.val + n as i64,
        ))
    }

    /// Integer power by binary powering; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            // s^0 = 1, trusted over the same relative window.
            let span = (self.trunc - self.val).max(1);
            return Ok(Self::one(span));
        }
        let (mut base, mut k) = if e < 0 {
            (self.invert()?, (-e) as u64)
        } else {
            (self.clone(), e as u64)
        };
        let mut acc: Option<PuiseuxSeries> = None;
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
        Ok(acc.unwrap())
    }

    /// Substitute `q -> q^n`, i.e. `tau -> n*tau`.
    pub fn scale_argument(&self, n: u32) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return self.clone();
        }
        let ni = n as i64;
        let len = ((self.trunc - self.val) * ni) as usize;
        let mut coeffs = vec![big_zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * n as usize] = c.clone();
        }
        Self::from_parts(self.denom, self.val * ni, coeffs, self.trunc * ni)
    }

    /// Multiply by the exact monomial `q^(num/den)`.
    pub fn shift_exponent(&self, num: i64, den: u32) -> Self {
        let l = (self.denom as i64).lcm(&(den as i64)) as u32;
        let s = self.rebase(l / self.denom);
        let off = num * (l / den) as i64;
        PuiseuxSeries {
            denom: l,
            val: s.val + off,
            trunc: s.trunc + off,
            coeffs: s.coeffs,
        }
    }

    /// Multiply in place by the sparse binomial `1 + c * q^(k/denom_self)`.
    ///
    /// `k` is measured on this series' own exponent grid and must be positive.
    pub fn mul_binomial(&self, c: &BigRational, k: i64) -> Self {
        assert!(k > 0);
        let n = self.coeffs.len();
        let mut coeffs = self.coeffs.clone();
        for i in (0..n).rev() {
            if i + (k as usize) < n && !self.coeffs[i].is_zero() {
                let add = &self.coeffs[i] * c;
                coeffs[i + k as usize] += add;
            }
        }
        Self::from_parts(self.denom, self.val, coeffs, self.trunc)
    }

    /// Drop knowledge past exponent `< new_trunc/denom_scale` (soundness-only).
    pub fn truncate_to(&self, num: i64, den: u32) -> Self {
        let l = (self.denom as i64).lcm(&(den as i64)) as u32;
        let s = self.rebase(l / self.denom);
        let t = num * (l / den) as i64;
        if t >= s.trunc {
            return s;
        }
        let val = s.val.min(t);
        let coeffs = s.coeffs[..(t - s.val).max(0) as usize].to_vec();
        Self::from_parts(l, val.min(t), coeffs, t)
    }

    /// True when every known coefficient vanishes and the series is trusted
    /// through exponent `< upto` (an integer bound in plain `q` units).
    pub fn is_zero_through(&self, upto: i64) -> bool {
        self.is_zero() && self.trunc_exponent() >= Exponent::from_integer(upto)
    }

    /// First known nonzero exponent, if any.
    pub fn first_nonzero_exponent(&self) -> Option<Exponent> {
        if self.is_zero() {
            None
        } else {
            Some(Exponent::new(self.val, self.denom as i64))
        }
    }

    /// Serialize in the text form `q^(v/D): c0, c1, ...`.
    pub fn to_text(&self) -> String {
        let body = self
            .coeffs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ");
        format!("q^({}/{}): {}", self.val, self.denom, body)
    }

    /// Parse the text form produced by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let text = text.trim();
        let rest = text
            .strip_prefix("q^(")
            .ok_or_else(|| Error::Parse("expected series to start with q^(".into()))?;
        let (head, body) = rest
            .split_once("):")
            .ok_or_else(|| Error::Parse("expected '):' after exponent".into()))?;
        let (v, d) = head
            .split_once('/')
            .ok_or_else(|| Error::Parse("expected v/D exponent".into()))?;
        let val: i64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent numerator {v:?}")))?;
        let denom: u32 = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent denominator {d:?}")))?;
        if denom == 0 {
            return Err(Error::Parse("exponent denominator must be positive".into()));
        }
        let body = body.trim();
        let mut coeffs = Vec::new();
        if !body.is_empty() {
            for part in body.split(',') {
                coeffs.push(parse_rational(part.trim())?);
            }
        }
        let trunc = val + coeffs.len() as i64;
        Ok(Self::from_parts(denom, val, coeffs, trunc))
    }

    /// Serialize as JSON with string coefficients.
    pub fn to_json(&self) -> String {
        let j = SeriesJson {
            denom: self.denom,
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        };
        serde_json::to_string(&j).expect("series JSON serialization cannot fail")
    }

    /// Parse the JSON form produced by [`Self::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let j: SeriesJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad series JSON: {e}")))?;
        if j.denom == 0 {
            return Err(Error::Parse("denom must be positive".into()));
        }
        if j.trunc - j.val != j.coeffs.len() as i64 {
            return Err(Error::Parse(
                "coefficient count must equal trunc - val".into(),
            ));
        }
        let mut coeffs = Vec::with_capacity(j.coeffs.len());
        for c in &j.coeffs {
            coeffs.push(parse_rational(c)?);
        }
        Ok(Self::from_parts(j.denom, j.val, coeffs, j.trunc))
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    denom: u32,
    val: i64,
    trunc: i64,
    coeffs: Vec<String>,
}

/// Print a rational as `p` or `p/q`.
pub fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse `p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.val + i as i64;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !(mag.is_one() && e != 0);
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            if e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e % self.denom as i64 == 0 {
                    let p = e / self.denom as i64;
                    if p == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{p}")?;
                    }
                } else {
                    write!(f, "q^({}/{})", e, self.denom)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.trunc % self.denom as i64 == 0 {
            write!(f, " + O(q^{})", self.trunc / self.denom as i64)
        } else {
            write!(f, " + O(q^({}/{}))", self.trunc, self.denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(coeffs: &[i64], trunc: i64) -> PuiseuxSeries {
        let mut v = vec![big_zero(); trunc as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = br(c);
        }
        PuiseuxSeries::from_parts(1, 0, v, trunc)
    }

    #[test]
    fn add_cancels_constants() {
        // (1+q) + (-1+q) = 2q
        let a = poly(&[1, 1], 8);
        let b = poly(&[-1, 1], 8);
        let s = a.add(&b);
        assert_eq!(s.coeff_int(0).unwrap(), br(0));
        assert_eq!(s.coeff_int(1).unwrap(), br(2));
        assert_eq!(s.leading_exponent().unwrap(), Exponent::from_integer(1));
    }

    #[test]
    fn add_identity() {
        let a = poly(&[3, 0, 5], 6);
        let z = PuiseuxSeries::zero(6);
        assert_eq!(a.add(&z), a);
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, -1], 10);
        let p = a.mul(&b);
        assert_eq!(p.coeff_int(0).unwrap(), br(1));
        assert_eq!(p.coeff_int(1).unwrap(), br(0));
        assert_eq!(p.coeff_int(2).unwrap(), br(-1));
    }

    #[test]
    fn mul_fractional_monomials() {
        // q^(1/5) * q^(4/5) = q
        let a = PuiseuxSeries::monomial(br(1), 1, 5, 10);
        let b = PuiseuxSeries::monomial(br(1), 4, 5, 10);
        let p = a.mul(&b);
        assert_eq!(p.leading_exponent().unwrap(), Exponent::from_integer(1));
        assert_eq!(p.leading_coefficient().unwrap(), &br(1));
    }

    #[test]
    fn invert_geometric() {
        let a = poly(&[1, -1], 12);
        let inv = a.invert().unwrap();
        for k in 0..10 {
            assert_eq!(inv.coeff_int(k).unwrap(), br(1), "coefficient of q^{k}");
        }
    }

    #[test]
    fn invert_monomial() {
        let a = PuiseuxSeries::monomial(br(1), 1, 5, 1);
        let inv = a.invert().unwrap();
        assert_eq!(inv.leading_exponent().unwrap(), Exponent::new(-1, 5));
    }

    #[test]
    fn invert_zero_fails() {
        assert!(matches!(
            PuiseuxSeries::zero(5).invert(),
            Err(Error::NonInvertible)
        ));
    }

    #[test]
    fn pow_square_and_unit() {
        let a = poly(&[1, 1], 8);
        let sq = a.pow(2).unwrap();
        assert_eq!(sq.coeff_int(0).unwrap(), br(1));
        assert_eq!(sq.coeff_int(1).unwrap(), br(2));
        assert_eq!(sq.coeff_int(2).unwrap(), br(1));
        let unit = a.pow(0).unwrap();
        assert_eq!(unit.coeff_int(0).unwrap(), br(1));
        assert_eq!(unit.coeff_int(1).unwrap(), br(0));
    }

    #[test]
    fn scale_argument_basic() {
        let a = poly(&[1, 2], 4);
        let s = a.scale_argument(2);
        assert_eq!(s.coeff_int(0).unwrap(), br(1));
        assert_eq!(s.coeff_int(1).unwrap(), br(0));
        assert_eq!(s.coeff_int(2).unwrap(), br(2));
        // composition law
        let s6 = a.scale_argument(2).scale_argument(3);
        assert_eq!(s6, a.scale_argument(6));
    }

    #[test]
    fn mul_truncation_bound() {
        // (q^2 + ... known to q^5) * (1 + ... known to q^3):
        // product trusted to min(5+0, 3+2) = 5.
        let a = PuiseuxSeries::from_parts(1, 2, vec![br(1), br(1), br(1)], 5);
        let b = PuiseuxSeries::from_parts(1, 0, vec![br(1), br(1), br(1)], 3);
        let p = a.mul(&b);
        assert_eq!(p.trunc_exponent(), Exponent::from_integer(5));
        assert_eq!(p.coeff_int(4).unwrap(), br(3));
        assert_eq!(p.coeff_int(5), None);
    }

    #[test]
    fn rebase_roundtrip_identity() {
        let a = PuiseuxSeries::from_parts(5, 1, vec![br(1), br(0), br(0), br(0), br(-2)], 6);
        let r = a.rebase(7);
        let back = PuiseuxSeries::from_parts(r.denom(), r.val(), r.coeffs().to_vec(), r.trunc());
        assert_eq!(back, a);
    }

    #[test]
    fn text_roundtrip() {
        let a = PuiseuxSeries::from_parts(
            5,
            -2,
            vec![br(3), BigRational::new(BigInt::from(1), BigInt::from(2)), br(0)],
            1,
        );
        let t = a.to_text();
        let b = PuiseuxSeries::from_text(&t).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_roundtrip() {
        let a = PuiseuxSeries::from_parts(24, 1, vec![br(1), br(-1), br(0), br(7)], 5);
        let j = a.to_json();
        let b = PuiseuxSeries::from_json(&j).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_readable() {
        let a = poly(&[1, 2, 0, -4], 8);
        assert_eq!(format!("{a}"), "1 + 2*q - 4*q^3 + O(q^8)");
    }
}
