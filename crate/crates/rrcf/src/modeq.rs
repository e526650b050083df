//! Derivation and verification of modular equations `L_n(X, Y)` relating
//! `X = l(tau)` and `Y = l(n tau)`.
//!
//! The derivation is exact linear algebra: with `d1` and `d2` the total pole
//! degrees of `l` and `l(n tau)` on `Gamma_1(10) ∩ Gamma_0(10n)`, the
//! products `l^i l(n tau)^j` for `0 <= i <= d2`, `0 <= j <= d1` satisfy a
//! single linear relation over the rationals, read off from enough
//! q-expansion coefficient rows. The kernel is computed exactly (modular
//! elimination + CRT, certified by an exact integer product) and normalized
//! so the corner coefficient predicted nonzero by the pole/zero bookkeeping
//! is `+1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::cusps::GroupDesc;
use crate::etaforms::{l_series, rab_quotient};
use crate::linalg::{integer_kernel_vector, orient_sign};
use crate::orders::order_table;
use crate::qseries::{Exponent, PuiseuxSeries};
use crate::{Error, Result};

/// Bivariate polynomial with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    coeffs: BTreeMap<(u32, u32), BigInt>,
    deg_x: u32,
    deg_y: u32,
}

impl BivarPoly {
    /// Build from `(i, j, coefficient)` terms; zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, BigInt)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in terms {
            if !c.is_zero() {
                let e: &mut BigInt = coeffs.entry((i, j)).or_insert_with(BigInt::zero);
                *e += c;
                if e.is_zero() {
                    coeffs.remove(&(i, j));
                }
            }
        }
        let mut p = BivarPoly {
            coeffs,
            deg_x: 0,
            deg_y: 0,
        };
        p.recompute_degrees();
        p
    }

    fn recompute_degrees(&mut self) {
        self.deg_x = self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0);
        self.deg_y = self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0);
    }

    /// Divide out the content (gcd of all coefficients).
    pub fn content_normalized(&self) -> Self {
        let mut content = BigInt::zero();
        for c in self.coeffs.values() {
            content = content.gcd(c);
        }
        if content <= BigInt::one() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, c / &content))
            .collect();
        BivarPoly {
            coeffs,
            deg_x: self.deg_x,
            deg_y: self.deg_y,
        }
    }

    /// Flip all signs.
    pub fn negated(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, -c.clone()))
            .collect();
        BivarPoly {
            coeffs,
            deg_x: self.deg_x,
            deg_y: self.deg_y,
        }
    }

    /// Sign-normalize so the lexicographically first nonzero coefficient is
    /// positive.
    pub fn lex_sign_normalized(&self) -> Self {
        match self.coeffs.values().next() {
            Some(c) if c.is_negative() => self.negated(),
            _ => self.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_x(&self) -> u32 {
        self.deg_x
    }

    pub fn deg_y(&self) -> u32 {
        self.deg_y
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of two polynomials (no content normalization).
    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (&k, c) in &other.coeffs {
            let e = coeffs.entry(k).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(&k);
            }
        }
        let mut p = BivarPoly {
            coeffs,
            deg_x: 0,
            deg_y: 0,
        };
        p.recompute_degrees();
        p
    }

    /// Product of two polynomials (no content normalization).
    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (&(i1, j1), c1) in &self.coeffs {
            for (&(i2, j2), c2) in &other.coeffs {
                let e = coeffs
                    .entry((i1 + i2, j1 + j2))
                    .or_insert_with(BigInt::zero);
                *e += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        let mut p = BivarPoly {
            coeffs,
            deg_x: 0,
            deg_y: 0,
        };
        p.recompute_degrees();
        p
    }

    /// Substitute series for `X` and `Y` (Horner in `Y` over precomputed
    /// `X`-powers).
    pub fn eval_series(&self, x: &PuiseuxSeries, y: &PuiseuxSeries) -> PuiseuxSeries {
        let mut x_pows = Vec::with_capacity(self.deg_x as usize + 1);
        let one_span = (x.trunc() - x.val()).max(1);
        x_pows.push(PuiseuxSeries::one(one_span));
        for i in 1..=self.deg_x as usize {
            let next = x_pows[i - 1].mul(x);
            x_pows.push(next);
        }
        // rows[j] = sum_i C_{i,j} x^i
        let mut rows: Vec<Option<PuiseuxSeries>> = vec![None; self.deg_y as usize + 1];
        for (&(i, j), c) in &self.coeffs {
            let term = x_pows[i as usize].mul_scalar(&BigRational::from_integer(c.clone()));
            rows[j as usize] = Some(match rows[j as usize].take() {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        let mut acc: Option<PuiseuxSeries> = None;
        for row in rows.into_iter().rev() {
            acc = match (acc, row) {
                (None, None) => None,
                (None, Some(r)) => Some(r),
                (Some(a), None) => Some(a.mul(y)),
                (Some(a), Some(r)) => Some(a.mul(y).add(&r)),
            };
        }
        acc.unwrap_or_else(|| PuiseuxSeries::zero(1))
    }

    /// Human-readable polynomial, terms ordered by ascending `Y` then `X`
    /// degree: `1 + X - 2*X*Y - X*Y^2 + X^2*Y^2`.
    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut ordered: Vec<(u32, u32, &BigInt)> =
            self.coeffs.iter().map(|(&(i, j), c)| (i, j, c)).collect();
        ordered.sort_by_key(|&(i, j, _)| (j, i));
        let mut out = String::new();
        for (idx, (i, j, c)) in ordered.iter().enumerate() {
            let mag = c.magnitude();
            if idx == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                parts.push(mag.to_string());
            }
            if *i > 0 {
                parts.push(if *i == 1 { "X".into() } else { format!("X^{i}") });
            }
            if *j > 0 {
                parts.push(if *j == 1 { "Y".into() } else { format!("Y^{j}") });
            }
            out.push_str(&parts.join("*"));
        }
        out
    }

    /// Sparse JSON object `{"i,j": "coeff", ...}`.
    pub fn to_sparse_json(&self) -> String {
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(&(i, j), c)| (format!("{i},{j}"), c.to_string()))
            .collect();
        serde_json::to_string(&map).expect("polynomial JSON cannot fail")
    }

    /// Parse the sparse JSON form.
    pub fn from_sparse_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
        let mut terms = Vec::new();
        for (key, value) in map {
            let (i, j) = key
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad key {key:?}")))?;
            let i: u32 = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad X exponent {i:?}")))?;
            let j: u32 = j
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad Y exponent {j:?}")))?;
            let c: BigInt = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {value:?}")))?;
            terms.push((i, j, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Dedekind psi `psi(n) = n prod_{p | n} (1 + 1/p)`.
pub fn psi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result = result / p * (p + 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m + 1);
    }
    result
}

/// The congruence subgroup on which the level-`n` modular equation lives.
pub fn modular_equation_group(n: u32) -> Result<GroupDesc> {
    GroupDesc::mixed(10, n as i64)
}

/// Pole/zero bookkeeping behind a derivation: total pole degrees and the
/// corner coefficient predicted nonzero.
#[derive(Clone, Debug)]
pub struct DerivationBounds {
    /// Total pole degree of `l` (bounds the `Y` exponent).
    pub d1: i64,
    /// Total pole degree of `l(n tau)` (bounds the `X` exponent).
    pub d2: i64,
    /// `a = -sum of ord_r l over poles of l that are zeros of l(n tau)`:
    /// `C_{d2, a}` is nonzero and normalized to `+1`.
    pub corner_a: i64,
}

/// Compute the degree bounds and corner index for level `n`.
pub fn derivation_bounds(n: u32) -> Result<DerivationBounds> {
    let group = modular_equation_group(n)?;
    let l_spec = rab_quotient(-2, 1)?;
    let ln_spec = l_spec.scaled(n)?;
    let t1 = order_table(&l_spec, &group)?;
    let t2 = order_table(&ln_spec, &group)?;
    let d1 = t1.total_pole_degree()?;
    let d2 = t2.total_pole_degree()?;
    let mut corner_a: i64 = 0;
    for (cusp, ord) in t1.entries() {
        if ord.is_negative() {
            let other = t2
                .order_at(cusp)
                .ok_or_else(|| Error::Internal("tables share representatives".into()))?;
            if other.is_positive() {
                corner_a -= ord
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Internal("order out of range".into()))?;
            }
        }
    }
    Ok(DerivationBounds { d1, d2, corner_a })
}

fn series_pair(n: u32, trunc: i64) -> (PuiseuxSeries, PuiseuxSeries) {
    let l = l_series(trunc);
    let ln = l_series(trunc / n as i64 + 2).scale_argument(n);
    (l, ln)
}

fn integer_coefficient(series: &PuiseuxSeries, k: i64) -> Result<BigInt> {
    let c = series
        .coeff_int(k)
        .ok_or_else(|| Error::Internal(format!("coefficient q^{k} beyond truncation")))?;
    if !c.denom().is_one() {
        return Err(Error::Internal(format!(
            "expected integral coefficient at q^{k}, got {c}"
        )));
    }
    Ok(c.numer().clone())
}

/// Derive the level-`n` modular equation with an explicit number of extra
/// coefficient rows beyond the unknown count.
#[allow(clippy::needless_range_loop)]
pub fn derive_modeq_with_margin(n: u32, extra_rows: usize) -> Result<BivarPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be positive".into()));
    }
    if n == 1 {
        return Ok(BivarPoly::from_terms([
            (1, 0, BigInt::one()),
            (0, 1, -BigInt::one()),
        ]));
    }
    let bounds = derivation_bounds(n)?;
    let cols_x = (bounds.d2 + 1) as usize;
    let cols_y = (bounds.d1 + 1) as usize;
    let unknowns = cols_x * cols_y;
    let rows = unknowns + extra_rows;
    let (l, ln) = series_pair(n, rows as i64 + 4);

    let mut x_pows = Vec::with_capacity(cols_x);
    x_pows.push(PuiseuxSeries::one(rows as i64 + 4));
    for i in 1..cols_x {
        let next = x_pows[i - 1].mul(&l);
        x_pows.push(next);
    }
    let mut y_pows = Vec::with_capacity(cols_y);
    y_pows.push(PuiseuxSeries::one(rows as i64 + 4));
    for j in 1..cols_y {
        let next = y_pows[j - 1].mul(&ln);
        y_pows.push(next);
    }

    let mut matrix = vec![vec![BigInt::zero(); unknowns]; rows];
    for i in 0..cols_x {
        for j in 0..cols_y {
            let product = x_pows[i].mul(&y_pows[j]);
            let col = i * cols_y + j;
            for (row, matrix_row) in matrix.iter_mut().enumerate() {
                matrix_row[col] = integer_coefficient(&product, row as i64)?;
            }
        }
    }

    let kernel = integer_kernel_vector(&matrix)?;
    let corner = (bounds.d2 as usize) * cols_y + bounds.corner_a as usize;
    if kernel[corner].is_zero() {
        return Err(Error::Internal(format!(
            "corner coefficient C_{{{},{}}} vanished in the derived relation",
            bounds.d2, bounds.corner_a
        )));
    }
    let kernel = orient_sign(kernel, corner);
    let terms = kernel.into_iter().enumerate().filter_map(|(idx, c)| {
        if c.is_zero() {
            None
        } else {
            let i = (idx / cols_y) as u32;
            let j = (idx % cols_y) as u32;
            Some((i, j, c))
        }
    });
    Ok(BivarPoly::from_terms(terms))
}

/// Derive the modular equation of level `n` for `l(tau)`.
pub fn derive_modeq(n: u32) -> Result<BivarPoly> {
    derive_modeq_with_margin(n, 32)
}

/// Outcome of substituting the q-expansions into a candidate equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// First exponent with a nonzero coefficient, when the check fails.
    pub first_failure: Option<Exponent>,
}

/// Substitute `X = l(tau)`, `Y = l(n tau)` and test that the result vanishes
/// through exponent `T` (requires `T >= 50`).
pub fn verify_modeq(poly: &BivarPoly, n: u32, trunc: i64) -> VerifyOutcome {
    assert!(trunc >= 50, "verification wants at least 50 coefficients");
    assert!(n >= 1);
    let span = trunc + 2 + poly.deg_x as i64 + poly.deg_y as i64;
    let (l, ln) = series_pair(n, span);
    let value = poly.eval_series(&l, &ln);
    debug_assert!(value.trunc_exponent() >= Exponent::from_integer(trunc));
    match value.first_nonzero_exponent() {
        None => VerifyOutcome {
            ok: true,
            first_failure: None,
        },
        Some(e) => VerifyOutcome {
            ok: false,
            first_failure: Some(e),
        },
    }
}

/// Verify the corner pattern of the prime-level modular equation:
/// `p ≡ ±1 (mod 10)` gives nonzero `C_{p+1,0}, C_{0,p+1}` with both border
/// rows otherwise zero; `p ≡ ±3 (mod 10)` gives nonzero
/// `C_{p+1,p}, C_{0,1}, C_{1,p+1}, C_{p,0}` with the complementary border
/// entries zero.
pub fn check_zero_pattern(poly: &BivarPoly, p: u32) -> bool {
    assert!(p % 2 == 1 && p != 5 && p > 1, "odd prime level != 5 expected");
    let top = p + 1;
    match p % 10 {
        1 | 9 => {
            if poly.coeff(top, 0).is_zero() || poly.coeff(0, top).is_zero() {
                return false;
            }
            for i in 1..=top {
                if !poly.coeff(i, top).is_zero() || !poly.coeff(top, i).is_zero() {
                    return false;
                }
            }
            for j in 0..=p {
                if !poly.coeff(0, j).is_zero() || !poly.coeff(j, 0).is_zero() {
                    return false;
                }
            }
            true
        }
        3 | 7 => {
            if poly.coeff(top, p).is_zero()
                || poly.coeff(0, 1).is_zero()
                || poly.coeff(1, top).is_zero()
                || poly.coeff(p, 0).is_zero()
            {
                return false;
            }
            for i in (0..p).chain([top]) {
                if !poly.coeff(top, i).is_zero() || !poly.coeff(i, 0).is_zero() {
                    return false;
                }
            }
            for j in [0].into_iter().chain(2..=top) {
                if !poly.coeff(0, j).is_zero() || !poly.coeff(j, top).is_zero() {
                    return false;
                }
            }
            true
        }
        _ => false,
    }
}

/// Check the symmetry law for `gcd(n, 10) = 1`:
/// `L_n(X, Y) = L_n(Y, X)` when `n ≡ ±1 (mod 10)`, and
/// `Y^psi(n) L_n(-Y^(-1), X) = ±L_n(X, Y)` when `n ≡ ±3 (mod 10)`.
pub fn check_symmetry(poly: &BivarPoly, n: u32) -> bool {
    assert_eq!(crate::cusps::gcd(n as i64, 10), 1, "level must be coprime to 10");
    match n % 10 {
        1 | 9 => poly
            .terms()
            .all(|(i, j, c)| &poly.coeff(j, i) == c),
        3 | 7 => {
            let order = psi(n);
            if poly.deg_x > order {
                return false;
            }
            // Y^psi L(-1/Y, X): C'_{j, psi - i} = (-1)^i C_{i,j}
            let transformed = BivarPoly::from_terms(poly.terms().map(|(i, j, c)| {
                let sign = if i % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                (j, order - i, sign * c)
            }));
            transformed == *poly || transformed == poly.negated()
        }
        _ => false,
    }
}

/// Kronecker congruence at an odd prime `p != 5`: modulo `p`,
/// `L_p ≡ (X^p - Y)(X - Y^p)` when `p ≡ ±1 (10)` and
/// `L_p ≡ (X^p - Y)(X Y^p + 1)` when `p ≡ ±3 (10)`, up to a unit scalar.
pub fn check_kronecker(poly: &BivarPoly, p: u32) -> bool {
    assert!(p % 2 == 1 && p != 5 && p > 1);
    let x_p_minus_y = BivarPoly::from_terms([(p, 0, BigInt::one()), (0, 1, -BigInt::one())]);
    let target = match p % 10 {
        1 | 9 => {
            let second = BivarPoly::from_terms([(1, 0, BigInt::one()), (0, p, -BigInt::one())]);
            x_p_minus_y.mul(&second)
        }
        3 | 7 => {
            let second = BivarPoly::from_terms([(1, p, BigInt::one()), (0, 0, BigInt::one())]);
            x_p_minus_y.mul(&second)
        }
        _ => return false,
    };
    let pb = BigInt::from(p);
    // L ≡ lambda * target (mod p) for a unit lambda.
    let mut lambda: Option<BigInt> = None;
    let mut all_keys: Vec<(u32, u32)> = poly
        .terms()
        .map(|(i, j, _)| (i, j))
        .chain(target.terms().map(|(i, j, _)| (i, j)))
        .collect();
    all_keys.sort_unstable();
    all_keys.dedup();
    for (i, j) in all_keys {
        let lhs = poly.coeff(i, j).mod_floor(&pb);
        let rhs = target.coeff(i, j).mod_floor(&pb);
        match (&lhs.is_zero(), &rhs.is_zero()) {
            (true, true) => continue,
            (false, true) | (true, false) => return false,
            _ => {}
        }
        let rhs_inv = mod_inverse_big(&rhs, &pb).expect("nonzero residue mod prime");
        let ratio = (lhs * rhs_inv).mod_floor(&pb);
        match &lambda {
            None => lambda = Some(ratio),
            Some(prev) => {
                if *prev != ratio {
                    return false;
                }
            }
        }
    }
    true
}

fn mod_inverse_big(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    let mut r0 = p.clone();
    let mut r1 = a.mod_floor(p);
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_one() {
        Some(t0.mod_floor(p))
    } else {
        None
    }
}

/// The published level-2 equation `1 + X - 2XY - XY^2 + X^2 Y^2`.
pub fn expected_level2() -> BivarPoly {
    BivarPoly::from_terms([
        (0, 0, BigInt::from(1)),
        (1, 0, BigInt::from(1)),
        (1, 1, BigInt::from(-2)),
        (1, 2, BigInt::from(-1)),
        (2, 2, BigInt::from(1)),
    ])
}
