//! Orders of (generalized) eta quotients at cusps.
//!
//! Plain eta quotients on `Gamma_0(N)` use the Ligozat closed form. For a
//! generalized eta quotient `h(n tau)` of level `N` at a cusp `x` of a group
//! `G`, the order is computed exactly the way the hand computations go:
//! choose `gamma` in `SL_2(Z)` with `gamma(infinity) = x`, split
//! `[n 0; 0 1] gamma = gamma_1 [A B; 0 C]` with `gamma_1` unimodular, and
//! evaluate
//!
//! ```text
//! ord_x h(n tau) = width(x) * (A/C) * sum_g r_g * delta(N, g, gamma_1)
//! ```
//!
//! with `delta(N, g, gamma_1) = gcd(c, N)^2 / (2N) * P_2(a g / gcd(c, N))`
//! read off the first column of `gamma_1` and `P_2` the periodic Bernoulli
//! polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cusps::{canonical_cusp, cusp_width, enumerate_cusps, gcd, Cusp, GroupDesc};
use crate::etaforms::{periodic_bernoulli2, EtaQuotient, GenEtaQuotient};
use crate::{Error, Result};

fn br(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Order of vanishing of an eta quotient at a cusp of `Gamma_0(level)`.
///
/// The cusp is first replaced by an equivalent representative whose
/// denominator divides the level (infinity counts as denominator `level`),
/// then the Ligozat formula
/// `(N / (24 d gcd(d, N/d))) * sum_delta gcd(d, delta)^2 r_delta / delta`
/// is evaluated exactly.
pub fn eta_order_at_cusp(spec: &EtaQuotient, cusp: &Cusp, level: i64) -> Result<BigRational> {
    if level < 1 || level % spec.level() as i64 != 0 {
        return Err(Error::InvalidArgument(format!(
            "level {level} is not a multiple of the quotient level {}",
            spec.level()
        )));
    }
    let group = GroupDesc::gamma0(level)?;
    let d = if cusp.denom() % level == 0 || cusp.is_infinity() {
        level
    } else if level % cusp.denom() == 0 {
        cusp.denom()
    } else {
        let rep = canonical_cusp(&group, cusp);
        if rep.is_infinity() {
            level
        } else {
            rep.denom()
        }
    };
    debug_assert_eq!(level % d, 0, "normalized denominator must divide level");
    let mut sum = BigRational::zero();
    for (&delta, &r) in spec.exponents() {
        let g = gcd(d, delta as i64);
        sum += BigRational::new(BigInt::from(g * g * r), BigInt::from(delta));
    }
    let front = BigRational::new(
        BigInt::from(level),
        BigInt::from(24 * d * gcd(d, level / d)),
    );
    Ok(front * sum)
}

/// Leading q-exponent of `eta_{N,g}(gamma tau)` for unimodular `gamma`:
/// `gcd(c, N)^2 / (2N) * P_2(a g / gcd(c, N))`.
pub fn gen_eta_leading_delta(level: u32, g: u32, gamma: &[i64; 4]) -> Result<BigRational> {
    let [a, b, c, d] = *gamma;
    if a * d - b * c != 1 {
        return Err(Error::InvalidArgument("matrix must have determinant 1".into()));
    }
    let n = level as i64;
    let gc = gcd(c, n);
    let gc = if gc == 0 { n } else { gc };
    let arg = BigRational::new(BigInt::from(a * g as i64), BigInt::from(gc));
    Ok(BigRational::new(BigInt::from(gc * gc), BigInt::from(2 * n)) * periodic_bernoulli2(&arg))
}

/// Split `[n 0; 0 1] gamma` as `gamma_1 [A B; 0 C]` with `gamma_1` in
/// `SL_2(Z)` and `A, C > 0`, `A C = n`. Returns `(gamma_1, A, C)`.
fn scale_and_reduce(gamma: &[i64; 4], n: i64) -> ([i64; 4], i64, i64) {
    let m = [n * gamma[0], n * gamma[1], gamma[2], gamma[3]];
    // First column of gamma_1 is the primitive part of M's first column.
    let g = gcd(m[0], m[2]);
    debug_assert!(g > 0);
    let a1 = m[0] / g;
    let c1 = m[2] / g;
    let (one, t, s_neg) = crate::cusps::ext_gcd(a1, c1);
    debug_assert_eq!(one, 1);
    // a1 * t + c1 * s_neg = 1, so gamma_1 = [a1, -s_neg; c1, t].
    let gamma1 = [a1, -s_neg, c1, t];
    debug_assert_eq!(gamma1[0] * gamma1[3] - gamma1[1] * gamma1[2], 1);
    (gamma1, g, n / g)
}

/// Order of `h(n tau)` at the cusp `x` of `G`, where `h` is the level-`N`
/// generalized eta quotient `spec` and `n` its argument scale.
pub fn order_at_cusp(spec: &GenEtaQuotient, group: &GroupDesc, x: &Cusp) -> Result<BigRational> {
    let gamma = x.to_matrix();
    let (gamma1, a_part, c_part) = scale_and_reduce(&gamma, spec.arg_scale() as i64);
    let mut sum = BigRational::zero();
    for (&g, &r) in spec.exponents() {
        sum += gen_eta_leading_delta(spec.level(), g, &gamma1)? * br(r);
    }
    let width = cusp_width(group, x);
    Ok(br(width) * BigRational::new(BigInt::from(a_part), BigInt::from(c_part)) * sum)
}

/// Orders of a quotient at every inequivalent cusp of a group.
#[derive(Clone, Debug)]
pub struct OrderTable {
    group: GroupDesc,
    entries: Vec<(Cusp, BigRational)>,
}

impl OrderTable {
    pub fn group(&self) -> &GroupDesc {
        &self.group
    }

    /// `(cusp, order)` pairs over the enumerated representatives.
    pub fn entries(&self) -> &[(Cusp, BigRational)] {
        &self.entries
    }

    /// Order at the class of `x` (which need not be a listed representative).
    pub fn order_at(&self, x: &Cusp) -> Option<&BigRational> {
        self.entries
            .iter()
            .find(|(rep, _)| crate::cusps::cusp_equivalent(&self.group, rep, x))
            .map(|(_, ord)| ord)
    }

    /// Sum of all orders (zero for a weight-0 modular function on the group).
    pub fn divisor_degree(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::zero(), |acc, (_, o)| acc + o)
    }

    /// Cusps with negative order.
    pub fn poles(&self) -> Vec<Cusp> {
        self.entries
            .iter()
            .filter(|(_, o)| o.is_negative())
            .map(|(c, _)| *c)
            .collect()
    }

    /// Cusps with positive order.
    pub fn zeros(&self) -> Vec<Cusp> {
        self.entries
            .iter()
            .filter(|(_, o)| o.is_positive())
            .map(|(c, _)| *c)
            .collect()
    }

    /// Total degree of poles `-sum of negative orders`, requiring every order
    /// to be an integer.
    pub fn total_pole_degree(&self) -> Result<i64> {
        use num_traits::ToPrimitive;
        let mut total: i64 = 0;
        for (cusp, order) in &self.entries {
            if !order.is_integer() {
                return Err(Error::NonIntegralOrder {
                    cusp: cusp.to_string(),
                    order: order.to_string(),
                });
            }
            if order.is_negative() {
                total -= order.to_integer().to_i64().ok_or_else(|| {
                    Error::Internal("pole order exceeds machine range".into())
                })?;
            }
        }
        Ok(total)
    }
}

/// Order table of a generalized eta quotient over the cusps of `group`.
pub fn order_table(spec: &GenEtaQuotient, group: &GroupDesc) -> Result<OrderTable> {
    let mut entries = Vec::new();
    for cusp in enumerate_cusps(group) {
        let order = order_at_cusp(spec, group, &cusp)?;
        entries.push((cusp, order));
    }
    Ok(OrderTable {
        group: *group,
        entries,
    })
}

/// Order table of a plain eta quotient over the cusps of `Gamma_0(level)`.
pub fn eta_order_table(spec: &EtaQuotient, level: i64) -> Result<OrderTable> {
    let group = GroupDesc::gamma0(level)?;
    let mut entries = Vec::new();
    for cusp in enumerate_cusps(&group) {
        let order = eta_order_at_cusp(spec, &cusp, level)?;
        entries.push((cusp, order));
    }
    Ok(OrderTable { group, entries })
}

/// Total pole degree of a generalized eta quotient on a group.
pub fn total_pole_degree(spec: &GenEtaQuotient, group: &GroupDesc) -> Result<i64> {
    order_table(spec, group)?.total_pole_degree()
}

/// Pole/zero classification of `l(n tau)` at a cusp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleZero {
    Pole,
    Zero,
    Neither,
}

/// Classify `l(n tau)` at `x` by the congruence criterion: after reducing
/// `n * x` to lowest terms `a/c`, a pole happens exactly for
/// `a ≡ ±1 (mod 5), c ≡ 5 (mod 10)` and a zero for `a ≡ ±3 (mod 5),
/// c ≡ 5 (mod 10)`.
pub fn classify_pole_zero(n: i64, x: &Cusp) -> PoleZero {
    assert!(n >= 1);
    let scaled = if x.is_infinity() {
        Cusp::infinity()
    } else {
        Cusp::new(n * x.numer(), x.denom())
    };
    if scaled.denom().rem_euclid(10) != 5 {
        return PoleZero::Neither;
    }
    let a5 = scaled.numer().rem_euclid(5);
    match a5 {
        1 | 4 => PoleZero::Pole,
        2 | 3 => PoleZero::Zero,
        _ => PoleZero::Neither,
    }
}
