//! Constructors and q-expansions for the Dedekind eta function, generalized
//! Dedekind eta functions `eta_{N,g}`, their quotients, and the named
//! functions `r`, `k`, `l`, `f` and `j`, together with the Newman and Yang
//! modularity criteria.
//!
//! All builders take a truncation parameter `T` and return series trusted at
//! least through every exponent `< T` (in plain `q` units). Internally the
//! products are expanded with enough slack that negative-exponent factors do
//! not eat into the requested window.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::qseries::PuiseuxSeries;
use crate::{Error, Result};

/// `B_2(t) = t^2 - t + 1/6`, the second Bernoulli polynomial.
pub fn bernoulli2(t: &BigRational) -> BigRational {
    t * t - t + BigRational::new(BigInt::from(1), BigInt::from(6))
}

/// `P_2(t) = B_2({t})` with `{t}` the fractional part of `t`.
pub fn periodic_bernoulli2(t: &BigRational) -> BigRational {
    let floor = t.floor();
    bernoulli2(&(t - floor))
}

/// An eta quotient `prod_{delta | N} eta(delta tau)^{r_delta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u32,
    exps: BTreeMap<u32, i64>,
}

impl EtaQuotient {
    /// Build an eta quotient; every key must divide `level` and at least one
    /// exponent must be nonzero.
    pub fn new(level: u32, exps: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exps {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(Error::InvalidArgument(format!(
                    "divisor {delta} does not divide level {level}"
                )));
            }
            if r != 0 {
                *map.entry(delta).or_insert(0) += r;
                if map[&delta] == 0 {
                    map.remove(&delta);
                }
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidArgument(
                "eta quotient needs at least one nonzero exponent".into(),
            ));
        }
        Ok(EtaQuotient { level, exps: map })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Exponent `r_delta` (zero when absent).
    pub fn exponent(&self, delta: u32) -> i64 {
        self.exps.get(&delta).copied().unwrap_or(0)
    }

    /// Nonzero exponents, keyed by divisor.
    pub fn exponents(&self) -> &BTreeMap<u32, i64> {
        &self.exps
    }

    /// Weight `k = (1/2) sum r_delta` as a rational.
    pub fn weight(&self) -> BigRational {
        let s: i64 = self.exps.values().sum();
        BigRational::new(BigInt::from(s), BigInt::from(2))
    }

    /// Serialize as `eta N: {delta: r, ...}`.
    pub fn to_spec_string(&self) -> String {
        let body = self
            .exps
            .iter()
            .map(|(d, r)| format!("{d}: {r}"))
            .collect::<Vec<_>>()
            .join(", ");
        format!("eta {}: {{{}}}", self.level, body)
    }
}

/// A generalized eta quotient
/// `prod_{1 <= g <= floor(N/2)} eta_{N,g}(n tau)^{r_g}`, with an optional
/// argument scale `n` applied to every factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenEtaQuotient {
    level: u32,
    exps: BTreeMap<u32, i64>,
    arg_scale: u32,
}

impl GenEtaQuotient {
    /// Build a generalized eta quotient at level `N`; keys must satisfy
    /// `1 <= g <= floor(N/2)` and at least one exponent must be nonzero.
    pub fn new(level: u32, exps: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        Self::with_scale(level, exps, 1)
    }

    /// Same as [`Self::new`] with an argument scale `n`, representing
    /// `h(n tau)` for the level-`N` quotient `h`.
    pub fn with_scale(
        level: u32,
        exps: impl IntoIterator<Item = (u32, i64)>,
        arg_scale: u32,
    ) -> Result<Self> {
        if level == 0 || arg_scale == 0 {
            return Err(Error::InvalidArgument(
                "level and argument scale must be positive".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (g, r) in exps {
            if g == 0 || g > level / 2 {
                return Err(Error::InvalidArgument(format!(
                    "index {g} outside 1..={} for level {level}",
                    level / 2
                )));
            }
            if r != 0 {
                *map.entry(g).or_insert(0) += r;
                if map[&g] == 0 {
                    map.remove(&g);
                }
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidArgument(
                "generalized eta quotient needs at least one nonzero exponent".into(),
            ));
        }
        Ok(GenEtaQuotient {
            level,
            exps: map,
            arg_scale,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn arg_scale(&self) -> u32 {
        self.arg_scale
    }

    /// Exponent `r_g` (zero when absent).
    pub fn exponent(&self, g: u32) -> i64 {
        self.exps.get(&g).copied().unwrap_or(0)
    }

    /// Nonzero exponents, keyed by `g`.
    pub fn exponents(&self) -> &BTreeMap<u32, i64> {
        &self.exps
    }

    /// The same quotient with its argument scaled by a further factor `n`.
    pub fn scaled(&self, n: u32) -> Result<Self> {
        Self::with_scale(
            self.level,
            self.exps.iter().map(|(&g, &r)| (g, r)),
            self.arg_scale * n,
        )
    }

    /// Serialize as `geneta N scale n: {g: r, ...}`.
    pub fn to_spec_string(&self) -> String {
        let body = self
            .exps
            .iter()
            .map(|(g, r)| format!("{g}: {r}"))
            .collect::<Vec<_>>()
            .join(", ");
        format!("geneta {} scale {}: {{{}}}", self.level, self.arg_scale, body)
    }
}

/// Either kind of quotient, as parsed from the CLI spec grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientSpec {
    Eta(EtaQuotient),
    Gen(GenEtaQuotient),
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::Eta(e) => write!(f, "{}", e.to_spec_string()),
            QuotientSpec::Gen(g) => write!(f, "{}", g.to_spec_string()),
        }
    }
}

/// Parse `eta N: {delta: r, ...}` or `geneta N scale n: {g: r, ...}`.
pub fn parse_spec(text: &str) -> Result<QuotientSpec> {
    let text = text.trim();
    let (head, body) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse("expected ':' in quotient spec".into()))?;
    let body = body.trim();
    let inner = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| Error::Parse("expected {key: value, ...} body".into()))?;
    let mut pairs = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected key: value, got {part:?}")))?;
        let key: u32 = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
        let value: i64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent {v:?}")))?;
        pairs.push((key, value));
    }
    let head_words: Vec<&str> = head.split_whitespace().collect();
    match head_words.as_slice() {
        ["eta", n] => {
            let level: u32 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad level {n:?}")))?;
            Ok(QuotientSpec::Eta(EtaQuotient::new(level, pairs)?))
        }
        ["geneta", n] => {
            let level: u32 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad level {n:?}")))?;
            Ok(QuotientSpec::Gen(GenEtaQuotient::new(level, pairs)?))
        }
        ["geneta", n, "scale", s] => {
            let level: u32 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad level {n:?}")))?;
            let scale: u32 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad scale {s:?}")))?;
            Ok(QuotientSpec::Gen(GenEtaQuotient::with_scale(
                level, pairs, scale,
            )?))
        }
        _ => Err(Error::Parse(format!(
            "expected 'eta N:' or 'geneta N [scale n]:', got {head:?}"
        ))),
    }
}

fn one_rational() -> BigRational {
    BigRational::one()
}

/// Euler product `prod_{n >= 1} (1 - q^n)` through exponents `< trunc`,
/// expanded by the sparse pentagonal-number series.
pub fn euler_product(trunc: i64) -> PuiseuxSeries {
    assert!(trunc > 0);
    let mut coeffs = vec![BigRational::zero(); trunc as usize];
    coeffs[0] = one_rational();
    let mut k: i64 = 1;
    loop {
        let mut done = true;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if e < trunc {
                done = false;
                let sign = if k % 2 == 0 { 1 } else { -1 };
                coeffs[e as usize] = BigRational::from_integer(BigInt::from(sign));
            }
        }
        if done {
            break;
        }
        k += 1;
    }
    PuiseuxSeries::from_parts(1, 0, coeffs, trunc)
}

/// Dedekind eta `q^(1/24) prod (1 - q^n)`, trusted through exponents `< T`.
pub fn eta_series(trunc: i64) -> PuiseuxSeries {
    assert!(trunc > 0);
    euler_product(trunc).shift_exponent(1, 24)
}

/// Leading exponent `N B_2(g/N) / 2` of `eta_{N,g}` as an exact rational.
pub fn gen_eta_leading_exponent(level: u32, g: u32) -> BigRational {
    let t = BigRational::new(BigInt::from(g), BigInt::from(level));
    bernoulli2(&t) * BigRational::new(BigInt::from(level), BigInt::from(2))
}

/// Generalized Dedekind eta
/// `eta_{N,g} = q^(N B_2(g/N)/2) prod (1 - q^(N(m-1)+g))(1 - q^(Nm-g))`,
/// trusted through exponents `< T`.
pub fn gen_eta_series(level: u32, g: u32, trunc: i64) -> Result<PuiseuxSeries> {
    if g == 0 || g > level / 2 {
        return Err(Error::InvalidArgument(format!(
            "index {g} outside 1..={} for level {level}",
            level / 2
        )));
    }
    assert!(trunc > 0);
    let minus_one = -one_rational();
    let mut prod = PuiseuxSeries::one(trunc);
    let n = level as i64;
    let gg = g as i64;
    let mut m: i64 = 1;
    loop {
        let e1 = n * (m - 1) + gg;
        let e2 = n * m - gg;
        if e1 >= trunc && e2 >= trunc {
            break;
        }
        if e1 < trunc {
            prod = prod.mul_binomial(&minus_one, e1);
        }
        if e2 < trunc {
            prod = prod.mul_binomial(&minus_one, e2);
        }
        m += 1;
    }
    let lead = gen_eta_leading_exponent(level, g);
    let (num, den) = rational_to_i64_pair(&lead)?;
    Ok(prod.shift_exponent(num, den))
}

fn rational_to_i64_pair(x: &BigRational) -> Result<(i64, u32)> {
    use num_traits::ToPrimitive;
    let num = x
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Internal("exponent numerator overflow".into()))?;
    let den = x
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Internal("exponent denominator overflow".into()))?;
    Ok((num, den))
}

/// q-expansion of an eta quotient, trusted through exponents `< trunc`.
pub fn eta_quotient_series(spec: &EtaQuotient, trunc: i64) -> PuiseuxSeries {
    let slack: i64 = spec
        .exps
        .iter()
        .map(|(&d, &r)| (r.unsigned_abs() as i64 * d as i64) / 24 + 1)
        .sum::<i64>()
        + 2;
    let t = trunc + slack;
    let mut acc = PuiseuxSeries::one(t);
    for (&delta, &r) in &spec.exps {
        let base_t = t / delta as i64 + 2;
        let factor = eta_series(base_t).scale_argument(delta);
        acc = acc.mul(&factor.pow(r).expect("eta series is invertible"));
    }
    acc
}

/// q-expansion of a generalized eta quotient (with its argument scale),
/// trusted through exponents `< trunc`.
pub fn gen_eta_quotient_series(spec: &GenEtaQuotient, trunc: i64) -> PuiseuxSeries {
    let n = spec.arg_scale as i64;
    let slack: i64 = spec
        .exps
        .values()
        .map(|&r| r.unsigned_abs() as i64 * n * spec.level as i64 / 6 + 1)
        .sum::<i64>()
        + 2;
    let t = trunc + slack;
    let base_t = t / n + 2;
    let mut acc = PuiseuxSeries::one(t);
    for (&g, &r) in &spec.exps {
        let factor = gen_eta_series(spec.level, g, base_t)
            .expect("indices validated at construction")
            .scale_argument(spec.arg_scale);
        acc = acc.mul(&factor.pow(r).expect("gen eta series is invertible"));
    }
    acc
}

/// Dispatch on either quotient kind.
pub fn quotient_series(spec: &QuotientSpec, trunc: i64) -> PuiseuxSeries {
    match spec {
        QuotientSpec::Eta(e) => eta_quotient_series(e, trunc),
        QuotientSpec::Gen(g) => gen_eta_quotient_series(g, trunc),
    }
}

/// The generalized eta quotient expressing `r(tau)^a r(2tau)^b` at level 10:
/// exponents `(a, b-a, -a, a-b)` on `eta_{10,1}, ..., eta_{10,4}`.
pub fn rab_quotient(a: i64, b: i64) -> Result<GenEtaQuotient> {
    if (a, b) == (0, 0) {
        return Err(Error::InvalidArgument(
            "(a, b) = (0, 0) does not define a function".into(),
        ));
    }
    GenEtaQuotient::new(10, [(1, a), (2, b - a), (3, -a), (4, a - b)])
}

/// Rogers-Ramanujan continued fraction
/// `r = q^(1/5) prod (1-q^(5n-1))(1-q^(5n-4)) / ((1-q^(5n-2))(1-q^(5n-3)))`,
/// trusted through exponents `< T`.
pub fn r_series(trunc: i64) -> PuiseuxSeries {
    let t = trunc + 2;
    let minus_one = -one_rational();
    let mut num = PuiseuxSeries::one(t);
    let mut den = PuiseuxSeries::one(t);
    let mut n: i64 = 1;
    loop {
        let exps = [5 * n - 1, 5 * n - 4, 5 * n - 2, 5 * n - 3];
        if exps.iter().all(|&e| e >= t) {
            break;
        }
        for (i, &e) in exps.iter().enumerate() {
            if e < t {
                if i < 2 {
                    num = num.mul_binomial(&minus_one, e);
                } else {
                    den = den.mul_binomial(&minus_one, e);
                }
            }
        }
        n += 1;
    }
    num.mul(&den.invert().expect("denominator has unit leading term"))
        .shift_exponent(1, 5)
}

/// Ramanujan's function `k = r(tau) r(2tau)^2`.
pub fn k_series(trunc: i64) -> PuiseuxSeries {
    gen_eta_quotient_series(&rab_quotient(1, 2).expect("(1,2) is valid"), trunc)
}

/// The level-10 hauptmodul candidate `l = r(2tau) / r(tau)^2`.
pub fn l_series(trunc: i64) -> PuiseuxSeries {
    gen_eta_quotient_series(&rab_quotient(-2, 1).expect("(-2,1) is valid"), trunc)
}

/// `r(tau)^a r(2tau)^b` as a q-expansion.
pub fn rab_series(a: i64, b: i64, trunc: i64) -> Result<PuiseuxSeries> {
    Ok(gen_eta_quotient_series(&rab_quotient(a, b)?, trunc))
}

/// `f = eta(tau)^6 eta(5tau)^(-6)`, the hauptmodul of `Gamma_0(5)`.
pub fn f_series(trunc: i64) -> PuiseuxSeries {
    eta_quotient_series(&f_quotient(), trunc)
}

/// The eta-quotient spec of `f`, for order computations.
pub fn f_quotient() -> EtaQuotient {
    EtaQuotient::new(5, [(1, 6), (5, -6)]).expect("static spec is valid")
}

/// Modular `j`-invariant `eta^(-24) (1 + 240 sum n^3 q^n/(1-q^n))^3`, built by
/// dividing by the exact eta-power series so it doubles as a consistency
/// check of the eta engine.
pub fn j_series(trunc: i64) -> PuiseuxSeries {
    let t = trunc + 4;
    let mut coeffs = vec![BigRational::zero(); t as usize];
    coeffs[0] = one_rational();
    for m in 1..t {
        let mut sigma3 = BigInt::zero();
        for d in 1..=m {
            if m % d == 0 {
                sigma3 += BigInt::from(d).pow(3);
            }
        }
        coeffs[m as usize] = BigRational::from_integer(sigma3 * BigInt::from(240));
    }
    let e4 = PuiseuxSeries::from_parts(1, 0, coeffs, t);
    let eta24 = eta_series(t + 2).pow(24).expect("eta is nonzero");
    e4.pow(3)
        .expect("E4 power")
        .mul(&eta24.invert().expect("eta^24 has leading term q"))
}

/// Result of the Newman criteria for an eta quotient on `Gamma_0(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewmanReport {
    /// `k = (1/2) sum r_delta` is an integer.
    pub weight_integral: bool,
    /// `sum delta r_delta == 0 (mod 24)`.
    pub cond24_delta: bool,
    /// `sum (N/delta) r_delta == 0 (mod 24)`.
    pub cond24_codelta: bool,
}

impl NewmanReport {
    pub fn all_hold(&self) -> bool {
        self.weight_integral && self.cond24_delta && self.cond24_codelta
    }
}

/// Newman's conditions for the transformation law of an eta quotient on
/// `Gamma_0(N)` (with `N` the quotient's level).
pub fn check_newman(spec: &EtaQuotient) -> NewmanReport {
    check_newman_at_level(spec, spec.level)
}

/// Newman's conditions computed at an explicit level `N` (a multiple of the
/// quotient's own level).
pub fn check_newman_at_level(spec: &EtaQuotient, level: u32) -> NewmanReport {
    let sum_r: i64 = spec.exps.values().sum();
    let sum_delta: i64 = spec.exps.iter().map(|(&d, &r)| d as i64 * r).sum();
    let sum_codelta: i64 = spec
        .exps
        .iter()
        .map(|(&d, &r)| (level / d) as i64 * r)
        .sum();
    NewmanReport {
        weight_integral: sum_r % 2 == 0,
        cond24_delta: sum_delta.rem_euclid(24) == 0,
        cond24_codelta: sum_codelta.rem_euclid(24) == 0,
    }
}

/// Result of Yang's criteria for a generalized eta quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangReport {
    /// Modular on `Gamma(N)`: `sum r_g == 0 (12)` and `sum g r_g == 0 (2)`.
    pub on_gamma_n: bool,
    /// Modular on `Gamma_1(N)`: additionally `sum g^2 r_g == 0 (2N)`.
    pub on_gamma1_n: bool,
}

/// Yang's modularity conditions for a level-`N` generalized eta quotient.
/// Requires `arg_scale == 1`; the criteria apply to level-`N` quotients only.
pub fn check_yang(spec: &GenEtaQuotient) -> Result<YangReport> {
    if spec.arg_scale != 1 {
        return Err(Error::InvalidArgument(
            "Yang criteria apply to unscaled level-N quotients only".into(),
        ));
    }
    let sum_r: i64 = spec.exps.values().sum();
    let sum_gr: i64 = spec.exps.iter().map(|(&g, &r)| g as i64 * r).sum();
    let sum_g2r: i64 = spec
        .exps
        .iter()
        .map(|(&g, &r)| (g as i64) * (g as i64) * r)
        .sum();
    let on_gamma_n = sum_r.rem_euclid(12) == 0 && sum_gr.rem_euclid(2) == 0;
    let on_gamma1_n = on_gamma_n && sum_g2r.rem_euclid(2 * spec.level as i64) == 0;
    Ok(YangReport {
        on_gamma_n,
        on_gamma1_n,
    })
}
