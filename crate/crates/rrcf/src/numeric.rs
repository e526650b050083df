//! Arbitrary-precision evaluation of the q-products (`eta`, `eta_{N,g}`,
//! `r`, `l`, `k`, `f`, `j`) at points of the upper half-plane.
//!
//! Everything goes through `q^x := e^(2 pi i x tau)` on the principal
//! branch. The real part of the exponential's argument is reduced modulo 1
//! exactly before the trigonometric kernel runs, so translations cost no
//! precision. Products are cut off once the geometric tail drops below the
//! working-precision noise floor; evaluations carry 48 guard bits beyond the
//! requested precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::bigfloat::{exp, pi, sin_cos, BigComplex, BigFloat};
use crate::etaforms::{
    gen_eta_leading_exponent, EtaQuotient, GenEtaQuotient, QuotientSpec,
};
use crate::qseries::PuiseuxSeries;
use crate::{Error, Result};

const GUARD_BITS: u32 = 48;

/// `e^(2 pi i z)` for any complex `z` (no upper-half-plane requirement).
pub fn cis(z: &BigComplex, prec: u32) -> BigComplex {
    let wprec = prec + GUARD_BITS;
    let z = z.with_prec(wprec);
    let two_pi = pi(wprec).mul_i64(2);
    // modulus e^(-2 pi im), phase 2 pi (re mod 1)
    let modulus = exp(&two_pi.mul(z.im()).neg(), wprec);
    let re_reduced = {
        let shift = BigFloat::from_bigint(z.re().round_bigint(), wprec);
        z.re().sub(&shift)
    };
    let (s, c) = sin_cos(&two_pi.mul(&re_reduced), wprec);
    BigComplex::new(c.mul(&modulus), s.mul(&modulus)).with_prec(prec)
}

/// `q = e^(2 pi i tau)`; requires `im(tau) > 0`.
pub fn eval_q(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    if !tau.im().is_positive() {
        return Err(Error::NotInUpperHalfPlane);
    }
    Ok(cis(tau, prec))
}

/// `q^(num/den) = e^(2 pi i (num/den) tau)` on the principal branch.
pub fn q_power(tau: &BigComplex, num: i64, den: i64, prec: u32) -> BigComplex {
    let wprec = prec + GUARD_BITS;
    let factor = BigFloat::from_rational(
        &BigRational::new(BigInt::from(num), BigInt::from(den)),
        wprec,
    );
    cis(&tau.with_prec(wprec).mul_float(&factor), prec)
}

/// Reject points whose `|q|` makes the products converge too slowly, and
/// return the product cutoff for the working precision.
fn product_cutoff(q: &BigComplex, wprec: u32) -> Result<i64> {
    let q_abs = q.abs();
    let threshold = BigFloat::from_i64(1, wprec)
        .sub(&BigFloat::from_i64(1, wprec).shl(-20));
    if q_abs.cmp_value(&threshold) != std::cmp::Ordering::Less {
        return Err(Error::ConvergenceTooSlow);
    }
    let qa = q_abs.to_f64();
    if qa <= 0.0 {
        return Ok(1);
    }
    let m = ((wprec as f64 + 16.0) * std::f64::consts::LN_2 / (-qa.ln())).ceil() as i64 + 8;
    Ok(m.max(1))
}

/// Dedekind eta `q^(1/24) prod (1 - q^n)` at `tau`.
pub fn eval_eta(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let q = eval_q(tau, wprec)?;
    let m = product_cutoff(&q, wprec)?;
    let one = BigComplex::one(wprec);
    let mut acc = one.clone();
    let mut qn = one.clone();
    for _ in 1..=m {
        qn = qn.mul(&q);
        acc = acc.mul(&one.sub(&qn));
    }
    Ok(q_power(tau, 1, 24, wprec).mul(&acc).with_prec(prec))
}

/// Generalized Dedekind eta `eta_{N,g}` at `tau`.
pub fn eval_gen_eta(level: u32, g: u32, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    if g == 0 || g > level / 2 {
        return Err(Error::InvalidArgument(format!(
            "index {g} outside 1..={} for level {level}",
            level / 2
        )));
    }
    let wprec = prec + GUARD_BITS;
    let q = eval_q(tau, wprec)?;
    let m = product_cutoff(&q, wprec)?;
    let one = BigComplex::one(wprec);
    let q_n = q.powi(level as i64);
    // running factors (1 - q^(N(m-1)+g)) (1 - q^(Nm-g))
    let mut p1 = q.powi(g as i64);
    let mut p2 = q.powi(level as i64 - g as i64);
    let mut acc = one.clone();
    let mut e1 = g as i64;
    let mut e2 = level as i64 - g as i64;
    while e1 <= m || e2 <= m {
        if e1 <= m {
            acc = acc.mul(&one.sub(&p1));
        }
        if e2 <= m {
            acc = acc.mul(&one.sub(&p2));
        }
        p1 = p1.mul(&q_n);
        p2 = p2.mul(&q_n);
        e1 += level as i64;
        e2 += level as i64;
    }
    let lead = gen_eta_leading_exponent(level, g);
    let num = lead
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Internal("leading exponent overflow".into()))?;
    let den = lead
        .denom()
        .to_i64()
        .ok_or_else(|| Error::Internal("leading exponent overflow".into()))?;
    Ok(q_power(tau, num, den, wprec).mul(&acc).with_prec(prec))
}

/// Rogers-Ramanujan continued fraction
/// `r = q^(1/5) prod (1-q^(5n-1))(1-q^(5n-4)) / ((1-q^(5n-2))(1-q^(5n-3)))`.
pub fn eval_r(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let q = eval_q(tau, wprec)?;
    let m = product_cutoff(&q, wprec)?;
    let one = BigComplex::one(wprec);
    let q2 = q.mul(&q);
    let q3 = q2.mul(&q);
    let q4 = q3.mul(&q);
    let q5 = q4.mul(&q);
    let mut num = one.clone();
    let mut den = one.clone();
    // p = q^(5(n-1))
    let mut p = one.clone();
    let mut n: i64 = 1;
    while 5 * n - 4 <= m {
        let f1 = p.mul(&q4); // q^(5n-1)
        let f4 = p.mul(&q); // q^(5n-4)
        let f2 = p.mul(&q3); // q^(5n-2)
        let f3 = p.mul(&q2); // q^(5n-3)
        if 5 * n - 1 <= m {
            num = num.mul(&one.sub(&f1));
        }
        num = num.mul(&one.sub(&f4));
        if 5 * n - 2 <= m {
            den = den.mul(&one.sub(&f2));
        }
        if 5 * n - 3 <= m {
            den = den.mul(&one.sub(&f3));
        }
        p = p.mul(&q5);
        n += 1;
    }
    Ok(q_power(tau, 1, 5, wprec)
        .mul(&num)
        .div(&den)
        .with_prec(prec))
}

/// `l = r(2 tau) / r(tau)^2`.
pub fn eval_l(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let two_tau = tau.add(tau);
    let r2 = eval_r(&two_tau, wprec)?;
    let r1 = eval_r(tau, wprec)?;
    Ok(r2.div(&r1.powi(2)).with_prec(prec))
}

/// `k = r(tau) r(2 tau)^2`.
pub fn eval_k(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let two_tau = tau.add(tau);
    let r2 = eval_r(&two_tau, wprec)?;
    let r1 = eval_r(tau, wprec)?;
    Ok(r1.mul(&r2.powi(2)).with_prec(prec))
}

/// `f = (eta(tau)/eta(5 tau))^6`.
pub fn eval_f(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let five_tau = tau.mul_float(&BigFloat::from_i64(5, wprec));
    let e1 = eval_eta(tau, wprec)?;
    let e5 = eval_eta(&five_tau, wprec)?;
    Ok(e1.div(&e5).powi(6).with_prec(prec))
}

/// Modular `j`-invariant via `eta^(-24) (1 + 240 sum n^3 q^n/(1-q^n))^3`.
pub fn eval_j(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let q = eval_q(tau, wprec)?;
    let one = BigComplex::one(wprec);
    let mut e4 = one.clone();
    let mut qn = one.clone();
    let mut n: i64 = 1;
    loop {
        qn = qn.mul(&q);
        let term = qn
            .mul_float(&BigFloat::from_i64(240 * n * n * n, wprec))
            .div(&one.sub(&qn));
        let done = term
            .abs()
            .magnitude_exponent()
            .is_none_or(|e| e < -(wprec as i64 + 8));
        e4 = e4.add(&term);
        if done {
            break;
        }
        n += 1;
        if n > 4 * wprec as i64 + 64 {
            return Err(Error::ConvergenceTooSlow);
        }
    }
    let eta24 = eval_eta(tau, wprec)?.powi(24);
    Ok(e4.powi(3).div(&eta24).with_prec(prec))
}

/// Evaluate an eta quotient or generalized eta quotient at `tau`.
pub fn eval_quotient(spec: &QuotientSpec, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    match spec {
        QuotientSpec::Eta(e) => eval_eta_quotient(e, tau, prec),
        QuotientSpec::Gen(g) => eval_gen_eta_quotient(g, tau, prec),
    }
}

/// Evaluate `prod eta(delta tau)^(r_delta)`.
pub fn eval_eta_quotient(spec: &EtaQuotient, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let mut acc = BigComplex::one(wprec);
    for (&delta, &r) in spec.exponents() {
        let arg = tau.mul_float(&BigFloat::from_i64(delta as i64, wprec));
        acc = acc.mul(&eval_eta(&arg, wprec)?.powi(r));
    }
    Ok(acc.with_prec(prec))
}

/// Evaluate `prod eta_{N,g}(n tau)^(r_g)`.
pub fn eval_gen_eta_quotient(
    spec: &GenEtaQuotient,
    tau: &BigComplex,
    prec: u32,
) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    let arg = tau.mul_float(&BigFloat::from_i64(spec.arg_scale() as i64, wprec));
    let mut acc = BigComplex::one(wprec);
    for (&g, &r) in spec.exponents() {
        acc = acc.mul(&eval_gen_eta(spec.level(), g, &arg, wprec)?.powi(r));
    }
    Ok(acc.with_prec(prec))
}

/// Named functions accepted by the CLI.
pub fn eval_named(name: &str, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    match name {
        "r" => eval_r(tau, prec),
        "l" => eval_l(tau, prec),
        "k" => eval_k(tau, prec),
        "f" => eval_f(tau, prec),
        "j" => eval_j(tau, prec),
        "eta" => eval_eta(tau, prec),
        "q" => eval_q(tau, prec),
        other => Err(Error::InvalidArgument(format!(
            "unknown function {other:?}; expected one of r, l, k, f, j, eta, q"
        ))),
    }
}

/// Evaluate a truncated Puiseux series at `tau` by Horner in
/// `w = e^(2 pi i tau / D)`. No tail bound: used as a cross-oracle where the
/// dropped tail is provably below the comparison tolerance.
pub fn eval_series_at(series: &PuiseuxSeries, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let wprec = prec + GUARD_BITS;
    if !tau.im().is_positive() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let w = q_power(tau, 1, series.denom() as i64, wprec);
    let mut acc = BigComplex::zero(wprec);
    for c in series.coeffs().iter().rev() {
        acc = acc.mul(&w);
        if !c.is_zero() {
            acc = acc.add(&BigComplex::new(
                BigFloat::from_rational(c, wprec),
                BigFloat::zero(wprec),
            ));
        }
    }
    Ok(acc.mul(&w.powi(series.val())).with_prec(prec))
}

/// One numeric transformation check.
#[derive(Clone, Debug)]
pub struct TransformLine {
    pub name: String,
    pub max_error: f64,
    pub pass: bool,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn unit_f64(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Numerically verify the transformation laws under `gamma = [3 -1; 10 -3]`:
/// `l(gamma tau) l(tau) = -1` and, for `r^a r(2tau)^b` with `a ≡ 3b (5)`,
/// `F(gamma tau) F(tau) = (-1)^(b-a)`, at 20 pseudo-random points with
/// tolerance `2^(-prec/2)`.
pub fn check_transformations(prec: u32) -> Result<Vec<TransformLine>> {
    let gamma = [3i64, -1, 10, -3];
    let tol = 2f64.powi(-(prec as i32) / 2);
    let mut state: u64 = 0x5DEECE66D;
    let mut points = Vec::new();
    for _ in 0..20 {
        let re = unit_f64(&mut state) - 0.5;
        let im = 0.3 + 1.7 * unit_f64(&mut state);
        points.push(BigComplex::from_f64_parts(re, im, prec));
    }
    let mut out = Vec::new();

    let mut max_err = 0f64;
    for tau in &points {
        let moved = crate::bigfloat::mobius(&gamma, tau);
        let lhs = eval_l(&moved, prec)?.mul(&eval_l(tau, prec)?);
        let err = lhs.add(&BigComplex::one(prec)).abs().to_f64();
        max_err = max_err.max(err);
    }
    out.push(TransformLine {
        name: "l(gamma tau) * l(tau) = -1".into(),
        max_error: max_err,
        pass: max_err < tol,
    });

    for (a, b) in [(1i64, 2i64), (4, 3), (0, 5)] {
        let spec = crate::etaforms::rab_quotient(a, b)?;
        let sign = if (b - a).rem_euclid(2) == 0 { 1 } else { -1 };
        let mut max_err = 0f64;
        for tau in points.iter().take(6) {
            let moved = crate::bigfloat::mobius(&gamma, tau);
            let lhs = eval_gen_eta_quotient(&spec, &moved, prec)?
                .mul(&eval_gen_eta_quotient(&spec, tau, prec)?);
            let target = BigComplex::new(
                BigFloat::from_i64(sign, prec),
                BigFloat::zero(prec),
            );
            let err = lhs.sub(&target).abs().to_f64();
            max_err = max_err.max(err);
        }
        out.push(TransformLine {
            name: format!("F(gamma tau) F(tau) = {sign} for (a,b)=({a},{b})"),
            max_error: max_err,
            pass: max_err < tol,
        });
    }

    // identity matrix sanity
    let tau = &points[0];
    let same = eval_l(&crate::bigfloat::mobius(&[1, 0, 0, 1], tau), prec)?
        .sub(&eval_l(tau, prec)?)
        .abs()
        .to_f64();
    out.push(TransformLine {
        name: "identity matrix fixes l".into(),
        max_error: same,
        pass: same < tol,
    });
    Ok(out)
}
