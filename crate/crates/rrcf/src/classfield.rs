//! Singular values of `l` via the Shimura reciprocity law: form class
//! groups, the matrix group `W_{N,theta}` modulo the unit image `T`, the
//! `u_x` matrices attached to reduced forms, unimodular lifts, conjugate
//! evaluation and class polynomials.
//!
//! Scope: discriminants `d_K < 0` with `d_K ≡ 0 (mod 4)` and
//! `theta = sqrt(d_K)/2`, so the minimal polynomial of `theta` is
//! `X^2 + C` with `C = -d_K/4`.
//!
//! A conjugate is computed as `l(gamma tau_x)` where `gamma` is an integer
//! unimodular lift of the special-linear part of `alpha u_x` modulo `N`.
//! Because `l` has a rational q-expansion, the diagonal Galois factor
//! `[1 0; 0 det]` acts trivially on it and only the lift matters; the lift
//! is chosen with the smallest bottom row so the evaluation point keeps a
//! workable imaginary part.

use num_bigint::BigInt;
use num_traits::One;

use crate::bigfloat::{mobius, BigComplex, BigFloat};
use crate::cusps::{ext_gcd, gcd, mod_inverse};
use crate::identities::IntPoly;
use crate::modeq::expected_level2;
use crate::numeric::eval_l;
use crate::{Error, Result};

/// A reduced primitive binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    /// Reduced: `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The CM point `(-b + sqrt(d))/(2a)` in the upper half-plane.
    pub fn cm_point(&self, prec: u32) -> BigComplex {
        let d = self.discriminant();
        assert!(d < 0);
        let root = BigFloat::from_i64(-d, prec).sqrt();
        let two_a = BigFloat::from_i64(2 * self.a, prec);
        BigComplex::new(
            BigFloat::from_i64(-self.b, prec).div(&two_a),
            root.div(&two_a),
        )
    }
}

/// One reduced representative per class of discriminant `d < 0`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    if d >= 0 || !(d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1) {
        return Err(Error::InvalidArgument(format!(
            "discriminant must be negative and ≡ 0 or 1 (mod 4), got {d}"
        )));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        let parity = d.rem_euclid(2);
        let mut b = -a;
        while b <= a {
            if b.rem_euclid(2) == parity {
                let num = b * b - d;
                if num % (4 * a) == 0 {
                    let c = num / (4 * a);
                    let form = QuadForm { a, b, c };
                    if form.is_reduced() && form.is_primitive() {
                        out.push(form);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Class number `h(d)`.
pub fn class_number(d: i64) -> Result<usize> {
    Ok(reduced_forms(d)?.len())
}

/// The CM point data: `theta = sqrt(d_K)/2` with minimal polynomial
/// `X^2 + B X + C`, `B = 0`, `C = -d_K/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CMPoint {
    d_k: i64,
    b: i64,
    c: i64,
}

impl CMPoint {
    pub fn new(d_k: i64) -> Result<Self> {
        if d_k >= 0 || d_k.rem_euclid(4) != 0 {
            return Err(Error::InvalidArgument(format!(
                "scope is d_K < 0 with d_K ≡ 0 (mod 4), got {d_k}"
            )));
        }
        Ok(CMPoint {
            d_k,
            b: 0,
            c: -d_k / 4,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.d_k
    }

    /// Minimal-polynomial coefficients `(B, C)`.
    pub fn min_poly(&self) -> (i64, i64) {
        (self.b, self.c)
    }

    /// `theta` as a complex number.
    pub fn theta(&self, prec: u32) -> BigComplex {
        BigComplex::new(
            BigFloat::zero(prec),
            BigFloat::from_i64(-self.d_k, prec).sqrt().shl(-1),
        )
    }

    /// `g_theta(s theta + t) = [t - Bs, -Cs; s, t]`.
    pub fn g_theta(&self, s: i64, t: i64) -> [i64; 4] {
        [t - self.b * s, -self.c * s, s, t]
    }

    /// `(s, t)` pairs with `s theta + t` a unit of the ring of integers.
    fn unit_pairs(&self) -> Vec<(i64, i64)> {
        match self.d_k {
            -4 => vec![(0, 1), (0, -1), (1, 0), (-1, 0)],
            -3 => vec![(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1)],
            _ => vec![(0, 1), (0, -1)],
        }
    }
}

/// A 2x2 matrix over `Z/nZ` with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatModN {
    n: i64,
    m: [i64; 4],
}

impl MatModN {
    pub fn new(n: i64, entries: [i64; 4]) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let m = entries.map(|x| x.rem_euclid(n));
        let mat = MatModN { n, m };
        if gcd(mat.det(), n) != 1 {
            return Err(Error::InvalidArgument(format!(
                "matrix determinant {} is not a unit mod {n}",
                mat.det()
            )));
        }
        Ok(mat)
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }

    pub fn entries(&self) -> [i64; 4] {
        self.m
    }

    pub fn det(&self) -> i64 {
        (self.m[0] * self.m[3] - self.m[1] * self.m[2]).rem_euclid(self.n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let a = &self.m;
        let b = &other.m;
        MatModN {
            n: self.n,
            m: [
                (a[0] * b[0] + a[1] * b[2]).rem_euclid(self.n),
                (a[0] * b[1] + a[1] * b[3]).rem_euclid(self.n),
                (a[2] * b[0] + a[3] * b[2]).rem_euclid(self.n),
                (a[2] * b[1] + a[3] * b[3]).rem_euclid(self.n),
            ],
        }
    }
}

/// Coset representatives of `W_{N,theta}/T`: the image of
/// `(O_K/N O_K)^x` under `g_theta`, modulo the image of the unit group.
pub fn weyl_reps(cm: &CMPoint, n: i64) -> Result<Vec<MatModN>> {
    if n < 1 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let t_group: Vec<MatModN> = cm
        .unit_pairs()
        .into_iter()
        .map(|(s, t)| MatModN::new(n, cm.g_theta(s, t)))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = std::collections::BTreeSet::new();
    let mut reps = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let entries = cm.g_theta(s, t);
            let det = (entries[0] * entries[3] - entries[1] * entries[2]).rem_euclid(n);
            if gcd(det, n) != 1 {
                continue;
            }
            let mat = MatModN::new(n, entries)?;
            if seen.contains(&mat) {
                continue;
            }
            reps.push(mat);
            for t_el in &t_group {
                seen.insert(mat.mul(t_el));
            }
        }
    }
    Ok(reps)
}

/// The matrix `u_x` attached to a reduced form, congruent to one of the
/// three standard shapes modulo each prime power dividing `N`.
pub fn u_x_matrix(x: &QuadForm, n: i64) -> Result<MatModN> {
    if x.b.rem_euclid(2) != 0 {
        return Err(Error::InvalidArgument(
            "u_x requires an even middle coefficient (d_K ≡ 0 mod 4 scope)".into(),
        ));
    }
    let half_b = x.b / 2;
    let mut entries = [0i64; 4];
    let mut modulus = 1i64;
    for (p, pk) in prime_power_factors(n) {
        let local = if gcd(p, x.a) == 1 {
            [x.a, half_b, 0, 1]
        } else if gcd(p, x.c) == 1 {
            [-half_b, -x.c, 1, 0]
        } else {
            [-half_b - x.a, -half_b - x.c, 1, -1]
        };
        for i in 0..4 {
            entries[i] = crt_combine(entries[i], modulus, local[i].rem_euclid(pk), pk)?;
        }
        modulus *= pk;
    }
    MatModN::new(n, entries)
}

fn prime_power_factors(mut n: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            out.push((p, pk));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

fn crt_combine(r1: i64, m1: i64, r2: i64, m2: i64) -> Result<i64> {
    // moduli coprime
    let (g, p, _) = ext_gcd(m1, m2);
    if g != 1 {
        return Err(Error::Internal("CRT moduli must be coprime".into()));
    }
    let m = m1 * m2;
    let diff = (r2 - r1).rem_euclid(m2);
    Ok((r1 + m1 * ((diff * p).rem_euclid(m2))).rem_euclid(m))
}

/// Split `M = [1 0; 0 det] * gamma` with `gamma` special-linear mod `N`, and
/// lift `gamma` to an integer matrix of determinant one congruent to it,
/// choosing the smallest bottom row in a bounded search box. Returns the
/// lift and the determinant.
pub fn galois_split(mat: &MatModN) -> Result<([i64; 4], i64)> {
    let n = mat.n;
    let d = mat.det();
    let d_inv = mod_inverse(d, n)
        .ok_or_else(|| Error::Internal("determinant is a unit by construction".into()))?;
    // gamma = [1 0; 0 d^{-1}] * M: scale the bottom row.
    let g = [
        mat.m[0].rem_euclid(n),
        mat.m[1].rem_euclid(n),
        (d_inv * mat.m[2]).rem_euclid(n),
        (d_inv * mat.m[3]).rem_euclid(n),
    ];
    let lift = lift_unimodular(&g, n)?;
    Ok((lift, d))
}

/// Integer lift of a special-linear matrix mod `n`, det exactly one,
/// minimizing `c^2 + d^2` over bottom rows within `±5n` of the residues.
fn lift_unimodular(g: &[i64; 4], n: i64) -> Result<[i64; 4]> {
    let det = (g[0] * g[3] - g[1] * g[2]).rem_euclid(n);
    if det != 1 {
        return Err(Error::InvalidArgument(
            "matrix must be special-linear mod n".into(),
        ));
    }
    let mut best: Option<(i64, i64, i64)> = None;
    for kc in -5..=5i64 {
        for kd in -5..=5i64 {
            let c = g[2] + kc * n;
            let d = g[3] + kd * n;
            if (c, d) == (0, 0) || gcd(c, d) != 1 {
                continue;
            }
            let score = c * c + d * d;
            if best.is_none_or(|(s, _, _)| score < s) {
                best = Some((score, c, d));
            }
        }
    }
    let (_, c, d) = best.ok_or_else(|| Error::Internal("coprime bottom row exists".into()))?;
    // complete to determinant one with the prescribed top-row residues:
    // x d - y c = 1, general solution (x + tc, y + td)
    let (one, x0, y0_neg) = ext_gcd(d, c);
    debug_assert_eq!(one, 1);
    let (x0, y0) = (x0, -y0_neg);
    for t in 0..n {
        let a = x0 + t * c;
        let b = y0 + t * d;
        if (a - g[0]).rem_euclid(n) == 0 && (b - g[1]).rem_euclid(n) == 0 {
            debug_assert_eq!(a * d - b * c, 1);
            return Ok([a, b, c, d]);
        }
    }
    // the solution exists mod n by CRT; also scan negative offsets defensively
    for t in -n..0 {
        let a = x0 + t * c;
        let b = y0 + t * d;
        if (a - g[0]).rem_euclid(n) == 0 && (b - g[1]).rem_euclid(n) == 0 {
            return Ok([a, b, c, d]);
        }
    }
    Err(Error::Internal(
        "no top-row completion found for unimodular lift".into(),
    ))
}

/// All conjugates `l(gamma(alpha u_x) tau_x)` over the Weyl representatives
/// and the form class group.
pub fn conjugates(cm: &CMPoint, n: i64, prec: u32) -> Result<Vec<BigComplex>> {
    let forms = reduced_forms(cm.d_k)?;
    let reps = weyl_reps(cm, n)?;
    let mut out = Vec::with_capacity(forms.len() * reps.len());
    for x in &forms {
        let ux = u_x_matrix(x, n)?;
        let tau_x = x.cm_point(prec + 32);
        for alpha in &reps {
            let m = alpha.mul(&ux);
            let (lift, _det) = galois_split(&m)?;
            let point = mobius(&lift, &tau_x);
            out.push(eval_l(&point, prec)?);
        }
    }
    Ok(out)
}

/// A computed class polynomial with its rounding diagnostics.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    pub poly: IntPoly,
    /// Max distance from a complex coefficient to its integer rounding.
    pub residual: f64,
    pub conjugates: Vec<BigComplex>,
    /// Working precision that produced the accepted rounding.
    pub prec_used: u32,
}

/// Expand `prod (X - v_k)` over the conjugates and round to integer
/// coefficients, doubling the precision until the rounding residual is
/// below `1e-10` (at most three retries).
pub fn class_polynomial(d_k: i64, n: i64, prec: u32) -> Result<ClassPolynomial> {
    let cm = CMPoint::new(d_k)?;
    let mut work_prec = prec.max(64);
    let mut last_residual = f64::INFINITY;
    for _ in 0..4 {
        let values = conjugates(&cm, n, work_prec)?;
        // expand the monic product
        let mut coeffs: Vec<BigComplex> = vec![BigComplex::one(work_prec)];
        for v in &values {
            let mut next = vec![BigComplex::zero(work_prec); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(v));
            }
            coeffs = next;
        }
        coeffs.reverse(); // descending -> we built ascending? keep explicit below
        coeffs.reverse();
        let mut ints = Vec::with_capacity(coeffs.len());
        let mut residual = 0f64;
        for c in &coeffs {
            let rounded = c.re().round_bigint();
            let err_re = c
                .re()
                .sub(&BigFloat::from_bigint(rounded.clone(), work_prec))
                .abs()
                .to_f64();
            let err_im = c.im().abs().to_f64();
            residual = residual.max(err_re).max(err_im);
            ints.push(rounded);
        }
        if residual < 1e-10 {
            return Ok(ClassPolynomial {
                poly: IntPoly::new(ints),
                residual,
                conjugates: values,
                prec_used: work_prec,
            });
        }
        last_residual = residual;
        work_prec *= 2;
    }
    Err(Error::RoundingFailed {
        residual: format!("{last_residual:e}"),
        retries: 3,
    })
}

/// The class polynomial together with the certified root nearest to the
/// direct evaluation `l(theta)`.
pub fn singular_value(d_k: i64, prec: u32) -> Result<(IntPoly, BigComplex)> {
    let cm = CMPoint::new(d_k)?;
    let cp = class_polynomial(d_k, 10, prec)?;
    let direct = eval_l(&cm.theta(prec), prec)?;
    let mut best: Option<(BigFloat, BigComplex)> = None;
    let mut second: Option<BigFloat> = None;
    for v in &cp.conjugates {
        let dist = v.dist(&direct);
        match &best {
            None => best = Some((dist, v.clone())),
            Some((b, _)) if dist.cmp_value(b) == std::cmp::Ordering::Less => {
                second = best.take().map(|(d, _)| d);
                best = Some((dist, v.clone()));
            }
            Some(_) => match &second {
                None => second = Some(dist),
                Some(s) if dist.cmp_value(s) == std::cmp::Ordering::Less => second = Some(dist),
                _ => {}
            },
        }
    }
    let (best_dist, root) = best.ok_or_else(|| Error::Internal("no conjugates".into()))?;
    if let Some(second) = second {
        // demand clear separation between the chosen root and the runner-up
        let margin = second.shl(-2);
        if best_dist.cmp_value(&margin) != std::cmp::Ordering::Less {
            return Err(Error::RootSeparation);
        }
    }
    Ok((cp.poly, root))
}

/// Evaluate `r(tau)^a r(2 tau)^b` at `theta` from the certified `l` value by
/// `l^((b-2a)/5) ((l-1)/(l+1))^((a+2b)/5)`; requires `a ≡ 3b (mod 5)`.
pub fn eval_rab_at(d_k: i64, a: i64, b: i64, prec: u32) -> Result<BigComplex> {
    if (a - 3 * b).rem_euclid(5) != 0 {
        return Err(Error::InvalidArgument(format!(
            "need a ≡ 3b (mod 5), got ({a}, {b})"
        )));
    }
    let wprec = prec + 32;
    let (_, l) = singular_value(d_k, wprec)?;
    let one = BigComplex::one(wprec);
    let ratio = l.sub(&one).div(&l.add(&one));
    Ok(l
        .powi((b - 2 * a) / 5)
        .mul(&ratio.powi((a + 2 * b) / 5))
        .with_prec(prec))
}

/// Which direction to walk the level-two equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level2Direction {
    /// Given `l(2 sigma)`, solve for `l(sigma)` (`tau` is the target point).
    Halve,
    /// Given `l(sigma)`, solve for `l(2 sigma)`.
    Double,
}

/// Walk the level-two modular equation: given `l` at `tau`, return `l` at
/// `tau/2` (`Halve`) or at `2 tau` (`Double`), selecting the quadratic root
/// nearest a direct low-precision evaluation at the target point.
pub fn propagate_level2(
    l_at_tau: &BigComplex,
    tau: &BigComplex,
    direction: Level2Direction,
    prec: u32,
) -> Result<BigComplex> {
    let wprec = prec + 32;
    let l2 = expected_level2();
    let v = l_at_tau.with_prec(wprec);
    let one = BigComplex::one(wprec);
    // L2(X, Y) = 1 + X - 2XY - XY^2 + X^2 Y^2
    let (qa, qb, qc, target_tau) = match direction {
        Level2Direction::Halve => {
            // unknown X = l(tau/2), known Y = v: Y^2 X^2 + (1 - 2Y - Y^2) X + 1
            let y2 = v.powi(2);
            let lin = one.sub(&v.mul_float(&BigFloat::from_i64(2, wprec))).sub(&y2);
            let half = BigFloat::from_i64(1, wprec).shl(-1);
            (y2, lin, one.clone(), tau.with_prec(wprec).mul_float(&half))
        }
        Level2Direction::Double => {
            // unknown Y = l(2 tau), known X = v: (X^2 - X) Y^2 - 2X Y + (1 + X)
            let qa = v.powi(2).sub(&v);
            let qb = v.mul_float(&BigFloat::from_i64(-2, wprec));
            let qc = one.add(&v);
            (qa, qb, qc, tau.with_prec(wprec).add(&tau.with_prec(wprec)))
        }
    };
    debug_assert_eq!(l2.coeff(2, 2), BigInt::one());
    let disc = qb.powi(2).sub(&qa.mul(&qc).mul_float(&BigFloat::from_i64(4, wprec)));
    let disc_mag = disc.abs().to_f64();
    if disc_mag < 1e-30 {
        return Err(Error::DegenerateQuadratic);
    }
    let sq = disc.sqrt();
    let two_a = qa.mul_float(&BigFloat::from_i64(2, wprec));
    let root1 = qb.neg().add(&sq).div(&two_a);
    let root2 = qb.neg().sub(&sq).div(&two_a);
    let reference = eval_l(&target_tau.with_prec(96), 96)?;
    let pick = if root1.with_prec(96).dist(&reference).cmp_value(&root2.with_prec(96).dist(&reference))
        == std::cmp::Ordering::Less
    {
        root1
    } else {
        root2
    };
    Ok(pick.with_prec(prec))
}
