//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p rrcf --test acceptance -- --nocapture`.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use rrcf::bigfloat::{BigComplex, BigFloat};
use rrcf::classfield::{class_polynomial, eval_rab_at, propagate_level2, Level2Direction};
use rrcf::cusps::{cusp_equivalent, cusp_width, enumerate_cusps, Cusp, GroupDesc};
use rrcf::etaforms::{l_series, r_series, rab_quotient};
use rrcf::identities;
use rrcf::modeq::{
    check_kronecker, check_symmetry, check_zero_pattern, derive_modeq, expected_level2,
    verify_modeq, BivarPoly,
};
use rrcf::numeric::{eval_l, eval_r};
use rrcf::orders::order_table;

fn bi(n: i64) -> BigInt {
    BigInt::from(n)
}

fn brat(n: i64) -> BigRational {
    BigRational::from_integer(bi(n))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(bi(n), bi(d))
}

fn report(criterion: u32, what: &str, started: Instant) {
    println!(
        "ACCEPTANCE {criterion}: PASS ({what}) in {:.2?}",
        started.elapsed()
    );
}

#[test]
fn criterion_1_q_expansion_exactness() {
    let t0 = Instant::now();
    let l = l_series(8);
    let expect_l = [1i64, 2, 0, -4, -2, 6, 8, -4];
    for (k, &c) in expect_l.iter().enumerate() {
        assert_eq!(l.coeff_int(k as i64).unwrap(), brat(c), "l at q^{k}");
    }
    let r5 = r_series(9).pow(5).unwrap();
    let expect_r5 = [(0i64, 0i64), (1, 1), (2, -5), (3, 15), (4, -30), (5, 40), (6, -26)];
    for (k, c) in expect_r5 {
        assert_eq!(r5.coeff_int(k).unwrap(), brat(c), "r^5 at q^{k}");
    }
    report(1, "l and r^5 match the published q-expansions exactly", t0);
}

#[test]
fn criterion_2_cusp_calculus() {
    let t0 = Instant::now();
    let g1 = GroupDesc::gamma1(10).unwrap();
    let cusps = enumerate_cusps(&g1);
    assert_eq!(cusps.len(), 8);
    let chosen = [
        Cusp::infinity(),
        Cusp::new(0, 1),
        Cusp::new(1, 2),
        Cusp::new(1, 3),
        Cusp::new(1, 5),
        Cusp::new(1, 6),
        Cusp::new(3, 5),
        Cusp::new(3, 10),
    ];
    for e in &chosen {
        let hits = cusps.iter().filter(|r| cusp_equivalent(&g1, r, e)).count();
        assert_eq!(hits, 1, "{e} matches exactly one class");
    }
    assert_eq!(enumerate_cusps(&GroupDesc::gamma0(10).unwrap()).len(), 4);
    assert_eq!(
        cusp_width(&GroupDesc::mixed(10, 2).unwrap(), &Cusp::new(3, 10)),
        1
    );
    assert_eq!(
        cusp_width(&GroupDesc::mixed(10, 5).unwrap(), &Cusp::new(1, 25)),
        2
    );
    for p in [3i64, 7, 13] {
        assert_eq!(
            cusp_width(&GroupDesc::mixed(10, p).unwrap(), &Cusp::new(1, 5)),
            2 * p,
            "width of 1/5 at m = {p}"
        );
    }
    report(2, "cusp classes and widths reproduce the published data", t0);
}

#[test]
fn criterion_3_order_tables() {
    let t0 = Instant::now();
    let g1 = GroupDesc::gamma1(10).unwrap();
    for (a, b) in [(1i64, 2i64), (-2, 1), (5, 0), (3, -1)] {
        let table = order_table(&rab_quotient(a, b).unwrap(), &g1).unwrap();
        assert_eq!(
            table.order_at(&Cusp::infinity()).unwrap(),
            &rat(a + 2 * b, 5),
            "ord_inf for ({a},{b})"
        );
        assert_eq!(
            table.order_at(&Cusp::new(1, 5)).unwrap(),
            &rat(2 * a - b, 5)
        );
        assert_eq!(
            table.order_at(&Cusp::new(3, 5)).unwrap(),
            &rat(-(2 * a - b), 5)
        );
        assert_eq!(
            table.order_at(&Cusp::new(3, 10)).unwrap(),
            &rat(-(a + 2 * b), 5)
        );
        for zero in [Cusp::new(0, 1), Cusp::new(1, 2), Cusp::new(1, 3), Cusp::new(1, 6)] {
            assert!(table.order_at(&zero).unwrap().is_zero());
        }
    }
    // degree-zero divisors for every in-scope function/group pair
    for (a, b) in [(1i64, 2i64), (-2, 1), (5, 0), (-1, -2), (2, -1)] {
        let table = order_table(&rab_quotient(a, b).unwrap(), &g1).unwrap();
        assert!(table.divisor_degree().is_zero(), "F({a},{b}) on Gamma_1(10)");
    }
    // l itself is modular on Gamma_1(10) (not Gamma_0(10)); its pole data on
    // Gamma_0(10) is the published simple pole at 1/5 and zero elsewhere.
    let g0_10 = GroupDesc::gamma0(10).unwrap();
    let l_spec = rab_quotient(-2, 1).unwrap();
    let l_on_g0 = order_table(&l_spec, &g0_10).unwrap();
    assert_eq!(l_on_g0.order_at(&Cusp::new(1, 5)).unwrap(), &rat(-1, 1));
    for level in [5i64, 10] {
        let table = rrcf::orders::eta_order_table(&rrcf::etaforms::f_quotient(), level).unwrap();
        assert!(table.divisor_degree().is_zero(), "f on Gamma_0({level})");
    }
    for n in [2u32, 4, 5, 6, 13] {
        let group = GroupDesc::mixed(10, n as i64).unwrap();
        for spec in [l_spec.clone(), l_spec.scaled(n).unwrap()] {
            let table = order_table(&spec, &group).unwrap();
            assert!(table.divisor_degree().is_zero(), "scale {n}");
        }
    }
    report(3, "order tables match the closed forms with degree-zero divisors", t0);
}

fn poly_from_rows(rows: &[&[i64]]) -> BivarPoly {
    BivarPoly::from_terms(rows.iter().enumerate().flat_map(|(j, row)| {
        row.iter()
            .enumerate()
            .map(move |(i, &c)| (i as u32, j as u32, bi(c)))
    }))
}

fn expected_level4() -> BivarPoly {
    poly_from_rows(&[
        &[0, -1, -1, 1, 1],
        &[0, 4, 4, -8],
        &[0, 2, 8, -2],
        &[0, -8, -4, 4],
        &[1, -1, -1, 1],
    ])
}

fn expected_level5() -> BivarPoly {
    let head = BivarPoly::from_terms([(5u32, 0u32, bi(1)), (0, 1, bi(-1))]);
    let sq = BivarPoly::from_terms([(0u32, 2u32, bi(1)), (0, 1, bi(-1)), (0, 0, bi(-1))]);
    let correction = poly_from_rows(&[
        &[1, 0, -3],
        &[1, 3, 2, -1],
        &[-1, -2, 3, -1],
        &[0, -3, 0, 1],
    ]);
    let five_xy = BivarPoly::from_terms([(1u32, 1u32, bi(5))]);
    head.mul(&sq.mul(&sq)).add(&five_xy.mul(&correction))
}

fn expected_level6() -> BivarPoly {
    poly_from_rows(&[
        &[0, -1, -2, 0, 2, 1],
        &[0, 6, 0, -12, 8, -2],
        &[0, -3, 33, 27, -53, -13, 3, 5, 1],
        &[0, -22, 24, 96, -40, -78, 24, 12],
        &[0, 9, -30, -39, 92, 39, -30, -9],
        &[0, 12, -24, -78, 40, 96, -24, -22],
        &[1, -5, 3, 13, -53, -27, 33, 3],
        &[0, 0, 0, -2, -8, -12, 0, 6],
        &[0, 0, 0, -1, 2, 0, -2, 1],
    ])
}

/// `(X^13 - Y)(X Y^13 + 1) + 13 X Y * (published correction)`.
fn expected_level13() -> BivarPoly {
    let head = BivarPoly::from_terms([(13u32, 0u32, bi(1)), (0, 1, bi(-1))])
        .mul(&BivarPoly::from_terms([(1u32, 13u32, bi(1)), (0, 0, bi(1))]));
    let correction = poly_from_rows(&[
        &[1, -4, 1, 26, -33, -57, 88, 53, -77, -18, 21, 1, -1],
        &[1, 6, -88, 76, 580, -214, -990, 226, 608, -100, -110, 6, 4],
        &[-21, 110, 178, -1147, -629, 3003, 396, -2915, 255, 1053, -178, -88, -1],
        &[-18, -100, 1053, 114, -6447, -586, 11132, 382, -6808, 114, 1147, 76, -26],
        &[77, -608, -255, 6808, 1291, -18366, -484, 18077, -1291, -6447, 629, 580, 33],
        &[53, 226, -2915, 382, 18077, 96, -30602, 96, 18366, -586, -3003, -214, 57],
        &[-88, 990, -396, -11132, 484, 30602, 0, -30602, 484, 11132, -396, -990, -88],
        &[-57, -214, 3003, -586, -18366, 96, 30602, 96, -18077, 382, 2915, 226, -53],
        &[33, -580, 629, 6447, -1291, -18077, -484, 18366, 1291, -6808, -255, 608, 77],
        &[26, 76, -1147, 114, 6808, 382, -11132, -586, 6447, 114, -1053, -100, 18],
        &[-1, 88, -178, -1053, 255, 2915, 396, -3003, -629, 1147, 178, -110, -21],
        &[-4, 6, 110, -100, -608, 226, 990, -214, -580, 76, 88, 6, -1],
        &[-1, -1, 21, 18, -77, -53, 88, 57, -33, -26, 1, 4, 1],
    ]);
    let thirteen_xy = BivarPoly::from_terms([(1u32, 1u32, bi(13))]);
    head.add(&thirteen_xy.mul(&correction))
}

#[test]
fn criterion_4_modular_equations() {
    let t0 = Instant::now();
    let expected: [(u32, BivarPoly); 5] = [
        (2, expected_level2()),
        (4, expected_level4()),
        (5, expected_level5()),
        (6, expected_level6()),
        (13, expected_level13()),
    ];
    for (n, expect) in &expected {
        let derived = derive_modeq(*n).unwrap();
        assert_eq!(&derived, expect, "level {n} must match the published table");
        assert!(
            verify_modeq(&derived, *n, 300).ok,
            "level {n} verification at T = 300"
        );
    }
    for p in [3u32, 7, 11, 13] {
        let poly = derive_modeq(p).unwrap();
        assert!(check_symmetry(&poly, p), "symmetry at p = {p}");
        assert!(check_kronecker(&poly, p), "Kronecker congruence at p = {p}");
        assert!(check_zero_pattern(&poly, p), "corner pattern at p = {p}");
    }
    report(
        4,
        "modular equations for n in {2,4,5,6,13} coefficient-exact; laws hold for p in {3,7,11,13}",
        t0,
    );
}

#[test]
fn criterion_5_identity_suite() {
    let t0 = Instant::now();
    let coeffs = identities::express_fab(5, 0).unwrap();
    assert_eq!(coeffs, vec![brat(-4), brat(-4), brat(-2), brat(-1)]);
    assert!(identities::verify_r_power_identities(120));
    let relation = identities::derive_f_relation().unwrap();
    assert_eq!(relation, identities::expected_f_relation());
    assert!(identities::verify_f_in_l(120));
    assert!(identities::verify_j_in_f(120));
    assert!(identities::verify_j_in_l(120));
    report(5, "identity suite exact through q^120", t0);
}

#[test]
fn criterion_6_numerics() {
    let t0 = Instant::now();
    let prec = 192;
    let tau_i = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec));
    let l_i = eval_l(&tau_i, prec).unwrap();
    assert!(
        (l_i.re().to_f64() - 1.00373486).abs() < 5e-9 && l_i.im().to_f64().abs() < 5e-9,
        "l(i) = {l_i}"
    );
    let tau_half = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec).shl(-1));
    let l_half = eval_l(&tau_half, prec).unwrap();
    assert!(
        (l_half.re().to_f64() - 1.08609902).abs() < 5e-9,
        "l(i/2) = {l_half}"
    );
    // also reachable through the level-two walk
    let walked = propagate_level2(&l_i, &tau_i, Level2Direction::Halve, prec).unwrap();
    assert!((walked.re().to_f64() - 1.08609902).abs() < 5e-9);

    let r_i = eval_r(&tau_i, prec).unwrap();
    let five = BigFloat::from_i64(5, prec);
    let sqrt5 = five.sqrt();
    let closed = five
        .add(&sqrt5)
        .shl(-1)
        .sqrt()
        .sub(&sqrt5.add(&BigFloat::from_i64(1, prec)).shl(-1));
    let err = r_i.re().sub(&closed).abs().to_f64();
    assert!(
        err < 1e-30 && r_i.im().to_f64().abs() < 1e-30,
        "r(i) error {err:e}"
    );

    let tau_2i = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(2, prec));
    let r_2i = eval_r(&tau_2i, prec).unwrap();
    let prod1 = r_2i.powi(3).div(&r_i);
    assert!(
        (prod1.re().to_f64() - 0.00187091).abs() < 1e-8,
        "r(2i)^3/r(i) = {prod1}"
    );
    let prod2 = r_2i.div(&r_i.powi(7));
    assert!(
        (prod2.re().to_f64() - 542.52907744).abs() < 1e-6,
        "r(2i)/r(i)^7 = {prod2}"
    );
    // the same values through the singular-value pipeline
    let v1 = eval_rab_at(-4, -1, 3, prec).unwrap();
    assert!((v1.re().to_f64() - 0.00187091).abs() < 1e-8);
    let v2 = eval_rab_at(-4, -7, 1, prec).unwrap();
    assert!((v2.re().to_f64() - 542.52907744).abs() < 1e-6);
    report(6, "numeric singular values match the published digits", t0);
}

#[test]
fn criterion_7_class_polynomials() {
    let t0 = Instant::now();
    let cp = class_polynomial(-4, 10, 256).unwrap();
    let expect = identities::IntPoly::new(
        [1i64, -26, 62, -458, -130, 458, 62, 26, 1]
            .into_iter()
            .map(bi),
    );
    assert_eq!(cp.poly, expect, "class polynomial for d = -4");
    assert!(cp.residual < 1e-10, "residual {:e}", cp.residual);
    for d in [-8i64, -20] {
        let cp = class_polynomial(d, 10, 256).unwrap();
        assert!(cp.residual < 1e-10, "d = {d}");
        let c0 = cp.poly.coeff(0);
        assert!(c0.abs().is_one(), "unit constant term at d = {d}");
        assert_eq!(cp.poly.coeff(cp.poly.degree()), BigInt::one(), "monic at d = {d}");
        // F(l(theta)) ~ 0
        let cm = rrcf::classfield::CMPoint::new(d).unwrap();
        let theta = cm.theta(256);
        let l_theta = eval_l(&theta, 256).unwrap();
        let mut acc = BigComplex::zero(256);
        for k in (0..=cp.poly.degree()).rev() {
            acc = acc.mul(&l_theta).add(&BigComplex::new(
                BigFloat::from_bigint(cp.poly.coeff(k), 256),
                BigFloat::zero(256),
            ));
        }
        assert!(
            acc.abs().to_f64() < 2f64.powi(-100),
            "F(l(theta)) = {:e} at d = {d}",
            acc.abs().to_f64()
        );
    }
    report(7, "class polynomial exact at d=-4; unit/monic/root checks at d=-8,-20", t0);
}

#[test]
fn criterion_8_property_suites() {
    let t0 = Instant::now();
    // compact versions of each standalone property family (the full
    // randomized suite lives in the `properties` test target)

    // qseries ring laws on a fixed sample
    let a = l_series(24);
    let b = r_series(24);
    let c = rrcf::etaforms::k_series(24);
    let left = a.mul(&b).mul(&c);
    let right = a.mul(&b.mul(&c));
    assert!(left.sub(&right).is_zero_through(18), "associativity");
    let dist_l = a.mul(&b.add(&c));
    let dist_r = a.mul(&b).add(&a.mul(&c));
    assert!(dist_l.sub(&dist_r).is_zero_through(18), "distributivity");

    // truncation soundness: longer pipeline agrees on the shared prefix
    let short = l_series(30).pow(3).unwrap();
    let long = l_series(90).pow(3).unwrap();
    assert!(short.sub(&long).is_zero_through(28));

    // cusp brute-force oracle at a sample within mN <= 30
    let g = GroupDesc::mixed(10, 3).unwrap();
    let reps = enumerate_cusps(&g);
    let mut classes: Vec<Cusp> = Vec::new();
    let l_mod = 30i64;
    let mut all = vec![Cusp::infinity()];
    for denom in 1..=l_mod {
        for numer in 0..l_mod {
            if rrcf::cusps::gcd(numer, denom) == 1 {
                let cusp = Cusp::new(numer, denom);
                if !all.contains(&cusp) {
                    all.push(cusp);
                }
            }
        }
    }
    'outer: for cusp in all {
        for rep in &classes {
            if cusp_equivalent(&g, rep, &cusp) {
                continue 'outer;
            }
        }
        classes.push(cusp);
    }
    assert_eq!(classes.len(), reps.len(), "partition count mN = 30");

    // lift independence of conjugates: values match the published lifts
    let prec = 128;
    let tau = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec));
    let m = rrcf::classfield::MatModN::new(10, [3, 0, 0, 7]).unwrap();
    let (lift, _) = rrcf::classfield::galois_split(&m).unwrap();
    let ours = eval_l(&rrcf::bigfloat::mobius(&lift, &tau), prec).unwrap();
    let published = eval_l(&rrcf::bigfloat::mobius(&[3, -10, 10, -33], &tau), prec).unwrap();
    assert!(ours.dist(&published).to_f64() < 1e-25);

    // precision-doubling stability
    let lo = class_polynomial(-4, 10, 128).unwrap();
    let hi = class_polynomial(-4, 10, 256).unwrap();
    assert_eq!(lo.poly, hi.poly);

    report(8, "property families hold (full randomized suite in `properties`)", t0);
}
