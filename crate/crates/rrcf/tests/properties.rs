//! Randomized property suite: ring laws and truncation soundness for the
//! series arithmetic, serialization round-trips, the cusp brute-force
//! partition oracle, lift independence of conjugate evaluation, and
//! precision-doubling stability.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use rrcf::bigfloat::{mobius, BigComplex, BigFloat};
use rrcf::cusps::{cusp_equivalent, enumerate_cusps, gcd, Cusp, GroupDesc};
use rrcf::numeric::eval_l;
use rrcf::qseries::PuiseuxSeries;

fn brat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// True when the two series carry identical coefficients over the overlap of
/// their trusted windows.
fn agree_on_overlap(x: &PuiseuxSeries, y: &PuiseuxSeries) -> bool {
    let diff = x.sub(y);
    diff.is_zero()
}

prop_compose! {
    fn small_series()(
        denom in prop::sample::select(vec![1u32, 2, 3, 5, 24]),
        val in -4i64..5,
        coeffs in prop::collection::vec((-6i64..7, 1i64..5), 1..9),
    ) -> PuiseuxSeries {
        let len = coeffs.len() as i64;
        let coeffs: Vec<BigRational> = coeffs.into_iter().map(|(n, d)| brat(n, d)).collect();
        PuiseuxSeries::from_parts(denom, val, coeffs, val + len)
    }
}

prop_compose! {
    fn nonzero_series()(s in small_series().prop_filter("nonzero", |s| !s.is_zero())) -> PuiseuxSeries {
        s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn addition_commutes(a in small_series(), b in small_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn addition_associates(a in small_series(), b in small_series(), c in small_series()) {
        prop_assert!(agree_on_overlap(&a.add(&b).add(&c), &a.add(&b.add(&c))));
    }

    #[test]
    fn multiplication_commutes(a in small_series(), b in small_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn multiplication_associates(a in small_series(), b in small_series(), c in small_series()) {
        prop_assert!(agree_on_overlap(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
    }

    #[test]
    fn multiplication_distributes(a in small_series(), b in small_series(), c in small_series()) {
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert!(agree_on_overlap(&lhs, &rhs));
    }

    #[test]
    fn inverse_of_product_is_product_of_inverses(a in nonzero_series(), b in nonzero_series()) {
        let lhs = a.mul(&b).invert().unwrap();
        let rhs = a.invert().unwrap().mul(&b.invert().unwrap());
        prop_assert!(agree_on_overlap(&lhs, &rhs));
    }

    #[test]
    fn inverse_is_right_inverse(a in nonzero_series()) {
        let product = a.mul(&a.invert().unwrap());
        // product = 1 + O(window)
        let minus_one = product.sub(&PuiseuxSeries::one(1));
        prop_assert!(minus_one.is_zero());
    }

    #[test]
    fn power_addition_law(a in nonzero_series(), m in -3i64..4, n in -3i64..4) {
        let lhs = a.pow(m + n).unwrap();
        let rhs = a.pow(m).unwrap().mul(&a.pow(n).unwrap());
        prop_assert!(agree_on_overlap(&lhs, &rhs));
    }

    #[test]
    fn scaling_is_multiplicative(a in small_series(), b in small_series(), n in 1u32..5) {
        let lhs = a.mul(&b).scale_argument(n);
        let rhs = a.scale_argument(n).mul(&b.scale_argument(n));
        prop_assert!(agree_on_overlap(&lhs, &rhs));
    }

    #[test]
    fn truncation_soundness_under_clipping(a in small_series(), b in small_series()) {
        // computing with clipped inputs never changes shared coefficients
        let full = a.mul(&b);
        let clip_a = a.truncate_to(a.trunc() - 1, a.denom());
        let clipped = clip_a.mul(&b);
        prop_assert!(agree_on_overlap(&full, &clipped));
    }

    #[test]
    fn rebase_roundtrips(a in small_series(), m in 1u32..7) {
        let up = a.rebase(m);
        let back = PuiseuxSeries::from_parts(up.denom(), up.val(), up.coeffs().to_vec(), up.trunc());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn text_serialization_roundtrips(a in small_series()) {
        let text = a.to_text();
        let back = PuiseuxSeries::from_text(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn json_serialization_roundtrips(a in small_series()) {
        let json = a.to_json();
        let back = PuiseuxSeries::from_json(&json).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn cusp_partition_oracle_through_30() {
    for (n, m) in [
        (1i64, 1i64),
        (2, 1),
        (10, 1),
        (1, 10),
        (10, 2),
        (5, 2),
        (6, 1),
        (4, 3),
        (10, 3),
        (3, 9),
        (7, 4),
        (5, 6),
    ] {
        let l = n * m;
        assert!(l <= 30);
        let g = GroupDesc::mixed(n, m).unwrap();
        let reps = enumerate_cusps(&g);
        let mut all: Vec<Cusp> = vec![Cusp::infinity()];
        for denom in 1..=l {
            for numer in 0..l.max(denom) {
                if gcd(numer, denom) == 1 {
                    let cusp = Cusp::new(numer, denom);
                    if !all.contains(&cusp) {
                        all.push(cusp);
                    }
                }
            }
        }
        let mut classes: Vec<Vec<Cusp>> = Vec::new();
        'outer: for cusp in all {
            for class in classes.iter_mut() {
                if cusp_equivalent(&g, &class[0], &cusp) {
                    class.push(cusp);
                    continue 'outer;
                }
            }
            classes.push(vec![cusp]);
        }
        assert_eq!(classes.len(), reps.len(), "class count at N={n}, m={m}");
        for class in &classes {
            let hits = reps
                .iter()
                .filter(|r| cusp_equivalent(&g, &class[0], r))
                .count();
            assert_eq!(hits, 1, "class of {} at N={n}, m={m}", class[0]);
        }
    }
}

#[test]
fn conjugate_values_independent_of_lift() {
    // every det-1 integer matrix congruent mod 10 to the split part gives
    // the same value of l at the moved point
    let prec = 128;
    let tau = BigComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec));
    let cases = [
        ([3i64, 0, 0, 7], [3i64, -10, 10, -33]),
        ([1, 0, 0, 1], [1, 0, 10, 1]),
    ];
    for (mat, alt_lift) in cases {
        assert_eq!(alt_lift[0] * alt_lift[3] - alt_lift[1] * alt_lift[2], 1);
        let m = rrcf::classfield::MatModN::new(10, mat).unwrap();
        let (lift, _) = rrcf::classfield::galois_split(&m).unwrap();
        let ours = eval_l(&mobius(&lift, &tau), prec).unwrap();
        let alt = eval_l(&mobius(&alt_lift, &tau), prec).unwrap();
        assert!(
            ours.dist(&alt).to_f64() < 1e-25,
            "lift choice changed the value for {mat:?}"
        );
    }
}

#[test]
fn precision_doubling_stability() {
    // numeric evaluation: doubling the precision only appends digits
    let lo_tau = BigComplex::from_f64_parts(0.21, 1.05, 128);
    let lo = eval_l(&lo_tau, 128).unwrap();
    let hi_tau = BigComplex::from_f64_parts(0.21, 1.05, 256);
    let hi = eval_l(&hi_tau, 256).unwrap();
    assert!(lo.dist(&hi.with_prec(128)).to_f64() < 2f64.powi(-118));

    // class polynomial: identical integer output at both precisions
    let a = rrcf::classfield::class_polynomial(-8, 10, 128).unwrap();
    let b = rrcf::classfield::class_polynomial(-8, 10, 256).unwrap();
    assert_eq!(a.poly, b.poly);
}

#[test]
fn reported_coefficients_stable_when_truncation_grows() {
    // recomputing any builder at higher truncation preserves the prefix
    use rrcf::etaforms::{f_series, j_series, k_series, l_series, r_series};
    for (a, b) in [
        (l_series(40), l_series(120)),
        (r_series(40), r_series(120)),
        (k_series(40), k_series(120)),
        (f_series(40), f_series(120)),
        (j_series(40), j_series(120)),
    ] {
        assert!(agree_on_overlap(&a, &b));
    }
}

#[test]
fn modular_equation_degree_equals_psi() {
    // deg_X L_n = psi(n) for levels coprime to 10 (3, 7, 13 checked elsewhere)
    for n in [9u32, 11] {
        let poly = rrcf::modeq::derive_modeq(n).unwrap();
        assert_eq!(poly.deg_x(), rrcf::modeq::psi(n), "level {n}");
        assert_eq!(poly.deg_y(), rrcf::modeq::psi(n), "level {n}");
    }
}

#[test]
fn ligozat_order_at_zero_matches_numeric_decay() {
    // f has a double zero at the cusp 0 on Gamma_0(10) with width 10:
    // |f(i/t)| ~ exp(-2 pi t * ord/width) = exp(-2 pi t / 5).
    use rrcf::numeric::eval_f;
    let prec = 128;
    let slope_at = |t: f64| -> f64 {
        let tau = BigComplex::from_f64_parts(0.0, 1.0 / t, prec);
        eval_f(&tau, prec).unwrap().abs().to_f64().ln()
    };
    let (t1, t2) = (6.0, 9.0);
    let slope = (slope_at(t1) - slope_at(t2)) / (2.0 * std::f64::consts::PI * (t2 - t1));
    let expect = 2.0 / 10.0;
    assert!(
        (slope - expect).abs() < 1e-3,
        "decay slope {slope} vs ord/width {expect}"
    );
}

#[test]
fn identities_survive_doubled_truncation() {
    assert!(rrcf::identities::verify_f_in_l(240));
    assert!(rrcf::identities::verify_j_in_f(240));
    assert!(rrcf::identities::verify_j_in_l(240));
    assert!(rrcf::identities::verify_r_power_identities(240));
}
