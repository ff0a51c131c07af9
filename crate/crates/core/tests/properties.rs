//! Property suites: randomized checks of the structural invariants that the
//! deterministic fixtures cannot sweep.

use conelinks::angles::{gb_area, ConeTuple, RationalAngle};
use conelinks::classifier::classify_all;
use conelinks::cloud::{
    decay_holds, find_wide_triangle, greedy_net, packing_cap, shrink_guarantees, shrink_sequence,
    shrink_step, wide_triple_ok, PointCloud,
};
use conelinks::covers::{conjugate_equivalent, Constellation};
use conelinks::geometry::{build_surface, estimate_distances, solve_triangle};
use conelinks::interval::{asin, cos, sin, Dyadic, Interval};
use conelinks::narrow::{m_n, reg_inc_beta, RealAngle};
use conelinks::perm::Perm;
use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use std::cmp::Ordering;

fn perm_strategy(d: usize) -> impl Strategy<Value = Perm> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(Perm::new)
}

/// Random identity-product triple; transitivity is left to prop_assume.
fn constellation_strategy(d: usize) -> impl Strategy<Value = Constellation> {
    (perm_strategy(d), perm_strategy(d)).prop_map(|(a, b)| {
        let c = a.then(&b).inverse();
        Constellation::new([a, b, c])
    })
}

fn angle_list_strategy() -> impl Strategy<Value = Vec<RationalAngle>> {
    prop::collection::vec(
        (1i64..=7, 1i64..=4)
            .prop_filter("angle in (0, 2pi)", |(n, d)| n < &(2 * d))
            .prop_map(|(n, d)| RationalAngle::new(n, d)),
        1..6,
    )
}

/// Small lattice clouds: coordinates on a 1/8 grid force exact distance ties,
/// exercising the exact comparison fallbacks.
fn lattice_cloud_strategy(dim: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(
        prop::collection::vec((-12i32..=12).prop_map(|v| v as f64 / 8.0), dim),
        2..24,
    )
    .prop_filter_map("needs >= 2 distinct points", move |rows| {
        match PointCloud::new(dim, rows) {
            Ok(c) if c.len() >= 2 => Some(c),
            _ => None,
        }
    })
}

fn alpha_strategy() -> impl Strategy<Value = Ratio<i64>> {
    (1i64..=4, 2i64..=9)
        .prop_filter("alpha in (0,1)", |(p, q)| p < q)
        .prop_map(|(p, q)| Ratio::new(p, q))
}

proptest! {
    #[test]
    fn canonical_form_is_conjugation_invariant(
        (c, g) in (3usize..7).prop_flat_map(|d| (constellation_strategy(d), perm_strategy(d)))
    ) {
        prop_assume!(c.is_transitive());
        let conj = Constellation::new([
            c.sigma[0].conjugate_by(&g),
            c.sigma[1].conjugate_by(&g),
            c.sigma[2].conjugate_by(&g),
        ]);
        prop_assert_eq!(c.canonical_key(false), conj.canonical_key(false));
        prop_assert!(conjugate_equivalent(&c, &conj));
        // idempotence: the canonical form is its own canonical form
        let canon = c.canonical(false);
        prop_assert_eq!(&canon.canonical(false), &canon);
        prop_assert!(conjugate_equivalent(&c, &canon));
    }

    #[test]
    fn mirror_is_an_involution(
        c in (2usize..7).prop_flat_map(constellation_strategy)
    ) {
        let m = c.mirror();
        prop_assert_eq!(&m.mirror(), &c);
        prop_assert!(m.product_is_identity());
        for j in 0..3 {
            prop_assert_eq!(m.sigma[j].cycle_type(), c.sigma[j].cycle_type());
        }
    }

    #[test]
    fn gb_area_ignores_angle_order(
        v in angle_list_strategy().prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let (orig, shuffled) = v;
        let a = ConeTuple::new(orig);
        let b = ConeTuple::new(shuffled);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(gb_area(&a), gb_area(&b));
    }

    #[test]
    fn solved_triangles_invert_cleanly(
        a0 in 0.15f64..0.85,
        a1 in 0.15f64..0.85,
        a2 in 0.15f64..0.85,
    ) {
        let pi = std::f64::consts::PI;
        let ang = [a0 * pi, a1 * pi, a2 * pi];
        let sum: f64 = ang.iter().sum();
        prop_assume!(sum > 1.02 * pi);
        // polar triangle inequalities with margin
        for i in 0..3 {
            prop_assume!(ang[(i + 1) % 3] + ang[(i + 2) % 3] < pi + ang[i] - 0.02);
        }
        let t = solve_triangle(ang).unwrap();
        prop_assert!((t.area - (sum - pi)).abs() < 1e-12);
        for i in 0..3 {
            prop_assert!(t.sides[i] > 0.0 && t.sides[i] < pi);
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            prop_assert!(t.sides[i] < t.sides[j] + t.sides[k] + 1e-12);
            // law of cosines recovers the angle that produced the sides
            let num = t.sides[i].cos() - t.sides[j].cos() * t.sides[k].cos();
            let den = t.sides[j].sin() * t.sides[k].sin();
            prop_assert!((num / den - ang[i].cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn interval_ops_enclose_exact_values(
        a in -100.0f64..100.0,
        b in -100.0f64..100.0,
    ) {
        let prec = 64;
        let ia = Interval::from_f64(a, prec);
        let ib = Interval::from_f64(b, prec);
        let contains = |iv: &Interval, d: &Dyadic| {
            iv.lo.cmp(d) != Ordering::Greater && iv.hi.cmp(d) != Ordering::Less
        };
        let (da, db) = (Dyadic::from_f64(a), Dyadic::from_f64(b));
        prop_assert!(contains(&ia.add(&ib), &Dyadic::add_exact(&da, &db)));
        prop_assert!(contains(&ia.mul(&ib), &Dyadic::mul_exact(&da, &db)));
        prop_assert!(contains(&ia.sub(&ib), &Dyadic::add_exact(&da, &db.neg())));
        if a >= 0.0 {
            let s = ia.sqrt();
            prop_assert!(contains(&s.mul(&s), &da));
        }
    }

    #[test]
    fn interval_trig_identities(x in -3.9f64..3.9) {
        let prec = 96;
        let ix = Interval::from_f64(x, prec);
        let (s, c) = (sin(&ix), cos(&ix));
        let unit = s.mul(&s).add(&c.mul(&c));
        prop_assert!(unit.contains_f64(1.0));
        prop_assert!(unit.width() < 1e-20);
    }

    #[test]
    fn asin_inverts_sin_on_unit_interval(x in 0.0f64..=1.0) {
        let prec = 96;
        let ix = Interval::from_f64(x, prec);
        let roundtrip = sin(&asin(&ix));
        prop_assert!(roundtrip.contains_f64(x));
        prop_assert!(roundtrip.width() < 1e-20);
    }

    #[test]
    fn cloud_shrink_and_net_laws(
        cloud in (2usize..=3).prop_flat_map(lattice_cloud_strategy),
        alpha in alpha_strategy(),
    ) {
        let (x, sp) = shrink_step(&cloud, alpha).unwrap();
        prop_assert_eq!(shrink_guarantees(&cloud, &x, &sp, alpha), [true; 3]);
        let seq = shrink_sequence(&cloud, alpha, cloud.len().max(3));
        prop_assert!(decay_holds(&seq, alpha));
        let af = *alpha.numer() as f64 / *alpha.denom() as f64;
        let r = af * cloud.diameter() / 4.0;
        if r > 0.0 {
            let net = greedy_net(&cloud, r);
            prop_assert!(BigInt::from(net.len()) <= packing_cap(cloud.dim(), alpha));
        }
    }

    #[test]
    fn wide_triangle_returns_satisfy_postcondition(
        cloud in (2usize..=3).prop_flat_map(lattice_cloud_strategy),
        eps_frac in 0.05f64..0.95,
    ) {
        let eps = eps_frac * std::f64::consts::PI;
        if let Some([x, y, z]) = find_wide_triangle(&cloud, eps) {
            prop_assert!(wide_triple_ok(&x, &y, &z, eps));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn narrow_thresholds_are_monotone(
        q in 7i64..40,
        raw in prop::collection::vec(1i64..40, 2),
        n in 2usize..6,
    ) {
        let p1 = raw[0].min(q - 1).max(1);
        let p2 = raw[1].min(q - 1).max(1);
        prop_assume!(p1 < p2);
        let m_small = m_n(RealAngle::Exact(RationalAngle::new(p1, q)), n).unwrap();
        let m_large = m_n(RealAngle::Exact(RationalAngle::new(p2, q)), n).unwrap();
        // m_n does not increase with delta
        prop_assert!(m_small >= m_large);
        // and does not decrease with n
        let m_up = m_n(RealAngle::Exact(RationalAngle::new(p1, q)), n + 1).unwrap();
        prop_assert!(m_up >= m_small);
    }

    #[test]
    fn beta_enclosures_are_monotone_in_t(
        a in 1u32..40,
        b in 1u32..40,
        n in 2usize..7,
    ) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let t1 = Ratio::new(BigInt::from(lo), BigInt::from(41));
        let t2 = Ratio::new(BigInt::from(hi), BigInt::from(41));
        let i1 = reg_inc_beta(&t1, n, 128);
        let i2 = reg_inc_beta(&t2, n, 128);
        // enclosures of a nondecreasing function can never be fully inverted
        prop_assert!(i1.lo.cmp(&i2.hi) != Ordering::Greater);
        prop_assert!(i1.lo.to_f64() >= -1e-30);
        prop_assert!(i2.hi.to_f64() <= 1.0 + 1e-30);
    }
}

/// Cone-point distance matrices are shortest-path matrices, so they must be
/// symmetric, zero-diagonal, triangle-inequality-consistent, and dominated by
/// the sampled diameter.
#[test]
fn distance_matrices_are_metric_like() {
    let classification = classify_all();
    for record in &classification.records {
        let real = &record.realizations[0];
        let surface = build_surface(&real.cover, real.base);
        let report = estimate_distances(&surface, 2);
        let m = &report.cone_matrix;
        let k = m.len();
        for i in 0..k {
            assert!(m[i][i].abs() < 1e-12);
            for j in 0..k {
                assert!((m[i][j] - m[j][i]).abs() < 1e-9);
                assert!(m[i][j] <= report.diameter_lower + 1e-9);
                for l in 0..k {
                    assert!(m[i][j] <= m[i][l] + m[l][j] + 1e-9);
                }
            }
        }
    }
}
