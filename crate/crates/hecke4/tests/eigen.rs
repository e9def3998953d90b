use std::f64::consts::PI;

use hecke4::eigen::{
    coefficient_table, eval, generic_coeffs, generic_coeffs_unchecked, one_pair_coeffs_at, ray_values,
    two_pairs_coeffs_at, Eigenfunction, Ray, Regime,
};
use hecke4::geometry::enumerate_ball;
use hecke4::harness::{eigen_residual, RESIDUAL_TOL};
use hecke4::spectral::{boundary_points, eig_from_z, random_tag, sample_family, Family, FamilyKind, FamilyTag};
use hecke4::{Complex64, Error, VertexId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn v(ell: u32, m: u32, n: u32) -> VertexId {
    VertexId::new(ell, m, n).unwrap()
}

fn sample(f: Family, q: u64) -> [Complex64; 4] {
    sample_family(&FamilyTag::new(f), q).unwrap().z()
}

fn all_regimes(q: u64) -> Vec<[Complex64; 4]> {
    let mut out = vec![
        sample(Family::Trivial { k: 0 }, q),
        sample(Family::Family2 { theta: 0.4 }, q),
        sample(Family::Family3 { theta1: 0.9, sign: 1 }, q),
        sample(Family::Family4 { theta1: -0.3, theta2: 1.7 }, q),
        sample(Family::Tempered { theta1: 0.3, theta2: 1.1, theta3: -2.0 }, q),
    ];
    out.extend(boundary_points(q).into_iter().map(|(_, p)| p.z()));
    out
}

#[test]
fn normalized_at_origin() {
    for q in [2u64, 3, 5] {
        for z in all_regimes(q) {
            let t = coefficient_table(z, q).unwrap();
            assert!((t.origin_sum() - 1.0).norm() < 1e-9, "{z:?}");
            assert!((eval(z, q, VertexId::ORIGIN).unwrap() - 1.0).norm() < 1e-9);
        }
    }
}

#[test]
fn first_neighbor_value() {
    for q in [2u64, 3] {
        let deg = (q * q * q + q * q + q + 1) as f64;
        for z in all_regimes(q) {
            let lam = eig_from_z(&z, q).unwrap();
            let f = eval(z, q, v(1, 0, 0)).unwrap();
            assert!((f - lam.lambda1 / deg).norm() < 1e-9 * (1.0 + f.norm()), "{z:?}");
        }
    }
}

#[test]
fn trivial_is_constant() {
    for q in [2u64, 3] {
        let f = Eigenfunction::new(sample(Family::Trivial { k: 0 }, q), q).unwrap().on_ball(10).unwrap();
        assert!(f.values.iter().all(|x| (x - 1.0).norm() < 1e-9));
    }
}

#[test]
fn regimes_are_detected() {
    let q = 2;
    assert_eq!(coefficient_table(sample(Family::Family2 { theta: 0.4 }, q), q).unwrap().regime, Regime::Generic);
    for (kind, p) in boundary_points(q) {
        let want = if kind == FamilyKind::Family3 { Regime::TwoPairs } else { Regime::OnePair };
        assert_eq!(coefficient_table(p.z(), q).unwrap().regime, want, "{kind:?}");
    }
    assert!(matches!(coefficient_table([c(1.0, 0.0); 4], q), Err(Error::UnsupportedMultiplicity(4))));
    let z = boundary_points(q)[0].1.z();
    assert!(matches!(generic_coeffs(z, q), Err(Error::NearDegenerate(_))));
}

#[test]
fn ball_matches_pointwise() {
    for z in all_regimes(3) {
        let f = Eigenfunction::new(z, 3).unwrap();
        let ball = f.on_ball(7).unwrap();
        for x in enumerate_ball(7) {
            let a = f.value(x).unwrap();
            assert!((ball.get(x) - a).norm() <= 1e-11 * (1.0 + a.norm()));
        }
    }
    let f = Eigenfunction::new(sample(Family::Trivial { k: 0 }, 2), 2).unwrap();
    assert!(matches!(f.value(v(201, 0, 0)), Err(Error::Range(201))));
}

#[test]
fn residuals_vanish_in_every_regime() {
    for q in [2u64, 3] {
        for z in all_regimes(q) {
            let p = hecke4::spectral::SpectralPoint::unchecked(z);
            let r = eigen_residual(&p, q, 12).unwrap();
            assert!(r.overall() <= RESIDUAL_TOL, "{z:?}: {r:?}");
        }
    }
}

fn limit_gap(exact: &Eigenfunction, near: [Complex64; 4], q: u64) -> f64 {
    let g = Eigenfunction::from_table(generic_coeffs_unchecked(near, q));
    enumerate_ball(6)
        .into_iter()
        .map(|x| {
            let a = exact.value(x).unwrap();
            (a - g.value(x).unwrap()).norm() / a.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

#[test]
fn degenerate_tables_are_generic_limits() {
    let q = 2;
    let (a, b) = (cis(0.7) * 1.3, cis(-2.1) * 0.8);
    let d = c(1.0, 0.0) / (a * a * b);
    let one = Eigenfunction::from_table(one_pair_coeffs_at(a, b, d, q));
    for h in [1e-4, 1e-5, 1e-6] {
        let s = 1.0 + h;
        let g1 = limit_gap(&one, [a, a * s, b, d / s], q);
        assert!(g1 <= 100.0 * h, "one pair h={h}: {g1}");
    }
}

#[test]
fn two_pairs_is_limit_of_one_pair() {
    let q = 3;
    let (a, b) = (cis(0.2) * 1.5, cis(-0.2) / 1.5);
    let two = Eigenfunction::from_table(two_pairs_coeffs_at(a, b, q));
    for h in [1e-4, 1e-5, 1e-6] {
        let one = Eigenfunction::from_table(one_pair_coeffs_at(a, b * (1.0 + h), b / (1.0 + h), q));
        for x in enumerate_ball(6) {
            let t = two.value(x).unwrap();
            assert!((t - one.value(x).unwrap()).norm() <= 100.0 * h * t.norm().max(1.0), "{x} h={h}");
        }
    }
}

#[test]
fn ray_examples() {
    let z = sample(Family::Tempered { theta1: 0.3, theta2: 1.1, theta3: -2.0 }, 2);
    let r = ray_values(z, 2, Ray::LL0, 10, 0.1).unwrap();
    assert_eq!(r.values.len(), 11);
    assert!((r.values[0] - 1.0).norm() < 1e-9);
    assert!(r.normalized[10].norm() < r.values[10].norm());
    assert_eq!(Ray::LLL.vertex(4), v(4, 4, 4));
    assert!(ray_values(z, 2, Ray::L00, 0, 0.1).is_err());
}

#[test]
fn vanishing_factor_kills_terms() {
    // z_1 = q z_2 zeroes every coefficient with index 0 placed before 1.
    let z = [c(1.4, 0.2), c(0.7, 0.1), c(-0.5, 0.9), c(0.3, -1.2)];
    let t = generic_coeffs_unchecked(z, 2);
    let zero = t.terms.iter().filter(|t| t.coeff.is_zero(0.0)).count();
    assert_eq!(zero, 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residual_on_random_samples(kind in prop::sample::select(FamilyKind::FAMILIES.to_vec()), seed in any::<u64>(), q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_family(&random_tag(kind, &mut rng).unwrap(), q).unwrap();
        let r = eigen_residual(&p, q, 10).unwrap();
        prop_assert!(r.overall() <= RESIDUAL_TOL, "{}: {:?}", p, r);
    }

    #[test]
    fn conjugate_symmetry(kind in prop::sample::select(FamilyKind::FAMILIES.to_vec()), seed in any::<u64>(), q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_family(&random_tag(kind, &mut rng).unwrap(), q).unwrap();
        let f = Eigenfunction::new(p.z(), q).unwrap().on_ball(6).unwrap();
        let g = Eigenfunction::new(p.conj().z(), q).unwrap().on_ball(6).unwrap();
        for (a, b) in f.values.iter().zip(&g.values) {
            prop_assert!((a.conj() - b).norm() <= 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn sum_rule(a in -PI..PI, b in -PI..PI, r in 0.3..3.0f64, s in 0.3..3.0f64, q in 2u64..6) {
        let z0 = Complex64::from_polar(r, a);
        let z1 = Complex64::from_polar(s, b);
        let z2 = Complex64::from_polar(1.0 / r, 1.0 - a);
        let z3 = c(1.0, 0.0) / (z0 * z1 * z2);
        let z = [z0, z1, z2, z3];
        let gap = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| (z[i] - z[j]).norm()).fold(f64::MAX, f64::min);
        prop_assume!(gap > 1e-2);
        prop_assert!((generic_coeffs(z, q).unwrap().origin_sum() - 1.0).norm() < 1e-8);
    }
}
