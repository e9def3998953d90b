use std::f64::consts::PI;

use hecke4::eigen::coefficient_table;
use hecke4::spectral::{
    boundary_points, canonical_order, classify, condition_d, eig_from_z, in_building_spectrum, in_s, random_tag,
    sample_family, z_from_eig, EigTriple, Family, FamilyKind, FamilyTag, SpectralPoint, TOL,
};
use hecke4::{Complex64, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn tag(f: Family) -> FamilyTag {
    FamilyTag::new(f)
}

const PERMS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

fn outside(q: f64) -> [Complex64; 4] {
    [c(q, 0.0), c(1.0 / q, 0.0), cis(PI / 3.0), cis(-PI / 3.0)]
}

#[test]
fn eigenvalue_examples() {
    let s = 2f64.sqrt();
    let lam = eig_from_z(&[c(2.0 * s, 0.0), c(s, 0.0), c(1.0 / s, 0.0), c(0.5 / s, 0.0)], 2).unwrap();
    assert!(lam.relative_distance(&EigTriple::new(c(15.0, 0.0), c(35.0, 0.0), c(15.0, 0.0))) < 1e-14);
    let lam = eig_from_z(&[c(1.0, 0.0); 4], 2).unwrap();
    assert!((lam.lambda1 - c(8.0 * s, 0.0)).norm() < 1e-12);
    assert!((lam.lambda2 - c(24.0, 0.0)).norm() < 1e-12);
    let lam = eig_from_z(&[c(0.0, 1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, -1.0)], 2).unwrap();
    assert!(lam.lambda1.norm() < 1e-14 && lam.lambda3.norm() < 1e-14);
    assert!((lam.lambda2 - c(8.0, 0.0)).norm() < 1e-13);
    assert!(matches!(eig_from_z(&[c(1.0, 0.0); 4], 1), Err(Error::InvalidQ(1))));
}

#[test]
fn inversion_examples() {
    let roots = z_from_eig(&EigTriple::new(c(15.0, 0.0), c(35.0, 0.0), c(15.0, 0.0)), 2).unwrap();
    let s = 2f64.sqrt();
    let want = SpectralPoint::unchecked([c(2.0 * s, 0.0), c(s, 0.0), c(1.0 / s, 0.0), c(0.5 / s, 0.0)]);
    assert!(roots.point.distance(&want) < 1e-12);
    let lam = eig_from_z(&[c(1.0, 0.0); 4], 2).unwrap();
    let roots = z_from_eig(&lam, 2).unwrap();
    assert_eq!(roots.multiplicities, [4; 4]);
}

#[test]
fn membership_examples() {
    assert!(in_s(&outside(2.0), TOL));
    let mut bad = outside(2.0);
    bad[3] = cis(PI / 3.0);
    assert!(!in_s(&bad, TOL));
    assert!(matches!(SpectralPoint::new(bad), Err(Error::ProductConstraint(_))));
    for kind in FamilyKind::FAMILIES {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let z = sample_family(&random_tag(kind, &mut rng).unwrap(), 3).unwrap();
            assert!(in_s(&z.z(), TOL));
        }
    }
}

#[test]
fn classification_examples() {
    let t = PI / 5.0;
    let z = [cis(t) * 2.0, cis(t), cis(-3.0 * t), cis(t) / 2.0];
    assert!(classify(&z, 2, TOL).unwrap().same_as(&tag(Family::Family2 { theta: t }), 2));
    assert_eq!(classify(&outside(2.0), 2, TOL).unwrap().kind(), FamilyKind::NotInSpectrum);
    let z = [cis(0.3), cis(1.1), cis(-2.0), cis(0.6)];
    assert_eq!(classify(&z, 2, TOL).unwrap().kind(), FamilyKind::Tempered);
}

#[test]
fn sample_examples() {
    let s = 2f64.sqrt();
    let p = sample_family(&tag(Family::Trivial { k: 1 }), 2).unwrap();
    let want = SpectralPoint::unchecked([c(0.0, 2.0 * s), c(0.0, s), c(0.0, 1.0 / s), c(0.0, 0.5 / s)]);
    assert!(p.distance(&want) < 1e-14);
    let r3 = 3f64.sqrt();
    let p = sample_family(&tag(Family::Family3 { theta1: 0.7, sign: -1 }), 3).unwrap();
    let want = [cis(0.7) * r3, -cis(-0.7) * r3, cis(0.7) / r3, -cis(-0.7) / r3];
    assert!(p.distance(&SpectralPoint::unchecked(want)) < 1e-14);
    let p = sample_family(&tag(Family::Family4 { theta1: 0.2, theta2: 1.0 }), 2).unwrap();
    let want = [cis(0.2) * s, cis(1.0), cis(-1.4), cis(0.2) / s];
    assert!(p.distance(&SpectralPoint::unchecked(want)) < 1e-14);
    assert!(sample_family(&tag(Family::NotInSpectrum), 2).is_err());
}

#[test]
fn building_spectrum_examples() {
    let lam = |f: Family, q| eig_from_z(&sample_family(&tag(f), q).unwrap().z(), q).unwrap();
    let temp = Family::Tempered { theta1: 0.3, theta2: 1.1, theta3: -2.0 };
    assert!(in_building_spectrum(&lam(temp, 2), 2, TOL).unwrap());
    assert!(!in_building_spectrum(&lam(Family::Trivial { k: 0 }, 2), 2, TOL).unwrap());
    assert!(!in_building_spectrum(&lam(Family::Family2 { theta: 0.4 }, 2), 2, TOL).unwrap());
}

#[test]
fn condition_d_examples() {
    for q in [2u64, 3] {
        for f in [Family::Trivial { k: 2 }, Family::Family4 { theta1: 0.5, theta2: -1.2 }] {
            let z = sample_family(&tag(f), q).unwrap().z();
            let t = coefficient_table(z, q).unwrap();
            assert!(condition_d(&z, &t).unwrap().holds, "{f:?}");
        }
    }
    let z = outside(2.0);
    let d = condition_d(&z, &coefficient_table(z, 2).unwrap()).unwrap();
    assert!(!d.holds);
    let w = d.witness.unwrap();
    assert_eq!(w.index[0], 1);
    assert!(w.modulus > 1.0);
    let other = sample_family(&tag(Family::Family2 { theta: 0.1 }), 2).unwrap().z();
    assert!(matches!(condition_d(&z, &coefficient_table(other, 2).unwrap()), Err(Error::RegimeMismatch(_))));
}

#[test]
fn near_double_roots_stay_apart() {
    // Two roots 2.4e-4 apart: not a multiple root, must not be merged.
    let t = tag(Family::Tempered { theta1: 0.932491, theta2: -1.084332, theta3: 0.932249 });
    let z = sample_family(&t, 2).unwrap();
    let roots = z_from_eig(&eig_from_z(&z.z(), 2).unwrap(), 2).unwrap();
    assert_eq!(roots.multiplicities, [1; 4]);
    assert!(roots.point.multiset_distance(&z) < 1e-9);
    assert!(classify(&roots.point.z(), 2, TOL).unwrap().same_as(&t, 2));
}

#[test]
fn boundary_points_are_degenerate_members() {
    for q in [2u64, 3] {
        for (kind, p) in boundary_points(q) {
            assert!(in_s(&p.z(), TOL));
            let t = classify(&p.z(), q, TOL).unwrap();
            assert_eq!(t.kind(), kind);
            assert!(t.degenerate);
        }
    }
}

fn kind_strategy() -> impl Strategy<Value = FamilyKind> {
    prop::sample::select(FamilyKind::FAMILIES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn z_round_trip(kind in kind_strategy(), seed in any::<u64>(), q in 2u64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tag(kind, &mut rng).unwrap();
        let z = sample_family(&t, q).unwrap();
        let roots = z_from_eig(&eig_from_z(&z.z(), q).unwrap(), q).unwrap();
        // Random draws land on a repeated root with probability zero; skip
        // the rare near-collisions where the inversion loses digits.
        let gap = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .map(|(a, b)| (z.z()[a] - z.z()[b]).norm()).fold(f64::MAX, f64::min);
        prop_assume!(gap > 1e-3);
        prop_assert!(roots.point.multiset_distance(&z) <= 1e-9, "{} vs {}", z, roots.point);
    }

    #[test]
    fn lambda_round_trip(a in -50.0..50.0f64, b in -50.0..50.0f64, l2 in -100.0..100.0f64, i2 in -1.0..1.0f64, q in 2u64..6) {
        let lam = EigTriple::new(c(a, b), c(l2, i2), c(a, -b));
        let back = eig_from_z(&z_from_eig(&lam, q).unwrap().point.z(), q).unwrap();
        prop_assert!(back.relative_distance(&lam) <= 1e-9, "{:?} vs {:?}", lam, back);
    }

    #[test]
    fn permutation_invariance(kind in kind_strategy(), seed in any::<u64>(), q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = sample_family(&random_tag(kind, &mut rng).unwrap(), q).unwrap().z();
        let base = classify(&z, q, TOL).unwrap();
        for p in PERMS {
            let zp = [z[p[0]], z[p[1]], z[p[2]], z[p[3]]];
            prop_assert_eq!(canonical_order(zp), canonical_order(z));
            let t = classify(&zp, q, TOL).unwrap();
            prop_assert!(t.same_as(&base, q) && t.degenerate == base.degenerate);
        }
    }

    #[test]
    fn conjugate_symmetry(kind in kind_strategy(), seed in any::<u64>(), q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_family(&random_tag(kind, &mut rng).unwrap(), q).unwrap();
        let cz = p.conj().z();
        prop_assert!(in_s(&cz, TOL));
        prop_assert_eq!(classify(&cz, q, TOL).unwrap().kind(), kind);
    }

    #[test]
    fn three_equal_moduli_are_unit(rho in prop_oneof![Just(1.0), 0.2..5.0f64], a in -PI..PI, b in -PI..PI, t in -PI..PI) {
        let z = [Complex64::from_polar(rho, a), Complex64::from_polar(rho, b), Complex64::from_polar(rho, t),
                 Complex64::from_polar(rho.powi(-3), -(a + b + t))];
        if in_s(&z, TOL) {
            prop_assert!(z.iter().all(|x| (x.norm() - 1.0).abs() < 1e-6), "{:?}", z);
        }
        if (rho - 1.0).abs() > 1e-3 {
            prop_assert!(!in_s(&z, TOL));
        }
    }

    #[test]
    fn sample_json_round_trip(kind in kind_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tag(kind, &mut rng).unwrap();
        let back: FamilyTag = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
        let p = sample_family(&t, 2).unwrap();
        let back: SpectralPoint = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert!(back.distance(&p) == 0.0);
    }
}
