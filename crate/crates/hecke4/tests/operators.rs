use hecke4::geometry::{enumerate_ball, interior};
use hecke4::harness::row_sum_violation;
use hecke4::operators::{
    adjoint_defect, apply, inner_product, norm, regular_degrees, row_sum, stencil, weighted_entries, BallFunction,
};
use hecke4::spectral::eig_from_z;
use hecke4::{Complex64, Error, VertexId};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(ell: u32, m: u32, n: u32) -> VertexId {
    VertexId::new(ell, m, n).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_fn(radius: u32, support: u32, rng: &mut impl Rng) -> BallFunction {
    BallFunction::from_fn(radius, |x| {
        if x.ell <= support {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            c(0.0, 0.0)
        }
    })
}

#[test]
fn stencil_examples() {
    for q in [2u64, 3, 5] {
        assert_eq!(stencil(v(0, 0, 0), 1, q).unwrap().terms, vec![(v(1, 0, 0), q * q * q + q * q + q + 1)]);
        for l in 1..5 {
            let mut got = stencil(v(l, l, 0), 2, q).unwrap().terms;
            got.sort();
            let mut want =
                vec![(v(l - 1, l - 1, 0), q.pow(4)), (v(l + 1, l, 1), q * (q + 1) * (q + 1)), (v(l + 1, l + 1, 0), 1)];
            want.sort();
            assert_eq!(got, want);
        }
        let mut got = stencil(v(5, 3, 2), 3, q).unwrap().terms;
        got.sort();
        let mut want = vec![(v(4, 3, 2), q * q * q), (v(5, 2, 2), q * q), (v(5, 3, 1), q), (v(6, 4, 3), 1)];
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn row_sum_examples() {
    assert_eq!(row_sum(v(7, 3, 1), 2, 3).unwrap(), 130);
    assert_eq!(row_sum(v(5, 5, 5), 1, 2).unwrap(), 15);
    assert_eq!(row_sum(v(4, 4, 0), 3, 2).unwrap(), 15);
    assert_eq!(regular_degrees(2), [15, 35, 15]);
    assert!(matches!(stencil(v(1, 0, 0), 5, 2), Err(Error::InvalidStep(5))));
    assert!(matches!(stencil(v(1, 0, 0), 1, 1), Err(Error::InvalidQ(1))));
}

#[test]
fn row_sums_on_ball_30() {
    for q in [2u64, 3, 4, 5] {
        assert_eq!(row_sum_violation(q, 30).unwrap(), None, "q={q}");
    }
}

#[test]
fn constant_function() {
    let one = BallFunction::from_fn(8, |_| c(1.0, 0.0));
    for (i, want) in [(1u8, 15.0), (2, 35.0), (3, 15.0)] {
        let g = apply(&one, i, 2).unwrap();
        assert!(g.values.iter().all(|x| *x == c(want, 0.0)));
    }
    let sq = 2f64.sqrt();
    let lam = eig_from_z(&[c(2.0 * sq, 0.0), c(sq, 0.0), c(1.0 / sq, 0.0), c(0.5 / sq, 0.0)], 2).unwrap();
    assert!((lam.lambda1 - c(15.0, 0.0)).norm() < 1e-12);
    assert!((lam.lambda2 - c(35.0, 0.0)).norm() < 1e-12);
}

#[test]
fn indicator_of_origin() {
    for q in [2u64, 3] {
        let f = BallFunction::indicator(6, VertexId::ORIGIN);
        let g = apply(&f, 3, q).unwrap();
        for x in enumerate_ball(5) {
            let want = stencil(x, 3, q).unwrap().coefficient_of(VertexId::ORIGIN).unwrap_or(0);
            assert_eq!(g.get(x), c(want as f64, 0.0));
        }
        assert_eq!(g.get(v(1, 0, 0)), c((q * q * q) as f64, 0.0));
    }
}

#[test]
fn inner_products() {
    let f = BallFunction::indicator(3, VertexId::ORIGIN);
    assert!((inner_product(&f, &f, 2).unwrap() - c(1.0 / 315.0, 0.0)).norm() < 1e-15);
    let g = BallFunction::indicator(3, v(2, 1, 0));
    assert_eq!(inner_product(&f, &g, 2).unwrap(), c(0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (a, b) = (random_fn(5, 5, &mut rng), random_fn(5, 5, &mut rng));
    let ab = inner_product(&a, &b, 3).unwrap();
    let ba = inner_product(&b, &a, 3).unwrap();
    assert!((ab - ba.conj()).norm() < 1e-15);
    assert!(norm(&a, 3).unwrap() > 0.0);
    assert!(matches!(inner_product(&a, &f, 2), Err(Error::DomainMismatch(5, 3))));
}

#[test]
fn adjoint_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [2u64, 3] {
        let (f, g) = (random_fn(8, 6, &mut rng), random_fn(8, 6, &mut rng));
        let scale = norm(&f, q).unwrap() * norm(&g, q).unwrap() * 200.0;
        assert!(adjoint_defect(&f, &g, 1, q).unwrap() <= 1e-12 * scale);
        assert!(adjoint_defect(&f, &f, 2, q).unwrap() <= 1e-12 * scale);
        let e = BallFunction::indicator(8, v(3, 2, 1));
        assert_eq!(adjoint_defect(&e, &e, 1, q).unwrap(), 0.0);
        let wide = random_fn(8, 7, &mut rng);
        assert!(matches!(adjoint_defect(&wide, &g, 1, q), Err(Error::BoundaryTooClose)));
    }
}

#[test]
fn sparse_entries() {
    let radius = 4;
    let entries = weighted_entries(radius, 2, 3).unwrap();
    let rows: usize = interior(radius).unwrap().iter().map(|&x| stencil(x, 2, 3).unwrap().terms.len()).sum();
    assert_eq!(entries.len(), rows);
    let zero = BigRational::from_integer(0.into());
    assert!(entries.iter().all(|e| e.2 > zero));
    // Symmetric where both endpoints are interior (weights symmetrize A_2).
    let inner = enumerate_ball(radius - 1).len();
    for (r, col, w) in &entries {
        if *col < inner {
            let back = entries.iter().find(|e| e.0 == *col && e.1 == *r).expect("reverse edge");
            assert_eq!(&back.2, w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn apply_is_linear(seed in any::<u64>(), i in 1u8..=3, q in 2u64..5, ar in -2.0..2.0f64, bi in -2.0..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_fn(6, 6, &mut rng), random_fn(6, 6, &mut rng));
        let (a, b) = (c(ar, 0.5), c(-0.25, bi));
        let lhs = apply(&BallFunction::linear_combination(a, &f, b, &g).unwrap(), i, q).unwrap();
        let rhs = BallFunction::linear_combination(a, &apply(&f, i, q).unwrap(), b, &apply(&g, i, q).unwrap()).unwrap();
        for (x, y) in lhs.values.iter().zip(&rhs.values) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn adjointness(seed in any::<u64>(), i in 1u8..=3, q in 2u64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_fn(7, 5, &mut rng), random_fn(7, 5, &mut rng));
        let scale = norm(&f, q).unwrap() * norm(&g, q).unwrap() * (q as f64).powi(5);
        prop_assert!(adjoint_defect(&f, &g, i, q).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn regular_row_sums(l in 0u32..60, a in 0u32..60, b in 0u32..60, q in 2u64..12, i in 1u8..=3) {
        let (m, n) = (a.min(l), b.min(a).min(l));
        prop_assert_eq!(row_sum(v(l, m, n), i, q).unwrap(), regular_degrees(q)[(i - 1) as usize]);
    }
}
