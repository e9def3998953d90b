//! Coefficient tables at repeated roots.
//!
//! Obtained as limits of the generic table. The coefficients become affine
//! or quadratic in `(l, m, n)`.

use num_complex::Complex64;

use super::{dq, fac, CoefficientTable, LmnPoly, Regime, Term};

fn cpx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `1 + q + x (1 - q)` where `x = a l + b m + c n`.
fn a_of(q: f64, a: f64, b: f64, c: f64) -> LmnPoly {
    let k = 1.0 - q;
    LmnPoly::affine(1.0 + q, k * a, k * b, k * c)
}

/// Table at `z = (z1, z1, z3, z4)`. Requires `z1, z3, z4` distinct.
pub fn one_pair_coeffs_at(z1: Complex64, z3: Complex64, z4: Complex64, q: u64) -> CoefficientTable {
    let qf = q as f64;
    let k = (1.0 - qf) * (1.0 - qf * qf);
    let den = (z1 - z3).powu(2) * (z1 - z4).powu(2) * (z3 - z4) * dq(qf);
    let s = -1.0;
    // Slot of each label in the relabeled tuple.
    let zv = |label: usize| match label {
        1 => z1,
        3 => z3,
        _ => z4,
    };
    let slot = |label: usize| match label {
        1 => 0,
        3 => 2,
        _ => 3,
    };
    let f = |a: usize, b: usize| fac(zv(a), zv(b), qf);

    let mut terms = Vec::with_capacity(12);
    for (i, j) in [(3usize, 4usize), (4, 3)] {
        let si = if i % 2 == 0 { 1.0 } else { -1.0 };
        let sj = -si;
        let (zi, zj) = (zv(i), zv(j));
        let (pi, pj) = (slot(i), slot(j));
        let fij = f(i, j);

        let c = f(1, 3).powu(2) * f(1, 4).powu(2) * fij * (s * si) / den;
        terms.push(Term { index: [0, 0, pi], coeff: a_of(qf, 1.0, -1.0, 0.0) * c });

        let c = f(1, j).powu(2) * fij * (s * sj) / den;
        let p = a_of(qf, 1.0, 0.0, -1.0) * (f(1, i) * f(i, 1)) + LmnPoly::constant(z1 * zi * k);
        terms.push(Term { index: [0, pi, 0], coeff: p * c });

        let c = fij * (s * si) / den;
        let e3 = f(1, 3) * f(3, 1);
        let e4 = f(1, 4) * f(4, 1);
        let p = a_of(qf, 1.0, 0.0, 0.0) * (e3 * e4) + LmnPoly::constant((e3 * z1 * z4 + e4 * z1 * z3) * k);
        terms.push(Term { index: [0, pi, pj], coeff: p * c });

        let c = f(i, 1).powu(2) * f(1, j).powu(2) * fij * (s * si) / den;
        terms.push(Term { index: [pi, 0, 0], coeff: a_of(qf, 0.0, 1.0, -1.0) * c });

        let c = f(i, 1).powu(2) * fij * (s * sj) / den;
        let p = a_of(qf, 0.0, 1.0, 0.0) * (f(1, j) * f(j, 1)) + LmnPoly::constant(z1 * zj * k);
        terms.push(Term { index: [pi, 0, pj], coeff: p * c });

        let c = f(3, 1).powu(2) * f(4, 1).powu(2) * fij * (s * si) / den;
        terms.push(Term { index: [pi, pj, 0], coeff: a_of(qf, 0.0, 0.0, 1.0) * c });
    }
    CoefficientTable { q, regime: Regime::OnePair, z: [z1, z1, z3, z4], terms }
}

/// Table at `z = (z1, z1, z3, z3)`. Requires `z1 != z3`.
pub fn two_pairs_coeffs_at(z1: Complex64, z3: Complex64, q: u64) -> CoefficientTable {
    let qf = q as f64;
    let k = (1.0 - qf) * (1.0 - qf * qf);
    let u = fac(z1, z3, qf);
    let w = fac(z3, z1, qf);
    let inv = cpx(1.0) / ((z1 - z3).powu(4) * dq(qf));
    let p13 = z1 * z3;

    let a_lm_n = a_of(qf, 1.0, -1.0, 0.0) * a_of(qf, 0.0, 0.0, 1.0);
    let mixed = (a_of(qf, 0.0, 1.0, -1.0) * (u * w))
        * (a_of(qf, 1.0, 0.0, 0.0) * (u * w) + LmnPoly::constant(p13 * k * 2.0));
    let a_ln_m = a_of(qf, 1.0, 0.0, -1.0) * a_of(qf, 0.0, 1.0, 0.0);
    let depth = LmnPoly::affine(0.0, 1.0, 1.0, -1.0);
    let f131 = a_ln_m * (-u.powu(3) * w)
        + (depth * ((qf - 1.0) * u)
            + LmnPoly::constant(z3 * (3.0 * qf * qf + qf) - z1 * (qf + 3.0)))
            * (p13 * k * u);
    let f313 = a_ln_m * (-w.powu(3) * u)
        + (depth * ((qf - 1.0) * w)
            + LmnPoly::constant(z1 * (3.0 * qf * qf + qf) - z3 * (qf + 3.0)))
            * (p13 * k * w);

    let terms = vec![
        Term { index: [0, 0, 2], coeff: a_lm_n * (u.powu(4) * inv) },
        Term { index: [2, 2, 0], coeff: a_lm_n * (w.powu(4) * inv) },
        Term { index: [0, 2, 2], coeff: mixed * inv },
        Term { index: [2, 0, 0], coeff: mixed * inv },
        Term { index: [0, 2, 0], coeff: f131 * inv },
        Term { index: [2, 0, 2], coeff: f313 * inv },
    ];
    CoefficientTable { q, regime: Regime::TwoPairs, z: [z1, z1, z3, z3], terms }
}
