//! Closed-form simultaneous eigenfunctions.
//!
//! For `z` with product one, `f_z(v) = sqrt(q)^(3l+m-n) sum c_t(l,m,n)
//! z_a^l z_b^m z_c^n`, the sum running over terms `t = (a, b, c)` of a
//! [`CoefficientTable`]. Pairwise distinct `z` give 24 constant
//! coefficients; one or two repeated pairs give coefficients that are
//! polynomials in `(l, m, n)`.

mod degenerate;
mod poly;

pub use degenerate::{one_pair_coeffs_at, two_pairs_coeffs_at};
pub use poly::LmnPoly;

use num_complex::Complex64;
use serde::Serialize;

use crate::geometry::{enumerate_ball, VertexId};
use crate::operators::BallFunction;
use crate::{check_q, Error};

/// Pairwise distance below which roots count as repeated.
pub const DELTA: f64 = 1e-6;

/// Deepest `ell` accepted by the evaluators.
pub const ELL_CAP: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Generic,
    OnePair,
    TwoPairs,
}

/// One summand: the monomial `z[a]^l z[b]^m z[c]^n` with its coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub index: [usize; 3],
    pub coeff: LmnPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub q: u64,
    pub regime: Regime,
    /// The tuple after relabeling: repeated values sit at positions
    /// `(0, 1)` and, for two pairs, `(2, 3)`.
    pub z: [Complex64; 4],
    pub terms: Vec<Term>,
}

impl CoefficientTable {
    /// Terms whose coefficient is not identically zero.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = &Term> {
        let scale = self.terms.iter().map(|t| t.coeff.max_abs()).fold(0.0, f64::max);
        self.terms.iter().filter(move |t| !t.coeff.is_zero(1e-13 * scale.max(1e-300)))
    }

    /// `sum of c_t(0,0,0)`, which is `f(0,0,0)`.
    pub fn origin_sum(&self) -> Complex64 {
        self.terms.iter().map(|t| t.coeff.eval(0.0, 0.0, 0.0)).sum()
    }

    /// Generic coefficient `C_ijk` (0-based indices), if the table is generic.
    pub fn generic_coefficient(&self, i: usize, j: usize, k: usize) -> Option<Complex64> {
        if self.regime != Regime::Generic {
            return None;
        }
        self.terms.iter().find(|t| t.index == [i, j, k]).map(|t| t.coeff.0[0])
    }
}

pub(crate) fn dq(q: f64) -> f64 {
    (q + 1.0) * (q * q + q + 1.0) * (q * q * q + q * q + q + 1.0)
}

/// `a - q b`, snapped to exact zero when it vanishes to rounding.
pub(crate) fn fac(a: Complex64, b: Complex64, q: f64) -> Complex64 {
    let d = a - b * q;
    if d.norm() <= 1e-10 * (a.norm() + q * b.norm()) {
        Complex64::new(0.0, 0.0)
    } else {
        d
    }
}

/// The 24 constants for pairwise distinct `z`, without the distance check.
pub fn generic_coeffs_unchecked(z: [Complex64; 4], q: u64) -> CoefficientTable {
    let qf = q as f64;
    let d = dq(qf);
    let mut terms = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || i == k || j == k {
                    continue;
                }
                let l = 6 - i - j - k;
                let seq = [i, j, k, l];
                let mut num = Complex64::new(1.0, 0.0);
                let mut den = Complex64::new(d, 0.0);
                for a in 0..4 {
                    for b in a + 1..4 {
                        num *= fac(z[seq[a]], z[seq[b]], qf);
                        den *= z[seq[a]] - z[seq[b]];
                    }
                }
                terms.push(Term { index: [i, j, k], coeff: LmnPoly::constant(num / den) });
            }
        }
    }
    CoefficientTable { q, regime: Regime::Generic, z, terms }
}

/// The generic table; rejects tuples with two entries closer than [`DELTA`].
pub fn generic_coeffs(z: [Complex64; 4], q: u64) -> Result<CoefficientTable, Error> {
    check_q(q)?;
    let gap = min_gap(&z);
    if gap < DELTA {
        return Err(Error::NearDegenerate(gap));
    }
    Ok(generic_coeffs_unchecked(z, q))
}

fn min_gap(z: &[Complex64; 4]) -> f64 {
    let mut g = f64::INFINITY;
    for a in 0..4 {
        for b in a + 1..4 {
            g = g.min((z[a] - z[b]).norm());
        }
    }
    g
}

/// Groups entries closer than [`DELTA`] (single linkage).
pub fn root_clusters(z: &[Complex64; 4]) -> Vec<Vec<usize>> {
    let mut label = [0usize, 1, 2, 3];
    for a in 0..4 {
        for b in a + 1..4 {
            if (z[a] - z[b]).norm() < DELTA {
                let (from, to) = (label[b], label[a]);
                for x in label.iter_mut() {
                    if *x == from {
                        *x = to;
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for lab in 0..4 {
        let members: Vec<usize> = (0..4).filter(|&k| label[k] == lab).collect();
        if !members.is_empty() {
            out.push(members);
        }
    }
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}

fn mean(z: &[Complex64; 4], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&k| z[k]).sum::<Complex64>() / idx.len() as f64
}

/// Table for a tuple with exactly one repeated pair.
pub fn one_pair_coeffs(z: [Complex64; 4], q: u64) -> Result<CoefficientTable, Error> {
    check_q(q)?;
    let cl = root_clusters(&z);
    if cl.iter().map(Vec::len).collect::<Vec<_>>() != [2, 1, 1] {
        return Err(Error::RegimeMismatch(format!("expected one repeated pair, got clusters {cl:?}")));
    }
    Ok(one_pair_coeffs_at(mean(&z, &cl[0]), z[cl[1][0]], z[cl[2][0]], q))
}

/// Table for a tuple made of two repeated pairs.
pub fn two_pairs_coeffs(z: [Complex64; 4], q: u64) -> Result<CoefficientTable, Error> {
    check_q(q)?;
    let cl = root_clusters(&z);
    if cl.iter().map(Vec::len).collect::<Vec<_>>() != [2, 2] {
        return Err(Error::RegimeMismatch(format!("expected two repeated pairs, got clusters {cl:?}")));
    }
    let (mut a, mut b) = (mean(&z, &cl[0]), mean(&z, &cl[1]));
    if b.norm() > a.norm() {
        std::mem::swap(&mut a, &mut b);
    }
    Ok(two_pairs_coeffs_at(a, b, q))
}

/// Picks the regime from the multiplicity pattern of `z`.
pub fn coefficient_table(z: [Complex64; 4], q: u64) -> Result<CoefficientTable, Error> {
    check_q(q)?;
    let cl = root_clusters(&z);
    match cl[0].len() {
        1 => Ok(generic_coeffs_unchecked(z, q)),
        2 if cl.len() == 3 => one_pair_coeffs(z, q),
        2 => two_pairs_coeffs(z, q),
        k => Err(Error::UnsupportedMultiplicity(k)),
    }
}

/// `sqrt(q)^d`, computed as `exp(d ln sqrt(q))`.
pub fn sqrt_q_pow(q: u64, d: u32) -> f64 {
    (d as f64 * 0.5 * (q as f64).ln()).exp()
}

/// An eigenfunction `f_z` ready for evaluation.
#[derive(Clone, Debug)]
pub struct Eigenfunction {
    pub table: CoefficientTable,
}

impl Eigenfunction {
    pub fn new(z: [Complex64; 4], q: u64) -> Result<Self, Error> {
        Ok(Eigenfunction { table: coefficient_table(z, q)? })
    }

    pub fn from_table(table: CoefficientTable) -> Self {
        Eigenfunction { table }
    }

    pub fn q(&self) -> u64 {
        self.table.q
    }

    pub fn value(&self, x: VertexId) -> Result<Complex64, Error> {
        if x.ell > ELL_CAP {
            return Err(Error::Range(x.ell));
        }
        let z = &self.table.z;
        let (l, m, n) = (x.ell as f64, x.m as f64, x.n as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.table.terms {
            let [a, b, c] = t.index;
            let mono = z[a].powu(x.ell) * z[b].powu(x.m) * z[c].powu(x.n);
            acc += t.coeff.eval(l, m, n) * mono;
        }
        Ok(acc * sqrt_q_pow(self.q(), x.depth()))
    }

    /// Values on `ball(radius)`, using power tables.
    pub fn on_ball(&self, radius: u32) -> Result<BallFunction, Error> {
        if radius > ELL_CAP {
            return Err(Error::Range(radius));
        }
        let r = radius as usize;
        let z = &self.table.z;
        let pw: Vec<Vec<Complex64>> = z
            .iter()
            .map(|zk| {
                let mut v = Vec::with_capacity(r + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=r {
                    v.push(acc);
                    acc *= zk;
                }
                v
            })
            .collect();
        let sq: Vec<f64> = (0..=4 * radius).map(|d| sqrt_q_pow(self.q(), d)).collect();
        let constant = self.table.regime == Regime::Generic;
        let mut values = Vec::with_capacity(crate::geometry::ball_size(radius));
        for x in enumerate_ball(radius) {
            let (li, mi, ni) = (x.ell as usize, x.m as usize, x.n as usize);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &self.table.terms {
                let [a, b, c] = t.index;
                let coeff = if constant {
                    t.coeff.0[0]
                } else {
                    t.coeff.eval(x.ell as f64, x.m as f64, x.n as f64)
                };
                acc += coeff * pw[a][li] * pw[b][mi] * pw[c][ni];
            }
            values.push(acc * sq[x.depth() as usize]);
        }
        Ok(BallFunction { radius, values })
    }
}

/// `f_z(v)` with the regime chosen from `z`.
pub fn eval(z: [Complex64; 4], q: u64, x: VertexId) -> Result<Complex64, Error> {
    Eigenfunction::new(z, q)?.value(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ray {
    /// `(l, 0, 0)`, normalized by `q^((3+c)l/2)`.
    L00,
    /// `(l, l, 0)`, normalized by `q^((2+c)l)`.
    LL0,
    /// `(l, l, l)`, normalized by `q^((3+c)l/2)`.
    LLL,
}

impl Ray {
    pub const ALL: [Ray; 3] = [Ray::L00, Ray::LL0, Ray::LLL];

    pub fn vertex(self, l: u32) -> VertexId {
        match self {
            Ray::L00 => VertexId { ell: l, m: 0, n: 0 },
            Ray::LL0 => VertexId { ell: l, m: l, n: 0 },
            Ray::LLL => VertexId { ell: l, m: l, n: l },
        }
    }

    /// Log of the normalizing growth rate per step.
    pub fn log_rate(self, q: u64, c: f64) -> f64 {
        let lq = (q as f64).ln();
        match self {
            Ray::L00 | Ray::LLL => 0.5 * (3.0 + c) * lq,
            Ray::LL0 => (2.0 + c) * lq,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayValues {
    pub ray: Ray,
    pub values: Vec<Complex64>,
    pub normalized: Vec<Complex64>,
}

pub fn ray_values(z: [Complex64; 4], q: u64, ray: Ray, radius: u32, c: f64) -> Result<RayValues, Error> {
    if radius < 1 {
        return Err(Error::Usage("ray needs radius >= 1".into()));
    }
    let f = Eigenfunction::new(z, q)?;
    let rate = ray.log_rate(q, c);
    let mut values = Vec::new();
    let mut normalized = Vec::new();
    for l in 0..=radius {
        let val = f.value(ray.vertex(l))?;
        values.push(val);
        normalized.push(val * (-(l as f64) * rate).exp());
    }
    Ok(RayValues { ray, values, normalized })
}
