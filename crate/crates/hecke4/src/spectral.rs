//! The dictionary between `z = (z1, z2, z3, z4)` and eigenvalue triples,
//! the set `S`, quartic inversion, and the family classification.
//!
//! `lambda1 = q^(3/2) s1(z)`, `lambda2 = q^2 s2(z)`, `lambda3 = q^(3/2) s3(z)`
//! with `s_k` the elementary symmetric polynomials and `z1 z2 z3 z4 = 1`.
//! A point of `S` additionally has `conj(s1) = s3` and `s2` real.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eigen::{root_clusters, CoefficientTable, Ray, DELTA};
use crate::{check_q, Error};

/// Default tolerance on the constraint residuals of `S`.
pub const TOL: f64 = 1e-8;

/// Relative tolerance for the modulus and ratio patterns in [`classify`].
pub const PATTERN_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Sorts by decreasing modulus; moduli equal to relative `1e-9` (chained)
/// are ordered by increasing argument.
pub fn canonical_order(mut z: [Complex64; 4]) -> [Complex64; 4] {
    z.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap_or(Ordering::Equal));
    let mut start = 0;
    while start < 4 {
        let mut end = start + 1;
        while end < 4 && (z[end - 1].norm() - z[end].norm()).abs() <= 1e-9 * z[end - 1].norm().max(1e-300) {
            end += 1;
        }
        z[start..end].sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap_or(Ordering::Equal));
        start = end;
    }
    z
}

/// A canonically ordered 4-tuple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    z: [Complex64; 4],
}

impl SpectralPoint {
    /// Canonicalizes `z`, rejecting tuples whose product is not 1.
    pub fn new(z: [Complex64; 4]) -> Result<Self, Error> {
        let p: Complex64 = z.iter().product();
        if !((p - 1.0).norm() <= TOL) {
            return Err(Error::ProductConstraint(format!("{p}")));
        }
        Ok(Self::unchecked(z))
    }

    /// Canonicalizes without checking the product.
    pub fn unchecked(z: [Complex64; 4]) -> Self {
        SpectralPoint { z: canonical_order(z) }
    }

    pub fn z(&self) -> [Complex64; 4] {
        self.z
    }

    pub fn conj(&self) -> Self {
        Self::unchecked(self.z.map(|x| x.conj()))
    }

    pub fn product(&self) -> Complex64 {
        self.z.iter().product()
    }

    /// Largest entrywise distance after canonical ordering.
    pub fn distance(&self, other: &SpectralPoint) -> f64 {
        self.z.iter().zip(other.z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Distance up to permutation, by greedy nearest matching.
    pub fn multiset_distance(&self, other: &SpectralPoint) -> f64 {
        let mut used = [false; 4];
        let mut worst: f64 = 0.0;
        for a in self.z {
            let (k, d) = (0..4)
                .filter(|&k| !used[k])
                .map(|k| (k, (a - other.z[k]).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("four slots");
            used[k] = true;
            worst = worst.max(d);
        }
        worst
    }
}

impl fmt::Display for SpectralPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.z.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:.6}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: [f64; 4],
    im: [f64; 4],
}

impl Serialize for SpectralPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: self.z.map(|x| x.re), im: self.z.map(|x| x.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ReIm::deserialize(d)?;
        let z = [0, 1, 2, 3].map(|k| c(r.re[k], r.im[k]));
        SpectralPoint::new(z).map_err(D::Error::custom)
    }
}

/// Eigenvalues of `A_{w,1}`, `A_{w,2}`, `A_{w,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigTriple {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub lambda3: Complex64,
}

impl EigTriple {
    pub fn new(lambda1: Complex64, lambda2: Complex64, lambda3: Complex64) -> Self {
        EigTriple { lambda1, lambda2, lambda3 }
    }

    /// `lambda_i` for `i` in `1..=3`.
    pub fn get(&self, i: u8) -> Complex64 {
        match i {
            1 => self.lambda1,
            2 => self.lambda2,
            _ => self.lambda3,
        }
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }

    /// Largest entrywise distance relative to `max(1, |lambda|)`.
    pub fn relative_distance(&self, o: &EigTriple) -> f64 {
        let scale = self.as_array().iter().map(|x| x.norm()).fold(1.0, f64::max);
        self.as_array().iter().zip(o.as_array()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
    }
}

/// `(s1, s2, s3, s4)`.
pub fn elementary_symmetric(z: &[Complex64; 4]) -> [Complex64; 4] {
    let mut e = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    for x in z {
        for k in (1..5).rev() {
            e[k] = e[k] + e[k - 1] * x;
        }
    }
    [e[1], e[2], e[3], e[4]]
}

pub fn eig_from_z(z: &[Complex64; 4], q: u64) -> Result<EigTriple, Error> {
    check_q(q)?;
    let s = elementary_symmetric(z);
    if !((s[3] - 1.0).norm() <= TOL) {
        return Err(Error::ProductConstraint(format!("{}", s[3])));
    }
    let qf = q as f64;
    let q32 = qf * qf.sqrt();
    Ok(EigTriple { lambda1: s[0] * q32, lambda2: s[1] * qf * qf, lambda3: s[2] * q32 })
}

/// Roots recovered from an eigenvalue triple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Roots {
    pub point: SpectralPoint,
    /// Multiplicity of each entry of `point`, in the same order.
    pub multiplicities: [usize; 4],
    /// Set when a root of multiplicity three or more was found; such roots
    /// carry only a fraction of the working precision.
    pub ill_conditioned: bool,
}

/// Monic quartic coefficients `[a3, a2, a1, a0]` of
/// `x^4 - (l1/q) x^3 + (l2/q) x^2 - l3 x + q^2`.
fn char_poly(lam: &EigTriple, q: f64) -> [Complex64; 4] {
    [-lam.lambda1 / q, lam.lambda2 / q, -lam.lambda3, c(q * q, 0.0)]
}

/// `p^(j)(x)` for the monic quartic with coefficients `a`.
/// Relative size of `P^(j)` at a cluster mean below which the cluster is a
/// multiple root. Two roots `d` apart give `P'(mean) ~ d^2`, so this caps
/// merged pairs near `1e-6` while rounding splits true double roots by `1e-8`.
const MERGE_TOL: f64 = 1e-11;

fn poly_derivative(a: &[Complex64; 4], j: usize, x: Complex64) -> Complex64 {
    // Coefficients in increasing degree.
    let full = [a[3], a[2], a[1], a[0], c(1.0, 0.0)];
    let mut acc = c(0.0, 0.0);
    for d in (j..5).rev() {
        let fall: f64 = (0..j).map(|t| (d - t) as f64).product();
        acc = acc * x + full[d] * fall;
    }
    acc
}

fn derivative_scale(a: &[Complex64; 4], j: usize, x: Complex64) -> f64 {
    let full = [a[3], a[2], a[1], a[0], c(1.0, 0.0)];
    let r = x.norm().max(1.0);
    (j..5)
        .map(|d| {
            let fall: f64 = (0..j).map(|t| (d - t) as f64).product();
            full[d].norm() * fall * r.powi((d - j) as i32)
        })
        .sum()
}

/// Solves the quartic by the eigenvalues of its companion matrix, polishes
/// each root with one Newton step, and merges clusters that are numerically
/// multiple roots.
pub fn z_from_eig(lam: &EigTriple, q: u64) -> Result<Roots, Error> {
    check_q(q)?;
    let qf = q as f64;
    let a = char_poly(lam, qf);
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    #[rustfmt::skip]
    let comp = Matrix4::new(
        -a[0], -a[1], -a[2], -a[3],
        one, zero, zero, zero,
        zero, one, zero, zero,
        zero, zero, one, zero,
    );
    let eig = Schur::try_new(comp, 1e-15, 100_000)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::Params("quartic solver did not converge".into()))?;
    let mut x: Vec<Complex64> = eig.iter().copied().collect();
    let newton = |r: Complex64| {
        let d = poly_derivative(&a, 1, r);
        let step = poly_derivative(&a, 0, r) / d;
        if d.norm() > 0.0 && step.norm() < 1e-3 * r.norm().max(1.0) {
            r - step
        } else {
            r
        }
    };

    // Single-linkage groups at a loose threshold, accepted only when the
    // mean is a root of matching multiplicity. Newton steps are useless
    // inside a cluster, so only the remaining simple roots are polished.
    let mut label = [0usize, 1, 2, 3];
    for i in 0..4 {
        for j in i + 1..4 {
            if (x[i] - x[j]).norm() <= 1e-3 * x[i].norm().max(1.0) {
                let (from, to) = (label[j], label[i]);
                label.iter_mut().filter(|l| **l == from).for_each(|l| *l = to);
            }
        }
    }
    let mut mult = [1usize; 4];
    for lab in 0..4 {
        let members: Vec<usize> = (0..4).filter(|&k| label[k] == lab).collect();
        let k = members.len();
        let mean = members.iter().map(|&i| x[i]).sum::<Complex64>() / k.max(1) as f64;
        let accept =
            k >= 2 && (1..k).all(|j| poly_derivative(&a, j, mean).norm() <= MERGE_TOL * derivative_scale(&a, j, mean));
        for &i in &members {
            if accept {
                x[i] = mean;
                mult[i] = k;
            } else {
                x[i] = newton(x[i]);
            }
        }
    }
    let sq = qf.sqrt();
    let mut pairs: Vec<(Complex64, usize)> = x.iter().zip(mult).map(|(r, m)| (r / sq, m)).collect();
    let point = SpectralPoint::unchecked([pairs[0].0, pairs[1].0, pairs[2].0, pairs[3].0]);
    let mut multiplicities = [1; 4];
    for (k, zk) in point.z.iter().enumerate() {
        let pos = pairs.iter().position(|(r, _)| r == zk).expect("same roots");
        multiplicities[k] = pairs.remove(pos).1;
    }
    let ill_conditioned = multiplicities.iter().any(|&m| m >= 3);
    Ok(Roots { point, multiplicities, ill_conditioned })
}

/// Constraint residuals `(|conj(s1) - s3|, |Im s2|, |s4 - 1|)`.
pub fn s_residuals(z: &[Complex64; 4]) -> [f64; 3] {
    let s = elementary_symmetric(z);
    [(s[0].conj() - s[2]).norm(), s[1].im.abs(), (s[3] - 1.0).norm()]
}

pub fn in_s(z: &[Complex64; 4], tol: f64) -> bool {
    s_residuals(z).iter().all(|r| *r <= tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    Trivial,
    Family2,
    Family3,
    Family4,
    Tempered,
    NotInSpectrum,
}

impl FamilyKind {
    /// The five families making up the spectrum.
    pub const FAMILIES: [FamilyKind; 5] =
        [FamilyKind::Trivial, FamilyKind::Family2, FamilyKind::Family3, FamilyKind::Family4, FamilyKind::Tempered];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Trivial => "Trivial",
            FamilyKind::Family2 => "Family2",
            FamilyKind::Family3 => "Family3",
            FamilyKind::Family4 => "Family4",
            FamilyKind::Tempered => "Tempered",
            FamilyKind::NotInSpectrum => "NotInSpectrum",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let t = s.to_ascii_lowercase();
        Ok(match t.as_str() {
            "trivial" => FamilyKind::Trivial,
            "family2" | "2" => FamilyKind::Family2,
            "family3" | "3" => FamilyKind::Family3,
            "family4" | "4" => FamilyKind::Family4,
            "tempered" => FamilyKind::Tempered,
            "notinspectrum" | "none" => FamilyKind::NotInSpectrum,
            _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
        })
    }

    /// Moduli pattern and the partition of 4 it corresponds to.
    pub fn partition(self) -> Option<(&'static str, &'static str)> {
        match self {
            FamilyKind::Tempered => Some(("(1,1,1,1)", "1+1+1+1")),
            FamilyKind::Family4 => Some(("(q^1/2,1,1,q^-1/2)", "2+1+1")),
            FamilyKind::Family3 => Some(("(q^1/2,q^1/2,q^-1/2,q^-1/2)", "2+2")),
            FamilyKind::Family2 => Some(("(q,1,1,q^-1)", "3+1")),
            FamilyKind::Trivial => Some(("(q^3/2,q^1/2,q^-1/2,q^-3/2)", "4")),
            FamilyKind::NotInSpectrum => None,
        }
    }
}

/// Parameters of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Trivial { k: u8 },
    Family2 { theta: f64 },
    Family3 { theta1: f64, sign: i8 },
    Family4 { theta1: f64, theta2: f64 },
    Tempered { theta1: f64, theta2: f64, theta3: f64 },
    NotInSpectrum,
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Trivial { .. } => FamilyKind::Trivial,
            Family::Family2 { .. } => FamilyKind::Family2,
            Family::Family3 { .. } => FamilyKind::Family3,
            Family::Family4 { .. } => FamilyKind::Family4,
            Family::Tempered { .. } => FamilyKind::Tempered,
            Family::NotInSpectrum => FamilyKind::NotInSpectrum,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Family::Trivial { k } => vec![k as f64],
            Family::Family2 { theta } => vec![theta],
            Family::Family3 { theta1, sign } => vec![theta1, sign as f64],
            Family::Family4 { theta1, theta2 } => vec![theta1, theta2],
            Family::Tempered { theta1, theta2, theta3 } => vec![theta1, theta2, theta3],
            Family::NotInSpectrum => vec![],
        }
    }

    pub fn from_params(kind: FamilyKind, p: &[f64]) -> Result<Self, Error> {
        let want = match kind {
            FamilyKind::Trivial | FamilyKind::Family2 => 1,
            FamilyKind::Family3 | FamilyKind::Family4 => 2,
            FamilyKind::Tempered => 3,
            FamilyKind::NotInSpectrum => 0,
        };
        if p.len() != want || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Params(format!("{} takes {want} finite parameters, got {p:?}", kind.name())));
        }
        Ok(match kind {
            FamilyKind::Trivial => {
                if p[0] < 0.0 || p[0] > 3.0 || p[0].fract() != 0.0 {
                    return Err(Error::Params(format!("trivial index must be 0..3, got {}", p[0])));
                }
                Family::Trivial { k: p[0] as u8 }
            }
            FamilyKind::Family2 => Family::Family2 { theta: p[0] },
            FamilyKind::Family3 => {
                if p[1] != 1.0 && p[1] != -1.0 {
                    return Err(Error::Params(format!("sign must be +1 or -1, got {}", p[1])));
                }
                Family::Family3 { theta1: p[0], sign: p[1] as i8 }
            }
            FamilyKind::Family4 => Family::Family4 { theta1: p[0], theta2: p[1] },
            FamilyKind::Tempered => Family::Tempered { theta1: p[0], theta2: p[1], theta3: p[2] },
            FamilyKind::NotInSpectrum => Family::NotInSpectrum,
        })
    }
}

/// A family with its parameters, and whether the point is a repeated-root
/// boundary point of that family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyTag {
    pub family: Family,
    pub degenerate: bool,
}

impl FamilyTag {
    pub fn new(family: Family) -> Self {
        FamilyTag { family, degenerate: false }
    }

    pub fn kind(&self) -> FamilyKind {
        self.family.kind()
    }

    /// Same family and the same point up to permutation. Parameters are not
    /// unique (e.g. `Family3(t, +)` and `Family3(-t, +)` agree), so points
    /// are compared.
    pub fn same_as(&self, other: &FamilyTag, q: u64) -> bool {
        if self.kind() != other.kind() {
            return false;
        }
        match (sample_family(self, q), sample_family(other, q)) {
            (Ok(a), Ok(b)) => a.multiset_distance(&b) <= 1e-7,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        let p = self.family.params();
        if !p.is_empty() {
            let s: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
            write!(f, "({})", s.join(", "))?;
        }
        if self.degenerate {
            write!(f, " [degenerate]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TagRepr {
    family: String,
    params: Vec<f64>,
    degenerate: bool,
}

impl Serialize for FamilyTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TagRepr { family: self.kind().name().into(), params: self.family.params(), degenerate: self.degenerate }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FamilyTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = TagRepr::deserialize(d)?;
        let kind = FamilyKind::parse(&r.family).map_err(D::Error::custom)?;
        let family = Family::from_params(kind, &r.params).map_err(D::Error::custom)?;
        Ok(FamilyTag { family, degenerate: r.degenerate })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATTERN_TOL * a.abs().max(b.abs()).max(1.0)
}

fn close_c(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= PATTERN_TOL * a.norm().max(b.norm()).max(1.0)
}

fn repeated(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < DELTA
}

/// Decides the family of a point of `S` from its moduli and the
/// multiplicative relations between its entries.
pub fn classify(z: &[Complex64; 4], q: u64, tol: f64) -> Result<FamilyTag, Error> {
    check_q(q)?;
    if !in_s(z, tol) {
        return Err(Error::NotInS);
    }
    let z = canonical_order(*z);
    let qf = q as f64;
    let sq = qf.sqrt();
    let r = z.map(|x| x.norm());
    let any_repeat = (0..4).any(|a| (a + 1..4).any(|b| repeated(z[a], z[b])));
    let tag = |family, degenerate| Ok(FamilyTag { family, degenerate });

    if r.iter().all(|&m| close(m, 1.0)) {
        let family = Family::Tempered { theta1: z[0].arg(), theta2: z[1].arg(), theta3: z[2].arg() };
        return tag(family, any_repeat);
    }

    let mods = |want: [f64; 4]| r.iter().zip(want).all(|(a, b)| close(*a, b));

    if mods([qf * sq, sq, 1.0 / sq, 1.0 / (qf * sq)]) {
        let u = z[0] / (qf * sq);
        let k = ((u.arg() / FRAC_PI_2).round().rem_euclid(4.0)) as u8;
        let w = cis(k as f64 * FRAC_PI_2);
        let want = [qf * sq, sq, 1.0 / sq, 1.0 / (qf * sq)].map(|m| w * m);
        if z.iter().zip(want).all(|(a, b)| close_c(*a, b)) {
            return tag(Family::Trivial { k }, false);
        }
    }

    if mods([qf, 1.0, 1.0, 1.0 / qf]) {
        let u = z[0] / qf;
        if close_c(z[3], u / qf) && (close_c(z[1], u) || close_c(z[2], u)) {
            return tag(Family::Family2 { theta: u.arg() }, repeated(z[1], z[2]));
        }
    }

    if mods([sq, sq, 1.0 / sq, 1.0 / sq]) {
        let p = z[0] * z[1] / qf;
        let sign = if close_c(p, c(1.0, 0.0)) {
            Some(1i8)
        } else if close_c(p, c(-1.0, 0.0)) {
            Some(-1)
        } else {
            None
        };
        let (a, b) = (z[0] / qf, z[1] / qf);
        let lower = (close_c(z[2], a) && close_c(z[3], b)) || (close_c(z[2], b) && close_c(z[3], a));
        if let (Some(sign), true) = (sign, lower) {
            return tag(Family::Family3 { theta1: z[0].arg(), sign }, repeated(z[0], z[1]));
        }
    }

    if mods([sq, 1.0, 1.0, 1.0 / sq]) && close_c(z[0], z[3] * qf) {
        let family = Family::Family4 { theta1: z[0].arg(), theta2: z[1].arg() };
        return tag(family, repeated(z[1], z[2]));
    }

    tag(Family::NotInSpectrum, any_repeat)
}

/// The point of `S` described by a tag.
pub fn sample_family(tag: &FamilyTag, q: u64) -> Result<SpectralPoint, Error> {
    check_q(q)?;
    let qf = q as f64;
    let sq = qf.sqrt();
    let bad = |what: &str| Err(Error::Params(what.to_string()));
    let finite = tag.family.params().iter().all(|x| x.is_finite());
    if !finite {
        return bad("non-finite parameter");
    }
    let z = match tag.family {
        Family::Trivial { k } => {
            if k > 3 {
                return bad("trivial index must be 0..3");
            }
            let w = cis(k as f64 * FRAC_PI_2);
            [qf * sq, sq, 1.0 / sq, 1.0 / (qf * sq)].map(|m| w * m)
        }
        Family::Family2 { theta } => {
            let u = cis(theta);
            [u * qf, u, cis(-3.0 * theta), u / qf]
        }
        Family::Family3 { theta1, sign } => {
            if sign != 1 && sign != -1 {
                return bad("sign must be +1 or -1");
            }
            let s = sign as f64;
            let (a, b) = (cis(theta1), cis(-theta1));
            [a * sq, b * (s * sq), a / sq, b * (s / sq)]
        }
        Family::Family4 { theta1, theta2 } => {
            let a = cis(theta1);
            [a * sq, cis(theta2), cis(-(theta2 + 2.0 * theta1)), a / sq]
        }
        Family::Tempered { theta1, theta2, theta3 } => {
            [cis(theta1), cis(theta2), cis(theta3), cis(-(theta1 + theta2 + theta3))]
        }
        Family::NotInSpectrum => return bad("NotInSpectrum has no sample"),
    };
    Ok(SpectralPoint::unchecked(z))
}

fn angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-PI..PI)
}

/// A random member of a family.
pub fn random_tag(kind: FamilyKind, rng: &mut impl Rng) -> Result<FamilyTag, Error> {
    let family = match kind {
        FamilyKind::Trivial => Family::Trivial { k: rng.random_range(0..4) },
        FamilyKind::Family2 => Family::Family2 { theta: angle(rng) },
        FamilyKind::Family3 => {
            Family::Family3 { theta1: angle(rng), sign: if rng.random_bool(0.5) { 1 } else { -1 } }
        }
        FamilyKind::Family4 => Family::Family4 { theta1: angle(rng), theta2: angle(rng) },
        FamilyKind::Tempered => Family::Tempered { theta1: angle(rng), theta2: angle(rng), theta3: angle(rng) },
        FamilyKind::NotInSpectrum => return Err(Error::Params("NotInSpectrum has no sample".into())),
    };
    Ok(FamilyTag::new(family))
}

/// `n` deterministic, well-spread members of a family.
pub fn family_grid(kind: FamilyKind, n: usize) -> Vec<FamilyTag> {
    // Additive recurrence with irrational steps; fills the torus evenly.
    const STEPS: [f64; 3] = [0.618_033_988_749_894_9, 0.754_877_666_246_692_7, 0.569_840_290_998_053_3];
    let ang = |j: usize, d: usize| -PI + 2.0 * PI * ((j as f64 + 0.5) * STEPS[d]).fract();
    (0..n)
        .map(|j| {
            let family = match kind {
                FamilyKind::Trivial => Family::Trivial { k: (j % 4) as u8 },
                FamilyKind::Family2 => Family::Family2 { theta: -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64 },
                FamilyKind::Family3 => Family::Family3 {
                    theta1: -PI + 2.0 * PI * ((j / 2) as f64 + 0.5) / n.div_ceil(2) as f64,
                    sign: if j % 2 == 0 { 1 } else { -1 },
                },
                FamilyKind::Family4 => Family::Family4 { theta1: ang(j, 0), theta2: ang(j, 1) },
                FamilyKind::Tempered => Family::Tempered { theta1: ang(j, 0), theta2: ang(j, 1), theta3: ang(j, 2) },
                FamilyKind::NotInSpectrum => Family::NotInSpectrum,
            };
            FamilyTag::new(family)
        })
        .collect()
}

/// Repeated-root boundary points, each with the family whose closure holds it.
pub fn boundary_points(q: u64) -> Vec<(FamilyKind, SpectralPoint)> {
    let qf = q as f64;
    let sq = qf.sqrt();
    let mut out = Vec::new();
    for k in 0..4 {
        let w = cis(k as f64 * FRAC_PI_2);
        out.push((FamilyKind::Family2, SpectralPoint::unchecked([w, w, w * qf, w / qf])));
        out.push((FamilyKind::Family3, SpectralPoint::unchecked([w * sq, w * sq, w / sq, w / sq])));
    }
    for theta in [0.0, 0.4, -1.3, 2.2] {
        let (a, b) = (cis(theta), cis(-theta));
        out.push((FamilyKind::Family4, SpectralPoint::unchecked([b, b, a * sq, a / sq])));
    }
    out
}

/// All roots on the unit circle, i.e. membership of the triple in the
/// spectrum of the building.
pub fn in_building_spectrum(lam: &EigTriple, q: u64, tol: f64) -> Result<bool, Error> {
    let roots = z_from_eig(lam, q)?;
    Ok(roots.point.z.iter().all(|x| (x.norm() - 1.0).abs() <= tol.max(1e-12)))
}

/// A nonzero coefficient whose monomial grows along a ray.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DWitness {
    /// 1-based `(i, j, k)` into the relabeled tuple of the table.
    pub index: [usize; 3],
    pub ray: Ray,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DVerdict {
    pub holds: bool,
    pub witness: Option<DWitness>,
}

/// For every nonzero coefficient at `(i, j, k)` checks `|z_i| <= 1`,
/// `|z_i z_j| <= 1` and `|z_i z_j z_k| <= 1`.
pub fn condition_d(z: &[Complex64; 4], table: &CoefficientTable) -> Result<DVerdict, Error> {
    let mine = SpectralPoint::unchecked(*z);
    let theirs = SpectralPoint::unchecked(table.z);
    if mine.multiset_distance(&theirs) > 1e-8 * z.iter().map(|x| x.norm()).fold(1.0, f64::max) {
        return Err(Error::RegimeMismatch("table was built for a different z".into()));
    }
    let want = match root_clusters(z).iter().map(Vec::len).max() {
        Some(1) => crate::eigen::Regime::Generic,
        _ if root_clusters(z).len() == 3 => crate::eigen::Regime::OnePair,
        _ => crate::eigen::Regime::TwoPairs,
    };
    if want != table.regime {
        return Err(Error::RegimeMismatch(format!("z needs {want:?}, table is {:?}", table.regime)));
    }
    let zt = table.z;
    let slack = 1.0 + 1e-9;
    let mut worst: Option<DWitness> = None;
    for t in table.nonzero_terms() {
        let [a, b, cc] = t.index;
        let checks = [
            (Ray::L00, zt[a].norm()),
            (Ray::LL0, (zt[a] * zt[b]).norm()),
            (Ray::LLL, (zt[a] * zt[b] * zt[cc]).norm()),
        ];
        for (ray, modulus) in checks {
            if modulus > slack && worst.as_ref().is_none_or(|w| modulus > w.modulus) {
                worst = Some(DWitness { index: [a + 1, b + 1, cc + 1], ray, modulus });
            }
        }
    }
    Ok(DVerdict { holds: worst.is_none(), witness: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::coefficient_table;

    #[test]
    fn trivial_eigenvalues() {
        let t = sample_family(&FamilyTag::new(Family::Trivial { k: 0 }), 2).unwrap();
        let lam = eig_from_z(&t.z(), 2).unwrap();
        assert!(lam.relative_distance(&EigTriple::new(c(15.0, 0.0), c(35.0, 0.0), c(15.0, 0.0))) < 1e-14);
    }

    #[test]
    fn ones_and_quadruple_root() {
        let z = [c(1.0, 0.0); 4];
        let lam = eig_from_z(&z, 2).unwrap();
        let r = 8.0 * 2f64.sqrt();
        assert!((lam.lambda1 - r).norm() < 1e-13 && (lam.lambda2 - 24.0).norm() < 1e-13);
        let roots = z_from_eig(&lam, 2).unwrap();
        assert_eq!(roots.multiplicities, [4; 4], "{roots:?}");
        assert!(roots.ill_conditioned);
        assert!(roots.point.distance(&SpectralPoint::unchecked(z)) < 1e-6);
    }

    #[test]
    fn alternating_point() {
        let z = [c(0.0, 1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, -1.0)];
        let lam = eig_from_z(&z, 3).unwrap();
        assert!(lam.lambda1.norm() < 1e-14 && lam.lambda3.norm() < 1e-14);
        assert!((lam.lambda2 - 18.0).norm() < 1e-13);
    }

    #[test]
    fn trivial_round_trip() {
        let lam = EigTriple::new(c(15.0, 0.0), c(35.0, 0.0), c(15.0, 0.0));
        let roots = z_from_eig(&lam, 2).unwrap();
        let s = 2f64.sqrt();
        let want = SpectralPoint::unchecked([c(2.0 * s, 0.0), c(s, 0.0), c(1.0 / s, 0.0), c(0.5 / s, 0.0)]);
        assert!(roots.point.distance(&want) < 1e-12);
        assert_eq!(roots.multiplicities, [1; 4]);
    }

    #[test]
    fn membership_examples() {
        let z = [c(2.0, 0.0), c(0.5, 0.0), cis(PI / 3.0), cis(-PI / 3.0)];
        assert!(in_s(&z, TOL));
        let zb = [c(2.0, 0.0), c(0.5, 0.0), cis(PI / 3.0), cis(PI / 3.0)];
        assert!(!in_s(&zb, TOL));
        assert_eq!(classify(&z, 2, TOL).unwrap().kind(), FamilyKind::NotInSpectrum);
        assert_eq!(classify(&zb, 2, TOL), Err(Error::NotInS));
        let table = coefficient_table(z, 2).unwrap();
        let d = condition_d(&z, &table).unwrap();
        assert!(!d.holds);
        assert_eq!(d.witness.unwrap().index[0], 1);
    }

    #[test]
    fn documented_samples() {
        let s = 2f64.sqrt();
        let t = sample_family(&FamilyTag::new(Family::Trivial { k: 1 }), 2).unwrap();
        let want = [c(0.0, 2.0 * s), c(0.0, s), c(0.0, 1.0 / s), c(0.0, 0.5 / s)];
        assert!(t.distance(&SpectralPoint::unchecked(want)) < 1e-14);
        let f4 = sample_family(&FamilyTag::new(Family::Family4 { theta1: 0.2, theta2: 1.0 }), 2).unwrap();
        let want = [cis(0.2) * s, cis(1.0), cis(-1.4), cis(0.2) / s];
        assert!(f4.distance(&SpectralPoint::unchecked(want)) < 1e-14);
    }

    #[test]
    fn family2_example() {
        let t = PI / 5.0;
        let z = [cis(t) * 2.0, cis(t), cis(-3.0 * t), cis(t) / 2.0];
        let tag = classify(&z, 2, TOL).unwrap();
        assert!(tag.same_as(&FamilyTag::new(Family::Family2 { theta: t }), 2));
        assert!(!tag.degenerate);
    }

    #[test]
    fn boundary_tags() {
        for q in [2, 3] {
            for (kind, p) in boundary_points(q) {
                let tag = classify(&p.z(), q, TOL).unwrap();
                assert_eq!(tag.kind(), kind, "{p}");
                assert!(tag.degenerate, "{p}");
            }
        }
    }

    #[test]
    fn boundary_round_trip() {
        for q in [2, 3] {
            for (kind, p) in boundary_points(q) {
                let lam = eig_from_z(&p.z(), q).unwrap();
                let roots = z_from_eig(&lam, q).unwrap();
                assert!(roots.multiplicities.contains(&2), "{p} {roots:?}");
                assert!(roots.point.distance(&p) < 1e-9, "{p} {}", roots.point);
                let tag = classify(&roots.point.z(), q, TOL).unwrap();
                assert_eq!((tag.kind(), tag.degenerate), (kind, true));
            }
        }
    }

    #[test]
    fn tag_json() {
        let tag = FamilyTag::new(Family::Family3 { theta1: 0.7, sign: -1 });
        let s = serde_json::to_string(&tag).unwrap();
        assert_eq!(s, r#"{"family":"Family3","params":[0.7,-1.0],"degenerate":false}"#);
        let back: FamilyTag = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tag);
        let p = SpectralPoint::unchecked([c(1.0, 0.0); 4]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"re":[1.0,1.0,1.0,1.0],"im":[0.0,0.0,0.0,0.0]}"#);
    }
}
