//! Vertices of the quotient complex, their classes and colors, and the
//! colored neighbor relation.
//!
//! Every vertex of the quotient has a unique representative `(ell, m, n)`
//! with `ell >= m >= n >= 0`. Neighbor lists are stored once, together with
//! their coefficients as polynomials in `q`; [`neighbors`] forgets the
//! coefficients and [`crate::operators::stencil`] evaluates them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Orbit representative `(ell, m, n)` with `ell >= m >= n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub ell: u32,
    pub m: u32,
    pub n: u32,
}

impl VertexId {
    pub fn new(ell: u32, m: u32, n: u32) -> Result<Self, Error> {
        if ell >= m && m >= n {
            Ok(VertexId { ell, m, n })
        } else {
            Err(Error::InvalidVertex(ell as i64, m as i64, n as i64))
        }
    }

    /// Accepts signed input, as produced by parsers.
    pub fn try_from_signed(ell: i64, m: i64, n: i64) -> Result<Self, Error> {
        if n < 0 || m < n || ell < m || ell > u32::MAX as i64 {
            return Err(Error::InvalidVertex(ell, m, n));
        }
        Ok(VertexId { ell: ell as u32, m: m as u32, n: n as u32 })
    }

    pub const ORIGIN: VertexId = VertexId { ell: 0, m: 0, n: 0 };

    pub fn class(self) -> VertexClass {
        classify(self)
    }

    pub fn color(self) -> ColorIndex {
        color(self)
    }

    /// Image under the duality `(ell, m, n) -> (ell, ell - n, ell - m)`.
    pub fn dual(self) -> VertexId {
        VertexId { ell: self.ell, m: self.ell - self.n, n: self.ell - self.m }
    }

    /// Exponent `3 ell + m - n` governing weights and eigenfunction growth.
    pub fn depth(self) -> u32 {
        3 * self.ell + self.m - self.n
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.ell, self.m, self.n)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.ell, self.m, self.n].serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [ell, m, n] = <[u32; 3]>::deserialize(d)?;
        VertexId::new(ell, m, n).map_err(serde::de::Error::custom)
    }
}

pub(crate) const fn v(ell: u32, m: u32, n: u32) -> VertexId {
    VertexId { ell, m, n }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Origin,
    RayL00,
    FaceLL0,
    RayLLL,
    FaceLM0,
    FaceLMM,
    FaceLLM,
    Interior,
}

impl VertexClass {
    pub const ALL: [VertexClass; 8] = [
        VertexClass::Origin,
        VertexClass::RayL00,
        VertexClass::FaceLL0,
        VertexClass::RayLLL,
        VertexClass::FaceLM0,
        VertexClass::FaceLMM,
        VertexClass::FaceLLM,
        VertexClass::Interior,
    ];

    /// Smallest representative of the class.
    pub fn representative(self) -> VertexId {
        match self {
            VertexClass::Origin => v(0, 0, 0),
            VertexClass::RayL00 => v(1, 0, 0),
            VertexClass::FaceLL0 => v(1, 1, 0),
            VertexClass::RayLLL => v(1, 1, 1),
            VertexClass::FaceLM0 => v(2, 1, 0),
            VertexClass::FaceLMM => v(2, 1, 1),
            VertexClass::FaceLLM => v(2, 2, 1),
            VertexClass::Interior => v(3, 2, 1),
        }
    }

    /// Number of neighbors summed over the three color steps.
    pub fn degree(self) -> usize {
        match self {
            VertexClass::Origin => 3,
            VertexClass::RayL00 | VertexClass::RayLLL => 6,
            VertexClass::FaceLL0 => 7,
            VertexClass::FaceLM0 | VertexClass::FaceLMM | VertexClass::FaceLLM => 10,
            VertexClass::Interior => 14,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexClass::Origin => "Origin",
            VertexClass::RayL00 => "RayL00",
            VertexClass::FaceLL0 => "FaceLL0",
            VertexClass::RayLLL => "RayLLL",
            VertexClass::FaceLM0 => "FaceLM0",
            VertexClass::FaceLMM => "FaceLMM",
            VertexClass::FaceLLM => "FaceLLM",
            VertexClass::Interior => "Interior",
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorIndex(u8);

impl ColorIndex {
    pub fn value(self) -> u8 {
        self.0
    }

    pub fn shift(self, step: u8) -> ColorIndex {
        ColorIndex((self.0 + step) % 4)
    }
}

pub fn classify(v: VertexId) -> VertexClass {
    let VertexId { ell, m, n } = v;
    if ell == 0 {
        VertexClass::Origin
    } else if m == 0 {
        VertexClass::RayL00
    } else if n == 0 {
        if ell == m {
            VertexClass::FaceLL0
        } else {
            VertexClass::FaceLM0
        }
    } else if ell == n {
        VertexClass::RayLLL
    } else if m == n {
        VertexClass::FaceLMM
    } else if ell == m {
        VertexClass::FaceLLM
    } else {
        VertexClass::Interior
    }
}

/// Checked variant for raw tuples.
pub fn classify_tuple(ell: i64, m: i64, n: i64) -> Result<VertexClass, Error> {
    VertexId::try_from_signed(ell, m, n).map(classify)
}

pub fn color(v: VertexId) -> ColorIndex {
    ColorIndex(((v.ell as u64 + v.m as u64 + v.n as u64) % 4) as u8)
}

/// A polynomial in `q` with small nonnegative integer coefficients,
/// `c[0] + c[1] q + ... + c[4] q^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QPoly(pub [u64; 5]);

impl QPoly {
    pub fn eval(self, q: u64) -> u64 {
        self.0.iter().rev().fold(0u64, |acc, &c| acc * q + c)
    }
}

const fn qp(c: [u64; 5]) -> QPoly {
    QPoly(c)
}

// Frequently used coefficient polynomials.
const ONE: QPoly = qp([1, 0, 0, 0, 0]);
const Q: QPoly = qp([0, 1, 0, 0, 0]);
const Q2: QPoly = qp([0, 0, 1, 0, 0]);
const Q3: QPoly = qp([0, 0, 0, 1, 0]);
const Q4: QPoly = qp([0, 0, 0, 0, 1]);
const Q_1: QPoly = qp([1, 1, 0, 0, 0]); // q + 1
const Q2_Q: QPoly = qp([0, 1, 1, 0, 0]); // q^2 + q
const Q2_Q_1: QPoly = qp([1, 1, 1, 0, 0]); // q^2 + q + 1
const Q3_Q2: QPoly = qp([0, 0, 1, 1, 0]); // q^3 + q^2
const Q3_Q2_Q: QPoly = qp([0, 1, 1, 1, 0]); // q^3 + q^2 + q
const Q3_Q2_Q_1: QPoly = qp([1, 1, 1, 1, 0]);
const Q4_Q3: QPoly = qp([0, 0, 0, 1, 1]);
const Q4_Q3_Q2: QPoly = qp([0, 0, 1, 1, 1]);
const Q_Q1_SQ: QPoly = qp([0, 1, 2, 1, 0]); // q (q + 1)^2
const ROW2: QPoly = qp([1, 1, 2, 1, 1]); // q^4 + q^3 + 2 q^2 + q + 1

/// The neighbor table with coefficients, in the fixed row order used for
/// summation. `i` must be 1, 2 or 3.
pub(crate) fn table(x: VertexId, i: u8) -> Result<Vec<(VertexId, QPoly)>, Error> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidStep(i as i64));
    }
    let (l, m, n) = (x.ell, x.m, x.n);
    use VertexClass::*;
    let rows: Vec<(VertexId, QPoly)> = match (classify(x), i) {
        (Origin, 1) => vec![(v(1, 0, 0), Q3_Q2_Q_1)],
        (Origin, 2) => vec![(v(1, 1, 0), ROW2)],
        (Origin, _) => vec![(v(1, 1, 1), Q3_Q2_Q_1)],

        (RayL00, 1) => vec![(v(l, 1, 0), Q3_Q2_Q), (v(l + 1, 0, 0), ONE)],
        (RayL00, 2) => vec![(v(l, 1, 1), Q4_Q3_Q2), (v(l + 1, 1, 0), Q2_Q_1)],
        (RayL00, _) => vec![(v(l - 1, 0, 0), Q3), (v(l + 1, 1, 1), Q2_Q_1)],

        (FaceLL0, 1) => vec![(v(l, l, 1), Q3_Q2), (v(l + 1, l, 0), Q_1)],
        (FaceLL0, 2) => vec![
            (v(l - 1, l - 1, 0), Q4),
            (v(l + 1, l, 1), Q_Q1_SQ),
            (v(l + 1, l + 1, 0), ONE),
        ],
        (FaceLL0, _) => vec![(v(l, l - 1, 0), Q3_Q2), (v(l + 1, l + 1, 1), Q_1)],

        (RayLLL, 1) => vec![(v(l - 1, l - 1, l - 1), Q3), (v(l + 1, l, l), Q2_Q_1)],
        (RayLLL, 2) => vec![(v(l, l - 1, l - 1), Q4_Q3_Q2), (v(l + 1, l + 1, l), Q2_Q_1)],
        (RayLLL, _) => vec![(v(l, l, l - 1), Q3_Q2_Q), (v(l + 1, l + 1, l + 1), ONE)],

        (FaceLM0, 1) => vec![(v(l, m, 1), Q3_Q2), (v(l, m + 1, 0), Q), (v(l + 1, m, 0), ONE)],
        (FaceLM0, 2) => vec![
            (v(l - 1, m - 1, 0), Q4),
            (v(l, m + 1, 1), Q3_Q2),
            (v(l + 1, m, 1), Q2_Q),
            (v(l + 1, m + 1, 0), ONE),
        ],
        (FaceLM0, _) => vec![(v(l - 1, m, 0), Q3), (v(l, m - 1, 0), Q2), (v(l + 1, m + 1, 1), Q_1)],

        (FaceLMM, 1) => vec![
            (v(l - 1, m - 1, m - 1), Q3),
            (v(l, m + 1, m), Q2_Q),
            (v(l + 1, m, m), ONE),
        ],
        (FaceLMM, 2) => vec![
            (v(l - 1, m, m - 1), Q4_Q3),
            (v(l, m - 1, m - 1), Q2),
            (v(l, m + 1, m + 1), Q2),
            (v(l + 1, m + 1, m), Q_1),
        ],
        (FaceLMM, _) => vec![
            (v(l - 1, m, m), Q3),
            (v(l, m, m - 1), Q2_Q),
            (v(l + 1, m + 1, m + 1), ONE),
        ],

        (FaceLLM, 1) => vec![
            (v(l - 1, l - 1, n - 1), Q3),
            (v(l, l, n + 1), Q2),
            (v(l + 1, l, n), Q_1),
        ],
        (FaceLLM, 2) => vec![
            (v(l - 1, l - 1, n), Q4),
            (v(l, l - 1, n - 1), Q3_Q2),
            (v(l + 1, l, n + 1), Q2_Q),
            (v(l + 1, l + 1, n), ONE),
        ],
        (FaceLLM, _) => vec![
            (v(l, l - 1, n), Q3_Q2),
            (v(l, l, n - 1), Q),
            (v(l + 1, l + 1, n + 1), ONE),
        ],

        (Interior, 1) => vec![
            (v(l - 1, m - 1, n - 1), Q3),
            (v(l, m, n + 1), Q2),
            (v(l, m + 1, n), Q),
            (v(l + 1, m, n), ONE),
        ],
        (Interior, 2) => vec![
            (v(l - 1, m - 1, n), Q4),
            (v(l - 1, m, n - 1), Q3),
            (v(l, m - 1, n - 1), Q2),
            (v(l, m + 1, n + 1), Q2),
            (v(l + 1, m, n + 1), Q),
            (v(l + 1, m + 1, n), ONE),
        ],
        (Interior, _) => vec![
            (v(l - 1, m, n), Q3),
            (v(l, m - 1, n), Q2),
            (v(l, m, n - 1), Q),
            (v(l + 1, m + 1, n + 1), ONE),
        ],
    };
    Ok(rows)
}

/// Color-`i` neighbors of `x`, in table order. `i` must be 1, 2 or 3.
pub fn neighbors(x: VertexId, i: u8) -> Result<Vec<VertexId>, Error> {
    Ok(table(x, i)?.into_iter().map(|(u, _)| u).collect())
}

/// All vertices with `ell <= radius`, in lexicographic order.
pub fn enumerate_ball(radius: u32) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(ball_size(radius));
    for ell in 0..=radius {
        for m in 0..=ell {
            for n in 0..=m {
                out.push(v(ell, m, n));
            }
        }
    }
    out
}

pub fn ball_size(radius: u32) -> usize {
    let r = radius as usize;
    (r + 1) * (r + 2) * (r + 3) / 6
}

/// Vertices of `ball(radius)` whose neighbors all stay inside the ball,
/// which is `ball(radius - 1)`.
pub fn interior(radius: u32) -> Result<Vec<VertexId>, Error> {
    if radius == 0 {
        return Err(Error::Usage("interior needs radius >= 1".into()));
    }
    Ok(enumerate_ball(radius - 1))
}

/// Position of `x` in the lexicographic ball order.
pub fn ball_index(x: VertexId) -> usize {
    let (l, m, n) = (x.ell as usize, x.m as usize, x.n as usize);
    l * (l + 1) * (l + 2) / 6 + m * (m + 1) / 2 + n
}
