//! Stabilizer orders, vertex weights and finite volume.
//!
//! Orders are exact big integers and weights exact rationals. The only
//! conversions to floating point are [`Weight::to_f64`] and [`Weight::ln`].

mod oracle;

pub use oracle::{brute_force_order, enumeration_size, entry_degrees};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::geometry::{enumerate_ball, VertexClass, VertexId};
use crate::{check_q, Error};

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `(q-1)^3 q^6`, the normalization shared by every weight.
pub fn normalization(q: u64) -> BigUint {
    big(q - 1).pow(3) * big(q).pow(6)
}

/// Exact order of the vertex stabilizer in `PGL4(Fq[t])`.
pub fn stabilizer_order(x: VertexId, q: u64) -> Result<BigUint, Error> {
    check_q(q)?;
    let (l, m, n) = (x.ell, x.m, x.n);
    let b = big(q);
    let unit = big(q - 1).pow(3);
    let c1 = big(q + 1);
    let c2 = big(q * q + q + 1);
    let c3 = big(q * q * q + q * q + q + 1);
    let order = match x.class() {
        VertexClass::Origin => unit * c3 * c2 * c1 * b.pow(6),
        VertexClass::RayL00 | VertexClass::RayLLL => unit * c2 * c1 * b.pow(3 * l + 6),
        VertexClass::FaceLL0 => unit * c1.pow(2) * b.pow(4 * l + 6),
        VertexClass::FaceLM0 => unit * c1 * b.pow(3 * l + m + 6),
        VertexClass::FaceLMM => unit * c1 * b.pow(3 * l + 6),
        VertexClass::FaceLLM => unit * c1 * b.pow(4 * l - n + 6),
        VertexClass::Interior => unit * b.pow(3 * l + m - n + 6),
    };
    Ok(order)
}

/// Exact weight `(q-1)^3 q^6 / |stabilizer|`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight(pub BigRational);

impl Weight {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// Natural log, accurate even when the value underflows `f64`.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0.numer().to_biguint().expect("positive"))
            - ln_biguint(&self.0.denom().to_biguint().expect("positive"))
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 900 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 60;
    let top: BigUint = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn vertex_weight(x: VertexId, q: u64) -> Result<Weight, Error> {
    let order = stabilizer_order(x, q)?;
    Ok(Weight(BigRational::new(normalization(q).into(), order.into())))
}

/// `sum of w(v)` over `ball(radius)`.
pub fn total_volume(radius: u32, q: u64) -> Result<BigRational, Error> {
    let mut acc = BigRational::zero();
    for x in enumerate_ball(radius) {
        acc += vertex_weight(x, q)?.0;
    }
    Ok(acc)
}

/// `ln w(v)` from the closed-form order, in floating point. Agrees with
/// [`Weight::ln`] to rounding and avoids big-integer work on large balls.
pub fn ln_weight(x: VertexId, q: u64) -> Result<f64, Error> {
    check_q(q)?;
    let qf = q as f64;
    let lq = qf.ln();
    let c1 = (qf + 1.0).ln();
    let c2 = (qf * qf + qf + 1.0).ln();
    let c3 = (qf * qf * qf + qf * qf + qf + 1.0).ln();
    let (l, m, n) = (x.ell as f64, x.m as f64, x.n as f64);
    // ln |stabilizer| minus ln((q-1)^3 q^6).
    let excess = match x.class() {
        VertexClass::Origin => c3 + c2 + c1,
        VertexClass::RayL00 | VertexClass::RayLLL => c2 + c1 + 3.0 * l * lq,
        VertexClass::FaceLL0 => 2.0 * c1 + 4.0 * l * lq,
        VertexClass::FaceLM0 => c1 + (3.0 * l + m) * lq,
        VertexClass::FaceLMM => c1 + 3.0 * l * lq,
        VertexClass::FaceLLM => c1 + (4.0 * l - n) * lq,
        VertexClass::Interior => (3.0 * l + m - n) * lq,
    };
    Ok(-excess)
}

/// Floating weights for a whole ball, in ball order.
pub fn ball_weights_f64(radius: u32, q: u64) -> Result<Vec<f64>, Error> {
    enumerate_ball(radius).into_iter().map(|x| vertex_weight(x, q).map(|w| w.to_f64())).collect()
}

/// Square roots of the weights, in ball order. Used to form `|f| sqrt(w)`
/// without overflowing on deep vertices.
pub fn ball_sqrt_weights(radius: u32, q: u64) -> Result<Vec<f64>, Error> {
    enumerate_ball(radius)
        .into_iter()
        .map(|x| vertex_weight(x, q).map(|w| (0.5 * w.ln()).exp()))
        .collect()
}

pub fn is_unit_fraction(w: &Weight) -> bool {
    w.0.numer().is_one()
}
