//! Exact checks of the quotient itself: stabilizer orders against the
//! enumeration oracle, row sums, detailed balance and the trivial spectrum.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::geometry::{ball_index, enumerate_ball, VertexId};
use crate::operators::{regular_degrees, stencil};
use crate::report::VerificationReport;
use crate::weights::{brute_force_order, stabilizer_order, total_volume, vertex_weight};
use crate::{check_q, Error};

/// Default cap on the number of matrices the oracle may visit.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Threshold on `total_volume(L) - total_volume(L-1)` by `L = 30`.
pub const VOLUME_TOL: f64 = 1e-8;

/// Output record of `count-stabilizers`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerCount {
    pub vertex: VertexId,
    pub q: u64,
    pub formula_order: String,
    /// `None` when the enumeration is over budget or `q` is not prime.
    pub brute_force_order: Option<String>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl StabilizerCount {
    /// A mismatch, as opposed to a missing oracle value.
    pub fn contradicts(&self) -> bool {
        self.brute_force_order.is_some() && !self.matches
    }
}

pub fn count_stabilizer(x: VertexId, q: u64, budget: u128) -> Result<StabilizerCount, Error> {
    let formula = stabilizer_order(x, q)?;
    let brute: Option<BigUint> = match brute_force_order(x, q, budget) {
        Ok(b) => Some(b),
        Err(Error::BudgetExceeded { .. } | Error::NotPrime(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(StabilizerCount {
        vertex: x,
        q,
        formula_order: formula.to_string(),
        matches: brute.as_ref() == Some(&formula),
        brute_force_order: brute.map(|b| b.to_string()),
    })
}

pub fn stabilizer_check(x: VertexId, q: u64, budget: u128) -> Result<VerificationReport, Error> {
    let c = count_stabilizer(x, q, budget)?;
    let rep = VerificationReport::new("stabilizer-oracle", "stabilizer-order-formula", json!({ "vertex": x, "q": q }))
        .with("formula_order", &c.formula_order)
        .with("brute_force_order", &c.brute_force_order);
    Ok(if c.contradicts() {
        rep.fail(x)
    } else if c.brute_force_order.is_none() {
        rep.flag("enumeration over budget")
    } else {
        rep
    })
}

/// First vertex of `ball(radius)` whose row sums differ from the regular degrees.
pub fn row_sum_violation(q: u64, radius: u32) -> Result<Option<(VertexId, u8, u64)>, Error> {
    let deg = regular_degrees(q);
    for x in enumerate_ball(radius) {
        for i in 1..=3u8 {
            let s = stencil(x, i, q)?.row_sum();
            if s != deg[(i - 1) as usize] {
                return Ok(Some((x, i, s)));
            }
        }
    }
    Ok(None)
}

pub fn row_sums_check(q: u64, radius: u32) -> Result<VerificationReport, Error> {
    let rep = VerificationReport::new("row-sums", "regular-row-sums", json!({ "q": q, "radius": radius }))
        .with("degrees", regular_degrees(q))
        .with("vertices", enumerate_ball(radius).len());
    Ok(match row_sum_violation(q, radius)? {
        Some((x, i, s)) => rep.fail(json!({ "vertex": x, "step": i, "row_sum": s })),
        None => rep,
    })
}

/// First edge `u -> v` inside `ball(radius)` with
/// `w(u) c_i(u -> v) != w(v) c_{4-i}(v -> u)`, compared as exact rationals.
pub fn detailed_balance_violation(q: u64, radius: u32) -> Result<Option<(VertexId, VertexId, u8)>, Error> {
    check_q(q)?;
    let ball = enumerate_ball(radius);
    let w: Vec<BigRational> = ball.iter().map(|&x| vertex_weight(x, q).map(|w| w.0)).collect::<Result<_, _>>()?;
    for &u in &ball {
        for i in 1..=3u8 {
            for (v, c) in stencil(u, i, q)?.terms {
                if v.ell > radius {
                    continue;
                }
                let back = stencil(v, 4 - i, q)?.coefficient_of(u).unwrap_or(0);
                let lhs = &w[ball_index(u)] * BigRational::from_integer(c.into());
                let rhs = &w[ball_index(v)] * BigRational::from_integer(back.into());
                if lhs != rhs || lhs.is_zero() {
                    return Ok(Some((u, v, i)));
                }
            }
        }
    }
    Ok(None)
}

pub fn detailed_balance_check(q: u64, radius: u32) -> Result<VerificationReport, Error> {
    let rep = VerificationReport::new("detailed-balance", "weighted-self-adjointness", json!({ "q": q, "radius": radius }));
    Ok(match detailed_balance_violation(q, radius)? {
        Some((u, v, i)) => rep.fail(json!({ "from": u, "to": v, "step": i })),
        None => rep,
    })
}

/// Successive differences of `total_volume(L)` for `L = 1..=radius`.
pub fn volume_increments(q: u64, radius: u32) -> Result<Vec<f64>, Error> {
    let mut prev = total_volume(0, q)?;
    let mut out = Vec::new();
    for l in 1..=radius {
        let v = total_volume(l, q)?;
        out.push((&v - &prev).to_f64().unwrap_or(f64::NAN));
        prev = v;
    }
    Ok(out)
}

/// The constant function: exact eigenvalues from the row sums, and
/// `||1||^2 = total_volume(L)` converging.
pub fn trivial_spectrum_check(q: u64, radius: u32) -> Result<VerificationReport, Error> {
    let inc = volume_increments(q, radius)?;
    let vol = total_volume(radius, q)?.to_f64().unwrap_or(f64::NAN);
    let rows = row_sum_violation(q, radius.min(30))?;
    let last = inc.last().copied().unwrap_or(f64::NAN);
    let rep = VerificationReport::new("trivial-spectrum", "constant-eigenfunction", json!({ "q": q, "radius": radius }))
        .with("eigenvalues", regular_degrees(q))
        .with("total_volume", vol)
        .with("last_increment", last)
        .with("tolerance", VOLUME_TOL);
    Ok(if let Some((x, i, s)) = rows {
        rep.fail(json!({ "vertex": x, "step": i, "row_sum": s }))
    } else if !(last < VOLUME_TOL) {
        rep.fail(json!({ "radius": radius, "increment": last }))
    } else {
        rep
    })
}
