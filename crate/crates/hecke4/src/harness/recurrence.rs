//! Linear recurrences satisfied by the normalized values of `f_z` along
//! the `(l, 0, 0)` ray and the `(l, m, 0)` face.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::z_inputs;
use crate::eigen::Eigenfunction;
use crate::geometry::VertexId;
use crate::report::VerificationReport;
use crate::spectral::{eig_from_z, SpectralPoint};
use crate::Error;

pub const RECURRENCE_TOL: f64 = 1e-9;

/// Largest residual relative to the sum of absolute terms, and where.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxResidual {
    pub value: f64,
    pub at: Option<VertexId>,
}

impl MaxResidual {
    fn new() -> Self {
        MaxResidual { value: 0.0, at: None }
    }

    fn push(&mut self, terms: &[Complex64], at: VertexId) {
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        let sum: Complex64 = terms.iter().sum();
        let r = if scale > 0.0 { sum.norm() / scale } else { 0.0 };
        if r > self.value || r.is_nan() {
            self.value = r;
            self.at = Some(at);
        }
    }
}

/// With `a_l = f(l,0,0) / q^l`:
/// `a_{l+2} - (l1/q) a_{l+1} + (l2/q) a_l - l3 a_{l-1} + q^2 a_{l-2} = 0`
/// for `2 <= l <= lmax - 2`.
pub fn measure_char_recurrence(z: &SpectralPoint, q: u64, lmax: u32) -> Result<MaxResidual, Error> {
    let lam = eig_from_z(&z.z(), q)?;
    let f = Eigenfunction::new(z.z(), q)?;
    let qf = q as f64;
    let a: Vec<Complex64> = (0..=lmax)
        .map(|l| f.value(VertexId { ell: l, m: 0, n: 0 }).map(|v| v * (-(l as f64) * qf.ln()).exp()))
        .collect::<Result<_, _>>()?;
    let mut out = MaxResidual::new();
    for l in 2..=lmax.saturating_sub(2) as usize {
        let terms = [
            a[l + 2],
            -lam.lambda1 / qf * a[l + 1],
            lam.lambda2 / qf * a[l],
            -lam.lambda3 * a[l - 1],
            a[l - 2] * (qf * qf),
        ];
        out.push(&terms, VertexId { ell: l as u32, m: 0, n: 0 });
    }
    Ok(out)
}

/// With `a_{l,m} = f(l,m,0) / q^(l+m)`:
/// `a_{l+2,m+1} + q a_{l+1,m+2} - (l1/q) a_{l+1,m+1} + (l3/q) a_{l,m}
///  - q a_{l-1,m} - a_{l,m-1} = 0` for `l > m >= 1`, `l + 2 <= lmax`.
pub fn measure_face_recurrence(z: &SpectralPoint, q: u64, lmax: u32) -> Result<MaxResidual, Error> {
    let lam = eig_from_z(&z.z(), q)?;
    let f = Eigenfunction::new(z.z(), q)?;
    let qf = q as f64;
    let a = |l: u32, m: u32| -> Result<Complex64, Error> {
        let v = f.value(VertexId { ell: l, m, n: 0 })?;
        Ok(v * (-((l + m) as f64) * qf.ln()).exp())
    };
    let mut out = MaxResidual::new();
    for l in 2..=lmax.saturating_sub(2) {
        for m in 1..l {
            let terms = [
                a(l + 2, m + 1)?,
                a(l + 1, m + 2)? * qf,
                -lam.lambda1 / qf * a(l + 1, m + 1)?,
                lam.lambda3 / qf * a(l, m)?,
                -a(l - 1, m)? * qf,
                -a(l, m - 1)?,
            ];
            out.push(&terms, VertexId { ell: l, m, n: 0 });
        }
    }
    Ok(out)
}

fn report(name: &str, anchor: &str, z: &SpectralPoint, q: u64, lmax: u32, r: MaxResidual) -> VerificationReport {
    let rep = VerificationReport::new(name, anchor, z_inputs(z, q, json!({ "lmax": lmax })))
        .with("max_residual", r.value)
        .with("tolerance", RECURRENCE_TOL);
    if r.value <= RECURRENCE_TOL {
        rep
    } else {
        rep.fail(r.at)
    }
}

pub fn char_recurrence_check(z: &SpectralPoint, q: u64, lmax: u32) -> Result<VerificationReport, Error> {
    let r = measure_char_recurrence(z, q, lmax)?;
    Ok(report("char-recurrence", "ray-characteristic-recurrence", z, q, lmax, r))
}

pub fn face_recurrence_check(z: &SpectralPoint, q: u64, lmax: u32) -> Result<VerificationReport, Error> {
    let r = measure_face_recurrence(z, q, lmax)?;
    Ok(report("face-recurrence", "face-recurrence", z, q, lmax, r))
}
