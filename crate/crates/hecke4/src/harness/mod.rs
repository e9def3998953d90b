//! Executable checks: eigen residuals, recurrences, growth along rays,
//! Weyl sequences, the convolution identities and the spectrum decision.
//!
//! Each `*_check` function returns a [`VerificationReport`]; the `measure_*`
//! functions underneath return the raw numbers.

mod radial;
mod decision;
mod growth;
mod recurrence;
mod structure;
mod weyl;

pub use radial::{
    convolution_check, radial_sequences, measure_convolution, random_perturbation, sequences_check,
    ConvolutionGaps, SequenceTriple,
};
pub use decision::{
    decide, spectrum_decision, weakly_ramanujan, weakly_ramanujan_report, Decision, DecisionConfig, DecisionInput,
    FamilySweep, RamanujanSummary, WeylSmoke,
};
pub use growth::{condition_b_check, measure_growth, RayGrowth};
pub use recurrence::{
    char_recurrence_check, face_recurrence_check, measure_char_recurrence, measure_face_recurrence, MaxResidual,
};
pub use structure::{
    count_stabilizer, detailed_balance_check, detailed_balance_violation, row_sum_violation, row_sums_check,
    stabilizer_check, trivial_spectrum_check, volume_increments, StabilizerCount, ENUMERATION_BUDGET, VOLUME_TOL,
};
pub use weyl::{
    measure_weyl_identity, measure_weyl_ratio, weyl_identity_check, weyl_ratio, StatedRow, WeylIdentity, WeylRatio,
};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::eigen::Eigenfunction;
use crate::geometry::{ball_index, enumerate_ball, VertexId};
use crate::operators::stencil;
use crate::report::VerificationReport;
use crate::spectral::{eig_from_z, SpectralPoint};
use crate::Error;

/// Tolerance of the eigen residual, relative to `1 + max local |f|`.
pub const RESIDUAL_TOL: f64 = 1e-9;

pub(crate) fn z_inputs(z: &SpectralPoint, q: u64, extra: Value) -> Value {
    let mut v = json!({ "z": z, "q": q });
    if let (Some(m), Value::Object(e)) = (v.as_object_mut(), extra) {
        m.extend(e);
    }
    v
}

/// Largest eigen residual per operator over `interior(radius)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    /// `|A_i f - lambda_i f|(v) / (1 + max |f| over v and its neighbors)`.
    pub max: [f64; 3],
    pub worst: [VertexId; 3],
}

impl Residual {
    pub fn overall(&self) -> f64 {
        self.max.iter().copied().fold(0.0, f64::max)
    }
}

pub fn eigen_residual(z: &SpectralPoint, q: u64, radius: u32) -> Result<Residual, Error> {
    if radius < 1 {
        return Err(Error::Usage("residual needs radius >= 1".into()));
    }
    let lam = eig_from_z(&z.z(), q)?;
    let f = Eigenfunction::new(z.z(), q)?.on_ball(radius)?;
    let mut max = [0.0; 3];
    let mut worst = [VertexId::ORIGIN; 3];
    for x in enumerate_ball(radius - 1) {
        let fx = f.values[ball_index(x)];
        for i in 1..=3u8 {
            let st = stencil(x, i, q)?;
            let mut acc = -lam.get(i) * fx;
            let mut local = fx.norm();
            for (u, c) in st.terms {
                let fu = f.values[ball_index(u)];
                acc += fu * c as f64;
                local = local.max(fu.norm());
            }
            let r = acc.norm() / (1.0 + local);
            let k = (i - 1) as usize;
            if r > max[k] || r.is_nan() {
                max[k] = r;
                worst[k] = x;
            }
        }
    }
    Ok(Residual { max, worst })
}

pub fn residual_check(z: &SpectralPoint, q: u64, radius: u32) -> Result<VerificationReport, Error> {
    let r = eigen_residual(z, q, radius)?;
    let rep = VerificationReport::new(
        "eigen-residual",
        "closed-form-simultaneous-eigenfunction",
        z_inputs(z, q, json!({ "radius": radius })),
    )
    .with("max_residual", r.max)
    .with("tolerance", RESIDUAL_TOL);
    Ok(if r.overall() <= RESIDUAL_TOL {
        rep
    } else {
        let k = (0..3).max_by(|&a, &b| r.max[a].total_cmp(&r.max[b])).unwrap_or(0);
        rep.fail(json!({ "operator": k + 1, "vertex": r.worst[k] }))
    })
}

/// Least-squares slope of `y` against `0, 1, 2, ...`.
pub(crate) fn slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    if y.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (k, v) in y.iter().enumerate() {
        let dx = k as f64 - mx;
        sxy += dx * (v - my);
        sxx += dx * dx;
    }
    sxy / sxx
}

pub(crate) fn cnorm_max(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
