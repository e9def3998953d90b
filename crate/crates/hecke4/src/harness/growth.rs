//! Growth of `f_z` along the three rays against `q^((3+c)l/2)`,
//! `q^((2+c)l)` and `q^((3+c)l/2)`.

use serde::Serialize;
use serde_json::json;

use super::{slope, z_inputs};
use crate::eigen::{ray_values, Ray};
use crate::report::VerificationReport;
use crate::spectral::SpectralPoint;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayGrowth {
    pub ray: Ray,
    /// `sup |normalized|` over `l <= radius`.
    pub sup: f64,
    /// Slope in base-`q` logarithm per step of the running maximum of the
    /// normalized sequence, over the last half of the range.
    pub slope: f64,
}

pub fn measure_growth(z: &SpectralPoint, q: u64, radius: u32, c: f64) -> Result<Vec<RayGrowth>, Error> {
    if !(c > 0.0) {
        return Err(Error::Params(format!("c must be positive, got {c}")));
    }
    let lq = (q as f64).ln();
    let mut out = Vec::new();
    for ray in Ray::ALL {
        let rv = ray_values(z.z(), q, ray, radius, c)?;
        let mut run = f64::NEG_INFINITY;
        let env: Vec<f64> = rv
            .normalized
            .iter()
            .map(|x| {
                run = run.max(x.norm().max(1e-300).ln() / lq);
                run
            })
            .collect();
        let half = env.len() / 2;
        out.push(RayGrowth { ray, sup: super::cnorm_max(&rv.normalized), slope: slope(&env[half..]) });
    }
    Ok(out)
}

/// Passes when no normalized ray sequence shows an exponential trend:
/// every slope is at most `c / 4`.
pub fn condition_b_check(z: &SpectralPoint, q: u64, radius: u32, c: f64) -> Result<VerificationReport, Error> {
    let g = measure_growth(z, q, radius, c)?;
    let limit = c / 4.0;
    let rep = VerificationReport::new(
        "condition-b-growth",
        "ray-growth-bounds",
        z_inputs(z, q, json!({ "radius": radius, "c": c })),
    )
    .with("rays", &g)
    .with("slope_limit", limit);
    let worst = g.iter().max_by(|a, b| a.slope.total_cmp(&b.slope)).expect("three rays");
    Ok(if worst.slope <= limit { rep } else { rep.fail(json!({ "ray": worst.ray, "slope": worst.slope })) })
}
