//! Weyl sequences `f^eps(l,m,n) = (1-eps)^l f(l,m,n)`.
//!
//! Since `A_i f = lambda_i f`, the defect at `v` is
//! `sum_u c(v -> u) ((1-eps)^(l_u) - (1-eps)^(l_v)) f(u)`; only neighbors in
//! the adjacent shells contribute.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::z_inputs;
use crate::eigen::{coefficient_table, Eigenfunction};
use crate::geometry::{ball_index, enumerate_ball, VertexClass, VertexId};
use crate::operators::{regular_degrees, stencil, BallFunction};
use crate::report::VerificationReport;
use crate::spectral::{condition_d, eig_from_z, SpectralPoint};
use crate::weights::ln_weight;
use crate::Error;

pub const IDENTITY_TOL: f64 = 1e-9;

/// Relative change over five shells below which the ratio counts as settled.
pub const STABLE_TOL: f64 = 1e-4;

/// Allowed excess over the bound from truncating to a finite ball.
pub const BOUNDARY_SLACK: f64 = 1e-3;

fn check_eps(eps: f64) -> Result<(), Error> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

fn vid(ell: u32, m: u32, n: u32) -> VertexId {
    VertexId { ell, m, n }
}

/// Comparison of a closed-form `A_1` defect row with the stencil result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatedRow {
    pub class: &'static str,
    /// The row as it is usually stated.
    pub stated: &'static str,
    pub stated_gap: f64,
    /// The row re-derived from the stencil.
    pub rederived: &'static str,
    pub rederived_gap: f64,
    pub vertices: usize,
}

impl StatedRow {
    pub fn stated_agrees(&self) -> bool {
        self.stated_gap <= IDENTITY_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylIdentity {
    pub eps: f64,
    pub radius: u32,
    /// Per operator: largest gap between the stencil defect and the
    /// shell-difference expression, relative to the size of its terms.
    pub max_gap: [f64; 3],
    /// Per operator: `||A_i f^eps - lambda_i f^eps||` over `interior(radius)`
    /// computed from the shell-difference expression.
    pub numerators: [f64; 3],
    pub rows: Vec<StatedRow>,
}

fn rows_text(class: VertexClass) -> (&'static str, &'static str) {
    match class {
        VertexClass::Origin => ("-e(q^3+q^2+q+1) f(1,0,0)", "-e(q^3+q^2+q+1) f(1,0,0)"),
        VertexClass::RayL00 => ("-e(1-e)^l f(l+1,0,0)", "-e(1-e)^l f(l+1,0,0)"),
        VertexClass::FaceLL0 => ("-e(1-e)^l (q+1) f(l+1,l,0)", "-e(1-e)^l (q+1) f(l+1,l,0)"),
        VertexClass::RayLLL => (
            "e(1-e)^(l-1) q^3 f(l-1,l-1,l-1) - e(1-e)^l (q^2+q+1) f(l+1,l,l)",
            "e(1-e)^(l-1) q^3 f(l-1,l-1,l-1) - e(1-e)^l (q^2+q+1) f(l+1,l,l)",
        ),
        VertexClass::FaceLM0 => ("-e(1-e)^l f(l+1,m,0)", "-e(1-e)^l f(l+1,m,0)"),
        VertexClass::FaceLMM => (
            "e(1-e)^(l-1) q^3 f(l+1,m,0) - e(1-e)^l f(l+1,m,m)",
            "e(1-e)^(l-1) q^3 f(l-1,m-1,m-1) - e(1-e)^l f(l+1,m,m)",
        ),
        VertexClass::FaceLLM => (
            "e(1-e)^(l+1) q^3 f(l-1,l-1,m-1) - e(1-e)^l f(l+1,l,m)",
            "e(1-e)^(l-1) q^3 f(l-1,l-1,m-1) - e(1-e)^l (q+1) f(l+1,l,m)",
        ),
        VertexClass::Interior => (
            "e(1-e)^(l-1) q^3 f(l-1,m-1,n-1) - e(1-e)^l f(l+1,m,n)",
            "e(1-e)^(l-1) q^3 f(l-1,m-1,n-1) - e(1-e)^l f(l+1,m,n)",
        ),
    }
}

/// The `A_1` defect at `x` by class: `(stated, rederived)`.
fn closed_rows(x: VertexId, q: f64, eps: f64, f: &BallFunction) -> (Complex64, Complex64) {
    let e = 1.0 - eps;
    let (l, m, n) = (x.ell, x.m, x.n);
    let li = l as i32;
    let up = |y: VertexId| f.get(y) * (-eps * e.powi(li));
    let down = |y: VertexId, p: i32| f.get(y) * (eps * e.powi(p) * q * q * q);
    match x.class() {
        VertexClass::Origin => {
            let r = f.get(vid(1, 0, 0)) * (-eps * (q * q * q + q * q + q + 1.0));
            (r, r)
        }
        VertexClass::RayL00 => {
            let r = up(vid(l + 1, 0, 0));
            (r, r)
        }
        VertexClass::FaceLL0 => {
            let r = up(vid(l + 1, l, 0)) * (q + 1.0);
            (r, r)
        }
        VertexClass::RayLLL => {
            let r = down(vid(l - 1, l - 1, l - 1), li - 1) + up(vid(l + 1, l, l)) * (q * q + q + 1.0);
            (r, r)
        }
        VertexClass::FaceLM0 => {
            let r = up(vid(l + 1, m, 0));
            (r, r)
        }
        VertexClass::FaceLMM => (
            down(vid(l + 1, m, 0), li - 1) + up(vid(l + 1, m, m)),
            down(vid(l - 1, m - 1, m - 1), li - 1) + up(vid(l + 1, m, m)),
        ),
        VertexClass::FaceLLM => (
            down(vid(l - 1, l - 1, n - 1), li + 1) + up(vid(l + 1, l, n)),
            down(vid(l - 1, l - 1, n - 1), li - 1) + up(vid(l + 1, l, n)) * (q + 1.0),
        ),
        VertexClass::Interior => {
            let r = down(vid(l - 1, m - 1, n - 1), li - 1) + up(vid(l + 1, m, n));
            (r, r)
        }
    }
}

/// Checks the defect of `f^eps` on `interior(radius)` against the
/// shell-difference expression (all three operators) and against the
/// closed-form `A_1` rows for each vertex class.
pub fn measure_weyl_identity(z: &SpectralPoint, q: u64, eps: f64, radius: u32) -> Result<WeylIdentity, Error> {
    check_eps(eps)?;
    if radius < 2 {
        return Err(Error::Usage("weyl identity needs radius >= 2".into()));
    }
    let lam = eig_from_z(&z.z(), q)?;
    let f = Eigenfunction::new(z.z(), q)?.on_ball(radius)?;
    let e = 1.0 - eps;
    let qf = q as f64;
    let mut max_gap = [0.0f64; 3];
    let mut num = [0.0f64; 3];
    let mut stats: Vec<(VertexClass, f64, f64, usize)> = VertexClass::ALL.iter().map(|&c| (c, 0.0, 0.0, 0)).collect();
    for x in enumerate_ball(radius - 1) {
        let ex = e.powi(x.ell as i32);
        let fx = f.values[ball_index(x)];
        let sw = (0.5 * ln_weight(x, q)?).exp();
        for i in 1..=3u8 {
            let k = (i - 1) as usize;
            let mut direct = -lam.get(i) * fx * ex;
            let mut shell = Complex64::new(0.0, 0.0);
            let mut scale = (lam.get(i) * fx * ex).norm();
            for (u, c) in stencil(x, i, q)?.terms {
                let fu = f.values[ball_index(u)];
                let eu = e.powi(u.ell as i32);
                direct += fu * (c as f64 * eu);
                shell += fu * (c as f64 * (eu - ex));
                scale += (fu * (c as f64 * eu)).norm();
            }
            let scale = scale.max(f64::MIN_POSITIVE);
            max_gap[k] = max_gap[k].max((direct - shell).norm() / scale);
            num[k] += (shell * sw).norm_sqr();
            if i == 1 {
                let (stated, rederived) = closed_rows(x, qf, eps, &f);
                let s = stats.iter_mut().find(|s| s.0 == x.class()).expect("all classes");
                s.1 = s.1.max((stated - direct).norm() / scale);
                s.2 = s.2.max((rederived - direct).norm() / scale);
                s.3 += 1;
            }
        }
    }
    let rows = stats
        .into_iter()
        .filter(|s| s.3 > 0)
        .map(|(class, sg, rg, count)| {
            let (stated, rederived) = rows_text(class);
            StatedRow { class: class.name(), stated, stated_gap: sg, rederived, rederived_gap: rg, vertices: count }
        })
        .collect();
    Ok(WeylIdentity { eps, radius, max_gap, numerators: num.map(f64::sqrt), rows })
}

pub fn weyl_identity_check(z: &SpectralPoint, q: u64, eps: f64, radius: u32) -> Result<VerificationReport, Error> {
    let w = measure_weyl_identity(z, q, eps, radius)?;
    let mut rep = VerificationReport::new(
        "weyl-identity",
        "weyl-sequence-defect",
        z_inputs(z, q, json!({ "eps": eps, "radius": radius })),
    )
    .with("max_gap", w.max_gap)
    .with("rows", &w.rows)
    .with("tolerance", IDENTITY_TOL);
    let worst = (0..3).max_by(|&a, &b| w.max_gap[a].total_cmp(&w.max_gap[b])).unwrap_or(0);
    if w.max_gap[worst] > IDENTITY_TOL {
        return Ok(rep.fail(json!({ "operator": worst + 1, "gap": w.max_gap[worst] })));
    }
    if let Some(r) = w.rows.iter().find(|r| r.rederived_gap > IDENTITY_TOL) {
        return Ok(rep.fail(json!({ "class": r.class, "gap": r.rederived_gap })));
    }
    let differing: Vec<&str> = w.rows.iter().filter(|r| !r.stated_agrees()).map(|r| r.class).collect();
    if !differing.is_empty() {
        rep.put("stated_rows_differ", &differing);
        rep = rep.flag("stated A_1 rows differ from the stencil; re-derived rows recorded");
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylRatio {
    pub eps: f64,
    /// `eps / (1 - eps) (q^4 + q^3 + 2q^2 + q + 1)`.
    pub bound: f64,
    /// Per operator, the ratio at the radius where it settled (or at the
    /// largest radius tried).
    pub ratios: [f64; 3],
    pub stabilized_at: [Option<u32>; 3],
    pub max_radius: u32,
    pub condition_d: bool,
    /// Cumulative `||A_i f^eps - lambda_i f^eps||` over `interior(L)`, index `L`.
    #[serde(skip)]
    pub numerators: Vec<[f64; 3]>,
    /// Cumulative `||f^eps||` over `interior(L)`, index `L`.
    #[serde(skip)]
    pub denominators: Vec<f64>,
}

impl WeylRatio {
    pub fn ratio_at(&self, radius: u32, i: u8) -> f64 {
        let r = radius as usize;
        self.numerators[r][(i - 1) as usize] / self.denominators[r]
    }

    pub fn settled(&self) -> bool {
        self.stabilized_at.iter().all(Option::is_some)
    }

    pub fn within_bound(&self) -> bool {
        self.ratios.iter().all(|r| *r <= self.bound * (1.0 + BOUNDARY_SLACK))
    }

    pub fn passes(&self) -> bool {
        self.condition_d && self.settled() && self.within_bound()
    }
}

/// Norm ratios `||A_i f^eps - lambda_i f^eps|| / ||f^eps||` over
/// `interior(L)` for `L <= max_radius`, and the first `L >= 15` at which
/// they have settled over two successive five-shell steps.
pub fn measure_weyl_ratio(z: &SpectralPoint, q: u64, eps: f64, max_radius: u32) -> Result<WeylRatio, Error> {
    check_eps(eps)?;
    if max_radius < 15 {
        return Err(Error::Usage("weyl ratio needs max radius >= 15".into()));
    }
    let lam = eig_from_z(&z.z(), q)?;
    let table = coefficient_table(z.z(), q)?;
    let d = condition_d(&z.z(), &table)?.holds;
    let f = Eigenfunction::from_table(table).on_ball(max_radius)?;
    let e = 1.0 - eps;
    let shells = max_radius as usize;
    let mut shell_num = vec![[0.0f64; 3]; shells];
    let mut shell_den = vec![0.0f64; shells];
    for x in enumerate_ball(max_radius - 1) {
        let ex = e.powi(x.ell as i32);
        let sw = (0.5 * ln_weight(x, q)?).exp();
        let fx = f.values[ball_index(x)];
        let l = x.ell as usize;
        shell_den[l] += (fx * (ex * sw)).norm_sqr();
        for i in 1..=3u8 {
            let mut acc = -lam.get(i) * fx * ex;
            for (u, c) in stencil(x, i, q)?.terms {
                acc += f.values[ball_index(u)] * (c as f64 * e.powi(u.ell as i32));
            }
            shell_num[l][(i - 1) as usize] += (acc * sw).norm_sqr();
        }
    }
    let mut numerators = vec![[0.0; 3]];
    let mut denominators = vec![0.0];
    let (mut cn, mut cd) = ([0.0f64; 3], 0.0f64);
    for l in 0..shells {
        cd += shell_den[l];
        for k in 0..3 {
            cn[k] += shell_num[l][k];
        }
        numerators.push(cn.map(f64::sqrt));
        denominators.push(cd.sqrt());
    }
    let ratio = |r: usize, k: usize| numerators[r][k] / denominators[r];
    let mut ratios = [0.0; 3];
    let mut stabilized_at = [None; 3];
    for k in 0..3 {
        ratios[k] = ratio(shells, k);
        for r in 15..=shells {
            let (a, b, c) = (ratio(r, k), ratio(r - 5, k), ratio(r - 10, k));
            if (a - b).abs() <= STABLE_TOL * a && (b - c).abs() <= STABLE_TOL * a {
                stabilized_at[k] = Some(r as u32);
                ratios[k] = a;
                break;
            }
        }
    }
    let [_, deg2, _] = regular_degrees(q);
    let bound = eps / (1.0 - eps) * deg2 as f64;
    Ok(WeylRatio { eps, bound, ratios, stabilized_at, max_radius, condition_d: d, numerators, denominators })
}

/// Report form of [`measure_weyl_ratio`]: fails only when a settled ratio
/// exceeds the bound; unsettled ratios and points without the coefficient
/// condition are flagged.
pub fn weyl_ratio(z: &SpectralPoint, q: u64, eps: f64, max_radius: u32) -> Result<VerificationReport, Error> {
    let w = measure_weyl_ratio(z, q, eps, max_radius)?;
    let rep = VerificationReport::new(
        "weyl-ratio",
        "weyl-sequence-bound",
        z_inputs(z, q, json!({ "eps": eps, "max_radius": max_radius })),
    )
    .with("ratios", w.ratios)
    .with("bound", w.bound)
    .with("slack", BOUNDARY_SLACK)
    .with("stabilized_at", w.stabilized_at)
    .with("condition_d", w.condition_d);
    if !w.condition_d {
        return Ok(rep.flag("coefficient condition fails; the ratio does not witness membership"));
    }
    for k in 0..3 {
        if w.stabilized_at[k].is_some() && w.ratios[k] > w.bound * (1.0 + BOUNDARY_SLACK) {
            return Ok(rep.fail(json!({ "operator": k + 1, "ratio": w.ratios[k] })));
        }
    }
    if !w.settled() {
        return Ok(rep.flag("ratio did not settle within the radius cap"));
    }
    Ok(rep)
}
