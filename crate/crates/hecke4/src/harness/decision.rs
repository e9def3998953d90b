//! From an eigenvalue triple (or a tuple `z`) to a family tag with the
//! evidence for or against membership in the spectrum.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use super::growth::{measure_growth, RayGrowth};
use super::weyl::measure_weyl_ratio;
use crate::eigen::coefficient_table;
use crate::report::VerificationReport;
use crate::spectral::{
    classify, condition_d, eig_from_z, family_grid, in_building_spectrum, in_s, sample_family, z_from_eig, DVerdict,
    EigTriple, Family, FamilyKind, FamilyTag, SpectralPoint, TOL,
};
use crate::weights::total_volume;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecisionInput {
    Lambda(EigTriple),
    Z([Complex64; 4]),
}

/// Settings of the Weyl smoke test and the growth test used as evidence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecisionConfig {
    pub eps: f64,
    pub weyl_radius: u32,
    pub growth_radius: u32,
    pub c: f64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig { eps: 0.1, weyl_radius: 120, growth_radius: 60, c: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylSmoke {
    pub eps: f64,
    pub ratios: [f64; 3],
    pub bound: f64,
    pub stabilized_at: [Option<u32>; 3],
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub tag: FamilyTag,
    pub z: SpectralPoint,
    pub lambda: EigTriple,
    pub in_s: bool,
    pub in_building_spectrum: bool,
    /// `None` when the root pattern has no closed-form eigenfunction.
    pub condition_d: Option<DVerdict>,
    pub weyl: Option<WeylSmoke>,
    /// Growth along the rays, computed for points outside every family.
    pub growth: Option<Vec<RayGrowth>>,
    /// `||1||^2` over `ball(30)` and its last increment, for the trivial family.
    pub l2_norm_sq: Option<(f64, f64)>,
    /// Why the evidence contradicts the tag, if it does.
    pub inconsistency: Option<String>,
}

impl Decision {
    /// Membership evidence for a family point: the coefficient condition
    /// and a settled Weyl ratio within the bound, or square-integrability.
    pub fn membership_evidence(&self) -> bool {
        match self.tag.kind() {
            FamilyKind::NotInSpectrum => false,
            FamilyKind::Trivial => self.l2_norm_sq.is_some(),
            _ => {
                let d = self.condition_d.as_ref().is_none_or(|d| d.holds);
                d && self.weyl.as_ref().is_some_and(|w| w.passes)
            }
        }
    }
}

pub fn decide(input: DecisionInput, q: u64, cfg: &DecisionConfig) -> Result<Decision, Error> {
    let (z, lambda) = match input {
        DecisionInput::Lambda(l) => (z_from_eig(&l, q)?.point, l),
        DecisionInput::Z(z) => {
            let p = SpectralPoint::new(z)?;
            (p, eig_from_z(&p.z(), q)?)
        }
    };
    let in_bs = in_building_spectrum(&lambda, q, TOL)?;
    let member_s = in_s(&z.z(), TOL);
    let mut d = Decision {
        tag: FamilyTag::new(Family::NotInSpectrum),
        z,
        lambda,
        in_s: member_s,
        in_building_spectrum: in_bs,
        condition_d: None,
        weyl: None,
        growth: None,
        l2_norm_sq: None,
        inconsistency: None,
    };
    if !member_s {
        return Ok(d);
    }
    d.tag = classify(&z.z(), q, TOL)?;
    d.condition_d = match coefficient_table(z.z(), q) {
        Ok(t) => Some(condition_d(&z.z(), &t)?),
        Err(Error::UnsupportedMultiplicity(_)) => None,
        Err(e) => return Err(e),
    };
    match d.tag.kind() {
        FamilyKind::Trivial => {
            let v29 = total_volume(29, q)?.to_f64().unwrap_or(f64::NAN);
            let v30 = total_volume(30, q)?.to_f64().unwrap_or(f64::NAN);
            d.l2_norm_sq = Some((v30, v30 - v29));
        }
        FamilyKind::NotInSpectrum => {
            d.growth = Some(measure_growth(&z, q, cfg.growth_radius, cfg.c)?);
        }
        _ if d.condition_d.is_some() => {
            let w = measure_weyl_ratio(&z, q, cfg.eps, cfg.weyl_radius)?;
            d.weyl = Some(WeylSmoke {
                eps: w.eps,
                ratios: w.ratios,
                bound: w.bound,
                stabilized_at: w.stabilized_at,
                passes: w.passes(),
            });
        }
        _ => {}
    }
    let d_holds = d.condition_d.as_ref().map(|v| v.holds);
    d.inconsistency = match d.tag.kind() {
        FamilyKind::NotInSpectrum => {
            let grows = d.growth.as_ref().is_some_and(|g| g.iter().any(|r| r.slope > cfg.c / 4.0));
            if d_holds == Some(true) && !grows {
                Some("outside every family, yet the coefficient condition holds and no ray grows".into())
            } else {
                None
            }
        }
        FamilyKind::Trivial => None,
        _ if !d.membership_evidence() => Some("family point without membership evidence".into()),
        FamilyKind::Tempered if !in_bs => Some("unit-modulus point outside the building spectrum".into()),
        _ => None,
    };
    if d.tag.kind() != FamilyKind::Tempered && in_bs && d.tag.kind() != FamilyKind::NotInSpectrum {
        d.inconsistency = Some("non-tempered family point inside the building spectrum".into());
    }
    Ok(d)
}

impl Decision {
    pub fn report(&self, q: u64) -> VerificationReport {
        let rep = VerificationReport::new(
            "spectrum-decision",
            "spectrum-classification-chain",
            json!({ "z": self.z, "lambda": self.lambda, "q": q }),
        )
        .with("tag", self.tag)
        .with("in_s", self.in_s)
        .with("in_building_spectrum", self.in_building_spectrum)
        .with("condition_d", &self.condition_d)
        .with("weyl", &self.weyl)
        .with("growth", &self.growth)
        .with("l2_norm_sq", self.l2_norm_sq);
        if let Some(why) = &self.inconsistency {
            return rep.fail(json!({ "reason": why, "tag": self.tag }));
        }
        if self.tag.kind() == FamilyKind::NotInSpectrum {
            let mut failing = Vec::new();
            if let Some(w) = self.condition_d.as_ref().and_then(|d| d.witness.clone()) {
                failing.push(json!({ "condition": "D", "witness": w }));
            }
            if let Some(g) = &self.growth {
                if let Some(r) = g.iter().filter(|r| r.slope > 0.0).max_by(|a, b| a.slope.total_cmp(&b.slope)) {
                    failing.push(json!({ "condition": "B", "witness": r }));
                }
            }
            if !self.in_s {
                failing.push(json!({ "condition": "S", "witness": self.z }));
            }
            return rep.with("failing_conditions", failing);
        }
        rep
    }
}

/// [`decide`] with default settings, as a report.
pub fn spectrum_decision(input: DecisionInput, q: u64) -> Result<VerificationReport, Error> {
    Ok(decide(input, q, &DecisionConfig::default())?.report(q))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FamilySweep {
    pub family: &'static str,
    pub points: usize,
    pub with_membership_evidence: usize,
    pub in_building_spectrum: usize,
    pub isolated: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamanujanSummary {
    pub q: u64,
    pub families: Vec<FamilySweep>,
    /// Moduli pattern and partition of 4 per family.
    pub partitions: Vec<(&'static str, &'static str, &'static str)>,
}

impl RamanujanSummary {
    /// (i) every non-trivial family point has membership evidence.
    pub fn all_members(&self) -> bool {
        self.families.iter().filter(|f| f.family != "Trivial").all(|f| f.with_membership_evidence == f.points)
    }

    /// (ii) the points inside the building spectrum are exactly the tempered ones.
    pub fn only_tempered_in_building(&self) -> bool {
        self.families.iter().all(|f| {
            if f.family == "Tempered" {
                f.in_building_spectrum == f.points
            } else {
                f.in_building_spectrum == 0
            }
        })
    }

    /// (iii) no non-trivial point is isolated.
    pub fn none_isolated(&self) -> bool {
        self.families.iter().all(|f| f.isolated == 0)
    }
}

fn shifted(tag: &FamilyTag, h: f64) -> Option<FamilyTag> {
    let family = match tag.family {
        Family::Family2 { theta } => Family::Family2 { theta: theta + h },
        Family::Family3 { theta1, sign } => Family::Family3 { theta1: theta1 + h, sign },
        Family::Family4 { theta1, theta2 } => Family::Family4 { theta1: theta1 + h, theta2: theta2 - h },
        Family::Tempered { theta1, theta2, theta3 } => {
            Family::Tempered { theta1: theta1 + h, theta2: theta2 - h, theta3: theta3 + 0.5 * h }
        }
        _ => return None,
    };
    Some(FamilyTag::new(family))
}

/// Sweeps `n` grid points per family. Each non-trivial point must carry
/// membership evidence, and so must its neighbor one grid step away.
pub fn weakly_ramanujan(q: u64, n: usize, cfg: &DecisionConfig) -> Result<RamanujanSummary, Error> {
    let h = 2.0 * std::f64::consts::PI / n.max(1) as f64;
    let mut families = Vec::new();
    for kind in FamilyKind::FAMILIES {
        let mut grid = family_grid(kind, n);
        if kind == FamilyKind::Trivial {
            grid.truncate(4);
        }
        let mut s = FamilySweep { family: kind.name(), points: grid.len(), ..Default::default() };
        for tag in &grid {
            let z = sample_family(tag, q)?;
            let lam = eig_from_z(&z.z(), q)?;
            let d = decide(DecisionInput::Lambda(lam), q, cfg)?;
            if d.tag.kind() == kind && d.membership_evidence() {
                s.with_membership_evidence += 1;
            } else {
                s.failures.push(format!("{tag}: decided {} ({:?})", d.tag, d.inconsistency));
            }
            if d.in_building_spectrum {
                s.in_building_spectrum += 1;
            }
            if let Some(nb) = shifted(tag, h) {
                let zn = sample_family(&nb, q)?;
                let dn = decide(DecisionInput::Z(zn.z()), q, cfg)?;
                if dn.tag.kind() != kind || !dn.membership_evidence() {
                    s.isolated += 1;
                    s.failures.push(format!("{tag}: neighbor {nb} decided {}", dn.tag));
                }
            }
        }
        families.push(s);
    }
    let partitions = FamilyKind::FAMILIES
        .iter()
        .filter_map(|k| k.partition().map(|(m, p)| (k.name(), m, p)))
        .collect();
    Ok(RamanujanSummary { q, families, partitions })
}

pub fn weakly_ramanujan_report(q: u64, n: usize) -> Result<VerificationReport, Error> {
    let s = weakly_ramanujan(q, n, &DecisionConfig::default())?;
    let rep = VerificationReport::new(
        "weakly-ramanujan",
        "no-nontrivial-discrete-spectrum",
        json!({ "q": q, "points_per_family": n }),
    )
    .with("families", &s.families)
    .with("partitions", &s.partitions)
    .with("all_members", s.all_members())
    .with("only_tempered_in_building_spectrum", s.only_tempered_in_building())
    .with("none_isolated", s.none_isolated());
    Ok(if s.all_members() && s.only_tempered_in_building() && s.none_isolated() {
        rep
    } else {
        let first: Vec<&String> = s.families.iter().flat_map(|f| f.failures.iter()).take(5).collect();
        rep.fail(first)
    })
}
