//! Subcommands behind the `hecke4` binary.
//!
//! [`run`] parses arguments and returns the exit code: 0 when every check
//! passes, 1 when a check fails, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::Serialize;
use serde_json::{json, Value};

use crate::eigen::Eigenfunction;
use crate::geometry::{enumerate_ball, VertexClass, VertexId};
use crate::harness::{
    convolution_check, char_recurrence_check, condition_b_check, count_stabilizer, decide,
    detailed_balance_check, face_recurrence_check, random_perturbation, residual_check, row_sums_check,
    sequences_check, stabilizer_check, trivial_spectrum_check, weakly_ramanujan_report, weyl_identity_check,
    weyl_ratio, DecisionConfig, DecisionInput, ENUMERATION_BUDGET,
};
use crate::operators::{stencil, weighted_entries};
use crate::report::{ReportSet, VerificationReport};
use crate::spectral::{
    boundary_points, classify, eig_from_z, family_grid, random_tag, sample_family, z_from_eig, EigTriple, Family,
    FamilyKind, FamilyTag, SpectralPoint, TOL,
};
use crate::weights::vertex_weight;
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "hecke4", version, about = "Hecke operators on the PGL4(Fq[t]) quotient: generation, eigenfunctions, spectral checks")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Field size.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u64,
    /// Ball radius; each subcommand has its own default.
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    #[arg(long, global = true, default_value_t = 0.1)]
    pub eps: f64,
    /// Growth exponent slack for the ray test.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub c: f64,
    /// Membership tolerance for the set S.
    #[arg(long, global = true, default_value_t = TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A spectral point given as eigenvalues, as `z`, or as a family sample.
#[derive(Args, Debug, Clone, Default)]
pub struct PointArgs {
    /// Eigenvalue triple, e.g. `--lambda 15 35 15`.
    #[arg(long, num_args = 3, allow_hyphen_values = true, conflicts_with_all = ["z", "family"])]
    pub lambda: Option<Vec<String>>,
    /// Four complex numbers with product 1: `a+bi` or `r e^{i t}`, `r` may use `q` and `q^x`.
    #[arg(long, num_args = 4, allow_hyphen_values = true, conflicts_with = "family")]
    pub z: Option<Vec<String>>,
    /// Trivial, Family2, Family3, Family4 or Tempered.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters, comma separated; a seeded draw when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "family")]
    pub params: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Vertices of ball(L) with class, color, weight and colored adjacency.
    GenComplex,
    /// Stabilizer orders by formula and by enumeration.
    CountStabilizers {
        /// Vertex `l,m,n`; repeatable. Defaults to the eight class representatives.
        #[arg(long)]
        vertex: Vec<String>,
        #[arg(long, default_value_t = ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// Family of a point, with the evidence for the verdict.
    Classify(PointArgs),
    /// Eigen residuals of seeded family draws.
    ResidualSweep {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Also sweep the repeated-root boundary points.
        #[arg(long)]
        boundary: bool,
    },
    /// `lambda_1` samples over each family's parameter grid.
    SpectrumFigure {
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Weyl-sequence defect identity and norm ratio.
    WeylTest(PointArgs),
    /// Recurrence sequences and convolution identities.
    AppendixB {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 100)]
        terms: usize,
        #[arg(long, default_value_t = 5)]
        perturbations: usize,
    },
    /// Every check at desk scale, as JSON lines.
    Report {
        /// Grid points per family in the weak-Ramanujan sweep.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Values of an eigenfunction on ball(L).
    Eigenfunction(PointArgs),
    /// Sparse export of `w(x) c_i(x -> u)` on interior(L).
    ExportOperator {
        #[arg(long = "i", default_value_t = 1)]
        step: u8,
    },
}

/// Error of a subcommand, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidVertex(..)
            | Error::InvalidStep(_)
            | Error::InvalidQ(_)
            | Error::NotPrime(_)
            | Error::ProductConstraint(_)
            | Error::EpsOutOfRange(_)
            | Error::Params(_)
            | Error::Parse(_)
            | Error::Usage(_)
            | Error::Range(_)
            | Error::DomainMismatch(..) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("cannot write output: {e}"))
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("usage error: {m}"),
                CliError::Failure(m) => eprintln!("error: {m}"),
            }
            e.code()
        }
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.q < 2 {
        return Err(Error::InvalidQ(cfg.q).into());
    }
    if !(cfg.tol > 0.0) {
        return Err(CliError::Usage(format!("tol must be positive, got {}", cfg.tol)));
    }
    if !(cfg.c > 0.0) {
        return Err(CliError::Usage(format!("c must be positive, got {}", cfg.c)));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps).into())
    }
}

/// Runs a parsed command line, returning the exit code.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = &cli.config;
    validate(cfg)?;
    match &cli.command {
        Command::GenComplex => gen_complex(cfg),
        Command::CountStabilizers { vertex, budget } => count_stabilizers(cfg, vertex, *budget),
        Command::Classify(p) => cmd_classify(cfg, p),
        Command::ResidualSweep { point, count, boundary } => residual_sweep(cfg, point, *count, *boundary),
        Command::SpectrumFigure { grid } => spectrum_figure(cfg, *grid),
        Command::WeylTest(p) => weyl_test(cfg, p),
        Command::AppendixB { point, terms, perturbations } => radial_identities(cfg, point, *terms, *perturbations),
        Command::Report { points } => report(cfg, *points),
        Command::Eigenfunction(p) => eigenfunction(cfg, p),
        Command::ExportOperator { step } => export_operator(cfg, *step),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_reports(cfg: &RunConfig, set: &ReportSet) -> Result<i32, CliError> {
    let mut out = open_out(cfg.out.as_deref())?;
    set.write_jsonl(&mut out)?;
    out.flush()?;
    Ok(set.exit_code())
}

fn write_json(cfg: &RunConfig, v: &impl Serialize) -> Result<(), CliError> {
    let mut out = open_out(cfg.out.as_deref())?;
    serde_json::to_writer(&mut out, v).map_err(|e| CliError::Failure(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- parsing

static POLAR: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])?\*?(?P<q>q(?:\^\{?(?P<qexp>[+-]?[0-9./]+)\}?)?)?\*?(?:e\^\{?(?P<neg>-)?i\*?(?P<t>[^{}]+?)\}?)?$",
    )
    .expect("valid regex")
});

static ANGLE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])?\*?(?P<pi>pi)?(?:/(?P<den>\d+\.?\d*))?$")
        .expect("valid regex")
});

fn parse_fraction(s: &str) -> Result<f64, Error> {
    let bad = || Error::Parse(format!("bad exponent {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => Ok(a.parse::<f64>().map_err(|_| bad())? / b.parse::<f64>().map_err(|_| bad())?),
        None => s.parse().map_err(|_| bad()),
    }
}

fn signed_coef(s: Option<&str>) -> Result<f64, Error> {
    match s {
        None | Some("+") => Ok(1.0),
        Some("-") => Ok(-1.0),
        Some(t) => t.parse().map_err(|_| Error::Parse(format!("bad number {t:?}"))),
    }
}

fn parse_angle(s: &str) -> Result<f64, Error> {
    let t = s.replace('π', "pi");
    let c = ANGLE.captures(&t).ok_or_else(|| Error::Parse(format!("bad angle {s:?}")))?;
    if c.name("coef").is_none() && c.name("pi").is_none() {
        return Err(Error::Parse(format!("bad angle {s:?}")));
    }
    let mut x = signed_coef(c.name("coef").map(|m| m.as_str()))?;
    if c.name("pi").is_some() {
        x *= std::f64::consts::PI;
    }
    if let Some(d) = c.name("den") {
        x /= d.as_str().parse::<f64>().map_err(|_| Error::Parse(format!("bad angle {s:?}")))?;
    }
    Ok(x)
}

/// Parses `a+bi` (any form accepted by `num_complex`) or the polar form
/// `[c][q[^x]]e^{i t}` (or `e^{-i t}`), where `t` may be a number or a multiple of `pi`.
pub fn parse_complex(s: &str, q: u64) -> Result<Complex64, Error> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    if let Ok(z) = t.parse::<Complex64>() {
        return Ok(z);
    }
    let c = POLAR.captures(&t).ok_or_else(|| Error::Parse(format!("malformed complex number {s:?}")))?;
    if c.name("coef").is_none() && c.name("q").is_none() && c.name("t").is_none() {
        return Err(Error::Parse(format!("malformed complex number {s:?}")));
    }
    let mut r = signed_coef(c.name("coef").map(|m| m.as_str()))?;
    if c.name("q").is_some() {
        let e = match c.name("qexp") {
            Some(x) => parse_fraction(x.as_str())?,
            None => 1.0,
        };
        r *= (q as f64).powf(e);
    }
    let theta = match c.name("t") {
        Some(x) => parse_angle(x.as_str())?,
        None => 0.0,
    };
    let theta = if c.name("neg").is_some() { -theta } else { theta };
    Ok(Complex64::from_polar(r, theta))
}

/// Parses `l,m,n`, optionally in parentheses or brackets.
pub fn parse_vertex(s: &str) -> Result<VertexId, Error> {
    let t = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("vertex must be l,m,n, got {s:?}")));
    }
    let mut v = [0i64; 3];
    for (k, p) in parts.iter().enumerate() {
        v[k] = p.parse().map_err(|_| Error::Parse(format!("bad vertex coordinate {p:?}")))?;
    }
    VertexId::try_from_signed(v[0], v[1], v[2])
}

/// A labelled point to run checks on.
#[derive(Clone, Debug)]
pub struct Labelled {
    pub label: String,
    pub seed: Option<u64>,
    pub point: SpectralPoint,
}

fn draw(kind: FamilyKind, seed: u64, q: u64) -> Result<(FamilyTag, SpectralPoint), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = random_tag(kind, &mut rng)?;
    let z = sample_family(&tag, q)?;
    Ok((tag, z))
}

/// The point given on the command line, if any.
pub fn resolve_point(p: &PointArgs, q: u64, seed: u64) -> Result<Option<Labelled>, Error> {
    if let Some(l) = &p.lambda {
        let v: Vec<Complex64> = l.iter().map(|s| parse_complex(s, q)).collect::<Result<_, _>>()?;
        let lam = EigTriple::new(v[0], v[1], v[2]);
        let z = z_from_eig(&lam, q)?.point;
        return Ok(Some(Labelled { label: "lambda".into(), seed: None, point: z }));
    }
    if let Some(zs) = &p.z {
        let v: Vec<Complex64> = zs.iter().map(|s| parse_complex(s, q)).collect::<Result<_, _>>()?;
        let z = SpectralPoint::new([v[0], v[1], v[2], v[3]])?;
        return Ok(Some(Labelled { label: "z".into(), seed: None, point: z }));
    }
    if let Some(f) = &p.family {
        let kind = FamilyKind::parse(f)?;
        if let Some(params) = &p.params {
            let tag = FamilyTag::new(Family::from_params(kind, params)?);
            let z = sample_family(&tag, q)?;
            return Ok(Some(Labelled { label: tag.to_string(), seed: None, point: z }));
        }
        let (tag, z) = draw(kind, seed, q)?;
        return Ok(Some(Labelled { label: tag.to_string(), seed: Some(seed), point: z }));
    }
    Ok(None)
}

/// The given point, or one seeded draw per family.
fn points_or_draws(p: &PointArgs, cfg: &RunConfig, with_trivial: bool) -> Result<Vec<Labelled>, Error> {
    if let Some(x) = resolve_point(p, cfg.q, cfg.seed)? {
        return Ok(vec![x]);
    }
    let mut out = Vec::new();
    for kind in FamilyKind::FAMILIES {
        if kind == FamilyKind::Trivial && !with_trivial {
            continue;
        }
        let (tag, z) = draw(kind, cfg.seed, cfg.q)?;
        out.push(Labelled { label: tag.to_string(), seed: Some(cfg.seed), point: z });
    }
    Ok(out)
}

// --------------------------------------------------------------- commands

#[derive(Serialize)]
struct Edge {
    to: VertexId,
    coeff: u64,
}

#[derive(Serialize)]
struct VertexRecord {
    vertex: VertexId,
    class: &'static str,
    color: u8,
    /// Exact weight as `num/den`.
    weight: String,
    weight_f64: f64,
    /// Colored neighbors, keyed by the color step.
    adjacency: std::collections::BTreeMap<String, Vec<Edge>>,
}

fn gen_complex(cfg: &RunConfig) -> Result<i32, CliError> {
    let radius = cfg.radius.unwrap_or(3);
    let q = cfg.q;
    let mut records = Vec::new();
    for x in enumerate_ball(radius) {
        let w = vertex_weight(x, q)?;
        let mut adjacency = std::collections::BTreeMap::new();
        for i in 1..=3u8 {
            let edges = stencil(x, i, q)?.terms.into_iter().map(|(to, coeff)| Edge { to, coeff }).collect();
            adjacency.insert(i.to_string(), edges);
        }
        records.push(VertexRecord {
            vertex: x,
            class: x.class().name(),
            color: x.color().value(),
            weight: w.0.to_string(),
            weight_f64: w.to_f64(),
            adjacency,
        });
    }
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => write_json(cfg, &json!({ "q": q, "radius": radius, "vertices": records }))?,
        Format::Csv => {
            let mut out = open_out(cfg.out.as_deref())?;
            writeln!(out, "ell,m,n,class,color,weight,step,to_ell,to_m,to_n,coeff")?;
            for r in &records {
                for (step, edges) in &r.adjacency {
                    for e in edges {
                        let v = r.vertex;
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{},{}",
                            v.ell, v.m, v.n, r.class, r.color, r.weight, step, e.to.ell, e.to.m, e.to.n, e.coeff
                        )?;
                    }
                }
            }
            out.flush()?;
        }
    }
    Ok(0)
}

fn count_stabilizers(cfg: &RunConfig, vertex: &[String], budget: u128) -> Result<i32, CliError> {
    let vs: Vec<VertexId> = if vertex.is_empty() {
        VertexClass::ALL.iter().map(|c| c.representative()).collect()
    } else {
        vertex.iter().map(|s| parse_vertex(s)).collect::<Result<_, _>>()?
    };
    let counts: Vec<_> = vs.iter().map(|&x| count_stabilizer(x, cfg.q, budget)).collect::<Result<_, _>>()?;
    let mut out = open_out(cfg.out.as_deref())?;
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            for c in &counts {
                writeln!(out, "{}", serde_json::to_string(c).map_err(|e| CliError::Failure(e.to_string()))?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "ell,m,n,q,formula_order,brute_force_order,match")?;
            for c in &counts {
                let v = c.vertex;
                let b = c.brute_force_order.as_deref().unwrap_or("");
                writeln!(out, "{},{},{},{},{},{},{}", v.ell, v.m, v.n, c.q, c.formula_order, b, c.matches)?;
            }
        }
    }
    out.flush()?;
    Ok(if counts.iter().any(|c| c.contradicts()) { 1 } else { 0 })
}

/// The `classify` verdict: the family tag, flattened, followed by the
/// membership evidence.
pub fn classify_json(input: DecisionInput, q: u64, cfg: &DecisionConfig) -> Result<(Value, bool), Error> {
    let d = decide(input, q, cfg)?;
    let rep = d.report(q);
    let mut v = json!({
        "family": d.tag.kind().name(),
        "params": d.tag.family.params(),
        "degenerate": d.tag.degenerate,
        "in_s": d.in_s,
        "in_building_spectrum": d.in_building_spectrum,
        "z": d.z,
        "lambda": d.lambda,
        "status": rep.status,
        "evidence": rep.evidence,
    });
    if let Family::Trivial { k } = d.tag.family {
        v["k"] = json!(k);
    }
    Ok((v, rep.failed()))
}

fn cmd_classify(cfg: &RunConfig, p: &PointArgs) -> Result<i32, CliError> {
    let q = cfg.q;
    let input = if let Some(l) = &p.lambda {
        let v: Vec<Complex64> = l.iter().map(|s| parse_complex(s, q)).collect::<Result<_, _>>()?;
        DecisionInput::Lambda(EigTriple::new(v[0], v[1], v[2]))
    } else {
        match resolve_point(p, q, cfg.seed)? {
            Some(x) => DecisionInput::Z(x.point.z()),
            None => return Err(CliError::Usage("classify needs --lambda, --z or --family".into())),
        }
    };
    let dc = DecisionConfig { eps: cfg.eps, c: cfg.c, ..DecisionConfig::default() };
    check_eps(cfg.eps)?;
    let (v, failed) = classify_json(input, q, &dc)?;
    write_json(cfg, &v)?;
    Ok(if failed { 1 } else { 0 })
}

fn residual_sweep(cfg: &RunConfig, p: &PointArgs, count: usize, boundary: bool) -> Result<i32, CliError> {
    let q = cfg.q;
    let radius = cfg.radius.unwrap_or(25);
    let mut points: Vec<(String, Option<u64>, SpectralPoint)> = Vec::new();
    let explicit = p.lambda.is_some() || p.z.is_some() || p.params.is_some();
    if explicit {
        let x = resolve_point(p, q, cfg.seed)?.expect("explicit point");
        points.push((x.label, None, x.point));
    } else {
        let kinds: Vec<FamilyKind> = match &p.family {
            Some(f) => vec![FamilyKind::parse(f)?],
            None => FamilyKind::FAMILIES.to_vec(),
        };
        for kind in kinds {
            for j in 0..count as u64 {
                let s = cfg.seed.wrapping_add(j);
                let (_, z) = draw(kind, s, q)?;
                points.push((kind.name().into(), Some(s), z));
            }
        }
    }
    if boundary {
        for (kind, z) in boundary_points(q) {
            points.push((format!("{}-boundary", kind.name()), None, z));
        }
    }
    let mut reports = Vec::new();
    for (label, seed, z) in &points {
        let mut rep = residual_check(z, q, radius)?;
        rep.put("label", label);
        rep.put("seed", seed);
        let member = classify(&z.z(), q, cfg.tol).map(|t| t.kind() != FamilyKind::NotInSpectrum).unwrap_or(false);
        if !member {
            rep = rep.flag("not in spectrum");
        }
        reports.push((label.clone(), *seed, rep));
    }
    let failed = reports.iter().any(|r| r.2.failed());
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = open_out(cfg.out.as_deref())?;
            writeln!(out, "family,seed,q,L,max_residual_i1,max_residual_i2,max_residual_i3,status")?;
            for (label, seed, rep) in &reports {
                let m = &rep.evidence["max_residual"];
                let cell = |k: usize| m[k].as_f64().map(fmt_f64).unwrap_or_default();
                let seed = seed.map(|s| s.to_string()).unwrap_or_default();
                let status = serde_json::to_value(rep.status).unwrap_or(Value::Null);
                let status = status.as_str().unwrap_or("");
                writeln!(out, "{label},{seed},{q},{radius},{},{},{},{status}", cell(0), cell(1), cell(2))?;
            }
            out.flush()?;
        }
        Format::Json => {
            let mut set = ReportSet::new();
            set.extend(reports.into_iter().map(|r| r.2));
            write_reports(cfg, &set)?;
        }
    }
    Ok(if failed { 1 } else { 0 })
}

/// `(family, lambda_1)` over each family's parameter grid: `grid` points
/// for Family2, `grid` per sign for Family3, `grid^2` for Family4 and
/// `grid^3` for Tempered.
pub fn spectrum_samples(q: u64, grid: usize) -> Result<Vec<(&'static str, Complex64)>, Error> {
    use std::f64::consts::PI;
    let g = grid.max(1);
    let ang = |j: usize| -PI + 2.0 * PI * (j as f64 + 0.5) / g as f64;
    let mut tags: Vec<FamilyTag> = family_grid(FamilyKind::Trivial, 4);
    tags.extend((0..g).map(|j| FamilyTag::new(Family::Family2 { theta: ang(j) })));
    for sign in [1, -1] {
        tags.extend((0..g).map(|j| FamilyTag::new(Family::Family3 { theta1: ang(j), sign })));
    }
    for a in 0..g {
        tags.extend((0..g).map(|b| FamilyTag::new(Family::Family4 { theta1: ang(a), theta2: ang(b) })));
    }
    let mut out = Vec::with_capacity(tags.len() + g * g * g);
    for t in &tags {
        let z = sample_family(t, q)?;
        out.push((t.kind().name(), eig_from_z(&z.z(), q)?.lambda1));
    }
    for a in 0..g {
        for b in 0..g {
            for c in 0..g {
                let t = FamilyTag::new(Family::Tempered { theta1: ang(a), theta2: ang(b), theta3: ang(c) });
                let z = sample_family(&t, q)?;
                out.push(("Tempered", eig_from_z(&z.z(), q)?.lambda1));
            }
        }
    }
    Ok(out)
}

fn spectrum_figure(cfg: &RunConfig, grid: usize) -> Result<i32, CliError> {
    let samples = spectrum_samples(cfg.q, grid)?;
    let mut out = open_out(cfg.out.as_deref())?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "family,re,im")?;
            for (f, l) in &samples {
                writeln!(out, "{f},{},{}", fmt_f64(l.re), fmt_f64(l.im))?;
            }
        }
        Format::Json => {
            let v: Vec<Value> = samples.iter().map(|(f, l)| json!({ "family": f, "re": l.re, "im": l.im })).collect();
            serde_json::to_writer(&mut out, &v).map_err(|e| CliError::Failure(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn weyl_test(cfg: &RunConfig, p: &PointArgs) -> Result<i32, CliError> {
    check_eps(cfg.eps)?;
    let max_radius = cfg.radius.unwrap_or(120);
    let mut set = ReportSet::new();
    for x in points_or_draws(p, cfg, true)? {
        let mut a = weyl_identity_check(&x.point, cfg.q, cfg.eps, max_radius.min(20))?;
        a.put("label", &x.label);
        let mut b = weyl_ratio(&x.point, cfg.q, cfg.eps, max_radius)?;
        b.put("label", &x.label);
        set.push(a);
        set.push(b);
    }
    write_reports(cfg, &set)
}

fn radial_identities(cfg: &RunConfig, p: &PointArgs, terms: usize, perturbations: usize) -> Result<i32, CliError> {
    let q = cfg.q;
    let radius = cfg.radius.unwrap_or(20);
    let mut set = ReportSet::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for x in points_or_draws(p, cfg, true)? {
        let lam = eig_from_z(&x.point.z(), q)?;
        let mut r = sequences_check(&lam, q, terms)?;
        r.put("label", &x.label);
        set.push(r);
        for k in 0..perturbations {
            let pert = random_perturbation(3, &mut rng);
            let mut r = convolution_check(&x.point, q, &pert, radius)?;
            r.put("label", &x.label);
            r.put("perturbation", k);
            set.push(r);
        }
    }
    write_reports(cfg, &set)
}

/// The desk-scale report: every check once per family draw, plus the
/// structural checks and the weak-Ramanujan sweep.
pub fn full_report(cfg: &RunConfig, points: usize) -> Result<ReportSet, Error> {
    let q = cfg.q;
    let mut set = ReportSet::new();
    for c in VertexClass::ALL {
        set.push(stabilizer_check(c.representative(), q, ENUMERATION_BUDGET)?);
    }
    set.push(row_sums_check(q, 30)?);
    set.push(detailed_balance_check(q, 20)?);
    set.push(trivial_spectrum_check(q, 30)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws = points_or_draws(&PointArgs::default(), cfg, true)?;
    let dc = DecisionConfig { eps: cfg.eps, c: cfg.c, ..DecisionConfig::default() };
    for x in &draws {
        let z = &x.point;
        let lam = eig_from_z(&z.z(), q)?;
        let label = |mut r: VerificationReport| {
            r.put("label", &x.label);
            r
        };
        set.push(label(residual_check(z, q, 25)?));
        set.push(label(char_recurrence_check(z, q, 30)?));
        set.push(label(face_recurrence_check(z, q, 30)?));
        set.push(label(condition_b_check(z, q, 60, cfg.c)?));
        set.push(label(weyl_identity_check(z, q, cfg.eps, 20)?));
        set.push(label(weyl_ratio(z, q, cfg.eps, 120)?));
        set.push(label(sequences_check(&lam, q, 100)?));
        let pert = random_perturbation(3, &mut rng);
        set.push(label(convolution_check(z, q, &pert, 20)?));
        set.push(label(decide(DecisionInput::Lambda(lam), q, &dc)?.report(q)));
    }
    for (kind, z) in boundary_points(q) {
        let mut r = residual_check(&z, q, 25)?;
        r.put("label", format!("{}-boundary", kind.name()));
        set.push(r);
    }
    let qf = q as f64;
    let third = std::f64::consts::FRAC_PI_3;
    let outside = [
        Complex64::new(qf, 0.0),
        Complex64::new(1.0 / qf, 0.0),
        Complex64::from_polar(1.0, third),
        Complex64::from_polar(1.0, -third),
    ];
    set.push(decide(DecisionInput::Z(outside), q, &dc)?.report(q));
    set.push(weakly_ramanujan_report(q, points)?);
    Ok(set)
}

fn report(cfg: &RunConfig, points: usize) -> Result<i32, CliError> {
    check_eps(cfg.eps)?;
    let set = full_report(cfg, points)?;
    write_reports(cfg, &set)
}

fn eigenfunction(cfg: &RunConfig, p: &PointArgs) -> Result<i32, CliError> {
    let radius = cfg.radius.unwrap_or(10);
    let x = resolve_point(p, cfg.q, cfg.seed)?
        .ok_or_else(|| CliError::Usage("eigenfunction needs --lambda, --z or --family".into()))?;
    let f = Eigenfunction::new(x.point.z(), cfg.q)?.on_ball(radius)?;
    let mut out = open_out(cfg.out.as_deref())?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "ell,m,n,re,im")?;
            for (v, val) in f.vertices() {
                writeln!(out, "{},{},{},{},{}", v.ell, v.m, v.n, fmt_f64(val.re), fmt_f64(val.im))?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> =
                f.vertices().map(|(v, val)| json!({ "vertex": v, "re": val.re, "im": val.im })).collect();
            let doc = json!({ "q": cfg.q, "radius": radius, "z": x.point, "values": rows });
            serde_json::to_writer(&mut out, &doc).map_err(|e| CliError::Failure(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

/// Header of the sparse export.
#[derive(Serialize)]
pub struct SparseHeader {
    pub q: u64,
    #[serde(rename = "L")]
    pub radius: u32,
    pub i: u8,
    /// Vertex at each row/column index.
    pub vertex_index_map: Vec<VertexId>,
}

/// Coordinate lines `row col num den` of `w(x) c_i(x -> u)`.
pub fn sparse_lines(q: u64, radius: u32, i: u8) -> Result<(SparseHeader, String), Error> {
    let entries = weighted_entries(radius, i, q)?;
    let mut body = String::new();
    for (r, c, v) in entries {
        let _ = writeln!(body, "{r} {c} {} {}", v.numer(), v.denom());
    }
    let header = SparseHeader { q, radius, i, vertex_index_map: enumerate_ball(radius) };
    Ok((header, body))
}

fn export_operator(cfg: &RunConfig, step: u8) -> Result<i32, CliError> {
    if !(1..=3).contains(&step) {
        return Err(Error::InvalidStep(step as i64).into());
    }
    let radius = cfg.radius.unwrap_or(5);
    let (header, body) = sparse_lines(cfg.q, radius, step)?;
    let header = serde_json::to_string(&header).map_err(|e| CliError::Failure(e.to_string()))?;
    match &cfg.out {
        Some(path) => {
            let mut hp = path.clone().into_os_string();
            hp.push(".header.json");
            let mut h = open_out(Some(Path::new(&hp)))?;
            writeln!(h, "{header}")?;
            h.flush()?;
            let mut out = open_out(Some(path))?;
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
        None => {
            let mut out = open_out(None)?;
            writeln!(out, "% {header}")?;
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn complex_literals() {
        let q = 2;
        assert!(close(parse_complex("1+2i", q).unwrap(), Complex64::new(1.0, 2.0)));
        assert!(close(parse_complex("-0.5", q).unwrap(), Complex64::new(-0.5, 0.0)));
        assert!(close(parse_complex("qe^{i0.4}", q).unwrap(), Complex64::from_polar(2.0, 0.4)));
        assert!(close(parse_complex("q^{1/2} e^{i pi/3}", q).unwrap(), Complex64::from_polar(2f64.sqrt(), 1.0471975511965976)));
        assert!(close(parse_complex("q^-1", q).unwrap(), Complex64::new(0.5, 0.0)));
        assert!(close(parse_complex("e^{-i0.4}", q).unwrap(), Complex64::from_polar(1.0, -0.4)));
        assert!(close(parse_complex("2e^{i-2pi/3}", q).unwrap(), Complex64::from_polar(2.0, -2.0943951023931953)));
        assert!(close(parse_complex("-e^{iπ}", q).unwrap(), Complex64::new(1.0, 0.0)));
        for bad in ["", "abc", "q^x", "e^{i}", "1+2j+"] {
            assert!(parse_complex(bad, q).is_err(), "{bad}");
        }
    }

    #[test]
    fn vertices() {
        assert_eq!(parse_vertex("(2,1,0)").unwrap(), VertexId { ell: 2, m: 1, n: 0 });
        assert_eq!(parse_vertex("3, 2, 1").unwrap(), VertexId { ell: 3, m: 2, n: 1 });
        assert!(parse_vertex("1,2,0").is_err());
        assert!(parse_vertex("1,0").is_err());
    }

    #[test]
    fn csv_precision() {
        let s = fmt_f64(0.1);
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(s.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
    }
}
