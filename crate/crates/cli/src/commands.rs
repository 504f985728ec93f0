//! Command implementations over parsed inputs.

use cone_quantile::lp::simplex_quantile;
use cone_quantile::oracle::{find_violation, oracle_region_2d};
use cone_quantile::polyhedra::poly_equal;
use cone_quantile::quantile::{compute_region, tukey_region_with, QuantileRegion, RegionSpec, TukeyOptions};
use cone_quantile::scalar::format_rational;
use cone_quantile::univariate::{minimize_phi, quantile_direct};
use cone_quantile::{tukey_depth, validate_cone, DataCloud, Error, QuantileLevel, Rational};
use num_traits::One;

use crate::document::RegionDocument;
use crate::input::ConeFile;

/// A command failure, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: unreadable or malformed input.
    Input(anyhow::Error),
    /// Exit 2: a hypothesis of the method does not hold.
    Hypothesis(String),
    /// Exit 3: an independent check disagreed with the solver.
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Hypothesis(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "input error: {e:#}"),
            Failure::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IntegralNp(np) => Failure::Hypothesis(format!(
                "N*p = {np} is an integer, but the quantile is the unique phi minimizer only when N*p is not an integer (use --nudge to perturb p)"
            )),
            Error::ContainsLine => Failure::Hypothesis("the cone must be free of lines".into()),
            Error::NotFullDimensional { rank, dim } => Failure::Hypothesis(format!(
                "the cone must have nonempty interior (generator rank {rank} < dimension {dim})"
            )),
            Error::NotInterior => Failure::Hypothesis("the supplied interior point c is not in the interior of the cone".into()),
            Error::DegenerateBasis | Error::EmptyBasis => Failure::Hypothesis(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

/// Builds the level, optionally moving `p` off the integral grid by
/// `1 / (2 N q)` where `q` is the denominator of `p`. The shifted level
/// keeps `ceil(N p)`.
pub fn make_level(p: &Rational, n: usize, nudge: bool) -> CmdResult<QuantileLevel> {
    let level = QuantileLevel::new(p.clone(), n)?;
    if level.is_valid() || !nudge {
        level.require_valid()?;
        return Ok(level);
    }
    let delta = Rational::one() / (Rational::from_integer((2 * n).into()) * Rational::from_integer(p.denom().clone()));
    let nudged = QuantileLevel::new(p - delta, n)?;
    debug_assert!(nudged.is_valid() && nudged.ceil_np() == level.ceil_np());
    Ok(nudged)
}

pub fn uniquantile(data: &DataCloud, p: &Rational, check: bool, nudge: bool) -> CmdResult<String> {
    if data.dim() != 1 {
        return Err(Failure::Input(anyhow::anyhow!("uniquantile expects one column, got {}", data.dim())));
    }
    let level = make_level(p, data.len(), nudge)?;
    let sample: Vec<Rational> = data.points().iter().map(|x| x[0].clone()).collect();
    let q = quantile_direct(&sample, &level)?;
    let m = minimize_phi(&sample, &level)?;
    debug_assert_eq!(q, m.t);
    let mut out = String::new();
    if level.p() != p {
        out.push_str(&format!("p_adjusted={}\n", format_rational(level.p())));
    }
    out.push_str(&format!("q={}", format_rational(&q)));
    if check {
        let (t, value) = simplex_quantile(&sample, &level)?;
        if t != q || value != m.value {
            return Err(Failure::Verification(format!("simplex optimum t={t}, value={value} disagrees with q={q}, phi={}", m.value)));
        }
        out.push_str(" (LP verified)");
    }
    out.push_str(&format!("\nphi_min={}\n", format_rational(&m.value)));
    Ok(out)
}

pub fn cone_spec(cone: &ConeFile) -> CmdResult<RegionSpec> {
    let validated = validate_cone(cone.generators.clone())?;
    Ok(RegionSpec::Cone { cone: validated, interior: cone.interior.clone() })
}

pub struct RegionRun {
    pub spec: RegionSpec,
    pub region: QuantileRegion,
    pub document: RegionDocument,
}

pub fn region(data: &DataCloud, p: &Rational, cone: &ConeFile, nudge: bool) -> CmdResult<RegionRun> {
    let spec = cone_spec(cone)?;
    let level = make_level(p, data.len(), nudge)?;
    let region = compute_region(data, &level, &spec)?;
    let document = RegionDocument::new(data, &spec, &region, p);
    Ok(RegionRun { spec, region, document })
}

pub fn tukey(data: &DataCloud, p: &Rational, nudge: bool, prune: bool) -> CmdResult<RegionRun> {
    let level = make_level(p, data.len(), nudge)?;
    let region = tukey_region_with(data, &level, TukeyOptions { prune })?;
    let spec = RegionSpec::Tukey;
    let document = RegionDocument::new(data, &spec, &region, p);
    Ok(RegionRun { spec, region, document })
}

pub fn depth(data: &DataCloud, point: &[Rational]) -> CmdResult<usize> {
    Ok(tukey_depth(data, point)?)
}

/// Runs the independent checks and returns the report lines.
pub fn verify(data: &DataCloud, p: &Rational, cone: Option<&ConeFile>, seed: u64, trials: usize, nudge: bool) -> CmdResult<String> {
    let run = match cone {
        Some(c) => region(data, p, c, nudge)?,
        None => tukey(data, p, nudge, false)?,
    };
    let level = &run.region.level;
    let mut report = String::new();

    if data.dim() == 2 {
        let oracle = oracle_region_2d(data, level, &run.spec)?;
        if !poly_equal(&oracle.region, &run.region.region) {
            let solver_v = run.region.region.vrep().cloned().unwrap_or_default();
            let oracle_v = oracle.region.vrep().cloned().unwrap_or_default();
            return Err(Failure::Verification(format!(
                "2-D exact oracle disagrees: solver vertices {:?}, oracle vertices {:?}",
                fmt_points(&solver_v.points),
                fmt_points(&oracle_v.points)
            )));
        }
        report.push_str(&format!("2-D exact oracle: regions equal ({} critical directions)\n", oracle.directions.directions.len()));
    }

    let vertices = run.region.region.vrep().map(|v| v.points.clone()).unwrap_or_default();
    for (k, z) in vertices.iter().enumerate() {
        if let Some(w) = find_violation(data, level, &run.spec, z, trials, seed.wrapping_add(k as u64))? {
            return Err(Failure::Verification(format!(
                "vertex {:?} refuted by direction {:?}",
                fmt_point(z),
                fmt_point(&w)
            )));
        }
    }
    report.push_str(&format!(
        "membership sampling: {} vertices, {} directions each, none refuted\n",
        vertices.len(),
        trials
    ));
    Ok(report)
}

fn fmt_point(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn fmt_points(v: &[Vec<Rational>]) -> Vec<Vec<String>> {
    v.iter().map(|p| fmt_point(p)).collect()
}
