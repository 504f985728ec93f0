//! Quantile regions assembled from dual solutions, the Tukey lifting,
//! membership and depth.

use num_traits::{One, Signed};

use crate::cone::{make_dual_basis, Cone, DualConeBasis};
use crate::data::{DataCloud, QuantileLevel};
use crate::error::{Error, Result};
use crate::polyhedra::{remove_redundant, Halfspace, Polyhedron};
use crate::scalar::{dot, is_zero_vec, lex_cmp, Rational};
use crate::vlp::{benson_dual_solve, halfspaces_of, BensonStats, DualEntry};

/// Which quantile set to compute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionSpec {
    /// Lower `C`-quantile for a validated cone, with optional interior point.
    Cone { cone: Cone, interior: Option<Vec<Rational>> },
    /// Tukey depth region (the cone `{0}`), computed via lifting.
    Tukey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ConeQuantile,
    TukeyLifted,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ConeQuantile => "cone-quantile",
            Provenance::TukeyLifted => "tukey-lifted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantileRegion {
    /// The region with both representations.
    pub region: Polyhedron,
    /// The dual solution entries `(w, t)`; for Tukey regions these live
    /// in the lifted space `R^{d+1}`.
    pub entries: Vec<DualEntry>,
    /// Defining halfspaces in data space, one per entry except dropped
    /// vacuous Tukey entries. Before any optional pruning.
    pub halfspaces: Vec<Halfspace>,
    pub level: QuantileLevel,
    pub provenance: Provenance,
    pub stats: BensonStats,
}

impl QuantileRegion {
    pub fn contains(&self, z: &[Rational]) -> bool {
        !self.region.is_empty() && self.region.contains_point(z)
    }

    pub fn is_empty(&self) -> bool {
        self.region.is_empty()
    }
}

/// The lower `C`-quantile of `data` at `level` for `cone`.
pub fn quantile_region(data: &DataCloud, level: &QuantileLevel, cone: &Cone, interior: Option<Vec<Rational>>) -> Result<QuantileRegion> {
    level.require_valid()?;
    if data.dim() != cone.dim() {
        return Err(Error::DimensionMismatch { expected: cone.dim(), found: data.dim() });
    }
    let basis = make_dual_basis(cone, interior)?;
    region_from_basis(data, level, &basis)
}

fn region_from_basis(data: &DataCloud, level: &QuantileLevel, basis: &DualConeBasis) -> Result<QuantileRegion> {
    let sol = benson_dual_solve(data, level, basis)?;
    let halfspaces = halfspaces_of(&sol)?;
    let region = Polyhedron::from_hrep(data.dim(), halfspaces.clone(), Vec::new()).complete();
    Ok(QuantileRegion {
        region,
        entries: sol.entries,
        halfspaces,
        level: level.clone(),
        provenance: Provenance::ConeQuantile,
        stats: sol.stats,
    })
}

/// `x -> (x, -e^T x)`: every lifted point sums to zero.
pub fn lift_dataset(data: &DataCloud) -> DataCloud {
    data.map_points(|x| {
        let mut v = x.to_vec();
        let s: Rational = x.iter().sum();
        v.push(-s);
        v
    })
    .expect("lifting preserves shape")
}

/// `lambda(w) = (w_1 - w_{d+1}, ..., w_d - w_{d+1})`.
pub fn unlift_normal(w: &[Rational]) -> Vec<Rational> {
    let (last, head) = w.split_last().expect("nonempty normal");
    head.iter().map(|x| x - last).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TukeyOptions {
    /// Replace the unlifted H-representation by an irredundant one.
    pub prune: bool,
}

/// The Tukey depth region at `level`.
pub fn tukey_region(data: &DataCloud, level: &QuantileLevel) -> Result<QuantileRegion> {
    tukey_region_with(data, level, TukeyOptions::default())
}

pub fn tukey_region_with(data: &DataCloud, level: &QuantileLevel, options: TukeyOptions) -> Result<QuantileRegion> {
    level.require_valid()?;
    let d = data.dim();
    let lifted = lift_dataset(data);
    let cone = Cone::orthant(d + 1);
    let basis = make_dual_basis(&cone, Some(vec![Rational::one(); d + 1]))?;
    let sol = benson_dual_solve(&lifted, level, &basis)?;

    let mut halfspaces = Vec::with_capacity(sol.entries.len());
    let mut infeasible = false;
    for entry in &sol.entries {
        let normal = unlift_normal(&entry.w);
        if is_zero_vec(&normal) {
            if entry.t.is_positive() {
                infeasible = true;
            }
            continue;
        }
        halfspaces.push(Halfspace { normal, offset: entry.t.clone() }.canonical());
    }
    halfspaces.sort_by(|a, b| lex_cmp(&a.normal, &b.normal).then_with(|| a.offset.cmp(&b.offset)));

    let region = if infeasible {
        Polyhedron::empty(d)
    } else {
        let raw = Polyhedron::from_hrep(d, halfspaces.clone(), Vec::new());
        let raw = if options.prune { remove_redundant(&raw) } else { raw };
        raw.complete()
    };
    Ok(QuantileRegion {
        region,
        entries: sol.entries,
        halfspaces,
        level: level.clone(),
        provenance: Provenance::TukeyLifted,
        stats: sol.stats,
    })
}

/// Computes the region described by `spec`.
pub fn compute_region(data: &DataCloud, level: &QuantileLevel, spec: &RegionSpec) -> Result<QuantileRegion> {
    match spec {
        RegionSpec::Cone { cone, interior } => quantile_region(data, level, cone, interior.clone()),
        RegionSpec::Tukey => tukey_region(data, level),
    }
}

/// Exact membership of `z` in the region described by `spec`.
pub fn region_membership(data: &DataCloud, level: &QuantileLevel, spec: &RegionSpec, z: &[Rational]) -> Result<bool> {
    if z.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: z.len() });
    }
    Ok(compute_region(data, level, spec)?.contains(z))
}

/// Tukey depth of `z`: the largest `k` such that `z` lies in the Tukey
/// region with `ceil(N p) = k`, or 0 when `z` is outside the convex hull.
pub fn tukey_depth(data: &DataCloud, z: &[Rational]) -> Result<usize> {
    if z.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: z.len() });
    }
    let n = data.len();
    for k in (1..=n).rev() {
        let level = QuantileLevel::for_count(k, n)?;
        if tukey_region(data, &level)?.contains(z) {
            return Ok(k);
        }
    }
    Ok(0)
}

/// Number of data points `x` with `w^T x <= w^T z`.
pub fn count_at_or_below(data: &DataCloud, w: &[Rational], z: &[Rational]) -> usize {
    let wz = dot(w, z);
    data.points().iter().filter(|x| dot(w, x) <= wz).count()
}
