//! Brute-force verifiers that avoid the Benson path.
//!
//! In the plane the order of the projections `w^T x_i` only changes
//! when `w` crosses a normal of some difference `x_i - x_j`. Between two
//! consecutive such directions `q(w^T X)` is linear in `w`, so the
//! constraint `w^T z >= q(w^T X)` holds on the whole arc iff it holds at
//! both ends. Intersecting the halfspaces for all critical directions is
//! therefore exact. In higher dimension only sampling is available.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{make_dual_basis, Cone};
use crate::data::{project_data, DataCloud, QuantileLevel};
use crate::error::{Error, Result};
use crate::polyhedra::{Halfspace, Polyhedron};
use crate::quantile::RegionSpec;
use crate::scalar::{dot, primitive, rvec, Rational};
use crate::univariate::quantile_direct;

/// Planar directions, primitive integer vectors sorted by angle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalDirectionSet {
    pub directions: Vec<Vec<Rational>>,
}

/// Exact region from the critical-direction enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRegion {
    pub region: Polyhedron,
    pub directions: CriticalDirectionSet,
}

fn perp(v: &[Rational]) -> Vec<Rational> {
    vec![-v[1].clone(), v[0].clone()]
}

fn cross(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn upper_half(v: &[Rational]) -> bool {
    v[1].is_positive() || (v[1].is_zero() && v[0].is_positive())
}

fn angle_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    match (upper_half(a), upper_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let c = cross(a, b);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    }
}

/// Critical directions for a planar cloud, restricted to the dual cone
/// when one is given, plus one interior direction per arc.
pub fn critical_directions(data: &DataCloud, cone: Option<&Cone>) -> CriticalDirectionSet {
    let pts = data.points();
    let mut candidates: Vec<Vec<Rational>> = vec![rvec(&[1, 0]), rvec(&[0, 1]), rvec(&[-1, 0]), rvec(&[0, -1])];
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let diff: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if diff.iter().all(Zero::is_zero) {
                continue;
            }
            let n = perp(&diff);
            candidates.push(n.iter().map(|x| -x.clone()).collect());
            candidates.push(n);
        }
    }
    if let Some(cone) = cone {
        for g in cone.generators() {
            if g.iter().any(|x| !x.is_zero()) {
                let n = perp(g);
                candidates.push(n.iter().map(|x| -x.clone()).collect());
                candidates.push(n);
            }
        }
    }
    let admissible = |w: &[Rational]| cone.is_none_or(|c| c.dual_contains(w));
    let mut dirs: Vec<Vec<Rational>> = candidates.into_iter().filter(|w| admissible(w)).map(|w| primitive(&w)).collect();
    dirs.sort_by(|a, b| angle_cmp(a, b).then_with(|| a.cmp(b)));
    dirs.dedup();

    let mut mids = Vec::new();
    for k in 0..dirs.len() {
        let a = &dirs[k];
        let b = &dirs[(k + 1) % dirs.len()];
        if cross(a, b).is_positive() {
            let m: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if admissible(&m) {
                mids.push(primitive(&m));
            }
        }
    }
    dirs.extend(mids);
    dirs.sort_by(|a, b| angle_cmp(a, b).then_with(|| a.cmp(b)));
    dirs.dedup();
    CriticalDirectionSet { directions: dirs }
}

/// Exact planar region by direct evaluation of the defining
/// intersection at every critical direction.
pub fn oracle_region_2d(data: &DataCloud, level: &QuantileLevel, spec: &RegionSpec) -> Result<OracleRegion> {
    if data.dim() != 2 {
        return Err(Error::DimensionNot2(data.dim()));
    }
    level.require_valid()?;
    let cone = match spec {
        RegionSpec::Cone { cone, .. } => {
            if cone.dim() != 2 {
                return Err(Error::DimensionNot2(cone.dim()));
            }
            Some(cone)
        }
        RegionSpec::Tukey => None,
    };
    let directions = critical_directions(data, cone);
    let halfspaces = directions
        .directions
        .iter()
        .map(|w| {
            let t = quantile_direct(&project_data(data, w)?, level)?;
            Ok(Halfspace { normal: w.clone(), offset: t })
        })
        .collect::<Result<Vec<_>>>()?;
    let region = Polyhedron::from_hrep(2, halfspaces, Vec::new()).complete();
    Ok(OracleRegion { region, directions })
}

/// Draws directions from the dual cone of `spec`: random nonnegative
/// combinations of the extreme dual rays for a cone, arbitrary nonzero
/// integer vectors for Tukey regions.
pub struct DirectionSampler {
    rng: ChaCha8Rng,
    dim: usize,
    rays: Option<Vec<Vec<Rational>>>,
}

impl DirectionSampler {
    pub fn new(spec: &RegionSpec, dim: usize, seed: u64) -> Result<Self> {
        let rays = match spec {
            RegionSpec::Cone { cone, interior } => Some(make_dual_basis(cone, interior.clone())?.vertices().to_vec()),
            RegionSpec::Tukey => None,
        };
        Ok(Self { rng: ChaCha8Rng::seed_from_u64(seed), dim, rays })
    }

    pub fn sample(&mut self) -> Vec<Rational> {
        loop {
            let w = match &self.rays {
                Some(rays) => {
                    let mut w = vec![Rational::zero(); self.dim];
                    for r in rays {
                        // Sparse weights reach the faces of the dual cone.
                        let weight: i64 = if self.rng.gen_bool(0.5) { 0 } else { self.rng.gen_range(1..=1000) };
                        if weight != 0 {
                            let f = Rational::from_integer(BigInt::from(weight));
                            for (wi, ri) in w.iter_mut().zip(r) {
                                *wi += &f * ri;
                            }
                        }
                    }
                    w
                }
                None => (0..self.dim).map(|_| Rational::from_integer(BigInt::from(self.rng.gen_range(-1000i64..=1000)))).collect(),
            };
            if w.iter().any(|x| !x.is_zero()) {
                return w;
            }
        }
    }
}

/// One-sided membership test: `false` means some sampled dual direction
/// `w` has `w^T z < q(w^T X)`; `true` means no refutation was found.
pub fn membership_sample(
    data: &DataCloud,
    level: &QuantileLevel,
    spec: &RegionSpec,
    z: &[Rational],
    trials: usize,
    seed: u64,
) -> Result<bool> {
    Ok(find_violation(data, level, spec, z, trials, seed)?.is_none())
}

/// Like [`membership_sample`] but returns the refuting direction.
pub fn find_violation(
    data: &DataCloud,
    level: &QuantileLevel,
    spec: &RegionSpec,
    z: &[Rational],
    trials: usize,
    seed: u64,
) -> Result<Option<Vec<Rational>>> {
    if z.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: z.len() });
    }
    let mut sampler = DirectionSampler::new(spec, data.dim(), seed)?;
    for _ in 0..trials.max(1) {
        let w = sampler.sample();
        let q = quantile_direct(&project_data(data, &w)?, level)?;
        if dot(&w, z) < q {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
