//! Ordering cones in generator form and the basis of their dual cone.

use num_traits::{One, Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::lp::{simplex_solve, LinearProgram, LpStatus, Relation, Sense};
use crate::scalar::{dot, is_zero_vec, lex_cmp, scale, Rational};

/// `C = {Y^T y : y >= 0}`, validated to be full-dimensional and
/// line-free. Rows of `Y` are the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    generators: Vec<Vec<Rational>>,
    dim: usize,
}

impl Cone {
    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The nonnegative orthant `R^d_+`.
    pub fn orthant(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self { generators, dim }
    }

    /// Membership of `w` in the dual cone `{w : Y w >= 0}`.
    pub fn dual_contains(&self, w: &[Rational]) -> bool {
        self.generators.iter().all(|g| !dot(g, w).is_negative())
    }
}

/// Checks that the generator rows span `R^d` and that the cone contains
/// no line.
pub fn validate_cone(generators: Vec<Vec<Rational>>) -> Result<Cone> {
    let dim = generators.first().map_or(0, Vec::len);
    if generators.is_empty() || dim == 0 {
        return Err(Error::NoGenerators);
    }
    if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
    }
    let r = rank(&generators);
    if r < dim {
        return Err(Error::NotFullDimensional { rank: r, dim });
    }
    // A line exists iff some nonzero y >= 0 has Y^T y = 0.
    let nonzero: Vec<&Vec<Rational>> = generators.iter().filter(|g| !is_zero_vec(g)).collect();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); nonzero.len()]);
    for k in 0..dim {
        lp = lp.constraint(nonzero.iter().map(|g| g[k].clone()).collect(), Relation::Eq, Rational::zero());
    }
    lp = lp.constraint(vec![Rational::one(); nonzero.len()], Relation::Eq, Rational::one());
    if simplex_solve(&lp)?.status != LpStatus::Infeasible {
        return Err(Error::ContainsLine);
    }
    Ok(Cone { generators, dim })
}

/// The slice `B+ = {w : Y w >= 0, c^T w = 1}` of the dual cone.
///
/// Internally coordinates may be permuted so that the last entry of `c`
/// is nonzero; `to_internal` and `to_external` translate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualConeBasis {
    cone: Cone,
    c: Vec<Rational>,
    /// Internal coordinate `i` holds external coordinate `perm[i]`.
    perm: Vec<usize>,
    /// Vertices of `B+` (external coordinates), sorted.
    vertices: Vec<Vec<Rational>>,
}

impl DualConeBasis {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// Interior point `c` in external coordinates.
    pub fn interior_point(&self) -> &[Rational] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.cone.dim
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_permuted(&self) -> bool {
        self.perm.iter().enumerate().any(|(i, &p)| i != p)
    }

    /// Vertices of `B+`, i.e. the extreme rays of the dual cone scaled to
    /// `c^T w = 1`.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn to_internal(&self, v: &[Rational]) -> Vec<Rational> {
        self.perm.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn to_external(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = v[i].clone();
        }
        out
    }

    /// `c` in internal coordinates; its last entry is nonzero.
    pub fn internal_c(&self) -> Vec<Rational> {
        self.to_internal(&self.c)
    }

    /// Generator rows in internal coordinates.
    pub fn internal_generators(&self) -> Vec<Vec<Rational>> {
        self.cone.generators.iter().map(|g| self.to_internal(g)).collect()
    }

    /// `w` (external coordinates) lies in `B+`.
    pub fn contains(&self, w: &[Rational]) -> bool {
        self.cone.dual_contains(w) && dot(&self.c, w) == Rational::one()
    }
}

/// Builds `B+` for `cone` with interior point `c` (default: the sum of
/// the generator rows).
pub fn make_dual_basis(cone: &Cone, c: Option<Vec<Rational>>) -> Result<DualConeBasis> {
    let d = cone.dim;
    let c = match c {
        Some(c) => {
            if c.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: c.len() });
            }
            c
        }
        None => cone.generators.iter().fold(vec![Rational::zero(); d], |acc, g| crate::scalar::add(&acc, g)),
    };

    let rays = cone_generators(d, &cone.generators, &[]);
    debug_assert!(rays.lineality.is_empty(), "validated cone has a pointed dual");
    let mut vertices = Vec::with_capacity(rays.rays.len());
    for r in &rays.rays {
        let s = dot(&c, r);
        if !s.is_positive() {
            return Err(Error::NotInterior);
        }
        vertices.push(scale(r, &s.recip()));
    }
    if vertices.is_empty() {
        return Err(Error::EmptyBasis);
    }
    vertices.sort_by(|a, b| lex_cmp(a, b));

    let mut perm: Vec<usize> = (0..d).collect();
    if c[d - 1].is_zero() {
        let k = (0..d).rev().find(|&k| !c[k].is_zero()).ok_or(Error::DegenerateBasis)?;
        perm.swap(k, d - 1);
    }
    Ok(DualConeBasis { cone: cone.clone(), c, perm, vertices })
}
