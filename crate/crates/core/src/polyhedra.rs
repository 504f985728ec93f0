//! Exact convex polyhedra in H- and V-representation.
//!
//! A [`Polyhedron`] carries an H-representation `{z : a_i^T z >= b_i,
//! e_j^T z = f_j}`, a V-representation `conv(points) + cone(rays) +
//! span(lines)`, or both. Conversions go through the double description
//! routine in [`crate::dd`] on the homogenized cone.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::dd::cone_generators;
use crate::linalg::rref;
use crate::lp::{simplex_solve, LinearProgram, LpStatus, Relation, Sense};
use crate::scalar::{dot, is_zero_vec, lex_cmp, normalize_first, primitive, scale, Rational};

/// `{z : normal^T z >= offset}` with a nonzero normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    /// `None` when `normal` is the zero vector.
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Option<Self> {
        if is_zero_vec(&normal) {
            None
        } else {
            Some(Self { normal, offset })
        }
    }

    /// Same set, scaled so the first nonzero normal entry is `+1` or `-1`.
    pub fn canonical(&self) -> Self {
        let lead = self.normal.iter().find(|x| !x.is_zero()).expect("nonzero normal").abs();
        let s = lead.recip();
        Self { normal: scale(&self.normal, &s), offset: &self.offset * s }
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        dot(&self.normal, z) >= self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    fn cmp_canonical(&self, other: &Self) -> Ordering {
        lex_cmp(&self.normal, &other.normal).then_with(|| self.offset.cmp(&other.offset))
    }
}

/// `{z : normal^T z = offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn contains(&self, z: &[Rational]) -> bool {
        dot(&self.normal, z) == self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HRep {
    pub inequalities: Vec<Halfspace>,
    pub equations: Vec<Hyperplane>,
}

/// `conv(points) + cone(rays) + span(lines)`. No points means empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VRep {
    pub points: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
    pub lines: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    hrep: Option<HRep>,
    vrep: Option<VRep>,
    /// Farkas multipliers proving emptiness of the H-representation:
    /// nonnegative on inequalities, free on equations, with
    /// `sum y_i a_i = 0` and `sum y_i b_i > 0`. Inequalities come first.
    empty_certificate: Option<Vec<Rational>>,
}

impl Polyhedron {
    pub fn from_hrep(dim: usize, inequalities: Vec<Halfspace>, equations: Vec<Hyperplane>) -> Self {
        debug_assert!(inequalities.iter().all(|h| h.dim() == dim));
        Self { dim, hrep: Some(HRep { inequalities, equations }), vrep: None, empty_certificate: None }
    }

    pub fn from_vrep(dim: usize, vrep: VRep) -> Self {
        Self { dim, hrep: None, vrep: Some(vrep), empty_certificate: None }
    }

    /// The whole space `R^dim`.
    pub fn universe(dim: usize) -> Self {
        Self::from_hrep(dim, Vec::new(), Vec::new())
    }

    /// The empty set, with a contradictory H-representation.
    pub fn empty(dim: usize) -> Self {
        let mut e = vec![Rational::zero(); dim.max(1)];
        e[0] = Rational::one();
        let neg: Vec<Rational> = e.iter().map(|x| -x.clone()).collect();
        let hrep = HRep {
            inequalities: vec![Halfspace { normal: e, offset: Rational::one() }, Halfspace { normal: neg, offset: Rational::zero() }],
            equations: Vec::new(),
        };
        let certificate = vec![Rational::one(), Rational::one()];
        Self { dim, hrep: Some(hrep), vrep: Some(VRep::default()), empty_certificate: Some(certificate) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> Option<&HRep> {
        self.hrep.as_ref()
    }

    pub fn vrep(&self) -> Option<&VRep> {
        self.vrep.as_ref()
    }

    pub fn empty_certificate(&self) -> Option<&[Rational]> {
        self.empty_certificate.as_deref()
    }

    /// Emptiness; computes the V-representation if needed.
    pub fn is_empty(&self) -> bool {
        match &self.vrep {
            Some(v) => v.points.is_empty(),
            None => hrep_to_vrep(self).vrep.unwrap().points.is_empty(),
        }
    }

    /// True when nonempty with no rays or lines (a polytope), or empty.
    pub fn is_bounded(&self) -> bool {
        let check = |v: &VRep| v.rays.is_empty() && v.lines.is_empty();
        match &self.vrep {
            Some(v) => check(v),
            None => check(hrep_to_vrep(self).vrep.as_ref().unwrap()),
        }
    }

    /// Membership via the H-representation.
    pub fn contains_point(&self, z: &[Rational]) -> bool {
        let owned;
        let h = match &self.hrep {
            Some(h) => h,
            None => {
                owned = vrep_to_hrep(self);
                owned.hrep.as_ref().unwrap()
            }
        };
        h.inequalities.iter().all(|a| a.contains(z)) && h.equations.iter().all(|e| e.contains(z))
    }

    /// Both representations present.
    pub fn complete(self) -> Self {
        match (&self.hrep, &self.vrep) {
            (Some(_), Some(_)) => self,
            (Some(_), None) => hrep_to_vrep(&self),
            (None, Some(_)) => vrep_to_hrep(&self),
            (None, None) => unreachable!("polyhedron without representation"),
        }
    }

    /// Image under `z -> z + shift`.
    pub fn translate(&self, shift: &[Rational]) -> Self {
        let hrep = self.hrep.as_ref().map(|h| HRep {
            inequalities: h
                .inequalities
                .iter()
                .map(|a| Halfspace { normal: a.normal.clone(), offset: &a.offset + dot(&a.normal, shift) })
                .collect(),
            equations: h
                .equations
                .iter()
                .map(|e| Hyperplane { normal: e.normal.clone(), offset: &e.offset + dot(&e.normal, shift) })
                .collect(),
        });
        let vrep = self.vrep.as_ref().map(|v| VRep {
            points: v.points.iter().map(|p| crate::scalar::add(p, shift)).collect(),
            rays: v.rays.clone(),
            lines: v.lines.clone(),
        });
        Self { dim: self.dim, hrep, vrep, empty_certificate: self.empty_certificate.clone() }
    }

    /// Image under `z -> factor * z` for `factor > 0`.
    pub fn scale(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive());
        let hrep = self.hrep.as_ref().map(|h| HRep {
            inequalities: h
                .inequalities
                .iter()
                .map(|a| Halfspace { normal: a.normal.clone(), offset: &a.offset * factor })
                .collect(),
            equations: h
                .equations
                .iter()
                .map(|e| Hyperplane { normal: e.normal.clone(), offset: &e.offset * factor })
                .collect(),
        });
        let vrep = self.vrep.as_ref().map(|v| VRep {
            points: v.points.iter().map(|p| scale(p, factor)).collect(),
            rays: v.rays.clone(),
            lines: v.lines.clone(),
        });
        let empty_certificate = self.empty_certificate.clone();
        Self { dim: self.dim, hrep, vrep, empty_certificate }
    }
}

/// Computes the V-representation of an H-represented polyhedron.
/// Points, rays and lines come out sorted and primitive where scaling is
/// free. Empty input gets a Farkas certificate.
pub fn hrep_to_vrep(poly: &Polyhedron) -> Polyhedron {
    let h = poly.hrep.as_ref().expect("hrep_to_vrep needs an H-representation");
    let d = poly.dim;
    // Cone over (z, lambda): a^T z - b lambda >= 0, lambda >= 0.
    let mut ineqs: Vec<Vec<Rational>> = Vec::with_capacity(h.inequalities.len() + 1);
    let mut lambda = vec![Rational::zero(); d + 1];
    lambda[d] = Rational::one();
    ineqs.push(lambda);
    for a in &h.inequalities {
        let mut row = a.normal.clone();
        row.push(-a.offset.clone());
        ineqs.push(row);
    }
    let eqs: Vec<Vec<Rational>> = h
        .equations
        .iter()
        .map(|e| {
            let mut row = e.normal.clone();
            row.push(-e.offset.clone());
            row
        })
        .collect();
    let gens = cone_generators(d + 1, &ineqs, &eqs);

    let mut vrep = VRep::default();
    for r in gens.rays {
        let lam = r[d].clone();
        let body = r[..d].to_vec();
        if lam.is_positive() {
            vrep.points.push(scale(&body, &lam.recip()));
        } else {
            vrep.rays.push(primitive(&body));
        }
    }
    debug_assert!(gens.lineality.iter().all(|l| l[d].is_zero()));
    if !vrep.points.is_empty() {
        vrep.lines = canonical_lines(gens.lineality.iter().map(|l| l[..d].to_vec()).collect());
    } else {
        vrep.rays.clear();
    }
    vrep.points.sort_by(|a, b| lex_cmp(a, b));
    vrep.rays.sort_by(|a, b| lex_cmp(a, b));

    let empty_certificate = if vrep.points.is_empty() { Some(farkas_certificate(d, h)) } else { None };
    Polyhedron { dim: d, hrep: poly.hrep.clone(), vrep: Some(vrep), empty_certificate }
}

fn canonical_lines(lines: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if lines.is_empty() {
        return lines;
    }
    rref(&lines).0.into_iter().map(|l| primitive(&l)).collect()
}

/// `y >= 0` on inequalities, free on equations, `A^T y = 0`, `b^T y = 1`.
fn farkas_certificate(dim: usize, h: &HRep) -> Vec<Rational> {
    let mi = h.inequalities.len();
    let me = h.equations.len();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); mi + me]);
    for j in mi..mi + me {
        lp = lp.free(j);
    }
    for k in 0..dim {
        let row: Vec<Rational> = h
            .inequalities
            .iter()
            .map(|a| a.normal[k].clone())
            .chain(h.equations.iter().map(|e| e.normal[k].clone()))
            .collect();
        lp = lp.constraint(row, Relation::Eq, Rational::zero());
    }
    let row: Vec<Rational> = h
        .inequalities
        .iter()
        .map(|a| a.offset.clone())
        .chain(h.equations.iter().map(|e| e.offset.clone()))
        .collect();
    lp = lp.constraint(row, Relation::Eq, Rational::one());
    let out = simplex_solve(&lp).expect("well-formed certificate program");
    assert_eq!(out.status, LpStatus::Optimal, "empty polyhedron must admit a Farkas certificate");
    out.primal
}

/// Checks a Farkas certificate against an H-representation.
pub fn verify_empty_certificate(poly: &Polyhedron) -> bool {
    let (Some(h), Some(y)) = (&poly.hrep, &poly.empty_certificate) else {
        return false;
    };
    let mi = h.inequalities.len();
    if y.len() != mi + h.equations.len() || y[..mi].iter().any(Signed::is_negative) {
        return false;
    }
    let normals = h.inequalities.iter().map(|a| (&a.normal, &a.offset)).chain(h.equations.iter().map(|e| (&e.normal, &e.offset)));
    let mut combo = vec![Rational::zero(); poly.dim];
    let mut rhs = Rational::zero();
    for ((n, b), yi) in normals.zip(y) {
        for (c, x) in combo.iter_mut().zip(n) {
            *c += yi * x;
        }
        rhs += yi * b;
    }
    is_zero_vec(&combo) && rhs.is_positive()
}

/// Computes an irredundant H-representation of a V-represented
/// polyhedron (facets plus canonical equations of the affine hull).
pub fn vrep_to_hrep(poly: &Polyhedron) -> Polyhedron {
    let v = poly.vrep.as_ref().expect("vrep_to_hrep needs a V-representation");
    let d = poly.dim;
    if v.points.is_empty() {
        let mut e = Polyhedron::empty(d);
        e.vrep = Some(v.clone());
        return e;
    }
    // Valid inequalities a^T z >= -gamma as a cone over (a, gamma).
    let mut ineqs: Vec<Vec<Rational>> = Vec::new();
    for p in &v.points {
        let mut row = p.clone();
        row.push(Rational::one());
        ineqs.push(row);
    }
    for r in &v.rays {
        let mut row = r.clone();
        row.push(Rational::zero());
        ineqs.push(row);
    }
    let eqs: Vec<Vec<Rational>> = v
        .lines
        .iter()
        .map(|l| {
            let mut row = l.clone();
            row.push(Rational::zero());
            row
        })
        .collect();
    let gens = cone_generators(d + 1, &ineqs, &eqs);

    let equations = canonical_equations(
        gens.lineality
            .iter()
            .map(|l| Hyperplane { normal: l[..d].to_vec(), offset: -l[d].clone() })
            .collect(),
    );
    let mut inequalities: Vec<Halfspace> = gens
        .rays
        .iter()
        .map(|r| reduce_modulo(&Halfspace { normal: r[..d].to_vec(), offset: -r[d].clone() }, &equations))
        .filter(|h| !is_zero_vec(&h.normal))
        .map(|h| h.canonical())
        .collect();
    inequalities.sort_by(Halfspace::cmp_canonical);
    inequalities.dedup();
    Polyhedron { dim: d, hrep: Some(HRep { inequalities, equations }), vrep: poly.vrep.clone(), empty_certificate: None }
}

/// Reduced row echelon form of the equation system. Consistency is
/// assumed (callers only pass equations of nonempty sets).
fn canonical_equations(eqs: Vec<Hyperplane>) -> Vec<Hyperplane> {
    if eqs.is_empty() {
        return eqs;
    }
    let rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|e| {
            let mut r = e.normal.clone();
            r.push(e.offset.clone());
            r
        })
        .collect();
    rref(&rows)
        .0
        .into_iter()
        .map(|mut r| {
            let offset = r.pop().unwrap();
            debug_assert!(!is_zero_vec(&r), "inconsistent equations");
            Hyperplane { normal: r, offset }
        })
        .collect()
}

/// Eliminates the pivot columns of reduced-row-echelon `equations` from
/// the halfspace normal. The result may have a zero normal.
fn reduce_modulo(h: &Halfspace, equations: &[Hyperplane]) -> Halfspace {
    let mut normal = h.normal.clone();
    let mut offset = h.offset.clone();
    for e in equations {
        let pivot = e.normal.iter().position(|x| !x.is_zero()).unwrap();
        let f = normal[pivot].clone();
        if f.is_zero() {
            continue;
        }
        for (n, x) in normal.iter_mut().zip(&e.normal) {
            *n -= &f * x;
        }
        offset -= &f * &e.offset;
    }
    Halfspace { normal, offset }
}

fn constraint_lp(dim: usize, objective: Vec<Rational>, sense: Sense, ineqs: &[&Halfspace], eqs: &[Hyperplane]) -> LinearProgram {
    let mut lp = LinearProgram::new(sense, objective);
    for j in 0..dim {
        lp = lp.free(j);
    }
    for a in ineqs {
        lp = lp.constraint(a.normal.clone(), Relation::Ge, a.offset.clone());
    }
    for e in eqs {
        lp = lp.constraint(e.normal.clone(), Relation::Eq, e.offset.clone());
    }
    lp
}

/// Irredundant H-representation: implicit equalities become canonical
/// equations, every remaining inequality is certified necessary by an
/// LP, and the output is sorted by canonical normal.
pub fn remove_redundant(poly: &Polyhedron) -> Polyhedron {
    let h = poly.hrep.as_ref().expect("remove_redundant needs an H-representation");
    let d = poly.dim;
    let all: Vec<&Halfspace> = h.inequalities.iter().collect();

    let feasibility = constraint_lp(d, vec![Rational::zero(); d], Sense::Minimize, &all, &h.equations);
    if simplex_solve(&feasibility).expect("well-formed").status == LpStatus::Infeasible {
        return Polyhedron::empty(d);
    }

    let mut implicit = Vec::new();
    let mut proper = Vec::new();
    for a in &h.inequalities {
        let lp = constraint_lp(d, a.normal.clone(), Sense::Maximize, &all, &h.equations);
        let out = simplex_solve(&lp).expect("well-formed");
        if out.status == LpStatus::Optimal && out.value.as_ref() == Some(&a.offset) {
            implicit.push(Hyperplane { normal: a.normal.clone(), offset: a.offset.clone() });
        } else {
            proper.push(a.clone());
        }
    }
    let mut equations = h.equations.clone();
    equations.extend(implicit);
    let equations = canonical_equations(equations);

    let mut candidates: Vec<Halfspace> = proper
        .iter()
        .map(|a| reduce_modulo(a, &equations))
        .filter(|a| !is_zero_vec(&a.normal))
        .map(|a| a.canonical())
        .collect();
    candidates.sort_by(Halfspace::cmp_canonical);
    candidates.dedup();

    let mut kept: Vec<bool> = vec![true; candidates.len()];
    for i in 0..candidates.len() {
        let others: Vec<&Halfspace> = candidates.iter().enumerate().filter(|&(j, _)| j != i && kept[j]).map(|(_, a)| a).collect();
        let lp = constraint_lp(d, candidates[i].normal.clone(), Sense::Minimize, &others, &equations);
        let out = simplex_solve(&lp).expect("well-formed");
        if out.status == LpStatus::Optimal && out.value.as_ref().is_some_and(|v| *v >= candidates[i].offset) {
            kept[i] = false;
        }
    }
    let inequalities = candidates.into_iter().zip(kept).filter(|(_, k)| *k).map(|(a, _)| a).collect();
    Polyhedron { dim: d, hrep: Some(HRep { inequalities, equations }), vrep: poly.vrep.clone(), empty_certificate: None }
}

/// `inner` is a subset of `outer`.
pub fn poly_contains(outer: &Polyhedron, inner: &Polyhedron) -> bool {
    assert_eq!(outer.dim, inner.dim, "dimension mismatch");
    let inner = inner.clone().complete();
    let v = inner.vrep.as_ref().unwrap();
    if v.points.is_empty() {
        return true;
    }
    let outer = outer.clone().complete();
    if outer.vrep.as_ref().unwrap().points.is_empty() {
        return false;
    }
    let h = outer.hrep.as_ref().unwrap();
    let points_ok = v.points.iter().all(|p| h.inequalities.iter().all(|a| a.contains(p)) && h.equations.iter().all(|e| e.contains(p)));
    let rays_ok = v.rays.iter().all(|r| {
        h.inequalities.iter().all(|a| !dot(&a.normal, r).is_negative()) && h.equations.iter().all(|e| dot(&e.normal, r).is_zero())
    });
    let lines_ok = v.lines.iter().all(|l| {
        h.inequalities.iter().all(|a| dot(&a.normal, l).is_zero()) && h.equations.iter().all(|e| dot(&e.normal, l).is_zero())
    });
    points_ok && rays_ok && lines_ok
}

/// Set equality by mutual containment.
pub fn poly_equal(a: &Polyhedron, b: &Polyhedron) -> bool {
    poly_contains(a, b) && poly_contains(b, a)
}

/// Normalizes a direction for display and comparison.
pub fn canonical_direction(v: &[Rational]) -> Vec<Rational> {
    normalize_first(v)
}
