//! The geometric dual of the quantile vector linear program, solved by
//! outer approximation.
//!
//! Points of the dual image live in `(eta, mu)`-space, `eta` in
//! `R^{d-1}` and `mu` in `R`. For `w` in the basis `B+` of the dual cone,
//! `eta = sign(c_d) (w_1, ..., w_{d-1})` and `mu = phi_{w^T X}(t)`. The
//! extended image `D = D[T] + K` (with `K = {0} x R_+`) is the epigraph
//! over `eta(B+)` of the scalarization value `g(w) = min_t phi_{w^T X}(t)`,
//! a convex piecewise-linear function. Its vertices give the finitely many
//! halfspaces that cut out the quantile region.

use num_traits::{One, Signed, Zero};

use crate::cone::DualConeBasis;
use crate::data::{project_data, DataCloud, QuantileLevel};
use crate::error::{Error, Result};
use crate::polyhedra::{hrep_to_vrep, Halfspace, Polyhedron};
use crate::scalar::{dot, lex_cmp, Rational};
use crate::univariate::{minimize_phi, quantile_direct, solve_scalarized_lp};

/// A point `(eta, mu)` of the dual objective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualImagePoint {
    pub eta: Vec<Rational>,
    pub mu: Rational,
}

impl DualImagePoint {
    fn from_coords(v: &[Rational]) -> Self {
        let (mu, eta) = v.split_last().expect("nonempty point");
        Self { eta: eta.to_vec(), mu: mu.clone() }
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut v = self.eta.clone();
        v.push(self.mu.clone());
        v
    }
}

/// One element `(w, t)` of the irredundant optimal dual solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualEntry {
    pub w: Vec<Rational>,
    pub t: Rational,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BensonStats {
    pub rounds: usize,
    pub cuts: usize,
    pub scalarizations: usize,
}

/// A supporting halfspace of the dual image added during the run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub round: usize,
    pub halfspace: Halfspace,
    /// Outer vertex that was separated.
    pub trigger: DualImagePoint,
    /// Image point of the scalarized program that defines the cut.
    pub support_point: Vec<Rational>,
}

/// The irredundant optimal solution of the dual problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution {
    /// Sorted lexicographically by `w` (external coordinates).
    pub entries: Vec<DualEntry>,
    /// `D(w, t)` for each entry, aligned with `entries`.
    pub image_points: Vec<DualImagePoint>,
    /// The extended dual image, both representations.
    pub dual_image: Polyhedron,
    pub stats: BensonStats,
    pub cuts: Vec<Cut>,
    /// Every outer vertex confirmed to lie on the dual image, with its round.
    pub confirmed: Vec<(usize, DualImagePoint)>,
}

/// The affine map `eta -> w` for a basis: `w = base + sum_j eta_j dirs[j]`
/// in external coordinates.
#[derive(Debug, Clone)]
struct EtaMap {
    base: Vec<Rational>,
    dirs: Vec<Vec<Rational>>,
    sign: Rational,
}

impl EtaMap {
    fn new(basis: &DualConeBasis) -> Self {
        let c = basis.internal_c();
        let d = c.len();
        let last = c[d - 1].clone();
        let sign = if last.is_positive() { Rational::one() } else { -Rational::one() };
        let mut base = vec![Rational::zero(); d];
        base[d - 1] = last.recip();
        let dirs = (0..d - 1)
            .map(|j| {
                let mut m = vec![Rational::zero(); d];
                m[j] = sign.clone();
                m[d - 1] = -(&c[j] * &sign) / &last;
                basis.to_external(&m)
            })
            .collect();
        Self { base: basis.to_external(&base), dirs, sign }
    }

    fn w_of(&self, eta: &[Rational]) -> Vec<Rational> {
        let mut w = self.base.clone();
        for (e, m) in eta.iter().zip(&self.dirs) {
            if e.is_zero() {
                continue;
            }
            for (wi, mi) in w.iter_mut().zip(m) {
                *wi += e * mi;
            }
        }
        w
    }

    /// Halfspace `{(eta, mu) : mu >= w(eta)^T y}`.
    fn cut(&self, y: &[Rational]) -> Halfspace {
        let mut normal: Vec<Rational> = self.dirs.iter().map(|m| -dot(m, y)).collect();
        normal.push(Rational::one());
        Halfspace { normal, offset: dot(&self.base, y) }
    }
}

/// `eta` coordinates of `w` (external coordinates). Empty when `d = 1`.
pub fn eta_of(w: &[Rational], basis: &DualConeBasis) -> Vec<Rational> {
    let map = EtaMap::new(basis);
    let wi = basis.to_internal(w);
    wi[..wi.len() - 1].iter().map(|x| x * &map.sign).collect()
}

/// The unique `w` with `c^T w = 1` whose `eta` coordinates are `eta`.
pub fn w_of(eta: &[Rational], basis: &DualConeBasis) -> Vec<Rational> {
    EtaMap::new(basis).w_of(eta)
}

/// `eta(B+) x {mu >= 0}`: the starting outer approximation of the dual
/// image. Its recession cone is `K`.
pub fn initial_outer(basis: &DualConeBasis) -> Result<Polyhedron> {
    let map = EtaMap::new(basis);
    let d = basis.dim();
    let mut inequalities = Vec::new();
    for g in basis.cone().generators() {
        let mut normal: Vec<Rational> = map.dirs.iter().map(|m| dot(g, m)).collect();
        normal.push(Rational::zero());
        let offset = -dot(g, &map.base);
        match Halfspace::new(normal, offset.clone()) {
            Some(h) => inequalities.push(h),
            None if offset.is_positive() => return Err(Error::EmptyBasis),
            None => {}
        }
    }
    let mut floor = vec![Rational::zero(); d];
    floor[d - 1] = Rational::one();
    inequalities.push(Halfspace { normal: floor, offset: Rational::zero() });
    let outer = hrep_to_vrep(&Polyhedron::from_hrep(d, inequalities, Vec::new()));
    if outer.is_empty() {
        return Err(Error::EmptyBasis);
    }
    Ok(outer)
}

/// Computes the irredundant optimal solution of the dual problem.
///
/// Each round enumerates the vertices of the current outer polyhedron in
/// lexicographic order. A vertex `(eta, mu)` with `mu = g(w(eta))` is
/// confirmed; otherwise the scalarized program at `w(eta)` yields an
/// image point `y` and the cut `mu >= w(eta)^T y`, which supports the
/// dual image and separates the vertex. The run stops when every vertex
/// is confirmed, at which point the outer polyhedron equals the dual
/// image.
pub fn benson_dual_solve(data: &DataCloud, level: &QuantileLevel, basis: &DualConeBasis) -> Result<DualSolution> {
    level.require_valid()?;
    level.check_n(data.len())?;
    if data.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: data.dim() });
    }
    let map = EtaMap::new(basis);
    let d = basis.dim();
    let mut stats = BensonStats::default();
    let mut cuts: Vec<Cut> = Vec::new();
    let mut confirmed: Vec<(usize, DualImagePoint)> = Vec::new();
    let mut outer = initial_outer(basis)?;

    loop {
        stats.rounds += 1;
        let round = stats.rounds;
        let vrep = outer.vrep().expect("outer approximation carries vertices");
        debug_assert!(vrep.lines.is_empty());
        debug_assert!(vrep.rays.iter().all(|r| r[..d - 1].iter().all(Zero::is_zero) && r[d - 1].is_positive()));
        let mut vertices: Vec<Vec<Rational>> = vrep.points.clone();
        vertices.sort_by(|a, b| lex_cmp(a, b));

        let mut new_cuts: Vec<Cut> = Vec::new();
        for v in &vertices {
            let point = DualImagePoint::from_coords(v);
            let w = map.w_of(&point.eta);
            let projected = project_data(data, &w)?;
            let g = minimize_phi(&projected, level)?.value;
            stats.scalarizations += 1;
            if point.mu == g {
                confirmed.push((round, point));
                continue;
            }
            debug_assert!(point.mu < g, "outer vertex below the dual image");
            let sol = solve_scalarized_lp(data, level, &w)?;
            debug_assert_eq!(sol.value, g, "scalarization strong duality");
            let halfspace = map.cut(&sol.support_point);
            debug_assert!(!halfspace.contains(v), "cut must separate its trigger vertex");
            if new_cuts.iter().any(|c| c.halfspace == halfspace) {
                continue;
            }
            new_cuts.push(Cut { round, halfspace, trigger: point, support_point: sol.support_point });
        }

        if new_cuts.is_empty() {
            break;
        }
        stats.cuts += new_cuts.len();
        let mut hrep = outer.hrep().expect("outer approximation carries halfspaces").clone();
        hrep.inequalities.extend(new_cuts.iter().map(|c| c.halfspace.clone()));
        cuts.extend(new_cuts);
        outer = hrep_to_vrep(&Polyhedron::from_hrep(d, hrep.inequalities, hrep.equations));
    }

    let mut paired: Vec<(DualEntry, DualImagePoint)> = outer
        .vrep()
        .unwrap()
        .points
        .iter()
        .map(|v| {
            let point = DualImagePoint::from_coords(v);
            let w = map.w_of(&point.eta);
            let projected = project_data(data, &w)?;
            let t = quantile_direct(&projected, level)?;
            Ok((DualEntry { w, t }, point))
        })
        .collect::<Result<_>>()?;
    paired.sort_by(|a, b| lex_cmp(&a.0.w, &b.0.w));
    let (entries, image_points) = paired.into_iter().unzip();

    let solution = DualSolution { entries, image_points, dual_image: outer, stats, cuts, confirmed };
    debug_assert_eq!(solution.audit(data, level), Ok(()));
    Ok(solution)
}

impl DualSolution {
    /// Re-checks the run: final vertices lie on the dual image
    /// (`mu = g(w)` exactly), entries carry the unique phi minimizer,
    /// every cut separated its trigger, and no confirmed vertex of any
    /// round violates any cut.
    pub fn audit(&self, data: &DataCloud, level: &QuantileLevel) -> std::result::Result<(), String> {
        if self.entries.is_empty() {
            return Err("no entries".into());
        }
        for (entry, point) in self.entries.iter().zip(&self.image_points) {
            let projected = project_data(data, &entry.w).map_err(|e| e.to_string())?;
            let m = minimize_phi(&projected, level).map_err(|e| e.to_string())?;
            if m.value != point.mu {
                return Err(format!("vertex {:?} not on the dual image (g = {})", point, m.value));
            }
            if m.t != entry.t {
                return Err(format!("entry t = {} but phi minimizer is {}", entry.t, m.t));
            }
        }
        for cut in &self.cuts {
            if cut.halfspace.contains(&cut.trigger.coords()) {
                return Err(format!("cut from round {} does not separate its trigger", cut.round));
            }
            for (round, p) in &self.confirmed {
                if !cut.halfspace.contains(&p.coords()) {
                    return Err(format!("cut from round {} violated by confirmed vertex of round {round}", cut.round));
                }
            }
        }
        Ok(())
    }
}

/// `{z : w^T z >= t}` for each entry, canonically scaled and sorted.
pub fn halfspaces_of(sol: &DualSolution) -> Result<Vec<Halfspace>> {
    if sol.entries.is_empty() {
        return Err(Error::EmptySolution);
    }
    let mut out: Vec<Halfspace> = sol
        .entries
        .iter()
        .map(|e| Halfspace::new(e.w.clone(), e.t.clone()).ok_or(Error::EmptySolution).map(|h| h.canonical()))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| lex_cmp(&a.normal, &b.normal).then_with(|| a.offset.cmp(&b.offset)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{make_dual_basis, validate_cone, Cone};
    use crate::polyhedra::{poly_contains, poly_equal, VRep};
    use crate::scalar::{frac, rat, rvec};

    fn basis(cone: &Cone, c: &[i64]) -> DualConeBasis {
        make_dual_basis(cone, Some(rvec(c))).unwrap()
    }

    #[test]
    fn eta_examples() {
        let b = basis(&Cone::orthant(2), &[1, 1]);
        let w = vec![frac(1, 3), frac(2, 3)];
        assert_eq!(eta_of(&w, &b), vec![frac(1, 3)]);
        assert_eq!(w_of(&[frac(1, 3)], &b), w);

        let cone = validate_cone(vec![rvec(&[1, 0]), rvec(&[1, -2])]).unwrap();
        let b = basis(&cone, &[1, -1]);
        assert!(b.contains(&rvec(&[2, 1])));
        assert_eq!(eta_of(&rvec(&[2, 1]), &b), rvec(&[-2]));
        assert_eq!(w_of(&rvec(&[-2]), &b), rvec(&[2, 1]));

        let b1 = basis(&Cone::orthant(1), &[2]);
        assert!(eta_of(&[frac(1, 2)], &b1).is_empty());
        assert_eq!(w_of(&[], &b1), vec![frac(1, 2)]);
    }

    #[test]
    fn initial_outer_examples() {
        let outer = initial_outer(&basis(&Cone::orthant(2), &[1, 1])).unwrap();
        let expected = Polyhedron::from_vrep(
            2,
            VRep { points: vec![rvec(&[0, 0]), rvec(&[1, 0])], rays: vec![rvec(&[0, 1])], lines: vec![] },
        );
        assert!(poly_equal(&outer, &expected));

        let outer = initial_outer(&basis(&Cone::orthant(1), &[1])).unwrap();
        assert_eq!(outer.vrep().unwrap().points, vec![rvec(&[0])]);
        assert_eq!(outer.vrep().unwrap().rays, vec![rvec(&[1])]);

        let outer = initial_outer(&basis(&Cone::orthant(3), &[1, 1, 1])).unwrap();
        let v = outer.vrep().unwrap();
        assert_eq!(v.points, vec![rvec(&[0, 0, 0]), rvec(&[0, 1, 0]), rvec(&[1, 0, 0])]);
        assert_eq!(v.rays, vec![rvec(&[0, 0, 1])]);
    }

    #[test]
    fn univariate_solution() {
        let x = DataCloud::from_scalars(rvec(&[1, 2, 3, 4, 5])).unwrap();
        let l = QuantileLevel::new(frac(1, 2), 5).unwrap();
        let sol = benson_dual_solve(&x, &l, &basis(&Cone::orthant(1), &[1])).unwrap();
        assert_eq!(sol.entries, vec![DualEntry { w: rvec(&[1]), t: rat(3) }]);
        // phi at 3: 1/2 (1 + 2) + 1/2 (1 + 2) = 3
        assert_eq!(sol.image_points[0].mu, rat(3));
        assert_eq!(halfspaces_of(&sol).unwrap(), vec![Halfspace { normal: rvec(&[1]), offset: rat(3) }]);
        sol.audit(&x, &l).unwrap();
    }

    #[test]
    fn two_point_orthant_solutions() {
        let x = DataCloud::new(vec![rvec(&[0, 0]), rvec(&[1, 1])]).unwrap();
        let b = basis(&Cone::orthant(2), &[1, 1]);

        let l = QuantileLevel::new(frac(3, 4), 2).unwrap();
        let sol = benson_dual_solve(&x, &l, &b).unwrap();
        assert!(sol.entries.contains(&DualEntry { w: rvec(&[1, 0]), t: rat(1) }));
        assert!(sol.entries.contains(&DualEntry { w: rvec(&[0, 1]), t: rat(1) }));
        let hs = halfspaces_of(&sol).unwrap();
        assert!(hs.contains(&Halfspace { normal: rvec(&[1, 0]), offset: rat(1) }));
        assert!(hs.contains(&Halfspace { normal: rvec(&[0, 1]), offset: rat(1) }));
        sol.audit(&x, &l).unwrap();

        let l = QuantileLevel::new(frac(1, 4), 2).unwrap();
        let sol = benson_dual_solve(&x, &l, &b).unwrap();
        for e in &sol.entries {
            assert_eq!(e.t, rat(0));
        }
    }

    #[test]
    fn rejects_integral_np_and_mismatch() {
        let x = DataCloud::new(vec![rvec(&[0, 0]), rvec(&[1, 1])]).unwrap();
        let b = basis(&Cone::orthant(2), &[1, 1]);
        let l = QuantileLevel::new(frac(1, 2), 2).unwrap();
        assert!(matches!(benson_dual_solve(&x, &l, &b), Err(Error::IntegralNp(_))));
        let b3 = basis(&Cone::orthant(3), &[1, 1, 1]);
        let l = QuantileLevel::new(frac(1, 4), 2).unwrap();
        assert!(matches!(benson_dual_solve(&x, &l, &b3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn empty_solution_is_an_error() {
        let x = DataCloud::from_scalars(rvec(&[1])).unwrap();
        let l = QuantileLevel::new(frac(1, 2), 1).unwrap();
        let mut sol = benson_dual_solve(&x, &l, &basis(&Cone::orthant(1), &[1])).unwrap();
        sol.entries.clear();
        assert_eq!(halfspaces_of(&sol), Err(Error::EmptySolution));
        assert!(sol.audit(&x, &l).is_err());
    }

    #[test]
    fn outer_approximations_shrink() {
        let x = DataCloud::new(vec![rvec(&[0, 3]), rvec(&[2, 1]), rvec(&[5, 5]), rvec(&[1, -2]), rvec(&[4, 0])]).unwrap();
        let l = QuantileLevel::new(frac(1, 3), 5).unwrap();
        let b = basis(&Cone::orthant(2), &[1, 1]);
        let sol = benson_dual_solve(&x, &l, &b).unwrap();
        sol.audit(&x, &l).unwrap();
        let mut outer = initial_outer(&b).unwrap();
        for round in 1..=sol.stats.rounds {
            let mut h = outer.hrep().unwrap().clone();
            h.inequalities.extend(sol.cuts.iter().filter(|c| c.round == round).map(|c| c.halfspace.clone()));
            let next = Polyhedron::from_hrep(2, h.inequalities, h.equations);
            assert!(poly_contains(&outer, &next));
            outer = next;
        }
        assert!(poly_equal(&outer, &sol.dual_image));
    }
}
