//! Double description for polyhedral cones `{x : A x >= 0, E x = 0}`.
//!
//! Starts from the whole space (lineality = identity basis) and inserts
//! constraints one at a time in the given order: equations first, then
//! inequalities. Adjacency of two extreme rays is decided by the rank
//! of the constraints active at both.

use num_traits::{One, Signed, Zero};

use crate::linalg::rank;
use crate::scalar::{dot, is_zero_vec, primitive, scale, sub, Rational};

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<Rational>,
    /// Sorted indices of processed constraints that vanish on `v`.
    zeros: Vec<usize>,
}

/// Generators of a cone: `cone(rays) + span(lineality)`.
#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub rays: Vec<Vec<Rational>>,
    pub lineality: Vec<Vec<Rational>>,
}

pub(crate) fn cone_generators(dim: usize, inequalities: &[Vec<Rational>], equations: &[Vec<Rational>]) -> ConeGenerators {
    let constraints: Vec<(&Vec<Rational>, bool)> = equations
        .iter()
        .map(|e| (e, true))
        .chain(inequalities.iter().map(|a| (a, false)))
        .collect();

    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut v = vec![Rational::zero(); dim];
            v[i] = Rational::one();
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, &(a, is_eq)) in constraints.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lineality.remove(pos);
            let mut al = dot(a, &l);
            if al.is_negative() {
                l = l.iter().map(|x| -x.clone()).collect();
                al = -al;
            }
            for other in lineality.iter_mut() {
                let f = dot(a, other) / &al;
                if !f.is_zero() {
                    *other = primitive(&sub(other, &scale(&l, &f)));
                }
            }
            for ray in rays.iter_mut() {
                let f = dot(a, &ray.v) / &al;
                if !f.is_zero() {
                    ray.v = primitive(&sub(&ray.v, &scale(&l, &f)));
                }
                ray.zeros.push(k);
            }
            if !is_eq {
                rays.push(Ray { v: primitive(&l), zeros: (0..k).collect() });
            }
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let target_rank = dim - lineality.len();
        let mut next: Vec<Ray> = Vec::new();
        for (ray, s) in rays.iter().zip(&values) {
            if s.is_zero() {
                let mut zeros = ray.zeros.clone();
                zeros.push(k);
                next.push(Ray { v: ray.v.clone(), zeros });
            } else if s.is_positive() && !is_eq {
                next.push(ray.clone());
            }
        }
        for (p, sp) in rays.iter().zip(&values).filter(|(_, s)| s.is_positive()) {
            for (n, sn) in rays.iter().zip(&values).filter(|(_, s)| s.is_negative()) {
                let common = intersect(&p.zeros, &n.zeros);
                if target_rank < 2 || common.len() + 2 < target_rank {
                    continue;
                }
                let active: Vec<Vec<Rational>> = common.iter().map(|&i| constraints[i].0.clone()).collect();
                if rank(&active) != target_rank - 2 {
                    continue;
                }
                let v: Vec<Rational> = p.v.iter().zip(&n.v).map(|(x, y)| sp * y - sn * x).collect();
                let mut zeros = common;
                zeros.push(k);
                next.push(Ray { v: primitive(&v), zeros });
            }
        }
        rays = next;
    }

    ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).filter(|v| !is_zero_vec(v)).collect(),
        lineality,
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rvec;

    #[test]
    fn orthant_cone() {
        let g = cone_generators(2, &[rvec(&[1, 0]), rvec(&[0, 1])], &[]);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays;
        rays.sort();
        assert_eq!(rays, vec![rvec(&[0, 1]), rvec(&[1, 0])]);
    }

    #[test]
    fn halfplane_keeps_a_line() {
        let g = cone_generators(2, &[rvec(&[1, 0])], &[]);
        assert_eq!(g.rays, vec![rvec(&[1, 0])]);
        assert_eq!(g.lineality.len(), 1);
    }

    #[test]
    fn square_pyramid_cone() {
        // Homogenized unit square: 0 <= x, y <= lambda.
        let ineqs = vec![rvec(&[0, 0, 1]), rvec(&[1, 0, 0]), rvec(&[0, 1, 0]), rvec(&[-1, 0, 1]), rvec(&[0, -1, 1])];
        let g = cone_generators(3, &ineqs, &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
    }
}
