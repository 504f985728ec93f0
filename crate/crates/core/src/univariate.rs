//! Scalar quantiles, the check-loss objective phi and the scalarized
//! linear program.
//!
//! For a sample `S` and level `p`:
//!
//! * the empirical lower quantile is the smallest sample value whose
//!   at-or-below count reaches `ceil(N p)`;
//! * `phi(t) = sum_i p (x_i - t)^+ + (1 - p) (x_i - t)^-` is convex and
//!   piecewise linear, minimized uniquely at that quantile when `N p` is
//!   not an integer;
//! * `max sum_i a_i (u_i - v_i)` over `0 <= u <= p`, `0 <= v <= 1 - p`,
//!   `sum u = sum v` is the LP dual of `min phi`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::data::{project_data, DataCloud, QuantileLevel};
use crate::error::Result;
use crate::scalar::{add, scale, Rational};

/// `min { x in S : #{y in S : y <= x} >= ceil(N p) }`.
///
/// Works for every `p` in `(0, 1)`, whether or not `N p` is integral.
pub fn quantile_direct(sample: &[Rational], level: &QuantileLevel) -> Result<Rational> {
    level.check_n(sample.len())?;
    let mut sorted: Vec<&Rational> = sample.iter().collect();
    sorted.sort();
    // The k-th order statistic is the smallest value with count >= k.
    Ok(sorted[level.ceil_np() - 1].clone())
}

/// Evaluates `phi_S(t)`.
pub fn phi_eval(sample: &[Rational], level: &QuantileLevel, t: &Rational) -> Rational {
    let q = level.one_minus_p();
    sample.iter().fold(Rational::zero(), |acc, x| {
        let diff = x - t;
        if diff.is_positive() {
            acc + level.p() * diff
        } else {
            acc - &q * diff
        }
    })
}

/// Right directional derivative `phi'(t, 1) = #{x <= t} - p N`.
pub fn phi_directional_derivative(sample: &[Rational], level: &QuantileLevel, t: &Rational) -> Rational {
    let below = sample.iter().filter(|x| *x <= t).count();
    Rational::from_integer(BigInt::from(below)) - level.p() * Rational::from_integer(BigInt::from(sample.len()))
}

/// Minimizer and minimum of phi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMinimum {
    pub t: Rational,
    pub value: Rational,
}

/// The unique minimizer of phi and its value, found by sorting.
pub fn minimize_phi(sample: &[Rational], level: &QuantileLevel) -> Result<PhiMinimum> {
    level.require_valid()?;
    let t = quantile_direct(sample, level)?;
    let value = phi_eval(sample, level, &t);
    Ok(PhiMinimum { t, value })
}

/// An optimal `(u, v)` of the scalarized program together with its image
/// point `y = sum_i x_i (u_i - v_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarizedSolution {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
    pub value: Rational,
    pub support_point: Vec<Rational>,
}

/// Solves the scalarized program for data `w^T X` by a greedy rule.
///
/// The budget `s = sum u = sum v` grows while the largest still
/// unsaturated value (u side, cap `p` each) exceeds the smallest still
/// unsaturated value (v side, cap `1 - p` each). Ties go to the lower
/// data index.
pub fn solve_scalarized_lp(data: &DataCloud, level: &QuantileLevel, w: &[Rational]) -> Result<ScalarizedSolution> {
    let values = project_data(data, w)?;
    level.check_n(values.len())?;
    let (u, v, value) = greedy_allocation(&values, level);
    let mut support_point = vec![Rational::zero(); data.dim()];
    for (i, x) in data.points().iter().enumerate() {
        let weight = &u[i] - &v[i];
        if !weight.is_zero() {
            support_point = add(&support_point, &scale(x, &weight));
        }
    }
    Ok(ScalarizedSolution { u, v, value, support_point })
}

fn greedy_allocation(values: &[Rational], level: &QuantileLevel) -> (Vec<Rational>, Vec<Rational>, Rational) {
    let n = values.len();
    let cap_u = level.p().clone();
    let cap_v = level.one_minus_p();

    let mut desc: Vec<usize> = (0..n).collect();
    desc.sort_by(|&a, &b| match values[b].cmp(&values[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    let mut asc: Vec<usize> = (0..n).collect();
    asc.sort_by(|&a, &b| match values[a].cmp(&values[b]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });

    let mut u = vec![Rational::zero(); n];
    let mut v = vec![Rational::zero(); n];
    let mut value = Rational::zero();
    let (mut iu, mut iv) = (0, 0);
    while iu < n && iv < n {
        let top = desc[iu];
        let bottom = asc[iv];
        let gain = &values[top] - &values[bottom];
        if !gain.is_positive() {
            break;
        }
        let room_u = &cap_u - &u[top];
        let room_v = &cap_v - &v[bottom];
        let step = room_u.clone().min(room_v.clone());
        u[top] += &step;
        v[bottom] += &step;
        value += gain * &step;
        if step == room_u {
            iu += 1;
        }
        if step == room_v {
            iv += 1;
        }
    }
    (u, v, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::{frac, rat, rvec};
    use proptest::prelude::*;

    fn level(p: Rational, n: usize) -> QuantileLevel {
        QuantileLevel::new(p, n).unwrap()
    }

    #[test]
    fn quantile_examples() {
        let s = rvec(&[1, 2, 3, 4, 5]);
        assert_eq!(quantile_direct(&s, &level(frac(1, 2), 5)).unwrap(), rat(3));
        let s = rvec(&[3, 1, 2]);
        assert_eq!(quantile_direct(&s, &level(frac(9, 10), 3)).unwrap(), rat(3));
        let s = rvec(&[1, 1, 2]);
        assert_eq!(quantile_direct(&s, &level(frac(1, 2), 3)).unwrap(), rat(1));
    }

    #[test]
    fn quantile_rejects_wrong_size() {
        let s = rvec(&[1, 2]);
        assert!(quantile_direct(&s, &level(frac(1, 2), 3)).is_err());
    }

    #[test]
    fn phi_examples() {
        let s = rvec(&[0, 1]);
        let l = level(frac(1, 4), 2);
        assert_eq!(phi_eval(&s, &l, &rat(0)), frac(1, 4));
        assert_eq!(phi_eval(&s, &l, &rat(1)), frac(3, 4));
        let single = rvec(&[5]);
        assert_eq!(phi_eval(&single, &level(frac(2, 7), 1), &rat(5)), rat(0));
    }

    #[test]
    fn derivative_examples() {
        let s = rvec(&[1, 2, 3]);
        let l = level(frac(1, 2), 3);
        assert_eq!(phi_directional_derivative(&s, &l, &rat(2)), frac(1, 2));
        assert_eq!(phi_directional_derivative(&s, &l, &rat(0)), frac(-3, 2));
        let s = rvec(&[0, 1]);
        assert_eq!(phi_directional_derivative(&s, &level(frac(1, 4), 2), &rat(0)), frac(1, 2));
    }

    /// Brute-force minimum of phi over data values and midpoints; the
    /// function is piecewise linear with breaks at data values only.
    fn grid_min(sample: &[Rational], l: &QuantileLevel) -> (Rational, Rational) {
        let mut candidates: Vec<Rational> = sample.to_vec();
        for a in sample {
            for b in sample {
                candidates.push((a + b) / rat(2));
            }
        }
        candidates
            .into_iter()
            .map(|t| (phi_eval(sample, l, &t), t))
            .min()
            .map(|(v, t)| (t, v))
            .unwrap()
    }

    #[test]
    fn minimize_examples() {
        let s = rvec(&[0, 1]);
        let l = level(frac(1, 4), 2);
        let m = minimize_phi(&s, &l).unwrap();
        assert_eq!((m.t.clone(), m.value.clone()), (rat(0), frac(1, 4)));
        assert_eq!(grid_min(&s, &l), (rat(0), frac(1, 4)));

        let m = minimize_phi(&rvec(&[1, 2, 3, 4, 5]), &level(frac(1, 2), 5)).unwrap();
        assert_eq!(m.t, rat(3));
        let m = minimize_phi(&rvec(&[7]), &level(frac(1, 3), 1)).unwrap();
        assert_eq!((m.t, m.value), (rat(7), rat(0)));
    }

    #[test]
    fn minimize_rejects_integral_np() {
        let err = minimize_phi(&rvec(&[1, 2, 3, 4]), &level(frac(1, 2), 4)).unwrap_err();
        assert!(matches!(err, Error::IntegralNp(_)));
    }

    #[test]
    fn scalarized_examples() {
        let x = DataCloud::from_scalars(rvec(&[0, 1])).unwrap();
        let l = level(frac(1, 4), 2);
        let sol = solve_scalarized_lp(&x, &l, &rvec(&[1])).unwrap();
        assert_eq!(sol.u, vec![rat(0), frac(1, 4)]);
        assert_eq!(sol.v, vec![frac(1, 4), rat(0)]);
        assert_eq!(sol.value, frac(1, 4));

        let x2 = DataCloud::new(vec![rvec(&[0, 0]), rvec(&[1, 1])]).unwrap();
        let sol = solve_scalarized_lp(&x2, &level(frac(1, 3), 2), &rvec(&[0, 0])).unwrap();
        assert!(sol.value.is_zero());
        assert!(sol.u.iter().chain(&sol.v).all(Zero::is_zero));

        let l = level(frac(3, 4), 2);
        let sol = solve_scalarized_lp(&x2, &l, &[frac(1, 2), frac(1, 2)]).unwrap();
        assert_eq!(sol.value, frac(1, 4));
        let g = minimize_phi(&project_data(&x2, &[frac(1, 2), frac(1, 2)]).unwrap(), &l).unwrap();
        assert_eq!(sol.value, g.value);
    }

    fn small_sample() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-20i64..20, 1..12)
    }

    fn valid_level(n: usize, num: u32, den: u32) -> Option<QuantileLevel> {
        let p = frac(num as i64, den as i64);
        QuantileLevel::new_valid(p, n).ok()
    }

    proptest! {
        #[test]
        fn greedy_is_feasible_and_dual_to_phi(
            pts in proptest::collection::vec(proptest::collection::vec(-9i64..9, 2), 1..10),
            w in proptest::collection::vec(-4i64..4, 2),
            num in 1u32..30, den in 2u32..31,
        ) {
            prop_assume!(num < den);
            let n = pts.len();
            let Some(l) = valid_level(n, num, den) else { return Ok(()); };
            let x = DataCloud::new(pts.iter().map(|p| rvec(p)).collect()).unwrap();
            let w = rvec(&w);
            let sol = solve_scalarized_lp(&x, &l, &w).unwrap();
            let su: Rational = sol.u.iter().sum();
            let sv: Rational = sol.v.iter().sum();
            prop_assert_eq!(su, sv);
            for (a, b) in sol.u.iter().zip(&sol.v) {
                prop_assert!(!a.is_negative() && a <= l.p());
                prop_assert!(!b.is_negative() && *b <= l.one_minus_p());
            }
            let proj = project_data(&x, &w).unwrap();
            let direct: Rational = proj.iter().zip(sol.u.iter().zip(&sol.v)).map(|(a, (u, v))| a * (u - v)).sum();
            prop_assert_eq!(&direct, &sol.value);
            let g = minimize_phi(&proj, &l).unwrap();
            prop_assert_eq!(sol.value, g.value);
        }

        #[test]
        fn support_point_bounds_every_scalarization(
            pts in proptest::collection::vec(proptest::collection::vec(-9i64..9, 2), 1..10),
            w in proptest::collection::vec(-4i64..4, 2),
            w2 in proptest::collection::vec(-4i64..4, 2),
            num in 1u32..30, den in 2u32..31,
        ) {
            prop_assume!(num < den);
            let Some(l) = valid_level(pts.len(), num, den) else { return Ok(()); };
            let x = DataCloud::new(pts.iter().map(|p| rvec(p)).collect()).unwrap();
            let y = solve_scalarized_lp(&x, &l, &rvec(&w)).unwrap().support_point;
            let w2 = rvec(&w2);
            let g2 = minimize_phi(&project_data(&x, &w2).unwrap(), &l).unwrap().value;
            prop_assert!(g2 >= crate::scalar::dot(&w2, &y));
        }

        #[test]
        fn derivative_sign_pattern(s in small_sample(), num in 1u32..30, den in 2u32..31) {
            prop_assume!(num < den);
            let Some(l) = valid_level(s.len(), num, den) else { return Ok(()); };
            let s = rvec(&s);
            let t = minimize_phi(&s, &l).unwrap().t;
            prop_assert!(phi_directional_derivative(&s, &l, &t).is_positive());
            for x in s.iter().filter(|x| **x < t) {
                prop_assert!(phi_directional_derivative(&s, &l, x).is_negative());
            }
            let (gt, gv) = grid_min(&s, &l);
            prop_assert_eq!(gt, t.clone());
            prop_assert_eq!(gv, phi_eval(&s, &l, &t));
        }

        #[test]
        fn phi_is_convex(
            s in small_sample(), num in 1u32..30, den in 2u32..31,
            t1 in -30i64..30, t2 in -30i64..30, ln in 1i64..9,
        ) {
            prop_assume!(num < den && t1 < t2);
            let l = level(frac(num as i64, den as i64), s.len());
            let s = rvec(&s);
            let lam = frac(ln, 10);
            let (a, b) = (rat(t1), rat(t2));
            let mid = &lam * &a + (rat(1) - &lam) * &b;
            let lhs = phi_eval(&s, &l, &mid);
            let rhs = &lam * phi_eval(&s, &l, &a) + (rat(1) - &lam) * phi_eval(&s, &l, &b);
            prop_assert!(lhs <= rhs);
            prop_assert!(!phi_eval(&s, &l, &a).is_negative());
        }
    }
}
