//! Point clouds and quantile levels.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{ceil_int, dot, Rational};

/// A finite collection of points in `R^d`. Duplicates are kept: counts
/// in the quantile definition are multiset counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataCloud {
    points: Vec<Vec<Rational>>,
    dim: usize,
}

impl DataCloud {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::EmptyData);
        }
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Ok(Self { points, dim })
    }

    /// Univariate cloud from scalar values.
    pub fn from_scalars(values: Vec<Rational>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies `f` to every point, keeping order.
    pub fn map_points(&self, f: impl Fn(&[Rational]) -> Vec<Rational>) -> Result<Self> {
        Self::new(self.points.iter().map(|p| f(p)).collect())
    }
}

/// The scalar data set `w^T X`, aligned with the point order of `X`.
pub fn project_data(data: &DataCloud, w: &[Rational]) -> Result<Vec<Rational>> {
    if w.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: w.len() });
    }
    Ok(data.points().iter().map(|x| dot(w, x)).collect())
}

/// A level `p` in `(0, 1)` paired with the sample size it is used with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantileLevel {
    p: Rational,
    n: usize,
    ceil_np: usize,
}

impl QuantileLevel {
    pub fn new(p: Rational, n: usize) -> Result<Self> {
        if !p.is_positive() || p >= Rational::one() {
            return Err(Error::LevelOutOfRange(p.to_string()));
        }
        if n == 0 {
            return Err(Error::EmptyData);
        }
        let np = &p * Rational::from_integer(BigInt::from(n));
        let ceil_np = ceil_int(&np).to_usize().expect("ceil(Np) <= N");
        Ok(Self { p, n, ceil_np })
    }

    /// Like [`QuantileLevel::new`], but rejects levels with `Np` integral.
    pub fn new_valid(p: Rational, n: usize) -> Result<Self> {
        let level = Self::new(p, n)?;
        level.require_valid()?;
        Ok(level)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ceil(N p)`, always in `1..=N`.
    pub fn ceil_np(&self) -> usize {
        self.ceil_np
    }

    pub fn np(&self) -> Rational {
        &self.p * Rational::from_integer(BigInt::from(self.n))
    }

    /// True when `N p` is not an integer, the hypothesis under which the
    /// phi minimizer is unique.
    pub fn is_valid(&self) -> bool {
        !self.np().is_integer()
    }

    pub fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::IntegralNp(self.np().to_string()))
        }
    }

    /// Level for `(k - 1/2) / N`, which has `ceil(Np) = k` and `Np` non-integral.
    pub fn for_count(k: usize, n: usize) -> Result<Self> {
        let p = (Rational::from_integer(BigInt::from(k)) - Rational::new(1.into(), 2.into()))
            / Rational::from_integer(BigInt::from(n));
        Self::new(p, n)
    }

    pub(crate) fn one_minus_p(&self) -> Rational {
        Rational::one() - &self.p
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch { expected: self.n, found: n });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat, rvec};
    use proptest::prelude::*;

    fn cloud(points: &[&[i64]]) -> DataCloud {
        DataCloud::new(points.iter().map(|p| rvec(p)).collect()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let x = cloud(&[&[0, 0], &[1, 1]]);
        assert_eq!(project_data(&x, &rvec(&[1, 0])).unwrap(), rvec(&[0, 1]));
        let x = cloud(&[&[1, 2]]);
        assert_eq!(project_data(&x, &rvec(&[0, 0])).unwrap(), rvec(&[0]));
        let x = cloud(&[&[1, 2], &[3, 4]]);
        assert_eq!(project_data(&x, &rvec(&[1, -1])).unwrap(), rvec(&[-1, -1]));
        assert!(matches!(
            project_data(&x, &rvec(&[1])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn cloud_validation() {
        assert_eq!(DataCloud::new(vec![]), Err(Error::EmptyData));
        assert_eq!(DataCloud::new(vec![vec![]]), Err(Error::EmptyData));
        assert!(DataCloud::new(vec![rvec(&[1, 2]), rvec(&[1])]).is_err());
        let dup = cloud(&[&[1, 1], &[1, 1]]);
        assert_eq!(dup.len(), 2);
    }

    #[test]
    fn level_bounds_and_ceiling() {
        assert!(QuantileLevel::new(rat(0), 3).is_err());
        assert!(QuantileLevel::new(rat(1), 3).is_err());
        let l = QuantileLevel::new(frac(9, 10), 3).unwrap();
        assert_eq!(l.ceil_np(), 3);
        assert!(l.is_valid());
        let l = QuantileLevel::new(frac(1, 2), 4).unwrap();
        assert_eq!(l.ceil_np(), 2);
        assert!(!l.is_valid());
        assert!(matches!(l.require_valid(), Err(Error::IntegralNp(_))));
        assert!(QuantileLevel::new_valid(frac(1, 2), 5).is_ok());
    }

    #[test]
    fn count_levels() {
        for n in 1..8 {
            for k in 1..=n {
                let l = QuantileLevel::for_count(k, n).unwrap();
                assert_eq!(l.ceil_np(), k);
                assert!(l.is_valid());
            }
        }
    }

    proptest! {
        #[test]
        fn projection_is_homogeneous(
            pts in proptest::collection::vec(proptest::collection::vec(-20i64..20, 3), 1..8),
            w in proptest::collection::vec(-5i64..5, 3),
            an in -7i64..7, ad in 1i64..5,
        ) {
            let x = DataCloud::new(pts.iter().map(|p| rvec(p)).collect()).unwrap();
            let w = rvec(&w);
            let alpha = frac(an, ad);
            let scaled: Vec<Rational> = w.iter().map(|v| v * &alpha).collect();
            let lhs = project_data(&x, &scaled).unwrap();
            let rhs: Vec<Rational> = project_data(&x, &w).unwrap().iter().map(|v| v * &alpha).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
