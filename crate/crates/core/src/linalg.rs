//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot column of each.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows * x = 0}` for a matrix with `cols` columns.
pub fn null_space(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { rref(rows) };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{dot, rvec};

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(rank(&[rvec(&[1, 0]), rvec(&[0, 1])]), 2);
        assert_eq!(rank(&[rvec(&[1, 2]), rvec(&[2, 4])]), 1);
        assert_eq!(rank(&[rvec(&[0, 0])]), 0);
    }

    #[test]
    fn null_space_is_annihilated() {
        let a = vec![rvec(&[1, 2, 3]), rvec(&[2, 4, 7])];
        let ns = null_space(&a, 3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for row in &a {
                assert!(dot(row, v).is_zero());
            }
        }
        assert_eq!(null_space(&[], 2).len(), 2);
    }
}
