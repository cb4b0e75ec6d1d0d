//! Exact dense linear algebra over a field: fraction-free determinants, ranks and
//! linear solves.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field-like scalars with exact arithmetic.
///
/// Constructors take `self` as a template so that elements carrying a field
/// handle can produce their own zero and one.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Division by a nonzero scalar.
    fn div_ref(&self, o: &Self) -> Self;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
}

/// Determinant by Bareiss elimination. `one` fixes the scalar family for the empty matrix.
pub fn determinant<T: Scalar>(m: &[Vec<T>], one: &T) -> T {
    let n = m.len();
    if n == 0 {
        return one.one_like();
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = one.one_like();
    for k in 0..n - 1 {
        if a[k][k].is_zero_value() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero_value()) else {
                return one.zero_like();
            };
            a.swap(k, r);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul_ref(&a[k][k]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                a[i][j] = v.div_ref(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg_ref()
    } else {
        d
    }
}

/// Row echelon form by Gaussian elimination; returns the pivot columns.
fn echelon<T: Scalar>(a: &mut [Vec<T>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero_value()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].one_like().div_ref(&a[r][c]);
        for j in c..cols {
            a[r][j] = a[r][j].mul_ref(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero_value() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = a[i][j].sub_ref(&f.mul_ref(&a[r][j]));
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(m: &[Vec<T>]) -> usize {
    let mut a = m.to_vec();
    echelon(&mut a).len()
}

/// Solves `A y = b` for `A` with full column rank. Returns `None` when the system
/// is inconsistent.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    assert_eq!(pivots.len(), cols, "solve needs full column rank");
    Some((0..cols).map(|i| aug[i][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) + 1*(1*-2 - 0) = -52 - 2
        assert_eq!(determinant(&a, &rat(1)), rat(-54));
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&b, &rat(1)), rat(-1));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&singular, &rat(1)), rat(0));
    }

    #[test]
    fn rank_and_solve() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(rank(&a), 2);
        let b = vec![rat(3), rat(6), rat(1)];
        assert_eq!(solve(&a, &b), Some(vec![rat(1), rat(1)]));
        let bad = vec![rat(3), rat(7), rat(1)];
        assert_eq!(solve(&a, &bad), None);
        let half = m(&[&[2]]);
        assert_eq!(solve(&half, &[rat(1)]), Some(vec![rat_frac(1, 2)]));
    }
}
