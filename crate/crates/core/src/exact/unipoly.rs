//! Univariate polynomials over an exact scalar type and their resultants.

use super::matrix::{determinant, Scalar};
use crate::error::{Error, Result};

/// Dense polynomial, stored with ascending coefficients and no leading zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<T: Scalar> {
    coeffs: Vec<T>,
    /// Template scalar used to build zeros and ones.
    unit: T,
}

impl<T: Scalar> UniPoly<T> {
    /// From ascending coefficients; `unit` is any scalar of the right family.
    pub fn new(mut coeffs: Vec<T>, unit: &T) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero_value) {
            coeffs.pop();
        }
        UniPoly {
            coeffs,
            unit: unit.one_like(),
        }
    }

    /// From coefficients listed highest degree first.
    pub fn from_desc(mut coeffs: Vec<T>, unit: &T) -> Self {
        coeffs.reverse();
        Self::new(coeffs, unit)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficients highest degree first.
    pub fn coeffs_desc(&self) -> Vec<T> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.unit.zero_like())
    }

    pub fn unit(&self) -> &T {
        &self.unit
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(self.unit.zero_like(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new(), &self.unit);
        }
        let mut out = vec![self.unit.zero_like(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out, &self.unit)
    }

    /// The `(deg P + deg Q)`-square Sylvester matrix.
    pub fn sylvester(&self, q: &Self) -> Vec<Vec<T>> {
        let (m, n) = (self.degree().unwrap_or(0), q.degree().unwrap_or(0));
        let size = m + n;
        let zero = self.unit.zero_like();
        let p_desc = self.coeffs_desc();
        let q_desc = q.coeffs_desc();
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![zero.clone(); size];
            for (j, c) in p_desc.iter().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![zero.clone(); size];
            for (j, c) in q_desc.iter().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        rows
    }
}

/// Resultant as the Sylvester determinant, computed by Bareiss elimination.
pub fn resultant<T: Scalar>(p: &UniPoly<T>, q: &UniPoly<T>) -> Result<T> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(determinant(&p.sylvester(q), &p.unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn poly(desc: &[i64]) -> UniPoly<BigRational> {
        UniPoly::from_desc(desc.iter().map(|&c| rat(c)).collect(), &rat(1))
    }

    #[test]
    fn small_resultants() {
        assert_eq!(resultant(&poly(&[1, 0, -2]), &poly(&[1, -1])).unwrap(), rat(-1));
        assert_eq!(resultant(&poly(&[1, -5]), &poly(&[1, -3])).unwrap(), rat(2));
        assert_eq!(resultant(&poly(&[2, -8, 6]), &poly(&[1, -2])).unwrap(), rat(-2));
        assert_eq!(resultant(&poly(&[1, 0, -2, 0]), &poly(&[1, -1])).unwrap(), rat(1));
        // constants: Res(P, c) = c^deg P
        assert_eq!(resultant(&poly(&[1, 0, 1]), &poly(&[3])).unwrap(), rat(9));
        assert_eq!(
            resultant(&poly(&[]), &poly(&[1])),
            Err(Error::ZeroPolynomial)
        );
    }

    fn arb_poly() -> impl Strategy<Value = Vec<i64>> {
        (1usize..5).prop_flat_map(|d| {
            (1i64..6, prop::collection::vec(-9i64..10, d)).prop_map(|(lc, rest)| {
                let mut v = vec![lc];
                v.extend(rest);
                v
            })
        })
    }

    proptest! {
        #[test]
        fn multiplicative_in_first_argument(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let (p1, p2, q) = (poly(&a), poly(&b), poly(&c));
            let lhs = resultant(&p1.mul(&p2), &q).unwrap();
            let rhs = resultant(&p1, &q).unwrap() * resultant(&p2, &q).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn swapping_arguments_flips_sign_by_degree_parity(a in arb_poly(), c in arb_poly()) {
            let (p, q) = (poly(&a), poly(&c));
            let s = if (p.degree().unwrap() * q.degree().unwrap()) % 2 == 0 { rat(1) } else { rat(-1) };
            prop_assert_eq!(resultant(&p, &q).unwrap(), s * resultant(&q, &p).unwrap());
        }
    }
}
