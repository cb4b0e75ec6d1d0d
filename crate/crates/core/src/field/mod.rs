//! Number fields `Q[t]/(f)` in the power basis and their elements.

mod element;
mod embedding;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use element::{el_arith, ArithOp, FieldElement};
pub use embedding::FieldEmbedding;

use crate::error::{Error, Result};
use crate::exact::arith::format_int_poly;
use crate::exact::find_factor;
use crate::exact::hensel::div_rem_monic;
use crate::numeric::{isolate_roots, Dyadic, RootIsolation};
use crate::places::Place;

/// Largest supported degree of a defining polynomial.
pub const MAX_DEGREE: usize = 8;

struct Inner {
    poly: Vec<BigInt>,
    roots: Mutex<Option<RootIsolation>>,
    finite_places: Mutex<BTreeMap<u64, Result<Vec<Place>>>>,
}

/// The field `Q[t]/(f)` for a monic irreducible integer polynomial `f`.
///
/// Cloning is cheap; clones share the lazily refined root cache.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl NumberField {
    /// Validates `f` (ascending integer coefficients) and builds the field.
    pub fn new(f: &[BigInt]) -> Result<Self> {
        let mut f = f.to_vec();
        while f.last().is_some_and(Zero::is_zero) {
            f.pop();
        }
        if f.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let d = f.len() - 1;
        if d == 0 {
            return Err(Error::InvalidArgument(
                "defining polynomial must have degree at least 1".into(),
            ));
        }
        if !f[d].is_one() {
            return Err(Error::NotMonic);
        }
        if d > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: d,
                limit: MAX_DEGREE,
            });
        }
        if let Some(w) = find_factor(&f) {
            // report the smaller of the two cofactors, by degree then coefficients
            let (co, _) = div_rem_monic(&f, &w);
            let key = |g: &Vec<BigInt>| (g.len(), g.iter().rev().cloned().collect::<Vec<_>>());
            let w = if key(&co) < key(&w) { co } else { w };
            return Err(Error::Reducible {
                witness: format_int_poly(&w, "t"),
            });
        }
        Ok(Self::unchecked(f))
    }

    pub fn from_i64(f: &[i64]) -> Result<Self> {
        Self::new(&f.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    /// Accepts rational coefficients, rejecting any that are not integers.
    pub fn from_rationals(f: &[BigRational]) -> Result<Self> {
        if f.iter().any(|c| !c.is_integer()) {
            return Err(Error::NonIntegerCoefficients);
        }
        Self::new(&f.iter().map(BigRational::to_integer).collect::<Vec<_>>())
    }

    /// The rationals, presented as `Q[t]/(t)`.
    pub fn rationals() -> Self {
        Self::unchecked(vec![BigInt::zero(), BigInt::one()])
    }

    fn unchecked(poly: Vec<BigInt>) -> Self {
        NumberField(Arc::new(Inner {
            poly,
            roots: Mutex::new(None),
            finite_places: Mutex::new(BTreeMap::new()),
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.poly.len() - 1
    }

    /// Defining polynomial, ascending coefficients.
    pub fn poly(&self) -> &[BigInt] {
        &self.0.poly
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// Printable identifier, the defining polynomial in `t`.
    pub fn label(&self) -> String {
        format_int_poly(&self.0.poly, "t")
    }

    /// Root disks of radius at most `2^-bits`, refined from the cached ones.
    pub fn roots(&self, bits: u32, cap: u32) -> Result<RootIsolation> {
        let target = Dyadic::pow2(-i64::from(bits));
        let mut guard = self.0.roots.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(cached) = guard.as_ref() {
            if cached.max_radius() <= target {
                return Ok(cached.clone());
            }
        }
        let fresh = isolate_roots(&self.0.poly, &target, cap, guard.as_ref())?;
        *guard = Some(fresh.clone());
        Ok(fresh)
    }

    /// `(r1, r2)`: real embeddings and conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        let iso = self
            .roots(8, crate::numeric::DEFAULT_PRECISION_CAP)
            .expect("defining polynomials are separable");
        (iso.real_count(), iso.complex_pairs())
    }

    /// Memoized place list above `p`, built by `make` on first use.
    pub(crate) fn cached_places(
        &self,
        p: u64,
        make: impl FnOnce() -> Result<Vec<Place>>,
    ) -> Result<Vec<Place>> {
        let mut guard = self.0.finite_places.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(p).or_insert_with(make).clone()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_rational(self, BigRational::zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_rational(self, BigRational::one())
    }

    /// The class of `t` (zero in `Q[t]/(t)`).
    pub fn generator(&self) -> FieldElement {
        let mut c = vec![BigRational::zero(); self.degree()];
        if self.degree() > 1 {
            c[1] = BigRational::one();
        }
        FieldElement::from_coords(self, c)
    }

    pub fn element(&self, coords: &[BigRational]) -> FieldElement {
        FieldElement::from_poly(self, coords)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_rational(self, BigRational::from_integer(n.into()))
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.poly == o.0.poly
    }
}

impl Eq for NumberField {}

impl std::hash::Hash for NumberField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.poly.hash(state);
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.label())
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({})", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(NumberField::from_i64(&[-2, 0, 1]).unwrap().degree(), 2);
        assert_eq!(
            NumberField::from_i64(&[-1, 0, 1]).unwrap_err(),
            Error::Reducible {
                witness: "t - 1".into()
            }
        );
        assert_eq!(NumberField::from_i64(&[1, 0, 2]).unwrap_err(), Error::NotMonic);
        assert!(matches!(
            NumberField::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
            Err(Error::DegreeTooLarge { degree: 9, .. })
        ));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            NumberField::from_rationals(&[half, BigRational::one()]).unwrap_err(),
            Error::NonIntegerCoefficients
        );
        assert_eq!(NumberField::from_i64(&[-1, -1, 0, 1]).unwrap().degree(), 3);
    }

    #[test]
    fn signatures() {
        assert_eq!(NumberField::rationals().signature(), (1, 0));
        assert_eq!(NumberField::from_i64(&[-2, 0, 1]).unwrap().signature(), (2, 0));
        assert_eq!(NumberField::from_i64(&[1, 0, 1]).unwrap().signature(), (0, 1));
        assert_eq!(NumberField::from_i64(&[-1, -1, 0, 1]).unwrap().signature(), (1, 1));
    }
}
