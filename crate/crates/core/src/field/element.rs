use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumberField;
use crate::error::{Error, Result};
use crate::exact::arith::{common_denominator, format_poly, int_to_rat, pow_rat};
use crate::exact::matrix::{determinant, Scalar};
use crate::exact::RatPoly;
use crate::numeric::{Accuracy, CInterval, Interval};

/// An element of a number field, as coordinates in the basis `1, t, ..., t^(d-1)`.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

/// Operation selector for [`el_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn el_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.div(b),
    }
}

/// Reduces ascending coefficients modulo the monic defining polynomial.
fn reduce(f: &[BigInt], mut c: Vec<BigRational>) -> Vec<BigRational> {
    let d = f.len() - 1;
    for i in (d..c.len()).rev() {
        let top = std::mem::take(&mut c[i]);
        if top.is_zero() {
            continue;
        }
        for (j, fj) in f.iter().enumerate().take(d) {
            if !fj.is_zero() {
                c[i - d + j] -= &top * int_to_rat(fj);
            }
        }
    }
    c.resize(d, BigRational::zero());
    c
}

impl FieldElement {
    /// `coords` must have exactly `degree` entries.
    pub fn from_coords(field: &NumberField, coords: Vec<BigRational>) -> Self {
        assert_eq!(coords.len(), field.degree(), "coordinate count must match the degree");
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    /// Class of an arbitrary polynomial in `t` (ascending coefficients).
    pub fn from_poly(field: &NumberField, coeffs: &[BigRational]) -> Self {
        let c = reduce(field.poly(), coeffs.to_vec());
        FieldElement {
            field: field.clone(),
            coords: c,
        }
    }

    pub fn from_rational(field: &NumberField, r: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = r;
        FieldElement {
            field: field.clone(),
            coords: c,
        }
    }

    pub fn from_int(field: &NumberField, n: BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(n))
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        common_denominator(&self.coords)
    }

    /// Integer coordinates of `denominator() * self`.
    pub fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.denominator();
        let dr = int_to_rat(&den);
        let nums = self.coords.iter().map(|c| (c * &dr).to_integer()).collect();
        (nums, den)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q[t]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        let f = RatPoly::from_ints(self.field.poly());
        let a = self.as_poly();
        // invariant: r_i = s_i * a (mod f)
        let (mut r0, mut r1) = (f, a);
        let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::constant(BigRational::one()));
        while r1.degree().unwrap_or(0) > 0 {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let c = r1.coeff(0);
        debug_assert!(!c.is_zero(), "defining polynomial is irreducible");
        let inv = s1.scale(&c.recip());
        Ok(Self::from_poly(&self.field, inv.coeffs()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need an invertible element.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Matrix of multiplication by `self`; column `j` holds `self * t^j`.
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let t = self.field.generator();
        for j in 0..d {
            cols.push(cur.coords.clone());
            if j + 1 < d {
                cur = &cur * &t;
            }
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm to `Q`.
    pub fn norm(&self) -> BigRational {
        if let Some(r) = self.as_rational() {
            return pow_rat(&r, self.field.degree() as u32);
        }
        determinant(&self.mult_matrix(), &BigRational::one())
    }

    /// Characteristic polynomial of multiplication by `self`, ascending and monic.
    pub fn charpoly(&self) -> Vec<BigRational> {
        // Faddeev-LeVerrier
        let a = self.mult_matrix();
        let d = a.len();
        let mut c = vec![BigRational::zero(); d + 1];
        c[d] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for k in 1..=d {
            let mut next = vec![vec![BigRational::zero(); d]; d];
            for i in 0..d {
                for j in 0..d {
                    let mut acc = BigRational::zero();
                    for l in 0..d {
                        acc += &a[i][l] * &m[l][j];
                    }
                    if i == j {
                        acc += &c[d - k + 1];
                    }
                    next[i][j] = acc;
                }
            }
            m = next;
            let mut tr = BigRational::zero();
            for i in 0..d {
                for l in 0..d {
                    tr += &a[i][l] * &m[l][i];
                }
            }
            c[d - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        c
    }

    /// Whether `self` is a root of a monic integer polynomial.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer()) || self.charpoly().iter().all(|c| c.is_integer())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Enclosure of the image under embedding `i`, using root disks of radius `2^-bits`.
    pub fn embed(&self, i: usize, bits: u32, cap: u32) -> Result<CInterval> {
        let iso = self.field.roots(bits, cap)?;
        let z = iso.disks[i].enclosure();
        let prec = bits + 32;
        let mut acc = CInterval::from_rational(&BigRational::zero(), prec);
        for c in self.coords.iter().rev() {
            acc = acc
                .mul(&z, prec)
                .add(&CInterval::from_rational(c, prec), prec);
        }
        Ok(acc)
    }

    /// Interval for `log |sigma_i(self)|` of width within the accuracy.
    pub fn log_abs_at(&self, i: usize, acc: &Accuracy) -> Result<Interval> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        if let Some(r) = self.as_rational() {
            return Ok(crate::numeric::ln_rational(&r.abs(), acc.tolerance_bits + 8));
        }
        let mut bits = acc.tolerance_bits + 16;
        loop {
            if bits > acc.cap {
                return Err(Error::PrecisionCapExceeded { cap: acc.cap });
            }
            let v = self.embed(i, bits, acc.cap)?;
            if let Some(l) = v.norm_sqr(bits + 32).ln(bits + 8) {
                let half = Interval::new(l.lo.mul_pow2(-1), l.hi.mul_pow2(-1));
                if acc.accepts(&half) {
                    return Ok(half);
                }
            }
            bits = bits.saturating_mul(2);
        }
    }

    /// Lexicographic comparison of coordinates.
    pub fn cmp_coords(&self, o: &Self) -> Ordering {
        self.coords.cmp(&o.coords)
    }

    /// Polynomial in `t` with integer content removed, for quick sign/size tests.
    pub fn content_free(&self) -> Vec<BigInt> {
        let (nums, _) = self.cleared();
        let g = nums.iter().fold(BigInt::zero(), |a, c| a.gcd(c));
        if g.is_zero() {
            return nums;
        }
        nums.iter().map(|c| c / &g).collect()
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) {
    assert!(a.field == b.field, "arithmetic between different number fields");
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        same_field(self, o);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        same_field(self, o);
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        same_field(self, o);
        let d = self.coords.len();
        if d == 1 {
            return FieldElement {
                field: self.field.clone(),
                coords: vec![&self.coords[0] * &o.coords[0]],
            };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElement {
            field: self.field.clone(),
            coords: reduce(self.field.poly(), prod),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords && self.field == o.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coords, "t"))
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
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
        self.div(o).expect("division by a nonzero field element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sqrt2() -> NumberField {
        NumberField::from_i64(&[-2, 0, 1]).unwrap()
    }

    fn el(k: &NumberField, c: &[i64]) -> FieldElement {
        k.element(&c.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn charpoly_examples() {
        let k = sqrt2();
        // (1 + t)^2 - 2 (1 + t) - 1 = 0
        assert_eq!(el(&k, &[1, 1]).charpoly(), vec![rat(-1), rat(-2), rat(1)]);
        assert_eq!(el(&k, &[3, 0]).charpoly(), vec![rat(9), rat(-6), rat(1)]);
        let half = k.element(&[rat(0), rat_frac(1, 2)]);
        assert!(!half.is_algebraic_integer());
        // (1 + sqrt5)/2 written over t^2 - 5
        let k5 = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        let phi = k5.element(&[rat_frac(1, 2), rat_frac(1, 2)]);
        assert!(phi.is_algebraic_integer());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k3 = NumberField::from_i64(&[-1, -1, 0, 1]).unwrap();
        for _ in 0..30 {
            let a = k3.element(&(0..3).map(|_| rat_frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect::<Vec<_>>());
            let c = a.charpoly();
            assert_eq!(c[0].clone() * rat(-1), a.norm());
            assert_eq!(-c[2].clone(), a.trace());
            let mut v = k3.zero();
            for coef in c.iter().rev() {
                v = &(&v * &a) + &FieldElement::from_rational(&k3, coef.clone());
            }
            assert!(v.is_zero());
        }
    }

    fn random(k: &NumberField, rng: &mut ChaCha8Rng) -> FieldElement {
        let c: Vec<BigRational> = (0..k.degree())
            .map(|_| rat_frac(rng.gen_range(-20..=20), rng.gen_range(1..=6)))
            .collect();
        k.element(&c)
    }

    fn fields() -> Vec<NumberField> {
        vec![
            NumberField::rationals(),
            sqrt2(),
            NumberField::from_i64(&[1, 0, 1]).unwrap(),
            NumberField::from_i64(&[-1, -1, 0, 1]).unwrap(),
        ]
    }

    #[test]
    fn quadratic_examples() {
        let k = sqrt2();
        assert_eq!(&el(&k, &[1, 1]) * &el(&k, &[1, -1]), k.int(-1));
        assert_eq!(el(&k, &[1, 1]).inv().unwrap(), el(&k, &[-1, 1]));
        assert_eq!(el(&k, &[3, 1]).norm(), rat(7));
        assert_eq!(el(&k, &[1, 1]).norm(), rat(-1));
        let cubic = NumberField::from_i64(&[-1, -1, 0, 1]).unwrap();
        assert_eq!(cubic.int(5).norm(), rat(125));
        assert_eq!(k.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(
            el_arith(&k.one(), &cubic.one(), ArithOp::Add),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn field_laws_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in fields() {
            for _ in 0..100 {
                let a = random(&k, &mut rng);
                let b = random(&k, &mut rng);
                assert_eq!(&a + &k.zero(), a);
                assert_eq!((&a * &b).norm(), a.norm() * b.norm());
                if !b.is_zero() {
                    assert_eq!(&a.div(&b).unwrap() * &b, a);
                }
            }
        }
    }

    #[test]
    fn embeddings_multiply_to_the_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in fields() {
            for _ in 0..20 {
                let a = random(&k, &mut rng);
                let mut prod = CInterval::from_rational(&rat(1), 200);
                for i in 0..k.degree() {
                    prod = prod.mul(&a.embed(i, 100, 1 << 16).unwrap(), 200);
                }
                assert!(prod.contains_rational(&a.norm()), "{k:?} {a}");
            }
        }
    }

    #[test]
    fn log_abs_matches_float() {
        let k = sqrt2();
        let a = el(&k, &[1, 1]);
        let acc = Accuracy::from_tolerance(1e-30, 1 << 16);
        let hi = a.log_abs_at(1, &acc).unwrap();
        assert!(acc.accepts(&hi));
        assert!((hi.mid().to_f64() - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
    }
}
