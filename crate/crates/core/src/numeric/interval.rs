//! Outward-rounded real intervals and complex rectangles with dyadic endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Rounding};

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::point(Dyadic::from_i64(n))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Rounding::Down),
            hi: Dyadic::from_rational(r, prec, Rounding::Up),
        }
    }

    /// `[c - r, c + r]`
    pub fn ball(c: &Dyadic, r: &Dyadic) -> Self {
        Interval {
            lo: c.sub(r),
            hi: c.add(r),
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Interval {
            lo: self.lo.add(&o.lo).round(prec, Rounding::Down),
            hi: self.hi.add(&o.hi).round(prec, Rounding::Up),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(prec, Rounding::Down);
        let hi = c.iter().max().unwrap().round(prec, Rounding::Up);
        Interval { lo, hi }
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let hi = a.clone().max(b.clone()).round(prec, Rounding::Up);
        let lo = if self.contains_zero() {
            Dyadic::zero()
        } else {
            a.min(b).round(prec, Rounding::Down)
        };
        Interval { lo, hi }
    }

    pub fn scale_int(&self, k: &BigInt, prec: u32) -> Self {
        self.mul(&Interval::point(Dyadic::from_int(k.clone())), prec)
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self, prec: u32) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        let (lo, _) = ln_bounds(&self.lo, prec);
        let (_, hi) = ln_bounds(&self.hi, prec);
        Some(Interval { lo, hi })
    }

    pub fn max(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
        }
    }

    /// Union hull.
    pub fn hull(&self, o: &Self) -> Self {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Complex rectangle `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        CInterval {
            re,
            im: Interval::zero(),
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::real(Interval::from_rational(r, prec))
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        CInterval {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        CInterval {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        CInterval { re, im }
    }

    /// `|z|^2`
    pub fn norm_sqr(&self, prec: u32) -> Interval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.re.contains_rational(r) && self.im.contains_zero()
    }
}

/// Fixed-point `atanh(s)` for `0 <= s < 1` given as `s_fixed = floor(s * 2^w)`.
/// Returns the approximation and an upper bound on its error in units of `2^-w`.
fn atanh_fixed(s_fixed: &BigInt, w: u64) -> (BigInt, BigInt) {
    let s2 = (s_fixed * s_fixed) >> w;
    let mut term = s_fixed.clone();
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * n + 1);
        term = (&term * &s2) >> w;
        n += 1;
    }
    // each term carries at most ~2.25 ulps of propagated truncation error,
    // the division adds one more, and the dropped tail is below one ulp
    let err = BigInt::from(4 * (n + 2));
    (sum, err)
}

/// Rigorous lower and upper bounds for `ln x`, `x > 0`, accurate to about `prec` bits
/// after the binary point.
pub fn ln_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.signum() > 0, "logarithm of a nonpositive number");
    let k = x.log2_floor();
    let u = x.mul_pow2(-k).to_rational();
    let kbits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let w = prec as u64 + 32 + kbits;
    let one = BigRational::one();
    let s = (&u - &one) / (&u + &one);
    let scale = BigInt::one() << w;
    let s_fixed = (s * BigRational::from_integer(scale.clone())).floor().to_integer();
    let (a, ea) = atanh_fixed(&s_fixed, w);
    // ln 2 = 2 atanh(1/3)
    let third = &scale / BigInt::from(3);
    let (l2, el2) = atanh_fixed(&third, w);
    let kb = BigInt::from(k);
    let val = (a << 1) + (&l2 << 1) * &kb;
    let err = (ea << 1) + ((el2 + 1) << 1) * kb.abs() + 2;
    let lo = Dyadic::new(&val - &err, -(w as i64));
    let hi = Dyadic::new(&val + &err, -(w as i64));
    (lo, hi)
}

/// Interval enclosing `ln r` for a positive rational.
pub fn ln_rational(r: &BigRational, prec: u32) -> Interval {
    assert!(r.is_positive(), "logarithm of a nonpositive rational");
    let iv = Interval::from_rational(r, prec + 8);
    iv.ln(prec).expect("positive rational")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};

    #[test]
    fn ln_two_and_ten() {
        let l2 = ln_rational(&rat(2), 80);
        assert!(l2.width_f64() < 1e-20);
        assert!((l2.mid().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let l10 = ln_rational(&rat(10), 80);
        assert!((l10.mid().to_f64() - 10f64.ln()).abs() < 1e-14);
        let small = ln_rational(&rat_frac(1, 1000), 80);
        assert!((small.mid().to_f64() + 1000f64.ln()).abs() < 1e-13);
        assert!(ln_rational(&rat(1), 80).contains(&Dyadic::zero()));
    }

    #[test]
    fn ln_is_additive_within_bounds() {
        let a = ln_rational(&rat(6), 120);
        let b = ln_rational(&rat(2), 120).add(&ln_rational(&rat(3), 120), 200);
        assert!(a.overlaps(&b));
        assert!(a.width_f64() < 1e-30);
    }

    #[test]
    fn interval_mul_encloses() {
        let a = Interval::from_rational(&rat_frac(-1, 3), 30);
        let b = Interval::from_rational(&rat_frac(2, 7), 30);
        let p = a.mul(&b, 30);
        assert!(p.contains_rational(&rat_frac(-2, 21)));
    }

    #[test]
    fn complex_product() {
        let i = CInterval::new(Interval::zero(), Interval::from_i64(1));
        let sq = i.mul(&i, 30);
        assert!(sq.contains_rational(&rat(-1)));
        assert!(i.norm_sqr(30).contains_rational(&rat(1)));
    }
}
