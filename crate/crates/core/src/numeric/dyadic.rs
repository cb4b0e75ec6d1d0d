use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for [`Dyadic::round`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Exact binary fraction `mant * 2^exp`, kept normalized (odd mantissa or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shift(x: &BigInt, k: u64) -> BigInt {
    x.div_floor(&(BigInt::one() << k))
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(n.into(), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `floor(log2 |x|)`; undefined for zero.
    pub fn log2_floor(&self) -> i64 {
        self.mant.bits() as i64 - 1 + self.exp
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = match dir {
            Rounding::Down => floor_shift(&self.mant, shift),
            Rounding::Up => -floor_shift(&-&self.mant, shift),
        };
        Self::new(m, self.exp + shift as i64)
    }

    /// Rounds to a multiple of `2^-frac_bits` in the given direction.
    pub fn round_abs(&self, frac_bits: i64, dir: Rounding) -> Self {
        if self.exp >= -frac_bits {
            return self.clone();
        }
        let shift = (-frac_bits - self.exp) as u64;
        let m = match dir {
            Rounding::Down => floor_shift(&self.mant, shift),
            Rounding::Up => -floor_shift(&-&self.mant, shift),
        };
        Self::new(m, -frac_bits)
    }

    /// Dyadic approximation of a rational with about `prec` bits, rounded as asked.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Rounding) -> Self {
        if r.is_integer() {
            return Self::from_int(r.to_integer()).round(prec, dir);
        }
        let n = r.numer();
        let d = r.denom();
        let shift = prec as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let (num, den) = if shift >= 0 {
            (n << shift as u64, d.clone())
        } else {
            (n.clone(), d << (-shift) as u64)
        };
        let q = match dir {
            Rounding::Down => num.div_floor(&den),
            Rounding::Up => -(-num).div_floor(&den),
        };
        Self::new(q, -shift)
    }

    /// Approximate quotient with about `prec` bits (rounded toward minus infinity).
    pub fn div_approx(&self, o: &Self, prec: u32) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = prec as i64 + o.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0);
        let q = (&self.mant << shift as u64).div_floor(&o.mant);
        Self::new(q, self.exp - o.exp - shift)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(64, Rounding::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        let e = r.exp.clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), exp - 1075)
        };
        Self::new(BigInt::from(sign * m), e)
    }

    /// Upper bound for the square root of a nonnegative rational.
    pub fn sqrt_upper(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        // scale by 4^s so the integer part carries about 2*prec bits
        let s = (2 * prec as i64 + r.denom().bits() as i64 - r.numer().bits() as i64) / 2 + 2;
        let scaled = if s >= 0 {
            r * BigRational::from_integer(BigInt::one() << (2 * s) as u64)
        } else {
            r / BigRational::from_integer(BigInt::one() << (-2 * s) as u64)
        };
        let q = scaled.ceil().to_integer();
        let root = crate::exact::arith::isqrt_ceil(&q);
        Self::new(root, -s)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.sub(o);
        d.mant.sign().cmp(&Sign::NoSign)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::rat_frac;

    #[test]
    fn rounding_brackets_value() {
        let r = rat_frac(1, 3);
        let lo = Dyadic::from_rational(&r, 40, Rounding::Down);
        let hi = Dyadic::from_rational(&r, 40, Rounding::Up);
        assert!(lo.to_rational() < r && r < hi.to_rational());
        assert!((hi.sub(&lo)).log2_floor() <= -40);
        let neg = Dyadic::from_rational(&-r.clone(), 40, Rounding::Down);
        assert!(neg.to_rational() < -r);
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(3.into(), -2);
        let b = Dyadic::new(5.into(), 1);
        assert_eq!(a.add(&b).to_rational(), rat_frac(43, 4));
        assert_eq!(a.mul(&b).to_rational(), rat_frac(15, 2));
        assert!(a < b);
    }

    #[test]
    fn sqrt_upper_bound() {
        let r = rat_frac(2, 1);
        let s = Dyadic::sqrt_upper(&r, 60);
        let sq = s.mul(&s).to_rational();
        assert!(sq >= r);
        assert!(sq - r < rat_frac(1, 1 << 50));
    }

    #[test]
    fn f64_round_trip() {
        for x in [1.5, -0.1, 1e-300, 12345.678] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }
}
