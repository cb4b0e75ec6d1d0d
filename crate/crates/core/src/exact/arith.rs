//! Integer and rational helpers shared by the exact layer.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn v_p(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn v_p_rat(r: &BigRational, p: u64) -> i64 {
    i64::from(v_p(r.numer(), p)) - i64::from(v_p(r.denom(), p))
}

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Prime factorization of a positive integer, primes ascending.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let n = n.abs();
    if n <= BigInt::one() {
        return Vec::new();
    }
    let (_, mag) = n.into_parts();
    num_prime::nt_funcs::factorize::<BigUint>(mag)
        .into_iter()
        .map(|(p, e)| (BigInt::from_biguint(Sign::Plus, p), e as u32))
        .collect()
}

/// Distinct prime divisors as `u64`; fails if any prime does not fit.
pub fn prime_divisors_u64(n: &BigInt) -> Result<Vec<u64>> {
    factor_integer(n)
        .into_iter()
        .map(|(p, _)| p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.to_string())))
        .collect()
}

pub fn pow_rat(base: &BigRational, exp: u32) -> BigRational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn pow_int(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// lcm of the denominators of a list of rationals.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Parses `"p/q"` or `"n"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse {
        offset: 0,
        reason: format!("not an exact rational: {s:?}"),
    };
    let parse_int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        if t.is_empty() || !t.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Pretty-prints ascending coefficients as a polynomial in `var`.
pub fn format_poly(coeffs: &[BigRational], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&a), mono));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_int_poly(coeffs: &[BigInt], var: &str) -> String {
    let r: Vec<BigRational> = coeffs.iter().map(int_to_rat).collect();
    format_poly(&r, var)
}

/// Ceiling of the square root of a nonnegative integer.
pub fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(v_p(&BigInt::from(40), 2), 3);
        assert_eq!(v_p(&BigInt::from(-45), 3), 2);
        assert_eq!(v_p_rat(&rat_frac(8, 3), 3), -1);
    }

    #[test]
    fn factoring() {
        let f = factor_integer(&BigInt::from(360));
        let expect: Vec<(BigInt, u32)> = vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)];
        assert_eq!(f, expect);
        assert!(factor_integer(&BigInt::one()).is_empty());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat_frac(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn poly_printing() {
        let c = vec![rat(-2), rat(0), rat(1)];
        assert_eq!(format_poly(&c, "t"), "t^2 - 2");
        assert_eq!(format_poly(&[rat(1), rat_frac(-1, 2)], "t"), "-1/2*t + 1");
    }
}
