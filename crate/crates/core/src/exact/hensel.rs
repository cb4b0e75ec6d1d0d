//! Linear Hensel lifting of a coprime factorization modulo `p` to modulus `p^k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::pow_int;
use super::fp::FpPoly;
use crate::error::{Error, Result};

/// Reduces coefficients into `0..m` and trims.
pub fn reduce_mod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = f.iter().map(|c| c.mod_floor(m)).collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// Symmetric representatives in `(-m/2, m/2]`.
pub fn symmetric_mod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut out: Vec<BigInt> = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

pub fn mul_int_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic polynomial over the integers (or modulo anything).
pub fn div_rem_monic(f: &[BigInt], d: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(d.last().is_some_and(One::is_one));
    let dd = d.len() - 1;
    if f.len() <= dd {
        return (Vec::new(), f.to_vec());
    }
    let mut rem = f.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd].clone();
        if !q.is_zero() {
            for (j, dc) in d.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
        }
        quot[i] = q;
    }
    rem.truncate(dd);
    while rem.last().is_some_and(Zero::is_zero) {
        rem.pop();
    }
    (quot, rem)
}

fn sub_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()
        })
        .collect()
}

fn add_scaled(a: &[BigInt], b: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + s * b.get(i).cloned().unwrap_or_default())
        .collect()
}

/// Lifts `f ≡ g*h (mod p)` to `f ≡ G*H (mod p^k)` with `G ≡ g`, `H ≡ h (mod p)`.
/// `f` is given modulo `p^k`, `g` and `h` are monic and coprime modulo `p`.
fn lift_pair(f: &[BigInt], g: &FpPoly, h: &FpPoly, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = g.modulus();
    let pb = BigInt::from(p);
    let (_, s, t) = g.xgcd(h);
    let mut big_g = g.to_ints();
    let mut big_h = h.to_ints();
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = sub_poly(f, &mul_int_poly(&big_g, &big_h));
        let e: Vec<BigInt> = diff.iter().map(|c| c.div_floor(&pj)).collect();
        let e = FpPoly::from_ints(p, &e);
        let (q, dg) = e.mul(&t).div_rem(g);
        let dh = e.mul(&s).add(&q.mul(h));
        big_g = add_scaled(&big_g, &dg.to_ints(), &pj);
        big_h = add_scaled(&big_h, &dh.to_ints(), &pj);
        pj *= &pb;
    }
    (reduce_mod(&big_g, &pj), reduce_mod(&big_h, &pj))
}

/// Lifts monic factors of a monic `f` from GF(p) to `Z/p^k`.
///
/// The factors must be pairwise coprime and `f` squarefree modulo `p`. When their
/// product is only a divisor of `f mod p` the cofactor is lifted alongside and
/// dropped from the result. Returned factors are monic with coefficients in `0..p^k`.
pub fn hensel_lift(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32) -> Result<Vec<Vec<BigInt>>> {
    if k == 0 {
        return Err(Error::InvalidArgument("Hensel precision must be at least 1".into()));
    }
    if !f.last().is_some_and(One::is_one) {
        return Err(Error::NotMonic);
    }
    let fp = FpPoly::from_ints(p, f);
    if !fp.is_squarefree() {
        return Err(Error::NotSquarefree(p));
    }
    let mut all: Vec<FpPoly> = Vec::with_capacity(factors.len() + 1);
    let mut prod = FpPoly::one(p);
    for g in factors {
        if g.modulus() != p || g.degree() == 0 || g.leading() != 1 {
            return Err(Error::InvalidArgument("factors must be monic, nonconstant, mod p".into()));
        }
        prod = prod.mul(g);
        all.push(g.clone());
    }
    let (cofactor, r) = fp.div_rem(&prod);
    if !r.is_zero() {
        return Err(Error::FactorMismatch(p));
    }
    let has_cofactor = cofactor.degree() > 0;
    if has_cofactor {
        all.push(cofactor);
    }
    if k == 1 {
        return Ok(factors.iter().map(FpPoly::to_ints).collect());
    }
    let modulus = pow_int(&BigInt::from(p), k);
    let mut remaining = reduce_mod(f, &modulus);
    let mut lifted = Vec::with_capacity(all.len());
    for i in 0..all.len() {
        if i + 1 == all.len() {
            lifted.push(remaining.clone());
            break;
        }
        let rest = all[i + 1..].iter().fold(FpPoly::one(p), |acc, g| acc.mul(g));
        let (gk, hk) = lift_pair(&remaining, &all[i], &rest, k);
        lifted.push(gk);
        remaining = hk;
    }
    if has_cofactor {
        lifted.pop();
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::fp::factor_mod_p;
    use proptest::prelude::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sqrt2_lifts_to_49() {
        let f = ints(&[-2, 0, 1]);
        let g = FpPoly::from_i64(7, &[-3, 1]);
        let lifted = hensel_lift(&f, &[g], 7, 2).unwrap();
        // t - 10 mod 49
        assert_eq!(lifted, vec![ints(&[39, 1])]);
    }

    #[test]
    fn precision_one_is_identity() {
        let f = ints(&[-2, 0, 1]);
        let g = FpPoly::from_i64(7, &[-3, 1]);
        let h = FpPoly::from_i64(7, &[-4, 1]);
        let lifted = hensel_lift(&f, &[g.clone(), h.clone()], 7, 1).unwrap();
        assert_eq!(lifted, vec![g.to_ints(), h.to_ints()]);
    }

    #[test]
    fn rejects_non_squarefree() {
        let f = ints(&[-2, 0, 1]);
        let g = FpPoly::x(2);
        assert_eq!(hensel_lift(&f, &[g.clone(), g], 2, 3), Err(Error::NotSquarefree(2)));
    }

    proptest! {
        #[test]
        fn lifted_product_matches(c0 in -30i64..30, c1 in -30i64..30, c2 in -30i64..30,
                                  pi in 0usize..8, k in 1u32..7) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][pi];
            let f = ints(&[c0, c1, c2, 1]);
            let fp = FpPoly::from_ints(p, &f);
            prop_assume!(fp.is_squarefree());
            let fac = factor_mod_p(&f, p).unwrap();
            let gs: Vec<FpPoly> = fac.factors.iter().map(|(g, _)| g.clone()).collect();
            let lifted = hensel_lift(&f, &gs, p, k).unwrap();
            let m = pow_int(&BigInt::from(p), k);
            let prod = lifted.iter().fold(vec![BigInt::one()], |acc, g| mul_int_poly(&acc, g));
            prop_assert_eq!(reduce_mod(&prod, &m), reduce_mod(&f, &m));
            for (l, g) in lifted.iter().zip(&gs) {
                prop_assert_eq!(&FpPoly::from_ints(p, l), g);
            }
        }
    }
}
