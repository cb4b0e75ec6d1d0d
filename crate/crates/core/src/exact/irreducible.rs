//! Irreducibility of monic integer polynomials: degree-pattern sieving over
//! several primes, then Zassenhaus recombination of Hensel-lifted factors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::arith::{is_prime, isqrt_ceil, pow_int};
use super::fp::{factor_mod_p, FpPoly};
use super::hensel::{div_rem_monic, hensel_lift, mul_int_poly, symmetric_mod};
use super::ratpoly::RatPoly;

const SIEVE_PRIMES: usize = 12;

/// Returns a proper monic factor of `f` over the integers, or `None` if `f` is
/// irreducible over the rationals. `f` must be monic of degree at least 1.
pub fn find_factor(f: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = f.len() - 1;
    if d <= 1 {
        return None;
    }
    let rp = RatPoly::from_ints(f);
    let g = rp.gcd(&rp.derivative());
    if g.degree().unwrap_or(0) > 0 {
        // monic divisor of a monic integer polynomial has integer coefficients
        return Some(g.primitive_integer());
    }

    let mut possible: BTreeSet<usize> = (1..d).collect();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut used = 0;
    let mut p = 2u64;
    while used < SIEVE_PRIMES && p < 10_000 {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let fac = match factor_mod_p(f, p) {
            Ok(fac) if fac.is_squarefree() => fac,
            _ => continue,
        };
        used += 1;
        let degrees = fac.degrees();
        if degrees.len() == 1 {
            return None;
        }
        possible = &possible & &subset_sums(&degrees, d);
        if possible.is_empty() {
            return None;
        }
        if best.as_ref().is_none_or(|(_, b)| degrees.len() < b.len()) {
            best = Some((p, fac.factors.into_iter().map(|(g, _)| g).collect()));
        }
    }
    let (p, factors) = best?;
    zassenhaus(f, p, &factors)
}

fn subset_sums(degrees: &[usize], d: usize) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &k in degrees {
        let shifted: Vec<usize> = sums.iter().map(|s| s + k).collect();
        sums.extend(shifted);
    }
    sums.into_iter().filter(|&s| s > 0 && s < d).collect()
}

fn zassenhaus(f: &[BigInt], p: u64, factors: &[FpPoly]) -> Option<Vec<BigInt>> {
    let d = f.len() - 1;
    // coefficients of any factor are bounded by 2^d * ||f||_2
    let norm2 = isqrt_ceil(&f.iter().map(|c| c * c).sum::<BigInt>());
    let bound = (norm2 << d) * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let m = pow_int(&pb, k);
    let lifted = hensel_lift(f, factors, p, k).ok()?;
    let r = lifted.len();
    for size in 1..=r / 2 {
        for subset in combinations(r, size) {
            let cand = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| mul_int_poly(&acc, &lifted[i]));
            let cand = symmetric_mod(&cand, &m);
            if cand.len() < 2 {
                continue;
            }
            if cand.iter().any(|c| c.abs() > bound) {
                continue;
            }
            let (_, rem) = div_rem_monic(f, &cand);
            if rem.iter().all(Zero::is_zero) {
                return Some(cand);
            }
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classic_cases() {
        assert_eq!(find_factor(&ints(&[-2, 0, 1])), None);
        assert_eq!(find_factor(&ints(&[-1, -1, 0, 1])), None);
        assert_eq!(find_factor(&ints(&[-1, 0, 1])).map(|g| g.len()), Some(2));
    }

    #[test]
    fn swinnerton_dyer_style_product_detected() {
        // (t^2 - 2)(t^2 - 3) splits modulo every prime into degree <= 2 pieces
        let f = ints(&[6, 0, -5, 0, 1]);
        let g = find_factor(&f).unwrap();
        assert_eq!(g.len(), 3);
        let (_, r) = div_rem_monic(&f, &g);
        assert!(r.is_empty());
    }

    #[test]
    fn irreducible_quartic_with_split_reductions() {
        // t^4 + 1 is irreducible but reducible modulo every prime
        assert_eq!(find_factor(&ints(&[1, 0, 0, 0, 1])), None);
        // t^4 - 10 t^2 + 1, minimal polynomial of sqrt2 + sqrt3
        assert_eq!(find_factor(&ints(&[1, 0, -10, 0, 1])), None);
    }

    #[test]
    fn repeated_factor_detected() {
        let f = ints(&[1, 2, 1]);
        assert_eq!(find_factor(&f), Some(ints(&[1, 1])));
    }

    #[test]
    fn splitting_field_of_cube_root_two() {
        assert_eq!(find_factor(&ints(&[9, 9, 0, 3, 6, 3, 1])), None);
    }
}
