//! Box enumeration by shells `max |a_j| = k`, and the root windows that prune the
//! binary rational search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::exact::RatPoly;
use crate::field::{FieldElement, NumberField};
use crate::numeric::{isolate_roots, Dyadic};

/// Which vectors of a box are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnumerationMode {
    /// Integer vectors with coprime entries whose first nonzero entry is positive.
    Primitive,
    /// Nonzero integer vectors whose first nonzero entry is positive.
    SignNormalized,
    /// Every nonzero integer vector.
    All,
}

/// All integer vectors of length `n` with `max |a_j| = k`, in lexicographic order.
pub fn shell(n: usize, k: i64, mode: EnumerationMode) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if k <= 0 || n == 0 {
        return out;
    }
    let mut cur = vec![0i64; n];
    fill(&mut cur, 0, k, false, mode != EnumerationMode::All, &mut out);
    if mode == EnumerationMode::Primitive {
        out.retain(|v| v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1);
    }
    out
}

fn fill(cur: &mut Vec<i64>, i: usize, k: i64, hit: bool, normalize: bool, out: &mut Vec<Vec<i64>>) {
    let n = cur.len();
    if i == n {
        if hit {
            out.push(cur.clone());
        }
        return;
    }
    let leading = normalize && cur[..i].iter().all(|&x| x == 0);
    let lo = if leading { 0 } else { -k };
    if i + 1 == n && !hit {
        for v in [-k, k] {
            if v >= lo {
                cur[i] = v;
                fill(cur, i + 1, k, true, normalize, out);
            }
        }
        return;
    }
    for v in lo..=k {
        cur[i] = v;
        fill(cur, i + 1, k, hit || v.abs() == k, normalize, out);
    }
    cur[i] = 0;
}

/// Converts `(m+1) * d` integer coefficients into a point of `K^(m+1)`.
pub fn to_point(k: &NumberField, coeffs: &[i64]) -> Vec<FieldElement> {
    let d = k.degree();
    coeffs
        .chunks(d)
        .map(|c| {
            let coords: Vec<BigRational> = c
                .iter()
                .map(|&a| BigRational::from_integer(BigInt::from(a)))
                .collect();
            FieldElement::from_coords(k, coords)
        })
        .collect()
}

/// The scan stream: shells `1..=bound` of `(m+1) * [K:Q]` integer coordinates.
pub fn enumerate_points(
    k: &NumberField,
    m: usize,
    bound: u64,
    mode: EnumerationMode,
) -> Vec<Vec<FieldElement>> {
    let n = (m + 1) * k.degree();
    (1..=bound as i64)
        .flat_map(|s| shell(n, s, mode))
        .map(|v| to_point(k, &v))
        .collect()
}

/// Real parts of the roots of a univariate polynomial with a rigorous error
/// bound, as `(center, radius)` in `f64` with padding already applied.
#[derive(Clone, Debug)]
struct RootSide {
    /// Degree `e` of the dehomogenized polynomial.
    degree: u32,
    /// `|leading coefficient|`.
    lead: f64,
    /// Exponent of the shell index in the leading coefficient.
    lead_power: i32,
    centers: Vec<(f64, f64)>,
}

fn root_side(desc_coeffs: &[BigInt], lead_power: i32) -> Result<RootSide> {
    // desc_coeffs[i] multiplies z^i in ascending order
    let p = RatPoly::from_ints(desc_coeffs);
    let e = p.degree().unwrap_or(0);
    let lead = p.leading().abs().to_f64().unwrap_or(f64::INFINITY);
    if e == 0 {
        return Ok(RootSide {
            degree: 0,
            lead,
            lead_power,
            centers: Vec::new(),
        });
    }
    let sqf = p.div_rem(&p.gcd(&p.derivative())).0;
    let ints = sqf.primitive_integer();
    let iso = isolate_roots(&ints, &Dyadic::pow2(-50), 1 << 12, None)?;
    let centers = iso
        .disks
        .iter()
        .map(|d| {
            let (re, _) = d.approx();
            let rad = d.radius.to_f64() + re.abs() * 1e-12 + 1e-12;
            (re, rad)
        })
        .collect();
    Ok(RootSide {
        degree: e as u32,
        lead,
        lead_power,
        centers,
    })
}

/// Root windows for a binary form `sum f_i X0^(q-i) X1^i` over `Q`, valid for the
/// condition `|F(x)| <= c k^nu` on the shell `max |x_i| = k`.
#[derive(Clone, Debug)]
pub(crate) struct RootWindows {
    /// Side `x0 = k`, free variable `x1`.
    a: RootSide,
    /// Side `x1 = +-k`, free variable `x0`.
    b: RootSide,
    c: f64,
    nu: f64,
}

impl RootWindows {
    /// `f[i]` is the coefficient of `X0^(q-i) X1^i`.
    pub(crate) fn new(f: &[BigInt], c: &BigRational, nu: &BigRational) -> Result<Self> {
        let q = f.len() - 1;
        // F(1, y) = sum f_i y^i; the leading coefficient of F(k, y) is f_e k^(q-e)
        let ga: Vec<BigInt> = f.to_vec();
        let e = ga.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let a = root_side(&ga[..=e], (q - e) as i32)?;
        // F(z, 1) = sum f_i z^(q-i); the leading coefficient of F(x0, sk) is f_i0 (sk)^i0
        let gb: Vec<BigInt> = f.iter().rev().cloned().collect();
        let i0 = f.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let b = root_side(&gb[..=(q - i0)], i0 as i32)?;
        Ok(RootWindows {
            a,
            b,
            c: c.to_f64().unwrap_or(f64::INFINITY),
            nu: nu.to_f64().unwrap_or(0.0),
        })
    }

    fn radius(&self, side: &RootSide, k: i64) -> f64 {
        let kf = k as f64;
        let t = self.c * kf.powf(self.nu);
        let l = side.lead * kf.powi(side.lead_power);
        let r = (t / l).powf(1.0 / f64::from(side.degree));
        if r.is_finite() {
            r * (1.0 + 1e-9) + 1e-9
        } else {
            f64::INFINITY
        }
    }

    /// Sorted, deduplicated values of the free variable inside `[lo, hi]`.
    fn windows(&self, side: &RootSide, k: i64, scale: f64, lo: i64, hi: i64) -> Vec<i64> {
        if lo > hi {
            return Vec::new();
        }
        if side.degree == 0 {
            return (lo..=hi).collect();
        }
        let r = self.radius(side, k);
        let kf = k as f64;
        let mut out = Vec::new();
        for &(re, rad) in &side.centers {
            let center = scale * kf * re;
            let half = r + kf * rad;
            let a = (center - half).floor() - 1.0;
            let b = (center + half).ceil() + 1.0;
            let a = if a.is_finite() { a.max(lo as f64) as i64 } else { lo };
            let b = if b.is_finite() { b.min(hi as f64) as i64 } else { hi };
            out.extend(a.max(lo)..=b.min(hi));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Candidate sign-normalized points on shell `k`, lexicographic.
    pub(crate) fn candidates(&self, k: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0, k]];
        for s in [-1i64, 1] {
            for x0 in self.windows(&self.b, k, s as f64, 1, k - 1) {
                out.push(vec![x0, s * k]);
            }
        }
        for x1 in self.windows(&self.a, k, 1.0, -k, k) {
            out.push(vec![k, x1]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::rat;

    #[test]
    fn shell_examples() {
        let b1 = shell(2, 1, EnumerationMode::Primitive);
        assert_eq!(b1, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        let q = NumberField::rationals();
        assert!(enumerate_points(&q, 1, 0, EnumerationMode::Primitive).is_empty());
        assert_eq!(enumerate_points(&q, 1, 2, EnumerationMode::Primitive).len(), 8);
        assert_eq!(shell(2, 1, EnumerationMode::All).len(), 8);
        assert_eq!(shell(2, 2, EnumerationMode::SignNormalized).len(), 8);
        assert_eq!(shell(2, 2, EnumerationMode::Primitive).len(), 4);
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let pts = enumerate_points(&k, 1, 1, EnumerationMode::Primitive);
        assert_eq!(pts.len(), (81 - 1) / 2);
    }

    #[test]
    fn shells_partition_the_box() {
        for n in 1..=3 {
            for b in 1..=4i64 {
                let mut all: Vec<Vec<i64>> = (1..=b).flat_map(|k| shell(n, k, EnumerationMode::All)).collect();
                let total = all.len();
                all.sort();
                all.dedup();
                assert_eq!(all.len(), total);
                assert_eq!(total as i64, (2 * b + 1).pow(n as u32) - 1);
            }
        }
    }

    #[test]
    fn windows_contain_pell_points() {
        let f: Vec<BigInt> = [1, 0, -2, 0].iter().map(|&c| BigInt::from(c)).collect();
        let w = RootWindows::new(&f, &rat(1), &rat(1)).unwrap();
        assert!(w.candidates(3).contains(&vec![3, 2]));
        assert!(w.candidates(7).contains(&vec![7, -5]));
        assert!(w.candidates(1).contains(&vec![1, 1]));
        assert!(w.candidates(1000).len() < 40);
    }
}
