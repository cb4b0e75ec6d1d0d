//! Places of a number field, normalized absolute values, valuations and S-norms.

mod heights;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use heights::{
    height, norm_extension_check, places_above, product_formula_check, s_height,
    s_height_value, HeightValue,
};

use crate::error::{Error, Result};
use crate::exact::arith::{check_prime, factor_integer, int_to_rat, pow_int, v_p};
use crate::exact::hensel::{div_rem_monic, hensel_lift, reduce_mod};
use crate::exact::{factor_mod_p, FpPoly};
use crate::field::{FieldElement, NumberField};
use crate::numeric::{Accuracy, Interval, RootKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Real,
    Complex,
    Finite,
}

/// A place of a number field.
///
/// Archimedean places carry the index of their root disk (the upper root for a
/// complex pair); finite places carry the prime and the residue factor of `f mod p`.
#[derive(Clone)]
pub struct Place {
    kind: PlaceKind,
    index: usize,
    prime: u64,
    residue: Option<FpPoly>,
    local_degree: usize,
    lift: Arc<Mutex<Option<(u32, Vec<BigInt>)>>>,
}

impl Place {
    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    pub fn is_archimedean(&self) -> bool {
        self.kind != PlaceKind::Finite
    }

    /// Root index for archimedean places, factor index for finite ones.
    pub fn index(&self) -> usize {
        self.index
    }

    /// The rational prime below a finite place (0 for archimedean places).
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn residue(&self) -> Option<&FpPoly> {
        self.residue.as_ref()
    }

    pub fn local_degree(&self) -> usize {
        self.local_degree
    }

    /// Monic lift of the residue factor modulo `p^k`.
    fn lifted_factor(&self, f: &[BigInt], k: u32) -> Result<Vec<BigInt>> {
        let g = self.residue.as_ref().expect("finite place");
        let mut guard = self.lift.lock().unwrap_or_else(|e| e.into_inner());
        let modulus = pow_int(&BigInt::from(self.prime), k);
        if let Some((kk, lifted)) = guard.as_ref() {
            if *kk >= k {
                return Ok(reduce_mod(lifted, &modulus));
            }
        }
        let lifted = hensel_lift(f, std::slice::from_ref(g), self.prime, k)?
            .pop()
            .expect("one factor in, one factor out");
        *guard = Some((k, lifted.clone()));
        Ok(lifted)
    }

    pub fn label(&self) -> String {
        match self.kind {
            PlaceKind::Real => format!("real#{}", self.index),
            PlaceKind::Complex => format!("complex#{}", self.index),
            PlaceKind::Finite => {
                let g = self.residue.as_ref().expect("finite place");
                let coeffs: Vec<BigInt> = g.to_ints();
                format!(
                    "({}, {})",
                    self.prime,
                    crate::exact::arith::format_int_poly(&coeffs, "t")
                )
            }
        }
    }
}

impl PartialEq for Place {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.index == o.index
            && self.prime == o.prime
            && self.residue == o.residue
    }
}

impl Eq for Place {}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Real places (local degree 1) followed by complex places (local degree 2).
pub fn archimedean_places(k: &NumberField) -> Vec<Place> {
    let iso = k
        .roots(8, crate::numeric::DEFAULT_PRECISION_CAP)
        .expect("defining polynomials are separable");
    iso.disks
        .iter()
        .enumerate()
        .filter(|(_, d)| d.kind != RootKind::Lower)
        .map(|(i, d)| {
            let (kind, local_degree) = if d.kind == RootKind::Real {
                (PlaceKind::Real, 1)
            } else {
                (PlaceKind::Complex, 2)
            };
            Place {
                kind,
                index: i,
                prime: 0,
                residue: None,
                local_degree,
                lift: Arc::new(Mutex::new(None)),
            }
        })
        .collect()
}

/// One place per irreducible factor of `f mod p`; `UnsupportedPrime` when `f mod p`
/// is not squarefree.
pub fn finite_places_above(k: &NumberField, p: u64) -> Result<Vec<Place>> {
    check_prime(p)?;
    k.cached_places(p, || {
        let fac = factor_mod_p(k.poly(), p)?;
        if !fac.is_squarefree() {
            return Err(Error::UnsupportedPrime(p));
        }
        Ok(fac
            .factors
            .into_iter()
            .enumerate()
            .map(|(i, (g, _))| Place {
                kind: PlaceKind::Finite,
                index: i,
                prime: p,
                local_degree: g.degree(),
                residue: Some(g),
                lift: Arc::new(Mutex::new(None)),
            })
            .collect())
    })
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Dedekind's criterion: whether `p` does not divide the index of `Z[t]/(f)` in
/// the ring of integers.
pub(crate) fn is_p_maximal(f: &[BigInt], p: u64) -> Result<bool> {
    let fac = factor_mod_p(f, p)?;
    let one = vec![BigInt::one()];
    let mut g = one.clone();
    let mut h = one;
    for (gi, e) in &fac.factors {
        let lift = gi.to_ints();
        g = int_poly_mul(&g, &lift);
        for _ in 1..*e {
            h = int_poly_mul(&h, &lift);
        }
    }
    let gh = int_poly_mul(&g, &h);
    let pb = BigInt::from(p);
    let mut diff: Vec<BigInt> = (0..f.len().max(gh.len()))
        .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
        .collect();
    for c in &mut diff {
        debug_assert!((&*c % &pb).is_zero());
        *c = &*c / &pb;
    }
    let d = FpPoly::from_ints(p, &diff)
        .gcd(&FpPoly::from_ints(p, &g))
        .gcd(&FpPoly::from_ints(p, &h));
    Ok(d.is_one())
}

/// Integral numerator of a nonzero element: `alpha = A(t) / D`.
fn integral_parts(alpha: &FieldElement) -> (Vec<BigInt>, BigInt, BigInt) {
    let (nums, den) = alpha.cleared();
    let a = FieldElement::from_poly(
        alpha.field(),
        &nums.iter().map(int_to_rat).collect::<Vec<_>>(),
    );
    let norm = a.norm().to_integer().abs();
    (nums, den, norm)
}

fn valuation_of_integral(
    f: &[BigInt],
    nums: &[BigInt],
    norm_a: &BigInt,
    v: &Place,
) -> Result<i64> {
    let p = v.prime;
    if f.len() == 2 {
        // degree one: the numerator is the integer nums[0]
        return Ok(i64::from(v_p(&nums[0], p)));
    }
    let pb = BigInt::from(p);
    if !(norm_a % &pb).is_zero() {
        return Ok(0);
    }
    let k = v_p(norm_a, p) + 1;
    let g = v.lifted_factor(f, k)?;
    let modulus = pow_int(&pb, k);
    let (_, r) = div_rem_monic(&reduce_mod(nums, &modulus), &g);
    let r = reduce_mod(&r, &modulus);
    Ok(r
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| i64::from(v_p(c, p)))
        .min()
        .unwrap_or(i64::from(k)))
}

/// `v_P(alpha)` at a finite place, normalized so that `v_P(p) = 1`.
pub fn valuation(alpha: &FieldElement, v: &Place) -> Result<i64> {
    if v.kind != PlaceKind::Finite {
        return Err(Error::InvalidArgument("valuation needs a finite place".into()));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (nums, den, norm_a) = integral_parts(alpha);
    let va = valuation_of_integral(alpha.field().poly(), &nums, &norm_a, v)?;
    Ok(va - i64::from(v_p(&den, v.prime)))
}

/// `||alpha||_v`: exact at finite places, a log-interval at archimedean ones.
#[derive(Clone, Debug, PartialEq)]
pub enum AbsValue {
    Exact(BigRational),
    Log(Interval),
}

pub fn abs_norm_at(alpha: &FieldElement, v: &Place, acc: &Accuracy) -> Result<AbsValue> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    match v.kind {
        PlaceKind::Finite => {
            let e = valuation(alpha, v)? * v.local_degree as i64;
            let pe = pow_int(&BigInt::from(v.prime), e.unsigned_abs() as u32);
            Ok(AbsValue::Exact(if e >= 0 {
                BigRational::new(BigInt::one(), pe)
            } else {
                BigRational::from_integer(pe)
            }))
        }
        _ => {
            let l = alpha.log_abs_at(v.index, acc)?;
            let l = if v.local_degree == 2 {
                Interval::new(l.lo.mul_pow2(1), l.hi.mul_pow2(1))
            } else {
                l
            };
            Ok(AbsValue::Log(l))
        }
    }
}

/// A finite set of places containing every archimedean place.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceSet {
    field: NumberField,
    arch: Vec<Place>,
    finite: Vec<Place>,
}

impl PlaceSet {
    pub fn archimedean(k: &NumberField) -> Self {
        PlaceSet {
            field: k.clone(),
            arch: archimedean_places(k),
            finite: Vec::new(),
        }
    }

    /// All archimedean places plus every place above each listed prime.
    pub fn from_primes(k: &NumberField, primes: &[u64]) -> Result<Self> {
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        let mut finite = Vec::new();
        for p in primes {
            finite.extend(finite_places_above(k, p)?);
        }
        Ok(PlaceSet {
            field: k.clone(),
            arch: archimedean_places(k),
            finite,
        })
    }

    /// All archimedean places plus the given finite places.
    pub fn new(k: &NumberField, finite: Vec<Place>) -> Result<Self> {
        let mut out: Vec<Place> = Vec::new();
        for v in finite {
            if v.kind != PlaceKind::Finite {
                continue;
            }
            let known = finite_places_above(k, v.prime)?;
            if !known.contains(&v) {
                return Err(Error::InvalidArgument(format!("{v} is not a place of this field")));
            }
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out.sort_by(|a, b| (a.prime, a.index).cmp(&(b.prime, b.index)));
        Ok(PlaceSet {
            field: k.clone(),
            arch: archimedean_places(k),
            finite: out,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn archimedean_places(&self) -> &[Place] {
        &self.arch
    }

    pub fn finite_places(&self) -> &[Place] {
        &self.finite
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.arch.iter().chain(&self.finite)
    }

    /// Distinct rational primes below the finite places, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.finite.iter().map(|v| v.prime).collect();
        ps.dedup();
        ps
    }

    pub fn contains(&self, v: &Place) -> bool {
        v.is_archimedean() || self.finite.contains(v)
    }

    /// Whether every place above `p` belongs to the set.
    fn covers_prime(&self, p: u64) -> Result<bool> {
        let mine = self.finite.iter().filter(|v| v.prime == p).count();
        if mine == 0 {
            return Ok(false);
        }
        Ok(finite_places_above(&self.field, p)?.len() == mine)
    }

    pub fn is_archimedean_only(&self) -> bool {
        self.finite.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arch.len() + self.finite.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn check_field(alpha: &FieldElement, s: &PlaceSet) -> Result<()> {
    if alpha.field() != &s.field {
        return Err(Error::FieldMismatch);
    }
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(())
}

fn rat_pow(p: u64, e: i64) -> BigRational {
    let pe = pow_int(&BigInt::from(p), e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(pe)
    } else {
        BigRational::new(BigInt::one(), pe)
    }
}

/// `N_S(alpha)` as the product of `p^(d_v v_P(alpha))` over finite places outside `S`.
pub fn s_norm(alpha: &FieldElement, s: &PlaceSet) -> Result<BigRational> {
    check_field(alpha, s)?;
    let k = alpha.field();
    let (nums, den, norm_a) = integral_parts(alpha);
    let d = k.degree() as i64;
    let mut primes: Vec<u64> = Vec::new();
    for n in [&norm_a, &den] {
        for (p, _) in factor_integer(n) {
            let p = u64::try_from(&p).map_err(|_| Error::PrimeTooLarge(p.to_string()))?;
            primes.push(p);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = BigRational::one();
    for p in primes {
        if s.covers_prime(p)? {
            continue;
        }
        let mine: Vec<&Place> = s.finite.iter().filter(|v| v.prime == p).collect();
        let e = if mine.is_empty() {
            // all places above p lie outside S: their degrees add up to v_p(N(alpha))
            i64::from(v_p(&norm_a, p)) - d * i64::from(v_p(&den, p))
        } else {
            let mut e = 0;
            for v in finite_places_above(k, p)? {
                if !mine.contains(&&v) {
                    let va = valuation_of_integral(k.poly(), &nums, &norm_a, &v)?
                        - i64::from(v_p(&den, p));
                    e += v.local_degree as i64 * va;
                }
            }
            e
        };
        out *= rat_pow(p, e);
    }
    Ok(out)
}

/// `N_S(alpha)` as `|N(alpha)|` times the finite factors `||alpha||_v` for `v` in `S`.
///
/// Needs no integer factorization; agrees with [`s_norm`] by the product formula.
pub fn s_norm_direct(alpha: &FieldElement, s: &PlaceSet) -> Result<BigRational> {
    check_field(alpha, s)?;
    let k = alpha.field();
    let norm = alpha.norm().abs();
    if s.finite.is_empty() {
        return Ok(norm);
    }
    let (nums, den, norm_a) = integral_parts(alpha);
    let mut out = norm;
    for v in &s.finite {
        let va = valuation_of_integral(k.poly(), &nums, &norm_a, v)? - i64::from(v_p(&den, v.prime));
        out *= rat_pow(v.prime, -(v.local_degree as i64) * va);
    }
    Ok(out)
}

/// Whether `v_P(alpha) >= 0` at every finite place outside `S`.
pub fn is_s_integer(alpha: &FieldElement, s: &PlaceSet) -> Result<bool> {
    if alpha.field() != &s.field {
        return Err(Error::FieldMismatch);
    }
    if alpha.is_zero() {
        return Ok(true);
    }
    let k = alpha.field();
    let (nums, den, norm_a) = integral_parts(alpha);
    let mut charpoly_den: Option<BigInt> = None;
    for (p, _) in factor_integer(&den) {
        if !s.finite.iter().any(|v| BigInt::from(v.prime) == p) {
            // integral at every place above p iff the characteristic polynomial is p-integral
            let cd = charpoly_den.get_or_insert_with(|| {
                alpha.charpoly().iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()))
            });
            if cd.is_multiple_of(&p) {
                return Ok(false);
            }
            continue;
        }
        let p = u64::try_from(&p).map_err(|_| Error::PrimeTooLarge(p.to_string()))?;
        if s.covers_prime(p)? {
            continue;
        }
        let vd = i64::from(v_p(&den, p));
        for v in finite_places_above(k, p)? {
            if s.contains(&v) {
                continue;
            }
            if valuation_of_integral(k.poly(), &nums, &norm_a, &v)? < vd {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_s_unit(alpha: &FieldElement, s: &PlaceSet) -> Result<bool> {
    if alpha.is_zero() {
        return Ok(false);
    }
    Ok(is_s_integer(alpha, s)? && s_norm_direct(alpha, s)?.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};

    fn sqrt2() -> NumberField {
        NumberField::from_i64(&[-2, 0, 1]).unwrap()
    }

    #[test]
    fn dedekind_criterion() {
        let cases = [
            (&[-2, 0, 1][..], 2, true),
            (&[1, 0, 1][..], 2, true),
            (&[-2, 0, 0, 1][..], 3, true),
            (&[-2, 0, 0, 1][..], 2, true),
            (&[-5, 0, 1][..], 2, false),
            (&[7, 0, 1][..], 2, false),
            (&[-2, 0, 1][..], 7, true),
        ];
        for (f, p, want) in cases {
            let k = NumberField::from_i64(f).unwrap();
            assert_eq!(is_p_maximal(k.poly(), p).unwrap(), want, "{f:?} at {p}");
        }
    }

    #[test]
    fn archimedean_counts() {
        let q = archimedean_places(&NumberField::rationals());
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].local_degree(), 1);
        let r = archimedean_places(&sqrt2());
        assert_eq!(r.iter().map(Place::kind).collect::<Vec<_>>(), vec![PlaceKind::Real; 2]);
        let c = archimedean_places(&NumberField::from_i64(&[1, 0, 1]).unwrap());
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].kind(), c[0].local_degree()), (PlaceKind::Complex, 2));
    }

    #[test]
    fn places_above_small_primes() {
        let k = sqrt2();
        let p7 = finite_places_above(&k, 7).unwrap();
        assert_eq!(p7.iter().map(Place::local_degree).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(p7[0].label(), "(7, t + 3)");
        assert_eq!(p7[1].label(), "(7, t + 4)");
        assert_eq!(finite_places_above(&k, 5).unwrap()[0].local_degree(), 2);
        assert_eq!(finite_places_above(&k, 2).unwrap_err(), Error::UnsupportedPrime(2));
        assert_eq!(finite_places_above(&k, 9).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn valuation_examples() {
        let k = sqrt2();
        let places = finite_places_above(&k, 7).unwrap();
        // (7, t + 3) is t = 4, (7, t + 4) is t = 3 modulo 7
        let (at4, at3) = (&places[0], &places[1]);
        let a = k.element(&[rat(3), rat(1)]);
        assert_eq!(valuation(&a, at4).unwrap(), 1);
        assert_eq!(valuation(&a, at3).unwrap(), 0);
        let b = a.scale(&rat_frac(1, 7));
        assert_eq!(valuation(&b, at3).unwrap(), -1);
        assert_eq!(valuation(&k.one(), at3).unwrap(), 0);
        assert_eq!(valuation(&k.zero(), at3), Err(Error::ZeroElement));
        // 7^5 * (3 + sqrt2)^3 needs precision well beyond one Hensel step
        let c = &a.pow(3) * &k.int(16807);
        assert_eq!(valuation(&c, at4).unwrap(), 8);
        assert_eq!(valuation(&c, at3).unwrap(), 5);
    }

    #[test]
    fn abs_norms() {
        let acc = Accuracy::default();
        let q = NumberField::rationals();
        let two = &finite_places_above(&q, 2).unwrap()[0];
        let half = q.element(&[rat_frac(1, 2)]);
        assert_eq!(abs_norm_at(&half, two, &acc).unwrap(), AbsValue::Exact(rat(2)));
        let k = sqrt2();
        let v = &finite_places_above(&k, 7).unwrap()[0];
        let a = k.element(&[rat(3), rat(1)]);
        assert_eq!(abs_norm_at(&a, v, &acc).unwrap(), AbsValue::Exact(rat_frac(1, 7)));
        let gi = NumberField::from_i64(&[1, 0, 1]).unwrap();
        let w = &archimedean_places(&gi)[0];
        match abs_norm_at(&gi.int(2), w, &acc).unwrap() {
            AbsValue::Log(l) => assert!((l.mid().to_f64() - 4f64.ln()).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn s_norm_examples() {
        let q = NumberField::rationals();
        let s2 = PlaceSet::from_primes(&q, &[2]).unwrap();
        assert_eq!(s_norm(&q.int(10), &s2).unwrap(), rat(5));
        let s23 = PlaceSet::from_primes(&q, &[2, 3]).unwrap();
        let x = q.element(&[rat_frac(8, 3)]);
        assert_eq!(s_norm(&x, &s23).unwrap(), rat(1));
        assert_eq!(s_norm_direct(&x, &s23).unwrap(), rat(1));
        assert!(is_s_unit(&q.int(8), &s2).unwrap());
        assert!(is_s_integer(&q.int(3), &s2).unwrap() && !is_s_unit(&q.int(3), &s2).unwrap());
        let k = sqrt2();
        let arch = PlaceSet::archimedean(&k);
        assert!(is_s_unit(&k.element(&[rat(1), rat(1)]), &arch).unwrap());
        assert!(!is_s_integer(&k.element(&[rat_frac(1, 3), rat(1)]), &arch).unwrap());
        // 2 is ramified in Q(sqrt2); 1/sqrt2 = t/2 is decided without its places
        assert!(!is_s_integer(&k.element(&[rat(0), rat_frac(1, 2)]), &arch).unwrap());
        let k5 = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        let golden = k5.element(&[rat_frac(1, 2), rat_frac(1, 2)]);
        assert!(is_s_unit(&golden, &PlaceSet::archimedean(&k5)).unwrap());
    }

    #[test]
    fn mixed_place_set_uses_individual_valuations() {
        let k = sqrt2();
        let places = finite_places_above(&k, 7).unwrap();
        let s = PlaceSet::new(&k, vec![places[0].clone()]).unwrap();
        let a = k.element(&[rat(3), rat(1)]);
        // 3 + sqrt2 lies only above (7, t + 3), which is in S
        assert_eq!(s_norm(&a, &s).unwrap(), rat(1));
        assert_eq!(s_norm_direct(&a, &s).unwrap(), rat(1));
        let b = k.element(&[rat(3), rat(-1)]);
        assert_eq!(s_norm(&b, &s).unwrap(), rat(7));
        assert_eq!(s_norm_direct(&b, &s).unwrap(), rat(7));
    }
}
