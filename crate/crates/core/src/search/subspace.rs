//! The proximity functional of the subspace theorem and greedy subspace covers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::Point;
use crate::error::{Error, Result};
use crate::exact::arith::pow_int;
use crate::exact::matrix::rank;
use crate::field::FieldElement;
use crate::forms::DecomposableForm;
use crate::numeric::{ln_rational, Accuracy, Interval};
use crate::places::{places_above, s_height_value, s_norm_direct, valuation, Place, PlaceSet};

/// Both evaluations of the functional; they must overlap.
#[derive(Clone, Debug)]
pub struct FunctionalPaths {
    /// `(1/[G:Q]) sum_v sum_j log(||x||_v ||L_j||_v / ||L_j(x)||_v)`.
    pub term_by_term: Interval,
    /// `(1/[G:Q]) (q log H_T(x) + sum_j log H_T(L_j) - log N_T(prod_j L_j(x)))`.
    pub telescoped: Interval,
}

impl FunctionalPaths {
    pub fn agree(&self) -> bool {
        self.term_by_term.overlaps(&self.telescoped)
    }
}

fn prime_power(p: u64, e: i64) -> BigRational {
    let pe = pow_int(&BigInt::from(p), e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(pe)
    } else {
        BigRational::new(BigInt::one(), pe)
    }
}

fn double(iv: &Interval) -> Interval {
    Interval::new(iv.lo.mul_pow2(1), iv.hi.mul_pow2(1))
}

/// `log ||v||_w` for a vector at an archimedean place.
fn arch_log(v: &[FieldElement], w: &Place, acc: &Accuracy) -> Result<Interval> {
    let mut best: Option<Interval> = None;
    for c in v.iter().filter(|c| !c.is_zero()) {
        let l = c.log_abs_at(w.index(), acc)?;
        best = Some(match best {
            None => l,
            Some(b) => b.max(&l),
        });
    }
    let l = best.ok_or(Error::ZeroElement)?;
    Ok(if w.local_degree() == 2 { double(&l) } else { l })
}

/// `min_i v(c_i)` over the nonzero entries.
fn min_valuation(v: &[FieldElement], w: &Place) -> Result<i64> {
    v.iter()
        .filter(|c| !c.is_zero())
        .map(|c| valuation(c, w))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or(Error::ZeroElement)
}

/// `log H_T(v)` for any nonzero vector over `G`.
fn t_height_log(v: &[FieldElement], t: &PlaceSet, acc: &Accuracy) -> Result<Interval> {
    let prec = acc.tolerance_bits + 32;
    let mut sum = Interval::zero();
    for w in t.archimedean_places() {
        sum = sum.add(&arch_log(v, w, acc)?, prec);
    }
    let mut fin = BigRational::one();
    for w in t.finite_places() {
        fin *= prime_power(w.prime(), -(w.local_degree() as i64) * min_valuation(v, w)?);
    }
    Ok(sum.add(&ln_rational(&fin, acc.tolerance_bits + 4), prec))
}

fn divide_by(iv: &Interval, n: usize, prec: u32) -> Interval {
    iv.mul(&Interval::from_rational(&BigRational::new(1.into(), n.into()), prec), prec)
}

/// Evaluates the functional for a point `x` over `K` with S-integral coordinates.
/// `FactorVanishes(j)` when `L_j(x) = 0`.
pub fn subspace_functional(
    x: &[FieldElement],
    form: &DecomposableForm,
    acc: &Accuracy,
) -> Result<FunctionalPaths> {
    let emb = form.embedding();
    let g = emb.target();
    let t = places_above(emb, form.places())?;
    let y: Vec<FieldElement> = x.iter().map(|c| emb.push(c)).collect();
    let values = form
        .factors()
        .iter()
        .map(|l| l.eval(&y))
        .collect::<Result<Vec<_>>>()?;
    if let Some(j) = values.iter().position(FieldElement::is_zero) {
        return Err(Error::FactorVanishes(j));
    }
    let q = form.degree();
    let terms = 3 * q * (t.len() + 1) + 4;
    let extra = usize::BITS - terms.leading_zeros() + 2;
    let inner = acc.with_bits(acc.tolerance_bits + extra);
    let prec = inner.tolerance_bits + 32;

    let mut sum = Interval::zero();
    let mut fin = BigRational::one();
    for w in t.archimedean_places() {
        let lx = arch_log(&y, w, &inner)?;
        for (l, v) in form.factors().iter().zip(&values) {
            let ll = arch_log(l.coeffs(), w, &inner)?;
            let lv = arch_log(std::slice::from_ref(v), w, &inner)?;
            sum = sum.add(&lx, prec).add(&ll, prec).sub(&lv, prec);
        }
    }
    for w in t.finite_places() {
        let dv = w.local_degree() as i64;
        let vx = min_valuation(&y, w)?;
        for (l, v) in form.factors().iter().zip(&values) {
            let e = -vx - min_valuation(l.coeffs(), w)? + valuation(v, w)?;
            fin *= prime_power(w.prime(), dv * e);
        }
    }
    let term_by_term = divide_by(
        &sum.add(&ln_rational(&fin, inner.tolerance_bits + 4), prec),
        g.degree(),
        prec,
    );

    let hx = s_height_value(x, form.places(), &inner)?.log(&inner);
    let hy = hx.scale_int(&BigInt::from(emb.relative_degree()), prec);
    let mut total = hy.scale_int(&BigInt::from(q), prec);
    for l in form.factors() {
        total = total.add(&t_height_log(l.coeffs(), &t, &inner)?, prec);
    }
    let product = values.iter().skip(1).fold(values[0].clone(), |a, b| &a * b);
    let nt = s_norm_direct(&product, &t)?;
    total = total.sub(&ln_rational(&nt, inner.tolerance_bits + 4), prec);
    let telescoped = divide_by(&total, g.degree(), prec);
    Ok(FunctionalPaths {
        term_by_term,
        telescoped,
    })
}

/// A greedy cover of a point set by subspaces of dimension at most `l`.
#[derive(Clone, Debug)]
pub struct SubspaceCover {
    pub l: usize,
    /// A basis of each subspace.
    pub bases: Vec<Vec<Point>>,
    /// Subspace index of every input point.
    pub assignment: Vec<usize>,
}

impl SubspaceCover {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Exact membership and dimension checks.
    pub fn verify(&self, points: &[Point]) -> bool {
        if points.len() != self.assignment.len() {
            return false;
        }
        self.bases.iter().all(|b| b.len() <= self.l && rank(b) == b.len())
            && points.iter().zip(&self.assignment).all(|(p, &i)| {
                let mut rows = self.bases[i].clone();
                rows.push(p.clone());
                rank(&rows) == self.bases[i].len()
            })
    }
}

/// Seeds a subspace with the first uncovered point and absorbs, in order, every
/// later point that keeps the dimension at most `l`.
pub fn subspace_cover(points: &[Point], l: usize) -> Result<SubspaceCover> {
    if let Some(first) = points.first() {
        let n = first.len();
        if l == 0 || l > n {
            return Err(Error::InvalidArgument(format!("l must lie in 1..={n}")));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        if points.iter().any(|p| p.iter().all(FieldElement::is_zero)) {
            return Err(Error::ZeroElement);
        }
    } else if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    let mut assignment = vec![usize::MAX; points.len()];
    let mut bases: Vec<Vec<Point>> = Vec::new();
    for seed in 0..points.len() {
        if assignment[seed] != usize::MAX {
            continue;
        }
        let idx = bases.len();
        let mut basis = vec![points[seed].clone()];
        assignment[seed] = idx;
        for j in seed + 1..points.len() {
            if assignment[j] != usize::MAX {
                continue;
            }
            let mut rows = basis.clone();
            rows.push(points[j].clone());
            let r = rank(&rows);
            if r <= l {
                assignment[j] = idx;
                if r > basis.len() {
                    basis = rows;
                }
            }
        }
        bases.push(basis);
    }
    Ok(SubspaceCover {
        l,
        bases,
        assignment,
    })
}
