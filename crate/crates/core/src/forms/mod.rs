//! Decomposable forms `a * L_1 * ... * L_q` in factored representation over an
//! extension `G` of `K`, with an exactly verified expansion over `K`.

mod multipoly;

pub use multipoly::{variable_names, MultiPoly};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::arith::pow_rat;
use crate::exact::matrix::{determinant, rank};
use crate::field::{FieldElement, FieldEmbedding, NumberField};
use crate::numeric::{compare_log, Accuracy, Interval};
use crate::places::{height, is_s_integer, s_height_value, s_norm_direct, HeightValue, PlaceSet};

/// A linear form `c_0 X0 + ... + c_m Xm` with coefficients in one field.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("linear form without coefficients".into()));
        };
        if coeffs.iter().any(|c| c.field() != first.field()) {
            return Err(Error::FieldMismatch);
        }
        if coeffs.iter().all(FieldElement::is_zero) {
            return Err(Error::ZeroElement);
        }
        Ok(LinearForm { coeffs })
    }

    /// A form with rational coefficients, viewed in `field`.
    pub fn rational(field: &NumberField, coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn field(&self) -> &NumberField {
        self.coeffs[0].field()
    }

    /// Number of variables, `m + 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: x.len(),
            });
        }
        let mut acc = self.field().zero();
        for (c, xi) in self.coeffs.iter().zip(x) {
            if xi.field() != self.field() {
                return Err(Error::FieldMismatch);
            }
            if !c.is_zero() && !xi.is_zero() {
                acc = &acc + &(c * xi);
            }
        }
        Ok(acc)
    }

    fn as_poly(&self) -> MultiPoly {
        let n = self.coeffs.len();
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e, c.clone())
        });
        MultiPoly::new(self.field(), n, terms).expect("consistent terms")
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_poly().fmt(f)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({self})")
    }
}

/// A validated decomposable form. The expansion has coefficients in `K` that are
/// S-integers for the declared `S`.
#[derive(Clone)]
pub struct DecomposableForm {
    scalar: FieldElement,
    factors: Vec<LinearForm>,
    embedding: FieldEmbedding,
    s: PlaceSet,
    expanded: MultiPoly,
    /// The expansion as integer terms when `K = Q` and every coefficient is integral.
    integer_terms: Option<Vec<(Vec<u32>, BigInt)>>,
}

/// Expands `a * prod L_j` over `G`, pulls the coefficients back to `K` and checks
/// that they are S-integers.
pub fn form_build(
    a: FieldElement,
    factors: Vec<LinearForm>,
    embedding: &FieldEmbedding,
    s: &PlaceSet,
) -> Result<DecomposableForm> {
    let g = embedding.target();
    let k = embedding.source();
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    if a.field() != g || factors.iter().any(|l| l.field() != g) || s.field() != k {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = factors[0].len();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: n });
    }
    if let Some(l) = factors.iter().find(|l| l.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: l.len(),
        });
    }
    let mut prod = MultiPoly::constant(g, n, a.clone())?;
    for l in &factors {
        prod = prod.mul(&l.as_poly());
    }
    let expanded = prod.map_coefficients(k, |c| {
        embedding.pull(c).map_err(|e| match e {
            Error::EmbeddingUndefined => Error::CoefficientNotInK,
            e => e,
        })
    })?;
    for (_, c) in expanded.terms() {
        if !is_s_integer(c, s)? {
            return Err(Error::NotSIntegral);
        }
    }
    let integer_terms = if k.is_rationals() {
        expanded
            .terms()
            .iter()
            .map(|(e, c)| {
                let r = c.as_rational().expect("rational field");
                r.is_integer().then(|| (e.clone(), r.to_integer()))
            })
            .collect()
    } else {
        None
    };
    Ok(DecomposableForm {
        scalar: a,
        factors,
        embedding: embedding.clone(),
        s: s.clone(),
        expanded,
        integer_terms,
    })
}

impl DecomposableForm {
    /// A form over `K = G = Q` with integer factor coefficients.
    pub fn rational(scalar: BigRational, factors: &[&[i64]], s: &PlaceSet) -> Result<Self> {
        let q = NumberField::rationals();
        let factors = factors
            .iter()
            .map(|c| LinearForm::rational(&q, c))
            .collect::<Result<Vec<_>>>()?;
        form_build(
            FieldElement::from_rational(&q, scalar),
            factors,
            &FieldEmbedding::identity(&q),
            s,
        )
    }

    pub fn scalar(&self) -> &FieldElement {
        &self.scalar
    }

    pub fn factors(&self) -> &[LinearForm] {
        &self.factors
    }

    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }

    /// The field `K` of the expanded coefficients.
    pub fn base_field(&self) -> &NumberField {
        self.embedding.source()
    }

    /// The field `G` of the linear factors.
    pub fn factor_field(&self) -> &NumberField {
        self.embedding.target()
    }

    pub fn places(&self) -> &PlaceSet {
        &self.s
    }

    pub fn expanded(&self) -> &MultiPoly {
        &self.expanded
    }

    /// Degree `q`.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// `m`, one less than the number of variables.
    pub fn m(&self) -> usize {
        self.factors[0].len() - 1
    }

    /// Coefficients of the expansion, the point whose height is `h(F)`.
    pub fn coefficient_vector(&self) -> Vec<FieldElement> {
        self.expanded.coefficients()
    }

    /// `F(x)` from the expanded table.
    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        self.expanded.eval(x)
    }

    /// `F(x)` as `a * prod L_j(x)`, computed in `G` and pulled back to `K`.
    pub fn eval_factors(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.m() + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.m() + 1,
                got: x.len(),
            });
        }
        if x.iter().any(|c| c.field() != self.base_field()) {
            return Err(Error::FieldMismatch);
        }
        let y: Vec<FieldElement> = x.iter().map(|c| self.embedding.push(c)).collect();
        let mut acc = self.scalar.clone();
        for l in &self.factors {
            acc = &acc * &l.eval(&y)?;
        }
        self.embedding.pull(&acc)
    }

    /// Fast integer evaluation, available when `K = Q` and the expansion is integral.
    pub fn eval_integers(&self, x: &[BigInt]) -> Option<BigInt> {
        let terms = self.integer_terms.as_ref()?;
        let mut acc = BigInt::from(0);
        for (e, c) in terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Checked `i128` evaluation; `None` on overflow or without an integer table.
    pub fn eval_i128(&self, x: &[i64]) -> Option<i128> {
        let terms = self.integer_terms.as_ref()?;
        let mut acc: i128 = 0;
        for (e, c) in terms {
            let mut t = c.to_i128()?;
            for (&xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(i128::from(xi))?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    pub fn has_integer_table(&self) -> bool {
        self.integer_terms.is_some()
    }
}

impl fmt::Display for DecomposableForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expanded.fmt(f)
    }
}

impl fmt::Debug for DecomposableForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DecomposableForm({} = {} * {:?})",
            self.expanded, self.scalar, self.factors
        )
    }
}

/// Outcome of [`general_position`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralPosition {
    Ok,
    /// Indices of a linearly dependent subset.
    Witness(Vec<usize>),
}

impl GeneralPosition {
    pub fn is_ok(&self) -> bool {
        matches!(self, GeneralPosition::Ok)
    }
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks that any `m + 1` of the factors are linearly independent, returning the
/// lexicographically first singular subset otherwise. With fewer than `m + 1`
/// factors the condition is that all of them are independent.
pub fn general_position(factors: &[LinearForm], m: usize) -> GeneralPosition {
    let n = m + 1;
    let rows: Vec<Vec<FieldElement>> = factors.iter().map(|l| l.coeffs().to_vec()).collect();
    if factors.len() < n {
        return if rank(&rows) == factors.len() {
            GeneralPosition::Ok
        } else {
            GeneralPosition::Witness((0..factors.len()).collect())
        };
    }
    let one = factors[0].field().one();
    let mut c: Vec<usize> = (0..n).collect();
    loop {
        let minor: Vec<Vec<FieldElement>> = c.iter().map(|&i| rows[i].clone()).collect();
        if determinant(&minor, &one).is_zero() {
            return GeneralPosition::Witness(c);
        }
        if !next_combination(&mut c, factors.len()) {
            return GeneralPosition::Ok;
        }
    }
}

/// Heights of a form and of its factors, with the measured slack
/// `max_j h(L_j) - h(F)`.
#[derive(Clone, Debug)]
pub struct FactorHeights {
    pub form: Interval,
    pub factors: Vec<Interval>,
    pub slack: Interval,
}

pub fn factor_heights(f: &DecomposableForm, acc: &Accuracy) -> Result<FactorHeights> {
    let inner = acc.with_bits(acc.tolerance_bits + 2);
    let form = height(&f.coefficient_vector(), &inner)?;
    let factors = f
        .factors()
        .iter()
        .map(|l| height(l.coeffs(), &inner))
        .collect::<Result<Vec<_>>>()?;
    let top = factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |a, b| a.max(b));
    let slack = top.sub(&form, inner.tolerance_bits + 32);
    Ok(FactorHeights {
        form,
        factors,
        slack,
    })
}

/// Checks `N_S(G(x)) <= c3 * H_S(G) * H_S(x)^deg G` with
/// `c3 = (number of monomials)^[K:Q]`.
pub fn poly_eval_bound_check(
    g: &MultiPoly,
    x: &[FieldElement],
    s: &PlaceSet,
    acc: &Accuracy,
) -> Result<bool> {
    if g.field() != s.field() {
        return Err(Error::FieldMismatch);
    }
    for (_, c) in g.terms() {
        if !is_s_integer(c, s)? {
            return Err(Error::NotSIntegral);
        }
    }
    let value = g.eval(x)?;
    if value.is_zero() {
        return Err(Error::ZeroValue);
    }
    let lhs = s_norm_direct(&value, s)?;
    let c3 = pow_rat(
        &BigRational::from_integer(BigInt::from(g.monomial_count())),
        g.field().degree() as u32,
    );
    let deg = g.total_degree();
    let hg = s_height_value(&g.coefficients(), s, acc)?;
    let hx = if deg == 0 {
        HeightValue::Exact(BigRational::from_integer(1.into()))
    } else {
        s_height_value(x, s, acc)?
    };
    if let (HeightValue::Exact(hg), HeightValue::Exact(hx)) = (&hg, &hx) {
        return Ok(lhs <= &c3 * hg * pow_rat(hx, deg));
    }
    let ord = compare_log(
        &lhs,
        |a| {
            let prec = a.tolerance_bits + 32;
            let lg = s_height_value(&g.coefficients(), s, a)?.log(a);
            let lx = match &hx {
                HeightValue::Exact(h) => crate::numeric::ln_rational(h, a.tolerance_bits + 4),
                HeightValue::Log(_) => s_height_value(x, s, a)?.log(a),
            };
            let c = crate::numeric::ln_rational(&c3, a.tolerance_bits + 4);
            Ok(c.add(&lg, prec)
                .add(&lx.scale_int(&BigInt::from(deg), prec), prec))
        },
        acc,
    )?;
    match ord {
        Some(o) => Ok(o == Ordering::Less),
        None => Err(Error::PrecisionCapExceeded { cap: acc.cap }),
    }
}

#[cfg(test)]
mod tests;
