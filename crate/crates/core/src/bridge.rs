//! Polynomials given by their roots, the reduction of resultant inequalities to
//! decomposable forms, and the identity `Res(P, Q) = F(x_Q)`.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{resultant, UniPoly};
use crate::field::{FieldElement, FieldEmbedding, NumberField};
use crate::forms::{form_build, DecomposableForm, LinearForm};
use crate::numeric::{Accuracy, CInterval, Interval};
use crate::places::{height, is_s_integer, PlaceSet};
use crate::search::{solve_inequality, InequalityInstance, SolutionReport};

/// `P = a0 (X - alpha_1) ... (X - alpha_q)` with `a0` in `K` and distinct roots in `G`.
#[derive(Clone, Debug)]
pub struct FactoredPoly {
    leading: FieldElement,
    roots: Vec<FieldElement>,
    embedding: FieldEmbedding,
    s: PlaceSet,
    expanded: UniPoly<FieldElement>,
}

impl FactoredPoly {
    /// Validates the roots and checks that the expansion has S-integral
    /// coefficients in `K`.
    pub fn new(
        leading: FieldElement,
        roots: Vec<FieldElement>,
        embedding: &FieldEmbedding,
        s: &PlaceSet,
    ) -> Result<Self> {
        let k = embedding.source();
        let g = embedding.target();
        if leading.field() != k || s.field() != k || roots.iter().any(|r| r.field() != g) {
            return Err(Error::FieldMismatch);
        }
        if leading.is_zero() {
            return Err(Error::ZeroElement);
        }
        if roots.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        for (i, r) in roots.iter().enumerate() {
            if roots[..i].contains(r) {
                return Err(Error::RepeatedRoots);
            }
        }
        // ascending coefficients of a0 * prod (X - alpha)
        let mut coeffs = vec![embedding.push(&leading)];
        for r in &roots {
            let mut next = vec![g.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * r);
            }
            coeffs = next;
        }
        let pulled = coeffs
            .iter()
            .map(|c| {
                embedding.pull(c).map_err(|e| match e {
                    Error::EmbeddingUndefined => Error::CoefficientNotInK,
                    e => e,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for c in &pulled {
            if !is_s_integer(c, s)? {
                return Err(Error::NotSIntegral);
            }
        }
        Ok(FactoredPoly {
            expanded: UniPoly::new(pulled, &k.one()),
            leading,
            roots,
            embedding: embedding.clone(),
            s: s.clone(),
        })
    }

    /// A polynomial over `K = G = Q` with integer roots.
    pub fn rational(leading: i64, roots: &[i64], s: &PlaceSet) -> Result<Self> {
        let q = NumberField::rationals();
        Self::new(
            q.int(leading),
            roots.iter().map(|&r| q.int(r)).collect(),
            &FieldEmbedding::identity(&q),
            s,
        )
    }

    pub fn leading(&self) -> &FieldElement {
        &self.leading
    }

    pub fn roots(&self) -> &[FieldElement] {
        &self.roots
    }

    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }

    pub fn places(&self) -> &PlaceSet {
        &self.s
    }

    /// The expansion over `K`.
    pub fn expanded(&self) -> &UniPoly<FieldElement> {
        &self.expanded
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }
}

/// `F = a0^m prod_i (X0 alpha_i^m + X1 alpha_i^(m-1) + ... + Xm)`.
pub fn resultant_form(p: &FactoredPoly, m: usize) -> Result<DecomposableForm> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let g = p.embedding.target();
    let scalar = p.embedding.push(&p.leading.pow(m as u32));
    let factors = p
        .roots
        .iter()
        .map(|r| {
            let coeffs = (0..=m).map(|j| r.pow((m - j) as u32)).collect();
            LinearForm::new(coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(factors.iter().all(|l| l.field() == g));
    form_build(scalar, factors, &p.embedding, &p.s)
}

/// Coefficients of `Q`, highest degree first: the point `x_Q`.
pub fn coefficient_point(q: &UniPoly<FieldElement>) -> Vec<FieldElement> {
    q.coeffs_desc()
}

/// The polynomial `x0 X^m + ... + xm`.
pub fn point_polynomial(x: &[FieldElement]) -> UniPoly<FieldElement> {
    UniPoly::from_desc(x.to_vec(), &x[0].field().one())
}

/// Checks `Res(P, Q) = F(x_Q)` exactly, where `F = resultant_form(P, m)`.
pub fn res_identity_check(p: &FactoredPoly, q: &UniPoly<FieldElement>, m: usize) -> Result<bool> {
    let got = q.degree().ok_or(Error::ZeroPolynomial)?;
    if got != m {
        return Err(Error::DegreeMismatch { expected: m, got });
    }
    let lhs = resultant(&p.expanded, q)?;
    let f = resultant_form(p, m)?;
    let rhs = f.eval(&coefficient_point(q))?;
    Ok(lhs == rhs)
}

/// `a0^deg Q * prod Q(alpha_i)` evaluated in complex interval arithmetic at one
/// embedding of `G`; it contains `Res(P, Q)` there.
pub fn resultant_root_product(
    p: &FactoredPoly,
    q: &UniPoly<FieldElement>,
    acc: &Accuracy,
) -> Result<CInterval> {
    let bits = acc.tolerance_bits + 64;
    let embed = |x: &FieldElement| p.embedding.push(x).embed(0, bits, acc.cap);
    let mut out = embed(&p.leading.pow(q.degree().unwrap_or(0) as u32))?;
    let qc = q
        .coeffs_desc()
        .iter()
        .map(embed)
        .collect::<Result<Vec<_>>>()?;
    for r in &p.roots {
        let z = r.embed(0, bits, acc.cap)?;
        let mut v = CInterval::real(Interval::zero());
        for c in &qc {
            v = v.mul(&z, bits).add(c, bits);
        }
        out = out.mul(&v, bits);
    }
    Ok(out)
}

/// `h(P)`, `h(F)` and the measured slack `h(F) - q h(P)`.
#[derive(Clone, Debug)]
pub struct HeightBoundReport {
    pub poly: Interval,
    pub form: Interval,
    pub slack: Interval,
}

pub fn height_bound_report(p: &FactoredPoly, m: usize, acc: &Accuracy) -> Result<HeightBoundReport> {
    let inner = acc.with_bits(acc.tolerance_bits + 8);
    let poly = height(p.expanded.coeffs(), &inner)?;
    let f = resultant_form(p, m)?;
    let form = height(&f.coefficient_vector(), &inner)?;
    let prec = inner.tolerance_bits + 32;
    let slack = form.sub(&poly.scale_int(&(p.degree() as i64).into(), prec), prec);
    Ok(HeightBoundReport { poly, form, slack })
}

/// Solves `0 < N_S(Res(P, Q)) <= c H_S(Q)^nu` over polynomials `Q` of degree
/// exactly `m` with coefficient vectors in the search box.
pub fn res_ineq_search(
    p: &FactoredPoly,
    m: usize,
    c: BigRational,
    nu: BigRational,
    bound: u64,
    strict: bool,
    acc: &Accuracy,
) -> Result<SolutionReport> {
    let f = resultant_form(p, m)?;
    let mut instance = InequalityInstance::new(f, c, nu, bound)?;
    instance.strict = strict;
    instance.accuracy = *acc;
    instance.leading_nonzero = true;
    solve_inequality(&instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Dyadic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inf() -> PlaceSet {
        PlaceSet::archimedean(&NumberField::rationals())
    }

    fn sqrt2_poly() -> FactoredPoly {
        let g = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let r = g.generator();
        FactoredPoly::new(
            NumberField::rationals().one(),
            vec![r.clone(), -&r],
            &FieldEmbedding::from_rationals(&g),
            &inf(),
        )
        .unwrap()
    }

    fn qpoly(desc: &[i64]) -> UniPoly<FieldElement> {
        let q = NumberField::rationals();
        UniPoly::from_desc(desc.iter().map(|&c| q.int(c)).collect(), &q.one())
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(resultant_form(&sqrt2_poly(), 1).unwrap().to_string(), "-2*X0^2 + X1^2");
        let p = FactoredPoly::rational(2, &[1, 3], &inf()).unwrap();
        assert_eq!(resultant_form(&p, 1).unwrap().to_string(), "6*X0^2 + 8*X0*X1 + 2*X1^2");
        let p = FactoredPoly::rational(1, &[5], &inf()).unwrap();
        assert_eq!(resultant_form(&p, 2).unwrap().to_string(), "25*X0 + 5*X1 + X2");
        assert_eq!(
            FactoredPoly::rational(1, &[2, 2], &inf()).unwrap_err(),
            Error::RepeatedRoots
        );
    }

    #[test]
    fn identity_examples() {
        assert!(res_identity_check(&sqrt2_poly(), &qpoly(&[1, -1]), 1).unwrap());
        let f = resultant_form(&sqrt2_poly(), 1).unwrap();
        let q = NumberField::rationals();
        assert_eq!(f.eval(&[q.int(1), q.int(-1)]).unwrap(), q.int(-1));
        let p = FactoredPoly::rational(2, &[1, 3], &inf()).unwrap();
        assert!(res_identity_check(&p, &qpoly(&[1, -2]), 1).unwrap());
        assert_eq!(resultant(p.expanded(), &qpoly(&[1, -2])).unwrap(), q.int(-2));
        assert_eq!(
            res_identity_check(&p, &qpoly(&[1, -2]), 2),
            Err(Error::DegreeMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn identity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let acc = Accuracy::default();
        for _ in 0..40 {
            let q = rng.gen_range(1..=5);
            let mut roots: Vec<i64> = Vec::new();
            while roots.len() < q {
                let r = rng.gen_range(-9..=9);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let p = FactoredPoly::rational(rng.gen_range(1..=4), &roots, &inf()).unwrap();
            let m = rng.gen_range(1..=3);
            let mut desc: Vec<i64> = (0..=m).map(|_| rng.gen_range(-9..=9)).collect();
            if desc[0] == 0 {
                desc[0] = 1;
            }
            let qp = qpoly(&desc);
            assert!(res_identity_check(&p, &qp, m).unwrap());
            let exact = resultant(p.expanded(), &qp).unwrap();
            let enclosure = resultant_root_product(&p, &qp, &acc).unwrap();
            assert!(enclosure.contains_rational(&exact.as_rational().unwrap()));
        }
    }

    #[test]
    fn height_bound_example() {
        let acc = Accuracy::default();
        let r = height_bound_report(&sqrt2_poly(), 1, &acc).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((r.poly.mid().to_f64() - ln2).abs() < 1e-12);
        assert!((r.form.mid().to_f64() - ln2).abs() < 1e-12);
        assert!((r.slack.mid().to_f64() + ln2).abs() < 1e-12);
        let lin = FactoredPoly::rational(1, &[1], &inf()).unwrap();
        let r = height_bound_report(&lin, 1, &acc).unwrap();
        assert!(r.slack.contains(&Dyadic::zero()));
    }
}
