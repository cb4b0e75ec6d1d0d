//! Equation searches, growth profiles and experiments over families of forms.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::{
    assemble, build_classes, scan_shells, shell, to_point, EnumerationMode, InequalityInstance,
    Point, SolutionReport, Strategy,
};
use crate::error::{Error, Result};
use crate::exact::{parse_polynomial, Polynomial};
use crate::field::{FieldElement, FieldEmbedding};
use crate::forms::{form_build, general_position, DecomposableForm, GeneralPosition, LinearForm, MultiPoly};
use crate::numeric::{Accuracy, Interval};
use crate::places::{height, PlaceSet};

/// All nonzero points of the box with `F(x) = G(x) != 0`, grouped into classes.
pub fn equation_search(
    form: &DecomposableForm,
    g: &MultiPoly,
    bound: u64,
    acc: &Accuracy,
) -> Result<SolutionReport> {
    let started = Instant::now();
    let q = form.degree();
    let m = form.m();
    if g.field() != form.base_field() {
        return Err(Error::FieldMismatch);
    }
    if g.nvars() != m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            got: g.nvars(),
        });
    }
    let deg = g.total_degree() as usize;
    if !g.is_zero() && deg >= q {
        return Err(Error::DegreeTooLarge {
            degree: deg,
            limit: q - 1,
        });
    }
    let mut warnings = Vec::new();
    if !g.is_zero() && deg + 2 * m >= q {
        warnings.push(format!(
            "deg G = {deg} is not below q - 2m = {}; finiteness is not guaranteed",
            q as i64 - 2 * m as i64
        ));
    }
    let k = form.base_field();
    let n = (m + 1) * k.degree();
    let per_shell: Vec<(Vec<Point>, u64)> = (1..=bound as i64)
        .into_par_iter()
        .map(|s| {
            let mut hits = Vec::new();
            let mut scanned = 0;
            for v in shell(n, s, EnumerationMode::All) {
                scanned += 1;
                let x = to_point(k, &v);
                let gx = g.eval(&x)?;
                if !gx.is_zero() && form.eval(&x)? == gx {
                    hits.push(x);
                }
            }
            Ok((hits, scanned))
        })
        .collect::<Result<_>>()?;
    let accepted: Vec<Point> = per_shell.iter().flat_map(|(h, _)| h.clone()).collect();
    let scanned = per_shell.iter().map(|(_, s)| s).sum();
    let mut recheck_passed = true;
    for x in &accepted {
        recheck_passed &= form.eval_factors(x)? == g.eval(x)?;
    }
    let classes = build_classes(&accepted, form.places(), acc, |x| g.eval(x))?;
    Ok(SolutionReport {
        accepted,
        borderline: Vec::new(),
        classes,
        bound,
        scanned,
        strategy: Strategy::FullScan,
        recheck_passed,
        warnings,
        elapsed: started.elapsed(),
    })
}

/// Class counts for a growing sequence of bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub bound: u64,
    pub classes: usize,
    pub borderline: usize,
}

/// Counts classes for each bound, reusing the shells of smaller boxes.
pub fn growth_profile(inst: &InequalityInstance, bounds: &[u64]) -> Result<Vec<ProfileRow>> {
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("bounds must be strictly increasing".into()));
    }
    let mut shells = Vec::new();
    let mut done = 0;
    let mut rows = Vec::with_capacity(bounds.len());
    for &b in bounds {
        if b > done {
            shells.extend(scan_shells(inst, done + 1, b)?);
            done = b;
        }
        let report = assemble(inst, &shells, b, Instant::now())?;
        rows.push(ProfileRow {
            bound: b,
            classes: report.classes.len(),
            borderline: report.borderline.len(),
        });
    }
    Ok(rows)
}

/// A family `F_n = a(n) prod_j L_j(n)` whose coefficients are polynomials in `n`
/// and in the generator `t` of `G`, with a search budget `B(n)`.
#[derive(Clone, Debug)]
pub struct SequenceFamily {
    pub embedding: FieldEmbedding,
    pub places: PlaceSet,
    pub scalar: Polynomial,
    pub factors: Vec<Vec<Polynomial>>,
    pub budget: Polynomial,
    pub accuracy: Accuracy,
}

impl SequenceFamily {
    /// Parses coefficient templates in `n` and `t` and a budget template in `n`.
    pub fn parse(
        embedding: &FieldEmbedding,
        places: &PlaceSet,
        scalar: &str,
        factors: &[Vec<String>],
        budget: &str,
    ) -> Result<Self> {
        let vars = ["n", "t"];
        let factors = factors
            .iter()
            .map(|l| l.iter().map(|c| parse_polynomial(c, &vars)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SequenceFamily {
            embedding: embedding.clone(),
            places: places.clone(),
            scalar: parse_polynomial(scalar, &vars)?,
            factors,
            budget: parse_polynomial(budget, &["n"])?,
            accuracy: Accuracy::default(),
        })
    }

    fn element(&self, p: &Polynomial, n: i64) -> Result<FieldElement> {
        let nv = BigRational::from_integer(n.into());
        let p = p.substitute(0, &nv);
        let coeffs = p
            .univariate(1)
            .ok_or_else(|| Error::InvalidArgument(format!("template {p} is not polynomial in t")))?;
        Ok(FieldElement::from_poly(self.embedding.target(), &coeffs))
    }

    pub fn budget_at(&self, n: i64) -> Result<u64> {
        let v = self
            .budget
            .substitute(0, &BigRational::from_integer(n.into()))
            .as_constant()
            .expect("budget depends on n only");
        if !v.is_integer() || v.is_negative() {
            return Err(Error::InvalidArgument(format!("budget at n = {n} is not a nonnegative integer")));
        }
        v.to_integer()
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("budget too large".into()))
    }

    /// `F_n`, checked for general position.
    pub fn instantiate(&self, n: i64) -> Result<DecomposableForm> {
        let scalar = self.element(&self.scalar, n)?;
        let factors = self
            .factors
            .iter()
            .map(|l| {
                let coeffs = l.iter().map(|c| self.element(c, n)).collect::<Result<Vec<_>>>()?;
                LinearForm::new(coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = factors.first().map_or(0, |l| l.len().saturating_sub(1));
        if let GeneralPosition::Witness(w) = general_position(&factors, m) {
            return Err(Error::GeneralPositionFailure(w));
        }
        form_build(scalar, factors, &self.embedding, &self.places)
    }
}

/// One row of a sequence experiment.
#[derive(Clone, Debug)]
pub struct SequenceRow {
    pub n: i64,
    pub outcome: SequenceOutcome,
}

#[derive(Clone, Debug)]
pub enum SequenceOutcome {
    Solved {
        form_height: Interval,
        bound: u64,
        report: SolutionReport,
        /// `h(F_n) / h(x)` per class representative; `None` when `h(x) = 0`.
        ratios: Vec<Option<f64>>,
    },
    /// The instance was invalid; the row is kept with the reason.
    Skipped(Error),
}

/// Instantiates the family for each `n`, solves the inequality at budget `B(n)`
/// and records `h(F_n)` against the heights of the class representatives.
pub fn sequence_experiment(
    family: &SequenceFamily,
    ns: impl IntoIterator<Item = i64>,
    c: &BigRational,
    nu: &BigRational,
) -> Result<Vec<SequenceRow>> {
    let acc = family.accuracy;
    let mut rows = Vec::new();
    for n in ns {
        let form = match family.instantiate(n) {
            Ok(f) => f,
            Err(e) => {
                rows.push(SequenceRow {
                    n,
                    outcome: SequenceOutcome::Skipped(e),
                });
                continue;
            }
        };
        let bound = family.budget_at(n)?;
        let form_height = height(&form.coefficient_vector(), &acc)?;
        let mut inst = InequalityInstance::new(form, c.clone(), nu.clone(), bound)?;
        inst.accuracy = acc;
        let report = super::solve_inequality(&inst)?;
        let ratios = report
            .classes
            .iter()
            .map(|cl| {
                let h = height(&cl.representative, &acc)?;
                Ok(if h.lo.is_zero() || h.contains(&crate::numeric::Dyadic::zero()) {
                    None
                } else {
                    Some(form_height.mid().to_f64() / h.mid().to_f64())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(SequenceRow {
            n,
            outcome: SequenceOutcome::Solved {
                form_height,
                bound,
                report,
                ratios,
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};
    use crate::field::NumberField;

    #[test]
    fn family_rows() {
        let q = NumberField::rationals();
        let s = PlaceSet::archimedean(&q);
        let emb = FieldEmbedding::identity(&q);
        let f = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let fam = SequenceFamily::parse(
            &emb,
            &s,
            "1",
            &[f(&["1", "0"]), f(&["1", "-n"]), f(&["1", "n"])],
            "1000",
        )
        .unwrap();
        let rows = sequence_experiment(&fam, [5], &rat(1), &rat_frac(9, 10)).unwrap();
        let SequenceOutcome::Solved { form_height, report, ratios, .. } = &rows[0].outcome else {
            panic!("row skipped")
        };
        assert!((form_height.mid().to_f64() - 25f64.ln()).abs() < 1e-12);
        assert!(report.class_count() >= 1);
        assert_eq!(ratios.len(), report.class_count());
        assert_eq!(ratios[0], None);

        let bad = SequenceFamily::parse(
            &emb,
            &s,
            "1",
            &[f(&["1", "0"]), f(&["1", "-1"]), f(&["1", "-n"])],
            "10",
        )
        .unwrap();
        let rows = sequence_experiment(&bad, 1..=2, &rat(1), &rat(0)).unwrap();
        assert!(matches!(
            rows[0].outcome,
            SequenceOutcome::Skipped(Error::GeneralPositionFailure(ref w)) if w == &vec![1, 2]
        ));
        assert!(matches!(rows[1].outcome, SequenceOutcome::Solved { .. }));
    }
}
