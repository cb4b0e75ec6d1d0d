//! Multivariate polynomials with coefficients in a number field.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::arith::format_rational;
use crate::exact::{parse_polynomial, Polynomial};
use crate::field::{FieldElement, NumberField};

/// A polynomial in `X0, ..., X(n-1)` over a number field. Terms are kept with
/// nonzero coefficients, largest exponent vector first.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: NumberField,
    nvars: usize,
    terms: Vec<(Vec<u32>, FieldElement)>,
}

impl MultiPoly {
    pub fn new(
        field: &NumberField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            let slot = map.entry(e).or_insert_with(|| field.zero());
            *slot = &*slot + &c;
        }
        Ok(MultiPoly {
            field: field.clone(),
            nvars,
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn constant(field: &NumberField, nvars: usize, c: FieldElement) -> Result<Self> {
        Self::new(field, nvars, [(vec![0; nvars], c)])
    }

    /// Converts a rational polynomial whose variables are among `gen` (read as the
    /// generator of `field`) and the listed form variables, in that order.
    pub fn from_polynomial(
        p: &Polynomial,
        field: &NumberField,
        gen: Option<&str>,
        vars: &[&str],
    ) -> Result<Self> {
        let gen_idx = gen.and_then(|g| p.var_index(g));
        let idx: Vec<Option<usize>> = vars.iter().map(|v| p.var_index(v)).collect();
        for name in p.vars() {
            if Some(name.as_str()) != gen && !vars.contains(&name.as_str()) {
                return Err(Error::InvalidArgument(format!("unexpected variable {name}")));
            }
        }
        let theta = field.generator();
        let mut terms = Vec::with_capacity(p.terms().len());
        for (e, c) in p.terms() {
            let mut coeff = FieldElement::from_rational(field, c.clone());
            if let Some(g) = gen_idx {
                coeff = &coeff * &theta.pow(e[g]);
            }
            let exps = idx.iter().map(|i| i.map_or(0, |i| e[i])).collect();
            terms.push((exps, coeff));
        }
        Self::new(field, vars.len(), terms)
    }

    /// Parses an expression in `t` (the generator) and `X0, ..., X(nvars-1)`.
    pub fn parse(s: &str, field: &NumberField, nvars: usize) -> Result<Self> {
        let names = variable_names(nvars);
        let mut all: Vec<&str> = vec!["t"];
        all.extend(names.iter().map(String::as_str));
        let p = parse_polynomial(s, &all)?;
        Self::from_polynomial(&p, field, Some("t"), &all[1..])
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.iter().all(|(e, _)| e.iter().sum::<u32>() == d)
    }

    /// The coefficient vector, in term order.
    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.terms.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut out = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push((e, c1 * c2));
            }
        }
        Self::new(&self.field, self.nvars, out).expect("consistent terms")
    }

    pub fn map_coefficients(
        &self,
        field: &NumberField,
        mut f: impl FnMut(&FieldElement) -> Result<FieldElement>,
    ) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), f(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, self.nvars, terms)
    }

    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        if x.iter().any(|c| c.field() != &self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut powers: Vec<Vec<FieldElement>> = Vec::with_capacity(self.nvars);
        for (i, xi) in x.iter().enumerate() {
            let top = self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0);
            let mut row = vec![self.field.one()];
            for k in 1..=top as usize {
                let next = &row[k - 1] * xi;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

/// `["X0", "X1", ...]`
pub fn variable_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

fn format_coefficient(c: &FieldElement) -> (bool, String) {
    match c.as_rational() {
        Some(r) => {
            let neg = r < num_traits::Zero::zero();
            let a = if neg { -r } else { r };
            (neg, if a.is_one() { String::new() } else { format_rational(&a) })
        }
        None => {
            let s = c.to_string();
            (false, if s.contains(' ') { format!("({s})") } else { s })
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let (neg, coeff) = format_coefficient(c);
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("X{i}") } else { format!("X{i}^{k}") })
                .collect();
            match (coeff.is_empty(), mono.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&mono.join("*"))?,
                (false, true) => f.write_str(&coeff)?,
                (false, false) => write!(f, "{}*{}", coeff, mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self} over {})", self.field)
    }
}
