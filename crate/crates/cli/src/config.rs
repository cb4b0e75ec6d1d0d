//! TOML experiment configurations and their validation into library objects.
//!
//! Every numeric literal is exact: an integer, or a string holding a fraction
//! `"p/q"` or a polynomial in the generator `t`. Floating-point literals are
//! rejected wherever they appear.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use formlab::bridge::FactoredPoly;
use formlab::exact::parse_polynomial;
use formlab::field::{FieldElement, FieldEmbedding, NumberField};
use formlab::forms::{form_build, DecomposableForm, LinearForm, MultiPoly};
use formlab::numeric::{Accuracy, DEFAULT_PRECISION_CAP};
use formlab::places::PlaceSet;
use formlab::search::{Point, SequenceFamily};

use crate::error::CliError;

/// An integer, or a string holding a fraction or a polynomial in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    pub fn text(&self) -> String {
        match self {
            Literal::Int(n) => n.to_string(),
            Literal::Text(s) => s.clone(),
        }
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Literal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string such as \"1/2\" or \"1 + t\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Literal, E> {
                Ok(Literal::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Literal, E> {
                Ok(i64::try_from(v).map_or_else(|_| Literal::Text(v.to_string()), Literal::Int))
            }

            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Literal, E> {
                Err(E::custom(
                    "floating-point literals are not allowed; write an exact value such as \"1/2\"",
                ))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Literal, E> {
                Ok(Literal::Text(v.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    field: Option<RawField>,
    extension: Option<RawExtension>,
    s: Option<RawS>,
    form: Option<RawForm>,
    poly: Option<RawPoly>,
    inequality: Option<RawInequality>,
    equation: Option<RawEquation>,
    family: Option<RawFamily>,
    cover: Option<RawCover>,
    profile: Option<RawProfile>,
    query: Option<RawQuery>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    polynomial: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    polynomial: String,
    generator_image: Option<Literal>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawS {
    #[serde(default)]
    primes: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    scalar: Option<Literal>,
    factors: Vec<Vec<Literal>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    leading: Option<Literal>,
    roots: Vec<Literal>,
    m: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInequality {
    c: Literal,
    nu: Literal,
    bound: u64,
    #[serde(default)]
    strict: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEquation {
    g: Literal,
    bound: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    scalar: Option<Literal>,
    factors: Vec<Vec<Literal>>,
    budget: Literal,
    n: [i64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    l: usize,
    points: Option<Vec<Vec<Literal>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    bounds: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuery {
    element: Option<Literal>,
    point: Option<Vec<Literal>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    tolerance: Option<Literal>,
    precision_cap: Option<u32>,
    path: Option<PathBuf>,
}

/// A polynomial `P = a prod (X - alpha_i)` with the degree `m` of the partners `Q`.
#[derive(Clone, Debug)]
pub struct PolySpec {
    pub poly: FactoredPoly,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalitySpec {
    pub c: BigRational,
    pub nu: BigRational,
    pub bound: u64,
    pub strict: bool,
}

#[derive(Clone, Debug)]
pub struct EquationSpec {
    pub g: MultiPoly,
    pub bound: u64,
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub family: SequenceFamily,
    pub first: i64,
    pub last: i64,
}

#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub l: usize,
    pub points: Option<Vec<Point>>,
}

#[derive(Clone, Debug, Default)]
pub struct QuerySpec {
    pub element: Option<FieldElement>,
    pub point: Option<Point>,
}

#[derive(Clone, Debug)]
pub struct OutputSpec {
    pub tolerance: BigRational,
    pub accuracy: Accuracy,
    pub path: Option<PathBuf>,
}

/// A validated experiment configuration.
#[derive(Clone, Debug)]
pub struct Config {
    /// The ground field `K`.
    pub base: NumberField,
    /// `K -> G`; the identity when there is no `[extension]`.
    pub embedding: FieldEmbedding,
    pub places: PlaceSet,
    pub form: Option<DecomposableForm>,
    pub poly: Option<PolySpec>,
    pub inequality: Option<InequalitySpec>,
    pub equation: Option<EquationSpec>,
    pub family: Option<FamilySpec>,
    pub cover: Option<CoverSpec>,
    pub profile: Option<Vec<u64>>,
    pub query: QuerySpec,
    pub output: OutputSpec,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

/// `section.key` for the entry around a byte offset.
fn key_at(text: &str, offset: usize) -> String {
    let mut section = String::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let t = line.trim();
        if t.starts_with('[') {
            section = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
        }
        if offset < pos + line.len() {
            if let Some((k, _)) = t.split_once('=') {
                let k = k.trim();
                return if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
            }
            break;
        }
        pos += line.len();
    }
    if section.is_empty() {
        "<root>".to_string()
    } else {
        section
    }
}

/// Smallest `b >= 1` with `2^-b <= tol`.
pub fn tolerance_bits(tol: &BigRational) -> Option<u32> {
    if !tol.is_positive() {
        return None;
    }
    let mut b = 1u32;
    let mut p = BigRational::new(BigInt::one(), BigInt::from(2));
    while &p > tol {
        b += 1;
        if b > 1 << 20 {
            return None;
        }
        p /= BigInt::from(2);
    }
    Some(b)
}

pub fn parse_rational(lit: &Literal, key: &str) -> Result<BigRational, CliError> {
    match lit {
        Literal::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
        Literal::Text(s) => BigRational::from_str(s.trim()).map_err(|e| {
            let reason = if s.contains('.') || s.contains('e') {
                format!("{s:?} is not exact; write a fraction such as \"1/2\"")
            } else {
                format!("{s:?} is not a rational number ({e})")
            };
            CliError::validation(key, reason)
        }),
    }
}

/// Parses an element of `field` written as a polynomial in `t`.
pub fn parse_element(lit: &Literal, field: &NumberField, key: &str) -> Result<FieldElement, CliError> {
    let text = match lit {
        Literal::Int(n) => return Ok(field.int(*n)),
        Literal::Text(s) => s,
    };
    let p = parse_polynomial(text, &["t"]).map_err(|e| CliError::validation(key, e))?;
    if field.degree() == 1 && p.degree_in(0) > 0 {
        return Err(CliError::validation(
            key,
            "`t` is undefined over Q; declare a [field] or [extension] of degree at least 2",
        ));
    }
    let coeffs = p.univariate(0).expect("single variable");
    Ok(FieldElement::from_poly(field, &coeffs))
}

fn parse_point(lits: &[Literal], field: &NumberField, key: &str) -> Result<Point, CliError> {
    lits.iter()
        .enumerate()
        .map(|(i, l)| parse_element(l, field, &format!("{key}[{i}]")))
        .collect()
}

fn parse_field(text: &str, key: &str) -> Result<NumberField, CliError> {
    let p = parse_polynomial(text, &["t"]).map_err(|e| CliError::validation(key, e))?;
    let coeffs = p.univariate(0).expect("single variable");
    if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_integer()) {
        return Err(CliError::validation(key, "coefficients must be integers"));
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
    NumberField::new(&ints).map_err(|e| CliError::validation(key, e))
}

impl Config {
    /// Parses and validates a configuration.
    pub fn parse(text: &str) -> Result<Config, CliError> {
        if let Err(e) = text.parse::<toml::Table>() {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            return Err(CliError::Syntax {
                line,
                column,
                message: e.message().trim().to_string(),
            });
        }
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let start = e.span().map_or(0, |s| s.start);
            let (line, column) = line_col(text, start);
            CliError::validation(
                key_at(text, start),
                format!("line {line}, column {column}: {}", e.message().trim()),
            )
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Config, CliError> {
        let base = match &raw.field {
            Some(f) => parse_field(&f.polynomial, "field.polynomial")?,
            None => NumberField::rationals(),
        };
        let embedding = match &raw.extension {
            Some(e) => {
                let g = parse_field(&e.polynomial, "extension.polynomial")?;
                let image = match &e.generator_image {
                    Some(l) => parse_element(l, &g, "extension.generator_image")?,
                    None if base.degree() == 1 => g.zero(),
                    None => {
                        return Err(CliError::validation(
                            "extension.generator_image",
                            "required when the ground field is not Q",
                        ))
                    }
                };
                FieldEmbedding::new(&base, &g, image)
                    .map_err(|err| CliError::validation("extension.generator_image", err))?
            }
            None => FieldEmbedding::identity(&base),
        };
        let primes = raw.s.as_ref().map_or(&[][..], |s| &s.primes);
        let places =
            PlaceSet::from_primes(&base, primes).map_err(|e| CliError::validation("s.primes", e))?;
        let g = embedding.target().clone();

        let form = match &raw.form {
            Some(f) => {
                let scalar = match &f.scalar {
                    Some(l) => parse_element(l, &base, "form.scalar")?,
                    None => base.one(),
                };
                let factors = f
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(j, l)| {
                        let key = format!("form.factors[{j}]");
                        LinearForm::new(parse_point(l, &g, &key)?)
                            .map_err(|e| CliError::validation(key, e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(
                    form_build(embedding.push(&scalar), factors, &embedding, &places)
                        .map_err(|e| CliError::validation("form", e))?,
                )
            }
            None => None,
        };

        let poly = match &raw.poly {
            Some(p) => {
                let leading = match &p.leading {
                    Some(l) => parse_element(l, &base, "poly.leading")?,
                    None => base.one(),
                };
                let roots = parse_point(&p.roots, &g, "poly.roots")?;
                let fp = FactoredPoly::new(leading, roots, &embedding, &places)
                    .map_err(|e| CliError::validation("poly", e))?;
                if p.m == 0 {
                    return Err(CliError::validation("poly.m", "must be at least 1"));
                }
                Some(PolySpec { poly: fp, m: p.m })
            }
            None => None,
        };

        let inequality = match &raw.inequality {
            Some(i) => {
                let c = parse_rational(&i.c, "inequality.c")?;
                if !c.is_positive() {
                    return Err(CliError::validation("inequality.c", "must be positive"));
                }
                Some(InequalitySpec {
                    c,
                    nu: parse_rational(&i.nu, "inequality.nu")?,
                    bound: i.bound,
                    strict: i.strict,
                })
            }
            None => None,
        };

        let equation = match (&raw.equation, &form) {
            (Some(e), Some(f)) => {
                let g = MultiPoly::parse(&e.g.text(), &base, f.m() + 1)
                    .map_err(|err| CliError::validation("equation.g", err))?;
                Some(EquationSpec { g, bound: e.bound })
            }
            (Some(_), None) => return Err(CliError::validation("equation", "needs a [form] section")),
            _ => None,
        };

        let family = match &raw.family {
            Some(f) => {
                let texts: Vec<Vec<String>> =
                    f.factors.iter().map(|l| l.iter().map(Literal::text).collect()).collect();
                let scalar = f.scalar.as_ref().map_or("1".to_string(), Literal::text);
                let mut family = SequenceFamily::parse(&embedding, &places, &scalar, &texts, &f.budget.text())
                    .map_err(|e| CliError::validation("family", e))?;
                if f.n[0] > f.n[1] {
                    return Err(CliError::validation("family.n", "range is empty"));
                }
                family.accuracy = Accuracy::default();
                Some(FamilySpec {
                    family,
                    first: f.n[0],
                    last: f.n[1],
                })
            }
            None => None,
        };

        let cover = match &raw.cover {
            Some(c) => {
                let points = match &c.points {
                    Some(ps) => Some(
                        ps.iter()
                            .enumerate()
                            .map(|(i, p)| parse_point(p, &base, &format!("cover.points[{i}]")))
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                Some(CoverSpec { l: c.l, points })
            }
            None => None,
        };

        let profile = match &raw.profile {
            Some(p) => {
                if p.bounds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::validation("profile.bounds", "must be strictly increasing"));
                }
                Some(p.bounds.clone())
            }
            None => None,
        };

        let query = match &raw.query {
            Some(q) => QuerySpec {
                element: q
                    .element
                    .as_ref()
                    .map(|l| parse_element(l, &base, "query.element"))
                    .transpose()?,
                point: q
                    .point
                    .as_ref()
                    .map(|p| parse_point(p, &base, "query.point"))
                    .transpose()?,
            },
            None => QuerySpec::default(),
        };

        let mut output = OutputSpec::default();
        if let Some(o) = &raw.output {
            if let Some(t) = &o.tolerance {
                output.set_tolerance(parse_rational(t, "output.tolerance")?, "output.tolerance")?;
            }
            if let Some(cap) = o.precision_cap {
                output.set_cap(cap, "output.precision_cap")?;
            }
            output.path = o.path.clone();
        }
        let mut config = Config {
            base,
            embedding,
            places,
            form,
            poly,
            inequality,
            equation,
            family,
            cover,
            profile,
            query,
            output,
        };
        config.sync_accuracy();
        Ok(config)
    }

    /// Pushes the output accuracy into the objects that carry their own.
    pub fn sync_accuracy(&mut self) {
        if let Some(f) = &mut self.family {
            f.family.accuracy = self.output.accuracy;
        }
    }
}

impl OutputSpec {
    pub fn set_tolerance(&mut self, tol: BigRational, key: &str) -> Result<(), CliError> {
        if tol >= BigRational::one() || tol.is_zero() || tol.is_negative() {
            return Err(CliError::validation(key, "tolerance must lie strictly between 0 and 1"));
        }
        let bits = tolerance_bits(&tol).ok_or_else(|| CliError::validation(key, "tolerance too small"))?;
        self.accuracy.tolerance_bits = bits;
        self.tolerance = tol;
        Ok(())
    }

    pub fn set_cap(&mut self, cap: u32, key: &str) -> Result<(), CliError> {
        if cap < 64 {
            return Err(CliError::validation(key, "precision cap must be at least 64 bits"));
        }
        self.accuracy.cap = cap;
        Ok(())
    }
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            tolerance: BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12))),
            accuracy: Accuracy::new(40, DEFAULT_PRECISION_CAP),
            path: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PELL: &str = r#"
[form]
factors = [[1, 0], [1, "-t"], [1, "t"]]

[extension]
polynomial = "t^2 - 2"

[inequality]
c = 1
nu = "1/1"
bound = 100
"#;

    #[test]
    fn minimal_pell_config() {
        let c = Config::parse(PELL).unwrap();
        let f = c.form.unwrap();
        assert_eq!(f.expanded().to_string(), "X0^3 - 2*X0*X1^2");
        let i = c.inequality.unwrap();
        assert_eq!(i.nu, BigRational::one());
        assert_eq!(i.bound, 100);
        assert!(!i.strict);
        assert_eq!(c.output.accuracy.tolerance_bits, 40);
    }

    #[test]
    fn float_literals_are_rejected() {
        let text = PELL.replace("nu = \"1/1\"", "nu = 0.5");
        match Config::parse(&text).unwrap_err() {
            CliError::Validation { key, reason } => {
                assert_eq!(key, "inequality.nu");
                assert!(reason.contains("\"1/2\""), "{reason}");
            }
            e => panic!("{e}"),
        }
        let text = PELL.replace("nu = \"1/1\"", "nu = \"0.5\"");
        assert!(matches!(
            Config::parse(&text).unwrap_err(),
            CliError::Validation { key, .. } if key == "inequality.nu"
        ));
    }

    #[test]
    fn t_needs_a_field() {
        let text = "[form]\nfactors = [[1, \"t\"], [1, 1]]\n";
        match Config::parse(text).unwrap_err() {
            CliError::Validation { key, .. } => assert_eq!(key, "form.factors[0][1]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match Config::parse("[form]\nfactors = [[1, 0]\n").unwrap_err() {
            CliError::Syntax { line, .. } => assert!(line >= 2),
            e => panic!("{e}"),
        }
        match Config::parse("[inequality]\nc = 1\nnu = 1\nbound = 3\ncolour = 2\n").unwrap_err() {
            CliError::Validation { key, reason } => {
                assert_eq!(key, "inequality.colour");
                assert!(reason.contains("line 5"), "{reason}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn tolerance_bits_are_exact() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(tolerance_bits(&r(1, 2)), Some(1));
        assert_eq!(tolerance_bits(&r(1, 1 << 40)), Some(40));
        assert_eq!(tolerance_bits(&r(1, 1_000_000_000_000)), Some(40));
        assert_eq!(tolerance_bits(&r(0, 1)), None);
    }
}
