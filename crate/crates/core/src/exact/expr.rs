//! Parser for polynomial expressions with rational coefficients, e.g.
//! `"3*X0^2 - X1/2 + 1"` or `"(t + n)^2"`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A polynomial over `Q` in named variables; exponent vectors follow `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: &[&str]) -> Self {
        Polynomial {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    fn var(vars: &[&str], i: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Nonzero terms keyed by exponent vector.
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(e, _)| e.iter().all(|&x| x == 0))
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Polynomial {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
                *v += c1 * c2;
                if v.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Self {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        (0..k).fold(Self::constant(&vars, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Substitutes a rational value for one variable; the variable stays listed.
    pub fn substitute(&self, var: usize, value: &BigRational) -> Self {
        let mut out = Polynomial {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            let mut f = c.clone();
            for _ in 0..k {
                f *= value;
            }
            let v = out.terms.entry(e2.clone()).or_insert_with(BigRational::zero);
            *v += f;
            if v.is_zero() {
                out.terms.remove(&e2);
            }
        }
        out
    }

    /// Ascending coefficients in one variable; all other exponents must be zero.
    pub fn univariate(&self, var: usize) -> Option<Vec<BigRational>> {
        let mut out = vec![BigRational::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| i != var && x != 0) {
                return None;
            }
            out[e[var] as usize] = c.clone();
        }
        Some(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c < &BigRational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            let coeff = crate::exact::arith::format_rational(&a);
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else if a.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && (b[i] == b'.' || b[i] == b'e' || b[i] == b'E') {
                return Err(Error::Parse {
                    offset: i,
                    reason: "decimal literals are not exact; write a fraction like 1/2".into(),
                });
            }
            let n: BigInt = s[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                offset: i,
                reason: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            reason: reason.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.add(&t.neg()) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = acc.mul(&rhs);
            } else {
                match rhs.as_constant() {
                    Some(k) if !k.is_zero() => {
                        let vars: Vec<&str> = acc.vars.iter().map(String::as_str).collect();
                        acc = acc.mul(&Polynomial::constant(&vars, k.recip()));
                    }
                    Some(_) => return Err(Error::DivisionByZero),
                    None => return self.err("division by a non-constant expression"),
                }
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let k = u32::try_from(&n).ok().filter(|&k| k <= 64);
                    match k {
                        Some(k) => Ok(base.pow(k)),
                        None => self.err("exponent too large"),
                    }
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return self.err(format!("unknown variable '{name}'"));
                };
                self.pos += 1;
                Ok(Polynomial::var(self.vars, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `s` as a polynomial in the listed variables.
pub fn parse_polynomial(s: &str, vars: &[&str]) -> Result<Polynomial> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::{rat, rat_frac};

    #[test]
    fn parses_and_expands() {
        let p = parse_polynomial("(t + 1)*(t - 1)", &["t"]).unwrap();
        assert_eq!(p.univariate(0).unwrap(), vec![rat(-1), rat(0), rat(1)]);
        let q = parse_polynomial("X0*(X0^2 - 2*X1^2)", &["X0", "X1"]).unwrap();
        assert_eq!(q.total_degree(), 3);
        assert_eq!(q.to_string(), "X0^3 - 2*X0*X1^2");
        let r = parse_polynomial("-n/2 + 3/4", &["n"]).unwrap();
        assert_eq!(r.substitute(0, &rat(1)).as_constant(), Some(rat_frac(1, 4)));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_polynomial("t + u", &["t"]),
            Err(Error::Parse {
                offset: 4,
                reason: "unknown variable 'u'".into()
            })
        );
        assert!(matches!(parse_polynomial("0.5*t", &["t"]), Err(Error::Parse { offset: 1, .. })));
        assert!(parse_polynomial("t/(t+1)", &["t"]).is_err());
        assert_eq!(parse_polynomial("1/0", &["t"]), Err(Error::DivisionByZero));
        assert!(parse_polynomial("(t", &["t"]).is_err());
    }
}
