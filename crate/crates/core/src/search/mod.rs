//! Bounded searches for solutions of decomposable form inequalities and
//! equations, grouped into classes of S-unit proportional points.

mod enumerate;
mod experiments;
mod subspace;

pub use enumerate::{enumerate_points, shell, to_point, EnumerationMode};
pub use experiments::{
    equation_search, growth_profile, sequence_experiment, ProfileRow, SequenceFamily,
    SequenceOutcome, SequenceRow,
};
pub use subspace::{subspace_cover, subspace_functional, FunctionalPaths, SubspaceCover};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::arith::{pow_int, v_p};
use crate::field::{FieldElement, NumberField};
use crate::forms::DecomposableForm;
use crate::numeric::{compare_log, ln_rational, Accuracy, Interval};
use crate::places::{is_s_unit, s_height_value, s_norm_direct, HeightValue, PlaceSet};
use enumerate::RootWindows;

/// A point of `K^(m+1)`.
pub type Point = Vec<FieldElement>;

/// `0 < N_S(F(x)) <= c H_S(x)^nu` (or `<` when `strict`) over a search box.
#[derive(Clone, Debug)]
pub struct InequalityInstance {
    pub form: DecomposableForm,
    pub c: BigRational,
    pub nu: BigRational,
    pub bound: u64,
    pub strict: bool,
    /// Only points with `x0 != 0`.
    pub leading_nonzero: bool,
    pub accuracy: Accuracy,
    /// Use root windows when the instance allows it.
    pub pruning: bool,
}

impl InequalityInstance {
    pub fn new(form: DecomposableForm, c: BigRational, nu: BigRational, bound: u64) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("c must be positive".into()));
        }
        Ok(InequalityInstance {
            form,
            c,
            nu,
            bound,
            strict: false,
            leading_nonzero: false,
            accuracy: Accuracy::default(),
            pruning: true,
        })
    }

    pub fn places(&self) -> &PlaceSet {
        self.form.places()
    }

    pub fn field(&self) -> &NumberField {
        self.form.base_field()
    }

    /// The strategy [`solve_inequality`] will use.
    pub fn strategy(&self) -> Strategy {
        let f = &self.form;
        if self.pruning
            && f.base_field().is_rationals()
            && f.places().is_archimedean_only()
            && f.m() == 1
            && f.has_integer_table()
        {
            Strategy::RootWindows
        } else {
            Strategy::FullScan
        }
    }
}

/// How the box was covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every point of the box was tested.
    FullScan,
    /// Only points near the real roots of the dehomogenized form were tested; the
    /// rest provably violate the inequality.
    RootWindows,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::FullScan => "full-scan",
            Strategy::RootWindows => "root-windows",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
    /// Undecided at the precision cap.
    Borderline,
}

/// Exact `N_S` of an integer over `Q`.
fn rational_s_norm(v: &BigInt, s: &PlaceSet) -> BigRational {
    let mut out = BigRational::from_integer(v.abs());
    for p in s.primes() {
        out /= BigRational::from_integer(pow_int(&BigInt::from(p), v_p(v, p)));
    }
    out
}

/// Exact `H_S` of an integer vector over `Q`.
fn rational_s_height(x: &[BigInt], s: &PlaceSet) -> BigRational {
    let mut out = BigRational::from_integer(x.iter().map(|c| c.abs()).max().unwrap_or_default());
    for p in s.primes() {
        let e = x.iter().filter(|c| !c.is_zero()).map(|c| v_p(c, p)).min().unwrap_or(0);
        out /= BigRational::from_integer(pow_int(&BigInt::from(p), e));
    }
    out
}

/// Exact comparison of `n` with `c h^nu`.
fn compare_exact(n: &BigRational, c: &BigRational, h: &BigRational, nu: &BigRational) -> Ordering {
    let a = nu.numer();
    let b = nu.denom().to_u32().expect("exponent denominator fits in u32");
    let ea = a.abs().to_u32().expect("exponent numerator fits in u32");
    let pow = |x: &BigRational, e: u32| crate::exact::arith::pow_rat(x, e);
    let (lhs, rhs) = if a.is_negative() {
        (pow(n, b) * pow(h, ea), pow(c, b))
    } else {
        (pow(n, b), pow(c, b) * pow(h, ea))
    };
    lhs.cmp(&rhs)
}


fn verdict_from(ord: Ordering, strict: bool) -> Verdict {
    match (ord, strict) {
        (Ordering::Less, _) | (Ordering::Equal, false) => Verdict::Accept,
        _ => Verdict::Reject,
    }
}

/// Decides the inequality for a value `N_S(F(x))` given `H_S(x)` or a way to
/// compute it at any accuracy.
fn decide(
    inst: &InequalityInstance,
    norm: &BigRational,
    x: &[FieldElement],
    acc: &Accuracy,
) -> Result<Verdict> {
    if inst.nu.is_zero() {
        return Ok(verdict_from(norm.cmp(&inst.c), inst.strict));
    }
    match s_height_value(x, inst.places(), acc)? {
        HeightValue::Exact(h) => Ok(verdict_from(compare_exact(norm, &inst.c, &h, &inst.nu), inst.strict)),
        HeightValue::Log(_) => {
            let ord = compare_log(
                norm,
                |a| {
                    let prec = a.tolerance_bits + 32;
                    let lh = s_height_value(x, inst.places(), a)?.log(a);
                    let lc = ln_rational(&inst.c, a.tolerance_bits + 4);
                    Ok(lc.add(&scale_rational(&lh, &inst.nu, prec), prec))
                },
                acc,
            )?;
            Ok(match ord {
                Some(o) => verdict_from(o, inst.strict),
                None => Verdict::Borderline,
            })
        }
    }
}

fn scale_rational(iv: &Interval, r: &BigRational, prec: u32) -> Interval {
    iv.mul(&Interval::from_rational(r, prec), prec)
}

/// Decides the inequality at one point.
pub fn ineq_filter(inst: &InequalityInstance, x: &[FieldElement]) -> Result<Verdict> {
    let v = inst.form.eval(x)?;
    if v.is_zero() {
        return Ok(Verdict::Reject);
    }
    let n = s_norm_direct(&v, inst.places())?;
    decide(inst, &n, x, &inst.accuracy)
}

/// Fast decision for an integer point over `Q`.
fn filter_integer(inst: &InequalityInstance, x: &[i64]) -> Result<Verdict> {
    let value = match inst.form.eval_i128(x) {
        Some(v) => BigInt::from(v),
        None => {
            let xs: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            match inst.form.eval_integers(&xs) {
                Some(v) => v,
                None => return ineq_filter(inst, &to_point(inst.field(), x)),
            }
        }
    };
    if value.is_zero() {
        return Ok(Verdict::Reject);
    }
    let s = inst.places();
    let n = rational_s_norm(&value, s);
    let xs: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
    let h = rational_s_height(&xs, s);
    Ok(verdict_from(compare_exact(&n, &inst.c, &h, &inst.nu), inst.strict))
}

fn filter_coeffs(inst: &InequalityInstance, x: &[i64]) -> Result<Verdict> {
    if inst.field().is_rationals() && inst.form.has_integer_table() {
        filter_integer(inst, x)
    } else {
        ineq_filter(inst, &to_point(inst.field(), x))
    }
}

/// Outcome of one shell of the scan.
#[derive(Clone, Debug, Default)]
pub(crate) struct ShellResult {
    pub accepted: Vec<Vec<i64>>,
    pub borderline: Vec<Vec<i64>>,
    pub scanned: u64,
}

fn scan_shell(
    inst: &InequalityInstance,
    k: i64,
    windows: Option<&RootWindows>,
) -> Result<ShellResult> {
    let n = (inst.form.m() + 1) * inst.field().degree();
    let d = inst.field().degree();
    let candidates = match windows {
        Some(w) => w.candidates(k),
        None => shell(n, k, EnumerationMode::SignNormalized),
    };
    let mut out = ShellResult::default();
    for x in candidates {
        if inst.leading_nonzero && x[..d].iter().all(|&c| c == 0) {
            continue;
        }
        out.scanned += 1;
        match filter_coeffs(inst, &x)? {
            Verdict::Accept => out.accepted.push(x),
            Verdict::Borderline => out.borderline.push(x),
            Verdict::Reject => {}
        }
    }
    Ok(out)
}

/// Scans shells `from..=to` in parallel; results come back in shell order.
pub(crate) fn scan_shells(inst: &InequalityInstance, from: u64, to: u64) -> Result<Vec<ShellResult>> {
    let windows = match inst.strategy() {
        Strategy::RootWindows => {
            let f: Vec<BigInt> = binary_coefficients(&inst.form);
            Some(RootWindows::new(&f, &inst.c, &inst.nu)?)
        }
        Strategy::FullScan => None,
    };
    (from as i64..=to as i64)
        .into_par_iter()
        .map(|k| scan_shell(inst, k, windows.as_ref()))
        .collect()
}

/// `f[i]` = coefficient of `X0^(q-i) X1^i` for a binary form with integer table.
fn binary_coefficients(f: &DecomposableForm) -> Vec<BigInt> {
    let q = f.degree();
    let mut out = vec![BigInt::zero(); q + 1];
    for (e, c) in f.expanded().terms() {
        let r = c.as_rational().expect("rational coefficient");
        out[e[1] as usize] = r.to_integer();
    }
    out
}

/// O_S*-proportionality: `y = lambda x` for an S-unit `lambda`.
pub fn proportional(x: &[FieldElement], y: &[FieldElement], s: &PlaceSet) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let Some(i) = x.iter().position(|c| !c.is_zero()) else {
        return Err(Error::ZeroElement);
    };
    if y.iter().all(FieldElement::is_zero) {
        return Err(Error::ZeroElement);
    }
    if y[i].is_zero() {
        return Ok(false);
    }
    let lambda = y[i].div(&x[i])?;
    for (a, b) in x.iter().zip(y) {
        if &(a * &lambda) != b {
            return Ok(false);
        }
    }
    is_s_unit(&lambda, s)
}

/// A class of proportional solutions.
#[derive(Clone, Debug)]
pub struct SolutionClass {
    pub representative: Point,
    pub members: Vec<Point>,
    /// `N_S(F(rep))`, or for equation searches `N_S(G(rep))`.
    pub norm: BigRational,
    pub height: HeightValue,
    pub log_height: Interval,
}

fn lex_cmp(a: &[FieldElement], b: &[FieldElement]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp_coords(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Groups points into proportionality classes. The representative is the
/// lexicographically smallest member (all members share one height).
pub fn classify(points: &[Point], s: &PlaceSet) -> Result<Vec<Vec<Point>>> {
    let mut classes: Vec<Vec<Point>> = Vec::new();
    let keys: Option<Vec<_>> = if s.field().is_rationals() {
        let primes = s.primes();
        points.iter().map(|p| rational_class_key(p, &primes)).collect()
    } else {
        None
    };
    if let Some(keys) = keys {
        let mut index: HashMap<(Vec<BigInt>, BigInt), usize> = HashMap::new();
        for (p, key) in points.iter().zip(keys) {
            match index.get(&key) {
                Some(&ci) => classes[ci].push(p.clone()),
                None => {
                    index.insert(key, classes.len());
                    classes.push(vec![p.clone()]);
                }
            }
        }
    } else {
        for p in points {
            let mut home = None;
            for (ci, c) in classes.iter().enumerate() {
                if proportional(&c[0], p, s)? {
                    home = Some(ci);
                    break;
                }
            }
            match home {
                Some(ci) => classes[ci].push(p.clone()),
                None => classes.push(vec![p.clone()]),
            }
        }
    }
    #[cfg(debug_assertions)]
    for c in &classes {
        for a in c {
            for b in c {
                debug_assert!(proportional(a, b, s)?);
            }
        }
    }
    for c in &mut classes {
        c.sort_by(|a, b| lex_cmp(a, b));
    }
    classes.sort_by(|a, b| lex_cmp(&a[0], &b[0]));
    Ok(classes)
}

/// For a nonzero integer point over `Q`: its primitive sign-normalized part
/// and its content with every prime of `S` removed. Two such points are
/// S-proportional exactly when their keys agree.
fn rational_class_key(p: &[FieldElement], primes: &[u64]) -> Option<(Vec<BigInt>, BigInt)> {
    let mut coords = Vec::with_capacity(p.len());
    for c in p {
        let r = c.as_rational()?;
        if !r.is_integer() {
            return None;
        }
        coords.push(r.to_integer());
    }
    let mut g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return None;
    }
    if coords.iter().find(|c| !c.is_zero())?.is_negative() {
        g = -g;
    }
    let primitive = coords.iter().map(|c| c / &g).collect();
    let mut content = g.abs();
    for &q in primes {
        let q = BigInt::from(q);
        while (&content % &q).is_zero() {
            content /= &q;
        }
    }
    Some((primitive, content))
}

/// Outcome of a bounded search.
#[derive(Clone, Debug)]
pub struct SolutionReport {
    pub accepted: Vec<Point>,
    pub borderline: Vec<Point>,
    pub classes: Vec<SolutionClass>,
    pub bound: u64,
    /// Points actually tested.
    pub scanned: u64,
    pub strategy: Strategy,
    /// Every accepted point passed the independent recheck.
    pub recheck_passed: bool,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
}

impl SolutionReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<&Point> {
        self.classes.iter().map(|c| &c.representative).collect()
    }
}

/// Builds class records; `value` gives the number whose `N_S` is reported.
pub(crate) fn build_classes(
    points: &[Point],
    s: &PlaceSet,
    acc: &Accuracy,
    value: impl Fn(&[FieldElement]) -> Result<FieldElement>,
) -> Result<Vec<SolutionClass>> {
    classify(points, s)?
        .into_iter()
        .map(|members| {
            let rep = members[0].clone();
            let norm = s_norm_direct(&value(&rep)?, s)?;
            let height = s_height_value(&rep, s, acc)?;
            let log_height = height.log(acc);
            Ok(SolutionClass {
                representative: rep,
                members,
                norm,
                height,
                log_height,
            })
        })
        .collect()
}

/// Re-verifies an accepted point along an independent path: the factor product
/// must equal the table value, and the inequality must hold again at a finer
/// tolerance using the factorization-based S-norm.
pub fn recheck(inst: &InequalityInstance, x: &[FieldElement]) -> Result<bool> {
    let by_factors = inst.form.eval_factors(x)?;
    let by_table = inst.form.eval(x)?;
    if by_factors != by_table || by_factors.is_zero() {
        return Ok(false);
    }
    let n = crate::places::s_norm(&by_factors, inst.places())?;
    if n != s_norm_direct(&by_table, inst.places())? {
        return Ok(false);
    }
    let finer = inst.accuracy.with_bits(inst.accuracy.tolerance_bits + 8);
    Ok(decide(inst, &n, x, &finer)? == Verdict::Accept)
}

pub(crate) fn assemble(
    inst: &InequalityInstance,
    shells: &[ShellResult],
    bound: u64,
    started: Instant,
) -> Result<SolutionReport> {
    let k = inst.field();
    let accepted: Vec<Point> = shells
        .iter()
        .flat_map(|s| s.accepted.iter().map(|x| to_point(k, x)))
        .collect();
    let borderline: Vec<Point> = shells
        .iter()
        .flat_map(|s| s.borderline.iter().map(|x| to_point(k, x)))
        .collect();
    let scanned = shells.iter().map(|s| s.scanned).sum();
    let rechecks: Vec<bool> = accepted
        .par_iter()
        .map(|x| recheck(inst, x))
        .collect::<Result<_>>()?;
    let classes = build_classes(&accepted, inst.places(), &inst.accuracy, |x| inst.form.eval(x))?;
    Ok(SolutionReport {
        accepted,
        borderline,
        classes,
        bound,
        scanned,
        strategy: inst.strategy(),
        recheck_passed: rechecks.iter().all(|&b| b),
        warnings: Vec::new(),
        elapsed: started.elapsed(),
    })
}

/// Enumerates the box, filters by the inequality and classifies the solutions.
pub fn solve_inequality(inst: &InequalityInstance) -> Result<SolutionReport> {
    let started = Instant::now();
    let shells = scan_shells(inst, 1, inst.bound)?;
    assemble(inst, &shells, inst.bound, started)
}
