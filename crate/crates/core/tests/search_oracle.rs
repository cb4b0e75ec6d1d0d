//! Bounded searches over Q against a brute-force oracle that works on plain
//! integers and classifies by pairwise S-unit ratios.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use formlab::bridge::{res_ineq_search, FactoredPoly};
use formlab::exact::arith::{rat, rat_frac};
use formlab::field::{FieldElement, FieldEmbedding, NumberField};
use formlab::numeric::Accuracy;
use formlab::places::PlaceSet;
use formlab::search::{solve_inequality, InequalityInstance};

fn strip(mut n: BigInt, primes: &[u64]) -> BigInt {
    for &p in primes {
        let p = BigInt::from(p);
        while !n.is_zero() && (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n.abs()
}

/// `H_S(x) = max |x_i| * prod_{p in S} p^(-min v_p(x_i))` for an integer point.
fn s_height(x: &[i64], primes: &[u64]) -> BigRational {
    let g = x.iter().fold(BigInt::zero(), |g, &c| g.gcd(&BigInt::from(c)));
    let m = x.iter().map(|c| c.abs()).max().unwrap();
    let s_part = &g / strip(g.clone(), primes);
    BigRational::new(BigInt::from(m), s_part)
}

fn pow_rat(r: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `N <= c H^(a/b)` (or `<`) decided as `N^b <= c^b H^a`.
fn holds(n: &BigRational, c: &BigRational, h: &BigRational, nu: (i64, i64), strict: bool) -> bool {
    let lhs = pow_rat(n, nu.1);
    let rhs = pow_rat(c, nu.1) * pow_rat(h, nu.0);
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

fn s_proportional(x: &[i64], y: &[i64], primes: &[u64]) -> bool {
    let i = x.iter().position(|&c| c != 0).unwrap();
    if y[i] == 0 {
        return false;
    }
    let lambda = BigRational::new(y[i].into(), x[i].into());
    let same_line = x
        .iter()
        .zip(y)
        .all(|(&a, &b)| BigRational::from_integer(a.into()) * &lambda == BigRational::from_integer(b.into()));
    same_line
        && strip(lambda.numer().clone(), primes).is_one()
        && strip(lambda.denom().clone(), primes).is_one()
}

struct Case<'a> {
    factors: &'a [[i64; 2]],
    scalar: i64,
    primes: &'a [u64],
    c: (i64, i64),
    nu: (i64, i64),
    bound: i64,
    strict: bool,
}

/// Every point in the box satisfying the inequality, found by direct evaluation.
fn oracle(case: &Case) -> Vec<Vec<i64>> {
    let c = rat_frac(case.c.0, case.c.1);
    let mut hits: Vec<Vec<i64>> = Vec::new();
    for x0 in -case.bound..=case.bound {
        for x1 in -case.bound..=case.bound {
            if (x0, x1) == (0, 0) {
                continue;
            }
            let f = case
                .factors
                .iter()
                .fold(BigInt::from(case.scalar), |acc, l| acc * BigInt::from(l[0] * x0 + l[1] * x1));
            if f.is_zero() {
                continue;
            }
            let n = BigRational::from_integer(strip(f, case.primes));
            let h = s_height(&[x0, x1], case.primes);
            if holds(&n, &c, &h, case.nu, case.strict) {
                hits.push(vec![x0, x1]);
            }
        }
    }
    hits
}

/// Number of S-unit classes among `points`, by pairwise comparison.
fn class_count(points: &[Vec<i64>], primes: &[u64]) -> usize {
    let mut reps: Vec<&Vec<i64>> = Vec::new();
    for x in points {
        if !reps.iter().any(|r| s_proportional(r, x, primes)) {
            reps.push(x);
        }
    }
    reps.len()
}

/// The library's representatives must be solutions, pairwise inequivalent,
/// and as many as the oracle's classes.
fn check(case: &Case) -> Result<(), String> {
    let reps = library(case);
    let hits = oracle(case);
    if let Some(r) = reps.iter().find(|r| !hits.contains(r)) {
        return Err(format!("{r:?} is not a solution"));
    }
    if class_count(&reps, case.primes) != reps.len() {
        return Err(format!("equivalent representatives in {reps:?}"));
    }
    let want = class_count(&hits, case.primes);
    if reps.len() != want {
        return Err(format!("{} classes, oracle has {want}", reps.len()));
    }
    Ok(())
}

fn library(case: &Case) -> Vec<Vec<i64>> {
    let q = NumberField::rationals();
    let s = PlaceSet::from_primes(&q, case.primes).unwrap();
    let refs: Vec<&[i64]> = case.factors.iter().map(|l| &l[..]).collect();
    let f = formlab::forms::DecomposableForm::rational(rat(case.scalar), &refs, &s).unwrap();
    let mut inst = InequalityInstance::new(
        f,
        rat_frac(case.c.0, case.c.1),
        rat_frac(case.nu.0, case.nu.1),
        case.bound as u64,
    )
    .unwrap();
    inst.strict = case.strict;
    let report = solve_inequality(&inst).unwrap();
    assert!(report.recheck_passed);
    assert!(report.borderline.is_empty());
    let mut reps: Vec<Vec<i64>> = report
        .representatives()
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| c.as_rational().unwrap().to_integer().try_into().unwrap())
                .collect()
        })
        .collect();
    reps.sort();
    reps
}

#[test]
fn three_lines_with_s_units() {
    let case = Case {
        factors: &[[1, 0], [0, 1], [1, -1]],
        scalar: 1,
        primes: &[2, 3],
        c: (1, 1),
        nu: (0, 1),
        bound: 12,
        strict: false,
    };
    check(&case).unwrap();
    let reps = library(&case);
    // x0 x1 (x0 - x1) an S-unit: (2, 1), (3, 1), (4, 1), (9, 8) and so on
    for want in [[2, 1], [3, 1], [4, 1], [4, 3], [9, 8]] {
        assert!(reps.iter().any(|r| {
            s_proportional(r, &want, case.primes) || s_proportional(r, &[want[1], want[0]], case.primes)
        }));
    }
}

#[test]
fn non_primitive_multiples_are_separate_classes() {
    let case = Case {
        factors: &[[1, 0], [0, 1]],
        scalar: 1,
        primes: &[],
        c: (1, 1),
        nu: (2, 1),
        bound: 6,
        strict: false,
    };
    check(&case).unwrap();
    let reps = library(&case);
    assert!(reps.contains(&vec![2, 2]) && reps.contains(&vec![1, 1]));
}

#[test]
fn resultant_search_matches_brute_force() {
    let g = NumberField::from_i64(&[-2, 0, 1]).unwrap();
    let r = g.generator();
    let q = NumberField::rationals();
    let s = PlaceSet::archimedean(&q);
    let p = FactoredPoly::new(q.one(), vec![r.clone(), -&r], &FieldEmbedding::from_rationals(&g), &s).unwrap();
    let report = res_ineq_search(&p, 1, rat(2), rat(0), 50, false, &Accuracy::default()).unwrap();
    // Res(X^2 - 2, x0 X + x1) = x1^2 - 2 x0^2, with x0 != 0 and x up to sign
    let mut expect = Vec::new();
    for x0 in 1..=50i64 {
        for x1 in -50..=50i64 {
            let v = (x1 * x1 - 2 * x0 * x0).abs();
            if (1..=2).contains(&v) {
                expect.push(vec![x0, x1]);
            }
        }
    }
    let mut got: Vec<Vec<i64>> = report
        .accepted
        .iter()
        .map(|p| {
            p.iter()
                .map(|c: &FieldElement| c.as_rational().unwrap().to_integer().try_into().unwrap())
                .collect()
        })
        .collect();
    got.sort();
    assert_eq!(got, expect);
    assert_eq!(report.class_count(), expect.len());
    assert!(report.recheck_passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn searches_agree_with_the_oracle(
        raw in prop::collection::vec((-3i64..=3, -3i64..=3), 1..=4),
        scalar in 1i64..=3,
        s_choice in 0usize..4,
        c in (1i64..=8, 1i64..=2),
        nu in (-1i64..=4, 1i64..=2),
        strict in any::<bool>(),
    ) {
        let factors: Vec<[i64; 2]> = raw
            .iter()
            .map(|&(a, b)| [a, b])
            .filter(|l| *l != [0, 0])
            .collect();
        prop_assume!(!factors.is_empty());
        let primes: &[u64] = [&[][..], &[2][..], &[3][..], &[2, 3][..]][s_choice];
        let case = Case { factors: &factors, scalar, primes, c, nu, bound: 8, strict };
        prop_assert_eq!(check(&case), Ok(()));
    }
}
