use super::*;
use crate::exact::arith::{rat, rat_frac};
use crate::numeric::Dyadic;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sqrt2() -> NumberField {
    NumberField::from_i64(&[-2, 0, 1]).unwrap()
}

fn qpoint(v: &[i64]) -> Vec<FieldElement> {
    let q = NumberField::rationals();
    v.iter().map(|&c| q.int(c)).collect()
}

fn inf() -> PlaceSet {
    PlaceSet::archimedean(&NumberField::rationals())
}

fn conjugate_pair() -> DecomposableForm {
    let g = sqrt2();
    let r = g.generator();
    let l1 = LinearForm::new(vec![r.clone(), g.one()]).unwrap();
    let l2 = LinearForm::new(vec![-&r, g.one()]).unwrap();
    form_build(g.one(), vec![l1, l2], &FieldEmbedding::from_rationals(&g), &inf()).unwrap()
}

#[test]
fn build_examples() {
    let f = conjugate_pair();
    assert_eq!(f.to_string(), "-2*X0^2 + X1^2");
    let f = DecomposableForm::rational(rat(1), &[&[1, 0], &[0, 1], &[1, -1]], &inf()).unwrap();
    assert_eq!(f.to_string(), "X0^2*X1 - X0*X1^2");
    assert_eq!(
        DecomposableForm::rational(rat_frac(1, 3), &[&[1, 0], &[0, 1]], &inf()).unwrap_err(),
        Error::NotSIntegral
    );
    let s2 = PlaceSet::from_primes(&NumberField::rationals(), &[3]).unwrap();
    assert!(DecomposableForm::rational(rat_frac(1, 3), &[&[1, 0], &[0, 1]], &s2).is_ok());
    assert_eq!(
        DecomposableForm::rational(rat(1), &[], &inf()).unwrap_err(),
        Error::EmptyFactorList
    );
    let g = sqrt2();
    let lone = LinearForm::new(vec![g.generator(), g.one()]).unwrap();
    assert_eq!(
        form_build(g.one(), vec![lone], &FieldEmbedding::from_rationals(&g), &inf()).unwrap_err(),
        Error::CoefficientNotInK
    );
}

#[test]
fn eval_examples() {
    let q = NumberField::rationals();
    let g = sqrt2();
    let r = g.generator();
    let factors = vec![
        LinearForm::rational(&g, &[1, 0]).unwrap(),
        LinearForm::new(vec![g.one(), -&r]).unwrap(),
        LinearForm::new(vec![g.one(), r.clone()]).unwrap(),
    ];
    let pell = form_build(g.one(), factors, &FieldEmbedding::from_rationals(&g), &inf()).unwrap();
    assert_eq!(pell.to_string(), "X0^3 - 2*X0*X1^2");
    assert_eq!(pell.eval(&qpoint(&[3, 2])).unwrap(), q.int(3));
    assert_eq!(pell.eval_factors(&qpoint(&[3, 2])).unwrap(), q.int(3));
    assert_eq!(pell.eval_integers(&[3.into(), 2.into()]), Some(3.into()));
    assert_eq!(pell.eval_i128(&[3, 2]), Some(3));
    assert!(pell.eval(&qpoint(&[0, 0])).unwrap().is_zero());
    assert_eq!(
        pell.eval(&qpoint(&[1, 2, 3])).unwrap_err(),
        Error::DimensionMismatch { expected: 2, got: 3 }
    );
}

#[test]
fn general_position_examples() {
    let q = NumberField::rationals();
    let l = |c: &[i64]| LinearForm::rational(&q, c).unwrap();
    assert!(general_position(&[l(&[1, 0]), l(&[0, 1]), l(&[1, 1])], 1).is_ok());
    assert_eq!(
        general_position(&[l(&[1, 0]), l(&[0, 1]), l(&[0, 2])], 1),
        GeneralPosition::Witness(vec![1, 2])
    );
    assert!(general_position(&[l(&[1, 0, 0]), l(&[0, 1, 0])], 2).is_ok());
    assert_eq!(
        general_position(&[l(&[1, 0, 0]), l(&[2, 0, 0])], 2),
        GeneralPosition::Witness(vec![0, 1])
    );
}

/// All `(m+1)`-subsets by bitmask, ranked independently, first singular one in
/// lexicographic order.
fn brute_force_witness(factors: &[LinearForm], m: usize) -> Option<Vec<usize>> {
    let q = factors.len();
    let mut singular = Vec::new();
    for mask in 0u32..(1 << q) {
        if mask.count_ones() as usize != m + 1 {
            continue;
        }
        let idx: Vec<usize> = (0..q).filter(|i| mask >> i & 1 == 1).collect();
        let rows: Vec<Vec<FieldElement>> =
            idx.iter().map(|&i| factors[i].coeffs().to_vec()).collect();
        if rank(&rows) < m + 1 {
            singular.push(idx);
        }
    }
    singular.sort();
    singular.into_iter().next()
}

#[test]
fn general_position_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [NumberField::rationals(), sqrt2()];
    for trial in 0..300 {
        let k = &fields[trial % 2];
        let m = rng.gen_range(1..=3);
        let q = rng.gen_range(m + 1..=10);
        let factors: Vec<LinearForm> = (0..q)
            .map(|_| loop {
                let c: Vec<FieldElement> = (0..=m)
                    .map(|_| {
                        let coords: Vec<_> =
                            (0..k.degree()).map(|_| rat(rng.gen_range(-1..=1))).collect();
                        k.element(&coords)
                    })
                    .collect();
                if let Ok(l) = LinearForm::new(c) {
                    break l;
                }
            })
            .collect();
        let expected = match brute_force_witness(&factors, m) {
            None => GeneralPosition::Ok,
            Some(w) => GeneralPosition::Witness(w),
        };
        assert_eq!(general_position(&factors, m), expected, "trial {trial}");
    }
}

fn random_form(rng: &mut ChaCha8Rng, g: &NumberField, m: usize, q: usize) -> DecomposableForm {
    let k = NumberField::rationals();
    let emb = FieldEmbedding::identity(g);
    let s = PlaceSet::archimedean(g);
    let _ = k;
    let factors = (0..q)
        .map(|_| loop {
            let c: Vec<FieldElement> = (0..=m)
                .map(|_| {
                    let coords: Vec<_> = (0..g.degree()).map(|_| rat(rng.gen_range(-4..=4))).collect();
                    g.element(&coords)
                })
                .collect();
            if let Ok(l) = LinearForm::new(c) {
                break l;
            }
        })
        .collect();
    let a = g.int(rng.gen_range(1..=3));
    form_build(a, factors, &emb, &s).unwrap()
}

#[test]
fn two_path_evaluation_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in [NumberField::rationals(), sqrt2()] {
        for _ in 0..60 {
            let m = rng.gen_range(1..=3);
            let q = rng.gen_range(1..=5);
            let f = random_form(&mut rng, &g, m, q);
            let x: Vec<FieldElement> = (0..=m)
                .map(|_| {
                    let coords: Vec<_> =
                        (0..g.degree()).map(|_| rat_frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
                    g.element(&coords)
                })
                .collect();
            assert_eq!(f.eval(&x).unwrap(), f.eval_factors(&x).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn homogeneity(x0 in -50i64..50, x1 in -50i64..50, lam in -6i64..6) {
        let f = conjugate_pair();
        let q = NumberField::rationals();
        let x = qpoint(&[x0, x1]);
        let y = qpoint(&[lam * x0, lam * x1]);
        let lhs = f.eval(&y).unwrap();
        let rhs = &f.eval(&x).unwrap() * &q.int(lam * lam);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn factor_height_examples() {
    let acc = Accuracy::default();
    let fh = factor_heights(&conjugate_pair(), &acc).unwrap();
    let ln2 = std::f64::consts::LN_2;
    assert!((fh.form.mid().to_f64() - ln2).abs() < 1e-12);
    for h in &fh.factors {
        assert!((h.mid().to_f64() - ln2 / 2.0).abs() < 1e-12);
    }
    assert!((fh.slack.mid().to_f64() + ln2 / 2.0).abs() < 1e-12);
    let single = DecomposableForm::rational(rat(1), &[&[3, 5]], &inf()).unwrap();
    let fh = factor_heights(&single, &acc).unwrap();
    assert!(fh.form.overlaps(&fh.factors[0]));
    assert!(fh.slack.contains(&Dyadic::zero()));
}

#[test]
fn eval_bound_examples() {
    let q = NumberField::rationals();
    let acc = Accuracy::default();
    let g = MultiPoly::parse("X0 + X1", &q, 2).unwrap();
    assert!(poly_eval_bound_check(&g, &qpoint(&[3, 4]), &inf(), &acc).unwrap());
    let five = MultiPoly::parse("5", &q, 2).unwrap();
    assert!(poly_eval_bound_check(&five, &qpoint(&[3, 4]), &inf(), &acc).unwrap());
    assert_eq!(
        poly_eval_bound_check(&g, &qpoint(&[1, -1]), &inf(), &acc),
        Err(Error::ZeroValue)
    );
    let half = MultiPoly::parse("X0/2", &q, 2).unwrap();
    assert_eq!(
        poly_eval_bound_check(&half, &qpoint(&[1, 1]), &inf(), &acc),
        Err(Error::NotSIntegral)
    );
    // the constant fails for non-homogeneous G once S has finite places:
    // N_S(3) = 3 but c3 H_S(X0 + 1) H_S(2) = 2
    let s2 = PlaceSet::from_primes(&q, &[2]).unwrap();
    let shifted = MultiPoly::parse("X0 + 1", &q, 1).unwrap();
    assert!(!poly_eval_bound_check(&shifted, &qpoint(&[2]), &s2, &acc).unwrap());
}

#[test]
fn eval_bound_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let acc = Accuracy::default();
    let q = NumberField::rationals();
    let k = sqrt2();
    let s_q = inf();
    let s_q23 = PlaceSet::from_primes(&q, &[2, 3]).unwrap();
    let s_k = PlaceSet::archimedean(&k);
    let mut checked = 0;
    while checked < 500 {
        let case = checked % 3;
        let (field, s, homogeneous) = match case {
            0 => (&q, &s_q, false),
            1 => (&q, &s_q23, true),
            _ => (&k, &s_k, true),
        };
        let nvars = rng.gen_range(2..=3);
        let deg = rng.gen_range(0..=3u32);
        let terms: Vec<(Vec<u32>, FieldElement)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let mut e = vec![0u32; nvars];
                let total = if homogeneous { deg } else { rng.gen_range(0..=deg) };
                for _ in 0..total {
                    e[rng.gen_range(0..nvars)] += 1;
                }
                let coords: Vec<_> = (0..field.degree()).map(|_| rat(rng.gen_range(-5..=5))).collect();
                (e, field.element(&coords))
            })
            .collect();
        let g = MultiPoly::new(field, nvars, terms).unwrap();
        if g.is_zero() {
            continue;
        }
        let x: Vec<FieldElement> = (0..nvars)
            .map(|_| {
                let coords: Vec<_> = (0..field.degree()).map(|_| rat(rng.gen_range(-20..=20))).collect();
                field.element(&coords)
            })
            .collect();
        match poly_eval_bound_check(&g, &x, s, &acc) {
            Ok(ok) => {
                assert!(ok, "{g} at {x:?}");
                checked += 1;
            }
            Err(Error::ZeroValue | Error::ZeroElement) => {}
            Err(e) => panic!("{e:?}"),
        }
    }
}
