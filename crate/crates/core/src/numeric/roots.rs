//! Certified isolation of the complex roots of an integer polynomial.
//!
//! Approximations come from simultaneous Weierstrass (Durand–Kerner) iteration,
//! first in `f64` and then with dyadic arithmetic at a working precision that
//! doubles on demand. Each approximation `z_i` gets the inclusion radius
//! `d * |f(z_i)| / |lc * prod_{j != i} (z_i - z_j)|`, evaluated exactly; when these
//! disks are pairwise disjoint every disk holds exactly one root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dyadic::{Dyadic, Rounding};
use super::interval::{CInterval, Interval};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    Real,
    /// Positive imaginary part; the next root is its conjugate.
    Upper,
    Lower,
}

/// A disk `|z - (re + i im)| <= radius` containing exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisk {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub kind: RootKind,
}

impl RootDisk {
    /// Rectangle enclosing the disk; real roots get an exact zero imaginary part.
    pub fn enclosure(&self) -> CInterval {
        let re = Interval::ball(&self.re, &self.radius);
        let im = match self.kind {
            RootKind::Real => Interval::zero(),
            _ => Interval::ball(&self.im, &self.radius),
        };
        CInterval::new(re, im)
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Pairwise-disjoint root disks ordered as: real roots ascending, then conjugate
/// pairs with the upper root first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootIsolation {
    pub disks: Vec<RootDisk>,
    pub precision: u32,
}

impl RootIsolation {
    pub fn real_count(&self) -> usize {
        self.disks.iter().filter(|d| d.kind == RootKind::Real).count()
    }

    pub fn complex_pairs(&self) -> usize {
        self.disks.iter().filter(|d| d.kind == RootKind::Upper).count()
    }

    pub fn max_radius(&self) -> Dyadic {
        self.disks
            .iter()
            .map(|d| d.radius.clone())
            .max()
            .unwrap_or_else(Dyadic::zero)
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn real(re: Dyadic) -> Self {
        Cx {
            re,
            im: Dyadic::zero(),
        }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn norm_sqr(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn round(&self, w: u32) -> Cx {
        Cx {
            re: self.re.round(w, Rounding::Down),
            im: self.im.round(w, Rounding::Down),
        }
    }
    fn div_approx(&self, o: &Cx, w: u32) -> Cx {
        let n = o.norm_sqr();
        let num = Cx {
            re: self.re.mul(&o.re).add(&self.im.mul(&o.im)),
            im: self.im.mul(&o.re).sub(&self.re.mul(&o.im)),
        };
        Cx {
            re: num.re.div_approx(&n, w),
            im: num.im.div_approx(&n, w),
        }
    }
    fn conj(&self) -> Cx {
        Cx {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
}

fn horner(f: &[Dyadic], z: &Cx, w: Option<u32>) -> Cx {
    let mut acc = Cx::real(Dyadic::zero());
    for c in f.iter().rev() {
        acc = acc.mul(z).add(&Cx::real(c.clone()));
        if let Some(w) = w {
            acc = acc.round(w);
        }
    }
    acc
}

fn f64_start(f: &[BigInt]) -> Vec<(f64, f64)> {
    let d = f.len() - 1;
    let lc = f[d].to_f64().unwrap_or(1.0);
    let c: Vec<f64> = f
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::MAX) / lc)
        .collect();
    // Cauchy bound sets the scale of the initial circle
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            (0.5 * bound * ang.cos(), 0.5 * bound * ang.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let mut v = (0.0, 0.0);
            for k in (0..=d).rev() {
                v = cmul(v, z[i]);
                v.0 += c[k];
            }
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(v, den);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (z[i].0 - step.0, z[i].1 - step.1);
                delta = delta.max(step.0.hypot(step.1));
            }
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Forces real approximations onto the axis and conjugate pairs to be exact
/// conjugates. Returns `None` when no consistent pairing exists.
fn symmetrize(z: &[Cx], w: u32) -> Option<Vec<(Cx, RootKind)>> {
    let tol_exp = -(w as i64) / 2;
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for c in z {
        let scale = c.re.abs().add(&Dyadic::pow2(0));
        let tol = scale.mul_pow2(tol_exp);
        if c.im.abs() <= tol {
            reals.push(Cx::real(c.re.clone()));
        } else if c.im.signum() > 0 {
            upper.push(c.clone());
        } else {
            lower.push(c.clone());
        }
    }
    if upper.len() != lower.len() {
        return None;
    }
    reals.sort_by(|a, b| a.re.cmp(&b.re));
    let mut out: Vec<(Cx, RootKind)> = reals.into_iter().map(|c| (c, RootKind::Real)).collect();
    let mut pairs = Vec::new();
    let mut used = vec![false; lower.len()];
    for u in &upper {
        let (j, _) = lower
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, l)| (j, u.sub(&l.conj()).norm_sqr()))
            .min_by(|a, b| a.1.cmp(&b.1))?;
        used[j] = true;
        let c = Cx {
            re: u.re.add(&lower[j].re).mul_pow2(-1),
            im: u.im.sub(&lower[j].im).mul_pow2(-1),
        }
        .round(w);
        pairs.push(c);
    }
    pairs.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    for c in pairs {
        let l = c.conj();
        out.push((c, RootKind::Upper));
        out.push((l, RootKind::Lower));
    }
    Some(out)
}

/// Inclusion radii for the given centers, or `None` when the disks overlap.
fn certify(f: &[Dyadic], lc: &Dyadic, z: &[Cx]) -> Option<Vec<Dyadic>> {
    let d = z.len();
    let d2 = BigRational::from_integer(BigInt::from(d * d));
    let lc2 = lc.mul(lc).to_rational();
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let v = horner(f, &z[i], None).norm_sqr();
        let mut prod = Dyadic::pow2(0);
        for j in 0..d {
            if i != j {
                prod = prod.mul(&z[i].sub(&z[j]).norm_sqr());
            }
        }
        if prod.is_zero() {
            return None;
        }
        let r2 = &d2 * v.to_rational() / (&lc2 * prod.to_rational());
        radii.push(Dyadic::sqrt_upper(&r2, 40));
    }
    for i in 0..d {
        for j in i + 1..d {
            let s = radii[i].add(&radii[j]);
            if s.mul(&s) >= z[i].sub(&z[j]).norm_sqr() {
                return None;
            }
        }
    }
    Some(radii)
}

fn inside(new: &RootDisk, old: &RootDisk) -> bool {
    if new.radius > old.radius {
        return false;
    }
    let dre = new.re.sub(&old.re);
    let dim = new.im.sub(&old.im);
    let gap = old.radius.sub(&new.radius);
    dre.mul(&dre).add(&dim.mul(&dim)) <= gap.mul(&gap)
}

/// Isolates all roots of the squarefree integer polynomial `f` (ascending
/// coefficients, degree >= 1) to disks of radius at most `target`.
///
/// With `prior` given, the result refines it: every new disk lies inside the old
/// disk with the same index, so labels never change.
pub fn isolate_roots(
    f: &[BigInt],
    target: &Dyadic,
    cap: u32,
    prior: Option<&RootIsolation>,
) -> Result<RootIsolation> {
    let d = f.len() - 1;
    assert!(d >= 1 && !f[d].is_zero(), "root isolation needs a nonconstant polynomial");
    let fd: Vec<Dyadic> = f.iter().map(|c| Dyadic::from_int(c.clone())).collect();
    let lc = fd[d].clone();
    let target_bits = if target.is_zero() {
        cap as i64
    } else {
        -target.log2_floor()
    };
    let mut w: u32 = (target_bits + 40).clamp(64, i64::from(u32::MAX)) as u32;
    let mut z: Vec<Cx> = match prior {
        Some(p) => {
            w = w.max(p.precision);
            p.disks
                .iter()
                .map(|r| Cx {
                    re: r.re.clone(),
                    im: r.im.clone(),
                })
                .collect()
        }
        None => f64_start(f)
            .into_iter()
            .map(|(a, b)| Cx {
                re: Dyadic::from_f64(a),
                im: Dyadic::from_f64(b),
            })
            .collect(),
    };
    loop {
        if w > cap {
            return Err(Error::PrecisionCapExceeded { cap });
        }
        let iters = 60 + 4 * (64 - u64::from(w).leading_zeros() as usize);
        for _ in 0..iters {
            let mut moved = false;
            for i in 0..d {
                let num = horner(&fd, &z[i], Some(w + 16));
                let mut den = Cx::real(lc.clone());
                for j in 0..d {
                    if i != j {
                        den = den.mul(&z[i].sub(&z[j])).round(w + 16);
                    }
                }
                if den.norm_sqr().is_zero() {
                    // coincident approximations: nudge apart
                    z[i].re = z[i].re.add(&Dyadic::pow2(-(w as i64) / 4));
                    moved = true;
                    continue;
                }
                let step = num.div_approx(&den, w + 16);
                let size = z[i].re.abs().add(&z[i].im.abs()).add(&Dyadic::pow2(0));
                if step.norm_sqr() > size.mul(&size).mul_pow2(-2 * (w as i64)) {
                    moved = true;
                }
                z[i] = z[i].sub(&step).round(w + 8);
            }
            if !moved {
                break;
            }
        }
        if let Some(sym) = symmetrize(&z, w) {
            let centers: Vec<Cx> = sym.iter().map(|(c, _)| c.clone()).collect();
            if let Some(radii) = certify(&fd, &lc, &centers) {
                let disks: Vec<RootDisk> = sym
                    .into_iter()
                    .zip(radii)
                    .map(|((c, kind), radius)| RootDisk {
                        re: c.re,
                        im: c.im,
                        radius,
                        kind,
                    })
                    .collect();
                let small = disks.iter().all(|r| &r.radius <= target);
                let disks = match prior {
                    Some(p) => relabel(&p.disks, disks),
                    None => Some(disks),
                };
                if let (true, Some(disks)) = (small, disks) {
                    return Ok(RootIsolation {
                        disks,
                        precision: w,
                    });
                }
            }
        }
        w = w.saturating_mul(2);
    }
}

/// Orders `new` so that disk `i` lies inside `old[i]`.
fn relabel(old: &[RootDisk], new: Vec<RootDisk>) -> Option<Vec<RootDisk>> {
    let mut out = Vec::with_capacity(old.len());
    for o in old {
        let n = new.iter().find(|n| n.kind == o.kind && inside(n, o))?;
        out.push(n.clone());
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sqrt_two() {
        let iso = isolate_roots(&ints(&[-2, 0, 1]), &Dyadic::pow2(-70), 1 << 16, None).unwrap();
        assert_eq!(iso.real_count(), 2);
        let (a, _) = iso.disks[0].approx();
        let (b, _) = iso.disks[1].approx();
        assert!((a + 2f64.sqrt()).abs() < 1e-15);
        assert!((b - 2f64.sqrt()).abs() < 1e-15);
        assert!(iso.max_radius() <= Dyadic::pow2(-70));
    }

    #[test]
    fn gaussian_pair() {
        let iso = isolate_roots(&ints(&[1, 0, 1]), &Dyadic::pow2(-30), 1 << 16, None).unwrap();
        assert_eq!(iso.complex_pairs(), 1);
        assert_eq!(iso.disks[0].kind, RootKind::Upper);
        let (re, im) = iso.disks[0].approx();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plastic_cubic() {
        let iso = isolate_roots(&ints(&[-1, -1, 0, 1]), &Dyadic::pow2(-40), 1 << 16, None).unwrap();
        assert_eq!(iso.real_count(), 1);
        assert_eq!(iso.complex_pairs(), 1);
        assert!((iso.disks[0].approx().0 - 1.324717957244746).abs() < 1e-14);
    }

    #[test]
    fn refinement_is_monotone() {
        let f = ints(&[9, 9, 0, 3, 6, 3, 1]);
        let coarse = isolate_roots(&f, &Dyadic::pow2(-10), 1 << 16, None).unwrap();
        let fine = isolate_roots(&f, &Dyadic::pow2(-200), 1 << 16, Some(&coarse)).unwrap();
        for (n, o) in fine.disks.iter().zip(&coarse.disks) {
            assert!(inside(n, o));
        }
        assert_eq!(fine.disks.len(), 6);
    }

    #[test]
    fn cap_is_reported() {
        let r = isolate_roots(&ints(&[-2, 0, 1]), &Dyadic::pow2(-500), 128, None);
        assert_eq!(r, Err(Error::PrecisionCapExceeded { cap: 128 }));
    }
}
