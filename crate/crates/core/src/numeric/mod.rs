//! Certified numerics: dyadic rationals, outward-rounded intervals and root isolation.

pub mod dyadic;
pub mod interval;
pub mod roots;

pub use dyadic::{Dyadic, Rounding};
pub use interval::{ln_bounds, ln_rational, CInterval, Interval};
pub use roots::{isolate_roots, RootDisk, RootIsolation, RootKind};

/// Default cap on working precision, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 1 << 16;

/// Requested interval width and the working-precision cap for certified numerics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Accuracy {
    /// Intervals are refined until their width is at most `2^-tolerance_bits`.
    pub tolerance_bits: u32,
    pub cap: u32,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy::from_tolerance(1e-12, DEFAULT_PRECISION_CAP)
    }
}

impl Accuracy {
    pub fn new(tolerance_bits: u32, cap: u32) -> Self {
        Accuracy { tolerance_bits, cap }
    }

    /// Smallest bit count whose power of two does not exceed `tol`.
    pub fn from_tolerance(tol: f64, cap: u32) -> Self {
        let bits = if tol > 0.0 && tol < 1.0 {
            (-tol.log2()).ceil() as u32
        } else {
            1
        };
        Accuracy {
            tolerance_bits: bits.max(1),
            cap,
        }
    }

    pub fn with_bits(self, tolerance_bits: u32) -> Self {
        Accuracy {
            tolerance_bits,
            ..self
        }
    }

    pub fn tolerance(&self) -> Dyadic {
        Dyadic::pow2(-i64::from(self.tolerance_bits))
    }

    pub fn accepts(&self, iv: &Interval) -> bool {
        iv.width() <= self.tolerance()
    }
}

/// Compares `log lhs` with the interval family `rhs`, doubling the working
/// precision until the two separate. `Ok(None)` means the cap was reached first.
pub fn compare_log<F>(
    lhs: &num_rational::BigRational,
    mut rhs: F,
    acc: &Accuracy,
) -> crate::Result<Option<std::cmp::Ordering>>
where
    F: FnMut(&Accuracy) -> crate::Result<Interval>,
{
    use std::cmp::Ordering;
    let mut bits = acc.tolerance_bits.max(32);
    while bits <= acc.cap {
        let a = ln_rational(lhs, bits + 4);
        let r = match rhs(&acc.with_bits(bits)) {
            Ok(r) => r,
            Err(crate::Error::PrecisionCapExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if a.hi < r.lo {
            return Ok(Some(Ordering::Less));
        }
        if a.lo > r.hi {
            return Ok(Some(Ordering::Greater));
        }
        bits = bits.saturating_mul(2);
    }
    Ok(None)
}
