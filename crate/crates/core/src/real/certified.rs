use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::Dyadic;
use super::interval::{parse_decimal, Interval};
use super::DEFAULT_PRECISION;
use crate::{Error, Result};

type Recipe = Arc<dyn Fn(u32) -> Interval + Send + Sync>;

/// A real number known through enclosures at any requested precision.
///
/// The cached enclosure is the one at the current precision; arithmetic
/// composes recipes so that [`CertifiedReal::at_precision`] re-evaluates the
/// whole expression tree, not just the final step.
#[derive(Clone)]
pub struct CertifiedReal {
    value: Interval,
    recipe: Recipe,
}

impl CertifiedReal {
    pub fn from_recipe(
        prec: u32,
        recipe: impl Fn(u32) -> Interval + Send + Sync + 'static,
    ) -> Self {
        let recipe: Recipe = Arc::new(recipe);
        CertifiedReal {
            value: recipe(prec),
            recipe,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        let v: BigInt = v.into();
        Self::from_recipe(DEFAULT_PRECISION, move |p| Interval::from_int(v.clone(), p))
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (num, den): (BigInt, BigInt) = (num.into(), den.into());
        Self::from_recipe(DEFAULT_PRECISION, move |p| {
            Interval::from_ratio(num.clone(), den.clone(), p)
        })
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Self::from_ratio(x.numer().clone(), x.denom().clone())
    }

    /// Exact decimal literal, e.g. `"4.6e12"`.
    pub fn from_decimal(s: &str) -> Self {
        Self::from_rational(&parse_decimal(s))
    }

    pub fn interval(&self) -> &Interval {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.value.precision()
    }

    pub fn radius(&self) -> Dyadic {
        self.value.radius()
    }

    pub fn mid(&self) -> Dyadic {
        self.value.mid()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn to_sci(&self, sig: usize) -> String {
        self.value.to_sci(sig)
    }

    /// The same number re-evaluated at `prec` bits.
    pub fn at_precision(&self, prec: u32) -> CertifiedReal {
        CertifiedReal {
            value: (self.recipe)(prec),
            recipe: self.recipe.clone(),
        }
    }

    /// Escalate precision (doubling, up to `cap` bits) until the radius is
    /// at most `2^-bits_below_one * max(1, |x|)`.
    pub fn refine_to(&self, rel_bits: i64, cap: u32) -> Result<CertifiedReal> {
        let mut cur = self.clone();
        loop {
            let scale = cur.value.mid().magnitude_bits().max(0);
            if cur.value.radius().is_zero()
                || cur.value.radius().magnitude_bits() <= scale - rel_bits
            {
                return Ok(cur);
            }
            if cur.precision() >= cap {
                return Err(Error::Precision { cap });
            }
            cur = cur.at_precision((cur.precision() * 2).min(cap));
        }
    }

    /// Decide `self < other`, escalating precision as needed. Returns `None`
    /// if the question is still open at `cap` bits (e.g. the two are equal).
    pub fn lt(&self, other: &CertifiedReal, cap: u32) -> Option<bool> {
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.value.certainly_lt(&b.value) {
                return Some(true);
            }
            if b.value.certainly_le(&a.value) {
                return Some(false);
            }
            let prec = a.precision().max(b.precision());
            if prec >= cap {
                return None;
            }
            let next = (prec * 2).min(cap);
            a = a.at_precision(next);
            b = b.at_precision(next);
        }
    }

    /// Sign of `self` (`-1`, `1`), escalating precision; `None` if undecided.
    pub fn sign(&self, cap: u32) -> Option<i32> {
        let mut cur = self.clone();
        loop {
            if cur.value.certainly_positive() {
                return Some(1);
            }
            if cur.value.certainly_negative() {
                return Some(-1);
            }
            if cur.precision() >= cap {
                return None;
            }
            cur = cur.at_precision((cur.precision() * 2).min(cap));
        }
    }

    fn unary(&self, f: impl Fn(&Interval) -> Interval + Send + Sync + 'static) -> CertifiedReal {
        let inner = self.recipe.clone();
        let value = f(&self.value);
        CertifiedReal {
            value,
            recipe: Arc::new(move |p| f(&inner(p))),
        }
    }

    fn binary(
        &self,
        other: &CertifiedReal,
        f: impl Fn(&Interval, &Interval) -> Interval + Send + Sync + 'static,
    ) -> CertifiedReal {
        let (ra, rb) = (self.recipe.clone(), other.recipe.clone());
        let value = f(&self.value, &other.value);
        CertifiedReal {
            value,
            recipe: Arc::new(move |p| f(&ra(p), &rb(p))),
        }
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        self.binary(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        self.binary(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        self.binary(other, |a, b| a * b)
    }

    /// Quotient; panics if the divisor's enclosure contains zero at some
    /// evaluated precision.
    pub fn div(&self, other: &CertifiedReal) -> CertifiedReal {
        self.binary(other, |a, b| a / b)
    }

    pub fn neg(&self) -> CertifiedReal {
        self.unary(|a| -a)
    }

    pub fn ln(&self) -> CertifiedReal {
        self.unary(Interval::ln)
    }

    pub fn sqrt(&self) -> CertifiedReal {
        self.unary(Interval::sqrt)
    }

    pub fn powi(&self, n: u64) -> CertifiedReal {
        self.unary(move |a| a.powi(n))
    }

    pub fn max(&self, other: &CertifiedReal) -> CertifiedReal {
        self.binary(other, Interval::max)
    }

    pub fn scale(&self, k: i64) -> CertifiedReal {
        self.unary(move |a| a.mul_int(k))
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CertifiedReal({})", self.value)
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_compose_and_refine() {
        let five = CertifiedReal::from_int(5);
        let alpha = CertifiedReal::from_int(1)
            .add(&five.sqrt())
            .div(&CertifiedReal::from_int(2));
        let log_alpha = alpha.ln();
        assert!((log_alpha.to_f64() - 0.481_211_825_059_603_4).abs() < 1e-15);
        let r1 = log_alpha.radius();
        let fine = log_alpha.at_precision(256);
        let r2 = fine.radius();
        assert!(r2.mul_pow2(1) <= r1);
        assert!(log_alpha.interval().contains(&fine.mid()) || r1 > r2);
    }

    #[test]
    fn comparisons_escalate() {
        let third = CertifiedReal::from_ratio(1, 3);
        let close = CertifiedReal::from_rational(&BigRational::new(
            BigInt::from(10).pow(60) / 3 + 1,
            BigInt::from(10).pow(60),
        ));
        assert_eq!(third.lt(&close, 1 << 12), Some(true));
        assert_eq!(close.lt(&third, 1 << 12), Some(false));
        assert_eq!(third.lt(&third, 512), None);
        assert_eq!(third.sub(&close).sign(1 << 12), Some(-1));
    }

    #[test]
    fn refine_hits_target() {
        let x = CertifiedReal::from_int(10).ln();
        let fine = x.refine_to(300, 1 << 12).unwrap();
        assert!(fine.radius().magnitude_bits() <= 2 - 300);
        assert!(matches!(
            x.refine_to(300, 128),
            Err(Error::Precision { cap: 128 })
        ));
    }
}
