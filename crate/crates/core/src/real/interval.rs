use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{format_scientific, Dyadic, Round};

/// Closed interval `[lo, hi]` with dyadic endpoints, used as a rigorous
/// enclosure of a real number. Every operation rounds outward to `prec`
/// significant bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval::new(x.clone(), x, prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(v), prec)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        let (num, den) = (Dyadic::from_int(num), Dyadic::from_int(den));
        let (a, b) = if den.is_negative() {
            (num.neg(), den.neg())
        } else {
            (num, den)
        };
        Interval {
            lo: Dyadic::div(&a, &b, prec, Round::Down),
            hi: Dyadic::div(&a, &b, prec, Round::Up),
            prec,
        }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(x.numer().clone(), x.denom().clone(), prec)
    }

    /// Enclosure of a decimal literal such as `"1.51e12"` or `"0.25"`.
    pub fn from_decimal(s: &str, prec: u32) -> Self {
        Interval::from_rational(&parse_decimal(s), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Half-width, rounded up.
    pub fn radius(&self) -> Dyadic {
        self.hi.sub(&self.lo).mul_pow2(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    /// `self < other` for every pair of points.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Integer part, if it is the same across the whole interval.
    pub fn certain_floor(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        (f == self.hi.floor()).then_some(f)
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(Dyadic::zero(), m, self.prec)
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    /// Hull of two enclosures.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return None;
        }
        let prec = self.prec.max(other.prec);
        let corners = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = corners
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, prec, Round::Down))
            .min()
            .expect("four corners");
        let hi = corners
            .iter()
            .map(|(a, b)| Dyadic::div(a, b, prec, Round::Up))
            .max()
            .expect("four corners");
        Some(Interval::new(lo, hi, prec))
    }

    pub fn recip(&self) -> Interval {
        Interval::from_int(1, self.prec)
            .checked_div(self)
            .expect("reciprocal of an interval containing zero")
    }

    pub fn sqrt(&self) -> Interval {
        assert!(
            !self.lo.is_negative(),
            "square root of a possibly negative interval"
        );
        Interval {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// `self^n` for `n >= 0`.
    pub fn powi(&self, n: u64) -> Interval {
        let mut acc = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n;
        if e.is_multiple_of(2) && e > 0 {
            // Even powers are nonnegative; squaring |x| keeps that visible.
            base = base.abs();
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Interval {
        self * &Interval::from_int(k, self.prec)
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Interval {
        assert!(
            self.lo.is_positive(),
            "logarithm of a possibly nonpositive interval"
        );
        let (lo, _) = ln_bounds(&self.lo, self.prec);
        let (_, hi) = ln_bounds(&self.hi, self.prec);
        Interval::new(lo, hi, self.prec)
    }

    pub fn to_sci(&self, sig: usize) -> String {
        format_scientific(&self.mid().to_rational(), sig)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {}",
            self.to_sci(12),
            self.radius().round(8, Round::Up)
        )
    }
}

/// Parse `[-]digits[.digits][e[-]digits]` exactly.
pub fn parse_decimal(s: &str) -> BigRational {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..].parse::<i64>().expect("decimal exponent"),
        ),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().expect("decimal digits");
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    }
}

/// `atanh(t) * 2^w` from below for a fixed-point `t_fp <= t * 2^w` with
/// `0 <= t < 1/3`, together with the number of series terms used. The true
/// value lies in `[sum, sum + 4 * terms + 8]`.
fn atanh_fixed(t_fp: &BigInt, w: usize) -> (BigInt, u64) {
    let t2 = (t_fp * t_fp) >> w;
    let mut power = t_fp.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while power.is_positive() {
        sum += &power / BigInt::from(2 * k + 1);
        power = (&power * &t2) >> w;
        k += 1;
    }
    (sum, k)
}

/// Fixed-point enclosure `[lo, hi] * 2^-w` of `ln 2`.
fn ln2_fixed(w: usize) -> (BigInt, BigInt) {
    // ln 2 = 2 atanh(1/3)
    let t_fp = (BigInt::one() << w).div_floor(&BigInt::from(3));
    let (s, n) = atanh_fixed(&t_fp, w);
    let err = BigInt::from(4 * n + 8);
    (&s << 1usize, (s + err) << 1usize)
}

/// Lower and upper dyadic bounds on `ln x` for `x > 0`.
fn ln_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    let man = x.mantissa();
    let b = man.bits() as i64;
    // x = m * 2^e2 with m = man / 2^(b-1) in [1, 2)
    let e2 = x.exponent() + b - 1;
    let e2_bits = 64 - e2.unsigned_abs().leading_zeros() as u64;
    let w = (prec as u64 + 24 + e2_bits + 64 - (prec as u64).leading_zeros() as u64) as usize;

    let half = BigInt::one() << (b - 1) as usize;
    let t_fp = ((man - &half) << w).div_floor(&(man + &half));
    let (s, n) = atanh_fixed(&t_fp, w);
    let lnm_lo = &s << 1usize;
    let lnm_hi = (s + BigInt::from(4 * n + 8)) << 1usize;

    let (l2_lo, l2_hi) = ln2_fixed(w);
    let e = BigInt::from(e2);
    let (lo, hi) = if e2 >= 0 {
        (&e * l2_lo + lnm_lo, &e * l2_hi + lnm_hi)
    } else {
        (&e * l2_hi + lnm_lo, &e * l2_lo + lnm_hi)
    };
    (
        Dyadic::new(lo, -(w as i64)).round(prec, Round::Down),
        Dyadic::new(hi, -(w as i64)).round(prec, Round::Up),
    )
}

fn sum_interval(a: &Interval, b: &Interval) -> Interval {
    let prec = a.prec.max(b.prec);
    Interval {
        lo: a.lo.add(&b.lo).round(prec, Round::Down),
        hi: a.hi.add(&b.hi).round(prec, Round::Up),
        prec,
    }
}

fn product_interval(a: &Interval, b: &Interval) -> Interval {
    let prec = a.prec.max(b.prec);
    let corners = [
        a.lo.mul(&b.lo),
        a.lo.mul(&b.hi),
        a.hi.mul(&b.lo),
        a.hi.mul(&b.hi),
    ];
    let lo = corners.iter().min().expect("four corners").clone();
    let hi = corners.iter().max().expect("four corners").clone();
    Interval {
        lo: lo.round(prec, Round::Down),
        hi: hi.round(prec, Round::Up),
        prec,
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Interval> for &Interval {
            type Output = Interval;
            fn $method(self, rhs: &Interval) -> Interval {
                $body(self, rhs)
            }
        }
        impl $trait<Interval> for Interval {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Interval> for Interval {
            type Output = Interval;
            fn $method(self, rhs: &Interval) -> Interval {
                $body(&self, rhs)
            }
        }
        impl $trait<Interval> for &Interval {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, sum_interval);
forward_binop!(Sub, sub, |a: &Interval, b: &Interval| sum_interval(a, &-b));
forward_binop!(Mul, mul, product_interval);
forward_binop!(Div, div, |a: &Interval, b: &Interval| a
    .checked_div(b)
    .expect("division by an interval containing zero"));
