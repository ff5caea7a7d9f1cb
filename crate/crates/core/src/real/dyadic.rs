use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for operations that cannot be exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact binary fraction `man * 2^exp`.
///
/// Kept canonical: the mantissa is odd unless the value is zero, in which
/// case `exp == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        Dyadic {
            man: man >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`.
    pub fn magnitude_bits(&self) -> i64 {
        self.man.bits() as i64 + self.exp
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let man = shift_round(&self.man, shift, dir);
        Dyadic::new(man, self.exp + shift as i64)
    }

    /// `a / b` rounded in the given direction to at least `prec` bits.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let want = prec as i64 + 2 + b.man.bits() as i64 - a.man.bits() as i64;
        let s = want.max(0);
        let num = &a.man << s as usize;
        let q = match dir {
            Round::Down => num.div_floor(&b.man),
            Round::Up => -((-num).div_floor(&b.man)),
        };
        Dyadic::new(q, a.exp - b.exp - s).round(prec, dir)
    }

    /// `sqrt(x)` for `x >= 0`, rounded in the given direction.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 4 - self.man.bits() as i64;
        let mut s = want.max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = &self.man << s as usize;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, (self.exp - s) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            shift_round(&self.man, (-self.exp) as usize, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            shift_round(&self.man, (-self.exp) as usize, Round::Up)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest-ish f64; for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if e < -2000 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Approximate `log2 |x|`, for heuristics only.
    pub fn log2_approx(&self) -> f64 {
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as usize).abs().to_f64().unwrap_or(1.0);
        top.log2() + (self.exp + shift) as f64
    }
}

/// `floor(m / 2^shift)` or `ceil(m / 2^shift)`.
fn shift_round(m: &BigInt, shift: usize, dir: Round) -> BigInt {
    match dir {
        // BigInt's >> rounds toward negative infinity.
        Round::Down => m >> shift,
        Round::Up => -((-m) >> shift),
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.man.sign(), other.man.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude_bits(), other.magnitude_bits());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa == Sign::Plus {
                by_mag
            } else {
                by_mag.reverse()
            };
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scientific(&self.to_rational(), 8))
    }
}

/// `x` in scientific notation with `sig` significant digits, e.g. `1.5021e12`.
pub fn format_scientific(x: &BigRational, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let neg = x.is_negative();
    let ax = x.abs();
    let bits = ax.numer().bits() as f64 - ax.denom().bits() as f64;
    let mut e10 = (bits * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigInt::from(10);
    let digits = loop {
        let shift = sig as i64 - 1 - e10;
        let scaled = if shift >= 0 {
            &ax * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            &ax / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let rounded = scaled.round().to_integer();
        let s = rounded.to_string();
        if s.len() > sig {
            e10 += 1;
        } else if s.len() < sig {
            e10 -= 1;
        } else {
            break s;
        }
    };
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if sig > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push('e');
    out.push_str(&e10.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_order() {
        let a = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(a, Dyadic::new(BigInt::from(3), 2));
        let b = Dyadic::new(BigInt::from(-5), -1);
        assert!(b < Dyadic::zero());
        assert!(Dyadic::from_int(7) > Dyadic::new(BigInt::from(13), -1));
        assert!(Dyadic::new(BigInt::from(-1), 10) < Dyadic::new(BigInt::from(-1), 2));
    }

    #[test]
    fn directed_rounding() {
        let x = Dyadic::from_int(0b1011_0111);
        assert_eq!(x.round(4, Round::Down), Dyadic::from_int(0b1011_0000));
        assert_eq!(x.round(4, Round::Up), Dyadic::from_int(0b1100_0000));
        let y = x.neg();
        assert_eq!(y.round(4, Round::Down), Dyadic::from_int(-0b1100_0000));
        assert_eq!(y.round(4, Round::Up), Dyadic::from_int(-0b1011_0000));
    }

    #[test]
    fn division_and_sqrt_bracket() {
        let one = Dyadic::from_int(1);
        let three = Dyadic::from_int(3);
        let lo = Dyadic::div(&one, &three, 64, Round::Down);
        let hi = Dyadic::div(&one, &three, 64, Round::Up);
        assert!(lo.mul(&three) < one && hi.mul(&three) > one);
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(80, Round::Down);
        let hi = two.sqrt(80, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert_eq!(
            Dyadic::from_int(49).sqrt(10, Round::Up),
            Dyadic::from_int(7)
        );
    }

    #[test]
    fn floor_ceil() {
        let x = Dyadic::new(BigInt::from(-7), -1); // -3.5
        assert_eq!(x.floor(), BigInt::from(-4));
        assert_eq!(x.ceil(), BigInt::from(-3));
    }

    #[test]
    fn scientific_format() {
        let x = BigRational::new(BigInt::from(1502119), BigInt::from(1));
        assert_eq!(format_scientific(&x, 4), "1.502e6");
        let y = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(format_scientific(&y, 3), "-3.33e-1");
        let z = BigRational::from_integer(BigInt::from(999_999));
        assert_eq!(format_scientific(&z, 2), "1.0e6");
    }
}
