//! Logarithmic heights in `Q` and `Q(sqrt 5)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::real::CertifiedReal;
use crate::{Error, Result};

/// `(a + b sqrt 5) / q` with `q > 0` and `gcd(a, b, q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticNumber {
    #[serde(with = "crate::decimal")]
    a: BigInt,
    #[serde(with = "crate::decimal")]
    b: BigInt,
    #[serde(with = "crate::decimal")]
    q: BigInt,
}

impl QuadraticNumber {
    /// # Panics
    /// If `q == 0`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        let (mut a, mut b, mut q) = (a.into(), b.into(), q.into());
        assert!(!q.is_zero(), "zero denominator");
        if q.is_negative() {
            a = -a;
            b = -b;
            q = -q;
        }
        let g = a.gcd(&b).gcd(&q);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            q /= &g;
        }
        QuadraticNumber { a, b, q }
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        QuadraticNumber::new(num, 0, den)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        QuadraticNumber::new(n, 0, 1)
    }

    /// The golden ratio `(1 + sqrt 5) / 2`.
    pub fn alpha() -> Self {
        QuadraticNumber::new(1, 1, 2)
    }

    /// `(1 - sqrt 5) / 2`.
    pub fn beta() -> Self {
        QuadraticNumber::new(1, -1, 2)
    }

    pub fn sqrt5() -> Self {
        QuadraticNumber::new(0, 1, 1)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber::new(self.a.clone(), -&self.b, self.q.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadraticNumber::new(
            &self.a * &o.q + &o.a * &self.q,
            &self.b * &o.q + &o.b * &self.q,
            &self.q * &o.q,
        )
    }

    pub fn neg(&self) -> Self {
        QuadraticNumber::new(-&self.a, -&self.b, self.q.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        QuadraticNumber::new(
            &self.a * &o.a + BigInt::from(5) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            &self.q * &o.q,
        )
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/((a + b s)/q) = q (a - b s) / (a^2 - 5 b^2)
        let norm = &self.a * &self.a - BigInt::from(5) * &self.b * &self.b;
        Some(QuadraticNumber::new(
            &self.q * &self.a,
            -(&self.q * &self.b),
            norm,
        ))
    }

    /// `self^s`; `None` for a negative power of zero.
    pub fn pow(&self, s: i64) -> Option<Self> {
        let base = if s < 0 { self.inv()? } else { self.clone() };
        let mut acc = QuadraticNumber::integer(1);
        let mut b = base;
        let mut e = s.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Some(acc)
    }

    /// Primitive integer minimal polynomial, coefficients from the leading
    /// one down: `[a0, a1]` for rationals, `[a0, a1, a2]` otherwise.
    pub fn minimal_polynomial(&self) -> Vec<BigInt> {
        if self.is_rational() {
            return vec![self.q.clone(), -&self.a];
        }
        // (q x - a)^2 = 5 b^2
        let c2 = &self.q * &self.q;
        let c1 = BigInt::from(-2) * &self.a * &self.q;
        let c0 = &self.a * &self.a - BigInt::from(5) * &self.b * &self.b;
        let g = c2.gcd(&c1).gcd(&c0);
        vec![c2 / &g, c1 / &g, c0 / &g]
    }

    /// Certified real value.
    pub fn value(&self) -> CertifiedReal {
        let s5 = CertifiedReal::from_int(5).sqrt();
        CertifiedReal::from_int(self.a.clone())
            .add(&CertifiedReal::from_int(self.b.clone()).mul(&s5))
            .div(&CertifiedReal::from_int(self.q.clone()))
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}/{}", self.a, self.q)
        } else {
            write!(f, "({} + {}*sqrt5)/{}", self.a, self.b, self.q)
        }
    }
}

fn log_max_one(x: &CertifiedReal) -> CertifiedReal {
    let one = CertifiedReal::from_int(1);
    x.max(&x.neg()).max(&one).ln()
}

/// Absolute logarithmic height `(1/d)(log a0 + sum log max(|conjugate|, 1))`.
pub fn height(g: &QuadraticNumber) -> Result<CertifiedReal> {
    if g.is_zero() {
        return Err(Error::domain("height of zero"));
    }
    let poly = g.minimal_polynomial();
    let lead = CertifiedReal::from_int(poly[0].clone()).ln();
    if g.is_rational() {
        let x = g.value();
        // log a0 + log max(|a/q|, 1) = log max(|a|, q)
        return Ok(lead.add(&log_max_one(&x)));
    }
    let sum = lead
        .add(&log_max_one(&g.value()))
        .add(&log_max_one(&g.conjugate().value()));
    Ok(sum.div(&CertifiedReal::from_int(2)))
}

/// Expression tree for the height calculus.
#[derive(Clone, Debug)]
pub enum HeightExpr {
    /// A known algebraic number; its exact height is used.
    Number(QuadraticNumber),
    /// An opaque quantity with a known upper bound on its height.
    Bounded {
        label: String,
        height: CertifiedReal,
    },
    Sum(Box<HeightExpr>, Box<HeightExpr>),
    Difference(Box<HeightExpr>, Box<HeightExpr>),
    Product(Box<HeightExpr>, Box<HeightExpr>),
    Quotient(Box<HeightExpr>, Box<HeightExpr>),
    Power(Box<HeightExpr>, i64),
}

impl HeightExpr {
    pub fn number(q: QuadraticNumber) -> Self {
        HeightExpr::Number(q)
    }

    pub fn bounded(label: impl Into<String>, height: CertifiedReal) -> Self {
        HeightExpr::Bounded {
            label: label.into(),
            height,
        }
    }

    pub fn plus(self, o: HeightExpr) -> Self {
        HeightExpr::Sum(Box::new(self), Box::new(o))
    }

    pub fn minus(self, o: HeightExpr) -> Self {
        HeightExpr::Difference(Box::new(self), Box::new(o))
    }

    pub fn times(self, o: HeightExpr) -> Self {
        HeightExpr::Product(Box::new(self), Box::new(o))
    }

    pub fn over(self, o: HeightExpr) -> Self {
        HeightExpr::Quotient(Box::new(self), Box::new(o))
    }

    pub fn pow(self, s: i64) -> Self {
        HeightExpr::Power(Box::new(self), s)
    }

    /// Exact value when every leaf is a known number.
    pub fn evaluate(&self) -> Option<QuadraticNumber> {
        Some(match self {
            HeightExpr::Number(q) => q.clone(),
            HeightExpr::Bounded { .. } => return None,
            HeightExpr::Sum(a, b) => a.evaluate()?.add(&b.evaluate()?),
            HeightExpr::Difference(a, b) => a.evaluate()?.sub(&b.evaluate()?),
            HeightExpr::Product(a, b) => a.evaluate()?.mul(&b.evaluate()?),
            HeightExpr::Quotient(a, b) => a.evaluate()?.mul(&b.evaluate()?.inv()?),
            HeightExpr::Power(a, s) => a.evaluate()?.pow(*s)?,
        })
    }

    fn describe(&self) -> String {
        match self {
            HeightExpr::Number(q) => q.to_string(),
            HeightExpr::Bounded { label, .. } => label.clone(),
            HeightExpr::Sum(a, b) => format!("({} + {})", a.describe(), b.describe()),
            HeightExpr::Difference(a, b) => format!("({} - {})", a.describe(), b.describe()),
            HeightExpr::Product(a, b) => format!("{} * {}", a.describe(), b.describe()),
            HeightExpr::Quotient(a, b) => format!("{} / {}", a.describe(), b.describe()),
            HeightExpr::Power(a, s) => format!("{}^{s}", a.describe()),
        }
    }
}

/// Upper bound on `h(expr)` together with the rules applied, innermost first.
#[derive(Clone, Debug)]
pub struct HeightBound {
    pub bound: CertifiedReal,
    pub trace: Vec<String>,
}

/// Bound `h(expr)` with `h(x +- y) <= h(x) + h(y) + log 2`,
/// `h(x y^{+-1}) <= h(x) + h(y)` and `h(x^s) = |s| h(x)`.
pub fn height_calculus(expr: &HeightExpr) -> Result<HeightBound> {
    let mut trace = Vec::new();
    let bound = walk(expr, &mut trace)?;
    Ok(HeightBound { bound, trace })
}

fn walk(expr: &HeightExpr, trace: &mut Vec<String>) -> Result<CertifiedReal> {
    let log2 = || CertifiedReal::from_int(2).ln();
    let (value, rule) = match expr {
        HeightExpr::Number(q) => {
            let h = if q.is_zero() {
                CertifiedReal::from_int(0)
            } else {
                height(q)?
            };
            (h, "exact height")
        }
        HeightExpr::Bounded { height, .. } => (height.clone(), "given bound"),
        HeightExpr::Sum(a, b) | HeightExpr::Difference(a, b) => (
            walk(a, trace)?.add(&walk(b, trace)?).add(&log2()),
            "sum rule (+ log 2)",
        ),
        HeightExpr::Product(a, b) | HeightExpr::Quotient(a, b) => {
            (walk(a, trace)?.add(&walk(b, trace)?), "product rule")
        }
        HeightExpr::Power(a, s) => (walk(a, trace)?.scale(s.abs()), "power rule"),
    };
    trace.push(format!(
        "h({}) <= {} [{rule}]",
        expr.describe(),
        value.to_sci(6)
    ));
    Ok(value)
}
