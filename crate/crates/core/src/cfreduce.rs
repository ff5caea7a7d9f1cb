//! Certified continued fractions and the Legendre-type reduction of the
//! two-logarithm form `r log(alpha) - s log(sqrt 5)`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::fib::fib;
use crate::real::{alpha, log_alpha, parse_decimal, CertifiedReal};
use crate::{Error, Nat, Result};

/// Precision ceiling for certifying partial quotients.
pub const CF_PRECISION_CAP: u32 = 1 << 20;

/// `tau = log(alpha) / log(sqrt 5)`.
pub fn tau_alpha_sqrt5() -> CertifiedReal {
    log_alpha().div(
        &CertifiedReal::from_int(5)
            .ln()
            .div(&CertifiedReal::from_int(2)),
    )
}

/// `(1 + sqrt 5) / 2`, whose expansion is all ones.
pub fn golden() -> CertifiedReal {
    alpha()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CFExpansion {
    #[serde(serialize_with = "decimal_vec")]
    pub a: Vec<BigInt>,
    #[serde(serialize_with = "decimal_vec")]
    pub p: Vec<BigInt>,
    #[serde(serialize_with = "decimal_vec")]
    pub q: Vec<BigInt>,
    /// Working precision (bits) at which every quotient was certified.
    pub precision: u32,
}

fn decimal_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl CFExpansion {
    fn from_quotients(a: Vec<BigInt>, precision: u32) -> Self {
        let (mut p, mut q) = (Vec::with_capacity(a.len()), Vec::with_capacity(a.len()));
        let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
        let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
        for ai in &a {
            let pn = ai * &p1 + &p2;
            let qn = ai * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, pn.clone());
            q2 = std::mem::replace(&mut q1, qn.clone());
            p.push(pn);
            q.push(qn);
        }
        CFExpansion { a, p, q, precision }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `max a_i` over `0 <= i <= n`.
    pub fn max_quotient(&self, n: usize) -> Option<&BigInt> {
        self.a.get(..=n)?.iter().max()
    }

    /// One line per index: `i a_i q_i`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, (a, q)) in self.a.iter().zip(&self.q).enumerate() {
            let _ = writeln!(out, "{i} {a} {q}");
        }
        out
    }
}

/// Quotients certified from the enclosure `[lo, hi]`: each one is accepted
/// only when the whole interval of the complete quotient has the same floor.
fn certified_prefix(mut lo: BigRational, mut hi: BigRational, n: usize) -> Vec<BigInt> {
    let mut a = Vec::new();
    while a.len() < n {
        let f = lo.floor();
        if f != hi.floor() {
            break;
        }
        let ai = f.to_integer();
        let (dl, dh) = (&lo - &f, &hi - &f);
        a.push(ai);
        if dl.is_zero() {
            // The enclosure touches an integer: the next quotient is unbounded.
            break;
        }
        (lo, hi) = (dh.recip(), dl.recip());
    }
    a
}

/// First `n_terms` partial quotients of the irrational `x`, doubling the
/// working precision until all are certified.
pub fn cf_expand(x: &CertifiedReal, n_terms: usize) -> Result<CFExpansion> {
    if n_terms == 0 {
        return Err(Error::domain("need at least one term"));
    }
    let mut cur = x.clone();
    loop {
        let iv = cur.interval();
        let a = certified_prefix(iv.lo().to_rational(), iv.hi().to_rational(), n_terms);
        if a.len() == n_terms {
            return Ok(CFExpansion::from_quotients(a, cur.precision()));
        }
        let prec = cur.precision();
        if prec >= CF_PRECISION_CAP {
            return Err(Error::Precision {
                cap: CF_PRECISION_CAP,
            });
        }
        cur = cur.at_precision((prec * 2).min(CF_PRECISION_CAP));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreReduction {
    #[serde(with = "crate::decimal")]
    pub m: Nat,
    /// Minimal `N` with `q_N > M`.
    pub n: usize,
    #[serde(with = "crate::decimal")]
    pub a_max: BigInt,
    /// `|x - r/s| > 1 / (coefficient_den * s^2)` for `0 < s < M`.
    #[serde(with = "crate::decimal")]
    pub coefficient_den: BigInt,
    /// Cross-check: minimal `N` with `F_N > M`, which always suffices.
    pub n_fib: usize,
    #[serde(with = "crate::decimal")]
    pub a_max_fib: BigInt,
}

/// Legendre reduction for `M`: `a(M) = max{a_i : i <= N}` where `q_N > M`.
pub fn legendre_reduce(x: &CertifiedReal, m: &Nat) -> Result<LegendreReduction> {
    if m.is_zero() {
        return Err(Error::domain("M must be at least 1"));
    }
    let mut n_fib = 1usize;
    while fib(n_fib as u64)? <= *m {
        n_fib += 1;
    }
    let cf = cf_expand(x, n_fib + 1)?;
    let m_int = BigInt::from(m.clone());
    let n =
        cf.q.iter()
            .position(|q| *q > m_int)
            .expect("q_i >= F_i guarantees q_N > M by the Fibonacci index");
    let a_max = cf.max_quotient(n).unwrap().clone();
    let a_max_fib = cf.max_quotient(n_fib).unwrap().clone();
    Ok(LegendreReduction {
        m: m.clone(),
        n,
        coefficient_den: &a_max + 2,
        a_max,
        n_fib,
        a_max_fib,
    })
}

/// One numeric closure, `value < claim`.
#[derive(Clone, Debug, Serialize)]
pub struct Closure {
    pub label: String,
    pub value: String,
    pub claim: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn closure(label: &str, value: &CertifiedReal, claim: &str) -> Closure {
    let c = CertifiedReal::from_decimal(claim);
    Closure {
        label: label.into(),
        value: value.to_sci(8),
        claim: claim.into(),
        holds: value.lt(&c, 4096) == Some(true),
        note: None,
    }
}

fn small_fib(n: u64) -> Nat {
    fib(n).expect("small index")
}

fn nat_real(n: &Nat) -> CertifiedReal {
    CertifiedReal::from_int(BigInt::from(n.clone()))
}

fn real_of(s: &str) -> CertifiedReal {
    CertifiedReal::from_decimal(s)
}

/// The closures behind the `k2 - k4` bound: `log(332 k1 l1) < 201`,
/// `k2 - k4 < 203 / log(alpha) < 422` and `k2 < 850`, plus the bound on
/// `l1` and `F_200 > l1`. `a_plus_2` is the Legendre coefficient denominator.
pub fn apply_reduction_331(k1: &Nat, ell1: &Nat, a_plus_2: u32) -> Vec<Closure> {
    let la = log_alpha();
    let k1r = nat_real(k1);
    let l1r = nat_real(ell1);
    let mut out = Vec::new();
    let ell_from_k = k1r.mul(&la).div(&real_of("1e14").ln());
    out.push(closure(
        "k1 log(alpha) / log(1e14)",
        &ell_from_k,
        &ell1.to_string(),
    ));
    let f200 = nat_real(&small_fib(200));
    out.push(Closure {
        note: Some(format!("F_200 = {}", f200.to_sci(6))),
        ..closure("l1 below F_200", &l1r, &small_fib(200).to_string())
    });
    let lhs = CertifiedReal::from_int(a_plus_2).mul(&k1r).mul(&l1r).ln();
    out.push(closure(&format!("log({a_plus_2} k1 l1)"), &lhs, "201"));
    let q201 = real_of("201").div(&la);
    let q203 = real_of("203").div(&la);
    out.push(Closure {
        note: Some("the bound that follows from 201 alone".into()),
        ..closure("201 / log(alpha)", &q201, "422")
    });
    out.push(Closure {
        note: Some("203 adds the slack c2 - c1 < 2 of the interval (1/4, 2); 201 alone already gives < 418".into()),
        ..closure("203 / log(alpha)", &q203, "422")
    });
    let k2 = CertifiedReal::from_int(4).add(
        &real_of("201")
            .add(&CertifiedReal::from_int(421).mul(&la))
            .div(&la),
    );
    out.push(closure(
        "4 + (201 + 421 log(alpha)) / log(alpha)",
        &k2,
        "850",
    ));
    out
}

/// The closures for `p < 1e14`: `106 k1 < 1.1e36`, `F_170 > 1e35 > k1` and
/// `53 (a + 2) k1^2 < 1e73`.
pub fn small_prime_closures(k1: &Nat, a_plus_2: u32) -> Vec<Closure> {
    let k1r = nat_real(k1);
    vec![
        closure("106 k1", &CertifiedReal::from_int(106).mul(&k1r), "1.1e36"),
        closure("k1", &k1r, "1e35"),
        Closure {
            holds: small_fib(170) > Nat::from(10u32).pow(35),
            ..closure(
                "1e35 below F_170",
                &real_of("1e35"),
                &small_fib(170).to_string(),
            )
        },
        closure(
            &format!("53 * {a_plus_2} * k1^2"),
            &CertifiedReal::from_int(53 * a_plus_2 as i64).mul(&k1r.powi(2)),
            "1e73",
        ),
    ]
}

/// Parse a decimal like `1.5e43` into the integer it denotes (rounded up).
pub fn nat_from_decimal(s: &str) -> Result<Nat> {
    let r = parse_decimal(s);
    if r.is_negative() {
        return Err(Error::domain(format!("`{s}` is negative")));
    }
    Ok(r.ceil().to_integer().to_biguint().unwrap())
}

/// Check `|x - r/s| > 1 / (den s^2)` in certified arithmetic.
pub fn legendre_holds(x: &CertifiedReal, r: &BigInt, s: &BigInt, den: &BigInt) -> Option<bool> {
    let rs = CertifiedReal::from_rational(&BigRational::new(r.clone(), s.clone()));
    let diff = x.sub(&rs);
    let abs = diff.max(&diff.neg());
    let bound = CertifiedReal::from_rational(&BigRational::new(BigInt::one(), den * s * s));
    bound.lt(&abs, 4096)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tau_basics() {
        let t = tau_alpha_sqrt5();
        assert!(t.to_f64() > 0.59 && t.to_f64() < 0.61);
        let t2 = t.at_precision(t.precision() * 2);
        assert!(t2.radius().mul_pow2(1) <= t.radius());
        let cf = cf_expand(&t, 3).unwrap();
        assert_eq!(cf.a, vec![0.into(), 1.into(), 1.into()]);
    }

    #[test]
    fn golden_is_all_ones() {
        let cf = cf_expand(&golden(), 60).unwrap();
        assert!(cf.a.iter().all(|a| a.is_one()));
        for (i, q) in cf.q.iter().enumerate() {
            assert_eq!(q.to_biguint().unwrap(), small_fib(i as u64 + 1));
        }
        let r = legendre_reduce(&golden(), &Nat::from(10u32).pow(20)).unwrap();
        assert_eq!(r.coefficient_den, BigInt::from(3));
    }

    #[test]
    fn tau_max_quotient_is_330() {
        let cf = cf_expand(&tau_alpha_sqrt5(), 201).unwrap();
        assert_eq!(cf.max_quotient(170), Some(&BigInt::from(330)));
        assert_eq!(cf.max_quotient(200), Some(&BigInt::from(330)));
        assert_eq!(cf.a[170], BigInt::from(330));
    }

    #[test]
    fn expansion_invariants() {
        let cf = cf_expand(&tau_alpha_sqrt5(), 201).unwrap();
        for i in 1..cf.len() {
            let det = &cf.p[i] * &cf.q[i - 1] - &cf.p[i - 1] * &cf.q[i];
            let expect = if i % 2 == 1 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            assert_eq!(det, expect, "index {i}");
            assert!(cf.q[i].to_biguint().unwrap() >= small_fib(i as u64));
        }
        let x = tau_alpha_sqrt5().at_precision(cf.precision * 2);
        for i in 0..cf.len() - 1 {
            let r = BigRational::new(cf.p[i].clone(), cf.q[i].clone());
            let d = x.sub(&CertifiedReal::from_rational(&r));
            let bound = CertifiedReal::from_rational(&BigRational::new(
                BigInt::one(),
                &cf.q[i] * &cf.q[i + 1],
            ));
            assert_eq!(d.max(&d.neg()).lt(&bound, 1 << 14), Some(true), "index {i}");
        }
    }

    #[test]
    fn stable_under_more_precision() {
        let t = tau_alpha_sqrt5();
        let cf = cf_expand(&t, 201).unwrap();
        let again = cf_expand(&t.at_precision(cf.precision * 4), 201).unwrap();
        assert_eq!(cf.a, again.a);
    }

    #[test]
    fn legendre_examples() {
        let t = tau_alpha_sqrt5();
        let r = legendre_reduce(&t, &Nat::from(10u32).pow(35)).unwrap();
        assert_eq!(r.n_fib, 170);
        assert_eq!(r.a_max_fib, BigInt::from(330));
        assert_eq!(r.n, 74);
        assert_eq!(r.a_max, BigInt::from(29));
        let big = nat_from_decimal("2.3e41").unwrap();
        let r = legendre_reduce(&t, &big).unwrap();
        assert!(r.n <= 200 && r.n_fib <= 200);
        assert_eq!(r.a_max_fib, BigInt::from(330));
    }

    #[test]
    fn legendre_random_pairs() {
        let t = tau_alpha_sqrt5();
        let tf = t.to_f64();
        let r = legendre_reduce(&t, &Nat::from(1_000_000u32)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e6e);
        for _ in 0..10_000 {
            let s: i64 = rng.gen_range(1..1_000_000);
            let near = (tf * s as f64).round() as i64 + rng.gen_range(-1..=1);
            let ok = legendre_holds(&t, &near.into(), &s.into(), &r.coefficient_den);
            assert_eq!(ok, Some(true), "r/s = {near}/{s}");
        }
    }

    #[test]
    fn closures() {
        let k1 = nat_from_decimal("1.5e43").unwrap();
        let l1 = nat_from_decimal("2.3e41").unwrap();
        let c = apply_reduction_331(&k1, &l1, 332);
        assert!(c.iter().all(|c| c.holds), "{c:?}");
        let q201 = c.iter().find(|c| c.label == "201 / log(alpha)").unwrap();
        assert!((parse_decimal(&q201.value).to_f64().unwrap() - 417.69).abs() < 0.01);
        let c = small_prime_closures(&Nat::from(10u32).pow(34), 332);
        assert!(c.iter().all(|c| c.holds), "{c:?}");
    }

    #[test]
    fn dump_format() {
        let cf = cf_expand(&tau_alpha_sqrt5(), 4).unwrap();
        assert_eq!(cf.dump(), "0 0 1\n1 1 1\n2 1 2\n3 2 5\n");
        assert!(cf_expand(&tau_alpha_sqrt5(), 0).is_err());
    }
}
