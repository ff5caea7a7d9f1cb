//! Lower bounds for linear forms in logarithms and two auxiliary counting
//! estimates, evaluated in certified arithmetic.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::real::CertifiedReal;
use crate::{Error, Result};

fn int(v: i64) -> CertifiedReal {
    CertifiedReal::from_int(v)
}

/// Inputs to Matveev's bound for `Gamma = a_1^{b_1} ... a_t^{b_t} - 1`.
#[derive(Clone, Debug)]
pub struct LinearFormSpec {
    pub t: u32,
    /// Degree of the number field generated by the `a_i`.
    pub d: u32,
    /// `B >= max |b_i|`.
    pub b: CertifiedReal,
    /// `A_i >= max(D h(a_i), |log a_i|, 0.16)`.
    pub a: Vec<CertifiedReal>,
}

impl LinearFormSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t < 2 || self.d < 1 || self.a.len() != self.t as usize {
            return Err(Error::domain(
                "linear form needs t >= 2, D >= 1 and t coefficients A_i",
            ));
        }
        let floor = CertifiedReal::from_ratio(16, 100);
        if let Some(i) = self.a.iter().position(|a| a.lt(&floor, 1024) == Some(true)) {
            return Err(Error::domain(format!("A_{} is below 0.16", i + 1)));
        }
        if self.b.lt(&int(1), 1024) == Some(true) {
            return Err(Error::domain("B must be at least 1"));
        }
        Ok(())
    }
}

/// `1.4 * 30^{t+3} * t^{4.5} * D^2 * (1 + log D)`.
pub fn matveev_constant(t: u32, d: u32) -> CertifiedReal {
    let tt = int(t as i64);
    let dd = int(d as i64);
    CertifiedReal::from_ratio(14, 10)
        .mul(&int(30).powi(t as u64 + 3))
        .mul(&tt.powi(4).mul(&tt.sqrt()))
        .mul(&dd.powi(2))
        .mul(&int(1).add(&dd.ln()))
}

/// Right-hand side of Matveev's inequality
/// `log |Gamma| > -C(t, D) (1 + log B) A_1 ... A_t` (a negative number).
pub fn matveev_bound(spec: &LinearFormSpec) -> Result<CertifiedReal> {
    spec.validate()?;
    let mut acc = matveev_constant(spec.t, spec.d).mul(&int(1).add(&spec.b.ln()));
    for a in &spec.a {
        acc = acc.mul(a);
    }
    Ok(acc.neg())
}

/// Inputs to the two-logarithm bound for `Lambda = b_1 log a_1 - b_2 log a_2`.
#[derive(Clone, Debug)]
pub struct TwoLogSpec {
    pub d: u32,
    /// `log A_i >= max(h(a_i), |log a_i| / D, 1 / D)`, supplied by the caller.
    pub log_a1: CertifiedReal,
    pub log_a2: CertifiedReal,
    pub b1: CertifiedReal,
    pub b2: CertifiedReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LmnBranch {
    /// `log b' + 0.14`
    LogB,
    /// `21 / D`
    TwentyOneOverD,
    /// `1 / 2`
    Half,
}

#[derive(Clone, Debug)]
pub struct LmnBound {
    pub b_prime: CertifiedReal,
    pub branch: LmnBranch,
    /// The selected maximum.
    pub max_term: CertifiedReal,
    /// `24.34 D^4 log A_1 log A_2`.
    pub coefficient: CertifiedReal,
    /// `-coefficient * max_term^2`, a lower bound for `log |Lambda|`.
    pub bound: CertifiedReal,
}

/// `24.34 * D^power * log A_1 * log A_2`. The theorem has `power = 4`.
pub fn lmn_coefficient(
    d: u32,
    power: u32,
    log_a1: &CertifiedReal,
    log_a2: &CertifiedReal,
) -> CertifiedReal {
    CertifiedReal::from_ratio(2434, 100)
        .mul(&int(d as i64).powi(power as u64))
        .mul(log_a1)
        .mul(log_a2)
}

/// `b' = |b_1| / (D log A_2) + |b_2| / (D log A_1)`.
pub fn lmn_b_prime(spec: &TwoLogSpec) -> CertifiedReal {
    let d = int(spec.d as i64);
    let abs = |x: &CertifiedReal| x.max(&x.neg());
    abs(&spec.b1)
        .div(&d.mul(&spec.log_a2))
        .add(&abs(&spec.b2).div(&d.mul(&spec.log_a1)))
}

/// `log |Lambda| >= -24.34 D^4 (max{log b' + 0.14, 21/D, 1/2})^2 log A_1 log A_2`.
pub fn lmn_two_log_bound(spec: &TwoLogSpec) -> Result<LmnBound> {
    if spec.d < 1 {
        return Err(Error::domain("degree must be positive"));
    }
    let b_prime = lmn_b_prime(spec);
    let log_term = b_prime.ln().add(&CertifiedReal::from_ratio(14, 100));
    let mid = CertifiedReal::from_ratio(21, spec.d as i64);
    let half = CertifiedReal::from_ratio(1, 2);
    let cap = 1 << 14;
    let (branch, max_term) = match (
        log_term.lt(&mid, cap),
        log_term.lt(&half, cap),
        mid.lt(&half, cap),
    ) {
        (Some(false), Some(false), _) => (LmnBranch::LogB, log_term),
        (Some(true), _, Some(false)) => (LmnBranch::TwentyOneOverD, mid),
        (_, Some(true), Some(true)) => (LmnBranch::Half, half),
        // Undecided ties: the maximum of the enclosures is still valid.
        _ => (LmnBranch::LogB, log_term.max(&mid).max(&half)),
    };
    let coefficient = lmn_coefficient(spec.d, 4, &spec.log_a1, &spec.log_a2);
    let bound = coefficient.mul(&max_term.powi(2)).neg();
    Ok(LmnBound {
        b_prime,
        branch,
        max_term,
        coefficient,
        bound,
    })
}

/// If `T > (4 s^2)^s` and `x / (log x)^s < T` then `x < 2^s T (log T)^s`.
pub fn gl_lemma_bound(s: u32, t: &CertifiedReal) -> Result<CertifiedReal> {
    if s < 1 {
        return Err(Error::Hypothesis("s must be at least 1".into()));
    }
    let threshold = int(4 * (s as i64) * (s as i64)).powi(s as u64);
    if threshold.lt(t, 1 << 12) != Some(true) {
        return Err(Error::Hypothesis(format!(
            "T > (4s^2)^s fails: T = {} but (4*{s}^2)^{s} = {}",
            t.to_sci(6),
            threshold.to_sci(6)
        )));
    }
    Ok(int(2).powi(s as u64).mul(t).mul(&t.ln().powi(s as u64)))
}

/// The S-unit counting estimate `(8s)^{4 s^4 (s + r + 1)}` and the resulting
/// multiplicity bound, twice that (one count per sign choice).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvBound {
    pub s: u32,
    pub r: u32,
    pub exponent: u64,
    #[serde(with = "crate::decimal")]
    pub count: BigUint,
    #[serde(with = "crate::decimal")]
    pub multiplicity: BigUint,
    /// Number of decimal digits of `multiplicity`.
    pub multiplicity_digits: usize,
    pub log10_multiplicity: f64,
}

pub fn av_count_bound(s: u32, r: u32) -> Result<AvBound> {
    if s < 1 {
        return Err(Error::domain("s must be at least 1"));
    }
    let s64 = s as u64;
    let exponent = 4 * s64.pow(4) * (s64 + r as u64 + 1);
    let base = BigUint::from(8 * s64);
    let count = base.pow(u32::try_from(exponent).map_err(|_| Error::domain("exponent too large"))?);
    let multiplicity = &count * 2u32;
    let log10_multiplicity = 2f64.log10() + exponent as f64 * ((8 * s64) as f64).log10();
    Ok(AvBound {
        s,
        r,
        exponent,
        multiplicity_digits: multiplicity.to_string().len(),
        count,
        multiplicity,
        log10_multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::log_alpha;

    #[test]
    fn matveev_gamma_coefficient() {
        // t=3, D=2, A = (log alpha, 2 log p, log 5), coefficient of (log p)(1 + log k).
        let c = matveev_constant(3, 2)
            .mul(&log_alpha())
            .mul(&int(2))
            .mul(&int(5).ln());
        assert!((c.to_f64() / 1.502_091_634e12 - 1.0).abs() < 1e-8);
        let trivial = LinearFormSpec {
            t: 2,
            d: 1,
            b: int(1),
            a: vec![CertifiedReal::from_ratio(16, 100); 2],
        };
        assert_eq!(matveev_bound(&trivial).unwrap().sign(256), Some(-1));
    }

    #[test]
    fn matveev_rejects_bad_specs() {
        let spec = LinearFormSpec {
            t: 2,
            d: 1,
            b: int(1),
            a: vec![CertifiedReal::from_ratio(1, 10), int(1)],
        };
        assert!(matveev_bound(&spec).is_err());
    }

    #[test]
    fn matveev_is_monotone() {
        let base = LinearFormSpec {
            t: 3,
            d: 2,
            b: int(100),
            a: vec![int(1), int(2), int(3)],
        };
        let v0 = matveev_bound(&base).unwrap();
        let mut bigger_b = base.clone();
        bigger_b.b = int(1000);
        assert_eq!(matveev_bound(&bigger_b).unwrap().lt(&v0, 512), Some(true));
        for i in 0..3 {
            let mut bigger_a = base.clone();
            bigger_a.a[i] = bigger_a.a[i].add(&CertifiedReal::from_ratio(1, 2));
            assert_eq!(matveev_bound(&bigger_a).unwrap().lt(&v0, 512), Some(true));
        }
    }

    #[test]
    fn precision_doubling_stays_within_radius() {
        let spec = LinearFormSpec {
            t: 3,
            d: 2,
            b: int(10).powi(30),
            a: vec![log_alpha(), int(5).ln().scale(2), int(5).ln()],
        };
        let lo = matveev_bound(&spec).unwrap();
        let hi = lo.at_precision(256);
        let diff = hi.mid().sub(&lo.mid()).abs();
        assert!(diff <= lo.radius().add(&hi.radius()));
        assert!(hi.radius() < lo.radius());
    }

    #[test]
    fn lmn_examples() {
        let half = CertifiedReal::from_ratio(1, 2);
        let spec = TwoLogSpec {
            d: 2,
            log_a1: half.clone(),
            log_a2: half.clone(),
            b1: int(1),
            b2: int(1),
        };
        let r = lmn_two_log_bound(&spec).unwrap();
        assert!((r.b_prime.to_f64() - 2.0).abs() < 1e-12);
        assert_eq!(r.branch, LmnBranch::TwentyOneOverD);

        let log5_half = int(5).ln().div(&int(2));
        let c =
            lmn_coefficient(2, 4, &half, &log5_half).mul(&CertifiedReal::from_ratio(21, 2).powi(2));
        assert!((c.to_f64() / 1.7276e4 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn gl_examples() {
        let x = gl_lemma_bound(1, &int(30)).unwrap();
        assert!((x.to_f64() - 60.0 * 30f64.ln()).abs() < 1e-9);
        assert!((x.to_f64() - 204.08).abs() < 0.01);
        assert!(matches!(
            gl_lemma_bound(2, &int(100)),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn av_examples() {
        let b = av_count_bound(1, 0).unwrap();
        assert_eq!(b.count, BigUint::from(8u32).pow(8));
        let b = av_count_bound(2, 1).unwrap();
        assert_eq!(b.exponent, 256);
        assert_eq!(b.count, BigUint::from(16u32).pow(256));
        let b = av_count_bound(3, 2).unwrap();
        assert_eq!(b.exponent, 1944);
        assert_eq!(b.multiplicity, BigUint::from(24u32).pow(1944) * 2u32);
        assert!(b.multiplicity_digits > 2500);
        assert!(b.log10_multiplicity > 2500.0);
    }
}
