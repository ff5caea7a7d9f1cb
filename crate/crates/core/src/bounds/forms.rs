//! The small linear forms attached to a pair of representations
//! `F_k - p^l = F_{k'} - p^{l'}` with `l > l'`, as certified reals.

use num_bigint::{BigInt, Sign};
use serde::Serialize;

use crate::real::{alpha, log_alpha, CertifiedReal};
use crate::{FibIndex, Nat};

const CAP: u32 = 1 << 13;

fn nat(p: &Nat) -> CertifiedReal {
    CertifiedReal::from_int(BigInt::from_biguint(Sign::Plus, p.clone()))
}

fn sqrt5() -> CertifiedReal {
    CertifiedReal::from_int(5).sqrt()
}

/// `Gamma_{k,l} = alpha^k p^{-l} / sqrt(5) - 1`.
pub fn gamma(k: FibIndex, l: u32, p: &Nat) -> CertifiedReal {
    alpha()
        .powi(k)
        .div(&nat(p).powi(l as u64).mul(&sqrt5()))
        .sub(&CertifiedReal::from_int(1))
}

/// `Gamma'_{k,l} = alpha^k p^{-l} (1 - alpha^{k'-k}) / (sqrt(5) (1 - p^{l'-l})) - 1`.
pub fn gamma_prime(k: FibIndex, l: u32, k2: FibIndex, l2: u32, p: &Nat) -> CertifiedReal {
    let one = CertifiedReal::from_int(1);
    let a = alpha();
    let pp = nat(p);
    let num = a.powi(k).sub(&a.powi(k2));
    let den = pp.powi(l as u64).sub(&pp.powi(l2 as u64)).mul(&sqrt5());
    num.div(&den).sub(&one)
}

/// `Lambda_{k,l} = k log(alpha) - l log(p) - log(sqrt(5))`.
pub fn lambda(k: FibIndex, l: u32, p: &Nat) -> CertifiedReal {
    log_alpha()
        .mul(&CertifiedReal::from_int(k))
        .sub(&nat(p).ln().mul(&CertifiedReal::from_int(l)))
        .sub(
            &CertifiedReal::from_int(5)
                .ln()
                .div(&CertifiedReal::from_int(2)),
        )
}

/// One inequality checked on a concrete pair.
#[derive(Clone, Debug, Serialize)]
pub struct FormCheck {
    pub form: &'static str,
    pub k: FibIndex,
    pub l: u32,
    pub k2: FibIndex,
    pub l2: u32,
    /// `|form|`, upper endpoint.
    pub value: String,
    pub bound: String,
    /// `None` if the comparison was undecided at the precision cap.
    pub holds: Option<bool>,
}

fn abs(x: &CertifiedReal) -> CertifiedReal {
    x.max(&x.neg())
}

/// Check `|Gamma| < 4.2 / p^{l-l'}`, `|Gamma'| < 6.2 / alpha^{k+k'}` and
/// `|Lambda| < 26.5 / p^{l-l'}` for the pair `(k, l)`, `(k2, l2)`, `l > l2`.
/// These need `p >= 5` and `alpha^{k2} < alpha^4 p^{l2}`.
pub fn spot_check(p: &Nat, k: FibIndex, l: u32, k2: FibIndex, l2: u32) -> Vec<FormCheck> {
    assert!(l > l2, "the pair must be ordered by decreasing exponent");
    let gap = nat(p).powi((l - l2) as u64);
    let cases = [
        (
            "Gamma",
            gamma(k, l, p),
            CertifiedReal::from_ratio(42, 10).div(&gap),
        ),
        (
            "Gamma'",
            gamma_prime(k, l, k2, l2, p),
            CertifiedReal::from_ratio(62, 10).div(&alpha().powi(k + k2)),
        ),
        (
            "Lambda",
            lambda(k, l, p),
            CertifiedReal::from_ratio(265, 10).div(&gap),
        ),
    ];
    cases
        .into_iter()
        .map(|(form, value, bound)| {
            let value = abs(&value);
            FormCheck {
                form,
                k,
                l,
                k2,
                l2,
                holds: value.lt(&bound, CAP),
                value: value.to_sci(8),
                bound: bound.to_sci(8),
            }
        })
        .collect()
}
