//! Order of appearance `z(p)` of a prime in the Fibonacci sequence and
//! `p`-adic valuations of Fibonacci numbers.
//!
//! `p | F_k` holds exactly when `z(p) | k`, and once `p | F_k` the valuation
//! `f = nu_p(F_k)` satisfies `p^(f - e_p) z(p) | k` for odd `p`, where
//! `e_p = nu_p(F_{z(p)})`. For `p = 2` the valuation grows one step faster
//! (`nu_2(F_6) = 3`), so the law is used only to size a modulus; the
//! valuation itself is always read off an exact residue.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::fib::{fib, fib_mod, fib_mod_u64, FibTable};
use crate::primality::is_prime_u64;
use crate::roots::valuation;
use crate::{Error, FibIndex, Nat, Result};

/// Primes below this bound use the residue scan; larger ones reduce
/// `p - (5/p)` by its prime factors.
pub const SCAN_LIMIT: u64 = 1 << 20;

/// Above this many decimal digits of `F_k` the exact-division cross-check of
/// [`nu_p_fib`] is skipped.
pub const EXACT_DIVISION_DIGITS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryPointData {
    #[serde(with = "crate::decimal")]
    pub p: Nat,
    pub z: FibIndex,
    pub e_p: u64,
}

fn prime_u64(p: &Nat) -> Result<u64> {
    let small = p
        .to_u64()
        .ok_or_else(|| Error::domain(format!("prime {p} does not fit in 64 bits")))?;
    if !is_prime_u64(small) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    Ok(small)
}

/// `z(p)` by iterating `(F_k, F_{k+1}) mod p` until the first zero.
pub fn entry_point_by_scan(p: u64) -> FibIndex {
    let m = p as u128;
    let (mut a, mut b) = (1u128 % m, 1u128 % m);
    let mut k = 1;
    while a != 0 {
        let next = (a + b) % m;
        a = b;
        b = next;
        k += 1;
    }
    k
}

fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `z(p)` as the least divisor `d` of `p - (5/p)` with `F_d = 0 (mod p)`.
pub fn entry_point_by_divisors(p: u64) -> FibIndex {
    match p {
        2 => return 3,
        5 => return 5,
        _ => {}
    }
    let mut z = match p % 5 {
        1 | 4 => p - 1,
        _ => p + 1,
    };
    for q in factor_u64(z) {
        while z % q == 0 && fib_mod_u64(z / q, p) == 0 {
            z /= q;
        }
    }
    z
}

/// Exact `nu_p(F_k)` for `k >= 1`, read from `F_k mod p^e` with `e` grown
/// until the residue is nonzero. `start` is a first guess for `e`.
fn valuation_by_residue(p: u64, k: FibIndex, start: u64) -> u64 {
    let pn = BigUint::from(p);
    let mut e = start.max(1);
    loop {
        let modulus = pn.pow(e as u32);
        let r = fib_mod(k, &modulus);
        if !r.is_zero() {
            return valuation(&r, &pn);
        }
        e *= 2;
    }
}

/// Order of appearance `z(p)` and `e_p = nu_p(F_{z(p)})`.
pub fn entry_point(p: &Nat) -> Result<EntryPointData> {
    let small = prime_u64(p)?;
    let z = if small < SCAN_LIMIT {
        entry_point_by_scan(small)
    } else {
        entry_point_by_divisors(small)
    };
    let e_p = valuation_by_residue(small, z, 2);
    Ok(EntryPointData {
        p: p.clone(),
        z,
        e_p,
    })
}

/// `nu_p(F_k)` for prime `p` and `k >= 1`.
///
/// Returns 0 when `z(p)` does not divide `k`. Otherwise the valuation is
/// computed from a residue modulo a power of `p` sized by the valuation law,
/// and cross-checked by exact division when `F_k` is small enough.
pub fn nu_p_fib(p: &Nat, k: FibIndex) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain("nu_p(F_0) is undefined (F_0 = 0)"));
    }
    let data = entry_point(p)?;
    if !k.is_multiple_of(data.z) {
        return Ok(0);
    }
    let small = data.p.to_u64().expect("checked by entry_point");
    let mut law_bound = data.e_p;
    let mut quotient = k / data.z;
    while quotient.is_multiple_of(small) {
        quotient /= small;
        law_bound += 1;
    }
    let slack = if small == 2 { 2 } else { 1 };
    let f = valuation_by_residue(small, k, law_bound + slack);

    // digits(F_k) ~ k log10(alpha)
    if (k as f64) * 0.20898764 < EXACT_DIVISION_DIGITS as f64 {
        let exact = valuation(&fib(k)?, p);
        assert_eq!(
            exact, f,
            "valuation of F_{k} at {p}: residue and division disagree"
        );
    }
    Ok(f)
}

/// `nu_p(F_k)` by exact division, for cross-checks on small indices.
pub fn nu_p_fib_by_division(table: &FibTable, p: &Nat, k: FibIndex) -> u64 {
    valuation(&table[k], p)
}
