//! Exact integer roots and perfect prime-power detection.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::primality::{is_prime, is_prime_u64, primes_up_to, small_factor};
use crate::Nat;

/// `floor(x^(1/n))`, with the postcondition `r^n <= x < (r+1)^n` enforced
/// by an exact correction step after Newton iteration.
///
/// # Panics
/// If `n == 0`.
pub fn integer_nth_root(x: &Nat, n: u32) -> Nat {
    assert!(n >= 1, "root degree must be positive");
    if n == 1 || x.is_zero() {
        return x.clone();
    }
    let mut r = x.nth_root(n);
    while r.pow(n) > *x {
        r -= 1u32;
    }
    loop {
        let next = &r + 1u32;
        if next.pow(n) <= *x {
            r = next;
        } else {
            break;
        }
    }
    r
}

/// `Some(r)` when `x = r^n` exactly.
pub fn exact_root(x: &Nat, n: u32) -> Option<Nat> {
    let r = integer_nth_root(x, n);
    (r.pow(n) == *x).then_some(r)
}

/// Small primes `q = 1 (mod l)` used to reject non-`l`-th powers cheaply.
fn residue_filter(l: u32) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("residue filter cache poisoned");
    guard
        .entry(l)
        .or_insert_with(|| {
            let step = l as u64;
            let mut out = Vec::new();
            let mut q = step + 1;
            while out.len() < 4 && q < 1 << 24 {
                if is_prime_u64(q) {
                    out.push(q);
                }
                q += step;
            }
            out
        })
        .clone()
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `false` only if `x` is certainly not an `l`-th power (`l` prime).
fn may_be_power(x: &Nat, l: u32) -> bool {
    residue_filter(l).into_iter().all(|q| {
        let r = (x % q).to_u64().expect("residue fits");
        r == 0 || pow_mod_u64(r, (q - 1) / l as u64, q) == 1
    })
}

fn prime_exponents(max: u64) -> impl Iterator<Item = u32> {
    primes_up_to(max).into_iter().map(|p| p as u32)
}

/// If `x = p^l` with `p` prime and `l >= 1`, returns `(p, l)`.
pub fn prime_power(x: &Nat) -> Option<(Nat, u32)> {
    if x <= &BigUint::one() {
        return None;
    }
    if let Some(q) = small_factor(x) {
        let mut rest = x.clone();
        let mut l = 0u32;
        let qn = BigUint::from(q);
        while (&rest % q).is_zero() {
            rest /= &qn;
            l += 1;
        }
        return rest.is_one().then_some((qn, l));
    }
    if is_prime(x) {
        return Some((x.clone(), 1));
    }
    // No factor below 1000, so p > 1000 and l <= log(x) / log(1000).
    let max_l = x.bits() / 9;
    for l in prime_exponents(max_l) {
        if !may_be_power(x, l) {
            continue;
        }
        if let Some(r) = exact_root(x, l) {
            return prime_power(&r).map(|(p, e)| (p, e * l));
        }
    }
    None
}

/// If `x = r^l` for some `l >= 2`, returns the pair with the largest `l`.
pub fn perfect_power(x: &Nat) -> Option<(Nat, u32)> {
    if x <= &BigUint::one() {
        return None;
    }
    let max_l = x.bits();
    for l in prime_exponents(max_l) {
        if let Some(r) = exact_root(x, l) {
            return Some(match perfect_power(&r) {
                Some((base, e)) => (base, e * l),
                None => (r, l),
            });
        }
    }
    None
}

/// Exact `p`-adic valuation of a positive integer.
pub fn valuation(x: &Nat, p: &Nat) -> u64 {
    assert!(!x.is_zero(), "valuation of zero");
    assert!(p > &BigUint::one(), "valuation base must exceed 1");
    let mut rest = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, p);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn root_examples() {
        assert_eq!(integer_nth_root(&289u32.into(), 2), 17u32.into());
        assert_eq!(integer_nth_root(&46224u32.into(), 2), 214u32.into());
        assert_eq!(integer_nth_root(&12345u32.into(), 1), 12345u32.into());
        assert_eq!(integer_nth_root(&0u32.into(), 5), 0u32.into());
        assert_eq!(integer_nth_root(&1u32.into(), 64), 1u32.into());
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(prime_power(&289u32.into()), Some((17u32.into(), 2)));
        assert_eq!(prime_power(&8u32.into()), Some((2u32.into(), 3)));
        assert_eq!(prime_power(&144u32.into()), None);
        assert_eq!(prime_power(&(12u32 * 12).into()), None);
        assert_eq!(prime_power(&(215u32 * 215).into()), None);
        assert_eq!(prime_power(&1u32.into()), None);
        assert_eq!(prime_power(&17u32.into()), Some((17u32.into(), 1)));
        let big_p = BigUint::from(1_000_000_007u64);
        assert_eq!(prime_power(&big_p.pow(7)), Some((big_p.clone(), 7)));
        assert_eq!(prime_power(&big_p.pow(12)), Some((big_p.clone(), 12)));
        let q = BigUint::from(1_000_000_009u64);
        assert_eq!(prime_power(&(&big_p * &q).pow(2)), None);
    }

    #[test]
    fn perfect_power_examples() {
        assert_eq!(perfect_power(&144u32.into()), Some((12u32.into(), 2)));
        assert_eq!(perfect_power(&64u32.into()), Some((2u32.into(), 6)));
        assert_eq!(perfect_power(&145u32.into()), None);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&8u32.into(), &2u32.into()), 3);
        assert_eq!(valuation(&34u32.into(), &17u32.into()), 1);
        assert_eq!(valuation(&35u32.into(), &2u32.into()), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn nth_root_postcondition(bytes in proptest::collection::vec(any::<u8>(), 1..48), n in 1u32..40) {
            let x = BigUint::from_bytes_le(&bytes);
            let r = integer_nth_root(&x, n);
            prop_assert!(r.pow(n) <= x);
            prop_assert!((&r + 1u32).pow(n) > x);
        }

        #[test]
        fn prime_power_detects_constructed_powers(p_idx in 0usize..150, l in 1u32..30) {
            let p = primes_up_to(2000)[p_idx];
            let x = BigUint::from(p).pow(l);
            prop_assert_eq!(prime_power(&x), Some((BigUint::from(p), l)));
            // p^l * q with a second prime q is never a prime power.
            let q = if p == 3 { 5u32 } else { 3u32 };
            prop_assert_eq!(prime_power(&(x * q)), None);
        }
    }
}
