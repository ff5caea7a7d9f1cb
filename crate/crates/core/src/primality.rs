//! Primality testing.
//!
//! Below 2^64 the Miller-Rabin test with the first twelve prime bases is
//! deterministic. Above that a Baillie-PSW test (strong base-2 Fermat plus a
//! strong Lucas test with Selfridge parameters) is used; its verdict is
//! reported as [`Primality::ProbablePrime`], never as a proven prime.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic test below 2^64).
    Prime,
    /// Passed Baillie-PSW; no known counterexample exists.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

const TRIAL_LIMIT: u32 = 1000;
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Sieve of Eratosthenes: all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT as u64))
}

/// Small primes grouped so that each group's product fits in a u64.
fn trial_groups() -> &'static [(u64, Vec<u64>)] {
    static GROUPS: OnceLock<Vec<(u64, Vec<u64>)>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let mut groups = Vec::new();
        let mut prod = 1u64;
        let mut members = Vec::new();
        for &p in small_primes() {
            match prod.checked_mul(p) {
                Some(next) => {
                    prod = next;
                    members.push(p);
                }
                None => {
                    groups.push((prod, std::mem::take(&mut members)));
                    prod = p;
                    members.push(p);
                }
            }
        }
        groups.push((prod, members));
        groups
    })
}

/// Smallest prime factor of `n` below the trial-division limit, if any.
pub(crate) fn small_factor(n: &Nat) -> Option<u64> {
    for (prod, members) in trial_groups() {
        let r = (n % *prod).to_u64().expect("residue fits");
        for &p in members {
            if r.is_multiple_of(p) {
                return Some(p);
            }
        }
    }
    None
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Strong Fermat (Miller-Rabin) test of odd `n > 3` to base `a`.
pub fn strong_probable_prime(n: &Nat, a: &Nat) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("nonnegative");
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn is_square(n: &Nat) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice
/// (`P = 1`, `Q = (1 - D)/4`, first `D` in 5, -7, 9, -11, ... with
/// `(D/n) = -1`). `n` must be odd, greater than 2 and not a perfect square.
pub fn strong_lucas_probable_prime(n: &Nat) -> bool {
    let mut d_abs = 5i64;
    let d = loop {
        let d = if (d_abs / 2) % 2 == 0 { d_abs } else { -d_abs };
        let j = jacobi(&BigInt::from(d), n);
        if j == -1 {
            break d;
        }
        if j == 0 && BigUint::from(d.unsigned_abs()) != *n {
            return false;
        }
        d_abs += 2;
    };
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let q = BigInt::from((1 - d) / 4);
    let d_big = BigInt::from(d);
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x >> 1usize).mod_floor(&n_int)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Binary Lucas chain for U_k, V_k with P = 1.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(&n_int);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - (&qk << 1usize)).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let u_next = half(&u + &v);
            let v_next = half(&d_big * &u + &v);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1usize)).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}

/// Classify `n` as composite, prime or Baillie-PSW probable prime.
pub fn primality(n: &Nat) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    if small_factor(n).is_some() {
        return Primality::Composite;
    }
    if !strong_probable_prime(n, &BigUint::from(2u32)) {
        return Primality::Composite;
    }
    if is_square(n) || !strong_lucas_probable_prime(n) {
        return Primality::Composite;
    }
    Primality::ProbablePrime
}

/// `true` for primes (and Baillie-PSW probable primes above 2^64).
pub fn is_prime(n: &Nat) -> bool {
    primality(n).is_prime()
}

/// Additional Miller-Rabin rounds to the bases 3, 5, ..., 97 on top of
/// Baillie-PSW. Used to strengthen the verdict on primes that get reported.
pub fn strengthened_check(n: &Nat) -> bool {
    match primality(n) {
        Primality::Composite => false,
        Primality::Prime => true,
        Primality::ProbablePrime => small_primes()
            .iter()
            .skip(1)
            .take_while(|&&b| b < 100)
            .all(|&b| strong_probable_prime(n, &BigUint::from(b))),
    }
}
