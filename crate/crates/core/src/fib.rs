//! Exact Fibonacci and Lucas arithmetic.
//!
//! Single values are computed by fast doubling; scans over a contiguous range
//! of indices should use [`FibTable`], which is filled by the recurrence.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::roots::prime_power;
use crate::{Error, FibIndex, Nat, Result};

/// Default upper bound on Fibonacci/Lucas indices.
pub const DEFAULT_WINDOW: FibIndex = 1_000_000;

/// Index window guarding against accidental gigantic computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub max_index: FibIndex,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            max_index: DEFAULT_WINDOW,
        }
    }
}

impl Window {
    pub fn new(max_index: FibIndex) -> Self {
        Window { max_index }
    }

    pub fn check(&self, n: FibIndex) -> Result<()> {
        if n > self.max_index {
            Err(Error::Size {
                index: n,
                bound: self.max_index,
            })
        } else {
            Ok(())
        }
    }

    pub fn fib(&self, n: FibIndex) -> Result<Nat> {
        self.check(n)?;
        Ok(fib_pair(n).0)
    }

    pub fn lucas(&self, n: FibIndex) -> Result<Nat> {
        self.check(n)?;
        let (f, g) = fib_pair(n);
        // L_n = 2 F_{n+1} - F_n
        Ok((g << 1usize) - f)
    }
}

/// `F_n`, within the default window.
pub fn fib(n: FibIndex) -> Result<Nat> {
    Window::default().fib(n)
}

/// `L_n`, within the default window.
pub fn lucas(n: FibIndex) -> Result<Nat> {
    Window::default().lucas(n)
}

/// `(F_n, F_{n+1})` by fast doubling. No window check.
pub fn fib_pair(n: FibIndex) -> (Nat, Nat) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        // F_{2k} = F_k (2 F_{k+1} - F_k), F_{2k+1} = F_k^2 + F_{k+1}^2
        let d = &a * ((&b << 1usize) - &a);
        let e = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &d + &e;
            a = e;
        } else {
            a = d;
            b = e;
        }
    }
    (a, b)
}

/// `F_n mod m` by fast doubling on residues. `m` must be nonzero.
pub fn fib_mod(n: FibIndex, m: &Nat) -> Nat {
    assert!(!m.is_zero(), "modulus must be nonzero");
    let mut a = BigUint::zero();
    let mut b = BigUint::one() % m;
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let two_b = (&b << 1usize) % m;
        let d = (&a * ((two_b + m - &a) % m)) % m;
        let e = (&a * &a + &b * &b) % m;
        if (n >> bit) & 1 == 1 {
            b = (&d + &e) % m;
            a = e;
        } else {
            a = d;
            b = e;
        }
    }
    a
}

/// `F_n mod m` for a machine-word modulus.
pub fn fib_mod_u64(n: FibIndex, m: u64) -> u64 {
    assert!(m != 0, "modulus must be nonzero");
    let m128 = m as u128;
    let mut a: u128 = 0;
    let mut b: u128 = 1 % m128;
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let d = a * ((2 * b + m128 - a) % m128) % m128;
        let e = (a * a % m128 + b * b % m128) % m128;
        if (n >> bit) & 1 == 1 {
            b = (d + e) % m128;
            a = e;
        } else {
            a = d;
            b = e;
        }
    }
    a as u64
}

/// Table of `F_0 ..= F_n` filled by the recurrence.
#[derive(Clone, Debug)]
pub struct FibTable {
    values: Vec<Nat>,
}

impl FibTable {
    pub fn new(n: FibIndex) -> Self {
        let mut values = Vec::with_capacity(n as usize + 1);
        values.push(BigUint::zero());
        if n >= 1 {
            values.push(BigUint::one());
        }
        for i in 2..=n as usize {
            let next = &values[i - 1] + &values[i - 2];
            values.push(next);
        }
        FibTable { values }
    }

    pub fn max_index(&self) -> FibIndex {
        self.values.len() as FibIndex - 1
    }

    pub fn get(&self, n: FibIndex) -> &Nat {
        &self.values[n as usize]
    }
}

impl std::ops::Index<FibIndex> for FibTable {
    type Output = Nat;

    fn index(&self, n: FibIndex) -> &Nat {
        self.get(n)
    }
}

/// Factorisation `F_m - F_n = F_a * L_b` with `a = (m - delta n)/2`,
/// `b = (m + delta n)/2` and `delta = (-1)^((m-n)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffFactor {
    pub fib_index: FibIndex,
    pub lucas_index: FibIndex,
    pub delta: i8,
}

/// Index pair for `F_m - F_n` as a product of a Fibonacci and a Lucas number.
///
/// For `m == n` the degenerate factorisation `F_0 * L_m` is returned.
pub fn fib_diff_factor(m: FibIndex, n: FibIndex) -> Result<DiffFactor> {
    if m < n {
        return Err(Error::domain(format!(
            "fib_diff_factor needs m >= n, got ({m}, {n})"
        )));
    }
    if !(m - n).is_multiple_of(2) {
        return Err(Error::domain(format!(
            "fib_diff_factor needs m = n (mod 2), got ({m}, {n})"
        )));
    }
    let half = (m - n) / 2;
    Ok(if half.is_multiple_of(2) {
        DiffFactor {
            fib_index: half,
            lucas_index: (m + n) / 2,
            delta: 1,
        }
    } else {
        DiffFactor {
            fib_index: (m + n) / 2,
            lucas_index: half,
            delta: -1,
        }
    })
}

/// `gcd(F_m, F_n)`. Computed both by Euclid on the values and as
/// `F_{gcd(m, n)}`; the two must agree.
pub fn fib_gcd(m: FibIndex, n: FibIndex) -> Result<Nat> {
    let window = Window::default();
    let by_values = window.fib(m)?.gcd(&window.fib(n)?);
    let by_index = window.fib(m.gcd(&n))?;
    assert_eq!(
        by_values, by_index,
        "gcd(F_{m}, F_{n}) disagrees with F_gcd"
    );
    Ok(by_index)
}

/// Sign attached to `F_{b-c}` in `F_b - F_c +- F_{b-c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GapSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapZero {
    pub b: FibIndex,
    pub c: FibIndex,
    pub sign: GapSign,
}

/// Every `1 <= c < b <= b_max` and sign for which `F_b - F_c +- F_{b-c}`
/// vanishes, by exhaustive evaluation.
pub fn fib_gap_nonvanishing(b_max: FibIndex) -> Result<Vec<GapZero>> {
    if b_max < 2 {
        return Err(Error::domain("b_max must be at least 2"));
    }
    Window::default().check(b_max)?;
    let table = FibTable::new(b_max);
    let mut zeros = Vec::new();
    for b in 2..=b_max {
        for c in 1..b {
            let lhs = &table[b];
            if lhs + &table[b - c] == table[c] {
                zeros.push(GapZero {
                    b,
                    c,
                    sign: GapSign::Plus,
                });
            }
            if *lhs == &table[c] + &table[b - c] {
                zeros.push(GapZero {
                    b,
                    c,
                    sign: GapSign::Minus,
                });
            }
        }
    }
    Ok(zeros)
}

/// A Fibonacci number that is a perfect power of a prime with exponent >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibPrimePower {
    pub k: FibIndex,
    #[serde(with = "crate::decimal")]
    pub p: Nat,
    pub l: u32,
}

/// All `2 <= k <= k_max` with `F_k = p^l`, `p` prime and `l >= 2`.
pub fn fib_perfect_power_scan(k_max: FibIndex) -> Result<Vec<FibPrimePower>> {
    if k_max < 2 {
        return Err(Error::domain("k_max must be at least 2"));
    }
    Window::default().check(k_max)?;
    let table = FibTable::new(k_max);
    Ok((2..=k_max)
        .filter_map(|k| match prime_power(&table[k]) {
            Some((p, l)) if l >= 2 => Some(FibPrimePower { k, p, l }),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: usize) -> Vec<Nat> {
        let mut v = vec![BigUint::zero(), BigUint::one()];
        while v.len() <= n {
            let x = &v[v.len() - 1] + &v[v.len() - 2];
            v.push(x);
        }
        v
    }

    #[test]
    fn small_values() {
        assert_eq!(fib(0).unwrap(), 0u32.into());
        assert_eq!(fib(10).unwrap(), 55u32.into());
        assert_eq!(fib(6).unwrap(), 8u32.into());
        assert_eq!(lucas(0).unwrap(), 2u32.into());
        assert_eq!(lucas(1).unwrap(), 1u32.into());
        assert_eq!(lucas(8).unwrap(), 47u32.into());
    }

    #[test]
    fn fast_doubling_matches_recurrence() {
        let reference = naive(2001);
        for n in 0..=2000u64 {
            assert_eq!(fib(n).unwrap(), reference[n as usize], "F_{n}");
            if n >= 1 {
                let l = &reference[n as usize - 1] + &reference[n as usize + 1];
                assert_eq!(lucas(n).unwrap(), l, "L_{n}");
            }
        }
        let table = FibTable::new(2000);
        assert!((0..=2000).all(|n| table[n] == reference[n as usize]));
    }

    #[test]
    fn window_bound_is_enforced() {
        let w = Window::new(100);
        assert!(w.fib(100).is_ok());
        assert!(matches!(
            w.fib(101),
            Err(Error::Size {
                index: 101,
                bound: 100
            })
        ));
        assert!(matches!(fib(DEFAULT_WINDOW + 1), Err(Error::Size { .. })));
    }

    #[test]
    fn modular_fibonacci_agrees_with_exact() {
        let table = FibTable::new(500);
        for m in [1u64, 2, 7, 1000, 1_000_000_007, u64::MAX] {
            let big = Nat::from(m);
            for n in (0..=500).step_by(7) {
                let expect = &table[n] % &big;
                assert_eq!(fib_mod(n, &big), expect);
                assert_eq!(Nat::from(fib_mod_u64(n, m)), expect);
            }
        }
    }

    #[test]
    fn diff_factor_examples() {
        let f = fib_diff_factor(10, 6).unwrap();
        assert_eq!((f.fib_index, f.lucas_index, f.delta), (2, 8, 1));
        let f = fib_diff_factor(12, 8).unwrap();
        assert_eq!((f.fib_index, f.lucas_index, f.delta), (2, 10, 1));
        assert_eq!(fib(12).unwrap() - fib(8).unwrap(), 123u32.into());
        let f = fib_diff_factor(9, 9).unwrap();
        assert_eq!((f.fib_index, f.lucas_index, f.delta), (0, 9, 1));
        assert!(matches!(fib_diff_factor(10, 7), Err(Error::Domain(_))));
        assert!(matches!(fib_diff_factor(4, 6), Err(Error::Domain(_))));
    }

    #[test]
    fn diff_factor_identity_up_to_500() {
        let table = FibTable::new(1000);
        let luc = |n: u64| (&table[n + 1] << 1usize) - &table[n];
        for m in 0..=500u64 {
            for n in (m % 2..=m).step_by(2) {
                let f = fib_diff_factor(m, n).unwrap();
                assert_eq!(
                    &table[m] - &table[n],
                    &table[f.fib_index] * luc(f.lucas_index)
                );
            }
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(fib_gcd(12, 8).unwrap(), 3u32.into());
        assert_eq!(fib_gcd(20, 0).unwrap(), fib(20).unwrap());
        for k in 1..60 {
            assert_eq!(fib_gcd(k, k + 1).unwrap(), 1u32.into());
        }
    }

    #[test]
    fn gap_zeros_only_for_small_b() {
        let zeros = fib_gap_nonvanishing(421).unwrap();
        assert!(!zeros.is_empty());
        for z in &zeros {
            assert_eq!(z.sign, GapSign::Minus);
            assert!(z.b == 3 || z.b == 4, "{z:?}");
        }
        // F_2 - F_1 - F_1 = -1
        assert!(!zeros.iter().any(|z| z.b == 2));
        assert!(fib_gap_nonvanishing(1).is_err());
    }

    #[test]
    fn perfect_power_scan() {
        assert!(fib_perfect_power_scan(5).unwrap().is_empty());
        let twelve = fib_perfect_power_scan(12).unwrap();
        assert_eq!(
            twelve,
            vec![FibPrimePower {
                k: 6,
                p: 2u32.into(),
                l: 3
            }]
        );
    }
}
