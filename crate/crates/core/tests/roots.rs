use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use pillai_core::primality::{is_prime, primes_up_to};
use pillai_core::roots::{exact_root, integer_nth_root, prime_power};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn nth_root_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2_007c);
    for _ in 0..100_000 {
        let bits = rng.gen_range(1..=512u64);
        let x = rng.gen_biguint(bits);
        let n = rng.gen_range(1..=40u32);
        let r = integer_nth_root(&x, n);
        assert!(r.pow(n) <= x);
        assert!((&r + 1u32).pow(n) > x);
    }
}

#[test]
fn exact_roots_of_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let bits = rng.gen_range(1..=100u64);
        let base = rng.gen_biguint(bits) + 2u32;
        let n = rng.gen_range(2..=12u32);
        let x = base.pow(n);
        assert_eq!(exact_root(&x, n), Some(base.clone()));
        assert_eq!(exact_root(&(&x + 1u32), n), None);
    }
}

#[test]
fn prime_power_against_trial_division() {
    // Oracle: factor completely by trial division.
    let primes = primes_up_to(1 << 16);
    let oracle = |mut x: u64| -> Option<(u64, u32)> {
        if x < 2 {
            return None;
        }
        for &p in &primes {
            if p * p > x {
                break;
            }
            if x.is_multiple_of(p) {
                let mut l = 0;
                while x.is_multiple_of(p) {
                    x /= p;
                    l += 1;
                }
                return (x == 1).then_some((p, l));
            }
        }
        Some((x, 1))
    };
    for x in 0..200_000u64 {
        let got = prime_power(&x.into()).map(|(p, l)| (u64::try_from(p).unwrap(), l));
        assert_eq!(got, oracle(x), "x={x}");
    }
    let big_prime: BigUint = "170141183460469231731687303715884105727".parse().unwrap();
    assert!(is_prime(&big_prime));
    assert_eq!(prime_power(&big_prime.pow(3)), Some((big_prime.clone(), 3)));
    assert_eq!(prime_power(&(big_prime.pow(2) * 3u32)), None);
    assert_eq!(prime_power(&BigUint::one()), None);
}
