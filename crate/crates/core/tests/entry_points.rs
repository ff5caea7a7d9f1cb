use num_bigint::BigUint;
use pillai_core::entry::{
    entry_point, entry_point_by_divisors, entry_point_by_scan, nu_p_fib, nu_p_fib_by_division,
};
use pillai_core::fib::{fib_mod_u64, FibTable};
use pillai_core::primality::{is_prime_u64, primes_up_to};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn entry_law_below_1e4() {
    for p in primes_up_to(10_000) {
        let z = entry_point(&p.into()).unwrap().z;
        for k in 1..=10 * z {
            assert_eq!(fib_mod_u64(k, p) == 0, k % z == 0, "p={p} k={k} z={z}");
        }
    }
}

#[test]
fn scan_and_divisor_methods_agree() {
    for p in primes_up_to(200_000) {
        assert_eq!(entry_point_by_scan(p), entry_point_by_divisors(p), "p={p}");
    }
}

#[test]
fn e_p_is_one_below_1e5() {
    for p in primes_up_to(100_000) {
        assert_eq!(entry_point(&p.into()).unwrap().e_p, 1, "p={p}");
    }
}

#[test]
fn e_p_is_one_on_random_primes() {
    // 100 primes in [1e5, 1e9] from a fixed seed.
    let mut rng = ChaCha8Rng::seed_from_u64(0x3c_0fe5);
    let mut seen = 0;
    while seen < 100 {
        let p = rng.gen_range(100_000u64..1_000_000_000);
        if !is_prime_u64(p) {
            continue;
        }
        seen += 1;
        let d = entry_point(&p.into()).unwrap();
        assert_eq!(fib_mod_u64(d.z, p), 0);
        assert_eq!(d.e_p, 1, "p={p}");
    }
}

#[test]
fn valuation_matches_division() {
    let table = FibTable::new(2000);
    for p in [2u64, 3, 5, 7, 11, 13, 17, 89, 233] {
        let pn = BigUint::from(p);
        for k in 1..=2000 {
            assert_eq!(
                nu_p_fib(&pn, k).unwrap(),
                nu_p_fib_by_division(&table, &pn, k),
                "p={p} k={k}"
            );
        }
    }
}
