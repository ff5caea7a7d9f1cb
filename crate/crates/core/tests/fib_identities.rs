use num_bigint::BigUint;
use num_integer::Integer;
use pillai_core::fib::{
    fib, fib_diff_factor, fib_gap_nonvanishing, fib_gcd, fib_mod, lucas, FibTable,
};
use pillai_core::real::{alpha, CertifiedReal};

#[test]
fn binet_bounds_up_to_1000() {
    let table = FibTable::new(1000);
    let a = alpha();
    assert_eq!(table[1], BigUint::from(1u32));
    assert_eq!(table[2], BigUint::from(1u32));
    // n = 1 and n = 2 hit the bounds with equality (alpha^0 = 1).
    let mut lower = a.clone();
    let mut upper = a.powi(2);
    for n in 3..=1000u64 {
        let f = CertifiedReal::from_int(table[n].clone());
        assert_eq!(lower.lt(&f, 1 << 14), Some(true), "alpha^{} < F_{n}", n - 2);
        assert_eq!(f.lt(&upper, 1 << 14), Some(true), "F_{n} < alpha^{}", n - 1);
        lower = upper.clone();
        upper = upper.mul(&a);
    }
}

#[test]
fn difference_factorisation_up_to_500() {
    let table = FibTable::new(1000);
    let lucas_of = |n: u64| lucas(n).unwrap();
    for m in 0..=500u64 {
        for n in (m % 2..=m).step_by(2) {
            let f = fib_diff_factor(m, n).unwrap();
            assert_eq!(
                &table[m] - &table[n],
                &table[f.fib_index] * lucas_of(f.lucas_index),
                "({m}, {n})"
            );
        }
    }
    assert!(fib_diff_factor(5, 2).is_err());
    assert!(fib_diff_factor(2, 4).is_err());
}

#[test]
fn gcd_law_up_to_300() {
    let table = FibTable::new(300);
    for m in 1..=300u64 {
        for n in 1..=300u64 {
            let g = fib_gcd(m, n).unwrap();
            assert_eq!(g, table[m].gcd(&table[n]));
            assert_eq!(g, table[m.gcd(&n)]);
        }
    }
}

#[test]
fn gap_nonvanishing_up_to_421() {
    let zeros = fib_gap_nonvanishing(421).unwrap();
    assert!(zeros.iter().all(|z| z.b < 5), "{zeros:?}");
    assert!(!zeros.is_empty());
}

#[test]
fn micro_identities_up_to_500() {
    let table = FibTable::new(1001);
    for n in 1..=500u64 {
        // Cassini: F_{n-1} F_{n+1} - F_n^2 = (-1)^n.
        let lhs = &table[n - 1] * &table[n + 1];
        let sq = &table[n] * &table[n];
        if n % 2 == 0 {
            assert_eq!(lhs, sq + 1u32);
        } else {
            assert_eq!(lhs + 1u32, sq);
        }
        let l = lucas(n).unwrap();
        assert_eq!(l, &table[n - 1] + &table[n + 1]);
        assert_eq!(table[2 * n], &table[n] * &l);
        assert_eq!(fib(n).unwrap(), table[n]);
        let m = BigUint::from(1_000_000_007u64);
        assert_eq!(fib_mod(n, &m), &table[n] % &m);
    }
}
