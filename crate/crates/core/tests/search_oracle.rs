use std::collections::BTreeSet;

use num_bigint::BigUint;
use pillai_core::fib::FibTable;
use pillai_core::primality::primes_up_to;
use pillai_core::search::{
    count_representations, lemma1_interval, lemma1_predicate, multiplicity_scan,
    search_l3_positive, search_l3_zero, SearchOptions, SearchRecord,
};

const K_MAX: u64 = 30;

fn u(x: &BigUint) -> u64 {
    u64::try_from(x.clone()).unwrap()
}

/// Every `(k2, k3, p, l2, l3)` with `F_{k2} - F_{k3} = p^{l2} - p^{l3}`,
/// `2 <= k3 < k2 <= 30`, found by trying all primes and exponents.
fn brute_force(l3_zero: bool, p_min: u64) -> BTreeSet<(u64, u64, u64, u32, u32)> {
    let table = FibTable::new(K_MAX);
    let primes = primes_up_to(u(&table[K_MAX]) + 1);
    let mut out = BTreeSet::new();
    for k2 in 3..=K_MAX {
        for k3 in 2..k2 {
            let d = u(&table[k2]) - u(&table[k3]);
            for &p in primes.iter().filter(|&&p| p >= p_min) {
                let mut pl3 = 1u64;
                for l3 in 0u32.. {
                    if l3_zero && l3 > 0 || pl3 > d {
                        break;
                    }
                    let mut pl2 = pl3 * p;
                    for l2 in l3 + 1.. {
                        if pl2 - pl3 > d {
                            break;
                        }
                        if pl2 - pl3 == d {
                            out.insert((k2, k3, p, l2, l3));
                        }
                        pl2 *= p;
                    }
                    pl3 *= p;
                }
            }
        }
    }
    out
}

fn as_set(records: &[SearchRecord]) -> BTreeSet<(u64, u64, u64, u32, u32)> {
    records
        .iter()
        .map(|r| (r.k2, r.k3, u(&r.p), r.l2, r.l3))
        .collect()
}

#[test]
fn l3_zero_matches_brute_force() {
    for p_min in [2u64, 5] {
        let got = search_l3_zero(K_MAX, &p_min.into(), &SearchOptions::default()).unwrap();
        assert_eq!(
            as_set(&got.records),
            brute_force(true, p_min),
            "p_min={p_min}"
        );
    }
}

#[test]
fn l3_positive_matches_brute_force() {
    let got = search_l3_positive(K_MAX, &SearchOptions::default()).unwrap();
    let want: BTreeSet<_> = brute_force(false, 5)
        .into_iter()
        .filter(|t| t.4 >= 1)
        .collect();
    assert_eq!(as_set(&got.records), want);
    assert_eq!(want.len(), 3);
}

#[test]
fn results_do_not_depend_on_jobs() {
    let serial = search_l3_zero(200, &5u32.into(), &SearchOptions::default()).unwrap();
    let parallel = search_l3_zero(
        200,
        &5u32.into(),
        &SearchOptions {
            jobs: 4,
            ..SearchOptions::default()
        },
    )
    .unwrap();
    assert_eq!(serial.records, parallel.records);
    assert_eq!(serial.counts, parallel.counts);
}

#[test]
fn resumed_run_equals_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.ckpt");
    let full = search_l3_zero(150, &5u32.into(), &SearchOptions::default()).unwrap();
    let mut opts = SearchOptions {
        checkpoint: Some(path.clone()),
        stop_after_shards: Some(40),
        jobs: 2,
        ..SearchOptions::default()
    };
    let partial = search_l3_zero(150, &5u32.into(), &opts).unwrap();
    assert!(!partial.complete);
    opts.stop_after_shards = None;
    let resumed = search_l3_zero(150, &5u32.into(), &opts).unwrap();
    assert!(resumed.complete);
    assert_eq!(resumed.checkpoint.as_ref().unwrap().resumed_shards, 40);
    assert_eq!(resumed.records, full.records);
    assert_eq!(resumed.counts, full.counts);

    // A checkpoint from a different configuration is refused.
    assert!(search_l3_zero(151, &5u32.into(), &opts).is_err());
}

#[test]
fn lemma1_window_holds_on_witnesses() {
    let scan = multiplicity_scan(2, 100, 300, 2);
    assert_eq!(scan.max_m, 3);
    for w in scan.witnesses.iter().filter(|w| w.reps.len() >= 3) {
        let p = BigUint::from(w.p);
        let reps = count_representations(&p, &w.c, 300).unwrap();
        assert_eq!(reps, w.reps);
        // All but the representation with the smallest l.
        for r in &reps[..reps.len() - 1] {
            let x = lemma1_interval(r.k, r.l, &p);
            assert_eq!(
                lemma1_predicate(&x),
                Some(true),
                "p={} c={} {r:?}",
                w.p,
                w.c
            );
        }
    }
}
