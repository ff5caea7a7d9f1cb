use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fib::FibTable;
use crate::primality::{is_prime, primes_up_to};
use crate::real::{log_alpha, CertifiedReal};
use crate::roots::valuation;
use crate::{Error, FibIndex, Int, Nat, Result};

/// A pair `(k, l)` with `c = F_k - p^l` for the ambient `(p, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub k: FibIndex,
    pub l: u32,
}

/// A value `c` with every `(k, l)` in the box that produces it.
type Collision = (Int, Vec<Representation>);

fn by_decreasing_l(reps: &mut [Representation]) {
    reps.sort_by(|a, b| b.l.cmp(&a.l).then(b.k.cmp(&a.k)));
}

/// All `(k, l)` with `2 <= k <= k_max`, `l >= 0` and `F_k - c = p^l`, sorted
/// by decreasing `l`.
pub fn count_representations(p: &Nat, c: &Int, k_max: FibIndex) -> Result<Vec<Representation>> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let table = FibTable::new(k_max.max(2));
    let mut reps = Vec::new();
    for k in 2..=k_max {
        let w = BigInt::from_biguint(Sign::Plus, table[k].clone()) - c;
        if !w.is_positive() {
            continue;
        }
        let w = w.magnitude();
        if w.is_one() {
            reps.push(Representation { k, l: 0 });
            continue;
        }
        if !(w % p).is_zero() {
            continue;
        }
        let l = valuation(w, p) as u32;
        if p.pow(l) == *w {
            reps.push(Representation { k, l });
        }
    }
    by_decreasing_l(&mut reps);
    Ok(reps)
}

/// Primes of the form `F_{k1} - F_{k2} + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoRepReport {
    pub k_max: FibIndex,
    #[serde(with = "crate::decimal")]
    pub p_min: Nat,
    /// `(k1, k2, p)` sorted by `(k1, k2)`.
    pub tuples: Vec<(FibIndex, FibIndex, String)>,
    pub tuple_count: usize,
    pub distinct_primes: usize,
}

/// All `2 <= k2 < k1 <= k_max` with `p = F_{k1} - F_{k2} + 1` prime and
/// `p >= p_min`. Each such `p` gives `c = F_{k2} - 1` the two
/// representations `F_{k1} - p^1` and `F_{k2} - p^0`.
pub fn two_rep_prime_enum(k_max: FibIndex, p_min: &Nat) -> TwoRepReport {
    let table = FibTable::new(k_max.max(2));
    let found: Vec<(FibIndex, FibIndex, Nat)> = (3..=k_max)
        .into_par_iter()
        .flat_map_iter(|k1| {
            let table = &table;
            (2..k1).filter_map(move |k2| {
                let p = &table[k1] - &table[k2] + 1u32;
                (p >= *p_min && is_prime(&p)).then_some((k1, k2, p))
            })
        })
        .collect();
    let mut found = found;
    found.sort();
    let distinct: BTreeSet<&Nat> = found.iter().map(|t| &t.2).collect();
    TwoRepReport {
        k_max,
        p_min: p_min.clone(),
        tuple_count: found.len(),
        distinct_primes: distinct.len(),
        tuples: found
            .iter()
            .map(|(a, b, p)| (*a, *b, p.to_string()))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityWitness {
    pub p: u64,
    #[serde(with = "crate::decimal")]
    pub c: Int,
    /// Sorted by decreasing `l`.
    pub reps: Vec<Representation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub p_min: u64,
    pub p_max: u64,
    pub k_max: FibIndex,
    /// The box scans `l <= floor(k log(alpha) / log(p)) + l_slack`.
    pub l_slack: u32,
    pub threshold: usize,
    pub max_m: usize,
    /// Every `(p, c)` attaining `max_m`.
    pub max_at: Vec<(u64, String)>,
    /// Every `(p, c)` with at least `threshold` representations in the box.
    pub witnesses: Vec<MultiplicityWitness>,
}

/// Group all `(k, l)` in the box `2 <= k <= k_max`,
/// `0 <= l <= floor(k log(alpha)/log(p)) + 1` by `c = F_k - p^l`, for every
/// prime `p_min <= p <= p_max`.
pub fn multiplicity_scan(
    p_min: u64,
    p_max: u64,
    k_max: FibIndex,
    threshold: usize,
) -> MultiplicityReport {
    const SLACK: u32 = 1;
    let table = FibTable::new(k_max.max(2));
    let log_alpha = log_alpha().to_f64();
    let primes: Vec<u64> = primes_up_to(p_max)
        .into_iter()
        .filter(|&p| p >= p_min)
        .collect();

    let per_prime: Vec<(u64, Vec<Collision>)> = primes
        .par_iter()
        .map(|&p| {
            let ratio = log_alpha / (p as f64).ln();
            let l_cap = |k: FibIndex| (k as f64 * ratio).floor() as u32 + SLACK;
            let pn = Nat::from(p);
            let powers: Vec<Int> = (0..=l_cap(k_max))
                .map(|l| BigInt::from_biguint(Sign::Plus, pn.pow(l)))
                .collect();
            let mut groups: HashMap<Int, Vec<Representation>> = HashMap::new();
            for k in 2..=k_max {
                let f = BigInt::from_biguint(Sign::Plus, table[k].clone());
                for l in 0..=l_cap(k) {
                    groups
                        .entry(&f - &powers[l as usize])
                        .or_default()
                        .push(Representation { k, l });
                }
            }
            let groups = groups
                .into_iter()
                .filter(|(_, v)| v.len() >= 2)
                .map(|(c, mut v)| {
                    by_decreasing_l(&mut v);
                    (c, v)
                })
                .collect();
            (p, groups)
        })
        .collect();

    let max_m = per_prime
        .iter()
        .flat_map(|(_, g)| g.iter().map(|(_, v)| v.len()))
        .max()
        .unwrap_or(if primes.is_empty() || k_max < 2 { 0 } else { 1 });
    let mut max_at = Vec::new();
    let mut witnesses = Vec::new();
    for (p, groups) in per_prime {
        for (c, reps) in groups {
            if reps.len() == max_m {
                max_at.push((p, c.clone()));
            }
            if reps.len() >= threshold {
                witnesses.push(MultiplicityWitness { p, c, reps });
            }
        }
    }
    max_at.sort();
    witnesses.sort_by(|a, b| (a.p, &a.c).cmp(&(b.p, &b.c)));
    MultiplicityReport {
        p_min,
        p_max,
        k_max,
        l_slack: SLACK,
        threshold,
        max_m,
        max_at: max_at
            .into_iter()
            .map(|(p, c)| (p, c.to_string()))
            .collect(),
        witnesses,
    }
}

/// The open interval `(c1, c2)` that `k log(alpha) - l log(p)` must fall in
/// for every representation but the one with the smallest `l`.
pub const LEMMA1_INTERVAL: (f64, f64) = (0.25, 2.0);

/// `k log(alpha) - l log(p)` as a certified real.
pub fn lemma1_interval(k: FibIndex, l: u32, p: &Nat) -> CertifiedReal {
    let lp = CertifiedReal::from_int(BigInt::from_biguint(Sign::Plus, p.clone())).ln();
    log_alpha()
        .mul(&CertifiedReal::from_int(k))
        .sub(&lp.mul(&CertifiedReal::from_int(l)))
}

/// Whether `x` lies in `(1/4, 2)`. `None` if undecided at 4096 bits.
pub fn lemma1_predicate(x: &CertifiedReal) -> Option<bool> {
    let lo = CertifiedReal::from_ratio(1, 4);
    let hi = CertifiedReal::from_int(2);
    let above = lo.lt(x, 4096)?;
    let below = x.lt(&hi, 4096)?;
    Some(above && below)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reps(pairs: &[(u64, u32)]) -> Vec<Representation> {
        pairs
            .iter()
            .map(|&(k, l)| Representation { k, l })
            .collect()
    }

    #[test]
    fn representation_examples() {
        let two = Nat::from(2u32);
        assert_eq!(
            count_representations(&two, &Int::from(0), 1000).unwrap(),
            reps(&[(6, 3), (3, 1), (2, 0)])
        );
        assert_eq!(
            count_representations(&two, &Int::from(-3), 1000).unwrap(),
            reps(&[(7, 4), (5, 3), (2, 2)])
        );
        assert_eq!(
            count_representations(&two, &Int::from(1), 100).unwrap(),
            reps(&[(5, 2), (4, 1), (3, 0)])
        );
        assert_eq!(
            count_representations(&5u32.into(), &Int::from(-4), 1000).unwrap(),
            reps(&[(8, 2), (2, 1)])
        );
        assert_eq!(
            count_representations(&7u32.into(), &Int::from(6), 1000).unwrap(),
            reps(&[(10, 2), (7, 1)])
        );
        assert!(count_representations(&5u32.into(), &Int::from(100), 10)
            .unwrap()
            .is_empty());
        assert!(count_representations(&15u32.into(), &Int::from(1), 10).is_err());
    }

    #[test]
    fn two_rep_small() {
        let r = two_rep_prime_enum(4, &2u32.into());
        let t: Vec<_> = r
            .tuples
            .iter()
            .map(|(a, b, p)| (*a, *b, p.as_str()))
            .collect();
        assert_eq!(t, vec![(3, 2, "2"), (4, 2, "3"), (4, 3, "2")]);
        assert_eq!((r.tuple_count, r.distinct_primes), (3, 2));
        assert_eq!(two_rep_prime_enum(2, &2u32.into()).tuple_count, 0);
    }

    #[test]
    fn scan_p2_matches_triples() {
        let r = multiplicity_scan(2, 2, 100, 3);
        assert_eq!(r.max_m, 3);
        let cs: Vec<String> = r.witnesses.iter().map(|w| w.c.to_string()).collect();
        assert_eq!(cs, ["-3", "0", "1"]);
        assert_eq!(r.max_at.len(), 3);
    }

    #[test]
    fn lemma1_examples() {
        let five = Nat::from(5u32);
        let x = lemma1_interval(8, 2, &five);
        assert!((x.to_f64() - 0.630_87).abs() < 1e-4);
        assert_eq!(lemma1_predicate(&x), Some(true));
        let y = lemma1_interval(2, 0, &five);
        assert!((y.to_f64() - 0.962_42).abs() < 1e-4);
        assert_eq!(lemma1_predicate(&lemma1_interval(2, 5, &five)), Some(false));
    }
}
