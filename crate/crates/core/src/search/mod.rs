//! Exhaustive searches over pairs `2 <= k3 < k2 <= k_max` for
//! `F_{k2} - F_{k3} = p^{l2} - p^{l3}`, plus representation counting.
//!
//! The pair space is cut into shards, one per `k2`. Shards run on a rayon
//! pool and are merged by sorting, so the report does not depend on the
//! scheduling or on the number of workers. With a checkpoint path, every
//! finished shard is persisted and a rerun skips the shards already on disk.

mod checkpoint;
mod reps;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::{Checkpoint, ShardEntry};
pub use reps::{
    count_representations, lemma1_interval, lemma1_predicate, multiplicity_scan,
    two_rep_prime_enum, MultiplicityReport, MultiplicityWitness, Representation, TwoRepReport,
    LEMMA1_INTERVAL,
};

use crate::fib::{FibTable, Window};
use crate::primality::{primality, strengthened_check, Primality};
use crate::roots::{integer_nth_root, prime_power, valuation};
use crate::{Error, FibIndex, Nat, Result};

/// A solution of `F_{k2} - F_{k3} = p^{l2} - p^{l3}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchRecord {
    pub k2: FibIndex,
    pub k3: FibIndex,
    #[serde(with = "crate::decimal")]
    pub p: Nat,
    pub l2: u32,
    pub l3: u32,
}

impl SearchRecord {
    /// Recompute both sides exactly from scratch.
    pub fn verify(&self) -> bool {
        if !(2 <= self.k3 && self.k3 < self.k2 && self.l3 < self.l2) {
            return false;
        }
        if primality(&self.p) == Primality::Composite {
            return false;
        }
        let (Ok(a), Ok(b)) = (crate::fib::fib(self.k2), crate::fib::fib(self.k3)) else {
            return false;
        };
        a - b == self.p.pow(self.l2) - self.p.pow(self.l3)
    }

    fn sort_key(&self) -> (FibIndex, FibIndex, u32, &Nat, u32) {
        (self.k2, self.k3, self.l2, &self.p, self.l3)
    }
}

impl PartialOrd for SearchRecord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Reports are ordered lexicographically by `(k2, k3, l2)`.
impl Ord for SearchRecord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for SearchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.k2, self.k3, self.p, self.l2, self.l3
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// `l3 = 0`: `F_{k2} - F_{k3} + 1 = p^{l2}`.
    #[serde(rename = "l3zero")]
    L3Zero,
    /// `l2 > l3 >= 1`, `p >= 5`.
    #[serde(rename = "l3pos")]
    L3Positive,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::L3Zero => "l3zero",
            SearchMode::L3Positive => "l3pos",
        }
    }
}

pub type RecordSink = Arc<dyn Fn(&SearchRecord) + Send + Sync>;

/// Execution knobs that do not change the result.
#[derive(Clone)]
pub struct SearchOptions {
    /// Worker threads; 1 runs serially.
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many newly finished shards (simulated interruption).
    pub stop_after_shards: Option<usize>,
    /// Re-test every reported prime with extra Miller-Rabin bases.
    pub strict_primes: bool,
    /// Called for each record as soon as its shard finishes.
    pub sink: Option<RecordSink>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            checkpoint: None,
            stop_after_shards: None,
            strict_primes: false,
            sink: None,
        }
    }
}

impl fmt::Debug for SearchOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchOptions")
            .field("jobs", &self.jobs)
            .field("checkpoint", &self.checkpoint)
            .field("stop_after_shards", &self.stop_after_shards)
            .field("strict_primes", &self.strict_primes)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub path: PathBuf,
    /// Shards taken from the file instead of recomputed.
    pub resumed_shards: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub k_max: FibIndex,
    #[serde(with = "crate::decimal")]
    pub p_min: Nat,
    pub records: Vec<SearchRecord>,
    /// Record counts by class: `total`, `l2=1`, `l2>1`, `p<5`, `p>=5`.
    pub counts: BTreeMap<String, usize>,
    pub pairs_scanned: u64,
    pub shards_done: usize,
    pub shards_total: usize,
    /// `false` if the run stopped before every shard finished.
    pub complete: bool,
    /// Records whose prime exceeds 2^64 and rests on Baillie-PSW.
    pub probable_primes: usize,
    pub strict_primes: bool,
    pub elapsed_s: f64,
    pub checkpoint: Option<CheckpointMeta>,
}

impl SearchReport {
    pub fn with_l2(&self, pred: impl Fn(u32) -> bool) -> Vec<&SearchRecord> {
        self.records.iter().filter(|r| pred(r.l2)).collect()
    }
}

fn class_counts(records: &[SearchRecord]) -> BTreeMap<String, usize> {
    let five = Nat::from(5u32);
    let mut counts = BTreeMap::new();
    counts.insert("total".to_string(), records.len());
    counts.insert(
        "l2=1".to_string(),
        records.iter().filter(|r| r.l2 == 1).count(),
    );
    counts.insert(
        "l2>1".to_string(),
        records.iter().filter(|r| r.l2 > 1).count(),
    );
    counts.insert(
        "p<5".to_string(),
        records.iter().filter(|r| r.p < five).count(),
    );
    counts.insert(
        "p>=5".to_string(),
        records.iter().filter(|r| r.p >= five).count(),
    );
    counts
}

fn header(mode: SearchMode, k_max: FibIndex, p_min: &Nat) -> String {
    format!(
        "pillai-search mode={} k_max={k_max} p_min={p_min}",
        mode.as_str()
    )
}

/// Shared driver: runs `work(k2)` for every `k2` in `3..=k_max` not already
/// in the checkpoint, persists progress, and assembles the sorted report.
fn run_sharded<W>(
    mode: SearchMode,
    k_max: FibIndex,
    p_min: &Nat,
    opts: &SearchOptions,
    work: W,
) -> Result<SearchReport>
where
    W: Fn(FibIndex) -> Vec<SearchRecord> + Sync,
{
    let start = Instant::now();
    let head = header(mode, k_max, p_min);
    let mut state = match &opts.checkpoint {
        Some(path) if path.exists() => Checkpoint::load(path, &head)?,
        _ => Checkpoint::new(head),
    };
    let resumed = state.shards().len();
    let all: Vec<FibIndex> = (3..=k_max).collect();
    let mut pending: Vec<FibIndex> = all
        .iter()
        .copied()
        .filter(|k2| !state.shards().contains_key(k2))
        .collect();
    if let Some(n) = opts.stop_after_shards {
        pending.truncate(n);
    }

    let save_error: Mutex<Option<Error>> = Mutex::new(None);
    {
        let state_lock = Mutex::new(&mut state);
        let run_shard = |k2: FibIndex| {
            let records = work(k2);
            if let Some(sink) = &opts.sink {
                records.iter().for_each(|r| sink(r));
            }
            let mut guard = state_lock.lock().expect("checkpoint state poisoned");
            guard.insert(
                k2,
                ShardEntry {
                    done: k2 - 2,
                    records,
                },
            );
            if let Some(path) = &opts.checkpoint {
                if let Err(e) = guard.save(path) {
                    save_error
                        .lock()
                        .expect("error slot poisoned")
                        .get_or_insert(e);
                }
            }
        };
        if opts.jobs <= 1 {
            pending.iter().for_each(|&k2| run_shard(k2));
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
            // Largest shards first for better balance.
            pool.install(|| pending.par_iter().rev().for_each(|&k2| run_shard(k2)));
        }
    }
    if let Some(e) = save_error.into_inner().expect("error slot poisoned") {
        return Err(e);
    }

    let mut records: Vec<SearchRecord> = state
        .shards()
        .values()
        .flat_map(|s| s.records.iter().cloned())
        .collect();
    records.sort();
    for r in &records {
        assert!(r.verify(), "record {r} fails exact re-verification");
    }
    if opts.strict_primes {
        for r in &records {
            if !strengthened_check(&r.p) {
                return Err(Error::domain(format!(
                    "reported p = {} failed the strengthened primality pass",
                    r.p
                )));
            }
        }
    }
    let u64_max = Nat::from(u64::MAX);
    Ok(SearchReport {
        mode,
        k_max,
        p_min: p_min.clone(),
        counts: class_counts(&records),
        probable_primes: records.iter().filter(|r| r.p > u64_max).count(),
        pairs_scanned: state.shards().values().map(|s| s.done).sum(),
        shards_done: state.shards().len(),
        shards_total: all.len(),
        complete: state.shards().len() == all.len(),
        strict_primes: opts.strict_primes,
        records,
        elapsed_s: start.elapsed().as_secs_f64(),
        checkpoint: opts.checkpoint.as_ref().map(|path| CheckpointMeta {
            path: path.clone(),
            resumed_shards: resumed,
            sha256: state.digest(),
        }),
    })
}

fn table_for(k_max: FibIndex) -> Result<FibTable> {
    Window::default().check(k_max)?;
    Ok(FibTable::new(k_max))
}

/// All `(k2, k3, p, l2)` with `2 <= k3 < k2 <= k_max`, `p >= p_min` prime,
/// `l2 >= 1` and `F_{k2} - F_{k3} + 1 = p^{l2}`.
pub fn search_l3_zero(k_max: FibIndex, p_min: &Nat, opts: &SearchOptions) -> Result<SearchReport> {
    if k_max < 3 {
        return Err(Error::domain("search_l3_zero needs k_max >= 3"));
    }
    let table = table_for(k_max)?;
    run_sharded(SearchMode::L3Zero, k_max, p_min, opts, |k2| {
        (2..k2)
            .filter_map(|k3| {
                let v = &table[k2] - &table[k3] + 1u32;
                let (p, l2) = prime_power(&v)?;
                (p >= *p_min).then_some(SearchRecord {
                    k2,
                    k3,
                    p,
                    l2,
                    l3: 0,
                })
            })
            .collect()
    })
}

/// All `k1` in `[k2 + 1, k_max]` with `F_{k1} - (F_{k3} - 1) = p^{l1}`,
/// `l1 >= 1`, for a base record of [`search_l3_zero`].
pub fn extend_to_k1(
    table: &FibTable,
    base: &SearchRecord,
    k_max: FibIndex,
) -> Vec<(FibIndex, u32)> {
    assert_eq!(base.l3, 0, "extension applies to l3 = 0 records");
    let shift = &table[base.k3] - 1u32;
    (base.k2 + 1..=k_max)
        .filter_map(|k1| {
            let w = &table[k1] - &shift;
            if !(&w % &base.p).is_zero() {
                return None;
            }
            let l1 = valuation(&w, &base.p) as u32;
            (base.p.pow(l1) == w).then_some((k1, l1))
        })
        .collect()
}

/// `floor(log2 x)` plus fraction, from the top 64 bits.
fn log2_nat(x: &Nat) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    (x >> shift).to_f64().expect("64-bit value").log2() + shift as f64
}

/// Given `d = F_{k2} - F_{k3} > 0`, all `(p, l2, l3)` with `p >= 5` prime,
/// `l2 > l3 >= 1` and `p^{l2} - p^{l3} = d`.
///
/// Such a solution forces `(p - 1)^{l2} <= d < p^{l2}`, so `p` is pinned to
/// `1 + floor(d^(1/l2))`; `l2` ranges over `2..=floor(log_4 d)`.
pub fn l3_positive_candidates(d: &Nat) -> Vec<(Nat, u32, u32)> {
    let mut out = Vec::new();
    if d.bits() < 3 {
        return out;
    }
    let max_l2 = ((d.bits() - 1) / 2) as u32;
    let log2d = log2_nat(d);
    for l2 in 2..=max_l2 {
        let est = log2d / l2 as f64;
        if est < 40.0 {
            // Root fits comfortably in f64; test the few integers around it.
            let r0 = est.exp2().floor() as u64;
            for p in r0.saturating_sub(1)..=r0 + 3 {
                if p >= 5 && (d % p).is_zero() {
                    if let Some(hit) = check_candidate(d, &Nat::from(p), l2) {
                        out.push(hit);
                    }
                }
            }
        } else {
            let p = integer_nth_root(d, l2) + 1u32;
            if (d % &p).is_zero() {
                if let Some(hit) = check_candidate(d, &p, l2) {
                    out.push(hit);
                }
            }
        }
    }
    out
}

fn check_candidate(d: &Nat, p: &Nat, l2: u32) -> Option<(Nat, u32, u32)> {
    let pl2 = p.pow(l2);
    if pl2 <= *d || (p - Nat::one()).pow(l2) > *d {
        return None;
    }
    let s = pl2 - d;
    let l3 = valuation(&s, p) as u32;
    if l3 == 0 || p.pow(l3) != s || primality(p) == Primality::Composite {
        return None;
    }
    Some((p.clone(), l2, l3))
}

/// All `(k2, k3, p, l2, l3)` with `2 <= k3 < k2 <= k_max`, `p >= 5` prime,
/// `l2 > l3 >= 1` and `F_{k2} - F_{k3} = p^{l2} - p^{l3}`.
pub fn search_l3_positive(k_max: FibIndex, opts: &SearchOptions) -> Result<SearchReport> {
    if k_max < 3 {
        return Err(Error::domain("search_l3_positive needs k_max >= 3"));
    }
    let table = table_for(k_max)?;
    run_sharded(
        SearchMode::L3Positive,
        k_max,
        &Nat::from(5u32),
        opts,
        |k2| {
            let mut out = Vec::new();
            for k3 in 2..k2 {
                let d = &table[k2] - &table[k3];
                for (p, l2, l3) in l3_positive_candidates(&d) {
                    out.push(SearchRecord { k2, k3, p, l2, l3 });
                }
            }
            out
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(k2: u64, k3: u64, p: u32, l2: u32, l3: u32) -> SearchRecord {
        SearchRecord {
            k2,
            k3,
            p: p.into(),
            l2,
            l3,
        }
    }

    #[test]
    fn l3_zero_small_window() {
        let r = search_l3_zero(14, &5u32.into(), &SearchOptions::default()).unwrap();
        let squares: Vec<_> = r.with_l2(|l| l > 1);
        assert_eq!(squares, vec![&rec(14, 11, 17, 2, 0)]);
        // F_12 - F_2 + 1 = 12^2 is not a prime power.
        assert!(r.records.iter().all(|x| !(x.k2 == 12 && x.k3 == 2)));
        assert!(r.complete);
        assert_eq!(r.counts["total"], r.records.len());

        let r = search_l3_zero(3, &2u32.into(), &SearchOptions::default()).unwrap();
        assert_eq!(r.records, vec![rec(3, 2, 2, 1, 0)]);
    }

    #[test]
    fn near_miss_215_is_excluded() {
        let r = search_l3_zero(24, &2u32.into(), &SearchOptions::default()).unwrap();
        assert!(r.records.iter().all(|x| !(x.k2 == 24 && x.k3 == 12)));
    }

    #[test]
    fn recipe_hand_example() {
        assert_eq!(
            l3_positive_candidates(&20u32.into()),
            vec![(5u32.into(), 2, 1)]
        );
        assert!(l3_positive_candidates(&1u32.into()).is_empty());
    }

    #[test]
    fn l3_positive_small_windows() {
        let r = search_l3_positive(7, &SearchOptions::default()).unwrap();
        assert!(r.records.is_empty());
        let r = search_l3_positive(40, &SearchOptions::default()).unwrap();
        assert_eq!(
            r.records,
            vec![
                rec(8, 2, 5, 2, 1),
                rec(10, 7, 7, 2, 1),
                rec(12, 9, 11, 2, 1)
            ]
        );
    }

    #[test]
    fn extension_examples() {
        let table = FibTable::new(20);
        assert_eq!(extend_to_k1(&table, &rec(3, 2, 2, 1, 0), 7), vec![(6, 3)]);
        assert!(extend_to_k1(&table, &rec(14, 11, 17, 2, 0), 14).is_empty());
    }

    #[test]
    fn record_verification() {
        assert!(rec(14, 11, 17, 2, 0).verify());
        assert!(!rec(14, 11, 17, 2, 1).verify());
        assert!(!rec(12, 2, 12, 2, 0).verify());
    }

    #[test]
    fn parallel_matches_serial() {
        let serial = search_l3_zero(80, &2u32.into(), &SearchOptions::default()).unwrap();
        let opts = SearchOptions {
            jobs: 4,
            ..Default::default()
        };
        let parallel = search_l3_zero(80, &2u32.into(), &opts).unwrap();
        assert_eq!(serial.records, parallel.records);
        assert_eq!(serial.counts, parallel.counts);
    }

    #[test]
    fn sink_sees_every_record() {
        let seen = Arc::new(Mutex::new(Vec::new()));
        let s2 = seen.clone();
        let opts = SearchOptions {
            sink: Some(Arc::new(move |r: &SearchRecord| {
                s2.lock().unwrap().push(r.clone())
            })),
            ..Default::default()
        };
        let report = search_l3_positive(20, &opts).unwrap();
        let mut got = seen.lock().unwrap().clone();
        got.sort();
        assert_eq!(got, report.records);
    }
}
