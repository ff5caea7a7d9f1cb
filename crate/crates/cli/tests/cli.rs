use std::collections::BTreeSet;
use std::process::Command;

use pillai_cli::{run, EXIT_FAILED, EXIT_INTEGRITY, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn pillai(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("pillai").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out) = pillai(&a);
    assert_eq!(code, EXIT_OK, "{out}");
    serde_json::from_str(&out).unwrap()
}

type Row = (u64, u64, String, u32, u32);

fn csv_rows(text: &str) -> BTreeSet<Row> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["k2", "k3", "p", "l2", "l3"]);
    r.deserialize().map(Result::unwrap).collect()
}

fn json_rows(v: &Value) -> BTreeSet<Row> {
    v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["k2"].as_u64().unwrap(),
                r["k3"].as_u64().unwrap(),
                r["p"].as_str().unwrap().to_string(),
                r["l2"].as_u64().unwrap() as u32,
                r["l3"].as_u64().unwrap() as u32,
            )
        })
        .collect()
}

#[test]
fn smallest_search() {
    let (code, out) = pillai(&[
        "search", "--mode", "l3zero", "--kmax", "3", "--pmin", "2", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k2,k3,p,l2,l3\n3,2,2,1,0\n");
}

#[test]
fn csv_and_json_carry_the_same_records() {
    let base = ["search", "--mode", "l3zero", "--kmax", "120", "--pmin", "2"];
    let v = json(&base);
    assert_eq!(v["command"], "search");
    for key in ["config", "records", "counts", "elapsed_s"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let mut a = base.to_vec();
    a.extend(["--format", "csv"]);
    let (_, csv) = pillai(&a);
    let rows = csv_rows(&csv);
    assert_eq!(rows, json_rows(&v));
    assert_eq!(rows.len() as u64, v["counts"]["total"].as_u64().unwrap());
    // Primes are strings in JSON.
    assert!(v["records"][0]["p"].is_string());
}

#[test]
fn reports_are_byte_identical_across_runs_and_jobs() {
    let run_with = |jobs: &str| {
        pillai(&[
            "search", "--mode", "l3pos", "--kmax", "150", "--jobs", jobs, "--format", "csv",
        ])
        .1
    };
    let one = run_with("1");
    assert_eq!(one, run_with("1"));
    assert_eq!(one, run_with("4"));
    assert_eq!(one, "k2,k3,p,l2,l3\n8,2,5,2,1\n10,7,7,2,1\n12,9,11,2,1\n");
}

#[test]
fn interrupted_search_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let ckpt = ckpt.to_str().unwrap();
    let args = [
        "search", "--mode", "l3zero", "--kmax", "160", "--format", "csv",
    ];
    let (_, full) = pillai(&args);

    let mut partial = args.to_vec();
    partial.extend(["--checkpoint", ckpt, "--stop-after-shards", "30"]);
    let (code, _) = pillai(&partial);
    assert_eq!(code, EXIT_FAILED, "an interrupted run is not complete");

    let mut resumed = args.to_vec();
    resumed.extend(["--checkpoint", ckpt]);
    let (code, out) = pillai(&resumed);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, full);
}

#[test]
fn corrupt_checkpoint_is_an_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let path = ckpt.to_str().unwrap();
    let args = [
        "search",
        "--mode",
        "l3zero",
        "--kmax",
        "60",
        "--checkpoint",
        path,
    ];
    assert_eq!(pillai(&args).0, EXIT_OK);
    let mut text = std::fs::read_to_string(&ckpt).unwrap();
    text = text.replacen('1', "2", 1);
    text.push_str("garbage\n");
    std::fs::write(&ckpt, text).unwrap();
    assert_eq!(pillai(&args).0, EXIT_INTEGRITY);
}

#[test]
fn count_examples() {
    let v = json(&["count", "-p", "2", "-c", "1", "--kmax", "100"]);
    assert_eq!(v["counts"]["m"], 3);
    let reps: Vec<(u64, u64)> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["k"].as_u64().unwrap(), r["l"].as_u64().unwrap()))
        .collect();
    assert_eq!(reps, [(5, 2), (4, 1), (3, 0)]);

    let (_, out) = pillai(&["count", "-p", "7", "-c", "6", "--kmax", "1000"]);
    assert!(out.starts_with("m=2: (10,2),(7,1)\n"), "{out}");
    let v = json(&["count", "-p", "5", "-c", "100", "--kmax", "10"]);
    assert_eq!(v["counts"]["m"], 0);
    let (_, out) = pillai(&[
        "count", "-p", "2", "-c", "-3", "--kmax", "100", "--format", "csv",
    ]);
    assert_eq!(out, "k,l\n7,4\n5,3\n2,2\n");
}

#[test]
fn usage_errors() {
    assert_eq!(pillai(&["count", "-p", "4", "-c", "1"]).0, EXIT_USAGE);
    assert_eq!(pillai(&["zp", "-p", "91"]).0, EXIT_USAGE);
    assert_eq!(pillai(&["search", "--mode", "sideways"]).0, EXIT_USAGE);
    assert_eq!(
        pillai(&["search", "--mode", "l3zero", "--jobs", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(pillai(&["audit", "nonesuch"]).0, EXIT_USAGE);
    assert_eq!(
        pillai(&["audit", "gl", "-s", "2", "-T", "100"]).0,
        EXIT_USAGE
    );
    assert_eq!(pillai(&["cf", "--tau"]).0, EXIT_USAGE);
    assert_eq!(pillai(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(pillai(&["--help"]).0, EXIT_OK);
}

#[test]
fn audits() {
    // Every unflagged entry of the absolute chain within 1% would be needed
    // for exit 0; the recomputation is tighter than the published values.
    let (code, out) = pillai(&["audit", "absolute", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        code,
        if v["all_pass"].as_bool().unwrap() {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    );
    let flags: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e.get("flag").is_some())
        .map(|e| e["label"].as_str().unwrap())
        .collect();
    assert!(flags.contains(&"two-log coefficient with D^2"));
    assert!(flags.contains(&"two-log coefficient with D^4"));

    let v = json(&["audit", "av", "-s", "3", "-r", "2"]);
    let derived = v["derived"].as_array().unwrap();
    let digits = derived
        .iter()
        .find(|d| d[0] == "multiplicity digits")
        .map(|d| d[1].as_str().unwrap().parse::<u32>().unwrap())
        .unwrap();
    assert!(digits > 2500);

    let v = json(&["audit", "gl", "-s", "2", "-T", "1e6"]);
    assert_eq!(v["all_pass"], true);
    let v = json(&[
        "audit", "matveev", "-t", "3", "-d", "2", "-b", "1000", "-a", "1,1.6,4",
    ]);
    assert!(v["derived"][1][1].as_str().unwrap().starts_with('-'));
    json(&[
        "audit", "lmn", "-d", "2", "--log-a1", "0.8", "--log-a2", "0.9", "--b1", "10", "--b2", "-7",
    ]);
}

#[test]
fn continued_fractions() {
    let v = json(&["cf", "--tau", "--terms", "171"]);
    assert_eq!(v["counts"]["max_quotient"], "330");
    let v = json(&["cf", "--tau", "-M", "1e35"]);
    let r = &v["reduction"];
    assert_eq!(r["n_fib"], 170);
    assert_eq!(r["a_max_fib"], "330");
    assert_eq!(r["n"], 74);
    let v = json(&["cf", "--golden", "--terms", "50"]);
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["a"] == "1"));
}

#[test]
fn small_commands() {
    assert_eq!(pillai(&["fib", "100"]).1, "354224848179261915075\n");
    assert_eq!(pillai(&["fib", "10", "--lucas"]).1, "123\n");
    let v = json(&["zp", "-p", "1000000007"]);
    assert_eq!(v["records"][0]["e_p"], 1);
    let v = json(&["two-rep", "--kmax", "20"]);
    assert!(v["counts"]["tuples"].as_u64().unwrap() > 0);
    let v = json(&["scan", "--pmax", "2", "--kmax", "100"]);
    assert_eq!(v["counts"]["max_m"], 3);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_pillai");
    let out = Command::new(bin)
        .args([
            "search", "--mode", "l3zero", "--kmax", "12", "--pmin", "2", "--stream", "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    // Every streamed record reappears in the sorted report.
    let streamed: BTreeSet<String> = stderr
        .lines()
        .filter(|l| l.starts_with('('))
        .map(String::from)
        .collect();
    let reported: BTreeSet<String> = csv_rows(&stdout)
        .into_iter()
        .map(|(a, b, p, c, d)| format!("({a},{b},{p},{c},{d})"))
        .collect();
    assert_eq!(streamed, reported);

    let out = Command::new(bin)
        .args(["count", "-p", "9", "-c", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(out.stdout.is_empty());
}
