use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;

use pillai_core::bounds::{
    audit_absolute_chain, audit_k1_chain, av_count_bound, gl_lemma_bound, k1_bound_at,
    lmn_two_log_bound, matveev_bound, matveev_constant, BoundAudit, LinearFormSpec, TwoLogSpec,
};
use pillai_core::cfreduce::{
    cf_expand, golden, legendre_reduce, nat_from_decimal, tau_alpha_sqrt5,
};
use pillai_core::entry::entry_point;
use pillai_core::fib::{fib, lucas, FibTable};
use pillai_core::real::CertifiedReal;
use pillai_core::search::{
    count_representations, extend_to_k1, multiplicity_scan, search_l3_positive, search_l3_zero,
    two_rep_prime_enum, RecordSink, SearchOptions, SearchRecord,
};

use crate::args::{
    AuditChain, CfArgs, Cli, Command, CountArgs, Format, Mode, ScanArgs, SearchArgs, TwoRepArgs,
};
use crate::output::{write_csv, Envelope};
use crate::verify::{self, Status};
use crate::{CliError, EXIT_FAILED, EXIT_OK};

type Outcome = Result<i32, CliError>;

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Search(a) => search(cli, a, out),
        Command::TwoRep(a) => two_rep(cli, a, out),
        Command::Count(a) => count(cli, a, out),
        Command::Scan(a) => scan(cli, a, out),
        Command::Audit(a) => audit(cli, &a.chain, out),
        Command::Cf(a) => cf(cli, a, out),
        Command::Zp(a) => zp(cli, &a.p, out),
        Command::Fib(a) => fib_cmd(cli, a.n, a.lucas, out),
        Command::VerifyPaper(a) => verify_paper(cli, a.fast, a.json, out),
    }
}

fn check_decimal(s: &str) -> Result<(), CliError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(()),
        _ => Err(CliError::Usage(format!("`{s}` is not a decimal number"))),
    }
}

/// Plain integers exactly; `1e35`-style decimals rounded up.
fn parse_nat(s: &str) -> Result<BigUint, CliError> {
    if let Ok(n) = s.parse::<BigUint>() {
        return Ok(n);
    }
    check_decimal(s)?;
    Ok(nat_from_decimal(s)?)
}

fn parse_int(s: &str) -> Result<BigInt, CliError> {
    s.parse::<BigInt>()
        .map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))
}

fn parse_real(s: &str, prec: u32) -> Result<CertifiedReal, CliError> {
    check_decimal(s)?;
    Ok(CertifiedReal::from_decimal(s).at_precision(prec))
}

fn text_only(cli: &Cli, out: &mut dyn Write, text: &str) -> Outcome {
    if cli.format == Format::Csv {
        return Err(CliError::Usage("this command has no CSV output".into()));
    }
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

fn search(cli: &Cli, a: &SearchArgs, out: &mut dyn Write) -> Outcome {
    let p_min = parse_nat(&a.pmin)?;
    let sink: Option<RecordSink> = a
        .stream
        .then(|| Arc::new(|r: &SearchRecord| eprintln!("{r}")) as RecordSink);
    let opts = SearchOptions {
        jobs: cli.jobs as usize,
        checkpoint: a.checkpoint.clone(),
        stop_after_shards: a.stop_after_shards,
        strict_primes: a.strict_primes,
        sink,
    };
    let report = match a.mode {
        Mode::L3zero => search_l3_zero(a.kmax, &p_min, &opts)?,
        Mode::L3pos => search_l3_positive(a.kmax, &opts)?,
    };
    log::info!(
        "search {}: {} records, {}/{} shards in {:.2}s",
        report.mode.as_str(),
        report.records.len(),
        report.shards_done,
        report.shards_total,
        report.elapsed_s
    );
    if !report.complete {
        log::warn!("search stopped before every shard finished");
    }

    #[derive(Serialize)]
    struct Extension<'a> {
        base: &'a SearchRecord,
        k1_l1: Vec<(u64, u32)>,
    }
    let mut extensions = Vec::new();
    if a.extend && a.mode == Mode::L3zero {
        let table = FibTable::new(a.kmax);
        for r in &report.records {
            let k1_l1 = extend_to_k1(&table, r, a.kmax);
            if !k1_l1.is_empty() {
                extensions.push(Extension { base: r, k1_l1 });
            }
        }
    }

    let code = if report.complete {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    match cli.format {
        Format::Csv => write_csv(out, &["k2", "k3", "p", "l2", "l3"], &report.records)?,
        Format::Json => {
            let mut counts = serde_json::to_value(&report.counts)?;
            if a.extend {
                counts["extended"] = json!(extensions.len());
            }
            let mut env = Envelope::new(
                "search",
                json!({
                    "mode": report.mode.as_str(),
                    "k_max": report.k_max,
                    "p_min": report.p_min.to_string(),
                    "jobs": cli.jobs,
                    "checkpoint": a.checkpoint,
                    "strict_primes": a.strict_primes,
                    "extend": a.extend,
                    "precision": cli.precision,
                }),
            );
            env.records = serde_json::to_value(&report.records)?;
            env.counts = counts;
            env.elapsed_s = report.elapsed_s;
            let mut env = env
                .extra("complete", report.complete)?
                .extra("shards_done", report.shards_done)?
                .extra("shards_total", report.shards_total)?
                .extra("pairs_scanned", report.pairs_scanned)?
                .extra("probable_primes", report.probable_primes)?
                .extra("checkpoint", &report.checkpoint)?;
            if a.extend {
                env = env.extra("extensions", &extensions)?;
            }
            env.write(out)?;
        }
        Format::Text => {
            writeln!(
                out,
                "# search {} k_max={} p_min={}",
                report.mode.as_str(),
                report.k_max,
                report.p_min
            )?;
            for r in &report.records {
                writeln!(out, "{r}")?;
            }
            let counts: Vec<String> = report
                .counts
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect();
            writeln!(out, "# {}", counts.join(", "))?;
            if a.extend {
                writeln!(
                    out,
                    "# records extending to a third representation: {}",
                    extensions.len()
                )?;
                for e in &extensions {
                    writeln!(out, "# {} -> {:?}", e.base, e.k1_l1)?;
                }
            }
            if !report.complete {
                writeln!(
                    out,
                    "# incomplete: {}/{} shards",
                    report.shards_done, report.shards_total
                )?;
            }
        }
    }
    Ok(code)
}

fn two_rep(cli: &Cli, a: &TwoRepArgs, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let p_min = parse_nat(&a.pmin)?;
    let rep = two_rep_prime_enum(a.kmax, &p_min);
    match cli.format {
        Format::Csv => write_csv(out, &["k1", "k2", "p"], &rep.tuples)?,
        Format::Json => {
            let mut env = Envelope::new(
                "two-rep",
                json!({"k_max": a.kmax, "p_min": p_min.to_string()}),
            );
            env.records = rep
                .tuples
                .iter()
                .map(|(k1, k2, p)| json!({"k1": k1, "k2": k2, "p": p}))
                .collect();
            env.counts = json!({"tuples": rep.tuple_count, "distinct_primes": rep.distinct_primes});
            env.elapsed_s = start.elapsed().as_secs_f64();
            env.write(out)?;
        }
        Format::Text => {
            for (k1, k2, p) in &rep.tuples {
                writeln!(out, "F_{k1} - F_{k2} + 1 = {p}")?;
            }
            writeln!(
                out,
                "# tuples: {}, distinct primes: {}",
                rep.tuple_count, rep.distinct_primes
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn count(cli: &Cli, a: &CountArgs, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let p = parse_nat(&a.p)?;
    let c = parse_int(&a.c)?;
    let reps = count_representations(&p, &c, a.kmax)?;
    match cli.format {
        Format::Csv => write_csv(out, &["k", "l"], &reps)?,
        Format::Json => {
            let mut env = Envelope::new(
                "count",
                json!({"p": p.to_string(), "c": c.to_string(), "k_max": a.kmax}),
            );
            env.records = serde_json::to_value(&reps)?;
            env.counts = json!({"m": reps.len()});
            env.elapsed_s = start.elapsed().as_secs_f64();
            env.write(out)?;
        }
        Format::Text => {
            let list: Vec<String> = reps.iter().map(|r| format!("({},{})", r.k, r.l)).collect();
            writeln!(out, "m={}: {}", reps.len(), list.join(","))?;
            for r in &reps {
                writeln!(out, "{c} = F_{} - {p}^{}", r.k, r.l)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn scan(cli: &Cli, a: &ScanArgs, out: &mut dyn Write) -> Outcome {
    if a.pmax < a.pmin {
        return Err(CliError::Usage("--pmax must be at least --pmin".into()));
    }
    let start = Instant::now();
    let rep = multiplicity_scan(a.pmin, a.pmax, a.kmax, a.threshold.max(1));
    #[derive(Serialize)]
    struct Row {
        p: u64,
        c: String,
        m: usize,
        reps: String,
    }
    let rows: Vec<Row> = rep
        .witnesses
        .iter()
        .map(|w| Row {
            p: w.p,
            c: w.c.to_string(),
            m: w.reps.len(),
            reps: w
                .reps
                .iter()
                .map(|r| format!("{}:{}", r.k, r.l))
                .collect::<Vec<_>>()
                .join(" "),
        })
        .collect();
    match cli.format {
        Format::Csv => write_csv(out, &["p", "c", "m", "reps"], &rows)?,
        Format::Json => {
            let mut env = Envelope::new(
                "scan",
                json!({"p_min": a.pmin, "p_max": a.pmax, "k_max": a.kmax,
                       "threshold": a.threshold, "l_slack": rep.l_slack}),
            );
            env.records = serde_json::to_value(&rep.witnesses)?;
            env.counts = json!({"max_m": rep.max_m, "witnesses": rep.witnesses.len()});
            env.elapsed_s = start.elapsed().as_secs_f64();
            env.extra("max_at", &rep.max_at)?.write(out)?;
        }
        Format::Text => {
            for r in &rows {
                writeln!(out, "p={} c={} m={}: {}", r.p, r.c, r.m, r.reps)?;
            }
            let at: Vec<String> = rep
                .max_at
                .iter()
                .map(|(p, c)| format!("(p={p}, c={c})"))
                .collect();
            writeln!(out, "# max m = {} at {}", rep.max_m, at.join(" "))?;
        }
    }
    Ok(EXIT_OK)
}

fn evaluation(
    chain: &str,
    params: Vec<(&str, String)>,
    derived: Vec<(&str, String)>,
) -> BoundAudit {
    let own = |v: Vec<(&str, String)>| v.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    BoundAudit {
        chain: chain.into(),
        params: own(params),
        entries: Vec::new(),
        derived: own(derived),
        all_pass: true,
    }
}

fn audit(cli: &Cli, chain: &AuditChain, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let prec = cli.precision;
    let report = match chain {
        AuditChain::K1 { p, k } => {
            let p = parse_nat(p)?;
            let mut a = audit_k1_chain(&p)?;
            if let Some(k) = k {
                a.derived.push((
                    format!("7.2e24 (1 + log k)^2 (log p)^2 at k = {k}"),
                    k1_bound_at(*k, &p).to_sci(8),
                ));
            }
            a
        }
        AuditChain::Absolute => audit_absolute_chain()?,
        AuditChain::Matveev { t, d, b, a } => {
            let spec = LinearFormSpec {
                t: *t,
                d: *d,
                b: parse_real(b, prec)?,
                a: a.iter()
                    .map(|s| parse_real(s, prec))
                    .collect::<Result<_, _>>()?,
            };
            let bound = matveev_bound(&spec)?;
            evaluation(
                "matveev",
                vec![
                    ("t", t.to_string()),
                    ("D", d.to_string()),
                    ("B", b.clone()),
                    ("A", a.join(",")),
                ],
                vec![
                    ("C(t, D)", matveev_constant(*t, *d).to_sci(8)),
                    ("log|Lambda| >", bound.to_sci(8)),
                ],
            )
        }
        AuditChain::Lmn {
            d,
            log_a1,
            log_a2,
            b1,
            b2,
        } => {
            let spec = TwoLogSpec {
                d: *d,
                log_a1: parse_real(log_a1, prec)?,
                log_a2: parse_real(log_a2, prec)?,
                b1: parse_real(b1, prec)?,
                b2: parse_real(b2, prec)?,
            };
            let r = lmn_two_log_bound(&spec)?;
            evaluation(
                "lmn",
                vec![
                    ("D", d.to_string()),
                    ("log A1", log_a1.clone()),
                    ("log A2", log_a2.clone()),
                    ("b1", b1.clone()),
                    ("b2", b2.clone()),
                ],
                vec![
                    ("b'", r.b_prime.to_sci(8)),
                    ("branch", format!("{:?}", r.branch)),
                    ("max term", r.max_term.to_sci(8)),
                    ("coefficient", r.coefficient.to_sci(8)),
                    ("log|Lambda| >", r.bound.to_sci(8)),
                ],
            )
        }
        AuditChain::Gl { s, t } => {
            let bound = gl_lemma_bound(*s, &parse_real(t, prec)?)?;
            evaluation(
                "gl",
                vec![("s", s.to_string()), ("T", t.clone())],
                vec![("x <", bound.to_sci(8))],
            )
        }
        AuditChain::Av { s, r } => {
            let b = av_count_bound(*s, *r)?;
            evaluation(
                "av",
                vec![("s", s.to_string()), ("r", r.to_string())],
                vec![
                    ("exponent", b.exponent.to_string()),
                    ("multiplicity digits", b.multiplicity_digits.to_string()),
                    ("log10 multiplicity", format!("{:.3}", b.log10_multiplicity)),
                    ("multiplicity >", format!("1e{}", b.multiplicity_digits - 1)),
                ],
            )
        }
    };
    let code = if report.all_pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    #[derive(Serialize)]
    struct Row<'a> {
        label: &'a str,
        computed: &'a str,
        published: &'a str,
        rel_dev: f64,
        pass: bool,
        flag: &'a str,
        faithful: &'a str,
    }
    match cli.format {
        Format::Csv => {
            let rows: Vec<Row> = report
                .entries
                .iter()
                .map(|e| Row {
                    label: &e.label,
                    computed: &e.computed,
                    published: &e.published,
                    rel_dev: e.rel_dev,
                    pass: e.pass,
                    flag: e.flag.as_deref().unwrap_or(""),
                    faithful: e.faithful.as_deref().unwrap_or(""),
                })
                .collect();
            write_csv(
                out,
                &[
                    "label",
                    "computed",
                    "published",
                    "rel_dev",
                    "pass",
                    "flag",
                    "faithful",
                ],
                &rows,
            )?;
        }
        Format::Json => {
            let flagged = report.entries.iter().filter(|e| e.flag.is_some()).count();
            let failed = report
                .entries
                .iter()
                .filter(|e| e.flag.is_none() && !e.pass)
                .count();
            let mut env = Envelope::new(
                "audit",
                json!({"chain": report.chain, "params": report.params, "precision": prec}),
            );
            env.records = serde_json::to_value(&report.entries)?;
            env.counts =
                json!({"entries": report.entries.len(), "failed": failed, "flagged": flagged});
            env.elapsed_s = start.elapsed().as_secs_f64();
            env.extra("derived", &report.derived)?
                .extra("all_pass", report.all_pass)?
                .write(out)?;
        }
        Format::Text => {
            let params: Vec<String> = report
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(out, "# audit {} {}", report.chain, params.join(" "))?;
            for e in &report.entries {
                let status = match (&e.flag, e.pass) {
                    (Some(_), _) => "FLAG",
                    (None, true) => "ok",
                    (None, false) => "FAIL",
                };
                write!(
                    out,
                    "{status:<4}  {:<36} {:>16} vs {:<10} dev {:>6.2}%",
                    e.label,
                    e.computed,
                    e.published,
                    100.0 * e.rel_dev
                )?;
                if let Some(f) = &e.faithful {
                    write!(out, "  faithful {f}")?;
                }
                writeln!(out)?;
                if let Some(flag) = &e.flag {
                    writeln!(out, "      note: {flag}")?;
                }
            }
            for (k, v) in &report.derived {
                writeln!(out, "{k} = {v}")?;
            }
            if !report.entries.is_empty() {
                writeln!(out, "# all unflagged entries pass: {}", report.all_pass)?;
            }
        }
    }
    Ok(code)
}

fn cf(cli: &Cli, a: &CfArgs, out: &mut dyn Write) -> Outcome {
    if a.terms.is_none() && a.m.is_none() {
        return Err(CliError::Usage("give --terms or -M".into()));
    }
    if a.terms == Some(0) {
        return Err(CliError::Usage("--terms must be at least 1".into()));
    }
    let start = Instant::now();
    let (name, x) = if a.golden {
        ("golden", golden())
    } else {
        ("tau", tau_alpha_sqrt5())
    };
    let x = x.at_precision(cli.precision);
    let expansion = a.terms.map(|n| cf_expand(&x, n)).transpose()?;
    let reduction = match &a.m {
        Some(m) => Some(legendre_reduce(&x, &parse_nat(m)?)?),
        None => None,
    };
    #[derive(Serialize)]
    struct Row {
        i: usize,
        a: String,
        q: String,
    }
    let rows: Vec<Row> = expansion
        .iter()
        .flat_map(|e| {
            e.a.iter().zip(&e.q).enumerate().map(|(i, (a, q))| Row {
                i,
                a: a.to_string(),
                q: q.to_string(),
            })
        })
        .collect();
    let max_q = expansion
        .as_ref()
        .and_then(|e| e.max_quotient(e.len() - 1))
        .map(|m| m.to_string());
    match cli.format {
        Format::Csv => write_csv(out, &["i", "a", "q"], &rows)?,
        Format::Json => {
            let mut env = Envelope::new(
                "cf",
                json!({"x": name, "terms": a.terms, "M": a.m, "precision": cli.precision}),
            );
            env.records = serde_json::to_value(&rows)?;
            env.counts = json!({"terms": rows.len(), "max_quotient": max_q});
            env.elapsed_s = start.elapsed().as_secs_f64();
            env.extra("certified_at_bits", expansion.as_ref().map(|e| e.precision))?
                .extra("reduction", &reduction)?
                .write(out)?;
        }
        Format::Text => {
            if let Some(e) = &expansion {
                writeln!(
                    out,
                    "# i a_i q_i for {name}, certified at {} bits",
                    e.precision
                )?;
                write!(out, "{}", e.dump())?;
                writeln!(out, "# max quotient: {}", max_q.unwrap_or_default())?;
            }
            if let Some(r) = &reduction {
                writeln!(out, "# Legendre reduction for M = {}", r.m)?;
                writeln!(out, "N = {} (first q_N > M)", r.n)?;
                writeln!(out, "a(M) = {}", r.a_max)?;
                writeln!(
                    out,
                    "|x - r/s| > 1/({} s^2) for 0 < s < M",
                    r.coefficient_den
                )?;
                writeln!(
                    out,
                    "Fibonacci index N = {} gives a(M) = {}",
                    r.n_fib, r.a_max_fib
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn zp(cli: &Cli, p: &str, out: &mut dyn Write) -> Outcome {
    let d = entry_point(&parse_nat(p)?)?;
    match cli.format {
        Format::Json => {
            let mut env = Envelope::new("zp", json!({"p": d.p.to_string()}));
            env.records = json!([d]);
            env.counts = json!({"z": d.z, "e_p": d.e_p});
            env.write(out)?;
            Ok(EXIT_OK)
        }
        _ => text_only(
            cli,
            out,
            &format!("z({}) = {}\ne_p = {}\n", d.p, d.z, d.e_p),
        ),
    }
}

fn fib_cmd(cli: &Cli, n: u64, want_lucas: bool, out: &mut dyn Write) -> Outcome {
    let v = if want_lucas { lucas(n)? } else { fib(n)? };
    match cli.format {
        Format::Json => {
            let mut env = Envelope::new("fib", json!({"n": n, "lucas": want_lucas}));
            env.records = json!([{"n": n, "value": v.to_string()}]);
            env.counts = json!({"digits": v.to_string().len()});
            env.write(out)?;
            Ok(EXIT_OK)
        }
        _ => text_only(cli, out, &format!("{v}\n")),
    }
}

fn verify_paper(cli: &Cli, fast: bool, as_json: bool, out: &mut dyn Write) -> Outcome {
    let start = Instant::now();
    let items = verify::run_suite(fast, cli.jobs as usize);
    let n = |s: Status| items.iter().filter(|i| i.status == s).count();
    let code = if n(Status::Fail) == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    if as_json || cli.format == Format::Json {
        let mut env = Envelope::new("verify-paper", json!({"fast": fast, "jobs": cli.jobs}));
        env.records = serde_json::to_value(&items)?;
        env.counts = json!({"pass": n(Status::Pass), "fail": n(Status::Fail), "skipped": n(Status::Skipped)});
        env.elapsed_s = start.elapsed().as_secs_f64();
        env.write(out)?;
    } else if cli.format == Format::Csv {
        write_csv(
            out,
            &["id", "title", "status", "detail", "elapsed_s"],
            &items,
        )?;
    } else {
        for i in &items {
            writeln!(out, "{}", i.line())?;
        }
        writeln!(
            out,
            "# pass {}, fail {}, skipped {}",
            n(Status::Pass),
            n(Status::Fail),
            n(Status::Skipped)
        )?;
    }
    Ok(code)
}
