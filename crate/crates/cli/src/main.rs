//! `narayana`: sequences, self-convolutions, verification campaigns, series
//! inspection, OEIS cross-checks and evaluation benchmarks.
//!
//! Exit codes: 0 when everything passes, 1 on a verification failure or
//! strategy disagreement, 2 on a usage error.

mod numbers;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use narayana_core::identities::{closed_form_convolution, convolve_terms, theorem1_form};
use narayana_core::oeis::{cross_check, load_bfile};
use narayana_core::sequences::{narayana_spec, term_at, term_iterative, terms, TermVector};
use narayana_core::series::gf::{
    a_gf, b_gf_closed, b_gf_def, c_gf_closed, c_gf_def, narayana_gf, ProofSeries,
};
use narayana_core::verify::{
    check_form, mutate_form, run_campaign, CampaignConfig, CheckRecord, Mutation,
    VerificationReport,
};

use numbers::{parse_bigint, parse_i64, parse_u64, parse_usize};

/// Environment variable overriding the default truncation order.
const ORDER_ENV: &str = "NARAYANA_SERIES_ORDER";

/// Above this index the iterative benchmark strategy is skipped.
const ITERATIVE_CUTOFF: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "narayana",
    version,
    about = "k-step Narayana numbers and their self-convolutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    JsonTree,
}

#[derive(Subcommand)]
enum Command {
    /// Print terms of the k-step Narayana sequence.
    Seq(SeqArgs),
    /// Print self-convolution values.
    Conv(ConvArgs),
    /// Run a verification campaign.
    Verify(VerifyArgs),
    /// Print one of the generating-function series.
    Series(SeriesArgs),
    /// Time the term evaluation strategies against each other.
    Bench(BenchArgs),
    /// Cross-check a committed b-file fixture.
    Oeis(OeisArgs),
}

#[derive(Args)]
struct SeqArgs {
    #[arg(short = 'k', value_parser = parse_usize)]
    k: usize,
    /// Print terms 0..=N.
    #[arg(short = 'n', long = "n-max", value_parser = parse_usize, conflicts_with = "at")]
    n_max: Option<usize>,
    /// Print only the term at this index.
    #[arg(long, value_parser = parse_u64)]
    at: Option<u64>,
    /// Use polynomial exponentiation instead of iteration.
    #[arg(long)]
    fast: bool,
    #[arg(long = "mod", value_parser = parse_bigint)]
    modulus: Option<BigInt>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

#[derive(Args)]
struct ConvArgs {
    #[arg(short = 'k', value_parser = parse_usize)]
    k: usize,
    #[arg(short = 'n', long = "n-max", value_parser = parse_usize)]
    n_max: usize,
    /// Evaluate through the closed form (checked against the direct sum).
    #[arg(long)]
    closed_form: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "2", value_parser = parse_usize)]
    k_min: usize,
    #[arg(long, default_value = "8", value_parser = parse_usize)]
    k_max: usize,
    #[arg(long, default_value = "200", value_parser = parse_usize)]
    n_max: usize,
    #[arg(long, env = ORDER_ENV, default_value = "200", value_parser = parse_i64)]
    series_order: i64,
    #[arg(long, default_value = "64", value_parser = parse_usize)]
    lemma_m_max: usize,
    /// Comma-separated check families (theorem1, catalog, proof, lemma1,
    /// lemma2) or catalog form names.
    #[arg(long, value_delimiter = ',')]
    forms: Vec<String>,
    #[arg(long = "mod", value_parser = parse_bigint)]
    modulus: Option<BigInt>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
    #[arg(long, value_parser = parse_usize)]
    jobs: Option<usize>,
    /// Self-test: check deliberately corrupted k-step identities, which must fail.
    #[arg(long)]
    mutate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesObject {
    Gf,
    #[value(name = "A")]
    A,
    #[value(name = "Bclosed")]
    BClosed,
    #[value(name = "Bdef")]
    BDef,
    #[value(name = "Cclosed")]
    CClosed,
    #[value(name = "Cdef")]
    CDef,
    Diff,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(short = 'k', value_parser = parse_usize)]
    k: usize,
    #[arg(long, env = ORDER_ENV, default_value = "200", value_parser = parse_i64)]
    order: i64,
    #[arg(long, value_enum, default_value = "gf")]
    object: SeriesObject,
    /// Omit the trailing `+ O(x^N)`.
    #[arg(long)]
    no_remainder: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Iter,
    Polyexp,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(short = 'k', value_parser = parse_usize)]
    k: usize,
    #[arg(long, value_parser = parse_u64)]
    at: u64,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "iter,polyexp"
    )]
    strategy: Vec<Strategy>,
    #[arg(long = "mod", value_parser = parse_bigint)]
    modulus: Option<BigInt>,
    #[arg(long, default_value = "1", value_parser = parse_usize)]
    repeat: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Seq,
    Conv,
}

#[derive(Args)]
struct OeisArgs {
    #[arg(long)]
    fixture: std::path::PathBuf,
    #[arg(long, value_enum)]
    target: Target,
    #[arg(short = 'k', value_parser = parse_usize)]
    k: usize,
    /// b-file index i is compared with computed index i + offset.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_i64)]
    offset: i64,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

enum Failure {
    Usage(String),
    Check(String),
}

type CmdResult = Result<ExitCode, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn print_values(format: OutputFormat, label: &str, k: usize, values: &[(usize, BigInt)]) {
    match format {
        OutputFormat::Table => {
            let line: Vec<String> = values.iter().map(|(_, v)| v.to_string()).collect();
            println!("{}", line.join(" "));
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["n", label]).expect("stdout");
            for (n, v) in values {
                w.write_record([n.to_string(), v.to_string()])
                    .expect("stdout");
            }
            w.flush().expect("stdout");
        }
        OutputFormat::JsonTree => {
            let items: Vec<Value> = values
                .iter()
                .map(|(n, v)| json!({ "n": n, label: v.to_string() }))
                .collect();
            println!("{}", json!({ "k": k, "values": items }));
        }
    }
}

fn cmd_seq(a: SeqArgs) -> CmdResult {
    let spec = narayana_spec(a.k).map_err(usage)?;
    let m = a.modulus.as_ref();
    let values = match (a.at, a.n_max) {
        (Some(n), _) => {
            let v = if a.fast {
                term_at(&spec, n, m)
            } else {
                term_iterative(&spec, n, m)
            }
            .map_err(usage)?;
            vec![(n as usize, v)]
        }
        (None, Some(n_max)) => {
            let t = terms(&spec, n_max);
            let t = match m {
                Some(m) if *m >= BigInt::from(2) => t.reduced(m),
                Some(m) => return Err(usage(format!("modulus must be at least 2, got {m}"))),
                None => t,
            };
            t.iter().map(|(i, v)| (i, v.clone())).collect()
        }
        (None, None) => return Err(usage("either -n or --at is required")),
    };
    print_values(a.format, "value", a.k, &values);
    Ok(ExitCode::SUCCESS)
}

fn cmd_conv(a: ConvArgs) -> CmdResult {
    let form = theorem1_form(a.k).map_err(usage)?;
    let tv = form.term_vectors(a.n_max);
    let oracle = convolve_terms(&tv[0], a.n_max);
    let mut values = Vec::with_capacity(oracle.len());
    for c in oracle {
        let v = if a.closed_form {
            let closed = closed_form_convolution(&form, &tv, c.n)
                .map_err(|e| Failure::Check(format!("n = {}: {e}", c.n)))?;
            if closed != c.value {
                return Err(Failure::Check(format!(
                    "closed form disagrees with direct sum at n = {}: {} vs {}",
                    c.n, closed, c.value
                )));
            }
            closed
        } else {
            c.value
        };
        values.push((c.n, v));
    }
    print_values(a.format, "conv", a.k, &values);
    Ok(ExitCode::SUCCESS)
}

fn report_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "check_id",
        "params",
        "status",
        "cells",
        "elapsed_ms",
        "counterexample",
        "lhs",
        "rhs",
    ])
    .expect("in-memory");
    for r in &report.records {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let (at, lhs, rhs) = match &r.first_counterexample {
            Some(c) => (
                c.inputs
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                c.lhs.clone(),
                c.rhs.clone(),
            ),
            None => Default::default(),
        };
        w.write_record([
            r.check_id.clone(),
            params.join(" "),
            r.status.to_string(),
            r.cells_checked.to_string(),
            format!("{:.3}", r.elapsed.as_secs_f64() * 1e3),
            at,
            lhs,
            rhs,
        ])
        .expect("in-memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("utf-8")
}

fn emit_report(report: &VerificationReport, format: OutputFormat) {
    let text = match format {
        OutputFormat::Table => report.to_text(),
        OutputFormat::Csv => report_csv(report),
        OutputFormat::JsonTree => {
            serde_json::to_string_pretty(report).expect("serializable") + "\n"
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let config = CampaignConfig {
        k_min: a.k_min,
        k_max: a.k_max,
        n_max: a.n_max,
        series_order: a.series_order,
        lemma_m_max: a.lemma_m_max,
        forms: a.forms,
        modulus: a.modulus,
        jobs: a.jobs,
    };
    config.validate().map_err(usage)?;
    let report = if a.mutate {
        // every k gets its leading coefficient bumped; each must fail
        let records: Vec<CheckRecord> = config
            .k_values()
            .map(|k| {
                let form = theorem1_form(k).expect("validated k");
                check_form(
                    "theorem1-mutated",
                    &mutate_form(&form, Mutation::Term(0)),
                    config.n_max,
                )
            })
            .collect();
        VerificationReport::from_records(Some(config), records)
    } else {
        run_campaign(&config).map_err(usage)?
    };
    emit_report(&report, a.format);
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_series(a: SeriesArgs) -> CmdResult {
    if a.k < 2 {
        return Err(usage(format!("k must be at least 2, got {}", a.k)));
    }
    if a.order < 0 {
        return Err(usage("order must be non-negative"));
    }
    let (k, n) = (a.k, a.order);
    let s = match a.object {
        SeriesObject::Gf => narayana_gf(k, n),
        SeriesObject::A => a_gf(k, n),
        SeriesObject::BClosed => b_gf_closed(k, n),
        SeriesObject::BDef => b_gf_def(k, n),
        SeriesObject::CClosed => c_gf_closed(k, n),
        SeriesObject::CDef => c_gf_def(k, n),
        SeriesObject::Diff => ProofSeries::build(k, n).residual(),
    };
    if a.no_remainder {
        println!("{s:#}");
    } else {
        println!("{s}");
    }
    if a.object == SeriesObject::Diff && !s.is_zero() {
        return Err(Failure::Check("B - C - A is not the zero series".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn digits(v: &BigInt) -> usize {
    v.abs().to_string().len()
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let spec = narayana_spec(a.k).map_err(usage)?;
    let m = a.modulus.as_ref();
    if let Some(m) = m {
        if *m < BigInt::from(2) {
            return Err(usage(format!("modulus must be at least 2, got {m}")));
        }
    }
    let repeat = a.repeat.max(1);
    let mut rows: Vec<(Strategy, Option<(u128, BigInt)>)> = Vec::new();
    for &strategy in &a.strategy {
        if strategy == Strategy::Iter && a.at > ITERATIVE_CUTOFF {
            eprintln!(
                "iter: skipped, n = {} exceeds the iterative cutoff {}",
                a.at, ITERATIVE_CUTOFF
            );
            rows.push((strategy, None));
            continue;
        }
        let start = Instant::now();
        let mut value = BigInt::default();
        for _ in 0..repeat {
            value = match strategy {
                Strategy::Iter => term_iterative(&spec, a.at, m),
                Strategy::Polyexp => term_at(&spec, a.at, m),
            }
            .map_err(usage)?;
        }
        let ns = start.elapsed().as_nanos() / repeat as u128;
        rows.push((strategy, Some((ns, value))));
    }
    let computed: Vec<&BigInt> = rows
        .iter()
        .filter_map(|(_, r)| r.as_ref().map(|r| &r.1))
        .collect();
    if computed.windows(2).any(|w| w[0] != w[1]) {
        return Err(Failure::Check(format!(
            "strategies disagree on a_{} for k = {}",
            a.at, a.k
        )));
    }
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record([
        "strategy",
        "k",
        "n",
        "repeat",
        "nanoseconds",
        "digits",
        "status",
    ])
    .expect("stdout");
    for (strategy, r) in rows {
        let name = match strategy {
            Strategy::Iter => "iter",
            Strategy::Polyexp => "polyexp",
        };
        let (ns, dg, status) = match r {
            Some((ns, v)) => (ns.to_string(), digits(&v).to_string(), "ok"),
            None => (String::new(), String::new(), "skipped"),
        };
        w.write_record([
            name.to_string(),
            a.k.to_string(),
            a.at.to_string(),
            repeat.to_string(),
            ns,
            dg,
            status.to_string(),
        ])
        .expect("stdout");
    }
    w.flush().expect("stdout");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oeis(a: OeisArgs) -> CmdResult {
    let bfile = load_bfile(&a.fixture).map_err(usage)?;
    let spec = narayana_spec(a.k).map_err(usage)?;
    let last = bfile.entries.last().map_or(0, |e| e.0);
    let n_max = (last + a.offset).max(0) as usize;
    let computed = match a.target {
        Target::Seq => terms(&spec, n_max),
        Target::Conv => TermVector::from(convolve_terms(&terms(&spec, n_max), n_max).as_slice()),
    };
    let record =
        cross_check(&bfile, &computed, a.offset).map_err(|e| Failure::Check(e.to_string()))?;
    let passed = record.passed();
    if let Some(c) = &record.first_counterexample {
        eprintln!(
            "first differing index {}: b-file {} vs computed {}",
            c.inputs.get("index").map_or("?", String::as_str),
            c.lhs,
            c.rhs
        );
    }
    emit_report(
        &VerificationReport::from_records(None, vec![record]),
        a.format,
    );
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Seq(a) => cmd_seq(a),
        Command::Conv(a) => cmd_conv(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Series(a) => cmd_series(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Oeis(a) => cmd_oeis(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
