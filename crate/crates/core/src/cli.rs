//! Command-line driver.
//!
//! Exit codes for `test`: 0 prime, 1 composite, 2 inconclusive, 3 not
//! applicable or invalid input. Big integers in JSON output are decimal
//! strings.

use std::ffi::OsString;
use std::io::{self, BufRead, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::Error;
use crate::numtheory::{lucas_lehmer, Classical, FormCandidate};
use crate::oracle::verify_theorems;
use crate::primality::{
    auto_test, replay, test_mersenne, Algorithm, Certificate, MrAdvisory, ParamSearchConfig,
    ScanOrder, Status, Verdict,
};

pub const RECORD_SCHEMA: &str = "ec-llr.run/1";
pub const FALLBACK_BOUND_ENV: &str = "EC_LLR_FALLBACK_BOUND";

pub const EXIT_PRIME: i32 = 0;
pub const EXIT_COMPOSITE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

const SEARCH_CHUNK: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "ec-llr", version, about = "Elliptic-curve primality tests for 2^k*n - 1")]
struct Cli {
    /// Omit elapsed times so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test a single candidate p = 2^k*n - 1.
    Test(TestArgs),
    /// Run the Mersenne test over a range of exponents.
    Mersenne(MersenneArgs),
    /// Test every odd n in a range for a fixed k.
    Search(SearchArgs),
    /// Brute-force check of the point-count, group-structure and order claims.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TestArgs {
    /// Exponent k (at least 2).
    #[arg(required_unless_present = "replay")]
    k: Option<u32>,
    /// Odd multiplier n.
    #[arg(required_unless_present = "replay")]
    n: Option<BigUint>,
    /// Prime factor of n (n itself when n is prime).
    #[arg(long)]
    q1: Option<BigUint>,
    /// Second prime factor, when n = q1*q2.
    #[arg(long, requires = "q1")]
    q2: Option<BigUint>,
    /// Curve attempts before giving up as inconclusive (default 20).
    #[arg(long)]
    retries: Option<u32>,
    /// Draw x and y from a seeded generator instead of scanning upwards.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the JSON record instead of a summary line.
    #[arg(long)]
    json: bool,
    /// Re-validate every record in a JSON-lines file ("-" for stdin).
    #[arg(long, conflicts_with_all = ["k", "n"])]
    replay: Option<String>,
}

#[derive(Debug, Args)]
struct MersenneArgs {
    /// First exponent (at least 3).
    k_min: u32,
    /// Last exponent, inclusive.
    k_max: u32,
    /// Also run the classical Lucas-Lehmer test and report agreement.
    #[arg(long)]
    compare_lucas_lehmer: bool,
    /// Print JSON records.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Exponent k shared by every candidate.
    #[arg(long)]
    k: u32,
    /// Smallest n; even values are skipped.
    #[arg(long)]
    n_min: u64,
    /// Largest n, inclusive.
    #[arg(long)]
    n_max: u64,
    /// Worker threads; output order does not depend on this.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Print JSON records.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest prime to check (at most 5000).
    #[arg(long, default_value_t = 2000)]
    p_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub k: u32,
    #[serde(with = "decimal")]
    pub n: BigUint,
    #[serde(with = "decimal")]
    pub p: BigUint,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "decimal::vec")]
    pub n_factors: Vec<BigUint>,
}

impl CandidateRecord {
    pub fn from_candidate(c: &FormCandidate) -> Self {
        CandidateRecord {
            k: c.k(),
            n: c.n().clone(),
            p: c.p().clone(),
            n_factors: c.n_factors().map(<[BigUint]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn to_candidate(&self) -> Result<FormCandidate, Error> {
        let c = FormCandidate::new(self.k, self.n.clone())?;
        if c.p() != &self.p {
            return Err(Error::InvalidCandidate(format!("p = {} does not match k and n", self.p)));
        }
        if self.n_factors.is_empty() {
            Ok(c)
        } else {
            c.with_factors(self.n_factors.clone())
        }
    }
}

/// One JSON line of output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub version: String,
    pub candidate: CandidateRecord,
    pub algorithm: Algorithm,
    pub verdict: Status,
    pub certificate: Certificate,
    pub iterations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advisory: Option<MrAdvisory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lucas_lehmer: Option<Status>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lucas_lehmer_match: Option<bool>,
}

impl RunRecord {
    pub fn new(c: &FormCandidate, v: Verdict, elapsed_ms: Option<u64>) -> Self {
        RunRecord {
            schema: RECORD_SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            candidate: CandidateRecord::from_candidate(c),
            algorithm: v.algorithm,
            verdict: v.status,
            certificate: v.certificate,
            iterations: v.iterations,
            advisory: v.advisory,
            elapsed_ms,
            lucas_lehmer: None,
            lucas_lehmer_match: None,
        }
    }

    pub fn to_verdict(&self) -> Verdict {
        Verdict {
            status: self.verdict,
            algorithm: self.algorithm,
            certificate: self.certificate.clone(),
            iterations: self.iterations,
            advisory: self.advisory,
        }
    }

    /// Re-validates the record's certificate against its candidate.
    pub fn replay(&self) -> Result<(), String> {
        let c = self.candidate.to_candidate().map_err(|e| e.to_string())?;
        replay(&c, &self.to_verdict()).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    fn human(&self) -> String {
        let c = &self.candidate;
        let mut line = format!(
            "2^{}*{}-1 = {}: {} [{}]",
            c.k,
            c.n,
            c.p,
            self.verdict.as_str(),
            self.algorithm.as_str()
        );
        if let Certificate::FactorWitness { divisor, .. } = &self.certificate {
            line.push_str(&format!(" factor {divisor}"));
        }
        if let Some(ll) = self.lucas_lehmer {
            line.push_str(&format!(" lucas-lehmer {}", ll.as_str()));
        }
        if let Some(ms) = self.elapsed_ms {
            line.push_str(&format!(" ({ms} ms)"));
        }
        line
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Prime => EXIT_PRIME,
        Status::Composite => EXIT_COMPOSITE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
        Status::NotApplicable => EXIT_INVALID,
    }
}

fn default_config() -> Result<ParamSearchConfig, String> {
    let mut cfg = ParamSearchConfig::default();
    if let Ok(raw) = std::env::var(FALLBACK_BOUND_ENV) {
        cfg.fallback_bound = raw
            .trim()
            .parse()
            .map_err(|_| format!("{FALLBACK_BOUND_ENV} must be a non-negative integer, got {raw:?}"))?;
    }
    Ok(cfg)
}

fn timed<T>(enabled: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = Instant::now();
    let out = f();
    (out, enabled.then(|| start.elapsed().as_millis() as u64))
}

/// Runs one test and wraps it in a record.
pub fn run_candidate(c: &FormCandidate, cfg: &ParamSearchConfig, timing: bool) -> Result<RunRecord, Error> {
    let (verdict, elapsed) = timed(timing, || auto_test(c, cfg));
    Ok(RunRecord::new(c, verdict?, elapsed))
}

/// Records for every odd `n` in `[n_min, n_max]`, in ascending `n`.
pub fn search_records(
    k: u32,
    n_min: u64,
    n_max: u64,
    workers: usize,
    cfg: &ParamSearchConfig,
    timing: bool,
    mut sink: impl FnMut(RunRecord) -> io::Result<()>,
) -> Result<(), String> {
    if workers == 0 {
        return Err("workers must be at least 1".into());
    }
    if n_min > n_max {
        return Err(format!("empty range {n_min}..{n_max}"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| e.to_string())?;
    let first = if n_min % 2 == 1 { n_min } else { n_min + 1 };
    let ns: Vec<u64> = (first..=n_max).step_by(2).collect();
    for chunk in ns.chunks(SEARCH_CHUNK) {
        let records: Vec<Result<RunRecord, Error>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&n| {
                    let c = FormCandidate::new(k, n)?;
                    run_candidate(&c, cfg, timing)
                })
                .collect()
        });
        for r in records {
            sink(r.map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let cfg = match default_config() {
        Ok(cfg) => cfg,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INVALID;
        }
    };
    let timing = !cli.no_timing;
    let result = match cli.command {
        Command::Test(args) => cmd_test(args, cfg, timing, out),
        Command::Mersenne(args) => cmd_mersenne(args, timing, out),
        Command::Search(args) => cmd_search(args, &cfg, timing, out, err),
        Command::Verify(args) => cmd_verify(args, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

fn io_err(e: io::Error) -> String {
    e.to_string()
}

fn cmd_test(args: TestArgs, mut cfg: ParamSearchConfig, timing: bool, out: &mut dyn Write) -> Result<i32, String> {
    if let Some(path) = args.replay {
        return cmd_replay(&path, out);
    }
    let (k, n) = (args.k.expect("required by clap"), args.n.expect("required by clap"));
    let mut c = FormCandidate::new(k, n).map_err(|e| e.to_string())?;
    if let Some(q1) = args.q1 {
        let factors = match args.q2 {
            Some(q2) => vec![q1, q2],
            None => vec![q1],
        };
        c = c.with_factors(factors).map_err(|e| e.to_string())?;
    }
    if let Some(r) = args.retries {
        cfg.retry_cap = r;
    }
    if let Some(seed) = args.seed {
        cfg.scan = ScanOrder::Seeded { seed };
    }
    let record = run_candidate(&c, &cfg, timing).map_err(|e| e.to_string())?;
    let line = if args.json { record.to_json() } else { record.human() };
    writeln!(out, "{line}").map_err(io_err)?;
    Ok(exit_code(record.verdict))
}

fn cmd_replay(path: &str, out: &mut dyn Write) -> Result<i32, String> {
    let reader: Box<dyn BufRead> = if path == "-" {
        Box::new(io::BufReader::new(io::stdin()))
    } else {
        let file = std::fs::File::open(path).map_err(|e| format!("{path}: {e}"))?;
        Box::new(io::BufReader::new(file))
    };
    let mut rejected = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = serde_json::from_str::<RunRecord>(&line)
            .map_err(|e| format!("not a run record: {e}"))
            .and_then(|r| r.replay());
        match outcome {
            Ok(()) => writeln!(out, "line {}: ok", i + 1),
            Err(msg) => {
                rejected += 1;
                writeln!(out, "line {}: rejected: {msg}", i + 1)
            }
        }
        .map_err(io_err)?;
    }
    Ok(if rejected == 0 { 0 } else { EXIT_COMPOSITE })
}

fn cmd_mersenne(args: MersenneArgs, timing: bool, out: &mut dyn Write) -> Result<i32, String> {
    if args.k_min < 3 || args.k_min > args.k_max {
        return Err(format!("need 3 <= k_min <= k_max, got {}..{}", args.k_min, args.k_max));
    }
    let mut mismatches = 0;
    for k in args.k_min..=args.k_max {
        let c = FormCandidate::new(k, 1u32).map_err(|e| e.to_string())?;
        let (verdict, elapsed) = timed(timing, || test_mersenne(k));
        let mut record = RunRecord::new(&c, verdict.map_err(|e| e.to_string())?, elapsed);
        if args.compare_lucas_lehmer {
            let ll = match lucas_lehmer(k).map_err(|e| e.to_string())? {
                Classical::Prime => Status::Prime,
                Classical::Composite => Status::Composite,
            };
            let matched = ll == record.verdict;
            mismatches += usize::from(!matched);
            record.lucas_lehmer = Some(ll);
            record.lucas_lehmer_match = Some(matched);
        }
        let line = if args.json { record.to_json() } else { record.human() };
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(if mismatches == 0 { 0 } else { EXIT_COMPOSITE })
}

#[derive(Debug, Default, Serialize)]
struct Summary {
    prime: u64,
    composite: u64,
    inconclusive: u64,
    not_applicable: u64,
}

fn cmd_search(
    args: SearchArgs,
    cfg: &ParamSearchConfig,
    timing: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let mut summary = Summary::default();
    search_records(args.k, args.n_min, args.n_max, args.workers, cfg, timing, |record| {
        match record.verdict {
            Status::Prime => summary.prime += 1,
            Status::Composite => summary.composite += 1,
            Status::Inconclusive => summary.inconclusive += 1,
            Status::NotApplicable => summary.not_applicable += 1,
        }
        let line = if args.json { record.to_json() } else { record.human() };
        writeln!(out, "{line}")
    })?;
    writeln!(
        err,
        "summary: prime {} composite {} inconclusive {} not-applicable {}",
        summary.prime, summary.composite, summary.inconclusive, summary.not_applicable
    )
    .map_err(io_err)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, String> {
    let report = verify_theorems(args.p_max).map_err(|e| e.to_string())?;
    writeln!(out, "{}", serde_json::to_string(&report).map_err(|e| e.to_string())?).map_err(io_err)?;
    Ok(if report.is_clean() { 0 } else { EXIT_COMPOSITE })
}
