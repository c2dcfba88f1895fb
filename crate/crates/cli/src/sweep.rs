//! The classifier-versus-span sweep: one JSONL record per enumerated symbol, a header carrying
//! the configuration hash, and a closing summary line.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use dft_core::{build_form, enumerate_symbols, image_analysis, small_type, Bounds, GenusSymbol};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, EXIT_BOUND, EXIT_OK, EXIT_PROPERTY};

/// Symbols evaluated per parallel batch; each batch is flushed before the next starts.
const BATCH: usize = 64;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub max_order: u64,
    pub primes: Vec<u64>,
    pub bounds: Bounds,
    pub jobs: usize,
    pub out: PathBuf,
    pub resume: bool,
    pub witnesses: bool,
}

/// The part of the configuration that determines record content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashedConfig {
    pub max_order: u64,
    pub primes: Vec<u64>,
    pub max_span_order: usize,
    pub max_enum_order: usize,
    pub max_cyclotomic_order: usize,
    pub witnesses: bool,
}

impl SweepConfig {
    pub fn hashed(&self) -> HashedConfig {
        let mut primes = self.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        HashedConfig {
            max_order: self.max_order,
            primes,
            max_span_order: self.bounds.max_span_order,
            max_enum_order: self.bounds.max_enum_order,
            max_cyclotomic_order: self.bounds.max_cyclotomic_order,
            witnesses: self.witnesses,
        }
    }

    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.hashed()).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub symbol: String,
    pub order: u64,
    pub level: u64,
    pub signature: Option<u8>,
    pub small: Option<bool>,
    pub rule: Option<String>,
    pub image_rank: Option<usize>,
    pub full_image: Option<bool>,
    pub agreement: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<RecordError>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config_hash: String,
    pub records: usize,
    pub agreements: usize,
    pub reused: usize,
    pub disagreements: Vec<String>,
    pub errors: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Line {
    Header {
        config_hash: String,
        config: HashedConfig,
    },
    Record(SweepRecord),
    Summary(SweepSummary),
}

impl SweepSummary {
    pub fn exit_code(&self, bound_errors: bool) -> i32 {
        if !self.disagreements.is_empty() {
            EXIT_PROPERTY
        } else if bound_errors {
            EXIT_BOUND
        } else if !self.errors.is_empty() {
            EXIT_PROPERTY
        } else {
            EXIT_OK
        }
    }
}

pub fn evaluate(sym: &GenusSymbol, bounds: &Bounds, witnesses: bool) -> SweepRecord {
    let start = Instant::now();
    let mut rec = SweepRecord {
        symbol: sym.to_string(),
        order: sym.order(),
        level: sym.level(),
        signature: None,
        small: None,
        rule: None,
        image_rank: None,
        full_image: None,
        agreement: false,
        witnesses: None,
        error: None,
        elapsed_ms: 0,
    };
    let result = (|| -> dft_core::Result<()> {
        let v = small_type(sym)?;
        rec.small = Some(v.small);
        rec.rule = Some(v.rule);
        let d = build_form(sym)?;
        rec.signature = Some(d.signature()?);
        let a = image_analysis(&d, bounds)?;
        rec.image_rank = Some(a.rank);
        rec.full_image = Some(a.is_full());
        rec.agreement = v.small == !a.is_full();
        if witnesses {
            rec.witnesses = Some(a.witnesses().into_iter().map(|g| d.label(g)).collect());
        }
        Ok(())
    })();
    if let Err(e) = result {
        rec.error = Some(RecordError {
            kind: e.kind().into(),
            message: e.to_string(),
        });
    }
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    rec
}

/// Raw record lines of an earlier run with the same configuration hash, keyed by symbol.
fn load_previous(cfg: &SweepConfig, hash: &str) -> Result<HashMap<String, String>, CliError> {
    let mut out = HashMap::new();
    if !cfg.resume || !cfg.out.exists() {
        return Ok(out);
    }
    let reader = BufReader::new(File::open(&cfg.out)?);
    let mut lines = reader.lines();
    match lines.next().transpose()? {
        None => return Ok(out),
        Some(first) => match serde_json::from_str::<Line>(&first) {
            Ok(Line::Header { config_hash, .. }) if config_hash == hash => {}
            Ok(Line::Header { config_hash, .. }) => {
                return Err(CliError::input(
                    "ConfigMismatch",
                    format!(
                        "{} was written with config hash {config_hash}, current is {hash}",
                        cfg.out.display()
                    ),
                ))
            }
            _ => {
                return Err(CliError::input(
                    "ConfigMismatch",
                    format!("{} does not start with a sweep header", cfg.out.display()),
                ))
            }
        },
    }
    for line in lines {
        let line = line?;
        // a torn final line from an interrupted run is skipped
        if let Ok(Line::Record(r)) = serde_json::from_str::<Line>(&line) {
            out.insert(r.symbol.clone(), line);
        }
    }
    Ok(out)
}

pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub code: i32,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, CliError> {
    if cfg.max_order == 0 {
        return Err(CliError::input("InvalidConfig", "max-order must be at least 1"));
    }
    if let Some(&p) = cfg.primes.iter().find(|&&p| !dft_core::arith::is_prime(p)) {
        return Err(CliError::input("InvalidConfig", format!("{p} is not prime")));
    }
    let b = &cfg.bounds;
    if b.max_span_order == 0 || b.max_enum_order == 0 || b.max_cyclotomic_order == 0 {
        return Err(CliError::input("InvalidConfig", "bounds must be positive"));
    }
    let start = Instant::now();
    let hash = cfg.hash();
    let previous = load_previous(cfg, &hash)?;
    let symbols = enumerate_symbols(cfg.max_order, &cfg.primes);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| CliError::input("ThreadPool", e.to_string()))?;

    let mut w = BufWriter::new(File::create(&cfg.out)?);
    let header = Line::Header {
        config_hash: hash.clone(),
        config: cfg.hashed(),
    };
    writeln!(w, "{}", serde_json::to_string(&header)?)?;

    let mut summary = SweepSummary {
        config_hash: hash,
        records: 0,
        agreements: 0,
        reused: 0,
        disagreements: Vec::new(),
        errors: Vec::new(),
        elapsed_ms: 0,
    };
    let mut bound_errors = false;
    for batch in symbols.chunks(BATCH) {
        let lines: Vec<(String, bool)> = pool.install(|| {
            batch
                .par_iter()
                .map(|s| {
                    let key = s.to_string();
                    match previous.get(&key) {
                        Some(line) => Ok((line.clone(), true)),
                        None => serde_json::to_string(&Line::Record(evaluate(
                            s,
                            &cfg.bounds,
                            cfg.witnesses,
                        )))
                        .map(|l| (l, false)),
                    }
                })
                .collect::<Result<_, _>>()
        })?;
        for (line, reused) in lines {
            let Ok(Line::Record(r)) = serde_json::from_str::<Line>(&line) else {
                return Err(CliError::input("CorruptRecord", line));
            };
            summary.records += 1;
            summary.reused += reused as usize;
            if let Some(e) = &r.error {
                bound_errors |= e.kind == "BoundExceeded";
                summary.errors.push(r.symbol.clone());
            } else if r.agreement {
                summary.agreements += 1;
            } else {
                summary.disagreements.push(r.symbol.clone());
            }
            writeln!(w, "{line}")?;
        }
        w.flush()?;
    }
    summary.elapsed_ms = start.elapsed().as_millis() as u64;
    writeln!(w, "{}", serde_json::to_string(&Line::Summary(summary.clone()))?)?;
    w.flush()?;
    let code = summary.exit_code(bound_errors);
    Ok(SweepOutcome { summary, code })
}

/// Drops timing fields so that runs can be compared byte for byte.
pub fn strip_timing(jsonl: &str) -> String {
    jsonl
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).expect("sweep lines are JSON");
            if let Some(o) = v.as_object_mut() {
                o.remove("elapsed_ms");
                o.remove("reused");
            }
            v.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}
