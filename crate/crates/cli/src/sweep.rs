//! Batches of fibre computations described by a TOML request.
//!
//! ```toml
//! kmax = 10
//! p4_mode = "euler-squared"   # or "zero"
//! field = "rational"          # or "prime:N"
//! order = "standard"          # or "weighted"
//! jobs = 4
//! timeout_seconds = 3600
//! prime_fallback = true
//! output = "results.csv"      # relative to the request file
//! figure = "figure.svg"
//! points = [{ p1 = 2 }, { p1 = "1", p2 = "7/4" }]
//! ```
//!
//! A point without `p2` is computed in signature mode.

use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::Deserialize;
use tautring::fiber::{FiberDimensionRecord, FiberOptions, HirzebruchFamily, CSV_HEADER};
use tautring::groebner::Field;
use tautring::model::{Mode, P4Mode, BASE_VARS};
use tautring::rational::parse_rational;
use tautring::{MonomialOrder, Rational};

use crate::cache::Cache;
use crate::error::{CliError, Result};
use crate::point::run_point;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    p1: Number,
    p2: Option<Number>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRequest {
    kmax: usize,
    p4_mode: Option<String>,
    field: Option<String>,
    order: Option<String>,
    jobs: Option<usize>,
    timeout_seconds: Option<u64>,
    #[serde(default)]
    prime_fallback: bool,
    output: Option<PathBuf>,
    figure: Option<PathBuf>,
    points: Vec<RawPoint>,
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub points: Vec<(Rational, Option<Rational>)>,
    pub k_max: usize,
    pub p4_mode: P4Mode,
    pub options: FiberOptions,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub figure: Option<PathBuf>,
}

fn number(n: &Number) -> Result<Rational> {
    Ok(match n {
        Number::Int(i) => Rational::from_integer((*i).into()),
        Number::Text(s) => parse_rational(s)?,
    })
}

/// `standard` or `weighted` degrevlex on the base ring.
pub fn parse_order(s: &str) -> Result<MonomialOrder> {
    match s {
        "standard" => Ok(MonomialOrder::degrevlex(BASE_VARS.len())),
        "weighted" => Ok(MonomialOrder::weighted(BASE_VARS.len())),
        _ => Err(CliError::Usage(format!("unknown order `{s}` (expected standard or weighted)"))),
    }
}

impl SweepRequest {
    /// Parses a request; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let raw: RawRequest = toml::from_str(text).map_err(|e| CliError::Usage(format!("bad sweep request: {e}")))?;
        if raw.points.is_empty() {
            return Err(CliError::Usage("sweep request has no points".into()));
        }
        if raw.kmax < 3 {
            return Err(CliError::Usage("kmax must be at least 3".into()));
        }
        let points = raw
            .points
            .iter()
            .map(|p| Ok((number(&p.p1)?, p.p2.as_ref().map(number).transpose()?)))
            .collect::<Result<Vec<_>>>()?;
        let field: Field = raw.field.as_deref().unwrap_or("rational").parse()?;
        let options = FiberOptions {
            field,
            order: parse_order(raw.order.as_deref().unwrap_or("standard"))?,
            timeout: raw.timeout_seconds.map(Duration::from_secs),
            prime_fallback: raw.prime_fallback,
            ..FiberOptions::default()
        };
        Ok(SweepRequest {
            points,
            k_max: raw.kmax,
            p4_mode: raw.p4_mode.as_deref().unwrap_or("euler-squared").parse()?,
            options,
            jobs: raw.jobs.unwrap_or(1).max(1),
            output: raw.output.map(|p| base.join(p)),
            figure: raw.figure.map(|p| base.join(p)),
        })
    }
}

/// Computes every point on a pool of `jobs` workers; records come back in input order.
pub fn run_sweep(
    req: &SweepRequest,
    cache: Option<&Cache>,
    warn: &(dyn Fn(&str) + Sync),
) -> Result<Vec<FiberDimensionRecord>> {
    let needs = |mode: Mode| req.points.iter().any(|(_, p2)| p2.is_some() == (mode == Mode::Free));
    let family = |mode: Mode| -> Result<Option<HirzebruchFamily>> {
        Ok(if needs(mode) {
            Some(HirzebruchFamily::new(mode, req.k_max, req.p4_mode)?)
        } else {
            None
        })
    };
    let (sig, free) = (family(Mode::Signature)?, family(Mode::Free)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", req.jobs)))?;
    pool.install(|| {
        req.points
            .par_iter()
            .map(|(p1, p2)| {
                let fam = if p2.is_some() { free.as_ref() } else { sig.as_ref() };
                run_point(fam.expect("family built for every mode in use"), p1, p2.as_ref(), &req.options, cache, warn)
            })
            .collect()
    })
}

/// Header plus one row per record.
pub fn to_csv(records: &[FiberDimensionRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
