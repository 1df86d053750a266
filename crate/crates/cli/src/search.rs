//! Batch scans over parameter grids.

use anyhow::{bail, Context};
use num_bigint::BigInt;
use puremono::arith::factorize;
use puremono::purefield::{
    analyze, binomial_irreducible, construct_generator, theorem_general_test, AnalyzeOptions, GeneralTest,
    MonogenityVerdict, Outcome, WitnessSource,
};
use rayon::prelude::*;
use serde::Serialize;

/// Refuse grids larger than this; a campaign that big should be split up.
pub const MAX_GRID: usize = 10_000_000;

pub const COLUMNS: [&str; 9] = ["n", "m", "status", "provenance", "p", "d", "lhs", "rhs", "detail"];

/// Parses `27`, `2..200` (inclusive) or `3,5,-7`.
pub fn parse_range(s: &str) -> anyhow::Result<Vec<BigInt>> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().with_context(|| format!("bad range start in {s:?}"))?;
        let hi: i64 = hi.trim().parse().with_context(|| format!("bad range end in {s:?}"))?;
        let len = if hi < lo { 0 } else { (hi - lo) as u128 + 1 };
        if len > MAX_GRID as u128 {
            bail!("range {s} has more than {MAX_GRID} values");
        }
        return Ok((lo..=hi).map(BigInt::from).collect());
    }
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().with_context(|| format!("bad value {t:?} in {s:?}")))
        .collect()
}

pub fn parse_u64_range(s: &str) -> anyhow::Result<Vec<u64>> {
    parse_range(s)?
        .into_iter()
        .map(|v| u64::try_from(&v).with_context(|| format!("{v} is not a nonnegative 64-bit integer")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Full pipeline: generator route, counting criterion, splitting fallback.
    Analyze,
    /// Counting criterion only.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: u64,
    #[serde(serialize_with = "puremono::arith::serialize_bigint")]
    pub m: BigInt,
    /// One of not_monogenic, monogenic, inconclusive, no_fire, reducible, error.
    pub status: &'static str,
    pub provenance: Option<String>,
    pub p: Option<u64>,
    pub d: Option<u32>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<MonogenityVerdict>,
}

impl Row {
    fn bare(n: u64, m: BigInt, status: &'static str, detail: String) -> Self {
        Row {
            n,
            m,
            status,
            provenance: None,
            p: None,
            d: None,
            lhs: None,
            rhs: None,
            detail,
            verdict: None,
        }
    }

    pub fn from_verdict(v: MonogenityVerdict) -> Self {
        let mut row = Row::bare(v.n, v.m.clone(), "", String::new());
        row.provenance = Some(v.provenance.clone());
        match &v.outcome {
            Outcome::NotMonogenic(w) => {
                row.status = "not_monogenic";
                row.p = Some(w.p);
                row.d = Some(w.d);
                row.lhs = Some(w.lhs.to_string());
                row.rhs = Some(w.rhs.to_string());
                row.detail = match &w.source {
                    WitnessSource::BinomialCount { r, u, multiplier, binomial_factors, .. } => format!(
                        "r={r} u={u}: {multiplier} * {binomial_factors} > N_{}({})",
                        w.p, w.d
                    ),
                    WitnessSource::PrimeSplitting => format!("L_{}({}) > N_{}({})", w.p, w.d, w.p, w.d),
                };
            }
            Outcome::Monogenic(c) => {
                row.status = "monogenic";
                row.detail = format!("theta = {}; G = {}", c.theta, c.g);
            }
            Outcome::Inconclusive { notes } => {
                row.status = "inconclusive";
                row.detail = notes.join("; ");
            }
        }
        row.verdict = Some(v);
        row
    }

    pub fn is_error(&self) -> bool {
        self.status == "error"
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        vec![
            self.n.to_string(),
            self.m.to_string(),
            self.status.to_string(),
            opt(&self.provenance),
            self.p.map(|p| p.to_string()).unwrap_or_default(),
            self.d.map(|d| d.to_string()).unwrap_or_default(),
            opt(&self.lhs),
            opt(&self.rhs),
            self.detail.clone(),
        ]
    }
}

fn binomial_row(n: u64, m: &BigInt, criterion: Criterion, opts: &AnalyzeOptions) -> Row {
    match binomial_irreducible(n, m) {
        Ok(true) => {}
        Ok(false) => return Row::bare(n, m.clone(), "reducible", format!("x^{n} - {m} is reducible over Q")),
        Err(e) => return Row::bare(n, m.clone(), "error", e.to_string()),
    }
    let result = match criterion {
        Criterion::Analyze => analyze(n, m, opts).map(Row::from_verdict),
        Criterion::General => theorem_general_test(n, m, opts).map(|t| match t {
            GeneralTest::Fired(v) => Row::from_verdict(v),
            GeneralTest::NoFire { notes } => Row::bare(n, m.clone(), "no_fire", notes.join("; ")),
        }),
    };
    result.unwrap_or_else(|e| Row::bare(n, m.clone(), "error", e.to_string()))
}

/// Every `(n, m)` pair, sorted, evaluated in parallel.
pub fn scan_binomials(ns: &[u64], ms: &[BigInt], criterion: Criterion, opts: &AnalyzeOptions) -> anyhow::Result<Vec<Row>> {
    let mut grid: Vec<(u64, BigInt)> = Vec::new();
    if ns.len().saturating_mul(ms.len()) > MAX_GRID {
        bail!("grid of {} x {} exceeds {MAX_GRID} instances", ns.len(), ms.len());
    }
    for &n in ns {
        for m in ms {
            grid.push((n, m.clone()));
        }
    }
    grid.sort();
    grid.dedup();
    Ok(grid.par_iter().map(|(n, m)| binomial_row(*n, m, criterion, opts)).collect())
}

/// Whether `(n, a, u)` satisfies the generator hypotheses. `None` means the
/// factorization itself failed, which is reported as a row error.
fn generator_eligible(n: u64, a: &BigInt, u: u64, seed: u64) -> Option<bool> {
    if n < 2 || u < 2 || num_integer::gcd(n, u) != 1 || a.magnitude() < &2u32.into() {
        return Some(false);
    }
    let a_fac = factorize(a, seed).ok()?;
    let n_fac = factorize(&BigInt::from(n), seed).ok()?;
    Some(a_fac.is_squarefree() && n_fac.primes().all(|q| a_fac.exponent_of(q) > 0))
}

/// The generator family `x^n - a^u`; `a` outside the hypotheses is skipped.
/// Returns the rows and the number of skipped pairs.
pub fn scan_generators(ns: &[u64], as_: &[BigInt], u: u64, seed: u64) -> anyhow::Result<(Vec<Row>, u64)> {
    if ns.len().saturating_mul(as_.len()) > MAX_GRID {
        bail!("grid of {} x {} exceeds {MAX_GRID} instances", ns.len(), as_.len());
    }
    let mut grid: Vec<(u64, BigInt)> = ns.iter().flat_map(|&n| as_.iter().map(move |a| (n, a.clone()))).collect();
    grid.sort();
    grid.dedup();
    let rows: Vec<Option<Row>> = grid
        .par_iter()
        .map(|(n, a)| {
            let m = || a.pow(u32::try_from(u).unwrap_or(u32::MAX));
            match generator_eligible(*n, a, u, seed) {
                Some(false) => None,
                None => Some(Row::bare(*n, a.clone(), "error", format!("could not factor {a}"))),
                Some(true) => Some(match construct_generator(*n, a, u, seed) {
                    Ok(v) => Row::from_verdict(v),
                    Err(e) => Row::bare(*n, m(), "error", e.to_string()),
                }),
            }
        })
        .collect();
    let skipped = rows.iter().filter(|r| r.is_none()).count() as u64;
    Ok((rows.into_iter().flatten().collect(), skipped))
}
