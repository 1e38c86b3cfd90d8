//! Mestre–Nagao sums over quadratic twists and the twist sieve.
//!
//! The twist `E⁽ᵈ⁾` has `a_p(E⁽ᵈ⁾) = (d/p)·a_p(E)` at primes `p ∤ 2dΔ`, so
//! one table of traces serves every `d`. Each prime contributes one of
//! two precomputed terms according to the Legendre symbol, which is all
//! the inner loop does.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::curve::RationalCurve;
use crate::error::{domain, Error, Result};
use crate::exactnum::{is_squarefree_i64, jacobi_u64, primes_up_to};
use crate::modp::{curve_hash, ApTable};

/// Candidates per checkpointed unit of work.
pub const CHUNK: u64 = 1 << 16;

/// Residue tables are kept for primes below this; larger primes use the
/// Jacobi symbol directly.
const RESIDUE_TABLE_LIMIT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Σ (2 − a_p)/N_p · log p`
    S0,
    /// `Σ (1 − (p − 1)/N_p) · log p`
    S1,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::S0 => "S0",
            Variant::S1 => "S1",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S0" => Ok(Variant::S0),
            "S1" => Ok(Variant::S1),
            _ => domain(format!("unknown Mestre-Nagao variant '{s}' (expected S0 or S1)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DFilter {
    Squarefree,
    Fundamental,
}

impl fmt::Display for DFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DFilter::Squarefree => "squarefree",
            DFilter::Fundamental => "fundamental",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveConfig {
    pub curve_id: String,
    pub pmax: u64,
    pub d_min: i64,
    pub d_max: i64,
    pub top_k: usize,
    /// `None` keeps the best `top_k` regardless of value
    pub min_sum: Option<f64>,
    pub variant: Variant,
    pub d_filter: DFilter,
}

impl SieveConfig {
    pub fn new(e: &RationalCurve, pmax: u64, d_min: i64, d_max: i64) -> Self {
        SieveConfig {
            curve_id: curve_hash(e),
            pmax,
            d_min,
            d_max,
            top_k: 20,
            min_sum: None,
            variant: Variant::S1,
            d_filter: DFilter::Squarefree,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_min > self.d_max {
            return domain(format!("d_min = {} exceeds d_max = {}", self.d_min, self.d_max));
        }
        if self.pmax < 2 {
            return domain("pmax must be at least 2");
        }
        if self.top_k == 0 {
            return domain("top_k must be at least 1");
        }
        Ok(())
    }

    /// One-line echo used in output headers and checkpoints.
    pub fn echo(&self) -> String {
        let min = match self.min_sum {
            Some(m) => format!("{m}"),
            None => "none".into(),
        };
        format!(
            "curve={} pmax={} dmin={} dmax={} top={} min_sum={} variant={} filter={}",
            self.curve_id, self.pmax, self.d_min, self.d_max, self.top_k, min, self.variant, self.d_filter
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SieveHit {
    pub d: i64,
    pub sum: f64,
}

/// Descending sum, then `|d|` ascending, then positive before negative.
fn hit_order(a: &SieveHit, b: &SieveHit) -> std::cmp::Ordering {
    b.sum
        .total_cmp(&a.sum)
        .then(a.d.unsigned_abs().cmp(&b.d.unsigned_abs()))
        .then(b.d.cmp(&a.d))
}

fn keep_top(hits: &mut Vec<SieveHit>, k: usize) {
    hits.sort_by(hit_order);
    hits.truncate(k);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MnSum {
    pub sum: f64,
    /// primes in range skipped for dividing `2dΔ`
    pub skipped: usize,
}

struct FastPrime {
    p: u64,
    /// contributions for `(d/p) = 1` and `(d/p) = −1`
    plus: f64,
    minus: f64,
    residues: Option<Vec<bool>>,
}

/// Per-prime terms of a table, ready for many `d`.
pub struct Evaluator {
    primes: Vec<FastPrime>,
    /// bad primes and `p = 2`, skipped for every `d`
    always_skipped: usize,
    variant: Variant,
}

/// The contribution of one prime whose reduction has trace `a_p`.
pub fn term(variant: Variant, p: u64, a_p: i64) -> f64 {
    let lp = (p as f64).ln();
    let n = (p as i64 + 1 - a_p) as f64;
    match variant {
        Variant::S1 => (1.0 - (p as f64 - 1.0) / n) * lp,
        Variant::S0 => ((2 - a_p) as f64 / n) * lp,
    }
}

impl Evaluator {
    pub fn new(table: &ApTable, variant: Variant) -> Self {
        let mut primes = Vec::new();
        let mut always_skipped = 0;
        for e in &table.entries {
            if e.p == 2 || !e.good {
                always_skipped += 1;
                continue;
            }
            let p = e.p;
            let residues = (p < RESIDUE_TABLE_LIMIT).then(|| {
                let mut r = vec![false; p as usize];
                for x in 1..p {
                    r[(x * x % p) as usize] = true;
                }
                r
            });
            primes.push(FastPrime {
                p,
                plus: term(variant, p, e.a_p),
                minus: term(variant, p, -e.a_p),
                residues,
            });
        }
        Evaluator {
            primes,
            always_skipped,
            variant,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The sum for the twist by `d`; only the class of `d` modulo squares
    /// matters, so non-squarefree `d` are the caller's responsibility.
    pub fn eval(&self, d: i64) -> MnSum {
        let mut sum = 0.0;
        let mut skipped = self.always_skipped;
        for fp in &self.primes {
            let r = d.rem_euclid(fp.p as i64) as u64;
            if r == 0 {
                skipped += 1;
                continue;
            }
            let is_residue = match &fp.residues {
                Some(t) => t[r as usize],
                None => jacobi_u64(r as i64, fp.p) == 1,
            };
            sum += if is_residue { fp.plus } else { fp.minus };
        }
        MnSum { sum, skipped }
    }
}

/// Mestre–Nagao sum of the `d`-twist of `e` over the primes of `table`.
pub fn mn_sum(e: &RationalCurve, d: i64, table: &ApTable, variant: Variant) -> Result<MnSum> {
    if table.curve_id != curve_hash(e) {
        return domain("a_p table belongs to a different curve");
    }
    if !is_squarefree_i64(d) {
        return domain(format!("twist parameter d = {d} must be a nonzero squarefree integer"));
    }
    Ok(Evaluator::new(table, variant).eval(d))
}

/// Eligible `d` in `[lo, hi]` with the squarefree kernel used for the sum.
/// `d = 0` and `d = 1` never qualify.
pub fn candidates(lo: i64, hi: i64, filter: DFilter) -> Vec<(i64, i64)> {
    if lo > hi {
        return Vec::new();
    }
    let bound = lo.unsigned_abs().max(hi.unsigned_abs());
    let small = primes_up_to((bound as f64).sqrt() as u64 + 1);
    segment(lo, hi, &small, filter)
}

fn segment(lo: i64, hi: i64, small: &[u64], filter: DFilter) -> Vec<(i64, i64)> {
    let len = (hi - lo + 1) as usize;
    let mut sf = vec![true; len];
    for &p in small {
        let q = (p * p) as i64;
        if q > lo.abs().max(hi.abs()) {
            break;
        }
        let mut x = lo + (-lo).rem_euclid(q);
        while x <= hi {
            sf[(x - lo) as usize] = false;
            x += q;
        }
    }
    let is_sf = |d: i64| d >= lo && d <= hi && sf[(d - lo) as usize];
    let mut out = Vec::new();
    for (i, &ok) in sf.iter().enumerate() {
        let d = lo + i as i64;
        if d == 0 || d == 1 {
            continue;
        }
        match filter {
            DFilter::Squarefree => {
                if ok {
                    out.push((d, d));
                }
            }
            DFilter::Fundamental => {
                if ok && d.rem_euclid(4) == 1 {
                    out.push((d, d));
                } else if d % 4 == 0 {
                    let m = d / 4;
                    let m_sf = if m >= lo && m <= hi {
                        is_sf(m)
                    } else {
                        is_squarefree_i64(m)
                    };
                    if matches!(m.rem_euclid(4), 2 | 3) && m_sf {
                        out.push((d, m));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveOutcome {
    pub hits: Vec<SieveHit>,
    pub candidates: u64,
    pub chunks: u64,
    pub resumed_chunks: u64,
}

fn chunk_bounds(cfg: &SieveConfig, i: u64) -> (i64, i64) {
    let lo = cfg.d_min as i128 + (i as i128) * CHUNK as i128;
    let hi = (lo + CHUNK as i128 - 1).min(cfg.d_max as i128);
    (lo as i64, hi as i64)
}

fn run_chunk(cfg: &SieveConfig, ev: &Evaluator, small: &[u64], i: u64) -> (Vec<SieveHit>, u64) {
    let (lo, hi) = chunk_bounds(cfg, i);
    let cands = segment(lo, hi, small, cfg.d_filter);
    let mut hits: Vec<SieveHit> = cands
        .iter()
        .map(|&(d, kernel)| SieveHit {
            d,
            sum: ev.eval(kernel).sum,
        })
        .filter(|h| cfg.min_sum.is_none_or(|m| h.sum >= m))
        .collect();
    keep_top(&mut hits, cfg.top_k);
    (hits, cands.len() as u64)
}

const CHECKPOINT_MAGIC: &str = "# ellquad sieve checkpoint v1";

fn checkpoint_header(cfg: &SieveConfig, table: &ApTable) -> String {
    format!("{CHECKPOINT_MAGIC}\nconfig {}\ntable {}\n", cfg.echo(), table.digest())
}

fn format_chunk(i: u64, count: u64, hits: &[SieveHit]) -> String {
    let mut s = format!("chunk {i} {count}");
    for h in hits {
        s.push_str(&format!(" {}:{:016x}", h.d, h.sum.to_bits()));
    }
    s.push('\n');
    s
}

fn read_checkpoint(path: &Path, header: &str) -> Result<BTreeMap<u64, (Vec<SieveHit>, u64)>> {
    let mut done = BTreeMap::new();
    let Ok(text) = fs::read_to_string(path) else {
        return Ok(done);
    };
    if !text.starts_with(header) {
        return domain(format!(
            "checkpoint {} was written for a different configuration or table",
            path.display()
        ));
    }
    for (n, line) in text[header.len()..].split_inclusive('\n').enumerate() {
        let bad = |m: &str| Error::Parse {
            line: n + 4,
            msg: m.to_string(),
        };
        if !line.ends_with('\n') {
            // torn by an interrupted write
            log::warn!("dropping incomplete checkpoint line {}", n + 4);
            break;
        }
        let mut it = line.split_whitespace();
        if it.next() != Some("chunk") {
            return Err(bad("expected a chunk record"));
        }
        let i: u64 = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("chunk index"))?;
        let count: u64 = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("candidate count"))?;
        let mut hits = Vec::new();
        for tok in it {
            let (d, bits) = tok.split_once(':').ok_or_else(|| bad("hit"))?;
            let d = d.parse().map_err(|_| bad("hit d"))?;
            let bits = u64::from_str_radix(bits, 16).map_err(|_| bad("hit sum"))?;
            hits.push(SieveHit {
                d,
                sum: f64::from_bits(bits),
            });
        }
        done.insert(i, (hits, count));
    }
    Ok(done)
}

/// Runs the sieve, optionally recording finished chunks in `checkpoint`
/// and skipping those already recorded there.
pub fn run_sieve_with(cfg: &SieveConfig, table: &ApTable, checkpoint: Option<&Path>) -> Result<SieveOutcome> {
    cfg.validate()?;
    if table.curve_id != cfg.curve_id {
        return domain("a_p table belongs to a different curve than the configuration");
    }
    if table.pmax < cfg.pmax {
        return domain(format!("a_p table only reaches {}, need {}", table.pmax, cfg.pmax));
    }
    let mut sub = table.clone();
    sub.entries.retain(|e| e.p <= cfg.pmax);
    let ev = Evaluator::new(&sub, cfg.variant);
    let bound = cfg.d_min.unsigned_abs().max(cfg.d_max.unsigned_abs());
    let small = primes_up_to((bound as f64).sqrt() as u64 + 1);
    let span = (cfg.d_max as i128 - cfg.d_min as i128 + 1) as u64;
    let n_chunks = span.div_ceil(CHUNK);

    let header = checkpoint_header(cfg, table);
    let done = match checkpoint {
        Some(p) => read_checkpoint(p, &header)?,
        None => BTreeMap::new(),
    };
    let writer = match checkpoint {
        Some(p) => {
            // rewrite what was recovered so a torn tail is not appended to
            let mut text = header.clone();
            for (i, (h, c)) in &done {
                text.push_str(&format_chunk(*i, *c, h));
            }
            fs::write(p, text)?;
            let f = fs::OpenOptions::new().append(true).open(p)?;
            Some(Mutex::new(f))
        }
        None => None,
    };
    let todo: Vec<u64> = (0..n_chunks).filter(|i| !done.contains_key(i)).collect();
    let fresh: Vec<(u64, Vec<SieveHit>, u64)> = todo
        .par_iter()
        .map(|&i| {
            let (hits, count) = run_chunk(cfg, &ev, &small, i);
            if let Some(w) = &writer {
                let line = format_chunk(i, count, &hits);
                let mut f = w.lock().expect("checkpoint lock");
                f.write_all(line.as_bytes())?;
                f.flush()?;
            }
            Ok((i, hits, count))
        })
        .collect::<Result<_>>()?;

    let mut hits = Vec::new();
    let mut total = 0;
    for (h, c) in done.values() {
        hits.extend_from_slice(h);
        total += c;
    }
    for (_, h, c) in fresh {
        hits.extend(h);
        total += c;
    }
    keep_top(&mut hits, cfg.top_k);
    Ok(SieveOutcome {
        hits,
        candidates: total,
        chunks: n_chunks,
        resumed_chunks: done.len() as u64,
    })
}

pub fn run_sieve(cfg: &SieveConfig, table: &ApTable) -> Result<Vec<SieveHit>> {
    Ok(run_sieve_with(cfg, table, None)?.hits)
}

/// The reproducible text report: header lines, then `d<TAB>sum`.
pub fn format_report(cfg: &SieveConfig, table: &ApTable, out: &SieveOutcome) -> String {
    let mut s = format!(
        "# sieve {}\n# table sha256={}\n# candidates={}\n",
        cfg.echo(),
        table.digest(),
        out.candidates
    );
    for h in &out.hits {
        s.push_str(&format!("{}\t{:.12}\n", h.d, h.sum));
    }
    s
}
