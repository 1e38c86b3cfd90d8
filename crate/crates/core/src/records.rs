//! The record corpus and the claim-by-claim verification report.
//!
//! A corpus file holds one record per line as `key=value` pairs:
//!
//! ```text
//! id=z15-7 d=-7 curve=[15-2*s,-14+26*s,-14+26*s,0,0] torsion=15 rank=1 points=(-98+6*s;1064+136*s) source="..."
//! omit id=... reason="..."
//! ```
//!
//! Optional keys: `rank_q`, `rank_twist` (ranks of `E(ℚ)` and `E⁽ᵈ⁾(ℚ)`
//! quoted for curves over ℚ), `conditional_rank` (a bound resting on the
//! Parity Conjecture), `conditional=true` (the main rank claim itself is
//! conditional) and `j`. Points are `(x;y)` or `(x;?)`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::curve::{parse_curve, CurvePoint, KCurve};
use crate::error::{Error, Result};
use crate::exactnum::{is_squarefree_i64, parse_rat, Rat};
use crate::field::Field;
use crate::heights::{HeightContext, HeightValue, PrecisionPolicy, Verdict, DEFAULT_TOLERANCE};
use crate::quadfield::{QuadElem, QuadField};
use crate::torsion::{torsion_over_k, TorsionGroup};
use crate::twistdecomp::RankLedger;

/// The corpus shipped with the crate.
pub const BUILTIN_CORPUS: &str = include_str!("../data/corpus.rec");

#[derive(Clone, Debug, PartialEq)]
pub enum PointSpec {
    Full(QuadElem, QuadElem),
    XOnly(QuadElem),
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::Full(x, y) => write!(f, "({x};{y})"),
            PointSpec::XOnly(x) => write!(f, "({x};?)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurveRecord {
    pub id: String,
    pub field_d: i64,
    pub coefficients: [String; 5],
    pub curve: KCurve,
    pub claimed_torsion: TorsionGroup,
    pub claimed_rank_lb: u32,
    pub conditional: bool,
    pub conditional_rank_lb: Option<u32>,
    pub rank_q: Option<u32>,
    pub rank_twist: Option<u32>,
    pub claimed_j: Option<Rat>,
    pub points: Vec<PointSpec>,
    pub source: String,
    pub line: usize,
}

/// A claim listed in the corpus but not verifiable from the data given.
#[derive(Clone, Debug, PartialEq)]
pub struct Omission {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub records: Vec<CurveRecord>,
    pub omitted: Vec<Omission>,
}

fn tokenize(line: &str, n: usize) -> Result<Vec<(String, String)>> {
    let bad = |m: String| Error::Parse { line: n, msg: m };
    let mut out = Vec::new();
    let mut rest = line.trim();
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| bad(format!("expected key=value near '{rest}'")))?;
        let key = rest[..eq].trim().to_string();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(bad(format!("malformed key '{key}'")));
        }
        let after = &rest[eq + 1..];
        let (value, tail) = if let Some(q) = after.strip_prefix('"') {
            let end = q
                .find('"')
                .ok_or_else(|| bad(format!("unterminated quote in '{key}'")))?;
            (q[..end].to_string(), &q[end + 1..])
        } else {
            let end = after.find(char::is_whitespace).unwrap_or(after.len());
            (after[..end].to_string(), &after[end..])
        };
        out.push((key, value));
        rest = tail.trim_start();
    }
    Ok(out)
}

/// One point written `(x;y)`, or `(x;?)` to take the smaller root for y.
/// The parentheses may be left off.
pub fn parse_point(e: &KCurve, text: &str) -> Result<CurvePoint<QuadElem>> {
    let t = text.trim();
    let t = if t.starts_with('(') {
        t.to_string()
    } else {
        format!("({t})")
    };
    let specs = parse_points(&t, e.field(), 0)?;
    let [spec] = specs.as_slice() else {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected one point, got '{text}'"),
        });
    };
    match spec {
        PointSpec::Full(x, y) => e.point(x.clone(), y.clone()),
        PointSpec::XOnly(x) => recover_y_on(e, x),
    }
}

fn parse_points(text: &str, k: &QuadField, n: usize) -> Result<Vec<PointSpec>> {
    let bad = |m: String| Error::Parse { line: n, msg: m };
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')').map(|e| (&r[..e], &r[e + 1..])))
            .ok_or_else(|| bad(format!("point must look like (x;y) near '{rest}'")))?;
        let (body, tail) = inner;
        let (x, y) = body
            .split_once(';')
            .ok_or_else(|| bad(format!("point '({body})' needs a ';' between x and y")))?;
        let x = k.parse(x).map_err(|e| bad(format!("x-coordinate '{x}': {e}")))?;
        out.push(if y.trim() == "?" {
            PointSpec::XOnly(x)
        } else {
            let y = k.parse(y).map_err(|e| bad(format!("y-coordinate '{y}': {e}")))?;
            PointSpec::Full(x, y)
        });
        rest = tail.trim_start().strip_prefix(',').unwrap_or(tail).trim_start();
    }
    Ok(out)
}

fn parse_record(fields: Vec<(String, String)>, n: usize) -> Result<CurveRecord> {
    let bad = |m: String| Error::Parse { line: n, msg: m };
    let mut get = std::collections::BTreeMap::new();
    for (k, v) in fields {
        if get.insert(k.clone(), v).is_some() {
            return Err(bad(format!("key '{k}' given twice")));
        }
    }
    const KNOWN: [&str; 12] = [
        "id",
        "d",
        "curve",
        "torsion",
        "rank",
        "conditional",
        "conditional_rank",
        "rank_q",
        "rank_twist",
        "j",
        "points",
        "source",
    ];
    if let Some(k) = get.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(bad(format!("unknown key '{k}'")));
    }
    let req = |k: &str| get.get(k).cloned().ok_or_else(|| bad(format!("missing '{k}'")));
    let int = |k: &str, v: &str| {
        v.parse::<u32>()
            .map_err(|_| bad(format!("'{k}' must be a non-negative integer")))
    };
    let id = req("id")?;
    let field_d: i64 = req("d")?.parse().map_err(|_| bad("'d' must be an integer".into()))?;
    if !is_squarefree_i64(field_d) {
        return Err(bad(format!("d = {field_d} is not squarefree")));
    }
    let k = QuadField::new(field_d).map_err(|e| bad(e.to_string()))?;
    let curve_text = req("curve")?;
    let curve = parse_curve(&curve_text, &k).map_err(|e| bad(format!("curve: {e}")))?;
    let coefficients: [String; 5] = curve_text
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|s| s.trim().to_string())
        .collect::<Vec<_>>()
        .try_into()
        .expect("parse_curve checked five coefficients");
    let claimed_torsion: TorsionGroup = req("torsion")?.parse().map_err(|e: Error| bad(e.to_string()))?;
    if !claimed_torsion.allowed_over(field_d) {
        return Err(bad(format!(
            "torsion {claimed_torsion} cannot occur over Q(sqrt({field_d}))"
        )));
    }
    let claimed_rank_lb = int("rank", &req("rank")?)?;
    let opt = |key: &str| get.get(key).map(|v| int(key, v)).transpose();
    let conditional = match get.get("conditional").map(String::as_str) {
        None | Some("false") => false,
        Some("true") => true,
        Some(v) => return Err(bad(format!("conditional must be true or false, got '{v}'"))),
    };
    let claimed_j = get
        .get("j")
        .map(|v| parse_rat(v).map_err(|e| bad(format!("j: {e}"))))
        .transpose()?;
    let points = match get.get("points") {
        Some(p) => parse_points(p, &k, n)?,
        None => Vec::new(),
    };
    for p in &points {
        if let PointSpec::Full(x, y) = p {
            if !curve.is_on_curve(x, y) {
                return Err(Error::NotOnCurve(format!("record '{id}' (line {n}): point {p}")));
            }
        }
    }
    Ok(CurveRecord {
        conditional_rank_lb: opt("conditional_rank")?,
        rank_q: opt("rank_q")?,
        rank_twist: opt("rank_twist")?,
        source: get.get("source").cloned().unwrap_or_default(),
        id,
        field_d,
        coefficients,
        curve,
        claimed_torsion,
        claimed_rank_lb,
        conditional,
        claimed_j,
        points,
        line: n,
    })
}

/// Parses corpus text; ids must be unique.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let id = if let Some(rest) = line.strip_prefix("omit ") {
            let f: std::collections::HashMap<_, _> = tokenize(rest, n)?.into_iter().collect();
            let id = f.get("id").cloned().ok_or(Error::Parse {
                line: n,
                msg: "omit needs an id".into(),
            })?;
            corpus.omitted.push(Omission {
                id: id.clone(),
                reason: f.get("reason").cloned().unwrap_or_default(),
            });
            id
        } else {
            let r = parse_record(tokenize(line, n)?, n)?;
            let id = r.id.clone();
            corpus.records.push(r);
            id
        };
        if !seen.insert(id.clone()) {
            return Err(Error::Parse {
                line: n,
                msg: format!("duplicate record id '{id}'"),
            });
        }
    }
    Ok(corpus)
}

pub fn ingest(path: &Path) -> Result<Corpus> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// The point with abscissa `x`, taking the smaller root when there are two.
pub fn recover_y(record: &CurveRecord, x: &QuadElem) -> Result<CurvePoint<QuadElem>> {
    recover_y_on(&record.curve, x)
}

pub fn recover_y_on(e: &KCurve, x: &QuadElem) -> Result<CurvePoint<QuadElem>> {
    let (p, q) = e.y_quadratic(x);
    let roots = e.field().solve_quadratic(&p, &q);
    match roots.into_iter().next() {
        Some(y) => e.point(x.clone(), y),
        None => Err(Error::NotOnCurve(format!("x-coordinate {x} not on curve over K"))),
    }
}

// ---------------------------------------------------------------------------
// verification

#[derive(Clone, Debug, PartialEq)]
pub enum ClaimVerdict {
    /// with the certificate that backs it
    Verified(String),
    Failed(String),
    Skipped(String),
}

impl ClaimVerdict {
    fn tag(&self) -> &'static str {
        match self {
            ClaimVerdict::Verified(_) => "verified",
            ClaimVerdict::Failed(_) => "failed",
            ClaimVerdict::Skipped(_) => "skipped",
        }
    }

    fn detail(&self) -> &str {
        match self {
            ClaimVerdict::Verified(s) | ClaimVerdict::Failed(s) | ClaimVerdict::Skipped(s) => s,
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, ClaimVerdict::Verified(_))
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, ClaimVerdict::Skipped(_))
    }
}

impl fmt::Display for ClaimVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag(), self.detail())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointOrder {
    Infinite,
    Finite(u64),
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub spec: PointSpec,
    /// the point actually checked, with recovered `y` for x-only specs
    pub point: Option<CurvePoint<QuadElem>>,
    pub on_curve: ClaimVerdict,
    pub order: Option<PointOrder>,
    pub height: Option<HeightValue>,
    pub non_torsion: ClaimVerdict,
}

#[derive(Clone, Debug)]
pub struct RecordVerdict {
    pub id: String,
    pub field_d: i64,
    pub torsion: ClaimVerdict,
    pub j: Option<ClaimVerdict>,
    pub points: Vec<PointReport>,
    pub rank: ClaimVerdict,
    /// certified lower bound from the printed points
    pub certified_rank: u32,
    pub conditional: Option<ClaimVerdict>,
    pub ledger: Option<RankLedger>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub only: Option<String>,
    pub policy: PrecisionPolicy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub verified: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Counts {
    fn add(&mut self, v: &ClaimVerdict) {
        match v {
            ClaimVerdict::Verified(_) => self.verified += 1,
            ClaimVerdict::Failed(_) => self.failed += 1,
            ClaimVerdict::Skipped(_) => self.skipped += 1,
        }
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verified={} failed={} skipped={}",
            self.verified, self.failed, self.skipped
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub torsion: Counts,
    pub j: Counts,
    pub points: Counts,
    pub rank: Counts,
    pub conditional: Counts,
    pub omitted: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RecordReport {
    pub records: Vec<RecordVerdict>,
    pub omitted: Vec<Omission>,
}

impl RecordReport {
    pub fn get(&self, id: &str) -> Option<&RecordVerdict> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary {
            omitted: self.omitted.len(),
            ..Summary::default()
        };
        for r in &self.records {
            s.torsion.add(&r.torsion);
            if let Some(j) = &r.j {
                s.j.add(j);
            }
            for p in &r.points {
                s.points.add(&p.non_torsion);
            }
            s.rank.add(&r.rank);
            if let Some(c) = &r.conditional {
                s.conditional.add(c);
            }
        }
        s
    }

    /// `true` when nothing failed.
    pub fn all_passed(&self) -> bool {
        let s = self.summary();
        s.torsion.failed + s.j.failed + s.points.failed + s.rank.failed == 0
    }

    pub fn machine_summary(&self) -> String {
        let s = self.summary();
        format!(
            "summary.torsion {}\nsummary.j {}\nsummary.points {}\nsummary.rank {}\nsummary.conditional {}\nsummary.omitted {}\n",
            s.torsion, s.j, s.points, s.rank, s.conditional, s.omitted
        )
    }
}

impl fmt::Display for RecordReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "record {} (d = {})", r.id, r.field_d)?;
            writeln!(f, "  torsion: {}", r.torsion)?;
            if let Some(j) = &r.j {
                writeln!(f, "  j-invariant: {j}")?;
            }
            for (i, p) in r.points.iter().enumerate() {
                writeln!(f, "  point {}: {}", i + 1, p.spec)?;
                if let (Some(pt), PointSpec::XOnly(_)) = (&p.point, &p.spec) {
                    writeln!(f, "    recovered: {pt}")?;
                }
                writeln!(f, "    on curve: {}", p.on_curve)?;
                if let Some(h) = &p.height {
                    writeln!(f, "    height: {h}")?;
                }
                writeln!(f, "    infinite order: {}", p.non_torsion)?;
            }
            writeln!(f, "  rank: {}", r.rank)?;
            if let Some(c) = &r.conditional {
                writeln!(f, "  conditional rank: {c}")?;
            }
            if let Some(l) = &r.ledger {
                writeln!(f, "  ledger: {l}")?;
            }
        }
        for o in &self.omitted {
            writeln!(f, "omitted {}: skipped: not desk-verifiable ({})", o.id, o.reason)?;
        }
        writeln!(f, "---")?;
        f.write_str(&self.machine_summary())
    }
}

fn verify_torsion(r: &CurveRecord) -> ClaimVerdict {
    match torsion_over_k(&r.curve) {
        Ok(t) if t.group == r.claimed_torsion => {
            let gens: Vec<String> = t.generators.iter().map(|g| g.to_string()).collect();
            ClaimVerdict::Verified(format!(
                "E(K)_tors = {} with generators {}; order bound {}",
                t.group,
                gens.join(", "),
                t.bound
            ))
        }
        Ok(t) => ClaimVerdict::Failed(format!("computed {} but {} was claimed", t.group, r.claimed_torsion)),
        Err(e) => ClaimVerdict::Failed(format!("torsion computation failed: {e}")),
    }
}

fn verify_point(ctx: &HeightContext, spec: &PointSpec) -> PointReport {
    let e = ctx.curve();
    let pt = match spec {
        PointSpec::Full(x, y) => e.point(x.clone(), y.clone()),
        PointSpec::XOnly(x) => recover_y_on(e, x),
    };
    let pt = match pt {
        Ok(p) => p,
        Err(err) => {
            return PointReport {
                spec: spec.clone(),
                point: None,
                on_curve: ClaimVerdict::Failed(err.to_string()),
                order: None,
                height: None,
                non_torsion: ClaimVerdict::Failed("no point to check".into()),
            }
        }
    };
    let on_curve = ClaimVerdict::Verified("curve equation holds exactly".into());
    if ctx.is_torsion(&pt) {
        let n = e.order_up_to(&pt, 64).unwrap_or(0);
        return PointReport {
            spec: spec.clone(),
            point: Some(pt),
            on_curve,
            order: Some(PointOrder::Finite(n)),
            height: None,
            non_torsion: ClaimVerdict::Failed(format!("point has finite order {n}")),
        };
    }
    let h = ctx.canonical_height(&pt, DEFAULT_TOLERANCE);
    let non_torsion = match &h {
        Ok(h) if h.is_certainly_positive() => ClaimVerdict::Verified(format!(
            "B*P != O for the torsion order bound B, and height {} exceeds its error {:.1e}",
            h.to_decimal(20),
            h.error_bound()
        )),
        Ok(h) => ClaimVerdict::Verified(format!(
            "B*P != O for the torsion order bound B (height {} not separated from 0 at this precision)",
            h.to_decimal(20)
        )),
        Err(e) => ClaimVerdict::Verified(format!("B*P != O for the torsion order bound B (height failed: {e})")),
    };
    PointReport {
        spec: spec.clone(),
        point: Some(pt),
        on_curve,
        order: Some(PointOrder::Infinite),
        height: h.ok(),
        non_torsion,
    }
}

fn verify_rank(ctx: &HeightContext, r: &CurveRecord, pts: &[PointReport]) -> (ClaimVerdict, u32) {
    let usable: Vec<CurvePoint<QuadElem>> = pts
        .iter()
        .filter(|p| p.order == Some(PointOrder::Infinite))
        .filter_map(|p| p.point.clone())
        .collect();
    if r.conditional {
        return (
            ClaimVerdict::Skipped("not desk-verifiable: claim is conditional on the Parity Conjecture".into()),
            0,
        );
    }
    if r.points.is_empty() {
        return (
            ClaimVerdict::Skipped(format!(
                "not desk-verifiable: rank >= {} rests on generators that are not printed",
                r.claimed_rank_lb
            )),
            0,
        );
    }
    if usable.len() < r.points.len() {
        return (
            ClaimVerdict::Failed("some printed points are not of infinite order".into()),
            0,
        );
    }
    let rep = match ctx.independence(&usable) {
        Ok(rep) => rep,
        Err(e) => return (ClaimVerdict::Failed(format!("independence check failed: {e}")), 0),
    };
    match rep.verdict {
        Verdict::Independent => {
            let n = usable.len() as u32;
            let cert = format!(
                "{n} points independent: regulator {} +/- {:.1e} at {} bits",
                rep.gram.det.to_decimal(20),
                rep.gram.det.radius_f64(),
                rep.bits
            );
            if n >= r.claimed_rank_lb {
                (
                    ClaimVerdict::Verified(format!("rank >= {}; {cert}", r.claimed_rank_lb)),
                    n,
                )
            } else {
                (
                    ClaimVerdict::Skipped(format!(
                        "not desk-verifiable: rank >= {} needs generators that are not printed; certified rank >= {n} ({cert})",
                        r.claimed_rank_lb
                    )),
                    n,
                )
            }
        }
        Verdict::Dependent(c) => (ClaimVerdict::Failed(format!("points are dependent: relation {c:?}")), 0),
        Verdict::Indeterminate(why) => (ClaimVerdict::Failed(format!("independence indeterminate: {why}")), 0),
    }
}

fn verify_record(r: &CurveRecord, opts: &VerifyOptions) -> RecordVerdict {
    let torsion = verify_torsion(r);
    let j = r.claimed_j.as_ref().map(|j| {
        let actual = r.curve.j_invariant();
        let k = r.curve.field();
        if *actual == k.rat(j.clone()) {
            ClaimVerdict::Verified(format!("j = {}", k.format(actual)))
        } else {
            ClaimVerdict::Failed(format!("j = {} but {j} was claimed", k.format(actual)))
        }
    });
    let (points, rank, certified_rank) = match HeightContext::with_policy(&r.curve, opts.policy) {
        Ok(ctx) => {
            let points: Vec<PointReport> = r.points.iter().map(|s| verify_point(&ctx, s)).collect();
            let (rank, n) = verify_rank(&ctx, r, &points);
            (points, rank, n)
        }
        Err(e) => (Vec::new(), ClaimVerdict::Failed(format!("height setup failed: {e}")), 0),
    };
    let conditional = r.conditional_rank_lb.map(|c| {
        ClaimVerdict::Skipped(format!(
            "not desk-verifiable: rank >= {c} is conditional on the Parity Conjecture"
        ))
    });
    let ledger = match (r.rank_q, r.rank_twist) {
        (None, None) => None,
        (a, b) => {
            let (a, b) = (a.unwrap_or(0) as usize, b.unwrap_or(0) as usize);
            let note = if a + b == r.claimed_rank_lb as usize {
                "quoted ranks over Q add up to the claim".to_string()
            } else {
                format!(
                    "quoted ranks over Q add up to {} instead of {}",
                    a + b,
                    r.claimed_rank_lb
                )
            };
            Some(RankLedger::uncertified(r.curve.id(), r.field_d, a, b, note))
        }
    };
    RecordVerdict {
        id: r.id.clone(),
        field_d: r.field_d,
        torsion,
        j,
        points,
        rank,
        certified_rank,
        conditional,
        ledger,
    }
}

/// Verifies every record (or the one named in `opts.only`), in parallel,
/// keeping corpus order.
pub fn verify(corpus: &Corpus, opts: &VerifyOptions) -> Result<RecordReport> {
    let chosen: Vec<&CurveRecord> = corpus
        .records
        .iter()
        .filter(|r| opts.only.as_ref().is_none_or(|id| &r.id == id))
        .collect();
    if let Some(id) = &opts.only {
        if chosen.is_empty() && !corpus.omitted.iter().any(|o| &o.id == id) {
            return Err(Error::Domain(format!("no record with id '{id}'")));
        }
    }
    let records = chosen.par_iter().map(|r| verify_record(r, opts)).collect();
    let omitted = corpus
        .omitted
        .iter()
        .filter(|o| opts.only.as_ref().is_none_or(|id| &o.id == id))
        .cloned()
        .collect();
    Ok(RecordReport { records, omitted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        let c = parse_corpus("").unwrap();
        assert!(c.records.is_empty() && c.omitted.is_empty());
        let c = parse_corpus("# only a comment\n\n").unwrap();
        assert!(c.records.is_empty());
    }

    #[test]
    fn builtin_corpus_ingests() {
        let c = parse_corpus(BUILTIN_CORPUS).unwrap();
        assert_eq!(c.records.len(), 22);
        assert_eq!(c.omitted.len(), 3);
        let r = c.records.iter().find(|r| r.id == "z15-7").unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(matches!(r.points[0], PointSpec::Full(..)));
    }

    #[test]
    fn ingest_errors() {
        let good = "id=a d=-7 curve=[15-2*s,-14+26*s,-14+26*s,0,0] torsion=15 rank=1 points=(-98+6*s;1064+136*s)";
        assert_eq!(parse_corpus(good).unwrap().records.len(), 1);
        let corrupt = good.replace("1064+136*s", "1065+136*s");
        match parse_corpus(&corrupt) {
            Err(Error::NotOnCurve(m)) => assert!(m.contains("(-98+6*s;1065+136*s)"), "{m}"),
            other => panic!("{other:?}"),
        }
        let dup = format!("{good}\n{good}");
        assert!(matches!(parse_corpus(&dup), Err(Error::Parse { line: 2, .. })));
        let bad_torsion = good.replace("torsion=15", "torsion=17");
        assert!(matches!(parse_corpus(&bad_torsion), Err(Error::Parse { line: 1, .. })));
        let z33 = "id=b d=5 curve=[0,0,1,0,0] torsion=3x3 rank=0";
        assert!(parse_corpus(z33).is_err());
        assert!(matches!(
            parse_corpus("\n\nid=c d=4 curve=[0,0,0,1,1] torsion=1 rank=0"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_corpus("id=c d=5 curve=[0,0,0,1,1] torsion=1 rank=0 colour=red").is_err());
    }

    #[test]
    fn y_recovery() {
        // y² + y = x³ at x = 0 has y ∈ {0, −1}; the smaller root is kept,
        // as for torsion generators
        let k = QuadField::rationals();
        let e = parse_curve("[0,0,1,0,0]", &k).unwrap();
        let p = recover_y_on(&e, &k.zero()).unwrap();
        assert_eq!(p.y(), Some(&k.from_i64(-1)));
        // 2-torsion: the double root
        let e = parse_curve("[0,0,0,-1,0]", &k).unwrap();
        let p = recover_y_on(&e, &k.one()).unwrap();
        assert_eq!(p.y(), Some(&k.zero()));
        assert!(recover_y_on(&e, &k.from_i64(2)).is_err());
    }

    #[test]
    fn x_only_points_over_265() {
        let c = parse_corpus(BUILTIN_CORPUS).unwrap();
        let r = c.records.iter().find(|r| r.id == "z14-265").unwrap();
        for s in &r.points {
            let PointSpec::XOnly(x) = s else { panic!() };
            let p = recover_y(r, x).unwrap();
            assert!(r.curve.contains(&p));
        }
    }
}
