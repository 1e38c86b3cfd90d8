//! Moving points between `E(K)`, `E(ℚ)` and the twist `E⁽ᵈ⁾(ℚ)` for
//! `K = ℚ(√d)`, and rank lower bounds assembled from certified points.
//!
//! Over `K` the twist is isomorphic to `E`: on the model
//! `y² = x³ + a2x² + a4x + a6` the point `(X, Y)` of
//! `Y² = X³ + d·a2X² + d²·a4X + d³·a6` becomes `(X/d, Y√d/d²)`. Every
//! `P ∈ E(K)` then splits as `2P = (P + σP) + (P − σP)` with the first
//! summand rational and the second anti-invariant, i.e. coming from the
//! twist.

use std::fmt;

use num_traits::Zero;

use crate::curve::{CurveId, CurvePoint, Isomorphism, KCurve, RationalCurve};
use crate::error::{domain, Error, Result};
use crate::exactnum::Rat;
use crate::field::{Field, Rationals};
use crate::heights::{HeightContext, Verdict};
use crate::quadfield::{QuadElem, QuadField};

/// The `K`-isomorphism between `E⁽ᵈ⁾` and `E`, with both curves kept.
#[derive(Clone, Debug)]
pub struct TwistMap {
    k: QuadField,
    base: RationalCurve,
    twist: RationalCurve,
    /// `E` over `K`
    ek: KCurve,
    /// the a1a3-free model of `E` over `K`
    fk: KCurve,
    iso: Isomorphism<QuadElem>,
}

impl TwistMap {
    /// `k` fixes `d`; `d = 1` gives the identity between `E` and itself.
    pub fn new(e: &RationalCurve, k: &QuadField) -> Result<Self> {
        let twist = e.quadratic_twist_i64(k.d())?;
        let ek = e.base_change(k);
        let sm = ek.to_a1a3_free()?;
        Ok(TwistMap {
            k: *k,
            base: e.clone(),
            twist,
            ek,
            fk: sm.curve,
            iso: sm.iso,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.k
    }

    pub fn base(&self) -> &RationalCurve {
        &self.base
    }

    pub fn twist(&self) -> &RationalCurve {
        &self.twist
    }

    /// `E` viewed over `K`; images of both maps live here.
    pub fn curve_k(&self) -> &KCurve {
        &self.ek
    }

    /// `E(ℚ) → E(K)`.
    pub fn lift(&self, p: &CurvePoint<Rat>) -> Result<CurvePoint<QuadElem>> {
        if !self.base.contains(p) {
            return Err(Error::NotOnCurve(format!("{p} is not on {}", self.base)));
        }
        Ok(self.base.lift_point(&self.ek, p))
    }

    /// `E⁽ᵈ⁾(ℚ) → E(K)`.
    pub fn to_k(&self, p: &CurvePoint<Rat>) -> Result<CurvePoint<QuadElem>> {
        if !self.twist.contains(p) {
            return domain(format!("{p} is not a point of the twist {}", self.twist));
        }
        let Some((x, y)) = p.xy() else {
            return Ok(self.ek.infinity());
        };
        let d = Rat::from_integer(self.k.d().into());
        let d2 = &d * &d;
        let nx = QuadElem::rational(x / &d);
        let ny = if self.k.is_rational_field() {
            QuadElem::rational(y / &d2)
        } else {
            QuadElem::new(Rat::zero(), y / &d2)
        };
        let q = self.fk.point(nx, ny)?;
        self.ek.unmap_point(&self.iso, &self.fk, &q)
    }

    /// `E(K) → E⁽ᵈ⁾(ℚ)` on anti-invariant points, inverse to [`TwistMap::to_k`].
    pub fn from_k(&self, p: &CurvePoint<QuadElem>) -> Result<CurvePoint<Rat>> {
        let q = self.ek.map_point(&self.iso, &self.fk, p)?;
        let Some((x, y)) = q.xy() else {
            return Ok(self.twist.infinity());
        };
        let coeff = if self.k.is_rational_field() {
            y.a.clone()
        } else {
            if !y.a.is_zero() {
                return domain(format!("{p} is not anti-invariant under conjugation"));
            }
            y.b.clone()
        };
        if !x.is_rational() {
            return domain(format!("{p} is not anti-invariant under conjugation"));
        }
        let d = Rat::from_integer(self.k.d().into());
        self.twist.point(&x.a * &d, coeff * &d * &d)
    }

    /// `Q₁ ⊕ Q₂` in `E(K)` for `Q₁ ∈ E(ℚ)`, `Q₂ ∈ E⁽ᵈ⁾(ℚ)`.
    pub fn combine(&self, q1: &CurvePoint<Rat>, q2: &CurvePoint<Rat>) -> Result<CurvePoint<QuadElem>> {
        self.ek.add(&self.lift(q1)?, &self.to_k(q2)?)
    }

    /// Splits `P ∈ E(K)` into `P + σP ∈ E(ℚ)` and the twist point of
    /// `P − σP`.
    pub fn descend(&self, p: &CurvePoint<QuadElem>) -> Result<Descent> {
        if !self.ek.contains(p) {
            return Err(Error::NotOnCurve(format!("{p} is not on {}", self.ek)));
        }
        let sp = self.ek.conjugate_point(p)?;
        let plus_k = self.ek.add(p, &sp)?;
        let plus = match plus_k.xy() {
            None => self.base.infinity(),
            Some((x, y)) if x.is_rational() && y.is_rational() => self.base.point(x.a.clone(), y.a.clone())?,
            Some(_) => return Err(Error::Internal(format!("P + σP = {plus_k} is not rational"))),
        };
        let minus_k = self.ek.sub(p, &sp)?;
        let minus = self
            .from_k(&minus_k)
            .map_err(|e| Error::Internal(format!("P − σP is not anti-invariant: {e}")))?;
        let rebuilt = self.combine(&plus, &minus)?;
        let defect = self.ek.sub(&self.ek.double(p), &rebuilt)?;
        if !self.ek.double(&defect).is_infinity() {
            return Err(Error::Internal(format!("descent defect {defect} is not 2-torsion")));
        }
        Ok(Descent { plus, minus, defect })
    }
}

/// The two components of a `K`-point together with the exact difference
/// `2P − (P₊ ⊕ image(P₋))`, always 2-torsion.
#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    pub plus: CurvePoint<Rat>,
    pub minus: CurvePoint<Rat>,
    pub defect: CurvePoint<QuadElem>,
}

/// Twist point `P` on `E⁽ᵈ⁾` carried to `E` over `ℚ(√d)`.
pub fn twist_point_to_k(e: &RationalCurve, k: &QuadField, p: &CurvePoint<Rat>) -> Result<CurvePoint<QuadElem>> {
    TwistMap::new(e, k)?.to_k(p)
}

/// [`TwistMap::descend`] for a curve given over `K`; refuses curves whose
/// coefficients are not all rational.
pub fn descend(e: &KCurve, p: &CurvePoint<QuadElem>) -> Result<(TwistMap, Descent)> {
    let Some(eq) = e.to_rational() else {
        return domain("curve is not defined over Q; the twist decomposition does not apply");
    };
    let tm = TwistMap::new(&eq, e.field())?;
    // the point lives on `e`, whose id differs from the base change only
    // if the coefficients do; re-home it to be safe
    let p = match p.xy() {
        None => tm.ek.infinity(),
        Some((x, y)) => tm.ek.point(x.clone(), y.clone())?,
    };
    let d = tm.descend(&p)?;
    Ok((tm, d))
}

/// Rank lower bounds for `E(ℚ)`, `E⁽ᵈ⁾(ℚ)` and `E(ℚ(√d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankLedger {
    pub curve_id: CurveId,
    pub field_d: i64,
    pub rank_lb_q_base: usize,
    pub rank_lb_q_twist: usize,
    pub rank_lb_k: usize,
    /// whether every bound is backed by a height certificate
    pub certified: bool,
    pub notes: Vec<String>,
}

impl RankLedger {
    /// Bookkeeping only, e.g. for ranks quoted without generators.
    pub fn uncertified(curve_id: CurveId, field_d: i64, base: usize, twist: usize, note: impl Into<String>) -> Self {
        RankLedger {
            curve_id,
            field_d,
            rank_lb_q_base: base,
            rank_lb_q_twist: twist,
            rank_lb_k: base + twist,
            certified: false,
            notes: vec![note.into()],
        }
    }
}

impl fmt::Display for RankLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} rank(E(Q))>={} rank(E^d(Q))>={} rank(E(K))>={} {}",
            self.field_d,
            self.rank_lb_q_base,
            self.rank_lb_q_twist,
            self.rank_lb_k,
            if self.certified { "certified" } else { "uncertified" }
        )?;
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

fn require_independent(ctx: &HeightContext, pts: &[CurvePoint<QuadElem>], what: &str) -> Result<String> {
    let rep = ctx.independence(pts)?;
    match rep.verdict {
        Verdict::Independent => Ok(format!(
            "{what}: {} points independent, regulator {}",
            pts.len(),
            rep.gram.det.to_decimal(12)
        )),
        Verdict::Dependent(c) => domain(format!("{what}: points are dependent, relation {c:?}")),
        Verdict::Indeterminate(why) => Err(Error::Indeterminate(format!("{what}: {why}"))),
    }
}

/// Certifies each set over `ℚ`, then the union mapped into `E(K)`.
pub fn ledger_from_points(
    tm: &TwistMap,
    pts_base: &[CurvePoint<Rat>],
    pts_twist: &[CurvePoint<Rat>],
) -> Result<RankLedger> {
    let q = QuadField::rationals();
    let mut notes = Vec::new();
    for (curve, pts, what) in [(&tm.base, pts_base, "E(Q)"), (&tm.twist, pts_twist, "E^d(Q)")] {
        if pts.is_empty() {
            continue;
        }
        let cq = curve.base_change(&q);
        let lifted: Vec<_> = pts.iter().map(|p| curve.lift_point(&cq, p)).collect();
        for p in pts {
            if !curve.contains(p) {
                return Err(Error::NotOnCurve(format!("{p} is not on {curve}")));
            }
        }
        notes.push(require_independent(&HeightContext::new(&cq)?, &lifted, what)?);
    }
    let mut all = Vec::with_capacity(pts_base.len() + pts_twist.len());
    for p in pts_base {
        all.push(tm.lift(p)?);
    }
    for p in pts_twist {
        all.push(tm.to_k(p)?);
    }
    if !all.is_empty() {
        notes.push(require_independent(&HeightContext::new(&tm.ek)?, &all, "E(K)")?);
    }
    Ok(RankLedger {
        curve_id: tm.base.id(),
        field_d: tm.k.d(),
        rank_lb_q_base: pts_base.len(),
        rank_lb_q_twist: pts_twist.len(),
        rank_lb_k: all.len(),
        certified: true,
        notes,
    })
}

/// Small search for points with integral `x` in `[-bound, bound]`.
pub fn small_points(e: &RationalCurve, bound: i64) -> Vec<CurvePoint<Rat>> {
    let f = Rationals;
    let mut out = Vec::new();
    for x in -bound..=bound {
        let x = f.from_i64(x);
        // y² + (a1x + a3)y − rhs = 0
        let (p, q) = e.y_quadratic(&x);
        for y in crate::quadfield::rational_roots(&[q, p, f.one()]).unwrap_or_default() {
            if let Ok(pt) = e.point(x.clone(), y) {
                out.push(pt);
            }
        }
    }
    out
}
