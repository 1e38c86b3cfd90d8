//! Long Weierstrass models over any [`Field`], their invariants, the group
//! law, changes of coordinates, quadratic twists and Tate normal forms.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::exactnum::{squarefree_decompose, Rat};
use crate::field::{Field, Rationals};
use crate::quadfield::{QuadElem, QuadField};

/// Identity of a curve, used to reject cross-curve arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId(pub u64);

#[derive(Clone, Debug)]
pub struct Invariants<E> {
    pub b2: E,
    pub b4: E,
    pub b6: E,
    pub b8: E,
    pub c4: E,
    pub c6: E,
    pub disc: E,
    pub j: E,
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`, nonsingular.
#[derive(Clone, Debug)]
pub struct Curve<F: Field> {
    field: F,
    a: [F::Elem; 5],
    inv: Invariants<F::Elem>,
    id: CurveId,
}

impl<F: Field> PartialEq for Curve<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.a == other.a
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoint<E> {
    curve: CurveId,
    xy: Option<(E, E)>,
}

impl<E> CurvePoint<E> {
    pub fn is_infinity(&self) -> bool {
        self.xy.is_none()
    }

    pub fn xy(&self) -> Option<(&E, &E)> {
        self.xy.as_ref().map(|(x, y)| (x, y))
    }

    pub fn x(&self) -> Option<&E> {
        self.xy.as_ref().map(|(x, _)| x)
    }

    pub fn y(&self) -> Option<&E> {
        self.xy.as_ref().map(|(_, y)| y)
    }

    pub fn curve_id(&self) -> CurveId {
        self.curve
    }
}

impl<E: Ord> CurvePoint<E> {
    /// Ordering used for canonical representatives: infinity first, then
    /// lexicographic on (x, y).
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.xy, &other.xy) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, _) => std::cmp::Ordering::Less,
            (_, None) => std::cmp::Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(b),
        }
    }
}

impl<E: fmt::Display> fmt::Display for CurvePoint<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.xy {
            None => write!(f, "O"),
            Some((x, y)) => write!(f, "({x};{y})"),
        }
    }
}

/// Change of variables `x = u²x' + r`, `y = u³y' + s·u²x' + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isomorphism<E> {
    pub u: E,
    pub r: E,
    pub s: E,
    pub t: E,
}

/// A model `y² = x³ + Ax + B` together with the coordinate change from the
/// original curve.
#[derive(Clone, Debug)]
pub struct ShortModel<F: Field> {
    pub curve: Curve<F>,
    pub iso: Isomorphism<F::Elem>,
}

impl<F: Field> Curve<F> {
    /// Builds a curve from `[a1, a2, a3, a4, a6]`; fails if singular.
    pub fn new(field: F, a: [F::Elem; 5]) -> Result<Self> {
        let inv = compute_invariants(&field, &a);
        if field.is_zero(&inv.disc) {
            return Err(Error::Singular);
        }
        let mut h = DefaultHasher::new();
        format!("{field:?}").hash(&mut h);
        a.hash(&mut h);
        Ok(Curve {
            field,
            a,
            inv,
            id: CurveId(h.finish()),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem; 5] {
        &self.a
    }

    pub fn a1(&self) -> &F::Elem {
        &self.a[0]
    }
    pub fn a2(&self) -> &F::Elem {
        &self.a[1]
    }
    pub fn a3(&self) -> &F::Elem {
        &self.a[2]
    }
    pub fn a4(&self) -> &F::Elem {
        &self.a[3]
    }
    pub fn a6(&self) -> &F::Elem {
        &self.a[4]
    }

    pub fn invariants(&self) -> &Invariants<F::Elem> {
        &self.inv
    }

    pub fn discriminant(&self) -> &F::Elem {
        &self.inv.disc
    }

    pub fn j_invariant(&self) -> &F::Elem {
        &self.inv.j
    }

    pub fn id(&self) -> CurveId {
        self.id
    }

    pub fn is_short(&self) -> bool {
        let f = &self.field;
        f.is_zero(&self.a[0]) && f.is_zero(&self.a[1]) && f.is_zero(&self.a[2])
    }

    pub fn infinity(&self) -> CurvePoint<F::Elem> {
        CurvePoint {
            curve: self.id,
            xy: None,
        }
    }

    pub fn is_on_curve(&self, x: &F::Elem, y: &F::Elem) -> bool {
        let f = &self.field;
        f.is_zero(&self.equation(x, y))
    }

    /// Left side minus right side of the Weierstrass equation.
    pub fn equation(&self, x: &F::Elem, y: &F::Elem) -> F::Elem {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = f.mul(y, &f.add(&f.add(y, &f.mul(a1, x)), a3));
        let rhs = f.add(&f.mul(x, &f.add(&f.mul(x, &f.add(x, a2)), a4)), a6);
        f.sub(&lhs, &rhs)
    }

    /// Checked constructor for an affine point.
    pub fn point(&self, x: F::Elem, y: F::Elem) -> Result<CurvePoint<F::Elem>> {
        if !self.is_on_curve(&x, &y) {
            return Err(Error::NotOnCurve(format!(
                "({};{})",
                self.field.format(&x),
                self.field.format(&y)
            )));
        }
        Ok(CurvePoint {
            curve: self.id,
            xy: Some((x, y)),
        })
    }

    pub(crate) fn point_unchecked(&self, x: F::Elem, y: F::Elem) -> CurvePoint<F::Elem> {
        CurvePoint {
            curve: self.id,
            xy: Some((x, y)),
        }
    }

    fn check(&self, p: &CurvePoint<F::Elem>) -> Result<()> {
        if p.curve != self.id {
            return domain("point belongs to a different curve");
        }
        Ok(())
    }

    pub fn contains(&self, p: &CurvePoint<F::Elem>) -> bool {
        p.curve == self.id && p.xy.as_ref().is_none_or(|(x, y)| self.is_on_curve(x, y))
    }

    /// The y-quadratic `y² + (a1x + a3)y − (x³ + a2x² + a4x + a6)` as (p, q).
    pub fn y_quadratic(&self, x: &F::Elem) -> (F::Elem, F::Elem) {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let p = f.add(&f.mul(a1, x), a3);
        let rhs = f.add(&f.mul(x, &f.add(&f.mul(x, &f.add(x, a2)), a4)), a6);
        (p, f.neg(&rhs))
    }

    pub fn neg(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let f = &self.field;
        match &p.xy {
            None => p.clone(),
            Some((x, y)) => {
                let ny = f.sub(&f.neg(y), &f.add(&f.mul(&self.a[0], x), &self.a[2]));
                self.point_unchecked(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn sub(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.check(q)?;
        self.add(p, &self.neg(q))
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let f = &self.field;
        let [a1, a2, a3, a4, _a6] = &self.a;
        let (x1, y1) = match &p.xy {
            None => return q.clone(),
            Some(c) => c,
        };
        let (x2, y2) = match &q.xy {
            None => return p.clone(),
            Some(c) => c,
        };
        let lambda = if x1 == x2 {
            let s = f.add(&f.add(&f.add(y1, y2), &f.mul(a1, x2)), a3);
            if f.is_zero(&s) {
                return self.infinity();
            }
            let num = f.sub(
                &f.add(&f.add(&f.scale(3, &f.mul(x1, x1)), &f.scale(2, &f.mul(a2, x1))), a4),
                &f.mul(a1, y1),
            );
            let den = f.add(&f.add(&f.scale(2, y1), &f.mul(a1, x1)), a3);
            f.div(&num, &den).expect("nonzero tangent denominator")
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("distinct x")
        };
        let nu = f.sub(y1, &f.mul(&lambda, x1));
        let x3 = f.sub(
            &f.sub(&f.sub(&f.add(&f.mul(&lambda, &lambda), &f.mul(a1, &lambda)), a2), x1),
            x2,
        );
        let y3 = f.sub(&f.sub(&f.neg(&f.mul(&f.add(&lambda, a1), &x3)), &nu), a3);
        self.point_unchecked(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        self.add_unchecked(p, p)
    }

    pub fn multiply(&self, n: i64, p: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.multiply_big(&BigInt::from(n), p)
    }

    pub fn multiply_big(&self, n: &BigInt, p: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.check(p)?;
        Ok(self.multiply_unchecked(n, p))
    }

    pub(crate) fn multiply_unchecked(&self, n: &BigInt, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let base = if n.is_negative() { self.neg(p) } else { p.clone() };
        let m = n.magnitude();
        let mut acc = self.infinity();
        for i in (0..m.bits()).rev() {
            acc = self.double(&acc);
            if m.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
        }
        acc
    }

    /// Exact order of `p` if it is at most `max`.
    pub fn order_up_to(&self, p: &CurvePoint<F::Elem>, max: u64) -> Option<u64> {
        let mut acc = p.clone();
        for k in 1..=max {
            if acc.is_infinity() {
                return Some(k);
            }
            acc = self.add_unchecked(&acc, p);
        }
        None
    }

    /// Applies the change of variables, returning the new curve.
    pub fn transform(&self, iso: &Isomorphism<F::Elem>) -> Result<Curve<F>> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let Isomorphism { u, r, s, t } = iso;
        let ui = f.inv(u).ok_or_else(|| Error::Domain("u must be nonzero".into()))?;
        let ui2 = f.mul(&ui, &ui);
        let ui3 = f.mul(&ui2, &ui);
        let ui4 = f.mul(&ui2, &ui2);
        let ui6 = f.mul(&ui3, &ui3);
        let n1 = f.add(a1, &f.scale(2, s));
        let n2 = f.sub(&f.add(&f.sub(a2, &f.mul(s, a1)), &f.scale(3, r)), &f.mul(s, s));
        let n3 = f.add(&f.add(a3, &f.mul(r, a1)), &f.scale(2, t));
        let n4 = {
            let mut v = f.sub(a4, &f.mul(s, a3));
            v = f.add(&v, &f.scale(2, &f.mul(r, a2)));
            v = f.sub(&v, &f.mul(&f.add(t, &f.mul(r, s)), a1));
            v = f.add(&v, &f.scale(3, &f.mul(r, r)));
            f.sub(&v, &f.scale(2, &f.mul(s, t)))
        };
        let n6 = {
            let r2 = f.mul(r, r);
            let mut v = f.add(a6, &f.mul(r, a4));
            v = f.add(&v, &f.mul(&r2, a2));
            v = f.add(&v, &f.mul(&r2, r));
            v = f.sub(&v, &f.mul(t, a3));
            v = f.sub(&v, &f.mul(t, t));
            f.sub(&v, &f.mul(&f.mul(r, t), a1))
        };
        Curve::new(
            f.clone(),
            [
                f.mul(&n1, &ui),
                f.mul(&n2, &ui2),
                f.mul(&n3, &ui3),
                f.mul(&n4, &ui4),
                f.mul(&n6, &ui6),
            ],
        )
    }

    /// Carries a point of `self` to `target = self.transform(iso)`.
    pub fn map_point(
        &self,
        iso: &Isomorphism<F::Elem>,
        target: &Curve<F>,
        p: &CurvePoint<F::Elem>,
    ) -> Result<CurvePoint<F::Elem>> {
        self.check(p)?;
        let f = &self.field;
        match &p.xy {
            None => Ok(target.infinity()),
            Some((x, y)) => {
                let ui = f.inv(&iso.u).unwrap();
                let ui2 = f.mul(&ui, &ui);
                let ui3 = f.mul(&ui2, &ui);
                let xr = f.sub(x, &iso.r);
                let nx = f.mul(&xr, &ui2);
                let ny = f.mul(&f.sub(&f.sub(y, &f.mul(&iso.s, &xr)), &iso.t), &ui3);
                target.point(nx, ny)
            }
        }
    }

    /// Inverse direction of [`Curve::map_point`]: from `target` back to `self`.
    pub fn unmap_point(
        &self,
        iso: &Isomorphism<F::Elem>,
        target: &Curve<F>,
        p: &CurvePoint<F::Elem>,
    ) -> Result<CurvePoint<F::Elem>> {
        target.check(p)?;
        let f = &self.field;
        match &p.xy {
            None => Ok(self.infinity()),
            Some((x, y)) => {
                let u2 = f.mul(&iso.u, &iso.u);
                let u3 = f.mul(&u2, &iso.u);
                let u2x = f.mul(&u2, x);
                let nx = f.add(&u2x, &iso.r);
                let ny = f.add(&f.add(&f.mul(&u3, y), &f.mul(&iso.s, &u2x)), &iso.t);
                self.point(nx, ny)
            }
        }
    }

    /// `y² = x³ − 27c4·x − 54c6`, with the coordinate change recorded. A
    /// curve that is already short maps to itself.
    pub fn to_short_model(&self) -> Result<ShortModel<F>> {
        let f = &self.field;
        if f.characteristic() == 2 || f.characteristic() == 3 {
            return domain("short Weierstrass model needs characteristic ≠ 2, 3");
        }
        if self.is_short() {
            return Ok(ShortModel {
                curve: self.clone(),
                iso: Isomorphism {
                    u: f.one(),
                    r: f.zero(),
                    s: f.zero(),
                    t: f.zero(),
                },
            });
        }
        let half = f.inv(&f.from_i64(2)).unwrap();
        let r = f.neg(&f.div(&self.inv.b2, &f.from_i64(12)).unwrap());
        let s = f.neg(&f.mul(&self.a[0], &half));
        let t = f.neg(&f.mul(&f.add(&self.a[2], &f.mul(&r, &self.a[0])), &half));
        let u = f.inv(&f.from_i64(6)).unwrap();
        let iso = Isomorphism { u, r, s, t };
        let curve = self.transform(&iso)?;
        Ok(ShortModel { curve, iso })
    }

    /// `y² = x³ + (b2/4)x² + (b4/2)x + b6/4`, via `y ↦ y − (a1x + a3)/2`.
    pub fn to_a1a3_free(&self) -> Result<ShortModel<F>> {
        let f = &self.field;
        let half = f
            .inv(&f.from_i64(2))
            .ok_or_else(|| Error::Domain("characteristic 2".into()))?;
        let iso = Isomorphism {
            u: f.one(),
            r: f.zero(),
            s: f.neg(&f.mul(&self.a[0], &half)),
            t: f.neg(&f.mul(&self.a[2], &half)),
        };
        let curve = self.transform(&iso)?;
        Ok(ShortModel { curve, iso })
    }

    /// Reduction of the curve's x-only division data is in the torsion
    /// module; this is `4x³ + b2x² + 2b4x + b6`.
    pub fn two_division_cubic(&self) -> Vec<F::Elem> {
        let f = &self.field;
        vec![
            self.inv.b6.clone(),
            f.scale(2, &self.inv.b4),
            self.inv.b2.clone(),
            f.from_i64(4),
        ]
    }

    pub fn format_coeffs(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|c| self.field.format(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

impl<F: Field> fmt::Display for Curve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_coeffs())
    }
}

fn compute_invariants<F: Field>(f: &F, a: &[F::Elem; 5]) -> Invariants<F::Elem> {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = f.add(&f.mul(a1, a1), &f.scale(4, a2));
    let b4 = f.add(&f.scale(2, a4), &f.mul(a1, a3));
    let b6 = f.add(&f.mul(a3, a3), &f.scale(4, a6));
    let b8 = {
        let mut v = f.mul(&f.mul(a1, a1), a6);
        v = f.add(&v, &f.scale(4, &f.mul(a2, a6)));
        v = f.sub(&v, &f.mul(&f.mul(a1, a3), a4));
        v = f.add(&v, &f.mul(a2, &f.mul(a3, a3)));
        f.sub(&v, &f.mul(a4, a4))
    };
    let c4 = f.sub(&f.mul(&b2, &b2), &f.scale(24, &b4));
    let c6 = {
        let b2_3 = f.mul(&b2, &f.mul(&b2, &b2));
        let v = f.add(&f.neg(&b2_3), &f.scale(36, &f.mul(&b2, &b4)));
        f.sub(&v, &f.scale(216, &b6))
    };
    let disc = {
        let mut v = f.neg(&f.mul(&f.mul(&b2, &b2), &b8));
        v = f.sub(&v, &f.scale(8, &f.mul(&b4, &f.mul(&b4, &b4))));
        v = f.sub(&v, &f.scale(27, &f.mul(&b6, &b6)));
        f.add(&v, &f.scale(9, &f.mul(&b2, &f.mul(&b4, &b6))))
    };
    let j = match f.inv(&disc) {
        Some(di) => f.mul(&f.mul(&c4, &f.mul(&c4, &c4)), &di),
        None => f.zero(),
    };
    debug_assert!({
        let lhs = f.scale(4, &b8);
        let rhs = f.sub(&f.mul(&b2, &b6), &f.mul(&b4, &b4));
        lhs == rhs
    });
    Invariants {
        b2,
        b4,
        b6,
        b8,
        c4,
        c6,
        disc,
        j,
    }
}

pub type RationalCurve = Curve<Rationals>;
pub type KCurve = Curve<QuadField>;

pub fn rational_curve(a: [i64; 5]) -> Result<RationalCurve> {
    Curve::new(Rationals, a.map(|c| Rat::from_integer(c.into())))
}

/// Parses `[a1,a2,a3,a4,a6]` with coefficients in the `a+b*s` syntax.
pub fn parse_curve(text: &str, field: &QuadField) -> Result<KCurve> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Domain(format!("curve must look like [a1,a2,a3,a4,a6], got '{t}'")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 5 {
        return domain(format!("expected 5 coefficients, got {}", parts.len()));
    }
    let mut a = Vec::with_capacity(5);
    for p in parts {
        a.push(field.parse(p)?);
    }
    let a: [QuadElem; 5] = a.try_into().unwrap();
    Curve::new(*field, a)
}

pub fn parse_rational_curve(text: &str) -> Result<RationalCurve> {
    let k = parse_curve(text, &QuadField::rationals())?;
    Ok(k.to_rational().expect("d = 1 curve is rational"))
}

impl KCurve {
    /// The same curve over ℚ, when every coefficient is rational.
    pub fn to_rational(&self) -> Option<RationalCurve> {
        if !self.a.iter().all(|c| c.is_rational()) {
            return None;
        }
        Some(Curve::new(Rationals, self.a.clone().map(|c| c.a)).expect("nonsingular"))
    }

    pub fn is_defined_over_q(&self) -> bool {
        self.a.iter().all(|c| c.is_rational())
    }

    /// Applies the nontrivial automorphism of K to a point's coordinates.
    pub fn conjugate_point(&self, p: &CurvePoint<QuadElem>) -> Result<CurvePoint<QuadElem>> {
        if !self.is_defined_over_q() {
            return domain("Galois conjugation of points needs a curve defined over Q");
        }
        Ok(match &p.xy {
            None => self.infinity(),
            Some((x, y)) => self.point_unchecked(x.conjugate(), y.conjugate()),
        })
    }
}

impl RationalCurve {
    pub fn base_change(&self, k: &QuadField) -> KCurve {
        Curve::new(*k, self.a.clone().map(QuadElem::rational)).expect("nonsingular")
    }

    pub fn lift_point(&self, k: &KCurve, p: &CurvePoint<Rat>) -> CurvePoint<QuadElem> {
        match &p.xy {
            None => k.infinity(),
            Some((x, y)) => k.point_unchecked(QuadElem::rational(x.clone()), QuadElem::rational(y.clone())),
        }
    }

    /// The `d`-quadratic twist. A short model `y² = x³ + Ax + B` becomes
    /// `y² = x³ + Ad²x + Bd³`; other models are first brought to
    /// `y² = x³ + a2x² + a4x + a6` and twisted to
    /// `y² = x³ + d·a2x² + d²·a4x + d³·a6`.
    pub fn quadratic_twist(&self, d: &BigInt) -> Result<RationalCurve> {
        if d.is_zero() {
            return domain("twist parameter d must be nonzero");
        }
        let sf = squarefree_decompose(d)?;
        let d = if sf.square_root_of_cofactor.is_one() {
            d.clone()
        } else {
            log::warn!(
                "twist parameter {d} is not squarefree; twisting by its squarefree part {}",
                sf.squarefree_part
            );
            sf.squarefree_part
        };
        let base = if self.is_short() {
            self.clone()
        } else {
            self.to_a1a3_free()?.curve
        };
        let dq = Rat::from_integer(d);
        let d2 = &dq * &dq;
        let d3 = &d2 * &dq;
        let a = base.coeffs();
        Curve::new(
            Rationals,
            [Rat::zero(), &a[1] * &dq, Rat::zero(), &a[3] * &d2, &a[4] * &d3],
        )
    }

    pub fn quadratic_twist_i64(&self, d: i64) -> Result<RationalCurve> {
        self.quadratic_twist(&BigInt::from(d))
    }

    /// Twisting twice by `d` gives back the curve up to the scaling `u = d`.
    pub fn is_isomorphic_short(&self, other: &RationalCurve) -> bool {
        let (Ok(a), Ok(b)) = (self.to_short_model(), other.to_short_model()) else {
            return false;
        };
        let (a4, a6) = (&a.curve.coeffs()[3], &a.curve.coeffs()[4]);
        let (b4, b6) = (&b.curve.coeffs()[3], &b.curve.coeffs()[4]);
        // b4 = u⁴a4, b6 = u⁶a6 for some rational u
        if a4.is_zero() != b4.is_zero() || a6.is_zero() != b6.is_zero() {
            return false;
        }
        if !a4.is_zero() && !a6.is_zero() {
            // u² = (b6/a6)/(b4/a4)
            let u2 = (b6 / a6) / (b4 / a4);
            return &u2 * &u2 * a4 == *b4 && crate::exactnum::rat_sqrt(&u2).is_some();
        }
        let (x, y, pw) = if a6.is_zero() { (a4, b4, 4) } else { (a6, b6, 6) };
        let r = y / x;
        has_rational_root(&r, pw)
    }
}

fn has_rational_root(r: &Rat, pw: u32) -> bool {
    if r.is_negative() {
        return false;
    }
    let n = r.numer().magnitude().nth_root(pw);
    let d = r.denom().magnitude().nth_root(pw);
    n.pow(pw) == *r.numer().magnitude() && d.pow(pw) == *r.denom().magnitude()
}

/// `y² + (1−c)xy − by = x³ − bx²`, on which (0,0) is a point.
pub fn tate_normal<F: Field>(field: &F, b: &F::Elem, c: &F::Elem) -> Result<Curve<F>> {
    let f = field;
    Curve::new(f.clone(), [f.sub(&f.one(), c), f.neg(b), f.neg(b), f.zero(), f.zero()])
}

/// Integer value of a rational if it is one and fits an `i64`.
pub fn rat_to_i64(x: &Rat) -> Option<i64> {
    x.is_integer().then(|| x.numer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_frac};
    use crate::field::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invariants_of_x3_minus_x() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let i = e.invariants();
        assert_eq!(i.b2, rat(0));
        assert_eq!(i.b4, rat(-2));
        assert_eq!(i.b6, rat(0));
        assert_eq!(i.b8, rat(-1));
        assert_eq!(i.disc, rat(64));
        assert_eq!(i.j, rat(1728));
        assert_eq!(rational_curve([0, 0, 0, 0, 0]).unwrap_err(), Error::Singular);
    }

    #[test]
    fn order_three_point_on_y2_plus_y_eq_x3() {
        let e = rational_curve([0, 0, 1, 0, 0]).unwrap();
        let p = e.point(rat(0), rat(0)).unwrap();
        let two_p = e.add(&p, &p).unwrap();
        assert_eq!(two_p, e.point(rat(0), rat(-1)).unwrap());
        assert!(e.multiply(3, &p).unwrap().is_infinity());
        assert!(e.multiply(0, &p).unwrap().is_infinity());
        assert_eq!(e.add(&p, &e.infinity()).unwrap(), p);
        assert!(e.add(&p, &e.neg(&p)).unwrap().is_infinity());
    }

    #[test]
    fn cross_curve_addition_is_rejected() {
        let e = rational_curve([0, 0, 1, 0, 0]).unwrap();
        let f = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let p = e.point(rat(0), rat(0)).unwrap();
        let q = f.point(rat(0), rat(0)).unwrap();
        assert!(e.add(&p, &q).is_err());
        assert!(e.point(rat(1), rat(1)).is_err());
    }

    #[test]
    fn short_model_round_trips_points() {
        let e = rational_curve([0, 0, 1, 0, 0]).unwrap();
        let sm = e.to_short_model().unwrap();
        assert!(sm.curve.is_short());
        let p = e.point(rat(0), rat(0)).unwrap();
        let q = e.map_point(&sm.iso, &sm.curve, &p).unwrap();
        assert_eq!(e.unmap_point(&sm.iso, &sm.curve, &q).unwrap(), p);
        assert_eq!(sm.curve.j_invariant(), e.j_invariant());

        let flat = rational_curve([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(flat.to_short_model().unwrap().curve, flat);
    }

    #[test]
    fn short_model_discriminant_scales_by_six_to_the_twelfth() {
        let e = parse_rational_curve(
            "[1,0,0,-127381738643041574974581021420318985,17495594046612039766866496413577998621609407092547225]",
        )
        .unwrap();
        let sm = e.to_short_model().unwrap();
        let scale = Rat::from_integer(BigInt::from(6).pow(12u32));
        assert_eq!(*sm.curve.discriminant(), e.discriminant() * scale);
        assert_eq!(sm.curve.coeffs()[3], -e.invariants().c4.clone() * rat(27));
        assert_eq!(sm.curve.coeffs()[4], -e.invariants().c6.clone() * rat(54));
    }

    #[test]
    fn twists() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(e.quadratic_twist_i64(-1).unwrap(), e);
        assert_eq!(e.quadratic_twist_i64(1).unwrap(), e);
        let t2 = e.quadratic_twist_i64(2).unwrap();
        assert_eq!(t2, rational_curve([0, 0, 0, -4, 0]).unwrap());
        assert_eq!(t2.j_invariant(), e.j_invariant());
        assert!(e.quadratic_twist_i64(0).is_err());
        // non-squarefree parameter folds to its squarefree part
        assert_eq!(e.quadratic_twist_i64(8).unwrap(), t2);
    }

    #[test]
    fn double_twist_is_isomorphic() {
        let e = rational_curve([1, -1, 1, -3, 5]).unwrap();
        for d in [-7i64, 2, 3, -1, 35] {
            let tt = e.quadratic_twist_i64(d).unwrap().quadratic_twist_i64(d).unwrap();
            assert_eq!(tt.j_invariant(), e.j_invariant());
            assert!(tt.is_isomorphic_short(&e), "d = {d}");
        }
        assert!(!e.quadratic_twist_i64(2).unwrap().is_isomorphic_short(&e));
    }

    #[test]
    fn tate_normal_orders() {
        let q = Rationals;
        let e4 = tate_normal(&q, &rat(1), &rat(0)).unwrap();
        let p = e4.point(rat(0), rat(0)).unwrap();
        assert_eq!(e4.order_up_to(&p, 40), Some(4));
        let e5 = tate_normal(&q, &rat(1), &rat(1)).unwrap();
        let p = e5.point(rat(0), rat(0)).unwrap();
        assert_eq!(e5.order_up_to(&p, 40), Some(5));
    }

    #[test]
    fn tate_normal_reproduces_the_z11_curve() {
        let k = QuadField::new(561).unwrap();
        let b = k.parse("35/10368*s-210/10368").unwrap();
        let c = k.parse("115/1008+10/1008*s").unwrap();
        let e = tate_normal(&k, &b, &c).unwrap();
        assert_eq!(e.coeffs()[0], k.parse("893/1008-10/1008*s").unwrap());
        assert_eq!(e.coeffs()[1], k.parse("210/10368-35/10368*s").unwrap());
        assert_eq!(e.coeffs()[2], e.coeffs()[1]);
        let p = e.point(k.zero(), k.zero()).unwrap();
        assert!(e.multiply(11, &p).unwrap().is_infinity());
        assert_eq!(e.order_up_to(&p, 40), Some(11));
    }

    fn random_point(e: &Curve<PrimeField>, rng: &mut ChaCha8Rng) -> CurvePoint<u64> {
        let f = e.field();
        loop {
            let x = rng.gen_range(0..f.p());
            let (p, q) = e.y_quadratic(&x);
            for y in 0..f.p() {
                if f.is_zero(&f.add(&f.mul(&y, &f.add(&y, &p)), &q)) {
                    return e.point(x, y).unwrap();
                }
            }
        }
    }

    #[test]
    fn group_law_is_commutative_and_associative_mod_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for p in [5u64, 7, 11, 101, 1009] {
            let f = PrimeField::new(p);
            while checked < 200 {
                let a: [u64; 5] = std::array::from_fn(|_| rng.gen_range(0..p));
                let Ok(e) = Curve::new(f, a) else { continue };
                for _ in 0..10 {
                    let (x, y, z) = (
                        random_point(&e, &mut rng),
                        random_point(&e, &mut rng),
                        random_point(&e, &mut rng),
                    );
                    assert_eq!(e.add(&x, &y).unwrap(), e.add(&y, &x).unwrap());
                    let l = e.add(&e.add(&x, &y).unwrap(), &z).unwrap();
                    let r = e.add(&x, &e.add(&y, &z).unwrap()).unwrap();
                    assert_eq!(l, r);
                    assert!(e.contains(&l));
                    checked += 1;
                }
                if checked % 40 == 0 {
                    break;
                }
            }
        }
        assert!(checked >= 200);
    }

    #[test]
    fn scalar_multiplication_is_additive() {
        let e = rational_curve([0, 0, 1, -1, 0]).unwrap();
        let p = e.point(rat(0), rat(0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rng.gen_range(-6i64..7);
            let n = rng.gen_range(-6i64..7);
            let lhs = e.multiply(m + n, &p).unwrap();
            let rhs = e.add(&e.multiply(m, &p).unwrap(), &e.multiply(n, &p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rational_group_law_associativity_on_small_curve() {
        let e = rational_curve([0, 0, 1, -7, 6]).unwrap();
        let pts = [
            e.point(rat(0), rat(2)).unwrap(),
            e.point(rat(1), rat(0)).unwrap(),
            e.point(rat(2), rat(0)).unwrap(),
        ];
        let s = e.add(&e.add(&pts[0], &pts[1]).unwrap(), &pts[2]).unwrap();
        let t = e.add(&pts[0], &e.add(&pts[1], &pts[2]).unwrap()).unwrap();
        assert_eq!(s, t);
        let half = e.point(rat_frac(1, 4), rat_frac(-9, 8));
        assert!(half.is_err() || e.contains(&half.unwrap()));
    }
}
