//! Division polynomials and torsion subgroups over ℚ and ℚ(√d).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::curve::{Curve, CurvePoint, Isomorphism, KCurve, RationalCurve};
use crate::error::{domain, Error, Result};
use crate::exactnum::{primes_up_to, squarefree_decompose, Rat};
use crate::field::{Field, Rationals};
use crate::modp::{count_points, count_points_ext, good_counts, integral_model_k, reduce_k_mod_p, split_root};
use crate::poly::{self, Poly};
use crate::quadfield::{rational_roots, roots_in_k, QuadElem, QuadField};

/// `ℤ/n1 × ℤ/n2` with `n1 | n2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorsionGroup {
    pub n1: u64,
    pub n2: u64,
}

impl TorsionGroup {
    pub fn cyclic(n: u64) -> Self {
        TorsionGroup { n1: 1, n2: n }
    }

    pub fn new(n1: u64, n2: u64) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n2 % n1 != 0 {
            return domain(format!("invalid torsion structure {n1}x{n2}"));
        }
        Ok(TorsionGroup { n1, n2 })
    }

    pub fn order(&self) -> u64 {
        self.n1 * self.n2
    }

    /// Groups allowed over some quadratic field; the `d`-restricted ones
    /// are checked by [`TorsionGroup::allowed_over`].
    pub fn in_quadratic_list(&self) -> bool {
        match (self.n1, self.n2) {
            (1, m) => m <= 18 && m != 17,
            (2, n) => n % 2 == 0 && n / 2 <= 6,
            (3, 3) | (3, 6) | (4, 4) => true,
            _ => false,
        }
    }

    /// Mazur's list for ℚ, and the quadratic list for `d ≠ 1`.
    pub fn allowed_over(&self, d: i64) -> bool {
        if d == 1 {
            return match (self.n1, self.n2) {
                (1, m) => m <= 10 || m == 12,
                (2, n) => n % 2 == 0 && n / 2 <= 4,
                _ => false,
            };
        }
        match (self.n1, self.n2) {
            (3, _) => d == -3 && self.in_quadratic_list(),
            (4, 4) => d == -1,
            _ => self.in_quadratic_list(),
        }
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n1 == 1 {
            write!(f, "{}", self.n2)
        } else {
            write!(f, "{}x{}", self.n1, self.n2)
        }
    }
}

impl FromStr for TorsionGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("invalid torsion group '{s}'"));
        match s.trim().split_once('x') {
            Some((a, b)) => TorsionGroup::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(TorsionGroup::cyclic(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorsionData<E> {
    pub group: TorsionGroup,
    pub generators: Vec<CurvePoint<E>>,
    pub all_points: Vec<CurvePoint<E>>,
    /// The gcd of point counts used as an order bound.
    pub bound: u64,
}

impl<E: PartialEq> TorsionData<E> {
    pub fn contains(&self, p: &CurvePoint<E>) -> bool {
        self.all_points.contains(p)
    }
}

/// Division polynomial data in the variable `x` alone.
///
/// `f[m]` is `ψ_m` for odd `m` and `ψ_m / ψ_2` for even `m`; `two_torsion`
/// is `ψ_2² = 4x³ + b2x² + 2b4x + b6`.
#[derive(Clone, Debug)]
pub struct DivisionPolynomials<E> {
    pub f: Vec<Poly<E>>,
    pub two_torsion: Poly<E>,
}

impl<E: Clone> DivisionPolynomials<E> {
    /// Polynomial whose roots are the x-coordinates of the nonzero
    /// `m`-torsion points (together with the roots of `ψ_2²` when `m` is
    /// even).
    pub fn even_part(&self, m: usize) -> &Poly<E> {
        &self.f[m]
    }
}

pub const MAX_DIVISION_INDEX: usize = 36;

pub fn division_polynomials<F: Field>(e: &Curve<F>, m: usize) -> Result<DivisionPolynomials<F::Elem>> {
    if m == 0 || m > MAX_DIVISION_INDEX {
        return domain(format!("division polynomial index must be in 1..={MAX_DIVISION_INDEX}"));
    }
    let k = e.field();
    let inv = e.invariants();
    let (b2, b4, b6, b8) = (&inv.b2, &inv.b4, &inv.b6, &inv.b8);
    let ff = e.two_division_cubic();
    let ff2 = poly::mul(k, &ff, &ff);
    let c = |x: &F::Elem| x.clone();
    let mut f: Vec<Poly<F::Elem>> = vec![
        Vec::new(),
        vec![k.one()],
        vec![k.one()],
        poly::from_coeffs(k, vec![c(b8), k.scale(3, b6), k.scale(3, b4), c(b2), k.from_i64(3)]),
        poly::from_coeffs(
            k,
            vec![
                k.sub(&k.mul(b4, b8), &k.mul(b6, b6)),
                k.sub(&k.mul(b2, b8), &k.mul(b4, b6)),
                k.scale(10, b8),
                k.scale(10, b6),
                k.scale(5, b4),
                c(b2),
                k.from_i64(2),
            ],
        ),
    ];
    let cube = |p: &Poly<F::Elem>| poly::mul(k, p, &poly::mul(k, p, p));
    let sq = |p: &Poly<F::Elem>| poly::mul(k, p, p);
    for n in 5..=m.max(4) {
        let h = n / 2;
        let next = if n % 2 == 1 {
            let t1 = poly::mul(k, &f[h + 2], &cube(&f[h]));
            let t2 = poly::mul(k, &f[h - 1], &cube(&f[h + 1]));
            if h % 2 == 0 {
                poly::sub(k, &poly::mul(k, &t1, &ff2), &t2)
            } else {
                poly::sub(k, &t1, &poly::mul(k, &t2, &ff2))
            }
        } else {
            let t1 = poly::mul(k, &f[h + 2], &sq(&f[h - 1]));
            let t2 = poly::mul(k, &f[h - 2], &sq(&f[h + 1]));
            poly::mul(k, &f[h], &poly::sub(k, &t1, &t2))
        };
        f.push(next);
    }
    f.truncate(m + 1);
    Ok(DivisionPolynomials { f, two_torsion: ff })
}

/// `ψ_m²` as a polynomial in `x`.
pub fn psi_squared<F: Field>(e: &Curve<F>, dp: &DivisionPolynomials<F::Elem>, m: usize) -> Poly<F::Elem> {
    let k = e.field();
    let s = poly::mul(k, &dp.f[m], &dp.f[m]);
    if m % 2 == 0 {
        poly::mul(k, &s, &dp.two_torsion)
    } else {
        s
    }
}

/// Numerator `φ_m` of `x(mP) = φ_m / ψ_m²`. Needs `dp` up to index `m + 1`.
pub fn phi<F: Field>(e: &Curve<F>, dp: &DivisionPolynomials<F::Elem>, m: usize) -> Poly<F::Elem> {
    let k = e.field();
    let x = vec![k.zero(), k.one()];
    let ff = &dp.two_torsion;
    let fm2 = poly::mul(k, &dp.f[m], &dp.f[m]);
    let cross = poly::mul(k, &dp.f[m + 1], &dp.f[m - 1]);
    if m % 2 == 1 {
        poly::sub(k, &poly::mul(k, &x, &fm2), &poly::mul(k, ff, &cross))
    } else {
        poly::sub(k, &poly::mul(k, &poly::mul(k, &x, ff), &fm2), &cross)
    }
}

/// Prime orders that can occur in a torsion group over a quadratic field.
const TORSION_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// gcd of `#E(𝔽_q)` over enough good residue fields of odd characteristic.
fn reduction_bound(counts: impl Iterator<Item = u64>) -> u64 {
    let mut g: u64 = 0;
    let mut used = 0;
    let mut stable = 0;
    for n in counts {
        let before = g;
        g = g.gcd(&n);
        used += 1;
        stable = if g == before { stable + 1 } else { 0 };
        if g == 1 || (used >= 8 && stable >= 8) {
            break;
        }
    }
    g
}

/// gcd of point counts over good residue fields of odd characteristic; the
/// order of `E(K)_tors` divides it.
pub fn torsion_bound(e: &KCurve) -> u64 {
    let k = e.field();
    let d = k.d();
    if let Some(q) = e.to_rational() {
        // curves over ℚ: split primes see 𝔽_p, inert primes 𝔽_{p²}
        let counts = good_counts(&q, 2000).into_iter().filter_map(move |(p, a_p, n)| {
            if d == 1 {
                return Some(n);
            }
            match crate::exactnum::jacobi_u64(d, p) {
                1 => Some(n),
                -1 => count_points_ext(a_p, p, 2).ok().map(|c| c as u64),
                _ => None,
            }
        });
        return reduction_bound(counts);
    }
    let (model, _) = integral_model_k(e);
    let counts = primes_up_to(20000)
        .into_iter()
        .filter(|&p| p > 2)
        .filter_map(|p| split_root(d, p).map(|r| (p, r)))
        .flat_map(|(p, r)| [(p, r), (p, p - r)])
        .filter_map(|(p, r)| reduce_k_mod_p(&model, p, r).good().map(|c| count_points(&c)));
    reduction_bound(counts)
}

/// Exact torsion test: `P` has finite order iff `bound·P = O`, where
/// `bound` comes from [`torsion_bound`].
pub fn is_torsion_point(e: &KCurve, p: &CurvePoint<QuadElem>, bound: u64) -> bool {
    e.multiply_unchecked(&BigInt::from(bound), p).is_infinity()
}

/// Points with the given x-coordinate, both y-values when distinct.
pub fn points_with_x(e: &KCurve, x: &QuadElem) -> Vec<CurvePoint<QuadElem>> {
    let k = e.field();
    let (p, q) = e.y_quadratic(x);
    k.solve_quadratic(&p, &q)
        .into_iter()
        .map(|y| e.point(x.clone(), y).expect("solved y lies on the curve"))
        .collect()
}

fn distinct(mut v: Vec<QuadElem>) -> Vec<QuadElem> {
    v.dedup();
    v
}

/// Points `Q` with `ℓQ = P`.
fn divide_point(
    e: &KCurve,
    dp: &DivisionPolynomials<QuadElem>,
    l: usize,
    p: &CurvePoint<QuadElem>,
) -> Result<Vec<CurvePoint<QuadElem>>> {
    let k = e.field();
    let xp = p.x().expect("affine point");
    let target = poly::sub(k, &phi(e, dp, l), &poly::scale(k, xp, &psi_squared(e, dp, l)));
    let mut out = Vec::new();
    for x in distinct(roots_in_k(k, &target)?) {
        for q in points_with_x(e, &x) {
            if e.multiply_unchecked(&BigInt::from(l), &q) == *p {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// The ℓ-primary part of `E(K)_tors` as a list of points (with O first).
fn primary_part(e: &KCurve, l: u64, max_size: u64) -> Result<Vec<CurvePoint<QuadElem>>> {
    let k = e.field();
    let lu = l as usize;
    let mut dp = division_polynomials(e, lu)?;
    let kernel = if l == 2 {
        dp.two_torsion.clone()
    } else {
        dp.f[lu].clone()
    };
    let mut all = vec![e.infinity()];
    let mut layer = Vec::new();
    for x in distinct(roots_in_k(k, &kernel)?) {
        for q in points_with_x(e, &x) {
            if e.multiply_unchecked(&BigInt::from(l), &q).is_infinity() {
                layer.push(q);
            }
        }
    }
    all.extend(layer.iter().cloned());
    while !layer.is_empty() && (all.len() as u64) < max_size {
        if dp.f.len() <= lu + 1 {
            dp = division_polynomials(e, lu + 1)?;
        }
        let mut next = Vec::new();
        for p in &layer {
            for q in divide_point(e, &dp, lu, p)? {
                if !all.contains(&q) && !next.contains(&q) {
                    next.push(q);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

fn order_of(e: &KCurve, p: &CurvePoint<QuadElem>, max: u64) -> u64 {
    e.order_up_to(p, max).expect("torsion point of bounded order")
}

fn canonical_min<'a>(pts: impl Iterator<Item = &'a CurvePoint<QuadElem>>) -> Option<&'a CurvePoint<QuadElem>> {
    pts.min_by(|a, b| a.canonical_cmp(b))
}

fn multiples(e: &KCurve, p: &CurvePoint<QuadElem>) -> Vec<CurvePoint<QuadElem>> {
    let mut out = vec![e.infinity()];
    let mut acc = p.clone();
    while !acc.is_infinity() {
        out.push(acc.clone());
        acc = e.add_unchecked(&acc, p);
    }
    out
}

/// Splits an abelian ℓ-group given by its element list into two
/// generators `(P1, P2)` with `ord P1 ≥ ord P2` and their orders.
fn split_primary(e: &KCurve, pts: &[CurvePoint<QuadElem>]) -> (CurvePoint<QuadElem>, u64, CurvePoint<QuadElem>, u64) {
    let n = pts.len() as u64;
    let orders: Vec<u64> = pts.iter().map(|p| order_of(e, p, n)).collect();
    let exp = *orders.iter().max().unwrap();
    let small = n / exp;
    let p1 = canonical_min(pts.iter().zip(&orders).filter(|(_, &o)| o == exp).map(|(p, _)| p))
        .unwrap()
        .clone();
    if small == 1 {
        return (p1, exp, e.infinity(), 1);
    }
    let span = multiples(e, &p1);
    let p2 = canonical_min(
        pts.iter()
            .zip(&orders)
            .filter(|(_, &o)| o == small)
            .map(|(p, _)| p)
            .filter(|p| {
                let low = e.multiply_unchecked(&BigInt::from(small / smallest_prime(small)), p);
                !span.contains(&low)
            }),
    )
    .expect("complementary generator exists")
    .clone();
    (p1, exp, p2, small)
}

fn smallest_prime(n: u64) -> u64 {
    (2..=n).find(|q| n % q == 0).unwrap_or(1)
}

/// Structure and points of `E(K)_tors`.
pub fn torsion_over_k(e: &KCurve) -> Result<TorsionData<QuadElem>> {
    // Division polynomials are far cheaper with integral coefficients, so
    // work on the scaled model and carry the points back. Positive scaling
    // keeps the canonical ordering of points.
    let (_, u) = integral_model_k(e);
    if u.is_one() {
        return torsion_integral(e);
    }
    let k = e.field();
    let iso = Isomorphism {
        u: k.rat(Rat::new(BigInt::one(), u)),
        r: k.zero(),
        s: k.zero(),
        t: k.zero(),
    };
    let scaled = e.transform(&iso)?;
    let t = torsion_integral(&scaled)?;
    let back = |p: &CurvePoint<QuadElem>| e.unmap_point(&iso, &scaled, p);
    Ok(TorsionData {
        group: t.group,
        generators: t.generators.iter().map(back).collect::<Result<_>>()?,
        all_points: t.all_points.iter().map(back).collect::<Result<_>>()?,
        bound: t.bound,
    })
}

fn torsion_integral(e: &KCurve) -> Result<TorsionData<QuadElem>> {
    let d = e.field().d();
    let bound = torsion_bound(e);
    let mut g1 = e.infinity();
    let mut g2 = e.infinity();
    let (mut n1, mut n2) = (1u64, 1u64);
    let mut all = vec![e.infinity()];
    for l in TORSION_PRIMES {
        let mut v = 0;
        let mut b = bound;
        while b % l == 0 {
            b /= l;
            v += 1;
        }
        if v == 0 {
            continue;
        }
        let part = primary_part(e, l, l.pow(v))?;
        if part.len() == 1 {
            continue;
        }
        let (p1, o1, p2, o2) = split_primary(e, &part);
        g1 = e.add_unchecked(&g1, &p1);
        g2 = e.add_unchecked(&g2, &p2);
        n2 *= o1;
        n1 *= o2;
        let mut combined = Vec::with_capacity(all.len() * part.len());
        for a in &all {
            for q in &part {
                combined.push(e.add_unchecked(a, q));
            }
        }
        all = combined;
    }
    let group = TorsionGroup { n1, n2 };
    if !group.allowed_over(d) {
        return Err(Error::Internal(format!(
            "computed torsion {group} is not possible over Q(sqrt({d}))"
        )));
    }
    if bound % group.order() != 0 && bound != 0 {
        return Err(Error::Internal(format!(
            "torsion of order {} does not divide the reduction bound {bound}",
            group.order()
        )));
    }
    all.sort_by(|a, b| a.canonical_cmp(b));
    let mut generators = Vec::new();
    if n2 > 1 {
        generators.push(g1);
    }
    if n1 > 1 {
        generators.push(g2);
    }
    Ok(TorsionData {
        group,
        generators,
        all_points: all,
        bound,
    })
}

/// Torsion over ℚ, computed over the trivial extension and mapped back.
pub fn torsion_over_q(e: &RationalCurve) -> Result<TorsionData<Rat>> {
    let q = QuadField::rationals();
    let ek = e.base_change(&q);
    let t = torsion_over_k(&ek)?;
    let back = |p: &CurvePoint<QuadElem>| match p.xy() {
        None => e.infinity(),
        Some((x, y)) => e.point(x.a.clone(), y.a.clone()).expect("rational torsion point"),
    };
    Ok(TorsionData {
        group: t.group,
        generators: t.generators.iter().map(back).collect(),
        all_points: t.all_points.iter().map(back).collect(),
        bound: t.bound,
    })
}

/// Squarefree `d` such that the remaining two 2-torsion points of `e` are
/// defined over ℚ(√d); 1 when all 2-torsion is already rational.
pub fn extra_two_torsion_field(e: &RationalCurve) -> Result<BigInt> {
    let q = Rationals;
    let cubic = e.two_division_cubic();
    let roots = rational_roots(&cubic)?;
    let mut distinct_roots = roots.clone();
    distinct_roots.dedup();
    match distinct_roots.len() {
        0 => domain("curve has no rational 2-torsion point"),
        3 => Ok(BigInt::one()),
        _ => {
            let lin = vec![-roots[0].clone(), Rat::one()];
            let (quad, rem) = poly::divrem(&q, &cubic, &lin);
            debug_assert!(rem.is_empty());
            let disc = &quad[1] * &quad[1] - Rat::from_integer(4.into()) * &quad[2] * &quad[0];
            if disc.is_zero() {
                return Ok(BigInt::one());
            }
            let n = disc.numer() * disc.denom();
            Ok(squarefree_decompose(&n)?.squarefree_part)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{parse_curve, parse_rational_curve, rational_curve};
    use crate::exactnum::rat;

    #[test]
    fn psi3_and_psi2_squared() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let dp = division_polynomials(&e, 3).unwrap();
        assert_eq!(dp.f[1], vec![rat(1)]);
        assert_eq!(dp.f[3], vec![rat(-1), rat(0), rat(-6), rat(0), rat(3)]);
        assert_eq!(dp.two_torsion, vec![rat(0), rat(-4), rat(0), rat(4)]);
        assert!(division_polynomials(&e, 0).is_err());
        assert!(division_polynomials(&e, 37).is_err());
    }

    #[test]
    fn psi2_squared_matches_the_curve_equation() {
        // (2y + a1x + a3)² reduced by the curve equation
        let e = rational_curve([1, -1, 1, -3, 5]).unwrap();
        let dp = division_polynomials(&e, 2).unwrap();
        for x in -5..5 {
            let x = rat(x);
            let (p, q) = e.y_quadratic(&x);
            // 4·(y² + py + q) = (2y + p)² − (p² − 4q)
            let expect = &p * &p - rat(4) * &q;
            assert_eq!(poly::eval(&Rationals, &dp.two_torsion, &x), expect);
        }
    }

    #[test]
    fn division_polynomials_vanish_on_torsion() {
        let k = QuadField::new(561).unwrap();
        let b = k.parse("35/10368*s-210/10368").unwrap();
        let c = k.parse("115/1008+10/1008*s").unwrap();
        let e = crate::curve::tate_normal(&k, &b, &c).unwrap();
        let dp = division_polynomials(&e, 11).unwrap();
        let p = e.point(k.zero(), k.zero()).unwrap();
        for m in 1..=10 {
            let q = e.multiply(m, &p).unwrap();
            assert!(k.is_zero(&poly::eval(&k, &dp.f[11], q.x().unwrap())));
        }
        assert_eq!(poly::degree(&dp.f[11]), Some(60));
    }

    #[test]
    fn phi_gives_x_of_multiples() {
        let e = rational_curve([0, 0, 1, -1, 0]).unwrap();
        let p = e.point(rat(0), rat(0)).unwrap();
        let dp = division_polynomials(&e, 6).unwrap();
        for m in 1..=5usize {
            let mp = e.multiply(m as i64, &p).unwrap();
            let x = p.x().unwrap();
            let num = poly::eval(&Rationals, &phi(&e, &dp, m), x);
            let den = poly::eval(&Rationals, &psi_squared(&e, &dp, m), x);
            assert_eq!(&num / &den, *mp.x().unwrap(), "m = {m}");
        }
    }

    /// Lutz-Nagell enumeration: integral points with y = 0 or y² | Δ on an
    /// integral short model.
    fn lutz_nagell_count(a: i64, b: i64) -> usize {
        let disc = (4 * a.pow(3) + 27 * b * b).abs();
        let mut n = 1;
        for x in -200i64..=200 {
            let r = x * x * x + a * x + b;
            if r < 0 {
                continue;
            }
            let y = (r as f64).sqrt().round() as i64;
            if y * y != r {
                continue;
            }
            if y == 0 {
                n += 1;
            } else if disc % (y * y) == 0 {
                let e = rational_curve([0, 0, 0, a, b]).unwrap();
                let p = e.point(rat(x), rat(y)).unwrap();
                if e.order_up_to(&p, 13).is_some() {
                    n += 2;
                }
            }
        }
        n
    }

    #[test]
    fn small_rational_torsion() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let t = torsion_over_q(&e).unwrap();
        assert_eq!(t.group, TorsionGroup::new(2, 2).unwrap());
        assert_eq!(t.all_points.len(), lutz_nagell_count(-1, 0));
        for (a, b) in [(0, 1), (-43 * 27, 166 * 54), (0, -432), (1, 0), (-2, 1)] {
            let e = rational_curve([0, 0, 0, a, b]).unwrap();
            let t = torsion_over_q(&e).unwrap();
            assert_eq!(t.all_points.len(), lutz_nagell_count(a, b), "[{a},{b}]");
        }
    }

    #[test]
    fn tate_normal_torsion_over_q() {
        let q = Rationals;
        let e = crate::curve::tate_normal(&q, &rat(1), &rat(1)).unwrap();
        assert_eq!(torsion_over_q(&e).unwrap().group, TorsionGroup::cyclic(5));
    }

    #[test]
    fn z11_over_q_sqrt_561() {
        let k = QuadField::new(561).unwrap();
        let e = parse_curve(
            "[893/1008-10/1008*s,-35/10368*s+210/10368,-35/10368*s+210/10368,0,0]",
            &k,
        )
        .unwrap();
        let t = torsion_over_k(&e).unwrap();
        assert_eq!(t.group, TorsionGroup::cyclic(11));
        assert_eq!(t.all_points.len(), 11);
        for p in &t.all_points {
            assert!(e.multiply(11, p).unwrap().is_infinity());
        }
    }

    #[test]
    fn extra_two_torsion_examples() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(extra_two_torsion_field(&e).unwrap(), BigInt::from(1));
        let e = rational_curve([0, 0, 0, 1, 0]).unwrap();
        assert_eq!(extra_two_torsion_field(&e).unwrap(), BigInt::from(-1));
        let e = rational_curve([0, 0, 0, 0, 2]).unwrap();
        assert!(extra_two_torsion_field(&e).is_err());
        // over Q(i) the curve x³ + x gains full 2-torsion
        let k = QuadField::new(-1).unwrap();
        let ek = rational_curve([0, 0, 0, 1, 0]).unwrap().base_change(&k);
        assert_eq!(torsion_over_k(&ek).unwrap().group.n1, 2);
        let _ = parse_rational_curve("[0,0,0,1,0]").unwrap();
    }

    #[test]
    fn group_text_round_trip() {
        for s in ["1", "11", "2x10", "4x4"] {
            assert_eq!(s.parse::<TorsionGroup>().unwrap().to_string(), s);
        }
        assert!("3x4".parse::<TorsionGroup>().is_err());
        assert!(!TorsionGroup::cyclic(17).in_quadratic_list());
        assert!(!TorsionGroup::new(3, 3).unwrap().allowed_over(5));
        assert!(TorsionGroup::new(3, 3).unwrap().allowed_over(-3));
    }
}
