//! Exact arithmetic in K = ℚ(√d), conjugation, square roots, and the
//! root finder for polynomials with coefficients in K.
//!
//! `d = 1` encodes ℚ itself; all elements then have `b = 0`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::exactnum::{
    format_rat, jacobi_u64, parse_rat, primes_up_to, rat_sqrt, sqrt_mod_prime, squarefree_decompose, Rat,
};
use crate::field::{Field, PrimeField};
use crate::poly::{self, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
}

/// `a + b√d`; the `d` lives in the [`QuadField`] the element is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
}

impl Ord for QuadElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl PartialOrd for QuadElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadElem { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        QuadElem { a, b: Rat::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rat::from_integer(n.into()))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rat(&self.a));
        }
        if self.a.is_zero() {
            return write!(f, "{}*s", format_rat(&self.b));
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*s", format_rat(&self.a), format_rat(&-&self.b))
        } else {
            write!(f, "{}+{}*s", format_rat(&self.a), format_rat(&self.b))
        }
    }
}

impl QuadField {
    /// `d` must be a nonzero squarefree integer.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 {
            return domain("quadratic field parameter d must be nonzero");
        }
        let sf = squarefree_decompose(&BigInt::from(d))?;
        if !sf.square_root_of_cofactor.is_one() {
            return domain(format!("d = {d} is not squarefree; use QuadField::normalized"));
        }
        Ok(QuadField { d })
    }

    /// Normalizes `d = s·r²`, returning the field for `s` together with `r`,
    /// so that `√d = r·√s`.
    pub fn normalized(d: i64) -> Result<(Self, i64)> {
        if d == 0 {
            return domain("quadratic field parameter d must be nonzero");
        }
        let sf = squarefree_decompose(&BigInt::from(d))?;
        let s = sf.squarefree_part.to_i64().unwrap();
        let r = sf.square_root_of_cofactor.to_i64().unwrap();
        Ok((QuadField { d: s }, r))
    }

    pub fn rationals() -> Self {
        QuadField { d: 1 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational_field(&self) -> bool {
        self.d == 1
    }

    pub fn degree(&self) -> u32 {
        if self.d == 1 {
            1
        } else {
            2
        }
    }

    pub fn elem(&self, a: Rat, b: Rat) -> QuadElem {
        if self.d == 1 {
            QuadElem::rational(a + b)
        } else {
            QuadElem::new(a, b)
        }
    }

    pub fn sqrt_d(&self) -> QuadElem {
        self.elem(Rat::zero(), Rat::one())
    }

    pub fn rat(&self, a: Rat) -> QuadElem {
        QuadElem::rational(a)
    }

    pub fn conjugate(&self, x: &QuadElem) -> QuadElem {
        x.conjugate()
    }

    pub fn norm(&self, x: &QuadElem) -> Rat {
        if self.d == 1 {
            return &x.a * &x.a;
        }
        &x.a * &x.a - Rat::from_integer(self.d.into()) * &x.b * &x.b
    }

    pub fn trace(&self, x: &QuadElem) -> Rat {
        if self.d == 1 {
            return &x.a + &x.a;
        }
        &x.a + &x.a
    }

    /// Parses the `a+b*s` coefficient syntax (`s` standing for √d). Also
    /// accepts `s`, `-s`, `b*s-a` and plain rationals.
    pub fn parse(&self, text: &str) -> Result<QuadElem> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return domain("empty field element");
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = t.as_bytes();
        for i in 1..bytes.len() {
            let c = bytes[i];
            if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'*' | b'/' | b'+' | b'-') {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        let mut a = Rat::zero();
        let mut b = Rat::zero();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            if let Some(coef) = term.strip_suffix("*s") {
                b += parse_rat(coef)?;
            } else if term == "s" {
                b += Rat::one();
            } else if term == "-s" {
                b -= Rat::one();
            } else if term.contains('s') {
                return domain(format!("invalid field element '{text}'"));
            } else {
                a += parse_rat(term)?;
            }
        }
        if self.d == 1 && !b.is_zero() {
            // √1 = 1
            a += b;
            b = Rat::zero();
        }
        Ok(QuadElem { a, b })
    }

    /// Square root in K, if the element is a square.
    pub fn sqrt(&self, x: &QuadElem) -> Option<QuadElem> {
        if x.b.is_zero() {
            if let Some(r) = rat_sqrt(&x.a) {
                return Some(self.rat(r));
            }
            if self.d == 1 {
                return None;
            }
            let dd = Rat::from_integer(self.d.into());
            return rat_sqrt(&(&x.a / &dd)).map(|t| QuadElem::new(Rat::zero(), t));
        }
        // (s + t√d)² = x  ⇔  s² + d t² = a, 2st = b  ⇒  4s⁴ − 4a s² + d b² = 0
        let n = rat_sqrt(&self.norm(x))?;
        let half = Rat::new(1.into(), 2.into());
        for cand in [(&x.a + &n) * &half, (&x.a - &n) * &half] {
            if let Some(s) = rat_sqrt(&cand) {
                if s.is_zero() {
                    continue;
                }
                let t = &x.b / (Rat::from_integer(2.into()) * &s);
                let r = QuadElem::new(s, t);
                if self.mul(&r, &r) == *x {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square(&self, x: &QuadElem) -> bool {
        self.sqrt(x).is_some()
    }

    /// All K-solutions of `y² + p·y + q = 0`, distinct and ascending.
    pub fn solve_quadratic(&self, p: &QuadElem, q: &QuadElem) -> Vec<QuadElem> {
        let disc = self.sub(&self.mul(p, p), &self.scale(4, q));
        let Some(s) = self.sqrt(&disc) else {
            return Vec::new();
        };
        let half = self.rat(Rat::new(1.into(), 2.into()));
        let mp = self.neg(p);
        let r1 = self.mul(&self.add(&mp, &s), &half);
        let r2 = self.mul(&self.sub(&mp, &s), &half);
        let mut out = vec![r1, r2];
        out.sort();
        out.dedup();
        out
    }
}

impl Field for QuadField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem::rational(Rat::zero())
    }
    fn one(&self) -> QuadElem {
        QuadElem::rational(Rat::one())
    }
    fn from_int(&self, n: &BigInt) -> QuadElem {
        QuadElem::rational(Rat::from_integer(n.clone()))
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: &x.a + &y.a,
            b: &x.b + &y.b,
        }
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem {
            a: &x.a - &y.a,
            b: &x.b - &y.b,
        }
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        if x.b.is_zero() {
            return QuadElem {
                a: &x.a * &y.a,
                b: &x.a * &y.b,
            };
        }
        if y.b.is_zero() {
            return QuadElem {
                a: &x.a * &y.a,
                b: &x.b * &y.a,
            };
        }
        let d = Rat::from_integer(self.d.into());
        QuadElem {
            a: &x.a * &y.a + d * &x.b * &y.b,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: -&x.a, b: -&x.b }
    }
    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        if self.is_zero(x) {
            return None;
        }
        if x.b.is_zero() {
            return Some(QuadElem::rational(x.a.recip()));
        }
        let n = self.norm(x);
        Some(QuadElem {
            a: &x.a / &n,
            b: -&x.b / &n,
        })
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, x: &QuadElem) -> String {
        x.to_string()
    }
}

// ---------------------------------------------------------------------------
// Root finding.
//
// A K-root u + v√d of f is located through a split prime p (√d ≡ r mod p):
// the roots of f under both embeddings √d ↦ ±r are Hensel-lifted to p^k,
// paired, and turned back into integer coordinates (D·u, D·v) by symmetric
// residues. D is a known denominator and k comes from an explicit root
// bound, so every K-root is recovered; every candidate is verified by exact
// evaluation before being returned.
// ---------------------------------------------------------------------------

struct IntPoly {
    /// coefficient pairs (A_i, B_i) standing for A_i + B_i√d
    coeffs: Vec<(BigInt, BigInt)>,
}

fn lcm_denominators(f: &[QuadElem]) -> BigInt {
    f.iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.a.denom()).lcm(c.b.denom()))
}

fn integerize(f: &[QuadElem]) -> IntPoly {
    let l = Rat::from_integer(lcm_denominators(f));
    IntPoly {
        coeffs: f
            .iter()
            .map(|c| {
                let a = &c.a * &l;
                let b = &c.b * &l;
                (a.to_integer(), b.to_integer())
            })
            .collect(),
    }
}

/// Upper bound for log2 of a positive integer.
fn log2_hi(n: &BigInt) -> f64 {
    n.bits() as f64
}

fn log2_lo(n: &BigInt) -> f64 {
    n.bits() as f64 - 1.0
}

fn sym_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

struct Embedding {
    p: u64,
    /// roots of f under √d ↦ r (mod p), and under √d ↦ −r
    roots_plus: Vec<u64>,
    roots_minus: Vec<u64>,
    r: u64,
}

fn reduce_under(ip: &IntPoly, p: u64, r: u64, sign: i64) -> Vec<u64> {
    let fp = PrimeField::new(p);
    ip.coeffs
        .iter()
        .map(|(a, b)| {
            let rr = if sign > 0 { r } else { fp.neg(&r) };
            fp.add(&fp.from_int(a), &fp.mul(&fp.from_int(b), &rr))
        })
        .collect()
}

fn roots_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let fp = PrimeField::new(p);
    (0..p).filter(|x| poly::eval(&fp, f, x) == 0).collect()
}

fn choose_embedding(k: &QuadField, ip: &IntPoly, lead_norm: &BigInt) -> Option<Embedding> {
    let d = k.d();
    let n = ip.coeffs.len() - 1;
    let mut best: Option<Embedding> = None;
    let mut tried = 0;
    let mut rejected = 0;
    for p in primes_up_to(20_000).into_iter().skip(1) {
        if rejected >= 40 {
            break;
        }
        if (p as usize) <= n && p < 50 {
            continue;
        }
        if d != 1 && jacobi_u64(d, p) != 1 {
            continue;
        }
        let pb = BigInt::from(p);
        if (lead_norm % &pb).is_zero() || (d != 1 && d.rem_euclid(p as i64) == 0) {
            continue;
        }
        let r = if d == 1 {
            1
        } else {
            sqrt_mod_prime(d.rem_euclid(p as i64) as u64, p)?
        };
        let fp = PrimeField::new(p);
        let fplus = reduce_under(ip, p, r, 1);
        if !poly::is_squarefree(&fp, &poly::trim(&fp, fplus.clone())) {
            rejected += 1;
            continue;
        }
        let fminus = if d == 1 {
            fplus.clone()
        } else {
            reduce_under(ip, p, r, -1)
        };
        if d != 1 && !poly::is_squarefree(&fp, &poly::trim(&fp, fminus.clone())) {
            rejected += 1;
            continue;
        }
        let roots_plus = roots_mod_p(&fplus, p);
        let roots_minus = if d == 1 {
            roots_plus.clone()
        } else {
            roots_mod_p(&fminus, p)
        };
        let cost = roots_plus.len() * roots_minus.len();
        let e = Embedding {
            p,
            roots_plus,
            roots_minus,
            r,
        };
        if cost == 0 {
            return Some(e);
        }
        let better = match &best {
            None => true,
            Some(b) => cost < b.roots_plus.len() * b.roots_minus.len(),
        };
        if better {
            best = Some(e);
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    best
}

pub(crate) fn hensel_sqrt(d: i64, r0: u64, p: u64, m: &BigInt) -> BigInt {
    let dd = BigInt::from(d);
    let mut r = BigInt::from(r0);
    let mut prec = BigInt::from(p);
    while prec < *m {
        prec = (&prec * &prec).min(m.clone());
        let two_r_inv = inv_mod_big(&(&r * 2), &prec).expect("p odd, p ∤ d");
        r = (&r - (&r * &r - &dd) * two_r_inv).mod_floor(&prec);
    }
    r
}

fn hensel_root(coeffs: &[BigInt], x0: u64, p: u64, m: &BigInt) -> BigInt {
    let deriv: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut x = BigInt::from(x0);
    let mut prec = BigInt::from(p);
    while prec < *m {
        prec = (&prec * &prec).min(m.clone());
        let fx = eval_mod(coeffs, &x, &prec);
        let dfx = eval_mod(&deriv, &x, &prec);
        let inv = inv_mod_big(&dfx, &prec).expect("simple root");
        x = (&x - fx * inv).mod_floor(&prec);
    }
    x
}

fn multiplicity(k: &QuadField, f: &[QuadElem], root: &QuadElem) -> usize {
    let lin = vec![k.neg(root), k.one()];
    let mut g = f.to_vec();
    let mut m = 0;
    loop {
        let (q, r) = poly::divrem(k, &g, &lin);
        if !r.is_empty() {
            return m;
        }
        m += 1;
        g = q;
    }
}

fn distinct_roots_squarefree(k: &QuadField, f: &[QuadElem], emb: Embedding) -> Vec<QuadElem> {
    let d = k.d();
    let ip = integerize(f);
    let n = ip.coeffs.len() - 1;
    let (la, lb) = &ip.coeffs[n];
    let sqrt_abs_d = (d.unsigned_abs() as f64).sqrt();
    let lead_norm = if d == 1 {
        la.abs()
    } else {
        (la * la - BigInt::from(d) * lb * lb).abs()
    };
    let hi = |(a, b): &(BigInt, BigInt)| -> f64 {
        let ha = if a.is_zero() { f64::NEG_INFINITY } else { log2_hi(a) };
        let hb = if b.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_hi(b) + sqrt_abs_d.log2()
        };
        ha.max(hb) + 1.0
    };
    let lead_lo = if d == 1 {
        log2_lo(&lead_norm)
    } else if d < 0 {
        log2_lo(&lead_norm) / 2.0
    } else {
        log2_lo(&lead_norm) - hi(&ip.coeffs[n])
    };
    let mut log_r: f64 = 0.0;
    for i in 1..=n {
        let c = &ip.coeffs[n - i];
        if c.0.is_zero() && c.1.is_zero() {
            continue;
        }
        log_r = log_r.max(1.0 + (hi(c) - lead_lo) / i as f64);
    }
    // |D·u|, |D·v| ≤ D·R with D = 2|N(lead)| (or |lead| over ℚ)
    let denom = if d == 1 { lead_norm.clone() } else { &lead_norm * 2 };
    let log_bound = log2_hi(&denom) + log_r + 2.0;
    let p = emb.p;
    let kexp = ((log_bound + 4.0) / (p as f64).log2()).ceil().max(1.0) as u32;
    let pb = BigInt::from(p);
    let m = num_traits::pow(pb, kexp as usize);
    let bound = BigInt::one() << (log_bound.ceil() as usize + 1);
    let r = if d == 1 {
        BigInt::one()
    } else {
        hensel_sqrt(d, emb.r, p, &m)
    };
    let under = |sign: i64| -> Vec<BigInt> {
        ip.coeffs
            .iter()
            .map(|(a, b)| {
                if sign > 0 {
                    (a + b * &r).mod_floor(&m)
                } else {
                    (a - b * &r).mod_floor(&m)
                }
            })
            .collect()
    };
    let cplus = under(1);
    let lifted_plus: Vec<BigInt> = emb.roots_plus.iter().map(|&x| hensel_root(&cplus, x, p, &m)).collect();
    let mut found = Vec::new();
    if d == 1 {
        for a in &lifted_plus {
            let u = sym_mod(&(a * &denom), &m);
            if u.abs() <= bound {
                let x = k.rat(Rat::new(u, denom.clone()));
                if k.is_zero(&poly::eval(k, f, &x)) {
                    found.push(x);
                }
            }
        }
        return found;
    }
    let cminus = under(-1);
    let lifted_minus: Vec<BigInt> = emb
        .roots_minus
        .iter()
        .map(|&x| hensel_root(&cminus, x, p, &m))
        .collect();
    let inv2 = inv_mod_big(&BigInt::from(2), &m).unwrap();
    let inv2r = inv_mod_big(&(&r * 2), &m).unwrap();
    for a1 in &lifted_plus {
        for a2 in &lifted_minus {
            let u = sym_mod(&((a1 + a2) * &inv2 % &m * &denom), &m);
            if u.abs() > bound {
                continue;
            }
            let v = sym_mod(&((a1 - a2) * &inv2r % &m * &denom), &m);
            if v.abs() > bound {
                continue;
            }
            let x = k.elem(Rat::new(u, denom.clone()), Rat::new(v, denom.clone()));
            if k.is_zero(&poly::eval(k, f, &x)) {
                found.push(x);
            }
        }
    }
    found
}

/// All roots of `f` lying in K, repeated by multiplicity, ascending.
pub fn roots_in_k(k: &QuadField, f: &[QuadElem]) -> Result<Vec<QuadElem>> {
    let f = poly::trim(k, f.to_vec());
    if f.is_empty() {
        return domain("roots of the zero polynomial");
    }
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    let mut work = f.clone();
    let mut emb = None;
    for attempt in 0..2 {
        let ip = integerize(&work);
        let (la, lb) = ip.coeffs.last().unwrap();
        let lead_norm = if k.d() == 1 {
            la.abs()
        } else {
            (la * la - BigInt::from(k.d()) * lb * lb).abs()
        };
        emb = choose_embedding(k, &ip, &lead_norm);
        if emb.is_some() || attempt == 1 {
            break;
        }
        // f has repeated factors over K
        work = poly::squarefree_part(k, &work);
    }
    let emb = emb.ok_or_else(|| Error::Internal("no usable split prime found".into()))?;
    let distinct = distinct_roots_squarefree(k, &work, emb);
    let mut out = Vec::new();
    for r in distinct {
        let m = if work.len() == f.len() {
            1
        } else {
            multiplicity(k, &f, &r)
        };
        out.extend(std::iter::repeat(r).take(m));
    }
    out.sort();
    Ok(out)
}

/// Rational roots of a rational polynomial, repeated by multiplicity.
pub fn rational_roots(f: &[Rat]) -> Result<Vec<Rat>> {
    let q = QuadField::rationals();
    let lifted: Poly<QuadElem> = f.iter().cloned().map(QuadElem::rational).collect();
    Ok(roots_in_k(&q, &lifted)?.into_iter().map(|x| x.a).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_frac};
    use proptest::prelude::*;

    fn qe(k: &QuadField, s: &str) -> QuadElem {
        k.parse(s).unwrap()
    }

    #[test]
    fn conjugation_and_norm() {
        let k5 = QuadField::new(5).unwrap();
        assert_eq!(k5.conjugate(&qe(&k5, "3+2*s")), qe(&k5, "3-2*s"));
        assert_eq!(k5.conjugate(&qe(&k5, "7")), qe(&k5, "7"));
        let k7 = QuadField::new(-7).unwrap();
        let x = qe(&k7, "1+s");
        assert_eq!(k7.mul(&x, &k7.conjugate(&x)), k7.rat(rat(8)));
        assert_eq!(k7.norm(&x), rat(8));
    }

    #[test]
    fn parse_and_print_round_trip() {
        let k = QuadField::new(561).unwrap();
        for s in [
            "-35/10368*s+210/10368",
            "s",
            "-s",
            "3",
            "1/2-1/3*s",
            "-893/1008+10/1008*s",
        ] {
            let x = qe(&k, s);
            assert_eq!(qe(&k, &x.to_string()), x, "{s}");
        }
        assert_eq!(qe(&k, "210/10368-35/10368*s").to_string(), "35/1728-35/10368*s");
        assert!(k.parse("2*t").is_err());
        assert!(QuadField::new(12).is_err());
        assert_eq!(QuadField::normalized(12).unwrap(), (QuadField::new(3).unwrap(), 2));
    }

    #[test]
    fn roots_examples() {
        let k = QuadField::new(561).unwrap();
        let f = vec![k.rat(rat(-561)), k.zero(), k.one()];
        assert_eq!(roots_in_k(&k, &f).unwrap(), vec![qe(&k, "-s"), qe(&k, "s")]);
        let g = vec![k.one(), k.zero(), k.one()];
        assert!(roots_in_k(&k, &g).unwrap().is_empty());
        for d in [1, -1, 2, 561, -3239] {
            let k = QuadField::new(d).unwrap();
            let f = vec![k.zero(), k.rat(rat(-1)), k.zero(), k.one()];
            let r = roots_in_k(&k, &f).unwrap();
            assert_eq!(r, vec![k.rat(rat(-1)), k.zero(), k.one()]);
            for x in &r {
                assert!(k.is_zero(&poly::eval(&k, &f, x)));
            }
        }
        assert!(roots_in_k(&k, &[]).is_err());
    }

    #[test]
    fn roots_with_quadratic_coefficients_and_multiplicity() {
        let k = QuadField::new(-7).unwrap();
        let r1 = qe(&k, "6*s-98");
        let r2 = qe(&k, "1/3+5/4*s");
        let lin = |r: &QuadElem| vec![k.neg(r), k.one()];
        let f = poly::mul(&k, &poly::mul(&k, &lin(&r1), &lin(&r1)), &lin(&r2));
        let f = poly::mul(&k, &f, &vec![k.one(), k.zero(), k.one()]);
        let mut want = vec![r1.clone(), r1, r2];
        want.sort();
        assert_eq!(roots_in_k(&k, &f).unwrap(), want);
    }

    #[test]
    fn solve_quadratic_examples() {
        let q = QuadField::rationals();
        assert_eq!(
            q.solve_quadratic(&q.zero(), &q.rat(rat(-1))),
            vec![q.rat(rat(-1)), q.rat(rat(1))]
        );
        let k2 = QuadField::new(2).unwrap();
        // (1+√2)² = 3+2√2
        let sols = k2.solve_quadratic(&k2.zero(), &k2.neg(&qe(&k2, "3+2*s")));
        assert_eq!(sols, vec![qe(&k2, "-1-s"), qe(&k2, "1+s")]);
        let k5 = QuadField::new(5).unwrap();
        assert!(k5.solve_quadratic(&k5.one(), &k5.one()).is_empty());
        assert!(!k5.is_square(&k5.rat(rat(-3))));
        let km3 = QuadField::new(-3).unwrap();
        assert_eq!(km3.solve_quadratic(&km3.one(), &km3.one()).len(), 2);
    }

    #[test]
    fn sqrt_of_pure_surd_multiple() {
        let k = QuadField::new(3).unwrap();
        let r = k.sqrt(&k.rat(rat(12))).unwrap();
        assert_eq!(k.mul(&r, &r), k.rat(rat(12)));
        let x = k.sqrt(&k.rat(rat_frac(3, 4))).unwrap();
        assert_eq!(x, qe(&k, "1/2*s"));
    }

    proptest! {
        #[test]
        fn conjugation_is_a_ring_involution(a in -50i64..50, b in -50i64..50, c in -50i64..50,
                                             e in -50i64..50, den in 1i64..20) {
            let k = QuadField::new(-7).unwrap();
            let x = k.elem(rat_frac(a, den), rat(b));
            let y = k.elem(rat(c), rat_frac(e, den));
            prop_assert_eq!(k.conjugate(&k.conjugate(&x)), x.clone());
            prop_assert_eq!(k.conjugate(&k.add(&x, &y)), k.add(&k.conjugate(&x), &k.conjugate(&y)));
            prop_assert_eq!(k.conjugate(&k.mul(&x, &y)), k.mul(&k.conjugate(&x), &k.conjugate(&y)));
            prop_assert!(k.mul(&x, &k.conjugate(&x)).is_rational());
        }

        #[test]
        fn rational_roots_of_products_of_linear_factors(
            roots in proptest::collection::vec((-40i64..40, 1i64..12), 1..6)) {
            let q = QuadField::rationals();
            let mut f = vec![q.one()];
            let mut want: Vec<Rat> = Vec::new();
            for (n, d) in &roots {
                let r = rat_frac(*n, *d);
                want.push(r.clone());
                f = poly::mul(&q, &f, &vec![q.rat(-r), q.one()]);
            }
            want.sort();
            let got = rational_roots(&f.iter().map(|c| c.a.clone()).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(got, want);
        }
    }
}
