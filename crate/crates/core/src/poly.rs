//! Dense univariate polynomials over a [`Field`], coefficients stored from
//! the constant term upward. The zero polynomial is the empty vector.

use crate::field::Field;

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, mut p: Poly<F::Elem>) -> Poly<F::Elem> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F::Elem> {
    trim(f, vec![c])
}

/// The monomial `c * x^k`.
pub fn monomial<F: Field>(f: &F, c: F::Elem, k: usize) -> Poly<F::Elem> {
    let mut v = vec![f.zero(); k];
    v.push(c);
    trim(f, v)
}

pub fn from_coeffs<F: Field>(f: &F, c: Vec<F::Elem>) -> Poly<F::Elem> {
    trim(f, c)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Poly<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(c, x)).collect())
}

pub fn eval<F: Field>(f: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F::Elem> {
    trim(
        f,
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale(i as i64, c))
            .collect(),
    )
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Poly<F::Elem> = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); a.len() - db];
    for i in (db..a.len()).rev() {
        if f.is_zero(&r[i]) {
            continue;
        }
        let c = f.mul(&r[i], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = f.sub(&r[k], &f.mul(&c, bj));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn monic<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F::Elem> {
    match p.last() {
        None => Vec::new(),
        Some(l) => scale(f, &f.inv(l).unwrap(), p),
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(f, &a, &b);
        a = b;
        b = monic(f, &r);
    }
    monic(f, &a)
}

/// Product of the distinct irreducible factors (characteristic zero, or
/// degree below the characteristic).
pub fn squarefree_part<F: Field>(f: &F, p: &[F::Elem]) -> Poly<F::Elem> {
    let d = derivative(f, p);
    if d.is_empty() {
        return monic(f, p);
    }
    let g = gcd(f, p, &d);
    monic(f, &divrem(f, p, &g).0)
}

pub fn is_squarefree<F: Field>(f: &F, p: &[F::Elem]) -> bool {
    let d = derivative(f, p);
    !d.is_empty() && degree(&gcd(f, p, &d)) == Some(0)
}

pub fn map<F: Field, G: Field>(g: &G, p: &[F::Elem], phi: impl Fn(&F::Elem) -> G::Elem) -> Poly<G::Elem> {
    trim(g, p.iter().map(phi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn divrem_and_gcd_over_q() {
        let q = Rationals;
        // (x-1)(x+2) and (x-1)(x-3)
        let a = vec![rat(-2), rat(1), rat(1)];
        let b = vec![rat(3), rat(-4), rat(1)];
        assert_eq!(gcd(&q, &a, &b), vec![rat(-1), rat(1)]);
        let (qq, r) = divrem(&q, &a, &b);
        assert_eq!(qq, vec![rat(1)]);
        assert_eq!(add(&q, &mul(&q, &qq, &b), &r), a);
    }

    #[test]
    fn squarefree_part_removes_repeats() {
        let f = PrimeField::new(101);
        let lin = vec![f.from_i64(-5), 1];
        let sq = mul(&f, &lin, &lin);
        let p = mul(&f, &sq, &vec![3, 1]);
        assert!(!is_squarefree(&f, &p));
        assert_eq!(squarefree_part(&f, &p), mul(&f, &lin, &vec![3, 1]));
    }
}
