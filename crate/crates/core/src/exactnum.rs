//! Big integers, rationals and the number-theoretic helpers used everywhere
//! else: Jacobi symbols, primality, factorization and squarefree parts.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Trial division bound used before Pollard rho takes over.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Default Pollard rho iteration budget per split attempt.
pub const DEFAULT_RHO_BUDGET: u64 = 4_000_000;

/// `input = squarefree_part * square_root_of_cofactor^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomp {
    pub squarefree_part: BigInt,
    pub square_root_of_cofactor: BigInt,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Domain(format!("invalid rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Domain(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Canonical text form: `p/q`, or `p` when the denominator is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Jacobi symbol `(a|n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return domain(format!("jacobi symbol needs odd positive modulus, got {n}"));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Machine-word Jacobi symbol; `n` must be odd.
pub fn jacobi_u64(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_LIMIT))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Square root modulo an odd prime (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square root modulo an odd prime of any size.
pub fn sqrt_mod_prime_big(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    if let (Some(av), Some(pv)) = (a.mod_floor(p).to_u64(), p.to_u64()) {
        return sqrt_mod_prime(av, pv).map(BigInt::from);
    }
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(a);
    }
    let one = BigInt::one();
    let pm1 = p - &one;
    let half = &pm1 >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    let mut z = BigInt::from(2);
    while z.modpow(&half, p) != pm1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != one {
            tt = &tt * &tt % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * &b % p;
    }
    Some(r)
}

const MR_BASES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin with the first 16 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let bb = BigUint::from(b);
        if *n == bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n))
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor or `None`
/// once `budget` iterations are spent.
fn pollard_rho(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
                spent += steps;
            }
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

/// Factorization of a nonzero integer (sign dropped) into prime powers,
/// sorted ascending. Fails with [`Error::Unfactored`] when a composite
/// cofactor resists Pollard rho within `rho_budget` iterations.
pub fn factor_with_budget(n: &BigInt, rho_budget: u64) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return domain("cannot factor zero");
    }
    let mut m = n.magnitude().clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut stack = Vec::new();
    if m > BigUint::one() {
        stack.push(m);
    }
    let mut residue = BigUint::one();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if c < BigUint::from(TRIAL_DIVISION_LIMIT).pow(2) || is_probable_prime(&c) {
            // Below the square of the trial bound anything left is prime.
            out.push((c, 1));
            continue;
        }
        let r = c.sqrt();
        if &r * &r == c {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match pollard_rho(&c, rho_budget) {
            Some(f) => {
                let g = &c / &f;
                stack.push(f);
                stack.push(g);
            }
            None => residue *= c,
        }
    }
    out.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in out {
        let p = BigInt::from_biguint(Sign::Plus, p);
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    if !residue.is_one() {
        return Err(Error::Unfactored {
            partial: merged,
            residue: BigInt::from_biguint(Sign::Plus, residue),
        });
    }
    Ok(merged)
}

pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    factor_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// Writes `n = s * r^2` with `s` squarefree (sign carried by `s`).
pub fn squarefree_decompose(n: &BigInt) -> Result<SquarefreeDecomp> {
    if n.is_zero() {
        return domain("squarefree decomposition of zero");
    }
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut r = BigInt::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            s *= &p;
        }
        r *= num_traits::pow(p, (e / 2) as usize);
    }
    Ok(SquarefreeDecomp {
        squarefree_part: s,
        square_root_of_cofactor: r,
    })
}

pub fn is_squarefree_i64(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `p`-adic valuation of a rational; `None` for zero.
pub fn valuation_rat(x: &Rat, p: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64)
}

/// Exact square root of a rational, if it is a square.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().magnitude().sqrt();
    let d = x.denom().magnitude().sqrt();
    if &n * &n == *x.numer().magnitude() && &d * &d == *x.denom().magnitude() {
        Some(Rat::new(
            BigInt::from_biguint(Sign::Plus, n),
            BigInt::from_biguint(Sign::Plus, d),
        ))
    } else {
        None
    }
}

/// Integer value if it fits an `i64`.
pub fn small(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residue_table_legendre(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|y| y * y % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_examples() {
        let j = |a: i64, n: i64| jacobi(&BigInt::from(a), &BigInt::from(n)).unwrap();
        assert_eq!(j(1, 3), 1);
        // 3^2 = 2 mod 7
        assert_eq!(residue_table_legendre(2, 7), 1);
        assert_eq!(j(2, 7), 1);
        assert_eq!(j(5, 9), residue_table_legendre(5, 3) * residue_table_legendre(5, 3));
        assert_eq!(j(5, 9), 1);
    }

    #[test]
    fn jacobi_rejects_even_or_nonpositive_modulus() {
        assert!(jacobi(&BigInt::from(3), &BigInt::from(8)).is_err());
        assert!(jacobi(&BigInt::from(3), &BigInt::from(0)).is_err());
        assert!(jacobi(&BigInt::from(3), &BigInt::from(-5)).is_err());
    }

    #[test]
    fn jacobi_matches_exhaustive_legendre() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -30..30 {
                assert_eq!(jacobi_u64(a, p), residue_table_legendre(a, p), "({a}|{p})");
                assert_eq!(
                    jacobi(&BigInt::from(a), &BigInt::from(p)).unwrap(),
                    residue_table_legendre(a, p)
                );
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        let sq = |n: i64| {
            let s = squarefree_decompose(&BigInt::from(n)).unwrap();
            (s.squarefree_part, s.square_root_of_cofactor)
        };
        assert_eq!(sq(12), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(sq(-4), (BigInt::from(-1), BigInt::from(2)));
        assert_eq!(sq(1065333545), (BigInt::from(1065333545), BigInt::from(1)));
        assert!(squarefree_decompose(&BigInt::zero()).is_err());
    }

    #[test]
    fn factorization_uses_rho_beyond_trial_division() {
        // two primes above the trial-division limit
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let r = BigInt::from(998_244_353u64);
        let n = &p * &q * &r * &r;
        let f = factor(&n).unwrap();
        assert_eq!(f, vec![(p, 1), (q, 1), (r, 2)]);
    }

    #[test]
    fn factorization_budget_exhaustion_is_an_error() {
        let p: BigInt = "1000000000000000003".parse().unwrap();
        let q: BigInt = "1000000000000000009".parse().unwrap();
        match factor_with_budget(&(&p * &q * 12), 1000) {
            Err(Error::Unfactored { partial, residue }) => {
                assert_eq!(partial, vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
                assert_eq!(residue, p * q);
            }
            other => panic!("expected unfactored error, got {other:?}"),
        }
    }

    #[test]
    fn rational_parse_and_format() {
        let x = parse_rat("-6/4").unwrap();
        assert_eq!(format_rat(&x), "-3/2");
        assert_eq!(format_rat(&parse_rat("10/5").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert_eq!(rat_sqrt(&rat_frac(9, 4)), Some(rat_frac(3, 2)));
        assert_eq!(rat_sqrt(&rat_frac(2, 1)), None);
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 97, 1009, 65537] {
            for a in 0..p.min(200) {
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a),
                    None => assert_eq!(jacobi_u64(a as i64, p), -1),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rationals_stay_reduced(a in -10_000i64..10_000, b in 1i64..10_000,
                                  c in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat_frac(a, b);
            let y = rat_frac(c, d);
            for z in [&x + &y, &x - &y, &x * &y] {
                prop_assert!(z.denom().is_positive());
                prop_assert!(z.numer().gcd(z.denom()).is_one());
            }
        }

        #[test]
        fn jacobi_is_multiplicative(a in -100_000i64..100_000, b in -100_000i64..100_000,
                                    n in 0u64..50_000) {
            let n = 2 * n + 1;
            prop_assert_eq!(jacobi_u64(a * b, n), jacobi_u64(a, n) * jacobi_u64(b, n));
        }

        #[test]
        fn squarefree_round_trip(n in -1_000_000_000i64..1_000_000_000) {
            prop_assume!(n != 0);
            let s = squarefree_decompose(&BigInt::from(n)).unwrap();
            let r2 = &s.square_root_of_cofactor * &s.square_root_of_cofactor;
            prop_assert_eq!(&s.squarefree_part * r2, BigInt::from(n));
            prop_assert!(is_squarefree_i64(s.squarefree_part.to_i64().unwrap()));
        }
    }
}
