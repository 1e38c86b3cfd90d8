//! Reduction of curves modulo primes, point counting over 𝔽ₚ, and cached
//! tables of Frobenius traces.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::curve::{Curve, KCurve, RationalCurve};
use crate::error::{domain, Error, Result};
use crate::exactnum::{factor, primes_up_to, sqrt_mod_prime, Rat};
use crate::field::{Field, PrimeField};

/// Naive counting is used below this size.
pub const NAIVE_LIMIT: u64 = 1 << 10;

/// Outcome of reducing a curve at a prime.
#[derive(Clone, Debug, PartialEq)]
pub enum Reduction {
    Good(Curve<PrimeField>),
    Bad,
}

impl Reduction {
    pub fn good(self) -> Option<Curve<PrimeField>> {
        match self {
            Reduction::Good(c) => Some(c),
            Reduction::Bad => None,
        }
    }
}

/// An integral model `[u⁻¹ scaled]` of a curve over ℚ: `a_i' = u^i a_i`,
/// with `u` as small as possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    pub a: [BigInt; 5],
    pub u: BigInt,
}

const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];

/// Smallest `u` with `u^{w_i}·c_i` integral for every entry.
fn scaling_for(denoms: &[(BigInt, u32)]) -> BigInt {
    let mut u = BigInt::one();
    let mut primes: Vec<BigInt> = Vec::new();
    for (d, _) in denoms {
        if d.is_one() {
            continue;
        }
        for (p, _) in factor(d).expect("denominators of curve coefficients factor") {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    for p in primes {
        let mut e = 0u32;
        for (d, w) in denoms {
            let v = crate::exactnum::valuation(d, &p);
            e = e.max(v.div_ceil(*w));
        }
        u *= num_traits::pow(p, e as usize);
    }
    u
}

pub fn integral_model(e: &RationalCurve) -> IntegralModel {
    let denoms: Vec<(BigInt, u32)> = e
        .coeffs()
        .iter()
        .zip(WEIGHTS)
        .map(|(c, w)| (c.denom().clone(), w))
        .collect();
    let u = scaling_for(&denoms);
    let a = std::array::from_fn(|i| {
        let c = &e.coeffs()[i] * Rat::from_integer(num_traits::pow(u.clone(), WEIGHTS[i] as usize));
        debug_assert!(c.is_integer());
        c.to_integer()
    });
    IntegralModel { a, u }
}

/// Integral scaling of a curve over ℚ(√d): coefficients become
/// `A_i + B_i√d` with integers `A_i, B_i`.
pub fn integral_model_k(e: &KCurve) -> ([(BigInt, BigInt); 5], BigInt) {
    let denoms: Vec<(BigInt, u32)> = e
        .coeffs()
        .iter()
        .zip(WEIGHTS)
        .map(|(c, w)| (c.a.denom().lcm(c.b.denom()), w))
        .collect();
    let u = scaling_for(&denoms);
    let a = std::array::from_fn(|i| {
        let s = Rat::from_integer(num_traits::pow(u.clone(), WEIGHTS[i] as usize));
        let c = &e.coeffs()[i];
        ((&c.a * &s).to_integer(), (&c.b * &s).to_integer())
    });
    (a, u)
}

fn reduce_coeffs(f: PrimeField, a: [u64; 5]) -> Reduction {
    match Curve::new(f, a) {
        Ok(c) => Reduction::Good(c),
        Err(_) => Reduction::Bad,
    }
}

/// Reduces the integral model of `e` modulo `p`.
pub fn reduce_mod_p(e: &RationalCurve, p: u64) -> Reduction {
    reduce_model(&integral_model(e), p)
}

pub fn reduce_model(m: &IntegralModel, p: u64) -> Reduction {
    let f = PrimeField::new(p);
    reduce_coeffs(f, std::array::from_fn(|i| f.from_int(&m.a[i])))
}

/// Reduction of a curve over ℚ(√d) at the prime above a split `p`
/// determined by `√d ↦ r (mod p)`.
pub fn reduce_k_mod_p(model: &[(BigInt, BigInt); 5], p: u64, r: u64) -> Reduction {
    let f = PrimeField::new(p);
    let rr = r % p;
    reduce_coeffs(
        f,
        std::array::from_fn(|i| {
            let (a, b) = &model[i];
            f.add(&f.from_int(a), &f.mul(&f.from_int(b), &rr))
        }),
    )
}

/// Square-root of `d` modulo an odd split prime, if `p` splits in ℚ(√d).
pub fn split_root(d: i64, p: u64) -> Option<u64> {
    let dm = d.rem_euclid(p as i64) as u64;
    if dm == 0 {
        return None;
    }
    sqrt_mod_prime(dm, p).filter(|r| (*r as u128 * *r as u128 % p as u128) as u64 == dm)
}

fn legendre_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for y in 1..p {
        t[(y * y % p) as usize] = 1;
    }
    t
}

/// `#E(𝔽ₚ)` by direct enumeration.
pub fn count_points_naive(e: &Curve<PrimeField>) -> u64 {
    let f = e.field();
    let p = f.p();
    if p == 2 {
        let mut n = 1;
        for x in 0..2 {
            for y in 0..2 {
                if e.is_on_curve(&x, &y) {
                    n += 1;
                }
            }
        }
        return n;
    }
    // y² + h·y = g has 1 + χ(h² + 4g) solutions, and h² + 4g is the
    // 2-division cubic.
    let cubic = e.two_division_cubic();
    let chi = legendre_table(p);
    let mut n: i64 = p as i64 + 1;
    for x in 0..p {
        let v = crate::poly::eval(f, &cubic, &x);
        n += chi[v as usize] as i64;
    }
    n as u64
}

/// Affine arithmetic on `y² = x³ + Ax + B` over 𝔽ₚ, kept local for speed.
#[derive(Clone, Copy)]
struct Short {
    p: u64,
    a: u64,
}

type Pt = Option<(u64, u64)>;

impl Short {
    fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.p as u128) as u64
    }
    fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            self.p - (y - x)
        }
    }
    fn add_mod(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.p as u128) as u64
    }
    fn inv(&self, x: u64) -> u64 {
        crate::exactnum::inv_mod(x, self.p).expect("invertible")
    }
    fn neg(&self, q: Pt) -> Pt {
        q.map(|(x, y)| (x, if y == 0 { 0 } else { self.p - y }))
    }
    fn add(&self, p1: Pt, p2: Pt) -> Pt {
        let (x1, y1) = match p1 {
            None => return p2,
            Some(c) => c,
        };
        let (x2, y2) = match p2 {
            None => return p1,
            Some(c) => c,
        };
        let l = if x1 == x2 {
            if self.add_mod(y1, y2) == 0 {
                return None;
            }
            let num = self.add_mod(self.mul(3, self.mul(x1, x1)), self.a);
            self.mul(num, self.inv(self.mul(2, y1)))
        } else {
            self.mul(self.sub(y2, y1), self.inv(self.sub(x2, x1)))
        };
        let x3 = self.sub(self.sub(self.mul(l, l), x1), x2);
        let y3 = self.sub(self.mul(l, self.sub(x1, x3)), y1);
        Some((x3, y3))
    }
    fn times(&self, n: u64, q: Pt) -> Pt {
        let mut acc = None;
        let mut base = q;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            n >>= 1;
        }
        acc
    }
}

fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `#E(𝔽ₚ)` by baby-step giant-step in the Hasse interval, falling back to
/// enumeration when eight random points leave the order ambiguous.
pub fn count_points_bsgs(e: &Curve<PrimeField>) -> u64 {
    let f = e.field();
    let p = f.p();
    if p <= 3 {
        return count_points_naive(e);
    }
    let inv = e.invariants();
    let a = f.mul(&f.from_i64(-27), &inv.c4);
    let b = f.mul(&f.from_i64(-54), &inv.c6);
    let sh = Short { p, a };
    let rhs = |x: u64| sh.add_mod(sh.add_mod(sh.mul(x, sh.mul(x, x)), sh.mul(a, x)), b);

    let w = 2 * (p as f64).sqrt().ceil() as u64 + 1;
    let lo = (p + 1).saturating_sub(w);
    let hi = p + 1 + w;
    let m = ((hi - lo + 1) as f64).sqrt().ceil() as u64;

    let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x5eed);
    let mut l: u64 = 1;
    for _ in 0..8 {
        let pt = loop {
            let x = rng.gen_range(0..p);
            if let Some(y) = sqrt_mod_prime(rhs(x), p) {
                break Some((x, y));
            }
        };
        // baby steps j·P for 0 ≤ j < m
        let mut baby = std::collections::HashMap::with_capacity(m as usize);
        let mut cur: Pt = None;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = sh.add(cur, pt);
        }
        let giant = sh.neg(sh.times(m, pt));
        let mut t = sh.neg(sh.times(lo, pt));
        let mut found = None;
        let mut i = 0;
        while i * m <= hi - lo {
            if let Some(&j) = baby.get(&t) {
                found = Some(lo + i * m + j);
                break;
            }
            t = sh.add(t, giant);
            i += 1;
        }
        let Some(mut ord) = found else {
            return count_points_naive(e);
        };
        for q in prime_factors_u64(ord) {
            while ord % q == 0 && sh.times(ord / q, pt).is_none() {
                ord /= q;
            }
        }
        l = l.lcm(&ord);
        let first = lo.div_ceil(l) * l;
        if first <= hi && first + l > hi {
            return first;
        }
    }
    count_points_naive(e)
}

pub fn count_points(e: &Curve<PrimeField>) -> u64 {
    if e.field().p() < NAIVE_LIMIT {
        count_points_naive(e)
    } else {
        count_points_bsgs(e)
    }
}

pub fn trace_of_frobenius(e: &Curve<PrimeField>) -> i64 {
    e.field().p() as i64 + 1 - count_points(e) as i64
}

/// `#E(𝔽_{p^k})` for `k ∈ {1, 2}` from the trace.
pub fn count_points_ext(a_p: i64, p: u64, k: u32) -> Result<u128> {
    let pi = p as i128;
    let a = a_p as i128;
    if a * a > 4 * pi {
        return domain(format!("|a_p| = {} exceeds the Hasse bound at p = {p}", a.abs()));
    }
    match k {
        1 => Ok((pi + 1 - a) as u128),
        2 => Ok((pi * pi + 1 - (a * a - 2 * pi)) as u128),
        _ => domain("extension degree must be 1 or 2"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApEntry {
    pub p: u64,
    /// Trace of Frobenius; 0 and meaningless for bad primes.
    pub a_p: i64,
    pub good: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApTable {
    pub curve_id: String,
    pub pmax: u64,
    pub entries: Vec<ApEntry>,
}

/// Stable identifier for a rational curve: hex SHA-256 of its coefficient
/// string, truncated to 16 digits.
pub fn curve_hash(e: &RationalCurve) -> String {
    let digest = Sha256::digest(e.format_coeffs().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn ap_table(e: &RationalCurve, pmax: u64) -> ApTable {
    let model = integral_model(e);
    let primes = if pmax < 2 { Vec::new() } else { primes_up_to(pmax) };
    let entries = primes
        .par_iter()
        .map(|&p| match reduce_model(&model, p) {
            Reduction::Good(c) => ApEntry {
                p,
                a_p: trace_of_frobenius(&c),
                good: true,
            },
            Reduction::Bad => ApEntry { p, a_p: 0, good: false },
        })
        .collect();
    ApTable {
        curve_id: curve_hash(e),
        pmax,
        entries,
    }
}

impl ApTable {
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&format!("{} {} {}\n", e.p, e.a_p, u8::from(e.good)));
        }
        s
    }

    pub fn parse(curve_id: &str, pmax: u64, text: &str) -> Result<ApTable> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |m: &str| Error::Parse {
                line: i + 1,
                msg: m.to_string(),
            };
            let mut it = line.split_whitespace();
            let p = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("prime"))?;
            let a_p = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("a_p"))?;
            let good = match it.next() {
                Some("1") => true,
                Some("0") => false,
                _ => return Err(bad("good flag")),
            };
            entries.push(ApEntry { p, a_p, good });
        }
        Ok(ApTable {
            curve_id: curve_id.to_string(),
            pmax,
            entries,
        })
    }

    /// SHA-256 of the serialized table, in hex.
    pub fn digest(&self) -> String {
        let d = Sha256::digest(self.serialize().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn get(&self, p: u64) -> Option<&ApEntry> {
        self.entries
            .binary_search_by_key(&p, |e| e.p)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn cache_path(dir: &Path, curve_id: &str, pmax: u64) -> PathBuf {
        dir.join(format!("ap-{curve_id}-{pmax}.txt"))
    }

    /// Loads the table from `dir` if a cached copy exists, else builds and
    /// stores it.
    pub fn load_or_build(e: &RationalCurve, pmax: u64, dir: &Path) -> Result<ApTable> {
        let id = curve_hash(e);
        let path = Self::cache_path(dir, &id, pmax);
        if let Ok(text) = fs::read_to_string(&path) {
            match ApTable::parse(&id, pmax, &text) {
                Ok(t) => return Ok(t),
                Err(err) => log::warn!("ignoring corrupt cache {}: {err}", path.display()),
            }
        }
        let t = ap_table(e, pmax);
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(t.serialize().as_bytes())?;
        fs::rename(&tmp, &path)?;
        Ok(t)
    }
}

/// Good odd primes up to `bound` for the integral model, with their point
/// counts.
pub fn good_counts(e: &RationalCurve, bound: u64) -> Vec<(u64, i64, u64)> {
    let model = integral_model(e);
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2)
        .filter_map(|p| match reduce_model(&model, p) {
            Reduction::Good(c) => {
                let n = count_points(&c);
                Some((p, p as i64 + 1 - n as i64, n))
            }
            Reduction::Bad => None,
        })
        .collect()
}

/// Residue of `x` at the prime above `p` selected by `√d ↦ r`, if `x` is
/// integral there.
pub fn reduce_k_elem(x: &crate::quadfield::QuadElem, p: u64, r: u64) -> Option<u64> {
    let f = PrimeField::new(p);
    let a = f.from_rat(&x.a)?;
    let b = f.from_rat(&x.b)?;
    Some(f.add(&a, &f.mul(&b, &(r % p))))
}

pub fn big_to_u64(n: &BigInt) -> Option<u64> {
    if n.is_negative() {
        None
    } else {
        n.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{parse_rational_curve, rational_curve};
    use crate::exactnum::jacobi_u64;

    fn brute(e: &Curve<PrimeField>) -> u64 {
        let p = e.field().p();
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if e.is_on_curve(&x, &y) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn small_examples() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let r5 = reduce_mod_p(&e, 5).good().unwrap();
        assert_eq!(*r5.discriminant(), 4);
        assert_eq!(count_points(&r5), 8);
        assert_eq!(reduce_mod_p(&e, 2), Reduction::Bad);
        let e1 = rational_curve([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(count_points(&reduce_mod_p(&e1, 5).good().unwrap()), 6);
    }

    #[test]
    fn half_coefficient_scales_to_a_good_model() {
        let e = parse_rational_curve("[0,0,0,1/2,1]").unwrap();
        let m = integral_model(&e);
        assert_eq!(m.u, BigInt::from(2));
        let r = reduce_mod_p(&e, 3).good().unwrap();
        // the alternative scaling u = 4 gives an isomorphic model mod 3
        let alt: [u64; 5] = [0, 0, 0, 2 * 256 % 3, 4096 % 3];
        let alt = Curve::new(PrimeField::new(3), alt).unwrap();
        assert_eq!(count_points(&r), brute(&alt));
    }

    #[test]
    fn ap_table_of_x3_minus_x() {
        let e = rational_curve([0, 0, 0, -1, 0]).unwrap();
        let t = ap_table(&e, 5);
        assert_eq!(
            t.entries,
            vec![
                ApEntry {
                    p: 2,
                    a_p: 0,
                    good: false
                },
                ApEntry {
                    p: 3,
                    a_p: 0,
                    good: true
                },
                ApEntry {
                    p: 5,
                    a_p: -2,
                    good: true
                },
            ]
        );
        assert!(ap_table(&e, 1).entries.is_empty());
        assert_eq!(ApTable::parse(&t.curve_id, 5, &t.serialize()).unwrap(), t);
    }

    #[test]
    fn extension_counts() {
        assert_eq!(count_points_ext(-2, 5, 2).unwrap(), 32);
        assert_eq!(count_points_ext(0, 7, 2).unwrap(), 64);
        assert_eq!(count_points_ext(3, 7, 1).unwrap(), 5);
        assert!(count_points_ext(6, 7, 1).is_err());
    }

    #[test]
    fn twist_traces_are_legendre_multiples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let primes = primes_up_to(300);
        let mut done = 0;
        while done < 100 {
            let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-9..10));
            let Ok(e) = rational_curve(a) else { continue };
            let d = [-7i64, -3, -1, 2, 3, 5, 6, 7, 10, 11, -11, 13][rng.gen_range(0..12)];
            let t = e.quadratic_twist_i64(d).unwrap();
            let p = primes[rng.gen_range(1..primes.len())];
            if d.rem_euclid(p as i64) == 0 {
                continue;
            }
            let (Some(r), Some(rt)) = (reduce_mod_p(&e, p).good(), reduce_mod_p(&t, p).good()) else {
                continue;
            };
            assert_eq!(
                trace_of_frobenius(&rt),
                jacobi_u64(d, p) as i64 * trace_of_frobenius(&r),
                "{e} d={d} p={p}"
            );
            done += 1;
        }
    }

    #[test]
    fn naive_and_bsgs_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let primes: Vec<u64> = primes_up_to(1 << 14).into_iter().filter(|&p| p > 1 << 10).collect();
        let mut n = 0;
        while n < 50 {
            let p = primes[rng.gen_range(0..primes.len())];
            let f = PrimeField::new(p);
            let a: [u64; 5] = std::array::from_fn(|_| rng.gen_range(0..p));
            let Ok(e) = Curve::new(f, a) else { continue };
            let c = count_points_bsgs(&e);
            assert_eq!(c, count_points_naive(&e), "p = {p}");
            let ap = p as i64 + 1 - c as i64;
            assert!((ap * ap) as u64 <= 4 * p);
            n += 1;
        }
    }

    #[test]
    fn naive_count_matches_brute_force() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = PrimeField::new(p);
            for a1 in 0..p.min(3) {
                for a6 in 0..p {
                    if let Ok(e) = Curve::new(f, [a1, 1 % p, a1, (p - 1) % p, a6]) {
                        assert_eq!(count_points_naive(&e), brute(&e), "p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("ellquad-ap-{}", std::process::id()));
        let e = rational_curve([0, 0, 1, -1, 0]).unwrap();
        let t1 = ApTable::load_or_build(&e, 200, &dir).unwrap();
        let t2 = ApTable::load_or_build(&e, 200, &dir).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1, ap_table(&e, 200));
        fs::remove_dir_all(&dir).ok();
    }
}
