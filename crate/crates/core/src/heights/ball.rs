//! Midpoint-radius ("ball") arithmetic over big integers.
//!
//! A [`Ball`] stands for every real in `[(mid − rad)·2^exp, (mid + rad)·2^exp]`.
//! Every operation returns a ball containing all possible results, so
//! rounding, truncated series and propagated input error are all folded
//! into the radius.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::Rat;

/// Radius bits kept after normalization; more would only slow things down.
const RAD_BITS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    exp: i64,
    prec: u64,
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

impl Ball {
    pub fn zero(prec: u64) -> Ball {
        Ball {
            mid: BigInt::zero(),
            rad: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int(n: &BigInt, prec: u64) -> Ball {
        Ball {
            mid: n.clone(),
            rad: BigUint::zero(),
            exp: 0,
            prec,
        }
        .normalize()
    }

    pub fn from_i64(n: i64, prec: u64) -> Ball {
        Ball::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rat(x: &Rat, prec: u64) -> Ball {
        if x.is_integer() {
            return Ball::from_int(x.numer(), prec);
        }
        let n = Ball::from_int(x.numer(), prec + 8);
        let d = Ball::from_int(x.denom(), prec + 8);
        n.div(&d).expect("nonzero denominator").with_prec(prec)
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt_int(n: &BigInt, prec: u64) -> Ball {
        assert!(!n.is_negative());
        let shift = 2 * (prec + 2);
        let s = (n << shift).sqrt();
        Ball {
            mid: s,
            rad: BigUint::one(),
            exp: -((prec + 2) as i64),
            prec,
        }
        .normalize()
    }

    /// Exact multiple of a power of two.
    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u64) -> Ball {
        self.prec = prec;
        self.normalize()
    }

    pub fn add_error(&self, err: &Ball) -> Ball {
        let e = err.abs_upper_ball();
        let mut out = self.clone();
        let (a, b) = align(&out, &e);
        out.rad = a.rad + b.mid.magnitude() + b.rad;
        out.mid = a.mid;
        out.exp = a.exp;
        out.normalize()
    }

    fn normalize(self) -> Ball {
        let k = self
            .mid
            .bits()
            .saturating_sub(self.prec)
            .max(self.rad.bits().saturating_sub(RAD_BITS));
        if k == 0 {
            return self;
        }
        // floor(mid / 2^k) is within one new ulp of mid
        let mid = self.mid >> k;
        let rad = ceil_div(&self.rad, &(BigUint::one() << k)) + 1u32;
        Ball {
            mid,
            rad,
            exp: self.exp + k as i64,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            ..self.clone()
        }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let (a, b) = align(self, o);
        Ball {
            mid: a.mid + b.mid,
            rad: a.rad + b.rad,
            exp: a.exp,
            prec: self.prec.max(o.prec),
        }
        .normalize()
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let am = self.mid.magnitude();
        let bm = o.mid.magnitude();
        Ball {
            mid: &self.mid * &o.mid,
            rad: am * &o.rad + bm * &self.rad + &self.rad * &o.rad,
            exp: self.exp + o.exp,
            prec: self.prec.max(o.prec),
        }
        .normalize()
    }

    pub fn mul_int(&self, n: i64) -> Ball {
        let k = BigUint::from(n.unsigned_abs());
        Ball {
            mid: &self.mid * n,
            rad: &self.rad * k,
            exp: self.exp,
            prec: self.prec,
        }
        .normalize()
    }

    pub fn square(&self) -> Ball {
        self.mul(self)
    }

    /// Quotient; `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        let ym = o.mid.magnitude();
        if ym <= &o.rad {
            return None;
        }
        let prec = self.prec.max(o.prec);
        let s = (prec + 2 + o.mid.bits()).saturating_sub(self.mid.bits());
        let num = &self.mid << s;
        let q = num.div_floor(&o.mid);
        let qa = q.magnitude() + 1u32;
        let denom = ym - &o.rad;
        let err = ceil_div(&((&self.rad << s) + &qa * &o.rad), &denom) + 1u32;
        Some(
            Ball {
                mid: q,
                rad: err,
                exp: self.exp - o.exp - s as i64,
                prec,
            }
            .normalize(),
        )
    }

    pub fn div_int(&self, n: i64) -> Ball {
        self.div(&Ball::from_i64(n, self.prec)).expect("nonzero integer")
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid.magnitude() > &self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.magnitude() > &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    /// Exact upper bound of `|x|` over the ball, as a zero-radius ball.
    pub fn abs_upper_ball(&self) -> Ball {
        Ball {
            mid: BigInt::from_biguint(Sign::Plus, self.mid.magnitude() + &self.rad),
            rad: BigUint::zero(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// The radius alone, as a zero-radius ball.
    pub fn radius(&self) -> Ball {
        Ball {
            mid: BigInt::from_biguint(Sign::Plus, self.rad.clone()),
            rad: BigUint::zero(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn midpoint(&self) -> Ball {
        Ball {
            rad: BigUint::zero(),
            ..self.clone()
        }
    }

    /// Upper bound of the radius as a float (rounded upward).
    pub fn radius_f64(&self) -> f64 {
        if self.rad.is_zero() {
            return 0.0;
        }
        let v = big_to_f64(&BigInt::from_biguint(Sign::Plus, self.rad.clone()), self.exp);
        let up = v * (1.0 + 1e-12);
        if up == 0.0 {
            f64::MIN_POSITIVE
        } else {
            up
        }
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.mid, self.exp)
    }

    /// Compares two balls; `None` when they overlap.
    pub fn cmp_certain(&self, o: &Ball) -> Option<Ordering> {
        let d = self.sub(o);
        if d.is_positive() {
            Some(Ordering::Greater)
        } else if d.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Natural logarithm; `None` unless the ball is certainly positive.
    pub fn ln(&self) -> Option<Ball> {
        if !self.is_positive() {
            return None;
        }
        let prec = self.prec;
        let wp = prec + 16;
        // x = f · 2^k with f ∈ [1/√2, √2)
        let b = self.mid.bits() as i64;
        let mut k = self.exp + b - 1;
        let mut f = Ball {
            mid: self.mid.clone(),
            rad: BigUint::zero(),
            exp: 1 - b,
            prec: wp,
        };
        // √2 ≈ 1.41421356 < 181/128
        if f.mid.clone() * 128 > BigInt::from(181) << (b - 1) as u64 {
            f = f.mul_pow2(-1);
            k += 1;
        }
        let z = f.sub(&Ball::from_i64(1, wp)).div(&f.add(&Ball::from_i64(1, wp)))?;
        let ln_f = atanh_series(&z, wp).mul_int(2);
        let mut out = ln_f.add(&ln2(wp).mul_int(k));
        // |ln x − ln mid| ≤ rad / (mid − rad)
        let rel = self.radius().div(&self.midpoint().sub(&self.radius()))?;
        out = out.add_error(&rel);
        Some(out.with_prec(prec))
    }

    /// Decimal rendering with `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10).pow(digits as u32);
        let scaled = &self.mid * &ten;
        let v = if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            let sh = (-self.exp) as u64;
            // round to nearest
            (scaled + (BigInt::one() << (sh.max(1) - 1))) >> sh
        };
        let neg = v.is_negative();
        let s = v.magnitude().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }
}

fn big_to_f64(m: &BigInt, exp: i64) -> f64 {
    let b = m.bits() as i64;
    let sh = (b - 60).max(0);
    let top = (m >> sh as u64).to_f64().unwrap_or(0.0);
    top * 2f64.powi((exp + sh).clamp(-2000, 2000) as i32)
}

fn align(a: &Ball, b: &Ball) -> (Ball, Ball) {
    match a.exp.cmp(&b.exp) {
        Ordering::Equal => (a.clone(), b.clone()),
        Ordering::Greater => {
            let s = (a.exp - b.exp) as u64;
            (
                Ball {
                    mid: &a.mid << s,
                    rad: &a.rad << s,
                    exp: b.exp,
                    prec: a.prec,
                },
                b.clone(),
            )
        }
        Ordering::Less => {
            let (y, x) = align(b, a);
            (x, y)
        }
    }
}

/// `atanh z = z + z³/3 + z⁵/5 + …` for `|z| ≤ 1/3`, with the tail bound.
fn atanh_series(z: &Ball, prec: u64) -> Ball {
    let z2 = z.square();
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut n: i64 = 1;
    let eps = Ball::from_i64(1, 64).mul_pow2(-(prec as i64) - 4);
    // each step gains more than 2·log2(3) bits
    for _ in 0..prec / 3 + 2 {
        term = term.mul(&z2);
        n += 2;
        sum = sum.add(&term.div_int(n));
        if term.abs_upper_ball().sub(&eps).is_negative() {
            break;
        }
    }
    // tail ≤ |term·z²| / (1 − z²) ≤ 2·|term|
    let tail = term.abs_upper_ball().mul_int(2);
    sum.add_error(&tail)
}

static LN2_CACHE: Mutex<Option<Ball>> = Mutex::new(None);

fn ln2_uncached(prec: u64) -> Ball {
    let third = Ball::from_i64(1, prec + 8).div_int(3);
    atanh_series(&third, prec + 8).mul_int(2).with_prec(prec)
}

/// `ln 2 = 2·atanh(1/3)`, cached at the largest precision seen.
pub fn ln2(prec: u64) -> Ball {
    let mut cache = LN2_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    match cache.as_ref() {
        Some(b) if b.prec() >= prec => b.clone().with_prec(prec),
        _ => {
            let b = ln2_uncached(prec.max(256) * 2);
            let out = b.clone().with_prec(prec);
            *cache = Some(b);
            out
        }
    }
}

/// A rectangle of complex numbers with ball coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn real(re: Ball) -> CBall {
        let p = re.prec();
        CBall { re, im: Ball::zero(p) }
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> CBall {
        CBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        CBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_int(&self, n: i64) -> CBall {
        CBall {
            re: self.re.mul_int(n),
            im: self.im.mul_int(n),
        }
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.square().add(&self.im.square())
    }

    pub fn div(&self, o: &CBall) -> Option<CBall> {
        let n = o.norm_sqr();
        let num = self.mul(&CBall {
            re: o.re.clone(),
            im: o.im.neg(),
        });
        Some(CBall {
            re: num.re.div(&n)?,
            im: num.im.div(&n)?,
        })
    }

    /// `log |z|`; `None` when zero cannot be excluded.
    pub fn ln_abs(&self) -> Option<Ball> {
        Some(self.norm_sqr().ln()?.mul_pow2(-1))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", self.to_decimal(20), self.radius_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(b: &Ball, v: f64, tol: f64) -> bool {
        (b.to_f64() - v).abs() < tol && b.radius_f64() < tol
    }

    #[test]
    fn arithmetic_encloses_true_values() {
        let p = 128;
        let third = Ball::from_i64(1, p).div_int(3);
        let one = third.mul_int(3);
        assert!(one.sub(&Ball::from_i64(1, p)).contains_zero());
        assert!(one.radius_f64() < 1e-35);
        let x = Ball::from_rat(&Rat::new(22.into(), 7.into()), p);
        assert!(close(&x, 22.0 / 7.0, 1e-15));
        let y = x.mul(&x).sub(&x.square());
        assert!(y.contains_zero());
        assert!(Ball::from_i64(0, p).div(&Ball::zero(p)).is_none());
    }

    #[test]
    fn logarithms() {
        let p = 256;
        let l2 = ln2(p);
        assert!(l2.to_decimal(30).starts_with("0.693147180559945309417232121458"));
        assert!(l2.radius_f64() < 1e-70);
        let l10 = Ball::from_i64(10, p).ln().unwrap();
        assert!(l10.to_decimal(30).starts_with("2.30258509299404568401799145468"));
        let small = Ball::from_rat(&Rat::new(1.into(), 1000.into()), p).ln().unwrap();
        assert!(close(&small, (0.001f64).ln(), 1e-14));
        assert!(Ball::from_i64(-1, p).ln().is_none());
        let big = Ball::from_int(&BigInt::from(10).pow(60), p).ln().unwrap();
        assert!(close(&big, 60.0 * 10f64.ln(), 1e-12));
    }

    #[test]
    fn square_roots_and_complex() {
        let s = Ball::sqrt_int(&BigInt::from(2), 200);
        assert!(s.square().sub(&Ball::from_i64(2, 200)).contains_zero());
        assert!(close(&s, 2f64.sqrt(), 1e-15));
        let i = CBall {
            re: Ball::zero(100),
            im: Ball::from_i64(1, 100),
        };
        let m1 = i.mul(&i);
        assert!(m1.re.add(&Ball::from_i64(1, 100)).contains_zero());
        let q = CBall::real(Ball::from_i64(1, 100)).div(&i).unwrap();
        assert!(q.im.add(&Ball::from_i64(1, 100)).contains_zero());
        assert!(i.ln_abs().unwrap().contains_zero());
    }

    #[test]
    fn radius_tracks_input_error() {
        let x = Ball::from_i64(1, 64).add_error(&Ball::from_rat(&Rat::new(1.into(), 1024.into()), 64));
        let y = x.mul(&x);
        assert!(y.radius_f64() >= 2.0 / 1024.0);
        assert!(!x.sub(&Ball::from_i64(1, 64)).is_positive());
    }
}
