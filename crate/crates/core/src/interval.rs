//! Real intervals with rational endpoints rounded outward.
//!
//! Endpoints are kept as dyadic rationals with about `prec` significant
//! bits. Logarithms use `ln r = 2 atanh((r - 1)/(r + 1))` for `r` in
//! `[1, 2)`, summed in fixed point with directed rounding and an explicit
//! tail bound, so every interval provably contains the true value.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub const DEFAULT_PRECISION: u32 = 128;
const GUARD_BITS: u32 = 64;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

fn scaled_floor(q: &Rational, shift: i64) -> BigInt {
    if shift >= 0 {
        (q.numer() << shift as usize).div_floor(q.denom())
    } else {
        q.numer().div_floor(&(q.denom() << (-shift) as usize))
    }
}

fn from_scaled(n: BigInt, shift: i64) -> Rational {
    if shift >= 0 {
        Rational::new(n, pow2(shift as u32))
    } else {
        Rational::from_int(n << (-shift) as usize)
    }
}

/// Largest dyadic with about `prec` significant bits that is `<= q`.
pub fn round_down(q: &Rational, prec: u32) -> Rational {
    if q.is_zero() || (q.is_integer() && q.numer().bits() <= prec as u64) {
        return q.clone();
    }
    let shift = prec as i64 - q.log2_estimate();
    from_scaled(scaled_floor(q, shift), shift)
}

/// Smallest dyadic with about `prec` significant bits that is `>= q`.
pub fn round_up(q: &Rational, prec: u32) -> Rational {
    -round_down(&-q, prec)
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, prec: u32) -> Interval {
        assert!(lo <= hi, "empty interval");
        Interval { lo: round_down(&lo, prec), hi: round_up(&hi, prec), prec }
    }

    pub fn point(q: &Rational, prec: u32) -> Interval {
        Interval::new(q.clone(), q.clone(), prec)
    }

    pub fn zero(prec: u32) -> Interval {
        Interval::point(&Rational::zero(), prec)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi, self.prec)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo, self.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn add_rational(&self, q: &Rational) -> Interval {
        Interval::new(&self.lo + q, &self.hi + q, self.prec)
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        let (a, b) = (&self.lo * q, &self.hi * q);
        if q.is_negative() {
            Interval::new(b, a, self.prec)
        } else {
            Interval::new(a, b, self.prec)
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi, self.prec)
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.prec }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()), prec: self.prec }
    }

    /// Intersect with `[0, inf)`, i.e. apply `log+` style clamping.
    pub fn clamp_nonneg(&self) -> Interval {
        let z = Rational::zero();
        Interval { lo: self.lo.clone().max(z.clone()), hi: self.hi.clone().max(z), prec: self.prec }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(o.lo.clone());
        let hi = self.hi.clone().min(o.hi.clone());
        (lo <= hi).then(|| Interval { lo, hi, prec: self.prec })
    }

    /// Natural log of a positive interval.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.signum() > 0, "log of non-positive interval");
        let a = ln_rational(&self.lo, self.prec);
        let b = ln_rational(&self.hi, self.prec);
        Interval { lo: a.lo, hi: b.hi, prec: self.prec }
    }

    /// Decimal endpoints rounded outward, with enough digits for the precision.
    pub fn to_decimal(&self) -> (String, String) {
        let digits = decimal_digits(self.prec);
        (decimal_floor(&self.lo, digits), decimal_ceil(&self.hi, digits))
    }

    pub fn to_f64_mid(&self) -> f64 {
        ((&self.lo + &self.hi) * Rational::frac(1, 2)).to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal();
        write!(f, "[{a}, {b}]")
    }
}

/// Digits after the decimal point that resolve `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as usize * 30103).div_ceil(100000)
}

fn format_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

pub fn decimal_floor(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    format_scaled(&(q.numer() * scale).div_floor(q.denom()), digits)
}

pub fn decimal_ceil(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    format_scaled(&-((-(q.numer() * scale)).div_floor(q.denom())), digits)
}

/// Fixed-point bounds `(L, H)` with `L / 2^w <= atanh(s) <= H / 2^w` for
/// `0 <= s <= 1/3`.
fn atanh_fixed(s: &Rational, w: u32) -> (BigInt, BigInt) {
    if s.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let one = pow2(w);
    let s_lo = scaled_floor(s, w as i64);
    let s_hi = -scaled_floor(&-s, w as i64);
    let s2_lo = (&s_lo * &s_lo) >> w as usize;
    let s2_hi = (&s_hi * &s_hi + &one - 1u32) >> w as usize;
    let mut lo = BigInt::zero();
    let mut p = s_lo;
    let mut k: u32 = 1;
    while !p.is_zero() {
        lo += &p / k;
        p = (&p * &s2_lo) >> w as usize;
        k += 2;
    }
    let mut hi = BigInt::zero();
    let mut p = s_hi;
    let mut k: u32 = 1;
    while p > BigInt::one() {
        hi += (&p + (k - 1)) / k;
        p = (&p * &s2_hi + &one - 1u32) >> w as usize;
        k += 2;
    }
    // remaining tail: sum_{j} p s^{2j} / (k + 2j) <= p * 9/8 / k < 2 for p <= 1
    hi += 2;
    (lo, hi)
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let (lo, hi) = atanh_fixed(&Rational::frac(1, 3), w);
    let v = (lo * 2, hi * 2);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// Certified enclosure of `ln q` for `q > 0`.
pub fn ln_rational(q: &Rational, prec: u32) -> Interval {
    assert!(q.signum() > 0, "log of non-positive number");
    if q.is_one() {
        return Interval::zero(prec);
    }
    // q = 2^k r with 1 <= r < 2
    let mut k = q.log2_estimate();
    let two_k = |k: i64| if k >= 0 { Rational::from_int(pow2(k as u32)) } else { Rational::new(BigInt::one(), pow2((-k) as u32)) };
    while q < &two_k(k) {
        k -= 1;
    }
    while q >= &two_k(k + 1) {
        k += 1;
    }
    let r = q / &two_k(k);
    let s = (&r - &Rational::one()) / (&r + &Rational::one());
    let w = prec + GUARD_BITS;
    let (a_lo, a_hi) = atanh_fixed(&s, w);
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let kb = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 { (&kb * &l2_lo, &kb * &l2_hi) } else { (&kb * &l2_hi, &kb * &l2_lo) };
    let lo = Rational::new(k_lo + a_lo * 2, pow2(w));
    let hi = Rational::new(k_hi + a_hi * 2, pow2(w));
    Interval::new(lo, hi, prec)
}

/// `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    ln_rational(&Rational::from_int(2), prec)
}

/// Certified enclosure of `sqrt(q)` for `q >= 0`.
pub fn sqrt_rational(q: &Rational, prec: u32) -> Interval {
    assert!(q.signum() >= 0, "square root of a negative number");
    let w = prec + GUARD_BITS;
    let scaled = scaled_floor(q, 2 * w as i64);
    let s = scaled.sqrt();
    let lo = Rational::new(s.clone(), pow2(w));
    let hi = Rational::new(s + 1u32, pow2(w));
    Interval::new(lo, hi, prec)
}
