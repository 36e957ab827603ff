//! Exact rationals over arbitrary-precision integers.
//!
//! Values are always stored reduced with a positive denominator, so derived
//! equality and hashing are structural. Integral values (denominator one)
//! take fast paths that skip gcd computations entirely; most of the heavy
//! polynomial work in this crate runs on integral coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Greatest common divisor, non-negative. Euclid with a machine-word tail.
pub fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    loop {
        if y.is_zero() {
            return x;
        }
        if let (Some(xs), Some(ys)) = (x.to_u64(), y.to_u64()) {
            return BigInt::from(xs.gcd(&ys));
        }
        if let Some(ys) = y.to_u64() {
            let r = (&x % ys).to_u64().unwrap();
            return BigInt::from(ys.gcd(&r));
        }
        let r = &x % &y;
        x = y;
        y = r;
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Rational {
        assert!(!den.is_zero(), "zero denominator");
        let (mut num, mut den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        if !den.is_one() {
            let g = gcd_int(&num, &den);
            if !g.is_one() {
                num /= &g;
                den /= &g;
            }
        }
        Rational { num, den }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Rational {
        Rational { num: n.into(), den: BigInt::one() }
    }

    pub fn frac(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Rational {
        Rational { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Rational {
        Rational::from_int(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.num.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Rational {
        Rational { num: num_traits::pow(self.num.clone(), e as usize), den: num_traits::pow(self.den.clone(), e as usize) }
    }

    pub fn powi(&self, e: i32) -> Rational {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.recip().pow((-e) as u32)
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Rational {
        if self.den.is_one() {
            return Rational { num: &self.num * k, den: BigInt::one() };
        }
        let g = gcd_int(k, &self.den);
        Rational { num: &self.num * (k / &g), den: &self.den / &g }
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(int_valuation(&self.num, p) - int_valuation(&self.den, p))
    }

    /// `floor(log2 |x|)`-ish estimate: bit length of numerator minus bit
    /// length of denominator. The true `log2 |x|` lies in `(e - 1, e + 1)`.
    pub fn log2_estimate(&self) -> i64 {
        self.num.bits() as i64 - self.den.bits() as i64
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    pub fn to_f64(&self) -> f64 {
        let nb = self.num.bits() as i64;
        let db = self.den.bits() as i64;
        // scale both into f64 range before dividing
        let shift_n = (nb - 60).max(0);
        let shift_d = (db - 60).max(0);
        let n = (&self.num >> shift_n as usize).to_f64().unwrap_or(0.0);
        let d = (&self.den >> shift_d as usize).to_f64().unwrap_or(1.0);
        n / d * 2f64.powi((shift_n - shift_d) as i32)
    }

    fn add_ref(&self, rhs: &Rational) -> Rational {
        if self.den.is_one() && rhs.den.is_one() {
            return Rational { num: &self.num + &rhs.num, den: BigInt::one() };
        }
        if rhs.den.is_one() {
            return Rational { num: &self.num + &rhs.num * &self.den, den: self.den.clone() };
        }
        if self.den.is_one() {
            return Rational { num: &self.num * &rhs.den + &rhs.num, den: rhs.den.clone() };
        }
        let g = gcd_int(&self.den, &rhs.den);
        if g.is_one() {
            return Rational {
                num: &self.num * &rhs.den + &rhs.num * &self.den,
                den: &self.den * &rhs.den,
            };
        }
        let bd = &self.den / &g;
        let dd = &rhs.den / &g;
        let t = &self.num * &dd + &rhs.num * &bd;
        if t.is_zero() {
            return Rational::zero();
        }
        let g2 = gcd_int(&t, &g);
        Rational { num: t / &g2, den: bd * (&rhs.den / &g2) }
    }

    fn mul_ref(&self, rhs: &Rational) -> Rational {
        if self.den.is_one() && rhs.den.is_one() {
            return Rational { num: &self.num * &rhs.num, den: BigInt::one() };
        }
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        let g1 = if rhs.den.is_one() { BigInt::one() } else { gcd_int(&self.num, &rhs.den) };
        let g2 = if self.den.is_one() { BigInt::one() } else { gcd_int(&rhs.num, &self.den) };
        let num = if g1.is_one() && g2.is_one() {
            &self.num * &rhs.num
        } else {
            (&self.num / &g1) * (&rhs.num / &g2)
        };
        let den = if g1.is_one() && g2.is_one() {
            &self.den * &rhs.den
        } else {
            (&self.den / &g2) * (&rhs.den / &g1)
        };
        Rational { num, den }
    }
}

pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    if n.is_zero() {
        return 0;
    }
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0) as i64;
    }
    let mut v = 0;
    let mut m = n.abs();
    let pb = BigInt::from(p);
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&-b));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.mul_ref(&b.recip()));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        if self.den.is_one() && rhs.den.is_one() {
            self.num += &rhs.num;
        } else {
            *self = self.add_ref(rhs);
        }
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        if self.den.is_one() && rhs.den.is_one() {
            self.num -= &rhs.num;
        } else {
            *self = self.add_ref(&-rhs);
        }
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        if self.den.is_one() && rhs.den.is_one() {
            self.num *= &rhs.num;
        } else {
            *self = self.mul_ref(rhs);
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            None => Ok(Rational::from_int(BigInt::from_str(s).map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(n, d))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let r = q(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(r.to_string(), "-3/4");
    }

    #[test]
    fn arithmetic_paths_agree() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(1, 6) + q(1, 3), q(1, 2));
        assert_eq!(q(3, 4) * q(2, 3), q(1, 2));
        assert_eq!(q(3, 1) * q(1, 3), q(1, 1));
        assert_eq!(q(5, 1) - q(1, 2), q(9, 2));
        assert_eq!(q(1, 2) / q(1, 4), q(2, 1));
        let mut a = q(7, 1);
        a += &q(1, 7);
        assert_eq!(a, q(50, 7));
        a *= &q(7, 50);
        assert!(a.is_one());
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "-17", "3/4", "-3/4", "12345678901234567890123/2"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(q(3, 4).valuation(2), Some(-2));
        assert_eq!(q(6, 1).valuation(3), Some(1));
        assert_eq!(q(5, 7).valuation(5), Some(1));
        assert_eq!(Rational::zero().valuation(2), None);
    }

    #[test]
    fn gcd_handles_mixed_sizes() {
        let big = BigInt::from(3u8).pow(200) * BigInt::from(10u8);
        assert_eq!(gcd_int(&big, &BigInt::from(20)), BigInt::from(10));
        assert_eq!(gcd_int(&BigInt::from(0), &BigInt::from(-5)), BigInt::from(5));
    }

    #[test]
    fn ordering_and_rounding() {
        assert!(q(1, 3) < q(1, 2));
        assert!(q(-1, 2) < q(-1, 3));
        assert_eq!(q(7, 2).floor(), BigInt::from(3));
        assert_eq!(q(-7, 2).floor(), BigInt::from(-4));
        assert_eq!(q(7, 2).ceil(), BigInt::from(4));
        assert!((q(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
