//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::multi_index::MultiIndex;
use crate::rational::{gcd_int, Rational};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Poly {
        Poly::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        Poly::monomial(MultiIndex::pure(nvars, i, 1), Rational::one())
    }

    pub fn monomial(m: MultiIndex, c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        let nvars = m.len();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial, summing repeated indices and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Rational)>>(nvars: usize, it: I) -> Poly {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.len(), nvars, "index length mismatch");
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == deg)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.get(var)).max()
    }

    pub fn min_degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.get(var)).min()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * x^m * other`.
    pub fn add_scaled_shifted(&mut self, other: &Poly, c: &Rational, m: &MultiIndex) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.add(m), &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.get(var);
            if k > 0 {
                out.terms.insert(m.with(var, k - 1), c.mul_int(&BigInt::from(k)));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]; self.nvars];
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, pw) in powers.iter_mut().enumerate() {
                let k = m.get(i) as usize;
                while pw.len() <= k {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t *= &pw[k];
            }
            acc += &t;
        }
        acc
    }

    /// Substitute `x_var = value`, removing that variable.
    pub fn eval_var(&self, var: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars - 1);
        let mut powers = vec![Rational::one()];
        for (m, c) in &self.terms {
            let k = m.get(var) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out.add_term(m.remove(var), &(c * &powers[k]));
        }
        out
    }

    /// Insert a fresh variable at position `var` with exponent zero.
    pub fn insert_var(&self, var: usize) -> Poly {
        Poly { nvars: self.nvars + 1, terms: self.terms.iter().map(|(m, c)| (m.insert(var, 0), c.clone())).collect() }
    }

    /// Append a homogenizing variable so every term has degree `deg`.
    pub fn homogenize(&self, deg: u32) -> Poly {
        let n = self.nvars;
        Poly {
            nvars: n + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    assert!(m.degree() <= deg, "degree exceeds homogenization degree");
                    (m.insert(n, deg - m.degree()), c.clone())
                })
                .collect(),
        }
    }

    /// Group by powers of `var`: entry `k` is the coefficient of `x_var^k`,
    /// a polynomial in the remaining variables.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars - 1); deg + 1];
        for (m, c) in &self.terms {
            out[m.get(var) as usize].terms.insert(m.remove(var), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(var: usize, coeffs: &[Poly]) -> Poly {
        let nvars = coeffs.first().map(|c| c.nvars + 1).expect("empty coefficient list");
        let mut out = Poly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                out.terms.insert(m.insert(var, k as u32), v.clone());
            }
        }
        out
    }

    /// Apply `x_j -> sum_k a[j][k] x_k`.
    pub fn linear_substitute(&self, a: &[Vec<Rational>]) -> Poly {
        let n = self.nvars;
        let lin: Vec<Poly> = (0..n)
            .map(|j| Poly::from_terms(n, (0..n).map(|k| (MultiIndex::pure(n, k, 1), a[j][k].clone()))))
            .collect();
        let mut powers: Vec<Vec<Poly>> = lin.iter().map(|l| vec![Poly::one(n), l.clone()]).collect();
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (j, pw) in powers.iter_mut().enumerate() {
                let k = m.get(j) as usize;
                while pw.len() <= k {
                    let next = pw.last().unwrap() * &lin[j];
                    pw.push(next);
                }
                if k > 0 {
                    t = &t * &pw[k];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Multivariate division by a single divisor in graded lex order.
    /// Returns `(quotient, remainder)`.
    pub fn div_rem(&self, b: &Poly) -> (Poly, Poly) {
        let (lm, lc) = b.leading().map(|(m, c)| (*m, c.clone())).expect("division by zero polynomial");
        let lc_inv = lc.recip();
        let mut p = self.clone();
        let mut q = Poly::zero(self.nvars);
        let mut r = Poly::zero(self.nvars);
        while let Some((m, c)) = p.terms.pop_last() {
            match m.checked_sub(&lm) {
                Some(s) => {
                    let t = &c * &lc_inv;
                    // subtract t * x^s * (b - lt(b)); lt cancels by construction
                    for (k, v) in b.terms.iter().rev().skip(1) {
                        p.add_term(k.add(&s), &-(v * &t));
                    }
                    q.terms.insert(s, t);
                }
                None => {
                    r.terms.insert(m, c);
                }
            }
        }
        (q, r)
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        let (lm, lc) = b.leading().map(|(m, c)| (*m, c.clone())).expect("division by zero polynomial");
        let lc_inv = lc.recip();
        let mut p = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = p.terms.pop_last() {
            let s = m.checked_sub(&lm)?;
            let t = &c * &lc_inv;
            for (k, v) in b.terms.iter().rev().skip(1) {
                p.add_term(k.add(&s), &-(v * &t));
            }
            q.terms.insert(s, t);
            if let Some((pm, _)) = p.leading() {
                // the remaining leading monomial must stay divisible
                if pm.degree() < lm.degree() {
                    return None;
                }
            }
        }
        Some(q)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Writes `self = u * P` with `P` integral, primitive, and with positive
    /// leading coefficient. Returns `(u, P)`; zero maps to `(0, 0)`.
    pub fn primitive_integer(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            if !c.denom().is_one() {
                let g = gcd_int(&l, c.denom());
                l = &l / g * c.denom();
            }
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = if l.is_one() { c.numer().clone() } else { c.numer() * (&l / c.denom()) };
            g = gcd_int(&g, &n);
            if g.is_one() {
                break;
            }
        }
        if self.leading().unwrap().1.is_negative() {
            g = -g;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let n = if l.is_one() { c.numer().clone() } else { c.numer() * (&l / c.denom()) };
                (*m, Rational::from_int(n / &g))
            })
            .collect();
        (Rational::new(g, l), Poly { nvars: self.nvars, terms })
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Largest coefficient bit length, a cheap size measure.
    pub fn max_bits(&self) -> u64 {
        self.terms.values().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
    }

    pub fn abs_coeff_sum(&self) -> Rational {
        let mut s = Rational::zero();
        for c in self.terms.values() {
            s += &c.abs();
        }
        s
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.add(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(nvars, terms.iter().map(|(m, c)| (MultiIndex::new(m), Rational::from_int(*c))))
    }

    #[test]
    fn product_and_division_round_trip() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let ab = &a * &b;
        assert_eq!(ab, p(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        let (q, r) = ab.div_rem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        let c = &ab + &Poly::var(2, 1);
        assert_eq!(c.div_exact(&a), None);
    }

    #[test]
    fn derivative_and_eval() {
        let f = p(2, &[(&[3, 1], 2), (&[0, 2], -1)]);
        assert_eq!(f.derivative(0), p(2, &[(&[2, 1], 6)]));
        let v = f.eval(&[Rational::from_int(2), Rational::from_int(3)]);
        assert_eq!(v, Rational::from_int(2 * 8 * 3 - 9));
        let g = f.eval_var(1, &Rational::from_int(3));
        assert_eq!(g, p(1, &[(&[3], 6), (&[0], -9)]));
    }

    #[test]
    fn homogenize_and_coefficients() {
        let f = p(2, &[(&[2, 0], 1), (&[0, 1], 3), (&[0, 0], 5)]);
        let h = f.homogenize(2);
        assert_eq!(h, p(3, &[(&[2, 0, 0], 1), (&[0, 1, 1], 3), (&[0, 0, 2], 5)]));
        let cs = f.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coefficients_in(0, &cs), f);
    }

    #[test]
    fn primitive_integer_normalizes() {
        let f = Poly::from_terms(
            1,
            [(MultiIndex::new(&[1]), Rational::frac(-2, 3)), (MultiIndex::new(&[0]), Rational::frac(4, 9))],
        );
        let (u, g) = f.primitive_integer();
        assert_eq!(g, p(1, &[(&[1], 3), (&[0], -2)]));
        assert_eq!(g.scale(&u), f);
    }

    #[test]
    fn linear_substitution() {
        // (x + y)^2 under x -> x + y, y -> x - y gives (2x)^2
        let f = p(2, &[(&[1, 0], 1), (&[0, 1], 1)]).pow(2);
        let one = Rational::one;
        let a = vec![vec![one(), one()], vec![one(), -one()]];
        assert_eq!(f.linear_substitute(&a), p(2, &[(&[2, 0], 4)]));
    }
}
