//! Exact determinants and linear solves.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rational::{gcd_int, Rational};

/// Determinant of a square matrix of polynomials by expansion over column
/// subsets. Division-free, `O(n 2^n)` polynomial products.
pub fn det_poly(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    assert!(n < 24, "matrix too large for subset expansion");
    let mut layer: Vec<(u32, Poly)> = vec![(0, Poly::one(nvars))];
    for row in m.iter() {
        let mut next: std::collections::BTreeMap<u32, Poly> = std::collections::BTreeMap::new();
        for (mask, acc) in &layer {
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let mut t = acc * entry;
                if above % 2 == 1 {
                    t = -&t;
                }
                let slot = next.entry(mask | (1 << j)).or_insert_with(|| Poly::zero(nvars));
                *slot = &*slot + &t;
            }
        }
        layer = next.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if layer.is_empty() {
            return Poly::zero(nvars);
        }
    }
    layer.pop().map(|(_, p)| p).unwrap_or_else(|| Poly::zero(nvars))
}

/// Fraction-free Gaussian elimination over the integers.
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = if prev.is_one() { v } else { v / &prev };
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant over the rationals: clear denominators row by row, then Bareiss.
pub fn det_rational(a: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let mut l = BigInt::one();
            for c in row {
                if !c.denom().is_one() {
                    let g = gcd_int(&l, c.denom());
                    l = &l / g * c.denom();
                }
            }
            scale *= &l;
            row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    Rational::new(det_bareiss(rows), scale)
}

/// Solve `a x = b` exactly. Returns `None` if `a` is singular.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        let inv = m[k][k].recip();
        for j in k..=n {
            m[k][j] = &m[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..=n {
                let t = &m[k][j] * &f;
                m[i][j] -= &t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}
