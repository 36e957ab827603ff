//! Exponent vectors for monomials in at most [`MAX_VARS`] variables.
//!
//! The derived ordering compares total degree first and then exponents
//! left to right, which is graded lexicographic order with
//! `x_0 > x_1 > ... > x_N`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_VARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    deg: u32,
    len: u8,
    e: [u16; MAX_VARS],
}

impl MultiIndex {
    pub fn new(entries: &[u32]) -> MultiIndex {
        assert!(entries.len() <= MAX_VARS, "too many variables");
        let mut e = [0u16; MAX_VARS];
        let mut deg = 0;
        for (slot, &v) in e.iter_mut().zip(entries) {
            *slot = u16::try_from(v).expect("exponent overflow");
            deg += v;
        }
        MultiIndex { deg, len: entries.len() as u8, e }
    }

    pub fn zero(nvars: usize) -> MultiIndex {
        assert!(nvars <= MAX_VARS, "too many variables");
        MultiIndex { deg: 0, len: nvars as u8, e: [0; MAX_VARS] }
    }

    /// `x_i^k` in `nvars` variables.
    pub fn pure(nvars: usize, i: usize, k: u32) -> MultiIndex {
        let mut m = MultiIndex::zero(nvars);
        m.e[i] = k as u16;
        m.deg = k;
        m
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u32 {
        debug_assert!(i < self.len());
        self.e[i] as u32
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// The last exponent (the grading weight `I_N`).
    pub fn last(&self) -> u32 {
        self.e[self.len() - 1] as u32
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.e[..self.len()].iter().map(|&v| v as u32).collect()
    }

    pub fn with(&self, i: usize, k: u32) -> MultiIndex {
        let mut m = *self;
        m.deg = m.deg - m.e[i] as u32 + k;
        m.e[i] = u16::try_from(k).expect("exponent overflow");
        m
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len, other.len);
        let mut m = *self;
        for i in 0..self.len() {
            m.e[i] = m.e[i].checked_add(other.e[i]).expect("exponent overflow");
        }
        m.deg += other.deg;
        m
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len, other.len);
        let mut m = *self;
        for i in 0..self.len() {
            m.e[i] = m.e[i].checked_sub(other.e[i])?;
        }
        m.deg -= other.deg;
        Some(m)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        (0..self.len()).all(|i| self.e[i] <= other.e[i])
    }

    /// Drop variable `i`, keeping the others in order.
    pub fn remove(&self, i: usize) -> MultiIndex {
        let mut v = self.to_vec();
        v.remove(i);
        MultiIndex::new(&v)
    }

    /// Insert a new variable at position `i` with exponent `k`.
    pub fn insert(&self, i: usize, k: u32) -> MultiIndex {
        let mut v = self.to_vec();
        v.insert(i, k);
        MultiIndex::new(&v)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        if v.len() > MAX_VARS || v.iter().any(|&x| x > u16::MAX as u32) {
            return Err(serde::de::Error::custom("multi-index out of range"));
        }
        Ok(MultiIndex::new(&v))
    }
}

/// All exponent vectors of total degree `deg` in `nvars` variables, ascending.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(MultiIndex::new(cur));
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(MultiIndex::zero(0));
        }
        return out;
    }
    rec(0, deg, &mut cur, &mut out);
    out.sort();
    out
}

/// All exponent vectors of total degree at most `deg`, ascending.
pub fn monomials_up_to_degree(nvars: usize, deg: u32) -> Vec<MultiIndex> {
    (0..=deg).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

/// The index set `Ind*(N, d)`: `|I| = d` in `N + 1` variables with `0 < I_N < d`.
pub fn ind_star(n: usize, d: u32) -> Vec<MultiIndex> {
    monomials_of_degree(n + 1, d)
        .into_iter()
        .filter(|m| m.last() > 0 && m.last() < d)
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `#Ind*(N, d) = C(N+d, d) - C(N-1+d, d) - 1`.
pub fn ind_star_count(n: usize, d: u32) -> u64 {
    let (n, d) = (n as u64, d as u64);
    binomial(n + d, d) - binomial(n - 1 + d, d) - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_lex() {
        let x2 = MultiIndex::new(&[2, 0, 0]);
        let xy = MultiIndex::new(&[1, 1, 0]);
        let y2 = MultiIndex::new(&[0, 2, 0]);
        let z3 = MultiIndex::new(&[0, 0, 3]);
        assert!(x2 > xy && xy > y2 && z3 > x2);
    }

    #[test]
    fn arithmetic() {
        let a = MultiIndex::new(&[1, 2, 0]);
        let b = MultiIndex::new(&[0, 1, 3]);
        let c = a.add(&b);
        assert_eq!(c.to_vec(), vec![1, 3, 3]);
        assert_eq!(c.degree(), 7);
        assert_eq!(c.checked_sub(&a), Some(b));
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!(c.remove(1).to_vec(), vec![1, 3]);
        assert_eq!(a.insert(0, 4).to_vec(), vec![4, 1, 2, 0]);
    }

    #[test]
    fn ind_star_matches_count() {
        for n in 1..=3 {
            for d in 2..=4 {
                assert_eq!(ind_star(n, d).len() as u64, ind_star_count(n, d), "N={n} d={d}");
            }
        }
        assert_eq!(ind_star_count(2, 2), 2);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
    }
}
