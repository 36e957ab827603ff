//! Monic polynomial endomorphisms `f_i = x_i^d + sum a_{i,I} x^I`, `f_N = x_N^d`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Form;
use crate::matrix::det_poly;
use crate::multi_index::{ind_star_count, MultiIndex};
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    n: usize,
    d: u32,
    coeffs: BTreeMap<(usize, MultiIndex), Rational>,
}

impl PolyMap {
    /// Validates that every key is `(i, I)` with `i < N` and `I` in `Ind*(N, d)`.
    pub fn new<I>(n: usize, d: u32, coeffs: I) -> Result<PolyMap>
    where
        I: IntoIterator<Item = (usize, MultiIndex, Rational)>,
    {
        if n == 0 || n + 1 > crate::multi_index::MAX_VARS {
            return Err(Error::InvalidInput(format!("unsupported N = {n}")));
        }
        if d < 2 {
            return Err(Error::InvalidInput(format!("degree must be at least 2, got {d}")));
        }
        let mut map = BTreeMap::new();
        for (i, m, c) in coeffs {
            if i >= n || m.len() != n + 1 || m.degree() != d || m.last() == 0 || m.last() >= d {
                return Err(Error::InvalidInput(format!("coefficient ({i}, {m:?}) is outside Ind*")));
            }
            if c.is_zero() {
                continue;
            }
            if map.insert((i, m), c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate coefficient ({i}, {m:?})")));
            }
        }
        Ok(PolyMap { n, d, coeffs: map })
    }

    pub fn power_map(n: usize, d: u32) -> PolyMap {
        PolyMap::new(n, d, []).expect("power map")
    }

    /// `(x^2 + axz + byz, y^2 + cxz + dyz, z^2)`.
    pub fn quadratic(a: Rational, b: Rational, c: Rational, d: Rational) -> PolyMap {
        let xz = MultiIndex::new(&[1, 0, 1]);
        let yz = MultiIndex::new(&[0, 1, 1]);
        PolyMap::new(2, 2, [(0, xz, a), (0, yz, b), (1, xz, c), (1, yz, d)]).expect("quadratic family")
    }

    pub fn quad(t: [i64; 4]) -> PolyMap {
        let [a, b, c, d] = t.map(Rational::from_int);
        PolyMap::quadratic(a, b, c, d)
    }

    /// The quadruple `(a, b, c, d)` when this is a member of the quadratic family.
    pub fn quad_tuple(&self) -> Option<[Rational; 4]> {
        if self.n != 2 || self.d != 2 {
            return None;
        }
        let xz = MultiIndex::new(&[1, 0, 1]);
        let yz = MultiIndex::new(&[0, 1, 1]);
        Some([self.coeff(0, &xz), self.coeff(0, &yz), self.coeff(1, &xz), self.coeff(1, &yz)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coeff(&self, i: usize, m: &MultiIndex) -> Rational {
        self.coeffs.get(&(i, *m)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero coefficients `(i, I, a_{i,I})`.
    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &MultiIndex, &Rational)> {
        self.coeffs.iter().map(|((i, m), c)| (*i, m, c))
    }

    /// `dim Pow(N, d) = N * #Ind*(N, d)`.
    pub fn parameter_dim(&self) -> u64 {
        self.n as u64 * ind_star_count(self.n, self.d)
    }

    /// Component `f_i` as a form of degree `d` in `N + 1` variables.
    pub fn component(&self, i: usize) -> Form {
        let nv = self.n + 1;
        let mut p = Poly::monomial(MultiIndex::pure(nv, i, self.d), Rational::one());
        for ((j, m), c) in &self.coeffs {
            if *j == i {
                p.add_term(*m, c);
            }
        }
        Form::new(p, self.d).expect("component is homogeneous")
    }

    pub fn components(&self) -> Vec<Form> {
        (0..=self.n).map(|i| self.component(i)).collect()
    }

    /// Determinant of `(df_i/dx_j)` for `0 <= i, j < N`, of degree `N(d-1)`.
    pub fn jacobian_form(&self) -> Form {
        let comps = self.components();
        let m: Vec<Vec<Poly>> =
            (0..self.n).map(|i| (0..self.n).map(|j| comps[i].poly().derivative(j)).collect()).collect();
        Form::new(det_poly(&m, self.n + 1), self.n as u32 * (self.d - 1)).expect("jacobian is homogeneous")
    }

    /// Apply the grading action `a_{i,I} -> alpha^{I_N} a_{i,I}`.
    pub fn scale_grading(&self, alpha: &Rational) -> PolyMap {
        let coeffs = self.coeffs.iter().map(|((i, m), c)| ((*i, *m), c * &alpha.pow(m.last()))).collect();
        PolyMap { n: self.n, d: self.d, coeffs }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn to_json(&self) -> PolyMapJson {
        PolyMapJson {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|((i, m), c)| CoeffJson { i: *i, index: m.to_vec(), value: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: &PolyMapJson) -> Result<PolyMap> {
        let mut entries = Vec::with_capacity(j.coeffs.len());
        for c in &j.coeffs {
            if c.index.len() != j.n + 1 || c.index.iter().any(|&e| e > u16::MAX as u32) {
                return Err(Error::InvalidInput("coefficient index has wrong shape".into()));
            }
            entries.push((c.i, MultiIndex::new(&c.index), c.value.clone()));
        }
        PolyMap::new(j.n, j.d, entries)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("map serialization")
    }

    pub fn from_json_str(s: &str) -> Result<PolyMap> {
        let j: PolyMapJson = serde_json::from_str(s)?;
        PolyMap::from_json(&j)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub i: usize,
    pub index: Vec<u32>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMapJson {
    pub n: usize,
    pub d: u32,
    pub coeffs: Vec<CoeffJson>,
}
