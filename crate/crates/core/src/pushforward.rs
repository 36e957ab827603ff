//! Divisor pushforward `f_*(D)`, the divisor of `Res(F_D, f)` in the
//! target coordinates `y`.
//!
//! Main route: on the chart `y_N = 1` the resultant equals, up to a unit,
//! the norm of `F_D(x, 1)` in the algebra `Q[y][x] / (f_i(x, 1) - y_i)`.
//! That algebra is free over `Q[y]` with basis `x^beta`, `0 <= beta_i < d`,
//! because the leading forms `x_i^d` are coprime. The norm is the
//! determinant of multiplication by `F_D(x, 1)`; homogenizing to degree
//! `d^{N-1} deg(D)` gives the form.
//!
//! Reference route: evaluate Macaulay resultants at grid points in `y` and
//! interpolate.

use std::collections::HashMap;

use crate::divisor::{normalize_divisor, Divisor};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::gcd::squarefree_radical;
use crate::interp::{grid, interpolate};
use crate::matrix::det_poly;
use crate::multi_index::MultiIndex;
use crate::poly::Poly;
use crate::polymap::PolyMap;
use crate::rational::Rational;
use crate::resultant::{macaulay_resultant, ResultantProblem};

/// Degree of `f_*(D)`: `d^{N-1} deg(D)`.
pub fn pushforward_degree(f: &PolyMap, deg: u32) -> u32 {
    f.d().pow(f.n() as u32 - 1) * deg
}

/// Normal forms of monomials modulo `x_i^d + g_i(x) - y_i`.
struct QuotientAlgebra {
    n: usize,
    d: u32,
    /// `g_i` as `(exponent in x, coefficient)`.
    tails: Vec<Vec<(MultiIndex, Rational)>>,
    memo: HashMap<MultiIndex, Vec<Poly>>,
}

impl QuotientAlgebra {
    fn new(f: &PolyMap) -> QuotientAlgebra {
        let n = f.n();
        let mut tails = vec![Vec::new(); n];
        for (i, m, c) in f.coeffs() {
            tails[i].push((m.remove(n), c.clone()));
        }
        QuotientAlgebra { n, d: f.d(), tails, memo: HashMap::new() }
    }

    fn rank(&self) -> usize {
        (self.d as usize).pow(self.n as u32)
    }

    fn basis_index(&self, m: &MultiIndex) -> usize {
        (0..self.n).rev().fold(0, |acc, i| acc * self.d as usize + m.get(i) as usize)
    }

    fn basis(&self) -> Vec<MultiIndex> {
        (0..self.rank())
            .map(|mut k| {
                let e: Vec<u32> = (0..self.n)
                    .map(|_| {
                        let v = (k % self.d as usize) as u32;
                        k /= self.d as usize;
                        v
                    })
                    .collect();
                MultiIndex::new(&e)
            })
            .collect()
    }

    /// Coordinates of `x^k` in the monomial basis, entries in `Q[y]`.
    fn normal_form(&mut self, k: &MultiIndex) -> Vec<Poly> {
        if let Some(v) = self.memo.get(k) {
            return v.clone();
        }
        let n = self.n;
        let out = match (0..n).find(|&i| k.get(i) >= self.d) {
            None => {
                let mut v = vec![Poly::zero(n); self.rank()];
                v[self.basis_index(k)] = Poly::one(n);
                v
            }
            Some(i) => {
                // x^k = x^{k'} x_i^d = x^{k'} (y_i - g_i)
                let rest = k.with(i, k.get(i) - self.d);
                let yi = MultiIndex::pure(n, i, 1);
                let mut v: Vec<Poly> = self.normal_form(&rest);
                for p in v.iter_mut() {
                    let mut shifted = Poly::zero(n);
                    shifted.add_scaled_shifted(p, &Rational::one(), &yi);
                    *p = shifted;
                }
                for (m, c) in self.tails[i].clone() {
                    let w = self.normal_form(&rest.add(&m));
                    for (slot, p) in v.iter_mut().zip(&w) {
                        if !p.is_zero() {
                            *slot = &*slot - &p.scale(&c);
                        }
                    }
                }
                v
            }
        };
        self.memo.insert(*k, out.clone());
        out
    }
}

/// The dehomogenized resultant `G(y_0, ..., y_{N-1})` on the chart `y_N = 1`,
/// up to a nonzero constant.
fn norm_on_chart(f: &PolyMap, form: &Form) -> Poly {
    let n = f.n();
    let (_, aff) = form.poly().eval_var(n, &Rational::one()).primitive_integer();
    let mut alg = QuotientAlgebra::new(f);
    let basis = alg.basis();
    let rank = basis.len();
    let mut m = vec![vec![Poly::zero(n); rank]; rank];
    for (col, beta) in basis.iter().enumerate() {
        for (k, c) in aff.terms() {
            let nf = alg.normal_form(&k.add(beta));
            for (row, p) in nf.iter().enumerate() {
                if !p.is_zero() {
                    m[row][col] = &m[row][col] + &p.scale(c);
                }
            }
        }
    }
    det_poly(&m, n)
}

fn check_inputs(f: &PolyMap, d: &Divisor) -> Result<()> {
    if d.nvars() != f.n() + 1 {
        return Err(Error::InvalidInput(format!(
            "divisor has {} variables, map acts on {}",
            d.nvars(),
            f.n() + 1
        )));
    }
    Ok(())
}

/// The resultant form `Res(F, f)` in `y_0, ..., y_N`, up to a nonzero
/// constant, for any form `F` with `F(x, 1) != 0`.
pub fn resultant_form(f: &PolyMap, form: &Form) -> Result<Form> {
    let g = norm_on_chart(f, form);
    let deg = pushforward_degree(f, form.degree());
    if g.total_degree().unwrap_or(0) > deg {
        return Err(Error::ResultantFailure);
    }
    Form::new(g.homogenize(deg), deg)
}

/// `f_*(D)`, normalized into `Div*`.
pub fn pushforward(f: &PolyMap, d: &Divisor) -> Result<Divisor> {
    check_inputs(f, d)?;
    let g = resultant_form(f, d.form())?;
    normalize_divisor(&g)
}

/// `f_*(D)` by Macaulay resultants at grid points in `y` and interpolation.
pub fn pushforward_macaulay(f: &PolyMap, d: &Divisor) -> Result<Divisor> {
    check_inputs(f, d)?;
    let n = f.n();
    let deg = pushforward_degree(f, d.degree());
    let comps = f.components();
    let mut values = Vec::new();
    for (_, y) in grid(n, deg) {
        let mut forms = vec![d.form().clone()];
        for i in 0..n {
            let mut p = comps[i].poly().scale(&Rational::from_int(-1));
            p.add_term(MultiIndex::pure(n + 1, n, f.d()), &y[i]);
            forms.push(Form::new(p, f.d())?);
        }
        values.push(macaulay_resultant(&ResultantProblem::new(forms)?)?);
    }
    let g = interpolate(n, deg, &values);
    normalize_divisor(&Form::new(g.homogenize(deg), deg)?)
}

/// The radical orbit `R_0 = rad(D)`, `R_{n+1} = rad(f_*(R_n))`, computed
/// lazily. Heights and orbit certification only depend on supports, so
/// they share this sequence.
#[derive(Clone, Debug)]
pub struct RadicalOrbit {
    f: PolyMap,
    radicals: Vec<Divisor>,
}

impl RadicalOrbit {
    pub fn new(f: &PolyMap, d: &Divisor) -> Result<RadicalOrbit> {
        check_inputs(f, d)?;
        let r0 = normalize_divisor(&squarefree_radical(d.form()))?;
        Ok(RadicalOrbit { f: f.clone(), radicals: vec![r0] })
    }

    pub fn map(&self) -> &PolyMap {
        &self.f
    }

    /// `R_n`, computing intermediate iterates as needed.
    pub fn get(&mut self, n: usize) -> Result<&Divisor> {
        while self.radicals.len() <= n {
            let last = self.radicals.last().unwrap();
            let img = pushforward(&self.f, last)?;
            let r = normalize_divisor(&squarefree_radical(img.form()))?;
            self.radicals.push(r);
        }
        Ok(&self.radicals[n])
    }

    /// Iterates computed so far.
    pub fn computed(&self) -> &[Divisor] {
        &self.radicals
    }
}
