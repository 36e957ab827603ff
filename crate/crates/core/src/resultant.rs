//! Macaulay resultants of `N + 1` forms in `N + 1` variables.
//!
//! The primary route is Macaulay's quotient `det M / det M'` at the
//! critical degree. If the extraneous minor `M'` is singular the forms are
//! moved by random integer changes of variables; if that keeps failing the
//! system is perturbed to `F_i + eps x_i^{d_i}` and the constant term of
//! the resulting polynomial in `eps` is read off.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::matrix::{det_rational, solve_rational};
use crate::multi_index::{monomials_of_degree, MultiIndex};
use crate::poly::Poly;
use crate::rational::Rational;

const CHANGE_OF_VARIABLE_RETRIES: u64 = 8;

#[derive(Clone, Debug)]
pub struct ResultantProblem {
    forms: Vec<Form>,
}

impl ResultantProblem {
    pub fn new(forms: Vec<Form>) -> Result<ResultantProblem> {
        let n = forms.len();
        if n == 0 || n > crate::multi_index::MAX_VARS {
            return Err(Error::InvalidProblem(format!("need between 1 and {} forms", crate::multi_index::MAX_VARS)));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.nvars() != n {
                return Err(Error::InvalidProblem(format!("form {i} has {} variables, expected {n}", f.nvars())));
            }
            if f.degree() == 0 {
                return Err(Error::InvalidProblem(format!("form {i} has degree 0")));
            }
            if f.is_zero() {
                return Err(Error::InvalidProblem(format!("form {i} is zero")));
            }
        }
        Ok(ResultantProblem { forms })
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.forms.iter().map(|f| f.degree()).collect()
    }

    /// `t = sum (d_i - 1) + 1`.
    pub fn critical_degree(&self) -> u32 {
        self.forms.iter().map(|f| f.degree() - 1).sum::<u32>() + 1
    }
}

/// The Macaulay resultant, normalized by `Res(x_0^{d_0}, ..., x_N^{d_N}) = 1`.
pub fn macaulay_resultant(p: &ResultantProblem) -> Result<Rational> {
    if let Some(r) = macaulay_quotient(p.forms()) {
        return Ok(r);
    }
    if let Some(r) = resultant_by_change_of_variables(p) {
        return Ok(r);
    }
    resultant_by_perturbation(p).ok_or(Error::ResultantFailure)
}

struct MacaulayMatrix {
    full: Vec<Vec<Rational>>,
    extraneous: Vec<usize>,
}

fn macaulay_matrix(forms: &[Form]) -> MacaulayMatrix {
    let n = forms.len();
    let degs: Vec<u32> = forms.iter().map(|f| f.degree()).collect();
    let t = degs.iter().map(|d| d - 1).sum::<u32>() + 1;
    let mons = monomials_of_degree(n, t);
    let index: HashMap<MultiIndex, usize> = mons.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let size = mons.len();
    let mut full = vec![vec![Rational::zero(); size]; size];
    let mut extraneous = Vec::new();
    for (r, alpha) in mons.iter().enumerate() {
        let divisible: Vec<usize> = (0..n).filter(|&i| alpha.get(i) >= degs[i]).collect();
        if divisible.len() >= 2 {
            extraneous.push(r);
        }
        let i = divisible[0];
        let shift = alpha.with(i, alpha.get(i) - degs[i]);
        for (m, c) in forms[i].poly().terms() {
            full[r][index[&m.add(&shift)]] = c.clone();
        }
    }
    MacaulayMatrix { full, extraneous }
}

fn submatrix(m: &[Vec<Rational>], idx: &[usize]) -> Vec<Vec<Rational>> {
    idx.iter().map(|&r| idx.iter().map(|&c| m[r][c].clone()).collect()).collect()
}

/// `det M / det M'`, or `None` when the extraneous minor vanishes.
pub fn macaulay_quotient(forms: &[Form]) -> Option<Rational> {
    let mm = macaulay_matrix(forms);
    let den = det_rational(&submatrix(&mm.full, &mm.extraneous));
    if den.is_zero() {
        return None;
    }
    Some(det_rational(&mm.full) / den)
}

/// Retry under seeded random integer changes of variables `x -> A x`, using
/// `Res(F o A) = det(A)^{prod d_i} Res(F)`.
pub fn resultant_by_change_of_variables(p: &ResultantProblem) -> Option<Rational> {
    let n = p.forms().len();
    let prod_deg: u32 = p.degrees().iter().product();
    for attempt in 0..CHANGE_OF_VARIABLE_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_6361_756c_6179 ^ attempt);
        let a: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| Rational::from_int(rng.gen_range(-9i64..=9))).collect()).collect();
        let det_a = det_rational(&a);
        if det_a.is_zero() {
            continue;
        }
        let moved: Vec<Form> = p
            .forms()
            .iter()
            .map(|f| Form::new(f.poly().linear_substitute(&a), f.degree()).expect("substitution keeps degree"))
            .collect();
        if let Some(r) = macaulay_quotient(&moved) {
            return Some(r / det_a.pow(prod_deg));
        }
    }
    None
}

/// Generalized characteristic polynomial: `det M(eps) / det M'(eps)` for the
/// system `F_i + eps x_i^{d_i}` is a polynomial whose constant term is the
/// resultant.
pub fn resultant_by_perturbation(p: &ResultantProblem) -> Option<Rational> {
    let forms = p.forms();
    let n = forms.len();
    let base = macaulay_matrix(forms);
    let size = base.full.len();
    // both determinants have degree at most `size` in eps
    let points: Vec<Rational> = (1..=size as i64 + 1).map(Rational::from_int).collect();
    let mut num_vals = Vec::with_capacity(points.len());
    let mut den_vals = Vec::with_capacity(points.len());
    for e in &points {
        let perturbed: Vec<Form> = forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut q = f.poly().clone();
                q.add_term(MultiIndex::pure(n, i, f.degree()), e);
                Form::new(q, f.degree()).expect("perturbation keeps degree")
            })
            .collect();
        let mm = macaulay_matrix(&perturbed);
        num_vals.push(det_rational(&mm.full));
        den_vals.push(det_rational(&submatrix(&mm.full, &mm.extraneous)));
    }
    let num = interpolate_univariate(&points, &num_vals)?;
    let den = interpolate_univariate(&points, &den_vals)?;
    if den.is_zero() {
        return None;
    }
    let quot = num.div_exact(&den)?;
    Some(quot.coeff(&MultiIndex::zero(1)))
}

fn interpolate_univariate(xs: &[Rational], ys: &[Rational]) -> Option<Poly> {
    let vander: Vec<Vec<Rational>> = xs.iter().map(|x| (0..xs.len() as u32).map(|k| x.pow(k)).collect()).collect();
    let c = solve_rational(&vander, ys)?;
    Some(Poly::from_terms(1, c.into_iter().enumerate().map(|(k, v)| (MultiIndex::new(&[k as u32]), v))))
}

/// Convenience wrapper building the problem first.
pub fn resultant_of(forms: Vec<Form>) -> Result<Rational> {
    macaulay_resultant(&ResultantProblem::new(forms)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn form(nvars: usize, deg: u32, terms: &[(&[u32], i64)]) -> Form {
        Form::from_terms(nvars, deg, &terms.iter().map(|(m, c)| (*m, q(*c))).collect::<Vec<_>>()).unwrap()
    }

    /// Sylvester determinant of two binary forms, coefficients by descending power of `x_0`.
    fn sylvester(f: &Form, g: &Form) -> Rational {
        let (a, b) = (f.degree() as usize, g.degree() as usize);
        let fc: Vec<Rational> = (0..=a).map(|k| f.coeff(&[(a - k) as u32, k as u32])).collect();
        let gc: Vec<Rational> = (0..=b).map(|k| g.coeff(&[(b - k) as u32, k as u32])).collect();
        let size = a + b;
        let mut m = vec![vec![q(0); size]; size];
        for r in 0..b {
            for (k, c) in fc.iter().enumerate() {
                m[r][r + k] = c.clone();
            }
        }
        for r in 0..a {
            for (k, c) in gc.iter().enumerate() {
                m[b + r][r + k] = c.clone();
            }
        }
        det_rational(&m)
    }

    #[test]
    fn pure_powers_give_one() {
        let p = vec![form(3, 2, &[(&[2, 0, 0], 1)]), form(3, 2, &[(&[0, 2, 0], 1)]), form(3, 2, &[(&[0, 0, 2], 1)])];
        assert_eq!(resultant_of(p).unwrap(), q(1));
    }

    #[test]
    fn binary_linear_is_determinant() {
        let f = form(2, 1, &[(&[1, 0], 3), (&[0, 1], 5)]);
        let g = form(2, 1, &[(&[1, 0], -2), (&[0, 1], 7)]);
        assert_eq!(resultant_of(vec![f, g]).unwrap(), q(3 * 7 + 10));
    }

    #[test]
    fn binary_matches_sylvester() {
        let f = form(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let g = form(2, 2, &[(&[0, 2], 1)]);
        assert_eq!(resultant_of(vec![f.clone(), g.clone()]).unwrap(), sylvester(&f, &g));
        assert_eq!(resultant_of(vec![f, g]).unwrap(), q(1));
        let f = form(2, 3, &[(&[3, 0], 2), (&[2, 1], -1), (&[0, 3], 4)]);
        let g = form(2, 2, &[(&[2, 0], 1), (&[1, 1], 3), (&[0, 2], -5)]);
        assert_eq!(resultant_of(vec![f.clone(), g.clone()]).unwrap(), sylvester(&f, &g));
    }

    #[test]
    fn common_zero_gives_zero() {
        // all three vanish at (1 : 1 : 1)
        let p = vec![
            form(3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], -1)]),
            form(3, 1, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]),
            form(3, 2, &[(&[0, 2, 0], 2), (&[1, 0, 1], -1), (&[0, 0, 2], -1)]),
        ];
        assert_eq!(resultant_of(p).unwrap(), q(0));
    }

    #[test]
    fn fallback_routes_agree() {
        let p = ResultantProblem::new(vec![
            form(3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], 3), (&[1, 0, 1], -2)]),
            form(3, 2, &[(&[0, 2, 0], 1), (&[1, 0, 1], 5)]),
            form(3, 1, &[(&[0, 0, 1], 1), (&[1, 0, 0], 2), (&[0, 1, 0], -1)]),
        ])
        .unwrap();
        let direct = macaulay_quotient(p.forms()).unwrap();
        assert_eq!(resultant_by_change_of_variables(&p).unwrap(), direct);
        assert_eq!(resultant_by_perturbation(&p).unwrap(), direct);
    }

    #[test]
    fn multiplicative_in_first_slot() {
        let a = form(3, 1, &[(&[1, 0, 0], 1)]);
        let c = form(3, 1, &[(&[0, 0, 1], 1)]);
        let g1 = form(3, 2, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]);
        let g2 = form(3, 2, &[(&[1, 0, 1], 1), (&[0, 1, 1], 3), (&[0, 0, 2], 1), (&[2, 0, 0], 1)]);
        let prod = a.mul(&c);
        let whole = resultant_of(vec![prod, g1.clone(), g2.clone()]).unwrap();
        let left = resultant_of(vec![a, g1.clone(), g2.clone()]).unwrap();
        let right = resultant_of(vec![c, g1, g2]).unwrap();
        assert_eq!(whole, left * right);
    }
}
