//! Multivariate interpolation on a triangular grid.
//!
//! Nodes along every axis come from the fixed sequence `1, -1, 2, -2, ...`.
//! The grid `{alpha : |alpha| <= D}` is a lower set, so tensor Newton
//! divided differences applied axis by axis recover the coefficients in the
//! Newton basis `prod_i omega_{alpha_i}(y_i)`.

use std::collections::HashMap;

use crate::multi_index::{monomials_up_to_degree, MultiIndex};
use crate::poly::Poly;
use crate::rational::Rational;

/// The `k`-th interpolation node.
pub fn node(k: u32) -> Rational {
    let m = (k / 2 + 1) as i64;
    Rational::from_int(if k % 2 == 0 { m } else { -m })
}

/// The grid points, one per exponent vector of degree at most `deg`.
pub fn grid(nvars: usize, deg: u32) -> Vec<(MultiIndex, Vec<Rational>)> {
    monomials_up_to_degree(nvars, deg)
        .into_iter()
        .map(|a| {
            let pt = (0..nvars).map(|i| node(a.get(i))).collect();
            (a, pt)
        })
        .collect()
}

/// The unique polynomial of total degree at most `deg` taking the given
/// values on [`grid`]. `values` must be listed in grid order.
pub fn interpolate(nvars: usize, deg: u32, values: &[Rational]) -> Poly {
    let pts = grid(nvars, deg);
    assert_eq!(pts.len(), values.len(), "value count must match the grid");
    let mut v: HashMap<MultiIndex, Rational> = pts.iter().map(|(a, _)| *a).zip(values.iter().cloned()).collect();
    let nodes: Vec<Rational> = (0..=deg).map(node).collect();
    for axis in 0..nvars {
        // lines along `axis`: all alpha with alpha[axis] == 0
        let starts: Vec<MultiIndex> = pts.iter().map(|(a, _)| *a).filter(|a| a.get(axis) == 0).collect();
        for s in starts {
            let len = (deg - s.degree()) as usize + 1;
            let mut line: Vec<Rational> = (0..len).map(|k| v[&s.with(axis, k as u32)].clone()).collect();
            for k in 1..len {
                for i in (k..len).rev() {
                    let num = &line[i] - &line[i - 1];
                    line[i] = num / (&nodes[i] - &nodes[i - k]);
                }
            }
            for (k, c) in line.into_iter().enumerate() {
                v.insert(s.with(axis, k as u32), c);
            }
        }
    }
    // expand the Newton basis
    let omega: Vec<Poly> = {
        let mut out = vec![Poly::one(1)];
        for k in 0..deg as usize {
            let lin = Poly::from_terms(1, [(MultiIndex::new(&[1]), Rational::one()), (MultiIndex::new(&[0]), -&nodes[k])]);
            let next = out.last().unwrap() * &lin;
            out.push(next);
        }
        out
    };
    let lift = |p: &Poly, axis: usize| -> Poly {
        Poly::from_terms(nvars, p.terms().map(|(m, c)| (MultiIndex::pure(nvars, axis, m.get(0)), c.clone())))
    };
    let mut out = Poly::zero(nvars);
    for (a, _) in &pts {
        let c = &v[a];
        if c.is_zero() {
            continue;
        }
        let mut t = Poly::constant(nvars, c.clone());
        for axis in 0..nvars {
            let k = a.get(axis) as usize;
            if k > 0 {
                t = &t * &lift(&omega[k], axis);
            }
        }
        out = &out + &t;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_alternate() {
        let v: Vec<String> = (0..5).map(|k| node(k).to_string()).collect();
        assert_eq!(v, ["1", "-1", "2", "-2", "3"]);
    }

    #[test]
    fn recovers_bivariate_polynomial() {
        let p = Poly::from_terms(
            2,
            [
                (MultiIndex::new(&[3, 1]), Rational::frac(1, 2)),
                (MultiIndex::new(&[0, 2]), Rational::from_int(-7)),
                (MultiIndex::new(&[1, 0]), Rational::from_int(3)),
                (MultiIndex::new(&[0, 0]), Rational::from_int(11)),
            ],
        );
        let vals: Vec<Rational> = grid(2, 4).iter().map(|(_, pt)| p.eval(pt)).collect();
        assert_eq!(interpolate(2, 4, &vals), p);
    }

    #[test]
    fn recovers_trivariate_polynomial() {
        let p = Poly::from_terms(
            3,
            [
                (MultiIndex::new(&[1, 1, 1]), Rational::from_int(2)),
                (MultiIndex::new(&[0, 0, 2]), Rational::from_int(-1)),
                (MultiIndex::new(&[0, 1, 0]), Rational::from_int(5)),
            ],
        );
        let vals: Vec<Rational> = grid(3, 3).iter().map(|(_, pt)| p.eval(pt)).collect();
        assert_eq!(interpolate(3, 3, &vals), p);
    }
}
