//! Effective divisors in `Div*`, stored by their normalized defining form.

use std::fmt;

use crate::error::{Error, Result};
use crate::form::Form;

/// A divisor whose form restricts to `x_N = 0` as a monic monomial
/// `prod x_i^{e_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Divisor {
    form: Form,
    exps: Vec<u32>,
}

/// Scale `f` so that its restriction to `H` is a monic monomial.
pub fn normalize_divisor(f: &Form) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() == 0 {
        return Err(Error::InvalidInput("divisor of degree zero".into()));
    }
    let r = f.restriction_to_h();
    let mut it = r.canonical_terms();
    let (m, alpha) = match (it.next(), it.next()) {
        (Some(t), None) => t,
        _ => return Err(Error::NotInDivStar),
    };
    let exps = m.to_vec();
    let form = if alpha.is_one() { f.clone() } else { f.scale(&alpha.recip()) };
    Ok(Divisor { form, exps })
}

impl Divisor {
    pub fn new(f: &Form) -> Result<Divisor> {
        normalize_divisor(f)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn nvars(&self) -> usize {
        self.form.nvars()
    }

    /// Exponents `e_i` of the monomial `F_D(x_0, ..., x_{N-1}, 0)`.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// The divisor sum `D + E`, whose form is the product.
    pub fn sum(&self, other: &Divisor) -> Divisor {
        let form = self.form.mul(&other.form);
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Divisor { form, exps }
    }

    pub fn scale_multiplicity(&self, k: u32) -> Divisor {
        Divisor { form: self.form.pow(k), exps: self.exps.iter().map(|e| e * k).collect() }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} = 0}}", self.form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn critical_form_normalizes() {
        let (a, b, c, d) = (3i64, -5, 7, 2);
        let j = Form::from_terms(
            3,
            2,
            &[(&[1, 1, 0], q(4)), (&[1, 0, 1], q(2 * d)), (&[0, 1, 1], q(2 * a)), (&[0, 0, 2], q(a * d - b * c))],
        )
        .unwrap();
        let div = normalize_divisor(&j).unwrap();
        let expect = Form::from_terms(
            3,
            2,
            &[
                (&[1, 1, 0], q(1)),
                (&[1, 0, 1], Rational::frac(d, 2)),
                (&[0, 1, 1], Rational::frac(a, 2)),
                (&[0, 0, 2], Rational::frac(a * d - b * c, 4)),
            ],
        )
        .unwrap();
        assert_eq!(div.form(), &expect);
        assert_eq!(div.exponents(), &[1, 1]);
    }

    #[test]
    fn two_term_restriction_is_rejected() {
        let f = Form::from_terms(3, 2, &[(&[2, 0, 0], q(1)), (&[0, 2, 0], q(1))]).unwrap();
        assert_eq!(normalize_divisor(&f), Err(Error::NotInDivStar));
        let z = Form::from_terms(3, 1, &[(&[0, 0, 1], q(1))]).unwrap();
        assert_eq!(normalize_divisor(&z), Err(Error::NotInDivStar));
    }

    #[test]
    fn linear_scaling() {
        let f = Form::from_terms(3, 1, &[(&[0, 1, 0], q(3)), (&[0, 0, 1], q(-6))]).unwrap();
        let d = normalize_divisor(&f).unwrap();
        assert_eq!(d.form(), &Form::from_terms(3, 1, &[(&[0, 1, 0], q(1)), (&[0, 0, 1], q(-2))]).unwrap());
        assert_eq!(d.exponents(), &[0, 1]);
    }
}
