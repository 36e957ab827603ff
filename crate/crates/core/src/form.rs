//! Homogeneous forms and their JSON encoding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Form {
    degree: u32,
    poly: Poly,
}

impl Form {
    pub fn new(poly: Poly, degree: u32) -> Result<Form> {
        if !poly.is_homogeneous_of(degree) {
            return Err(Error::NotHomogeneous);
        }
        Ok(Form { degree, poly })
    }

    /// Takes the degree from the leading term. Fails on zero or
    /// inhomogeneous input.
    pub fn from_poly(poly: Poly) -> Result<Form> {
        let degree = poly.total_degree().ok_or(Error::ZeroForm)?;
        Form::new(poly, degree)
    }

    pub fn zero(nvars: usize, degree: u32) -> Form {
        Form { degree, poly: Poly::zero(nvars) }
    }

    pub fn from_terms(nvars: usize, degree: u32, terms: &[(&[u32], Rational)]) -> Result<Form> {
        let poly = Poly::from_terms(nvars, terms.iter().map(|(m, c)| (MultiIndex::new(m), c.clone())));
        Form::new(poly, degree)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.poly.coeff(&MultiIndex::new(m))
    }

    /// Terms in canonical order: leading (largest) monomial first.
    pub fn canonical_terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.poly.terms().rev()
    }

    /// Set the last variable to zero and drop it.
    pub fn restriction_to_h(&self) -> Form {
        let n = self.nvars() - 1;
        let poly = Poly::from_terms(n, self.poly.terms().filter(|(m, _)| m.last() == 0).map(|(m, c)| (m.remove(n), c.clone())));
        Form { degree: self.degree, poly }
    }

    pub fn mul(&self, other: &Form) -> Form {
        Form { degree: self.degree + other.degree, poly: &self.poly * &other.poly }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        Form { degree: self.degree, poly: self.poly.scale(c) }
    }

    pub fn pow(&self, e: u32) -> Form {
        Form { degree: self.degree * e, poly: self.poly.pow(e) }
    }

    pub fn derivative(&self, var: usize) -> Form {
        Form { degree: self.degree.saturating_sub(1), poly: self.poly.derivative(var) }
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            nvars: self.nvars(),
            degree: self.degree,
            terms: self.canonical_terms().map(|(m, c)| TermJson { index: m.to_vec(), value: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: &FormJson) -> Result<Form> {
        if j.nvars == 0 || j.nvars > crate::multi_index::MAX_VARS {
            return Err(Error::InvalidInput(format!("unsupported variable count {}", j.nvars)));
        }
        let mut poly = Poly::zero(j.nvars);
        for t in &j.terms {
            if t.index.len() != j.nvars {
                return Err(Error::InvalidInput("term index length differs from nvars".into()));
            }
            if t.index.iter().any(|&e| e > u16::MAX as u32) {
                return Err(Error::InvalidInput("exponent too large".into()));
            }
            poly.add_term(MultiIndex::new(&t.index), &t.value);
        }
        Form::new(poly, j.degree)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("form serialization")
    }

    pub fn from_json_str(s: &str) -> Result<Form> {
        let j: FormJson = serde_json::from_str(s)?;
        Form::from_json(&j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<u32>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

pub(crate) fn var_name(nvars: usize, i: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if nvars <= 4 {
        NAMES[i].to_string()
    } else {
        format!("x{i}")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.nvars();
        for (k, (m, c)) in self.canonical_terms().enumerate() {
            let mut mono = Vec::new();
            for i in 0..n {
                match m.get(i) {
                    0 => {}
                    1 => mono.push(var_name(n, i)),
                    e => mono.push(format!("{}^{}", var_name(n, i), e)),
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", a, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn restriction_examples() {
        let f = Form::from_terms(3, 2, &[(&[1, 1, 0], q(1)), (&[1, 0, 1], q(2))]).unwrap();
        assert_eq!(f.restriction_to_h(), Form::from_terms(2, 2, &[(&[1, 1], q(1))]).unwrap());
        let z2 = Form::from_terms(3, 2, &[(&[0, 0, 2], q(1))]).unwrap();
        assert!(z2.restriction_to_h().is_zero());
        let c = Form::from_terms(3, 2, &[(&[0, 2, 0], q(1)), (&[1, 0, 1], q(-4))]).unwrap();
        assert_eq!(c.restriction_to_h(), Form::from_terms(2, 2, &[(&[0, 2], q(1))]).unwrap());
    }

    #[test]
    fn rejects_inhomogeneous() {
        assert_eq!(Form::from_terms(2, 2, &[(&[2, 0], q(1)), (&[0, 1], q(1))]), Err(Error::NotHomogeneous));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let f = Form::from_terms(
            3,
            2,
            &[(&[0, 0, 2], Rational::frac(-3, 4)), (&[1, 1, 0], q(1)), (&[1, 0, 1], Rational::frac(1, 2))],
        )
        .unwrap();
        let s = f.to_json_string();
        assert_eq!(
            s,
            r#"{"nvars":3,"degree":2,"terms":[{"index":[1,1,0],"value":"1"},{"index":[1,0,1],"value":"1/2"},{"index":[0,0,2],"value":"-3/4"}]}"#
        );
        assert_eq!(Form::from_json_str(&s).unwrap(), f);
        assert_eq!(f.to_string(), "x*y + 1/2*x*z - 3/4*z^2");
    }
}
