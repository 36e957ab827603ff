//! Multivariate gcd, squarefree radicals and divisibility.
//!
//! Gcds are first attempted heuristically: evaluate at a large integer,
//! take the gcd of the images, rebuild by balanced `xi`-adic expansion and
//! accept only if the candidate divides both inputs. Homogeneous inputs are
//! dehomogenized in the last variable first. Otherwise the gcd recurses on
//! variables with a primitive remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::divisor::normalize_divisor;
use crate::form::Form;
use crate::modular;
use crate::poly::Poly;
use crate::rational::{gcd_int, Rational};

fn int_content(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = gcd_int(&g, c.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Make the leading coefficient positive.
fn positive(p: Poly) -> Poly {
    match p.leading() {
        Some((_, c)) if c.is_negative() => -&p,
        _ => p,
    }
}

const HEU_MAX_BITS: u64 = 400_000;

fn symmetric_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &(&r * 2) > xi {
        r - xi
    } else {
        r
    }
}

fn max_abs(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn divide_int(p: &Poly, c: &BigInt) -> Poly {
    p.scale(&Rational::new(BigInt::one(), c.clone()))
}

/// Heuristic gcd of nonzero integral polynomials. `None` means the
/// heuristic gave up, not that the gcd is trivial.
fn heu_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let n = a.nvars();
    let (ca, cb) = (int_content(a), int_content(b));
    let c = gcd_int(&ca, &cb);
    let var = (0..n).find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0);
    let Some(var) = var else {
        return Some(Poly::constant(n, Rational::from_int(c)));
    };
    let (a, b) = (divide_int(a, &ca), divide_int(b, &cb));
    let deg = a.degree_in(var).unwrap().max(b.degree_in(var).unwrap()) as u64;
    let mut xi: BigInt = max_abs(&a).min(max_abs(&b)) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() * deg > HEU_MAX_BITS {
            return None;
        }
        let x = Rational::from_int(xi.clone());
        let mut img = heu_gcd(&a.eval_var(var, &x), &b.eval_var(var, &x))?;
        let mut terms = Vec::new();
        let mut k = 0u32;
        while !img.is_zero() {
            let digit: Vec<_> =
                img.terms().map(|(m, c)| (*m, Rational::from_int(symmetric_mod(c.numer(), &xi)))).collect();
            for (m, c) in &digit {
                terms.push((m.insert(var, k), c.clone()));
            }
            img = divide_int(&(&img - &Poly::from_terms(n - 1, digit)), &xi);
            k += 1;
        }
        let g = Poly::from_terms(n, terms);
        if !g.is_zero() {
            let (_, g) = g.primitive_integer();
            if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(positive(g.scale(&Rational::from_int(c))));
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Lowest power of `var` dividing `p`.
fn valuation_in(p: &Poly, var: usize) -> u32 {
    p.terms().map(|(m, _)| m.get(var)).min().unwrap_or(0)
}

/// Gcd of homogeneous polynomials through the affine chart of the last
/// variable.
fn homogeneous_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let n = a.nvars();
    let last = n - 1;
    let one = Rational::one();
    let g = heu_gcd(&a.eval_var(last, &one), &b.eval_var(last, &one))?;
    let d = g.total_degree().unwrap_or(0);
    let v = valuation_in(a, last).min(valuation_in(b, last));
    let terms = g.terms().map(|(m, c)| (m.insert(last, d - m.degree() + v), c.clone()));
    Some(positive(Poly::from_terms(n, terms)))
}

/// Gcd in `Z[x]` of integral polynomials, with positive leading coefficient.
pub fn poly_gcd_z(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    let homogeneous = n >= 2
        && a.total_degree().is_some_and(|d| a.is_homogeneous_of(d))
        && b.total_degree().is_some_and(|d| b.is_homogeneous_of(d));
    let fast = if homogeneous { homogeneous_gcd(a, b) } else { heu_gcd(a, b) };
    if let Some(g) = fast {
        return g;
    }
    let var = (0..n).find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0);
    let Some(var) = var else {
        let g = gcd_int(&int_content(a), &int_content(b));
        return Poly::constant(n, Rational::from_int(g));
    };
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = poly_gcd_z(&ca, &cb);
    let pa = divide_coefficients(&a.coefficients_in(var), &ca);
    let pb = divide_coefficients(&b.coefficients_in(var), &cb);
    let g = primitive_prs(pa, pb);
    let g = Poly::from_coefficients_in(var, &g);
    positive(&g * &c.insert_var(var))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    content_of(&p.coefficients_in(var))
}

fn content_of(coeffs: &[Poly]) -> Poly {
    let nv = coeffs[0].nvars();
    let mut g = Poly::zero(nv);
    let mut sorted: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // cheap coefficients first keep intermediate gcds small
    sorted.sort_by_key(|c| c.len());
    for c in sorted {
        g = poly_gcd_z(&g, c);
        if g.is_constant() && g.leading().map(|(_, v)| v.is_one()).unwrap_or(false) {
            break;
        }
    }
    g
}

fn divide_coefficients(coeffs: &[Poly], c: &Poly) -> Vec<Poly> {
    coeffs.iter().map(|p| if p.is_zero() { p.clone() } else { p.div_exact(c).expect("content divides") }).collect()
}

fn trim(v: &mut Vec<Poly>) {
    while v.len() > 1 && v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of `f` by `g`, coefficient vectors lowest degree first.
fn prem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let mut r = f.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    let lc = &g[dg];
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - dg;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (j, gj) in g.iter().enumerate() {
            let t = &lr * gj;
            r[j + k] = &r[j + k] - &t;
        }
        // the top coefficient cancels exactly
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        trim(&mut r);
    }
    r
}

fn primitive(v: Vec<Poly>) -> Vec<Poly> {
    let c = content_of(&v);
    let c = positive(c);
    divide_coefficients(&v, &c)
}

fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// Gcd of two primitive polynomials in the main variable.
fn primitive_prs(mut f: Vec<Poly>, mut g: Vec<Poly>) -> Vec<Poly> {
    trim(&mut f);
    trim(&mut g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let nv = f[0].nvars();
    if is_zero_vec(&g) {
        return f;
    }
    loop {
        if g.len() == 1 {
            return vec![Poly::one(nv)];
        }
        let r = prem(&f, &g);
        if is_zero_vec(&r) {
            return g;
        }
        f = g;
        g = primitive(r);
    }
}

/// Gcd of two forms, primitive and scaled so the leading canonical
/// coefficient is 1.
pub fn form_gcd(a: &Form, b: &Form) -> Form {
    let (_, pa) = a.poly().primitive_integer();
    let (_, pb) = b.poly().primitive_integer();
    let g = poly_gcd_z(&pa, &pb).monic();
    Form::from_poly(g).expect("gcd of homogeneous forms is homogeneous")
}

/// Content of `f` as a polynomial in `var`: the largest factor not
/// involving `var`, scaled like [`form_gcd`].
pub fn form_content(f: &Form, var: usize) -> Form {
    let (_, p) = f.poly().primitive_integer();
    let c = content_in(&p, var).insert_var(var).monic();
    Form::from_poly(c).expect("content of a form is a form")
}

/// `true` iff `b = a * q` for some polynomial `q`.
pub fn divides(a: &Form, b: &Form) -> bool {
    if b.is_zero() {
        return true;
    }
    if a.is_zero() || a.degree() > b.degree() {
        return false;
    }
    poly_divides(a.poly(), b.poly())
}

pub(crate) fn poly_divides(a: &Poly, b: &Poly) -> bool {
    let (_, pa) = a.primitive_integer();
    let (_, pb) = b.primitive_integer();
    if !modular::may_divide(&pa, &pb) {
        return false;
    }
    pb.div_exact(&pa).is_some()
}

/// Squarefree part of an integral polynomial, primitive with positive
/// leading coefficient.
pub(crate) fn squarefree_part(p: &Poly) -> Poly {
    let (_, mut cur) = p.primitive_integer();
    loop {
        if cur.is_constant() || modular::certainly_squarefree(&cur) {
            return cur;
        }
        let mut g = cur.clone();
        for v in 0..cur.nvars() {
            let d = cur.derivative(v);
            if d.is_zero() {
                continue;
            }
            let (_, d) = d.primitive_integer();
            g = poly_gcd_z(&g, &d);
            if g.is_constant() {
                break;
            }
        }
        if g.is_constant() {
            return cur;
        }
        let (_, next) = cur.div_exact(&g).expect("gcd divides").primitive_integer();
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Same support, multiplicities one. Rescaled into `Div*` normal form when
/// possible, otherwise to leading canonical coefficient 1.
pub fn squarefree_radical(f: &Form) -> Form {
    if f.is_zero() {
        return f.clone();
    }
    let r = squarefree_part(f.poly());
    let r = Form::from_poly(r).expect("squarefree part of a form is a form");
    match normalize_divisor(&r) {
        Ok(d) => d.form().clone(),
        Err(_) => r.scale(&r.canonical_terms().next().unwrap().1.recip()),
    }
}
