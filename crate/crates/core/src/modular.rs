//! One-sided tests modulo a large prime.
//!
//! Each test can only answer in one direction: a `true` from
//! [`certainly_squarefree`] and a `false` from [`may_divide`] are proofs;
//! the other answers mean "fall back to exact arithmetic".

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::rational::Rational;

/// `2^61 - 1`.
pub const PRIME: u64 = 2_305_843_009_213_693_951;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, PRIME - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    n.mod_floor(&p).to_u64().unwrap()
}

/// Image of a rational, or `None` when the prime divides the denominator.
pub fn reduce(q: &Rational) -> Option<u64> {
    let d = reduce_int(q.denom());
    if d == 0 {
        return None;
    }
    Some(mul(reduce_int(q.numer()), inv(d)))
}

/// Dense univariate polynomial mod `PRIME`, lowest degree first, no
/// trailing zeros.
type Upoly = Vec<u64>;

fn trim(p: &mut Upoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn rem(a: &Upoly, b: &Upoly) -> Upoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lc_inv = inv(b[db]);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let t = mul(*r.last().unwrap(), lc_inv);
        for (j, &bj) in b.iter().enumerate() {
            r[j + k] = sub(r[j + k], mul(t, bj));
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &Upoly, b: &Upoly) -> Upoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn derivative(a: &Upoly) -> Upoly {
    let mut d: Upoly = a.iter().enumerate().skip(1).map(|(k, &c)| mul(c, k as u64 % PRIME)).collect();
    trim(&mut d);
    d
}

/// Specialize every variable except `var` at `point` (indexed by variable,
/// the entry at `var` ignored). `None` if a coefficient has the prime in its
/// denominator.
fn specialize(p: &Poly, var: usize, point: &[u64]) -> Option<Upoly> {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut out = vec![0u64; deg + 1];
    for (m, c) in p.terms() {
        let mut t = reduce(c)?;
        for (j, &x) in point.iter().enumerate() {
            if j != var {
                t = mul(t, pow(x, m.get(j) as u64));
            }
        }
        let k = m.get(var) as usize;
        out[k] = add(out[k], t);
    }
    trim(&mut out);
    Some(out)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(1..PRIME)).collect()
}

/// `true` only if `p` is proven squarefree over the rationals. For each
/// variable the other variables are specialized so that the degree in that
/// variable is preserved; a squarefree image then excludes repeated factors
/// involving that variable.
pub fn certainly_squarefree(p: &Poly) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f5f_7371_7266);
    for var in 0..p.nvars() {
        let deg = p.degree_in(var).unwrap_or(0) as usize;
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            // a repeated factor involving `var` needs degree >= 2 in it
            continue;
        }
        let mut ok = false;
        for _ in 0..3 {
            let point = random_point(&mut rng, p.nvars());
            let Some(img) = specialize(p, var, &point) else { return false };
            if img.len() != deg + 1 {
                continue;
            }
            let g = gcd(&img, &derivative(&img));
            ok = g.len() == 1;
            break;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// `false` only if `a` provably does not divide `b`. Requires `a`
/// primitive and integral and `b` integral, so that an exact quotient is
/// integral as well.
pub fn may_divide(a: &Poly, b: &Poly) -> bool {
    if a.nvars() == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6469_7669_6465);
    for var in 0..a.nvars() {
        if a.degree_in(var).unwrap_or(0) == 0 {
            continue;
        }
        let point = random_point(&mut rng, a.nvars());
        let (Some(ia), Some(ib)) = (specialize(a, var, &point), specialize(b, var, &point)) else { return true };
        if ia.is_empty() {
            continue;
        }
        if ia.len() > ib.len() && !ib.is_empty() {
            return false;
        }
        if !rem(&ib, &ia).is_empty() {
            return false;
        }
    }
    true
}
