//! Conjugacy classes in the integer quadratic family
//! `f(x, y) = (x^2 + ax + by, y^2 + cx + dy)`.
//!
//! The moves are the coordinate swap `(a, b, c, d) -> (d, c, b, a)` and
//! conjugation by the translation to an affine fixed point `(u, v)`, which
//! gives `(a + 2u, b, c, d + 2v)`. Every map in the family fixes the
//! origin, so each move can be undone and orbits under the moves are
//! equivalence classes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type Quad = [i64; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Quad,
    pub members: Vec<Quad>,
    /// Every conjugate reachable by the moves.
    pub closure: Vec<Quad>,
}

fn eval(coeffs: &[i128], x: i128) -> Option<i128> {
    let mut acc: i128 = 0;
    for c in coeffs.iter().rev() {
        acc = acc.checked_mul(x)?.checked_add(*c)?;
    }
    Some(acc)
}

/// Integer roots of a monic integer polynomial, coefficients lowest first.
fn integer_roots(coeffs: &[i128]) -> Vec<i128> {
    let mut roots = Vec::new();
    let mut c = coeffs.to_vec();
    // strip factors of x
    while c.len() > 1 && c[0] == 0 {
        if !roots.contains(&0) {
            roots.push(0);
        }
        c.remove(0);
    }
    if c.len() == 1 {
        return roots;
    }
    let k = c[0].unsigned_abs();
    let mut i: u128 = 1;
    while i * i <= k {
        if k % i == 0 {
            for q in [i, k / i] {
                for r in [q as i128, -(q as i128)] {
                    if eval(&c, r) == Some(0) && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        i += 1;
    }
    roots.sort_unstable();
    roots
}

/// Affine fixed points of `f_{a,b,c,d}`; all of them are integral.
pub fn affine_fixed_points(t: Quad) -> Vec<(i64, i64)> {
    let [a, b, c, d] = t.map(|v| v as i128);
    let mut out = BTreeSet::new();
    let fixed = |x: i128, y: i128| x * x + (a - 1) * x + b * y == 0 && y * y + c * x + (d - 1) * y == 0;
    if b == 0 {
        for x in [0, 1 - a] {
            // y^2 + (d - 1) y + c x = 0
            for y in integer_roots(&[c * x, d - 1, 1]) {
                if fixed(x, y) {
                    out.insert((x as i64, y as i64));
                }
            }
        }
    } else {
        // y = -(x^2 + (a - 1) x) / b; clear b^2 in the second equation
        let s = [0, a - 1, 1];
        let mut quartic = [0i128; 5];
        for i in 0..3 {
            for j in 0..3 {
                quartic[i + j] += s[i] * s[j];
            }
        }
        quartic[1] += c * b * b;
        for i in 0..3 {
            quartic[i] -= (d - 1) * b * s[i];
        }
        for x in integer_roots(&quartic) {
            let num = -(x * x + (a - 1) * x);
            if num % b == 0 && fixed(x, num / b) {
                out.insert((x as i64, (num / b) as i64));
            }
        }
    }
    out.into_iter().collect()
}

pub fn swap(t: Quad) -> Quad {
    [t[3], t[2], t[1], t[0]]
}

pub fn translate(t: Quad, (u, v): (i64, i64)) -> Quad {
    [t[0] + 2 * u, t[1], t[2], t[3] + 2 * v]
}

/// All tuples conjugate to `t` under the moves.
pub fn conjugates(t: Quad) -> Vec<Quad> {
    let mut seen = BTreeSet::from([t]);
    let mut queue = VecDeque::from([t]);
    while let Some(s) = queue.pop_front() {
        let mut next = vec![swap(s)];
        next.extend(affine_fixed_points(s).into_iter().map(|p| translate(s, p)));
        for n in next {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().collect()
}

/// Ordering for representatives: smallest absolute values first, then
/// signed lexicographic.
pub fn representative_key(t: &Quad) -> ([u64; 4], Quad) {
    (t.map(|v| v.unsigned_abs()), *t)
}

pub fn representative(t: Quad) -> Quad {
    conjugates(t).into_iter().min_by_key(representative_key).unwrap()
}

/// Group tuples into conjugacy classes, sorted by representative key.
pub fn conjugacy_dedupe(tuples: &[Quad]) -> Vec<ConjugacyClass> {
    let mut classes: BTreeMap<([u64; 4], Quad), ConjugacyClass> = BTreeMap::new();
    let mut cache: BTreeMap<Quad, Quad> = BTreeMap::new();
    for &t in tuples {
        let rep = match cache.get(&t) {
            Some(r) => *r,
            None => {
                let closure = conjugates(t);
                let rep = *closure.iter().min_by_key(|s| representative_key(s)).unwrap();
                for s in &closure {
                    cache.insert(*s, rep);
                }
                classes
                    .entry(representative_key(&rep))
                    .or_insert(ConjugacyClass { representative: rep, members: Vec::new(), closure });
                rep
            }
        };
        let class = classes.get_mut(&representative_key(&rep)).unwrap();
        if !class.members.contains(&t) {
            class.members.push(t);
        }
    }
    let mut out: Vec<ConjugacyClass> = classes.into_values().collect();
    for c in out.iter_mut() {
        c.members.sort_unstable();
    }
    out
}
