//! Best-effort critical portraits: split orbit radicals into pieces by
//! gcds, then record where each piece goes.

use std::cmp::Reverse;
use std::fmt;

use serde_json::{json, Value};

use crate::divisor::{normalize_divisor, Divisor};
use crate::error::Result;
use crate::form::Form;
use crate::gcd::{divides, form_content, form_gcd, squarefree_radical};
use crate::polymap::PolyMap;
use crate::pushforward::pushforward;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    /// Pieces of the orbit support, in order of first appearance along the
    /// orbit, then by degree, then with larger leading monomial first.
    pub components: Vec<Form>,
    /// `edges[i]` lists the pieces whose union is the support of `f_*(D_i)`,
    /// or `None` when that support is not a union of pieces.
    pub edges: Vec<Option<Vec<usize>>>,
}

fn exact_quotient(a: &Form, b: &Form) -> Form {
    let q = a.poly().div_exact(b.poly()).expect("gcd divides");
    Form::new(q, a.degree() - b.degree()).expect("quotient of forms")
}

fn canonical(f: &Form) -> Form {
    match normalize_divisor(f) {
        Ok(d) => d.form().clone(),
        Err(_) => squarefree_radical(f),
    }
}

/// Refine squarefree forms into pairwise coprime pieces with the same union.
fn refine(mut pieces: Vec<Form>) -> Vec<Form> {
    pieces.retain(|p| p.degree() > 0);
    let nv = pieces.first().map(|p| p.nvars()).unwrap_or(0);
    // factors free of one affine variable come out as contents
    for v in 0..nv.saturating_sub(1) {
        let contents: Vec<Form> = pieces.iter().map(|p| form_content(p, v)).filter(|c| c.degree() > 0).collect();
        pieces.extend(contents);
    }
    // coordinate hyperplanes split off first
    for i in 0..nv {
        let mut e = vec![0; nv];
        e[i] = 1;
        pieces.push(Form::from_terms(nv, 1, &[(&e, crate::rational::Rational::one())]).unwrap());
    }
    loop {
        let mut changed = false;
        'outer: for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let g = form_gcd(&pieces[i], &pieces[j]);
                if g.degree() == 0 {
                    continue;
                }
                if g.degree() == pieces[i].degree() && g.degree() == pieces[j].degree() {
                    pieces.remove(j);
                    changed = true;
                    break 'outer;
                }
                let a = exact_quotient(&pieces[i], &g);
                let b = exact_quotient(&pieces[j], &g);
                pieces.remove(j);
                pieces.remove(i);
                for p in [g, a, b] {
                    if p.degree() > 0 {
                        pieces.push(p);
                    }
                }
                changed = true;
                break 'outer;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<Form> = pieces.iter().map(canonical).collect();
    out.sort();
    out.dedup();
    out
}

/// Portrait of the orbit radicals `R_0, ..., R_m`.
pub fn critical_portrait(f: &PolyMap, radicals: &[Form]) -> Result<Portrait> {
    let all = refine(radicals.to_vec());
    // keep only pieces that lie in the orbit support
    let mut keyed: Vec<_> = all
        .into_iter()
        .filter_map(|c| {
            let first = radicals.iter().position(|r| divides(&c, r))?;
            let lead = *c.poly().leading().expect("nonzero piece").0;
            Some(((first, c.degree(), Reverse(lead)), c))
        })
        .collect();
    keyed.sort();
    let components: Vec<Form> = keyed.into_iter().map(|(_, c)| c).collect();
    let mut edges = Vec::new();
    for c in &components {
        let d = normalize_divisor(c).map_err(|_| crate::error::Error::NotInDivStar)?;
        let img = squarefree_radical(pushforward(f, &d)?.form());
        let hits: Vec<usize> = (0..components.len()).filter(|&j| divides(&components[j], &img)).collect();
        let deg: u32 = hits.iter().map(|&j| components[j].degree()).sum();
        edges.push(if deg == img.degree() { Some(hits) } else { None });
    }
    Ok(Portrait { components, edges })
}

/// Portrait of `C_f` from its orbit radicals.
pub fn portrait_of(f: &PolyMap, radicals: &[Divisor]) -> Result<Portrait> {
    let forms: Vec<Form> = radicals.iter().map(|d| d.form().clone()).collect();
    critical_portrait(f, &forms)
}

impl Portrait {
    /// Chains `D_i -> D_j -> ...` following single-piece images, starting
    /// from pieces no other piece maps onto.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let n = self.components.len();
        let single = |i: usize| match &self.edges[i] {
            Some(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        };
        let has_preimage: Vec<bool> = (0..n).map(|j| (0..n).any(|i| i != j && single(i) == Some(j))).collect();
        let mut covered = vec![false; n];
        let mut out = Vec::new();
        let starts: Vec<usize> = (0..n).filter(|&i| !has_preimage[i]).chain(0..n).collect();
        for s in starts {
            if covered[s] {
                continue;
            }
            let mut chain = vec![s];
            covered[s] = true;
            let mut cur = s;
            while let Some(next) = single(cur) {
                chain.push(next);
                if covered[next] {
                    break;
                }
                covered[next] = true;
                cur = next;
            }
            out.push(chain);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self.components.iter().map(|c| json!(c.to_string())).collect();
        let edges: Vec<Value> = self.edges.iter().map(|e| json!(e)).collect();
        json!({"components": comps, "edges": edges, "chains": self.chains()})
    }
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "D_{}: {{{c} = 0}}", i + 1)?;
        }
        for chain in self.chains() {
            let s: Vec<String> = chain.iter().map(|i| format!("D_{}", i + 1)).collect();
            writeln!(f, "{}", s.join(" -> "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::{critical_divisor, orbit_certify};
    use crate::rational::Rational;

    fn form(terms: &[(&[u32], i64)], deg: u32) -> Form {
        Form::from_terms(3, deg, &terms.iter().map(|(m, c)| (*m, Rational::from_int(*c))).collect::<Vec<_>>()).unwrap()
    }

    fn portrait(t: [i64; 4]) -> Portrait {
        let f = PolyMap::quad(t);
        let rec = orbit_certify(&f, &critical_divisor(&f), 6).unwrap();
        let r: Vec<Form> = rec.steps.iter().map(|s| s.radical.clone()).collect();
        critical_portrait(&f, &r).unwrap()
    }

    #[test]
    fn skew_product_portrait() {
        // x -> x; y -> y^2 - xz -> y
        let p = portrait([0, 0, -1, 0]);
        let x = form(&[(&[1, 0, 0], 1)], 1);
        let y = form(&[(&[0, 1, 0], 1)], 1);
        let conic = form(&[(&[0, 2, 0], 1), (&[1, 0, 1], -1)], 2);
        assert_eq!(p.components, vec![x.clone(), y.clone(), conic.clone()]);
        let idx = |c: &Form| p.components.iter().position(|d| d == c).unwrap();
        assert_eq!(p.edges[idx(&x)], Some(vec![idx(&x)]));
        assert_eq!(p.edges[idx(&y)], Some(vec![idx(&conic)]));
        assert_eq!(p.edges[idx(&conic)], Some(vec![idx(&y)]));
    }

    #[test]
    fn chebyshev_lines() {
        let p = portrait([0, 0, 0, -2]);
        assert_eq!(p.components.len(), 4);
        assert!(p.components.iter().all(|c| c.degree() == 1));
        let chains = p.chains();
        let mut lens: Vec<usize> = chains.iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 4]);
    }
}
