//! Symbolic orbit finiteness for a divisor, tested on radicals.

use serde_json::{json, Value};

use crate::divisor::Divisor;
use crate::error::Result;
use crate::form::Form;
use crate::gcd::poly_divides;
use crate::poly::Poly;
use crate::polymap::PolyMap;
use crate::pushforward::RadicalOrbit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    pub n: usize,
    pub radical: Form,
    pub degree: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// `R_m` is supported inside `R_0 + ... + R_{m-1}`.
    PreperiodicProvenAt(usize),
    /// No containment among the computed iterates.
    Inconclusive(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub steps: Vec<OrbitStep>,
    pub status: OrbitStatus,
}

impl OrbitRecord {
    pub(crate) fn from_radicals(radicals: &[Divisor], status: OrbitStatus) -> OrbitRecord {
        let steps = radicals
            .iter()
            .enumerate()
            .map(|(n, r)| OrbitStep { n, radical: r.form().clone(), degree: r.degree() })
            .collect();
        OrbitRecord { steps, status }
    }

    pub fn to_json(&self) -> Value {
        let status = match self.status {
            OrbitStatus::PreperiodicProvenAt(m) => json!({"kind": "preperiodic", "m": m}),
            OrbitStatus::Inconclusive(s) => json!({"kind": "inconclusive", "max_steps": s}),
        };
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"n": s.n, "degree": s.degree, "radical": s.radical.to_json()}))
            .collect();
        json!({"status": status, "steps": steps})
    }
}

/// Whether the squarefree `r` has support inside the union of supports of
/// the squarefree `prev`. For squarefree `r` this is `r | prod prev`.
pub fn support_contained(r: &Divisor, prev: &[Divisor]) -> bool {
    let total: u32 = prev.iter().map(|p| p.degree()).sum();
    if r.degree() > total {
        return false;
    }
    let nv = r.nvars();
    let mut prod = Poly::one(nv);
    for p in prev {
        prod = &prod * p.form().poly();
    }
    poly_divides(r.form().poly(), &prod)
}

/// Radicals `R_0, ..., R_{max_steps}` of the orbit of `D`, stopping at the
/// first `m >= 1` with `R_m` inside `R_0 + ... + R_{m-1}`.
pub fn orbit_certify(f: &PolyMap, d: &Divisor, max_steps: usize) -> Result<OrbitRecord> {
    let mut orbit = RadicalOrbit::new(f, d)?;
    for m in 1..=max_steps {
        orbit.get(m)?;
        let (prev, last) = orbit.computed().split_at(m);
        if support_contained(&last[0], prev) {
            return Ok(OrbitRecord::from_radicals(orbit.computed(), OrbitStatus::PreperiodicProvenAt(m)));
        }
    }
    Ok(OrbitRecord::from_radicals(orbit.computed(), OrbitStatus::Inconclusive(max_steps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::normalize_divisor;
    use crate::pcf::critical_divisor;
    use crate::rational::Rational;

    fn form(terms: &[(&[u32], i64)], deg: u32) -> Form {
        Form::from_terms(3, deg, &terms.iter().map(|(m, c)| (*m, Rational::from_int(*c))).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn power_map_fixes_critical_locus() {
        let f = PolyMap::power_map(2, 2);
        let rec = orbit_certify(&f, &critical_divisor(&f), 4).unwrap();
        assert_eq!(rec.status, OrbitStatus::PreperiodicProvenAt(1));
        assert_eq!(rec.steps[0].radical, rec.steps[1].radical);
        assert_eq!(rec.steps[0].radical, form(&[(&[1, 1, 0], 1)], 2));
    }

    #[test]
    fn chebyshev_like_orbit() {
        let f = PolyMap::quad([0, 0, 0, -2]);
        let rec = orbit_certify(&f, &critical_divisor(&f), 6).unwrap();
        assert_eq!(rec.status, OrbitStatus::PreperiodicProvenAt(3));
        let x = form(&[(&[1, 0, 0], 1)], 1);
        let lines = [-1, 1, -3, -3].map(|k| x.mul(&form(&[(&[0, 1, 0], 1), (&[0, 0, 1], k)], 1)));
        let got: Vec<Form> = rec.steps.iter().map(|s| s.radical.clone()).collect();
        assert_eq!(got, lines.to_vec());
    }

    #[test]
    fn quartic_orbit() {
        let f = PolyMap::quad([0, -2, -2, 0]);
        let rec = orbit_certify(&f, &critical_divisor(&f), 4).unwrap();
        assert_eq!(rec.status, OrbitStatus::PreperiodicProvenAt(2));
        assert_eq!(rec.steps[0].radical, form(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)], 2));
        assert_eq!(rec.steps[1].degree, 4);
        assert_eq!(rec.steps[1].radical, rec.steps[2].radical);
    }

    #[test]
    fn escaping_orbit_is_inconclusive() {
        let f = PolyMap::quad([0, 0, 1, 0]);
        let rec = orbit_certify(&f, &critical_divisor(&f), 3).unwrap();
        assert_eq!(rec.status, OrbitStatus::Inconclusive(3));
        assert_eq!(rec.steps.len(), 4);
    }

    #[test]
    fn containment_needs_every_component() {
        let xy = normalize_divisor(&form(&[(&[1, 1, 0], 1)], 2)).unwrap();
        let x = normalize_divisor(&form(&[(&[1, 0, 0], 1)], 1)).unwrap();
        let y = normalize_divisor(&form(&[(&[0, 1, 0], 1)], 1)).unwrap();
        assert!(support_contained(&xy, &[x.clone(), y]));
        assert!(!support_contained(&xy, &[x.clone(), x]));
    }
}
