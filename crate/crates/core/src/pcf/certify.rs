//! Certificates: PCF by orbit containment, non-PCF by a positive local
//! Green's function of the critical divisor.

use std::fmt;

use serde_json::{json, Value};

use crate::error::Result;
use crate::heights::{good_reduction_at, relevant_places, ArchTracker, Green, LogValue, NonArchTracker, Place};
use crate::interval::DEFAULT_PRECISION;
use crate::pcf::critical_divisor;
use crate::pcf::orbit::{support_contained, OrbitRecord, OrbitStatus};
use crate::polymap::PolyMap;
use crate::pushforward::RadicalOrbit;

/// Work limits for one map. `max_steps` is the number of orbit radicals
/// `R_0, ..., R_{max_steps - 1}` examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub max_steps: usize,
    pub precision: u32,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets { max_steps: 8, precision: DEFAULT_PRECISION }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    PcfProven { m: usize },
    NotPcfProven { place: Place, step: usize, witness: LogValue },
    Unknown { steps: usize },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::PcfProven { .. } => "PCF_PROVEN",
            Verdict::NotPcfProven { .. } => "NOT_PCF_PROVEN",
            Verdict::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn is_pcf(&self) -> bool {
        matches!(self, Verdict::PcfProven { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    /// `(place, step)` of the deciding computation, when there is one.
    pub fn witness_fields(&self) -> (String, String) {
        match self {
            Verdict::PcfProven { m } => (String::new(), m.to_string()),
            Verdict::NotPcfProven { place, step, .. } => (place.to_string(), step.to_string()),
            Verdict::Unknown { .. } => (String::new(), String::new()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::PcfProven { m } => json!({"verdict": self.label(), "m": m}),
            Verdict::NotPcfProven { place, step, witness } => {
                let w = match witness {
                    LogValue::NonArch { r, .. } => json!({"log_multiple": r.to_string()}),
                    LogValue::Arch(i) => {
                        let (lo, hi) = i.to_decimal();
                        json!({"lo": lo, "hi": hi, "precision_bits": i.precision()})
                    }
                };
                json!({"verdict": self.label(), "place": place.to_string(), "step": step, "witness": w})
            }
            Verdict::Unknown { steps } => json!({"verdict": self.label(), "steps": steps}),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PcfProven { m } => write!(f, "PCF_PROVEN (orbit depth {m})"),
            Verdict::NotPcfProven { place, step, witness } => {
                let w = match witness {
                    LogValue::NonArch { p, r } => format!("{r} log {p}"),
                    LogValue::Arch(i) => i.to_string(),
                };
                write!(f, "NOT_PCF_PROVEN (place {place}, step {step}, G >= {w})")
            }
            Verdict::Unknown { steps } => write!(f, "UNKNOWN ({steps} steps)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub orbit: OrbitRecord,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let mut v = self.verdict.to_json();
        v["orbit"] = self.orbit.to_json();
        v
    }
}

/// Places whose Green's function of `C_f` can be positive; good places with
/// `p > d` contribute zero.
fn escape_places(f: &PolyMap) -> Result<Vec<Place>> {
    Ok(relevant_places(f)?
        .into_iter()
        .filter(|v| match v {
            Place::NonArch(p) => !(good_reduction_at(f, *p) && *p > f.d() as u64),
            Place::Arch => true,
        })
        .collect())
}

enum Tracker {
    NonArch(u64, NonArchTracker),
    Arch(ArchTracker),
}

fn run(f: &PolyMap, b: Budgets, escape: bool, orbit_test: bool) -> Result<Certificate> {
    let mut orbit = RadicalOrbit::new(f, &critical_divisor(f))?;
    let mut trackers: Vec<Tracker> = if escape {
        escape_places(f)?
            .into_iter()
            .map(|v| match v {
                Place::NonArch(p) => Tracker::NonArch(p, NonArchTracker::new(f, p)),
                Place::Arch => Tracker::Arch(ArchTracker::new(f, b.precision)),
            })
            .collect()
    } else {
        Vec::new()
    };
    let finish = |orbit: &RadicalOrbit, verdict: Verdict, status: OrbitStatus| Certificate {
        verdict,
        orbit: OrbitRecord::from_radicals(orbit.computed(), status),
    };
    for n in 0..b.max_steps {
        let r = orbit.get(n)?.clone();
        for t in trackers.iter_mut() {
            let witness = match t {
                Tracker::NonArch(p, t) => match t.check(&r, n) {
                    Some(Green::Exact { value, .. }) => Some((Place::NonArch(*p), value)),
                    _ => None,
                },
                Tracker::Arch(t) => match t.check(&r, n) {
                    Some(Green::ProvenPositive { value, .. }) => Some((Place::Arch, LogValue::Arch(value))),
                    _ => None,
                },
            };
            if let Some((place, witness)) = witness {
                let v = Verdict::NotPcfProven { place, step: n, witness };
                return Ok(finish(&orbit, v, OrbitStatus::Inconclusive(n)));
            }
        }
        if orbit_test && n >= 1 && support_contained(&r, &orbit.computed()[..n]) {
            return Ok(finish(&orbit, Verdict::PcfProven { m: n }, OrbitStatus::PreperiodicProvenAt(n)));
        }
    }
    let steps = b.max_steps;
    Ok(finish(&orbit, Verdict::Unknown { steps }, OrbitStatus::Inconclusive(steps.saturating_sub(1))))
}

/// Look for a place where `G_{f,v}(C_f) > 0`.
pub fn nonpcf_certify(f: &PolyMap, b: Budgets) -> Result<Certificate> {
    run(f, b, true, false)
}

/// Interleave escape checks and the orbit containment test along one shared
/// radical orbit. At each step the non-archimedean places are checked
/// first, then the archimedean place, then containment.
pub fn classify(f: &PolyMap, b: Budgets) -> Result<Certificate> {
    run(f, b, true, true)
}
