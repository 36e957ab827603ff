//! PCF certification for monic maps: orbit finiteness of the critical
//! divisor, escape witnesses, conjugacy classes of the quadratic family and
//! the box search.

use crate::divisor::{normalize_divisor, Divisor};
use crate::polymap::PolyMap;

/// `C_f`, the normalized divisor of the Jacobian form.
pub fn critical_divisor(f: &PolyMap) -> Divisor {
    // J_f restricts to d^N prod x_i^{d-1} on H
    normalize_divisor(&f.jacobian_form()).expect("critical divisor lies in Div*")
}

pub mod certify;
pub mod orbit;

pub use certify::{classify, nonpcf_certify, Budgets, Certificate, Verdict};
pub use orbit::{orbit_certify, support_contained, OrbitRecord, OrbitStatus, OrbitStep};
pub mod conjugacy;
pub mod portrait;

pub use conjugacy::{conjugacy_dedupe, ConjugacyClass, Quad};
pub use portrait::{critical_portrait, Portrait};
pub mod bound;
pub mod search;

pub use bound::{derive_search_bound, tuple_count};
pub use search::{search_box, SearchConfig, SearchReport, Survivor};
