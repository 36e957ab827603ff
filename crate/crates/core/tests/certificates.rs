use pcf_core::heights::{green_all_places, Green, LogValue};
use pcf_core::pcf::{
    classify, critical_divisor, nonpcf_certify, orbit_certify, support_contained, Budgets, OrbitStatus, Verdict,
};
use pcf_core::pushforward::RadicalOrbit;
use pcf_core::PolyMap;

const SIX: [[i64; 4]; 6] = [[0, 0, 0, 0], [0, 0, 0, -2], [-2, 0, 0, -2], [0, 0, -1, 0], [0, 0, -2, 0], [0, -2, -2, 0]];

#[test]
fn containment_persists_after_certificate() {
    for t in SIX {
        let f = PolyMap::quad(t);
        let Verdict::PcfProven { m } = classify(&f, Budgets::default()).unwrap().verdict else {
            panic!("{t:?} is PCF");
        };
        let mut orbit = RadicalOrbit::new(&f, &critical_divisor(&f)).unwrap();
        orbit.get(m + 5).unwrap();
        let radicals = orbit.computed();
        for k in m..=m + 5 {
            assert!(support_contained(&radicals[k], &radicals[..m]), "{t:?}: R_{k} escapes");
        }
    }
}

#[test]
fn verdicts_never_conflict_on_box_two() {
    let b = Budgets { max_steps: 10, precision: 128 };
    for a in [-2i64, 0, 2] {
        for bb in -2..=2 {
            for c in -2..=2 {
                for d in [-2i64, 0, 2] {
                    let t = [a, bb, c, d];
                    let f = PolyMap::quad(t);
                    match classify(&f, Budgets::default()).unwrap().verdict {
                        Verdict::PcfProven { .. } => {
                            let v = nonpcf_certify(&f, b).unwrap().verdict;
                            assert!(v.is_unknown(), "{t:?}: {v}");
                        }
                        Verdict::NotPcfProven { .. } => {
                            let r = orbit_certify(&f, &critical_divisor(&f), 3).unwrap();
                            assert!(!matches!(r.status, OrbitStatus::PreperiodicProvenAt(_)), "{t:?}");
                        }
                        Verdict::Unknown { .. } => panic!("{t:?} left unknown"),
                    }
                }
            }
        }
    }
}

#[test]
fn pcf_maps_have_vanishing_green_functions() {
    for t in SIX {
        let f = PolyMap::quad(t);
        for (v, g) in green_all_places(&f, &critical_divisor(&f), 6, 128).unwrap() {
            let ok = match &g {
                Green::UnresolvedZeroCandidate { .. } => true,
                Green::Exact { value: LogValue::NonArch { r, .. }, .. } => r.is_zero(),
                _ => false,
            };
            assert!(ok, "{t:?} at {v}: {g:?}");
        }
    }
}
