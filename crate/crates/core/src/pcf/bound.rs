//! The coefficient bound for PCF maps in the quadratic family.

use crate::error::{Error, Result};
use crate::interval::{ln_rational, sqrt_rational, Interval};
use crate::rational::Rational;

const PREC: u32 = 128;

/// Enclosure of `max(M_1, M_2)` where
/// `M_1 = 4 log 2 + 2 log(1 + sqrt 3)` and
/// `M_2 = (3/2) log 2 + log(1 + sqrt 3) - (1/2) log(2 - sqrt 2)`.
pub fn coefficient_log_bound() -> Interval {
    let q = Rational::from_int;
    let ln2 = ln_rational(&q(2), PREC);
    let l13 = sqrt_rational(&q(3), PREC).add_rational(&q(1)).ln();
    let m1 = ln2.scale(&q(4)).add(&l13.scale(&q(2)));
    let two_minus_sqrt2 = sqrt_rational(&q(2), PREC).neg().add_rational(&q(2));
    let m2 = ln2.scale(&Rational::frac(3, 2)).add(&l13).sub(&two_minus_sqrt2.ln().scale(&Rational::frac(1, 2)));
    m1.max(&m2)
}

/// `floor(exp(M))` for the bound `M` above, certified by checking
/// `log n <= M` and `log(n + 1) > M` on the enclosures.
pub fn derive_search_bound(n: usize, d: u32) -> Result<u64> {
    if (n, d) != (2, 2) {
        return Err(Error::UnsupportedFamily(n, d));
    }
    let m = coefficient_log_bound();
    let guess = m.to_f64_mid().exp().floor() as u64;
    for cand in guess.saturating_sub(2)..=guess + 2 {
        let lo = ln_rational(&Rational::from_int(cand), PREC);
        let hi = ln_rational(&Rational::from_int(cand + 1), PREC);
        if lo.hi() <= m.lo() && hi.lo() > m.hi() {
            return Ok(cand);
        }
    }
    Err(Error::InvalidInput("bound enclosure too wide to certify".into()))
}

/// Tuples with every entry in `[-bound, bound]` and `a`, `d` even.
pub fn tuple_count(bound: u64) -> u128 {
    let even = (bound / 2 * 2 + 1) as u128;
    let all = (2 * bound + 1) as u128;
    even * even * all * all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bound() {
        assert_eq!(derive_search_bound(2, 2).unwrap(), 119);
        assert_eq!(tuple_count(119), 808_890_481);
        assert!(matches!(derive_search_bound(2, 3), Err(Error::UnsupportedFamily(2, 3))));
    }

    #[test]
    fn small_counts() {
        // a, d in {-2, 0, 2}; b, c in -2..=2
        assert_eq!(tuple_count(2), 225);
        assert_eq!(tuple_count(0), 1);
        assert_eq!(tuple_count(10), 11 * 11 * 21 * 21);
        let m = coefficient_log_bound().to_f64_mid();
        let m1 = 4.0 * 2f64.ln() + 2.0 * (1.0 + 3f64.sqrt()).ln();
        assert!((m - m1).abs() < 1e-12);
    }
}
