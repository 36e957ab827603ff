//! Local heights of divisors, coefficient heights, Green's functions and
//! global heights over the rationals.
//!
//! Non-archimedean values are exact rational multiples of `log p`.
//! Archimedean values are certified intervals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::interval::{ln_rational, Interval};
use crate::multi_index::ind_star_count;
use crate::pcf::critical_divisor;
use crate::polymap::PolyMap;
use crate::pushforward::RadicalOrbit;
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Place {
    NonArch(u64),
    Arch,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Arch => write!(f, "inf"),
            Place::NonArch(p) => write!(f, "{p}"),
        }
    }
}

/// A height value tagged by its place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogValue {
    /// `r * log p`.
    NonArch { p: u64, r: Rational },
    Arch(Interval),
}

impl LogValue {
    pub fn to_interval(&self, prec: u32) -> Interval {
        match self {
            LogValue::NonArch { p, r } => {
                if r.is_zero() {
                    Interval::zero(prec)
                } else {
                    ln_rational(&Rational::from_int(*p as i64), prec).scale(r)
                }
            }
            LogValue::Arch(i) => i.clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            LogValue::NonArch { r, .. } => r.signum() > 0,
            LogValue::Arch(i) => i.is_positive(),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{p} is not prime")))
    }
}

/// `log` of the largest `p`-adic absolute value among the coefficients.
pub fn gauss_norm(c: &Form, p: u64) -> Result<LogValue> {
    check_prime(p)?;
    let r = c
        .poly()
        .terms()
        .map(|(_, v)| -v.valuation(p).unwrap())
        .max()
        .ok_or(Error::ZeroForm)?;
    Ok(LogValue::NonArch { p, r: Rational::from_int(r) })
}

/// `lambda_p(D)` as a multiple of `log p`: the largest
/// `max(0, -v_p(b_I)) / I_N` over terms with `I_N >= 1`.
pub fn lambda_nonarch_value(d: &Divisor, p: u64) -> Rational {
    let mut best = Rational::zero();
    for (m, c) in d.form().poly().terms() {
        let k = m.last();
        if k == 0 {
            continue;
        }
        let v = c.valuation(p).unwrap();
        if v < 0 {
            let cand = Rational::frac(-v, k as i64);
            if cand > best {
                best = cand;
            }
        }
    }
    best
}

pub fn lambda_nonarch(d: &Divisor, p: u64) -> Result<LogValue> {
    check_prime(p)?;
    Ok(LogValue::NonArch { p, r: lambda_nonarch_value(d, p) })
}

/// `max(0, max ln|c| / k)` over `(c, k)` pairs, pruning hopeless terms by
/// bit length before computing certified logs.
fn log_plus_max_root<'a, I>(items: I, prec: u32) -> Interval
where
    I: IntoIterator<Item = (&'a Rational, u32)>,
{
    let items: Vec<(&Rational, u32)> = items.into_iter().filter(|(c, _)| !c.is_zero()).collect();
    // log2|c| lies in (e - 1, e + 1)
    let est = |c: &Rational, k: u32| -> (f64, f64) {
        let e = c.log2_estimate() as f64;
        ((e - 1.0) / k as f64, (e + 1.0) / k as f64)
    };
    let floor = items.iter().map(|(c, k)| est(c, *k).0).fold(0.0f64, f64::max);
    let mut out = Interval::zero(prec);
    for (c, k) in items {
        if est(c, k).1 < floor - 1e-9 {
            continue;
        }
        let l = ln_rational(&c.abs(), prec).scale(&Rational::frac(1, k as i64));
        out = out.max(&l);
    }
    out
}

/// Certified bounds on `lambda_inf(D)`:
/// `[L - log deg - 1, max(0, M) + log deg]` intersected with `[0, inf)`,
/// where `L = log+ max |b_I|^{1/I_N}` and
/// `M = max_k (1/k) log sum_{I_N = k} |b_I|`.
pub fn lambda_arch_bounds(d: &Divisor, prec: u32) -> Interval {
    let form = d.form();
    let terms: Vec<(&Rational, u32)> =
        form.poly().terms().filter(|(m, _)| m.last() >= 1).map(|(m, c)| (c, m.last())).collect();
    let l = log_plus_max_root(terms.iter().cloned(), prec);
    let deg = form.degree();
    let ln_deg = ln_rational(&Rational::from_int(deg as i64), prec);
    let mut sums: Vec<Rational> = vec![Rational::zero(); deg as usize + 1];
    for (c, k) in &terms {
        sums[*k as usize] += &c.abs();
    }
    let m = log_plus_max_root(sums.iter().enumerate().map(|(k, s)| (s, k as u32)), prec);
    let lo = l.lo() - ln_deg.hi() - Rational::one();
    let hi = m.hi() + ln_deg.hi();
    Interval::new(lo, hi, prec).clamp_nonneg()
}

/// `B_p(f)` as a multiple of `log p`.
pub fn coeff_height_nonarch_value(f: &PolyMap, p: u64) -> Rational {
    let mut best = Rational::zero();
    for (_, m, c) in f.coeffs() {
        let v = c.valuation(p).unwrap();
        if v < 0 {
            let cand = Rational::frac(-v, m.last() as i64);
            if cand > best {
                best = cand;
            }
        }
    }
    best
}

/// `B_v(f) = log+ max |a_{i,I}|_v^{1/I_N}`.
pub fn coeff_height(f: &PolyMap, v: Place, prec: u32) -> Result<LogValue> {
    match v {
        Place::NonArch(p) => {
            check_prime(p)?;
            Ok(LogValue::NonArch { p, r: coeff_height_nonarch_value(f, p) })
        }
        Place::Arch => Ok(LogValue::Arch(log_plus_max_root(f.coeffs().map(|(_, m, c)| (c, m.last())), prec))),
    }
}

pub fn good_reduction_at(f: &PolyMap, p: u64) -> bool {
    f.coeffs().all(|(_, _, c)| c.valuation(p).unwrap() >= 0)
}

/// Escape threshold `B_inf(f) + log(2 dim Pow(N, d) / N)`.
pub fn arch_threshold(f: &PolyMap, prec: u32) -> Interval {
    let b = log_plus_max_root(f.coeffs().map(|(_, m, c)| (c, m.last())), prec);
    let ratio = Rational::from_int(2 * ind_star_count(f.n(), f.d()) as i64);
    b.add(&ln_rational(&ratio, prec))
}

/// `K_d = (1/(d-1)) log(1 / (1 - 2^{-1/d}))`.
pub fn arch_error_constant(d: u32, prec: u32) -> Interval {
    let w = prec + 64;
    // t = 2^{1/d} lies in [r, r + 1] / 2^w
    let r = (BigInt::one() << (d * w + 1) as usize).nth_root(d);
    let scale = BigInt::one() << w as usize;
    let t_lo = Rational::new(r.clone(), scale.clone());
    let t_hi = Rational::new(r + 1u32, scale);
    let one = Rational::one();
    // 1/(1 - 1/t) = t/(t - 1) is decreasing in t
    let q_lo = &t_hi / &(&t_hi - &one);
    let q_hi = &t_lo / &(&t_lo - &one);
    Interval::new(q_lo, q_hi, prec).ln().scale(&Rational::frac(1, d as i64 - 1))
}

/// Outcome of a Green's function computation at one place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Green {
    /// Exact value; `step` is the escape iterate, `None` when a shortcut applied.
    Exact { value: LogValue, step: Option<usize> },
    /// Escaped at `step` with a strictly positive enclosure.
    ProvenPositive { value: Interval, step: usize },
    /// Escaped at `step` but the enclosure reaches zero.
    Bounded { value: Interval, step: usize },
    /// No escape within the budget; `envelope` encloses the true value.
    UnresolvedZeroCandidate { envelope: Interval, iterations: usize },
}

impl Green {
    pub fn enclosure(&self, prec: u32) -> Interval {
        match self {
            Green::Exact { value, .. } => value.to_interval(prec),
            Green::ProvenPositive { value, .. } | Green::Bounded { value, .. } => value.clone(),
            Green::UnresolvedZeroCandidate { envelope, .. } => envelope.clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Green::Exact { value, .. } => value.is_positive(),
            Green::ProvenPositive { .. } => true,
            _ => false,
        }
    }

    pub fn step(&self) -> Option<usize> {
        match self {
            Green::Exact { step, .. } => *step,
            Green::ProvenPositive { step, .. } | Green::Bounded { step, .. } => Some(*step),
            Green::UnresolvedZeroCandidate { .. } => None,
        }
    }
}

/// Incremental non-archimedean Green's function along a radical orbit.
#[derive(Clone, Debug)]
pub(crate) struct NonArchTracker {
    p: u64,
    d: u32,
    b: Rational,
}

impl NonArchTracker {
    pub(crate) fn new(f: &PolyMap, p: u64) -> NonArchTracker {
        NonArchTracker { p, d: f.d(), b: coeff_height_nonarch_value(f, p) }
    }

    /// `Some(result)` if `R_n` escapes: `lambda_p(R_n) > B_p(f)`.
    pub(crate) fn check(&self, r_n: &Divisor, n: usize) -> Option<Green> {
        let lam = lambda_nonarch_value(r_n, self.p);
        if lam > self.b {
            let value = &lam / &Rational::from_int(BigInt::from(self.d).pow(n as u32));
            return Some(Green::Exact { value: LogValue::NonArch { p: self.p, r: value }, step: Some(n) });
        }
        None
    }

    /// Widening for an unresolved place after `iterations` steps:
    /// `[0, d^{-iterations} d B_p]`.
    pub(crate) fn unresolved(&self, iterations: usize, prec: u32) -> Green {
        let r = &(&self.b * &Rational::from_int(self.d as i64)) / &Rational::from_int(BigInt::from(self.d).pow(iterations as u32));
        let hi = LogValue::NonArch { p: self.p, r }.to_interval(prec);
        Green::UnresolvedZeroCandidate { envelope: Interval::new(Rational::zero(), hi.hi().clone(), prec), iterations }
    }
}

/// Green's function `G_{f,p}(D)`.
pub fn green_nonarch(f: &PolyMap, d: &Divisor, p: u64, max_iter: usize) -> Result<Green> {
    check_prime(p)?;
    let is_critical = critical_divisor(f).form() == d.form();
    if is_critical && good_reduction_at(f, p) && p > f.d() as u64 {
        return Ok(Green::Exact { value: LogValue::NonArch { p, r: Rational::zero() }, step: None });
    }
    let mut orbit = RadicalOrbit::new(f, d)?;
    let t = NonArchTracker::new(f, p);
    for n in 0..=max_iter {
        if let Some(g) = t.check(orbit.get(n)?, n) {
            return Ok(g);
        }
    }
    Ok(t.unresolved(max_iter, crate::interval::DEFAULT_PRECISION))
}

/// Incremental archimedean Green's function along a radical orbit. Keeps
/// the intersection of every enclosure seen so far, so extra iterations
/// never widen the answer.
#[derive(Clone, Debug)]
pub(crate) struct ArchTracker {
    d: u32,
    prec: u32,
    threshold: Interval,
    k: Interval,
    envelope: Option<Interval>,
}

impl ArchTracker {
    pub(crate) fn new(f: &PolyMap, prec: u32) -> ArchTracker {
        ArchTracker { d: f.d(), prec, threshold: arch_threshold(f, prec), k: arch_error_constant(f.d(), prec), envelope: None }
    }

    fn narrow(&mut self, i: Interval) -> Interval {
        let next = match &self.envelope {
            None => i,
            // both enclose the true value; disjointness would be a defect
            Some(e) => e.intersect(&i).unwrap_or(i),
        };
        self.envelope = Some(next.clone());
        next
    }

    pub(crate) fn check(&mut self, r_n: &Divisor, n: usize) -> Option<Green> {
        let lam = lambda_arch_bounds(r_n, self.prec);
        let scale = Rational::new(BigInt::one(), BigInt::from(self.d).pow(n as u32));
        if lam.lo() > self.threshold.hi() {
            let raw = Interval::new(lam.lo() - self.k.hi(), lam.hi() + self.k.hi(), self.prec).scale(&scale);
            let value = self.narrow(raw.clamp_nonneg());
            return Some(if value.is_positive() {
                Green::ProvenPositive { value, step: n }
            } else {
                Green::Bounded { value, step: n }
            });
        }
        // not escaped: 0 <= G <= d^{-n} (max(hi_n, T) + K)
        let top = lam.hi().clone().max(self.threshold.hi().clone()) + self.k.hi().clone();
        self.narrow(Interval::new(Rational::zero(), &top * &scale, self.prec));
        None
    }

    pub(crate) fn unresolved(&self, iterations: usize) -> Green {
        Green::UnresolvedZeroCandidate {
            envelope: self.envelope.clone().unwrap_or_else(|| Interval::zero(self.prec)),
            iterations,
        }
    }
}

/// Green's function `G_{f,inf}(D)` bounds.
pub fn green_arch_bounds(f: &PolyMap, d: &Divisor, max_iter: usize, prec: u32) -> Result<Green> {
    let mut orbit = RadicalOrbit::new(f, d)?;
    let mut t = ArchTracker::new(f, prec);
    for n in 0..=max_iter {
        if let Some(g) = t.check(orbit.get(n)?, n) {
            return Ok(g);
        }
    }
    Ok(t.unresolved(max_iter))
}

/// Primes dividing `n`, by trial division with a primality check on the
/// cofactor.
fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while p < 1 << 20 && n > BigInt::one() {
        if (&n % p).is_zero() {
            out.push(p);
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match n.to_u64() {
            Some(m) if is_prime(m) => out.push(m),
            _ => return Err(Error::InvalidInput("denominator has a large composite cofactor".into())),
        }
    }
    Ok(out)
}

/// Places that can contribute: infinity, primes `p <= d`, and primes in a
/// coefficient denominator. Sorted, non-archimedean first.
pub fn relevant_places(f: &PolyMap) -> Result<Vec<Place>> {
    let mut primes: Vec<u64> = (2..=f.d() as u64).filter(|&p| is_prime(p)).collect();
    for (_, _, c) in f.coeffs() {
        primes.extend(prime_factors(c.denom())?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::NonArch).collect();
    out.push(Place::Arch);
    Ok(out)
}

/// `h_Weil(f) = sum_v B_v(f)`.
pub fn weil_height(f: &PolyMap, prec: u32) -> Result<Interval> {
    let mut total = Interval::zero(prec);
    for v in relevant_places(f)? {
        total = total.add(&coeff_height(f, v, prec)?.to_interval(prec));
    }
    Ok(total)
}

/// Green's function results for `D` at every relevant place, computed along
/// one shared radical orbit.
pub fn green_all_places(f: &PolyMap, d: &Divisor, max_iter: usize, prec: u32) -> Result<Vec<(Place, Green)>> {
    let is_critical = critical_divisor(f).form() == d.form();
    let mut orbit = RadicalOrbit::new(f, d)?;
    let mut out = Vec::new();
    for v in relevant_places(f)? {
        let g = match v {
            Place::NonArch(p) => {
                if is_critical && good_reduction_at(f, p) && p > f.d() as u64 {
                    Green::Exact { value: LogValue::NonArch { p, r: Rational::zero() }, step: None }
                } else {
                    let t = NonArchTracker::new(f, p);
                    let mut res = None;
                    for n in 0..=max_iter {
                        if let Some(g) = t.check(orbit.get(n)?, n) {
                            res = Some(g);
                            break;
                        }
                    }
                    res.unwrap_or_else(|| t.unresolved(max_iter, prec))
                }
            }
            Place::Arch => {
                let mut t = ArchTracker::new(f, prec);
                let mut res = None;
                for n in 0..=max_iter {
                    if let Some(g) = t.check(orbit.get(n)?, n) {
                        res = Some(g);
                        break;
                    }
                }
                res.unwrap_or_else(|| t.unresolved(max_iter))
            }
        };
        out.push((v, g));
    }
    Ok(out)
}

/// Enclosure of `h_f(D) = sum_v G_{f,v}(D)`.
pub fn canonical_height_interval(f: &PolyMap, d: &Divisor, max_iter: usize, prec: u32) -> Result<Interval> {
    let mut total = Interval::zero(prec);
    for (_, g) in green_all_places(f, d, max_iter, prec)? {
        total = total.add(&g.enclosure(prec));
    }
    Ok(total)
}

/// Enclosure of `h_crit(f) = h_f(C_f)`.
pub fn crit_height_interval(f: &PolyMap, max_iter: usize, prec: u32) -> Result<Interval> {
    canonical_height_interval(f, &critical_divisor(f), max_iter, prec)
}

fn interval_json(i: &Interval) -> Value {
    let (lo, hi) = i.to_decimal();
    json!({"lo": lo, "hi": hi, "precision_bits": i.precision()})
}

fn green_json(g: &Green) -> Value {
    match g {
        Green::Exact { value: LogValue::NonArch { r, .. }, step } => {
            json!({"kind": "exact", "log_multiple": r.to_string(), "step": step})
        }
        Green::Exact { value: LogValue::Arch(i), step } => {
            json!({"kind": "interval", "value": interval_json(i), "step": step, "positive": i.is_positive()})
        }
        Green::ProvenPositive { value, step } | Green::Bounded { value, step } => {
            json!({"kind": "interval", "value": interval_json(value), "step": step, "positive": value.is_positive()})
        }
        Green::UnresolvedZeroCandidate { envelope, iterations } => {
            json!({"kind": "unresolved", "envelope": interval_json(envelope), "iterations": iterations})
        }
    }
}

/// Per-place height report for `f` with totals.
pub fn height_report(f: &PolyMap, max_iter: usize, prec: u32) -> Result<Value> {
    let greens = green_all_places(f, &critical_divisor(f), max_iter, prec)?;
    let mut places = Vec::new();
    let mut crit = Interval::zero(prec);
    let mut weil = Interval::zero(prec);
    for (v, g) in &greens {
        let b = coeff_height(f, *v, prec)?;
        weil = weil.add(&b.to_interval(prec));
        crit = crit.add(&g.enclosure(prec));
        let b_json = match &b {
            LogValue::NonArch { r, .. } => json!({"log_multiple": r.to_string()}),
            LogValue::Arch(i) => interval_json(i),
        };
        places.push(json!({"place": v.to_string(), "B": b_json, "lambda_crit": green_json(g)}));
    }
    Ok(json!({
        "places": places,
        "weil_height": interval_json(&weil),
        "crit_height": interval_json(&crit),
        "max_iter": max_iter,
    }))
}
