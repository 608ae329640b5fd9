//! Orbit classification, rational preimages and periodic points, and the
//! census of rational preperiodic points.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_integer::Integer as _;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{rational_roots, IntPoly, Integer};
use crate::dynamics::{DynSystem, ProjPoint};
use crate::heights::{naive_height, HeightContext};
use crate::interpolation::Orbit;

/// Default iteration cap for [`classify_orbit`].
pub const DEFAULT_ITERATION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreperiodicError {
    #[error("orbit neither repeated nor escaped within {0} iterations")]
    IterationCapExceeded(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitStatus {
    Wandering,
    Preperiodic,
}

/// Verdict on the forward orbit of a point. For preperiodic points `tail_m`
/// and `period_n` are the minimal `(m, n)` with `f^(m+n)(P) = f^m(P)`; for
/// wandering points both are 0 and the last witness exceeds the certified
/// height bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClassification {
    pub status: OrbitStatus,
    pub tail_m: usize,
    pub period_n: usize,
    pub witness: Vec<ProjPoint>,
}

impl OrbitClassification {
    pub fn is_preperiodic(&self) -> bool {
        self.status == OrbitStatus::Preperiodic
    }

    /// The cycle reached by the orbit (empty when wandering).
    pub fn cycle(&self) -> &[ProjPoint] {
        if self.is_preperiodic() {
            &self.witness[self.tail_m..self.tail_m + self.period_n]
        } else {
            &[]
        }
    }
}

/// Classifies the orbit of `p` with a freshly built height context.
pub fn classify_orbit(f: &DynSystem, p: &ProjPoint) -> Result<OrbitClassification, PreperiodicError> {
    classify_orbit_with(&HeightContext::new(f), p, DEFAULT_ITERATION_CAP)
}

/// Iterates until a repeat (preperiodic) or until the height passes
/// `C / (d - 1) + ln 2`, beyond which the canonical height is positive.
pub fn classify_orbit_with(
    ctx: &HeightContext,
    p: &ProjPoint,
    cap: usize,
) -> Result<OrbitClassification, PreperiodicError> {
    let threshold = ctx.wandering_threshold();
    let f = ctx.map();
    let mut index: HashMap<ProjPoint, usize> = HashMap::new();
    let mut witness = Vec::new();
    let mut current = p.clone();
    for k in 0..=cap {
        if let Some(&i) = index.get(&current) {
            return Ok(OrbitClassification {
                status: OrbitStatus::Preperiodic,
                tail_m: i,
                period_n: k - i,
                witness,
            });
        }
        if naive_height(&current) > threshold {
            witness.push(current);
            return Ok(OrbitClassification {
                status: OrbitStatus::Wandering,
                tail_m: 0,
                period_n: 0,
                witness,
            });
        }
        index.insert(current.clone(), k);
        witness.push(current.clone());
        current = f.evaluate(&current);
    }
    Err(PreperiodicError::IterationCapExceeded(cap))
}

/// A point set with a flag telling whether root finding was exhaustive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub points: BTreeSet<ProjPoint>,
    pub complete: bool,
}

/// All rational `P` with `f(P) = q`.
pub fn rational_preimages(f: &DynSystem, q: &ProjPoint) -> PointSet {
    let poly = preimage_polynomial(f, q);
    let mut points = BTreeSet::new();
    let roots = rational_roots(&poly).expect("b F0 - a F1 is nonzero for a morphism");
    points.extend(roots.roots.iter().map(ProjPoint::from_rational));
    let inf = ProjPoint::infinity();
    if &f.evaluate(&inf) == q {
        points.insert(inf);
    }
    PointSet {
        points,
        complete: roots.complete,
    }
}

/// Rational periodic points with their minimal periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoints {
    pub points: BTreeMap<ProjPoint, usize>,
    pub complete: bool,
    /// Largest `n` actually searched (limited by the degree cap).
    pub searched_up_to: usize,
}

/// Rational points of period dividing `n` for `n = 1..=n_max` with
/// `d^n <= degree_cap`, each verified by iteration.
pub fn rational_periodic_points(f: &DynSystem, n_max: usize, degree_cap: usize) -> PeriodicPoints {
    let d = f.degree();
    let mut points = BTreeMap::new();
    let mut complete = true;
    let mut searched_up_to = 0;
    let mut deg = 1usize;
    for n in 1..=n_max {
        deg = deg.saturating_mul(d);
        if deg > degree_cap {
            complete = false;
            break;
        }
        searched_up_to = n;
        let (g0, g1) = f.iterate_forms(n as u32);
        let phi = g0.sub(&g1.shift(1));
        let mut candidates: Vec<ProjPoint> = Vec::new();
        if !phi.is_zero() {
            let roots = rational_roots(&phi).expect("nonzero");
            complete &= roots.complete;
            candidates.extend(roots.roots.iter().map(ProjPoint::from_rational));
        }
        candidates.push(ProjPoint::infinity());
        for p in candidates {
            if points.contains_key(&p) {
                continue;
            }
            if let Some(period) = minimal_period(f, &p, n) {
                points.insert(p, period);
            }
        }
    }
    PeriodicPoints {
        points,
        complete,
        searched_up_to,
    }
}

// Smallest k <= n with f^k(p) = p, if any.
fn minimal_period(f: &DynSystem, p: &ProjPoint, n: usize) -> Option<usize> {
    let mut q = p.clone();
    for k in 1..=n {
        q = f.evaluate(&q);
        if &q == p {
            return Some(k);
        }
    }
    None
}

/// Search limits for [`preperiodic_census`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    /// Periods searched through dynatomic-style polynomials.
    pub n_max: usize,
    /// Largest iterate degree `d^n` allowed in that search.
    pub degree_cap: usize,
    /// Every point of height at most `ln h_scan` is classified directly.
    pub h_scan: u64,
    /// Stop the preimage closure beyond this many points.
    pub size_cap: usize,
    /// Whether infinity counts toward `count`.
    pub include_infinity: bool,
}

impl Default for CensusParams {
    fn default() -> Self {
        CensusParams {
            n_max: 2,
            degree_cap: 4096,
            h_scan: 100,
            size_cap: 10_000,
            include_infinity: true,
        }
    }
}

/// Rational preperiodic points found, closed under `f` and under rational
/// preimages. `complete` is false when a root search or a size cap was
/// exhausted; the count is then a lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub count: usize,
    pub points: Vec<ProjPoint>,
    pub edges: Vec<(ProjPoint, ProjPoint)>,
    pub complete: bool,
    pub flags: Vec<String>,
}

pub fn preperiodic_census(f: &DynSystem, params: &CensusParams) -> CensusResult {
    preperiodic_census_with(&HeightContext::new(f), params)
}

pub fn preperiodic_census_with(ctx: &HeightContext, params: &CensusParams) -> CensusResult {
    let f = ctx.map();
    let mut flags = Vec::new();
    let mut seeds: BTreeSet<ProjPoint> = BTreeSet::new();

    let periodic = rational_periodic_points(f, params.n_max, params.degree_cap);
    if !periodic.complete {
        flags.push("periodic_search_incomplete".to_string());
    }
    seeds.extend(periodic.points.into_keys());

    match classify_orbit_with(ctx, &ProjPoint::from_int(0), DEFAULT_ITERATION_CAP) {
        Ok(c) if c.is_preperiodic() => seeds.extend(c.cycle().iter().cloned()),
        Ok(_) => {}
        Err(_) => flags.push("classification_cap".to_string()),
    }

    let threshold = ctx.wandering_threshold();
    let mut scan = Scan::new(f, threshold);
    for p in scan_points(params.h_scan, threshold) {
        match scan.classify(&p) {
            Some(found) => seeds.extend(found),
            None => flags.push("classification_cap".to_string()),
        }
    }

    // Preimage closure.
    let mut points = seeds.clone();
    let mut queue: VecDeque<ProjPoint> = seeds.into_iter().collect();
    let mut capped = false;
    while let Some(q) = queue.pop_front() {
        let pre = rational_preimages(f, &q);
        if !pre.complete {
            flags.push(format!("preimages_incomplete:{q}"));
        }
        for p in pre.points {
            if points.len() >= params.size_cap {
                capped = true;
                break;
            }
            if points.insert(p.clone()) {
                queue.push_back(p);
            }
        }
        if capped {
            flags.push("size_cap".to_string());
            break;
        }
    }

    let points: Vec<ProjPoint> = points.into_iter().collect();
    let edges = points.iter().map(|p| (p.clone(), f.evaluate(p))).collect();
    let count = points
        .iter()
        .filter(|p| params.include_infinity || !p.is_infinity())
        .count();
    flags.sort();
    flags.dedup();
    CensusResult {
        count,
        points,
        edges,
        complete: flags.is_empty(),
        flags,
    }
}

// Classifies the many small scan points, whose orbits overlap heavily:
// statuses are memoized and evaluated in i128 when nothing overflows.
struct Scan<'a> {
    f: &'a DynSystem,
    threshold: f64,
    small: Option<(Vec<i128>, Vec<i128>)>,
    known_small: HashMap<(i128, i128), bool>,
    known: HashMap<ProjPoint, bool>,
}

impl<'a> Scan<'a> {
    fn new(f: &'a DynSystem, threshold: f64) -> Self {
        let narrow =
            |p: &IntPoly| -> Option<Vec<i128>> { (0..=f.degree()).map(|i| i128::try_from(&p.coeff(i)).ok()).collect() };
        let small = narrow(&f.numerator()).zip(narrow(&f.denominator()));
        Scan {
            f,
            threshold,
            small,
            known_small: HashMap::new(),
            known: HashMap::new(),
        }
    }

    /// The preperiodic points met along the orbit of `p` (empty when it
    /// wanders); `None` when the iteration cap is hit.
    fn classify(&mut self, p: &ProjPoint) -> Option<Vec<ProjPoint>> {
        if let Some(found) = self.classify_small(p) {
            return Some(found);
        }
        self.classify_big(p)
    }

    fn classify_small(&mut self, p: &ProjPoint) -> Option<Vec<ProjPoint>> {
        let (f0, f1) = self.small.as_ref()?;
        let mut current = (i128::try_from(p.x()).ok()?, i128::try_from(p.y()).ok()?);
        let mut path: Vec<(i128, i128)> = Vec::new();
        let mut on_path = HashSet::new();
        let preperiodic = loop {
            if let Some(&s) = self.known_small.get(&current) {
                break s;
            }
            // Paths are usually a few points long; hash only long ones.
            let seen = if path.len() <= 32 {
                path.contains(&current)
            } else {
                if on_path.is_empty() {
                    on_path.extend(path.iter().copied());
                }
                on_path.contains(&current)
            };
            if seen {
                break true;
            }
            let m = current.0.unsigned_abs().max(current.1.unsigned_abs());
            if m > 1 && (m as f64).ln() > self.threshold {
                break false;
            }
            if path.len() > DEFAULT_ITERATION_CAP {
                return None;
            }
            if !on_path.is_empty() {
                on_path.insert(current);
            }
            let next = small_evaluate(f0, f1, current)?;
            path.push(std::mem::replace(&mut current, next));
        };
        let mut found = Vec::new();
        for q in path {
            if preperiodic {
                found.push(ProjPoint::normalized(q.0.into(), q.1.into()));
            }
            self.known_small.insert(q, preperiodic);
        }
        Some(found)
    }

    fn classify_big(&mut self, p: &ProjPoint) -> Option<Vec<ProjPoint>> {
        let mut path: Vec<ProjPoint> = Vec::new();
        let mut on_path: HashMap<ProjPoint, ()> = HashMap::new();
        let mut current = p.clone();
        let preperiodic = loop {
            if let Some(&s) = self.known.get(&current) {
                break s;
            }
            if on_path.contains_key(&current) {
                break true;
            }
            if naive_height(&current) > self.threshold {
                break false;
            }
            if path.len() > DEFAULT_ITERATION_CAP {
                return None;
            }
            on_path.insert(current.clone(), ());
            let next = self.f.evaluate(&current);
            path.push(std::mem::replace(&mut current, next));
        };
        let mut found = Vec::new();
        for q in path {
            if preperiodic {
                found.push(q.clone());
            }
            self.known.insert(q, preperiodic);
        }
        Some(found)
    }
}

// Horner evaluation of a binary form; None on overflow.
fn small_form(c: &[i128], x: i128, y: i128) -> Option<i128> {
    let d = c.len() - 1;
    let mut acc = c[d];
    let mut ypow = 1i128;
    for i in (0..d).rev() {
        ypow = ypow.checked_mul(y)?;
        acc = acc.checked_mul(x)?.checked_add(c[i].checked_mul(ypow)?)?;
    }
    Some(acc)
}

fn small_evaluate(f0: &[i128], f1: &[i128], (x, y): (i128, i128)) -> Option<(i128, i128)> {
    let (a, b) = (small_form(f0, x, y)?, small_form(f1, x, y)?);
    if b == 0 {
        return Some((1, 0));
    }
    let mut g = a.gcd(&b);
    if b < 0 {
        g = -g;
    }
    Some((a / g, b / g))
}

// Points (a : b) with max(|a|, |b|) <= h_scan and naive height at most the
// wandering threshold (anything higher is wandering outright).
fn scan_points(h_scan: u64, threshold: f64) -> Vec<ProjPoint> {
    let limit = if threshold.is_finite() && threshold < 64.0 * std::f64::consts::LN_2 {
        (threshold.exp().floor() as u64).min(h_scan)
    } else {
        h_scan
    };
    let limit = limit as i64;
    let mut out = vec![ProjPoint::infinity()];
    for b in 1..=limit {
        for a in -limit..=limit {
            if a.gcd(&b) == 1 {
                out.push(ProjPoint::normalized(a.into(), b.into()));
            }
        }
    }
    out
}

/// Whether the orbit's entries form a permutation of a consecutive interval.
pub fn detect_dynamical_compression(orbit: &Orbit) -> bool {
    let e = orbit.entries();
    let distinct: BTreeSet<&Integer> = e.iter().collect();
    if distinct.len() != e.len() {
        return false;
    }
    let (lo, hi) = (distinct.first().unwrap(), distinct.last().unwrap());
    (*hi - *lo + 1u32) == Integer::from(e.len())
}

/// `b F0 - a F1` for `q = (a : b)`: its roots are the finite preimages of `q`.
pub fn preimage_polynomial(f: &DynSystem, q: &ProjPoint) -> IntPoly {
    let p = f.numerator().scale(q.y()).sub(&f.denominator().scale(q.x()));
    if p.leading().is_some_and(|c| c.is_negative()) {
        p.neg()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Flavor;

    fn pt(n: i64) -> ProjPoint {
        ProjPoint::from_int(n)
    }

    fn poly(e: &[i64], d: usize) -> DynSystem {
        Orbit::from_i64s(e, d, Flavor::Polynomial).unwrap().to_map().unwrap()
    }

    fn rat(e: &[i64], d: usize) -> DynSystem {
        Orbit::from_i64s(e, d, Flavor::Rational).unwrap().to_map().unwrap()
    }

    fn squaring() -> DynSystem {
        DynSystem::from_i64s(&[0, 0, 1], &[1, 0, 0]).unwrap()
    }

    fn set(v: &[ProjPoint]) -> BTreeSet<ProjPoint> {
        v.iter().cloned().collect()
    }

    #[test]
    fn classification_examples() {
        let c = classify_orbit(&poly(&[0, 1, -1, 2], 2), &pt(0)).unwrap();
        assert_eq!((c.status, c.tail_m, c.period_n), (OrbitStatus::Preperiodic, 2, 3));
        assert_eq!(set(c.cycle()), set(&[pt(-1), pt(2), pt(-4)]));
        let c = classify_orbit(&poly(&[0, -5, 1, -1, -4, 2, 3, 4, -2], 7), &pt(0)).unwrap();
        assert_eq!((c.tail_m, c.period_n), (6, 3));
        let c = classify_orbit(&poly(&[0, 6, 1, 7, -1, 4, 8, -2, 5], 7), &pt(0)).unwrap();
        assert_eq!((c.tail_m, c.period_n), (8, 1));
        let c = classify_orbit(&squaring(), &pt(3)).unwrap();
        assert_eq!(c.status, OrbitStatus::Wandering);
    }

    #[test]
    fn preimage_examples() {
        let f = poly(&[0, 1, -1, 2], 2);
        assert_eq!(rational_preimages(&f, &pt(-1)).points, set(&[pt(-4), pt(1)]));
        assert!(rational_preimages(&f, &pt(0)).points.is_empty());
        let inf = ProjPoint::infinity();
        assert_eq!(rational_preimages(&squaring(), &inf).points, set(&[inf]));
    }

    #[test]
    fn periodic_examples() {
        let f = poly(&[0, 1, -1, 2], 2);
        let p = rational_periodic_points(&f, 3, 4096);
        for q in [-1, 2, -4] {
            assert_eq!(p.points.get(&pt(q)), Some(&3));
        }
        assert_eq!(p.points.get(&ProjPoint::infinity()), Some(&1));
        let s = rational_periodic_points(&squaring(), 2, 4096);
        let expected: BTreeMap<ProjPoint, usize> = [(pt(0), 1), (pt(1), 1), (ProjPoint::infinity(), 1)]
            .into_iter()
            .collect();
        assert_eq!(s.points, expected);
        assert!(s.complete);
    }

    #[test]
    fn census_examples() {
        let c = preperiodic_census(&poly(&[0, 1, -1, 2], 2), &CensusParams::default());
        assert!(c.complete, "{:?}", c.flags);
        let mut expected: Vec<ProjPoint> = [0, 1, -1, 2, -4, -2, -5, -3].iter().map(|&n| pt(n)).collect();
        expected.push(ProjPoint::infinity());
        expected.sort();
        assert_eq!(c.points, expected);
        assert_eq!(c.count, 9);

        let c = preperiodic_census(&poly(&[0, -4, 1, -3, -1, -5], 4), &CensusParams::default());
        assert_eq!((c.count, c.complete), (7, true));

        let c = preperiodic_census(&rat(&[0, -1, -3, -6, -2, -4], 2), &CensusParams::default());
        assert_eq!((c.count, c.complete), (14, true));

        let c = preperiodic_census(&squaring(), &CensusParams::default());
        assert_eq!(c.points, vec![pt(-1), pt(0), pt(1), ProjPoint::infinity()]);
        let no_inf = CensusParams {
            include_infinity: false,
            ..CensusParams::default()
        };
        assert_eq!(preperiodic_census(&squaring(), &no_inf).count, 3);
    }

    #[test]
    fn census_is_closed() {
        let f = rat(&[0, -1, -3, -6, -2, -4], 2);
        let c = preperiodic_census(&f, &CensusParams::default());
        let pts: BTreeSet<ProjPoint> = c.points.iter().cloned().collect();
        for (p, q) in &c.edges {
            assert!(pts.contains(q), "{p} -> {q}");
            assert!(rational_preimages(&f, p).points.is_subset(&pts));
        }
    }

    #[test]
    fn compression() {
        let o = |e: &[i64], d| Orbit::from_i64s(e, d, Flavor::Polynomial).unwrap();
        assert!(detect_dynamical_compression(&o(&[0, 1, -1, 2], 2)));
        // -1 is missing from [-3, 1].
        assert!(!detect_dynamical_compression(&o(&[0, -2, 1, -3], 2)));
        assert!(!detect_dynamical_compression(&o(&[0, 5, 7, 9], 2)));
    }
}
