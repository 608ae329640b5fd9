//! Naive and canonical heights on the projective line over Q.
//!
//! The canonical height is evaluated by the telescoping series
//! `h(P) + sum_n d^-(n+1) (h(f^(n+1) P) - d h(f^n P))` whose terms are bounded
//! by a certified constant `C`, so the truncation error is explicit.
//!
//! Iterates are tracked exactly while their coordinates are small. Past a bit
//! budget the archimedean part of each term only depends on the direction of
//! the point, so a truncated representative is carried instead, while the gcd
//! lost at each step (a divisor of the Bézout multiple `R`) is recovered
//! exactly from residues modulo a power of `R`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ln_abs, ln_ratio, solve_exact, Integer};
use crate::dynamics::{DynSystem, ProjPoint};

/// Default cap on the number of series terms.
pub const DEFAULT_TERM_CAP: usize = 64;
/// Cap on extra exact iterations spent confirming a repeat.
const REPEAT_SEARCH_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeightError {
    #[error("error bound must be positive and finite, got {0}")]
    InvalidEps(f64),
    #[error("{needed} series terms needed, cap is {cap}")]
    TermCapExceeded { needed: usize, cap: usize },
}

/// A height with its certified error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Constants with `-c_low <= h(f(P)) - d h(P) <= c_up` for every point `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightGapConstant {
    /// `max(c_up, c_low)`.
    pub c: f64,
    pub c_up: f64,
    pub c_low: f64,
}

/// `ln max(|a|, |b|)` of a canonical point.
pub fn naive_height(p: &ProjPoint) -> f64 {
    ln_abs(&p.max_abs()).max(0.0)
}

/// Per-map data for repeated height evaluations: the gap constant and the
/// integer `R` with `gcd(F0(P), F1(P)) | R` for every coprime `P`.
#[derive(Debug, Clone)]
pub struct HeightContext {
    f: DynSystem,
    gap: HeightGapConstant,
    bezout_multiple: Integer,
    term_cap: usize,
}

impl HeightContext {
    pub fn new(f: &DynSystem) -> Self {
        let d = f.degree();
        let c_up = f.coefficient_height() + ((d + 1) as f64).ln();
        let (c_low, r) = lower_gap(f);
        HeightContext {
            f: f.clone(),
            gap: HeightGapConstant {
                c: c_up.max(c_low),
                c_up,
                c_low,
            },
            bezout_multiple: r,
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn map(&self) -> &DynSystem {
        &self.f
    }

    pub fn gap(&self) -> &HeightGapConstant {
        &self.gap
    }

    /// Height above which a point is certainly wandering: `C / (d - 1) + ln 2`.
    pub fn wandering_threshold(&self) -> f64 {
        self.gap.c / (self.f.degree() - 1) as f64 + std::f64::consts::LN_2
    }

    /// Number of terms needed for a truncation error below `eps`.
    pub fn terms_for(&self, eps: f64) -> usize {
        let d = self.f.degree() as f64;
        let c = self.gap.c;
        let mut n = 0;
        while c * d.powi(-(n as i32)) / (d - 1.0) >= eps {
            n += 1;
        }
        n
    }

    /// Smallest error bound reachable within the term cap.
    pub fn smallest_eps(&self) -> f64 {
        let d = self.f.degree() as f64;
        self.gap.c * d.powi(-(self.term_cap as i32)) / (d - 1.0) * (1.0 + 1e-9)
    }

    pub fn canonical_height(&self, p: &ProjPoint, eps: f64) -> Result<HeightValue, HeightError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(HeightError::InvalidEps(eps));
        }
        let n_terms = self.terms_for(eps);
        if n_terms > self.term_cap {
            return Err(HeightError::TermCapExceeded {
                needed: n_terms,
                cap: self.term_cap,
            });
        }
        let d = self.f.degree();
        let df = d as f64;
        let tail = self.gap.c * df.powi(-(n_terms as i32)) / (df - 1.0);
        let budget = self.bit_budget(n_terms);

        let mut value = naive_height(p);
        let mut weight = 1.0;
        let mut seen: HashSet<ProjPoint> = HashSet::new();
        let mut current = p.clone();
        let mut n = 0;

        // Exact phase.
        while n < n_terms {
            if current.x().bits().max(current.y().bits()) > budget {
                break;
            }
            if !seen.insert(current.clone()) {
                return Ok(HeightValue {
                    value: 0.0,
                    error_bound: 0.0,
                });
            }
            let (a, b) = self.f.eval_forms(current.x(), current.y());
            let next = ProjPoint::normalized(a.clone(), b.clone());
            let g = if a.is_zero() { b.abs() } else { a.gcd(&b) };
            weight /= df;
            value += weight * (ln_ratio(&max_abs(&a, &b), &current.max_abs().pow(d as u32)) - ln_abs(&g));
            current = next;
            n += 1;
        }
        if n == n_terms {
            // Small orbits may still close up later; confirm exactly.
            if let Some(periodic) = self.repeats_later(&current, &mut seen) {
                if periodic {
                    return Ok(HeightValue {
                        value: 0.0,
                        error_bound: 0.0,
                    });
                }
            }
            return Ok(HeightValue {
                value,
                error_bound: tail,
            });
        }

        // Truncated phase: direction from a rounded pair, gcd from residues.
        let r = &self.bezout_multiple;
        let mut modulus = r.pow((n_terms - n + 1) as u32);
        let mut res = (current.x().mod_floor(&modulus), current.y().mod_floor(&modulus));
        let (mut x, mut y) = truncate(current.x().clone(), current.y().clone(), budget);
        while n < n_terms {
            let (a, b) = self.f.eval_forms(&x, &y);
            let (ra, rb) = self.f.eval_forms(&res.0, &res.1);
            let ra = ra.mod_floor(&modulus);
            let rb = rb.mod_floor(&modulus);
            let g = ra.gcd(&rb).gcd(r);
            weight /= df;
            value += weight * (ln_ratio(&max_abs(&a, &b), &max_abs(&x, &y).pow(d as u32)) - ln_abs(&g));
            modulus /= &g;
            res = (ra / &g, rb / &g);
            (x, y) = truncate(a, b, budget);
            n += 1;
        }
        Ok(HeightValue {
            value,
            error_bound: tail,
        })
    }

    // Some(true) if the orbit of `start` hits `seen` (or itself) before its
    // height passes the wandering threshold, Some(false) if it escapes.
    fn repeats_later(&self, start: &ProjPoint, seen: &mut HashSet<ProjPoint>) -> Option<bool> {
        let threshold = self.wandering_threshold();
        let mut p = start.clone();
        for _ in 0..REPEAT_SEARCH_CAP {
            if naive_height(&p) > threshold {
                return Some(false);
            }
            if !seen.insert(p.clone()) {
                return Some(true);
            }
            p = self.f.evaluate(&p);
        }
        None
    }

    // Mantissa size that keeps rounding far below the requested accuracy: each
    // step can amplify a direction error by about exp(c_up + c_low).
    fn bit_budget(&self, n_terms: usize) -> u64 {
        let per_step = ((self.gap.c_up + self.gap.c_low) / std::f64::consts::LN_2).ceil() as u64
            + (self.f.degree() as f64 * (self.f.degree() + 1) as f64).log2().ceil() as u64
            + 1;
        128 + per_step * (n_terms as u64 + 1)
    }
}

fn max_abs(a: &Integer, b: &Integer) -> Integer {
    a.abs().max(b.abs())
}

// Shifts both coordinates right so the larger has at most `bits` bits.
fn truncate(a: Integer, b: Integer, bits: u64) -> (Integer, Integer) {
    let top = a.bits().max(b.bits());
    if top <= bits {
        return (a, b);
    }
    let s = (top - bits) as usize;
    (round_shift(a, s), round_shift(b, s))
}

fn round_shift(v: BigInt, s: usize) -> BigInt {
    let half = BigInt::one() << (s - 1);
    if v.is_negative() {
        -((-v + half) >> s)
    } else {
        (v + half) >> s
    }
}

/// Certified constant `C` for `|h(f(P)) - d h(P)| <= C`.
pub fn height_gap_constant(f: &DynSystem) -> HeightGapConstant {
    HeightContext::new(f).gap
}

// Lower gap from Bézout cofactors: forms A, B of degree d - 1 with
// A F0 + B F1 = R x^(2d-1) (and similarly for y^(2d-1)) give
// R |P|^(2d-1) <= 2d H(G) |P|^(d-1) max|F(P)|, while the gcd lost on
// reduction divides R, so h(f(P)) >= d h(P) - ln(2d) - h(G).
fn lower_gap(f: &DynSystem) -> (f64, Integer) {
    let d = f.degree();
    let f0 = f.numerator_coeffs();
    let f1 = f.denominator_coeffs();
    let n = 2 * d;
    // Column i < d: a_i, column d + i: b_i; row k: coefficient of x^k.
    let mut sylvester = vec![vec![Integer::zero(); n]; n];
    for i in 0..d {
        for j in 0..=d {
            sylvester[i + j][i] = f0[j].clone();
            sylvester[i + j][d + i] = f1[j].clone();
        }
    }
    let solve = |k: usize| -> (Vec<Integer>, Integer) {
        let mut rhs = vec![Integer::zero(); n];
        rhs[k] = Integer::one();
        let v = solve_exact(&sylvester, &rhs).expect("nonzero resultant");
        let lcm = v.iter().fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
        let ints = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        (ints, lcm)
    };
    let (gx, rx) = solve(n - 1);
    let (gy, ry) = solve(0);
    let r = rx.lcm(&ry);
    let scale_x = &r / &rx;
    let scale_y = &r / &ry;
    let hg = gx
        .iter()
        .map(|c| c * &scale_x)
        .chain(gy.iter().map(|c| c * &scale_y))
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    (((2 * d) as f64).ln() + ln_abs(&hg).max(0.0), r)
}

/// Canonical height of `p` within `eps`.
pub fn canonical_height(f: &DynSystem, p: &ProjPoint, eps: f64) -> Result<HeightValue, HeightError> {
    HeightContext::new(f).canonical_height(p, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Flavor;
    use crate::interpolation::Orbit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn squaring() -> DynSystem {
        DynSystem::from_i64s(&[0, 0, 1], &[1, 0, 0]).unwrap()
    }

    fn poly(e: &[i64], d: usize) -> DynSystem {
        Orbit::from_i64s(e, d, Flavor::Polynomial).unwrap().to_map().unwrap()
    }

    fn rat(e: &[i64], d: usize) -> DynSystem {
        Orbit::from_i64s(e, d, Flavor::Rational).unwrap().to_map().unwrap()
    }

    fn pt(n: i64) -> ProjPoint {
        ProjPoint::from_int(n)
    }

    #[test]
    fn naive_examples() {
        let p = ProjPoint::new(3.into(), 4.into()).unwrap();
        assert!((naive_height(&p) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&pt(0)), 0.0);
        assert_eq!(naive_height(&ProjPoint::infinity()), 0.0);
    }

    fn random_point(rng: &mut ChaCha8Rng, bound: i64) -> ProjPoint {
        loop {
            let a = rng.random_range(-bound..=bound);
            let b = rng.random_range(0..=bound);
            if let Ok(p) = ProjPoint::new(a.into(), b.into()) {
                return p;
            }
        }
    }

    fn check_gap(f: &DynSystem, seed: u64) {
        let c = height_gap_constant(f);
        assert!(c.c >= 0.0 && c.c_up >= 0.0 && c.c_low >= 0.0);
        let d = f.degree() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let p = random_point(&mut rng, 1_000_000);
            let gap = naive_height(&f.evaluate(&p)) - d * naive_height(&p);
            assert!(
                gap <= c.c_up + 1e-9 && -gap <= c.c_low + 1e-9,
                "{f:?} {p:?} {gap} {c:?}"
            );
        }
    }

    #[test]
    fn gap_constant_is_never_violated() {
        check_gap(&poly(&[0, -2, 1, -3], 2), 1);
        check_gap(&squaring(), 2);
        check_gap(&rat(&[0, -1, -16, 4, 8, 2], 2), 3);
        check_gap(&poly(&[0, 3, 4, 5, 1, -1], 4), 4);
    }

    #[test]
    fn squaring_map_height() {
        let h = canonical_height(&squaring(), &pt(2), 1e-6).unwrap();
        assert!((h.value - 2f64.ln()).abs() < 1e-6);
        assert!(h.error_bound < 1e-6);
        let q = ProjPoint::new(2.into(), 3.into()).unwrap();
        let h = canonical_height(&squaring(), &q, 1e-12).unwrap();
        assert!((h.value - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn preperiodic_points_have_height_zero() {
        let f = poly(&[0, 1, -1, 2], 2);
        assert_eq!(canonical_height(&f, &pt(0), 1e-9).unwrap().value, 0.0);
        assert_eq!(canonical_height(&squaring(), &pt(-1), 1e-9).unwrap().value, 0.0);
        assert_eq!(
            canonical_height(&squaring(), &ProjPoint::infinity(), 1e-9)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn degree_four_small_height() {
        let f = poly(&[0, 3, 4, 5, 1, -1], 4);
        let h = canonical_height(&f, &pt(0), 1e-9).unwrap();
        // Limit of h(f^n(0)) / 4^n from exact iteration up to n = 11 with
        // geometric extrapolation: 0.000286965.
        assert!((h.value - 0.000286965).abs() < 2e-9, "{}", h.value);
        // Within the 1e-6 error bound of the reference value 0.0002875.
        assert!((h.value - 0.0002875).abs() < 1e-6);
    }

    #[test]
    fn functional_equation() {
        let f = rat(&[0, -1, -16, 4, 8, 2], 2);
        let ctx = HeightContext::new(&f);
        let eps = 1e-10;
        for k in [3, 5, 7, 11] {
            let p = pt(k);
            let hp = ctx.canonical_height(&p, eps).unwrap().value;
            let hfp = ctx.canonical_height(&f.evaluate(&p), eps).unwrap().value;
            assert!((hfp - 2.0 * hp).abs() <= 3.0 * eps, "{k}: {hfp} vs {hp}");
        }
    }

    #[test]
    fn rejects_bad_eps_and_cap() {
        let ctx = HeightContext::new(&squaring());
        assert!(matches!(
            ctx.canonical_height(&pt(2), 0.0),
            Err(HeightError::InvalidEps(_))
        ));
        let ctx = ctx.with_term_cap(3);
        assert!(matches!(
            ctx.canonical_height(&pt(2), 1e-12),
            Err(HeightError::TermCapExceeded { cap: 3, .. })
        ));
    }
}
