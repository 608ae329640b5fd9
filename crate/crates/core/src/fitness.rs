//! The four scoring functions, all minimized.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::{DynSystem, DynSystemRecord, Flavor, ProjPoint};
use crate::heights::{naive_height, HeightContext, HeightError, HeightValue};
use crate::interpolation::Orbit;
use crate::invariants::{moduli_height_of, sigma_invariants};
use crate::preperiodic::{
    classify_orbit_with, preperiodic_census_with, CensusParams, OrbitStatus, DEFAULT_ITERATION_CAP,
};

/// What a search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    HeightRatio,
    Preperiodic,
    Cycle,
    Tail,
}

impl Target {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "height_ratio" | "height" | "ratio" | "small_height" => Some(Target::HeightRatio),
            "preperiodic" | "preperiodic_count" => Some(Target::Preperiodic),
            "cycle" => Some(Target::Cycle),
            "tail" => Some(Target::Tail),
            _ => None,
        }
    }

    /// `(w_n, w_m)` used when no weights are configured.
    pub fn default_weights(self) -> (f64, f64) {
        match self {
            Target::Tail => (1.0, 5.0),
            _ => (5.0, 1.0),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::HeightRatio => "height_ratio",
            Target::Preperiodic => "preperiodic",
            Target::Cycle => "cycle",
            Target::Tail => "tail",
        })
    }
}

/// A finite score or the sentinel that ranks below everything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreValue {
    Finite(f64),
    Worst,
}

impl ScoreValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            ScoreValue::Finite(v) => Some(v),
            ScoreValue::Worst => None,
        }
    }

    pub fn is_worst(self) -> bool {
        matches!(self, ScoreValue::Worst)
    }
}

impl Eq for ScoreValue {}

impl Ord for ScoreValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ScoreValue::Finite(a), ScoreValue::Finite(b)) => a.total_cmp(b),
            (ScoreValue::Finite(_), ScoreValue::Worst) => Ordering::Less,
            (ScoreValue::Worst, ScoreValue::Finite(_)) => Ordering::Greater,
            (ScoreValue::Worst, ScoreValue::Worst) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ScoreValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ScoreValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreValue::Finite(v) => write!(f, "{v}"),
            ScoreValue::Worst => f.write_str("WORST"),
        }
    }
}

impl Serialize for ScoreValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ScoreValue::Finite(v) => s.serialize_f64(*v),
            ScoreValue::Worst => s.serialize_str("WORST"),
        }
    }
}

impl<'de> Deserialize<'de> for ScoreValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ScoreValue::Finite(v)),
            Raw::Str(s) if s == "WORST" => Ok(ScoreValue::Worst),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad score {s:?}"))),
        }
    }
}

/// Which branch produced a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Wandering,
    Preperiodic,
    Worst,
}

/// Metadata recorded alongside a score.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreDetail {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<DynSystemRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<OrbitStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_n: Option<usize>,
    /// `h(f^k(0))` on the wandering branch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterate_height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_height: Option<HeightValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moduli_height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_complete: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessScore {
    pub value: ScoreValue,
    pub detail: ScoreDetail,
}

impl FitnessScore {
    fn worst(detail: ScoreDetail) -> Self {
        FitnessScore {
            value: ScoreValue::Worst,
            detail: ScoreDetail {
                branch: Some(Branch::Worst),
                ..detail
            },
        }
    }
}

impl Eq for FitnessScore {}

impl Ord for FitnessScore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl PartialOrd for FitnessScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Accuracy and search limits used while scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoringProfile {
    /// First-pass error bound for the canonical height.
    pub eps: f64,
    /// Second pass tightens to this fraction of the canonical height.
    pub relative_eps: f64,
    pub census: CensusParams,
}

impl Default for ScoringProfile {
    fn default() -> Self {
        ScoringProfile {
            eps: 1e-8,
            relative_eps: 1e-3,
            census: CensusParams::default(),
        }
    }
}

impl ScoringProfile {
    /// Tighter settings for re-scoring finalists and for verification.
    pub fn verification() -> Self {
        ScoringProfile {
            eps: 1e-10,
            relative_eps: 1e-5,
            census: CensusParams {
                n_max: 3,
                ..CensusParams::default()
            },
        }
    }
}

/// A target together with its weights and profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub target: Target,
    pub weights: (f64, f64),
    pub profile: ScoringProfile,
}

impl Fitness {
    pub fn new(target: Target) -> Self {
        Fitness {
            target,
            weights: target.default_weights(),
            profile: ScoringProfile::default(),
        }
    }

    pub fn with_weights(mut self, weights: (f64, f64)) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_profile(mut self, profile: ScoringProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn score(&self, orbit: &Orbit) -> FitnessScore {
        match self.target {
            Target::HeightRatio => score_height_ratio_with(orbit, &self.profile),
            Target::Preperiodic => score_preperiodic_count_with(orbit, &self.profile),
            Target::Cycle | Target::Tail => score_period_weighted(orbit, self.weights),
        }
    }
}

// Interpolation, with failures turned into the sentinel.
fn interpolate(orbit: &Orbit) -> Result<DynSystem, Box<FitnessScore>> {
    orbit.to_map().map_err(|e| {
        Box::new(FitnessScore::worst(ScoreDetail {
            failure: Some(e.to_string()),
            ..ScoreDetail::default()
        }))
    })
}

/// `k` for the wandering branch: one step past the orbit's last entry.
pub fn wandering_iterate(orbit: &Orbit) -> usize {
    match orbit.flavor() {
        Flavor::Polynomial => orbit.degree() + 2,
        Flavor::Rational => 2 * orbit.degree() + 3,
    }
}

/// `ĥ_f(0) / h_M(f)`; preperiodic 0, `h_M = 0` and interpolation failures
/// score the sentinel.
pub fn score_height_ratio(orbit: &Orbit) -> FitnessScore {
    score_height_ratio_with(orbit, &ScoringProfile::default())
}

pub fn score_height_ratio_with(orbit: &Orbit, profile: &ScoringProfile) -> FitnessScore {
    let f = match interpolate(orbit) {
        Ok(f) => f,
        Err(s) => return *s,
    };
    let mut detail = ScoreDetail {
        map: Some(DynSystemRecord::from(&f)),
        ..ScoreDetail::default()
    };
    let ctx = HeightContext::new(&f);
    let zero = ProjPoint::from_int(0);
    match classify_orbit_with(&ctx, &zero, DEFAULT_ITERATION_CAP) {
        Ok(c) => {
            detail.status = Some(c.status);
            if c.is_preperiodic() {
                detail.tail_m = Some(c.tail_m);
                detail.period_n = Some(c.period_n);
                detail.canonical_height = Some(HeightValue {
                    value: 0.0,
                    error_bound: 0.0,
                });
                detail.failure = Some("0 is preperiodic".into());
                return FitnessScore::worst(detail);
            }
        }
        Err(e) => {
            detail.failure = Some(e.to_string());
            return FitnessScore::worst(detail);
        }
    }
    let hm = moduli_height_of(&sigma_invariants(&f));
    detail.moduli_height = Some(hm);
    if hm <= 0.0 {
        detail.failure = Some("moduli height is 0".into());
        return FitnessScore::worst(detail);
    }
    let h = match refined_height(&ctx, &zero, profile) {
        Ok(h) => h,
        Err(e) => {
            detail.failure = Some(e.to_string());
            return FitnessScore::worst(detail);
        }
    };
    detail.canonical_height = Some(h);
    detail.branch = Some(Branch::Wandering);
    FitnessScore {
        value: ScoreValue::Finite(h.value / hm),
        detail,
    }
}

// Two passes: absolute eps, then eps relative to the first estimate. When the
// relative bound would need more terms than the cap allows, the most accurate
// value within the cap is kept.
fn refined_height(ctx: &HeightContext, p: &ProjPoint, profile: &ScoringProfile) -> Result<HeightValue, HeightError> {
    let first = ctx.canonical_height(p, profile.eps)?;
    let target = first.value * profile.relative_eps;
    if target >= profile.eps || first.value <= 0.0 {
        return Ok(first);
    }
    match ctx.canonical_height(p, target) {
        Ok(h) => Ok(h),
        Err(HeightError::TermCapExceeded { .. }) => {
            let floor = ctx.smallest_eps();
            ctx.canonical_height(p, floor).or(Ok(first))
        }
        Err(e) => Err(e),
    }
}

/// `h(f^k(0))` if 0 wanders, else `-#Pre(f, Q)`.
pub fn score_preperiodic_count(orbit: &Orbit) -> FitnessScore {
    score_preperiodic_count_with(orbit, &ScoringProfile::default())
}

pub fn score_preperiodic_count_with(orbit: &Orbit, profile: &ScoringProfile) -> FitnessScore {
    let f = match interpolate(orbit) {
        Ok(f) => f,
        Err(s) => return *s,
    };
    let ctx = HeightContext::new(&f);
    let mut detail = ScoreDetail {
        map: Some(DynSystemRecord::from(&f)),
        ..ScoreDetail::default()
    };
    match classify_or_worst(&ctx, &mut detail) {
        Some(true) => {
            let census = preperiodic_census_with(&ctx, &profile.census);
            detail.census_count = Some(census.count);
            detail.census_complete = Some(census.complete);
            detail.branch = Some(Branch::Preperiodic);
            FitnessScore {
                value: ScoreValue::Finite(-(census.count as f64)),
                detail,
            }
        }
        Some(false) => wandering_score(&f, orbit, detail),
        None => FitnessScore::worst(detail),
    }
}

/// `-(5n + m)` for preperiodic 0 with minimal `(m, n)`, else `h(f^k(0))`.
pub fn score_cycle(orbit: &Orbit, weights: (f64, f64)) -> FitnessScore {
    score_period_weighted(orbit, weights)
}

/// `-(n + 5m)` with default weights `(1, 5)`, else `h(f^k(0))`.
pub fn score_tail(orbit: &Orbit, weights: (f64, f64)) -> FitnessScore {
    score_period_weighted(orbit, weights)
}

/// `-(w_n n + w_m m)` for preperiodic 0, else `h(f^k(0))`.
pub fn score_period_weighted(orbit: &Orbit, (w_n, w_m): (f64, f64)) -> FitnessScore {
    let f = match interpolate(orbit) {
        Ok(f) => f,
        Err(s) => return *s,
    };
    let ctx = HeightContext::new(&f);
    let mut detail = ScoreDetail {
        map: Some(DynSystemRecord::from(&f)),
        ..ScoreDetail::default()
    };
    match classify_or_worst(&ctx, &mut detail) {
        Some(true) => {
            let value = period_score(detail.tail_m.unwrap(), detail.period_n.unwrap(), (w_n, w_m));
            detail.branch = Some(Branch::Preperiodic);
            FitnessScore {
                value: ScoreValue::Finite(value),
                detail,
            }
        }
        Some(false) => wandering_score(&f, orbit, detail),
        None => FitnessScore::worst(detail),
    }
}

/// `-(w_n n + w_m m)`.
pub fn period_score(m: usize, n: usize, (w_n, w_m): (f64, f64)) -> f64 {
    -(w_n * n as f64 + w_m * m as f64)
}

// Some(preperiodic?) with the classification recorded, None on a cap failure.
fn classify_or_worst(ctx: &HeightContext, detail: &mut ScoreDetail) -> Option<bool> {
    match classify_orbit_with(ctx, &ProjPoint::from_int(0), DEFAULT_ITERATION_CAP) {
        Ok(c) => {
            detail.status = Some(c.status);
            if c.is_preperiodic() {
                detail.tail_m = Some(c.tail_m);
                detail.period_n = Some(c.period_n);
            }
            Some(c.is_preperiodic())
        }
        Err(e) => {
            detail.failure = Some(e.to_string());
            None
        }
    }
}

fn wandering_score(f: &DynSystem, orbit: &Orbit, mut detail: ScoreDetail) -> FitnessScore {
    let k = wandering_iterate(orbit);
    let p = f.iterate(&ProjPoint::from_int(0), k).pop().unwrap();
    let h = naive_height(&p);
    detail.iterate_height = Some(h);
    detail.branch = Some(Branch::Wandering);
    FitnessScore {
        value: ScoreValue::Finite(h),
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(e: &[i64], d: usize) -> Orbit {
        Orbit::from_i64s(e, d, Flavor::Polynomial).unwrap()
    }

    fn rat(e: &[i64], d: usize) -> Orbit {
        Orbit::from_i64s(e, d, Flavor::Rational).unwrap()
    }

    fn finite(s: &FitnessScore) -> f64 {
        s.value.finite().expect("finite score")
    }

    #[test]
    fn ordering() {
        let w = ScoreValue::Worst;
        assert!(ScoreValue::Finite(1e300) < w);
        assert!(ScoreValue::Finite(-21.0) < ScoreValue::Finite(-5.0));
        assert_eq!(w.cmp(&w), Ordering::Equal);
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"WORST\"");
        assert_eq!(
            serde_json::from_str::<ScoreValue>("-7.0").unwrap(),
            ScoreValue::Finite(-7.0)
        );
    }

    #[test]
    fn height_ratio_examples() {
        let s = score_height_ratio(&poly(&[0, -2, 1, -3], 2));
        assert!((finite(&s) - 0.006604).abs() < 1e-5, "{}", finite(&s));
        let s = score_height_ratio(&poly(&[0, 3, 4, 5, 1, -1], 4));
        assert!((finite(&s) / 1.328e-5 - 1.0).abs() < 0.01, "{}", finite(&s));
        let s = score_height_ratio(&rat(&[0, -1, -16, 4, 8, 2], 2));
        assert!((finite(&s) - 0.0004657).abs() < 1e-6, "{}", finite(&s));
        let s = score_height_ratio(&poly(&[0, 1, -1, 2], 2));
        assert!(s.value.is_worst());
        assert_eq!(s.detail.branch, Some(Branch::Worst));
    }

    #[test]
    fn preperiodic_count_examples() {
        let s = score_preperiodic_count(&poly(&[0, -3, -1, -5, -2, -4], 4));
        assert!((finite(&s) - 1.7918).abs() < 1e-3, "{}", finite(&s));
        assert_eq!(
            finite(&score_preperiodic_count(&poly(&[0, -4, 1, -3, -1, -5], 4))),
            -7.0
        );
        assert_eq!(finite(&score_preperiodic_count(&poly(&[0, 1, -1, 2], 2))), -9.0);
    }

    #[test]
    fn cycle_and_tail_examples() {
        let s = score_cycle(&poly(&[0, -5, 3, -1, -4, 2, 4, -3, 1], 7), (5.0, 1.0));
        assert!((finite(&s) - 1.946).abs() < 1e-3, "{}", finite(&s));
        let s = score_cycle(&poly(&[0, -5, 1, -1, -4, 2, 3, 4, -2], 7), (5.0, 1.0));
        assert_eq!(finite(&s), -21.0);
        let s = score_tail(&poly(&[0, 3, -3, 5, -1, 6, 1, -2, 4], 7), (1.0, 5.0));
        assert!((finite(&s) - 2.1972).abs() < 1e-3, "{}", finite(&s));
        let s = score_tail(&poly(&[0, 6, 1, 7, -1, 4, 8, -2, 5], 7), (1.0, 5.0));
        assert_eq!(finite(&s), -41.0);
    }

    #[test]
    fn fixed_point_at_zero() {
        // (m, n) = (0, 1); an orbit cannot encode this (it would be all zeros).
        assert_eq!(period_score(0, 1, Target::Cycle.default_weights()), -5.0);
        assert_eq!(period_score(0, 1, Target::Tail.default_weights()), -1.0);
    }

    #[test]
    fn interpolation_failure_is_worst() {
        let s = Fitness::new(Target::Cycle).score(&poly(&[0, 1, 2, 3], 2));
        assert!(s.value.is_worst());
        assert!(s.detail.failure.is_some());
    }

    #[test]
    fn deterministic() {
        let f = Fitness::new(Target::Preperiodic);
        let o = rat(&[0, -1, -3, -6, -2, -4], 2);
        assert_eq!(f.score(&o), f.score(&o));
        assert_eq!(finite(&f.score(&o)), -14.0);
    }
}
