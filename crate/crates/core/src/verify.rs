//! Everything worth reporting about one orbit genome, recomputed from scratch.

use serde::{Deserialize, Serialize};

use crate::dynamics::{DynSystem, ProjPoint};
use crate::fitness::{Fitness, FitnessScore, ScoringProfile, Target};
use crate::heights::{HeightContext, HeightError, HeightValue};
use crate::interpolation::{InterpolationError, Orbit};
use crate::invariants::{conjugacy_fingerprint, moduli_height_of, sigma_invariants, Fingerprint, SigmaInvariants};
use crate::preperiodic::{
    classify_orbit_with, preperiodic_census_with, CensusResult, OrbitStatus, DEFAULT_ITERATION_CAP,
};

/// Forward orbit of 0 summarized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroOrbit {
    pub status: OrbitStatus,
    pub tail_m: usize,
    pub period_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub orbit: Orbit,
    pub target: Target,
    pub map: DynSystem,
    pub map_display: String,
    /// `None` when classification hit the iteration cap.
    pub zero_orbit: Option<ZeroOrbit>,
    pub sigma: SigmaInvariants,
    pub fingerprint: Fingerprint,
    pub moduli_height: f64,
    /// `ĥ_f(0)`; `None` if it could not be certified.
    pub canonical_height: Option<HeightValue>,
    /// Present for the preperiodic-count target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusResult>,
    pub score: FitnessScore,
    pub dynamical_compression: bool,
}

fn zero_height(ctx: &HeightContext, eps: f64) -> Result<HeightValue, HeightError> {
    let zero = ProjPoint::from_int(0);
    match ctx.canonical_height(&zero, eps) {
        Err(HeightError::TermCapExceeded { .. }) => ctx.canonical_height(&zero, ctx.smallest_eps()),
        other => other,
    }
}

/// Interpolates the orbit and reports the map, its invariants, the behaviour
/// of 0 and the score under the verification profile.
pub fn verify_orbit(
    orbit: &Orbit,
    target: Target,
    weights: Option<(f64, f64)>,
) -> Result<VerifyRecord, InterpolationError> {
    let f = orbit.to_map()?;
    let profile = ScoringProfile::verification();
    let mut fitness = Fitness::new(target).with_profile(profile.clone());
    if let Some(w) = weights {
        fitness = fitness.with_weights(w);
    }
    let ctx = HeightContext::new(&f);
    let zero_orbit = classify_orbit_with(&ctx, &ProjPoint::from_int(0), DEFAULT_ITERATION_CAP)
        .ok()
        .map(|c| ZeroOrbit {
            status: c.status,
            tail_m: c.tail_m,
            period_n: c.period_n,
        });
    let sigma = sigma_invariants(&f);
    let census = (target == Target::Preperiodic).then(|| preperiodic_census_with(&ctx, &profile.census));
    Ok(VerifyRecord {
        orbit: orbit.clone(),
        target,
        map_display: f.display_affine(),
        zero_orbit,
        moduli_height: moduli_height_of(&sigma),
        fingerprint: conjugacy_fingerprint(&f),
        sigma,
        canonical_height: zero_height(&ctx, profile.eps).ok(),
        census,
        score: fitness.score(orbit),
        dynamical_compression: crate::preperiodic::detect_dynamical_compression(orbit),
        map: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Flavor;

    #[test]
    fn degree_two_record() {
        let o = Orbit::from_i64s(&[0, -2, 1, -3], 2, Flavor::Polynomial).unwrap();
        let r = verify_orbit(&o, Target::HeightRatio, None).unwrap();
        assert_eq!(r.map_display, "1/6z^2 - 7/6z - 2");
        assert_eq!(r.zero_orbit.as_ref().unwrap().status, OrbitStatus::Wandering);
        let ratio = r.score.value.finite().unwrap();
        assert!((ratio - 0.006604).abs() < 1e-5, "{ratio}");
        assert!(r.census.is_none());
        let h = r.canonical_height.unwrap();
        assert!((h.value / r.moduli_height - ratio).abs() <= 2.0 * h.error_bound / r.moduli_height + 1e-12);
        let json = serde_json::to_string(&r).unwrap();
        let back: VerifyRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.map, r.map);
        assert_eq!(back.score.value, r.score.value);
    }

    #[test]
    fn preperiodic_record_has_census() {
        let o = Orbit::from_i64s(&[0, -1, -3, -6, -2, -4], 2, Flavor::Rational).unwrap();
        let r = verify_orbit(&o, Target::Preperiodic, None).unwrap();
        let z = r.zero_orbit.unwrap();
        // 0 -> -1 -> -3 -> -6 -> -2 -> -4 -> 9 -> -4: tail 5, period 2.
        assert_eq!((z.tail_m, z.period_n), (5, 2));
        let census = r.census.unwrap();
        assert_eq!(census.count, 14);
        assert!(census.complete);
        assert_eq!(r.score.value.finite(), Some(-14.0));
        assert_eq!(r.canonical_height.unwrap().value, 0.0);
    }

    #[test]
    fn interpolation_failure() {
        let o = Orbit::from_i64s(&[0, 1, 2, 3, 4, 7], 2, Flavor::Rational).unwrap();
        assert!(verify_orbit(&o, Target::Cycle, None).is_err());
    }
}
