//! Genetic search over orbit genomes.

mod engine;
mod hall;
mod operators;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Flavor;
use crate::fitness::{Fitness, FitnessScore, ScoreValue, Target};
use crate::interpolation::Orbit;
use crate::invariants::Fingerprint;

pub use engine::{
    random_baseline, run, run_with, score_batch, sort_population, step_generation, BaselinePoint, GenerationRecord,
    RunOptions, RunReport, RunStatus,
};
pub use hall::{HallEntry, HallOfFame};
pub use operators::{crossover, mutate, permutation_mix, random_orbit, recombine};

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixingMethod {
    Crossover,
    Permutation,
}

impl MixingMethod {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "crossover" => Some(MixingMethod::Crossover),
            "permutation" => Some(MixingMethod::Permutation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationMethod {
    /// Every gene is replaced independently with probability `mutation_rate`.
    All,
    /// With probability `mutation_rate`, one uniformly chosen gene is replaced.
    Single,
}

impl MutationMethod {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Some(MutationMethod::All),
            "single" => Some(MutationMethod::Single),
            _ => None,
        }
    }
}

/// Full run configuration. Defaults are the reference degree-4 rational
/// preperiodic block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GAConfig {
    pub map_type: Flavor,
    pub degree: usize,
    pub population: usize,
    pub generations: usize,
    pub survival: f64,
    pub reset_survival: f64,
    /// Generations between resets; 0 disables resets.
    pub reset_interval: usize,
    pub normalize_orbit: bool,
    pub bound: i64,
    pub mixing_method: MixingMethod,
    pub mutation_rate: f64,
    pub mutation_method: MutationMethod,
    pub target: Target,
    /// Early-stop threshold. For the count and period targets a positive
    /// value `v` means a score of `-v`.
    pub orbit_target: Option<f64>,
    /// `(w_n, w_m)`; `None` uses the target's default.
    pub orbit_weights: Option<(f64, f64)>,
    pub seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            map_type: Flavor::Rational,
            degree: 4,
            population: 1000,
            generations: 1000,
            survival: 0.15,
            reset_survival: 0.02,
            reset_interval: 50,
            normalize_orbit: true,
            bound: 20,
            mixing_method: MixingMethod::Permutation,
            mutation_rate: 0.05,
            mutation_method: MutationMethod::All,
            target: Target::Preperiodic,
            orbit_target: Some(11.0),
            orbit_weights: Some((5.0, 1.0)),
            seed: 0,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Validation(m));
        if self.degree < 2 {
            return fail(format!("degree must be at least 2, got {}", self.degree));
        }
        if self.population < 2 {
            return fail(format!("population must be at least 2, got {}", self.population));
        }
        if !(self.survival > 0.0 && self.survival <= 1.0) {
            return fail(format!("survival must be in (0, 1], got {}", self.survival));
        }
        if !(self.reset_survival > 0.0 && self.reset_survival <= 1.0) {
            return fail(format!("reset_survival must be in (0, 1], got {}", self.reset_survival));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return fail(format!("mutation_rate must be in [0, 1], got {}", self.mutation_rate));
        }
        if self.bound < 1 {
            return fail(format!("bound must be at least 1, got {}", self.bound));
        }
        if self.normalize_orbit && self.map_type == Flavor::Polynomial && 2 * self.bound + 1 < self.degree as i64 + 1 {
            // Sources are entries[0..=d]; 0 plus d distinct nonzero genes.
            return fail(format!(
                "bound {} is too small for {} distinct source points",
                self.bound,
                self.degree + 1
            ));
        }
        if let Some(t) = self.orbit_target {
            if !t.is_finite() {
                return fail("orbit_target must be finite".into());
            }
        }
        if let Some((a, b)) = self.orbit_weights {
            if !(a.is_finite() && b.is_finite()) {
                return fail("orbit_weights must be finite".into());
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> (f64, f64) {
        self.orbit_weights.unwrap_or_else(|| self.target.default_weights())
    }

    /// Early-stop threshold on the score scale.
    pub fn stop_score(&self) -> Option<f64> {
        self.orbit_target.map(|t| match self.target {
            Target::HeightRatio => t,
            _ if t > 0.0 => -t,
            _ => t,
        })
    }

    pub fn fitness(&self) -> Fitness {
        Fitness::new(self.target).with_weights(self.weights())
    }

    /// Number of survivors carried into each generation.
    pub fn survivors(&self) -> usize {
        ((self.survival * self.population as f64).ceil() as usize).clamp(1, self.population)
    }

    pub fn reset_survivors(&self) -> usize {
        ((self.reset_survival * self.population as f64).ceil() as usize).clamp(1, self.population)
    }
}

/// A scored genome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub orbit: Orbit,
    pub score: FitnessScore,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
}

impl Individual {
    pub fn value(&self) -> ScoreValue {
        self.score.value
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.orbit, self.score.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = GAConfig::default();
        c.validate().unwrap();
        assert_eq!(c.stop_score(), Some(-11.0));
        assert_eq!(c.survivors(), 150);
        assert_eq!(c.reset_survivors(), 20);
    }

    #[test]
    fn validation_failures() {
        let bad = |f: fn(&mut GAConfig)| {
            let mut c = GAConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.survival = 0.0));
        assert!(bad(|c| c.survival = 1.5));
        assert!(bad(|c| c.mutation_rate = -0.1));
        assert!(bad(|c| c.population = 1));
        assert!(bad(|c| c.bound = 0));
        assert!(bad(|c| c.degree = 1));
    }

    #[test]
    fn weights_default_per_target() {
        let c = GAConfig {
            target: Target::Tail,
            orbit_weights: None,
            ..GAConfig::default()
        };
        assert_eq!(c.weights(), (1.0, 5.0));
        let c = GAConfig {
            target: Target::HeightRatio,
            orbit_target: Some(1e-5),
            ..GAConfig::default()
        };
        assert_eq!(c.stop_score(), Some(1e-5));
    }
}
