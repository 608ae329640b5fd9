//! Exact arithmetic dynamics on the projective line over the rationals and a
//! genetic search for maps with extreme dynamical behaviour.

pub mod arith;
pub mod config;
pub mod dynamics;
pub mod expr;
pub mod fitness;
pub mod ga;
pub mod heights;
pub mod interpolation;
pub mod invariants;
pub mod preperiodic;
pub mod verify;

pub use arith::{IntPoly, Integer, Rational};
pub use config::{parse_config, parse_config_str, ConfigFileError};
pub use dynamics::{DynSystem, DynamicsError, Flavor, Mobius, ProjPoint};
pub use expr::{parse_map, MapParseError};
pub use fitness::{Fitness, FitnessScore, ScoreValue, ScoringProfile, Target};
pub use ga::{GAConfig, HallOfFame, Individual, RunOptions, RunReport, RunStatus};
pub use heights::{canonical_height, naive_height, HeightContext, HeightValue};
pub use interpolation::{InterpolationError, Orbit};
pub use invariants::{conjugacy_fingerprint, moduli_height, sigma_invariants, Fingerprint, SigmaInvariants};
pub use preperiodic::{classify_orbit, preperiodic_census, CensusParams, CensusResult, OrbitClassification};
pub use verify::{verify_orbit, VerifyRecord};
