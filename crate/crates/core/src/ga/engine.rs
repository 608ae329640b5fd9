use std::collections::HashMap;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hall::HallOfFame;
use super::operators::{mutate, random_orbit, recombine};
use super::{ConfigError, GAConfig, Individual, RNG_NAME};
use crate::fitness::{Fitness, FitnessScore, ScoreValue, ScoringProfile};
use crate::interpolation::Orbit;

// Cache entries kept before the cache is cleared.
const CACHE_LIMIT: usize = 200_000;
// Individuals offered to the hall of fame each generation.
const HALL_OFFERS: usize = 5;
// Separates the baseline stream from the GA stream for the same seed.
const BASELINE_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    TargetReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_score: ScoreValue,
    pub best_orbit: Orbit,
    /// Cumulative number of genomes scored so far.
    pub evaluations: usize,
    pub reset: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Worker threads for scoring; 0 uses rayon's default.
    pub threads: usize,
    pub hall_size: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: 1,
            hall_size: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: GAConfig,
    pub rng: String,
    pub status: RunStatus,
    pub generations: Vec<GenerationRecord>,
    pub best: Individual,
    /// Finalists, re-scored with the verification profile.
    pub hall_of_fame: HallOfFame,
    pub evaluations: usize,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselinePoint {
    pub evaluations: usize,
    pub best: ScoreValue,
}

/// Sorts best-first; ties are broken by the genome so order is reproducible.
pub fn sort_population(pop: &mut [Individual]) {
    pop.sort_by(|a, b| (&a.score, &a.orbit).cmp(&(&b.score, &b.orbit)));
}

/// Scores genomes in parallel on the current rayon pool.
pub fn score_batch(orbits: Vec<Orbit>, fitness: &Fitness) -> Vec<Individual> {
    orbits
        .into_par_iter()
        .map(|orbit| Individual {
            score: fitness.score(&orbit),
            orbit,
            fingerprint: None,
        })
        .collect()
}

// Scores through a memo keyed by genome.
struct Scorer {
    fitness: Fitness,
    cache: HashMap<Orbit, FitnessScore>,
    pool: Option<rayon::ThreadPool>,
}

impl Scorer {
    fn new(fitness: Fitness, pool: Option<rayon::ThreadPool>) -> Self {
        Scorer {
            fitness,
            cache: HashMap::new(),
            pool,
        }
    }

    fn score(&mut self, orbits: Vec<Orbit>) -> Vec<Individual> {
        let mut fresh: Vec<Orbit> = orbits
            .iter()
            .filter(|o| !self.cache.contains_key(*o))
            .cloned()
            .collect();
        fresh.sort();
        fresh.dedup();
        if self.cache.len() + fresh.len() > CACHE_LIMIT {
            self.cache.clear();
        }
        let scored = match &self.pool {
            Some(pool) => pool.install(|| score_batch(fresh, &self.fitness)),
            None => score_batch(fresh, &self.fitness),
        };
        for ind in scored {
            self.cache.insert(ind.orbit, ind.score);
        }
        orbits
            .into_iter()
            .map(|orbit| Individual {
                score: self.cache[&orbit].clone(),
                orbit,
                fingerprint: None,
            })
            .collect()
    }
}

fn breed<R: Rng + ?Sized>(parents: &[Individual], count: usize, config: &GAConfig, rng: &mut R) -> Vec<Orbit> {
    let mut children = Vec::with_capacity(count + 1);
    while children.len() < count {
        let p1 = &parents.choose(rng).expect("non-empty parents").orbit;
        let p2 = &parents.choose(rng).expect("non-empty parents").orbit;
        let (c1, c2) = recombine(p1, p2, config, rng);
        children.push(mutate(&c1, config, rng));
        if children.len() < count {
            children.push(mutate(&c2, config, rng));
        }
    }
    children
}

fn next_generation<R: Rng + ?Sized>(
    pop: &[Individual],
    config: &GAConfig,
    rng: &mut R,
    scorer: &mut Scorer,
    reset: bool,
) -> Vec<Individual> {
    let keep = if reset {
        config.reset_survivors()
    } else {
        config.survivors()
    };
    let survivors = &pop[..keep.min(pop.len())];
    let fill = config.population - survivors.len();
    let newcomers = if reset {
        (0..fill).map(|_| random_orbit(config, rng)).collect()
    } else {
        breed(survivors, fill, config, rng)
    };
    let mut next = survivors.to_vec();
    next.extend(scorer.score(newcomers));
    sort_population(&mut next);
    next
}

/// One elitist generation: the best `ceil(survival * P)` individuals are kept
/// and the rest of the population is bred from them. `pop` must be sorted.
pub fn step_generation<R: Rng + ?Sized>(
    pop: &[Individual],
    config: &GAConfig,
    rng: &mut R,
    fitness: &Fitness,
) -> Vec<Individual> {
    let mut scorer = Scorer::new(fitness.clone(), None);
    next_generation(pop, config, rng, &mut scorer, false)
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn reached(best: &Individual, stop: Option<f64>) -> bool {
    matches!((best.value().finite(), stop), (Some(v), Some(t)) if v <= t)
}

/// Runs the search. `observer` sees every generation record as it is made.
pub fn run_with(
    config: &GAConfig,
    options: &RunOptions,
    mut observer: impl FnMut(&GenerationRecord),
) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let start = Instant::now();
    let fitness = config.fitness();
    let stop = config.stop_score();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut scorer = Scorer::new(fitness.clone(), Some(pool(options.threads)));
    let mut hall = HallOfFame::new(options.hall_size);
    let mut evaluations = 0;
    let mut records = Vec::new();
    let mut status = RunStatus::Completed;

    let initial = (0..config.population).map(|_| random_orbit(config, &mut rng)).collect();
    let mut pop = scorer.score(initial);
    sort_population(&mut pop);
    evaluations += config.population;

    for generation in 0..=config.generations {
        let reset = generation > 0 && config.reset_interval > 0 && generation % config.reset_interval == 0;
        if generation > 0 {
            pop = next_generation(&pop, config, &mut rng, &mut scorer, reset);
            let kept = if reset {
                config.reset_survivors()
            } else {
                config.survivors()
            };
            evaluations += config.population - kept;
        }
        for ind in pop.iter().take(HALL_OFFERS) {
            hall.offer(ind);
        }
        let record = GenerationRecord {
            generation,
            best_score: pop[0].value(),
            best_orbit: pop[0].orbit.clone(),
            evaluations,
            reset,
        };
        observer(&record);
        records.push(record);
        if reached(&pop[0], stop) {
            status = RunStatus::TargetReached;
            break;
        }
    }

    hall.rescore(&fitness.clone().with_profile(ScoringProfile::verification()));
    hall.dedup();
    Ok(RunReport {
        config: config.clone(),
        rng: RNG_NAME.to_string(),
        status,
        generations: records,
        best: pop[0].clone(),
        hall_of_fame: hall,
        evaluations,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

pub fn run(config: &GAConfig, options: &RunOptions) -> Result<RunReport, ConfigError> {
    run_with(config, options, |_| {})
}

/// Best score among uniformly random genomes, recorded at each checkpoint
/// (a cumulative evaluation count). Uses a stream independent of the GA's.
pub fn random_baseline(
    config: &GAConfig,
    checkpoints: &[usize],
    threads: usize,
) -> Result<Vec<BaselinePoint>, ConfigError> {
    config.validate()?;
    let fitness = config.fitness();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ BASELINE_STREAM);
    let mut marks = checkpoints.to_vec();
    marks.sort_unstable();
    marks.dedup();
    let mut best = ScoreValue::Worst;
    let mut done = 0;
    let mut out = Vec::with_capacity(marks.len());
    pool(threads).install(|| {
        for &mark in &marks {
            let batch = (done..mark).map(|_| random_orbit(config, &mut rng)).collect();
            for ind in score_batch(batch, &fitness) {
                best = best.min(ind.value());
            }
            done = done.max(mark);
            out.push(BaselinePoint {
                evaluations: mark,
                best,
            });
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Flavor;
    use crate::fitness::Target;

    fn small(target: Target, seed: u64) -> GAConfig {
        GAConfig {
            map_type: Flavor::Polynomial,
            degree: 2,
            population: 40,
            generations: 15,
            reset_interval: 5,
            bound: 10,
            target,
            orbit_target: None,
            orbit_weights: None,
            seed,
            ..GAConfig::default()
        }
    }

    #[test]
    fn elitism_never_loses_the_best() {
        let config = small(Target::Cycle, 1);
        let report = run(&config, &RunOptions::default()).unwrap();
        let bests: Vec<_> = report.generations.iter().map(|r| r.best_score).collect();
        for (g, w) in report.generations.iter().zip(bests.windows(2)) {
            // A reset keeps the top individuals too, so the best never worsens.
            assert!(w[1] <= w[0], "generation {}", g.generation);
        }
        assert_eq!(report.generations.len(), config.generations + 1);
        assert_eq!(report.status, RunStatus::Completed);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let config = small(Target::Preperiodic, 9);
        let a = run(&config, &RunOptions::default()).unwrap();
        let b = run(
            &config,
            &RunOptions {
                threads: 4,
                ..RunOptions::default()
            },
        )
        .unwrap();
        assert_eq!(a.generations, b.generations);
        assert_eq!(a.hall_of_fame, b.hall_of_fame);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn evaluation_accounting() {
        let config = small(Target::Cycle, 2);
        let report = run(&config, &RunOptions::default()).unwrap();
        let mut expected = config.population;
        for r in &report.generations[1..] {
            let kept = if r.reset {
                config.reset_survivors()
            } else {
                config.survivors()
            };
            expected += config.population - kept;
            assert_eq!(r.evaluations, expected);
        }
        assert_eq!(report.evaluations, expected);
    }

    #[test]
    fn early_stop() {
        let config = GAConfig {
            orbit_target: Some(5.0),
            generations: 200,
            ..small(Target::Cycle, 3)
        };
        let report = run(&config, &RunOptions::default()).unwrap();
        assert_eq!(report.status, RunStatus::TargetReached);
        assert!(report.best.value().finite().unwrap() <= -5.0);
        assert!(report.generations.len() < 201);
    }

    #[test]
    fn step_keeps_survivors_and_size() {
        let config = small(Target::Cycle, 4);
        let fitness = config.fitness();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut pop = score_batch((0..40).map(|_| random_orbit(&config, &mut rng)).collect(), &fitness);
        sort_population(&mut pop);
        let next = step_generation(&pop, &config, &mut rng, &fitness);
        assert_eq!(next.len(), 40);
        for s in &pop[..config.survivors()] {
            assert!(next.contains(s));
        }
        assert!(next.windows(2).all(|w| w[0].score <= w[1].score));
    }

    #[test]
    fn baseline_is_monotone_and_seeded() {
        let config = small(Target::Preperiodic, 5);
        let a = random_baseline(&config, &[10, 50, 100], 1).unwrap();
        let b = random_baseline(&config, &[100, 10, 50], 2).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[1].best <= w[0].best));
        assert_eq!(a.last().unwrap().evaluations, 100);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let config = GAConfig {
            survival: 0.0,
            ..GAConfig::default()
        };
        assert!(run(&config, &RunOptions::default()).is_err());
    }
}
