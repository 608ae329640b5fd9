use rand::seq::SliceRandom;
use rand::Rng;

use super::{GAConfig, MixingMethod, MutationMethod};
use crate::arith::Integer;
use crate::dynamics::Flavor;
use crate::interpolation::{orbit_length, Orbit};

fn gene<R: Rng + ?Sized>(bound: i64, rng: &mut R) -> Integer {
    Integer::from(rng.random_range(-bound..=bound))
}

// Resamples polynomial source genes until they are pairwise distinct.
fn normalize<R: Rng + ?Sized>(entries: &mut [Integer], config: &GAConfig, rng: &mut R) {
    if !config.normalize_orbit || config.map_type != Flavor::Polynomial {
        return;
    }
    let d = config.degree;
    for i in 1..=d {
        while entries[..i].contains(&entries[i]) {
            entries[i] = gene(config.bound, rng);
        }
    }
}

/// A uniformly random genome: leading 0, genes in `[-bound, bound]`.
/// `config` must pass [`GAConfig::validate`] or normalization cannot finish.
pub fn random_orbit<R: Rng + ?Sized>(config: &GAConfig, rng: &mut R) -> Orbit {
    let len = orbit_length(config.degree, config.map_type);
    let mut entries = vec![Integer::from(0)];
    entries.extend((1..len).map(|_| gene(config.bound, rng)));
    normalize(&mut entries, config, rng);
    Orbit::genome(entries, config.degree, config.map_type)
}

fn with_tail(template: &Orbit, tail: Vec<Integer>) -> Orbit {
    let mut entries = Vec::with_capacity(tail.len() + 1);
    entries.push(Integer::from(0));
    entries.extend(tail);
    Orbit::genome(entries, template.degree(), template.flavor())
}

/// Swaps the second halves of the tails (split at `floor(L / 2)`).
pub fn crossover<R: Rng + ?Sized>(o1: &Orbit, o2: &Orbit, _rng: &mut R) -> (Orbit, Orbit) {
    let (t1, t2) = (&o1.entries()[1..], &o2.entries()[1..]);
    let half = t1.len() / 2;
    let c1 = t1[..half].iter().chain(&t2[half..]).cloned().collect();
    let c2 = t2[..half].iter().chain(&t1[half..]).cloned().collect();
    (with_tail(o1, c1), with_tail(o2, c2))
}

/// Shuffles the concatenated tails and splits them in two.
pub fn permutation_mix<R: Rng + ?Sized>(o1: &Orbit, o2: &Orbit, rng: &mut R) -> (Orbit, Orbit) {
    let mut genes: Vec<Integer> = o1.entries()[1..].iter().chain(&o2.entries()[1..]).cloned().collect();
    genes.shuffle(rng);
    let second = genes.split_off(genes.len() / 2);
    (with_tail(o1, genes), with_tail(o2, second))
}

/// Applies the configured mixing method.
pub fn recombine<R: Rng + ?Sized>(o1: &Orbit, o2: &Orbit, config: &GAConfig, rng: &mut R) -> (Orbit, Orbit) {
    match config.mixing_method {
        MixingMethod::Crossover => crossover(o1, o2, rng),
        MixingMethod::Permutation => permutation_mix(o1, o2, rng),
    }
}

/// Replaces genes with fresh values in `[-bound, bound]`; the leading 0 stays.
pub fn mutate<R: Rng + ?Sized>(orbit: &Orbit, config: &GAConfig, rng: &mut R) -> Orbit {
    let mut entries = orbit.entries().to_vec();
    match config.mutation_method {
        MutationMethod::All => {
            for e in entries.iter_mut().skip(1) {
                if rng.random_bool(config.mutation_rate) {
                    *e = gene(config.bound, rng);
                }
            }
        }
        MutationMethod::Single => {
            if rng.random_bool(config.mutation_rate) {
                let i = rng.random_range(1..entries.len());
                entries[i] = gene(config.bound, rng);
            }
        }
    }
    normalize(&mut entries, config, rng);
    Orbit::genome(entries, orbit.degree(), orbit.flavor())
}
