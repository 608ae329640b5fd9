use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dynforge_bench::{map, orbit, orbits};
use dynforge_core::ga::{random_orbit, score_batch, step_generation};
use dynforge_core::{
    preperiodic_census, sigma_invariants, CensusParams, Flavor, GAConfig, HeightContext, ProjPoint, Target,
};

fn interpolation(c: &mut Criterion) {
    let mut g = c.benchmark_group("interpolation");
    for (name, o) in orbits() {
        g.bench_function(name, |b| b.iter(|| o.to_map().unwrap()));
    }
    g.finish();
}

fn sigma(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma");
    for (name, o) in orbits() {
        let f = map(&o);
        g.bench_function(name, |b| b.iter(|| sigma_invariants(&f)));
    }
    g.finish();
}

fn canonical_height(c: &mut Criterion) {
    let mut g = c.benchmark_group("canonical_height");
    for (name, o) in orbits() {
        let f = map(&o);
        let ctx = HeightContext::new(&f);
        let p = ProjPoint::from_int(7);
        let eps = 1e-6f64.max(ctx.smallest_eps());
        g.bench_function(name, |b| b.iter(|| ctx.canonical_height(&p, eps).unwrap()));
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    for (name, o) in [
        ("poly d2", orbit(&[0, 1, -1, 2], 2, Flavor::Polynomial)),
        ("poly d4", orbit(&[0, -4, 1, -3, -1, -5], 4, Flavor::Polynomial)),
        ("rational d2", orbit(&[0, -1, -3, -6, -2, -4], 2, Flavor::Rational)),
    ] {
        let f = map(&o);
        g.bench_function(name, |b| b.iter(|| preperiodic_census(&f, &CensusParams::default())));
    }
    g.finish();
}

fn ga_generation(c: &mut Criterion) {
    let config = GAConfig {
        map_type: Flavor::Polynomial,
        degree: 2,
        population: 200,
        target: Target::Cycle,
        orbit_weights: None,
        ..GAConfig::default()
    };
    let fitness = config.fitness();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start: Vec<_> = (0..config.population)
        .map(|_| random_orbit(&config, &mut rng))
        .collect();
    let pop = score_batch(start, &fitness);
    let mut g = c.benchmark_group("ga");
    g.sample_size(20);
    g.bench_function("generation poly d2 cycle, population 200", |b| {
        b.iter_batched(
            || ChaCha8Rng::seed_from_u64(2),
            |mut rng| step_generation(&pop, &config, &mut rng, &fitness),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, interpolation, sigma, canonical_height, census, ga_generation);
criterion_main!(benches);
