//! Fixtures shared by the benchmarks.

use dynforge_core::{DynSystem, Flavor, Orbit};

pub fn orbit(entries: &[i64], degree: usize, flavor: Flavor) -> Orbit {
    Orbit::from_i64s(entries, degree, flavor).expect("valid fixture orbit")
}

/// Orbits of increasing size for both flavors.
pub fn orbits() -> Vec<(&'static str, Orbit)> {
    vec![
        ("poly d2", orbit(&[0, -2, 1, -3], 2, Flavor::Polynomial)),
        ("poly d4", orbit(&[0, 3, 4, 5, 1, -1], 4, Flavor::Polynomial)),
        (
            "poly d7",
            orbit(&[0, -5, 1, -1, -4, 2, 3, 4, -2], 7, Flavor::Polynomial),
        ),
        ("rational d2", orbit(&[0, -1, -16, 4, 8, 2], 2, Flavor::Rational)),
        (
            "rational d4",
            orbit(&[0, 1, 8, 5, -4, -1, -3, -2, 2, 4], 4, Flavor::Rational),
        ),
    ]
}

pub fn map(o: &Orbit) -> DynSystem {
    o.to_map().expect("fixture orbit interpolates")
}
