//! Orbits as genomes, and their interpolation into maps.
//!
//! An orbit `[z0 = 0, z1, z2, ...]` asks for a map with `f(z_i) = z_{i+1}`.
//! A degree-`d` polynomial is pinned down by `d + 1` images (orbit length
//! `d + 2`); a degree-`d` rational map by `2d + 1` images (length `2d + 2`).

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{integer_kernel, solve_exact, Integer, LinalgError};
use crate::dynamics::{DynSystem, Flavor, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("orbit must have length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("orbit must start with 0")]
    LeadingEntryNotZero,
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("source point {0} appears more than once")]
    DuplicateSourcePoint(Integer),
    #[error("interpolating polynomial has degree below {0}")]
    DegenerateDegree(usize),
    #[error("interpolation system is inconsistent")]
    InconsistentSystem,
    #[error("solution space has dimension {0}, expected 1")]
    KernelDimensionNotOne(usize),
    #[error("interpolated pair is not a morphism of the requested degree")]
    DegenerateMap,
}

/// Orbit length required for a degree and flavor.
pub fn orbit_length(degree: usize, flavor: Flavor) -> usize {
    match flavor {
        Flavor::Polynomial => degree + 2,
        Flavor::Rational => 2 * degree + 2,
    }
}

/// A validated orbit genome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "OrbitRecord", into = "OrbitRecord")]
pub struct Orbit {
    entries: Vec<Integer>,
    degree: usize,
    flavor: Flavor,
}

#[derive(Serialize, Deserialize)]
struct OrbitRecord {
    entries: Vec<String>,
    degree: usize,
    flavor: Flavor,
}

impl From<Orbit> for OrbitRecord {
    fn from(o: Orbit) -> Self {
        OrbitRecord {
            entries: o.entries.iter().map(ToString::to_string).collect(),
            degree: o.degree,
            flavor: o.flavor,
        }
    }
}

impl TryFrom<OrbitRecord> for Orbit {
    type Error = String;

    fn try_from(r: OrbitRecord) -> Result<Self, String> {
        let entries = r
            .entries
            .iter()
            .map(|s| s.trim().parse::<Integer>().map_err(|_| format!("bad entry {s:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        validate_orbit(entries, r.degree, r.flavor).map_err(|e| e.to_string())
    }
}

impl Orbit {
    pub fn new(entries: Vec<Integer>, degree: usize, flavor: Flavor) -> Result<Self, InterpolationError> {
        validate_orbit(entries, degree, flavor)
    }

    pub fn from_i64s(entries: &[i64], degree: usize, flavor: Flavor) -> Result<Self, InterpolationError> {
        validate_orbit(entries.iter().map(|&e| e.into()).collect(), degree, flavor)
    }

    /// Skips the distinct-source check; recombination can produce such
    /// genomes, and they fail at interpolation instead.
    pub(crate) fn genome(entries: Vec<Integer>, degree: usize, flavor: Flavor) -> Self {
        debug_assert_eq!(entries.len(), orbit_length(degree, flavor));
        debug_assert!(entries[0].is_zero());
        Orbit {
            entries,
            degree,
            flavor,
        }
    }

    /// Whether the polynomial source points `entries[0..=d]` are distinct.
    pub fn has_distinct_sources(&self) -> bool {
        let mut seen = HashSet::new();
        self.entries[..=self.degree].iter().all(|e| seen.insert(e))
    }

    pub fn entries(&self) -> &[Integer] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The orbit entries as points.
    pub fn points(&self) -> Vec<ProjPoint> {
        self.entries.iter().cloned().map(ProjPoint::from_int).collect()
    }

    /// Interpolates the map for this orbit's flavor.
    pub fn to_map(&self) -> Result<DynSystem, InterpolationError> {
        match self.flavor {
            Flavor::Polynomial => orbit_to_map_polynomial(self),
            Flavor::Rational => orbit_to_map_rational(self),
        }
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// Checks length, the leading zero, and (for polynomials) distinct source points.
pub fn validate_orbit(entries: Vec<Integer>, degree: usize, flavor: Flavor) -> Result<Orbit, InterpolationError> {
    if degree < 2 {
        return Err(InterpolationError::DegreeTooSmall(degree));
    }
    let expected = orbit_length(degree, flavor);
    if entries.len() != expected {
        return Err(InterpolationError::WrongLength {
            expected,
            got: entries.len(),
        });
    }
    if !entries[0].is_zero() {
        return Err(InterpolationError::LeadingEntryNotZero);
    }
    if flavor == Flavor::Polynomial {
        let mut seen = HashSet::new();
        for e in &entries[..=degree] {
            if !seen.insert(e) {
                return Err(InterpolationError::DuplicateSourcePoint(e.clone()));
            }
        }
    }
    Ok(Orbit {
        entries,
        degree,
        flavor,
    })
}

/// The unique degree-`d` polynomial through the orbit's `d + 1` images.
pub fn orbit_to_map_polynomial(orbit: &Orbit) -> Result<DynSystem, InterpolationError> {
    let d = orbit.degree;
    let src = &orbit.entries[..=d];
    let dst = &orbit.entries[1..=d + 1];
    let vandermonde: Vec<Vec<Integer>> = src
        .iter()
        .map(|z| {
            let mut row = Vec::with_capacity(d + 1);
            let mut p = Integer::one();
            for _ in 0..=d {
                row.push(p.clone());
                p *= z;
            }
            row
        })
        .collect();
    let coeffs = solve_exact(&vandermonde, dst).map_err(|e| match e {
        LinalgError::Singular => {
            let mut seen = HashSet::new();
            let dup = src.iter().find(|z| !seen.insert(*z)).cloned();
            dup.map_or(
                InterpolationError::InconsistentSystem,
                InterpolationError::DuplicateSourcePoint,
            )
        }
        LinalgError::Dimension => InterpolationError::InconsistentSystem,
    })?;
    if coeffs[d].is_zero() {
        return Err(InterpolationError::DegenerateDegree(d));
    }
    let lcm = coeffs.iter().fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
    let f0: Vec<Integer> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut f1 = vec![Integer::zero(); d + 1];
    f1[0] = lcm;
    DynSystem::new(f0, f1).map_err(|_| InterpolationError::DegenerateDegree(d))
}

/// The degree-`d` rational map through the orbit's `2d + 1` images, when unique.
pub fn orbit_to_map_rational(orbit: &Orbit) -> Result<DynSystem, InterpolationError> {
    let d = orbit.degree;
    let n = orbit.entries.len() - 1;
    // Unknowns a_0..a_d (numerator) then b_0..b_d (denominator).
    let rows: Vec<Vec<Integer>> = (0..n)
        .map(|i| {
            let z = &orbit.entries[i];
            let w = &orbit.entries[i + 1];
            let mut row = vec![Integer::zero(); 2 * d + 2];
            let mut p = Integer::one();
            for j in 0..=d {
                row[d + 1 + j] = -(w * &p);
                row[j] = p.clone();
                p *= z;
            }
            row
        })
        .collect();
    let kernel = integer_kernel(&rows, 2 * d + 2).map_err(|_| InterpolationError::InconsistentSystem)?;
    if kernel.basis.len() != 1 {
        return Err(InterpolationError::KernelDimensionNotOne(kernel.basis.len()));
    }
    let v = &kernel.basis[0];
    DynSystem::new(v[..=d].to_vec(), v[d + 1..].to_vec()).map_err(|_| InterpolationError::DegenerateMap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(e: &[i64], d: usize) -> Result<DynSystem, InterpolationError> {
        Orbit::from_i64s(e, d, Flavor::Polynomial)?.to_map()
    }

    fn rat(e: &[i64], d: usize) -> Result<DynSystem, InterpolationError> {
        Orbit::from_i64s(e, d, Flavor::Rational)?.to_map()
    }

    #[test]
    fn polynomial_examples() {
        let f = poly(&[0, -2, 1, -3], 2).unwrap();
        assert_eq!(f.display_affine(), "1/6z^2 - 7/6z - 2");
        assert_eq!(f.flavor(), Flavor::Polynomial);
    }

    #[test]
    fn degree_four_example() {
        // f(0)=3, f(3)=4, f(4)=5, f(5)=1, f(1)=-1; shift by conjugation is not
        // needed because the orbit itself starts at 0 -> 3.
        let f = poly(&[0, 3, 4, 5, 1, -1], 4).unwrap();
        assert_eq!(
            f,
            DynSystem::from_i64s(&[90, -257, 164, -28, 1], &[30, 0, 0, 0, 0]).unwrap()
        );
    }

    #[test]
    fn polynomial_errors() {
        assert_eq!(
            Orbit::from_i64s(&[0, 1, 1, 2], 2, Flavor::Polynomial),
            Err(InterpolationError::DuplicateSourcePoint(1.into()))
        );
        // Collinear data: 0 -> 1 -> 2 -> 3 is z + 1.
        assert_eq!(poly(&[0, 1, 2, 3], 2), Err(InterpolationError::DegenerateDegree(2)));
    }

    #[test]
    fn validation() {
        assert!(Orbit::from_i64s(&[0, -2, 1, -3], 2, Flavor::Polynomial).is_ok());
        assert_eq!(
            Orbit::from_i64s(&[1, 2, 3, 4], 2, Flavor::Polynomial),
            Err(InterpolationError::LeadingEntryNotZero)
        );
        assert_eq!(
            Orbit::from_i64s(&[0, 1, 2, 3, 4], 2, Flavor::Polynomial),
            Err(InterpolationError::WrongLength { expected: 4, got: 5 })
        );
        // Repeated values are legitimate in rational orbits.
        assert!(Orbit::from_i64s(&[0, 1, 0, 1, 2, 3], 2, Flavor::Rational).is_ok());
    }

    #[test]
    fn rational_examples() {
        let f = rat(&[0, -1, -16, 4, 8, 2], 2).unwrap();
        assert_eq!(
            f,
            DynSystem::from_i64s(&[1024, -3424, 592], &[-1024, -536, 173]).unwrap()
        );
        let g = rat(&[0, -1, -3, -6, -2, -4], 2).unwrap();
        assert_eq!(g, DynSystem::from_i64s(&[-6, 31, 7], &[6, -6, -2]).unwrap());
    }

    #[test]
    fn rational_degenerate() {
        // Data from the degree-1 map z -> z - 1 lies on the family
        // (z - 1)(z - c) / (z - c) for every c: a 2-dimensional kernel.
        assert_eq!(
            rat(&[0, -1, -2, -3, -4, -5], 2),
            Err(InterpolationError::KernelDimensionNotOne(2))
        );
        // Four images lie on z + 1, so (z + 1)(z - 4) / (z - 4) is the only
        // solution: F0 and F1 share the root 4.
        assert_eq!(rat(&[0, 1, 2, 3, 4, 7], 2), Err(InterpolationError::DegenerateMap));
    }

    #[test]
    fn round_trip() {
        for (e, d, fl) in [
            (vec![0, -2, 1, -3], 2, Flavor::Polynomial),
            (vec![0, 3, 4, 5, 1, -1], 4, Flavor::Polynomial),
            (vec![0, -1, -16, 4, 8, 2], 2, Flavor::Rational),
            (vec![0, -1, -3, -6, -2, -4], 2, Flavor::Rational),
        ] {
            let o = Orbit::from_i64s(&e, d, fl).unwrap();
            let f = o.to_map().unwrap();
            assert_eq!(f.iterate(&ProjPoint::from_int(0), o.len() - 1), o.points());
        }
    }

    #[test]
    fn serde_round_trip() {
        let o = Orbit::from_i64s(&[0, -2, 1, -3], 2, Flavor::Polynomial).unwrap();
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<Orbit>(&s).unwrap(), o);
        assert!(serde_json::from_str::<Orbit>(&s.replace("\"0\"", "\"5\"")).is_err());
    }
}
