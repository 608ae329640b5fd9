use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Individual;
use crate::fitness::{Fitness, FitnessScore};
use crate::interpolation::Orbit;
use crate::invariants::{conjugacy_fingerprint, Fingerprint};
use crate::preperiodic::detect_dynamical_compression;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HallEntry {
    pub orbit: Orbit,
    pub score: FitnessScore,
    pub fingerprint: Fingerprint,
    pub dynamical_compression: bool,
}

/// Best individuals, at most one per conjugacy fingerprint, sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HallOfFame {
    capacity: usize,
    entries: Vec<HallEntry>,
}

impl HallOfFame {
    pub fn new(capacity: usize) -> Self {
        HallOfFame {
            capacity,
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[HallEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn admits(&self, ind: &Individual) -> bool {
        if ind.score.value.is_worst() || self.capacity == 0 {
            return false;
        }
        if self.entries.iter().any(|e| e.orbit == ind.orbit) {
            return false;
        }
        self.entries.len() < self.capacity
            || self
                .entries
                .last()
                .is_some_and(|w| (&ind.score, &ind.orbit) < (&w.score, &w.orbit))
    }

    /// Offers an individual; returns whether the hall changed.
    pub fn offer(&mut self, ind: &Individual) -> bool {
        if !self.admits(ind) {
            return false;
        }
        let Ok(f) = ind.orbit.to_map() else {
            return false;
        };
        let fingerprint = ind.fingerprint.unwrap_or_else(|| conjugacy_fingerprint(&f));
        let entry = HallEntry {
            orbit: ind.orbit.clone(),
            score: ind.score.clone(),
            fingerprint,
            dynamical_compression: detect_dynamical_compression(&ind.orbit),
        };
        if let Some(pos) = self.entries.iter().position(|e| e.fingerprint == fingerprint) {
            let old = &self.entries[pos];
            if (&entry.score, &entry.orbit) >= (&old.score, &old.orbit) {
                return false;
            }
            self.entries.remove(pos);
        }
        self.entries.push(entry);
        self.sort();
        self.entries.truncate(self.capacity);
        true
    }

    fn sort(&mut self) {
        self.entries
            .sort_by(|a, b| (&a.score, &a.orbit).cmp(&(&b.score, &b.orbit)));
    }

    /// Re-scores every entry with `fitness` (typically a tighter profile).
    pub fn rescore(&mut self, fitness: &Fitness) {
        for e in &mut self.entries {
            e.score = fitness.score(&e.orbit);
        }
        self.sort();
    }

    /// Merges duplicate fingerprints (keeping the best) after rescoring.
    pub fn dedup(&mut self) {
        let mut best: HashMap<Fingerprint, usize> = HashMap::new();
        let mut keep = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if let std::collections::hash_map::Entry::Vacant(v) = best.entry(e.fingerprint) {
                v.insert(i);
                keep.push(e.clone());
            }
        }
        self.entries = keep;
    }
}
