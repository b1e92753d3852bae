//! Born-rule sampling of outcome distributions.
//!
//! Shots are drawn in fixed-size chunks; chunk `k` uses
//! [`crate::rng::substream`]`(seed, k)`, so results do not depend on the
//! number of worker threads.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::outcome::{Outcome, OutcomeDistribution};
use crate::rng::substream;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("at least one shot is required")]
    NoShots,
}

/// One shot. Outcome and hidden route are indices into the tables of the
/// owning [`SampleSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub shot: u64,
    pub outcome: u32,
    /// Route (or route pair) the tangible particle took, when the
    /// distribution carries contributions.
    pub hidden: Option<u32>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    seed: u64,
    outcomes: Vec<Outcome>,
    hidden_labels: Vec<Vec<String>>,
    records: Vec<SampleRecord>,
    counts: Vec<u64>,
}

impl SampleSet {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn outcome(&self, record: &SampleRecord) -> &Outcome {
        &self.outcomes[record.outcome as usize]
    }

    pub fn hidden(&self, record: &SampleRecord) -> Option<&str> {
        record
            .hidden
            .map(|h| self.hidden_labels[record.outcome as usize][h as usize].as_str())
    }

    pub fn counts(&self) -> BTreeMap<Outcome, u64> {
        self.outcomes.iter().cloned().zip(self.counts.iter().copied()).collect()
    }

    pub fn frequencies(&self) -> BTreeMap<Outcome, f64> {
        let n = self.records.len() as f64;
        self.outcomes
            .iter()
            .cloned()
            .zip(self.counts.iter().map(|&c| c as f64 / n))
            .collect()
    }
}

struct Sampler {
    outcomes: Vec<Outcome>,
    pick: WeightedIndex<f64>,
    hidden: Vec<Option<WeightedIndex<f64>>>,
    hidden_labels: Vec<Vec<String>>,
}

impl Sampler {
    fn new(dist: &OutcomeDistribution) -> Self {
        let outcomes: Vec<Outcome> = dist.outcomes().keys().cloned().collect();
        let weights: Vec<f64> = dist.outcomes().values().map(|p| p.max(0.0)).collect();
        let pick = WeightedIndex::new(&weights).expect("validated distributions have positive mass");
        let mut hidden = Vec::new();
        let mut hidden_labels = Vec::new();
        for o in &outcomes {
            let contributions = dist.contributions(o);
            hidden.push(WeightedIndex::new(contributions.iter().map(|c| c.weight)).ok());
            hidden_labels.push(contributions.iter().map(|c| c.label.clone()).collect());
        }
        Sampler {
            outcomes,
            pick,
            hidden,
            hidden_labels,
        }
    }

    fn chunk(&self, seed: u64, k: u64, shots: u64, keep: bool) -> (Vec<SampleRecord>, Vec<u64>) {
        let mut rng = substream(seed, k);
        let start = k * CHUNK;
        let end = shots.min(start + CHUNK);
        let mut records = Vec::with_capacity(if keep { (end - start) as usize } else { 0 });
        let mut counts = vec![0u64; self.outcomes.len()];
        for shot in start..end {
            let outcome = self.pick.sample(&mut rng);
            let hidden = self.hidden[outcome].as_ref().map(|w| w.sample(&mut rng) as u32);
            counts[outcome] += 1;
            if keep {
                records.push(SampleRecord {
                    shot,
                    outcome: outcome as u32,
                    hidden,
                    seed,
                });
            }
        }
        (records, counts)
    }

    fn run(&self, shots: u64, seed: u64, keep: bool) -> (Vec<SampleRecord>, Vec<u64>) {
        let chunks = shots.div_ceil(CHUNK);
        let parts: Vec<_> = (0..chunks)
            .into_par_iter()
            .map(|k| self.chunk(seed, k, shots, keep))
            .collect();
        let mut records = Vec::with_capacity(if keep { shots as usize } else { 0 });
        let mut counts = vec![0u64; self.outcomes.len()];
        for (r, c) in parts {
            records.extend(r);
            for (total, n) in counts.iter_mut().zip(c) {
                *total += n;
            }
        }
        (records, counts)
    }
}

/// Draws `shots` i.i.d. outcomes, each with a hidden route drawn from the
/// outcome's contributions in proportion to their weights.
pub fn sample(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<SampleSet, SampleError> {
    if shots == 0 {
        return Err(SampleError::NoShots);
    }
    let sampler = Sampler::new(dist);
    let (records, counts) = sampler.run(shots, seed, true);
    Ok(SampleSet {
        seed,
        outcomes: sampler.outcomes,
        hidden_labels: sampler.hidden_labels,
        records,
        counts,
    })
}

/// Outcome counts of [`sample`] with the same arguments, without keeping
/// the records.
pub fn sample_counts(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<BTreeMap<Outcome, u64>, SampleError> {
    if shots == 0 {
        return Err(SampleError::NoShots);
    }
    let sampler = Sampler::new(dist);
    let (_, counts) = sampler.run(shots, seed, false);
    Ok(sampler.outcomes.into_iter().zip(counts).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `counts` against `dist`. Outcomes of zero
/// probability are left out; a count on one of them gives `p = 0`.
pub fn chi_square(dist: &OutcomeDistribution, counts: &BTreeMap<Outcome, u64>) -> ChiSquare {
    let n: u64 = counts.values().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible = false;
    for (o, &c) in counts {
        let expected = dist.probability(o) * n as f64;
        if expected <= 0.0 {
            impossible |= c > 0;
            continue;
        }
        statistic += (c as f64 - expected).powi(2) / expected;
        cells += 1;
    }
    let degrees_of_freedom = cells.saturating_sub(1);
    let p_value = if impossible {
        0.0
    } else if degrees_of_freedom == 0 {
        1.0
    } else {
        let chi = ChiSquared::new(degrees_of_freedom as f64).expect("positive degrees of freedom");
        chi.sf(statistic)
    };
    ChiSquare {
        statistic,
        degrees_of_freedom,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::{Parameters, Provenance};

    fn fair() -> OutcomeDistribution {
        let map = BTreeMap::from([(Outcome::single("u"), 0.5), (Outcome::single("d"), 0.5)]);
        OutcomeDistribution::new(map, Provenance::ClosedForm, Parameters::default()).unwrap()
    }

    #[test]
    fn certain_outcome() {
        let map = BTreeMap::from([(Outcome::single("u"), 1.0), (Outcome::single("d"), 0.0)]);
        let dist = OutcomeDistribution::new(map, Provenance::ClosedForm, Parameters::default()).unwrap();
        let set = sample(&dist, 1000, 4).unwrap();
        assert!(set.records().iter().all(|r| set.outcome(r) == &Outcome::single("u")));
        assert_eq!(chi_square(&dist, &set.counts()).p_value, 1.0);
    }

    #[test]
    fn deterministic_and_count_consistent() {
        let a = sample(&fair(), 200_000, 9).unwrap();
        let b = sample(&fair(), 200_000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts(), sample_counts(&fair(), 200_000, 9).unwrap());
        assert_ne!(a.counts(), sample_counts(&fair(), 200_000, 10).unwrap());
        assert!(sample(&fair(), 0, 1).is_err());
    }

    #[test]
    fn chi_square_flags_impossible_counts() {
        let map = BTreeMap::from([(Outcome::single("u"), 1.0)]);
        let dist = OutcomeDistribution::new(map, Provenance::ClosedForm, Parameters::default()).unwrap();
        let counts = BTreeMap::from([(Outcome::single("u"), 5), (Outcome::single("d"), 1)]);
        assert_eq!(chi_square(&dist, &counts).p_value, 0.0);
    }
}
