//! Normalized outcome distributions with engine provenance.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amplitude::{Amplitude, TOLERANCE};
use crate::circuit::{Circuit, ElementKind};
use crate::streams::TerminalPair;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Single(String),
    /// Coincidence of two detectors, unprimed side first.
    Joint(String, String),
}

impl Outcome {
    pub fn single(label: impl Into<String>) -> Self {
        Outcome::Single(label.into())
    }

    pub fn joint(first: impl Into<String>, second: impl Into<String>) -> Self {
        Outcome::Joint(first.into(), second.into())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Single(l) => f.write_str(l),
            Outcome::Joint(a, b) => write!(f, "{a},{b}"),
        }
    }
}

/// Which engine produced a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Streams,
    Hilbert,
    ClosedForm,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Streams => "streams",
            Provenance::Hilbert => "hilbert",
            Provenance::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub seed: Option<u64>,
}

impl Parameters {
    pub fn alpha(alpha: f64) -> Self {
        Parameters {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn alpha_beta(alpha: f64, beta: f64) -> Self {
        Parameters {
            alpha: Some(alpha),
            beta: Some(beta),
            seed: None,
        }
    }
}

/// A route (or pair of routes) that feeds an outcome, with its squared
/// modulus as weight. Used to narrate which route the tangible particle took.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub label: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("probability of `{outcome}` is {probability}, outside [0, 1]")]
    OutOfRange { outcome: String, probability: f64 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("distribution has no outcomes")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    outcomes: BTreeMap<Outcome, f64>,
    provenance: Provenance,
    parameters: Parameters,
    contributions: BTreeMap<Outcome, Vec<Contribution>>,
}

impl OutcomeDistribution {
    /// Validates that every probability lies in `[0, 1]` and that they sum to
    /// one, both within [`TOLERANCE`].
    pub fn new(
        outcomes: BTreeMap<Outcome, f64>,
        provenance: Provenance,
        parameters: Parameters,
    ) -> Result<Self, DistributionError> {
        if outcomes.is_empty() {
            return Err(DistributionError::Empty);
        }
        for (o, &p) in &outcomes {
            if !(p.is_finite() && (-TOLERANCE..=1.0 + TOLERANCE).contains(&p)) {
                return Err(DistributionError::OutOfRange {
                    outcome: o.to_string(),
                    probability: p,
                });
            }
        }
        let total: f64 = outcomes.values().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(DistributionError::NotNormalized(total));
        }
        Ok(OutcomeDistribution {
            outcomes,
            provenance,
            parameters,
            contributions: BTreeMap::new(),
        })
    }

    pub fn with_contributions(mut self, contributions: BTreeMap<Outcome, Vec<Contribution>>) -> Self {
        self.contributions = contributions;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.parameters.seed = Some(seed);
        self
    }

    pub fn outcomes(&self) -> &BTreeMap<Outcome, f64> {
        &self.outcomes
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn parameters(&self) -> &Parameters {
        &self.parameters
    }

    pub fn contributions(&self, outcome: &Outcome) -> &[Contribution] {
        self.contributions.get(outcome).map_or(&[], Vec::as_slice)
    }

    /// Probability of an outcome; zero when it is not listed.
    pub fn probability(&self, outcome: &Outcome) -> f64 {
        self.outcomes.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn single(&self, label: &str) -> f64 {
        self.probability(&Outcome::single(label))
    }

    pub fn joint(&self, first: &str, second: &str) -> f64 {
        self.probability(&Outcome::joint(first, second))
    }

    pub fn total(&self) -> f64 {
        self.outcomes.values().sum()
    }

    /// Largest pointwise difference over the union of both outcome sets.
    pub fn max_abs_difference(&self, other: &OutcomeDistribution) -> f64 {
        self.outcomes
            .keys()
            .chain(other.outcomes.keys())
            .map(|o| (self.probability(o) - other.probability(o)).abs())
            .fold(0.0, f64::max)
    }
}

/// Born probabilities per outcome label from amplitudes per terminal id.
/// Distinct terminals sharing a label (every blocker reads `absorbed`) add
/// as probabilities, not amplitudes.
pub fn label_probabilities(circuit: &Circuit, amplitudes: &BTreeMap<String, Amplitude>) -> BTreeMap<Outcome, f64> {
    let mut out = BTreeMap::new();
    for (id, kind) in circuit.terminals() {
        let label = kind.outcome_label().unwrap_or(id.as_str());
        let p = amplitudes.get(id).map_or(0.0, |a| a.norm_sqr());
        *out.entry(Outcome::single(label)).or_insert(0.0) += p;
    }
    out
}

/// Joint outcome probabilities from amplitudes per unordered terminal pair.
/// A terminal listed in `first_side` is named first; otherwise the pair's
/// id order is kept.
pub fn pair_probabilities(
    circuit: &Circuit,
    amplitudes: &BTreeMap<TerminalPair, Amplitude>,
    first_side: &[&str],
) -> BTreeMap<Outcome, f64> {
    let label = |id: &str| {
        circuit
            .element(id)
            .and_then(ElementKind::outcome_label)
            .unwrap_or(id)
            .to_string()
    };
    let mut out = BTreeMap::new();
    for (pair, amp) in amplitudes {
        let (x, y) = pair.ids();
        let (x, y) = if first_side.contains(&y) && !first_side.contains(&x) {
            (y, x)
        } else {
            (x, y)
        };
        *out.entry(Outcome::joint(label(x), label(y))).or_insert(0.0) += amp.norm_sqr();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(&str, f64)]) -> Result<OutcomeDistribution, DistributionError> {
        let map = pairs.iter().map(|(l, p)| (Outcome::single(*l), *p)).collect();
        OutcomeDistribution::new(map, Provenance::ClosedForm, Parameters::default())
    }

    #[test]
    fn validates() {
        assert!(dist(&[("u", 0.25), ("d", 0.75)]).is_ok());
        assert!(matches!(dist(&[("u", 0.5)]), Err(DistributionError::NotNormalized(_))));
        assert!(matches!(
            dist(&[("u", 1.5), ("d", -0.5)]),
            Err(DistributionError::OutOfRange { .. })
        ));
        assert!(matches!(dist(&[]), Err(DistributionError::Empty)));
    }

    #[test]
    fn differences_cover_missing_outcomes() {
        let a = dist(&[("u", 1.0)]).unwrap();
        let b = dist(&[("u", 0.5), ("d", 0.5)]).unwrap();
        assert_eq!(a.max_abs_difference(&b), 0.5);
        assert_eq!(a.single("d"), 0.0);
        assert_eq!(Outcome::joint("u", "d'").to_string(), "u,d'");
    }
}
