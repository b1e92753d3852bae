//! Reference engine in Dirac notation.
//!
//! States are sparse superpositions over named modes (`a`, `b`, `u`, `d`,
//! primed variants, or link names for generic circuits). Every optical
//! element acts as a linear map on modes. Beamsplitters follow
//! `|m₁⟩ → (i|n₁⟩ + |n₂⟩)/√2`, `|m₂⟩ → (|n₁⟩ + i|n₂⟩)/√2`.
//!
//! Nothing here looks at paths or clocks, so agreement with the stream
//! engine is a check between two unrelated code paths.

mod circuit;
mod setups;
mod two;

pub use circuit::{circuit_distribution, evolve_circuit, evolve_circuit_pair, pair_distribution};
pub use setups::{
    bghz_state, evolve_bghz, evolve_bghz_with_arm_phases, evolve_ifm, evolve_mz, evolve_wheeler, Arm, ArmPhases,
};
pub use two::{Factor, TwoParticleState};

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

use crate::amplitude::{Amplitude, TOLERANCE};
use crate::circuit::CircuitError;
use crate::outcome::DistributionError;
use crate::streams::StreamError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("mode `{0}` is not in the basis")]
    MissingMode(String),
    #[error("mode `{0}` appears twice in the basis")]
    DuplicateMode(String),
    #[error("output mode `{0}` is already occupied")]
    ModeInUse(String),
    #[error("{labels} labels for {coefficients} coefficients")]
    LengthMismatch { labels: usize, coefficients: usize },
    #[error("state norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// Sparse linear map on modes. Modes without a rule pass through unchanged.
#[derive(Debug, Clone, Default)]
pub(crate) struct ModeMap {
    rules: Vec<(String, Vec<(String, Amplitude)>)>,
}

type Plan = (Vec<String>, Vec<Vec<(usize, Amplitude)>>);

impl ModeMap {
    pub(crate) fn rule(mut self, from: &str, to: Vec<(String, Amplitude)>) -> Self {
        self.rules.push((from.to_string(), to));
        self
    }

    pub(crate) fn beamsplitter(inputs: (&str, &str), outputs: (&str, &str)) -> Self {
        let r = Amplitude::new(0.0, FRAC_1_SQRT_2);
        let t = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        let (n1, n2) = (outputs.0.to_string(), outputs.1.to_string());
        ModeMap::default()
            .rule(inputs.0, vec![(n1.clone(), r), (n2.clone(), t)])
            .rule(inputs.1, vec![(n1, t), (n2, r)])
    }

    pub(crate) fn phase(mode: &str, shift: f64) -> Self {
        ModeMap::default().rule(mode, vec![(mode.to_string(), Amplitude::from_polar(1.0, shift))])
    }

    pub(crate) fn relabel(from: &str, to: &str) -> Self {
        ModeMap::default().rule(from, vec![(to.to_string(), Amplitude::new(1.0, 0.0))])
    }

    /// New label list and, per old label, where its weight goes.
    fn plan(&self, labels: &[String]) -> Result<Plan, HilbertError> {
        let consumed: HashSet<&str> = self.rules.iter().map(|(f, _)| f.as_str()).collect();
        for (from, _) in &self.rules {
            if !labels.contains(from) {
                return Err(HilbertError::MissingMode(from.clone()));
            }
        }
        let mut next: Vec<String> = labels
            .iter()
            .filter(|l| !consumed.contains(l.as_str()))
            .cloned()
            .collect();
        let kept = next.len();
        for (_, outs) in &self.rules {
            for (to, _) in outs {
                if next[..kept].contains(to) {
                    return Err(HilbertError::ModeInUse(to.clone()));
                }
                if !next.contains(to) {
                    next.push(to.clone());
                }
            }
        }
        let index: BTreeMap<&str, usize> = next.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let moves = labels
            .iter()
            .map(|l| match self.rules.iter().find(|(f, _)| f == l) {
                Some((_, outs)) => outs.iter().map(|(to, amp)| (index[to.as_str()], *amp)).collect(),
                None => vec![(index[l.as_str()], Amplitude::new(1.0, 0.0))],
            })
            .collect();
        Ok((next, moves))
    }
}

/// Normalized single-particle state over named modes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<String>,
    coefficients: Vec<Amplitude>,
}

impl StateVector {
    pub fn new(labels: Vec<String>, coefficients: Vec<Amplitude>) -> Result<Self, HilbertError> {
        if labels.len() != coefficients.len() {
            return Err(HilbertError::LengthMismatch {
                labels: labels.len(),
                coefficients: coefficients.len(),
            });
        }
        check_unique(&labels)?;
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(HilbertError::NotNormalized(norm));
        }
        Ok(StateVector { labels, coefficients })
    }

    /// `|mode⟩` alone.
    pub fn basis(mode: &str) -> Self {
        StateVector {
            labels: vec![mode.to_string()],
            coefficients: vec![Amplitude::new(1.0, 0.0)],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coefficients(&self) -> &[Amplitude] {
        &self.coefficients
    }

    pub fn amplitude(&self, mode: &str) -> Option<Amplitude> {
        self.labels.iter().position(|l| l == mode).map(|i| self.coefficients[i])
    }

    pub fn probability(&self, mode: &str) -> f64 {
        self.amplitude(mode).map_or(0.0, |c| c.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        self.labels
            .iter()
            .cloned()
            .zip(self.coefficients.iter().map(|c| c.norm_sqr()))
            .collect()
    }

    /// Adds an empty mode, for a beamsplitter port no particle enters.
    pub fn with_vacuum(&self, mode: &str) -> Result<Self, HilbertError> {
        if self.labels.iter().any(|l| l == mode) {
            return Err(HilbertError::DuplicateMode(mode.to_string()));
        }
        let mut out = self.clone();
        out.labels.push(mode.to_string());
        out.coefficients.push(Amplitude::default());
        Ok(out)
    }

    /// Both input modes must be present (add vacuum first if needed). Output
    /// modes may reuse the input names.
    pub fn apply_beamsplitter(&self, inputs: (&str, &str), outputs: (&str, &str)) -> Result<Self, HilbertError> {
        self.apply(&ModeMap::beamsplitter(inputs, outputs))
    }

    pub fn apply_phase(&self, mode: &str, shift: f64) -> Result<Self, HilbertError> {
        self.apply(&ModeMap::phase(mode, shift))
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self, HilbertError> {
        self.apply(&ModeMap::relabel(from, to))
    }

    /// Projects onto the span of `modes`. Returns the Born probability of
    /// the projection and the renormalized post-measurement state, or `None`
    /// when the probability vanishes.
    pub fn project(&self, modes: &[&str]) -> Result<(f64, Option<Self>), HilbertError> {
        for m in modes {
            if !self.labels.iter().any(|l| l == m) {
                return Err(HilbertError::MissingMode(m.to_string()));
            }
        }
        let kept: Vec<Amplitude> = self
            .labels
            .iter()
            .zip(&self.coefficients)
            .map(|(l, c)| {
                if modes.contains(&l.as_str()) {
                    *c
                } else {
                    Amplitude::default()
                }
            })
            .collect();
        let p: f64 = kept.iter().map(|c| c.norm_sqr()).sum();
        if p == 0.0 {
            return Ok((0.0, None));
        }
        let scale = p.sqrt().recip();
        Ok((
            p,
            Some(StateVector {
                labels: self.labels.clone(),
                coefficients: kept.into_iter().map(|c| c * scale).collect(),
            }),
        ))
    }

    pub(crate) fn apply(&self, map: &ModeMap) -> Result<Self, HilbertError> {
        let (labels, moves) = map.plan(&self.labels)?;
        let mut coefficients = vec![Amplitude::default(); labels.len()];
        for (c, targets) in self.coefficients.iter().zip(&moves) {
            for (j, amp) in targets {
                coefficients[*j] += c * amp;
            }
        }
        Ok(StateVector { labels, coefficients })
    }
}

fn check_unique(labels: &[String]) -> Result<(), HilbertError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(HilbertError::DuplicateMode(l.clone()));
        }
    }
    Ok(())
}
