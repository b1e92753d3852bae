//! Two-particle states on a tensor basis.

use std::collections::BTreeMap;

use super::{check_unique, HilbertError, ModeMap};
use crate::amplitude::{Amplitude, TOLERANCE};

/// Which tensor factor an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Normalized state over `first ⊗ second`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    first: Vec<String>,
    second: Vec<String>,
    coefficients: Vec<Amplitude>,
}

impl TwoParticleState {
    pub fn new(first: Vec<String>, second: Vec<String>, coefficients: Vec<Amplitude>) -> Result<Self, HilbertError> {
        if first.len() * second.len() != coefficients.len() {
            return Err(HilbertError::LengthMismatch {
                labels: first.len() * second.len(),
                coefficients: coefficients.len(),
            });
        }
        check_unique(&first)?;
        check_unique(&second)?;
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(HilbertError::NotNormalized(norm));
        }
        Ok(TwoParticleState {
            first,
            second,
            coefficients,
        })
    }

    /// Builds a state from its nonzero terms `(first mode, second mode, c)`.
    pub fn from_terms(terms: &[(&str, &str, Amplitude)]) -> Result<Self, HilbertError> {
        let mut first: Vec<String> = Vec::new();
        let mut second: Vec<String> = Vec::new();
        for (f, s, _) in terms {
            if !first.iter().any(|x| x == f) {
                first.push(f.to_string());
            }
            if !second.iter().any(|x| x == s) {
                second.push(s.to_string());
            }
        }
        let mut coefficients = vec![Amplitude::default(); first.len() * second.len()];
        for (f, s, c) in terms {
            let i = first.iter().position(|x| x == f).unwrap_or_default();
            let j = second.iter().position(|x| x == s).unwrap_or_default();
            coefficients[i * second.len() + j] += c;
        }
        TwoParticleState::new(first, second, coefficients)
    }

    pub fn first_labels(&self) -> &[String] {
        &self.first
    }

    pub fn second_labels(&self) -> &[String] {
        &self.second
    }

    pub fn amplitude(&self, first: &str, second: &str) -> Option<Amplitude> {
        let i = self.first.iter().position(|l| l == first)?;
        let j = self.second.iter().position(|l| l == second)?;
        Some(self.coefficients[i * self.second.len() + j])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Nonzero coefficients with their mode pair.
    pub fn terms(&self) -> Vec<(&str, &str, Amplitude)> {
        let n = self.second.len();
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(k, c)| (self.first[k / n].as_str(), self.second[k % n].as_str(), *c))
            .collect()
    }

    pub fn joint_probabilities(&self) -> BTreeMap<(String, String), f64> {
        let n = self.second.len();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| ((self.first[k / n].clone(), self.second[k % n].clone()), c.norm_sqr()))
            .collect()
    }

    pub fn with_vacuum(&self, factor: Factor, mode: &str) -> Result<Self, HilbertError> {
        let labels = match factor {
            Factor::First => &self.first,
            Factor::Second => &self.second,
        };
        if labels.iter().any(|l| l == mode) {
            return Err(HilbertError::DuplicateMode(mode.to_string()));
        }
        let mut out = self.clone();
        match factor {
            Factor::First => {
                out.first.push(mode.to_string());
                out.coefficients.extend(vec![Amplitude::default(); self.second.len()]);
            }
            Factor::Second => {
                out.second.push(mode.to_string());
                let n = self.second.len();
                out.coefficients = self
                    .coefficients
                    .chunks(n.max(1))
                    .flat_map(|row| row.iter().copied().chain(std::iter::once(Amplitude::default())))
                    .collect();
            }
        }
        Ok(out)
    }

    pub fn apply_beamsplitter(
        &self,
        factor: Factor,
        inputs: (&str, &str),
        outputs: (&str, &str),
    ) -> Result<Self, HilbertError> {
        self.apply(factor, &ModeMap::beamsplitter(inputs, outputs))
    }

    pub fn apply_phase(&self, factor: Factor, mode: &str, shift: f64) -> Result<Self, HilbertError> {
        self.apply(factor, &ModeMap::phase(mode, shift))
    }

    pub(crate) fn apply(&self, factor: Factor, map: &ModeMap) -> Result<Self, HilbertError> {
        let n = self.second.len();
        match factor {
            Factor::First => {
                let (first, moves) = map.plan(&self.first)?;
                let mut coefficients = vec![Amplitude::default(); first.len() * n];
                for (i, targets) in moves.iter().enumerate() {
                    for (ni, amp) in targets {
                        for j in 0..n {
                            coefficients[ni * n + j] += self.coefficients[i * n + j] * amp;
                        }
                    }
                }
                Ok(TwoParticleState {
                    first,
                    second: self.second.clone(),
                    coefficients,
                })
            }
            Factor::Second => {
                let (second, moves) = map.plan(&self.second)?;
                let m = second.len();
                let mut coefficients = vec![Amplitude::default(); self.first.len() * m];
                for i in 0..self.first.len() {
                    for (j, targets) in moves.iter().enumerate() {
                        for (nj, amp) in targets {
                            coefficients[i * m + nj] += self.coefficients[i * n + j] * amp;
                        }
                    }
                }
                Ok(TwoParticleState {
                    first: self.first.clone(),
                    second,
                    coefficients,
                })
            }
        }
    }

    /// Applies the same single-particle map to both factors.
    pub(crate) fn apply_both(&self, map: &ModeMap) -> Result<Self, HilbertError> {
        self.apply(Factor::First, map)?.apply(Factor::Second, map)
    }
}
