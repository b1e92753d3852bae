//! Bell/CHSH analysis of the two-particle interferometer.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampling::sample_counts;
use super::{run_bghz, Engine, ExperimentError};
use crate::outcome::{Outcome, OutcomeDistribution};
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshAngles {
    /// Settings `(a, b), (a, b'), (a', b), (a', b')`, in correlator order.
    pub fn settings(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

/// Signs applied to the four correlators, in [`ChshAngles::settings`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSigns(pub [f64; 4]);

impl Default for ChshSigns {
    /// `S = E(a,b) − E(a,b') + E(a',b) + E(a',b')`.
    fn default() -> Self {
        ChshSigns([1.0, -1.0, 1.0, 1.0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    pub angles: ChshAngles,
    pub signs: ChshSigns,
    pub correlators: [f64; 4],
    pub s: f64,
    pub violation: bool,
}

impl ChshReport {
    fn new(angles: ChshAngles, signs: ChshSigns, correlators: [f64; 4]) -> Self {
        let s: f64 = signs.0.iter().zip(&correlators).map(|(k, e)| k * e).sum();
        ChshReport {
            angles,
            signs,
            correlators,
            s,
            violation: s.abs() > 2.0,
        }
    }
}

/// `E = P(u,u') + P(d,d') − P(u,d') − P(d,u')`.
pub fn correlator(dist: &OutcomeDistribution) -> f64 {
    dist.joint("u", "u'") + dist.joint("d", "d'") - dist.joint("u", "d'") - dist.joint("d", "u'")
}

pub fn chsh(angles: ChshAngles, engine: Engine) -> Result<ChshReport, ExperimentError> {
    chsh_with_signs(angles, ChshSigns::default(), engine)
}

pub fn chsh_with_signs(angles: ChshAngles, signs: ChshSigns, engine: Engine) -> Result<ChshReport, ExperimentError> {
    let mut correlators = [0.0; 4];
    for (e, (alpha, beta)) in correlators.iter_mut().zip(angles.settings()) {
        *e = correlator(&run_bghz(alpha, beta, engine)?);
    }
    Ok(ChshReport::new(angles, signs, correlators))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloChsh {
    pub report: ChshReport,
    pub shots_per_setting: u64,
    /// Binomial standard error of each estimated correlator,
    /// `√((1 − E²)/n)`.
    pub correlator_errors: [f64; 4],
    pub s_error: f64,
}

/// Estimates every correlator from `shots` coincidence samples per setting.
/// Setting `k` samples with a seed drawn from substream `k` of `seed`.
pub fn chsh_monte_carlo(
    angles: ChshAngles,
    signs: ChshSigns,
    engine: Engine,
    shots: u64,
    seed: u64,
) -> Result<MonteCarloChsh, ExperimentError> {
    let mut correlators = [0.0; 4];
    let mut correlator_errors = [0.0; 4];
    for (k, (alpha, beta)) in angles.settings().into_iter().enumerate() {
        let dist = run_bghz(alpha, beta, engine)?;
        let setting_seed: u64 = substream(seed, k as u64).gen();
        let counts = sample_counts(&dist, shots, setting_seed)?;
        let get = |a: &str, b: &str| counts.get(&Outcome::joint(a, b)).copied().unwrap_or(0) as f64;
        let e = (get("u", "u'") + get("d", "d'") - get("u", "d'") - get("d", "u'")) / shots as f64;
        correlators[k] = e;
        correlator_errors[k] = ((1.0 - e * e).max(0.0) / shots as f64).sqrt();
    }
    let s_error = correlator_errors.iter().map(|s| s * s).sum::<f64>().sqrt();
    Ok(MonteCarloChsh {
        report: ChshReport::new(angles, signs, correlators),
        shots_per_setting: shots,
        correlator_errors,
        s_error,
    })
}
