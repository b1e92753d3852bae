//! The canned interferometers, written directly as sequences of unitaries.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::{Factor, HilbertError, StateVector, TwoParticleState};
use crate::amplitude::Amplitude;
use crate::circuit::ABSORBED;
use crate::outcome::{Outcome, OutcomeDistribution, Parameters, Provenance};

/// One of the two arms between the beamsplitters of a Mach-Zehnder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    A,
    B,
}

impl Arm {
    pub fn mode(self) -> &'static str {
        match self {
            Arm::A => "a",
            Arm::B => "b",
        }
    }
}

/// Extra path-length phases on the four arms of the two-particle
/// interferometer.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmPhases {
    pub a: f64,
    pub b: f64,
    pub a_prime: f64,
    pub b_prime: f64,
}

fn hilbert_distribution(
    probabilities: BTreeMap<Outcome, f64>,
    parameters: Parameters,
) -> Result<OutcomeDistribution, HilbertError> {
    Ok(OutcomeDistribution::new(
        probabilities,
        Provenance::Hilbert,
        parameters,
    )?)
}

/// State inside the interferometer: after the first beamsplitter and the
/// shifter on arm `a`.
fn mz_arms(alpha: f64) -> Result<StateVector, HilbertError> {
    StateVector::basis("s")
        .with_vacuum("v")?
        .apply_beamsplitter(("s", "v"), ("b", "a"))?
        .apply_phase("a", alpha)
}

fn recombine(arms: &StateVector) -> Result<StateVector, HilbertError> {
    arms.apply_beamsplitter(("a", "b"), ("u", "d"))
}

fn single_outcomes(state: &StateVector, labels: &[&str]) -> BTreeMap<Outcome, f64> {
    labels
        .iter()
        .map(|l| (Outcome::single(*l), state.probability(l)))
        .collect()
}

/// Mach-Zehnder with shifter `alpha` on arm `a`.
pub fn evolve_mz(alpha: f64) -> Result<OutcomeDistribution, HilbertError> {
    let out = recombine(&mz_arms(alpha)?)?;
    hilbert_distribution(single_outcomes(&out, &["u", "d"]), Parameters::alpha(alpha))
}

/// Mach-Zehnder where, with `peek`, the arm is measured between the
/// beamsplitters. Each arm outcome is propagated separately and the results
/// are mixed with their Born weights.
pub fn evolve_wheeler(alpha: f64, peek: bool) -> Result<OutcomeDistribution, HilbertError> {
    if !peek {
        return evolve_mz(alpha);
    }
    let arms = mz_arms(alpha)?;
    let mut probabilities: BTreeMap<Outcome, f64> = ["u", "d"].iter().map(|l| (Outcome::single(*l), 0.0)).collect();
    for arm in [Arm::A, Arm::B] {
        let (weight, post) = arms.project(&[arm.mode()])?;
        if let Some(post) = post {
            let out = recombine(&post)?;
            for (o, p) in single_outcomes(&out, &["u", "d"]) {
                *probabilities.entry(o).or_default() += weight * p;
            }
        }
    }
    hilbert_distribution(probabilities, Parameters::alpha(alpha))
}

/// Balanced Mach-Zehnder (`alpha = 0`) with an optional blocker on one arm.
/// The blocked arm's weight moves to the `absorbed` mode and the second
/// beamsplitter sees vacuum on that port.
pub fn evolve_ifm(blocked: Option<Arm>) -> Result<OutcomeDistribution, HilbertError> {
    let arms = mz_arms(0.0)?;
    let arms = match blocked {
        Some(arm) => arms.relabel(arm.mode(), ABSORBED)?.with_vacuum(arm.mode())?,
        None => arms.with_vacuum(ABSORBED)?,
    };
    let out = recombine(&arms)?;
    hilbert_distribution(single_outcomes(&out, &["u", "d", ABSORBED]), Parameters::default())
}

/// `(|a⟩|a'⟩ + |b⟩|b'⟩)/√2`: unprimed modes in the first factor, primed in
/// the second.
pub fn bghz_state() -> TwoParticleState {
    let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
    TwoParticleState::new(
        vec!["a".into(), "b".into()],
        vec!["a'".into(), "b'".into()],
        vec![h, Amplitude::default(), Amplitude::default(), h],
    )
    .expect("fixed state is normalized")
}

pub fn evolve_bghz(alpha: f64, beta: f64) -> Result<OutcomeDistribution, HilbertError> {
    evolve_bghz_with_arm_phases(alpha, beta, ArmPhases::default())
}

/// Two-particle interferometer: shifter `alpha` on `a`, `beta` on `b'`,
/// then `a`, `b` meet at the unprimed beamsplitter and `b'`, `a'` at the
/// primed one.
pub fn evolve_bghz_with_arm_phases(
    alpha: f64,
    beta: f64,
    arms: ArmPhases,
) -> Result<OutcomeDistribution, HilbertError> {
    let out = bghz_state()
        .apply_phase(Factor::First, "a", alpha + arms.a)?
        .apply_phase(Factor::First, "b", arms.b)?
        .apply_phase(Factor::Second, "a'", arms.a_prime)?
        .apply_phase(Factor::Second, "b'", beta + arms.b_prime)?
        .apply_beamsplitter(Factor::First, ("a", "b"), ("u", "d"))?
        .apply_beamsplitter(Factor::Second, ("b'", "a'"), ("u'", "d'"))?;
    let probabilities = out
        .joint_probabilities()
        .into_iter()
        .map(|((f, s), p)| (Outcome::joint(f, s), p))
        .collect();
    hilbert_distribution(probabilities, Parameters::alpha_beta(alpha, beta))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    #[test]
    fn mz_examples() {
        for (alpha, u) in [(0.0, 1.0), (FRAC_PI_2, 0.5), (2.0 * PI / 3.0, 0.25)] {
            let d = evolve_mz(alpha).unwrap();
            assert!((d.single("u") - u).abs() < 1e-12);
            assert!((d.single("d") - (1.0 - u)).abs() < 1e-12);
        }
    }

    #[test]
    fn peeking_destroys_interference() {
        for k in 0..16 {
            let d = evolve_wheeler(k as f64 * 0.4, true).unwrap();
            assert!((d.single("u") - 0.5).abs() < 1e-12);
        }
        assert!((evolve_wheeler(0.0, false).unwrap().single("u") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ifm_accounting() {
        let open = evolve_ifm(None).unwrap();
        assert!((open.single("u") - 1.0).abs() < 1e-12);
        assert_eq!(open.single(ABSORBED), 0.0);
        for arm in [Arm::A, Arm::B] {
            let d = evolve_ifm(Some(arm)).unwrap();
            assert!((d.single(ABSORBED) - 0.5).abs() < 1e-12);
            assert!((d.single("u") - 0.25).abs() < 1e-12);
            assert!((d.single("d") - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn bghz_examples() {
        let d = evolve_bghz(0.3, 0.3).unwrap();
        assert!((d.joint("u", "u'") - 0.5).abs() < 1e-12);
        assert!((d.joint("d", "d'") - 0.5).abs() < 1e-12);
        let d = evolve_bghz(0.1, 0.1 + FRAC_PI_2).unwrap();
        for p in d.outcomes().values() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let s = bghz_state();
        assert_eq!(s.terms().len(), 2);
    }
}
