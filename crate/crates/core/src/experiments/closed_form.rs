//! Textbook answers, used only to check the engines.

use std::collections::BTreeMap;

use crate::amplitude::Amplitude;
use crate::circuit::ABSORBED;
use crate::hilbert::Arm;
use crate::outcome::{Outcome, OutcomeDistribution, Parameters, Provenance};

fn closed(pairs: Vec<(Outcome, f64)>, parameters: Parameters) -> OutcomeDistribution {
    let map: BTreeMap<_, _> = pairs.into_iter().collect();
    OutcomeDistribution::new(map, Provenance::ClosedForm, parameters).expect("closed forms are normalized")
}

/// `P(u) = cos²(α/2)`, `P(d) = sin²(α/2)`.
pub fn mach_zehnder(alpha: f64) -> OutcomeDistribution {
    let c = (alpha / 2.0).cos().powi(2);
    closed(
        vec![(Outcome::single("u"), c), (Outcome::single("d"), 1.0 - c)],
        Parameters::alpha(alpha),
    )
}

/// Detector amplitudes `(u, d)` for initial clock reading `theta`:
/// `½e^{iθ}i(e^{iα}+1)` and `½e^{iθ}(e^{iα}−1)`.
pub fn mach_zehnder_amplitudes(alpha: f64, theta: f64) -> (Amplitude, Amplitude) {
    let clock = Amplitude::from_polar(0.5, theta);
    let shifted = Amplitude::from_polar(1.0, alpha);
    let one = Amplitude::new(1.0, 0.0);
    (clock * Amplitude::i() * (shifted + one), clock * (shifted - one))
}

pub fn wheeler(alpha: f64, peek: bool) -> OutcomeDistribution {
    if peek {
        closed(
            vec![(Outcome::single("u"), 0.5), (Outcome::single("d"), 0.5)],
            Parameters::alpha(alpha),
        )
    } else {
        mach_zehnder(alpha)
    }
}

pub fn ifm(blocked: Option<Arm>) -> OutcomeDistribution {
    let (u, d, absorbed) = match blocked {
        None => (1.0, 0.0, 0.0),
        Some(_) => (0.25, 0.25, 0.5),
    };
    closed(
        vec![
            (Outcome::single("u"), u),
            (Outcome::single("d"), d),
            (Outcome::single(ABSORBED), absorbed),
        ],
        Parameters::default(),
    )
}

/// `½cos²((β−α)/2)` for equal outcomes, `½sin²((β−α)/2)` for unequal ones.
pub fn bghz(alpha: f64, beta: f64) -> OutcomeDistribution {
    let same = 0.5 * ((beta - alpha) / 2.0).cos().powi(2);
    let diff = 0.5 - same;
    closed(
        vec![
            (Outcome::joint("u", "u'"), same),
            (Outcome::joint("d", "d'"), same),
            (Outcome::joint("u", "d'"), diff),
            (Outcome::joint("d", "u'"), diff),
        ],
        Parameters::alpha_beta(alpha, beta),
    )
}

/// `E(α, β) = cos(β − α)`.
pub fn correlation(alpha: f64, beta: f64) -> f64 {
    (beta - alpha).cos()
}
