//! Canned experiments, each runnable on either engine.
//!
//! The stream engine evaluates the circuits in [`setups`] path by path; the
//! Hilbert engine runs the hand-written unitary sequences of
//! [`crate::hilbert`]. Both return an [`OutcomeDistribution`] tagged with
//! its provenance.

mod chsh;
pub mod closed_form;
mod export;
mod sampling;
pub mod setups;

pub use chsh::{
    chsh, chsh_monte_carlo, chsh_with_signs, correlator, ChshAngles, ChshReport, ChshSigns, MonteCarloChsh,
};
pub use export::{format_significant, metadata_lines, write_csv, write_json, Metadata, ResultRow};
pub use sampling::{chi_square, sample, sample_counts, ChiSquare, SampleError, SampleRecord, SampleSet};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, ABSORBED};
use crate::hilbert::{self, HilbertError};
pub use crate::hilbert::{Arm, ArmPhases};
use crate::outcome::{
    label_probabilities, pair_probabilities, Contribution, DistributionError, Outcome, OutcomeDistribution, Parameters,
    Provenance,
};
use crate::streams::{
    build_stream, joint_terms, marked_terminal_probabilities, stream_terminal_amplitudes, ShadowStream, StreamError,
    StreamPair,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Which engine computes a distribution. The stream engine's seed fixes the
/// initial clock reading and the tangible route; probabilities do not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Streams { seed: u64 },
    Hilbert,
}

impl Engine {
    pub fn streams(seed: u64) -> Self {
        Engine::Streams { seed }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            Engine::Streams { .. } => Provenance::Streams,
            Engine::Hilbert => Provenance::Hilbert,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Engine::Streams { seed } => Some(*seed),
            Engine::Hilbert => None,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.provenance().fmt(f)
    }
}

/// Members grouped by the outcome label of their terminal, weighted by
/// their own Born weight.
fn stream_contributions(circuit: &Circuit, stream: &ShadowStream) -> BTreeMap<Outcome, Vec<Contribution>> {
    let mut out: BTreeMap<Outcome, Vec<Contribution>> = BTreeMap::new();
    for m in stream.members() {
        let label = circuit
            .element(&m.path.terminal)
            .and_then(|k| k.outcome_label())
            .unwrap_or(&m.path.terminal);
        out.entry(Outcome::single(label)).or_default().push(Contribution {
            label: m.path.label(),
            weight: m.amplitude.norm_sqr(),
        });
    }
    out
}

fn stream_distribution(
    circuit: &Circuit,
    source: &str,
    seed: u64,
    parameters: Parameters,
    probabilities: impl FnOnce(&ShadowStream) -> BTreeMap<Outcome, f64>,
) -> Result<OutcomeDistribution, ExperimentError> {
    let stream = build_stream(circuit, source, seed)?;
    let dist = OutcomeDistribution::new(probabilities(&stream), Provenance::Streams, parameters)?
        .with_contributions(stream_contributions(circuit, &stream))
        .with_seed(seed);
    Ok(dist)
}

/// Single-particle distribution of an arbitrary circuit.
pub fn run_circuit(circuit: &Circuit, source: &str, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
    match engine {
        Engine::Streams { seed } => stream_distribution(circuit, source, seed, Parameters::default(), |s| {
            label_probabilities(circuit, &stream_terminal_amplitudes(s))
        }),
        Engine::Hilbert => Ok(hilbert::circuit_distribution(circuit, source)?),
    }
}

pub fn run_mach_zehnder(alpha: f64, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
    match engine {
        Engine::Streams { seed } => {
            let circuit = setups::mach_zehnder_circuit(alpha);
            stream_distribution(&circuit, "S", seed, Parameters::alpha(alpha), |s| {
                label_probabilities(&circuit, &stream_terminal_amplitudes(s))
            })
        }
        Engine::Hilbert => Ok(hilbert::evolve_mz(alpha)?),
    }
}

/// Mach-Zehnder with an optional which-path measurement between the
/// beamsplitters. On the stream engine the measurement marks each route by
/// the mirror it passes, so routes through different arms stop
/// interfering.
pub fn run_wheeler(alpha: f64, peek: bool, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
    match engine {
        Engine::Streams { seed } if peek => {
            let circuit = setups::mach_zehnder_circuit(alpha);
            stream_distribution(&circuit, "S", seed, Parameters::alpha(alpha), |s| {
                let by_terminal = marked_terminal_probabilities(s, &setups::MZ_ARM_MARKERS);
                let mut out = BTreeMap::new();
                for (id, kind) in circuit.terminals() {
                    let label = kind.outcome_label().unwrap_or(id);
                    *out.entry(Outcome::single(label)).or_insert(0.0) += by_terminal.get(id).copied().unwrap_or(0.0);
                }
                out
            })
        }
        Engine::Streams { .. } => run_mach_zehnder(alpha, engine),
        Engine::Hilbert => Ok(hilbert::evolve_wheeler(alpha, peek)?),
    }
}

/// Interaction-free measurement on a balanced interferometer. Probabilities
/// are unconditional, so `absorbed` is always listed.
pub fn run_ifm(blocked: Option<Arm>, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
    match engine {
        Engine::Streams { seed } => {
            let circuit = setups::ifm_circuit(blocked);
            stream_distribution(&circuit, "S", seed, Parameters::default(), |s| {
                let mut out = label_probabilities(&circuit, &stream_terminal_amplitudes(s));
                out.entry(Outcome::single(ABSORBED)).or_insert(0.0);
                out
            })
        }
        Engine::Hilbert => Ok(hilbert::evolve_ifm(blocked)?),
    }
}

pub fn run_bghz(alpha: f64, beta: f64, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
    run_bghz_with_arm_phases(alpha, beta, ArmPhases::default(), engine)
}

/// Two-particle interferometer with extra path-length phases on its arms.
pub fn run_bghz_with_arm_phases(
    alpha: f64,
    beta: f64,
    arms: ArmPhases,
    engine: Engine,
) -> Result<OutcomeDistribution, ExperimentError> {
    let Engine::Streams { seed } = engine else {
        return Ok(hilbert::evolve_bghz_with_arm_phases(alpha, beta, arms)?);
    };
    let (circuit, layout) = setups::bghz_circuit(alpha, beta, arms);
    let pair = StreamPair::build(&circuit, "S1", "S2", seed)?;
    let terms = joint_terms(&pair, &layout.allowed_pairs())?;
    let first_side = [layout.u.as_str(), layout.d.as_str()];
    let mut amplitudes = BTreeMap::new();
    for t in &terms {
        *amplitudes.entry(t.terminals.clone()).or_insert_with(Default::default) += t.amplitude;
    }
    let probabilities = pair_probabilities(&circuit, &amplitudes, &first_side);
    let mut contributions: BTreeMap<Outcome, Vec<Contribution>> = BTreeMap::new();
    for t in &terms {
        let single = BTreeMap::from([(t.terminals.clone(), t.amplitude)]);
        let outcome = pair_probabilities(&circuit, &single, &first_side)
            .into_keys()
            .next()
            .expect("one pair in, one outcome out");
        contributions.entry(outcome).or_default().push(Contribution {
            label: format!("{} & {}", t.left.label(), t.right.label()),
            weight: t.amplitude.norm_sqr(),
        });
    }
    Ok(
        OutcomeDistribution::new(probabilities, Provenance::Streams, Parameters::alpha_beta(alpha, beta))?
            .with_contributions(contributions)
            .with_seed(seed),
    )
}

/// Which of the canned experiments, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Experiment {
    MachZehnder { alpha: f64 },
    Wheeler { alpha: f64, peek: bool },
    Ifm { blocked: Option<Arm> },
    Bghz { alpha: f64, beta: f64 },
}

impl Experiment {
    pub fn run(&self, engine: Engine) -> Result<OutcomeDistribution, ExperimentError> {
        match *self {
            Experiment::MachZehnder { alpha } => run_mach_zehnder(alpha, engine),
            Experiment::Wheeler { alpha, peek } => run_wheeler(alpha, peek, engine),
            Experiment::Ifm { blocked } => run_ifm(blocked, engine),
            Experiment::Bghz { alpha, beta } => run_bghz(alpha, beta, engine),
        }
    }

    pub fn closed_form(&self) -> OutcomeDistribution {
        match *self {
            Experiment::MachZehnder { alpha } => closed_form::mach_zehnder(alpha),
            Experiment::Wheeler { alpha, peek } => closed_form::wheeler(alpha, peek),
            Experiment::Ifm { blocked } => closed_form::ifm(blocked),
            Experiment::Bghz { alpha, beta } => closed_form::bghz(alpha, beta),
        }
    }
}
