//! Mode propagation through an arbitrary circuit.
//!
//! Every link is one mode. Elements are applied in topological order, each
//! as a linear map from its input link modes to its output link modes;
//! unlinked or unpopulated inputs enter as vacuum.

use std::collections::BTreeMap;

use super::{Factor, HilbertError, ModeMap, StateVector, TwoParticleState};
use crate::amplitude::Amplitude;
use crate::circuit::{Circuit, ElementKind, Link};
use crate::outcome::{label_probabilities, pair_probabilities, OutcomeDistribution, Parameters, Provenance};
use crate::streams::{EmissionPair, StreamError, TerminalPair};

fn link_mode(link: &Link) -> String {
    format!("{}>{}", link.from, link.to)
}

fn terminal_mode(id: &str) -> String {
    format!("@{id}")
}

fn input_mode(circuit: &Circuit, id: &str, port: u8) -> String {
    match circuit.link_into(id, port) {
        Some(link) => link_mode(link),
        None => format!("{id}:{port}<vacuum"),
    }
}

/// The maps an element applies, in order.
fn element_maps(circuit: &Circuit, id: &str, kind: &ElementKind) -> Vec<ModeMap> {
    let out = |port: u8| {
        circuit
            .link_from(id, port)
            .expect("validated circuits link every output")
    };
    match kind {
        ElementKind::Source => Vec::new(),
        ElementKind::Mirror | ElementKind::PhaseShifter { .. } => {
            let link = out(0);
            let to = link_mode(link);
            let shift = match kind {
                ElementKind::PhaseShifter { shift } => *shift,
                _ => 0.0,
            };
            vec![
                ModeMap::relabel(&input_mode(circuit, id, 0), &to),
                ModeMap::phase(&to, shift + link.phase),
            ]
        }
        ElementKind::Beamsplitter => {
            let (l0, l1) = (out(0), out(1));
            let (n0, n1) = (link_mode(l0), link_mode(l1));
            vec![
                ModeMap::beamsplitter((&input_mode(circuit, id, 0), &input_mode(circuit, id, 1)), (&n1, &n0)),
                ModeMap::phase(&n0, l0.phase),
                ModeMap::phase(&n1, l1.phase),
            ]
        }
        ElementKind::Detector { .. } | ElementKind::Blocker => {
            vec![ModeMap::relabel(&input_mode(circuit, id, 0), &terminal_mode(id))]
        }
    }
}

fn element_inputs(circuit: &Circuit, id: &str, kind: &ElementKind) -> Vec<String> {
    (0..kind.input_ports()).map(|p| input_mode(circuit, id, p)).collect()
}

/// Emission modes of `source` with their `1/√k` amplitudes and link phases.
fn emission(circuit: &Circuit, source: &str) -> Result<Vec<(u8, String, Amplitude)>, HilbertError> {
    if !matches!(circuit.element(source), Some(ElementKind::Source)) {
        return Err(crate::circuit::CircuitError::NotASource(source.to_string()).into());
    }
    let k = circuit.output_count(source);
    let weight = (k as f64).sqrt().recip();
    Ok((0..k)
        .map(|p| {
            let link = circuit.link_from(source, p).expect("source ports are contiguous");
            (p, link_mode(link), Amplitude::from_polar(weight, link.phase))
        })
        .collect())
}

/// Amplitude at every terminal (by element id) for one particle emitted by
/// `source`.
pub fn evolve_circuit(circuit: &Circuit, source: &str) -> Result<BTreeMap<String, Amplitude>, HilbertError> {
    let (labels, coefficients): (Vec<_>, Vec<_>) =
        emission(circuit, source)?.into_iter().map(|(_, m, c)| (m, c)).unzip();
    let mut state = StateVector::new(labels, coefficients)?;
    for id in circuit.topological_order() {
        let kind = circuit.element(id).expect("topological order lists known ids");
        for mode in element_inputs(circuit, id, kind) {
            if state.amplitude(&mode).is_none() {
                state = state.with_vacuum(&mode)?;
            }
        }
        for map in element_maps(circuit, id, kind) {
            state = state.apply(&map)?;
        }
    }
    Ok(circuit
        .terminals()
        .map(|(id, _)| (id.clone(), state.amplitude(&terminal_mode(id)).unwrap_or_default()))
        .collect())
}

/// Outcome probabilities for one particle from `source`.
pub fn circuit_distribution(circuit: &Circuit, source: &str) -> Result<OutcomeDistribution, HilbertError> {
    let amplitudes = evolve_circuit(circuit, source)?;
    Ok(OutcomeDistribution::new(
        label_probabilities(circuit, &amplitudes),
        Provenance::Hilbert,
        Parameters::default(),
    )?)
}

/// Joint terminal amplitudes for two particles, one from each source,
/// starting in the equal superposition of the `allowed` emission pairs.
///
/// The first tensor factor holds the `left` particle. Detectors, not
/// sources, are what is observed, so the two orderings of a terminal pair
/// are one outcome and their amplitudes add.
pub fn evolve_circuit_pair(
    circuit: &Circuit,
    left: &str,
    right: &str,
    allowed: &[EmissionPair],
) -> Result<BTreeMap<TerminalPair, Amplitude>, HilbertError> {
    if left == right {
        return Err(StreamError::SharedSource(left.to_string()).into());
    }
    if allowed.is_empty() {
        return Err(StreamError::EmptyPairing.into());
    }
    let (l, r) = (emission(circuit, left)?, emission(circuit, right)?);
    let find = |modes: &[(u8, String, Amplitude)], source: &str, port: u8| {
        modes
            .iter()
            .find(|(p, _, _)| *p == port)
            .map(|(_, m, c)| (m.clone(), c.arg()))
            .ok_or_else(|| StreamError::UnknownEmissionPort {
                source_id: source.to_string(),
                port,
            })
    };
    let weight = (allowed.len() as f64).sqrt().recip();
    let mut terms = Vec::new();
    for pair in allowed {
        let (lm, lp) = find(&l, left, pair.left_port)?;
        let (rm, rp) = find(&r, right, pair.right_port)?;
        terms.push((lm, rm, Amplitude::from_polar(weight, lp + rp)));
    }
    let borrowed: Vec<(&str, &str, Amplitude)> = terms.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), *c)).collect();
    let mut state = TwoParticleState::from_terms(&borrowed)?;
    for id in circuit.topological_order() {
        let kind = circuit.element(id).expect("topological order lists known ids");
        for mode in element_inputs(circuit, id, kind) {
            if !state.first_labels().contains(&mode) {
                state = state.with_vacuum(Factor::First, &mode)?;
            }
            if !state.second_labels().contains(&mode) {
                state = state.with_vacuum(Factor::Second, &mode)?;
            }
        }
        for map in element_maps(circuit, id, kind) {
            state = state.apply_both(&map)?;
        }
    }
    let mut out = BTreeMap::new();
    for (f, s, c) in state.terms() {
        if let (Some(x), Some(y)) = (f.strip_prefix('@'), s.strip_prefix('@')) {
            *out.entry(TerminalPair::new(x, y)).or_insert_with(Amplitude::default) += c;
        }
    }
    Ok(out)
}

/// Joint outcome probabilities of [`evolve_circuit_pair`]; terminals listed
/// in `first_side` are named first in each outcome.
pub fn pair_distribution(
    circuit: &Circuit,
    left: &str,
    right: &str,
    allowed: &[EmissionPair],
    first_side: &[&str],
) -> Result<OutcomeDistribution, HilbertError> {
    let amplitudes = evolve_circuit_pair(circuit, left, right, allowed)?;
    Ok(OutcomeDistribution::new(
        pair_probabilities(circuit, &amplitudes, first_side),
        Provenance::Hilbert,
        Parameters::default(),
    )?)
}
