use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, ElementKind};

/// One traversed non-terminal element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hop {
    pub element: String,
    pub in_port: u8,
    pub out_port: u8,
}

/// A route from a source emission port to a terminal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub source: String,
    pub source_port: u8,
    pub hops: Vec<Hop>,
    pub terminal: String,
    /// Sum of the link phases along the route.
    pub geometric_phase: f64,
}

impl Path {
    pub fn element_ids(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.source.as_str())
            .chain(self.hops.iter().map(|h| h.element.as_str()))
            .chain(std::iter::once(self.terminal.as_str()))
    }

    /// Compact `S>BS1>Ma>BS2>U` form used in sample narration.
    pub fn label(&self) -> String {
        self.element_ids().collect::<Vec<_>>().join(">")
    }

    pub fn traverses(&self, element: &str) -> bool {
        self.hops.iter().any(|h| h.element == element)
    }

    fn sort_key(&self) -> (Vec<&str>, u8, Vec<(u8, u8)>) {
        (
            self.element_ids().collect(),
            self.source_port,
            self.hops.iter().map(|h| (h.in_port, h.out_port)).collect(),
        )
    }

    /// Checks that every step follows a link of `circuit` and that the
    /// route ends on a terminal.
    pub fn is_valid_in(&self, circuit: &Circuit) -> bool {
        let mut phase = 0.0;
        let mut at = (self.source.as_str(), self.source_port);
        if circuit.element(&self.source) != Some(&ElementKind::Source) {
            return false;
        }
        for hop in &self.hops {
            let Some(link) = circuit.link_from(at.0, at.1) else {
                return false;
            };
            if link.to.element != hop.element || link.to.port != hop.in_port {
                return false;
            }
            phase += link.phase;
            at = (hop.element.as_str(), hop.out_port);
        }
        let Some(last) = circuit.link_from(at.0, at.1) else {
            return false;
        };
        phase += last.phase;
        last.to.element == self.terminal
            && circuit.element(&self.terminal).is_some_and(ElementKind::is_terminal)
            && (phase - self.geometric_phase).abs() <= 1e-12 * (1.0 + phase.abs())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.source_port)?;
        for hop in &self.hops {
            write!(f, " -> {}[{}->{}]", hop.element, hop.in_port, hop.out_port)?;
        }
        write!(f, " -> {}", self.terminal)
    }
}

/// Every route from `source` to a terminal, ordered lexicographically by
/// element-id sequence (ports break ties).
pub fn enumerate_paths(circuit: &Circuit, source: &str) -> Result<Vec<Path>, CircuitError> {
    if circuit.element(source) != Some(&ElementKind::Source) {
        return Err(CircuitError::NotASource(source.to_string()));
    }
    let mut paths = Vec::new();
    for port in 0..circuit.output_count(source) {
        let mut hops = Vec::new();
        walk(circuit, source, port, source, port, 0.0, &mut hops, &mut paths);
    }
    paths.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(paths)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    circuit: &Circuit,
    source: &str,
    source_port: u8,
    element: &str,
    out_port: u8,
    phase: f64,
    hops: &mut Vec<Hop>,
    paths: &mut Vec<Path>,
) {
    let link = circuit
        .link_from(element, out_port)
        .expect("validated circuit links every output");
    let next = &link.to.element;
    let phase = phase + link.phase;
    let kind = circuit.element(next).expect("validated");
    if kind.is_terminal() {
        paths.push(Path {
            source: source.to_string(),
            source_port,
            hops: hops.clone(),
            terminal: next.clone(),
            geometric_phase: phase,
        });
        return;
    }
    for out in 0..kind.output_ports().unwrap_or(0) {
        hops.push(Hop {
            element: next.clone(),
            in_port: link.to.port,
            out_port: out,
        });
        walk(circuit, source, source_port, next, out, phase, hops, paths);
        hops.pop();
    }
}
