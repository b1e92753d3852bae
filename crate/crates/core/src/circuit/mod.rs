//! Interferometer geometry: optical elements joined by directed links.
//!
//! Ports are numbered from 0. At a beamsplitter, same-index ports form the
//! transmission pair (in 0 → out 0, in 1 → out 1) and cross-index ports the
//! reflection pair. Every link carries a path-length phase in radians; a
//! physical length never appears, the photon frequency is already folded in.

mod parse;
mod paths;
pub mod random;

pub use parse::{parse_circuit, render_circuit};
pub use paths::{enumerate_paths, Hop, Path};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::canonical_phase;

/// Outcome label reported for every blocker.
pub const ABSORBED: &str = "absorbed";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ElementKind {
    Source,
    Beamsplitter,
    Mirror,
    PhaseShifter { shift: f64 },
    Detector { label: String },
    Blocker,
}

impl ElementKind {
    /// Builds a phase shifter with its shift reduced into `[0, 2π)`.
    pub fn phase_shifter(shift: f64) -> Self {
        ElementKind::PhaseShifter {
            shift: canonical_phase(shift),
        }
    }

    pub fn detector(label: impl Into<String>) -> Self {
        ElementKind::Detector { label: label.into() }
    }

    pub fn input_ports(&self) -> u8 {
        match self {
            ElementKind::Source => 0,
            ElementKind::Beamsplitter => 2,
            _ => 1,
        }
    }

    /// Fixed output arity, `None` for sources (one or more emission ports).
    pub fn output_ports(&self) -> Option<u8> {
        match self {
            ElementKind::Source => None,
            ElementKind::Beamsplitter => Some(2),
            ElementKind::Mirror | ElementKind::PhaseShifter { .. } => Some(1),
            ElementKind::Detector { .. } | ElementKind::Blocker => Some(0),
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, ElementKind::Detector { .. } | ElementKind::Blocker)
    }

    /// Label under which a terminal's probability is reported.
    pub fn outcome_label(&self) -> Option<&str> {
        match self {
            ElementKind::Detector { label } => Some(label),
            ElementKind::Blocker => Some(ABSORBED),
            _ => None,
        }
    }

    fn keyword(&self) -> &'static str {
        match self {
            ElementKind::Source => "source",
            ElementKind::Beamsplitter => "beamsplitter",
            ElementKind::Mirror => "mirror",
            ElementKind::PhaseShifter { .. } => "phaseshifter",
            ElementKind::Detector { .. } => "detector",
            ElementKind::Blocker => "blocker",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PortRef {
    pub element: String,
    pub port: u8,
}

impl PortRef {
    pub fn new(element: impl Into<String>, port: u8) -> Self {
        PortRef {
            element: element.into(),
            port,
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.element, self.port)
    }
}

/// A directed link from an output port to an input port.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub from: PortRef,
    pub to: PortRef,
    /// Path-length phase accumulated along the link, radians.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown element kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error("{}duplicate element id `{id}`", at(*line))]
    DuplicateId { line: Option<usize>, id: String },
    #[error("{}duplicate detector label `{label}`", at(*line))]
    DuplicateLabel { line: Option<usize>, label: String },
    #[error("{}link refers to undefined element `{id}`", at(*line))]
    DanglingLink { line: Option<usize>, id: String },
    #[error("{}port arity violation at {port}: {message}", at(*line))]
    PortArity {
        line: Option<usize>,
        port: PortRef,
        message: String,
    },
    #[error("output port {0} is not linked")]
    UnlinkedPort(PortRef),
    #[error("{}non-finite phase", at(*line))]
    NonFinitePhase { line: Option<usize> },
    #[error("cycle detected through element `{0}`")]
    Cycle(String),
    #[error("circuit has no source")]
    NoSource,
    #[error("`{0}` is not a source")]
    NotASource(String),
}

fn at(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// A validated interferometer. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    elements: BTreeMap<String, ElementKind>,
    links: Vec<Link>,
    sources: Vec<String>,
    outgoing: HashMap<PortRef, usize>,
    incoming: HashMap<PortRef, usize>,
    topo: Vec<String>,
}

impl Circuit {
    pub fn elements(&self) -> &BTreeMap<String, ElementKind> {
        &self.elements
    }

    pub fn element(&self, id: &str) -> Option<&ElementKind> {
        self.elements.get(id)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Source ids in ascending order.
    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn link_from(&self, element: &str, port: u8) -> Option<&Link> {
        self.outgoing.get(&PortRef::new(element, port)).map(|&i| &self.links[i])
    }

    pub fn link_into(&self, element: &str, port: u8) -> Option<&Link> {
        self.incoming.get(&PortRef::new(element, port)).map(|&i| &self.links[i])
    }

    /// Number of output ports actually present on an element.
    pub fn output_count(&self, element: &str) -> u8 {
        match self.elements.get(element) {
            Some(ElementKind::Source) => (0..=u8::MAX)
                .take_while(|&p| self.link_from(element, p).is_some())
                .count() as u8,
            Some(kind) => kind.output_ports().unwrap_or(0),
            None => 0,
        }
    }

    /// Elements in a topological order (ties broken by id).
    pub fn topological_order(&self) -> &[String] {
        &self.topo
    }

    pub fn terminals(&self) -> impl Iterator<Item = (&String, &ElementKind)> {
        self.elements.iter().filter(|(_, k)| k.is_terminal())
    }
}

#[derive(Debug, Clone)]
struct PendingLink {
    link: Link,
    line: Option<usize>,
}

/// Incrementally assembles a [`Circuit`]; all invariants are checked in
/// [`CircuitBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    elements: BTreeMap<String, (ElementKind, Option<usize>)>,
    links: Vec<PendingLink>,
    duplicate: Option<(String, Option<usize>)>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element(self, id: impl Into<String>, kind: ElementKind) -> Self {
        self.element_at(id, kind, None)
    }

    pub(crate) fn element_at(mut self, id: impl Into<String>, kind: ElementKind, line: Option<usize>) -> Self {
        let id = id.into();
        let kind = match kind {
            ElementKind::PhaseShifter { shift } if shift.is_finite() => ElementKind::phase_shifter(shift),
            other => other,
        };
        match self.elements.entry(id) {
            std::collections::btree_map::Entry::Occupied(e) => {
                self.duplicate.get_or_insert((e.key().clone(), line));
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((kind, line));
            }
        }
        self
    }

    pub fn link(self, from: (&str, u8), to: (&str, u8), phase: f64) -> Self {
        self.link_at(PortRef::new(from.0, from.1), PortRef::new(to.0, to.1), phase, None)
    }

    pub(crate) fn link_at(mut self, from: PortRef, to: PortRef, phase: f64, line: Option<usize>) -> Self {
        self.links.push(PendingLink {
            link: Link { from, to, phase },
            line,
        });
        self
    }

    pub fn build(self) -> Result<Circuit, CircuitError> {
        if let Some((id, line)) = self.duplicate {
            return Err(CircuitError::DuplicateId { line, id });
        }

        let mut labels = BTreeSet::new();
        for (kind, line) in self.elements.values() {
            match kind {
                ElementKind::Detector { label } if !labels.insert(label.clone()) => {
                    return Err(CircuitError::DuplicateLabel {
                        line: *line,
                        label: label.clone(),
                    });
                }
                ElementKind::PhaseShifter { shift } if !shift.is_finite() => {
                    return Err(CircuitError::NonFinitePhase { line: *line });
                }
                _ => {}
            }
        }

        let mut outgoing = HashMap::new();
        let mut incoming = HashMap::new();
        for (index, pending) in self.links.iter().enumerate() {
            let Link { from, to, phase } = &pending.link;
            let line = pending.line;
            if !phase.is_finite() {
                return Err(CircuitError::NonFinitePhase { line });
            }
            for end in [from, to] {
                if !self.elements.contains_key(&end.element) {
                    return Err(CircuitError::DanglingLink {
                        line,
                        id: end.element.clone(),
                    });
                }
            }
            let from_kind = &self.elements[&from.element].0;
            let to_kind = &self.elements[&to.element].0;
            if let Some(outs) = from_kind.output_ports() {
                if from.port >= outs {
                    return Err(arity(
                        line,
                        from,
                        format!("{} has {outs} output port(s)", from_kind.keyword()),
                    ));
                }
            }
            if to.port >= to_kind.input_ports() {
                return Err(arity(
                    line,
                    to,
                    format!("{} has {} input port(s)", to_kind.keyword(), to_kind.input_ports()),
                ));
            }
            if outgoing.insert(from.clone(), index).is_some() {
                return Err(arity(line, from, "output port linked more than once".into()));
            }
            if incoming.insert(to.clone(), index).is_some() {
                return Err(arity(line, to, "input port linked more than once".into()));
            }
        }

        let sources: Vec<String> = self
            .elements
            .iter()
            .filter(|(_, (k, _))| *k == ElementKind::Source)
            .map(|(id, _)| id.clone())
            .collect();
        if sources.is_empty() {
            return Err(CircuitError::NoSource);
        }

        for (id, (kind, line)) in &self.elements {
            match kind.output_ports() {
                Some(n) => {
                    if let Some(p) = (0..n).find(|&p| !outgoing.contains_key(&PortRef::new(id.as_str(), p))) {
                        return Err(CircuitError::UnlinkedPort(PortRef::new(id.as_str(), p)));
                    }
                }
                None => {
                    let used: BTreeSet<u8> = outgoing.keys().filter(|p| &p.element == id).map(|p| p.port).collect();
                    if used.is_empty() {
                        return Err(CircuitError::UnlinkedPort(PortRef::new(id.as_str(), 0)));
                    }
                    // emission ports must be 0..k without gaps
                    if let Some(gap) = (0..used.len() as u8).find(|p| !used.contains(p)) {
                        return Err(arity(
                            *line,
                            &PortRef::new(id.as_str(), gap),
                            "source emission ports must be numbered without gaps".into(),
                        ));
                    }
                }
            }
        }

        let elements: BTreeMap<String, ElementKind> = self.elements.into_iter().map(|(id, (k, _))| (id, k)).collect();
        let links: Vec<Link> = self.links.into_iter().map(|p| p.link).collect();
        let topo = topological_sort(&elements, &links)?;

        Ok(Circuit {
            elements,
            links,
            sources,
            outgoing,
            incoming,
            topo,
        })
    }
}

fn arity(line: Option<usize>, port: &PortRef, message: String) -> CircuitError {
    CircuitError::PortArity {
        line,
        port: port.clone(),
        message,
    }
}

fn topological_sort(elements: &BTreeMap<String, ElementKind>, links: &[Link]) -> Result<Vec<String>, CircuitError> {
    let mut indegree: BTreeMap<&str, usize> = elements.keys().map(|k| (k.as_str(), 0)).collect();
    let mut successors: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for link in links {
        *indegree.get_mut(link.to.element.as_str()).expect("validated") += 1;
        successors.entry(&link.from.element).or_default().push(&link.to.element);
    }
    let mut ready: BTreeSet<&str> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&k, _)| k).collect();
    let mut order = Vec::with_capacity(elements.len());
    while let Some(next) = ready.pop_first() {
        order.push(next.to_string());
        for succ in successors.get(next).into_iter().flatten() {
            let d = indegree.get_mut(succ).expect("validated");
            *d -= 1;
            if *d == 0 {
                ready.insert(succ);
            }
        }
    }
    if order.len() < elements.len() {
        let stuck = indegree
            .iter()
            .find(|(k, &d)| d > 0 && !order.iter().any(|o| o == *k))
            .map(|(k, _)| k.to_string())
            .unwrap_or_default();
        return Err(CircuitError::Cycle(stuck));
    }
    Ok(order)
}
