//! Random acyclic circuits for property testing and the invariant suite.

use std::f64::consts::TAU;

use rand::Rng;

use super::{Circuit, CircuitBuilder, ElementKind, PortRef};

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitConfig {
    /// Upper bound on non-terminal elements added after the source.
    pub max_elements: usize,
    /// Upper bound on beamsplitters, which bounds the path count by 2^n.
    pub max_beamsplitters: usize,
    /// Probability that the source gets a second emission port.
    pub two_port_source: f64,
    pub blocker_probability: f64,
}

impl Default for RandomCircuitConfig {
    fn default() -> Self {
        RandomCircuitConfig {
            max_elements: 10,
            max_beamsplitters: 6,
            two_port_source: 0.2,
            blocker_probability: 0.2,
        }
    }
}

/// Grows a circuit forward from a single source, so it is acyclic by
/// construction. All dangling ports are closed with terminals at the end.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, config: RandomCircuitConfig) -> Circuit {
    let mut builder = CircuitBuilder::new().element("S", ElementKind::Source);
    let mut open: Vec<PortRef> = vec![PortRef::new("S", 0)];
    if rng.gen_bool(config.two_port_source) {
        open.push(PortRef::new("S", 1));
    }
    let mut next_id = 0usize;
    let mut fresh = |prefix: &str| {
        next_id += 1;
        format!("{prefix}{next_id}")
    };
    let phase = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            rng.gen_range(0.0..TAU)
        } else {
            0.0
        }
    };

    let mut added = 0;
    let mut splitters = 0;
    while !open.is_empty() && added < config.max_elements {
        let pick = rng.gen_range(0..open.len());
        let from = open.swap_remove(pick);
        match rng.gen_range(0..6) {
            0..=2 if splitters < config.max_beamsplitters => {
                let id = fresh("bs");
                builder = builder.element(id.clone(), ElementKind::Beamsplitter);
                let first_port = rng.gen_range(0..2u8);
                builder = builder.link_at(from, PortRef::new(id.as_str(), first_port), phase(rng), None);
                if !open.is_empty() && rng.gen_bool(0.6) {
                    let other = open.swap_remove(rng.gen_range(0..open.len()));
                    builder = builder.link_at(other, PortRef::new(id.as_str(), 1 - first_port), phase(rng), None);
                }
                open.push(PortRef::new(id.as_str(), 0));
                open.push(PortRef::new(id.as_str(), 1));
                splitters += 1;
            }
            3 => {
                let id = fresh("m");
                builder = builder.element(id.clone(), ElementKind::Mirror).link_at(
                    from,
                    PortRef::new(id.as_str(), 0),
                    phase(rng),
                    None,
                );
                open.push(PortRef::new(id.as_str(), 0));
            }
            4 => {
                let id = fresh("ps");
                builder = builder
                    .element(id.clone(), ElementKind::phase_shifter(rng.gen_range(0.0..TAU)))
                    .link_at(from, PortRef::new(id.as_str(), 0), phase(rng), None);
                open.push(PortRef::new(id.as_str(), 0));
            }
            _ => {
                let p = phase(rng);
                builder = terminate(builder, from, &mut fresh, rng, config.blocker_probability, p);
            }
        }
        added += 1;
    }
    for from in open {
        let p = phase(rng);
        builder = terminate(builder, from, &mut fresh, rng, config.blocker_probability, p);
    }
    builder.build().expect("generator only emits valid circuits")
}

fn terminate<R: Rng + ?Sized>(
    builder: CircuitBuilder,
    from: PortRef,
    fresh: &mut impl FnMut(&str) -> String,
    rng: &mut R,
    blocker_probability: f64,
    phase: f64,
) -> CircuitBuilder {
    let (id, kind) = if rng.gen_bool(blocker_probability) {
        (fresh("x"), ElementKind::Blocker)
    } else {
        let id = fresh("det");
        let label = id.replace("det", "d");
        (id, ElementKind::detector(label))
    };
    builder
        .element(id.clone(), kind)
        .link_at(from, PortRef::new(id.as_str(), 0), phase, None)
}
