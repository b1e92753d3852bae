use proptest::prelude::*;
use shadowpath::circuit::random::{random_circuit, RandomCircuitConfig};
use shadowpath::circuit::{
    enumerate_paths, parse_circuit, render_circuit, Circuit, CircuitBuilder, CircuitError, ElementKind,
};
use shadowpath::experiments::setups::{bghz_circuit, ifm_circuit, mach_zehnder_circuit};
use shadowpath::experiments::ArmPhases;
use shadowpath::hilbert::Arm;
use shadowpath::rng::seeded;

const MZ_FILE: &str = include_str!("../../../circuits/mach_zehnder.circ");
const IFM_FILE: &str = include_str!("../../../circuits/ifm_blocked.circ");
const BGHZ_FILE: &str = include_str!("../../../circuits/bghz.circ");
const CASCADE_FILE: &str = include_str!("../../../circuits/cascade.circ");

/// Route count by dynamic programming over the topological order: a
/// terminal ends one route, anything else forwards to each linked output.
fn routes_oracle(circuit: &Circuit, source: &str) -> usize {
    let mut from = std::collections::HashMap::new();
    for id in circuit.topological_order().iter().rev() {
        let kind = circuit.element(id).unwrap();
        let count = if kind.is_terminal() {
            1
        } else {
            (0..circuit.output_count(id))
                .map(|p| from[&circuit.link_from(id, p).unwrap().to.element])
                .sum()
        };
        from.insert(id.clone(), count);
    }
    from[source]
}

fn splitter_chain(depth: usize) -> Circuit {
    let mut b = CircuitBuilder::new().element("S", ElementKind::Source);
    let mut prev = ("S".to_string(), 0u8);
    for k in 0..depth {
        let id = format!("B{k}");
        b = b.element(id.clone(), ElementKind::Beamsplitter).link(
            (prev.0.as_str(), prev.1),
            (id.as_str(), 0),
            0.1 * k as f64,
        );
        let side = format!("T{k}");
        b = b.element(side.clone(), ElementKind::detector(format!("t{k}"))).link(
            (id.as_str(), 1),
            (side.as_str(), 0),
            0.0,
        );
        prev = (id, 0);
    }
    b.element("END", ElementKind::Blocker)
        .link((prev.0.as_str(), prev.1), ("END", 0), 0.0)
        .build()
        .unwrap()
}

fn binary_tree() -> Circuit {
    let mut b = CircuitBuilder::new()
        .element("S", ElementKind::Source)
        .element("R", ElementKind::Beamsplitter)
        .link(("S", 0), ("R", 0), 0.0);
    for (child, port) in [("L", 0u8), ("Q", 1)] {
        b = b
            .element(child, ElementKind::Beamsplitter)
            .link(("R", port), (child, 0), 0.0);
        for leaf in 0..2u8 {
            let id = format!("{child}{leaf}");
            b = b.element(id.clone(), ElementKind::detector(id.to_lowercase())).link(
                (child, leaf),
                (id.as_str(), 0),
                0.0,
            );
        }
    }
    b.build().unwrap()
}

fn corpus() -> Vec<(&'static str, Circuit, &'static str, usize)> {
    let (bghz, _) = bghz_circuit(0.3, 1.1, ArmPhases::default());
    vec![
        ("mach-zehnder", mach_zehnder_circuit(0.7), "S", 4),
        ("ifm blocked a", ifm_circuit(Some(Arm::A)), "S", 3),
        ("ifm blocked b", ifm_circuit(Some(Arm::B)), "S", 3),
        ("two-particle left", bghz.clone(), "S1", 4),
        ("two-particle right", bghz, "S2", 4),
        ("cascade", parse_circuit(CASCADE_FILE).unwrap(), "S", 6),
        (
            "mirror only",
            parse_circuit("element S source\nelement M mirror\nelement U detector:u\nlink S:0 M:0\nlink M:0 U:0\n")
                .unwrap(),
            "S",
            1,
        ),
        ("chain of four", splitter_chain(4), "S", 5),
        ("binary tree", binary_tree(), "S", 4),
        (
            "two-port source",
            parse_circuit(
                "element S source\nelement B beamsplitter\nelement U detector:u\nelement D detector:d\n\
                 link S:0 B:0\nlink S:1 B:1\nlink B:0 U:0\nlink B:1 D:0\n",
            )
            .unwrap(),
            "S",
            4,
        ),
    ]
}

#[test]
fn route_counts_match_branching_oracle() {
    for (name, circuit, source, expected) in corpus() {
        let paths = enumerate_paths(&circuit, source).unwrap();
        assert_eq!(paths.len(), expected, "{name}");
        assert_eq!(paths.len(), routes_oracle(&circuit, source), "{name}");
        assert!(paths.iter().all(|p| p.is_valid_in(&circuit)), "{name}");
    }
}

#[test]
fn mach_zehnder_has_two_arms_times_two_exits() {
    let c = mach_zehnder_circuit(0.0);
    let paths = enumerate_paths(&c, "S").unwrap();
    for arm in ["Ma", "Mb"] {
        for det in ["U", "D"] {
            assert_eq!(
                paths.iter().filter(|p| p.traverses(arm) && p.terminal == det).count(),
                1
            );
        }
    }
}

#[test]
fn blocked_arm_routes() {
    let paths = enumerate_paths(&ifm_circuit(Some(Arm::A)), "S").unwrap();
    let labels: Vec<String> = paths.iter().map(|p| p.label()).collect();
    assert_eq!(labels, ["S>BS1>Mb>BS2>D", "S>BS1>Mb>BS2>U", "S>BS1>X"]);
}

#[test]
fn paths_are_sorted_and_distinct() {
    for (name, circuit, source, _) in corpus() {
        let paths = enumerate_paths(&circuit, source).unwrap();
        for w in paths.windows(2) {
            let a: Vec<&str> = w[0].element_ids().collect();
            let b: Vec<&str> = w[1].element_ids().collect();
            assert!(a <= b, "{name}: {a:?} after {b:?}");
            assert_ne!(w[0], w[1], "{name}");
        }
    }
}

#[test]
fn circuit_files_match_canned_builders() {
    assert_eq!(
        parse_circuit(MZ_FILE).unwrap(),
        mach_zehnder_circuit(std::f64::consts::PI / 3.0)
    );
    assert_eq!(parse_circuit(IFM_FILE).unwrap(), ifm_circuit(Some(Arm::A)));
    let (bghz, _) = bghz_circuit(0.0, std::f64::consts::FRAC_PI_4, ArmPhases::default());
    assert_eq!(parse_circuit(BGHZ_FILE).unwrap(), bghz);
}

#[test]
fn geometric_phase_sums_link_phases() {
    let c = parse_circuit(CASCADE_FILE).unwrap();
    let paths = enumerate_paths(&c, "S").unwrap();
    let p = paths
        .iter()
        .find(|p| p.hops[1].in_port == 0 && p.terminal == "D1")
        .unwrap();
    assert!((p.geometric_phase - (0.4 + std::f64::consts::FRAC_PI_2)).abs() < 1e-15);
}

#[test]
fn parse_errors_by_category() {
    let bad_ref = "element S source\nelement U detector:u\nlink S:0 U:0\nlink BS1:0 BS9:0\n";
    assert!(matches!(parse_circuit(bad_ref), Err(CircuitError::DanglingLink { .. })));
    let unlinked = "element S source\nelement B beamsplitter\nelement U detector:u\nlink S:0 B:0\nlink B:0 U:0\n";
    assert!(matches!(parse_circuit(unlinked), Err(CircuitError::UnlinkedPort(_))));
    let twice = "element S source\nelement U detector:u\nelement D detector:d\nlink S:0 U:0\nlink S:0 D:0\n";
    assert!(matches!(parse_circuit(twice), Err(CircuitError::PortArity { .. })));
    let labels = "element S source\nelement B beamsplitter\nelement U detector:u\nelement D detector:u\n\
                  link S:0 B:0\nlink B:0 U:0\nlink B:1 D:0\n";
    assert!(matches!(
        parse_circuit(labels),
        Err(CircuitError::DuplicateLabel { .. })
    ));
    assert!(matches!(
        enumerate_paths(&mach_zehnder_circuit(0.0), "U"),
        Err(CircuitError::NotASource(_))
    ));
}

#[test]
fn shifter_phases_are_canonical() {
    let c = parse_circuit(
        "element S source\nelement P phaseshifter:-pi/2\nelement U detector:u\nlink S:0 P:0\nlink P:0 U:0\n",
    )
    .unwrap();
    match c.element("P").unwrap() {
        ElementKind::PhaseShifter { shift } => assert!((shift - 1.5 * std::f64::consts::PI).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_then_parse_round_trips(seed in any::<u64>()) {
        let c = random_circuit(&mut seeded(seed), RandomCircuitConfig::default());
        let text = render_circuit(&c);
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(render_circuit(&back), text);
    }

    #[test]
    fn enumerated_paths_are_valid_and_complete(seed in any::<u64>()) {
        let c = random_circuit(&mut seeded(seed), RandomCircuitConfig::default());
        let paths = enumerate_paths(&c, "S").unwrap();
        prop_assert!(paths.iter().all(|p| p.is_valid_in(&c)));
        prop_assert_eq!(paths.len(), routes_oracle(&c, "S"));
    }
}
