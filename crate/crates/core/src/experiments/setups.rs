//! Circuits of the canned experiments.

use crate::circuit::{Circuit, CircuitBuilder, ElementKind};
use crate::hilbert::{Arm, ArmPhases};
use crate::streams::BghzLayout;

/// Mach-Zehnder: `S → BS1`, arm `a` through mirror `Ma` and shifter `PSa`,
/// arm `b` through mirror `Mb`, recombined at `BS2` onto detectors `u`, `d`.
pub fn mach_zehnder_circuit(alpha: f64) -> Circuit {
    CircuitBuilder::new()
        .element("S", ElementKind::Source)
        .element("BS1", ElementKind::Beamsplitter)
        .element("Ma", ElementKind::Mirror)
        .element("PSa", ElementKind::phase_shifter(alpha))
        .element("Mb", ElementKind::Mirror)
        .element("BS2", ElementKind::Beamsplitter)
        .element("U", ElementKind::detector("u"))
        .element("D", ElementKind::detector("d"))
        .link(("S", 0), ("BS1", 0), 0.0)
        .link(("BS1", 0), ("Ma", 0), 0.0)
        .link(("Ma", 0), ("PSa", 0), 0.0)
        .link(("PSa", 0), ("BS2", 0), 0.0)
        .link(("BS1", 1), ("Mb", 0), 0.0)
        .link(("Mb", 0), ("BS2", 1), 0.0)
        .link(("BS2", 1), ("U", 0), 0.0)
        .link(("BS2", 0), ("D", 0), 0.0)
        .build()
        .expect("fixed geometry is valid")
}

/// Elements on which a which-path measurement marks the route.
pub const MZ_ARM_MARKERS: [&str; 2] = ["Ma", "Mb"];

/// Balanced Mach-Zehnder with a blocker `X` in place of the mirror of the
/// blocked arm; the second beamsplitter port it fed is left open.
pub fn ifm_circuit(blocked: Option<Arm>) -> Circuit {
    let Some(arm) = blocked else {
        return mach_zehnder_circuit(0.0);
    };
    let (free_mirror, free_in, blocked_out) = match arm {
        Arm::A => ("Mb", 1, 0),
        Arm::B => ("Ma", 0, 1),
    };
    CircuitBuilder::new()
        .element("S", ElementKind::Source)
        .element("BS1", ElementKind::Beamsplitter)
        .element("X", ElementKind::Blocker)
        .element(free_mirror, ElementKind::Mirror)
        .element("BS2", ElementKind::Beamsplitter)
        .element("U", ElementKind::detector("u"))
        .element("D", ElementKind::detector("d"))
        .link(("S", 0), ("BS1", 0), 0.0)
        .link(("BS1", blocked_out), ("X", 0), 0.0)
        .link(("BS1", 1 - blocked_out), (free_mirror, 0), 0.0)
        .link((free_mirror, 0), ("BS2", free_in), 0.0)
        .link(("BS2", 1), ("U", 0), 0.0)
        .link(("BS2", 0), ("D", 0), 0.0)
        .build()
        .expect("fixed geometry is valid")
}

/// Two-particle interferometer. Source `S1` emits into `a` (port 0) and
/// `b'` (port 1), source `S2` into `b` (port 0) and `a'` (port 1). `a` and
/// `b` meet at `BSL` (detectors `u`, `d`), `b'` and `a'` at `BSR`
/// (detectors `u'`, `d'`). Shifter `PA` sits on `a`, `PB` on `b'`.
pub fn bghz_circuit(alpha: f64, beta: f64, arms: ArmPhases) -> (Circuit, BghzLayout) {
    let circuit = CircuitBuilder::new()
        .element("S1", ElementKind::Source)
        .element("S2", ElementKind::Source)
        .element("PA", ElementKind::phase_shifter(alpha))
        .element("PB", ElementKind::phase_shifter(beta))
        .element("BSL", ElementKind::Beamsplitter)
        .element("BSR", ElementKind::Beamsplitter)
        .element("U", ElementKind::detector("u"))
        .element("D", ElementKind::detector("d"))
        .element("U2", ElementKind::detector("u'"))
        .element("D2", ElementKind::detector("d'"))
        .link(("S1", 0), ("PA", 0), 0.0)
        .link(("PA", 0), ("BSL", 0), arms.a)
        .link(("S2", 0), ("BSL", 1), arms.b)
        .link(("S1", 1), ("PB", 0), 0.0)
        .link(("PB", 0), ("BSR", 0), arms.b_prime)
        .link(("S2", 1), ("BSR", 1), arms.a_prime)
        .link(("BSL", 1), ("U", 0), 0.0)
        .link(("BSL", 0), ("D", 0), 0.0)
        .link(("BSR", 1), ("U2", 0), 0.0)
        .link(("BSR", 0), ("D2", 0), 0.0)
        .build()
        .expect("fixed geometry is valid");
    let layout = BghzLayout {
        a: 0,
        b_prime: 1,
        b: 0,
        a_prime: 1,
        u: "U".into(),
        d: "D".into(),
        u_prime: "U2".into(),
        d_prime: "D2".into(),
    };
    (circuit, layout)
}
