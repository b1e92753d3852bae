//! Shadow streams: every alternative route of one emission, evaluated with
//! path clocks.
//!
//! A path amplitude is the product of its part-way amplitudes: `1/√2` per
//! beamsplitter crossing, an extra quarter turn of the clock on reflection,
//! the shifter and link phases, and the shared initial clock reading.
//! Amplitudes of paths in the same stream add; amplitudes of different
//! streams multiply.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amplitude::{Amplitude, PathClock, TOLERANCE};
use crate::circuit::{enumerate_paths, Circuit, CircuitError, ElementKind, Path};
use crate::rng::seeded;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StreamError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("both streams come from source `{0}`; streams of a pair must be disjoint")]
    SharedSource(String),
    #[error("source `{source_id}` has no emission port {port}")]
    UnknownEmissionPort { source_id: String, port: u8 },
    #[error("no allowed emission pairs given")]
    EmptyPairing,
    #[error("geometry is not declared symmetric; congruence is undefined")]
    NotSymmetric,
    #[error("`{0}` is not a terminal of the circuit")]
    UnknownTerminal(String),
}

/// Amplitude of a single route: `(1/√2)^{#beamsplitters} · e^{iφ}`, where the
/// clock reading `φ` collects the initial clock, link phases, shifter phases
/// and `π/2` per beamsplitter reflection.
pub fn path_amplitude(path: &Path, circuit: &Circuit, initial_clock: f64) -> Amplitude {
    let mut clock = PathClock::new(initial_clock);
    clock.advance(path.geometric_phase);
    let mut splitters = 0i32;
    for hop in &path.hops {
        match circuit.element(&hop.element) {
            Some(ElementKind::Beamsplitter) => {
                splitters += 1;
                if hop.in_port != hop.out_port {
                    clock.advance(FRAC_PI_2);
                }
            }
            Some(ElementKind::PhaseShifter { shift }) => clock.advance(*shift),
            _ => {}
        }
    }
    clock.scaled(FRAC_1_SQRT_2.powi(splitters))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamMember {
    pub path: Path,
    /// Route amplitude alone, as returned by [`path_amplitude`].
    pub path_amplitude: Amplitude,
    /// Route amplitude times the source's emission amplitude `1/√k` for a
    /// source with `k` emission ports.
    pub amplitude: Amplitude,
}

/// The tangible particle of one emission together with its shadow
/// counterparts, one per alternative route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowStream {
    source: String,
    members: Vec<StreamMember>,
    tangible: usize,
    initial_clock: f64,
    seed: Option<u64>,
}

impl ShadowStream {
    /// Stream with a fixed clock reading; the tangible route defaults to the
    /// first member.
    pub fn with_clock(circuit: &Circuit, source: &str, initial_clock: f64) -> Result<Self, StreamError> {
        let paths = enumerate_paths(circuit, source)?;
        let emission = 1.0 / f64::from(circuit.output_count(source)).sqrt();
        let members = paths
            .into_iter()
            .map(|path| {
                let path_amplitude = path_amplitude(&path, circuit, initial_clock);
                StreamMember {
                    path,
                    path_amplitude,
                    amplitude: path_amplitude * emission,
                }
            })
            .collect();
        Ok(ShadowStream {
            source: source.to_string(),
            members,
            tangible: 0,
            initial_clock: PathClock::new(initial_clock).phase(),
            seed: None,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn members(&self) -> &[StreamMember] {
        &self.members
    }

    pub fn initial_clock(&self) -> f64 {
        self.initial_clock
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Index of the member carrying the tangible particle. Bookkeeping only:
    /// no amplitude or probability depends on it.
    pub fn tangible_index(&self) -> usize {
        self.tangible
    }

    pub fn tangible_path(&self) -> &Path {
        &self.members[self.tangible].path
    }

    /// Σ over terminals of |terminal amplitude|², one for a normalized stream.
    pub fn total_probability(&self) -> f64 {
        stream_terminal_amplitudes(self).values().map(|a| a.norm_sqr()).sum()
    }
}

/// Builds the stream of `source`, drawing the initial clock uniformly on
/// `[0, 2π)` and then the tangible route uniformly from `seed`.
pub fn build_stream(circuit: &Circuit, source: &str, seed: u64) -> Result<ShadowStream, StreamError> {
    let mut rng = seeded(seed);
    let clock = rng.gen_range(0.0..TAU);
    let mut stream = ShadowStream::with_clock(circuit, source, clock)?;
    stream.tangible = rng.gen_range(0..stream.members.len());
    stream.seed = Some(seed);
    Ok(stream)
}

/// Sum of member amplitudes per terminal id (blockers included).
pub fn stream_terminal_amplitudes(stream: &ShadowStream) -> BTreeMap<String, Amplitude> {
    let mut out = BTreeMap::new();
    for m in &stream.members {
        *out.entry(m.path.terminal.clone()).or_insert_with(Amplitude::default) += m.amplitude;
    }
    out
}

/// Terminal probabilities when the routes are marked by which of the
/// `marks` elements they pass through (a which-path measurement).
///
/// Members are grouped by the first marked element on their route; groups no
/// longer interfere, so their probabilities add. Unmarked routes form one
/// further group.
pub fn marked_terminal_probabilities(stream: &ShadowStream, marks: &[&str]) -> BTreeMap<String, f64> {
    let mut groups: BTreeMap<(Option<&str>, &str), Amplitude> = BTreeMap::new();
    for m in &stream.members {
        let mark = m
            .path
            .hops
            .iter()
            .map(|h| h.element.as_str())
            .find(|e| marks.contains(e));
        *groups.entry((mark, m.path.terminal.as_str())).or_default() += m.amplitude;
    }
    let mut out = BTreeMap::new();
    for ((_, terminal), amp) in groups {
        *out.entry(terminal.to_string()).or_insert(0.0) += amp.norm_sqr();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Streams of two distinct tangible particles. Postulated to share one
/// initial clock reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamPair {
    pub left: ShadowStream,
    pub right: ShadowStream,
}

impl StreamPair {
    pub fn with_clock(circuit: &Circuit, left: &str, right: &str, initial_clock: f64) -> Result<Self, StreamError> {
        if left == right {
            return Err(StreamError::SharedSource(left.to_string()));
        }
        Ok(StreamPair {
            left: ShadowStream::with_clock(circuit, left, initial_clock)?,
            right: ShadowStream::with_clock(circuit, right, initial_clock)?,
        })
    }

    /// Draws the shared clock, then each tangible route.
    pub fn build(circuit: &Circuit, left: &str, right: &str, seed: u64) -> Result<Self, StreamError> {
        let mut rng = seeded(seed);
        let clock = rng.gen_range(0.0..TAU);
        let mut pair = Self::with_clock(circuit, left, right, clock)?;
        pair.left.tangible = rng.gen_range(0..pair.left.members.len());
        pair.right.tangible = rng.gen_range(0..pair.right.members.len());
        pair.left.seed = Some(seed);
        pair.right.seed = Some(seed);
        Ok(pair)
    }

    /// Which stream a route belongs to.
    pub fn stream_of(&self, path: &Path) -> Option<Side> {
        if self.left.members.iter().any(|m| &m.path == path) {
            Some(Side::Left)
        } else if self.right.members.iter().any(|m| &m.path == path) {
            Some(Side::Right)
        } else {
            None
        }
    }
}

/// Emission ports that the two tangible particles can leave by together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmissionPair {
    pub left_port: u8,
    pub right_port: u8,
}

/// Unordered pair of terminal ids, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TerminalPair(String, String);

impl TerminalPair {
    pub fn new(a: &str, b: &str) -> Self {
        if a <= b {
            TerminalPair(a.to_string(), b.to_string())
        } else {
            TerminalPair(b.to_string(), a.to_string())
        }
    }

    pub fn contains(&self, terminal: &str) -> bool {
        self.0 == terminal || self.1 == terminal
    }

    pub fn ids(&self) -> (&str, &str) {
        (&self.0, &self.1)
    }
}

/// One product term of a joint amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTerm<'a> {
    pub left: &'a Path,
    pub right: &'a Path,
    pub terminals: TerminalPair,
    pub amplitude: Amplitude,
}

/// Every product term `w · ⟨t|l⟩⟨t'|r⟩` over the allowed emission pairs,
/// with `w = 1/√(number of pairs)` the amplitude of each pairing at the
/// source.
pub fn joint_terms<'a>(pair: &'a StreamPair, allowed: &[EmissionPair]) -> Result<Vec<JointTerm<'a>>, StreamError> {
    if allowed.is_empty() {
        return Err(StreamError::EmptyPairing);
    }
    let weight = 1.0 / (allowed.len() as f64).sqrt();
    let mut terms = Vec::new();
    for p in allowed {
        let lefts = emitted_by(&pair.left, p.left_port)?;
        let rights = emitted_by(&pair.right, p.right_port)?;
        for l in &lefts {
            for r in &rights {
                terms.push(JointTerm {
                    left: &l.path,
                    right: &r.path,
                    terminals: TerminalPair::new(&l.path.terminal, &r.path.terminal),
                    amplitude: l.path_amplitude * r.path_amplitude * weight,
                });
            }
        }
    }
    Ok(terms)
}

fn emitted_by(stream: &ShadowStream, port: u8) -> Result<Vec<&StreamMember>, StreamError> {
    let found: Vec<_> = stream.members.iter().filter(|m| m.path.source_port == port).collect();
    if found.is_empty() {
        return Err(StreamError::UnknownEmissionPort {
            source_id: stream.source.clone(),
            port,
        });
    }
    Ok(found)
}

/// Joint amplitude per unordered terminal pair: the products of the
/// per-arm path amplitudes, summed over the allowed pairings.
pub fn joint_terminal_amplitudes(
    pair: &StreamPair,
    allowed: &[EmissionPair],
) -> Result<BTreeMap<TerminalPair, Amplitude>, StreamError> {
    let mut out = BTreeMap::new();
    for term in joint_terms(pair, allowed)? {
        *out.entry(term.terminals).or_insert_with(Amplitude::default) += term.amplitude;
    }
    Ok(out)
}

/// Names the arms and detectors of a two-sided, two-particle interferometer.
///
/// The left stream owns arms `a` and `b'`, the right stream owns `b` and
/// `a'`; `u`, `d` sit on the unprimed side and `u'`, `d'` on the primed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BghzLayout {
    pub a: u8,
    pub b_prime: u8,
    pub b: u8,
    pub a_prime: u8,
    pub u: String,
    pub d: String,
    pub u_prime: String,
    pub d_prime: String,
}

impl BghzLayout {
    /// Tangible particles leave by `a`–`a'` or by `b`–`b'`.
    pub fn allowed_pairs(&self) -> [EmissionPair; 2] {
        [
            EmissionPair {
                left_port: self.a,
                right_port: self.a_prime,
            },
            EmissionPair {
                left_port: self.b_prime,
                right_port: self.b,
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceReport {
    /// `max(|⟨u|b⟩ − ⟨u'|a'⟩|, |⟨d|b⟩ − ⟨d'|a'⟩|)`.
    pub congruence_deviation: f64,
    /// u–u' amplitude summed over the pairings, and its per-side rearrangement.
    pub uu: (Amplitude, Amplitude),
    /// u–d' amplitude summed over the pairings, and its per-side rearrangement.
    pub ud: (Amplitude, Amplitude),
    pub rearrangement_deviation: f64,
    pub max_deviation: f64,
    pub congruent: bool,
}

fn deviation(a: Amplitude, b: Amplitude) -> f64 {
    (a.re - b.re).abs().max((a.im - b.im).abs())
}

fn arm_amplitude(stream: &ShadowStream, port: u8, terminal: &str) -> Result<Amplitude, StreamError> {
    if !stream.members.iter().any(|m| m.path.source_port == port) {
        return Err(StreamError::UnknownEmissionPort {
            source_id: stream.source.clone(),
            port,
        });
    }
    Ok(stream
        .members
        .iter()
        .filter(|m| m.path.source_port == port && m.path.terminal == terminal)
        .map(|m| m.path_amplitude)
        .sum())
}

/// Checks that the shadow route `b` and the tangible route `a'` reach their
/// detectors with equal amplitudes, then that regrouping each joint amplitude
/// into per-side products leaves it unchanged:
///
/// ```text
/// ⟨u|a⟩⟨u'|a'⟩ + ⟨u|b⟩⟨u'|b'⟩ = ⟨u|a⟩⟨u|b⟩ + ⟨u'|a'⟩⟨u'|b'⟩
/// ⟨u|a⟩⟨d'|a'⟩ + ⟨u|b⟩⟨d'|b'⟩ = ⟨u|a⟩⟨d|b⟩ + ⟨u'|a'⟩⟨d'|b'⟩
/// ```
pub fn congruence_check(
    pair: &StreamPair,
    layout: &BghzLayout,
    symmetric: bool,
) -> Result<CongruenceReport, StreamError> {
    if !symmetric {
        return Err(StreamError::NotSymmetric);
    }
    for t in [&layout.u, &layout.d, &layout.u_prime, &layout.d_prime] {
        let known = pair
            .left
            .members
            .iter()
            .chain(&pair.right.members)
            .any(|m| &m.path.terminal == t);
        if !known {
            return Err(StreamError::UnknownTerminal(t.clone()));
        }
    }
    let (l, r) = (&pair.left, &pair.right);
    let u_a = arm_amplitude(l, layout.a, &layout.u)?;
    let u_b = arm_amplitude(r, layout.b, &layout.u)?;
    let d_b = arm_amplitude(r, layout.b, &layout.d)?;
    let up_ap = arm_amplitude(r, layout.a_prime, &layout.u_prime)?;
    let dp_ap = arm_amplitude(r, layout.a_prime, &layout.d_prime)?;
    let up_bp = arm_amplitude(l, layout.b_prime, &layout.u_prime)?;
    let dp_bp = arm_amplitude(l, layout.b_prime, &layout.d_prime)?;

    let congruence_deviation = deviation(u_b, up_ap).max(deviation(d_b, dp_ap));
    let uu = (u_a * up_ap + u_b * up_bp, u_a * u_b + up_ap * up_bp);
    let ud = (u_a * dp_ap + u_b * dp_bp, u_a * d_b + up_ap * dp_bp);
    let rearrangement_deviation = deviation(uu.0, uu.1).max(deviation(ud.0, ud.1));
    let max_deviation = congruence_deviation.max(rearrangement_deviation);
    Ok(CongruenceReport {
        congruence_deviation,
        uu,
        ud,
        rearrangement_deviation,
        max_deviation,
        congruent: congruence_deviation < TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::circuit::parse_circuit;

    fn mz(alpha: &str, theta: &str) -> Circuit {
        parse_circuit(&format!(
            "element S source\nelement BS1 beamsplitter\nelement Ma mirror\nelement PSa phaseshifter:{alpha}\n\
             element Mb mirror\nelement BS2 beamsplitter\nelement U detector:u\nelement D detector:d\n\
             link S:0 BS1:0\nlink BS1:0 Ma:0\nlink Ma:0 PSa:0\nlink PSa:0 BS2:0 phase={theta}\n\
             link BS1:1 Mb:0\nlink Mb:0 BS2:1 phase={theta}\nlink BS2:1 U:0\nlink BS2:0 D:0\n"
        ))
        .unwrap()
    }

    fn close(a: Amplitude, b: Amplitude) -> bool {
        deviation(a, b) < 1e-12
    }

    #[test]
    fn path_amplitudes_match_clock_readings() {
        let (alpha, theta) = (0.7, 0.3);
        let c = mz("0.7", "0.3");
        let paths = enumerate_paths(&c, "S").unwrap();
        let find = |arm: &str, det: &str| paths.iter().find(|p| p.traverses(arm) && p.terminal == det).unwrap();
        let i = Complex64::i();
        let e = |x: f64| Complex64::from_polar(1.0, x);
        assert!(close(
            path_amplitude(find("Ma", "U"), &c, 0.0),
            0.5 * e(theta + alpha + PI / 2.0)
        ));
        assert!(close(
            path_amplitude(find("Mb", "U"), &c, 0.0),
            0.5 * e(PI / 2.0 + theta)
        ));
        assert!(close(path_amplitude(find("Ma", "D"), &c, 0.0), 0.5 * e(theta + alpha)));
        assert!(close(path_amplitude(find("Mb", "D"), &c, 0.0), -0.5 * e(theta)));
        assert!(close(path_amplitude(find("Mb", "D"), &c, 0.0), 0.5 * i * i * e(theta)));
    }

    #[test]
    fn empty_route_has_unit_amplitude() {
        let c = parse_circuit("element S source\nelement U detector:u\nlink S:0 U:0\n").unwrap();
        let p = &enumerate_paths(&c, "S").unwrap()[0];
        assert_eq!(path_amplitude(p, &c, 0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn stream_interference() {
        let s = ShadowStream::with_clock(&mz("0", "0"), "S", 0.0).unwrap();
        let t = stream_terminal_amplitudes(&s);
        assert!((t["U"].norm() - 1.0).abs() < 1e-12);
        assert!(t["D"].norm() < 1e-12);
        let s = ShadowStream::with_clock(&mz("pi", "0"), "S", 0.0).unwrap();
        let t = stream_terminal_amplitudes(&s);
        assert!(t["U"].norm_sqr() < 1e-24);
        assert!((t["D"].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocked_arm_splits_half_quarter_quarter() {
        let c = parse_circuit(
            "element S source\nelement BS1 beamsplitter\nelement Ma mirror\nelement X blocker\nelement Mb mirror\n\
             element BS2 beamsplitter\nelement U detector:u\nelement D detector:d\n\
             link S:0 BS1:0\nlink BS1:0 Ma:0\nlink Ma:0 X:0\nlink BS1:1 Mb:0\nlink Mb:0 BS2:1\nlink BS2:1 U:0\nlink BS2:0 D:0\n",
        )
        .unwrap();
        let s = ShadowStream::with_clock(&c, "S", 1.0).unwrap();
        assert_eq!(s.members().len(), 3);
        let t = stream_terminal_amplitudes(&s);
        assert!((t["X"].norm_sqr() - 0.5).abs() < 1e-12);
        assert!((t["U"].norm_sqr() - 0.25).abs() < 1e-12);
        assert!((t["D"].norm_sqr() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn seeded_streams() {
        let c = mz("0.4", "0.1");
        let a = build_stream(&c, "S", 11).unwrap();
        assert_eq!(a, build_stream(&c, "S", 11).unwrap());
        assert_eq!(a.members().len(), 4);
        assert!(a.tangible_index() < 4);
        assert!((0.0..TAU).contains(&a.initial_clock()));

        let b = build_stream(&c, "S", 12).unwrap();
        let ratio = b.members()[0].amplitude / a.members()[0].amplitude;
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
        for (x, y) in a.members().iter().zip(b.members()) {
            assert!(close(x.amplitude * ratio, y.amplitude));
        }
    }

    #[test]
    fn which_path_marking_removes_interference() {
        let s = ShadowStream::with_clock(&mz("0", "0"), "S", 0.0).unwrap();
        let p = marked_terminal_probabilities(&s, &["Ma", "Mb"]);
        assert!((p["U"] - 0.5).abs() < 1e-12);
        assert!((p["D"] - 0.5).abs() < 1e-12);
        let unmarked = marked_terminal_probabilities(&s, &[]);
        assert!((unmarked["U"] - 1.0).abs() < 1e-12);
    }

    fn bghz_circuit(alpha: f64, beta: f64, extra: f64) -> Circuit {
        parse_circuit(&format!(
            "element S1 source\nelement S2 source\nelement PA phaseshifter:{alpha}\nelement PB phaseshifter:{beta}\n\
             element BSL beamsplitter\nelement BSR beamsplitter\n\
             element U detector:u\nelement D detector:d\nelement U2 detector:u'\nelement D2 detector:d'\n\
             link S1:0 PA:0\nlink PA:0 BSL:0\nlink S2:0 BSL:1\nlink S1:1 PB:0\nlink PB:0 BSR:0\nlink S2:1 BSR:1 phase={extra}\n\
             link BSL:1 U:0\nlink BSL:0 D:0\nlink BSR:1 U2:0\nlink BSR:0 D2:0\n"
        ))
        .unwrap()
    }

    fn layout() -> BghzLayout {
        BghzLayout {
            a: 0,
            b_prime: 1,
            b: 0,
            a_prime: 1,
            u: "U".into(),
            d: "D".into(),
            u_prime: "U2".into(),
            d_prime: "D2".into(),
        }
    }

    #[test]
    fn joint_amplitudes_perfect_correlation() {
        let c = bghz_circuit(0.8, 0.8, 0.0);
        let pair = StreamPair::with_clock(&c, "S1", "S2", 0.0).unwrap();
        let joint = joint_terminal_amplitudes(&pair, &layout().allowed_pairs()).unwrap();
        let p = |a: &str, b: &str| joint.get(&TerminalPair::new(a, b)).map_or(0.0, |z| z.norm_sqr());
        assert!((p("U", "U2") - 0.5).abs() < 1e-12);
        assert!((p("D", "D2") - 0.5).abs() < 1e-12);
        assert!(p("U", "D2") < 1e-12);
        assert!(p("D", "U2") < 1e-12);
    }

    #[test]
    fn pairing_errors() {
        let c = bghz_circuit(0.0, 0.0, 0.0);
        let pair = StreamPair::with_clock(&c, "S1", "S2", 0.0).unwrap();
        assert_eq!(joint_terminal_amplitudes(&pair, &[]), Err(StreamError::EmptyPairing));
        let bad = [EmissionPair {
            left_port: 5,
            right_port: 0,
        }];
        assert!(matches!(
            joint_terminal_amplitudes(&pair, &bad),
            Err(StreamError::UnknownEmissionPort { .. })
        ));
        assert!(matches!(
            StreamPair::with_clock(&c, "S1", "S1", 0.0),
            Err(StreamError::SharedSource(_))
        ));
    }

    #[test]
    fn congruence_at_zero_phases() {
        let c = bghz_circuit(0.0, 0.0, 0.0);
        let pair = StreamPair::with_clock(&c, "S1", "S2", 0.0).unwrap();
        let report = congruence_check(&pair, &layout(), true).unwrap();
        assert!(report.congruent);
        assert!(close(report.uu.0, Complex64::i()));
        assert!(close(report.uu.1, Complex64::i()));
        assert!(report.max_deviation < 1e-12);
        assert_eq!(
            congruence_check(&pair, &layout(), false),
            Err(StreamError::NotSymmetric)
        );
    }

    #[test]
    fn desymmetrized_arm_breaks_congruence() {
        let c = bghz_circuit(0.2, 1.1, 0.3);
        let pair = StreamPair::with_clock(&c, "S1", "S2", 0.0).unwrap();
        let report = congruence_check(&pair, &layout(), true).unwrap();
        assert!(!report.congruent);
        assert!(report.congruence_deviation > 0.1);
        assert!(report.max_deviation > 0.0);
    }

    #[test]
    fn stream_membership() {
        let c = bghz_circuit(0.0, 0.0, 0.0);
        let pair = StreamPair::build(&c, "S1", "S2", 3).unwrap();
        assert_eq!(pair.left.initial_clock(), pair.right.initial_clock());
        for m in pair.left.members() {
            assert_eq!(pair.stream_of(&m.path), Some(Side::Left));
        }
        for m in pair.right.members() {
            assert_eq!(pair.stream_of(&m.path), Some(Side::Right));
        }
    }
}
