use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use proptest::prelude::*;
use rand::Rng;
use shadowpath::circuit::parse_circuit;
use shadowpath::circuit::random::{random_circuit, RandomCircuitConfig};
use shadowpath::experiments::{
    chi_square, chsh, chsh_monte_carlo, chsh_with_signs, correlator, run_bghz, run_bghz_with_arm_phases, run_circuit,
    run_ifm, run_mach_zehnder, run_wheeler, sample, sample_counts, write_csv, write_json, ArmPhases, ChshAngles,
    ChshSigns, Engine, Experiment, Metadata, ResultRow,
};
use shadowpath::hilbert::Arm;
use shadowpath::outcome::{Outcome, OutcomeDistribution, Parameters, Provenance};
use shadowpath::rng::seeded;

const ENGINES: [Engine; 2] = [Engine::Streams { seed: 2024 }, Engine::Hilbert];

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

fn tsirelson() -> ChshAngles {
    ChshAngles {
        a: 0.0,
        a_prime: FRAC_PI_2,
        b: FRAC_PI_4,
        b_prime: 3.0 * PI / 4.0,
    }
}

fn dist(pairs: &[(&str, f64)]) -> OutcomeDistribution {
    let map = pairs.iter().map(|(l, p)| (Outcome::single(*l), *p)).collect();
    OutcomeDistribution::new(map, Provenance::ClosedForm, Parameters::default()).unwrap()
}

#[test]
fn mach_zehnder_follows_the_cosine_law() {
    for engine in ENGINES {
        for alpha in grid(64) {
            let d = run_mach_zehnder(alpha, engine).unwrap();
            assert!((d.single("u") - (alpha / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((d.single("d") - (alpha / 2.0).sin().powi(2)).abs() < 1e-12);
        }
        let d = run_mach_zehnder(PI / 3.0, engine).unwrap();
        assert!((d.single("u") - 0.75).abs() < 1e-12);
    }
}

#[test]
fn peeking_destroys_the_fringe() {
    for engine in ENGINES {
        for alpha in grid(64) {
            let peeked = run_wheeler(alpha, true, engine).unwrap();
            assert!((peeked.single("u") - 0.5).abs() < 1e-12);
            assert!((peeked.single("d") - 0.5).abs() < 1e-12);
            let plain = run_wheeler(alpha, false, engine).unwrap();
            assert!(plain.max_abs_difference(&run_mach_zehnder(alpha, engine).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn interaction_free_measurement() {
    for engine in ENGINES {
        let open = run_ifm(None, engine).unwrap();
        assert!((open.single("u") - 1.0).abs() < 1e-12);
        assert!(open.single("d") < 1e-12);
        assert_eq!(open.single("absorbed"), 0.0);
        for arm in [Arm::A, Arm::B] {
            let d = run_ifm(Some(arm), engine).unwrap();
            assert!((d.single("absorbed") - 0.5).abs() < 1e-12);
            assert!((d.single("u") - 0.25).abs() < 1e-12);
            assert!((d.single("d") - 0.25).abs() < 1e-12);
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn two_particle_law_on_the_grid() {
    for engine in ENGINES {
        for &alpha in &grid(8) {
            for &beta in &grid(8) {
                let d = run_bghz(alpha, beta, engine).unwrap();
                let same = 0.5 * ((beta - alpha) / 2.0).cos().powi(2);
                let diff = 0.5 * ((beta - alpha) / 2.0).sin().powi(2);
                assert!((d.joint("u", "u'") - same).abs() < 1e-12);
                assert!((d.joint("d", "d'") - same).abs() < 1e-12);
                assert!((d.joint("u", "d'") - diff).abs() < 1e-12);
                assert!((d.joint("d", "u'") - diff).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn correlation_depends_on_the_difference_only() {
    for engine in ENGINES {
        for &alpha in &grid(8) {
            for &beta in &grid(8) {
                let e = correlator(&run_bghz(alpha, beta, engine).unwrap());
                let shifted = correlator(&run_bghz(0.0, beta - alpha, engine).unwrap());
                assert!((e - shifted).abs() < 1e-12);
                assert!((e - (beta - alpha).cos()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn canned_experiments_match_their_closed_forms() {
    let experiments = [
        Experiment::MachZehnder { alpha: 1.1 },
        Experiment::Wheeler { alpha: 2.0, peek: true },
        Experiment::Wheeler {
            alpha: 2.0,
            peek: false,
        },
        Experiment::Ifm { blocked: None },
        Experiment::Ifm { blocked: Some(Arm::B) },
        Experiment::Bghz { alpha: 0.3, beta: 2.9 },
    ];
    for e in experiments {
        for engine in ENGINES {
            assert!(
                e.run(engine).unwrap().max_abs_difference(&e.closed_form()) < 1e-12,
                "{e:?} on {engine}"
            );
        }
    }
}

#[test]
fn circuit_files_run_on_both_engines() {
    let cases = [
        (
            include_str!("../../../circuits/mach_zehnder.circ"),
            vec![("u", 0.75), ("d", 0.25)],
        ),
        (
            include_str!("../../../circuits/ifm_blocked.circ"),
            vec![("absorbed", 0.5), ("u", 0.25), ("d", 0.25)],
        ),
    ];
    for (text, expected) in cases {
        let c = parse_circuit(text).unwrap();
        for engine in ENGINES {
            let d = run_circuit(&c, "S", engine).unwrap();
            for (label, p) in &expected {
                assert!((d.single(label) - p).abs() < 1e-12, "{label} on {engine}");
            }
        }
    }
}

#[test]
fn certain_outcome_is_always_sampled() {
    let set = sample(&dist(&[("u", 1.0)]), 5000, 1).unwrap();
    assert!(set.records().iter().all(|r| set.outcome(r) == &Outcome::single("u")));
}

#[test]
fn fair_split_frequencies_within_four_sigma() {
    let counts = sample_counts(&dist(&[("u", 0.5), ("d", 0.5)]), 1_000_000, 77).unwrap();
    for o in ["u", "d"] {
        let f = counts[&Outcome::single(o)] as f64 / 1e6;
        assert!((f - 0.5).abs() < 0.002, "{o}: {f}");
    }
}

#[test]
fn sampling_is_reproducible_and_thread_independent() {
    let d = run_bghz(0.1, 1.7, Engine::streams(5)).unwrap();
    let a = sample(&d, 200_000, 31).unwrap();
    assert_eq!(a, sample(&d, 200_000, 31).unwrap());
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = single.install(|| sample(&d, 200_000, 31).unwrap());
    assert_eq!(a, b);
    assert_ne!(a.records(), sample(&d, 200_000, 32).unwrap().records());
    assert_eq!(a.counts(), sample_counts(&d, 200_000, 31).unwrap());
}

#[test]
fn hidden_routes_end_where_the_outcome_says() {
    let d = run_ifm(Some(Arm::A), Engine::streams(9)).unwrap();
    let set = sample(&d, 20_000, 4).unwrap();
    let mut seen = BTreeMap::new();
    for r in set.records() {
        let hidden = set.hidden(r).expect("stream distributions carry routes");
        let terminal = hidden.rsplit('>').next().unwrap();
        let label = match terminal {
            "U" => "u",
            "D" => "d",
            "X" => "absorbed",
            other => panic!("unexpected terminal {other}"),
        };
        assert_eq!(set.outcome(r), &Outcome::single(label));
        *seen.entry(label).or_insert(0) += 1;
    }
    assert_eq!(seen.len(), 3);
    let two = run_bghz(0.0, 0.0, Engine::streams(9)).unwrap();
    let set = sample(&two, 1000, 4).unwrap();
    for r in set.records() {
        assert!(set.hidden(r).unwrap().contains(" & "));
        assert!(matches!(set.outcome(r), Outcome::Joint(..)));
    }
}

#[test]
fn chi_square_accepts_every_canned_distribution() {
    let mut canned = vec![
        run_mach_zehnder(PI / 3.0, Engine::Hilbert).unwrap(),
        run_wheeler(0.7, true, Engine::Hilbert).unwrap(),
        run_ifm(Some(Arm::A), Engine::Hilbert).unwrap(),
        run_bghz(0.0, FRAC_PI_4, Engine::Hilbert).unwrap(),
        run_bghz(0.5, 2.0, Engine::streams(3)).unwrap(),
    ];
    canned.push(run_mach_zehnder(1.0, Engine::streams(8)).unwrap());
    for (k, d) in canned.iter().enumerate() {
        let counts = sample_counts(d, 1_000_000, 1000 + k as u64).unwrap();
        let test = chi_square(d, &counts);
        assert!(test.p_value > 1e-4, "case {k}: {test:?}");
    }
    let wrong = dist(&[("u", 0.5), ("d", 0.5)]);
    let skewed = sample_counts(&dist(&[("u", 0.52), ("d", 0.48)]), 1_000_000, 3).unwrap();
    assert!(chi_square(&wrong, &skewed).p_value < 1e-4);
}

#[test]
fn zero_shots_is_an_error() {
    assert!(sample(&dist(&[("u", 1.0)]), 0, 1).is_err());
}

#[test]
fn chsh_reaches_two_root_two() {
    for engine in ENGINES {
        let r = chsh(tsirelson(), engine).unwrap();
        assert!((r.s - 2.0 * SQRT_2).abs() < 1e-9, "{engine}: {}", r.s);
        assert!(r.violation);
        assert!(r.correlators.iter().all(|e| e.abs() <= 1.0 + 1e-12));
    }
    let flat = ChshAngles {
        a: 1.0,
        a_prime: 1.0,
        b: 1.0,
        b_prime: 1.0,
    };
    assert!((chsh(flat, Engine::Hilbert).unwrap().s - 2.0).abs() < 1e-12);
}

#[test]
fn other_sign_layouts() {
    // With the minus sign on E(a,b), swapping b and b' restores the extreme.
    let signs = ChshSigns([-1.0, 1.0, 1.0, 1.0]);
    let angles = ChshAngles {
        a: 0.0,
        a_prime: FRAC_PI_2,
        b: 3.0 * PI / 4.0,
        b_prime: FRAC_PI_4,
    };
    let r = chsh_with_signs(angles, signs, Engine::Hilbert).unwrap();
    let expected: f64 = angles
        .settings()
        .iter()
        .zip(signs.0)
        .map(|((x, y), k)| k * (y - x).cos())
        .sum();
    assert!((r.s - expected).abs() < 1e-12);
    assert!((r.s.abs() - 2.0 * SQRT_2).abs() < 1e-9);
}

#[test]
fn random_settings_respect_the_quantum_bound() {
    let mut rng = seeded(10_000);
    let mut max = 0.0f64;
    let mut violations = 0;
    for _ in 0..10_000 {
        let angles = ChshAngles {
            a: rng.gen_range(0.0..TAU),
            a_prime: rng.gen_range(0.0..TAU),
            b: rng.gen_range(0.0..TAU),
            b_prime: rng.gen_range(0.0..TAU),
        };
        let s = chsh(angles, Engine::Hilbert).unwrap().s.abs();
        max = max.max(s);
        violations += usize::from(s > 2.0);
    }
    assert!(max <= 2.0 * SQRT_2 + 1e-9, "max |S| {max}");
    assert!(violations > 0);
}

#[test]
fn monte_carlo_estimate_violates_the_bound() {
    let mc = chsh_monte_carlo(tsirelson(), ChshSigns::default(), Engine::streams(1), 1_000_000, 42).unwrap();
    assert!(mc.report.s >= 2.4);
    assert!((mc.report.s - 2.0 * SQRT_2).abs() < 4.0 * mc.s_error);
    let again = chsh_monte_carlo(tsirelson(), ChshSigns::default(), Engine::streams(1), 1_000_000, 42).unwrap();
    assert_eq!(mc, again);
}

fn metadata() -> Metadata {
    Metadata {
        tool: "shadowpath".into(),
        version: "test".into(),
        seed: 7,
        engines: vec!["streams".into(), "hilbert".into()],
        config: "experiment = \"mz\"\nalpha = 0.5".into(),
    }
}

#[test]
fn csv_and_json_exports() {
    let mut rows = Vec::new();
    for engine in ENGINES {
        let d = run_mach_zehnder(PI / 3.0, engine).unwrap();
        rows.extend(ResultRow::from_distribution(&d, &[("alpha", PI / 3.0)]));
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &metadata(), &rows, "probability").unwrap();
    let text = String::from_utf8(csv.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# shadowpath test");
    assert!(lines.contains(&"# config: alpha = 0.5"));
    assert!(lines.contains(&"alpha,outcome,probability,engine,seed"));
    assert!(lines.contains(&"1.04719755120,u,0.750000000000,streams,2024"));
    assert!(lines.contains(&"1.04719755120,d,0.250000000000,hilbert,"));
    let mut again = Vec::new();
    write_csv(&mut again, &metadata(), &rows, "probability").unwrap();
    assert_eq!(csv, again);

    let mut json = Vec::new();
    write_json(&mut json, &metadata(), &rows, "probability").unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(doc["metadata"]["seed"], 7);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["rows"][0]["parameters"]["alpha"], PI / 3.0);
}

fn random_arms(rng: &mut impl Rng) -> ArmPhases {
    ArmPhases {
        a: rng.gen_range(0.0..TAU),
        b: rng.gen_range(0.0..TAU),
        a_prime: rng.gen_range(0.0..TAU),
        b_prime: rng.gen_range(0.0..TAU),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engines_agree_on_random_circuits(seed in any::<u64>(), stream_seed in any::<u64>()) {
        let c = random_circuit(&mut seeded(seed), RandomCircuitConfig::default());
        let streams = run_circuit(&c, "S", Engine::streams(stream_seed)).unwrap();
        let hilbert = run_circuit(&c, "S", Engine::Hilbert).unwrap();
        prop_assert!(streams.max_abs_difference(&hilbert) < 1e-12);
    }

    #[test]
    fn engines_agree_on_two_particle_arm_phases(seed in any::<u64>(), alpha in 0.0..TAU, beta in 0.0..TAU) {
        let arms = random_arms(&mut seeded(seed));
        let streams = run_bghz_with_arm_phases(alpha, beta, arms, Engine::streams(seed)).unwrap();
        let hilbert = run_bghz_with_arm_phases(alpha, beta, arms, Engine::Hilbert).unwrap();
        prop_assert!(streams.max_abs_difference(&hilbert) < 1e-12);
    }

    #[test]
    fn engines_agree_on_canned_experiments(alpha in 0.0..TAU, beta in 0.0..TAU, peek in any::<bool>(), seed in any::<u64>()) {
        for e in [
            Experiment::MachZehnder { alpha },
            Experiment::Wheeler { alpha, peek },
            Experiment::Bghz { alpha, beta },
        ] {
            let s = e.run(Engine::streams(seed)).unwrap();
            let h = e.run(Engine::Hilbert).unwrap();
            prop_assert!(s.max_abs_difference(&h) < 1e-12);
        }
    }
}
