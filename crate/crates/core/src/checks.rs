//! The invariant suite behind `shadowpath check`.
//!
//! Each check compares an engine against a closed form, the other engine,
//! or a reference solver, and reports the worst deviation it saw.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use rand::Rng;
use serde::Serialize;

use crate::amplitude::{max_deviation_up_to_phase, TOLERANCE};
use crate::circuit::random::{random_circuit, RandomCircuitConfig};
use crate::experiments::setups::{bghz_circuit, mach_zehnder_circuit};
use crate::experiments::{
    chsh, chsh_monte_carlo, closed_form, correlator, run_bghz, run_bghz_with_arm_phases, run_circuit, run_ifm,
    run_mach_zehnder, run_wheeler, ArmPhases, ChshAngles, ChshSigns, Engine, Experiment,
};
use crate::hilbert::Arm;
use crate::pathintegral::{
    expectation_x, l2_distance_up_to_phase, mean_velocity, propagate, width, CrankNicolson, Grid, Kernel,
    LatticeWavefunction, Potential, Propagator, Units,
};
use crate::rng::{seeded, substream};
use crate::streams::{congruence_check, stream_terminal_amplitudes, StreamPair};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub seed: u64,
    /// Coincidences per CHSH setting in the Monte Carlo estimate.
    pub shots: u64,
    /// Randomized cases in the engine cross-validation.
    pub random_cases: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 1,
            shots: 1_000_000,
            random_cases: 500,
        }
    }
}

fn result(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

fn engines(seed: u64) -> [Engine; 2] {
    [Engine::streams(seed), Engine::Hilbert]
}

fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn mach_zehnder_law(opts: &CheckOptions) -> CheckResult {
    let dev = worst(grid(64).into_iter().flat_map(|alpha| {
        engines(opts.seed).map(|e| {
            run_mach_zehnder(alpha, e)
                .map(|d| d.max_abs_difference(&closed_form::mach_zehnder(alpha)))
                .unwrap_or(f64::INFINITY)
        })
    }));
    result(
        "mach-zehnder law",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} over 64 phases, both engines"),
    )
}

pub fn path_clock_amplitudes(opts: &CheckOptions) -> CheckResult {
    let dev = worst(grid(64).into_iter().map(|alpha| {
        let circuit = mach_zehnder_circuit(alpha);
        let Ok(stream) = crate::streams::build_stream(&circuit, "S", opts.seed) else {
            return f64::INFINITY;
        };
        let t = stream_terminal_amplitudes(&stream);
        let (u, d) = closed_form::mach_zehnder_amplitudes(alpha, 0.0);
        max_deviation_up_to_phase(&[t["U"], t["D"]], &[u, d]).0
    }));
    result(
        "path-clock amplitudes",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} up to global phase"),
    )
}

pub fn two_particle_law(opts: &CheckOptions) -> CheckResult {
    let angles = grid(8);
    let mut dev = 0.0f64;
    for &alpha in &angles {
        for &beta in &angles {
            for e in engines(opts.seed) {
                let d = run_bghz(alpha, beta, e).map(|d| d.max_abs_difference(&closed_form::bghz(alpha, beta)));
                dev = dev.max(d.unwrap_or(f64::INFINITY));
            }
        }
    }
    result(
        "two-particle law",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} on 8x8 settings, both engines"),
    )
}

pub fn locality_rearrangement(opts: &CheckOptions) -> CheckResult {
    let angles = grid(8);
    let mut dev = 0.0f64;
    for &alpha in &angles {
        for &beta in &angles {
            let (circuit, layout) = bghz_circuit(alpha, beta, ArmPhases::default());
            let report = StreamPair::build(&circuit, "S1", "S2", opts.seed)
                .and_then(|pair| congruence_check(&pair, &layout, true));
            dev = dev.max(report.map_or(f64::INFINITY, |r| r.max_deviation));
        }
    }
    result(
        "locality rearrangement",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} on 8x8 settings"),
    )
}

pub fn bell_violation(opts: &CheckOptions) -> CheckResult {
    let angles = ChshAngles {
        a: 0.0,
        a_prime: FRAC_PI_2,
        b: FRAC_PI_4,
        b_prime: 3.0 * PI / 4.0,
    };
    let exact = chsh(angles, Engine::Hilbert).map(|r| r.s).unwrap_or(f64::NAN);
    let mc = chsh_monte_carlo(
        angles,
        ChshSigns::default(),
        Engine::streams(opts.seed),
        opts.shots,
        opts.seed,
    );
    let (estimate, sigma) = mc.map_or((f64::NAN, f64::NAN), |m| (m.report.s, m.s_error));
    let passed =
        (exact - 2.0 * SQRT_2).abs() < 1e-9 && estimate >= 2.4 && (estimate - 2.0 * SQRT_2).abs() < 4.0 * sigma;
    result(
        "bell violation",
        passed,
        format!(
            "S = {exact:.9}; Monte Carlo {estimate:.4} ± {sigma:.4} at {} shots per setting",
            opts.shots
        ),
    )
}

pub fn interaction_free(opts: &CheckOptions) -> CheckResult {
    let mut dev = 0.0f64;
    for blocked in [None, Some(Arm::A), Some(Arm::B)] {
        for e in engines(opts.seed) {
            let d = run_ifm(blocked, e).map(|d| d.max_abs_difference(&closed_form::ifm(blocked)));
            dev = dev.max(d.unwrap_or(f64::INFINITY));
        }
    }
    result(
        "interaction-free measurement",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e}"),
    )
}

pub fn delayed_choice(opts: &CheckOptions) -> CheckResult {
    let mut dev = 0.0f64;
    for alpha in grid(64) {
        for e in engines(opts.seed) {
            for peek in [true, false] {
                let d = run_wheeler(alpha, peek, e).map(|d| d.max_abs_difference(&closed_form::wheeler(alpha, peek)));
                dev = dev.max(d.unwrap_or(f64::INFINITY));
            }
        }
    }
    result(
        "delayed choice",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} over 64 phases"),
    )
}

/// Random single-particle circuits, random two-particle settings with
/// random arm phases, and random canned experiments, split evenly.
pub fn engine_agreement(opts: &CheckOptions) -> CheckResult {
    let mut dev = 0.0f64;
    for case in 0..opts.random_cases {
        let mut rng = substream(opts.seed, case as u64);
        let engine = Engine::streams(rng.gen());
        let pair = match case % 3 {
            0 => {
                let c = random_circuit(&mut rng, RandomCircuitConfig::default());
                (run_circuit(&c, "S", engine), run_circuit(&c, "S", Engine::Hilbert))
            }
            1 => {
                let (alpha, beta) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
                let arms = ArmPhases {
                    a: rng.gen_range(0.0..TAU),
                    b: rng.gen_range(0.0..TAU),
                    a_prime: rng.gen_range(0.0..TAU),
                    b_prime: rng.gen_range(0.0..TAU),
                };
                (
                    run_bghz_with_arm_phases(alpha, beta, arms, engine),
                    run_bghz_with_arm_phases(alpha, beta, arms, Engine::Hilbert),
                )
            }
            _ => {
                let alpha = rng.gen_range(0.0..TAU);
                let e = match rng.gen_range(0..3) {
                    0 => Experiment::MachZehnder { alpha },
                    1 => Experiment::Wheeler { alpha, peek: rng.gen() },
                    _ => Experiment::Ifm {
                        blocked: [None, Some(Arm::A), Some(Arm::B)][rng.gen_range(0..3)],
                    },
                };
                (e.run(engine), e.run(Engine::Hilbert))
            }
        };
        dev = dev.max(match pair {
            (Ok(s), Ok(h)) => s.max_abs_difference(&h),
            _ => f64::INFINITY,
        });
    }
    result(
        "engine cross-validation",
        dev < TOLERANCE,
        format!("max deviation {dev:.2e} over {} random cases", opts.random_cases),
    )
}

fn coherent_state(grid: Grid, omega: f64, x0: f64, t: f64) -> Option<LatticeWavefunction> {
    let var = 1.0 / (2.0 * omega);
    let (xc, pc) = (x0 * (omega * t).cos(), -omega * x0 * (omega * t).sin());
    let values = grid
        .points()
        .map(|x| crate::amplitude::Amplitude::from_polar((-(x - xc).powi(2) / (4.0 * var)).exp(), pc * x))
        .collect();
    LatticeWavefunction::new(grid, values, Units::default()).ok()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    cov / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

pub fn path_integral(_: &CheckOptions) -> CheckResult {
    let run = || -> Result<(f64, f64, f64), crate::pathintegral::PathIntegralError> {
        let grid = Grid::new(-32.0, 32.0, 1024)?;
        let psi = LatticeWavefunction::gaussian(grid, Units::default(), 0.0, 1.0, 0.0)?;
        let p = Propagator::new(grid, Units::default(), &Potential::Free, 0.05, Kernel::default())?;
        let mut width_err = 0.0f64;
        let out = p.run(&psi, 100, |_, s| {
            let t = s.time();
            let expected = (1.0 + (t / 2.0).powi(2)).sqrt();
            width_err = width_err.max((width(s) - expected).abs() / expected);
        })?;
        let cn = CrankNicolson::new(grid, Units::default(), &Potential::Free, 0.01)?.propagate(&psi, 5.0)?;
        let cn_err = l2_distance_up_to_phase(&out.wavefunction, &cn);

        let hgrid = Grid::new(-10.0, 10.0, 1024)?;
        let start = coherent_state(hgrid, 0.5, 2.0, 0.0).ok_or(crate::pathintegral::PathIntegralError::ZeroNorm)?;
        let exact = coherent_state(hgrid, 0.5, 2.0, 12.0).ok_or(crate::pathintegral::PathIntegralError::ZeroNorm)?;
        let eps = [0.1, 0.05, 0.025];
        let mut errs = Vec::new();
        for e in eps {
            let out = propagate(&start, &Potential::Harmonic { omega: 0.5 }, 12.0, e)?;
            errs.push(l2_distance_up_to_phase(&out, &exact).ln());
        }
        let order = slope(&eps.map(f64::ln), &errs);
        Ok((width_err, cn_err, order))
    };
    match run() {
        Ok((w, cn, order)) => result(
            "path integral",
            w < 1e-3 && cn < 1e-3 && order >= 1.8,
            format!("width error {w:.2e}, distance to Crank-Nicolson {cn:.2e}, order {order:.3}"),
        ),
        Err(e) => result("path integral", false, e.to_string()),
    }
}

fn velocity_gap(
    potential: Potential,
    psi: &LatticeWavefunction,
    epsilon: f64,
    steps: usize,
) -> Result<f64, crate::pathintegral::PathIntegralError> {
    let p = Propagator::new(*psi.grid(), psi.units(), &potential, epsilon, Kernel::default())?;
    let mut xs = vec![expectation_x(psi)];
    let mut vs = vec![mean_velocity(psi)];
    p.run(psi, steps, |_, s| {
        xs.push(expectation_x(s));
        vs.push(mean_velocity(s));
    })?;
    Ok(worst(
        (1..steps).map(|k| (vs[k] - (xs[k + 1] - xs[k - 1]) / (2.0 * epsilon)).abs()),
    ))
}

pub fn expectation_identities(_: &CheckOptions) -> CheckResult {
    let run = || -> Result<(f64, f64), crate::pathintegral::PathIntegralError> {
        let grid = Grid::new(-12.0, 12.0, 2048)?;
        let free = LatticeWavefunction::gaussian(grid, Units::default(), -1.0, 1.0, 0.7)?;
        let orbit = coherent_state(grid, 0.5, 2.0, 0.0).ok_or(crate::pathintegral::PathIntegralError::ZeroNorm)?;
        Ok((
            velocity_gap(Potential::Free, &free, 0.02, 60)?,
            velocity_gap(Potential::Harmonic { omega: 0.5 }, &orbit, 0.02, 60)?,
        ))
    };
    match run() {
        Ok((f, h)) => result(
            "expectation identities",
            f < 1e-4 && h < 1e-4,
            format!("velocity vs d<x>/dt: free {f:.2e}, harmonic {h:.2e}"),
        ),
        Err(e) => result("expectation identities", false, e.to_string()),
    }
}

/// Correlators depend only on the difference of the settings.
pub fn setting_difference(opts: &CheckOptions) -> CheckResult {
    let mut rng = seeded(opts.seed);
    let mut dev = 0.0f64;
    for _ in 0..64 {
        let (a, b) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let pair = (run_bghz(a, b, Engine::Hilbert), run_bghz(0.0, b - a, Engine::Hilbert));
        dev = dev.max(match pair {
            (Ok(x), Ok(y)) => (correlator(&x) - correlator(&y)).abs(),
            _ => f64::INFINITY,
        });
    }
    result(
        "setting difference",
        dev < TOLERANCE,
        format!("max |E(a,b) - E(0,b-a)| {dev:.2e}"),
    )
}

/// Every check, in a fixed order.
pub fn run_all(opts: &CheckOptions) -> Vec<CheckResult> {
    let checks: [fn(&CheckOptions) -> CheckResult; 11] = [
        mach_zehnder_law,
        path_clock_amplitudes,
        two_particle_law,
        locality_rearrangement,
        bell_violation,
        interaction_free,
        delayed_choice,
        engine_agreement,
        path_integral,
        expectation_identities,
        setting_difference,
    ];
    checks.iter().map(|c| c(opts)).collect()
}
