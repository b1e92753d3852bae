use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use shadowpath::checks::{run_all, CheckOptions};
use shadowpath::circuit::parse_circuit;
use shadowpath::experiments::{
    chsh_monte_carlo, chsh_with_signs, metadata_lines, run_circuit, sample_counts, write_csv, write_json, ArmPhases,
    ChshAngles, ChshSigns, Engine, Experiment, ExperimentError, Metadata, ResultRow,
};
use shadowpath::hilbert::{Arm, HilbertError};
use shadowpath::outcome::OutcomeDistribution;
use shadowpath::pathintegral::{
    expectation_x, mean_velocity, read_tabulated, steps_for, width, Grid, Kernel, LatticeWavefunction,
    PathIntegralError, Potential, Propagator, Units, SNAPSHOT_HEADER,
};
use shadowpath::streams::StreamError;

use crate::settings::{Failure, Settings};

pub const DEFAULT_SEED: u64 = 2024;

fn experiment_failure(e: ExperimentError) -> Failure {
    match e {
        ExperimentError::Circuit(_)
        | ExperimentError::Stream(StreamError::Circuit(_))
        | ExperimentError::Hilbert(HilbertError::Circuit(_))
        | ExperimentError::Hilbert(HilbertError::Stream(StreamError::Circuit(_))) => Failure::Circuit(e.to_string()),
        other => Failure::Runtime(other.to_string()),
    }
}

fn path_failure(e: PathIntegralError) -> Failure {
    match e {
        PathIntegralError::Unstable { .. } => Failure::Unstable(e.to_string()),
        PathIntegralError::Io(m) => Failure::Runtime(m),
        other => Failure::Config(other.to_string()),
    }
}

/// Resolved global options shared by every subcommand.
pub struct Common {
    pub seed: u64,
    pub engines: Vec<Engine>,
    pub out: Option<PathBuf>,
    pub json: bool,
}

impl Common {
    pub fn resolve(s: &Settings) -> Result<Self, Failure> {
        let seed = s.count("seed", DEFAULT_SEED)?;
        let engines = match s.choice("engine", &["both", "streams", "hilbert"])?.as_str() {
            "streams" => vec![Engine::streams(seed)],
            "hilbert" => vec![Engine::Hilbert],
            _ => vec![Engine::streams(seed), Engine::Hilbert],
        };
        let json = s.choice("format", &["csv", "json"])? == "json";
        let out = s.text("out").map(PathBuf::from);
        Ok(Common {
            seed,
            engines,
            out,
            json,
        })
    }

    fn engine_names(&self) -> Vec<String> {
        self.engines
            .iter()
            .map(|e| format!("{} {}", e.provenance(), shadowpath::VERSION))
            .collect()
    }

    fn metadata(&self, s: &Settings, command: &str, engines: Vec<String>) -> Metadata {
        Metadata {
            tool: "shadowpath".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: self.seed,
            engines,
            config: s.render(command),
        }
    }

    /// Opens the output target; `-` is standard output.
    fn sink(&self, default_stdout: bool) -> io::Result<Option<Box<dyn Write>>> {
        match self.out.as_deref() {
            Some(p) if p.as_os_str() == "-" => Ok(Some(Box::new(io::stdout().lock()))),
            Some(p) => Ok(Some(Box::new(BufWriter::new(File::create(p)?)))),
            None if default_stdout => Ok(Some(Box::new(io::stdout().lock()))),
            None => Ok(None),
        }
    }

    fn writes_to_stdout(&self, default_stdout: bool) -> bool {
        match self.out.as_deref() {
            Some(p) => p.as_os_str() == "-",
            None => default_stdout,
        }
    }

    fn emit(
        &self,
        meta: &Metadata,
        rows: &[ResultRow],
        value_column: &str,
        default_stdout: bool,
    ) -> Result<(), Failure> {
        if let Some(mut out) = self.sink(default_stdout)? {
            if self.json {
                write_json(&mut out, meta, rows, value_column)?;
            } else {
                write_csv(&mut out, meta, rows, value_column)?;
            }
            out.flush()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RunTarget {
    Mz,
    Wheeler,
    Ifm,
    Bghz,
    Chsh,
    Circuit,
    Pathintegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepTarget {
    Mz,
    Wheeler,
    Bghz,
    Chsh,
}

fn blocked(s: &Settings) -> Result<Option<Arm>, Failure> {
    Ok(match s.choice("blocked", &["none", "a", "b"])?.as_str() {
        "a" => Some(Arm::A),
        "b" => Some(Arm::B),
        _ => None,
    })
}

fn chsh_inputs(s: &Settings) -> Result<(ChshAngles, ChshSigns), Failure> {
    let a = s.angle_list("angles", 4, "0,pi/2,pi/4,3pi/4")?;
    let signs = s.text_or("signs", "1,-1,1,1");
    let parsed: Result<Vec<f64>, _> = signs.split(',').map(|x| x.trim().parse::<f64>()).collect();
    let signs = match parsed {
        Ok(v) if v.len() == 4 && v.iter().all(|k| *k == 1.0 || *k == -1.0) => [v[0], v[1], v[2], v[3]],
        _ => return Err(s.fail("signs", "expected four comma-separated values, each 1 or -1")),
    };
    Ok((
        ChshAngles {
            a: a[0],
            a_prime: a[1],
            b: a[2],
            b_prime: a[3],
        },
        ChshSigns(signs),
    ))
}

const CORRELATOR_NAMES: [&str; 4] = ["E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"];

fn angle_params(angles: &ChshAngles) -> [(&'static str, f64); 4] {
    [
        ("a", angles.a),
        ("a'", angles.a_prime),
        ("b", angles.b),
        ("b'", angles.b_prime),
    ]
}

fn chsh_rows(angles: &ChshAngles, correlators: &[f64; 4], s_value: f64, engine: &Engine) -> Vec<ResultRow> {
    let params: Vec<(String, f64)> = angle_params(angles).iter().map(|(k, v)| (k.to_string(), *v)).collect();
    CORRELATOR_NAMES
        .iter()
        .zip(correlators)
        .map(|(n, e)| (n.to_string(), *e))
        .chain(std::iter::once(("S".to_string(), s_value)))
        .map(|(outcome, value)| ResultRow {
            parameters: params.clone(),
            outcome,
            value,
            engine: engine.provenance().to_string(),
            seed: engine.seed(),
        })
        .collect()
}

fn verdict(s: f64) -> &'static str {
    if s.abs() > 2.0 {
        "VIOLATION"
    } else {
        "no violation"
    }
}

/// Outcomes in reverse label order, so `u` leads `d` and `absorbed` comes last.
fn summary_line(engine: &Engine, rows: &[ResultRow]) -> String {
    let cells: Vec<String> = rows
        .iter()
        .rev()
        .map(|r| format!("{}:{:.6}", r.outcome, r.value))
        .collect();
    format!("{:<8} {}", engine.provenance().to_string(), cells.join(" "))
}

fn distribution_rows(
    dist: &OutcomeDistribution,
    params: &[(&str, f64)],
    shots: Option<u64>,
    seed: u64,
) -> Result<Vec<ResultRow>, Failure> {
    let mut rows = ResultRow::from_distribution(dist, params);
    if let Some(n) = shots {
        let counts = sample_counts(dist, n, seed).map_err(|e| Failure::Config(format!("--shots: {e}")))?;
        for row in &mut rows {
            let hits = counts
                .iter()
                .find(|(o, _)| o.to_string() == row.outcome)
                .map_or(0, |(_, c)| *c);
            row.value = hits as f64 / n as f64;
            row.seed = Some(seed);
        }
    }
    Ok(rows)
}

type Job = dyn Fn(Engine) -> Result<OutcomeDistribution, ExperimentError>;

pub fn run(target: RunTarget, s: &Settings) -> Result<(), Failure> {
    let common = Common::resolve(s)?;
    if target == RunTarget::Pathintegral {
        return run_path_integral(s, &common);
    }
    let shots = s.optional_count("shots")?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let value_column = if shots.is_some() { "frequency" } else { "probability" };

    if target == RunTarget::Chsh {
        let (angles, signs) = chsh_inputs(s)?;
        for engine in &common.engines {
            let (report, error) = match shots {
                Some(n) => {
                    let mc = chsh_monte_carlo(angles, signs, *engine, n, common.seed).map_err(experiment_failure)?;
                    (mc.report, Some(mc.s_error))
                }
                None => (
                    chsh_with_signs(angles, signs, *engine).map_err(experiment_failure)?,
                    None,
                ),
            };
            let spread = error.map(|e| format!(" ± {e:.6}")).unwrap_or_default();
            lines.push(format!(
                "{:<8} S = {:.9}{spread}, {}",
                engine.provenance().to_string(),
                report.s,
                verdict(report.s)
            ));
            rows.extend(chsh_rows(&angles, &report.correlators, report.s, engine));
        }
        let meta = common.metadata(s, "run chsh", common.engine_names());
        return finish(&common, &meta, &rows, "value", &lines);
    }

    let (command, params, job): (&str, Vec<(&str, f64)>, Box<Job>) = match target {
        RunTarget::Mz => {
            let alpha = s.angle("alpha", 0.0)?;
            (
                "run mz",
                vec![("alpha", alpha)],
                Box::new(move |e| Experiment::MachZehnder { alpha }.run(e)),
            )
        }
        RunTarget::Wheeler => {
            let alpha = s.angle("alpha", 0.0)?;
            let peek = s.boolean("peek")?;
            (
                "run wheeler",
                vec![("alpha", alpha), ("peek", f64::from(u8::from(peek)))],
                Box::new(move |e| Experiment::Wheeler { alpha, peek }.run(e)),
            )
        }
        RunTarget::Ifm => {
            let blocked = blocked(s)?;
            ("run ifm", vec![], Box::new(move |e| Experiment::Ifm { blocked }.run(e)))
        }
        RunTarget::Bghz => {
            let alpha = s.angle("alpha", 0.0)?;
            let beta = s.angle("beta", 0.0)?;
            let arms = ArmPhases::default();
            (
                "run bghz",
                vec![("alpha", alpha), ("beta", beta)],
                Box::new(move |e| shadowpath::experiments::run_bghz_with_arm_phases(alpha, beta, arms, e)),
            )
        }
        RunTarget::Circuit => {
            let path = s
                .text("file")
                .ok_or_else(|| Failure::Config("run circuit needs --file".into()))?;
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::Config(format!("--file {path}: {e}")))?;
            let circuit = parse_circuit(&text).map_err(|e| Failure::Circuit(format!("{path}: {e}")))?;
            let source = match s.text("source") {
                Some(src) => src,
                None => match circuit.sources() {
                    [only] => only.clone(),
                    many => {
                        return Err(Failure::Config(format!(
                            "--source: circuit has {} sources ({}), pick one",
                            many.len(),
                            many.join(", ")
                        )))
                    }
                },
            };
            (
                "run circuit",
                vec![],
                Box::new(move |e| run_circuit(&circuit, &source, e)),
            )
        }
        RunTarget::Chsh | RunTarget::Pathintegral => unreachable!("handled above"),
    };
    for engine in &common.engines {
        let dist = job(*engine).map_err(experiment_failure)?;
        let engine_rows = distribution_rows(&dist, &params, shots, common.seed)?;
        lines.push(summary_line(engine, &engine_rows));
        rows.extend(engine_rows);
    }
    let meta = common.metadata(s, command, common.engine_names());
    finish(&common, &meta, &rows, value_column, &lines)
}

/// Prints the summary unless the result file itself goes to stdout.
fn finish(
    common: &Common,
    meta: &Metadata,
    rows: &[ResultRow],
    value_column: &str,
    lines: &[String],
) -> Result<(), Failure> {
    if !common.writes_to_stdout(false) {
        for line in lines {
            println!("{line}");
        }
    }
    common.emit(meta, rows, value_column, false)
}

fn grid_points(s: &Settings, from: f64, to: f64, points: u64) -> Result<Vec<f64>, Failure> {
    let from = s.angle("from", from)?;
    let to = s.angle("to", to)?;
    let n = s.count("points", points)?;
    if n == 0 {
        return Err(s.fail("points", "need at least one point"));
    }
    if from > to {
        return Err(s.fail("from", format!("start {from} is past stop {to}")));
    }
    if n == 1 {
        return Ok(vec![from]);
    }
    Ok((0..n).map(|k| from + (to - from) * k as f64 / (n - 1) as f64).collect())
}

pub fn sweep(target: SweepTarget, s: &Settings) -> Result<(), Failure> {
    let common = Common::resolve(s)?;
    let tau = std::f64::consts::TAU;
    let (command, value_column, rows) = match target {
        SweepTarget::Mz | SweepTarget::Wheeler => {
            let peek = if target == SweepTarget::Wheeler {
                Some(s.boolean("peek")?)
            } else {
                None
            };
            let points = grid_points(s, 0.0, tau, 65)?;
            let rows = collect(&points, &common.engines, |alpha, e| {
                let dist = match peek {
                    Some(peek) => Experiment::Wheeler { alpha, peek }.run(e),
                    None => Experiment::MachZehnder { alpha }.run(e),
                };
                Ok(ResultRow::from_distribution(
                    &dist.map_err(experiment_failure)?,
                    &[("alpha", alpha)],
                ))
            })?;
            (
                if peek.is_some() { "sweep wheeler" } else { "sweep mz" },
                "probability",
                rows,
            )
        }
        SweepTarget::Bghz => {
            let alpha = s.angle("alpha", 0.0)?;
            let points = grid_points(s, 0.0, tau, 65)?;
            let rows = collect(&points, &common.engines, |delta, e| {
                let beta = alpha + delta;
                let dist = shadowpath::experiments::run_bghz(alpha, beta, e).map_err(experiment_failure)?;
                Ok(ResultRow::from_distribution(
                    &dist,
                    &[("alpha", alpha), ("beta", beta), ("delta", delta)],
                ))
            })?;
            ("sweep bghz", "probability", rows)
        }
        SweepTarget::Chsh => {
            let (base, signs) = chsh_inputs(s)?;
            let free = s.choice("free", &["b", "a", "a'", "b'"])?;
            let points = grid_points(s, 0.0, tau, 65)?;
            let rows = collect(&points, &common.engines, |x, e| {
                let mut angles = base;
                match free.as_str() {
                    "a" => angles.a = x,
                    "a'" => angles.a_prime = x,
                    "b'" => angles.b_prime = x,
                    _ => angles.b = x,
                }
                let report = chsh_with_signs(angles, signs, e).map_err(experiment_failure)?;
                Ok(vec![ResultRow {
                    parameters: angle_params(&angles).iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                    outcome: "S".into(),
                    value: report.s,
                    engine: e.provenance().to_string(),
                    seed: e.seed(),
                }])
            })?;
            ("sweep chsh", "value", rows)
        }
    };
    let meta = common.metadata(s, command, common.engine_names());
    if !common.writes_to_stdout(true) {
        println!("{command}: {} rows", rows.len());
    }
    common.emit(&meta, &rows, value_column, true)
}

/// Evaluates every (point, engine) pair in parallel; rows come back in
/// point-major, engine-minor order regardless of scheduling.
fn collect(
    points: &[f64],
    engines: &[Engine],
    f: impl Fn(f64, Engine) -> Result<Vec<ResultRow>, Failure> + Sync,
) -> Result<Vec<ResultRow>, Failure> {
    let blocks: Vec<Vec<ResultRow>> = points
        .par_iter()
        .flat_map_iter(|x| engines.iter().map(move |e| (*x, *e)))
        .map(|(x, e)| f(x, e))
        .collect::<Result<_, _>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn check(s: &Settings) -> Result<(), Failure> {
    let common = Common::resolve(s)?;
    let opts = CheckOptions {
        seed: common.seed,
        shots: s.count("shots", 1_000_000)?,
        random_cases: s.count("cases", 500)? as usize,
    };
    let results = run_all(&opts);
    let failed = results.iter().filter(|r| !r.passed).count();
    let to_stdout = common.writes_to_stdout(false);
    if !to_stdout {
        for r in &results {
            println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        }
        println!("{} of {} checks passed", results.len() - failed, results.len());
    }
    let rows: Vec<ResultRow> = results
        .iter()
        .map(|r| ResultRow {
            parameters: vec![],
            outcome: r.name.to_string(),
            value: f64::from(u8::from(r.passed)),
            engine: "both".into(),
            seed: Some(common.seed),
        })
        .collect();
    let meta = common.metadata(s, "check", common.engine_names());
    common.emit(&meta, &rows, "passed", false)?;
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} check(s) failed")));
    }
    Ok(())
}

struct PathSetup {
    psi: LatticeWavefunction,
    potential: Potential,
    epsilon: f64,
    steps: usize,
    kernel: Kernel,
}

fn read_potential_table(path: &str) -> Result<Potential, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("--potential-file {path}: {e}")))?;
    let (mut x, mut v) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: Vec<f64> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Config(format!("--potential-file {path}: line {}: {e}", i + 1)))?;
        if nums.len() != 2 {
            return Err(Failure::Config(format!(
                "--potential-file {path}: line {}: expected `x V`",
                i + 1
            )));
        }
        x.push(nums[0]);
        v.push(nums[1]);
    }
    Ok(Potential::Tabulated { x, v })
}

fn path_setup(s: &Settings) -> Result<PathSetup, Failure> {
    let units = Units {
        hbar: s.number("hbar", 1.0)?,
        mass: s.number("mass", 1.0)?,
    };
    let potential = match s.choice("potential", &["free", "harmonic", "tabulated"])?.as_str() {
        "harmonic" => Potential::Harmonic {
            omega: s.number("omega", 1.0)?,
        },
        "tabulated" => {
            let path = s
                .text("potential-file")
                .ok_or_else(|| Failure::Config("--potential tabulated needs --potential-file".into()))?;
            read_potential_table(&path)?
        }
        _ => Potential::Free,
    };
    let psi = match s.text("initial") {
        Some(path) => {
            let file = File::open(&path).map_err(|e| Failure::Config(format!("--initial {path}: {e}")))?;
            read_tabulated(BufReader::new(file), units)
                .map_err(|e| Failure::Config(format!("--initial {path}: {e}")))?
        }
        None => {
            let spec = s.text_or("grid", "-32,32,1024");
            let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
            let grid = match parts.as_slice() {
                [lo, hi, n] => match (lo.parse::<f64>(), hi.parse::<f64>(), n.parse::<usize>()) {
                    (Ok(lo), Ok(hi), Ok(n)) => Grid::new(lo, hi, n).map_err(|e| s.fail("grid", e))?,
                    _ => return Err(s.fail("grid", "expected min,max,points")),
                },
                _ => return Err(s.fail("grid", "expected min,max,points")),
            };
            let x0 = s.number("x0", 0.0)?;
            let sigma = s.number("sigma", 1.0)?;
            let k0 = s.number("k0", 0.0)?;
            LatticeWavefunction::gaussian(grid, units, x0, sigma, k0).map_err(path_failure)?
        }
    };
    let epsilon = s.number("epsilon", 0.05)?;
    let time = s.number("time", 5.0)?;
    let steps = steps_for(time, epsilon).map_err(|e| s.fail("time", e))?;
    let kernel = if s.boolean("dense")? {
        Kernel::Dense
    } else {
        Kernel::default()
    };
    Ok(PathSetup {
        psi,
        potential,
        epsilon,
        steps,
        kernel,
    })
}

#[derive(Serialize)]
struct Snapshot {
    t: f64,
    x: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Snapshot {
    fn of(psi: &LatticeWavefunction) -> Self {
        Snapshot {
            t: psi.time(),
            x: psi.grid().points().collect(),
            re: psi.values().iter().map(|c| c.re).collect(),
            im: psi.values().iter().map(|c| c.im).collect(),
        }
    }
}

fn observables_line(psi: &LatticeWavefunction, drift: f64) -> String {
    format!(
        "t = {:.6}  <x> = {:.9}  width = {:.9}  velocity = {:.9}  max drift = {drift:.3e}",
        psi.time(),
        expectation_x(psi),
        width(psi),
        mean_velocity(psi)
    )
}

fn evolve(setup: &PathSetup, every: usize) -> Result<(Vec<LatticeWavefunction>, f64), Failure> {
    let p = Propagator::new(
        *setup.psi.grid(),
        setup.psi.units(),
        &setup.potential,
        setup.epsilon,
        setup.kernel,
    )
    .map_err(path_failure)?;
    let mut kept = vec![setup.psi.clone()];
    let out = p
        .run(&setup.psi, setup.steps, |k, psi| {
            if k % every == 0 || k == setup.steps {
                kept.push(psi.clone());
            }
        })
        .map_err(path_failure)?;
    Ok((kept, out.max_drift))
}

fn path_engine() -> Vec<String> {
    vec![format!("pathintegral {}", shadowpath::VERSION)]
}

fn run_path_integral(s: &Settings, common: &Common) -> Result<(), Failure> {
    let setup = path_setup(s)?;
    let (kept, drift) = evolve(&setup, setup.steps.max(1))?;
    let last = kept.last().expect("initial state is kept");
    let t = last.time();
    let rows: Vec<ResultRow> = [
        ("mean_x", expectation_x(last)),
        ("width", width(last)),
        ("mean_velocity", mean_velocity(last)),
        ("max_drift", drift),
    ]
    .into_iter()
    .map(|(outcome, value)| ResultRow {
        parameters: vec![("t".into(), t)],
        outcome: outcome.into(),
        value,
        engine: "pathintegral".into(),
        seed: None,
    })
    .collect();
    let meta = common.metadata(s, "run pathintegral", path_engine());
    finish(common, &meta, &rows, "value", &[observables_line(last, drift)])
}

pub fn propagate(s: &Settings) -> Result<(), Failure> {
    let common = Common::resolve(s)?;
    let setup = path_setup(s)?;
    let every = s.count("every", setup.steps.max(1) as u64)?;
    if every == 0 {
        return Err(s.fail("every", "must be at least 1"));
    }
    let (kept, drift) = evolve(&setup, every as usize)?;
    let meta = common.metadata(s, "propagate", path_engine());
    if !common.writes_to_stdout(true) {
        println!(
            "{}",
            observables_line(kept.last().expect("initial state is kept"), drift)
        );
    }
    let Some(mut out) = common.sink(true)? else {
        return Ok(());
    };
    if common.json {
        let snapshots: Vec<Snapshot> = kept.iter().map(Snapshot::of).collect();
        let doc = serde_json::json!({ "metadata": meta, "snapshots": snapshots });
        serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Runtime(e.to_string()))?;
        writeln!(out)?;
    } else {
        for line in metadata_lines(&meta) {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{SNAPSHOT_HEADER}")?;
        for psi in &kept {
            shadowpath::pathintegral::write_snapshot_csv(&mut out, psi)?;
        }
    }
    out.flush()?;
    Ok(())
}
