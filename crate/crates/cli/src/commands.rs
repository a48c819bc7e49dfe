use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gcore::ipag::Compiled;
use gcore::oracle::{oracle_density, simulate};
use gcore::{CoreState, DensityEvaluator, FockIndex, LadderKind, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::parse_outcome;
use crate::decompose::decompose;
use crate::error::CliError;
use crate::file::{validate_measured, CircuitFile, LoadedCircuit, MeasurementRecord};
use crate::format::{complex, sig};

pub const THREADS_ENV: &str = "GCORE_THREADS";

/// Output options shared by the evaluation commands.
#[derive(Clone, Copy, Debug)]
pub struct OutputOptions {
    pub json: bool,
    pub digits: usize,
}

/// Where the outcomes come from.
#[derive(Clone, Debug)]
pub enum Outcomes {
    Single(String),
    File(PathBuf),
}

#[derive(Serialize)]
struct EvalRecord {
    density: f64,
    kappa: f64,
    n_terms: usize,
    wall_time_ms: f64,
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

fn load(path: &Path) -> Result<LoadedCircuit, CliError> {
    CircuitFile::read(path)?.load(&path.display().to_string())
}

fn compile(loaded: &LoadedCircuit) -> Result<Compiled, CliError> {
    loaded.circuit.compile().map_err(CliError::core("compiling the circuit"))
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("{THREADS_ENV}: expected a non-negative integer, found '{v}'"))),
    }
}

fn read_outcomes(outcomes: &Outcomes) -> Result<Vec<Vec<C64>>, CliError> {
    match outcomes {
        Outcomes::Single(text) => Ok(vec![parse_outcome(text, "outcome")?]),
        Outcomes::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            text.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .map(|(k, l)| parse_outcome(l.trim(), &format!("{}: line {}", path.display(), k + 1)))
                .collect()
        }
    }
}

/// Densities of the measured modes at each outcome, in input order.
pub fn evaluate(
    circuit_path: &Path,
    measured_override: Option<&[usize]>,
    outcomes: &Outcomes,
    opts: OutputOptions,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let start = Instant::now();
    let loaded = load(circuit_path)?;
    let measured = match measured_override {
        Some(modes) => validate_measured(modes, loaded.circuit.modes()).map_err(CliError::Validation)?,
        None => loaded.measured_modes.clone(),
    };
    let alphas = read_outcomes(outcomes)?;
    for (k, a) in alphas.iter().enumerate() {
        if a.len() != measured.len() {
            return Err(CliError::Validation(format!(
                "outcome {}: {} value(s) given but {} mode(s) are measured",
                k + 1,
                a.len(),
                measured.len()
            )));
        }
    }
    let compiled = compile(&loaded)?;
    let evaluator =
        DensityEvaluator::new(&compiled.unitary, &compiled.core, &measured).map_err(CliError::core("preparing the evaluation"))?;
    let setup_ms = start.elapsed().as_secs_f64() * 1e3;
    let run = |alpha: &Vec<C64>| {
        let t = Instant::now();
        evaluator.evaluate(alpha).map(|r| EvalRecord {
            density: r.density,
            kappa: r.kappa,
            n_terms: r.n_terms,
            wall_time_ms: t.elapsed().as_secs_f64() * 1e3,
        })
    };
    let results: Vec<_> = if alphas.len() == 1 {
        vec![run(&alphas[0]).map(|mut r| {
            r.wall_time_ms += setup_ms;
            r
        })]
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count()?)
            .build()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
        pool.install(|| alphas.par_iter().map(run).collect())
    };
    for (k, r) in results.into_iter().enumerate() {
        let r = r.map_err(CliError::core(format!("outcome {}", k + 1)))?;
        let line = if opts.json {
            serde_json::to_string(&r).expect("records serialize")
        } else {
            sig(r.density, opts.digits)
        };
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

fn event_counts(loaded: &LoadedCircuit) -> (usize, usize) {
    let events = loaded.circuit.to_interleaved().map(|c| c.events().to_vec()).unwrap_or_default();
    let adds = events.iter().filter(|e| e.kind == LadderKind::Addition).count();
    (adds, events.len() - adds)
}

fn write_core(out: &mut dyn Write, core: &CoreState, digits: usize) -> Result<(), CliError> {
    for (p, a) in core.terms() {
        let occ: Vec<String> = p.occupations().iter().map(u32::to_string).collect();
        writeln!(out, "  |{}>  {}", occ.join(","), complex(*a, digits)).map_err(io_err)?;
    }
    Ok(())
}

fn write_matrix(out: &mut dyn Write, name: &str, m: &gcore::CMatrix, digits: usize) -> Result<(), CliError> {
    writeln!(out, "  {name}:").map_err(io_err)?;
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| complex(z, digits)).collect();
        writeln!(out, "    [{}]", row.join(", ")).map_err(io_err)?;
    }
    Ok(())
}

/// Canonical form `Ĝ|C⟩`; optionally written back as a circuit file.
pub fn compile_cmd(circuit_path: &Path, emit: Option<&Path>, digits: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let file = CircuitFile::read(circuit_path)?;
    let loaded = file.load(&circuit_path.display().to_string())?;
    let compiled = compile(&loaded)?;
    let (adds, subs) = event_counts(&loaded);
    let g = &compiled.unitary;
    writeln!(out, "modes: {}", g.modes()).map_err(io_err)?;
    writeln!(out, "events: {adds} addition(s), {subs} subtraction(s)").map_err(io_err)?;
    writeln!(out, "discarded norm: {}", sig(compiled.norm, digits)).map_err(io_err)?;
    writeln!(out, "core state (degree {}, support {}):", compiled.core.degree(), compiled.core.support_size()).map_err(io_err)?;
    write_core(out, &compiled.core, digits)?;
    writeln!(out, "gaussian unitary:").map_err(io_err)?;
    write_matrix(out, "A", &g.a_block(), digits)?;
    write_matrix(out, "B", &g.b_block(), digits)?;
    let d: Vec<String> = g.displacement().iter().map(|&z| complex(z, digits)).collect();
    writeln!(out, "  d: [{}]", d.join(", ")).map_err(io_err)?;
    if let Some(path) = emit {
        let gates = decompose(g)?;
        let measurement = file.measurement.clone().or_else(|| {
            (loaded.measured_modes.len() != g.modes()).then(|| MeasurementRecord { measured_modes: loaded.measured_modes.clone() })
        });
        let emitted = CircuitFile::from_parts(&compiled.core, &gates, measurement);
        std::fs::write(path, emitted.to_json() + "\n")
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        writeln!(out, "wrote {} ({} gates)", path.display(), gates.len()).map_err(io_err)?;
    }
    Ok(())
}

/// Structural metadata of the circuit and of its output state.
pub fn info(circuit_path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(circuit_path)?;
    let (adds, subs) = event_counts(&loaded);
    let input = loaded.circuit.input();
    let gates = loaded.circuit.ops().len() - adds - subs;
    let measured: Vec<String> = loaded.measured_modes.iter().map(usize::to_string).collect();
    writeln!(out, "modes: {}", loaded.circuit.modes()).map_err(io_err)?;
    writeln!(out, "gates: {gates}").map_err(io_err)?;
    writeln!(out, "additions: {adds}").map_err(io_err)?;
    writeln!(out, "subtractions: {subs}").map_err(io_err)?;
    writeln!(out, "measured modes: {}", measured.join(",")).map_err(io_err)?;
    writeln!(out, "input degree: {}", input.degree()).map_err(io_err)?;
    writeln!(out, "input support: {}", input.support_size()).map_err(io_err)?;
    let compiled = compile(&loaded)?;
    writeln!(out, "degree: {}", compiled.core.degree()).map_err(io_err)?;
    writeln!(out, "support: {}", compiled.core.support_size()).map_err(io_err)?;
    Ok(())
}

/// Default check points: the origin and eight points of modulus 0.8.
fn default_check_outcomes(m: usize) -> Vec<Vec<C64>> {
    (0..9)
        .map(|k| {
            (0..m)
                .map(|j| {
                    if k == 0 {
                        C64::new(0.0, 0.0)
                    } else {
                        C64::from_polar(0.8, core::f64::consts::TAU * k as f64 / 8.0 + 0.7 * j as f64)
                    }
                })
                .collect()
        })
        .collect()
}

/// Full-mode densities against the truncated-Fock oracle.
pub fn check(
    circuit_path: &Path,
    cutoff: usize,
    tol: f64,
    outcome: Option<&str>,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Validation(format!("--tol must be positive, found {tol}")));
    }
    let loaded = load(circuit_path)?;
    let m = loaded.circuit.modes();
    let alphas = match outcome {
        Some(text) => vec![parse_outcome(text, "outcome")?],
        None => default_check_outcomes(m),
    };
    if let Some(a) = alphas.iter().find(|a| a.len() != m) {
        return Err(CliError::Validation(format!("outcome: {} value(s) given but the check measures all {m} modes", a.len())));
    }
    let state = simulate(&loaded.circuit, cutoff).map_err(CliError::core("oracle simulation"))?;
    let compiled = compile(&loaded)?;
    let evaluator = DensityEvaluator::full(&compiled.unitary, &compiled.core).map_err(CliError::core("preparing the evaluation"))?;
    writeln!(out, "cutoff: {cutoff}").map_err(io_err)?;
    writeln!(out, "oracle leakage: {:.3e}", state.leakage()).map_err(io_err)?;
    let mut worst = 0.0f64;
    for (k, alpha) in alphas.iter().enumerate() {
        let exact = evaluator.density(alpha).map_err(CliError::core(format!("outcome {}", k + 1)))?;
        let oracle = oracle_density(&state, alpha).map_err(CliError::core(format!("oracle at outcome {}", k + 1)))?;
        let dev = (exact - oracle.density).abs();
        worst = worst.max(dev);
        let a: Vec<String> = alpha.iter().map(|&z| complex(z, 6)).collect();
        writeln!(out, "  [{}]  exact {}  oracle {}  |delta| {dev:.3e}", a.join(","), sig(exact, digits), sig(oracle.density, digits))
            .map_err(io_err)?;
    }
    let verdict = if worst <= tol { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}: max |delta| {worst:.3e} (tolerance {tol:e})").map_err(io_err)?;
    if worst <= tol {
        Ok(())
    } else {
        Err(CliError::OracleMismatch(format!(
            "oracle mismatch: max |delta| {worst:.3e} exceeds {tol:e} (oracle leakage {:.1e}; a larger --cutoff may help)",
            state.leakage()
        )))
    }
}

/// Benchmark configuration.
#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub degrees: std::ops::RangeInclusive<u32>,
    pub modes: usize,
    pub support: usize,
    pub reps: usize,
    pub seed: u64,
    pub json: bool,
}

#[derive(Serialize)]
struct BenchRow {
    n: u32,
    support: usize,
    n_terms: usize,
    median_ms: f64,
    ratio: Option<f64>,
}

/// Random core state of exactly degree `n` with `s` distinct terms.
fn bench_core(rng: &mut ChaCha8Rng, m: usize, n: u32, s: usize) -> Result<CoreState, CliError> {
    if s == 1 {
        let occ: Vec<u32> = (0..m).map(|k| n / m as u32 + u32::from((k as u32) < n % m as u32)).collect();
        return CoreState::fock(FockIndex::new(occ)).map_err(CliError::core("bench input"));
    }
    let mut terms: Vec<(FockIndex, C64)> = Vec::new();
    for _ in 0..1000 * s {
        if terms.len() == s {
            break;
        }
        let mut occ = vec![0u32; m];
        for _ in 0..n {
            occ[rng.random_range(0..m)] += 1;
        }
        let idx = FockIndex::new(occ);
        if terms.iter().all(|(p, _)| *p != idx) {
            terms.push((idx, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
        }
    }
    if terms.len() < s {
        return Err(CliError::Validation(format!("bench: fewer than {s} distinct degree-{n} terms on {m} modes")));
    }
    CoreState::new(terms, true).map_err(CliError::core("bench input"))
}

/// Median wall time of a density evaluation per degree.
pub fn bench(opts: &BenchOptions, out: &mut dyn Write) -> Result<(), CliError> {
    if opts.modes == 0 || opts.reps == 0 || opts.support == 0 {
        return Err(CliError::Validation("bench: --modes, --reps and --support must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let m = opts.modes;
    let unitary = gcore::ipag::random_layer(&mut rng, m, 2 * m).map_err(CliError::core("bench unitary"))?;
    let alpha: Vec<C64> = (0..m).map(|_| C64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..6.3))).collect();
    let mut rows: Vec<BenchRow> = Vec::new();
    if !opts.json {
        writeln!(out, "{:>4} {:>4} {:>8} {:>12} {:>7}", "n", "s", "n_terms", "median_ms", "ratio").map_err(io_err)?;
    }
    for n in opts.degrees.clone() {
        let core = bench_core(&mut rng, m, n, opts.support)?;
        let mut times = Vec::with_capacity(opts.reps);
        let mut n_terms = 0;
        for _ in 0..opts.reps {
            let t = Instant::now();
            let report = DensityEvaluator::full(&unitary, &core)
                .and_then(|e| e.evaluate(&alpha))
                .map_err(CliError::core(format!("bench n={n}")))?;
            times.push(t.elapsed().as_secs_f64() * 1e3);
            n_terms = report.n_terms;
        }
        times.sort_by(f64::total_cmp);
        let median_ms = times[times.len() / 2];
        let ratio = rows.last().map(|r| median_ms / r.median_ms);
        let row = BenchRow { n, support: opts.support, n_terms, median_ms, ratio };
        if opts.json {
            writeln!(out, "{}", serde_json::to_string(&row).expect("rows serialize")).map_err(io_err)?;
        } else {
            let ratio = ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
            writeln!(out, "{n:>4} {:>4} {n_terms:>8} {median_ms:>12.4} {ratio:>7}", opts.support).map_err(io_err)?;
        }
        rows.push(row);
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    if !opts.json && !ratios.is_empty() {
        let mean = ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64;
        writeln!(out, "mean step ratio: {:.2}", mean.exp()).map_err(io_err)?;
    }
    Ok(())
}
